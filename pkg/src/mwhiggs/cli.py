"""Command-line front end: ``mwhiggs {report,verify,check-embedding,scan-degrees}``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import admissible, lie, report, verify
from .field import ONE

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAULTS = ("sign-of-I", "drop-sqrt2")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


@dataclass
class CliConfig:
    subcommand: str
    group: str
    p: Optional[int] = None
    q: Optional[int] = None
    n: Optional[int] = None
    vol: str = "1"
    seed: int = 0
    trials: int = 8
    format: str = "json"
    pi_bits: Optional[int] = None
    output: Optional[str] = None
    inject_fault: Optional[str] = None

    @property
    def params(self) -> tuple[int, ...]:
        return (self.p, self.q) if self.group == "su" else (self.n,)

    @property
    def volume(self) -> Fraction:
        return parse_rational(self.vol)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> CliConfig:
        return cls(**d)


def parse_rational(s: str) -> Fraction:
    if not _RATIONAL.match(s.strip()):
        raise ValueError(f"volume must be an exact rational like 628/100, got {s!r}")
    return Fraction(s.strip())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mwhiggs", description="Exact Milnor-Wood constants for su(p,q) and sp(2n,R).")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(sp: argparse.ArgumentParser, vol: bool = True, trials: bool = False) -> None:
        sp.add_argument("--group", choices=["su", "sp"], required=True)
        sp.add_argument("--p", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--n", type=int)
        if vol:
            sp.add_argument("--vol", default="1", help="volume of M as an exact rational, e.g. 628/100")
        sp.add_argument("--seed", type=int, default=0)
        if trials:
            sp.add_argument("--trials", type=int, default=8)
        sp.add_argument("--format", choices=["json", "csv", "table"], default="json")
        sp.add_argument("--pi-bits", type=int, default=None, help="initial pi precision (env MW_PI_BITS)")
        sp.add_argument("--output", "-o", default=None)
        dbg = sp.add_argument_group("debug", "test hooks for negative controls")
        dbg.add_argument("--inject-fault", choices=FAULTS, default=None)

    common(sub.add_parser("report", help="Milnor-Wood report for one group"), trials=True)
    common(sub.add_parser("verify", help="identity and invariant campaign"), vol=False, trials=True)
    common(sub.add_parser("check-embedding", help="checks of the sp(2n,R) -> su(n,n) embedding"), vol=False)
    common(sub.add_parser("scan-degrees", help="Toledo values and gate status per degree"))
    return ap


def config_from_args(ap: argparse.ArgumentParser, argv: Optional[list[str]]) -> CliConfig:
    ns = ap.parse_args(argv)
    cfg = CliConfig(
        subcommand=ns.subcommand, group=ns.group, p=ns.p, q=ns.q, n=ns.n,
        vol=getattr(ns, "vol", "1"), seed=ns.seed, trials=getattr(ns, "trials", 8),
        format=ns.format, pi_bits=ns.pi_bits, output=ns.output, inject_fault=ns.inject_fault,
    )
    if cfg.group == "su":
        if cfg.p is None or cfg.q is None or cfg.p < 1 or cfg.q < 1:
            ap.error("su needs --p >= 1 and --q >= 1")
    else:
        if cfg.n is None or cfg.n < 1:
            ap.error("sp needs --n >= 1")
    if cfg.subcommand == "check-embedding" and cfg.group != "sp":
        ap.error("check-embedding needs --group sp")
    if cfg.trials < 1:
        ap.error("--trials must be >= 1")
    if cfg.pi_bits is not None and cfg.pi_bits < 8:
        ap.error("--pi-bits must be >= 8")
    try:
        if cfg.volume <= 0:
            ap.error("--vol must be positive")
    except ValueError as e:
        ap.error(str(e))
    return cfg


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _fail(err: dict) -> int:
    sys.stderr.write(_dump(err))
    return EXIT_FAIL


def cmd_report(cfg: CliConfig) -> int:
    try:
        rep = report.build_report(cfg.group, cfg.params, cfg.volume, cfg.seed, cfg.trials, cfg.pi_bits,
                                  inject_fault=cfg.inject_fault)
    except report.ReportError as e:
        return _fail(e.to_json())
    if cfg.format == "json":
        _emit(cfg, _dump(rep.to_json()))
    elif cfg.format == "csv":
        _emit(cfg, report.table_csv(rep.toledo_table))
    else:
        iv = rep.bound_interval
        lines = [
            f"group         {rep.group['name']}",
            f"dim           {rep.algebra_dim}",
            f"rank          {rep.rank}",
            f"p_X           {rep.p_X}",
            f"c_sigma       {rep.c_sigma}",
            f"vol           {rep.vol}",
            f"bound         in [{float(iv.lo):.12g}, {float(iv.hi):.12g}]",
            f"max_degree    {rep.max_degree}",
            f"admissible    {rep.certificates['admissibility']['admissible']}",
            f"identities    {rep.certificates['identity_suite']['passed']}/{rep.certificates['identity_suite']['trials']}",
        ]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(cfg: CliConfig) -> int:
    try:
        checks, ctx = verify.invariant_suite(cfg.group, cfg.params, cfg.inject_fault)
    except Exception as e:  # construction failures are computation errors, not usage errors
        return _fail({"error": {"stage": "construction", "message": f"{type(e).__name__}: {e}"}})
    trial_reports = []
    if ctx["c_sigma"] is not None:
        trial_reports = report.identity_campaign(ctx["rep"], ctx["c_sigma"], cfg.trials, cfg.seed)
    ok = all(c.ok for c in checks) and all(r.ok for r in trial_reports)
    if cfg.format == "json":
        out = {
            "schema": report.SCHEMA_VERSION,
            "group": report.group_descriptor(ctx["algebra"]),
            "seed": cfg.seed,
            "trials": cfg.trials,
            "ok": ok,
            "invariants": [c.to_json() for c in checks],
            "identity_reports": [r.to_json() for r in trial_reports],
        }
        _emit(cfg, _dump(out))
    else:
        sep = "," if cfg.format == "csv" else "  "
        lines = [sep.join(["status", "check"])]
        lines += [sep.join(["PASS" if c.ok else "FAIL", c.name]) for c in checks]
        for t, r in enumerate(trial_reports):
            lines.append(sep.join(["PASS" if r.ok else "FAIL", f"trial {t} {r.mode} dims={r.dims[0]}x{r.dims[1]}"]))
        _emit(cfg, "\n".join(lines) + "\n")
    if not ok:
        first = next((c.to_json() for c in checks if not c.ok), None)
        if first is None:
            first = next(r.to_json() for r in trial_reports if not r.ok)
        if ctx["certificate"] is not None and not ctx["certificate"].admissible:
            first = {"check": first, "certificate": ctx["certificate"].to_json()}
        return _fail({"error": {"stage": "verify", "first_failure": first}})
    return EXIT_OK


def cmd_check_embedding(cfg: CliConfig) -> int:
    g = lie.build_algebra("sp", cfg.params)
    scale = ONE if cfg.inject_fault == "drop-sqrt2" else admissible.INV_SQRT2
    res = admissible.check_embedding(g, admissible.embedding_data(cfg.n, scale))
    if cfg.format == "json":
        _emit(cfg, _dump(res.to_json()))
    else:
        sep = "," if cfg.format == "csv" else "  "
        rows = [("S_involution", res.involution), ("T_unitary", res.unitary), ("block_display", res.block_display),
                ("su_nn_membership", res.su_nn_membership), ("trace_compatible", res.trace_compatible)]
        _emit(cfg, "\n".join(sep.join(["PASS" if ok else "FAIL", name]) for name, ok in rows) + "\n")
    if not res.ok:
        sys.stderr.write(f"first failure: {res.first_failure}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_scan_degrees(cfg: CliConfig) -> int:
    try:
        rep = report.build_report(cfg.group, cfg.params, cfg.volume, cfg.seed, 1, cfg.pi_bits,
                                  inject_fault=cfg.inject_fault)
    except report.ReportError as e:
        return _fail(e.to_json())
    if cfg.format == "json":
        _emit(cfg, _dump({"schema": report.SCHEMA_VERSION, "group": rep.group, "max_degree": rep.max_degree,
                          "c_sigma": report._qtext(rep.c_sigma), "vol": report._qtext(rep.vol),
                          "rows": rep.toledo_table}))
    elif cfg.format == "csv":
        _emit(cfg, report.table_csv(rep.toledo_table))
    else:
        lines = [f"{'degV':>6} {'toledo/2pi':>14} gate"]
        for r in rep.toledo_table:
            tag = " (margin)" if r["margin"] else ""
            lines.append(f"{r['degV']:>6} {r['toledo_coeff']:>14} {r['gate']}{tag}")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "report": cmd_report,
    "verify": cmd_verify,
    "check-embedding": cmd_check_embedding,
    "scan-degrees": cmd_scan_degrees,
}


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    cfg = config_from_args(ap, argv)
    return COMMANDS[cfg.subcommand](cfg)


if __name__ == "__main__":
    raise SystemExit(main())
