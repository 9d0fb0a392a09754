from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest

from mwhiggs import admissible, lie

# pi to 50 decimal places, entered by hand as an independent oracle
PI_50 = Fraction("3.14159265358979323846264338327950288419716939937510")
PI_50_ERR = Fraction(1, 10**50)


@lru_cache(maxsize=None)
def algebra(family: str, *params: int) -> lie.RealLieAlgebra:
    return lie.build_algebra(family, params)


@lru_cache(maxsize=None)
def hermitian(family: str, *params: int) -> lie.HermitianStructure:
    return lie.hermitian_structure(algebra(family, *params))


@lru_cache(maxsize=None)
def rep_for(family: str, *params: int) -> admissible.AdmissibleRep:
    h = hermitian(family, *params)
    rep = admissible.standard_rep(h)
    admissible.check_admissible(rep, h)
    admissible.compute_c_sigma(h, rep)
    return rep


SU_SMALL = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3)]
SP_SMALL = [1, 2, 3]


@pytest.fixture
def su11():
    return hermitian("su", 1, 1)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
