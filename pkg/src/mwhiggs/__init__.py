"""Exact Milnor-Wood constants and pointwise Toledo identities for su(p,q) and sp(2n,R)."""

from .admissible import (AdmissibleRep, check_admissible, compute_c_sigma, embed_sp_in_su,
                         embedding_data, standard_rep, standard_rep_su)
from .field import FieldScalar, MatrixF, RationalInterval, pi_enclosure
from .lie import (Family, build_algebra, cartan_decompose, central_element, hermitian_structure,
                  killing_form, metrics, real_rank)
from .report import build_report, degree_bound, mw_gate, toledo_from_degree

__all__ = [
    "AdmissibleRep", "Family", "FieldScalar", "MatrixF", "RationalInterval",
    "build_algebra", "build_report", "cartan_decompose", "central_element", "check_admissible",
    "compute_c_sigma", "degree_bound", "embed_sp_in_su", "embedding_data", "hermitian_structure",
    "killing_form", "metrics", "mw_gate", "pi_enclosure", "real_rank", "standard_rep",
    "standard_rep_su", "toledo_from_degree",
]


def schema_path():
    from importlib.resources import files

    return files(__package__) / "schema" / "report.schema.json"
