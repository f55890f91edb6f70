"""Bar/cobar duality for filtered A-infinity algebras and Maurer-Cartan algebras."""

from .ainf import AInfStructure, Generator, StructureError, verify_ainf
from .barcobar import DualSeries, alphabet, dual_diff, parse_series
from .kernels import BACKEND
from .koszul import PairData, kappa, madic_quotient, verify_kappa_hom
from .mcalg import exp_substitute, mc_relations, normal_form
from .scalar import DEFAULT_CUTOFF, EnergyCutoff, Novikov

__version__ = "0.1.0"

__all__ = [
    "AInfStructure", "Generator", "StructureError", "verify_ainf",
    "DualSeries", "alphabet", "dual_diff", "parse_series", "BACKEND",
    "PairData", "kappa", "madic_quotient", "verify_kappa_hom",
    "exp_substitute", "mc_relations", "normal_form",
    "DEFAULT_CUTOFF", "EnergyCutoff", "Novikov",
]
