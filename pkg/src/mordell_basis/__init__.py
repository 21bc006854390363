"""Certified canonical heights and basis certificates on Mordell curves y^2 = x^3 + n."""

__version__ = "0.1.0"

from .curve import INFINITY, MordellCurve, RationalPoint, WeierstrassModel, normalize
from .errors import MordellBasisError
from .intervals import HeightInterval
from .nonarch import ExactLogCombination, hf
from .lattice import canonical_height, pairing, regulator, siksek_bound, uniform_lower_bound
from .family import FamilyCurve, construct_points, enumerate_family, is_family_member
from .certify import BasisCertificate, certify_pair, certify_rank3, validate_certificate

__all__ = [
    "__version__", "INFINITY", "MordellCurve", "RationalPoint", "WeierstrassModel", "normalize",
    "MordellBasisError", "HeightInterval", "ExactLogCombination", "hf",
    "canonical_height", "pairing", "regulator", "siksek_bound", "uniform_lower_bound",
    "FamilyCurve", "construct_points", "enumerate_family", "is_family_member",
    "BasisCertificate", "certify_pair", "certify_rank3", "validate_certificate",
]
