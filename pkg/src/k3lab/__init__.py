"""Elliptic K3 surfaces in Weierstrass form: fibre classification, rational
curves in ``|S + gE|`` and numerical paths between them."""

from .curves import CurveConfig, enumerate_rational_members, quartic_severi_numbers, severi_numbers, yau_zaslow
from .errors import K3LabError, K3LabInputError, NumericFailure
from .families import FamilyParams, cuspidal_family, nodal_family, roots_of_unity
from .forms import INF, BinaryForm, ProjPoint, roots_with_multiplicity, vanishing_order
from .kodaira import KodairaType, classify_fibre, fibre_report
from .modulipath import connect_to_canonical, node_transfer_path, permutation_path, track_beta, verify_path
from .weierstrass import WeierstrassData, discriminant, smoothness_probe

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BinaryForm",
    "CurveConfig",
    "FamilyParams",
    "K3LabError",
    "K3LabInputError",
    "KodairaType",
    "NumericFailure",
    "ProjPoint",
    "WeierstrassData",
    "classify_fibre",
    "connect_to_canonical",
    "cuspidal_family",
    "discriminant",
    "enumerate_rational_members",
    "fibre_report",
    "nodal_family",
    "node_transfer_path",
    "permutation_path",
    "quartic_severi_numbers",
    "roots_of_unity",
    "roots_with_multiplicity",
    "severi_numbers",
    "smoothness_probe",
    "track_beta",
    "vanishing_order",
    "verify_path",
    "yau_zaslow",
]
