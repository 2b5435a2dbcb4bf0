"""Exception hierarchy.

Input problems derive from :class:`K3LabInputError` (also a ``ValueError``);
numerical breakdowns derive from :class:`NumericFailure`.  Every exception
carries the name of the operation that raised it so the command-line front
end can report it.
"""

from __future__ import annotations


class K3LabError(Exception):
    operation = "k3lab"

    def __init__(self, message: str = "", operation: str | None = None):
        super().__init__(message)
        if operation is not None:
            self.operation = operation


class K3LabInputError(K3LabError, ValueError):
    """Invalid input data."""


class NumericFailure(K3LabError, ArithmeticError):
    """A numerical procedure could not deliver a trustworthy answer."""


class ZeroForm(K3LabInputError):
    operation = "forms.roots_with_multiplicity"


class NoConvergence(NumericFailure):
    operation = "forms.roots_with_multiplicity"


class ZeroDiscriminant(K3LabInputError):
    operation = "weierstrass.discriminant"


class NotSingularFibre(K3LabInputError):
    operation = "weierstrass.smoothness_probe"


class NonMinimal(K3LabInputError):
    operation = "kodaira.classify_fibre"


class InconsistentOrders(NumericFailure):
    operation = "kodaira.classify_fibre"


class DuplicatePoints(K3LabInputError):
    operation = "families"


class ZeroK(K3LabInputError):
    operation = "families.nodal_family"


class InvalidGenus(K3LabInputError):
    operation = "curves.severi_numbers"


class BadDegree(K3LabInputError):
    operation = "curves.quartic_severi_numbers"


class BranchAmbiguity(NumericFailure):
    operation = "modulipath.track_beta"


class DegenerateK(K3LabInputError):
    operation = "modulipath.track_beta"


class Collision(NumericFailure):
    operation = "modulipath.permutation_path"
