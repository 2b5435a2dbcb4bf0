"""The two explicit families of elliptic K3 surfaces over twelve points.

For pairwise distinct ``a_1..a_12`` let ``alpha = prod(x0 - a_i x1)``.

* cuspidal: ``A = 0``, ``B = alpha``; twelve type II fibres over the ``a_i``.
* nodal: ``A = cbrt(K^2) * delta * x1^8`` with ``delta = -cbrt(27/4)`` and
  ``B = alpha + K x1^12``.  Since ``4A^3 = -27 K^2 x1^24`` the discriminant is
  ``-432 alpha (alpha + 2K x1^12)``: nodal fibres over the ``a_i`` and over
  the solutions of ``p(t) = -2K`` where ``p(t) = prod(t - a_i)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import integer_nthroot
from sympy.polys.domains import QQ_I

from .errors import DuplicatePoints, ZeroK
from .forms import BinaryForm, exact_to_fractions, is_exact_scalar, roots_with_multiplicity, to_complex, to_exact
from .weierstrass import WeierstrassData

__all__ = [
    "FamilyParams",
    "FamilyValidation",
    "cube_root_K2",
    "cuspidal_family",
    "nodal_family",
    "roots_of_unity",
    "unit_root",
    "validate_family",
]

N_POINTS = 12
DISTINCT_TOL = 1e-8


def unit_root(n: int):
    """``exp(pi i n / 6)``; exact at the four axis points, floating otherwise."""
    n %= 12
    exact = {0: QQ_I(1), 3: QQ_I(0, 1), 6: QQ_I(-1), 9: QQ_I(0, -1)}
    if n in exact:
        return exact[n]
    return cmath.exp(1j * math.pi * n / 6)


def roots_of_unity() -> tuple:
    """The twelfth roots of unity ordered as ``alpha_1..alpha_12``."""
    return tuple(unit_root(n) for n in range(1, N_POINTS + 1))


def _exact_cbrt(q: Fraction) -> Fraction | None:
    sign = -1 if q < 0 else 1
    num, ok1 = integer_nthroot(abs(q.numerator), 3)
    den, ok2 = integer_nthroot(q.denominator, 3)
    return Fraction(sign * num, den) if ok1 and ok2 else None


def cube_root_K2(K):
    """The cube root of ``K^2`` with modulus ``r^(2/3)`` and argument ``2 theta / 3``,
    where ``K = r e^(i theta)`` with ``0 <= theta < 2 pi``."""
    if is_exact_scalar(K):
        re, im = exact_to_fractions(to_exact(K))
        if im == 0:
            c = _exact_cbrt(re * re)
            # theta = pi for negative K gives argument 2 pi / 3, never real
            if c is not None and re > 0:
                return QQ_I(c.numerator, 0) / c.denominator
    k = to_complex(K)
    r, theta = abs(k), cmath.phase(k) % (2 * math.pi)
    return r ** (2.0 / 3.0) * cmath.exp(2j * theta / 3)


def _a_coefficient(K):
    """``cbrt(K^2) * delta`` with ``delta = -cbrt(27/4)``, exact when possible."""
    if is_exact_scalar(K):
        re, im = exact_to_fractions(to_exact(K))
        if im == 0 and re > 0:
            c = _exact_cbrt(Fraction(27, 4) * re * re)
            if c is not None:
                return QQ_I(-c.numerator, 0) / c.denominator
    return cube_root_K2(K) * -(27 / 4) ** (1 / 3)


@dataclass(frozen=True)
class FamilyParams:
    """Twelve pairwise distinct points and the parameter ``K``.

    ``K = 0`` denotes the cuspidal member.  ``cbrt_K2`` records the cube-root
    branch used for ``A``.
    """

    a: tuple
    K: complex = 0
    cbrt_K2: complex = field(init=False, default=0)

    def __post_init__(self):
        a = tuple(self.a)
        if len(a) != N_POINTS:
            raise DuplicatePoints(f"need {N_POINTS} points, got {len(a)}", operation="families.FamilyParams")
        _check_distinct(a)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "cbrt_K2", cube_root_K2(self.K) if self.K else 0)

    @property
    def is_cuspidal(self) -> bool:
        return not self.K

    def weierstrass(self) -> WeierstrassData:
        return cuspidal_family(self.a) if self.is_cuspidal else nodal_family(self.a, self.K)


def min_separation(points) -> float:
    z = np.array([to_complex(p) for p in points])
    if len(z) < 2:
        return math.inf
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices(len(z))] = np.inf
    return float(d.min())


def _check_distinct(a) -> None:
    if all(is_exact_scalar(x) for x in a):
        exact = [to_exact(x) for x in a]
        if len(set(exact)) < len(exact):
            raise DuplicatePoints("the points a_i must be pairwise distinct")
        return
    scale = max(abs(to_complex(x)) for x in a) or 1.0
    if min_separation(a) <= DISTINCT_TOL * scale:
        raise DuplicatePoints(
            f"points a_i closer than {DISTINCT_TOL:g} x max modulus ({min_separation(a):.3g})"
        )


def _alpha(a) -> BinaryForm:
    return BinaryForm.from_roots(a)


def cuspidal_family(a) -> WeierstrassData:
    """``A = 0``, ``B = prod(x0 - a_i x1)``."""
    a = tuple(a)
    _check_distinct(a)
    B = _alpha(a)
    return WeierstrassData(BinaryForm.zero(8, exact=B.exact), B)


def nodal_family(a, K) -> WeierstrassData:
    a = tuple(a)
    _check_distinct(a)
    if not K:
        raise ZeroK("K must be nonzero for the nodal family")
    alpha = _alpha(a)
    A = BinaryForm.monomial(8, 8, _a_coefficient(K))
    B = alpha + BinaryForm.monomial(12, 12, K if alpha.exact else to_complex(K))
    return WeierstrassData(A, B)


@dataclass(frozen=True)
class FamilyValidation:
    """``pattern`` is ``"nodal24"`` (24 distinct discriminant roots),
    ``"cuspidal12"`` (A = 0 and 12 double roots) or ``"collision"``."""

    pattern: str
    multiplicities: tuple
    min_separation: float

    @property
    def smooth(self) -> bool:
        return self.pattern in ("nodal24", "cuspidal12")


def validate_family(W: WeierstrassData, tol: float = 1e-8) -> FamilyValidation:
    roots = roots_with_multiplicity(W.delta.to_inexact(), tol)
    mults = tuple(m for _, m in roots)
    pts = [p for p, _ in roots]
    if any(m > 1 for m in mults):
        sep = 0.0
    else:
        sep = min((p.distance(q) for i, p in enumerate(pts) for q in pts[i + 1 :]), default=math.inf)
    if mults == (1,) * 24:
        pattern = "nodal24"
    elif W.A.is_zero and mults == (2,) * 12:
        pattern = "cuspidal12"
        sep = min((p.distance(q) for i, p in enumerate(pts) for q in pts[i + 1 :]), default=math.inf)
    else:
        pattern = "collision"
    return FamilyValidation(pattern, mults, sep)
