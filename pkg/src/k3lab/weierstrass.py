"""Weierstrass data ``y^2 z = x^3 + A x z^2 + B z^3`` over the projective line.

``A`` and ``B`` are binary forms of degrees 8 and 12, so the fibration is an
elliptic K3 surface when the discriminant ``-16(4A^3 + 27B^2)`` is not
identically zero and the data is minimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import mpmath
import numpy as np
import sympy as sp

from .errors import K3LabInputError, NotSingularFibre, ZeroDiscriminant
from .forms import (
    INF,
    BinaryForm,
    ProjPoint,
    backward_error,
    deflate,
    exact_gcd,
    exact_quo,
    exact_squarefree,
    exact_to_fractions,
    form_from_desc,
    roots_with_multiplicity,
    simple_roots,
    to_complex,
)

__all__ = [
    "ChartEquation",
    "LocalOrders",
    "WeierstrassData",
    "chart_equations",
    "check_minimal",
    "discriminant",
    "local_orders",
    "smoothness_probe",
]

DEG_A, DEG_B, DEG_DELTA = 8, 12, 24


def _delta(A: BinaryForm, B: BinaryForm) -> BinaryForm:
    return -16 * (4 * A**3 + 27 * B**2)


@dataclass(frozen=True)
class WeierstrassData:
    """The pair ``(A, B)``; rejects data with vanishing discriminant.

    Mixed input (one form exact, the other floating) is stored as floating.
    """

    A: BinaryForm
    B: BinaryForm

    def __post_init__(self):
        A, B = self.A, self.B
        if A.degree != DEG_A or B.degree != DEG_B:
            raise K3LabInputError(
                f"need deg A = {DEG_A} and deg B = {DEG_B}, got {A.degree} and {B.degree}",
                operation="weierstrass.WeierstrassData",
            )
        if A.exact != B.exact:
            object.__setattr__(self, "A", A.to_inexact())
            object.__setattr__(self, "B", B.to_inexact())
        if self.delta.is_zero:
            raise ZeroDiscriminant("4A^3 + 27B^2 vanishes identically")

    @property
    def exact(self) -> bool:
        return self.A.exact

    @cached_property
    def delta(self) -> BinaryForm:
        return _delta(self.A, self.B)

    @cached_property
    def orders(self) -> list["LocalOrders"]:
        return _local_orders(self)


def discriminant(W: WeierstrassData) -> BinaryForm:
    """``-16(4A^3 + 27B^2)``, exact when ``W`` is."""
    return W.delta


class LocalOrders(NamedTuple):
    position: ProjPoint
    a: int | float
    b: int | float
    d: int


def local_orders(W: WeierstrassData) -> list[LocalOrders]:
    """Vanishing orders ``(mu(A), mu(B), mu(Delta))`` at every root of Delta."""
    return list(W.orders)


# --------------------------------------------------------------------------
# orders


def _leading_zeros(f: BinaryForm) -> int | float:
    if f.is_zero:
        return INF
    n = 0
    while not f.coeffs[n]:
        n += 1
    return n


def _split(pieces: list[tuple[list, dict]], f: BinaryForm, key: str) -> list[tuple[list, dict]]:
    """Refine square-free pieces by the zero order of ``f`` on each."""
    if f.is_zero:
        return [(g, {**tags, key: INF}) for g, tags in pieces]
    _, factors = exact_squarefree(f)
    out = []
    for g, tags in pieces:
        rest = g
        for h, k in factors:
            common = exact_gcd(rest, h)
            if len(common) > 1:
                out.append((common, {**tags, key: k}))
                rest = exact_quo(rest, common)
        if len(rest) > 1:
            out.append((rest, {**tags, key: 0}))
    return out


def _piece_roots(g: list) -> list[ProjPoint]:
    if len(g) == 2:
        return [ProjPoint(-g[1] / g[0], 1)]
    return simple_roots(form_from_desc(g))


def _exact_orders(W: WeierstrassData) -> list[LocalOrders]:
    d_inf, factors = exact_squarefree(W.delta)
    out = []
    if d_inf:
        out.append(LocalOrders(ProjPoint.infinity(), _leading_zeros(W.A), _leading_zeros(W.B), d_inf))
    pieces = [(g, {"d": k}) for g, k in factors]
    pieces = _split(_split(pieces, W.A, "a"), W.B, "b")
    for g, tags in pieces:
        for p in _piece_roots(g):
            out.append(LocalOrders(p, tags["a"], tags["b"], tags["d"]))
    return out


_MATCH_RADIUS = 1e-5


def _nearby_order(roots: list[tuple[ProjPoint, int]], p: ProjPoint, radius: float = _MATCH_RADIUS) -> int:
    return sum(m for q, m in roots if q.distance(p) <= radius)


def _common_zeros(W: WeierstrassData, tol: float) -> list[tuple[ProjPoint, int | float, int | float]]:
    if W.A.is_zero:
        return [(q, INF, m) for q, m in roots_with_multiplicity(W.B, tol)]
    if W.B.is_zero:
        return [(p, m, INF) for p, m in roots_with_multiplicity(W.A, tol)]
    b_roots = roots_with_multiplicity(W.B, tol)
    out = []
    for p, a in roots_with_multiplicity(W.A, tol):
        b = _nearby_order(b_roots, p)
        if b:
            out.append((p, a, b))
    return out


def _numeric_orders(W: WeierstrassData, tol: float) -> list[LocalOrders]:
    # A and B have far smaller multiplicities than Delta at additive fibres,
    # so common zeros are located on A and B; Delta's order there follows
    # from (a, b) except when 3a = 2b, where the deflated discriminant of
    # (A / l^2j, B / l^3j) supplies the excess.  What is left of Delta after
    # removing those points carries the multiplicative fibres.
    out = []
    rest = W.delta
    for p, a, b in _common_zeros(W, tol):
        if 3 * a == 2 * b:
            j = int(a) // 2
            A1 = deflate(W.A, p, 2 * j)
            B1 = deflate(W.B, p, 3 * j)
            D1 = _delta(A1, B1)
            extra = 0 if D1.is_zero else _nearby_order(roots_with_multiplicity(D1, tol), p)
            d = 6 * j + extra
        else:
            d = int(min(3 * a, 2 * b))
        out.append(LocalOrders(p, a, b, d))
        rest = deflate(rest, p, d)
    if rest.degree:
        for p, d in roots_with_multiplicity(rest, tol):
            out.append(LocalOrders(p, 0, 0, d))
    return out


def _local_orders(W: WeierstrassData, tol: float = 1e-8) -> list[LocalOrders]:
    if W.exact:
        out = _exact_orders(W)
    else:
        out = _numeric_orders(W, tol)
    return sorted(out, key=_position_key)


def _position_key(rec: LocalOrders):
    p = rec.position
    if p.is_infinity:
        return (1, 0.0, 0.0)
    v = p.value
    return (0, round(v.real, 12), round(v.imag, 12))


def check_minimal(W: WeierstrassData) -> tuple[bool, list[ProjPoint]]:
    """Minimal iff ``mu_p(A) <= 3`` or ``mu_p(B) <= 5`` at every root of Delta."""
    bad = [r.position for r in W.orders if r.a >= 4 and r.b >= 6]
    return not bad, bad


# --------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class ChartEquation:
    """``y^2 z - x^3 - A_c(u) x z^2 - B_c(u) z^3`` on one chart.

    ``A_c`` and ``B_c`` are ascending coefficient arrays in ``u``.  Chart 0
    uses ``u = x0/x1`` and chart 1 uses ``u = x1/x0``.
    """

    chart: int
    A_c: np.ndarray
    B_c: np.ndarray

    def _AB(self, u):
        P = np.polynomial.polynomial
        return (
            P.polyval(u, self.A_c),
            P.polyval(u, self.B_c),
            P.polyval(u, P.polyder(self.A_c)),
            P.polyval(u, P.polyder(self.B_c)),
        )

    def value(self, u, x, y, z) -> complex:
        A, B, _, _ = self._AB(u)
        return y * y * z - x**3 - A * x * z * z - B * z**3

    def gradient(self, u, x, y, z) -> tuple[complex, complex, complex, complex]:
        """Partials with respect to ``(u, x, y, z)``."""
        A, B, dA, dB = self._AB(u)
        return (
            -(dA * x * z * z + dB * z**3),
            -3 * x * x - A * z * z,
            2 * y * z,
            y * y - 2 * A * x * z - 3 * B * z * z,
        )

    def as_expr(self):
        u, x, y, z = sp.symbols("u x y z")
        A = sum(sp.nsimplify(complex(c)) * u**i for i, c in enumerate(self.A_c))
        B = sum(sp.nsimplify(complex(c)) * u**i for i, c in enumerate(self.B_c))
        return sp.expand(y**2 * z - x**3 - A * x * z**2 - B * z**3)

    @staticmethod
    def transport(u, x, y, z):
        """Move a point to the other chart: ``(1/u, x/u^4, y/u^6, z)``."""
        return 1 / u, x / u**4, y / u**6, z


def chart_equations(W: WeierstrassData) -> tuple[ChartEquation, ChartEquation]:
    return tuple(ChartEquation(c, W.A.chart_poly(c), W.B.chart_poly(c)) for c in (0, 1))


# --------------------------------------------------------------------------
# smoothness


def _bounded_chart(p: ProjPoint) -> tuple[int, complex]:
    chart, u = p.chart
    return chart, to_complex(u)


def smoothness_probe(W: WeierstrassData, p: ProjPoint, tol: float = 1e-8) -> bool:
    """Is the total space smooth at the singular point of the fibre over ``p``?

    The singular point sits at ``y = 0``, ``z = 1`` with ``x = 0`` when
    ``A(p) = B(p) = 0`` and ``x = -3B(p)/(2A(p))`` otherwise.  The only
    partial that can still be nonzero there is ``d/du``, i.e.
    ``A'(p) x + B'(p)``.

    Floating data compares it with its coefficient scale at relative ``tol``.
    Exact data decides it without a tolerance: exactly at rational points,
    and otherwise at a 60-digit refinement of ``p`` as a root of the
    square-free part of Delta.  Double precision is not enough there: next
    to a high-order fibre the probe can sit far below ``tol`` while being
    genuinely nonzero.
    """
    if backward_error(W.delta, p) > tol:
        raise NotSingularFibre(f"Delta does not vanish at {p}")
    if W.exact:
        return _exact_probe(W, p)
    chart, u = _bounded_chart(p)
    P = np.polynomial.polynomial
    a, b = W.A.chart_poly(chart), W.B.chart_poly(chart)
    A, B = P.polyval(u, a), P.polyval(u, b)
    da, db = P.polyder(a), P.polyder(b)
    scale_a = np.abs(a).sum() or 1.0
    if abs(A) <= tol * scale_a:
        x = 0.0
    else:
        x = -3 * B / (2 * A)
    probe = P.polyval(u, da) * x + P.polyval(u, db)
    i = np.arange(len(da)), np.arange(len(db))
    scale = abs(x) * np.sum(np.abs(da) * abs(u) ** i[0]) + np.sum(np.abs(db) * abs(u) ** i[1])
    if scale == 0.0:
        return False
    return bool(abs(probe) > tol * scale)


_PROBE_DIGITS = 60


def _horner(coeffs, u):
    acc = 0 * u
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def _deriv(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _probe_value(a, b, u, is_zero) -> tuple:
    A, B = _horner(a, u), _horner(b, u)
    x = 0 * u if is_zero(A) else -3 * B / (2 * A)
    return _horner(_deriv(a), u) * x + _horner(_deriv(b), u), x


def _exact_probe(W: WeierstrassData, p: ProjPoint) -> bool:
    if p.exact:
        chart, u = p.chart
        a, b = W.A.exact_chart_poly(chart), W.B.exact_chart_poly(chart)
        probe, _ = _probe_value(a, b, u, lambda v: not v)
        return bool(probe)

    chart, u0 = _bounded_chart(p)
    with mpmath.workdps(_PROBE_DIGITS):
        # refine on the square-free factor of Delta that p is closest to
        best = None
        for g, _ in exact_squarefree(W.delta)[1]:
            coeffs = [_mp(c) for c in form_from_desc(g).exact_chart_poly(chart)]
            size = abs(_horner(coeffs, mpmath.mpc(u0))) / sum(abs(c) for c in coeffs)
            if best is None or size < best[0]:
                best = (size, coeffs)
        coeffs = best[1]
        dcoeffs = _deriv(coeffs)
        u = mpmath.mpc(u0)
        for _ in range(40):
            step = _horner(coeffs, u) / _horner(dcoeffs, u)
            u -= step
            if abs(step) < mpmath.mpf(10) ** (-_PROBE_DIGITS + 5):
                break
        a = [_mp(c) for c in W.A.exact_chart_poly(chart)]
        b = [_mp(c) for c in W.B.exact_chart_poly(chart)]
        eps = mpmath.mpf(10) ** (-_PROBE_DIGITS // 2)
        scale_a = sum(abs(c) for c in a) or 1
        probe, x = _probe_value(a, b, u, lambda v: abs(v) <= eps * scale_a)
        au = abs(u)
        scale = abs(x) * sum(abs(c) * au**i for i, c in enumerate(_deriv(a))) + sum(
            abs(c) * au**i for i, c in enumerate(_deriv(b))
        )
        return bool(scale and abs(probe) > eps * scale)


def _mp(c):
    re, im = exact_to_fractions(c)
    return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator, mpmath.mpf(im.numerator) / im.denominator)
