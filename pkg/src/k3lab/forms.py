"""Homogeneous binary forms over the complex numbers.

A form of degree ``d`` is stored by its coefficient sequence ``c`` with
``f(x0, x1) = sum(c[i] * x0**(d - i) * x1**i)``.  Coefficients are either all
exact Gaussian rationals (sympy's ``QQ_I`` elements) or all Python complex
numbers; the ``exact`` flag records which.

Root finding is numeric in both cases.  Exact forms additionally support
square-free decomposition and exact vanishing orders at exact points, which
the fibre classification relies on at special points.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from sympy.polys.densearith import dup_exquo
from sympy.polys.domains import QQ_I
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.sqfreetools import dup_sqf_list

from .errors import NoConvergence, ZeroForm

INF = math.inf

_GAUSS = type(QQ_I(0))
_EPS = np.finfo(float).eps

__all__ = [
    "INF",
    "BinaryForm",
    "ProjPoint",
    "backward_error",
    "evaluate",
    "form_power",
    "form_product",
    "form_scale",
    "form_sum",
    "roots_with_multiplicity",
    "taylor_coefficients",
    "vanishing_order",
]


# --------------------------------------------------------------------------
# scalars

def is_exact_scalar(x) -> bool:
    return isinstance(x, (Rational, _GAUSS))


def to_exact(x):
    if isinstance(x, _GAUSS):
        return x
    if isinstance(x, Rational):
        return QQ_I(Fraction(int(x.numerator), int(x.denominator)))
    raise TypeError(f"{x!r} is not an exact rational")


def to_complex(x) -> complex:
    if isinstance(x, _GAUSS):
        return complex(float(x.x), float(x.y))
    return complex(x)


def _exact_abs2(x) -> Fraction:
    return Fraction(int(x.x.numerator), int(x.x.denominator)) ** 2 + Fraction(
        int(x.y.numerator), int(x.y.denominator)
    ) ** 2


def exact_to_fractions(x) -> tuple[Fraction, Fraction]:
    x = to_exact(x)
    return (
        Fraction(int(x.x.numerator), int(x.x.denominator)),
        Fraction(int(x.y.numerator), int(x.y.denominator)),
    )


# --------------------------------------------------------------------------
# points

@dataclass(frozen=True)
class ProjPoint:
    """A point ``[p0 : p1]`` of the projective line.

    The constructor normalizes so that the coordinate of larger modulus is
    exactly 1 (``p1`` wins ties).  Exact input stays exact.
    """

    p0: complex
    p1: complex

    def __post_init__(self):
        p0, p1 = self.p0, self.p1
        if is_exact_scalar(p0) and is_exact_scalar(p1):
            p0, p1 = to_exact(p0), to_exact(p1)
            if not p0 and not p1:
                raise ValueError("[0:0] is not a point of P^1")
            if _exact_abs2(p1) >= _exact_abs2(p0):
                p0, p1 = p0 / p1, QQ_I(1)
            else:
                p0, p1 = QQ_I(1), p1 / p0
        else:
            p0, p1 = to_complex(p0), to_complex(p1)
            if p0 == 0 and p1 == 0:
                raise ValueError("[0:0] is not a point of P^1")
            if abs(p1) >= abs(p0):
                p0, p1 = p0 / p1, 1 + 0j
            else:
                p0, p1 = 1 + 0j, p1 / p0
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "p1", p1)

    @classmethod
    def affine(cls, t) -> "ProjPoint":
        return cls(t, 1)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(1, 0)

    @property
    def exact(self) -> bool:
        return isinstance(self.p0, _GAUSS)

    @property
    def is_infinity(self) -> bool:
        return not self.p1

    @property
    def chart(self) -> tuple[int, complex]:
        """``(0, x0/x1)`` when ``|x0| <= |x1|``, else ``(1, x1/x0)``."""
        if self.p1 == (QQ_I(1) if self.exact else 1):
            return 0, self.p0
        return 1, self.p1

    @property
    def value(self) -> complex:
        """Affine coordinate ``x0/x1`` (``inf`` at ``[1:0]``)."""
        if self.is_infinity:
            return complex(INF, 0)
        return to_complex(self.p0) / to_complex(self.p1)

    def coords(self) -> tuple[complex, complex]:
        return to_complex(self.p0), to_complex(self.p1)

    def distance(self, other: "ProjPoint") -> float:
        """Chordal distance, in ``[0, 1]``."""
        a0, a1 = self.coords()
        b0, b1 = other.coords()
        num = abs(a0 * b1 - a1 * b0)
        return num / (math.hypot(abs(a0), abs(a1)) * math.hypot(abs(b0), abs(b1)))

    def isclose(self, other: "ProjPoint", tol: float = 1e-9) -> bool:
        if self.exact and other.exact:
            return self == other
        return self.distance(other) <= tol

    def __repr__(self) -> str:
        return f"ProjPoint({self.p0!s} : {self.p1!s})"


def _chordal_matrix(points: Sequence[ProjPoint]) -> np.ndarray:
    c = np.array([pt.coords() for pt in points], dtype=complex)
    norms = np.linalg.norm(c, axis=1)
    cross = np.abs(c[:, None, 0] * c[None, :, 1] - c[:, None, 1] * c[None, :, 0])
    return cross / (norms[:, None] * norms[None, :])


# --------------------------------------------------------------------------
# forms

@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form ``sum(c[i] x0^(d-i) x1^i)``.

    ``exact=None`` picks exact storage when every coefficient is an exact
    rational (int, Fraction, sympy Rational or Gaussian rational).
    """

    coeffs: tuple
    exact: bool | None = None

    def __post_init__(self):
        raw = tuple(self.coeffs)
        if not raw:
            raise ValueError("a binary form needs at least one coefficient")
        exact = self.exact
        if exact is None:
            exact = all(is_exact_scalar(c) for c in raw)
        if exact:
            coeffs = tuple(to_exact(c) for c in raw)
        else:
            coeffs = tuple(to_complex(c) for c in raw)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "exact", bool(exact))

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, degree: int, exact: bool = True) -> "BinaryForm":
        return cls((0,) * (degree + 1), exact=exact)

    @classmethod
    def monomial(cls, degree: int, i: int, coeff=1) -> "BinaryForm":
        """``coeff * x0^(degree-i) * x1^i``."""
        c = [0] * (degree + 1)
        c[i] = coeff
        return cls(c, exact=is_exact_scalar(coeff))

    @classmethod
    def from_roots(cls, roots: Iterable, leading=1) -> "BinaryForm":
        """``leading * prod(x0 - r x1)``.

        Inexact roots are multiplied in sorted order so permuting the input
        gives bit-identical coefficients.
        """
        roots = list(roots)
        if all(is_exact_scalar(r) for r in roots) and is_exact_scalar(leading):
            f = cls((leading,))
            for r in roots:
                f = f * cls((1, -to_exact(r)))
            return f
        zs = sorted((to_complex(r) for r in roots), key=lambda z: (z.real, z.imag))
        c = np.array([to_complex(leading)])
        for z in zs:
            c = np.convolve(c, np.array([1.0, -z]))
        return cls(tuple(c), exact=False)

    # basic properties -----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([to_complex(c) for c in self.coeffs], dtype=complex)

    @cached_property
    def norm1(self) -> float:
        return float(np.abs(self.array).sum())

    def to_inexact(self) -> "BinaryForm":
        if not self.exact:
            return self
        return BinaryForm(tuple(self.array), exact=False)

    def chart_poly(self, chart: int) -> np.ndarray:
        """Dehomogenization as ascending coefficients in the chart variable.

        Chart 0 sets ``x1 = 1`` (variable ``u = x0``), chart 1 sets ``x0 = 1``
        (variable ``u = x1``), matching ``A_1(u) = u^d A_0(1/u)``.
        """
        a = self.array
        return a[::-1].copy() if chart == 0 else a.copy()

    def exact_chart_poly(self, chart: int) -> list:
        c = list(self.coeffs)
        return c[::-1] if chart == 0 else c

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        return form_sum(self, other)

    def __neg__(self) -> "BinaryForm":
        return form_scale(self, -1)

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return form_sum(self, form_scale(other, -1))

    def __mul__(self, other) -> "BinaryForm":
        if isinstance(other, BinaryForm):
            return form_product(self, other)
        return form_scale(self, other)

    def __rmul__(self, other) -> "BinaryForm":
        return form_scale(self, other)

    def __pow__(self, n: int) -> "BinaryForm":
        return form_power(self, n)

    def __call__(self, p: ProjPoint):
        return evaluate(self, p)

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"BinaryForm(deg={self.degree}, {kind}, {[str(c) for c in self.coeffs]})"


def _both_exact(f: BinaryForm, g: BinaryForm) -> bool:
    return f.exact and g.exact


def form_sum(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    if f.degree != g.degree:
        raise ValueError(f"cannot add forms of degrees {f.degree} and {g.degree}")
    if _both_exact(f, g):
        return BinaryForm(tuple(a + b for a, b in zip(f.coeffs, g.coeffs)), exact=True)
    return BinaryForm(tuple(f.array + g.array), exact=False)


def form_scale(f: BinaryForm, s) -> BinaryForm:
    if f.exact and is_exact_scalar(s):
        s = to_exact(s)
        return BinaryForm(tuple(s * c for c in f.coeffs), exact=True)
    return BinaryForm(tuple(to_complex(s) * f.array), exact=False)


def form_product(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Product of forms; degrees add and coefficients convolve."""
    if _both_exact(f, g):
        out = [QQ_I(0)] * (f.degree + g.degree + 1)
        for i, a in enumerate(f.coeffs):
            if not a:
                continue
            for j, b in enumerate(g.coeffs):
                if b:
                    out[i + j] += a * b
        return BinaryForm(tuple(out), exact=True)
    return BinaryForm(tuple(np.convolve(f.array, g.array)), exact=False)


def form_power(f: BinaryForm, n: int) -> BinaryForm:
    if n < 0:
        raise ValueError("negative power of a form")
    result = BinaryForm((1,), exact=f.exact)
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def evaluate(f: BinaryForm, p: ProjPoint | tuple):
    """``f(p0, p1)``; exact when both the form and the point are exact.

    A ``ProjPoint`` is evaluated at its normalized coordinates.  A raw pair
    ``(p0, p1)`` is evaluated as given, so ``evaluate(f, (l*p0, l*p1))`` is
    ``l**deg(f)`` times ``evaluate(f, (p0, p1))``.
    """
    d = f.degree
    if isinstance(p, ProjPoint):
        q0, q1, exact = p.p0, p.p1, p.exact
    else:
        q0, q1 = p
        exact = is_exact_scalar(q0) and is_exact_scalar(q1)
        q0, q1 = (to_exact(q0), to_exact(q1)) if exact else (to_complex(q0), to_complex(q1))
    if f.exact and exact:
        total = QQ_I(0)
        for i, c in enumerate(f.coeffs):
            if c:
                total += c * q0 ** (d - i) * q1 ** i
        return total
    p0, p1 = to_complex(q0), to_complex(q1)
    i = np.arange(d + 1)
    return complex(np.sum(f.array * p0 ** (d - i) * p1 ** i))


def backward_error(f: BinaryForm, p: ProjPoint) -> float:
    """``|f(p)| / sum |c_i| |p0|^(d-i) |p1|^i`` for normalized ``p``."""
    d = f.degree
    p0, p1 = p.coords()
    i = np.arange(d + 1)
    a = f.array
    denom = float(np.sum(np.abs(a) * abs(p0) ** (d - i) * abs(p1) ** i))
    if denom == 0.0:
        return 0.0
    return abs(complex(np.sum(a * p0 ** (d - i) * p1 ** i))) / denom


# --------------------------------------------------------------------------
# vanishing orders

_BINOM = np.array([[math.comb(n, k) for k in range(64)] for n in range(64)], dtype=float)


def taylor_coefficients(asc: np.ndarray, u0: complex) -> tuple[np.ndarray, np.ndarray]:
    """Taylor coefficients of ``sum asc[i] u^i`` at ``u0`` and their scales.

    ``scale[k] = max|asc| * sum_i C(i, k) |u0|^(i-k)`` is how far ``c_k`` can
    move under a perturbation of every coefficient by ``max|asc|``; a
    coefficient below ``tol * scale`` is numerically zero.
    """
    n = len(asc)
    i = np.arange(n)
    k = np.arange(n)
    expo = i[None, :] - k[:, None]
    mask = expo >= 0
    e = np.where(mask, expo, 0)
    binom = _BINOM[:n, :n].T  # binom[k, i] = C(i, k)
    w = np.where(mask, binom * (u0 + 0j) ** e, 0)
    wabs = np.where(mask, binom * abs(u0) ** e, 0.0)
    return w @ asc, wabs.sum(axis=1) * np.abs(asc).max()


def _exact_order(poly_asc: list, u0) -> int:
    """Exact multiplicity of ``u0`` as a root of an exact polynomial."""
    desc = list(reversed(poly_asc))
    while desc and not desc[0]:
        desc.pop(0)
    order = 0
    while len(desc) > 1:
        q = [desc[0]]
        for c in desc[1:]:
            q.append(c + q[-1] * u0)
        if q[-1]:
            break
        desc = q[:-1]
        order += 1
    return order


def vanishing_order(f: BinaryForm, p: ProjPoint, tol: float = 1e-9) -> int | float:
    """Multiplicity of ``p`` as a zero of ``f`` (``INF`` for the zero form).

    Exact for an exact form at an exact point; otherwise the first Taylor
    coefficient (in the chart where ``p`` is bounded) whose modulus exceeds
    ``tol`` times its natural scale.
    """
    if f.is_zero:
        return INF
    chart, u0 = p.chart
    if f.exact and p.exact:
        return _exact_order(f.exact_chart_poly(chart), u0)
    c, scale = taylor_coefficients(f.chart_poly(chart), to_complex(u0))
    for k in range(len(c)):
        if abs(c[k]) > tol * scale[k]:
            return k
    return f.degree


# --------------------------------------------------------------------------
# roots

def _seed() -> int:
    try:
        return int(os.environ.get("K3LAB_SEED", "0"))
    except ValueError:
        return 0


def _initial_guesses(desc: np.ndarray, rng: np.random.Generator | None) -> np.ndarray:
    """Circles on the radii of the Newton polygon (upper hull of log|a_i|)."""
    n = len(desc) - 1
    asc = desc[::-1]
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(asc))
    pts = [(i, logs[i]) for i in range(n + 1) if np.isfinite(logs[i])]
    hull: list[tuple[int, float]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    offset = 0.7 if rng is None else rng.uniform(0, 2 * np.pi)
    z = []
    for (i0, y0), (i1, y1) in zip(hull, hull[1:]):
        cnt = i1 - i0
        r = math.exp((y0 - y1) / cnt)
        ang = 2 * np.pi * np.arange(cnt) / cnt + 2 * np.pi * i1 / n + offset
        z.extend(r * np.exp(1j * ang))
    return np.array(z, dtype=complex)


_SETTLE_SWEEPS = 30


def _aberth(desc: np.ndarray, z0: np.ndarray, max_iter: int) -> tuple[np.ndarray, bool]:
    n = len(desc) - 1
    a = desc / desc[0]
    da = a[:-1] * np.arange(n, 0, -1)
    abs_a = np.abs(a)
    z = z0.astype(complex).copy()
    active = np.ones(n, dtype=bool)
    idx = np.arange(n)
    settle = 0
    for _ in range(max_iter):
        pz = np.polyval(a, z)
        bnd = np.polyval(abs_a, np.abs(z))
        active &= np.abs(pz) > 4 * n * _EPS * bnd
        if not active.any():
            # roundoff-level residuals are reached long before the members of
            # a cluster have sorted themselves out; keep sweeping for a while
            if settle >= _SETTLE_SWEEPS:
                return z, True
            settle += 1
            active[:] = True
        dpz = np.polyval(da, z)
        diff = z[:, None] - z[None, :]
        diff[idx, idx] = 1.0
        inv = 1.0 / diff
        inv[idx, idx] = 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dpz
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        bad = ~np.isfinite(corr)
        corr[bad] = 1e-3 * (1 + np.abs(z[bad]))
        corr[~active] = 0.0
        z = z - corr
        if not settle:
            active &= np.abs(corr) > 2 * _EPS * np.abs(z)
    return z, settle > 0


def _finite_roots(f: BinaryForm, initial, max_iter: int, tol: float):
    """Roots of ``f`` without clustering: list of ``ProjPoint`` with repeats."""
    c = f.array
    exact_zero = [not x for x in f.coeffs]
    lead = 0
    while exact_zero[lead]:
        lead += 1
    trail = 0
    while exact_zero[f.degree - trail]:
        trail += 1
    pts = [ProjPoint.infinity()] * lead + [ProjPoint.affine(0)] * trail
    desc = c[lead : f.degree - trail + 1]
    n = len(desc) - 1
    if n <= 0:
        return pts
    if n == 1:
        pts.append(ProjPoint(-desc[1], desc[0]))
        return pts
    rng = None
    seed = _seed()
    for attempt in range(4):
        if attempt == 0 and initial is not None and len(initial) == n:
            z0 = np.asarray(initial, dtype=complex)
        else:
            z0 = _initial_guesses(desc, rng)
        z, _ = _aberth(desc, z0, max_iter)
        cand = [ProjPoint(complex(zi), 1) for zi in z]
        if np.all(np.isfinite(z)) and max(backward_error(f, q) for q in cand) < tol:
            return pts + cand
        rng = np.random.default_rng(seed + attempt)
    raise NoConvergence(f"Aberth iteration failed on a degree-{n} form")


def _wide_radius(k: int) -> float:
    # numerical spread of a k-fold root scales like (backward error)^(1/k)
    return min(0.8, 3.0 * 1e-7 ** (1.0 / k))


_RADII = (1e-5, 1e-4, 1e-3, 1e-2, 3e-2, 0.1, 0.2, 0.35)


def _centroid(members: list[ProjPoint]) -> ProjPoint:
    chart, _ = members[0].chart
    vals = []
    for q in members:
        q0, q1 = q.coords()
        vals.append(q0 / q1 if chart == 0 else q1 / q0)
    u = complex(np.mean(vals))
    return ProjPoint(u, 1) if chart == 0 else ProjPoint(1, u)


# floor of the coefficient weights, relative to the largest coefficient, so
# that tiny coefficients (often pure rounding noise) may still be perturbed
_WEIGHT_FLOOR = 1e-3


def multiple_root_backward_error(f: BinaryForm, p: ProjPoint, k: int) -> float:
    """Size of the smallest relative coefficient change giving ``f`` a
    ``k``-fold zero at ``p``.

    Coefficient ``a_i`` of the chart polynomial may move by ``d_i * w_i``
    with ``w_i = |a_i| + 1e-3 max|a|``; the result is the least-squares
    ``||d||``.  Weighting by ``|a_i|`` matches how rounding perturbs
    coefficients and keeps graded coefficient sequences from making distinct
    roots look cheap to merge.
    """
    chart, u0 = p.chart
    a = f.chart_poly(chart)
    n = len(a)
    u0 = to_complex(u0)
    i = np.arange(n)
    j = np.arange(k)
    expo = i[None, :] - j[:, None]
    mask = expo >= 0
    m = np.where(mask, _BINOM[:n, :k].T * u0 ** np.where(mask, expo, 0), 0)
    w = np.abs(a) + _WEIGHT_FLOOR * np.abs(a).max()
    d = np.linalg.lstsq(m * w[None, :], -(m @ a), rcond=None)[0]
    return float(np.linalg.norm(d))


def _refine_centre(f: BinaryForm, p: ProjPoint, k: int, reach: float) -> ProjPoint:
    # a k-fold zero is a simple zero of the (k-1)-th derivative; ``reach`` is
    # chordal, so it is scaled to the chart coordinate before comparing steps
    chart, u0 = p.chart
    poly = np.polynomial.Polynomial(f.chart_poly(chart)).deriv(k - 1)
    dpoly = poly.deriv()
    u0 = to_complex(u0)
    reach *= 1 + abs(u0) ** 2
    u = u0
    for _ in range(8):
        d = dpoly(u)
        if d == 0:
            break
        step = poly(u) / d
        u = u - step
        if abs(step) <= 4 * _EPS * (1 + abs(u)):
            break
    if not np.isfinite(u) or abs(u - u0) > reach:
        return p
    return ProjPoint(u, 1) if chart == 0 else ProjPoint(1, u)


# a cluster that swallows an accepted one may raise its backward error by at
# most this factor; genuine growth stays below ~1e2, a k-fold root absorbing a
# nearby simple one costs ~1e3 and up
_GROWTH = 500.0


def _cluster(
    f: BinaryForm, pts: list[ProjPoint], cluster_radius: float, mult_tol: float
) -> list[tuple[ProjPoint, int]]:
    n = len(pts)
    if n == 1:
        return [(pts[0], 1)]
    dist = _chordal_matrix(pts)
    np.fill_diagonal(dist, 0.0)
    dist = np.maximum(dist, dist.T)
    cond = dist[np.triu_indices(n, 1)]
    tree = linkage(cond, method="single")
    best = [frozenset([i]) for i in range(n)]
    centres = list(pts)
    errors: dict[frozenset, float] = {}
    radii = (cluster_radius,) + tuple(r for r in _RADII if r > cluster_radius)
    for level, r in enumerate(radii):
        labels = fcluster(tree, r, criterion="distance")
        for lab in np.unique(labels):
            comp = frozenset(np.flatnonzero(labels == lab).tolist())
            k = len(comp)
            if k < 2 or all(len(best[i]) >= k for i in comp):
                continue
            idx = sorted(comp)
            diam = dist[np.ix_(idx, idx)].max()
            centre = _refine_centre(f, _centroid([pts[i] for i in idx]), k, diam + cluster_radius)
            err = multiple_root_backward_error(f, centre, k)
            if level > 0:
                if diam > _wide_radius(k) or err > mult_tol:
                    continue
                inner = [errors[best[i]] for i in comp if len(best[i]) > 1]
                if inner and err > _GROWTH * max(max(inner), _EPS):
                    continue
            errors[comp] = err
            for i in comp:
                best[i] = comp
                centres[i] = centre
    seen = set()
    out = []
    for comp in best:
        if comp in seen:
            continue
        seen.add(comp)
        out.append((centres[min(comp)], len(comp)))
    return out


def _sort_key(item):
    p = item[0]
    if p.is_infinity:
        return (1, 0.0, 0.0)
    v = p.value
    return (0, round(v.real, 12), round(v.imag, 12))


def roots_with_multiplicity(
    f: BinaryForm,
    tol: float = 1e-8,
    *,
    cluster_radius: float = 1e-6,
    mult_tol: float = 1e-10,
    initial: Sequence[complex] | None = None,
    max_iter: int = 800,
) -> list[tuple[ProjPoint, int]]:
    """Zeros of ``f`` on P^1 with multiplicities summing to ``deg f``.

    Roots are found by Aberth iteration on the chart ``x1 = 1``; exact zero
    leading (trailing) coefficients account for the root ``[1:0]`` (``[0:1]``).
    Numerical roots closer than ``cluster_radius`` (chordal) are merged.
    Wider groups (up to a size-dependent diameter) are merged only when a
    relative coefficient perturbation below ``mult_tol`` gives ``f`` a zero
    of the group's size at the centroid; this is how the spread-out numerical
    images of a multiple root are recognised.

    ``initial`` optionally warm-starts the iteration with affine guesses.
    """
    if f.is_zero:
        raise ZeroForm("zero form has no isolated roots")
    pts = _finite_roots(f, initial, max_iter, tol)
    if not pts:
        return []
    return sorted(_cluster(f, pts, cluster_radius, mult_tol), key=_sort_key)


def deflate(f: BinaryForm, p: ProjPoint, k: int) -> BinaryForm:
    """Quotient of ``f`` by the k-th power of the linear form vanishing at ``p``.

    The division runs in the chart where ``p`` has modulus at most one and
    the remainder is dropped, so ``p`` should be (close to) a zero of order
    at least ``k``.  The linear form is normalized within that chart.
    """
    chart, u0 = p.chart
    q = f.chart_poly(chart)
    for _ in range(k):
        q = np.polynomial.polynomial.polydiv(q, np.array([-to_complex(u0), 1.0]))[0]
    deg = f.degree - k
    q = np.concatenate([q, np.zeros(deg + 1 - len(q))])[: deg + 1]
    return BinaryForm(tuple(q[::-1] if chart == 0 else q), exact=False)


def simple_roots(f: BinaryForm, tol: float = 1e-8) -> list[ProjPoint]:
    """Roots of a form known to be square-free (no clustering)."""
    if f.is_zero:
        raise ZeroForm("zero form has no isolated roots")
    return _finite_roots(f, None, 800, tol)


# --------------------------------------------------------------------------
# exact square-free machinery

def exact_squarefree(f: BinaryForm) -> tuple[int, list[tuple[list, int]]]:
    """Square-free decomposition of an exact nonzero form.

    Returns ``(order_at_infinity, [(poly_desc, k), ...])`` where each
    ``poly_desc`` is a square-free polynomial in ``t = x0/x1`` (descending,
    ``QQ_I`` coefficients) whose roots are zeros of ``f`` of order ``k``.
    """
    if not f.exact:
        raise TypeError("exact_squarefree needs an exact form")
    if f.is_zero:
        raise ZeroForm("zero form", operation="forms.exact_squarefree")
    c = list(f.coeffs)
    lead = 0
    while not c[lead]:
        lead += 1
    desc = c[lead:]
    if len(desc) <= 1:
        return lead, []
    _, factors = dup_sqf_list(desc, QQ_I)
    return lead, [(g, k) for g, k in factors if len(g) > 1]


def exact_gcd(f: list, g: list) -> list:
    return dup_gcd(f, g, QQ_I)


def exact_quo(f: list, g: list) -> list:
    return dup_exquo(f, g, QQ_I)


def form_from_desc(desc: list) -> BinaryForm:
    """Homogenize a univariate polynomial in ``t = x0/x1`` to its own degree."""
    return BinaryForm(tuple(desc), exact=True)
