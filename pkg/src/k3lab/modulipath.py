"""Numerical paths through pairs (rational curve, elliptic K3) of genus ``g``.

A point of a path is a surface ``X_{(a),K}`` from the nodal family (or its
cuspidal member ``K = 0``) together with the curve ``S + sum m_f N_f``,
where ``f`` runs over the singular fibres.  The singular fibres of the nodal
member sit over the twelve ``a_i`` ("static" fibres) and over the twelve
solutions of ``p(t) = -2K`` with ``p(t) = prod(t - a_i)`` ("beta" fibres).
As ``K -> 0`` each beta fibre merges with a static one into a cusp.

Every path is a concatenation of legs.  Along a leg the parameters follow an
explicit curve ``t -> (a(t), K(t))``; static fibres move with ``a(t)`` and
beta fibres are tracked by Newton's method from the previous sample, with
the step halved whenever the nearest-neighbour pairing between consecutive
samples is not clear-cut.  The curve multiplicities ride along with the
fibres they sit on, which is what makes the class bookkeeping continuous.

The legs available are

* permutations of the ``a_i`` by transpositions along elliptical arcs,
* the cusp limit ``K -> 0`` and its reverse (cusp exit),
* the node transfer ``K(s) = (1 - (e^(pi i s / 6) beta)^12) / 2`` which
  rotates every beta fibre by 30 degrees and so walks one unit of
  multiplicity from the beta fibre next to ``alpha_2`` to the one next to
  ``alpha_1``.

``connect_to_canonical`` strings these together to reach ``S + g N_1`` on
the cuspidal surface over the twelfth roots of unity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .curves import CurveConfig
from .errors import BranchAmbiguity, Collision, DegenerateK, K3LabInputError
from .families import FamilyParams, roots_of_unity
from .forms import to_complex

__all__ = [
    "Fibre",
    "ModuliPathSample",
    "PathReport",
    "connect_to_canonical",
    "cusp_limit_path",
    "node_transfer_path",
    "parse_cycles",
    "permutation_path",
    "track_beta",
    "verify_path",
]

DEFAULT_K = 0.25
DEFAULT_STEPS = 256
EPS_SEP = 1e-6
# nearest-neighbour pairing must win by this factor to count as unambiguous
MATCH_RATIO = 2.0 / 3.0
MAX_HALVINGS = 24
ARC_RATIOS = (1.25, 0.6, 1.6, 0.35, 2.0, 2.5)
# a leg may refine its grid to at most this many samples per grid step on average
SAMPLE_BUDGET = 16
RESIDUAL_TOL = 1e-8
ALPHA = tuple(to_complex(z) for z in roots_of_unity())


# --------------------------------------------------------------------------
# data


class Fibre(NamedTuple):
    """A singular fibre at ``pos`` where Delta vanishes to order ``mult``.

    ``src`` lists the fibres of the previous sample this one continues;
    ``kind`` is ``"static"``, ``"beta"`` or ``"cusp"``.
    """

    pos: complex
    mult: int
    src: tuple = ()
    kind: str = "static"
    index: int = -1  # position of the a-point for static fibres and cusps


@dataclass(frozen=True)
class ModuliPathSample:
    t: float
    params: FamilyParams
    fibres: tuple
    m: tuple
    provenance: str

    @property
    def degenerate(self) -> bool:
        return self.params.is_cuspidal

    @property
    def g(self) -> int:
        return sum(self.m)

    @property
    def config(self) -> CurveConfig:
        return CurveConfig(self.g, self.m, tuple(f.pos for f in self.fibres))

    def multiplicity_at(self, z: complex, radius: float = 1e-6) -> int:
        return sum(m for f, m in zip(self.fibres, self.m) if abs(f.pos - z) <= radius)


@dataclass(frozen=True)
class PathReport:
    samples: tuple
    g: int
    eps_cont: float
    eps_sep: float = EPS_SEP
    continuous: bool | None = None
    endpoint_match: bool | None = None
    endpoint_residuals: dict = field(default_factory=dict)
    invariant_violations: tuple = ()
    continuity_violations: tuple = ()

    @property
    def ok(self) -> bool:
        return bool(self.continuous and self.endpoint_match and not self.invariant_violations)

    @property
    def first(self) -> ModuliPathSample:
        return self.samples[0]

    @property
    def last(self) -> ModuliPathSample:
        return self.samples[-1]


# --------------------------------------------------------------------------
# beta tracking


def _twelfth_roots(w: complex) -> np.ndarray:
    r0 = cmath.exp(cmath.log(w) / 12) if w else 0j
    return r0 * np.array(ALPHA)


def _polish_beta(b: complex, w: complex) -> complex:
    for _ in range(3):
        if b == 0:
            break
        b = b - (b**12 - w) / (12 * b**11)
    return b


def track_beta(K_path: Sequence, seed: complex) -> list[complex]:
    """Continuously chosen solutions of ``t^12 = 1 - 2K`` along ``K_path``.

    Starts from the root nearest ``seed`` at the first sample; between
    samples the nearest root is taken, halving the ``K`` step when the
    nearest root does not beat the runner-up by a clear margin.
    """
    Ks = [to_complex(K) for K in K_path]
    for K in Ks:
        if abs(1 - 2 * K) < 1e-300 or K == 0.5:
            raise DegenerateK("t^12 = 1 - 2K degenerates at K = 1/2")
    if not Ks:
        return []

    def nearest(prev: complex, K: complex) -> complex | None:
        cand = _twelfth_roots(1 - 2 * K)
        d = np.abs(cand - prev)
        order = np.argsort(d)
        if d[order[0]] > MATCH_RATIO * d[order[1]]:
            return None
        return _polish_beta(complex(cand[order[0]]), 1 - 2 * K)

    def step(prev: complex, K0: complex, K1: complex, depth: int) -> complex:
        b = nearest(prev, K1)
        if b is not None:
            return b
        if depth >= MAX_HALVINGS:
            raise BranchAmbiguity(f"cannot follow the root of t^12 = 1 - 2K near K = {K1}")
        Km = (K0 + K1) / 2
        if abs(1 - 2 * Km) < 1e-300:
            raise DegenerateK("path passes through K = 1/2")
        mid = step(prev, K0, Km, depth + 1)
        return step(mid, Km, K1, depth + 1)

    cand = _twelfth_roots(1 - 2 * Ks[0])
    beta = [_polish_beta(complex(cand[np.argmin(np.abs(cand - to_complex(seed)))]), 1 - 2 * Ks[0])]
    for K0, K1 in zip(Ks, Ks[1:]):
        beta.append(step(beta[-1], K0, K1, 0))
    return beta


# --------------------------------------------------------------------------
# internal state and leg engine


@dataclass(frozen=True)
class _State:
    a: tuple
    K: complex
    fibres: tuple  # of Fibre (src ignored)
    m: tuple


def _p_coeffs(a) -> np.ndarray:
    """Descending coefficients of ``prod(t - a_i)``."""
    c = np.zeros(len(a) + 1, dtype=complex)
    c[0] = 1
    for k, r in enumerate(a):
        c[1 : k + 2] -= r * c[0 : k + 1]
    return c


def _polyval(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.vander(z, len(c)) @ c


def _newton_beta(a, K: complex, z0: np.ndarray, iters: int = 30) -> tuple[np.ndarray, bool]:
    c = _p_coeffs(a)
    c[-1] += 2 * K
    n = len(c) - 1
    dc = c[:-1] * np.arange(n, 0, -1)
    absc = np.abs(c)
    z = z0.copy()
    for _ in range(iters):
        V = np.vander(z, n + 1)
        q = V @ c
        dq = V[:, 1:] @ dc
        with np.errstate(divide="ignore", invalid="ignore"):
            dz = q / dq
        if not np.all(np.isfinite(dz)):
            return z, False
        z = z - dz
        if np.all(np.abs(dz) <= 1e-15 * (1 + np.abs(z))):
            break
    q = np.abs(_polyval(c, z)) / _polyval(absc, np.abs(z)).real
    return z, bool(np.all(q < 1e-13))


def _nearest_ok(prev_pos: np.ndarray, new_pos: np.ndarray, links: Sequence[tuple]) -> bool:
    """Each new fibre's nearest previous fibre is among its sources, and
    wins clearly against every previous fibre outside them."""
    d = np.abs(new_pos[:, None] - prev_pos[None, :])
    mask = np.zeros(d.shape, dtype=bool)
    if all(len(src) == 1 for src in links):
        mask[np.arange(len(links)), [src[0] for src in links]] = True
    else:
        for k, src in enumerate(links):
            mask[k, list(src)] = True
    own = np.where(mask, d, np.inf).min(axis=1)
    others = np.where(mask, np.inf, d).min(axis=1)
    return bool(np.all(own <= MATCH_RATIO * others))


def _min_sep(pos: np.ndarray) -> float:
    if len(pos) < 2:
        return math.inf
    d = np.abs(pos[:, None] - pos[None, :])
    d[np.diag_indices(len(pos))] = np.inf
    return float(d.min())


class _Leg:
    """Samples of one leg, built by advancing ``_State`` along ``path``."""

    def __init__(self, start: _State, path: Callable[[float], tuple], name: str,
                 transfer_at: complex | None = None, failure=BranchAmbiguity):
        self.path = path
        self.name = name
        self.transfer_at = transfer_at
        self.failure = failure
        self.samples: list[tuple[float, _State, tuple]] = [(0.0, start, ())]

    # one step ---------------------------------------------------------------
    def _advance(self, s: _State, t1: float) -> tuple[_State, tuple] | None:
        a1, K1 = self.path(t1)
        a1 = tuple(a1)
        prev_pos = np.array([f.pos for f in s.fibres])
        if s.K == 0 and K1 != 0:
            return self._split(s, a1, K1, prev_pos)
        if s.K != 0 and K1 == 0:
            return self._merge(s, a1, prev_pos)
        if s.K == 0:
            fibres = tuple(f._replace(pos=a1[f.index]) for f in s.fibres)
            links = tuple((i,) for i in range(len(fibres)))
        else:
            beta_idx = [i for i, f in enumerate(s.fibres) if f.kind == "beta"]
            z0 = prev_pos[beta_idx]
            z, ok = _newton_beta(a1, K1, z0)
            if not ok:
                return None
            zs = iter(z)
            fibres = tuple(
                f._replace(pos=a1[f.index]) if f.kind == "static" else f._replace(pos=complex(next(zs)))
                for f in s.fibres
            )
            links = tuple((i,) for i in range(len(fibres)))
        new_pos = np.array([f.pos for f in fibres])
        if not _nearest_ok(prev_pos, new_pos, list(links)):
            return None
        return _State(a1, K1, fibres, s.m), links

    def _split(self, s: _State, a1, K1, prev_pos):
        dp = np.polyder(_p_coeffs(a1))
        fibres, m, links = [], [], []
        betas = []
        for i, f in enumerate(s.fibres):
            fibres.append(Fibre(a1[f.index], 1, kind="static", index=f.index))
            links.append((i,))
            betas.append(a1[f.index] - 2 * K1 / np.polyval(dp, a1[f.index]))  # first-order split
        z, ok = _newton_beta(a1, K1, np.array(betas))
        if not ok:
            return None
        m_static = list(s.m)
        m_beta = [0] * len(s.fibres)
        if self.transfer_at is not None:
            j = int(np.argmin(np.abs(prev_pos - self.transfer_at)))
            if m_static[j] < 1:
                raise K3LabInputError("no multiplicity to move off the cusp", operation="modulipath.cusp_exit")
            m_static[j] -= 1
            m_beta[j] += 1
        for i, zi in enumerate(z):
            fibres.append(Fibre(complex(zi), 1, kind="beta"))
            links.append((i,))
        new_pos = np.array([f.pos for f in fibres])
        if _min_sep(new_pos) <= EPS_SEP:
            return None
        # each child must be nearest to its own parent
        if not _nearest_ok(prev_pos, new_pos, links):
            return None
        return _State(a1, K1, tuple(fibres), tuple(m_static + m_beta)), tuple(links)

    def _merge(self, s: _State, a1, prev_pos):
        statics = [i for i, f in enumerate(s.fibres) if f.kind == "static"]
        betas = [i for i, f in enumerate(s.fibres) if f.kind == "beta"]
        fibres, m, links = [], [], []
        used = set()
        for i in statics:
            f = s.fibres[i]
            z = a1[f.index]
            d = np.abs(prev_pos[betas] - z)
            order = np.argsort(d)
            if len(order) > 1 and d[order[0]] > MATCH_RATIO * d[order[1]]:
                return None
            j = betas[order[0]]
            if j in used:
                return None
            used.add(j)
            fibres.append(Fibre(z, 2, kind="cusp", index=f.index))
            m.append(s.m[i] + s.m[j])
            links.append((i, j))
        new_pos = np.array([f.pos for f in fibres])
        if not _nearest_ok(prev_pos, new_pos, links):
            return None
        return _State(a1, 0, tuple(fibres), tuple(m)), tuple(links)

    # driving ----------------------------------------------------------------
    def _step(self, s: _State, t0: float, t1: float, depth: int) -> list:
        self.attempts += 1
        res = self._advance(s, t1)
        if res is not None:
            return [(t1, res[0], res[1])]
        if depth >= MAX_HALVINGS or self.attempts > self.budget:
            raise self.failure(f"{self.name}: fibres cannot be followed near t = {t1:.6g}",
                               operation=f"modulipath.{self.name}")
        tm = (t0 + t1) / 2
        first = self._step(s, t0, tm, depth + 1)
        return first + self._step(first[-1][1], tm, t1, depth + 1)

    def run(self, steps: int) -> "_Leg":
        self.attempts, self.budget = 0, SAMPLE_BUDGET * steps + 64
        grid = np.linspace(0.0, 1.0, steps + 1)
        for t0, t1 in zip(grid, grid[1:]):
            self.samples.extend(self._step(self.samples[-1][1], float(t0), float(t1), 0))
        return self

    def nominal_displacement(self, steps: int) -> float:
        grid = np.linspace(0.0, 1.0, steps + 1)
        pts = [self.path(float(t)) for t in grid]
        return max(_param_displacement(p, q) for p, q in zip(pts, pts[1:]))


def _hausdorff(a, b) -> float:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _param_displacement(p, q) -> float:
    """Distance between parameter points ``(a, K)``.

    The family depends on the a-points only as a set, so they are compared
    by Hausdorff distance.
    """
    (a0, K0), (a1, K1) = p, q
    return abs(to_complex(K1) - to_complex(K0)) + _hausdorff(a0, a1)


# --------------------------------------------------------------------------
# assembling reports


def _to_samples(legs: list[_Leg]) -> list[ModuliPathSample]:
    out: list[ModuliPathSample] = []
    n = len(legs)
    for li, leg in enumerate(legs):
        for k, (t, st, links) in enumerate(leg.samples):
            if k == 0 and out:
                continue  # same state as the previous leg's last sample
            fibres = tuple(f._replace(src=links[i] if links else ()) for i, f in enumerate(st.fibres))
            out.append(ModuliPathSample(
                t=(li + t) / n,
                params=FamilyParams(st.a, st.K),
                fibres=fibres,
                m=st.m,
                provenance=leg.name,
            ))
    return out


def _report(legs: list[_Leg], steps: int, g: int, residuals: dict, eps_sep: float = EPS_SEP) -> PathReport:
    disp = max((leg.nominal_displacement(steps) for leg in legs), default=0.0)
    samples = _to_samples(legs)
    rep = PathReport(tuple(samples), g, eps_cont=10 * disp if disp > 0 else 1e-9, eps_sep=eps_sep)
    rep = verify_path(rep, g)
    match = all(v < RESIDUAL_TOL for v in residuals.values()) and rep.endpoint_match
    return replace(rep, endpoint_residuals={**rep.endpoint_residuals, **residuals}, endpoint_match=match)


def _nodal_state(a, K, m_static, m_beta=None, beta_guess=None) -> _State:
    a = tuple(complex(x) for x in a)
    K = to_complex(K)
    if beta_guess is None:
        c = _p_coeffs(a)
        c[-1] += 2 * K
        beta_guess = np.roots(c)
    z, ok = _newton_beta(a, K, np.asarray(beta_guess, dtype=complex))
    if not ok:
        raise BranchAmbiguity("could not solve p(t) = -2K")
    fibres = tuple(Fibre(x, 1, kind="static", index=i) for i, x in enumerate(a)) + tuple(
        Fibre(complex(x), 1, kind="beta") for x in z
    )
    m_beta = [0] * len(z) if m_beta is None else list(m_beta)
    return _State(a, K, fibres, tuple(m_static) + tuple(m_beta))


def _cusp_state(a, m) -> _State:
    a = tuple(complex(x) for x in a)
    fibres = tuple(Fibre(x, 2, kind="cusp", index=i) for i, x in enumerate(a))
    return _State(a, 0, fibres, tuple(m))


def _check_m(m, n: int = 12) -> tuple:
    if isinstance(m, CurveConfig):
        m = m.m
    m = tuple(int(x) for x in m)
    if len(m) != n or any(x < 0 for x in m) or sum(m) < 1:
        raise K3LabInputError(f"need {n} nonnegative multiplicities with positive sum, got {m}",
                              operation="modulipath")
    return m


# --------------------------------------------------------------------------
# legs


def _cusp_leg(start: _State, K0: complex, exiting: bool, transfer_at: complex | None = None) -> _Leg:
    a = start.a
    if exiting:
        path = lambda t: (a, K0 * t if t > 0 else 0)  # noqa: E731
        name = "cusp_exit"
    else:
        path = lambda t: (a, K0 * (1 - t) if t < 1 else 0)  # noqa: E731
        name = "cusp_limit"
    return _Leg(start, path, name, transfer_at=transfer_at)


def cusp_limit_path(a, m, K0: float = DEFAULT_K, steps: int = DEFAULT_STEPS) -> PathReport:
    """Let ``K`` fall linearly from ``K0`` to 0 with ``m`` on the static fibres.

    At the end each static fibre has merged with a beta fibre into the cusp
    at the same position, carrying the same multiplicity.
    """
    m = _check_m(m)
    if not (0 < float(np.real(K0)) < 0.5 and np.imag(K0) == 0):
        raise K3LabInputError("K0 must be real in (0, 1/2)", operation="modulipath.cusp_limit_path")
    start = _nodal_state(a, K0, m)
    leg = _cusp_leg(start, complex(K0), exiting=False).run(steps)
    end = leg.samples[-1][1]
    res = {"cusp_positions": max(abs(f.pos - a[f.index]) for f in end.fibres)}
    return _report([leg], steps, sum(m), res)


def _ellipse(center: complex, d: complex, rho: float, t: float) -> complex:
    return center + d * complex(math.cos(math.pi * t), rho * math.sin(math.pi * t))


def _swap_leg(start: _State, i: int, j: int, rho: float, name: str) -> _Leg:
    a0 = start.a
    zi, zj = a0[i], a0[j]
    mid = (zi + zj) / 2
    d = zi - mid
    K = start.K

    def path(t: float):
        a = list(a0)
        a[i] = _ellipse(mid, d, rho, t) if t < 1 else zj
        a[j] = _ellipse(mid, -d, rho, t) if t < 1 else zi
        return tuple(a), K

    return _Leg(start, path, name, failure=Collision)


def _transpositions(perm: Sequence[int]) -> list[tuple[int, int]]:
    """Swaps of a-points, each between neighbouring slots, realizing
    ``point i -> slot perm[i]``.

    Bubble sort on the slot arrangement, so the number of swaps is the
    number of inversions; neighbouring points can be exchanged along short
    arcs that stay away from the other fibres.
    """
    holder = list(range(len(perm)))  # holder[s]: point currently in slot s
    swaps = []
    changed = True
    while changed:
        changed = False
        for s in range(len(perm) - 1):
            p, q = holder[s], holder[s + 1]
            if perm[p] > perm[q]:
                swaps.append((p, q))
                holder[s], holder[s + 1] = q, p
                changed = True
    return swaps


def _permutation_legs(start: _State, swaps: Sequence[tuple[int, int]], steps: int) -> tuple[list[_Leg], _State]:
    legs = []
    state = start
    for i, j in swaps:
        name = f"transposition({i + 1} {j + 1})"
        last_error = None
        for rho in ARC_RATIOS:
            try:
                leg = _swap_leg(state, i, j, rho, name).run(steps)
            except Collision as exc:
                last_error = exc
                continue
            fib = [st for _, st, _ in leg.samples]
            if min(_min_sep(np.array([f.pos for f in s.fibres])) for s in fib) <= EPS_SEP:
                last_error = Collision(f"{name}: fibres within {EPS_SEP:g}")
                continue
            break
        else:
            raise last_error
        legs.append(leg)
        state = leg.samples[-1][1]
    return legs, state


def parse_cycles(text: str, n: int = 12) -> list[int]:
    """Permutation in 1-based cycle notation, as ``perm[i] = sigma(i)``
    (0-based).  ``"(1 2)(3 4 5)"`` sends 1 to 2, 2 to 1, 3 to 4 and so on."""
    perm = list(range(n))
    text = text.strip()
    if text in ("", "()", "id", "identity"):
        return perm
    seen = set()
    for chunk in text.replace(")", "").split("("):
        items = [int(x) for x in chunk.replace(",", " ").split()]
        if not items:
            continue
        if any(x < 1 or x > n for x in items) or seen & set(items) or len(set(items)) < len(items):
            raise K3LabInputError(f"bad cycle {chunk!r} for a permutation of {n}",
                                  operation="modulipath.parse_cycles")
        seen |= set(items)
        for x, y in zip(items, items[1:] + items[:1]):
            perm[x - 1] = y - 1
    return perm


def _as_perm(sigma, n: int = 12) -> list[int]:
    if isinstance(sigma, str):
        return parse_cycles(sigma, n)
    perm = [int(x) for x in sigma]
    if sorted(perm) != list(range(n)):
        raise K3LabInputError(f"not a permutation of 0..{n - 1}: {perm}", operation="modulipath.permutation_path")
    return perm


def permutation_path(a, sigma, m, K: complex = DEFAULT_K, steps: int = DEFAULT_STEPS) -> PathReport:
    """Move the a-points so that the point at ``a_i`` ends at ``a_{sigma(i)}``,
    carrying ``m_i`` with it, at fixed ``K``.

    ``sigma`` is a 0-based list (``sigma[i]``) or a cycle string.  The end
    surface equals the start surface since the family only sees the set of
    a-points.
    """
    m = _check_m(m)
    perm = _as_perm(sigma)
    a = tuple(complex(x) for x in a)
    start = _nodal_state(a, K, m)
    legs, end = _permutation_legs(start, _transpositions(perm), steps)
    if not legs:
        legs = [_Leg(start, lambda t: (a, start.K), "identity").run(1)]
    target = tuple(a[perm[i]] for i in range(len(a)))
    res = {
        "a_endpoint": max(abs(x - y) for x, y in zip(end.a, target)),
        "family_coefficients": float(np.abs(_p_coeffs(end.a) - _p_coeffs(a)).max()),
    }
    return _report(legs, steps, sum(m), res)


def _transfer_leg(start: _State, K: float, beta: complex, reverse: bool) -> _Leg:
    a = start.a

    def path(s: float):
        u = 1 - s if reverse else s
        if u in (0.0, 1.0):
            return a, complex(K)
        w = (cmath.exp(1j * math.pi * u / 6) * beta) ** 12
        return a, (1 - w) / 2

    return _Leg(start, path, "node_transfer")


def _beta_of(K: float) -> complex:
    return track_beta(np.linspace(0.0, K, 65), 1.0)[-1]


def node_transfer_path(m, K: float = DEFAULT_K, steps: int = DEFAULT_STEPS) -> PathReport:
    """Rotate the beta fibres by 30 degrees through ``K(s) = (1 - (psi(s) beta)^12) / 2``.

    ``m`` is the sorted configuration on the cusps over the twelfth roots of
    unity with ``m_2 >= 1``.  The start curve carries ``m_1`` on ``N_alpha_1``,
    one unit on the beta fibre at ``beta alpha_1`` and ``m_2 - 1`` on
    ``N_alpha_2``; along the path that unit rides on the fibre
    ``psi(s) beta alpha_1``, ending at ``beta alpha_2``.
    """
    m = _check_m(m)
    if m[1] < 1:
        raise K3LabInputError("node transfer needs m_2 >= 1", operation="modulipath.node_transfer_path")
    if not (0 < float(np.real(K)) < 0.5 and np.imag(K) == 0):
        raise K3LabInputError("K must be real in (0, 1/2)", operation="modulipath.node_transfer_path")
    K = float(np.real(K))
    beta = _beta_of(K)
    m_static = list(m)
    m_static[1] -= 1
    m_beta = [1] + [0] * 11
    start = _nodal_state(ALPHA, K, m_static, m_beta, beta_guess=beta * np.array(ALPHA))
    leg = _Leg.run(_transfer_leg(start, K, beta, reverse=False), steps)
    first, last = leg.samples[0][1], leg.samples[-1][1]
    j = 12  # the moving fibre is the first beta fibre
    res = {
        "F(0)=D_K": abs(first.fibres[j].pos - beta * ALPHA[0]),
        "F(1)=C_K": abs(last.fibres[j].pos - beta * ALPHA[1]),
    }
    return _report([leg], steps, sum(m), res)


def moving_fibre_separation(report: PathReport, index: int = 12) -> float:
    """Smallest distance between fibre ``index`` and any static fibre."""
    best = math.inf
    for s in report.samples:
        z = s.fibres[index].pos
        for f in s.fibres:
            if f.kind == "static":
                best = min(best, abs(f.pos - z))
    return best


def _sorting_perm(state: _State) -> tuple[list[int], list[int]]:
    """Send each a-point to the slot its multiplicity ranks into.

    Slots are ``alpha_1, alpha_2, ...``; the sort is stable so equal
    multiplicities keep their order and the fewest neighbour swaps suffice.
    """
    slot = [int(np.argmin(np.abs(np.array(ALPHA) - z))) for z in state.a]
    mass = [0] * 12
    for f, mm in zip(state.fibres, state.m):
        mass[f.index] += mm
    order = sorted(range(12), key=lambda i: (-mass[i], slot[i]))
    target = [0] * 12
    for rank, i in enumerate(order):
        target[i] = rank
    # neighbour swaps are counted in slot order, so relabel points by slot
    by_slot = sorted(range(12), key=lambda i: slot[i])
    return target, by_slot


def connect_to_canonical(m, K: float = DEFAULT_K, steps: int = DEFAULT_STEPS) -> PathReport:
    """Path on the cuspidal surface over the twelfth roots of unity from
    ``S + sum m_i N_alpha_i`` to ``S + g N_alpha_1``.

    Rounds are either a sorting round (exit to ``K``, permute the a-points
    so that ``m`` becomes descending, return to the cusps) or a transfer
    round (exit to ``K`` moving one unit off ``N_alpha_2`` onto the nearby
    beta fibre, node transfer backwards so that the unit reaches the beta
    fibre next to ``alpha_1``, return).  Each transfer round changes ``m``
    by ``+1`` at ``alpha_1`` and ``-1`` at ``alpha_2``.
    """
    m = _check_m(m)
    g = sum(m)
    if not (0 < K < 0.5):
        raise K3LabInputError("K must be real in (0, 1/2)", operation="modulipath.connect_to_canonical")
    beta = _beta_of(K)
    state = _cusp_state(ALPHA, m)
    legs: list[_Leg] = []

    def by_slot(st: _State) -> list[int]:
        out = [0] * 12
        for f, mm in zip(st.fibres, st.m):
            out[int(np.argmin(np.abs(np.array(ALPHA) - f.pos)))] += mm
        return out

    for _ in range(4 * g + 4):
        ms = by_slot(state)
        if ms[0] == g:
            break
        if ms != sorted(ms, reverse=True):
            target, slot_order = _sorting_perm(state)
            rel = _transpositions([target[i] for i in slot_order])
            swaps = [(slot_order[i], slot_order[j]) for i, j in rel]
            exit_leg = _cusp_leg(state, K, exiting=True).run(steps)
            perm_legs, st = _permutation_legs(exit_leg.samples[-1][1], swaps, steps)
            back = _cusp_leg(st, K, exiting=False).run(steps)
            legs += [exit_leg, *perm_legs, back]
        else:
            exit_leg = _cusp_leg(state, K, exiting=True, transfer_at=ALPHA[1]).run(steps)
            transfer = _transfer_leg(exit_leg.samples[-1][1], K, beta, reverse=True).run(steps)
            back = _cusp_leg(transfer.samples[-1][1], K, exiting=False).run(steps)
            legs += [exit_leg, transfer, back]
        state = legs[-1].samples[-1][1]
    else:
        raise BranchAmbiguity("connect_to_canonical did not reach the canonical curve",
                              operation="modulipath.connect_to_canonical")
    if not legs:
        legs = [_Leg(state, lambda t: (ALPHA, 0), "canonical").run(1)]
    final = by_slot(legs[-1].samples[-1][1])
    res = {
        "canonical_config": float(sum(abs(x - y) for x, y in zip(final, [g] + [0] * 11))),
        "cusp_positions": max(abs(f.pos - ALPHA[int(np.argmin(np.abs(np.array(ALPHA) - f.pos)))])
                              for f in legs[-1].samples[-1][1].fibres),
    }
    return _report(legs, steps, g, res)


# --------------------------------------------------------------------------
# verification


def _delta_coeffs(a, K: complex) -> np.ndarray:
    alpha = _p_coeffs(a)
    shifted = alpha.copy()
    shifted[-1] += 2 * K
    return -432 * np.convolve(alpha, shifted)


def _rel_residual(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.abs(_polyval(c, z)) / _polyval(np.abs(c), np.abs(z).astype(complex)).real


def verify_path(report: PathReport, g: int, tol: float = RESIDUAL_TOL) -> PathReport:
    """Check class bookkeeping, separation, family validity and continuity.

    Continuity between consecutive samples means: the parameters move by
    less than ``eps_cont``; every fibre moves by less than ``eps_cont`` from
    the fibres it continues; those sources are its nearest fibres in the
    previous sample by the same margin the tracker demands (``MATCH_RATIO``),
    so the pairing is unambiguous; and Delta-order and curve multiplicity
    are conserved on every connected group of linked fibres.
    """
    inv: list[str] = []
    cont: list[str] = []
    eps_cont, eps_sep = report.eps_cont, report.eps_sep
    prev = None
    for k, s in enumerate(report.samples):
        pos = np.array([f.pos for f in s.fibres])
        if sum(s.m) != g or any(x < 0 for x in s.m):
            inv.append(f"sample {k}: multiplicities {s.m} do not sum to g = {g}")
        if _min_sep(pos) <= eps_sep:
            inv.append(f"sample {k}: fibres closer than eps_sep")
        if s.degenerate:
            if len(s.fibres) != 12 or any(f.mult != 2 for f in s.fibres):
                inv.append(f"sample {k}: cuspidal member should have 12 double roots")
            bad = _rel_residual(_p_coeffs(s.params.a), pos)
        else:
            if len(s.fibres) != 24 or any(f.mult != 1 for f in s.fibres):
                inv.append(f"sample {k}: nodal member should have 24 simple roots")
            bad = _rel_residual(_delta_coeffs(s.params.a, to_complex(s.params.K)), pos)
        if np.any(bad > tol):
            inv.append(f"sample {k}: fibre positions off the discriminant (residual {bad.max():.2e})")
        if prev is not None:
            cont.extend(_continuity(prev, s, k, eps_cont))
        prev = s
    first, last = report.samples[0], report.samples[-1]
    return replace(
        report,
        continuous=not cont,
        endpoint_match=sum(first.m) == g and sum(last.m) == g,
        invariant_violations=tuple(inv),
        continuity_violations=tuple(cont),
    )


def _continuity(prev: ModuliPathSample, s: ModuliPathSample, k: int, eps: float) -> list[str]:
    out = []
    disp = _param_displacement((prev.params.a, prev.params.K), (s.params.a, s.params.K))
    if disp >= eps:
        out.append(f"sample {k}: parameters jump by {disp:.3g} >= {eps:.3g}")
    n_prev = len(prev.fibres)
    prev_pos = np.array([f.pos for f in prev.fibres])
    new_pos = np.array([f.pos for f in s.fibres])
    d = np.abs(new_pos[:, None] - prev_pos[None, :])
    srcs = [f.src for f in s.fibres]
    if any(not src or max(src) >= n_prev for src in srcs):
        return out + [f"sample {k}: fibre without a valid source"]

    if len(srcs) == n_prev and all(src == (j,) for j, src in enumerate(srcs)):
        # the common case: fibre j continues fibre j
        moved = d.diagonal()
        for j in np.flatnonzero(moved >= eps):
            out.append(f"sample {k}: fibre at {new_pos[j]:.6g} moved {moved[j]:.3g}")
        rivals = d + np.diag(np.full(n_prev, np.inf))
        for j in np.flatnonzero(moved > MATCH_RATIO * rivals.min(axis=1)):
            out.append(f"sample {k}: fibre at {new_pos[j]:.6g} is not clearly nearest to its source")
        if any(f.mult != g.mult for f, g in zip(s.fibres, prev.fibres)):
            out.append(f"sample {k}: Delta order not conserved")
        if s.m != prev.m:
            out.append(f"sample {k}: curve multiplicity not conserved")
        return out

    covered = set()
    for j, src in enumerate(srcs):
        covered |= set(src)
        moved = d[j, list(src)].max()
        if moved >= eps:
            out.append(f"sample {k}: fibre at {new_pos[j]:.6g} moved {moved:.3g}")
        rivals = np.delete(d[j], list(src))
        if rivals.size and moved > MATCH_RATIO * rivals.min():
            out.append(f"sample {k}: fibre at {new_pos[j]:.6g} is not clearly nearest to its source")
    if covered != set(range(n_prev)):
        out.append(f"sample {k}: some fibres of the previous sample vanish")
    # conservation over connected groups of the link graph
    parent = list(range(n_prev))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for src in srcs:
        for i in src[1:]:
            parent[find(i)] = find(src[0])
    groups: dict[int, list] = {}
    for i in range(n_prev):
        groups.setdefault(find(i), [[], []])[0].append(i)
    for j, src in enumerate(srcs):
        groups[find(src[0])][1].append(j)
    for old, new in groups.values():
        if sum(prev.fibres[i].mult for i in old) != sum(s.fibres[j].mult for j in new):
            out.append(f"sample {k}: Delta order not conserved")
        if sum(prev.m[i] for i in old) != sum(s.m[j] for j in new):
            out.append(f"sample {k}: curve multiplicity not conserved")
    return out
