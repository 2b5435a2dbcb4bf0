"""Curve classes on an elliptic K3 surface with section ``S`` and fibre ``E``.

The lattice spanned by ``S`` and ``E`` has intersection form
``S.S = -2, E.E = 0, S.E = 1``.  The rational members of ``|S + gE|`` are
``S + sum(m_i N_i)`` with ``N_i`` the singular fibres and ``sum(m_i) = g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterator, Sequence

import networkx as nx

from .errors import BadDegree, InvalidGenus, K3LabInputError

__all__ = [
    "CombGraph",
    "CurveConfig",
    "LatticeClass",
    "SeveriQuery",
    "enumerate_rational_members",
    "intersect",
    "polarization_check",
    "quartic_severi_numbers",
    "severi_numbers",
    "unramified_comb",
    "very_ample_and_bound",
    "yau_zaslow",
]


@dataclass(frozen=True)
class LatticeClass:
    """``s * S + e * E``."""

    s: int
    e: int

    def __add__(self, other: "LatticeClass") -> "LatticeClass":
        return LatticeClass(self.s + other.s, self.e + other.e)

    def __rmul__(self, k: int) -> "LatticeClass":
        return LatticeClass(k * self.s, k * self.e)


SECTION = LatticeClass(1, 0)
FIBRE = LatticeClass(0, 1)


def intersect(c1: LatticeClass, c2: LatticeClass) -> int:
    return -2 * c1.s * c2.s + c1.s * c2.e + c2.s * c1.e


@dataclass(frozen=True)
class Polarization:
    self_intersection: int
    primitive: bool
    ample: bool


def polarization_check(c: LatticeClass, g: int | None = None) -> Polarization:
    """Self-intersection, primitivity and ampleness of ``c``.

    Ampleness is tested against ``S`` and ``E`` only (positive square and
    positive degree on both), which decides it on the rank-2 lattice of a
    general elliptic K3 with section.  ``g`` is accepted for symmetry with
    the genus-indexed callers and otherwise unused.
    """
    if c.s < 0 or c.e < 0 or (c.s == 0 and c.e == 0):
        raise K3LabInputError("class must have nonnegative coefficients, not both zero",
                              operation="curves.polarization_check")
    sq = intersect(c, c)
    ample = sq > 0 and intersect(c, SECTION) > 0 and intersect(c, FIBRE) > 0
    return Polarization(sq, math.gcd(c.s, c.e) == 1, ample)


# --------------------------------------------------------------------------
# rational members


@dataclass(frozen=True)
class CurveConfig:
    """``S + sum(m_i N_i)`` with ``sum(m_i) = g``.

    ``fibres`` identifies the singular fibres (any hashable labels, usually
    positions) and ``m`` holds the matching multiplicities.
    """

    g: int
    m: tuple
    fibres: tuple = ()

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        if not self.fibres:
            object.__setattr__(self, "fibres", tuple(range(len(m))))
        elif len(self.fibres) != len(m):
            raise K3LabInputError("one multiplicity per fibre", operation="curves.CurveConfig")
        if self.g < 1:
            raise InvalidGenus(f"genus must be positive, got {self.g}", operation="curves.CurveConfig")
        if any(x < 0 for x in m):
            raise K3LabInputError("multiplicities must be nonnegative", operation="curves.CurveConfig")
        if sum(m) != self.g:
            raise K3LabInputError(f"multiplicities sum to {sum(m)}, not g = {self.g}",
                                  operation="curves.CurveConfig")

    @property
    def multiplicities(self) -> dict[Hashable, int]:
        return dict(zip(self.fibres, self.m))

    def lattice_class(self) -> LatticeClass:
        """Every singular fibre is numerically ``E``, so the class is ``S + gE``."""
        return LatticeClass(1, self.g)


def _compositions(g: int, s: int) -> Iterator[tuple[int, ...]]:
    # stars and bars, in lexicographic order of (m_1, ..., m_s)
    for bars in combinations(range(g + s - 1), s - 1):
        prev = -1
        m = []
        for b in bars:
            m.append(b - prev - 1)
            prev = b
        m.append(g + s - 2 - prev)
        yield tuple(m)


class RationalMembers:
    """Iterable of every ``CurveConfig`` of genus ``g`` over the given fibres,
    in ascending lexicographic order; ``count`` is known up front."""

    def __init__(self, g: int, fibre_ids: Sequence[Hashable]):
        if g < 1 or not fibre_ids:
            raise K3LabInputError("need g >= 1 and at least one fibre",
                                  operation="curves.enumerate_rational_members")
        self.g = g
        self.fibre_ids = tuple(fibre_ids)
        self.count = math.comb(g + len(self.fibre_ids) - 1, len(self.fibre_ids) - 1)

    def __len__(self) -> int:
        return self.count

    def __iter__(self) -> Iterator[CurveConfig]:
        for m in _compositions(self.g, len(self.fibre_ids)):
            yield CurveConfig(self.g, m, self.fibre_ids)


def enumerate_rational_members(g: int, fibre_ids: Sequence[Hashable] | int) -> RationalMembers:
    if isinstance(fibre_ids, int):
        fibre_ids = range(fibre_ids)
    return RationalMembers(g, list(fibre_ids))


# --------------------------------------------------------------------------
# counting series


def yau_zaslow(g_max: int) -> list[int]:
    """Coefficients ``n_0..n_{g_max}`` of ``prod_{n>=1} (1 - q^n)^-24``.

    Each factor ``(1 - q^n)^-1`` is a geometric series, so multiplying by it
    twenty-four times is a running sum with stride ``n``.
    """
    if g_max < 0:
        raise K3LabInputError("g_max must be nonnegative", operation="curves.yau_zaslow")
    c = [1] + [0] * g_max
    for n in range(1, g_max + 1):
        for _ in range(24):
            for i in range(n, g_max + 1):
                c[i] += c[i - n]
    return c


# --------------------------------------------------------------------------
# Severi numerics


@dataclass(frozen=True)
class SeveriQuery:
    g: int
    k: int
    h: int

    @property
    def arithmetic_genus(self) -> int:
        return 1 + self.k**2 * (self.g - 1)

    @property
    def self_intersection(self) -> int:
        """``(kL)^2`` for the primitive ``L`` with ``L^2 = 2g - 2``."""
        return self.k**2 * (2 * self.g - 2)


@dataclass(frozen=True)
class SeveriNumbers:
    dimension: int
    node_count: int


def severi_numbers(q: SeveriQuery) -> SeveriNumbers:
    """Expected dimension ``h`` and node count ``p_a - h`` of ``V_h``."""
    pa = q.arithmetic_genus
    if q.h < 0 or q.h > pa:
        raise InvalidGenus(f"geometric genus {q.h} outside [0, {pa}]")
    return SeveriNumbers(q.h, pa - q.h)


@dataclass(frozen=True)
class AmpleBound:
    k_very_ample_level: int
    multiple_very_ample_level: int
    h_min_irreducible: int


def very_ample_and_bound(g: int, k: int = 1) -> AmpleBound:
    """Very-ampleness levels of ``L`` and ``kL`` and the smallest geometric
    genus of an irreducible curve in ``|kL|`` allowed by the bound
    ``h >= (k(6k - 1)(g - 1) + 4) / 6``."""
    if g <= 2 or k < 1:
        raise InvalidGenus(f"need g > 2 and k >= 1, got g = {g}, k = {k}",
                           operation="curves.very_ample_and_bound")
    num = k * (6 * k - 1) * (g - 1) + 4
    return AmpleBound(
        k_very_ample_level=(2 * g - 2) // 4,
        multiple_very_ample_level=k * (g - 1) // 2,
        h_min_irreducible=-(-num // 6),
    )


@dataclass(frozen=True)
class QuarticSeveri:
    dim_W_S: int
    kernel_dim: int
    fibre_dim: int


def quartic_severi_numbers(l: int) -> QuarticSeveri:
    """Dimension counts for rational nodal quartic sections of a surface
    ``S`` of degree ``l`` in P^3.

    ``dim_W_S``: Severi variety of rational nodal curves in ``|O_S(4)|``,
    ``-K_S . O_S(4) - 1 = 4l(4 - l) - 1``.  ``kernel_dim``: quartic forms
    vanishing on such a curve ``C`` (multiples of ``S`` plus one more),
    ``C(7 - l, 3) + 1``.  ``fibre_dim``: quartic surfaces meeting ``S`` in a
    member of ``W_S``, ``dim_W_S + kernel_dim - 1 = 35 - C(l + 3, 3)``.
    """
    if l not in (1, 2):
        raise BadDegree(f"only l = 1, 2 are supported, got {l}")
    dim_w = 4 * l * (4 - l) - 1
    kernel = math.comb(7 - l, 3) + 1
    fibre = dim_w + kernel - 1
    assert fibre == 35 - math.comb(l + 3, 3)
    return QuarticSeveri(dim_w, kernel, fibre)


# --------------------------------------------------------------------------
# comb graph


@dataclass
class CombGraph:
    """Dual graph of ``T_0 + sum_j (D_{j,1} + ... + D_{j,m_j})``.

    Vertex ``"T0"`` is the section component; ``(j, i)`` is ``D_{j,i}``.
    Chains hang off the spine at the fibre-section intersection.
    """

    graph: nx.Graph = field(default_factory=nx.Graph)
    spine: str = "T0"

    @property
    def chains(self) -> dict[Hashable, list]:
        out: dict[Hashable, list] = {}
        for v in self.graph.nodes:
            if v != self.spine:
                out.setdefault(v[0], []).append(v)
        return {j: sorted(vs, key=lambda v: v[1]) for j, vs in out.items()}

    @property
    def is_tree(self) -> bool:
        return nx.is_tree(self.graph)

    @property
    def arithmetic_genus(self) -> int:
        """First Betti number of the dual graph (components are rational)."""
        g = self.graph
        return g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)


def unramified_comb(cfg: CurveConfig) -> CombGraph:
    comb = CombGraph()
    comb.graph.add_node(comb.spine)
    for j, mj in zip(cfg.fibres, cfg.m):
        prev = comb.spine
        for i in range(1, mj + 1):
            comb.graph.add_edge(prev, (j, i))
            prev = (j, i)
    return comb
