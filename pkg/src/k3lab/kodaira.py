"""Kodaira fibre types from vanishing orders, and whole-surface reports.

In characteristic zero the type of the fibre over ``p`` is determined by
``a = mu_p(A)``, ``b = mu_p(B)`` and ``d = mu_p(Delta)``:

====================  ========  ======  ===============
orders                type      euler   surface point
====================  ========  ======  ===============
d = 0                 I0        0       smooth
a = 0, d = n          I_n       n       A_{n-1}
a >= 1, b = 1         II        2       smooth
a = 1, b >= 2         III       3       A_1
a >= 2, b = 2         IV        4       A_2
a >= 2, b >= 3, d=6   I0*       6       D_4
a = 2, b = 3, d=6+n   I_n*      6+n     D_{n+4}
a >= 3, b = 4         IV*       8       E_6
a = 3, b >= 5         III*      9       E_7
a >= 4, b = 5         II*       10      E_8
a >= 4, b >= 6        not minimal
====================  ========  ======  ===============
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentOrders, NonMinimal
from .forms import INF, ProjPoint, vanishing_order
from .weierstrass import WeierstrassData, check_minimal

__all__ = [
    "FibreRecord",
    "FibreReport",
    "KodairaType",
    "classify_fibre",
    "classify_orders",
    "fibre_report",
]

_TAGS = ("I0", "I", "II", "III", "IV", "I*", "IV*", "III*", "II*")


@dataclass(frozen=True)
class KodairaType:
    """``tag`` is one of I0, I, II, III, IV, I*, IV*, III*, II*; ``n`` is set
    exactly for I_n (n >= 1) and I_n* (n >= 0)."""

    tag: str
    n: int | None = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown Kodaira tag {self.tag!r}")
        if (self.tag in ("I", "I*")) != (self.n is not None):
            raise ValueError(f"{self.tag} {'needs' if self.n is None else 'takes no'} parameter")
        if self.tag == "I" and self.n < 1 or self.tag == "I*" and self.n < 0:
            raise ValueError(f"bad parameter {self.n} for {self.tag}")

    def __str__(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "I*":
            return f"I{self.n}*"
        return self.tag

    @property
    def euler(self) -> int:
        if self.tag == "I":
            return self.n
        if self.tag == "I*":
            return self.n + 6
        return {"I0": 0, "II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}[self.tag]

    @property
    def rdp(self) -> str:
        """Rational double point on the Weierstrass model ("none" if smooth)."""
        if self.tag == "I":
            return "none" if self.n == 1 else f"A{self.n - 1}"
        if self.tag == "I*":
            return f"D{self.n + 4}"
        return {
            "I0": "none", "II": "none", "III": "A1", "IV": "A2",
            "IV*": "E6", "III*": "E7", "II*": "E8",
        }[self.tag]

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        if text in _TAGS and text not in ("I", "I*"):
            return cls(text)
        if text.startswith("I") and text.endswith("*"):
            return cls("I*", int(text[1:-1]))
        if text.startswith("I"):
            n = int(text[1:])
            return cls("I0") if n == 0 else cls("I", n)
        raise ValueError(f"cannot parse Kodaira type {text!r}")


def classify_orders(a, b, d) -> KodairaType:
    """Row of the decision table matching ``(a, b, d)``.

    Raises :class:`NonMinimal` for ``a >= 4, b >= 6`` and
    :class:`InconsistentOrders` when no row applies (the orders cannot come
    from a Weierstrass model, e.g. ``a = 0, b = 0`` with ``d`` inconsistent).
    """
    if a >= 4 and b >= 6:
        raise NonMinimal(f"orders (a, b) = ({a}, {b}) are not minimal")
    if d == 0:
        return KodairaType("I0")
    if a == 0:
        if b != 0:
            raise InconsistentOrders(f"a = 0 forces b = 0, got (a, b, d) = ({a}, {b}, {d})")
        return KodairaType("I", int(d))
    if b == 0:
        raise InconsistentOrders(f"b = 0 forces a = 0, got (a, b, d) = ({a}, {b}, {d})")
    if b == 1:
        return KodairaType("II")
    if a == 1:
        return KodairaType("III")
    if b == 2:
        return KodairaType("IV")
    if d == 6:
        return KodairaType("I*", 0)
    if a == 2 and b == 3:
        if d == INF or d < 6:
            raise InconsistentOrders(f"(a, b) = (2, 3) with d = {d}")
        return KodairaType("I*", int(d) - 6)
    if b == 4:
        return KodairaType("IV*")
    if a == 3:
        return KodairaType("III*")
    return KodairaType("II*")


@dataclass(frozen=True)
class FibreRecord:
    position: ProjPoint
    orders: tuple
    type: KodairaType
    euler: int
    rdp: str


def _record(p: ProjPoint, a, b, d) -> FibreRecord:
    kt = classify_orders(a, b, d)
    if kt.euler != d:
        raise InconsistentOrders(f"type {kt} has euler number {kt.euler} but mu(Delta) = {d} at {p}")
    return FibreRecord(p, (a, b, d), kt, kt.euler, kt.rdp)


def classify_fibre(W: WeierstrassData, p: ProjPoint, tol: float = 1e-9) -> FibreRecord:
    """Fibre type over ``p``.

    A point that is (numerically) one of the computed discriminant roots uses
    the orders computed there; any other point is classified from direct
    vanishing orders.
    """
    for rec in W.orders:
        if rec.position.distance(p) <= 1e-9:
            return _record(rec.position, rec.a, rec.b, rec.d)
    return _record(
        p, vanishing_order(W.A, p, tol), vanishing_order(W.B, p, tol), vanishing_order(W.delta, p, tol)
    )


@dataclass(frozen=True)
class FibreReport:
    fibres: tuple
    total_euler: int
    surface_smooth: bool
    minimal: bool

    def count(self, kind: str) -> int:
        return sum(1 for f in self.fibres if str(f.type) == kind)


def fibre_report(W: WeierstrassData) -> FibreReport:
    """Classify every singular fibre of ``W``."""
    minimal, _ = check_minimal(W)
    fibres = tuple(_record(r.position, r.a, r.b, r.d) for r in W.orders)
    total = sum(f.euler for f in fibres)
    return FibreReport(
        fibres=fibres,
        total_euler=total,
        surface_smooth=all(f.rdp == "none" for f in fibres),
        minimal=minimal,
    )
