"""Singular fibres of the two model families and of a surface with an E8 point.

Run: python3 demos/fibres.py
"""

from fractions import Fraction

from k3lab import cuspidal_family, fibre_report, nodal_family, roots_of_unity, smoothness_probe
from k3lab.forms import BinaryForm
from k3lab.weierstrass import WeierstrassData


def show(title, W):
    rep = fibre_report(W)
    kinds = {}
    for f in rep.fibres:
        kinds[str(f.type)] = kinds.get(str(f.type), 0) + 1
    probes = [smoothness_probe(W, f.position) for f in rep.fibres]
    print(f"{title}: {kinds}  euler {rep.total_euler}  smooth {rep.surface_smooth}  "
          f"probe smooth at {sum(probes)}/{len(probes)} fibres")


alpha = roots_of_unity()
show("cuspidal, a = 12th roots of unity", cuspidal_family(alpha))
show("nodal, K = 1/4", nodal_family(alpha, Fraction(1, 4)))
show("nodal, K = 0.3i", nodal_family(alpha, 0.3j))

# A II* fibre at t = 0: mu(A) >= 4 and mu(B) = 5 there.
t = BinaryForm([1, 0])  # vanishes at [0:1]
A = t**4 * BinaryForm([1, 0, 0, 0, 1])
B = t**5 * BinaryForm([1, 2, 0, 0, 0, 0, 0, -3])
show("planted II* at t = 0", WeierstrassData(A, B))
