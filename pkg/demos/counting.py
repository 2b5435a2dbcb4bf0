"""Counting rational curves in |S + gE| and a few Severi-variety numbers.

Run: python3 demos/counting.py
"""

import math

from k3lab import enumerate_rational_members, quartic_severi_numbers, yau_zaslow
from k3lab.curves import very_ample_and_bound

print("Yau-Zaslow numbers n_g:", yau_zaslow(8))

# On the nodal model there are 24 I1 fibres; a rational curve S + sum m_i N_i
# of genus g is a composition of g into 24 parts.
for g in range(1, 5):
    members = enumerate_rational_members(g, 24)
    print(f"g = {g}: {members.count} configurations (C({g + 23}, 23) = {math.comb(g + 23, 23)})")
first = next(iter(enumerate_rational_members(3, 12)))
print("first genus-3 configuration on 12 cusps:", first.m)

for l in (1, 2):
    q = quartic_severi_numbers(l)
    print(f"quartic sections of a degree-{l} surface: dim W_S = {q.dim_W_S}, "
          f"kernel = {q.kernel_dim}, fibre = {q.fibre_dim}")

print("smallest geometric genus of an irreducible curve in |L|:")
print({g: very_ample_and_bound(g).h_min_irreducible for g in range(3, 13)})
