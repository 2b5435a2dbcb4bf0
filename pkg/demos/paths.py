"""Move a rational curve around the moduli of (surface, curve) pairs.

Starts from S + 2N_1 + N_2 on the cuspidal surface over the twelfth roots of
unity, transfers a node between neighbouring cusps, then connects a random
configuration to (g, 0, ..., 0).  Writes demos/transfer.svg.

Run: python3 demos/paths.py
"""

import os
import random
import time
from pathlib import Path

from k3lab.cli import trace_svg
from k3lab.modulipath import ALPHA, connect_to_canonical, moving_fibre_separation, node_transfer_path

m = (2, 1) + (0,) * 10
rep = node_transfer_path(m, 0.25, steps=256)
print(f"node transfer: {len(rep.samples)} samples, ok {rep.ok}, "
      f"clearance {moving_fibre_separation(rep):.4f}, residuals {rep.endpoint_residuals}")
Path(__file__).with_name("transfer.svg").write_text(trace_svg(rep))

rnd = random.Random(int(os.environ.get("K3LAB_SEED", "7")))
g = 4
m = [0] * 12
for _ in range(g):
    m[rnd.randrange(12)] += 1
t0 = time.perf_counter()
rep = connect_to_canonical(tuple(m))
end = tuple(rep.last.multiplicity_at(a) for a in ALPHA)
print(f"connect {m} -> {list(end)} in {time.perf_counter() - t0:.1f}s "
      f"over {len(rep.samples)} samples; continuous {rep.continuous}, "
      f"{len(rep.invariant_violations)} invariant violations")
