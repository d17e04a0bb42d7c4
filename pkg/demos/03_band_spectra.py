#!/usr/bin/env python3
"""Band spectra of periodic approximations, their gaps and labels.

The level-k approximation repeats the word s^k(star) periodically; its
spectrum is a union of at most |s^k(star)| closed bands.  As k grows the
bands thin out toward the Cantor spectrum, the total measure drops, and
the integrated density of states is constant across every gap at a value
frac(m alpha) -- the gap label.
"""

import numpy as np

from sturmtrace import (
    FIBONACCI,
    JacobiParams,
    band_sum,
    floquet_bands,
    gaps_with_labels,
    hausdorff_distance,
    ids,
    rotation_number,
)
from sturmtrace.spectrum import default_energy_range, floquet_band_tower

params = JacobiParams(1.0, 2.0)
print("== Fibonacci chain, hopping 1, potential 2")
tower = floquet_band_tower(FIBONACCI, params, 10)
for k in (2, 4, 6, 8, 10):
    b = tower[k]
    print("level %2d: %3d bands, measure %.5f, hull [%+.4f, %+.4f]"
          % (k, b.band_count, b.measure(), *b.hull()))

print("\nHausdorff distances between consecutive levels:")
for k in range(4, 10):
    print("  d(sigma_%d, sigma_%d) = %.3e"
          % (k, k + 1, hausdorff_distance(tower[k], tower[k + 1])))

print("\n== gap labels at level 6")
b6 = tower[6]
lo, hi = default_energy_range(params)
mids = [0.5 * (a + b) for a, b in b6.gaps()]
grid = np.unique(np.concatenate([np.linspace(lo, hi, 2049), np.array(mids)]))
table = ids(FIBONACCI, params, 987, grid)
alpha = rotation_number(FIBONACCI).alpha
for g in gaps_with_labels(b6, table, alpha, m_max=21, tol=2.0 / 987):
    tag = "m=%+d" % g.label_m if g.label_m is not None else "(unlabeled)"
    print("  gap [%+.4f, %+.4f]  IDS %.5f  %s" % (g.lo, g.hi, g.ids_value, tag))

print("\n== set sums: weak coupling fills in, strong coupling stays Cantor")
weak = floquet_bands(FIBONACCI, JacobiParams(1.0, 0.5), 10)
strong = floquet_bands(FIBONACCI, JacobiParams(1.0, 16.0), 10,
                       tol=3e-14, merge_tol=2e-13)
print("V=0.5 : sigma+sigma has %d component(s)" % band_sum(weak, weak).band_count)
print("V=16  : sigma+sigma has %d component(s)" % band_sum(strong, strong).band_count)
