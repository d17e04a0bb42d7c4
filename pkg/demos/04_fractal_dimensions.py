#!/usr/bin/env python3
"""Fractal structure of the spectrum: dimensions, thickness, asymptotics.

Box-counting dimensions of the band approximations, the Newhouse
thickness that controls set sums, the large-coupling dimension
asymptote, the weak-coupling approach to dimension one, and the p -> 0
collapse onto finitely many decoupled-block eigenvalues.
"""

from sturmtrace import (
    FIBONACCI,
    JacobiParams,
    box_dimension,
    floquet_bands,
    gap_opening_rate,
    large_coupling_check,
    local_dimension_profile,
    p_to_zero_scan,
    thickness,
)

print("== dimension and thickness across coupling (level 10)")
for V in (0.5, 2.0, 8.0):
    kw = {} if V < 4 else {"tol": 3e-14, "merge_tol": 2e-13}
    b = floquet_bands(FIBONACCI, JacobiParams(1.0, V), 10, **kw)
    est = box_dimension(b)
    tau = thickness(b)
    print("V=%4.1f: dim %.4f +- %.4f   thickness %.4f" % (V, est.value, est.stderr, tau.value))

print("\n== large coupling: dim x log V -> log(1 + sqrt 2)")
for row in large_coupling_check([16.0, 24.0, 32.0], k=12):
    print("V=%4.0f: dim %.4f  asymptote %.4f  (%d bands)"
          % (row["V"], row["dim"], row["asymptote"], row["bands"]))

print("\n== local dimension profile (genuinely Jacobi parameters)")
# with q (p^2 - 1) > 0 the invariant grows along the spectrum, so the
# local dimension drifts downward with energy; the Schrodinger case is flat
for p, q in ((1.0, 1.5), (1.5, 1.0)):
    profile = local_dimension_profile(FIBONACCI, JacobiParams(p, q), 10, 5)
    cells = ["%.3f" % e.value if e is not None else "  -  " for _, e in profile]
    print("p=%.1f q=%.1f windows:" % (p, q), " ".join(cells))

print("\n== gap opening is linear in the perturbation")
res = gap_opening_rate(FIBONACCI, lambda t: (1.0, t), [0.4, 0.2, 0.1, 0.05],
                       label_m=1, k=10)
for t, w, r in zip(res.t_values, res.widths, res.ratios):
    print("t=%.2f: |gap| = %.5f, ratio %.4f" % (t, w, r))
print("extrapolated rate %.4f (spread %.1f%%, stable=%s)"
      % (res.limit, 100 * res.spread, res.stable))

print("\n== p -> 0: collapse onto decoupled-block eigenvalues")
scan = p_to_zero_scan(FIBONACCI, 1.0, [0.5, 0.2, 0.05], k=8)
print("reference set:", ["%.4f" % v for v in scan["reference"]])
for row in scan["rows"]:
    print("p=%.2f: dim %.3f, measure %.2e, Hausdorff distance %.4f"
          % (row["p"], row["dim"], row["measure"], row["dist_to_reference"]))
