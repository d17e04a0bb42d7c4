"""Integrated density of states and local scaling exponents.

N(E) is approximated by the normalized Dirichlet eigenvalue count of
the operator restricted to the first L sites of the fixed point,
N(E, L)/L; eigenvalue counts come from the Sturm pivot recursion, so a
full table over an energy grid costs one O(L) sweep per grid point.
The IDS is constant across spectral gaps, and on a gap its value is a
label frac(m alpha) from the gap labeling theorem.

The local scaling exponent at E is the log-log slope of the measure
N(E + eps) - N(E - eps) against eps over a dyadic ladder; exact
dimensionality says these exponents exist dN-almost everywhere, which
is sampled here by inverse-transform draws from the IDS itself.
"""

from dataclasses import dataclass

import numpy as np

from .jacobi import dirichlet_restriction, eigen_count_below_grid
from .substitution import fixed_point_prefix


@dataclass(frozen=True)
class IdsTable:
    """Monotone sampled representation of the integrated density of states."""

    e_grid: tuple
    n_values: tuple
    L: int

    def __post_init__(self):
        e = np.asarray(self.e_grid)
        n = np.asarray(self.n_values)
        if e.ndim != 1 or e.shape != n.shape or e.size < 2:
            raise ValueError("need aligned 1-d grids with >= 2 points")
        if (np.diff(e) <= 0).any():
            raise ValueError("energy grid must be strictly increasing")
        if (np.diff(n) < 0).any():
            raise ValueError("IDS values must be nondecreasing")

    def value_at(self, E):
        """Step lookup: the tabulated value at the last grid point <= E."""
        e = np.asarray(self.e_grid)
        i = int(np.searchsorted(e, E, side="right")) - 1
        i = min(max(i, 0), e.size - 1)
        return self.n_values[i]

    def quantile(self, u):
        """Inverse transform: smallest grid energy with N(E) >= u."""
        n = np.asarray(self.n_values)
        i = int(np.searchsorted(n, u, side="left"))
        i = min(max(i, 0), n.size - 1)
        return self.e_grid[i]


def ids_counter(s, params, L):
    """Memoized callable E -> N(E, L)/L for the length-L Dirichlet truncation."""
    spec = dirichlet_restriction(params, fixed_point_prefix(s, L))

    def counter(E):
        E_arr = np.atleast_1d(np.asarray(E, dtype=float))
        vals = eigen_count_below_grid(spec, E_arr) / float(L)
        return vals if np.ndim(E) else float(vals[0])

    counter.L = L
    counter.spec = spec
    return counter


def ids(s, params, L, e_grid):
    """IDS table over an energy grid spanning the spectrum hull."""
    if L < 8:
        raise ValueError("need L >= 8")
    counter = ids_counter(s, params, L)
    e = np.asarray(e_grid, dtype=float)
    return IdsTable(tuple(e.tolist()), tuple(counter(e).tolist()), L)


def ids_scaling_exponent(ids_fn, E, eps_ladder):
    """Least-squares slope of log N(E-eps, E+eps) versus log eps.

    ids_fn is an IDS evaluator (see :func:`ids_counter`); the ladder
    needs >= 5 values and positive window mass at the smallest scale,
    which must exceed the 2/L resolution floor when L is known.
    """
    eps = np.sort(np.asarray(eps_ladder, dtype=float))
    if eps.size < 5:
        raise ValueError("need at least 5 ladder scales")
    vals = np.asarray(ids_fn(np.concatenate([E + eps, E - eps])), dtype=float)
    mass = vals[: eps.size] - vals[eps.size :]
    floor = 2.0 / ids_fn.L if hasattr(ids_fn, "L") else 0.0
    if mass[0] <= floor:
        raise ValueError("insufficient resolution: window mass %.3g at eps=%.3g"
                         % (mass[0], eps[0]))
    lx, ly = np.log(eps), np.log(mass)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    dof = max(eps.size - 2, 1)
    stderr = float(np.sqrt(np.sum(resid ** 2) / dof / np.sum((lx - lx.mean()) ** 2)))
    return float(slope), stderr


def dyadic_ladder(eps_max, n_scales=8, ratio=0.5):
    return tuple(eps_max * ratio ** i for i in range(n_scales))


@dataclass(frozen=True)
class DosSummary:
    d_min: float
    d_median: float
    d_max: float
    exponents: tuple
    energies: tuple
    skipped: int


def dos_dimension_summary(s, params, sample_count, L, seed=0, eps_max=None,
                          n_scales=7, table_points=4097):
    """Scaling exponents at dN-sampled energies, summarized.

    Energies are drawn by inverse-transform sampling of the IDS table
    (so gap plateaus are never hit); samples whose ladder underflows the
    2/L resolution are skipped and counted.
    """
    if sample_count < 1:
        raise ValueError("need sample_count >= 1")
    from .spectrum import default_energy_range

    lo, hi = default_energy_range(params)
    counter = ids_counter(s, params, L)
    table = ids(s, params, L, np.linspace(lo, hi, table_points))
    if eps_max is None:
        eps_max = (hi - lo) / 64.0
    rng = np.random.default_rng(seed)
    draws = rng.uniform(1.0 / L, 1.0 - 1.0 / L, size=sample_count)
    exps, energies, skipped = [], [], 0
    ladder = dyadic_ladder(eps_max, n_scales)
    for u in draws:
        E = float(table.quantile(u))
        try:
            d, _err = ids_scaling_exponent(counter, E, ladder)
        except ValueError:
            skipped += 1
            continue
        exps.append(d)
        energies.append(E)
    if not exps:
        raise RuntimeError("all samples below resolution; increase L or eps_max")
    arr = np.array(exps)
    return DosSummary(float(arr.min()), float(np.median(arr)), float(arr.max()),
                      tuple(exps), tuple(energies), skipped)
