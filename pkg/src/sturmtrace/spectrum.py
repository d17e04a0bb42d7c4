"""Periodic-approximation spectra as band sets, gaps, and set operations.

The level-k approximation replaces the substitution sequence by the
periodic repetition of s^k(star); Floquet theory says E belongs to its
spectrum iff the half-trace x_k(E) of the transfer matrix over one
period lies in [-1, 1].  x_k is evaluated through the trace-map
pipeline (cost O(k) per energy instead of O(|s^k|)), and band edges are
located by bisection on |x_k| - 1.

Band detection walks the levels upward: every band of level j is
bracketed inside the union of the bands of levels j-1 and j-2 (plus a
full-range coarse sweep as a safety net), which is what keeps the very
thin high-level bands at strong coupling findable at all.  A
forward-derivative pass splits candidate bands at interior critical
points that exit [-1, 1]: inside an open band the discriminant is
strictly monotone, so such a critical point certifies a gap thinner
than the scan resolution.
"""

import math
from dataclasses import dataclass

import numpy as np

from .jacobi import initial_conditions, initial_conditions_grid
from .tracemap import classify, recipe_from_substitution

BAND_GRID_DEFAULT = 4096
GRID_CAP = 2 ** 20


class BandCountError(RuntimeError):
    """More bands detected than the trace polynomial degree allows."""


@dataclass(frozen=True)
class BandSet:
    """Sorted disjoint closed intervals approximating a spectrum."""

    bands: tuple
    level: int = -1
    params: object = None
    label: str = ""
    edge_tol: float = 0.0

    def __post_init__(self):
        for (a, b) in self.bands:
            if b < a:
                raise ValueError("band with negative length: (%r, %r)" % (a, b))
        for (_, b), (a2, _) in zip(self.bands, self.bands[1:]):
            if a2 <= b:
                raise ValueError("bands must be sorted and disjoint")

    @property
    def band_count(self):
        return len(self.bands)

    def measure(self):
        return float(sum(b - a for a, b in self.bands))

    def hull(self):
        if not self.bands:
            raise ValueError("empty band set has no hull")
        return (self.bands[0][0], self.bands[-1][1])

    def gaps(self):
        """Open gaps between consecutive bands (hull exterior excluded)."""
        return [(b1, a2) for (_, b1), (a2, _) in zip(self.bands, self.bands[1:])]

    def smallest_band(self):
        return min((b - a) for a, b in self.bands)

    def contains(self, E):
        i = np.searchsorted([a for a, _ in self.bands], E, side="right") - 1
        return i >= 0 and E <= self.bands[i][1]


def merge_intervals(intervals, merge_tol=0.0):
    """Union of closed intervals, gluing gaps of width <= merge_tol."""
    ivs = sorted((float(a), float(b)) for a, b in intervals if b >= a)
    out = []
    for a, b in ivs:
        if out and a <= out[-1][1] + merge_tol:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


def band_measure(bands):
    return bands.measure() if isinstance(bands, BandSet) else float(
        sum(b - a for a, b in bands)
    )


def band_sum(A, B, merge_tol=0.0):
    """Minkowski sum of two band sets (interval arithmetic, merged)."""
    a_bands = A.bands if isinstance(A, BandSet) else tuple(A)
    b_bands = B.bands if isinstance(B, BandSet) else tuple(B)
    sums = [(a1 + a2, b1 + b2) for a1, b1 in a_bands for a2, b2 in b_bands]
    return BandSet(merge_intervals(sums, merge_tol), level=-1, label="sum")


def _distance_to_bands(x, bands):
    """Pointwise distance from x (array) to a sorted band union."""
    los = np.array([a for a, _ in bands])
    his = np.array([b for _, b in bands])
    x = np.asarray(x, dtype=float)
    i = np.searchsorted(los, x, side="right") - 1
    inside = (i >= 0) & (x <= his[np.clip(i, 0, len(his) - 1)])
    d_left = np.where(i >= 0, x - his[np.clip(i, 0, len(his) - 1)], np.inf)
    j = np.clip(i + 1, 0, len(los) - 1)
    d_right = np.where(i + 1 < len(los), los[j] - x, np.inf)
    return np.where(inside, 0.0, np.minimum(d_left, d_right))


def hausdorff_distance(A, B):
    """Hausdorff distance between two unions of closed intervals."""
    a_bands = tuple(A.bands if isinstance(A, BandSet) else A)
    b_bands = tuple(B.bands if isinstance(B, BandSet) else B)
    if not a_bands or not b_bands:
        raise ValueError("Hausdorff distance needs nonempty sets")

    def directed(src, dst):
        pts = [np.array([a for a, _ in src]), np.array([b for _, b in src])]
        if len(dst) > 1:
            mids = np.array([0.5 * (r1 + l2)
                             for (_, r1), (l2, _) in zip(dst, dst[1:])])
            inside_src = _distance_to_bands(mids, src) == 0.0
            pts.append(mids[inside_src])
        x = np.concatenate(pts)
        return float(np.max(_distance_to_bands(x, dst)))

    return max(directed(a_bands, b_bands), directed(b_bands, a_bands))


# -- half-trace evaluation ------------------------------------------------------

def half_trace_grid(recipe, params, E, k):
    """x_k(E) over an energy grid via k periodic-block applications.

    After the start swap and k blocks the y coordinate carries the
    half-trace over s^k(star); k = 0 returns the single-letter trace.
    """
    E = np.asarray(E, dtype=float)
    if k == 0:
        if recipe.star == "0":
            return E / 2.0
        return (E - params.q) / (2.0 * params.p)
    x, y, z = initial_conditions_grid(params, E)
    x, y, z = x.copy(), y.copy(), z.copy()
    if recipe.swapped_start:
        y, z = z, y
    with np.errstate(over="ignore", invalid="ignore"):
        for a in tuple(recipe.prefix) + tuple(recipe.period) * k:
            y, z = z, y
            for _ in range(a):
                x, y = 2.0 * x * z - y, x
    return y


def half_trace_dual_grid(recipe, params, E, k):
    """(x_k, dx_k/dE) over a grid, by forward-mode differentiation."""
    E = np.asarray(E, dtype=float)
    p, q = params.p, params.q
    if k == 0:
        if recipe.star == "0":
            return E / 2.0, np.full_like(E, 0.5)
        return (E - q) / (2.0 * p), np.full_like(E, 1.0 / (2.0 * p))
    x, y, z = initial_conditions_grid(params, E)
    x, y, z = x.copy(), y.copy(), z.copy()
    dx = (2.0 * E - q) / (2.0 * p)
    dy = np.full_like(E, 1.0 / (2.0 * p))
    dz = np.full_like(E, 0.5)
    if recipe.swapped_start:
        y, z = z, y
        dy, dz = dz, dy
    with np.errstate(over="ignore", invalid="ignore"):
        for a in tuple(recipe.prefix) + tuple(recipe.period) * k:
            y, z, dy, dz = z, y, dz, dy
            for _ in range(a):
                x, y, dx, dy = 2.0 * x * z - y, x, 2.0 * (dx * z + x * dz) - dy, dx
    return y, dy


def default_energy_range(params):
    """Interval guaranteed to contain every periodic-approximation spectrum."""
    r = 2.0 + abs(params.q) + 2.0 * abs(params.p)
    return (-r, r)


# -- band detection ---------------------------------------------------------------

def _batched_bisect(g, ins, outs, tol):
    """Bisect g <= 0 boundaries for paired (inside, outside) abscissae."""
    ins = np.asarray(ins, dtype=float).copy()
    outs = np.asarray(outs, dtype=float).copy()
    if ins.size == 0:
        return ins
    for _ in range(200):
        if np.max(np.abs(ins - outs)) <= tol:
            break
        mid = 0.5 * (ins + outs)
        with np.errstate(invalid="ignore", over="ignore"):
            gm = g(mid)
        take = np.where(np.isfinite(gm), gm, np.inf) <= 0.0
        ins = np.where(take, mid, ins)
        outs = np.where(take, outs, mid)
    return 0.5 * (ins + outs)


def _scan_windows(g, jobs, tol):
    """Bands of {g <= 0} over a batch of (lo, hi, n) scan jobs."""
    jobs = [(a, b, n) for (a, b, n) in jobs if b > a]
    if not jobs:
        return []
    grids = [np.linspace(a, b, n) for a, b, n in jobs]
    all_E = np.concatenate(grids)
    with np.errstate(invalid="ignore", over="ignore"):
        vals = g(all_E)
    inside_all = np.where(np.isfinite(vals), vals, np.inf) <= 0.0
    offsets = np.cumsum([0] + [n for _, _, n in jobs])
    pending = []   # (fixed_left or None, fixed_right or None)
    br_in, br_out = [], []
    br_slot = []   # (band index, side)
    for w, (a, b, n) in enumerate(jobs):
        inside = inside_all[offsets[w]:offsets[w + 1]]
        E = grids[w]
        idx = np.flatnonzero(inside)
        if idx.size == 0:
            continue
        brk = np.flatnonzero(np.diff(idx) > 1)
        starts = np.concatenate([idx[:1], idx[brk + 1]])
        ends = np.concatenate([idx[brk], idx[-1:]])
        for s_i, e_i in zip(starts, ends):
            slot = len(pending)
            left = E[0] if s_i == 0 else None
            right = E[-1] if e_i == n - 1 else None
            if left is None:
                br_in.append(E[s_i])
                br_out.append(E[s_i - 1])
                br_slot.append((slot, 0))
            if right is None:
                br_in.append(E[e_i])
                br_out.append(E[e_i + 1])
                br_slot.append((slot, 1))
            pending.append([left, right])
    edges = _batched_bisect(g, br_in, br_out, tol)
    for (slot, side), e in zip(br_slot, edges):
        pending[slot][side] = float(e)
    out = []
    for left, right in pending:
        if right < left:
            left = right = 0.5 * (left + right)
        out.append((left, right))
    return out


def _refine_level(dual, bands, tol, depth=0):
    """Split candidate bands at interior critical points that exit [-1, 1]."""
    if not bands or depth > 6:
        return list(bands)
    n = 129
    eligible = [(a, b) for a, b in bands
                if (b - a) > max(8.0 * tol, 1e-14 * max(abs(a), abs(b), 1.0))]
    if not eligible:
        return list(bands)
    grids = [np.linspace(a, b, n) for a, b in eligible]
    all_E = np.concatenate(grids)
    with np.errstate(invalid="ignore", over="ignore"):
        x, dx = dual(all_E)
    g_abs = np.abs(x) - 1.0
    splits = {}
    crit_lo, crit_hi, crit_sign, crit_band = [], [], [], []
    for w, (a, b) in enumerate(eligible):
        sl = slice(w * n, (w + 1) * n)
        gw, dw, Ew = g_abs[sl], dx[sl], grids[w]
        out_idx = np.flatnonzero(gw > 1e-12)
        if out_idx.size:
            splits.setdefault((a, b), []).extend(Ew[out_idx].tolist())
            continue
        flips = np.flatnonzero(np.sign(dw[:-1]) * np.sign(dw[1:]) < 0)
        for i in flips:
            crit_lo.append(Ew[i])
            crit_hi.append(Ew[i + 1])
            crit_sign.append(np.sign(dw[i]))
            crit_band.append((a, b))
    if crit_lo:
        lo = np.array(crit_lo)
        hi = np.array(crit_hi)
        sgn = np.array(crit_sign)
        for _ in range(120):
            if np.max(hi - lo) <= max(tol * 1e-2, 1e-16 * np.max(np.abs(hi))):
                break
            mid = 0.5 * (lo + hi)
            with np.errstate(invalid="ignore", over="ignore"):
                _xm, dm = dual(mid)
            same = np.sign(dm) == sgn
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        crit = 0.5 * (lo + hi)
        with np.errstate(invalid="ignore", over="ignore"):
            xc, _ = dual(crit)
        for c, xv, band in zip(crit, np.abs(xc) - 1.0, crit_band):
            if xv > 1e-12:
                splits.setdefault(band, []).append(float(c))
    if not splits:
        return list(bands)
    g_fn = lambda e: np.abs(dual(e)[0]) - 1.0
    out = []
    rescan = []
    for band in bands:
        if band not in splits:
            out.append(band)
            continue
        cuts = sorted(set(splits[band]))
        bounds = [band[0]] + cuts + [band[1]]
        rescan.extend((lo_, hi_, 257) for lo_, hi_ in zip(bounds, bounds[1:]))
    if rescan:
        pieces = _scan_windows(g_fn, rescan, tol)
        out.extend(_refine_level(dual, pieces, tol, depth + 1))
    return out


def _word_length(s, star, k):
    m = s.abelianization_array().astype(object)
    row = np.array([1, 0], dtype=object) if star == "0" else np.array([0, 1], dtype=object)
    v = row @ np.linalg.matrix_power(m, k) if k else row
    return int(v.sum())


def floquet_band_tower(s, params, k_max, e_range=None, grid=BAND_GRID_DEFAULT,
                       tol=None, merge_tol=None, recipe=None):
    """Band sets of every level 0..k_max, computed in one upward sweep."""
    if recipe is None:
        recipe = recipe_from_substitution(s)
    if e_range is None:
        e_range = default_energy_range(params)
    lo, hi = float(e_range[0]), float(e_range[1])
    span = hi - lo
    if span <= 0:
        raise ValueError("empty energy range")
    if tol is None:
        tol = 1e-12 * span
    if merge_tol is None:
        merge_tol = 1e-11 * span
    levels = {}
    for j in range(0, k_max + 1):
        g = lambda E, j=j: np.abs(half_trace_grid(recipe, params, E, j)) - 1.0
        dual = lambda E, j=j: half_trace_dual_grid(recipe, params, E, j)
        windows = [(lo, hi)]
        if j >= 1:
            cand = list(levels[j - 1])
            if j >= 2:
                cand += list(levels[j - 2])
            padded = [(a - max(4.0 * tol, 0.02 * (b - a)),
                       b + max(4.0 * tol, 0.02 * (b - a))) for a, b in cand]
            windows = [(max(lo, a), min(hi, b)) for a, b in merge_intervals(padded)]
        bands = _adaptive_level(g, windows, (lo, hi), span, grid, tol, merge_tol)
        bands = merge_intervals(_refine_level(dual, bands, tol), merge_tol)
        degree = _word_length(s, recipe.star, j)
        if len(bands) > degree:
            raise BandCountError(
                "level %d: %d bands exceed polynomial degree %d" % (j, len(bands), degree)
            )
        levels[j] = bands
    return {
        j: BandSet(levels[j], level=j, params=params, label=s.text(), edge_tol=tol)
        for j in range(k_max + 1)
    }


def floquet_bands(s, params, k, e_range=None, grid=BAND_GRID_DEFAULT,
                  tol=None, merge_tol=None, recipe=None):
    """Level-k periodic-approximation spectrum as a BandSet.

    Candidate windows for each level are the (inflated) bands of the two
    previous levels together with a coarse full-range sweep, refined
    adaptively until the band count is stable across two rounds.  Band
    edges are bisected to ``tol`` (default 1e-12 of the energy range)
    and bands separated by less than ``merge_tol`` (default 1e-11 of the
    range) are merged.
    """
    tower = floquet_band_tower(s, params, k, e_range=e_range, grid=grid,
                               tol=tol, merge_tol=merge_tol, recipe=recipe)
    return tower[k]


def _adaptive_level(g, windows, full_range, span, grid, tol, merge_tol):
    counts = []
    h = span / max(grid, 16)
    lo, hi = full_range
    bands = ()
    for _round in range(12):
        jobs = [(a, b, int(min(2 ** 17, max(129, math.ceil((b - a) / h) + 1))))
                for a, b in windows]
        jobs.append((lo, hi, int(min(2 ** 17, max(grid, 65)))))
        found = _scan_windows(g, jobs, tol)
        bands = merge_intervals(found, merge_tol)
        counts.append(len(bands))
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            break
        if span / h > GRID_CAP:
            break
        h /= 2.0
    return bands


# -- dynamical spectrum, gaps, labels --------------------------------------------

def dynamical_spectrum_probe(s, params, E_list, max_steps=200, escape_norm=1e3,
                             recipe=None):
    """classify() of the curve of initial conditions at each energy."""
    if recipe is None:
        recipe = recipe_from_substitution(s)
    out = []
    for E in E_list:
        out.append(classify(recipe, initial_conditions(params, float(E)),
                            max_steps=max_steps, escape_norm=escape_norm))
    return out


@dataclass(frozen=True)
class Gap:
    lo: float
    hi: float
    ids_value: float
    label_value: float = math.nan
    label_m: int | None = None

    @property
    def width(self):
        return self.hi - self.lo


def combinatorial_gap_label(s, bands, gap_index, recipe=None):
    """Gap label from band counting alone (no IDS evaluation).

    The level-k approximation has period length q_k; the gap with j
    bands below it carries IDS value j/q_k, which converges to the
    label frac(m alpha) with m = j * inverse(q_{k-1}) mod q_k (balanced
    residue).  Requires the band set to be completely detected, i.e.
    band count equal to q_k.
    """
    if recipe is None:
        recipe = recipe_from_substitution(s)
    k = bands.level
    if k < 1:
        raise ValueError("need a level >= 1 band set")
    q_k = _word_length(s, recipe.star, k)
    q_km1 = _word_length(s, recipe.star, k - 1)
    if bands.band_count != q_k:
        raise ValueError("band set incomplete: %d of %d bands; labels undefined"
                         % (bands.band_count, q_k))
    j = int(gap_index)
    if not 1 <= j <= q_k - 1:
        raise ValueError("gap index out of range")
    m = (j * pow(q_km1, -1, q_k)) % q_k
    if m > q_k // 2:
        m -= q_k
    return m


def gap_index_for_label(s, bands, m, recipe=None):
    """Inverse of :func:`combinatorial_gap_label`: 1-based gap index of label m."""
    if recipe is None:
        recipe = recipe_from_substitution(s)
    k = bands.level
    q_k = _word_length(s, recipe.star, k)
    q_km1 = _word_length(s, recipe.star, k - 1)
    if bands.band_count != q_k:
        raise ValueError("band set incomplete: %d of %d bands; labels undefined"
                         % (bands.band_count, q_k))
    j = (int(m) * q_km1) % q_k
    if not 1 <= j <= q_k - 1:
        raise ValueError("label m = %d has no gap at level %d" % (m, k))
    return j


def gaps_with_labels(bands, ids_table, alpha, m_max=34, tol=1e-3):
    """Label spectral gaps with IDS plateau values matched to frac(m alpha).

    Each interior gap gets the IDS value at its midpoint; the nearest
    label frac(m alpha), |m| <= m_max (ties to smaller |m|), is attached
    when it lies within ``tol``, otherwise label_m stays None.
    """
    labels = []
    for m in range(-m_max, m_max + 1):
        labels.append((math.fmod(m * alpha, 1.0) % 1.0, m))
    out = []
    for g_lo, g_hi in bands.gaps():
        mid = 0.5 * (g_lo + g_hi)
        value = float(ids_table.value_at(mid))
        best = min(labels, key=lambda lm: (abs(lm[0] - value), abs(lm[1])))
        if abs(best[0] - value) <= tol:
            out.append(Gap(g_lo, g_hi, value, best[0], best[1]))
        else:
            out.append(Gap(g_lo, g_hi, value))
    return out
