"""Trace maps of primitive invertible two-letter substitutions.

Points (x, y, z) are triples of half-traces of SL(2) transfer-matrix
words.  The elementary polynomial maps

    U(x, y, z) = (2xz - y, x, z)        P(x, y, z) = (x, z, y)

act on triples of the form (x(AB), x(A), x(B)) as the word moves
(A, B) -> (AB, B) and (A, B) -> (B, A), where x(W) is the half-trace of
the matrix word W.  The composite t_a = U^a o P is the building block:
a substitution whose transposed abelianization factors as
M_{a_1} ... M_{a_n}, with M_a = [[a, 1], [1, 0]], has the periodic
trace-map block t_{a_n} o ... o t_{a_1}.  One block application advances
the orbit by one substitution level, so the y coordinate after k blocks
is the half-trace of the transfer matrix over s^k(star).

Every map here preserves the Fricke-Vogt invariant

    I(x, y, z) = x^2 + y^2 + z^2 - 2xyz - 1

and hence the surfaces S_V = {I = V}.  Bounded orbits characterize the
spectrum; orbits that leave the unit-cube region escape to infinity in
all three coordinates, which is the basis of the escape classifier.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .substitution import SubstitutionError, UnsupportedSubstitutionError, star_letter

ESCAPE_NORM_DEFAULT = 1e3
MAX_STEPS_BANDS = 60
MAX_STEPS_POINT = 200


def fricke_vogt(point):
    x, y, z = point
    return x * x + y * y + z * z - 2.0 * x * y * z - 1.0


def u_map(point):
    x, y, z = point
    return (2.0 * x * z - y, x, z)


def u_inverse(point):
    x, y, z = point
    return (y, 2.0 * y * z - x, z)


def p_swap(point):
    x, y, z = point
    return (x, z, y)


def t_factor(a, point):
    """t_a = U^a o P (P applied first)."""
    point = p_swap(point)
    for _ in range(a):
        point = u_map(point)
    return point


def t_factor_inverse(a, point):
    for _ in range(a):
        point = u_inverse(point)
    return p_swap(point)


def fibonacci_map(point):
    """f(x,y,z) = (2xy - z, x, y); identical to t_1."""
    x, y, z = point
    return (2.0 * x * y - z, x, y)


def fibonacci_map_inverse(point):
    # Note: (y, z, 2yz - x).  The form (z, y, 2yz - x) sometimes quoted
    # composes with f to the swap P, not to the identity.
    x, y, z = point
    return (y, z, 2.0 * y * z - x)


# -- recipes -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceMapRecipe:
    """Composition recipe: prefix factors once, then the periodic block.

    ``swapped_start`` records which of the two letters the first word of
    the standard pair tracks: True means the orbit starts from the
    y<->z swap of the curve of initial conditions (pair (0,1), the
    common case), False means the curve itself (pair (1,0)).
    ``star`` is the letter whose iterated images the block advances.
    """

    prefix: tuple = ()
    period: tuple = (1,)
    swapped_start: bool = True
    star: str = "0"
    use_classic_f: bool = False

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if any(a < 1 for a in tuple(self.prefix) + tuple(self.period)):
            raise ValueError("all factors must be >= 1")
        if self.use_classic_f and tuple(self.period) != (1,):
            raise ValueError("classic Fibonacci form requires period (1,)")

    def text(self):
        body = "prefix=[%s];period=[%s]" % (
            ",".join(str(a) for a in self.prefix),
            ",".join(str(a) for a in self.period),
        )
        if not self.swapped_start:
            body += ";start=pair10"
        return body


def parse_recipe(text):
    fields = dict(part.split("=", 1) for part in text.split(";") if part)
    def int_list(v):
        v = v.strip("[]")
        return tuple(int(t) for t in v.split(",") if t)
    return TraceMapRecipe(
        prefix=int_list(fields.get("prefix", "[]")),
        period=int_list(fields.get("period", "[1]")),
        swapped_start=fields.get("start", "pair01") != "pair10",
    )


def factor_matrix_product(matrix):
    """Factor a nonnegative integer 2x2 matrix into M_a factors, or None.

    Returns (a_1, ..., a_n) with matrix = M_{a_1} @ ... @ M_{a_n} and
    M_a = [[a,1],[1,0]]; greedy left-peeling by the continued-fraction
    algorithm.  None when the matrix is not such a product.
    """
    c = [[int(matrix[0][0]), int(matrix[0][1])], [int(matrix[1][0]), int(matrix[1][1])]]
    factors = []
    for _ in range(64):
        if c == [[1, 0], [0, 1]]:
            return tuple(factors) if factors else None
        cands = []
        if c[1][0] > 0:
            cands.append(c[0][0] // c[1][0])
        if c[1][1] > 0:
            cands.append(c[0][1] // c[1][1])
        if not cands:
            return None
        a = min(cands)
        if a < 1:
            return None
        nxt = [[c[1][0], c[1][1]], [c[0][0] - a * c[1][0], c[0][1] - a * c[1][1]]]
        if min(min(row) for row in nxt) < 0:
            return None
        factors.append(a)
        c = nxt
    return None


def recipe_from_substitution(s):
    """Periodic trace-map block of a primitive invertible substitution.

    The transposed abelianization (or its letter-swap conjugate) is
    factored into M_a matrices; the factor list, applied first to last,
    is the periodic block and one block advances one substitution level.
    """
    if not s.primitive:
        raise SubstitutionError("trace map needs a primitive substitution")
    if not s.invertible:
        raise SubstitutionError("trace map needs an invertible substitution")
    (a00, a01), (a10, a11) = s.abelianization
    transposed = [[a00, a10], [a01, a11]]
    swapped = [[a11, a01], [a10, a00]]  # J (A^T) J, J the letter exchange
    star, _power = star_letter(s)
    orders = [(transposed, True, "0"), (swapped, False, "1")]
    if star == "1":
        orders.reverse()
    for matrix, swapped_start, star_used in orders:
        factors = factor_matrix_product(matrix)
        if factors:
            return TraceMapRecipe(prefix=(), period=factors,
                                  swapped_start=swapped_start, star=star_used)
    raise UnsupportedSubstitutionError(
        "abelianization does not factor into M_a matrices; square the substitution"
    )


# -- orbit iteration -----------------------------------------------------------

def _start_point(recipe, point):
    if recipe.swapped_start:
        point = p_swap(point)
    for a in recipe.prefix:
        point = t_factor(a, point)
    return point


def apply_period(recipe, point):
    """One application of the periodic block (the raw map, no readout)."""
    if recipe.use_classic_f:
        return fibonacci_map(point)
    for a in recipe.period:
        point = t_factor(a, point)
    return point


def apply_period_inverse(recipe, point):
    if recipe.use_classic_f:
        return fibonacci_map_inverse(point)
    for a in reversed(recipe.period):
        point = t_factor_inverse(a, point)
    return point


def step(recipe, point, n):
    """Orbit point after the prefix and n periodic blocks.

    The returned triple is arranged so that its x coordinate is the
    half-trace of the transfer matrix over s^n(star) when ``point`` is
    the curve of initial conditions; n = 0 returns the point unchanged.
    """
    if n < 0:
        raise ValueError("need n >= 0")
    if n == 0:
        return tuple(float(c) for c in point)
    q = _start_point(recipe, tuple(float(c) for c in point))
    for _ in range(n):
        q = apply_period(recipe, q)
    if not all(math.isfinite(c) for c in q):
        raise OverflowError("trace-map orbit overflowed at block %d" % n)
    x, y, z = q
    return (y, x, z)


@dataclass(frozen=True)
class OrbitVerdict:
    kind: str  # "bounded-so-far" | "escaped"
    steps_used: int
    last_point: tuple
    max_norm: float


def classify(recipe, point, max_steps=MAX_STEPS_POINT, escape_norm=ESCAPE_NORM_DEFAULT):
    """Escape/bounded dichotomy after at most max_steps periodic blocks.

    Escape requires all three coordinates outside [-1, 1] (the region
    free of periodic points), max-norm above escape_norm, and a strictly
    increasing max-norm over the last three block applications; float
    overflow counts as escape.
    """
    if max_steps < 1:
        raise ValueError("need max_steps >= 1")
    if escape_norm <= 1.0:
        raise ValueError("need escape_norm > 1")
    q = _start_point(recipe, tuple(float(c) for c in point))
    history = [max(abs(c) for c in q)]
    last_finite = q
    for n in range(1, max_steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            q = apply_period(recipe, q)
        if not all(math.isfinite(c) for c in q):
            return OrbitVerdict("escaped", n, last_finite, math.inf)
        last_finite = q
        norm = max(abs(c) for c in q)
        history.append(norm)
        if (
            min(abs(c) for c in q) > 1.0
            and norm > escape_norm
            and len(history) >= 4
            and history[-1] > history[-2] > history[-3] > history[-4]
        ):
            return OrbitVerdict("escaped", n, q, norm)
    return OrbitVerdict("bounded-so-far", max_steps, q, max(history))


def classify_batch(recipe, xs, ys, zs, max_steps=MAX_STEPS_BANDS,
                   escape_norm=ESCAPE_NORM_DEFAULT):
    """Vectorized classify: returns (escaped mask, block count of escape).

    Escape steps are max_steps + 1 for points still bounded; the escape
    predicate matches :func:`classify`.
    """
    x = np.array(xs, dtype=float).ravel().copy()
    y = np.array(ys, dtype=float).ravel().copy()
    z = np.array(zs, dtype=float).ravel().copy()
    if recipe.swapped_start:
        y, z = z.copy(), y.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for a in recipe.prefix:
            y, z = z, y
            for _ in range(a):
                x, y = 2.0 * x * z - y, x
        n_pts = x.size
        escaped_at = np.full(n_pts, max_steps + 1, dtype=np.int64)
        hist = np.zeros((4, n_pts))
        hist[3] = np.maximum(np.abs(x), np.maximum(np.abs(y), np.abs(z)))
        for n in range(1, max_steps + 1):
            for a in recipe.period:
                y, z = z, y
                for _ in range(a):
                    x, y = 2.0 * x * z - y, x
            bad = ~(np.isfinite(x) & np.isfinite(y) & np.isfinite(z))
            norm = np.maximum(np.abs(x), np.maximum(np.abs(y), np.abs(z)))
            small = np.minimum(np.abs(x), np.minimum(np.abs(y), np.abs(z)))
            hist = np.roll(hist, -1, axis=0)
            hist[3] = norm
            live = escaped_at > max_steps
            cond = bad | (
                (small > 1.0)
                & (norm > escape_norm)
                & (hist[3] > hist[2])
                & (hist[2] > hist[1])
                & (hist[1] > hist[0])
            ) if n >= 3 else bad
            hit = live & cond
            escaped_at[hit] = n
            # freeze overflowed lanes to keep the arithmetic quiet
            x[bad] = 0.0
            y[bad] = 0.0
            z[bad] = 0.0
            hist[3][bad] = np.inf
    return escaped_at <= max_steps, escaped_at


def surface_section(V, resolution, recipe=None, chart=(-2.0, 2.0, -2.0, 2.0),
                    max_steps=MAX_STEPS_BANDS, escape_norm=ESCAPE_NORM_DEFAULT):
    """Escape-time raster of a chart of the invariant surface S_V.

    The quadric I(x,y,z) = V is solved for z over an (x, y) grid
    (z = xy +- sqrt((x^2-1)(y^2-1) + V)); both sheets are classified
    pixel by pixel under the periodic block (default: the Fibonacci
    recipe).  Pixels with no real root carry step count -1; bounded
    pixels carry max_steps + 1.
    """
    if resolution < 2:
        raise ValueError("need resolution >= 2")
    if recipe is None:
        recipe = TraceMapRecipe(period=(1,))
    x_lo, x_hi, y_lo, y_hi = chart
    xs = np.linspace(x_lo, x_hi, resolution)
    ys = np.linspace(y_lo, y_hi, resolution)
    gx, gy = np.meshgrid(xs, ys)
    disc = (gx * gx - 1.0) * (gy * gy - 1.0) + V
    ok = disc >= 0
    root = np.sqrt(np.where(ok, disc, 0.0))
    steps = np.full((2, resolution, resolution), -1, dtype=np.int64)
    for sheet, sign in enumerate((1.0, -1.0)):
        gz = gx * gy + sign * root
        mask = ok.ravel()
        if not mask.any():
            continue
        _esc, at = classify_batch(recipe, gx.ravel()[mask], gy.ravel()[mask],
                                  gz.ravel()[mask], max_steps=max_steps,
                                  escape_norm=escape_norm)
        flat = np.full(resolution * resolution, -1, dtype=np.int64)
        flat[mask] = at
        steps[sheet] = flat.reshape(resolution, resolution)
    if not ok.any():
        warnings.warn("surface chart is empty (no real roots); V < -1 sphere gone?")
    return {"V": V, "x": xs, "y": ys, "steps": steps, "max_steps": max_steps}
