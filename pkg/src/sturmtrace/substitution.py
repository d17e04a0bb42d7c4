"""Two-letter substitutions: primitivity, invertibility, fixed points.

Words over the alphabet {0, 1} are plain Python strings of '0'/'1'
characters.  A substitution s is given by the two image words s(0) and
s(1) and extends to words by concatenation.  Throughout we care about
two structural properties:

* primitivity -- some power s^k maps every letter to a word containing
  both letters (equivalently, some power of the 2x2 letter-count matrix
  is entrywise positive);
* invertibility -- s extends to an automorphism of the free group on
  two generators (Nielsen: the image of the commutator [0,1] must be
  conjugate to [0,1] or its inverse).

The text format for substitutions is ``0->01;1->0``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

WORD_LENGTH_CAP = 2 ** 24


class SubstitutionError(ValueError):
    """Invalid substitution (bad letters, empty image, ...)."""


class UnsupportedSubstitutionError(SubstitutionError):
    """Structurally valid input outside the supported class."""


class ResourceLimitError(RuntimeError):
    """A requested expansion would exceed the configured size cap."""


def _check_word(word, allow_empty=True):
    if not isinstance(word, str) or any(c not in "01" for c in word):
        raise SubstitutionError("words must be strings over the alphabet {0,1}: %r" % (word,))
    if not allow_empty and not word:
        raise SubstitutionError("empty image word")
    return word


@dataclass(frozen=True)
class Substitution:
    """A substitution on {0,1}, defined by the images of the two letters."""

    image0: str
    image1: str

    def __post_init__(self):
        _check_word(self.image0)
        _check_word(self.image1)

    def image(self, letter):
        return self.image1 if letter in (1, "1") else self.image0

    def apply(self, word):
        return "".join(self.image(c) for c in word)

    def power(self, k):
        """The substitution s^k (images of the single letters under k-fold s)."""
        if k < 1:
            raise ValueError("power requires k >= 1")
        w0, w1 = self.image0, self.image1
        for _ in range(k - 1):
            w0, w1 = self.apply(w0), self.apply(w1)
        return Substitution(w0, w1)

    @cached_property
    def abelianization(self):
        """Letter-count matrix: row i holds (#0, #1) of the image of letter i."""
        return (
            (self.image0.count("0"), self.image0.count("1")),
            (self.image1.count("0"), self.image1.count("1")),
        )

    def abelianization_array(self):
        return np.array(self.abelianization, dtype=np.int64)

    @cached_property
    def primitive(self):
        return check_primitive(self)

    @cached_property
    def invertible(self):
        return check_invertible(self)

    def text(self):
        return "0->%s;1->%s" % (self.image0, self.image1)

    def __str__(self):
        return self.text()


def parse_substitution(text):
    """Parse the ``0->01;1->0`` text form (no whitespace significance)."""
    s = text.replace(" ", "").replace("\t", "")
    parts = [p for p in s.split(";") if p]
    images = {}
    for part in parts:
        if "->" not in part:
            raise SubstitutionError("malformed substitution rule: %r" % part)
        lhs, rhs = part.split("->", 1)
        if lhs not in ("0", "1") or lhs in images:
            raise SubstitutionError("rule must map each of 0,1 exactly once: %r" % part)
        images[lhs] = _check_word(rhs)
    if set(images) != {"0", "1"}:
        raise SubstitutionError("substitution needs rules for both letters: %r" % text)
    return Substitution(images["0"], images["1"])


FIBONACCI = Substitution("01", "0")


def check_primitive(s):
    """True iff some power <= 4 of the abelianization is entrywise positive."""
    if not s.image0 or not s.image1:
        raise SubstitutionError("empty image word")
    m = s.abelianization_array()
    acc = np.eye(2, dtype=np.int64)
    for _ in range(4):
        acc = acc @ m
        if (acc > 0).all():
            return True
    return False


# -- free group on two generators ------------------------------------------
#
# Group words are lists of nonzero ints: +1/-1 for the generator 0 and its
# inverse, +2/-2 for the generator 1.  Syllable form (letter, exponent) is
# exposed for callers that want the freely-reduced run-length view.

def word_to_group(word):
    return [1 if c == "0" else 2 for c in word]


def invert_group_word(w):
    return [-g for g in reversed(w)]


def free_reduce(w):
    out = []
    for g in w:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return out


def cyclic_reduce(w):
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def syllables(w):
    """Freely reduced word as (letter, exponent) syllables, letters in {0,1}."""
    out = []
    for g in free_reduce(w):
        letter = abs(g) - 1
        e = 1 if g > 0 else -1
        if out and out[-1][0] == letter:
            out[-1] = (letter, out[-1][1] + e)
        else:
            out.append((letter, e))
    return [(l, e) for l, e in out if e != 0]


def check_invertible(s):
    """Nielsen test: s([0,1]) cyclically reduces to a rotation of [0,1]^(+-1).

    [0,1] denotes the commutator 0.1.0^-1.1^-1.
    """
    a = word_to_group(s.image0)
    b = word_to_group(s.image1)
    w = cyclic_reduce(a + b + invert_group_word(a) + invert_group_word(b))
    if len(w) != 4:
        return False
    comm = [1, 2, -1, -2]
    inv_comm = [2, 1, -2, -1]
    rotations = {tuple(t[i:] + t[:i]) for t in (comm, inv_comm) for i in range(4)}
    return tuple(w) in rotations


# -- fixed points ------------------------------------------------------------

def star_letter(s):
    """The letter kept fixed at the start of images: (star, power).

    Preference order 0 then 1 for s itself, then for s^2; primitivity
    guarantees one of the four works (if s(0) starts with 1 and s(1)
    starts with 0, then s^2(0) starts with 0).
    """
    if not s.image0 or not s.image1:
        raise SubstitutionError("empty image word")
    if s.image0[0] == "0":
        return "0", 1
    if s.image1[0] == "1":
        return "1", 1
    s2 = s.power(2)
    if s2.image0[0] == "0":
        return "0", 2
    if s2.image1[0] == "1":
        return "1", 2
    raise UnsupportedSubstitutionError("no power <= 2 fixes a starting letter")


def fixed_point_prefix(s, n, length_cap=WORD_LENGTH_CAP):
    """First n letters of the fixed point of s (or of s^2 when needed)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n > length_cap:
        raise ResourceLimitError("requested prefix exceeds length cap")
    star, power = star_letter(s)
    sp = s if power == 1 else s.power(power)
    word = star
    while len(word) < n:
        grown = sp.apply(word)
        if len(grown) == len(word):
            raise UnsupportedSubstitutionError("substitution does not expand its fixed letter")
        word = grown[: max(n, 1)] if len(grown) > length_cap else grown
    return word[:n]


def periodic_word(s, k, length_cap=WORD_LENGTH_CAP):
    """The word s^k(star); its length is the star-row sum of abelianization^k."""
    if k < 0:
        raise ValueError("need k >= 0")
    star, _power = star_letter(s)
    if periodic_word_length(s, k) > length_cap:
        raise ResourceLimitError("s^%d(%s) exceeds the %d-letter cap" % (k, star, length_cap))
    word = star
    for _ in range(k):
        word = s.apply(word)
    return word


def periodic_word_length(s, k):
    """|s^k(star)| computed from abelianization powers (no expansion)."""
    star, _ = star_letter(s)
    m = s.abelianization_array().astype(object)  # exact integer arithmetic
    row = np.array([1, 0], dtype=object) if star == "0" else np.array([0, 1], dtype=object)
    counts = row @ np.linalg.matrix_power(m, k) if k else row
    return int(counts.sum())


def distinct_factors(word, k):
    """Number of distinct length-k factors of a word (complexity oracle)."""
    if k > len(word):
        return 0
    return len({word[i : i + k] for i in range(len(word) - k + 1)})
