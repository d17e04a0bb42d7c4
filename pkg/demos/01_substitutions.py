#!/usr/bin/env python3
"""Two-letter substitutions: validity, fixed points, rotation realization.

Walks through the combinatorial layer: which substitutions the toolkit
accepts, what their fixed points look like, and how each one is realized
by sampling an irrational circle rotation.
"""

from sturmtrace import (
    FIBONACCI,
    check_invertible,
    check_primitive,
    fixed_point_prefix,
    parse_substitution,
    rotation_number,
    rotation_sample,
    scan_beta,
)
from sturmtrace.rotation import RotationParams
from sturmtrace.substitution import distinct_factors

print("== the Fibonacci substitution 0->01, 1->0")
s = FIBONACCI
print("primitive:", check_primitive(s), " invertible:", check_invertible(s))
print("letter-count matrix:", s.abelianization)
print("fixed point prefix:", fixed_point_prefix(s, 34))

# Sturmian complexity: a length-k window shows exactly k+1 distinct factors
prefix = fixed_point_prefix(s, 2000)
print("factors of length 1..6:", [distinct_factors(prefix, k) for k in range(1, 7)])

print("\n== some relatives")
for text in ("0->001;1->0", "0->10;1->0", "0->01;1->10"):
    t = parse_substitution(text)
    print("%-12s primitive=%s invertible=%s" % (text, t.primitive, t.invertible))

print("\n== rotation-number realization")
rot = rotation_number(s)
print("alpha = %.15f  CF preperiod %s period %s" %
      (rot.alpha, rot.cf_preperiod, rot.cf_period))

# The sampling formula w_n = chi_[1-a,1)(n a + b) reproduces the fixed point
# for a suitable phase b -- up to the letter exchange relating the 0-heavy
# fixed point to the 1-frequent sampled word.  scan_beta searches for it.
best = scan_beta(s, n_letters=30)
print("beta scan:", best)
trial = RotationParams(rot.cf_preperiod, rot.cf_period, beta=best["beta"],
                       closed_right=best["closed_right"], surd=rot.surd)
word = rotation_sample(trial, 1, 30)
if best["swap_letters"]:
    word = word.translate(str.maketrans("01", "10"))
print("sampled :", word)
print("fixed pt:", fixed_point_prefix(s, 30))
