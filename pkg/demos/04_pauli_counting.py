"""Pauli-string algebra and sparse random ensembles: products with phases,
normalized traces of ensemble words, the exact fourth-moment formula, and
the parity word counts behind the moment-matching argument.

Run:  python3 demos/04_pauli_counting.py
"""

import math

import numpy as np

from pathdev import (
    PauliString,
    count_even_words,
    count_pair_words,
    ensemble_moment_estimate,
    sample_pauli_ensemble,
    string_mul,
)


def main():
    # Strings multiply letterwise with a global phase in {1, i, -1, -i}.
    a = PauliString.parse("XZY")
    b = PauliString.parse("YZI")
    print("Pauli products: %s * %s = %s" % (a, b, string_mul(a, b)))
    print("               X * Y = %s,  Y * X = %s"
          % (string_mul(PauliString.parse("X"), PauliString.parse("Y")),
             string_mul(PauliString.parse("Y"), PauliString.parse("X"))))

    # A sparse ensemble draw: (1/sqrt m) sum_i r_i sigma_{s_i}.
    ops = sample_pauli_ensemble(n=6, m=4, d=2, seed=3)
    print("\nSampled 2 operators on 6 qubits, 4 strings each:")
    for k, op in enumerate(ops, start=1):
        terms = ", ".join("%+.3f %s" % (c.real, s) for c, s in op.terms)
        print("  A_%d = %s" % (k, terms))

    # Ensemble moments: odd moments vanish exactly; the normalized second
    # moment is 1; the fourth moment obeys
    #   E tr-bar A^4 = 2 - 1/m + (1 - 1/m) 4^{-n},
    # approaching the semicircular value 2 as m and n grow.
    n, m, samples = 6, 4, 2000
    est2, se2 = ensemble_moment_estimate(n, m, (1, 1), samples=samples, seed=5)
    est4, se4 = ensemble_moment_estimate(n, m, (1, 1, 1, 1), samples=samples, seed=5)
    exact4 = 2 - 1 / m + (1 - 1 / m) * 4.0 ** (-n)
    print("\nMoments at n=%d, m=%d over %d draws:" % (n, m, samples))
    print("  E tr A^2 = %.4f +/- %.4f   (exactly 1)" % (est2, se2))
    print("  E tr A^4 = %.4f +/- %.4f   (formula %.4f; semicircular 2)"
          % (est4, se4, exact4))

    # Word counting: W(m, p) even-parity words of length 2p over m letters,
    # N(m, p) the subset formed by pairings; the gap W - N controls how far
    # ensemble moments can sit from the matching-letters pairing count.
    print("\nParity word counts (W = even words, N = pair words):")
    print("  m  p      W      N    W-N   bound (4e)^p m^(p-1) p!")
    for mm in (2, 3, 4):
        for p in (1, 2, 3):
            W = count_even_words(mm, p)
            N = count_pair_words(mm, p)
            bound = (4 * math.e) ** p * mm ** (p - 1) * math.factorial(p)
            print("  %d  %d  %5d  %5d  %5d   %.0f" % (mm, p, W, N, W - N, bound))


if __name__ == "__main__":
    main()
