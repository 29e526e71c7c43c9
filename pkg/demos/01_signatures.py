"""Truncated path signatures: coefficients, Chen's identity, reversal
inverses, and the factorial tail bound.

Run:  python3 demos/01_signatures.py
"""

import numpy as np

from pathdev import (
    PiecewiseLinearPath,
    chen_product,
    concatenate,
    line_path,
    one_variation,
    reverse,
    signature_tail_bound,
    truncated_signature,
    unit_series,
)


def main():
    # A two-dimensional path with three linear segments.
    path = PiecewiseLinearPath(
        knots=np.array([0.0, 0.4, 0.7, 1.0]),
        increments=np.array([[0.5, -0.2], [0.1, 0.4], [-0.3, 0.3]]),
    )
    depth = 4
    sig = truncated_signature(path, depth)

    print("Path: 3 segments in R^2, one-variation %.4f" % one_variation(path))
    print("\nLow-order signature coefficients (iterated integrals):")
    for word in [(1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2), (1, 2, 1)]:
        print("  S^%-9s = %+.6f" % (str(word), sig.coefficient(word)))
    print("  level-1 coefficients are the total increments:",
          np.round(sig.levels[1], 6), "=", np.round(path.increments.sum(axis=0), 6))

    # Chen's identity: the signature of a concatenation is the tensor
    # (Chen) product of the signatures.
    tail = PiecewiseLinearPath(
        knots=np.array([0.0, 1.0]), increments=np.array([[0.2, 0.6]])
    )
    joined = truncated_signature(concatenate(path, tail), depth)
    product = chen_product(sig, truncated_signature(tail, depth))
    gap = max(
        float(np.max(np.abs(joined.levels[n] - product.levels[n])))
        for n in range(depth + 1)
    )
    print("\nChen identity: max |S(path * tail) - S(path) x S(tail)| = %.2e" % gap)

    # Reversal gives the group inverse: the product collapses to the unit.
    inverse = chen_product(sig, truncated_signature(reverse(path), depth))
    unit = unit_series(path.dim, depth)
    gap = max(
        float(np.max(np.abs(inverse.levels[n] - unit.levels[n])))
        for n in range(depth + 1)
    )
    print("Reversal inverse: max |S(path) x S(reverse) - unit| = %.2e" % gap)

    # Factorial decay: the discarded tail beyond the truncation depth is
    # bounded by sum_{n > depth} L^n / n! .
    line = line_path([1.0, 1.0])
    print("\nTail bound for the diagonal line (one-variation %.4f):"
          % one_variation(line))
    for d in (2, 4, 6, 8):
        print("  depth %d: tail <= %.3e" % (d, signature_tail_bound(line, d)))


if __name__ == "__main__":
    main()
