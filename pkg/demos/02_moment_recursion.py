"""Solving the integration-by-parts moment system for matrix-model limit
laws: the semicircular case (Catalan moments), a quartic single-letter well,
and a coupled two-letter potential.

Run:  python3 demos/02_moment_recursion.py
"""

from pathdev import Potential, growth_radius, solve_schwinger_dyson


def main():
    # With no interaction the fixed point is the semicircular law: moments
    # of pure even powers are Catalan numbers, mixed moments count
    # non-crossing pairings with matching letters.
    law = solve_schwinger_dyson(Potential(dim=2), max_degree=8)
    print("Gaussian (no interaction), two letters, degree <= 8:")
    print("  residual %.2e, growth radius %.3f" % (law.residual, growth_radius(law)))
    for word in [(1, 1), (1, 1, 1, 1), (1, 2, 2, 1), (1, 2, 1, 2), (1, 1, 1, 1, 1, 1)]:
        print("  a_%-14s = %.6f" % (str(word), law.coefficient(word)))
    print("  (2, 2, 5 are Catalan counts; the crossing word 1212 drops to 1)")

    # A quartic well g * x^4 narrows the law: the second moment falls below
    # 1 and, to first order in g, behaves like 1 - 8g.
    print("\nQuartic well, coupling g (second moment vs 1 - 8g):")
    for g in (0.005, 0.01, 0.02, 0.05):
        law = solve_schwinger_dyson(
            Potential(dim=1, couplings={(1, 1, 1, 1): g}), max_degree=16
        )
        a11 = law.coefficient((1, 1))
        print(
            "  g=%-6g a_11=%.6f  1-8g=%.6f  gap=%+.2e (second order in g)"
            % (g, a11, 1 - 8 * g, a11 - (1 - 8 * g))
        )

    # A two-letter coupling g * x1 x2 correlates the letters: the mixed
    # moment a_(1,2) turns on linearly in g with slope -1.
    print("\nTwo-letter coupling g * x1 x2 (mixed moment turns on):")
    for g in (0.0, 0.05, 0.1):
        law = solve_schwinger_dyson(
            Potential(dim=2, couplings={(1, 2): g}), max_degree=8
        )
        print(
            "  g=%-5g a_(1,2)=%+.6f   a_(1,1)=%.6f"
            % (g, law.coefficient((1, 2)), law.coefficient((1, 1)))
        )


if __name__ == "__main__":
    main()
