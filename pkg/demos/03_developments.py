"""Unitary path developments dU = i U A dx under random Hermitian tuples:
the deterministic large-size limit (series and integral-equation routes) and
finite-size Monte Carlo convergence toward it.

Run:  python3 demos/03_developments.py
"""

import numpy as np

from pathdev import (
    PiecewiseLinearPath,
    classical_mc_estimate,
    gue_integral_equation_solve,
    limiting_development,
    line_path,
    semicircular_law,
)


def main():
    # The unit line in one dimension: the limiting expected normalized trace
    # of the development has the closed Bessel-type series
    # sum_p (-1)^p / (p! (p+1)!) = 0.57672...
    line = line_path([1.0])
    law1 = semicircular_law(1, 24)
    series = limiting_development(law1, line, 24)
    print("Unit line, limiting development:")
    print("  series value = %.12f  (tail bound %.1e)"
          % (series.value.real, series.tail_bound))

    table = gue_integral_equation_solve(line, 1.0 / 512.0)
    print("  integral-equation value = %.12f  (grid 1/512)" % table.terminal)

    # Finite-size Monte Carlo converges to the limit as the matrix size N
    # grows (bias ~ 1/N^2) and the sample count M grows (noise ~ 1/sqrt(M)).
    print("\nMonte Carlo over Gaussian Hermitian matrices (M = 400, K = 64):")
    for N in (8, 32, 128):
        res = classical_mc_estimate(line, N=N, M=400, K=64, seed=7)
        print(
            "  N=%-4d estimate = %.6f +/- %.6f   gap to limit = %+.6f"
            % (N, res.value.real, res.stderr, res.value.real - series.value.real)
        )

    # A genuinely two-dimensional path: the development mixes two
    # independent random directions; all three routes agree.
    path = PiecewiseLinearPath(
        knots=np.array([0.0, 0.5, 1.0]),
        increments=np.array([[0.4, -0.2], [0.1, 0.35]]),
    )
    law2 = semicircular_law(2, 16)
    dev = limiting_development(law2, path, 16)
    ie = gue_integral_equation_solve(path, 1.0 / 256.0).terminal
    mc = classical_mc_estimate(path, N=128, M=400, K=64, seed=11)
    print("\nTwo-dimensional path, three routes:")
    print("  series            %.6f" % dev.value.real)
    print("  integral equation %.6f" % ie)
    print("  Monte Carlo       %.6f +/- %.6f" % (mc.value.real, mc.stderr))


if __name__ == "__main__":
    main()
