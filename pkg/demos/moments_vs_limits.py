"""Mean empirical moments of classical ensembles against their limit laws.

GUE moments approach the Catalan numbers, arcsine ensembles the arcsine
moments; the printed gaps shrink like 1/N^2.
"""

from polyens import (
    arcsine_moment,
    catalan_moment,
    classical_table,
    gue_profile,
    limit_report,
    mean_moment,
    op_profile,
)


def show(title, table, profile, exact):
    print(f"\n{title}")
    print(f"{'ell':>4} {'finite N':>14} {'limit':>12} {'gap':>10}")
    for row in limit_report(table, profile, 8):
        print(f"{row.ell:>4} {row.finite_moment:>14.8f} {row.limit_moment:>12.8f} {row.gap:>10.2e}")
    worst = max(abs(mean_moment(table, ell) - exact(ell)) for ell in range(1, 9))
    print(f"worst deviation from the closed-form limit: {worst:.2e}")


def main():
    for N in (50, 200):
        show(
            f"GUE, N = {N} (limit: semicircle / Catalan)",
            classical_table("gue", N, pad=8),
            gue_profile(),
            catalan_moment,
        )
    show(
        "chebyshev ensemble, N = 200 (limit: arcsine on [-1, 1])",
        classical_table("chebyshev", 200, pad=8),
        op_profile(0.5, 0.0),
        arcsine_moment,
    )


if __name__ == "__main__":
    main()
