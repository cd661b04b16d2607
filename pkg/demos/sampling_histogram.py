"""Exact sampling sanity check: empirical atom occupation vs K(x,x)/N.

Draws replicas of a small arcsine ensemble and prints a text histogram of
how often each atom is occupied, next to the mean density prediction.
"""

import numpy as np

from polyens import PolynomialEnsemble, classical_table, equilibrium_measure, sample_replicas

N = 4
ATOMS = 24
REPLICAS = 4000


def main():
    table = classical_table("chebyshev", N, pad=2)
    ens = PolynomialEnsemble.from_table(table, equilibrium_measure(-1, 1, ATOMS), N=N)

    idx, _ = sample_replicas(ens, REPLICAS, seed=7)
    counts = np.bincount(idx.ravel(), minlength=ATOMS) / REPLICAS

    predicted = ens.mean_density() * N * ens.measure.weights
    print(f"{REPLICAS} draws of the {N}-point ensemble on {ATOMS} atoms")
    print(f"{'atom':>6} {'x':>9} {'freq':>8} {'K(x,x)w':>9}  occupation")
    for i in range(ATOMS):
        bar = "#" * int(60 * counts[i])
        print(f"{i:>6} {ens.measure.points[i]:>9.4f} {counts[i]:>8.4f} {predicted[i]:>9.4f}  {bar}")
    tv = 0.5 * np.sum(np.abs(counts - predicted))
    print(f"\ntotal variation between frequencies and intensity: {tv:.4f}")


if __name__ == "__main__":
    main()
