"""Average characteristic polynomial zeros, and thinning a contracted kernel.

Part 1: zeros of the averaged characteristic polynomial of the chebyshev
ensemble land on the scaled chebyshev points; their log-potential matches
the ensemble's mean measure away from the support.

Part 2: multiplying spectral directions by coefficients in [0, 1] gives a
contraction; Bernoulli thinning plus projection sampling realizes it.
"""

import numpy as np

from polyens import (
    PolynomialEnsemble,
    classical_table,
    equilibrium_measure,
    log_potential,
    mean_measure,
    sample,
    spectral_from_ensemble,
    stream,
    thin_contraction,
    zeros,
)


def main():
    N = 12
    table = classical_table("chebyshev", N, pad=2)
    zs = zeros(table)
    want = np.cos((2 * np.arange(1, N + 1) - 1) * np.pi / (2 * N))
    print("zeros vs cos((2j-1) pi / 2N): max gap",
          f"{np.max(np.abs(np.sort(zs.zeros) - np.sort(want))):.2e}")

    ens = PolynomialEnsemble.from_table(table, equilibrium_measure(-1, 1, 128), N=N)
    mm = mean_measure(ens)
    for z in (2.0, 1.5 + 1.0j, -3.0 + 0.5j):
        pz = log_potential(zs, z)
        pm = log_potential(mm, z)
        print(f"potential at z = {z}: zeros {pz:.6f}, mean measure {pm:.6f}")

    print("\nthinning a contracted kernel (lambda_k ramps 1 -> 0):")
    lam = np.linspace(1.0, 0.0, N)
    sd = spectral_from_ensemble(ens, lam)
    rng = stream(17)
    sizes = []
    for _ in range(2000):
        thinned, keep = thin_contraction(sd, rng=rng)
        sizes.append(int(np.sum(keep)))
        if thinned.N > 0:
            sample(thinned, rng=rng)
    print(f"  mean kept rank {np.mean(sizes):.3f} vs sum lambda = {lam.sum():.3f}")


if __name__ == "__main__":
    main()
