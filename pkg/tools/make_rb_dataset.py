"""Regenerate the bundled rubidium level and dipole tables.

Low-lying energies are NIST ASD values. Higher s, p and d levels come from
the Rydberg-Ritz formula with the 85Rb quantum defects of Li et al.,
PRA 67, 052502 (2003).

Dipole matrix elements:

* 5s-5p: measured values, Volz & Schmoranzer, Phys. Scr. T65, 48 (1996).
* 5s-6p..8p: SD all-order values, PRA 60, 4476 (1999).
* ns-n'p for n >= 6: radial integrals from inward Numerov integration in
  the Marinescu-Sadeghpour-Dalgarno model potential (PRA 49, 982 (1994)),
  evaluated at the energies written to the levels file, times the s-p
  angular factors sqrt(2/3) (p1/2) and sqrt(4/3) (p3/2). These carry a
  flat 2 % uncertainty.

Usage::

    python tools/make_rb_dataset.py [OUTDIR]
"""

import csv
import math
import sys
from pathlib import Path

import numpy as np

HARTREE_CM = 219474.6313632
IONIZATION_CM = 33690.8048
RYDBERG_RB85 = 109736.605
FINE_STRUCTURE = 7.2973525693e-3

# label -> energy (cm^-1), NIST ASD
NIST_LEVELS = {
    (5, 0, 1): 0.0,
    (5, 1, 1): 12578.950,
    (5, 1, 3): 12816.545,
    (4, 2, 5): 19355.203,
    (4, 2, 3): 19355.649,
    (6, 0, 1): 20132.510,
    (6, 1, 1): 23715.081,
    (6, 1, 3): 23792.591,
    (5, 2, 5): 25700.536,
    (5, 2, 3): 25703.498,
    (7, 0, 1): 26311.437,
    (7, 1, 1): 27835.02,
    (7, 1, 3): 27870.11,
    (6, 2, 5): 28687.127,
    (6, 2, 3): 28689.390,
    (8, 0, 1): 29046.816,
    (8, 1, 1): 29834.94,
    (8, 1, 3): 29853.79,
    (7, 2, 5): 30280.113,
    (7, 2, 3): 30281.488,
}

# (l, two_j) -> (delta0, delta2)
QUANTUM_DEFECTS = {
    (0, 1): (3.1311804, 0.1784),
    (1, 1): (2.6548849, 0.2900),
    (1, 3): (2.6416737, 0.2950),
    (2, 3): (1.34809171, -0.60286),
    (2, 5): (1.34646572, -0.59600),
}

# l -> (a1, a2, a3, a4, rc)
MODEL_POTENTIAL = {
    0: (3.69628474, 1.64915255, -9.86069196, 0.19579987, 1.66242117),
    1: (4.44088978, 1.92828831, -16.79597770, -0.81633314, 1.50195124),
    2: (3.78717363, 1.57027864, -11.65588970, 0.52942835, 4.86851938),
}
CORE_ALPHA = 9.0760
Z = 37

LITERATURE_GROUND = [
    # (n', two_j', value, uncertainty, source)
    (5, 1, 4.231, 0.003, "Volz & Schmoranzer 1996 (expt)"),
    (5, 3, 5.977, 0.005, "Volz & Schmoranzer 1996 (expt)"),
    (6, 1, 0.333, 0.003, "SD all-order, PRA 60, 4476 (1999)"),
    (6, 3, 0.541, 0.005, "SD all-order, PRA 60, 4476 (1999)"),
    (7, 1, 0.115, 0.002, "SD all-order, PRA 60, 4476 (1999)"),
    (7, 3, 0.202, 0.003, "SD all-order, PRA 60, 4476 (1999)"),
    (8, 1, 0.059, 0.001, "SD all-order, PRA 60, 4476 (1999)"),
    (8, 3, 0.111, 0.002, "SD all-order, PRA 60, 4476 (1999)"),
]

N_MAX = 25
L_LETTERS = "spdf"


def label(n, l, two_j):
    return f"{n}{L_LETTERS[l]}{two_j}/2"


def rydberg_ritz(n, l, two_j):
    d0, d2 = QUANTUM_DEFECTS[(l, two_j)]
    nstar = n - d0 - d2 / (n - d0) ** 2
    return IONIZATION_CM - RYDBERG_RB85 / nstar**2


def level_table():
    rows = []
    for n in range(4, N_MAX + 1):
        for l in (0, 1, 2):
            if l == 0 and n < 5 or l == 1 and n < 5:
                continue
            for two_j in sorted({abs(2 * l - 1), 2 * l + 1}):
                if two_j <= 0:
                    continue
                key = (n, l, two_j)
                if key in NIST_LEVELS:
                    rows.append((key, NIST_LEVELS[key], "NIST ASD"))
                else:
                    rows.append((key, round(rydberg_ritz(*key), 3), "Rydberg-Ritz, Li et al. 2003"))
    rows.sort(key=lambda r: r[1])
    return rows


def potential(r, l, two_j):
    a1, a2, a3, a4, rc = MODEL_POTENTIAL[min(l, 2)]
    zl = 1.0 + (Z - 1) * np.exp(-a1 * r) - r * (a3 + a4 * r) * np.exp(-a2 * r)
    v = -zl / r - CORE_ALPHA / (2 * r**4) * (1.0 - np.exp(-((r / rc) ** 6)))
    if l > 0:
        j = two_j / 2
        v = v + FINE_STRUCTURE**2 / (4 * r**3) * (j * (j + 1) - l * (l + 1) - 0.75)
    return v


def radial_wavefunction(energy_cm, n, l, two_j, h=0.005):
    """Inward Numerov solution on the x = sqrt(r) lattice x_k = k*h.

    Returns (k_start, w) with w[i] at x = (k_start + i) * h, normalized so
    that 2*sum(x^2 w^2)*h = 1.
    """
    binding = -(IONIZATION_CM - energy_cm) / HARTREE_CM
    nstar = 1.0 / math.sqrt(-2.0 * binding)
    r_out = 2.0 * nstar * (nstar + 15.0)
    r_in = CORE_ALPHA ** (1.0 / 3.0)
    k_out = int(math.sqrt(r_out) / h) + 1
    k_in = int(math.sqrt(r_in) / h)
    x = np.arange(k_in, k_out + 1) * h
    r = x * x
    g = 8.0 * r * (potential(r, l, two_j) - binding) + (2 * l + 0.5) * (2 * l + 1.5) / r
    f = 1.0 - h * h * g / 12.0
    w = np.zeros_like(x)
    w[-1] = 1e-10
    w[-2] = 1e-10 * (1.0 + h * math.sqrt(max(g[-1], 0.0)))
    for i in range(len(x) - 2, 0, -1):
        w[i - 1] = ((12.0 - 10.0 * f[i]) * w[i] - f[i + 1] * w[i + 1]) / f[i - 1]
        if abs(w[i - 1]) > 1e30:
            w[: i - 1] = 0.0
            break
    norm = math.sqrt(2.0 * np.sum(x * x * w * w) * h)
    w /= norm
    return k_in, w


def radial_integral(wa, wb, h=0.005):
    ka, a = wa
    kb, b = wb
    k0 = max(ka, kb)
    k1 = min(ka + len(a), kb + len(b))
    x = np.arange(k0, k1) * h
    return 2.0 * float(np.sum(x**4 * a[k0 - ka : k1 - ka] * b[k0 - kb : k1 - kb]) * h)


def dipole_table(levels):
    energy = {key: e for key, e, _ in levels}
    rows = []
    for n_p, two_j, value, unc, src in LITERATURE_GROUND:
        rows.append((label(5, 0, 1), label(n_p, 1, two_j), value, unc, src))
    cache = {}

    def wf(key):
        if key not in cache:
            cache[key] = radial_wavefunction(energy[key], *key)
        return cache[key]

    for n in range(6, N_MAX + 1):
        s_key = (n, 0, 1)
        for n_p in range(5, N_MAX + 1):
            for two_j, ang in ((1, math.sqrt(2.0 / 3.0)), (3, math.sqrt(4.0 / 3.0))):
                p_key = (n_p, 1, two_j)
                rad = radial_integral(wf(s_key), wf(p_key))
                value = ang * rad
                rows.append(
                    (
                        label(*s_key),
                        label(*p_key),
                        round(value, 4),
                        round(abs(value) * 0.02, 4),
                        "Numerov, Marinescu model potential",
                    )
                )
    return rows


def main(outdir):
    outdir = Path(outdir)
    levels = level_table()
    with open(outdir / "rb_levels.csv", "w", newline="") as fh:
        fh.write("# Rb I fine-structure levels, energies relative to 5s1/2\n")
        fh.write("# generated by tools/make_rb_dataset.py\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "n", "l", "two_j", "energy_cm1", "source"])
        for (n, l, two_j), e, src in levels:
            w.writerow([label(n, l, two_j), n, l, two_j, f"{e:.3f}", src])
    with open(outdir / "rb_dipoles.csv", "w", newline="") as fh:
        fh.write("# Rb I reduced E1 matrix elements <b||D||a> in a.u.\n")
        fh.write("# generated by tools/make_rb_dataset.py\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["state_a", "state_b", "reduced_me_au", "uncertainty_au", "source"])
        for row in dipole_table(levels):
            w.writerow(row)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src" / "magicpol" / "data")
