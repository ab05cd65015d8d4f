"""15s breakdown at omega = 0.0576645 a.u. as printed: (label, D, dE, dE^2 - w^2, contr, acc)."""

import math

OMEGA = 0.0576645

ROWS = [
    ("12p1/2", -5.9, -0.00215, -0.00332, 8, 28),
    ("12p3/2", -8.2, -0.00214, -0.00332, 14, 42),
    ("13p1/2", -15.6, -0.00111, -0.00332, 27, 69),
    ("13p3/2", -21.7, -0.00110, -0.00332, 52, 122),
    ("14p1/2", -111.8, -0.00034, -0.00333, 424, 545),
    ("14p3/2", -161.0, -0.00033, -0.00333, 858, 1403),
    ("15p1/2", 144.0, 0.00026, -0.00333, -536, 867),
    ("15p3/2", 201.2, 0.00026, -0.00333, -1072, -204),
    ("16p1/2", 16.1, 0.00073, -0.00332, -19, -223),
    ("16p3/2", 23.9, 0.00073, -0.00332, -42, -265),
    ("17p1/2", 6.4, 0.00110, -0.00332, -5, -270),
    ("17p3/2", 9.7, 0.00110, -0.00332, -10, -280),
]

FINAL_ACC = -280


def rounding_half_width(x):
    """Half a unit in the last printed digit of a 5-decimal value."""
    return 0.5e-5


def delta_e_within_rounding(d, de, contr, omega=OMEGA):
    """The dE inside the print-rounding interval of ``de`` closest to reproducing ``contr`` exactly.

    Solves 3 c dE^2 - D^2 dE - 3 c w^2 = 0 and clips to the interval.
    """
    a, b, c = 3.0 * contr, -d * d, -3.0 * contr * omega * omega
    disc = math.sqrt(b * b - 4 * a * c)
    roots = [(-b + disc) / (2 * a), (-b - disc) / (2 * a)]
    best = min(roots, key=lambda r: abs(r - de))
    h = rounding_half_width(de)
    return min(max(best, de - h), de + h)
