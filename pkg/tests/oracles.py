"""Brute-force reference implementations, written independently of balkit.

Everything here loops over atoms in plain Python and uses only the textbook
definitions, so agreement with the library is a genuine cross-check.
"""

from __future__ import annotations

import cmath
import math


def atoms_of(charge):
    return [(complex(z), float(m)) for z, m in zip(charge.z, charge.m)]


def l_right(atoms, r, R):
    return math.fsum(m * (1 / z).real for z, m in atoms if r < abs(z) <= R and z.real > 0)


def l_left(atoms, r, R):
    return math.fsum(-m * (1 / z).real for z, m in atoms if r < abs(z) <= R and z.real < 0)


def counting_cos(atoms, t, side):
    """nu(t; cos^+-): closed-disc sum of m cos^+-(arg z)."""
    out = []
    for z, m in atoms:
        if abs(z) <= t and z != 0:
            c = z.real / abs(z)
            out.append(m * max(c if side == "right" else -c, 0.0))
    return math.fsum(out)


def breve(atoms, side, r, R):
    """Integral of the step function nu(t; cos)/t^2 cell by cell between radii."""
    cuts = sorted({r, R, *[abs(z) for z, _ in atoms if r < abs(z) < R]})
    return math.fsum(counting_cos(atoms, a, side) * (1 / a - 1 / b)
                     for a, b in zip(cuts[:-1], cuts[1:]))


def subtended_angle(z, y1, y2):
    """Angle at z between the rays to iy1 and iy2, by complex division."""
    return abs(cmath.phase((1j * y2 - z) / (1j * y1 - z)))


def harmonic_sum(a, b):
    """sum_{a < k <= b} 1/k over integers."""
    return math.fsum(1.0 / k for k in range(math.floor(a) + 1, math.floor(b) + 1))


def log_abs_sinh_over_pi(y):
    """ln|sinh(pi y)/pi| without overflow."""
    y = abs(y)
    if y == 0:
        return 0.0
    if y > 20:
        return math.pi * y - math.log(2 * math.pi)
    return math.log(math.sinh(math.pi * y) / math.pi)


def trapezoid(f, a, b, n):
    h = (b - a) / n
    vals = [f(a + k * h) for k in range(n + 1)]
    return h * (math.fsum(vals) - 0.5 * (vals[0] + vals[-1]))
