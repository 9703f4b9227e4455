"""Canonical products of genus at most one and their growth functionals."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Callable, Literal

import numpy as np

from .errors import ConvergenceError, DomainError
from .reports import check_radii, fmt

FLOOR = -1e6
_CHUNK = 1 << 22


@dataclass(frozen=True, eq=False)
class ZeroSequence:
    """Zeros with integer multiplicities, truncated at ``truncation_radius``.

    A zero at the origin is carried separately as ``origin_multiplicity``
    (the ``z^m`` prefactor) and never enters the primary factors.
    """

    points: np.ndarray
    multiplicities: np.ndarray
    truncation_radius: float = math.inf
    origin_multiplicity: int = 0

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.points, complex)).ravel()
        k = np.atleast_1d(np.asarray(self.multiplicities)).ravel()
        if p.shape != k.shape:
            raise DomainError("points and multiplicities differ in length")
        if k.size and (np.any(k != np.round(k)) or np.any(k < 1)):
            raise DomainError("multiplicities must be integers >= 1")
        if not np.all(np.isfinite(p)):
            raise DomainError("zeros must be finite")
        if np.any(p == 0):
            raise DomainError("use origin_multiplicity for a zero at 0")
        if self.origin_multiplicity < 0:
            raise DomainError("origin_multiplicity must be >= 0")
        if p.size and np.max(np.abs(p)) > self.truncation_radius:
            raise DomainError("a zero lies beyond the truncation radius")
        order = np.lexsort((np.angle(p), np.abs(p)))
        p, k = p[order], k[order].astype(np.int64)
        p.flags.writeable = False
        k.flags.writeable = False
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "multiplicities", k)

    @classmethod
    def from_points(cls, pts, truncation_radius: float = math.inf) -> "ZeroSequence":
        counts = Counter(complex(z) + 0j for z in pts)
        zeros = [z for z in counts if z != 0]
        return cls(np.array(zeros, complex), np.array([counts[z] for z in zeros], np.int64),
                   truncation_radius, counts.get(0j, 0))

    @classmethod
    def integers(cls, n: int, positive_only: bool = False) -> "ZeroSequence":
        k = np.arange(1, n + 1, dtype=float)
        pts = k if positive_only else np.concatenate((k, -k))
        return cls(pts.astype(complex), np.ones(pts.size, np.int64), float(n))

    def __len__(self) -> int:
        return int(self.points.size)

    def multiset(self) -> Counter:
        return Counter({complex(z): int(k) for z, k in zip(self.points, self.multiplicities)})

    def to_dict(self) -> dict:
        return {
            "zeros": [{"re": float(z.real), "im": float(z.imag), "multiplicity": int(k)}
                      for z, k in zip(self.points, self.multiplicities)],
            "origin_multiplicity": int(self.origin_multiplicity),
            "truncation_radius": None if math.isinf(self.truncation_radius)
            else float(self.truncation_radius),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ZeroSequence":
        try:
            zs = data["zeros"]
            pts = np.array([complex(float(d["re"]), float(d.get("im", 0.0))) for d in zs])
            mult = np.array([int(d.get("multiplicity", 1)) for d in zs], np.int64)
            tr = data.get("truncation_radius")
            return cls(pts, mult, math.inf if tr is None else float(tr),
                       int(data.get("origin_multiplicity", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed zero sequence: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ZeroSequence":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed JSON: {exc}") from exc

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "multiplicity"])
        if self.origin_multiplicity:
            w.writerow(["0.0", "0.0", self.origin_multiplicity])
        for z, k in zip(self.points, self.multiplicities):
            w.writerow([fmt(z.real), fmt(z.imag), int(k)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, truncation_radius: float = math.inf) -> "ZeroSequence":
        rows = list(csv.reader(io.StringIO(text)))
        if rows and rows[0] and rows[0][0].strip().lower() == "re":
            rows = rows[1:]
        pts, mult, origin = [], [], 0
        try:
            for row in rows:
                if not row:
                    continue
                z = complex(float(row[0]), float(row[1]))
                k = int(row[2]) if len(row) > 2 else 1
                if z == 0:
                    origin += k
                else:
                    pts.append(z)
                    mult.append(k)
        except (ValueError, IndexError) as exc:
            raise DomainError(f"malformed zero CSV: {exc}") from exc
        return cls(np.array(pts, complex), np.array(mult, np.int64), truncation_radius, origin)


def log_abs_product(Z: ZeroSequence, z, genus: Literal[0, 1] = 1):
    """``sum_k mult_k ln|E_q(z / z_k)|`` with ``E_0(w) = 1 - w``, ``E_1(w) = (1 - w) e^w``.

    Vectorised over ``z``; returns ``-inf`` at zeros.
    """
    if genus not in (0, 1):
        raise DomainError("genus must be 0 or 1")
    z = np.asarray(z, complex)
    flat = np.atleast_1d(z).ravel()
    out = np.zeros(flat.shape)
    inv = 1.0 / Z.points
    mult = Z.multiplicities.astype(float)
    step = max(1, _CHUNK // max(len(Z), 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        for s in range(0, flat.size, step):
            w = flat[s:s + step, None] * inv[None, :]
            u, v = w.real, w.imag
            terms = 0.5 * np.log1p(u * u + v * v - 2.0 * u)
            if genus == 1:
                terms = terms + u
            out[s:s + step] = terms @ mult
        if Z.origin_multiplicity:
            out = out + Z.origin_multiplicity * np.log(np.abs(flat))
    out = np.where(np.isnan(out), -np.inf, out)
    return out.reshape(z.shape) if z.ndim else float(out[0])


def circle_mean(v: Callable[[np.ndarray], np.ndarray], z, r: float, nodes: int = 256,
                cap: int = 1 << 16, clip: bool = False, floor: float = FLOOR) -> float:
    """Trapezoid mean of ``v`` over the circle ``|w - z| = r``.

    Nodes are offset by half a step so that each doubling uses fresh angles;
    ``-inf`` samples trigger doubling up to ``cap`` nodes.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    if nodes < 16:
        raise DomainError("need at least 16 nodes")
    z = complex(z)
    n = nodes
    while True:
        t = 2.0 * math.pi * (np.arange(n) + 0.5) / n
        vals = np.asarray(v(z + r * np.exp(1j * t)), float)
        if np.all(np.isfinite(vals)):
            return math.fsum(vals.tolist()) / n
        if n >= cap:
            if clip:
                return math.fsum(np.maximum(np.nan_to_num(vals, nan=floor, neginf=floor),
                                            floor).tolist()) / n
            raise ConvergenceError("singular samples persist at the node cap",
                                   partial=float(np.mean(np.maximum(vals, floor))))
        n *= 2


@dataclass
class GrowthReport:
    radii: list
    M_values: list  # lower estimates of the sup on each circle
    C_values: list
    type_fit: float
    order_fit: float
    samples_per_circle: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "M", "C"])
        for row in zip(self.radii, self.M_values, self.C_values):
            w.writerow([fmt(x) for x in row])
        return buf.getvalue()


def growth_report(v: Callable[[np.ndarray], np.ndarray], radii,
                  samples_per_circle: int = 4096, center: complex = 0j) -> GrowthReport:
    """Sup and mean of ``v`` on circles plus type and order fits at order 1."""
    radii = check_radii(radii)
    t = 2.0 * math.pi * (np.arange(samples_per_circle) + 0.5) / samples_per_circle
    M, C = [], []
    for r in radii:
        vals = np.asarray(v(center + r * np.exp(1j * t)), float)
        M.append(float(np.max(vals)))
        if np.all(np.isfinite(vals)):
            # the sup samples are exactly the first trapezoid pass of circle_mean
            C.append(math.fsum(vals.tolist()) / samples_per_circle)
        else:
            C.append(circle_mean(v, center, float(r), nodes=max(16, samples_per_circle), clip=True))
    M_arr = np.array(M)
    top = radii >= radii[-1] / 10.0
    type_fit = max(0.0, float(np.max(M_arr[top] / radii[top])))
    # v plays the role of ln|f|, so ln M_v against ln r carries the order of f
    big = M_arr > 0
    if np.count_nonzero(big) >= 2:
        order_fit = float(np.polyfit(np.log(radii[big]), np.log(M_arr[big]), 1)[0])
    else:
        order_fit = 0.0
    return GrowthReport(radii.tolist(), M, C, type_fit, order_fit, samples_per_circle)


@dataclass
class DominationWitness:
    y: list
    delta: list
    subset: bool
    nonnegative: bool | None
    min_delta: float
    negative_measure: float
    raw_gap: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def domination_witness(Z: ZeroSequence, W: ZeroSequence, y_grid,
                       genus: Literal[0, 1] = 1) -> DominationWitness:
    """``Delta(y) = ln|f_W(iy)| - ln|f_Z(iy)|`` on a grid of ordinates.

    When ``Z`` is a sub-multiset of ``W`` the difference is the product over
    the extra zeros alone, which is evaluated directly (the raw difference of
    the two large sums is kept as ``raw_gap`` for comparison).  Nonnegativity
    is asserted only when all extra zeros lie on the positive real axis.
    """
    y = np.asarray(y_grid, float)
    iy = 1j * y
    zc, wc = Z.multiset(), W.multiset()
    subset = all(wc.get(p, 0) >= k for p, k in zc.items()) and \
        Z.origin_multiplicity <= W.origin_multiplicity
    raw = np.asarray(log_abs_product(W, iy, genus)) - np.asarray(log_abs_product(Z, iy, genus))
    if subset:
        extra = wc - zc
        pts = list(extra)
        E = ZeroSequence(np.array(pts, complex), np.array([extra[p] for p in pts], np.int64),
                         origin_multiplicity=W.origin_multiplicity - Z.origin_multiplicity)
        delta = np.asarray(log_abs_product(E, iy, genus))
        positive_axis = all(p.imag == 0 and p.real > 0 for p in pts) and E.origin_multiplicity == 0
        nonneg = bool(np.all(delta >= 0)) if positive_axis else None
        fin = np.isfinite(raw) & np.isfinite(delta)
        raw_gap = float(np.max(np.abs(raw[fin] - delta[fin]))) if np.any(fin) else 0.0
    else:
        delta, nonneg, raw_gap = raw, None, None
    if y.size > 1:
        cell = np.gradient(y)
        neg_measure = float(np.sum(np.abs(cell)[delta < 0]))
    else:
        neg_measure = 0.0
    return DominationWitness(y.tolist(), delta.tolist(), subset, nonneg,
                             float(np.min(delta)) if delta.size else 0.0, neg_measure, raw_gap)
