"""Conserved quantities and the integration-by-parts residual machinery.

Covers the momentum/energy of the eps=1 member, the two series invariants
of the eps=3 member with their Airy-primitive closed forms, and residual
checks for the identities that generate the series.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import airy as _airy
from .errors import CarrierMismatchError, ConvergenceError, DomainError
from .fields import Field, quadrature, spectral_derivative

A_NORMALIZATION = 6.0 ** (1.0 / 3.0) / math.pi
B_NORMALIZATION = 6.0 ** (2.0 / 3.0) / math.pi
_CBRT2 = 2.0 ** (1.0 / 3.0)
_DRIFT_FLOOR = 1e-300


@dataclass(frozen=True)
class SeriesSpec:
    """Truncation control for the eps=3 series invariants."""

    normalization_a: float = A_NORMALIZATION
    normalization_b: float = B_NORMALIZATION
    tolerance: float = 1e-12
    k_max: int = 200

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.k_max < 20:
            raise ValueError("k_max must be at least 20")


@dataclass
class ConservedReport:
    """Invariant values along a trajectory and their relative drift."""

    times: list
    values: list
    relative_drift: float
    quantity: str = ""

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")


def kdv_momentum(field: Field):
    """P = integral of u."""
    return quadrature(field)


def kdv_energy(field: Field):
    """E = (1/2) integral of u^2."""
    half = Field(field.grid, 0.5 * field.values ** 2, field.time)
    return quadrature(half)


def series_coefficient(k: int, third: float, factorial_shift: int) -> float:
    """6^k Gamma(k + third) / (3k + factorial_shift)! via log-gamma recombination."""
    return math.exp(k * math.log(6.0) + math.lgamma(k + third)
                    - math.lgamma(3 * k + factorial_shift + 1))


def _series_invariant(field: Field, power_offset: int, third: float,
                      normalization: float, spec: SeriesSpec) -> float:
    u = field.values
    u3 = u ** 3
    p = u ** power_offset
    dx = field.grid.spacing
    total = 0.0
    small_streak = 0
    for k in range(spec.k_max + 1):
        term = normalization * series_coefficient(k, third, power_offset) \
            * dx * float(p.sum())
        total += term
        if abs(term) <= spec.tolerance * max(abs(total), _DRIFT_FLOOR):
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
        p = p * u3
    raise ConvergenceError(
        f"series invariant not converged within k_max={spec.k_max} terms")


def _airy_invariant(field: Field, sign: float) -> float:
    y = _CBRT2 * field.values
    if np.max(np.abs(y)) > _airy.PRIMITIVE_RANGE:
        raise DomainError(
            "field amplitude exceeds the Airy-primitive range "
            f"(2^(1/3) max|u| > {_airy.PRIMITIVE_RANGE})")
    integrand = _airy.bi_primitive(y) + sign * math.sqrt(3.0) * _airy.ai_primitive(y)
    return float(field.grid.spacing * integrand.sum())


def _require_real(field: Field, what: str):
    if not field.is_real:
        raise CarrierMismatchError(f"{what} requires a real-carrier field")


def eps3_momentum(field: Field, method: str = "airy",
                  spec: SeriesSpec = SeriesSpec()) -> float:
    """Conserved momentum of u_t - u (u_x)^3 + u_xxx = 0.

    method="series": sum of 6^k Gamma(k+1/3) u^{3k+1}/(3k+1)! scaled by
    6^(1/3)/pi; method="airy": closed form via the primitives of Bi + sqrt3 Ai.
    """
    _require_real(field, "eps3_momentum")
    if method == "series":
        return _series_invariant(field, 1, 1.0 / 3.0, A_NORMALIZATION, spec)
    if method == "airy":
        return _airy_invariant(field, +1.0)
    raise ValueError(f"unknown method {method!r}; use 'series' or 'airy'")


def eps3_energy(field: Field, method: str = "airy",
                spec: SeriesSpec = SeriesSpec()) -> float:
    """Conserved (strictly positive) energy of the eps=3 member."""
    _require_real(field, "eps3_energy")
    if method == "series":
        return _series_invariant(field, 2, 2.0 / 3.0, B_NORMALIZATION, spec)
    if method == "airy":
        return _airy_invariant(field, -1.0)
    raise ValueError(f"unknown method {method!r}; use 'series' or 'airy'")


def parts_identity_residual(field: Field, n_power: int) -> float:
    """| int u^N (u_x)^3 - 2/((N+1)(N+2)) int u^{N+2} u_xxx |."""
    if n_power < 0:
        raise ValueError("power must be non-negative")
    u = field.values
    ux = spectral_derivative(field, 1).values
    uxxx = spectral_derivative(field, 3).values
    dx = field.grid.spacing
    lhs = dx * float((u ** n_power * ux ** 3).sum())
    rhs = 2.0 / ((n_power + 1) * (n_power + 2)) \
        * dx * float((u ** (n_power + 2) * uxxx).sum())
    return abs(lhs - rhs)


def hierarchy_residual(trajectory, k: int) -> float:
    """Consistency of d/dt int u^{3k+1}/(3k+1) with its flux form along a run.

    The time derivative uses central differences over snapshot triples, so
    the residual carries an O(dt_snapshot^2) budget.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    snaps = trajectory.snapshots
    if len(snaps) < 3:
        raise ValueError("hierarchy_residual needs at least 3 snapshots")
    p = 3 * k + 1

    def moment(f):
        return f.grid.spacing * float((f.values ** p).sum()) / p

    def flux(f):
        uxxx = spectral_derivative(f, 3).values
        u = f.values
        dx = f.grid.spacing
        a = 2.0 * dx * float((u ** (3 * k + 3) * uxxx).sum()) \
            / ((3 * k + 2) * (3 * k + 3))
        b = dx * float((u ** (3 * k) * uxxx).sum())
        return a - b

    worst = 0.0
    for i in range(1, len(snaps) - 1):
        dt2 = snaps[i + 1].time - snaps[i - 1].time
        lhs = (moment(snaps[i + 1]) - moment(snaps[i - 1])) / dt2
        worst = max(worst, abs(lhs - flux(snaps[i])))
    return worst


_QUANTITIES = {
    "kdv_momentum": lambda f: kdv_momentum(f),
    "kdv_energy": lambda f: kdv_energy(f),
    "eps3_momentum_series": lambda f: eps3_momentum(f, "series"),
    "eps3_momentum_airy": lambda f: eps3_momentum(f, "airy"),
    "eps3_energy_series": lambda f: eps3_energy(f, "series"),
    "eps3_energy_airy": lambda f: eps3_energy(f, "airy"),
}


def drift_report(trajectory, quantity: str) -> ConservedReport:
    """Evaluate a named invariant at every snapshot and report its drift."""
    if quantity not in _QUANTITIES:
        raise ValueError(
            f"unknown quantity {quantity!r}; choose from {sorted(_QUANTITIES)}")
    if quantity.startswith("eps3"):
        eps = float(trajectory.config.epsilon)
        if not (trajectory.snapshots and trajectory.snapshots[0].is_real
                and eps == 3.0):
            raise ValueError(
                f"{quantity} applies to real eps=3 runs, got eps={eps}")
    fn = _QUANTITIES[quantity]
    times = [s.time for s in trajectory.snapshots]
    values = [fn(s) for s in trajectory.snapshots]
    arr = np.asarray(values)
    if arr.size == 0:
        drift = 0.0
    elif np.iscomplexobj(arr):
        # no ordering on complex values: spread = diameter of the value set
        spread = float(np.max(np.abs(arr[:, None] - arr[None, :])))
        drift = spread / max(abs(complex(arr.mean())), _DRIFT_FLOOR)
    else:
        drift = float((arr.max() - arr.min())
                      / max(abs(arr.mean()), _DRIFT_FLOOR))
    return ConservedReport(times, values, drift, quantity)


def write_report(report: ConservedReport, csv_path, json_path=None) -> None:
    """CSV `t,value,relative_drift_so_far` plus an optional JSON summary."""
    if np.iscomplexobj(np.asarray(report.values)):
        raise ValueError("report export is defined for real-valued invariants")
    lines = ["t,value,relative_drift_so_far"]
    arr = np.asarray(report.values, dtype=float)
    for i, (t, v) in enumerate(zip(report.times, report.values)):
        part = arr[: i + 1]
        drift = (part.max() - part.min()) / max(abs(part.mean()), _DRIFT_FLOOR)
        lines.append(f"{t:.17g},{v:.17g},{drift:.17g}")
    with open(csv_path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    if json_path is not None:
        summary = {
            "quantity": report.quantity,
            "n_snapshots": len(report.times),
            "relative_drift": report.relative_drift,
            "mean_value": float(arr.mean()) if arr.size else 0.0,
        }
        with open(json_path, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
