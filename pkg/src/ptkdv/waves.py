"""Solitary-wave profiles of the odd-eps family by shooting from the tail.

The traveling-wave substitution u = f(x - c t) in
u_t + (-1)^n u (u_x)^{2n+1} + u_xxx = 0 gives

    f''' = c f' - (-1)^n f (f')^{2n+1},

whose decaying solutions behave like a e^{-sqrt(c) z} far out. Shooting
integrates from the tail toward z = 0 and iterates on the tail amplitude a
until the evenness condition f'(0) = 0 holds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    ConvergenceError,
    MalformedProfileError,
    NoSolutionError,
    NoWaveError,
)
from .fields import Field

# exp(-LAMBDA_ZMAX) ~ 3.8e-11 puts |f(z_max)| below 1e-9 for tail
# amplitudes up to O(10)
_LAMBDA_ZMAX = 24.0
_SECANT_MAX_ITER = 80
_SCAN_POINTS = 40


@dataclass
class Profile:
    """Solitary-wave profile on [0, z_max]; callers mirror it evenly."""

    n: int
    c: float
    z_nodes: np.ndarray
    f: np.ndarray
    f_prime: np.ndarray
    f_double_prime: np.ndarray
    tail_amplitude: float
    _solution: object = dataclass_field(default=None, repr=False)

    @property
    def z_max(self) -> float:
        return float(self.z_nodes[-1])

    def __call__(self, z):
        """Evenly mirrored evaluation f(|z|), zero beyond z_max."""
        z = np.abs(np.asarray(z, dtype=float))
        out = np.zeros_like(z)
        inside = z <= self.z_max
        if self._solution is not None:
            if np.any(inside):
                out[inside] = self._solution.sol(z[inside])[0]
        else:
            out[inside] = np.interp(z[inside], self.z_nodes, self.f)
        return out


def profile_rhs(n: int, c: float, state):
    """(f', f'', f''') of the traveling-wave equation at the given state."""
    f, fp, fpp = state
    return (fp, fpp, c * fp - ((-1.0) ** n) * f * fp ** (2 * n + 1))


def _shoot(n: int, c: float, amplitude: float, rtol: float,
           dense: bool = True):
    lam = math.sqrt(c)
    z_max = _LAMBDA_ZMAX / lam
    b = amplitude * math.exp(-_LAMBDA_ZMAX)
    y0 = (b, -lam * b, c * b)

    def rhs(z, y):
        return profile_rhs(n, c, y)

    sol = solve_ivp(rhs, (z_max, 0.0), y0, method="RK45",
                    rtol=rtol, atol=1e-30, dense_output=dense)
    if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
        return None, math.nan
    return sol, float(sol.y[1, -1])


def _bracket(n: int, c: float, lo: float, hi: float):
    """Scan from the small-|a| end for the first sign change of f'(0).

    Loose tolerance: the scan only supplies signs; the secant re-shoots.
    """
    start, end = (hi, lo) if abs(lo) > abs(hi) else (lo, hi)
    amps = np.linspace(start, end, _SCAN_POINTS)
    prev = None
    for a in amps:
        _, fp0 = _shoot(n, c, float(a), rtol=1e-6, dense=False)
        if not math.isfinite(fp0):
            prev = None
            continue
        if prev is not None and fp0 * prev[1] < 0:
            return prev[0], float(a), prev[1], fp0
        prev = (float(a), fp0)
    return None, None, None, None


def solve_profile(n: int, c: float, tol: float = 1e-9) -> Profile:
    """Shooting solution of the family-n profile at speed c.

    Errors: NoSolutionError if no sign change of f'(0) is found in the
    amplitude bracket (after one x4 widening); ConvergenceError if the
    secant stalls.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"family index n must be a positive integer, got {n}")
    if not c > 0:
        raise ValueError(f"wave speed must be positive, got {c}")
    n = int(n)
    rtol = max(tol / 10.0, 1e-12)

    # alternation: odd n are negative pulses (a < 0), even n positive
    base = (-5.0, -0.05) if n % 2 == 1 else (0.05, 5.0)
    a0, a1, f0, f1 = _bracket(n, c, base[0], base[1])
    if a0 is None:
        widened = (4.0 * base[0], base[1]) if n % 2 == 1 else (base[0], 4.0 * base[1])
        a0, a1, f0, f1 = _bracket(n, c, widened[0], widened[1])
    if a0 is None:
        raise NoSolutionError(
            f"no sign change of f'(0) for n={n}, c={c} in the amplitude bracket")

    # re-evaluate the bracket ends at the working tolerance, then secant
    # with bisection fallback inside the bracket
    _, f0 = _shoot(n, c, a0, rtol, dense=False)
    _, f1 = _shoot(n, c, a1, rtol, dense=False)
    if f0 * f1 > 0:
        raise ConvergenceError(
            f"bracket lost between scan and refinement for n={n}, c={c}")
    lo, hi = (a0, a1) if a0 < a1 else (a1, a0)
    flo = f0 if a0 < a1 else f1
    a_prev, f_prev = a0, f0
    a_cur, f_cur = a1, f1
    for _ in range(_SECANT_MAX_ITER):
        if f_cur == f_prev:
            a_next = 0.5 * (lo + hi)
        else:
            a_next = a_cur - f_cur * (a_cur - a_prev) / (f_cur - f_prev)
            if not (lo < a_next < hi):
                a_next = 0.5 * (lo + hi)
        probe, f_next = _shoot(n, c, a_next, rtol, dense=False)
        if probe is None:
            raise ConvergenceError(
                f"tail integration failed at amplitude {a_next}")
        if abs(f_next) < tol:
            a_cur, f_cur = a_next, f_next
            break
        if f_next * flo < 0:
            hi = a_next
        else:
            lo, flo = a_next, f_next
        a_prev, f_prev = a_cur, f_cur
        a_cur, f_cur = a_next, f_next
    else:
        raise ConvergenceError(
            f"secant did not reach |f'(0)| < {tol} for n={n}, c={c}")

    sol, _ = _shoot(n, c, a_cur, rtol, dense=True)
    lam = math.sqrt(c)
    z_max = _LAMBDA_ZMAX / lam
    z = np.linspace(0.0, z_max, 4801)
    states = sol.sol(z)
    return Profile(n=n, c=float(c), z_nodes=z,
                   f=states[0], f_prime=states[1], f_double_prime=states[2],
                   tail_amplitude=float(a_cur), _solution=sol)


def peak_height(profile: Profile) -> float:
    """f(0), the signed height at the stationary point."""
    return float(profile.f[0])


def half_width(profile: Profile) -> float:
    """2 z*, with z* the linear-interpolated crossing of |f| through |f(0)|/2."""
    mag = np.abs(profile.f)
    target = 0.5 * mag[0]
    if mag[0] == 0.0:
        raise MalformedProfileError("profile has zero peak")
    below = np.nonzero(mag <= target)[0]
    if below.size == 0:
        raise MalformedProfileError("no half-height crossing found")
    j = below[0]
    if j == 0:
        raise MalformedProfileError("profile peak is not at z = 0")
    z0, z1 = profile.z_nodes[j - 1], profile.z_nodes[j]
    m0, m1 = mag[j - 1], mag[j]
    z_star = z0 + (m0 - target) * (z1 - z0) / (m0 - m1)
    return 2.0 * float(z_star)


def scorer_residual(profile: Profile, n_samples: int = 25,
                    h: float = 0.02) -> float:
    """Residual of H''(f) - 2 f H(f) = 2c along the profile, H = (f')^2.

    H is resampled on the monotone branch of f covering z > 0, and H''(f)
    uses a five-point finite-difference stencil of half-width 2h.
    """
    if profile.n != 1:
        raise ValueError("the H = (f')^2 substitution applies to n = 1 profiles")
    c = profile.c
    f0 = float(profile.f[0])
    if f0 == 0.0:
        # the zero solution leaves the inhomogeneous term unbalanced
        return abs(2.0 * c)
    if profile._solution is None:
        raise MalformedProfileError("profile carries no dense solution")

    fvals = profile.f
    diffs = np.diff(fvals)
    if not (np.all(diffs >= 0) or np.all(diffs <= 0)):
        raise MalformedProfileError("f is not monotone on the half-profile")

    sol = profile._solution
    z_max = profile.z_max
    f_far = float(fvals[-1])

    def z_of_f(ft):
        return brentq(lambda z: sol.sol(z)[0] - ft, 0.0, z_max, xtol=1e-13)

    def h_of_f(ft):
        return float(sol.sol(z_of_f(ft))[1]) ** 2

    # interior targets, clear of both endpoints by the stencil width
    span = np.linspace(0.06, 0.94, n_samples) * (f0 - f_far) + f_far
    worst = 0.0
    for ft in span:
        hh = np.array([h_of_f(ft + m * h) for m in (-2, -1, 0, 1, 2)])
        second = (-hh[0] + 16 * hh[1] - 30 * hh[2] + 16 * hh[3] - hh[4]) / (12 * h * h)
        worst = max(worst, abs(second - 2.0 * ft * hh[2] - 2.0 * c))
    return worst


def profile_field(profile: Profile, grid, center: float = 0.0,
                  t: float = 0.0) -> Field:
    """Sample the evenly mirrored profile onto a grid, centered at `center`."""
    return Field(grid, profile(grid.nodes - center), t)


def _refine_extremum(xs: np.ndarray, vals: np.ndarray, j: int):
    """Parabolic vertex through three points around index j."""
    if j <= 0 or j >= len(vals) - 1:
        return float(xs[j]), float(vals[j])
    y0, y1, y2 = vals[j - 1], vals[j], vals[j + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(xs[j]), float(y1)
    delta = 0.5 * (y0 - y2) / denom
    dx = xs[1] - xs[0]
    return float(xs[j] + delta * dx), float(y1 - 0.25 * (y0 - y2) * delta)


def match_emergent_wave(trajectory, window, min_amplitude: float = 0.75,
                        min_speed: float = 0.05, tol: float = 1e-9):
    """Fit the late-time pulse of an eps=3 run against the n=1 profile family.

    Tracks the dominant extremum inside the window over the last two
    snapshots, estimates the speed from its displacement, solves the
    profile at that speed and returns (c_fit, Linf mismatch over the
    window). Raises NoWaveError when no coherent right-moving pulse of
    solitary-wave character exists.
    """
    if float(trajectory.config.epsilon) != 3.0:
        raise ValueError("emergent-wave matching applies to eps=3 runs")
    if len(trajectory.snapshots) < 2:
        raise ValueError("need at least two snapshots")
    lo, hi = float(window[0]), float(window[1])
    prev, last = trajectory.snapshots[-2], trajectory.snapshots[-1]
    xs = last.grid.nodes
    sel = (xs >= lo) & (xs <= hi)
    if not sel.any():
        raise ValueError("window contains no grid nodes")

    vals_last = last.values[sel]
    xs_w = xs[sel]
    j = int(np.argmax(np.abs(vals_last)))
    x2, peak2 = _refine_extremum(xs_w, vals_last, j)
    if abs(peak2) < min_amplitude:
        raise NoWaveError(
            f"largest extremum in window has |u| = {abs(peak2):.3g} "
            f"< {min_amplitude}")
    sign = math.copysign(1.0, peak2)
    if sign > 0:
        raise NoWaveError("tracked extremum is positive; the n=1 family is negative")

    vals_prev = prev.values[sel]
    jp = int(np.argmax(sign * vals_prev))
    x1, _ = _refine_extremum(xs_w, vals_prev, jp)
    dt_snap = last.time - prev.time
    c_fit = (x2 - x1) / dt_snap
    if c_fit < min_speed:
        raise NoWaveError(
            f"extremum moves at speed {c_fit:.3g} < {min_speed}; not a "
            "right-going wave")

    prof = solve_profile(1, c_fit, tol=tol)
    model = prof(xs_w - x2)
    mismatch = float(np.max(np.abs(vals_last - model)))
    return float(c_fit), mismatch


def export_profile(profile: Profile, csv_path, json_path=None) -> None:
    """CSV `z,f,f_prime` over the mirrored domain plus a JSON sidecar."""
    z_half = profile.z_nodes
    z_full = np.concatenate([-z_half[::-1], z_half[1:]])
    f_full = np.concatenate([profile.f[::-1], profile.f[1:]])
    fp_full = np.concatenate([-profile.f_prime[::-1], profile.f_prime[1:]])
    lines = ["z,f,f_prime"]
    for z, f, fp in zip(z_full, f_full, fp_full):
        lines.append(f"{z:.17g},{f:.17g},{fp:.17g}")
    with open(csv_path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    if json_path is not None:
        sidecar = {
            "n": profile.n,
            "c": profile.c,
            "peak": peak_height(profile),
            "half_width": half_width(profile),
            "tail_amplitude": profile.tail_amplitude,
        }
        with open(json_path, "w") as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
            fh.write("\n")
