"""Time evolution of u_t = i u (i u_x)^eps - u_xxx on the periodic grid.

The integrating-factor RK4 scheme treats the dispersive u_xxx term exactly
in Fourier space (per-mode phase e^{i k^3 t}) and advances the
interaction-picture variable with classical fourth-order Runge-Kutta.
Odd-integer eps runs stay entirely in real arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import airy as _airy
from .errors import (
    BlowUpError,
    CarrierMismatchError,
    ConfigurationError,
    SingularPowerError,
)
from .fields import Field, Grid, spectral_derivative, write_field_csv

_BLOWUP_LIMIT = 1e12


def _is_odd_integer(eps: float) -> bool:
    return float(eps).is_integer() and int(round(eps)) % 2 == 1


@dataclass(frozen=True)
class EvolutionConfig:
    """Parameters of one time-evolution run."""

    epsilon: float
    dt: float
    t_final: float
    dealias: bool = True
    snapshot_times: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "snapshot_times",
                           tuple(sorted(float(t) for t in self.snapshot_times)))
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.t_final < 0:
            raise ConfigurationError(f"t_final must be >= 0, got {self.t_final}")
        if self.t_final > 0 and self.dt > self.t_final:
            raise ConfigurationError("dt exceeds t_final")
        for t in self.snapshot_times:
            if t < 0 or t > self.t_final + 1e-12:
                raise ConfigurationError(
                    f"snapshot time {t} outside [0, t_final={self.t_final}]")

    def snapshot_steps(self) -> list[int]:
        """Step indices of the snapshots; errors if dt does not divide them."""
        steps = []
        for t in self.snapshot_times:
            n = round(t / self.dt)
            if abs(n * self.dt - t) > 1e-9 * max(1.0, abs(t)):
                raise ConfigurationError(
                    f"dt={self.dt} does not divide snapshot time {t}")
            steps.append(n)
        return steps


@dataclass
class Trajectory:
    """Snapshots of one run, time-ordered."""

    snapshots: list
    config: EvolutionConfig

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.snapshots]


def nonlinear_term(field: Field, epsilon: float) -> Field:
    """N(u) = +i u (i u_x)^eps, the nonlinearity on the right of u_t = N(u) - u_xxx.

    Odd-integer eps reduces to the real form N(u) = -(-1)^n u (u_x)^{2n+1};
    otherwise the principal branch of the complex power is used.
    """
    ux = spectral_derivative(field, 1).values
    u = field.values
    eps = float(epsilon)
    if eps < 0 and np.any(ux == 0):
        raise SingularPowerError("negative power of u_x which vanishes on the grid")
    if field.is_real and _is_odd_integer(eps):
        n = (int(round(eps)) - 1) // 2
        vals = -((-1.0) ** n) * u * ux ** int(round(eps))
    elif field.is_real and not float(eps).is_integer():
        raise CarrierMismatchError(
            "non-integer epsilon requires a complex-carrier field")
    else:
        vals = 1j * u * (1j * ux) ** eps
    return Field(field.grid, vals, field.time)


class _Stepper:
    """Integrating-factor RK4 on the spectral coefficients."""

    def __init__(self, grid: Grid, epsilon: float, dt: float,
                 dealias: bool, real: bool):
        self.real = real
        self.n = grid.n_points
        self.eps = float(epsilon)
        self.odd = _is_odd_integer(self.eps)
        if self.odd:
            self.sign = -((-1.0) ** ((int(round(self.eps)) - 1) // 2))
            self.ipow = int(round(self.eps))

        k = grid.wavenumbers(real)
        k_lin = k.copy()
        k_deriv = k.copy()
        if grid.n_points % 2 == 0:
            nyq = -1 if real else grid.n_points // 2
            k_lin[nyq] = 0.0
            k_deriv[nyq] = 0.0
        self.ik = 1j * k_deriv
        self.half_phase = np.exp(1j * k_lin ** 3 * (dt / 2.0))
        self.full_phase = self.half_phase ** 2
        self.dt = dt

        if dealias:
            cut = grid.n_points // 3
            if real:
                self.mask = (np.arange(k.size) <= cut).astype(float)
            else:
                m = np.fft.fftfreq(grid.n_points, d=1.0 / grid.n_points)
                self.mask = (np.abs(m) <= cut).astype(float)
        else:
            self.mask = None

    def _fft(self, u):
        return np.fft.rfft(u) if self.real else np.fft.fft(u)

    def _ifft(self, spec):
        return np.fft.irfft(spec, n=self.n) if self.real else np.fft.ifft(spec)

    def nonlinear_hat(self, spec):
        if self.mask is not None:
            spec = spec * self.mask
        u = self._ifft(spec)
        ux = self._ifft(self.ik * spec)
        if self.odd:
            nl = self.sign * u * ux ** self.ipow
        else:
            nl = 1j * u * (1j * ux) ** self.eps
        out = self._fft(nl)
        if self.mask is not None:
            out *= self.mask
        return out

    def step(self, spec):
        dt, e, e2 = self.dt, self.half_phase, self.full_phase
        a = dt * self.nonlinear_hat(spec)
        b = dt * self.nonlinear_hat(e * (spec + 0.5 * a))
        c = dt * self.nonlinear_hat(e * spec + 0.5 * b)
        d = dt * self.nonlinear_hat(e2 * spec + e * c)
        return e2 * spec + (e2 * a + 2.0 * e * (b + c) + d) / 6.0


def evolve(initial: Field, config: EvolutionConfig) -> Trajectory:
    """Integrate the initial field to t_final, recording the requested snapshots."""
    eps = float(config.epsilon)
    real_path = initial.is_real and _is_odd_integer(eps)
    values = initial.values
    if not real_path and initial.is_real:
        values = values.astype(np.complex128)

    snap_steps = config.snapshot_steps()
    n_final = round(config.t_final / config.dt)
    if abs(n_final * config.dt - config.t_final) > 1e-9 * max(1.0, config.t_final):
        raise ConfigurationError(
            f"dt={config.dt} does not divide t_final={config.t_final}")
    wanted = dict.fromkeys(snap_steps)

    stepper = _Stepper(initial.grid, eps, config.dt, config.dealias, real_path)
    spec = stepper._fft(values)
    snapshots = []
    if 0 in wanted:
        snapshots.append(Field(initial.grid, values.copy(), 0.0))
    for n in range(1, n_final + 1):
        spec = stepper.step(spec)
        t = n * config.dt
        mx = np.max(np.abs(spec))
        if not np.isfinite(mx) or mx > _BLOWUP_LIMIT:
            raise BlowUpError(t)
        if n in wanted:
            snapshots.append(Field(initial.grid, stepper._ifft(spec).copy(), t))
    return Trajectory(snapshots, config)


def kdv_soliton(c: float, x0: float):
    """Closed-form traveling sech^2 pulse of the eps=1 member: peak 3c at x = c t + x0."""
    if not c > 0:
        raise ValueError(f"soliton speed must be positive, got {c}")
    rc = math.sqrt(c)

    def profile(x, t):
        return 3.0 * c / np.cosh(0.5 * rc * (np.asarray(x) - c * t - x0)) ** 2

    return profile


def eps0_exact(initial: Field, t: float) -> Field:
    """Exact eps=0 solution: Airy-kernel convolution times the phase e^{it}.

    Quadrature of the convolution on the grid, with the kernel offset s
    sampled over a doubled range [-L, L) and the initial data extended by
    zero, so every node of the box sees the full kernel support (the
    initial condition is assumed negligible at the box edges).
    """
    if not t > 0:
        raise ValueError(f"eps0_exact needs t > 0, got {t}")
    grid = initial.grid
    n = grid.n_points
    if n % 2 != 0:
        raise ValueError("eps0_exact requires an even point count")
    dx = grid.spacing
    scale = (3.0 * t) ** (-1.0 / 3.0)

    m = 2 * n
    offsets = dx * np.arange(m, dtype=float)
    offsets[offsets >= grid.length] -= 2.0 * grid.length
    kernel = _airy._ai_wide(scale * offsets)
    padded = np.zeros(m, dtype=np.complex128)
    half = n // 2
    padded[:half] = initial.values[half:]      # positions [0, L/2)
    padded[m - half:] = initial.values[:half]  # positions [-L/2, 0)
    conv = np.fft.ifft(np.fft.fft(padded) * np.fft.fft(kernel)) * dx
    vals = np.roll(conv, half)[:n] * scale * np.exp(1j * t)
    return Field(grid, vals, float(t))


def export_trajectory(trajectory: Trajectory, out_dir) -> None:
    """One CSV per snapshot plus a JSON manifest {epsilon, dt, L, N, times}."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    grid = trajectory.snapshots[0].grid if trajectory.snapshots else None
    for i, snap in enumerate(trajectory.snapshots):
        write_field_csv(snap, os.path.join(out_dir, f"snapshot_{i:03d}.csv"))
    manifest = {
        "epsilon": trajectory.config.epsilon,
        "dt": trajectory.config.dt,
        "L": grid.length if grid else None,
        "N": grid.n_points if grid else None,
        "times": [s.time for s in trajectory.snapshots],
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
