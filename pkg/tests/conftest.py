"""Shared fixtures: the expensive evolution runs and profile solves."""

import time

import numpy as np
import pytest

from ptkdv import dynamics, fields, waves
from ptkdv.scenarios import sech


@pytest.fixture(scope="session")
def kdv_soliton_run():
    """Criterion-3 configuration: c=1 soliton on L=80, N=1024, dt=1e-3 to t=10."""
    grid = fields.make_grid(80.0, 1024)
    soliton = dynamics.kdv_soliton(1.0, 0.0)
    u0 = fields.Field(grid, soliton(grid.nodes, 0.0))
    cfg = dynamics.EvolutionConfig(
        epsilon=1.0, dt=1e-3, t_final=10.0,
        snapshot_times=tuple(float(t) for t in range(11)))
    t0 = time.perf_counter()
    traj = dynamics.evolve(u0, cfg)
    elapsed = time.perf_counter() - t0
    return {"trajectory": traj, "soliton": soliton, "elapsed": elapsed}


@pytest.fixture(scope="session")
def family_profiles():
    """n = 1..4 profiles at c = 1, solved at tol = 1e-9, with wall time."""
    t0 = time.perf_counter()
    profiles = {n: waves.solve_profile(n, 1.0, tol=1e-9) for n in (1, 2, 3, 4)}
    elapsed = time.perf_counter() - t0
    return {"profiles": profiles, "elapsed": elapsed}


@pytest.fixture(scope="session")
def fig1_trajectory():
    """KdV birth-of-a-soliton run at the Fig. 1 caption times."""
    grid = fields.make_grid(300.0, 2048)
    u0 = fields.Field(grid, 3.0 * sech(grid.nodes))
    cfg = dynamics.EvolutionConfig(
        epsilon=1.0, dt=5e-4, t_final=14.0,
        snapshot_times=(0.0, 0.8, 3.5, 7.0, 14.0))
    return dynamics.evolve(u0, cfg)


@pytest.fixture(scope="session")
def fig5_trajectory():
    """Positive-pulse eps=3 run at the Fig. 5 caption times (wide box)."""
    grid = fields.make_grid(400.0, 4096)
    u0 = fields.Field(grid, 3.0 * sech(grid.nodes))
    cfg = dynamics.EvolutionConfig(
        epsilon=3.0, dt=1e-3, t_final=19.0,
        snapshot_times=(0.0, 6.0, 12.0, 19.0))
    return dynamics.evolve(u0, cfg)


@pytest.fixture(scope="session")
def eps0_cross_check():
    """evolve(eps=0) and the Airy-kernel propagator at t=5 on a wrap-free box."""
    grid = fields.make_grid(3200.0, 16384)
    u0 = fields.Field(grid, 3.0 * sech(grid.nodes))
    cfg = dynamics.EvolutionConfig(epsilon=0.0, dt=2e-3, t_final=5.0,
                                   snapshot_times=(5.0,), dealias=False)
    t0 = time.perf_counter()
    numeric = dynamics.evolve(u0, cfg).snapshots[-1]
    exact = dynamics.eps0_exact(u0, 5.0)
    elapsed = time.perf_counter() - t0
    return {"numeric": numeric, "exact": exact, "elapsed": elapsed}


@pytest.fixture(scope="session")
def hierarchy_run():
    """Gentle eps=3 run with snapshots every 2 dt for flux-form residuals."""
    grid = fields.make_grid(100.0, 1024)
    u0 = fields.Field(grid, -1.5 * sech(grid.nodes))
    times = tuple(np.round(np.arange(0.0, 0.0501, 5e-4), 12))
    cfg = dynamics.EvolutionConfig(epsilon=3.0, dt=2.5e-4, t_final=0.05,
                                   snapshot_times=times)
    return dynamics.evolve(u0, cfg)
