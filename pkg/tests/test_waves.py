import math

import numpy as np
import pytest

from ptkdv import dynamics, fields, waves
from ptkdv.errors import MalformedProfileError, NoWaveError
from ptkdv.scenarios import FAMILY_HEIGHTS, FAMILY_WIDTHS


class TestProfileRhs:
    def test_fixed_point(self):
        assert waves.profile_rhs(1, 1.0, (0.0, 0.0, 0.0)) == (0.0, 0.0, 0.0)

    def test_flat_state(self):
        fp, fpp, fppp = waves.profile_rhs(1, 1.0, (1.0, 0.0, 0.0))
        assert (fp, fpp, fppp) == (0.0, 0.0, 0.0)

    def test_direct_substitution(self):
        fp, fpp, fppp = waves.profile_rhs(1, 1.0, (1.0, 1.0, 0.0))
        assert fppp == pytest.approx(2.0)

    def test_family_sign(self):
        # n = 2 flips the nonlinear sign
        _, _, f3_n1 = waves.profile_rhs(1, 1.0, (1.0, 1.0, 0.0))
        _, _, f3_n2 = waves.profile_rhs(2, 1.0, (1.0, 1.0, 0.0))
        assert f3_n1 == pytest.approx(2.0)
        assert f3_n2 == pytest.approx(0.0)


class TestSolveProfile:
    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            waves.solve_profile(0, 1.0)
        with pytest.raises(ValueError):
            waves.solve_profile(1, -1.0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_heights(self, family_profiles, n):
        h = waves.peak_height(family_profiles["profiles"][n])
        assert h == pytest.approx(FAMILY_HEIGHTS[n], abs=1e-3)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_widths(self, family_profiles, n):
        w = waves.half_width(family_profiles["profiles"][n])
        assert w == pytest.approx(FAMILY_WIDTHS[n], abs=0.05)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_alternation(self, family_profiles, n):
        h = waves.peak_height(family_profiles["profiles"][n])
        assert math.copysign(1.0, h) == (-1.0) ** n

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_profile_invariants(self, family_profiles, n):
        prof = family_profiles["profiles"][n]
        assert abs(prof.f_prime[0]) < 1e-9
        assert abs(prof.f[-1]) <= 1e-9
        mirrored = prof(np.array([-2.5, 2.5]))
        assert mirrored[0] == mirrored[1]

    def test_tail_decay_rate(self, family_profiles):
        prof = family_profiles["profiles"][1]
        ratio = prof(np.array([6.0]))[0] / prof(np.array([5.0]))[0]
        assert ratio == pytest.approx(math.exp(-1.0), rel=0.02)

    def test_reintegration_reproduces_peak(self, family_profiles):
        prof = family_profiles["profiles"][1]
        sol, fp0 = waves._shoot(1, 1.0, prof.tail_amplitude, rtol=1e-10)
        assert abs(fp0) < 1e-8
        assert sol.y[0, -1] == pytest.approx(prof.f[0], abs=1e-8)

    def test_speed_scaling_of_width(self, family_profiles):
        # f_c(z) = f_1(sqrt(c) z): same height, width shrinks as 1/sqrt(c)
        prof_c4 = waves.solve_profile(1, 4.0, tol=1e-9)
        prof_c1 = family_profiles["profiles"][1]
        assert waves.peak_height(prof_c4) == pytest.approx(
            waves.peak_height(prof_c1), abs=1e-6)
        assert waves.half_width(prof_c4) == pytest.approx(
            0.5 * waves.half_width(prof_c1), abs=1e-3)


class TestMeasurements:
    def test_peak_height_degenerate(self):
        z = np.linspace(0.0, 10.0, 101)
        prof = waves.Profile(n=1, c=1.0, z_nodes=z, f=np.zeros(101),
                             f_prime=np.zeros(101),
                             f_double_prime=np.zeros(101), tail_amplitude=0.0)
        assert waves.peak_height(prof) == 0.0

    def test_half_width_of_sech_squared(self):
        z = np.linspace(0.0, 20.0, 20001)
        f = 3.0 / np.cosh(z / 2.0) ** 2
        prof = waves.Profile(n=1, c=1.0, z_nodes=z, f=f,
                             f_prime=np.gradient(f, z),
                             f_double_prime=np.zeros_like(z),
                             tail_amplitude=12.0)
        expected = 4.0 * np.arccosh(math.sqrt(2.0))
        assert waves.half_width(prof) == pytest.approx(expected, abs=1e-3)

    def test_half_width_needs_peak(self):
        z = np.linspace(0.0, 10.0, 101)
        prof = waves.Profile(n=1, c=1.0, z_nodes=z, f=np.zeros(101),
                             f_prime=np.zeros(101),
                             f_double_prime=np.zeros(101), tail_amplitude=0.0)
        with pytest.raises(MalformedProfileError):
            waves.half_width(prof)


class TestScorer:
    def test_residual_c1(self, family_profiles):
        assert waves.scorer_residual(family_profiles["profiles"][1]) < 1e-4

    def test_residual_c2(self):
        prof = waves.solve_profile(1, 2.0, tol=1e-9)
        assert waves.scorer_residual(prof) < 1e-4

    def test_degenerate_zero_profile(self):
        z = np.linspace(0.0, 10.0, 101)
        prof = waves.Profile(n=1, c=1.5, z_nodes=z, f=np.zeros(101),
                             f_prime=np.zeros(101),
                             f_double_prime=np.zeros(101), tail_amplitude=0.0)
        assert waves.scorer_residual(prof) == pytest.approx(3.0)

    def test_requires_family_one(self, family_profiles):
        prof2 = waves.solve_profile(2, 1.0, tol=1e-8)
        with pytest.raises(ValueError):
            waves.scorer_residual(prof2)


class TestMatchEmergentWave:
    def _synthetic_trajectory(self, prof, grid, node_index, shift_nodes, speed):
        dx = grid.spacing
        x0 = float(grid.nodes[node_index])
        shift = shift_nodes * dx
        dt_snap = abs(shift) / speed if shift != 0 else 1.0
        f0 = waves.profile_field(prof, grid, center=x0, t=0.0)
        f1 = waves.profile_field(prof, grid, center=x0 + shift, t=dt_snap)
        cfg = dynamics.EvolutionConfig(epsilon=3.0, dt=dt_snap / 2.0,
                                       t_final=dt_snap,
                                       snapshot_times=(0.0, dt_snap))
        return dynamics.Trajectory([f0, f1], cfg)

    def test_self_consistency(self, family_profiles):
        prof = family_profiles["profiles"][1]
        grid = fields.make_grid(100.0, 2048)
        traj = self._synthetic_trajectory(prof, grid, 900, 41, 1.0)
        c_fit, mismatch = waves.match_emergent_wave(traj, (-15.0, 15.0))
        assert c_fit == pytest.approx(1.0, rel=0.01)
        assert mismatch < 1e-6

    def test_low_amplitude_raises(self, family_profiles):
        prof = family_profiles["profiles"][1]
        grid = fields.make_grid(100.0, 2048)
        traj = self._synthetic_trajectory(prof, grid, 900, 41, 1.0)
        for snap in traj.snapshots:
            snap.values = 0.1 * snap.values
        with pytest.raises(NoWaveError):
            waves.match_emergent_wave(traj, (-15.0, 15.0))

    def test_leftward_motion_raises(self, family_profiles):
        prof = family_profiles["profiles"][1]
        grid = fields.make_grid(100.0, 2048)
        traj = self._synthetic_trajectory(prof, grid, 900, -41, 1.0)
        with pytest.raises(NoWaveError):
            waves.match_emergent_wave(traj, (-15.0, 15.0))

    def test_positive_pulse_raises(self, family_profiles):
        prof = family_profiles["profiles"][1]
        grid = fields.make_grid(100.0, 2048)
        traj = self._synthetic_trajectory(prof, grid, 900, 41, 1.0)
        for snap in traj.snapshots:
            snap.values = -snap.values
        with pytest.raises(NoWaveError):
            waves.match_emergent_wave(traj, (-15.0, 15.0))

    def test_requires_eps3(self, family_profiles):
        prof = family_profiles["profiles"][1]
        grid = fields.make_grid(100.0, 2048)
        traj = self._synthetic_trajectory(prof, grid, 900, 41, 1.0)
        bad = dynamics.Trajectory(traj.snapshots,
                                  dynamics.EvolutionConfig(
                                      epsilon=1.0, dt=0.1, t_final=10.0,
                                      snapshot_times=()))
        with pytest.raises(ValueError):
            waves.match_emergent_wave(bad, (-15.0, 15.0))


@pytest.mark.slow
def test_translation_invariance_under_evolution():
    prof = waves.solve_profile(1, 1.0, tol=1e-10)
    grid = fields.make_grid(100.0, 2048)
    u0 = waves.profile_field(prof, grid, center=-10.0)
    cfg = dynamics.EvolutionConfig(epsilon=3.0, dt=2.5e-4, t_final=5.0,
                                   snapshot_times=(5.0,))
    final = dynamics.evolve(u0, cfg).snapshots[-1]
    model = waves.profile_field(prof, grid, center=-10.0 + 5.0, t=5.0)
    assert fields.distance(final, model) < 1e-3


def test_export_profile(tmp_path, family_profiles):
    import json

    prof = family_profiles["profiles"][1]
    csv = tmp_path / "p.csv"
    js = tmp_path / "p.json"
    waves.export_profile(prof, csv, js)
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "z,f,f_prime"
    assert len(lines) == 2 * len(prof.z_nodes)  # mirrored domain
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == -prof.z_max
    sidecar = json.loads(js.read_text())
    assert sidecar["n"] == 1
    assert sidecar["peak"] == pytest.approx(FAMILY_HEIGHTS[1], abs=1e-3)
    assert sidecar["half_width"] == pytest.approx(FAMILY_WIDTHS[1], abs=0.05)
