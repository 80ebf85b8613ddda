import math

import numpy as np
import pytest

from qdforge.errors import DimensionMismatch, ValidationError
from qdforge.tasks import (ArmTask, MlpPointTask, RastriginTask, evaluate_arm, evaluate_mlp_point,
                           evaluate_rastrigin_proj, make_task, mlp_param_count)


class TestArm:
    def test_straight_arm(self):
        f, d = evaluate_arm(np.zeros(8))
        assert f == 0.0
        np.testing.assert_allclose(d, [1.0, 0.0], atol=1e-15)

    def test_two_links_vertical(self):
        _, d = evaluate_arm([math.pi / 2, 0.0])
        np.testing.assert_allclose(d, [0.0, 1.0], atol=1e-15)

    def test_hand_kinematics(self):
        angles = [0.3, -0.8, 1.1]
        cum = np.cumsum(angles)
        expected = [np.cos(cum).sum() / 3, np.sin(cum).sum() / 3]
        np.testing.assert_allclose(evaluate_arm(angles)[1], expected, atol=1e-15)

    def test_constant_angles_have_zero_variance(self):
        f, _ = evaluate_arm(np.full(6, 0.4))
        assert f == pytest.approx(0.0, abs=1e-30)

    def test_reach_and_lower_bound(self, rng):
        task = ArmTask(7)
        angles = rng.uniform(-40, 40, size=(20000, 7))
        from qdforge.tasks import arm_end_effector
        raw = arm_end_effector(angles)
        assert np.all(np.linalg.norm(raw, axis=1) <= 1 + 1e-12)
        f, d = task.evaluate_batch(angles)
        assert f.min() >= task.min_fitness
        assert np.all(np.abs(d) <= 1)

    def test_extreme_angles_bound(self):
        task = ArmTask(2)
        f, _ = task.evaluate([-math.pi, math.pi - 1e-12])
        assert f >= -math.pi ** 2

    def test_initializer_range(self, rng):
        task = ArmTask(8, init_scale=0.5)
        g = task.initial_genotypes(1000, rng)
        assert np.abs(g).max() <= math.pi / 8 * 0.5


class TestRastrigin:
    def test_optimum(self):
        f, d = evaluate_rastrigin_proj(np.zeros(6))
        assert f == 0.0
        np.testing.assert_array_equal(d, [0.0, 0.0])

    def test_unit_gene(self):
        f, _ = evaluate_rastrigin_proj([1.0, 0, 0, 0, 0])
        assert f == pytest.approx(-1.0, abs=1e-12)

    def test_descriptor_clamped(self):
        _, d = evaluate_rastrigin_proj([6.0, 0.0])
        np.testing.assert_array_equal(d, [5.12, 0.0])

    def test_lower_bound(self, rng):
        task = RastriginTask(12)
        g = rng.uniform(-30, 30, size=(20000, 12))
        f, d = task.evaluate_batch(g)
        assert f.min() >= task.min_fitness == -12 * (5.12 ** 2 + 20)
        assert np.abs(d).max() <= 5.12

    def test_needs_two_dims(self):
        with pytest.raises(ValidationError):
            RastriginTask(1)


class TestMlpPoint:
    def test_param_count(self):
        assert mlp_param_count([16, 16]) == 2 * 16 + 16 + 16 * 16 + 16 + 16 * 2 + 2 == 354
        assert MlpPointTask().genotype_dim == 354

    def test_zero_weights(self):
        f, d = evaluate_mlp_point(np.zeros(354))
        assert f == 0.0
        np.testing.assert_array_equal(d, [0.0, 0.0])

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            evaluate_mlp_point(np.zeros(353))

    def test_constant_bias_controller(self):
        # zero weights, output bias (0.3, 0): constant velocity along x
        task = MlpPointTask(hidden=(4,), steps=10, dt=0.1)
        g = np.zeros(task.genotype_dim)
        g[-2] = 0.3
        f, d = task.evaluate(g)
        assert f == pytest.approx(-0.09)
        np.testing.assert_allclose(d, [0.3, 0.0], atol=1e-12)

    def test_velocity_clipped(self):
        task = MlpPointTask(hidden=(4,), steps=30, dt=0.1)
        g = np.zeros(task.genotype_dim)
        g[-2] = 5.0
        f, d = task.evaluate(g)
        assert f == pytest.approx(-1.0)
        np.testing.assert_allclose(d, [1.0, 0.0])

    def test_lower_bound(self, rng):
        task = MlpPointTask(hidden=(8, 8), steps=20)
        g = 5.0 * rng.standard_normal((500, task.genotype_dim))
        f, d = task.evaluate_batch(g)
        assert f.min() >= task.min_fitness
        assert np.abs(d).max() <= 1.0


@pytest.mark.parametrize("task", [ArmTask(5), RastriginTask(4), MlpPointTask(hidden=(6, 5))])
def test_pure_and_batch_consistent(task, rng):
    g = task.initial_genotypes(32, rng) * 3
    f_batch, d_batch = task.evaluate_batch(g)
    for i in range(len(g)):
        f1, d1 = task.evaluate(g[i])
        f2, d2 = task.evaluate(g[i].copy())
        assert f1 == f2 == f_batch[i]
        np.testing.assert_array_equal(d1, d2)
        np.testing.assert_array_equal(d1, d_batch[i])


def test_make_task():
    assert make_task("arm", {"n_links": 3}).genotype_dim == 3
    with pytest.raises(ValidationError):
        make_task("walker")
    with pytest.raises(ValidationError) as info:
        make_task("arm", {"links": 3})
    assert info.value.field == "links"
