import numpy as np
import pytest

from helpers import finite_diff, max_rel_error
from ingrex.errors import DimensionMismatch, InvalidConfig, ShapeMismatch
from ingrex.nn import (
    MlpParams,
    TrainConfig,
    cross_entropy,
    grad_step,
    init_mlp,
    init_optimizer_state,
    kl_divergence,
    mlp_backward,
    mlp_forward,
    mlp_forward_batch,
    mlp_forward_cache,
    softmax,
)


def _mlp(weights, biases, activations):
    return MlpParams(
        weights=tuple(np.asarray(w, dtype=float) for w in weights),
        biases=tuple(np.asarray(b, dtype=float) for b in biases),
        activations=tuple(activations),
    )


class TestMlpForward:
    def test_zero_weights_zero_bias_identity(self):
        mlp = _mlp([np.zeros((3, 2))], [np.zeros(2)], ["identity"])
        assert mlp_forward(mlp, [1.0, 2.0, 3.0]).tolist() == [0.0, 0.0]

    def test_relu_definition(self):
        mlp = _mlp([np.eye(2)], [np.zeros(2)], ["relu"])
        assert mlp_forward(mlp, [-1.0, 2.0]).tolist() == [0.0, 2.0]

    def test_two_layer_hand_computed(self):
        mlp = _mlp(
            [[[1.0, 2.0], [3.0, 4.0]], [[1.0], [-1.0]]],
            [[0.5, -0.5], [0.25]],
            ["relu", "identity"],
        )
        # x W + b = [4.5, 5.5]; relu keeps both; 4.5 - 5.5 + 0.25 = -0.75
        assert mlp_forward(mlp, [1.0, 1.0]).tolist() == [-0.75]

    def test_dimension_mismatch(self):
        mlp = _mlp([np.eye(2)], [np.zeros(2)], ["identity"])
        with pytest.raises(DimensionMismatch):
            mlp_forward(mlp, [1.0, 2.0, 3.0])

    def test_layer_chain_validated(self):
        with pytest.raises(DimensionMismatch):
            _mlp([np.eye(2), np.eye(3)], [np.zeros(2), np.zeros(3)], ["relu", "identity"])


class TestSoftmax:
    def test_symmetry(self):
        assert softmax([0.0, 0.0]).tolist() == [0.5, 0.5]

    def test_no_overflow(self):
        assert np.allclose(softmax([1000.0, 1000.0]), [0.5, 0.5])

    def test_closed_form(self):
        assert np.allclose(softmax([np.log(2.0), 0.0]), [2 / 3, 1 / 3], atol=1e-12)

    def test_shift_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            z = rng.normal(size=5)
            assert np.max(np.abs(softmax(z) - softmax(z + 17.3))) < 1e-12

    def test_sums_to_one(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            p = softmax(rng.normal(size=6) * 10)
            assert abs(p.sum() - 1.0) < 1e-12
            assert np.all(p > 0)


class TestLosses:
    def test_kl_of_identical_is_zero(self):
        assert kl_divergence([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_cross_entropy_uniform(self):
        assert abs(cross_entropy([0.25] * 4, 2) - np.log(4.0)) < 1e-12

    def test_kl_hand_computed(self):
        expected = 0.9 * np.log(1.8) + 0.1 * np.log(0.2)
        assert abs(kl_divergence([0.9, 0.1], [0.5, 0.5]) - expected) < 1e-12

    def test_kl_student_floor(self):
        # hard teacher against a zero student probability stays finite
        assert np.isfinite(kl_divergence([1.0, 0.0], [0.0, 1.0]))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            kl_divergence([1.0], [0.5, 0.5])


class TestGradStep:
    def test_zero_grads_leave_params_unchanged(self):
        params = [np.array([1.0, -2.0])]
        for opt in ("sgd", "adam"):
            cfg = TrainConfig(learning_rate=0.1, epochs=1, optimizer=opt)
            out, _ = grad_step(params, [np.zeros(2)], cfg, init_optimizer_state(params))
            assert out[0].tolist() == [1.0, -2.0]

    def test_sgd_definition(self):
        cfg = TrainConfig(learning_rate=0.1, epochs=1, optimizer="sgd")
        out, _ = grad_step([np.array([1.0])], [np.array([2.0])], cfg, init_optimizer_state([np.array([1.0])]))
        assert abs(out[0][0] - 0.8) < 1e-15

    def test_adam_first_step_bias_corrected(self):
        cfg = TrainConfig(learning_rate=0.05, epochs=1, optimizer="adam")
        params = [np.array([0.0])]
        out, state = grad_step(params, [np.array([1.0])], cfg, init_optimizer_state(params))
        assert abs(out[0][0] + 0.05) < 1e-8
        assert state.t == 1

    def test_shape_mismatch(self):
        cfg = TrainConfig(learning_rate=0.1, epochs=1)
        with pytest.raises(ShapeMismatch):
            grad_step([np.zeros(2)], [np.zeros(3)], cfg, init_optimizer_state([np.zeros(2)]))

    def test_config_validation(self):
        with pytest.raises(InvalidConfig):
            TrainConfig(learning_rate=0.0, epochs=1)
        with pytest.raises(InvalidConfig):
            TrainConfig(learning_rate=0.1, epochs=0)
        with pytest.raises(InvalidConfig):
            TrainConfig(learning_rate=0.1, epochs=1, optimizer="momentum")


class TestMlpGradients:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    @pytest.mark.parametrize("acts", [("relu", "identity"), ("sigmoid", "identity")])
    def test_backward_matches_finite_differences(self, seed, acts):
        rng = np.random.default_rng(seed)
        mlp = init_mlp([3, 4, 2], list(acts), seed=seed)
        x = rng.normal(size=(5, 3))

        def loss_of(params):
            candidate = MlpParams(
                weights=tuple(params[:2]), biases=tuple(params[2:]), activations=acts
            )
            out = mlp_forward_batch(candidate, x)
            return float(np.sum(out**2))

        params = list(mlp.weights) + list(mlp.biases)
        out, cache = mlp_forward_cache(mlp, x)
        w_grads, b_grads, _ = mlp_backward(mlp, cache, 2.0 * out)
        assert max_rel_error(w_grads + b_grads, finite_diff(loss_of, params)) < 1e-4
