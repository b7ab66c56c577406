"""Tests for the finite-difference gradient checker."""

import numpy as np
import pytest

from nn import GRADCHECK_CASES, functional as F, run_gradcheck
from nn.gradcheck import check_case, relative_error
from nn.tensor import make_node


class TestRunGradcheck:
    """Tests for run_gradcheck over the registered cases."""

    def test_every_layer_passes(self):
        """Test that all cases stay below 1e-4 relative error over 10 seeds."""
        results = run_gradcheck(seeds=10)

        assert [r.name for r in results] == list(GRADCHECK_CASES)
        for result in results:
            assert result.passed, str(result)
            assert result.max_rel_error < 1e-4

    def test_covers_every_layer_type(self):
        """Test that each trainable or differentiable op has a case."""
        expected = {
            "conv2d", "dense", "sigmoid", "relu", "softmax", "softmax_cross_entropy",
            "maxpool2d", "batchnorm", "dropout", "concat",
        }
        assert expected <= set(GRADCHECK_CASES)

    def test_corrupted_dense_backward_fails(self, monkeypatch):
        """Test that doubling the dense gradient is caught and named."""
        original = F.dense

        def doubled(i, w, b, activation=None):
            out = original(i, w, b, activation)
            return make_node(out.data, (out,), "doubled", lambda g: (2.0 * g,))

        monkeypatch.setattr(F, "dense", doubled)
        results = {r.name: r for r in run_gradcheck(names=["dense", "relu"], seeds=2)}

        assert not results["dense"].passed
        assert results["dense"].max_rel_error > 0.1
        assert str(results["dense"]).startswith("FAIL dense")
        assert results["relu"].passed

    def test_unknown_case(self):
        """Test that an unknown case name raises ValueError."""
        with pytest.raises(ValueError, match="not found"):
            check_case("tanh", 0)


class TestRelativeError:
    """Tests for relative_error."""

    def test_identical_is_zero(self):
        """Test that equal arrays have zero error."""
        a = np.array([1.0, -2.0, 3e-3])

        assert relative_error(a, a.copy()) == 0.0

    def test_scaled_by_magnitude(self):
        """Test that the error is relative to the larger magnitude."""
        assert relative_error(np.array([2.0]), np.array([1.0])) == pytest.approx(0.5)
