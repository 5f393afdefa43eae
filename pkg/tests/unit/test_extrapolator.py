"""
Unit tests for app.domain.extrapolator module.
"""

import numpy as np
import pytest

from app.domain.entities import ModelKind
from app.domain.estimation import partition_antennas
from app.domain.extrapolator import (
    NativeCopyExtrapolator,
    NetworkExtrapolator,
    extrapolate,
    normalization_scale,
)
from app.domain.layout import VectorLayout
from app.domain.networks import init_network, init_real_network
from app.errors import InvalidArgumentError
from tests.conftest import complex_randn

pytestmark = pytest.mark.unit


@pytest.fixture
def layout():
    return VectorLayout.for_group_map(2, partition_antennas(6, 3))


class TestNormalizationScale:
    """Test suite for normalization_scale."""

    def test_unit_power(self, rng):
        """Test scaled data has unit average per-entry power."""
        inputs = 5 * complex_randn(rng, (20, 4))
        targets = 5 * complex_randn(rng, (20, 8))

        s = normalization_scale(inputs, targets)

        total = np.sum(np.abs(s * inputs) ** 2) + np.sum(np.abs(s * targets) ** 2)
        assert total / (inputs.size + targets.size) == pytest.approx(1.0)

    def test_all_zero(self):
        """Test an all-zero training set cannot be normalized."""
        with pytest.raises(InvalidArgumentError):
            normalization_scale(np.zeros((2, 2)), np.zeros((2, 2)))


class TestNetworkExtrapolator:
    """Test suite for NetworkExtrapolator."""

    def test_kind(self):
        """Test the family follows the network type."""
        assert NetworkExtrapolator(init_network([4, 5, 8], 0), 1.0).kind is ModelKind.PRNET
        assert NetworkExtrapolator(init_real_network([8, 5, 16], 0), 1.0).kind is ModelKind.DNN

    def test_predict_undoes_scale(self, rng):
        """Test predictions are returned in the original channel scale."""
        net = init_network([4, 5, 8], 0)
        h_es = complex_randn(rng, (3, 4))
        model = NetworkExtrapolator(net, scale=2.0)

        np.testing.assert_allclose(model.predict(h_es), net.forward(2.0 * h_es) / 2.0)

    def test_real_predict_is_complex(self, rng):
        """Test the real baseline returns complex vectors of target length."""
        model = NetworkExtrapolator(init_real_network([8, 5, 16], 0), 1.0)

        prediction = model.predict(complex_randn(rng, (3, 4)))

        assert prediction.shape == (3, 8)
        assert np.iscomplexobj(prediction)

    def test_rejects_non_positive_scale(self):
        """Test the scale must be positive."""
        with pytest.raises(InvalidArgumentError):
            NetworkExtrapolator(init_network([4, 5, 8], 0), 0.0)


class TestNativeCopyExtrapolator:
    """Test suite for NativeCopyExtrapolator."""

    def test_copies_native_column(self, layout, rng):
        """Test every non-native mode repeats the antenna's estimated column."""
        H_es = complex_randn(rng, (2, 6))
        model = NativeCopyExtrapolator(layout)

        H_all = extrapolate(model, H_es, layout)

        for p in range(3):
            np.testing.assert_array_equal(H_all[:, :, p], H_es)
        assert model.parameter_count() == 0

    def test_length_checked(self, layout):
        """Test vectors of the wrong length are rejected."""
        with pytest.raises(InvalidArgumentError):
            NativeCopyExtrapolator(layout).predict(np.zeros(5))


class TestExtrapolate:
    """Test suite for extrapolate."""

    def test_keeps_estimated_columns(self, layout, rng):
        """Test the native-mode entries of the full CSI equal the estimate."""
        model = NetworkExtrapolator(init_network([12, 16, 24], 1), 1.0)
        H_es = complex_randn(rng, (2, 6))
        assignment = partition_antennas(6, 3).assignment

        H_all = extrapolate(model, H_es, layout)

        assert H_all.shape == (2, 6, 3)
        np.testing.assert_allclose(H_all[:, np.arange(6), assignment], H_es)
