"""
Unit tests for app.domain.networks module.
Tests forward passes, hand-written gradients and parameter bookkeeping.
"""

import numpy as np
import pytest

from app.domain.networks import (
    ComplexNetwork,
    LayerParams,
    complex_parameter_count,
    crelu,
    embed_complex,
    init_network,
    init_real_network,
    loss,
    parameter_ratio,
    parity_hidden_width,
    real_baseline_dims,
    real_parameter_count,
    unembed_real,
)
from app.errors import InvalidArgumentError, InvalidStateError
from tests.conftest import complex_randn

pytestmark = pytest.mark.unit

STEP = 1e-6

COMPLEX_DIMS = [[3, 4, 2], [2, 5, 5, 3], [4, 3, 3, 3, 4], [1, 6, 1], [5, 2, 7]]
REAL_DIMS = [[6, 5, 4], [4, 8, 8, 6], [2, 3, 3, 3, 2], [8, 4, 2], [3, 7, 5]]


def numeric_gradients(net, X, T):
    """Central finite differences packaged as dL/dRe + j dL/dIm."""
    grads = []
    for param in net.parameters():
        view = param.view(np.float64) if np.iscomplexobj(param) else param
        flat = view.reshape(-1)
        numeric = np.zeros_like(flat)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + STEP
            up = net.loss(net.forward(X), T)
            flat[i] = original - STEP
            down = net.loss(net.forward(X), T)
            flat[i] = original
            numeric[i] = (up - down) / (2 * STEP)
        numeric = numeric.reshape(view.shape)
        grads.append(numeric.view(np.complex128) if np.iscomplexobj(param) else numeric)
    return grads


def analytic_gradients(net, X, T):
    outputs, cache = net.forward_batch(X)
    flat = []
    for g in net.backward(cache, T):
        flat.extend([g.W, g.b])
    return flat


def relative_error(analytic, numeric):
    a = np.concatenate([np.ravel(g) for g in analytic])
    n = np.concatenate([np.ravel(g) for g in numeric])
    return np.linalg.norm(a - n) / max(np.linalg.norm(n), 1e-12)


class TestActivations:
    """Test suite for activations and the re/im embedding."""

    def test_crelu_is_split(self):
        """Test CReLU clamps real and imaginary parts independently."""
        z = np.array([1 - 2j, -3 + 4j, -1 - 1j])
        np.testing.assert_array_equal(crelu(z), np.array([1 + 0j, 0 + 4j, 0j]))

    def test_crelu_idempotent(self, rng):
        """Test applying CReLU twice equals applying it once."""
        z = complex_randn(rng, 200)

        np.testing.assert_array_equal(crelu(crelu(z)), crelu(z))

    def test_crelu_identity_on_first_quadrant(self, rng):
        """Test CReLU leaves values with non-negative parts untouched."""
        z = np.abs(rng.standard_normal(50)) + 1j * np.abs(rng.standard_normal(50))

        np.testing.assert_array_equal(crelu(z), z)

    def test_embedding_inverse(self, rng):
        """Test unembedding recovers the complex vector."""
        x = complex_randn(rng, (3, 5))

        stacked = embed_complex(x)

        assert stacked.shape == (3, 10)
        np.testing.assert_array_equal(stacked[:, :5], x.real)
        np.testing.assert_array_equal(unembed_real(stacked), x)

    def test_unembed_odd_length(self):
        """Test odd-length vectors cannot be unembedded."""
        with pytest.raises(InvalidArgumentError):
            unembed_real(np.zeros(3))


class TestGradients:
    """Test suite for backpropagation against finite differences."""

    @pytest.mark.parametrize("index,dims", list(enumerate(COMPLEX_DIMS)))
    def test_complex_network(self, index, dims):
        """Test complex gradients agree with finite differences."""
        rng = np.random.default_rng(100 + index)
        net = init_network(dims, seed=index)
        for layer in net.layers:
            layer.b[:] = 0.1 * complex_randn(rng, layer.b.shape)
        X = complex_randn(rng, (4, dims[0]))
        T = complex_randn(rng, (4, dims[-1]))

        error = relative_error(analytic_gradients(net, X, T), numeric_gradients(net, X, T))

        assert error < 1e-4

    @pytest.mark.parametrize("index,dims", list(enumerate(REAL_DIMS)))
    def test_real_network(self, index, dims):
        """Test real gradients agree with finite differences."""
        rng = np.random.default_rng(200 + index)
        net = init_real_network(dims, seed=index)
        for layer in net.layers:
            layer.b[:] = 0.1 * rng.standard_normal(layer.b.shape)
        X = rng.standard_normal((4, dims[0]))
        T = rng.standard_normal((4, dims[-1]))

        error = relative_error(analytic_gradients(net, X, T), numeric_gradients(net, X, T))

        assert error < 1e-4

    def test_hand_worked_single_layer(self):
        """Test one affine layer's loss and gradients against a hand calculation."""
        net = ComplexNetwork(
            [LayerParams(W=np.array([[2 + 1j]]), b=np.array([0.5j]), has_activation=False)]
        )
        x = np.array([[1 - 1j]])
        target = np.array([[1.0 + 0j]])

        # z = (2+j)(1-j) + 0.5j = 3 - 0.5j, e = 2 - 0.5j
        out, cache = net.forward_batch(x)
        grads = net.backward(cache, target)

        assert net.loss(out, target) == pytest.approx(4.25)
        assert grads[0].W[0, 0] == pytest.approx(5 + 3j)
        assert grads[0].b[0] == pytest.approx(4 - 1j)

    def test_stale_cache(self, rng):
        """Test backward refuses a cache from before a parameter update."""
        net = init_network([2, 3, 2], seed=1)
        X = complex_randn(rng, (2, 2))
        _, cache = net.forward_batch(X)
        net.mark_updated()

        with pytest.raises(InvalidStateError):
            net.backward(cache, X)


class TestNetworkStructure:
    """Test suite for construction, forward passes and parameter counts."""

    def test_forward_single_and_batch(self, rng):
        """Test a single vector gives the matching batch row."""
        net = init_network([3, 4, 2], seed=2)
        X = complex_randn(rng, (5, 3))

        batch = net.forward(X)

        assert batch.shape == (5, 2)
        np.testing.assert_allclose(net.forward(X[1]), batch[1])

    def test_forward_matches_scalar_loops(self, rng):
        """Test the forward pass against an explicit loop over every weight."""
        net = init_network([3, 4, 2], seed=4)
        for layer in net.layers:
            layer.b[:] = complex_randn(rng, layer.b.shape)
        x = complex_randn(rng, 3)

        a = list(x)
        for layer in net.layers:
            z = []
            for i in range(layer.n_out):
                total = layer.b[i]
                for j in range(layer.n_in):
                    total += layer.W[i, j] * a[j]
                z.append(total)
            if layer.has_activation:
                z = [complex(max(v.real, 0.0), max(v.imag, 0.0)) for v in z]
            a = z

        np.testing.assert_allclose(net.forward(x), np.array(a), rtol=0, atol=1e-12)

    def test_real_parameters_match_relu_network(self, rng):
        """Test real inputs and weights reduce the complex network to a ReLU network."""
        real_net = init_real_network([3, 5, 4, 2], seed=6)
        for layer in real_net.layers:
            layer.b[:] = rng.standard_normal(layer.b.shape)
        complex_net = ComplexNetwork(
            [
                LayerParams(W=layer.W, b=layer.b, has_activation=layer.has_activation)
                for layer in real_net.layers
            ]
        )
        X = rng.standard_normal((6, 3))

        out = complex_net.forward(X)

        np.testing.assert_array_equal(out.imag, 0.0)
        np.testing.assert_allclose(out.real, real_net.forward(X), rtol=0, atol=1e-12)

    def test_loss_hand_example(self):
        """Test one sample with residual [1, j] has loss (1 + 1) / 2."""
        target = np.array([[0.5 + 0.5j, -1.0 + 0j]])
        output = target + np.array([[1.0, 1j]])

        assert loss(output, target) == pytest.approx(1.0)
        assert init_network([2, 3, 2], 0).loss(output, target) == pytest.approx(1.0)
        assert loss(target + 2 * (output - target), target) == pytest.approx(4.0)

    def test_init_variance(self):
        """Test first-layer weights have variance 1/n_in."""
        net = init_network([400, 300, 2], seed=3)
        W = net.layers[0].W

        assert W.size >= 100_000
        assert np.mean(np.abs(W) ** 2) == pytest.approx(1 / 400, rel=0.05)
        assert abs(np.mean(W)) < 0.05 / np.sqrt(400)
        np.testing.assert_array_equal(net.layers[0].b, 0)

    def test_seeded_init(self):
        """Test the same seed gives identical parameters."""
        assert init_network([3, 4, 2], 9).checksum() == init_network([3, 4, 2], 9).checksum()
        assert init_network([3, 4, 2], 9).checksum() != init_network([3, 4, 2], 10).checksum()

    def test_rejects_shallow_network(self):
        """Test networks need at least one hidden layer."""
        with pytest.raises(InvalidArgumentError):
            init_network([3, 2], seed=1)

    def test_rejects_mismatched_layers(self):
        """Test consecutive layer widths must agree."""
        layers = [
            LayerParams(W=np.zeros((3, 2)), b=np.zeros(3), has_activation=True),
            LayerParams(W=np.zeros((2, 4)), b=np.zeros(2), has_activation=False),
        ]
        with pytest.raises(InvalidArgumentError):
            ComplexNetwork(layers)

    def test_input_length_checked(self, rng):
        """Test inputs of the wrong length are rejected."""
        with pytest.raises(InvalidArgumentError):
            init_network([3, 4, 2], seed=1).forward(complex_randn(rng, 4))

    def test_parameter_counts(self):
        """Test complex parameters count twice as real scalars."""
        dims = [4, 8, 6]
        assert init_network(dims, 0).parameter_count() == complex_parameter_count(dims) == 2 * 94
        assert init_real_network(dims, 0).parameter_count() == real_parameter_count(dims) == 94

    def test_real_loss_matches_complex_loss(self, rng):
        """Test the stacked real loss equals the complex loss on the same vectors."""
        complex_net = init_network([2, 3, 3], 0)
        real_net = init_real_network([4, 3, 6], 0)
        out, target = complex_randn(rng, (4, 3)), complex_randn(rng, (4, 3))

        expected = complex_net.loss(out, target)

        assert real_net.loss(embed_complex(out), embed_complex(target)) == pytest.approx(expected)

    def test_parity_width(self):
        """Test the parity baseline is within a few percent of the complex count."""
        complex_dims = [64, 512, 512, 512, 448]
        width = parity_hidden_width(complex_dims)
        real_dims = real_baseline_dims(complex_dims, [width] * 3)

        assert real_dims[0] == 128 and real_dims[-1] == 896
        assert parameter_ratio(complex_dims, real_dims) == pytest.approx(1.0, abs=0.02)

    def test_wide_baseline_ratio(self):
        """Test a 1024-wide baseline far exceeds a small complex network."""
        complex_dims = [64, 128, 128, 128, 448]
        real_dims = real_baseline_dims(complex_dims, [1024] * 3)

        assert parameter_ratio(complex_dims, real_dims) > 10
