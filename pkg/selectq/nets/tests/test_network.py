"""
TEST_NETWORK

Tests for SharedParams, network_forward, network_backward and param_count.
"""

import numpy as np
import pytest

from selectq.errors import ShapeError
from selectq.matrices.rng import SeededRng
from selectq.nets.groups import (
    GroupSpec,
    Permutation,
    PhaseInput,
    apply_permutation,
    group_specs,
    permute_rows,
)
from selectq.nets.layers import SharedLayerParams
from selectq.nets.network import (
    SharedParams,
    build_shared_params,
    forward_batch,
    network_backward,
    network_forward,
    param_count,
    zero_pooled,
)

D_I, C, D_U = 3, 2, 2


def random_input(rng, k, n, m):
    return PhaseInput.build(
        rng.normal(size=(k, D_I + C)),
        rng.normal(size=(n, D_I)),
        rng.normal(size=(m, D_U)),
        item_width=D_I,
        n_commands=C,
        context_width=D_U,
    )


def random_theta(seed, activation="tanh", depth=2, channels=6, context=True):
    groups = group_specs(D_I, C, D_U if context else 0)
    return build_shared_params(SeededRng(seed), groups, C, depth, channels, activation)


class TestSharedParams:
    """Tests for SharedParams construction and param_count."""

    def test_zero_layers(self):
        """Tests that a network without layers is illegal."""
        with pytest.raises(ShapeError):
            SharedParams([], group_specs(D_I, C))
        with pytest.raises(ShapeError):
            build_shared_params(SeededRng(0), group_specs(D_I, C), C, depth=-1)

    def test_last_layer_psi(self):
        """Tests that the last layer must be a psi layer on group I."""
        phi = SharedLayerParams.zeros({"I": 1}, ("I",), 1, "phi")
        with pytest.raises(ShapeError):
            SharedParams([phi], (GroupSpec("I", 1),))

    def test_widths_compose(self):
        """Tests that adjacent layer widths must agree."""
        a = SharedLayerParams.zeros({"I": 1}, ("I",), 4, "phi")
        b = SharedLayerParams.zeros({"I": 3}, ("I",), 1, "psi")
        with pytest.raises(ShapeError):
            SharedParams([a, b], (GroupSpec("I", 1),))

    def test_count_independent_of_n(self):
        """Tests that one network evaluates at N=50 and N=200 with a fixed count."""
        theta = random_theta(1, "relu", depth=3, channels=8, context=False)
        count = param_count(theta)
        rng = SeededRng(2)
        for n in (50, 200):
            q = network_forward(theta, random_input(rng, 0, n, 0))
            assert q.shape == (n, C)
        assert param_count(theta) == count == theta.to_vector().size

    def test_count_formula(self):
        """Tests the count of a depth-1 network against hand enumeration."""
        theta = build_shared_params(SeededRng(0), group_specs(2, 1), 1, depth=1, channels=4)
        phi = 2 * 4 * (3 + 2) + 4 * (3 + 2) + 2 * 4
        psi = 1 * (4 + 4) + 4 + 1
        assert param_count(theta) == phi + psi


class TestNetworkForward:
    """Tests for network_forward."""

    def test_psi_only(self):
        """Tests that a psi-only network equals the hand-evaluated layer."""
        layer = SharedLayerParams(
            in_widths={"I": 1},
            out_groups=("I",),
            out_width=1,
            self_w={"I": np.array([[1.0]])},
            cross_w={("I", "I"): np.array([[1.0]])},
            bias={"I": np.array([0.0])},
            kind="psi",
        )
        theta = SharedParams([layer], (GroupSpec("I", 1),))
        s = PhaseInput(x=np.zeros((0, 0)), i=np.array([[1.0], [3.0]]), u=np.zeros((0, 0)))
        assert np.allclose(network_forward(theta, s), [[3.0], [5.0]], atol=1e-15)

    def test_identity_permutation(self):
        """Tests that the identity permutation leaves Q unchanged."""
        theta = random_theta(3)
        s = random_input(SeededRng(4), 2, 4, 3)
        q = network_forward(theta, s)
        assert np.array_equal(network_forward(theta, apply_permutation(Permutation.identity(2, 4, 3), s)), q)

    @pytest.mark.parametrize("activation", ["relu", "tanh", "softplus"])
    def test_equi_invariance(self, activation):
        """Tests Q(sigma(s)) == sigma_i(Q(s)) for random sigma."""
        rng = SeededRng(5)
        for trial in range(10):
            theta = random_theta(100 + trial, activation, depth=3)
            s = random_input(rng, 2, 5, 3)
            sigma = Permutation.random(rng, 2, 5, 3)
            left = network_forward(theta, apply_permutation(sigma, s))
            right = permute_rows(sigma.i, network_forward(theta, s))
            assert np.max(np.abs(left - right)) <= 1e-10

    def test_invariance_in_x_and_u(self):
        """Tests that permuting only X and U leaves Q unchanged."""
        rng = SeededRng(6)
        theta = random_theta(7, "relu", depth=3)
        s = random_input(rng, 3, 4, 4)
        sigma = Permutation(rng.permutation(3), np.arange(4), rng.permutation(4))
        assert np.allclose(network_forward(theta, apply_permutation(sigma, s)), network_forward(theta, s), atol=1e-10)

    def test_empty_group_neutral(self):
        """Tests that the weights reading an empty U change no output."""
        rng = SeededRng(8)
        theta = random_theta(9)
        s = random_input(rng, 1, 3, 0)
        base = network_forward(theta, s)
        bumped = theta.copy()
        for layer in bumped.layers:
            for g in layer.out_groups:
                layer.cross_w[(g, "U")] += 5.0
            if "U" in layer.out_groups:
                layer.self_w["U"] += 5.0
                layer.bias["U"] += 5.0
        assert np.array_equal(network_forward(bumped, s), base)

    def test_empty_i(self):
        """Tests that an empty unselected group is an error."""
        theta = random_theta(10)
        with pytest.raises(ShapeError):
            network_forward(theta, random_input(SeededRng(0), 2, 0, 1))

    def test_context_without_group(self):
        """Tests that context items need a U group."""
        theta = random_theta(11, context=False)
        with pytest.raises(ShapeError):
            network_forward(theta, random_input(SeededRng(0), 1, 2, 2))

    def test_batch_matches_single(self):
        """Tests that batched evaluation matches per-state evaluation."""
        rng = SeededRng(12)
        theta = random_theta(13, "relu")
        states = [random_input(rng, 1, 4, 2) for _ in range(5)]
        q, _ = forward_batch(theta, states)
        for b, s in enumerate(states):
            assert np.allclose(q[b], network_forward(theta, s), atol=1e-14)


class TestNetworkBackward:
    """Tests for network_backward."""

    def test_zero_upstream(self):
        """Tests that a zero upstream gives a zero gradient."""
        theta = random_theta(20)
        s = random_input(SeededRng(21), 1, 3, 2)
        grad = network_backward(theta, s, np.zeros((3, C)))
        assert grad.shape == (param_count(theta),)
        assert np.all(grad == 0.0)

    def test_finite_difference(self):
        """Tests every component against a central difference with h=1e-5."""
        theta = random_theta(22, "tanh", depth=2, channels=3)
        rng = SeededRng(23)
        s = random_input(rng, 1, 3, 2)
        upstream = rng.normal(size=(3, C))
        grad = network_backward(theta, s, upstream)
        vector = theta.to_vector()
        h = 1e-5
        for idx in range(vector.size):
            plus, minus = vector.copy(), vector.copy()
            plus[idx] += h
            minus[idx] -= h
            f_plus = np.sum(upstream * network_forward(theta.with_vector(plus), s))
            f_minus = np.sum(upstream * network_forward(theta.with_vector(minus), s))
            fd = (f_plus - f_minus) / (2 * h)
            assert abs(grad[idx] - fd) <= 1e-4 * max(abs(grad[idx]), abs(fd), 1e-3)

    def test_upstream_shape(self):
        """Tests that a mis-shaped upstream gradient is rejected."""
        theta = random_theta(24)
        s = random_input(SeededRng(25), 1, 3, 2)
        with pytest.raises(ShapeError):
            network_backward(theta, s, np.zeros((2, C)))


class TestZeroPooled:
    """Tests for local-only networks."""

    def test_rows_depend_on_own_item(self):
        """Tests that a local-only row ignores every other item."""
        theta = zero_pooled(random_theta(30, "relu"))
        rng = SeededRng(31)
        s = random_input(rng, 2, 4, 2)
        q = network_forward(theta, s)
        changed = PhaseInput(x=s.x + 1.0, i=np.vstack([s.i[:1], s.i[1:] + 1.0]), u=s.u - 1.0)
        assert np.allclose(network_forward(theta, changed)[0], q[0], atol=1e-14)

    def test_gradient_masked(self):
        """Tests that pooled scalars receive no gradient."""
        theta = zero_pooled(random_theta(32, "tanh"))
        s = random_input(SeededRng(33), 1, 3, 2)
        grad = network_backward(theta, s, np.ones((3, C)))
        assert np.all(grad[theta.pooled_mask() == 0.0] == 0.0)
