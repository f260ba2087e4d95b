import numpy as np
import pytest

import netlap


def test_path_stationary_and_hitting():
    net = netlap.path_network(4)
    np.testing.assert_allclose(netlap.stationary(net), [0.125, 0.25, 0.25, 0.25, 0.125], atol=1e-15)
    nu = netlap.hitting_matrix(net)
    np.testing.assert_allclose(nu[0].real, [0.75, 0.25], atol=1e-13)
    assert netlap.reversible(net)


def test_transition_rows_sum_to_one():
    net = netlap.random_network(9, 4)
    p = netlap.transition_matrix(net)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
    pi = netlap.stationary(net)
    np.testing.assert_allclose(pi @ p, pi, atol=1e-12)


def test_dirichlet_midpoint():
    sol = netlap.solve_dirichlet(netlap.path_network(2), {1: 0}, {0: 0, 2: 1})
    assert sol["u"][1] == pytest.approx(0.5, abs=1e-15)
    assert sol["degrees_of_freedom"] == 0


def test_bi_blocks_and_transfer():
    blocks = netlap.bi_blocks(netlap.path_network(4))
    np.testing.assert_allclose(blocks["R"].real, np.array([[7, 5], [5, 7]]) / 4, atol=1e-13)
    np.testing.assert_allclose(netlap.transfer_matrix(netlap.path_network(4)).real,
                               np.array([[1, -1], [-1, 1]]) / 6, atol=1e-13)
    g1 = netlap.bi_d2n(netlap.path_network(4), {0: 1, 4: 0}, {1: 0, 2: 0, 3: 0})
    assert g1[0] == pytest.approx(1 / 6, abs=1e-14)


def test_errors_map_to_python():
    cyc = netlap.cycle_network(8)
    with pytest.raises(netlap.SingularError):
        netlap.solve_bidirichlet(cyc, {0: 0, 2: 0, 4: 0, 6: 0}, {1: 1, 3: 1, 5: 1, 7: 1})
    with pytest.raises(netlap.SolvabilityError):
        netlap.solve_bineumann(netlap.path_network(4), {1: 1, 2: 1, 3: 1}, {0: 0, 4: 0})
    with pytest.raises(netlap.InputError):
        netlap.Network.parse("{ nope")
    assert issubclass(netlap.SingularError, netlap.Error)


def test_round_trip_and_monte_carlo():
    net = netlap.random_network(7, 2)
    again = netlap.Network.parse(net.to_json())
    assert again.to_json() == net.to_json()
    est = netlap.estimate_hitting(netlap.path_network(4), 1, 40000, 42)
    mean, se = est[0]
    assert abs(mean - 0.75) <= 4 * se + 1e-12
