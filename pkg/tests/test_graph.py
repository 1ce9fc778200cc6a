import itertools

import numpy as np
import pytest

from heavytail import (CapacityError, CausalOrder, Dag, GeneratorConfig, NoiseSpec,
                       Scm, ValidationError, all_causal_orders, check_path_faithful,
                       path_weights, random_scm, validate_order)

from conftest import make_chain


def test_dag_validation():
    with pytest.raises(ValidationError):
        Dag(0)
    with pytest.raises(ValidationError, match="out of range"):
        Dag(2, [(0, 2)])
    with pytest.raises(ValidationError, match="self-loop"):
        Dag(2, [(1, 1)])
    with pytest.raises(ValidationError, match="duplicate"):
        Dag(2, [(0, 1), (0, 1)])
    with pytest.raises(ValidationError, match="cycle"):
        Dag(3, [(0, 1), (1, 2), (2, 0)])


def test_ancestors_diamond(diamond_scm):
    dag = diamond_scm.dag
    assert dag.ancestors(3) == frozenset({0, 1, 2, 3})
    assert dag.strict_ancestors(3) == frozenset({0, 1, 2})
    assert dag.ancestors(0) == frozenset({0})


def test_ancestors_chain_and_isolated():
    chain = Dag(3, [(0, 1), (1, 2)])
    assert chain.ancestors(2) == frozenset({0, 1, 2})
    isolated = Dag(3, [(0, 1)])
    assert isolated.ancestors(2) == frozenset({2})
    with pytest.raises(ValidationError):
        chain.ancestors(5)


def test_topological_order_respects_edges():
    dag = Dag(5, [(3, 1), (1, 0), (0, 4), (3, 2)])
    order = dag.topological_order
    for parent, child in dag.edges:
        assert order.index(parent) < order.index(child)


def test_path_weights_diamond(diamond_scm):
    h = path_weights(diamond_scm).matrix
    assert h[3, 0] == 2.0
    assert h[3, 1] == 1.0 and h[3, 2] == 1.0
    assert np.all(np.diag(h) == 1.0)


def test_path_weights_empty_graph():
    scm = Scm(Dag(3), {}, NoiseSpec("student_t", 2.0))
    assert np.array_equal(path_weights(scm).matrix, np.eye(3))


def test_path_weights_chain_product():
    scm = make_chain([0.5, 0.4])
    h = path_weights(scm).matrix
    assert h[2, 0] == pytest.approx(0.2, abs=1e-15)


@pytest.mark.parametrize("p", [5, 20, 50])
def test_path_weights_residual(p):
    scm = random_scm(p, 1.5, GeneratorConfig(), seed=p)
    weights = path_weights(scm)
    assert weights.residual_norm(scm) < 1e-10


def test_positive_mode_weights_mark_ancestry():
    for seed in range(30):
        scm = random_scm(6, 1.5, GeneratorConfig(mode="positive"), seed=seed)
        h = path_weights(scm).matrix
        for j in range(scm.p):
            for k in range(scm.p):
                assert (h[j, k] > 0) == (k in scm.dag.ancestors(j))


def test_causal_order_round_trip():
    order = CausalOrder([2, 0, 1])
    assert order.position(2) == 0
    assert CausalOrder.from_positions(order.positions()) == order
    assert order.relabel([10, 11, 12]).sequence == (12, 10, 11)
    with pytest.raises(ValidationError):
        CausalOrder([0, 0, 1])


def test_validate_order_chain():
    dag = Dag(2, [(0, 1)])
    assert validate_order(dag, CausalOrder([0, 1])).valid
    check = validate_order(dag, CausalOrder([1, 0]))
    assert not check.valid
    assert check.violations == ((0, 1),)


def test_validate_order_known_four_node_dag(fournode_dag):
    assert validate_order(fournode_dag, CausalOrder([1, 0, 3, 2])).valid
    assert not validate_order(fournode_dag, CausalOrder([0, 1, 2, 3])).valid


def test_validate_order_requires_full_coverage():
    dag = Dag(3, [(0, 1)])
    with pytest.raises(ValidationError):
        validate_order(dag, CausalOrder([0, 1]))
    with pytest.raises(ValidationError):
        validate_order(dag, CausalOrder([0, 1, 5]))


def test_validate_order_observed_only_uses_full_ancestry():
    # 0 -> 1 -> 2 with node 1 unobserved: 0 still precedes 2 through the hidden path
    dag = Dag(3, [(0, 1), (1, 2)])
    assert validate_order(dag, CausalOrder([0, 2]), observed_only=True).valid
    check = validate_order(dag, CausalOrder([2, 0]), observed_only=True)
    assert not check.valid and check.violations == ((0, 2),)


def test_enumeration_known_four_node_set(fournode_dag):
    orders = all_causal_orders(fournode_dag)
    as_positions = {tuple(o.position(node) for node in range(4)) for o in orders}
    assert as_positions == {(1, 0, 3, 2), (1, 0, 2, 3), (2, 0, 1, 3)}
    assert {o.sequence for o in orders} == {(1, 0, 3, 2), (1, 0, 2, 3), (1, 2, 0, 3)}


def test_enumeration_trivial_graphs():
    assert len(all_causal_orders(Dag(3))) == 6
    chain = Dag(3, [(0, 1), (1, 2)])
    assert [o.sequence for o in all_causal_orders(chain)] == [(0, 1, 2)]
    with pytest.raises(CapacityError):
        all_causal_orders(Dag(11))


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_agrees_with_validation(seed):
    scm = random_scm(5, 1.5, GeneratorConfig(), seed=seed)
    dag = scm.dag if scm.p <= 6 else Dag(5)
    member = {o.sequence for o in all_causal_orders(dag)}
    for perm in itertools.permutations(range(dag.p)):
        assert (perm in member) == validate_order(dag, CausalOrder(perm)).valid


def test_random_scm_guards_and_trivial_case():
    with pytest.raises(ValidationError):
        random_scm(0, 1.5)
    with pytest.raises(ValidationError):
        random_scm(3, 0.0)
    scm = random_scm(1, 2.5, seed=0)
    assert scm.p == 1 and not scm.coefficients


def test_random_scm_determinism():
    a = random_scm(10, 1.5, GeneratorConfig(hidden_confounders=True), seed=4)
    b = random_scm(10, 1.5, GeneratorConfig(hidden_confounders=True), seed=4)
    assert a.coefficients == b.coefficients and a.hidden == b.hidden


def test_random_scm_mean_edges_per_node():
    total = 0
    for seed in range(1000):
        scm = random_scm(20, 2.5, GeneratorConfig(), seed=seed)
        total += len(scm.coefficients)
    assert abs(total / 1000 / 20 - 2.5) < 0.2


def test_random_scm_mean_confounder_count():
    config = GeneratorConfig(hidden_confounders=True)
    total = 0
    for seed in range(1000):
        total += len(random_scm(10, 2.5, config, seed=seed).hidden)
    assert abs(total / 1000 - 10 / 3) < 0.3


def test_random_scm_coefficient_laws():
    positive = random_scm(12, 1.5, GeneratorConfig(mode="positive"), seed=1)
    assert all(0.1 <= b <= 0.9 for b in positive.coefficients.values())
    real = random_scm(12, 1.5, GeneratorConfig(), seed=1)
    values = list(real.coefficients.values())
    assert any(b < 0 for b in values) and any(b > 0 for b in values)
    assert all(0.1 <= abs(b) <= 0.9 for b in values)
    four = random_scm(12, 1.5, GeneratorConfig(coefficient_law="four_point"), seed=1)
    assert all(abs(b) in (0.1, 0.9) for b in four.coefficients.values())


def test_random_scm_confounders_are_parentless_extra_nodes():
    scm = random_scm(8, 1.5, GeneratorConfig(hidden_confounders=True), seed=12)
    assert scm.hidden, "seed chosen to produce at least one confounder"
    for h in scm.hidden:
        assert h >= 8
        assert scm.dag.parents(h) == ()
        assert len(scm.dag.children(h)) == 2


def test_generated_scms_are_path_faithful():
    for seed in range(50):
        scm = random_scm(7, 1.5, GeneratorConfig(), seed=seed)
        assert check_path_faithful(scm)


def test_scm_invariants():
    dag = Dag(2, [(0, 1)])
    noise = NoiseSpec("student_t", 1.5)
    with pytest.raises(ValidationError, match="nonzero"):
        Scm(dag, {(0, 1): 0.0}, noise)
    with pytest.raises(ValidationError, match="positive"):
        Scm(dag, {(0, 1): -1.0}, noise, mode="positive")
    with pytest.raises(ValidationError, match="edges"):
        Scm(dag, {}, noise)
    with pytest.raises(ValidationError, match="alpha"):
        Scm(dag, {(0, 1): 1.0}, (noise, NoiseSpec("student_t", 2.0)))
    Scm(dag, {(0, 1): -1.0}, noise, mode="real")
