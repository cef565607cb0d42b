import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qfiwb.hamiltonians import (
    GraphHamiltonian,
    LinearHamiltonian,
    ProductDiagonalHamiltonian,
    SingleSiteOperator,
    from_spec_text,
    linear_to_product_diagonal,
    permutation_matrix,
    read_spec,
    sample_linear,
    sample_product_diagonal,
    to_spec_text,
    write_spec,
)
from qfiwb.numerics import Rng, haar_unitary


def test_computational_site_is_diagonal():
    site = SingleSiteOperator.computational((0.0, 1.0, 2.5))
    assert np.allclose(site.matrix, np.diag([0.0, 1.0, 2.5]))
    assert site.gap == pytest.approx(1.0)  # smallest separation between levels
    assert site.is_computational


def test_plus_minus_site_matches_pauli_decomposition():
    # In the Hadamard frame the operator is (l0+l1)/2 I + (l0-l1)/2 X.
    l0, l1 = 0.25, 1.75
    site = SingleSiteOperator.plus_minus((l0, l1))
    expected = (l0 + l1) / 2 * np.eye(2) + (l0 - l1) / 2 * np.array([[0, 1], [1, 0]])
    assert np.allclose(site.matrix, expected, atol=1e-12)


def test_explicit_site_requires_unitary_basis():
    with pytest.raises(ValueError):
        SingleSiteOperator.explicit((0.0, 1.0), np.ones((2, 2)))


def test_linear_dense_matches_kron_oracle():
    rng = Rng(21)
    table = rng.uniform(-1.0, 1.0, (3, 2))
    basis = haar_unitary(2, rng)
    h = LinearHamiltonian(table, basis)
    assert np.allclose(h.dense(), oracles.linear_dense(table, basis), atol=1e-12)


def test_linear_computational_spectrum_is_assignment_sums():
    table = np.array([[0.0, 1.0], [0.0, 2.0], [0.0, 4.0]])
    h = LinearHamiltonian(table, np.eye(2))
    got = np.sort(np.linalg.eigvalsh(h.dense()))
    want = np.sort(
        [sum(table[i, s[i]] for i in range(3)) for s in itertools.product((0, 1), repeat=3)]
    )
    assert np.allclose(got, want, atol=1e-12)


def test_from_site_is_equal_row():
    site = SingleSiteOperator.computational((0.0, 1.0))
    h = LinearHamiltonian.from_site(4, site)
    assert h.n == 4 and h.d == 2
    assert h.is_equal_row
    assert np.allclose(h.site_operator(2).matrix, site.matrix)


def test_symmetrized_takes_column_means():
    table = np.array([[0.0, 1.0], [2.0, 3.0]])
    h = LinearHamiltonian(table, np.eye(2)).symmetrized()
    assert h.is_equal_row
    assert np.allclose(h.table, [[1.0, 2.0], [1.0, 2.0]])


def test_symmetrized_agrees_with_projector_average():
    # Sanity: averaging H over all site permutations equals the column-mean form.
    rng = Rng(33)
    table = rng.uniform(-1.0, 1.0, (3, 2))
    basis = haar_unitary(2, rng)
    h = LinearHamiltonian(table, basis)
    dim = 2**3
    acc = np.zeros((dim, dim), dtype=complex)
    perms = list(itertools.permutations(range(3)))
    for perm in perms:
        v = oracles.site_permutation_matrix(3, 2, perm)
        acc += v @ h.dense() @ v.T
    assert np.allclose(acc / len(perms), h.symmetrized().dense(), atol=1e-12)


def test_product_diagonal_dense_matches_oracle():
    rng = Rng(5)
    coeffs = rng.uniform(-2.0, 2.0, 8)
    bases = [haar_unitary(2, rng.substream(i)) for i in range(3)]
    h = ProductDiagonalHamiltonian(coeffs, tuple(bases))
    assert np.allclose(h.dense(), oracles.product_diagonal_dense(coeffs, bases), atol=1e-12)
    assert np.allclose(np.sort(np.linalg.eigvalsh(h.dense())), np.sort(coeffs), atol=1e-10)


def test_linear_embeds_into_product_diagonal():
    rng = Rng(6)
    h = sample_linear(3, 2, rng, basis="haar")
    pd = linear_to_product_diagonal(h)
    assert np.allclose(pd.dense(), h.dense(), atol=1e-12)


def test_permutation_matrix_group_law():
    d = 2
    perms = list(itertools.permutations(range(3)))
    for pi in perms:
        for sigma in perms:
            composed = tuple(pi[sigma[i]] for i in range(3))
            lhs = permutation_matrix(pi, d) @ permutation_matrix(sigma, d)
            assert np.allclose(lhs, permutation_matrix(composed, d))


def test_permutation_matrix_matches_oracle():
    for perm in itertools.permutations(range(3)):
        assert np.allclose(
            permutation_matrix(perm, 2), oracles.site_permutation_matrix(3, 2, perm)
        )


def test_graph_hamiltonian_diagonal_matches_dense():
    g = GraphHamiltonian.shared(
        n=4, hyperedges=[(1, 2), (2, 3), (3, 4)], levels=(0.5, 1.5)
    )
    assert np.allclose(g.dense(), np.diag(g.diagonal()))


def test_graph_hamiltonian_entry_is_product_of_site_levels():
    g = GraphHamiltonian.shared(n=3, hyperedges=[(1, 2), (2, 3)], levels=(2.0, 3.0))
    # Index 0b101 assigns levels (3, 2, 3): edges contribute 3*2 and 2*3.
    assert g.diagonal()[0b101] == pytest.approx(12.0)


def test_sample_linear_respects_bounds_and_gap():
    h = sample_linear(3, 2, Rng(9), low=-1.0, high=1.0, gap=0.3)
    assert np.all(np.abs(h.table) <= 1.0)
    for i in range(3):
        assert h.site_operator(i).gap >= 0.3


def test_sample_linear_gap_exhaustion():
    with pytest.raises(ValueError):
        sample_linear(2, 2, Rng(0), low=0.0, high=0.1, gap=0.5, max_tries=3)


def test_sample_product_diagonal_shapes():
    h = sample_product_diagonal(3, 2, Rng(10))
    assert h.n == 3 and h.d == 2
    shared = sample_product_diagonal(3, 2, Rng(10), per_site_bases=False)
    for b in shared.site_bases[1:]:
        assert np.allclose(b, shared.site_bases[0])
    distinct = sum(
        0 if np.allclose(h.site_bases[i], h.site_bases[0]) else 1 for i in range(3)
    )
    assert distinct >= 1


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_linear_spec_text_roundtrip(seed):
    h = sample_linear(3, 2, Rng(seed), basis="haar")
    back = from_spec_text(to_spec_text(h))
    assert isinstance(back, LinearHamiltonian)
    assert np.allclose(back.dense(), h.dense(), atol=1e-12)


def test_product_spec_text_roundtrip():
    h = sample_product_diagonal(2, 3, Rng(12))
    back = from_spec_text(to_spec_text(h))
    assert np.allclose(back.dense(), h.dense(), atol=1e-12)


def test_named_basis_roundtrip_stays_symbolic():
    h = LinearHamiltonian.from_site(2, SingleSiteOperator.plus_minus((0.0, 1.0)))
    text = to_spec_text(h)
    assert "plus_minus" in text
    back = from_spec_text(text)
    assert np.allclose(back.dense(), h.dense(), atol=1e-12)


def test_graph_spec_file_roundtrip(tmp_path):
    g = GraphHamiltonian.shared(n=4, hyperedges=[(1, 2, 3), (2, 3, 4)], levels=(0.0, 1.0))
    path = tmp_path / "graph.txt"
    write_spec(g, str(path))
    back = read_spec(str(path))
    assert isinstance(back, GraphHamiltonian)
    assert np.allclose(back.dense(), g.dense())


def test_from_spec_text_rejects_garbage():
    with pytest.raises(ValueError):
        from_spec_text("family = nonsense\n")
