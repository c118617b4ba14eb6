import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbqcflow.pauli import LogicalOperator, PauliProduct, word_matrix

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
MATS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_all(letters):
    # Qubit 0 is the least significant index bit, so it sits rightmost.
    out = np.array([[1.0 + 0j]])
    for letter in reversed(letters):
        out = np.kron(out, MATS[letter])
    return out


def word(n, letters):
    prod = PauliProduct.identity(n)
    for q, letter in enumerate(letters):
        if letter != "I":
            prod = prod * PauliProduct.single(n, q, letter)
    return prod


words_1q = st.sampled_from(["I", "X", "Y", "Z"])


class TestWordAlgebra:
    def test_single_qubit_matrices(self):
        for letter, mat in MATS.items():
            if letter == "I":
                continue
            assert np.allclose(PauliProduct.single(1, 0, letter).to_matrix(), mat)

    def test_z_times_x_is_plus_i_y(self):
        prod = PauliProduct.single(1, 0, "Z") * PauliProduct.single(1, 0, "X")
        assert np.allclose(prod.to_matrix(), 1j * Y)

    @given(words_1q, words_1q)
    def test_all_1q_products_match_matrices(self, a, b):
        pa, pb = word(1, a), word(1, b)
        assert np.allclose((pa * pb).to_matrix(), pa.to_matrix() @ pb.to_matrix())

    def test_two_qubit_example(self):
        # (X (x) Z) * (Z (x) Z) has XZ = -iY on the first qubit.
        a, b = word(2, "XZ"), word(2, "ZZ")
        assert np.allclose((a * b).to_matrix(), a.to_matrix() @ b.to_matrix())
        assert np.allclose((a * b).to_matrix(), np.kron(I2, -1j * Y))

    @settings(max_examples=60)
    @given(st.lists(words_1q, min_size=1, max_size=3), st.data())
    def test_random_products_and_commutation(self, letters, data):
        n = len(letters)
        other = data.draw(st.lists(words_1q, min_size=n, max_size=n))
        pa, pb = word(n, "".join(letters)), word(n, "".join(other))
        ma, mb = pa.to_matrix(), pb.to_matrix()
        assert np.allclose((pa * pb).to_matrix(), ma @ mb)
        commutator_zero = np.allclose(ma @ mb, mb @ ma)
        assert pa.commutes_with(pb) == commutator_zero

    @given(words_1q, words_1q, words_1q)
    def test_associativity(self, a, b, c):
        pa, pb, pc = (word(1, l) for l in (a, b, c))
        assert (pa * pb) * pc == pa * (pb * pc)

    def test_square_is_identity_word(self):
        for letter in "XYZ":
            p = PauliProduct.single(2, 1, letter)
            sq = p * p
            assert (sq.x_bits, sq.z_bits, sq.phase_power) == (0, 0, 0)

    def test_adjoint_matches_matrix(self):
        for letters in ("XY", "YZ", "YY", "XZ"):
            p = word(2, letters)
            assert np.allclose(p.adjoint().to_matrix(), p.to_matrix().conj().T)

    def test_string_rendering(self):
        prod = PauliProduct.single(2, 0, "Z") * PauliProduct.single(2, 0, "X")
        assert str(prod) == "+iYI"

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValueError):
            PauliProduct.single(1, 0, "X") * PauliProduct.single(2, 0, "X")


class TestLogicalOperator:
    def test_from_word_and_dense(self):
        op = LogicalOperator.from_word(word(2, "XZ"), 0.5)
        assert np.allclose(op.to_matrix(), 0.5 * kron_all("XZ"))

    def test_addition_merges_and_prunes(self):
        a = LogicalOperator.from_word(word(1, "X"), 1.0)
        b = LogicalOperator.from_word(word(1, "X"), -1.0)
        assert (a + b).num_terms == 0

    def test_product_matches_dense(self, rng):
        for _ in range(20):
            n = 2
            terms1 = {(int(rng.integers(4)), int(rng.integers(4))): complex(rng.normal(), rng.normal()) for _ in range(3)}
            terms2 = {(int(rng.integers(4)), int(rng.integers(4))): complex(rng.normal(), rng.normal()) for _ in range(3)}
            a, b = LogicalOperator(n, terms1), LogicalOperator(n, terms2)
            assert np.allclose((a * b).to_matrix(), a.to_matrix() @ b.to_matrix())

    def test_left_multiply_word(self):
        op = LogicalOperator(2, {(0b01, 0b10): 2.0})  # 2 * X0 Z1
        w = word(2, "ZI")
        assert np.allclose(
            op.left_multiply_word(w).to_matrix(),
            w.to_matrix() @ op.to_matrix(),
        )

    def test_adjoint_matches_dense(self, rng):
        terms = {(1, 1): 1 + 2j, (2, 3): -0.5j, (0, 0): 0.25}
        op = LogicalOperator(2, terms)
        assert np.allclose(op.adjoint().to_matrix(), op.to_matrix().conj().T)

    def test_expectation_matches_dense(self, rng):
        n = 3
        state = rng.normal(size=8) + 1j * rng.normal(size=8)
        state /= np.linalg.norm(state)
        terms = {
            (int(rng.integers(8)), int(rng.integers(8))): complex(rng.normal(), rng.normal())
            for _ in range(4)
        }
        op = LogicalOperator(n, terms)
        dense = np.vdot(state, op.to_matrix() @ state)
        assert abs(op.expectation(state) - dense) < 1e-12

    def test_commutes_with_x(self):
        op = LogicalOperator(2, {(0b01, 0b00): 1.0, (0b00, 0b10): 1.0})
        assert op.commutes_with_x(0)
        assert not op.commutes_with_x(1)

    def test_word_matrix_identity(self):
        assert np.allclose(word_matrix(2, 0, 0), np.eye(4))
