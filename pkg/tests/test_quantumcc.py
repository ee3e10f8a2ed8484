import numpy as np
import pytest

from qconvbch.convbch import RangeError, split_bch_parity
from qconvbch.cyclic import bch_code, delta_max
from qconvbch.galois import frobenius, make_field
from qconvbch.matrix import BudgetExceeded, MatrixFq, kernel_basis, rank
from qconvbch.polymat import PolyMatrix, build_from_split, laurent_orthogonal, symplectic_check
from qconvbch.quantumcc import (
    SelfOrthogonalityError,
    css_from_selforthogonal,
    hermitian_from_selforthogonal,
    qcbch_euclidean,
    qcbch_hermitian,
    quantum_free_distance_oracle,
    quotient_free_distance,
)

from oracles import all_vectors, naive_quotient_distance

GF2, GF3, GF4 = make_field(2, 1), make_field(3, 1), make_field(2, 2)
W = GF4.generator
W2 = GF4.mul(W, W)

EXT_HAMMING = MatrixFq(GF2, [
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 1],
])


def split(M, *sizes):
    parts, at = [], 0
    for s in sizes:
        parts.append(MatrixFq(M.field, M.data[at : at + s]))
        at += s
    return build_from_split(parts)


def test_css_examples():
    empty = PolyMatrix(GF2, np.zeros((1, 0, 5), dtype=np.int64))
    S = css_from_selforthogonal(empty)
    assert (S.n, S.k, S.memory) == (5, 5, 0)
    S = css_from_selforthogonal(PolyMatrix.constant(MatrixFq(GF2, [[1, 1]])))
    assert S.parameters() == "[(2,0,0)]_2"
    assert symplectic_check(S.X, S.Z)
    with pytest.raises(SelfOrthogonalityError):
        css_from_selforthogonal(PolyMatrix.constant(MatrixFq(GF2, [[1, 0]])))


def test_hermitian_examples():
    empty = PolyMatrix(GF4, np.zeros((1, 0, 3), dtype=np.int64))
    S = hermitian_from_selforthogonal(empty, 3, 2)
    assert (S.n, S.k) == (3, 3)
    S = hermitian_from_selforthogonal(PolyMatrix.constant(MatrixFq(GF4, [[W, W]])), 2, 2)
    assert S.parameters() == "[(2,0,0)]_2"
    assert symplectic_check(S.X, S.Z) and S.X.field is GF2
    with pytest.raises(SelfOrthogonalityError):
        hermitian_from_selforthogonal(PolyMatrix.constant(MatrixFq(GF4, [[W, 0]])), 2, 2)


def test_hermitian_expansion_gives_trace_symplectic_form():
    G = split_bch_parity(85, 4, 2).generator
    S = hermitian_from_selforthogonal(G, 85, 2)
    assert S.X.rows == 2 * G.rows and symplectic_check(S.X, S.Z)
    # the expanded row pairs are independent over GF(2)
    st = np.concatenate([S.X.coefficient(0).data, S.Z.coefficient(0).data], axis=1)
    assert rank(MatrixFq(GF2, st)) == 2 * G.rows


def test_euclidean_flagship():
    S = qcbch_euclidean(31, 2, 3)
    assert S.parameters() == "[(31,11,1)]_2"
    assert S.kappa == 10 == rank(bch_code(31, 2, 1, 4).parity)
    assert S.df_lower.value == 6
    assert S.purity_bound.value == 8 == delta_max(31, 2) + 1
    assert S.memory == S.classical.memory == 1
    assert symplectic_check(S.X, S.Z)
    js = S.to_json()
    assert js["construction"] == "css-euclidean" and js["df_lower"]["source"]


def test_euclidean_rejections():
    with pytest.raises(RangeError):
        qcbch_euclidean(15, 2, 2)
    S = qcbch_euclidean(15, 2, 1)
    assert S.degenerate and S.memory == 0


def test_hermitian_flagship():
    S = qcbch_hermitian(85, 2, 2)
    assert S.parameters() == "[(85,69,1)]_2"
    assert S.kappa == 8 == rank(bch_code(85, 4, 1, 3).parity)
    assert S.df_lower.value == 5
    assert S.purity_bound is None
    assert symplectic_check(S.X, S.Z)


@pytest.mark.parametrize("n,q,delta", [(85, 2, 3), (17, 2, 1)])
def test_hermitian_rejections(n, q, delta):
    with pytest.raises(RangeError):
        qcbch_hermitian(n, q, delta)


@pytest.mark.parametrize("n,q,delta", [(31, 2, 2), (31, 2, 3), (63, 2, 3), (26, 3, 3), (40, 3, 1), (63, 4, 2), (51, 2, 1), (13, 3, 1)])
def test_k_from_exact_rank(n, q, delta):
    S = qcbch_euclidean(n, q, delta)
    assert S.k == n - 2 * rank(S.source.split.H0)
    assert laurent_orthogonal(S.classical, S.classical)


def test_oracle_trivial_errors():
    empty = css_from_selforthogonal(PolyMatrix(GF2, np.zeros((1, 0, 4), dtype=np.int64)))
    with pytest.raises(ValueError):
        quantum_free_distance_oracle(empty)
    full = css_from_selforthogonal(PolyMatrix.constant(MatrixFq(GF2, [[1, 1]])))
    with pytest.raises(ValueError):
        quantum_free_distance_oracle(full)


def test_memory_zero_hamming_css():
    # simplex [15,4] inside Hamming [15,11]: wt(Hamming \ simplex) by plain enumeration
    H = bch_code(15, 2, 1, 2).parity
    S = css_from_selforthogonal(PolyMatrix.constant(H))
    assert S.k == 7
    K = kernel_basis(H).data
    best = None
    for u in all_vectors(2, K.shape[0]):
        c = np.array(u) @ K % 2
        if not c.any():
            continue
        in_simplex = rank(MatrixFq(GF2, np.vstack([H.data, c]))) == H.rows
        if not in_simplex:
            w = int(c.sum())
            best = w if best is None else min(best, w)
    assert quantum_free_distance_oracle(S).value == best == 3


QUOTIENT_CASES = [
    (split(EXT_HAMMING, 2, 2), False, 3),
    (split(EXT_HAMMING, 3, 1), False, 3),
    (PolyMatrix.from_polys(GF2, [[[1], [1], [0, 1], [0, 1]]]), False, 5),
    (PolyMatrix.from_polys(GF2, [[[1], [1], [1, 1], [1, 1]]]), False, 4),
    (PolyMatrix.from_polys(GF3, [[[1], [1], [1], [0, 1], [0, 1], [0, 1]]]), False, 2),
    (PolyMatrix.from_polys(GF4, [[[1], [1], [0, W], [0, W]]]), True, 3),
    (PolyMatrix.from_polys(GF4, [[[1], [W], [W2], [0, 1], [0, 1]]]), True, 2),
]


@pytest.mark.parametrize("case", range(len(QUOTIENT_CASES)))
def test_quotient_matches_enumeration(case):
    G, herm, frames = QUOTIENT_CASES[case]
    conj = frobenius(G.field, G.coeffs, 2) if herm else None
    one = laurent_orthogonal(G, G, hermitian=herm, q=2 if herm else None)
    d = quotient_free_distance(G, hermitian=herm, q=2 if herm else None)
    assert d.exact
    assert d.value == naive_quotient_distance(G, frames, conj)
    if one:
        S = (hermitian_from_selforthogonal if herm else css_from_selforthogonal)(G)
        assert quantum_free_distance_oracle(S).value == d.value


def test_quotient_rejects_non_reduced():
    G = PolyMatrix.from_polys(GF2, [[[0, 1], [1]]])
    with pytest.raises(ValueError):
        quotient_free_distance(G)


def test_flagship_quantum_distance():
    S = qcbch_euclidean(31, 2, 3)
    d = quantum_free_distance_oracle(S)
    assert d.exact and d.value >= S.df_lower.value


def test_hermitian_flagship_oracle_over_budget():
    # 4^12 frame syndromes: beyond the default word budget, reported rather than attempted
    S = qcbch_hermitian(85, 2, 2)
    with pytest.raises(BudgetExceeded):
        quantum_free_distance_oracle(S)


def test_stabilizer_json_shape():
    js = qcbch_hermitian(85, 2, 2).to_json()
    assert set(js) >= {"n", "k", "m", "nu", "q", "construction", "df_lower", "purity_bound", "degenerate", "stabilizer"}
    assert set(js["stabilizer"]) == {"X", "Z"}
