import math

import numpy as np
import pytest

from qconvbch.convbch import (
    RangeError,
    construct_conv_bch,
    designed_free_distance,
    kappa_matches_formula,
    split_bch_parity,
    verify_code,
    verify_theorem1,
)
from qconvbch.cyclic import bch_code, delta_max, in_dual_containing_range, kappa_formula
from qconvbch.galois import make_field, subfield_basis
from qconvbch.matrix import Echelon, MatrixFq, min_distance_bruteforce, rank


def test_split_n31():
    S = split_bch_parity(31, 2, 3)
    assert rank(S.H) == 15 and rank(S.H0) == 10 == S.kappa and rank(S.H1) == 5
    assert not S.degenerate


def test_split_n85_gf4():
    S = split_bch_parity(85, 4, 2)
    assert rank(S.H0) == 8 and rank(S.H1) == 4


def test_split_degenerate():
    S = split_bch_parity(15, 2, 1)
    assert S.H1.rows == 0 and S.degenerate
    assert S.generator.memory == 0 and S.generator.degenerate


def test_split_rejects():
    with pytest.raises(ValueError):
        split_bch_parity(15, 2, 0)
    with pytest.raises(ValueError):
        split_bch_parity(15, 3, 1)


def test_split_basis_independent_ranks():
    base, ext = make_field(2, 1), make_field(2, 5)
    g = ext.generator
    alt = subfield_basis(base, ext, [ext.pow(g, 3 * i + 1) for i in range(5)])
    a, b = split_bch_parity(31, 2, 3), split_bch_parity(31, 2, 3, alt)
    assert (rank(a.H0), rank(a.H1)) == (rank(b.H0), rank(b.H1))


def sweep_points():
    for q in (2, 3, 4):
        for n in range(3, 64):
            if math.gcd(n, q) != 1:
                continue
            for delta in range(1, n):
                if in_dual_containing_range(n, q, delta):
                    yield n, q, delta


@pytest.mark.parametrize("n,q,delta", list(sweep_points()))
def test_split_invariants(n, q, delta):
    S = split_bch_parity(n, q, delta)
    assert rank(S.H) == rank(S.H0) + rank(S.H1)
    e = Echelon(S.H.field, n)
    for row in S.H0.data:
        e.insert(row)
    for row in S.H1.data:
        assert not e.contains(row)
        e.insert(row)
    assert rank(S.H1) <= S.kappa
    assert S.kappa == kappa_formula(n, q, delta) and kappa_matches_formula(S)


def test_construct_n31():
    C = construct_conv_bch(31, 2, 3)
    assert (C.n, C.k, C.memory, C.nu) == (31, 21, 1, 5)
    assert C.bounds["df_lower"].value == 6 == designed_free_distance(2, 3)
    assert C.bounds["df_upper"].value == 7
    assert C.bounds["df_upper"].value == min_distance_bruteforce(C.split.H).value
    assert C.bounds["df_lower"].value <= C.bounds["df_upper"].value
    assert C.bounds["dual_df_lower"].value >= 8
    assert C.certificate.ok and C.in_range
    assert C.k + C.generator.rows == C.n


def test_construct_n85():
    C = construct_conv_bch(85, 4, 2)
    assert (C.n, C.k) == (85, 77)
    assert C.bounds["df_lower"].value == 5


def test_construct_degenerate_and_range():
    C = construct_conv_bch(15, 2, 1)
    assert C.degenerate and C.memory == 0 and C.warnings
    with pytest.raises(RangeError):
        construct_conv_bch(15, 2, 2)
    F = construct_conv_bch(15, 2, 2, force=True)
    assert not F.in_range and "df_lower" not in F.bounds and "dual_df_lower" not in F.bounds


def test_dual_bound_provenance():
    # the big parent dual cannot be brute forced within a tiny budget: cited value
    C = construct_conv_bch(63, 2, 3, max_words=1 << 10)
    b = C.bounds["dual_df_lower"]
    assert b.source.startswith("cited") and b.value == delta_max(63, 2) + 1 == 8
    C = construct_conv_bch(31, 2, 3)
    assert C.bounds["dual_df_lower"].source.startswith("bruteforce")


def test_every_bound_has_source():
    for n, q, delta in [(31, 2, 3), (26, 3, 3), (63, 4, 2)]:
        js = construct_conv_bch(n, q, delta).to_json()
        for name, b in js["bounds"].items():
            assert b["source"], name
        assert js["generator"]["memory"] == 1


def test_verify_n31():
    R = verify_theorem1(split_bch_parity(31, 2, 3), designed=6)
    assert R.ok
    for name in ("reduced_basic", "self_orthogonal", "dual_free_distance_sandwich", "free_distance_vs_parent_dual", "designed_bound"):
        assert R[name].passed, name
    v = R.values
    assert min(v["d0"] + v["d1"], v["d"]) <= v["dual_df"] <= v["d"]
    assert v["df"] >= v["d_perp"]


def test_verify_n15_not_dual_containing():
    R = verify_theorem1(split_bch_parity(15, 2, 2))
    assert R["self_orthogonal"].status.startswith("skipped")
    assert R.values["parent_dual_containing"] is False
    assert R["reduced_basic"].passed and R["dual_free_distance_sandwich"].passed
    assert R.ok


def test_verify_degenerate():
    R = verify_theorem1(split_bch_parity(15, 2, 1))
    assert R["reduced_basic"].passed
    assert R.values["dual_df"] == R.values["d"]


def test_verify_hermitian():
    C = construct_conv_bch(85, 4, 2, hermitian_subfield=2)
    R = verify_code(C, hermitian_subfield=2)
    assert R["self_orthogonal"].passed and R["reduced_basic"].passed
    assert not any(c.failed for c in R.checks)


def test_verify_budget_partial():
    R = verify_theorem1(split_bch_parity(63, 2, 3), max_states=4, max_words=1 << 8)
    assert R["dual_free_distance_sandwich"].status == "skipped(budget)"
    assert R.to_json()["ok"] is True


def test_encoded_frames_lie_in_parent():
    from qconvbch.matrix import in_rowspan
    from qconvbch.polymat import encode

    C = construct_conv_bch(26, 3, 3)
    u = np.random.default_rng(11).integers(0, 3, (5, C.kappa))
    for frame in encode(C.generator, u).frames:
        assert in_rowspan(C.split.H, frame)


def test_parent_designed_distance():
    S = split_bch_parity(31, 2, 3)
    assert S.parent.delta == 7 and S.parent.dimension == bch_code(31, 2, 1, 7).dimension
    assert MatrixFq is type(S.H)
