"""Representations: hom/ext dimensions, twist, truncations, iso probe."""

from random import Random

import pytest

from quivdiff import (
    GF,
    QQ,
    euler_pairing,
    iso_probe,
    make_rep,
    opposite,
    path_truncation,
    rep_direct_sum,
    rep_ext1_dim,
    rep_hom_basis,
    rep_hom_dim,
    semisimple_kQ0,
    simple,
    twist_sigma,
)
from quivdiff.errors import MismatchError

from gen import A2, A3, FIELDS, LOOP, TRIANGLE, random_quiver, random_rep


def one_dim_loop_rep(field, scalar):
    return make_rep(LOOP, field, (1,), {"a": [[scalar]]})


def triangle_ones(field):
    return make_rep(
        TRIANGLE, field, (1, 1, 1),
        {"alpha": [[1]], "beta": [[1]], "gamma": [[1]]},
    )


def test_hom_simple_to_itself():
    S = simple(A2, QQ, "1")
    assert rep_hom_dim(S, S) == 1
    basis = rep_hom_basis(S, S)
    assert len(basis) == 1 and basis[0].is_morphism()


def test_hom_loop_eigenvalue_match():
    X = one_dim_loop_rep(QQ, 1)
    assert rep_hom_dim(X, X) == 1


def test_hom_triangle_vs_twist_is_zero_over_q():
    # The intertwining equations force 2*theta_1 = 0, so only zero in char 0.
    X = triangle_ones(QQ)
    assert rep_hom_dim(X, twist_sigma(X)) == 0


def test_twist_fixes_triangle_over_f2():
    X = triangle_ones(GF(2))
    assert twist_sigma(X) == X


def test_twist_involution_and_zero_fixed():
    rng = Random(2)
    for field in FIELDS:
        X = random_rep(random_quiver(rng, 4, 6), field, rng, max_dim=3)
        assert twist_sigma(twist_sigma(X)) == X
    Z = make_rep(LOOP, QQ, (2,))
    assert twist_sigma(Z) == Z


def test_ext1_projective_source_vanishes():
    # The regular module of a path quiver has no self-extensions or any others.
    reg = path_truncation(A2, QQ, 2)
    rng = Random(9)
    for _ in range(5):
        Y = random_rep(A2, QQ, rng, max_dim=3)
        assert rep_ext1_dim(reg, Y) == 0


def test_ext1_loop_goldens():
    assert rep_ext1_dim(one_dim_loop_rep(QQ, 0), one_dim_loop_rep(QQ, 0)) == 1
    # Theta(theta) = 2*theta: rank 1 in char 0, rank 0 in char 2.
    assert rep_ext1_dim(one_dim_loop_rep(QQ, 1), one_dim_loop_rep(QQ, -1)) == 0
    assert rep_ext1_dim(one_dim_loop_rep(GF(2), 1), one_dim_loop_rep(GF(2), -1)) == 1


def test_euler_pairing_goldens():
    assert euler_pairing(LOOP, (1,), (1,)) == 0
    assert euler_pairing(A2, (1, 0), (0, 1)) == -1
    assert euler_pairing(TRIANGLE, (2, 3, 4), (0, 0, 0)) == 0
    assert euler_pairing(A2, {"1": 1, "2": 0}, {"1": 0, "2": 1}) == -1


@pytest.mark.parametrize("field", FIELDS)
def test_euler_identity_random(field):
    rng = Random(31)
    for _ in range(15):
        Q = random_quiver(rng, 4, 6)
        X = random_rep(Q, field, rng, max_dim=3)
        Y = random_rep(Q, field, rng, max_dim=3)
        lhs = rep_hom_dim(X, Y) - rep_ext1_dim(X, Y)
        assert lhs == euler_pairing(Q, X.dims, Y.dims)


def test_ext_bounded_by_raw_space():
    rng = Random(12)
    Q = random_quiver(rng, 3, 4)
    X = random_rep(Q, QQ, rng, max_dim=3)
    Y = random_rep(Q, QQ, rng, max_dim=3)
    bound = sum(
        X.dims[Q.vertex_index(a.src)] * Y.dims[Q.vertex_index(a.tgt)]
        for a in Q.arrows
    )
    assert rep_ext1_dim(X, Y) <= bound


def test_hom_and_ext_additive_over_direct_sum():
    rng = Random(77)
    for field in FIELDS:
        Q = random_quiver(rng, 3, 4)
        X1 = random_rep(Q, field, rng, max_dim=2)
        X2 = random_rep(Q, field, rng, max_dim=2)
        Y = random_rep(Q, field, rng, max_dim=2)
        X = rep_direct_sum(X1, X2)
        assert rep_hom_dim(X, Y) == rep_hom_dim(X1, Y) + rep_hom_dim(X2, Y)
        assert rep_ext1_dim(X, Y) == rep_ext1_dim(X1, Y) + rep_ext1_dim(X2, Y)
        assert rep_hom_dim(Y, X) == rep_hom_dim(Y, X1) + rep_hom_dim(Y, X2)
        assert rep_ext1_dim(Y, X) == rep_ext1_dim(Y, X1) + rep_ext1_dim(Y, X2)


def test_hom_basis_members_are_morphisms():
    rng = Random(15)
    Q = random_quiver(rng, 4, 6)
    X = random_rep(Q, GF(5), rng, max_dim=3)
    Y = random_rep(Q, GF(5), rng, max_dim=3)
    for f in rep_hom_basis(X, Y):
        assert f.is_morphism()


def test_hom_mismatch_errors():
    X = simple(A2, QQ, "1")
    Y = simple(A3, QQ, "1")
    with pytest.raises(MismatchError):
        rep_hom_dim(X, Y)
    with pytest.raises(MismatchError):
        rep_hom_dim(X, simple(A2, GF(2), "1"))


def test_simples_and_semisimple():
    S = simple(A2, QQ, "1")
    assert S.dims == (1, 0)
    ss = semisimple_kQ0(LOOP, QQ)
    assert ss.dims == (1,)
    assert ss.maps[0].to_lists() == [[0]]


def test_hom_from_semisimple_is_sum_over_simples():
    rng = Random(4)
    Q = random_quiver(rng, 4, 5)
    X = random_rep(Q, QQ, rng, max_dim=3)
    ss = semisimple_kQ0(Q, QQ)
    total = sum(rep_hom_dim(simple(Q, QQ, v), X) for v in Q.vertices)
    assert rep_hom_dim(ss, X) == total


def test_path_truncation_depth_one_is_semisimple():
    for Q in (A2, TRIANGLE, LOOP):
        assert path_truncation(Q, QQ, 1) == semisimple_kQ0(Q, QQ)


def test_path_truncation_loop_jordan_block():
    X = path_truncation(LOOP, QQ, 3)
    assert X.dims == (3,)
    assert X.maps[0].to_lists() == [[0, 0, 0], [1, 0, 0], [0, 1, 0]]


def test_path_truncation_a2():
    X = path_truncation(A2, QQ, 2)
    assert X.dims == (1, 2)
    # basis at vertex 2 ordered by (length, name): trivial path first
    assert X.maps[0].to_lists() == [[0], [1]]


def test_path_truncation_saturates_on_acyclic():
    X3 = path_truncation(A3, QQ, 3)
    X9 = path_truncation(A3, QQ, 9)
    assert X3 == X9
    assert X3.dims == (1, 2, 3)


def test_path_truncation_rejects_bad_depth():
    with pytest.raises(ValueError):
        path_truncation(LOOP, QQ, 0)


def test_iso_probe_self():
    rng = Random(8)
    Q = random_quiver(rng, 3, 4)
    X = random_rep(Q, QQ, rng, max_dim=3)
    result = iso_probe(X, X)
    assert result.kind == "iso"
    assert result.witness.is_morphism()


def test_iso_probe_dim_mismatch():
    assert iso_probe(simple(A2, QQ, "1"), simple(A2, QQ, "2")).kind == "not_iso"


def test_iso_probe_triangle_twist_not_iso():
    X = triangle_ones(QQ)
    result = iso_probe(X, twist_sigma(X))
    assert result.kind == "not_iso"
    assert "homomorphisms" in result.reason


def test_iso_probe_conjugated_reps_found_isomorphic():
    # X and a base-changed copy must be identified, with a verified witness.
    X = path_truncation(LOOP, QQ, 3)
    P = [[1, 0, 0], [2, 1, 0], [0, 1, 1]]
    from quivdiff import Mat, mat, mat_inverse, mat_mul

    Pm = mat(QQ, P)
    conj = mat_mul(Pm, mat_mul(X.maps[0], mat_inverse(Pm)))
    Y = make_rep(LOOP, QQ, (3,), {"a": conj})
    result = iso_probe(X, Y, trials=16, seed=1)
    assert result.kind == "iso"
    assert result.witness.is_morphism()


def test_iso_probe_deterministic_given_seed():
    X = path_truncation(LOOP, GF(5), 2)
    r1 = iso_probe(X, X, seed=3)
    r2 = iso_probe(X, X, seed=3)
    assert r1.kind == r2.kind == "iso"
    assert r1.witness.blocks == r2.witness.blocks
