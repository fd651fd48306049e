"""Sampling, tree operations, and the generic position bounds."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from repverify.generic import (
    IrreducibilityViolation,
    PreconditionError,
    TreeOp,
    TreeShapeError,
    check_intersection_bound,
    check_projection_bound,
    default_complexity,
    eval_tree,
    find_spanning_q,
    generic_tree_dim,
    random_subspace,
    replay_recipe,
    sample_element,
    submodularity_check,
    translate,
)
from repverify.qlinalg import Mat, Subspace, det, rank, subspace_intersect, subspace_sum
from repverify.reps import build_config, flag_projector, weight_decompose

F = Fraction


def flags_of(name):
    cfg = build_config(name)
    dec = weight_decompose(cfg)
    return cfg, dec, [flag_projector(dec, mu).flag for mu in dec.eigenvalues[1:]]


class TestSampling:
    def test_determinism(self):
        cfg = build_config("sl2_sym:1")
        a = sample_element(cfg, 7, 4)
        b = sample_element(cfg, 7, 4)
        assert a.matrix == b.matrix and a.recipe == b.recipe

    def test_single_factor_unitriangular(self):
        cfg = build_config("sl2_sym:1")
        el = sample_element(cfg, 3, 1)
        assert el.matrix.at(1, 0) == 0  # one u+ factor raises weights only
        assert el.matrix.at(0, 0) == 1 and el.matrix.at(1, 1) == 1

    def test_exact_determinant_one(self):
        cfg = build_config("sl2_sym:1")
        assert det(sample_element(cfg, 7, 4).matrix) == 1
        cfg2 = build_config("sp2n:2")
        assert det(sample_element(cfg2, 11, default_complexity(cfg2)).matrix) == 1

    def test_complexity_zero_disallowed(self):
        with pytest.raises(PreconditionError):
            sample_element(build_config("sl2_sym:1"), 1, 0)

    def test_recipe_replays(self):
        cfg = build_config("so_pq:2,1")
        el = sample_element(cfg, 5, default_complexity(cfg))
        assert replay_recipe(cfg, el.recipe) == el.matrix


class TestEvalTree:
    def test_height_one_identity(self):
        w = Subspace.from_columns(3, [[1, 2, 3]])
        assert eval_tree(TreeOp.leaf(0), [w]) == w

    def test_sum_root(self):
        u = Subspace.from_columns(3, [[1, 0, 0]])
        w = Subspace.from_columns(3, [[0, 1, 0]])
        out = eval_tree(TreeOp.sum_of(TreeOp.leaf(0), TreeOp.leaf(1)), [u, w])
        assert out == Subspace.from_columns(3, [[1, 0, 0], [0, 1, 0]])

    def test_intersect_root(self):
        u = Subspace.from_columns(3, [[1, 0, 0], [0, 1, 0]])
        w = Subspace.from_columns(3, [[0, 1, 0], [0, 0, 1]])
        out = eval_tree(TreeOp.intersect_of(TreeOp.leaf(0), TreeOp.leaf(1)), [u, w])
        assert out == Subspace.from_columns(3, [[0, 1, 0]])

    def test_arity_errors(self):
        with pytest.raises(TreeShapeError):
            TreeOp.sum_of(TreeOp.leaf(0))
        tree = TreeOp.sum_of(TreeOp.leaf(0), TreeOp.leaf(1))
        with pytest.raises(TreeShapeError):
            eval_tree(tree, [Subspace.full(2)])

    def test_equivariance(self):
        cfg = build_config("so_pq:2,1")
        rng = random.Random(2)
        w1 = random_subspace(5, 2, rng)
        w2 = random_subspace(5, 3, rng)
        h = sample_element(cfg, 21, default_complexity(cfg)).matrix
        tree = TreeOp.intersect_of(
            TreeOp.sum_of(TreeOp.leaf(0), TreeOp.leaf(1)), TreeOp.leaf(2)
        )
        w3 = random_subspace(5, 3, rng)
        lhs = eval_tree(tree, [translate(h, w1), translate(h, w2), translate(h, w3)])
        rhs = translate(h, eval_tree(tree, [w1, w2, w3]))
        assert lhs == rhs


class TestGenericTreeDim:
    def test_two_generic_lines_span_plane(self):
        cfg, dec, _ = flags_of("so_pq:2,1")
        top = flag_projector(dec, 2).flag
        tree = TreeOp.sum_of(TreeOp.leaf(0), TreeOp.leaf(1))
        k, rep = generic_tree_dim(cfg, tree, top, trials=20, seed=5)
        assert k == 2 and rep.stable

    def test_transverse_intersection_empty(self):
        cfg, dec, _ = flags_of("so_pq:2,1")
        flag2 = flag_projector(dec, 1).flag
        tree = TreeOp.intersect_of(TreeOp.leaf(0), TreeOp.leaf(1))
        k, rep = generic_tree_dim(cfg, tree, flag2, trials=20, seed=6)
        assert k == 0 and rep.stable

    def test_needs_two_trials(self):
        cfg, dec, _ = flags_of("so_pq:2,1")
        with pytest.raises(PreconditionError):
            generic_tree_dim(cfg, TreeOp.leaf(0), flag_projector(dec, 2).flag, trials=1, seed=0)


class TestIntersectionBound:
    def test_tensor_plane_equality_case(self):
        cfg = build_config("tensor_std:2,2")
        w = Subspace.from_columns(4, [[1, 0, 0, 0], [0, 0, 1, 0]])
        wp = Subspace.from_columns(4, [[1, 0, 0, 0], [0, 1, 0, 0]])
        rep = check_intersection_bound(cfg, w, wp, trials=50, seed=7)
        assert rep.dimension_histogram == {1: 50}
        assert rep.all_passed  # 1 = (2/4) * 2, equality on every trial

    def test_adjoint_line_avoids_plane(self):
        cfg = build_config("sl2_sym:2")
        dec = weight_decompose(cfg)
        top = flag_projector(dec, 2).flag
        flag2 = flag_projector(dec, 0).flag
        rep = check_intersection_bound(cfg, top, flag2, trials=60, seed=3)
        assert rep.all_passed
        assert rep.dimension_histogram == {0: 60}

    def test_full_space_trivial(self):
        cfg = build_config("sl2_sym:2")
        dec = weight_decompose(cfg)
        flag2 = flag_projector(dec, 0).flag
        rep = check_intersection_bound(cfg, Subspace.full(3), flag2, trials=10, seed=1)
        assert rep.all_passed
        assert rep.dimension_histogram == {2: 10}

    def test_rejects_trivial_subspace(self):
        cfg = build_config("sl2_sym:2")
        with pytest.raises(PreconditionError):
            check_intersection_bound(cfg, Subspace.zero(3), Subspace.full(3), 5, 0)


class TestProjectionBound:
    def test_full_space_projects_fully(self):
        cfg = build_config("sl2_sym:2")
        dec = weight_decompose(cfg)
        flag2 = flag_projector(dec, 0).flag
        rep = check_projection_bound(cfg, Subspace.full(3), flag2, trials=10, seed=5)
        assert rep.all_passed and rep.dimension_histogram == {2: 10}

    def test_top_line_sees_everything(self):
        cfg = build_config("so_pq:2,1")
        dec = weight_decompose(cfg)
        top = flag_projector(dec, 2).flag
        rep = check_projection_bound(cfg, top, Subspace.full(5), trials=40, seed=9)
        assert rep.all_passed
        assert rep.dimension_histogram == {1: 40}  # r = 1 >= (1/5) * 5

    def test_duality_identity_random_instances(self):
        # rank(pi_W o h|_{W'}) = rank(pi_{h^t.W}|_{W'}): plain linear algebra,
        # asserted on random exact data in n = 4
        cfg = build_config("tensor_std:2,2")
        rng = random.Random(123)
        for t in range(100):
            w = random_subspace(4, rng.randint(1, 3), rng)
            wp = random_subspace(4, rng.randint(1, 3), rng)
            h = sample_element(cfg, 1000 + t, default_complexity(cfg)).matrix
            lhs = rank(w.basis.transpose() @ h @ wp.basis)
            rhs = rank(translate(h.transpose(), w).basis.transpose() @ wp.basis)
            assert lhs == rhs


class TestSpanning:
    def test_sl2_sym2_top_line(self):
        cfg = build_config("sl2_sym:2")
        dec = weight_decompose(cfg)
        top = flag_projector(dec, 2).flag
        assert find_spanning_q(cfg, top, trials=20, seed=3) == (3, (0, 0))

    def test_so21_mid_flag(self):
        cfg = build_config("so_pq:2,1")
        dec = weight_decompose(cfg)
        flag2 = flag_projector(dec, 1).flag
        assert find_spanning_q(cfg, flag2, trials=20, seed=4) == (3, (0, 1))

    def test_hyperplane_pair(self):
        cfg = build_config("so_pq:2,1")
        dec = weight_decompose(cfg)
        hyper = flag_projector(dec, -1).flag
        assert hyper.dim == 4
        q, k_list = find_spanning_q(cfg, hyper, trials=20, seed=8)
        assert (q, k_list) == (2, (3,))  # n - 2 = 3 = 2(n-1) - n

    def test_identity_always_holds(self):
        for name in ("so_pq:2,1", "sp2n:2", "sl2_sym:4"):
            cfg = build_config(name)
            dec = weight_decompose(cfg)
            for mu in dec.eigenvalues[1:]:
                w = flag_projector(dec, mu).flag
                q, k_list = find_spanning_q(cfg, w, trials=10, seed=11)
                assert sum(k_list) == q * w.dim - cfg.n
                assert all(kq < w.dim for kq in k_list)


class TestSubmodularity:
    def test_equal_arguments(self):
        rng = random.Random(1)
        w = random_subspace(4, 2, rng)
        wp = random_subspace(4, 3, rng)
        assert submodularity_check(wp, w, w)

    def test_hand_example(self):
        wp = Subspace.from_columns(3, [[1, 0, 0], [0, 1, 0]])
        w1 = Subspace.from_columns(3, [[1, 0, 0]])
        w2 = Subspace.from_columns(3, [[0, 1, 0]])
        # 0 + 2 >= 1 + 1 with equality
        assert submodularity_check(wp, w1, w2)

    def test_random_triples(self):
        rng = random.Random(77)
        for _ in range(300):
            n = 6
            wp = random_subspace(n, rng.randint(0, n), rng)
            w1 = random_subspace(n, rng.randint(0, n), rng)
            w2 = random_subspace(n, rng.randint(0, n), rng)
            assert submodularity_check(wp, w1, w2)
