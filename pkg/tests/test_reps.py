"""Configuration builders, weight decompositions, hypothesis checks."""

from __future__ import annotations

from fractions import Fraction

import pytest

from repverify.qlinalg import Mat, RowSpan, Subspace, subspace_intersect, subspace_sum
from repverify.reps import (
    ConfigError,
    IncompleteConfig,
    InvalidLevel,
    RepConfig,
    build_config,
    check_irreducible,
    check_proximal,
    config_from_json,
    config_to_json,
    flag_projector,
    horospherical_basis,
    weight_decompose,
)

F = Fraction

ALL_DESCRIPTORS = [
    "so_pq:2,1",
    "so_pq:2,2",
    "so_pq:3,1",
    "sp2n:2",
    "tensor:2,2",
    "tensor_std:2,2",
    "sl2_sym:1",
    "sl2_sym:2",
    "sl2_sym:4",
    "diagonal:sl2",
    "diagonal:sl3",
]


class TestBuild:
    def test_so21_dimensions(self):
        cfg = build_config("so_pq:2,1")
        assert cfg.n == 5  # dim sl_3 - dim so(2,1) = 8 - 3
        assert cfg.h_dim == 3

    def test_sp4_dimensions(self):
        cfg = build_config("sp2n:2")
        assert cfg.n == 5  # dim sl_4 - dim sp_4 = 15 - 10
        assert cfg.h_dim == 10

    def test_tensor22_dimension(self):
        assert build_config("tensor:2,2").n == 9  # sl_2 (x) sl_2

    def test_unsupported(self):
        with pytest.raises(ConfigError):
            build_config("so_pq:1,1")
        with pytest.raises(ConfigError):
            build_config("frobnicate:3")

    @pytest.mark.parametrize("desc", ALL_DESCRIPTORS)
    def test_bracket_closure_and_diagonality(self, desc):
        cfg = build_config(desc)
        span = RowSpan(cfg.n * cfg.n)
        for x in cfg.h_basis:
            assert x.trace() == 0
            span.add(x.entries)
        for i in range(cfg.h_dim):
            for j in range(cfg.h_dim):
                br = cfg.h_basis[i] @ cfg.h_basis[j] - cfg.h_basis[j] @ cfg.h_basis[i]
                assert span.contains(br.entries)
        for i in range(cfg.n):
            for j in range(cfg.n):
                if i != j:
                    assert cfg.a_action.at(i, j) == 0


class TestWeightDecomposition:
    def test_so21_weights(self):
        dec = weight_decompose(build_config("so_pq:2,1"))
        assert dec.eigenvalues == (F(-2), F(-1), F(0), F(1), F(2))
        assert dec.multiplicities == (1, 1, 1, 1, 1)

    def test_sp4_weights(self):
        dec = weight_decompose(build_config("sp2n:2"))
        assert dec.eigenvalues == (F(-3), F(-1), F(0), F(1), F(3))
        assert dec.multiplicities == (1, 1, 1, 1, 1)

    def test_sl2_sym1_weights(self):
        dec = weight_decompose(build_config("sl2_sym:1"))
        assert dec.eigenvalues == (F(-1), F(1))
        assert dec.multiplicities == (1, 1)

    @pytest.mark.parametrize("desc", ALL_DESCRIPTORS)
    def test_exact_eigenvectors_and_symmetry(self, desc):
        cfg = build_config(desc)
        dec = weight_decompose(cfg)
        assert dec.total_dim == cfg.n
        assert tuple(sorted(-x for x in dec.eigenvalues)) == dec.eigenvalues
        total = Subspace.zero(cfg.n)
        for mu, basis in zip(dec.eigenvalues, dec.eigenbases):
            for col in basis.column_vectors():
                assert cfg.a_action.apply(col) == tuple(mu * x for x in col)
            assert subspace_intersect(total, basis).dim == 0
            total = subspace_sum(total, basis)
        assert total == Subspace.full(cfg.n)


class TestFlags:
    def test_top_flag_so21(self):
        dec = weight_decompose(build_config("so_pq:2,1"))
        fp = flag_projector(dec, 2)
        assert fp.flag.dim == 1

    def test_min_flag_is_full(self):
        dec = weight_decompose(build_config("so_pq:2,1"))
        fp = flag_projector(dec, -2)
        assert fp.flag == Subspace.full(5)
        assert fp.projector == Mat.identity(5)

    def test_zero_flag_so21(self):
        dec = weight_decompose(build_config("so_pq:2,1"))
        assert flag_projector(dec, 0).flag.dim == 3  # 1 + 1 + 1

    def test_invalid_level(self):
        dec = weight_decompose(build_config("so_pq:2,1"))
        with pytest.raises(InvalidLevel):
            flag_projector(dec, F(1, 2))

    @pytest.mark.parametrize("desc", ["so_pq:2,1", "sp2n:2", "tensor:2,2", "sl2_sym:4"])
    def test_projector_idempotent_and_u_stability(self, desc):
        cfg = build_config(desc)
        dec = weight_decompose(cfg)
        u_plus, _ = horospherical_basis(cfg)
        for mu in dec.eigenvalues:
            fp = flag_projector(dec, mu)
            assert fp.projector @ fp.projector == fp.projector
            img_cols = [fp.projector.col(j) for j in range(cfg.n)]
            from repverify.qlinalg import canonicalize

            assert canonicalize(Mat.from_cols(img_cols)) == fp.flag
            for x in u_plus:
                for col in fp.flag.column_vectors():
                    assert fp.flag.contains_vector(x.apply(col))


def _direct_sum_fixture() -> RepConfig:
    """Two copies of the 2-dim standard sl_2 module; reducible on purpose."""
    base = build_config("sl2_sym:1")

    def two_blocks(m: Mat) -> Mat:
        rows = [[F(0)] * 4 for _ in range(4)]
        for i in range(2):
            for j in range(2):
                rows[i][j] = m.at(i, j)
                rows[2 + i][2 + j] = m.at(i, j)
        return Mat.from_rows(rows)

    return RepConfig(
        name="fixture:sym1+sym1",
        n=4,
        h_dim=3,
        h_basis=tuple(two_blocks(m) for m in base.h_basis),
        a_action=Mat.diagonal([F(1), F(-1), F(1), F(-1)]),
        h_internal=base.h_internal,
        u_plus_indices=(0,),
        u_minus_indices=(2,),
        a_norm_sq=F(2),
    )


class TestIrreducibility:
    def test_sl2_sym1_burnside(self):
        v = check_irreducible(build_config("sl2_sym:1"))
        assert v.is_absolutely_irreducible
        assert v.algebra_dim == 4

    def test_direct_sum_reducible_with_witness(self):
        v = check_irreducible(_direct_sum_fixture())
        assert v.kind == "reducible"
        assert v.witness is not None and v.witness.dim == 2
        assert v.witness == Subspace.from_columns(
            4, [[1, 0, 0, 0], [0, 1, 0, 0]]
        )

    def test_so21_absolutely_irreducible(self):
        assert check_irreducible(build_config("so_pq:2,1")).is_absolutely_irreducible


class TestProximal:
    def test_so21(self):
        assert check_proximal(weight_decompose(build_config("so_pq:2,1")))

    def test_sp4(self):
        dec = weight_decompose(build_config("sp2n:2"))
        assert dec.eigenvalues[-1] == 3 and dec.multiplicities[-1] == 1
        assert check_proximal(dec)

    def test_duplicated_top_weight_fixture(self):
        assert not check_proximal(weight_decompose(_direct_sum_fixture()))

    @pytest.mark.parametrize("p,q", [(2, 1), (2, 2), (3, 1), (3, 2)])
    def test_so_family_always_proximal(self, p, q):
        assert check_proximal(weight_decompose(build_config(f"so_pq:{p},{q}")))


class TestHorospherical:
    def test_u_plus_dims(self):
        assert len(horospherical_basis(build_config("so_pq:2,1"))[0]) == 1
        assert len(horospherical_basis(build_config("sp2n:2"))[0]) == 4
        assert len(horospherical_basis(build_config("sl2_sym:3"))[0]) == 1

    def test_nilpotent_and_signed(self):
        cfg = build_config("sp2n:2")
        u_plus, u_minus = horospherical_basis(cfg)
        for x in u_plus + u_minus:
            cur = x
            for _ in range(cfg.n):
                cur = cur @ x
            assert cur.is_zero()
        for i in cfg.u_plus_indices:
            assert cfg.a_eigenvalue_of_generator(i) > 0
        for i in cfg.u_minus_indices:
            assert cfg.a_eigenvalue_of_generator(i) < 0

    def test_missing_internal(self):
        cfg = build_config("so_pq:2,1")
        stripped = RepConfig(
            name=cfg.name,
            n=cfg.n,
            h_dim=cfg.h_dim,
            h_basis=cfg.h_basis,
            a_action=cfg.a_action,
            h_internal=None,
            u_plus_indices=cfg.u_plus_indices,
            u_minus_indices=cfg.u_minus_indices,
            a_norm_sq=cfg.a_norm_sq,
        )
        with pytest.raises(IncompleteConfig):
            horospherical_basis(stripped)


def test_config_json_round_trip():
    cfg = build_config("so_pq:2,1")
    assert config_from_json(config_to_json(cfg)) == cfg
