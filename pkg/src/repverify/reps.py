"""Construction of the example (H, a, V) configurations.

Each configuration stores the action matrices of a basis of the Lie algebra
of H on V, in coordinates adapted to the chosen diagonalizable element a:
the coordinates of V are eigenvectors of a ordered by descending eigenvalue,
so flags are leading coordinate blocks and flag projectors are coordinate
projections.  All data is exact over Q.

Supported families:

  * so_pq:p,q       trace-form complement of so(p,q) inside sl_{p+q}
  * sp2n:n          trace-form complement of sp_{2n} inside sl_{2n}
  * diagonal:slK    adjoint representation of sl_K (diagonal subgroup model)
  * tensor:n,m      sl_n tensor sl_m as a representation of SL_n x SL_m
  * tensor_std:n,m  R^n tensor R^m (standard outer tensor model)
  * sl2_sym:k       degree-k symmetric power of the standard SL_2 module
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .qlinalg import (
    Mat,
    Rat,
    RowSpan,
    Subspace,
    canonicalize,
    kernel_basis,
    mat_from_json,
    mat_to_json,
    solve_exact,
    subspace_intersect,
)


class ConfigError(Exception):
    """Unsupported or malformed configuration descriptor."""


class RationalityError(ConfigError):
    """The requested configuration needs irrational structure constants."""


class IncompleteConfig(ConfigError):
    """The configuration lacks data required by the operation."""


class InvalidLevel(Exception):
    """Requested flag level is not an eigenvalue."""


MAX_DIM = 64


@dataclass(frozen=True)
class RepConfig:
    """An (H, a, V) configuration as exact matrix data.

    h_basis holds the action of a weight-adapted basis of Lie(H) on V;
    u_plus_indices / u_minus_indices mark the basis elements with positive /
    negative ad(a)-eigenvalue (the horospherical generators).  a_norm_sq
    records ||a||^2 of the defining rational a; all downstream claims are
    scale covariant, so a is stored unnormalized.
    """

    name: str
    n: int
    h_dim: int
    h_basis: tuple[Mat, ...]
    a_action: Mat
    h_internal: tuple[Mat, ...] | None
    u_plus_indices: tuple[int, ...]
    u_minus_indices: tuple[int, ...]
    a_norm_sq: Fraction

    def a_eigenvalue_of_generator(self, idx: int) -> Fraction:
        """ad(a)-eigenvalue of h_basis[idx], from the V-action bracket."""
        x = self.h_basis[idx]
        br = self.a_action @ x - x @ self.a_action
        for i in range(self.n):
            for j in range(self.n):
                if x.at(i, j) != 0:
                    return br.at(i, j) / x.at(i, j)
        return Fraction(0)


@dataclass(frozen=True)
class WeightDecomposition:
    eigenvalues: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]
    eigenbases: tuple[Subspace, ...]

    @property
    def total_dim(self) -> int:
        return sum(self.multiplicities)

    @property
    def max_eigenvalue(self) -> Fraction:
        return self.eigenvalues[-1]


@dataclass(frozen=True)
class FlagProjector:
    mu: Fraction
    flag: Subspace
    projector: Mat


@dataclass(frozen=True)
class IrreducibilityVerdict:
    """Outcome of the matrix-algebra closure (Burnside) test.

    kind is one of "absolutely_irreducible", "reducible" (with an invariant
    subspace witness), or "inconclusive" (algebra dimension below n^2 but no
    invariant closure of a basis vector found; irreducible over R but not
    absolutely is possible and is reported, never guessed).
    """

    kind: str
    algebra_dim: int
    witness: Subspace | None = None

    @property
    def is_absolutely_irreducible(self) -> bool:
        return self.kind == "absolutely_irreducible"


# --- matrix-space plumbing -----------------------------------------------------


def _vec(m: Mat) -> tuple[Fraction, ...]:
    return m.entries


def _unvec(v, d: int) -> Mat:
    return Mat(d, d, tuple(v))


def _bracket(x: Mat, y: Mat) -> Mat:
    return x @ y - y @ x


def _so_gram(p: int, q: int) -> Mat:
    """Gram matrix of 2 x_1 x_{p+q} + x_2^2 + ... + x_p^2 - x_{p+1}^2 - ... - x_{p+q-1}^2."""
    d = p + q
    s = [[Fraction(0)] * d for _ in range(d)]
    s[0][d - 1] = Fraction(1)
    s[d - 1][0] = Fraction(1)
    for i in range(1, p):
        s[i][i] = Fraction(1)
    for i in range(p, d - 1):
        s[i][i] = Fraction(-1)
    return Mat.from_rows(s)


def _sp_form(nn: int) -> Mat:
    """Antidiagonal symplectic form on R^{2n}."""
    d = 2 * nn
    s = [[Fraction(0)] * d for _ in range(d)]
    for i in range(nn):
        s[i][d - 1 - i] = Fraction(1)
        s[d - 1 - i][i] = Fraction(-1)
    return Mat.from_rows(s)


def _form_stabilizer_basis(s: Mat) -> list[Mat]:
    """Basis of {X : X^T S + S X = 0} inside gl_d."""
    d = s.rows
    # Linear constraints on vec(X): for each (i, j), sum_k X_ki S_kj + S_ik X_kj = 0.
    rows = []
    for i in range(d):
        for j in range(d):
            coeff = [Fraction(0)] * (d * d)
            for k in range(d):
                coeff[k * d + i] += s.at(k, j)
                coeff[k * d + j] += s.at(i, k)
            rows.append(coeff)
    ker = kernel_basis(Mat.from_rows(rows))
    return [_unvec(ker.basis.col(c), d) for c in range(ker.dim)]


def _trace_complement_basis(d: int, h_mats: list[Mat]) -> list[Mat]:
    """Basis of the trace-form orthocomplement of span(h_mats) inside sl_d."""
    rows = []
    for x in h_mats:
        # tr(Y X) = sum_{i,j} Y_ij X_ji
        rows.append([x.at(j, i) for i in range(d) for j in range(d)])
    rows.append([Fraction(1 if i == j else 0) for i in range(d) for j in range(d)])  # trace zero
    ker = kernel_basis(Mat.from_rows(rows))
    return [_unvec(ker.basis.col(c), d) for c in range(ker.dim)]


def _weight_adapt(mats: list[Mat], a_diag: list[Fraction]) -> tuple[list[Mat], list[Fraction]]:
    """Re-basis span(mats) into ad(a)-eigenvectors, sorted by descending eigenvalue.

    Requires a diagonal; ad(a) acts on the matrix units E_ij by a_i - a_j, so
    the eigenspaces of the ambient matrix space are coordinate blocks and the
    intersection with span(mats) is exact.
    """
    d = len(a_diag)
    span = canonicalize(Mat.from_cols([_vec(m) for m in mats]))
    weights = sorted({a_diag[i] - a_diag[j] for i in range(d) for j in range(d)}, reverse=True)
    out_mats: list[Mat] = []
    out_wts: list[Fraction] = []
    total = 0
    for lam in weights:
        idx = [i * d + j for i in range(d) for j in range(d) if a_diag[i] - a_diag[j] == lam]
        block = Subspace.from_columns(
            d * d,
            [[Fraction(1 if k == t else 0) for k in range(d * d)] for t in idx],
        )
        piece = subspace_intersect(span, block)
        for c in range(piece.dim):
            out_mats.append(_unvec(piece.basis.col(c), d))
            out_wts.append(lam)
        total += piece.dim
    if total != span.dim:
        raise RationalityError("element a is not diagonalizable over Q on the requested space")
    return out_mats, out_wts


def _action_matrices(
    v_mats: list[Mat], generators: list[Mat]
) -> list[Mat]:
    """Matrices of Y -> [X, Y] on span(v_mats), in the v_mats coordinates."""
    d = v_mats[0].rows
    basis_cols = Mat.from_cols([_vec(m) for m in v_mats])
    out = []
    for x in generators:
        bracket_cols = Mat.from_cols([_vec(_bracket(x, y)) for y in v_mats])
        coords = solve_exact(basis_cols, bracket_cols)
        out.append(coords)
    return out


def _validate_config(cfg: RepConfig) -> None:
    n = cfg.n
    if n > MAX_DIM:
        raise ConfigError(f"dimension {n} exceeds supported cap {MAX_DIM}")
    for i in range(n):
        for j in range(n):
            if i != j and cfg.a_action.at(i, j) != 0:
                raise RationalityError("a_action is not diagonal in the stored coordinates")
    for x in cfg.h_basis:
        if x.trace() != 0:
            raise ConfigError("h_basis element with nonzero trace")
    # bracket closure: [rho(X_i), rho(X_j)] must lie in span(h_basis)
    span = RowSpan(n * n)
    for x in cfg.h_basis:
        span.add(_vec(x))
    for i in range(cfg.h_dim):
        for j in range(i + 1, cfg.h_dim):
            if not span.contains(_vec(_bracket(cfg.h_basis[i], cfg.h_basis[j]))):
                raise ConfigError("h_basis is not closed under brackets")
    # horospherical generators act nilpotently and with the right ad(a) sign
    for idx in cfg.u_plus_indices:
        if cfg.a_eigenvalue_of_generator(idx) <= 0:
            raise ConfigError("u_plus generator with nonpositive ad(a) eigenvalue")
        _check_nilpotent(cfg.h_basis[idx])
    for idx in cfg.u_minus_indices:
        if cfg.a_eigenvalue_of_generator(idx) >= 0:
            raise ConfigError("u_minus generator with nonnegative ad(a) eigenvalue")
        _check_nilpotent(cfg.h_basis[idx])


def _check_nilpotent(m: Mat) -> None:
    cur = m
    for _ in range(m.rows):
        if cur.is_zero():
            return
        cur = cur @ m
    if not cur.is_zero():
        raise ConfigError("horospherical generator is not nilpotent on V")


def _complement_config(name: str, s_form: Mat, a_diag: list[Fraction], symplectic: bool) -> RepConfig:
    d = s_form.rows
    h_raw = _form_stabilizer_basis(s_form)
    h_mats, h_wts = _weight_adapt(h_raw, a_diag)
    a_mat = Mat.diagonal(a_diag)
    span = RowSpan(d * d)
    for m in h_mats:
        span.add(_vec(m))
    if not span.contains(_vec(a_mat)):
        raise ConfigError("element a does not lie in the stabilizer algebra")
    v_raw = _trace_complement_basis(d, h_mats)
    v_mats, v_wts = _weight_adapt(v_raw, a_diag)
    n = len(v_mats)
    expected = d * d - 1 - len(h_mats)
    if n != expected:
        raise ConfigError("complement dimension mismatch")
    h_action = _action_matrices(v_mats, h_mats)
    a_action = Mat.diagonal(v_wts)
    h_internal = _action_matrices(h_mats, h_mats)
    u_plus = tuple(i for i, w in enumerate(h_wts) if w > 0)
    u_minus = tuple(i for i, w in enumerate(h_wts) if w < 0)
    cfg = RepConfig(
        name=name,
        n=n,
        h_dim=len(h_mats),
        h_basis=tuple(h_action),
        a_action=a_action,
        h_internal=tuple(h_internal),
        u_plus_indices=u_plus,
        u_minus_indices=u_minus,
        a_norm_sq=sum((x * x for x in a_diag), Fraction(0)),
    )
    _validate_config(cfg)
    return cfg


def _sl_weight_basis(k: int) -> tuple[list[Mat], list[Fraction], list[Fraction]]:
    """Weight-adapted basis of sl_k for the regular a = diag(k-1, k-3, ...).

    Returns (basis matrices, ad(a)-weights, a diagonal).
    """
    a_diag = [Fraction(k - 1 - 2 * i) for i in range(k)]
    mats: list[tuple[Fraction, Mat]] = []
    for i in range(k):
        for j in range(k):
            if i != j:
                e = [[Fraction(0)] * k for _ in range(k)]
                e[i][j] = Fraction(1)
                mats.append((a_diag[i] - a_diag[j], Mat.from_rows(e)))
    for i in range(k - 1):
        h = [[Fraction(0)] * k for _ in range(k)]
        h[i][i] = Fraction(1)
        h[i + 1][i + 1] = Fraction(-1)
        mats.append((Fraction(0), Mat.from_rows(h)))
    mats.sort(key=lambda t: t[0], reverse=True)
    return [m for _, m in mats], [w for w, _ in mats], a_diag


def _adjoint_config(name: str, k: int) -> RepConfig:
    basis, wts, a_diag = _sl_weight_basis(k)
    v_mats, v_wts = _weight_adapt(basis, a_diag)
    h_action = _action_matrices(v_mats, v_mats)
    cfg = RepConfig(
        name=name,
        n=len(v_mats),
        h_dim=len(v_mats),
        h_basis=tuple(h_action),
        a_action=Mat.diagonal(v_wts),
        h_internal=tuple(h_action),
        u_plus_indices=tuple(i for i, w in enumerate(v_wts) if w > 0),
        u_minus_indices=tuple(i for i, w in enumerate(v_wts) if w < 0),
        a_norm_sq=sum((x * x for x in a_diag), Fraction(0)),
    )
    _validate_config(cfg)
    return cfg


def _tensor_sort(perm_weights: list[Fraction]) -> list[int]:
    return sorted(range(len(perm_weights)), key=lambda i: perm_weights[i], reverse=True)


def _kron_action(left: Mat | None, right: Mat | None, dims: tuple[int, int], order: list[int]) -> Mat:
    """Matrix of X (x) I or I (x) Y on the sorted tensor basis."""
    da, db = dims
    n = da * db
    inv = [0] * n
    for newpos, old in enumerate(order):
        inv[old] = newpos
    ents = [[Fraction(0)] * n for _ in range(n)]
    for i in range(da):
        for j in range(db):
            src = i * db + j
            if left is not None:
                for i2 in range(da):
                    c = left.at(i2, i)
                    if c:
                        ents[inv[i2 * db + j]][inv[src]] += c
            if right is not None:
                for j2 in range(db):
                    c = right.at(j2, j)
                    if c:
                        ents[inv[i * db + j2]][inv[src]] += c
    return Mat.from_rows(ents)


def _tensor_config(name: str, kn: int, km: int, standard: bool) -> RepConfig:
    left_basis, left_wts, a1 = _sl_weight_basis(kn)
    right_basis, right_wts, a2 = _sl_weight_basis(km)
    li = _action_matrices(left_basis, left_basis)
    ri = _action_matrices(right_basis, right_basis)
    if standard:
        # factors act on R^kn and R^km by the matrices themselves
        left_ops, right_ops = left_basis, right_basis
        left_fac_wts, right_fac_wts = a1, a2
        da, db = kn, km
    else:
        # factors act on sl_kn and sl_km by ad, so V = sl_kn (x) sl_km
        left_ops, right_ops = li, ri
        left_fac_wts, right_fac_wts = left_wts, right_wts
        da, db = len(left_basis), len(right_basis)
    pair_wts = [left_fac_wts[i] + right_fac_wts[j] for i in range(da) for j in range(db)]
    order = _tensor_sort(pair_wts)
    sorted_wts = [pair_wts[o] for o in order]

    h_action = [_kron_action(x, None, (da, db), order) for x in left_ops]
    h_action += [_kron_action(None, y, (da, db), order) for y in right_ops]
    h_wts = list(left_wts) + list(right_wts)

    hd = len(h_wts)
    internal = []
    for t, m in enumerate(li + ri):
        block = [[Fraction(0)] * hd for _ in range(hd)]
        off = 0 if t < len(li) else len(li)
        for i in range(m.rows):
            for j in range(m.rows):
                block[off + i][off + j] = m.at(i, j)
        internal.append(Mat.from_rows(block))

    cfg = RepConfig(
        name=name,
        n=da * db,
        h_dim=hd,
        h_basis=tuple(h_action),
        a_action=Mat.diagonal(sorted_wts),
        h_internal=tuple(internal),
        u_plus_indices=tuple(i for i, w in enumerate(h_wts) if w > 0),
        u_minus_indices=tuple(i for i, w in enumerate(h_wts) if w < 0),
        a_norm_sq=sum((x * x for x in a1 + a2), Fraction(0)),
    )
    _validate_config(cfg)
    return cfg


def _sl2_sym_config(k: int) -> RepConfig:
    """Sym^k of the standard SL_2 module on monomials x^{k-i} y^i."""
    n = k + 1
    h = Mat.diagonal([Fraction(k - 2 * i) for i in range(n)])
    e_rows = [[Fraction(0)] * n for _ in range(n)]
    f_rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if i >= 1:
            e_rows[i - 1][i] = Fraction(i)  # e: v_i -> i v_{i-1}
        if i <= k - 1:
            f_rows[i + 1][i] = Fraction(k - i)  # f: v_i -> (k - i) v_{i+1}
    e = Mat.from_rows(e_rows)
    f = Mat.from_rows(f_rows)
    internal = [
        Mat.from_rows([[Fraction(0), Fraction(-2), Fraction(0)],
                       [Fraction(0), Fraction(0), Fraction(1)],
                       [Fraction(0), Fraction(0), Fraction(0)]]),
        Mat.from_rows([[Fraction(2), Fraction(0), Fraction(0)],
                       [Fraction(0), Fraction(0), Fraction(0)],
                       [Fraction(0), Fraction(0), Fraction(-2)]]),
        Mat.from_rows([[Fraction(0), Fraction(0), Fraction(0)],
                       [Fraction(-1), Fraction(0), Fraction(0)],
                       [Fraction(0), Fraction(2), Fraction(0)]]),
    ]
    cfg = RepConfig(
        name=f"sl2_sym:{k}",
        n=n,
        h_dim=3,
        h_basis=(e, h, f),
        a_action=h,
        h_internal=tuple(internal),
        u_plus_indices=(0,),
        u_minus_indices=(2,),
        a_norm_sq=Fraction(2),
    )
    _validate_config(cfg)
    return cfg


def parse_descriptor(text: str) -> tuple[str, tuple]:
    if ":" not in text:
        raise ConfigError(f"bad config descriptor {text!r}")
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    args = tuple(p.strip() for p in rest.split(",") if p.strip())
    return kind, args


@lru_cache(maxsize=None)
def build_config(descriptor: str) -> RepConfig:
    """Build a configuration from a descriptor like "so_pq:2,1"."""
    kind, args = parse_descriptor(descriptor)
    if kind == "so_pq":
        if len(args) != 2:
            raise ConfigError("so_pq needs p,q")
        p, q = int(args[0]), int(args[1])
        if p < 1 or q < 1 or p + q < 3:
            raise ConfigError("so_pq needs p, q >= 1 with p + q >= 3")
        d = p + q
        a_diag = [Fraction(0)] * d
        a_diag[0] = Fraction(1)
        a_diag[-1] = Fraction(-1)
        return _complement_config(f"so_pq:{p},{q}", _so_gram(p, q), a_diag, symplectic=False)
    if kind == "sp2n":
        if len(args) != 1:
            raise ConfigError("sp2n needs n")
        nn = int(args[0])
        if nn < 1:
            raise ConfigError("sp2n needs n >= 1")
        a_diag = [Fraction(nn - i) for i in range(nn)] + [Fraction(-(nn - i)) for i in reversed(range(nn))]
        return _complement_config(f"sp2n:{nn}", _sp_form(nn), a_diag, symplectic=True)
    if kind == "diagonal":
        if len(args) != 1 or not args[0].startswith("sl"):
            raise ConfigError("diagonal needs a kind like sl2, sl3")
        k = int(args[0][2:])
        if k < 2:
            raise ConfigError("diagonal slK needs K >= 2")
        return _adjoint_config(f"diagonal:sl{k}", k)
    if kind == "tensor":
        if len(args) != 2:
            raise ConfigError("tensor needs n,m")
        return _tensor_config(f"tensor:{args[0]},{args[1]}", int(args[0]), int(args[1]), standard=False)
    if kind == "tensor_std":
        if len(args) != 2:
            raise ConfigError("tensor_std needs n,m")
        return _tensor_config(f"tensor_std:{args[0]},{args[1]}", int(args[0]), int(args[1]), standard=True)
    if kind == "sl2_sym":
        if len(args) != 1:
            raise ConfigError("sl2_sym needs k")
        k = int(args[0])
        if k < 1:
            raise ConfigError("sl2_sym needs k >= 1")
        return _sl2_sym_config(k)
    raise ConfigError(f"unsupported configuration kind {kind!r}")


@lru_cache(maxsize=None)
def weight_decompose(cfg: RepConfig) -> WeightDecomposition:
    """Eigenvalues of a on V with exact eigenbases, sorted ascending."""
    n = cfg.n
    for i in range(n):
        for j in range(n):
            if i != j and cfg.a_action.at(i, j) != 0:
                raise RationalityError("a_action must be diagonal in the stored coordinates")
    diag = [cfg.a_action.at(i, i) for i in range(n)]
    values = sorted(set(diag))
    bases = []
    mults = []
    for mu in values:
        idx = [i for i in range(n) if diag[i] == mu]
        cols = [[Fraction(1 if t == i else 0) for t in range(n)] for i in idx]
        bases.append(Subspace.from_columns(n, cols))
        mults.append(len(idx))
    dec = WeightDecomposition(tuple(values), tuple(mults), tuple(bases))
    assert dec.total_dim == n
    return dec


def flag_projector(dec: WeightDecomposition, mu) -> FlagProjector:
    """Flag of eigenvalues >= mu with its coordinate projection."""
    mu = Fraction(mu)
    if mu not in dec.eigenvalues:
        raise InvalidLevel(f"{mu} is not an eigenvalue")
    n = dec.total_dim
    indices: set[int] = set()
    for lam, basis in zip(dec.eigenvalues, dec.eigenbases):
        if lam >= mu:
            for c in range(basis.dim):
                col = basis.basis.col(c)
                pivots = [i for i, x in enumerate(col) if x != 0]
                indices.update(pivots)
    proj = Mat.diagonal([Fraction(1 if i in indices else 0) for i in range(n)])
    cols = [[Fraction(1 if t == i else 0) for t in range(n)] for i in sorted(indices)]
    flag = Subspace.from_columns(n, cols)
    return FlagProjector(mu, flag, proj)


@lru_cache(maxsize=None)
def check_irreducible(cfg: RepConfig) -> IrreducibilityVerdict:
    """Burnside closure test of the matrix algebra generated by the action."""
    n = cfg.n
    generators = list(cfg.h_basis)
    span = RowSpan(n * n)
    basis_mats: list[Mat] = []
    queue: list[Mat] = [Mat.identity(n)] + generators
    for m in queue:
        if span.add(_vec(m)):
            basis_mats.append(m)
    frontier = list(basis_mats)
    while frontier and span.dim < n * n:
        new_frontier = []
        for b in frontier:
            for g in generators:
                prod = g @ b
                if span.add(_vec(prod)):
                    basis_mats.append(prod)
                    new_frontier.append(prod)
                    if span.dim == n * n:
                        break
            if span.dim == n * n:
                break
        frontier = new_frontier
    algebra_dim = span.dim
    if algebra_dim == n * n:
        return IrreducibilityVerdict("absolutely_irreducible", algebra_dim)
    # hunt for an invariant subspace: the closure of a cyclic vector
    for start in range(n):
        vec_span = RowSpan(n)
        vecs: list[tuple[Fraction, ...]] = []
        seed = tuple(Fraction(1 if i == start else 0) for i in range(n))
        vec_span.add(seed)
        vecs.append(seed)
        queue2 = [seed]
        while queue2:
            v = queue2.pop()
            for g in generators:
                w = g.apply(v)
                if vec_span.add(w):
                    vecs.append(w)
                    queue2.append(w)
        if 0 < vec_span.dim < n:
            witness = Subspace.from_columns(n, vecs)
            return IrreducibilityVerdict("reducible", algebra_dim, witness)
    return IrreducibilityVerdict("inconclusive", algebra_dim)


def check_proximal(dec: WeightDecomposition) -> bool:
    return dec.multiplicities[-1] == 1


def horospherical_basis(cfg: RepConfig) -> tuple[list[Mat], list[Mat]]:
    """Action matrices of the expanding / contracting horospherical generators."""
    if cfg.h_internal is None:
        raise IncompleteConfig("configuration lacks h_internal data")
    u_plus = [cfg.h_basis[i] for i in cfg.u_plus_indices]
    u_minus = [cfg.h_basis[i] for i in cfg.u_minus_indices]
    for idx in cfg.u_plus_indices:
        if cfg.a_eigenvalue_of_generator(idx) <= 0:
            raise ConfigError("u_plus generator fails ad(a) positivity")
    for idx in cfg.u_minus_indices:
        if cfg.a_eigenvalue_of_generator(idx) >= 0:
            raise ConfigError("u_minus generator fails ad(a) negativity")
    return u_plus, u_minus


def config_to_json(cfg: RepConfig) -> dict:
    return {
        "name": cfg.name,
        "n": cfg.n,
        "h_dim": cfg.h_dim,
        "h_basis": [mat_to_json(m) for m in cfg.h_basis],
        "a_action": mat_to_json(cfg.a_action),
        "h_internal": None if cfg.h_internal is None else [mat_to_json(m) for m in cfg.h_internal],
        "u_plus_indices": list(cfg.u_plus_indices),
        "u_minus_indices": list(cfg.u_minus_indices),
        "a_norm_sq": str(cfg.a_norm_sq),
    }


def config_from_json(obj: dict) -> RepConfig:
    return RepConfig(
        name=obj["name"],
        n=int(obj["n"]),
        h_dim=int(obj["h_dim"]),
        h_basis=tuple(mat_from_json(m) for m in obj["h_basis"]),
        a_action=mat_from_json(obj["a_action"]),
        h_internal=None
        if obj.get("h_internal") is None
        else tuple(mat_from_json(m) for m in obj["h_internal"]),
        u_plus_indices=tuple(obj["u_plus_indices"]),
        u_minus_indices=tuple(obj["u_minus_indices"]),
        a_norm_sq=Fraction(obj["a_norm_sq"]),
    )
