"""Exact Monte Carlo verification of generic subspace-position statements.

Group elements are sampled as products of unipotent exponentials with random
rational parameters, so every trial stays in exact arithmetic.  Generic
quantities (dimensions after tree operations, the minimal spanning count) are
read off as modal values over independent trials, with a stabilization
threshold of 95%.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .qlinalg import (
    Mat,
    Subspace,
    canonicalize,
    nilpotent_exp,
    rank,
    subspace_intersect,
    subspace_sum,
)
from .reps import RepConfig, check_irreducible, horospherical_basis

STABILIZATION = 0.95


class TreeShapeError(Exception):
    pass


class PreconditionError(Exception):
    pass


class IrreducibilityViolation(Exception):
    """A spanning run exceeded n translates without filling V."""


@dataclass(frozen=True)
class TreeOp:
    """Rooted tree of sum/intersect operations; leaves carry slot indices."""

    op: str | None  # None for a leaf, else "sum" or "intersect"
    children: tuple["TreeOp", ...] = ()
    slot: int | None = None

    @staticmethod
    def leaf(slot: int) -> "TreeOp":
        return TreeOp(None, (), slot)

    @staticmethod
    def sum_of(*children: "TreeOp") -> "TreeOp":
        if len(children) < 2:
            raise TreeShapeError("internal node needs >= 2 descendants")
        return TreeOp("sum", tuple(children))

    @staticmethod
    def intersect_of(*children: "TreeOp") -> "TreeOp":
        if len(children) < 2:
            raise TreeShapeError("internal node needs >= 2 descendants")
        return TreeOp("intersect", tuple(children))

    def leaf_slots(self) -> list[int]:
        if self.op is None:
            return [self.slot]
        out: list[int] = []
        for c in self.children:
            out.extend(c.leaf_slots())
        return out


@dataclass(frozen=True)
class SampledElement:
    """Exact determinant-one element with the recipe that rebuilds it."""

    matrix: Mat
    recipe: tuple[tuple[int, Fraction], ...]
    seed: int


@dataclass
class TrialReport:
    trials: int = 0
    passes: int = 0
    dimension_histogram: dict[int, int] = field(default_factory=dict)
    witness_failures: list[tuple[int, tuple[tuple[int, Fraction], ...]]] = field(default_factory=list)
    stable: bool = True
    notes: list[str] = field(default_factory=list)

    def record(self, dim: int, passed: bool, witness=None):
        self.trials += 1
        self.dimension_histogram[dim] = self.dimension_histogram.get(dim, 0) + 1
        if passed:
            self.passes += 1
        elif witness is not None:
            self.witness_failures.append(witness)

    @property
    def all_passed(self) -> bool:
        return self.passes == self.trials


def default_complexity(cfg: RepConfig) -> int:
    return 2 * (len(cfg.u_plus_indices) + len(cfg.u_minus_indices))


PARAM_HEIGHT = 9999


def sample_element(cfg: RepConfig, seed: int, complexity: int, height: int = PARAM_HEIGHT) -> SampledElement:
    """Product of `complexity` unipotent factors exp(t N).

    The generators N alternate between the u+ and u- lists on a round-robin
    schedule, so every expanding and contracting generator of every simple
    factor contributes; the parameters t are uniform rationals of height at
    most `height`.  Deterministic in (seed, complexity, height); the default
    height keeps the probability of landing on a proper Zariski-closed locus
    around 1e-8 per trial (coarser grids measurably hit codimension-one
    strata).
    """
    if complexity < 1:
        raise PreconditionError("complexity must be >= 1")
    u_plus, u_minus = horospherical_basis(cfg)
    rng = random.Random(seed)
    acc = Mat.identity(cfg.n)
    recipe: list[tuple[int, Fraction]] = []
    for step in range(complexity):
        pool_idx = cfg.u_plus_indices if step % 2 == 0 else cfg.u_minus_indices
        pool = u_plus if step % 2 == 0 else u_minus
        pick = (step // 2) % len(pool)
        t = Fraction(rng.randint(-height, height), rng.randint(1, height))
        acc = acc @ nilpotent_exp(pool[pick].scale(t))
        recipe.append((pool_idx[pick], t))
    return SampledElement(acc, tuple(recipe), seed)


def replay_recipe(cfg: RepConfig, recipe) -> Mat:
    acc = Mat.identity(cfg.n)
    for idx, t in recipe:
        acc = acc @ nilpotent_exp(cfg.h_basis[idx].scale(Fraction(t)))
    return acc


def translate(h: Mat, s: Subspace) -> Subspace:
    if s.dim == 0:
        return s
    return canonicalize(h @ s.basis)


def eval_tree(tree: TreeOp, leaves: list[Subspace]) -> Subspace:
    slots = tree.leaf_slots()
    if len(set(slots)) != len(leaves) or any(s >= len(leaves) or s < 0 for s in slots):
        raise TreeShapeError("leaf slots do not match supplied subspaces")
    ambient = {s.ambient_dim for s in leaves}
    if len(ambient) != 1:
        raise TreeShapeError("leaves live in different ambient dimensions")
    return _eval(tree, leaves)


def _eval(tree: TreeOp, leaves: list[Subspace]) -> Subspace:
    if tree.op is None:
        return leaves[tree.slot]
    parts = [_eval(c, leaves) for c in tree.children]
    out = parts[0]
    for p in parts[1:]:
        out = subspace_sum(out, p) if tree.op == "sum" else subspace_intersect(out, p)
    return out


def _modal(counter: Counter) -> tuple[object, int, bool]:
    """(modal value, count, unique) with ties reported as non-unique."""
    ranked = counter.most_common()
    if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
        return ranked[0][0], ranked[0][1], False
    return ranked[0][0], ranked[0][1], True


def generic_tree_dim(
    cfg: RepConfig, tree: TreeOp, w: Subspace, trials: int, seed: int, complexity: int | None = None
) -> tuple[int, TrialReport]:
    """Modal dimension of the tree operation on independent translates of w."""
    if trials < 2:
        raise PreconditionError("need at least 2 trials")
    complexity = complexity or default_complexity(cfg)
    slots = tree.leaf_slots()
    report = TrialReport()
    dims = Counter()
    for t in range(trials):
        leaves = []
        for li in range(len(slots)):
            h = sample_element(cfg, seed * 1_000_003 + t * 101 + li, complexity)
            leaves.append(translate(h.matrix, w))
        d = eval_tree(tree, leaves).dim
        dims[d] += 1
        report.record(d, True)
    k, count, unique = _modal(dims)
    frac = count / trials
    report.stable = unique and frac >= STABILIZATION
    if not report.stable:
        report.notes.append(
            f"unstable dimension: modal {k} attained in {frac:.0%} of trials"
            + ("" if unique else " (tie)")
        )
    return int(k), report


def _require_bound_inputs(cfg: RepConfig, w: Subspace, w_prime: Subspace) -> None:
    for s in (w, w_prime):
        if s.ambient_dim != cfg.n:
            raise PreconditionError("subspace ambient dimension does not match config")
        if s.dim == 0 or s.dim == cfg.n:
            # full space W is allowed: the bound is then trivial but still checked
            if s.dim == 0:
                raise PreconditionError("subspaces must be nontrivial")
    verdict = check_irreducible(cfg)
    if not verdict.is_absolutely_irreducible:
        raise PreconditionError(f"configuration is not certified irreducible ({verdict.kind})")


def sample_elements(
    cfg: RepConfig, seed: int, count: int, complexity: int | None = None, height: int = PARAM_HEIGHT
) -> list[SampledElement]:
    complexity = complexity or default_complexity(cfg)
    return [sample_element(cfg, seed * 9_999_991 + t, complexity, height) for t in range(count)]


def check_intersection_bound(
    cfg: RepConfig,
    w: Subspace,
    w_prime: Subspace,
    trials: int,
    seed: int,
    complexity: int | None = None,
    elements: list[SampledElement] | None = None,
) -> TrialReport:
    """Per trial: dim((h.W) cap W') <= (dim W / n) dim W', compared exactly.

    A pre-sampled element list may be shared across (W, W') pairs; each pair
    still gets one exact check per trial.
    """
    _require_bound_inputs(cfg, w, w_prime)
    if elements is None:
        elements = sample_elements(cfg, seed, trials, complexity)
    if len(elements) < trials:
        raise PreconditionError("not enough pre-sampled elements")
    k, n = w.dim, cfg.n
    report = TrialReport()
    for t in range(trials):
        h = elements[t]
        d = subspace_intersect(translate(h.matrix, w), w_prime).dim
        passed = d * n <= k * w_prime.dim
        report.record(d, passed, witness=(h.seed, h.recipe))
    return report


def check_projection_bound(
    cfg: RepConfig, w: Subspace, w_prime: Subspace, trials: int, seed: int, complexity: int | None = None
) -> TrialReport:
    """Per trial: rank(pi_{h.W}|_{W'}) >= (dim W / n) dim W', plus the exact
    transpose-duality identity rank(pi_W o h|_{W'}) = rank(pi_{h^t.W}|_{W'})."""
    _require_bound_inputs(cfg, w, w_prime)
    complexity = complexity or default_complexity(cfg)
    k, n = w.dim, cfg.n
    report = TrialReport()
    for t in range(trials):
        h = sample_element(cfg, seed * 7_777_777 + t, complexity)
        hw = translate(h.matrix, w)
        r = rank(hw.basis.transpose() @ w_prime.basis)
        lhs = rank(w.basis.transpose() @ h.matrix @ w_prime.basis)
        rhs = rank(translate(h.matrix.transpose(), w).basis.transpose() @ w_prime.basis)
        if lhs != rhs:
            report.record(r, False, witness=(h.seed, h.recipe))
            report.notes.append(f"duality identity failed at trial {t}")
            continue
        passed = r * n >= k * w_prime.dim
        report.record(r, passed, witness=(h.seed, h.recipe))
    return report


def find_spanning_q(
    cfg: RepConfig, w: Subspace, trials: int, seed: int, complexity: int | None = None
) -> tuple[int, tuple[int, ...]]:
    """Minimal q with generic h_1.W + ... + h_q.W = V, and the intersection
    dimensions k_{q'} = dim((sum_{i<q'} h_i.W) cap h_{q'}.W).

    Asserts every k_{q'} < dim W and sum k_{q'} = q k - n on the modal outcome.
    """
    if w.dim == 0 or w.dim == cfg.n:
        raise PreconditionError("w must be a nontrivial proper subspace")
    verdict = check_irreducible(cfg)
    if not verdict.is_absolutely_irreducible:
        raise PreconditionError(f"configuration is not certified irreducible ({verdict.kind})")
    complexity = complexity or default_complexity(cfg)
    n, k = cfg.n, w.dim
    outcomes: Counter = Counter()
    for t in range(trials):
        h = sample_element(cfg, seed * 31_337 + 7919 * t, complexity)
        total = translate(h.matrix, w)
        k_list: list[int] = []
        step = 1
        while total.dim < n:
            step += 1
            if step > n + 1:
                raise IrreducibilityViolation(
                    "translates never span V; configuration looks reducible"
                )
            h = sample_element(cfg, seed * 31_337 + 7919 * t + step, complexity)
            hw = translate(h.matrix, w)
            k_list.append(subspace_intersect(total, hw).dim)
            total = subspace_sum(total, hw)
        outcomes[(step, tuple(k_list))] += 1
    (q, k_list), _, _ = _modal(outcomes)
    if any(kq >= k for kq in k_list):
        raise IrreducibilityViolation("an intersection dimension reached dim W")
    if sum(k_list) != q * k - n:
        raise IrreducibilityViolation("spanning identity sum k_q' = qk - n failed")
    return q, tuple(k_list)


def submodularity_check(w_prime: Subspace, w1: Subspace, w2: Subspace) -> bool:
    """dim W' cap W1 cap W2 + dim W' cap (W1+W2) >= dim W' cap W1 + dim W' cap W2."""
    if not (w_prime.ambient_dim == w1.ambient_dim == w2.ambient_dim):
        raise PreconditionError("ambient dimension mismatch")
    lhs = (
        subspace_intersect(w_prime, subspace_intersect(w1, w2)).dim
        + subspace_intersect(w_prime, subspace_sum(w1, w2)).dim
    )
    rhs = subspace_intersect(w_prime, w1).dim + subspace_intersect(w_prime, w2).dim
    return lhs >= rhs


def random_subspace(n: int, dim: int, rng: random.Random) -> Subspace:
    """Random rational subspace of the given dimension (exact)."""
    if dim == 0:
        return Subspace.zero(n)
    while True:
        cols = [
            [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
            for _ in range(dim)
        ]
        s = Subspace.from_columns(n, cols)
        if s.dim == dim:
            return s


def perturb_subspace(s: Subspace, rng: random.Random, denom: int = 1000) -> Subspace:
    """Small exact rational perturbation of a subspace, preserving dimension."""
    cols = []
    for col in s.column_vectors():
        cols.append([x + Fraction(rng.randint(-9, 9), denom * rng.randint(1, 9)) for x in col])
    out = Subspace.from_columns(s.ambient_dim, cols)
    return out if out.dim == s.dim else s
