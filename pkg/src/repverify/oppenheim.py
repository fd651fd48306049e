"""Small-values search for indefinite quadratic forms at integer points.

Forms have entries a + b sqrt(D) with rational a, b and one squarefree D, so
values at integer vectors are exact field elements; the scan itself runs on
floats and only improvements are re-evaluated exactly.  The enumeration
solves for the last coordinate, which makes T = 10^3..10^4 at d = 3
practical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class SignatureError(Exception):
    pass


class BudgetError(Exception):
    pass


class FitError(Exception):
    pass


class FormParseError(Exception):
    pass


def _is_squarefree(d: int) -> bool:
    if d < 0:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class QuadExt:
    """Element a + b sqrt(d) of a real quadratic field (d squarefree, d >= 2)."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        if self.d < 2 or not _is_squarefree(self.d):
            raise FormParseError(f"d must be squarefree and >= 2, got {self.d}")

    @staticmethod
    def rational(x, d: int) -> "QuadExt":
        return QuadExt(Fraction(x), Fraction(0), d)

    def __add__(self, o: "QuadExt") -> "QuadExt":
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    def __sub__(self, o: "QuadExt") -> "QuadExt":
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.d)

    def __mul__(self, o: "QuadExt") -> "QuadExt":
        return QuadExt(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    def scale(self, c) -> "QuadExt":
        c = Fraction(c)
        return QuadExt(self.a * c, self.b * c, self.d)

    def inverse(self) -> "QuadExt":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("zero element")
        return QuadExt(self.a / norm, -self.b / norm, self.d)

    def is_zero(self) -> bool:
        # a + b sqrt(d) = 0 with d squarefree forces a = b = 0
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return 0 if a == 0 else (1 if a > 0 else -1)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 d exactly
        cmp = a * a - b * b * self.d
        if cmp == 0:
            return 0  # impossible for squarefree d, kept for safety
        if a > 0:
            return 1 if cmp > 0 else -1
        return -1 if cmp > 0 else 1

    def abs_exact(self) -> "QuadExt":
        return self if self.sign() >= 0 else -self

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self) -> str:
        return f"{self.a}+{self.b}*sqrt{self.d}"


def _abs_less(x: QuadExt, y: QuadExt) -> bool:
    """|x| < |y| exactly, via comparing squares."""
    return (y * y - x * x).sign() > 0


@dataclass(frozen=True)
class QuadraticForm:
    d: int  # number of variables
    gram: tuple[tuple[QuadExt, ...], ...]

    def __post_init__(self):
        if self.d < 3:
            raise FormParseError("need at least three variables")
        for i in range(self.d):
            for j in range(self.d):
                if (self.gram[i][j] - self.gram[j][i]).is_zero() is False:
                    raise FormParseError("gram matrix must be symmetric")

    @property
    def field_d(self) -> int:
        return self.gram[0][0].d

    def evaluate(self, v) -> QuadExt:
        total = QuadExt.rational(0, self.field_d)
        for i in range(self.d):
            if v[i] == 0:
                continue
            for j in range(self.d):
                if v[j]:
                    total = total + self.gram[i][j].scale(v[i] * v[j])
        return total

    def gram_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])

    def signature(self) -> tuple[int, int, int]:
        """(positives, negatives, zeros) by exact congruence diagonalization."""
        n = self.d
        m = [[self.gram[i][j] for j in range(n)] for i in range(n)]
        zero = QuadExt.rational(0, self.field_d)
        pos = neg = nil = 0
        idx = list(range(n))
        while idx:
            # find a nonzero diagonal pivot, creating one if necessary
            piv = next((i for i in idx if m[i][i].sign() != 0), None)
            if piv is None:
                pair = next(
                    ((i, j) for i in idx for j in idx if i != j and m[i][j].sign() != 0),
                    None,
                )
                if pair is None:
                    nil += len(idx)
                    break
                i, j = pair
                # row/col operation x_i -> x_i + x_j makes the diagonal nonzero
                for k in range(n):
                    m[i][k] = m[i][k] + m[j][k]
                for k in range(n):
                    m[k][i] = m[k][i] + m[k][j]
                piv = i
            p = m[piv][piv]
            if p.sign() > 0:
                pos += 1
            else:
                neg += 1
            idx.remove(piv)
            inv = p.inverse()
            for i in idx:
                f = m[i][piv] * inv
                if f.is_zero():
                    continue
                for k in range(n):
                    m[i][k] = m[i][k] - f * m[piv][k]
                for k in range(n):
                    m[k][i] = m[k][i] - f * m[k][piv]
        return pos, neg, nil

    def is_indefinite(self) -> bool:
        pos, neg, _ = self.signature()
        return pos > 0 and neg > 0


@dataclass(frozen=True)
class SearchResult:
    best_v: tuple[int, ...]
    best_value: float
    value_exact: QuadExt
    t_bound: int
    s: float

    def __post_init__(self):
        g = 0
        for x in self.best_v:
            g = math.gcd(g, abs(x))
        if g != 1:
            raise ValueError("returned vector is not primitive")


@dataclass
class DecayCurve:
    rows: list[tuple[int, float]]
    exact_values: list[QuadExt]
    kappa: float  # fitted decay exponent; inf when the minimum is exactly 0


MAX_T = {3: 10_000, 4: 1_000}


def search_min_value(q: QuadraticForm, s: float, t_bound: int) -> SearchResult:
    """Best primitive |Q(v) - s| over 0 < ||v||_inf <= T.

    Enumerates the leading d-1 coordinates, solves the quadratic in the last
    one, and tests the integer neighbors of each real root (and of the vertex
    when there is no real root).  Float values order the scan; any improvement
    is re-checked in exact arithmetic.
    """
    curve = _scan(q, s, [t_bound])
    v, exact = curve
    best_v, value_exact = v[0], exact[0]
    return SearchResult(best_v, abs(float(value_exact)), value_exact, t_bound, s)


def decay_curve(q: QuadraticForm, s: float, t_list: list[int]) -> DecayCurve:
    """Running minima over nested bounds plus a log-log decay exponent fit."""
    if len(set(t_list)) < 3:
        raise FitError("need at least three distinct bounds")
    if sorted(t_list) != list(t_list):
        raise FitError("bounds must be ascending")
    vecs, exacts = _scan(q, s, list(t_list))
    rows = [(t, abs(float(e))) for t, e in zip(t_list, exacts)]
    # fit on strictly improving checkpoints only: plateaus bias the slope
    pts = []
    last = None
    for t, e in zip(t_list, exacts):
        val = abs(float(e))
        if e.is_zero():
            return DecayCurve(rows, exacts, math.inf)
        if last is None or val < last:
            pts.append((math.log(t), math.log(val)))
            last = val
    if len(pts) < 2:
        kappa = 0.0
    else:
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        kappa = -float(np.polyfit(xs, ys, 1)[0])
    return DecayCurve(rows, exacts, kappa)


def _scan(q: QuadraticForm, s: float, checkpoints: list[int]):
    d = q.d
    t_max = checkpoints[-1]
    if d not in MAX_T:
        raise BudgetError(f"supported dimensions: {sorted(MAX_T)}")
    if t_max > MAX_T[d]:
        raise BudgetError(f"t_bound {t_max} exceeds cap {MAX_T[d]} at d = {d}")
    if not q.is_indefinite():
        raise SignatureError("form must be indefinite")
    g = q.gram_float()
    sd = q.field_d
    a_coef = g[d - 1, d - 1]
    best_val = [math.inf] * len(checkpoints)
    best_vec: list[tuple[int, ...] | None] = [None] * len(checkpoints)
    best_exact: list[QuadExt | None] = [None] * len(checkpoints)

    if d == 3:
        v2 = np.arange(-t_max, t_max + 1)
        for v1 in range(-t_max, t_max + 1):
            c = g[0, 0] * v1 * v1 + 2 * g[0, 1] * v1 * v2 + g[1, 1] * v2 * v2
            b = 2 * (g[0, 2] * v1 + g[1, 2] * v2)
            cands = _candidate_roots(a_coef, b, c - s)
            err_best = None
            for v3 in cands:
                err = np.abs(a_coef * v3 * v3 + b * v3 + c - s)
                ok = (np.abs(v3) <= t_max) & (np.gcd(np.gcd(abs(v1), np.abs(v2)), np.abs(v3.astype(np.int64))) == 1)
                err = np.where(ok, err, math.inf)
                if err_best is None:
                    err_best, v3_best = err, v3.copy()
                else:
                    better = err < err_best
                    err_best = np.where(better, err, err_best)
                    v3_best = np.where(better, v3, v3_best)
            if err_best is None:
                continue
            for ci, t_cap in enumerate(checkpoints):
                if abs(v1) > t_cap:
                    continue
                mask = (np.abs(v2) <= t_cap) & (np.abs(v3_best) <= t_cap)
                masked = np.where(mask, err_best, math.inf)
                j = int(np.argmin(masked))
                if masked[j] < best_val[ci] + 1e-9 and masked[j] < math.inf:
                    vec = (v1, int(v2[j]), int(v3_best[j]))
                    exact = q.evaluate(vec) - QuadExt.rational(Fraction(s).limit_denominator(10**12), sd)
                    if best_exact[ci] is None or _abs_less(exact, best_exact[ci]):
                        best_val[ci] = abs(float(exact))
                        best_vec[ci] = vec
                        best_exact[ci] = exact
    else:  # d == 4
        rng_v3 = np.arange(-t_max, t_max + 1)
        for v1 in range(-t_max, t_max + 1):
            for v2 in range(-t_max, t_max + 1):
                c = (
                    g[0, 0] * v1 * v1
                    + g[1, 1] * v2 * v2
                    + g[2, 2] * rng_v3 * rng_v3
                    + 2 * (g[0, 1] * v1 * v2 + g[0, 2] * v1 * rng_v3 + g[1, 2] * v2 * rng_v3)
                )
                b = 2 * (g[0, 3] * v1 + g[1, 3] * v2 + g[2, 3] * rng_v3)
                a4 = g[3, 3]
                cands = _candidate_roots(a4, b, c - s)
                err_best = None
                for v4 in cands:
                    err = np.abs(a4 * v4 * v4 + b * v4 + c - s)
                    gcd12 = math.gcd(abs(v1), abs(v2))
                    ok = (np.abs(v4) <= t_max) & (
                        np.gcd(np.gcd(gcd12, np.abs(rng_v3)), np.abs(v4.astype(np.int64))) == 1
                    )
                    err = np.where(ok, err, math.inf)
                    if err_best is None:
                        err_best, v4_best = err, v4.copy()
                    else:
                        better = err < err_best
                        err_best = np.where(better, err, err_best)
                        v4_best = np.where(better, v4, v4_best)
                for ci, t_cap in enumerate(checkpoints):
                    if abs(v1) > t_cap or abs(v2) > t_cap:
                        continue
                    mask = (np.abs(rng_v3) <= t_cap) & (np.abs(v4_best) <= t_cap)
                    masked = np.where(mask, err_best, math.inf)
                    j = int(np.argmin(masked))
                    if masked[j] < best_val[ci] + 1e-9 and masked[j] < math.inf:
                        vec = (v1, v2, int(rng_v3[j]), int(v4_best[j]))
                        exact = q.evaluate(vec) - QuadExt.rational(Fraction(s).limit_denominator(10**12), sd)
                        if best_exact[ci] is None or _abs_less(exact, best_exact[ci]):
                            best_val[ci] = abs(float(exact))
                            best_vec[ci] = vec
                            best_exact[ci] = exact

    out_v, out_e = [], []
    running: QuadExt | None = None
    running_v = None
    for ci in range(len(checkpoints)):
        if best_vec[ci] is not None and (running is None or _abs_less(best_exact[ci], running)):
            running = best_exact[ci]
            running_v = best_vec[ci]
        if running is None:
            raise BudgetError("no admissible vector found; enlarge the bound")
        out_v.append(running_v)
        out_e.append(running)
    return out_v, out_e


def _candidate_roots(a, b, c):
    """Integer candidates near the roots (or the vertex) of a x^2 + b x + c."""
    cands = []
    if abs(a) > 1e-12:
        disc = b * b - 4 * a * c
        has_root = disc >= 0
        sq = np.sqrt(np.where(has_root, disc, 0.0))
        for sgn in (1.0, -1.0):
            r = np.where(has_root, (-b + sgn * sq) / (2 * a), -b / (2 * a))
            cands.append(np.floor(r).astype(np.int64))
            cands.append(np.floor(r).astype(np.int64) + 1)
    else:
        b_arr = np.asarray(b, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(np.abs(b_arr) > 1e-12, -np.asarray(c, dtype=float) / b_arr, 0.0)
        cands.append(np.floor(r).astype(np.int64))
        cands.append(np.floor(r).astype(np.int64) + 1)
        cands.append(np.zeros_like(np.floor(r).astype(np.int64)))
        cands.append(np.ones_like(np.floor(r).astype(np.int64)))
    return cands


# --- form mini-grammar -------------------------------------------------------------


def parse_form(text: str, dim: int | None = None) -> QuadraticForm:
    """Parse forms like "x1^2+x2^2-sqrt2*x3^2" or "1/2*x1*x2 - x3^2".

    Monomials are xi^2 or xi*xj with coefficients p/q, p/q*sqrtD, or sqrtD.
    """
    cleaned = text.replace(" ", "").replace("-", "+-")
    terms = [t for t in cleaned.split("+") if t]
    entries: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
    field_d = None
    max_var = 0
    for term in terms:
        sign = Fraction(1)
        if term.startswith("-"):
            sign = Fraction(-1)
            term = term[1:]
        parts = term.split("*")
        coeff_a = Fraction(1)
        coeff_b = Fraction(0)
        vars_seen: list[int] = []
        for p in parts:
            if p.startswith("sqrt"):
                d = int(p[4:])
                if field_d is not None and field_d != d:
                    raise FormParseError("mixed radicands are not supported")
                field_d = d
                coeff_a, coeff_b = Fraction(0), coeff_a
            elif p.startswith("x"):
                try:
                    if p.endswith("^2"):
                        idx = int(p[1:-2])
                        vars_seen.extend([idx, idx])
                    else:
                        vars_seen.append(int(p[1:]))
                except ValueError:
                    raise FormParseError(f"bad monomial factor {p!r}") from None
            else:
                try:
                    coeff_a = coeff_a * Fraction(p)
                except ValueError:
                    raise FormParseError(f"bad coefficient {p!r}") from None
        if len(vars_seen) != 2:
            raise FormParseError(f"monomial {term!r} is not quadratic")
        i, j = sorted(vars_seen)
        max_var = max(max_var, j)
        a, b = entries.get((i, j), (Fraction(0), Fraction(0)))
        entries[(i, j)] = (a + sign * coeff_a, b + sign * coeff_b)
    d = dim or max_var
    if field_d is None:
        field_d = 2  # rational form embedded in Q(sqrt 2)
    gram = [[QuadExt.rational(0, field_d) for _ in range(d)] for _ in range(d)]
    for (i, j), (a, b) in entries.items():
        if i == j:
            gram[i - 1][i - 1] = QuadExt(a, b, field_d)
        else:
            half = QuadExt(a / 2, b / 2, field_d)
            gram[i - 1][j - 1] = gram[i - 1][j - 1] + half
            gram[j - 1][i - 1] = gram[j - 1][i - 1] + half
    return QuadraticForm(d, tuple(tuple(row) for row in gram))


def sqrt2_form() -> QuadraticForm:
    return parse_form("x1^2+x2^2-sqrt2*x3^2")


def isotropic_form() -> QuadraticForm:
    return parse_form("x1^2-x3^2", dim=3)
