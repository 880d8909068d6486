"""Limiting and truncated ESD moments via word sums over singular integrals.

For a pair-matched word w of length 2k with generating positions
S = {0} u {first occurrences}, the word's contribution to the order-2k
limiting moment is

    E[ 1(all dependent forms lie in the unit interval)
       / prod_{i in S, i>0} occ(L_{i-1}(U_S), U_i) ]

with independent U(0,1) coordinates on S, where occ is the limiting
occurrence fraction of the pattern (1-|x-y| for Toeplitz,
min(x+y, 2-x-y) for Hankel).  Hankel words that are not parity-symmetric
contribute exactly zero.

Three evaluation routes are provided and cross-checked against each other:

* ``finite_n_word_moment`` -- exact discrete expectation at resolution n
  (exhaustive enumeration of generating assignments, circuit closure
  enforced), the finite-size oracle.
* ``truncated_word_moment`` -- the integral restricted to an eps-trimmed box
  where the integrand is bounded by eps^-k, via plain Monte Carlo
  (median-of-means) or graded-mesh quadrature.
* ``limit_word_moment`` -- the eps -> 0 value, either by an eps-ladder of
  truncated Monte Carlo runs extrapolated in the basis eps*ln(eps)^j
  (j up to the word order k), or by graded-mesh tensor quadrature refined
  toward the singular faces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .inputs import derive_seed
from .matgen import MatrixKind
from .parallel import parallel_map
from .words import Word, enumerate_pair_matched_words, form_matrix, generating_vertices, is_symmetric, linear_forms

EPS_LADDER = (0.2, 0.1, 0.05, 0.025)
EPS_LADDER_DEEP = (0.3, 0.2, 0.15, 0.1, 0.05, 0.025)
DEFAULT_SAMPLES = 2_000_000
DEFAULT_BATCHES = 16
DEFAULT_GRID = 64
DEFAULT_GRADING = 0.7
QUADRATURE_MAX_K = 3
ENUMERATION_BUDGET = 10**9
_CHUNK = 1 << 20


class Method(Enum):
    FINITE_N = "finite-n"
    QUADRATURE = "quadrature"
    MC_LADDER = "mc-ladder"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class MomentEstimate:
    """A numeric moment value with provenance and an error bar."""

    value: float
    std_error: float
    method: Method
    params: dict = field(default_factory=dict)
    word: Word | None = None

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "std_error": self.std_error,
            "method": self.method.value,
            "params": _jsonable(self.params),
        }
        if self.word is not None:
            out["word"] = self.word.letters
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


class _WordContext:
    """Precomputed evaluation data for one (word, pattern) pair."""

    __slots__ = ("word", "link", "coeffs", "dependent", "gen_pairs", "closure", "symmetric", "k")

    def __init__(self, word: Word, kind: MatrixKind):
        self.word = word
        self.link = kind.link
        forms, closure = linear_forms(word, kind)
        self.coeffs = form_matrix(forms)  # (2k+1, k+1)
        vertices = generating_vertices(word)
        col_of = {v: i for i, v in enumerate(vertices)}
        n_pos = word.length
        self.dependent = [i for i in range(1, n_pos) if i not in col_of]
        # one occurrence factor per generating position i > 0: occ(L_{i-1}, x_i)
        self.gen_pairs = [(i - 1, col_of[i]) for i in vertices if i > 0]
        self.closure = closure
        self.symmetric = is_symmetric(word)
        self.k = word.k


def _occ_fraction(link: MatrixKind, a, b):
    """Limiting occurrence fraction on the unit square."""
    if link is MatrixKind.T:
        return 1.0 - np.abs(a - b)
    return np.minimum(a + b, 2.0 - a - b)


def _box(link: MatrixKind, eps: float) -> tuple[float, float]:
    if not 0.0 <= eps < 1.0:
        raise InvalidArgumentError("eps must lie in [0, 1)")
    if link is MatrixKind.T:
        return 0.0, 1.0 - eps
    return eps / 2.0, 1.0 - eps / 2.0


def _integrand_on(ctx: _WordContext, x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Indicator-masked integrand values at sample rows ``x`` (shape (N, k+1))."""
    lvals = x @ ctx.coeffs.T
    mask = np.ones(x.shape[0], dtype=bool)
    for i in ctx.dependent:
        col = lvals[:, i]
        mask &= (col >= lo) & (col <= hi)
    denom = np.ones(x.shape[0])
    for row, col in ctx.gen_pairs:
        denom *= _occ_fraction(ctx.link, lvals[:, row], x[:, col])
    out = np.zeros(x.shape[0])
    np.divide(1.0, denom, out=out, where=mask & (denom > 0.0))
    return out


# ---------------------------------------------------------------------------
# exact finite-n oracle


def finite_n_word_moment(word: Word, kind: MatrixKind, n: int, eps: float = 0.0) -> MomentEstimate:
    """Exact discrete word contribution at matrix size n (optionally trimmed).

    Enumerates every assignment of the generating vertices over the retained
    index window, keeps those whose dependent vertices stay in the window and
    whose walk closes, and averages the reciprocal product of occurrence
    counts.  This is the zero-error finite-size reference the continuum
    estimates are validated against.
    """
    if n < 1:
        raise InvalidArgumentError("n must be >= 1")
    k = word.k
    if float(n) ** (k + 1) > ENUMERATION_BUDGET:
        raise ResourceLimitError(
            f"finite-n enumeration n^(k+1) = {n}^{k + 1} exceeds {ENUMERATION_BUDGET:.0e}"
        )
    ctx = _WordContext(word, kind)
    link = kind.link
    if eps == 0.0:
        lo_i, hi_i = 1, n
    elif link is MatrixKind.T:
        lo_i, hi_i = 1, int(math.ceil(n * (1.0 - eps) - 1e-9))
    else:
        trim = int(math.floor(n * eps / 2.0 + 1e-9))
        lo_i, hi_i = trim + 1, n - trim
    win = hi_i - lo_i + 1
    if win < 1:
        raise InvalidArgumentError(f"eps={eps} leaves no indices at n={n}")

    dims = (win,) * (k + 1)
    total = win ** (k + 1)
    coeffs_t = ctx.coeffs.T
    acc = 0.0
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        x = np.column_stack(np.unravel_index(flat, dims)).astype(np.int64) + lo_i
        lvals = x @ coeffs_t
        mask = lvals[:, -1] == x[:, 0]  # circuit closure
        for i in ctx.dependent:
            col = lvals[:, i]
            mask &= (col >= lo_i) & (col <= hi_i)
        if not mask.any():
            continue
        xs = x[mask]
        ls = lvals[mask]
        denom = np.ones(xs.shape[0])
        for row, col in ctx.gen_pairs:
            a = ls[:, row]
            b = xs[:, col]
            if link is MatrixKind.T:
                occ = n - np.abs(a - b)
            else:
                occ = np.minimum(a + b - 1, 2 * n - a - b + 1)
            denom *= occ / n
        acc += float(np.sum(1.0 / denom))
    value = acc / float(n) ** (k + 1)
    return MomentEstimate(
        value=value,
        std_error=0.0,
        method=Method.FINITE_N,
        params={"kind": kind.link.value, "n": n, "eps": eps, "window": [lo_i, hi_i]},
        word=word,
    )


# ---------------------------------------------------------------------------
# Monte Carlo on the trimmed box


def _mc_truncated(ctx: _WordContext, eps: float, samples: int, batches: int, seed: int) -> tuple[float, float]:
    lo, hi = _box(ctx.link, eps)
    if eps <= 0.0:
        raise InvalidArgumentError("plain Monte Carlo needs eps > 0 (bounded integrand)")
    per_batch = max(1, int(math.ceil(samples / batches)))
    vol = (hi - lo) ** (ctx.k + 1)
    rng = np.random.Generator(np.random.PCG64(seed))
    means = np.empty(batches)
    for b in range(batches):
        x = rng.uniform(lo, hi, size=(per_batch, ctx.k + 1))
        means[b] = _integrand_on(ctx, x, lo, hi).mean()
    value = float(np.median(means)) * vol
    se = float(np.std(means, ddof=1) / math.sqrt(batches)) * vol if batches > 1 else 0.0
    return value, se


# ---------------------------------------------------------------------------
# graded-mesh tensor quadrature


def _graded_axis(cells: int, grading: float, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Two-point Gauss nodes/weights on a mesh graded toward both endpoints."""
    cells = max(2, cells + (cells % 2))
    half = cells // 2
    w = grading ** np.arange(half - 1, -1, -1, dtype=np.float64)
    w = w / (2.0 * w.sum())
    widths = np.concatenate([w, w[::-1]])
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    edges[-1] = 1.0
    h = np.diff(edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    off = h / (2.0 * math.sqrt(3.0))
    nodes = np.concatenate([centers - off, centers + off])
    weights = np.concatenate([0.5 * h, 0.5 * h])
    order = np.argsort(nodes)
    span = hi - lo
    return lo + span * nodes[order], span * weights[order]


def _quadrature_value(ctx: _WordContext, eps: float, grid: int, grading: float) -> float:
    lo, hi = _box(ctx.link, eps)
    nodes, weights = _graded_axis(grid, grading, lo, hi)
    dim = ctx.k + 1
    if dim == 1:  # pragma: no cover - k >= 1 means dim >= 2
        return float(np.sum(weights * _integrand_on(ctx, nodes[:, None], lo, hi)))
    # cartesian product of the last (dim-1) axes, evaluated per first-axis node
    grids = np.meshgrid(*([nodes] * (dim - 1)), indexing="ij")
    rest = np.column_stack([g.ravel() for g in grids])
    wgrids = np.meshgrid(*([weights] * (dim - 1)), indexing="ij")
    rest_w = np.ones(rest.shape[0])
    for g in wgrids:
        rest_w *= g.ravel()
    total = 0.0
    x = np.empty((rest.shape[0], dim))
    x[:, 1:] = rest
    for j, x0 in enumerate(nodes):
        x[:, 0] = x0
        vals = _integrand_on(ctx, x, lo, hi)
        total += weights[j] * float(np.dot(rest_w, vals))
    return total


# ---------------------------------------------------------------------------
# public per-word estimates


def _analytic_zero(word: Word, kind: MatrixKind, reason: str) -> MomentEstimate:
    return MomentEstimate(
        value=0.0,
        std_error=0.0,
        method=Method.ANALYTIC,
        params={"kind": kind.link.value, "reason": reason},
        word=word,
    )


def truncated_word_moment(
    word: Word,
    kind: MatrixKind,
    eps: float,
    method: str = "mc",
    *,
    samples: int = DEFAULT_SAMPLES,
    batches: int = DEFAULT_BATCHES,
    seed: int = 0,
    grid: int = DEFAULT_GRID,
    grading: float = DEFAULT_GRADING,
) -> MomentEstimate:
    """Word contribution to the eps-trimmed moment (bounded integrand).

    On the trimmed box every occurrence fraction is at least eps, so the
    integrand is bounded by eps^-k and plain Monte Carlo has finite variance.
    """
    if not 0.0 < eps < 1.0:
        raise InvalidArgumentError("eps must lie in (0, 1)")
    ctx = _WordContext(word, kind)
    if ctx.link is MatrixKind.H and not ctx.symmetric:
        return _analytic_zero(word, kind, "non-symmetric Hankel word")
    if method == "mc":
        value, se = _mc_truncated(ctx, eps, samples, batches, seed)
        return MomentEstimate(
            value=value,
            std_error=se,
            method=Method.MC_LADDER,
            params={"kind": ctx.link.value, "eps": eps, "samples": samples, "batches": batches, "seed": seed},
            word=word,
        )
    if method == "quadrature":
        if ctx.k > QUADRATURE_MAX_K:
            raise ResourceLimitError(f"quadrature supports k <= {QUADRATURE_MAX_K}")
        value = _quadrature_value(ctx, eps, grid, grading)
        coarse = _quadrature_value(ctx, eps, max(8, grid // 2), grading)
        return MomentEstimate(
            value=value,
            std_error=abs(value - coarse),
            method=Method.QUADRATURE,
            params={"kind": ctx.link.value, "eps": eps, "grid": grid, "grading": grading},
            word=word,
        )
    raise InvalidArgumentError(f"unknown truncated-moment method {method!r}")


def _ladder_basis(k: int, rung_count: int) -> int:
    """Highest log power in the extrapolation basis, capped by the DOF."""
    return max(1, min(k, rung_count - 2))


def _ladder_extrapolate(rungs: list[tuple[float, float, float]], j_max: int) -> tuple[float, float]:
    """Weighted least-squares intercept of value ~ 1 + sum_j eps*ln(eps)^j.

    The truncation deficit of an order-2k word integral carries terms
    eps*ln(eps)^j up to j = k (the k = 1 case reduces to the closed-form
    shape 2(1 - eps + eps*ln(eps))), so the basis grows with the word order.
    """
    eps = np.array([r[0] for r in rungs])
    y = np.array([r[1] for r in rungs])
    se = np.array([max(r[2], 1e-12) for r in rungs])
    log_eps = np.log(eps)
    cols = [np.ones_like(eps)] + [eps * log_eps**j for j in range(j_max, -1, -1)]
    design = np.column_stack(cols)
    w = 1.0 / se**2
    normal = design.T @ (w[:, None] * design)
    rhs = design.T @ (w * y)
    beta = np.linalg.solve(normal, rhs)
    cov = np.linalg.inv(normal)
    return float(beta[0]), float(math.sqrt(max(cov[0, 0], 0.0)))


def limit_word_moment(
    word: Word,
    kind: MatrixKind,
    method: str = "mc-ladder",
    *,
    eps_ladder: tuple[float, ...] | None = None,
    samples: int = DEFAULT_SAMPLES,
    batches: int = DEFAULT_BATCHES,
    seed: int = 0,
    grid: int = DEFAULT_GRID,
    grading: float = DEFAULT_GRADING,
) -> MomentEstimate:
    """Word contribution to the limiting moment (eps -> 0).

    The default ladder schedule is the 4-rung one for k = 1 and a 6-rung one
    for k >= 2, where the larger extrapolation basis needs the extra degrees
    of freedom.
    """
    ctx = _WordContext(word, kind)
    if eps_ladder is None:
        eps_ladder = EPS_LADDER if word.k == 1 else EPS_LADDER_DEEP
    if ctx.link is MatrixKind.H and not ctx.symmetric:
        return _analytic_zero(word, kind, "non-symmetric Hankel word")
    if method == "quadrature":
        if ctx.k > QUADRATURE_MAX_K:
            raise ResourceLimitError(f"quadrature supports k <= {QUADRATURE_MAX_K}")
        value = _quadrature_value(ctx, 0.0, grid, grading)
        coarse = _quadrature_value(ctx, 0.0, max(8, grid // 2), grading)
        return MomentEstimate(
            value=value,
            std_error=abs(value - coarse),
            method=Method.QUADRATURE,
            params={"kind": ctx.link.value, "grid": grid, "grading": grading},
            word=word,
        )
    if method == "mc-ladder":
        if len(eps_ladder) < 3:
            raise InvalidArgumentError("eps ladder needs at least 3 rungs")
        ladder = []
        for r, eps in enumerate(eps_ladder):
            v, se = _mc_truncated(ctx, eps, samples, batches, derive_seed(seed, r))
            ladder.append((eps, v, se))
        j_max = _ladder_basis(word.k, len(ladder))
        value, se = _ladder_extrapolate(ladder, j_max)
        return MomentEstimate(
            value=value,
            std_error=se,
            method=Method.MC_LADDER,
            params={
                "kind": ctx.link.value,
                "ladder": [{"eps": e, "value": v, "std_error": s} for e, v, s in ladder],
                "raw_last_rung": {"eps": ladder[-1][0], "value": ladder[-1][1], "std_error": ladder[-1][2]},
                "log_powers": j_max,
                "samples": samples,
                "batches": batches,
                "seed": seed,
            },
            word=word,
        )
    raise InvalidArgumentError(f"unknown limit-moment method {method!r}")


# ---------------------------------------------------------------------------
# aggregated moments


def _limit_word_task(args) -> MomentEstimate:
    letters, kind_value, method, kwargs = args
    return limit_word_moment(Word(letters), MatrixKind(kind_value), method, **kwargs)


def limit_moment(
    k: int,
    kind: MatrixKind,
    method: str = "mc-ladder",
    *,
    eps_ladder: tuple[float, ...] | None = None,
    samples: int = DEFAULT_SAMPLES,
    batches: int = DEFAULT_BATCHES,
    seed: int = 0,
    grid: int = DEFAULT_GRID,
    grading: float = DEFAULT_GRADING,
    threads: int | None = 1,
) -> MomentEstimate:
    """Order-2k limiting moment: sum of word contributions with error bars.

    The per-word breakdown (and, for the ladder method, each word's rung
    table) is recorded in ``params['per_word']``.  Words are independent
    tasks with derived seeds, so the result does not depend on ``threads``.
    """
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")
    if eps_ladder is None and method == "mc-ladder":
        eps_ladder = EPS_LADDER if k == 1 else EPS_LADDER_DEEP
    words = enumerate_pair_matched_words(k)
    tasks = []
    for i, w in enumerate(words):
        kwargs = dict(
            eps_ladder=eps_ladder,
            samples=samples,
            batches=batches,
            seed=derive_seed(seed, i),
            grid=grid,
            grading=grading,
        )
        tasks.append((w.letters, kind.value, method, kwargs))
    estimates = parallel_map(_limit_word_task, tasks, workers=threads)
    value = sum(e.value for e in estimates)
    se = math.sqrt(sum(e.std_error**2 for e in estimates))
    per_word = []
    for w, e in zip(words, estimates):
        entry = {
            "word": w.letters,
            "symmetric": is_symmetric(w),
            "value": e.value,
            "std_error": e.std_error,
            "method": e.method.value,
        }
        if "ladder" in e.params:
            entry["ladder"] = e.params["ladder"]
        per_word.append(entry)
    params = {
        "k": k,
        "kind": kind.link.value,
        "words": len(words),
        "per_word": per_word,
        "samples": samples,
        "seed": seed,
    }
    if method == "mc-ladder":
        params["eps_ladder"] = list(eps_ladder)
        params["ladder"] = _aggregate_ladder(per_word, eps_ladder)
    if method == "quadrature":
        params["grid"] = grid
        params["grading"] = grading
    return MomentEstimate(
        value=value,
        std_error=se,
        method=Method.MC_LADDER if method == "mc-ladder" else Method.QUADRATURE,
        params=params,
        word=None,
    )


def _aggregate_ladder(per_word: list[dict], eps_ladder: tuple[float, ...]) -> list[dict]:
    table = []
    for r, eps in enumerate(eps_ladder):
        v = 0.0
        var = 0.0
        for entry in per_word:
            rows = entry.get("ladder")
            if rows is None:
                continue  # analytic zeros contribute nothing
            v += rows[r]["value"]
            var += rows[r]["std_error"] ** 2
        table.append({"eps": eps, "value": v, "std_error": math.sqrt(var)})
    return table


def limit_moment_of_order(
    order: int,
    kind: MatrixKind,
    method: str = "mc-ladder",
    **kwargs,
) -> MomentEstimate:
    """Limiting ESD moment of any order: odd orders vanish identically."""
    if order < 1:
        raise InvalidArgumentError("order must be >= 1")
    if order % 2 == 1:
        return MomentEstimate(
            value=0.0,
            std_error=0.0,
            method=Method.ANALYTIC,
            params={"kind": kind.link.value, "order": order, "reason": "odd moments vanish"},
            word=None,
        )
    est = limit_moment(order // 2, kind, method, **kwargs)
    params = dict(est.params)
    params["order"] = order
    return MomentEstimate(est.value, est.std_error, est.method, params, est.word)


def truncated_moment_bound(k: int, eps: float) -> float:
    """Uniform bound (2k)!/(k! 2^k) * eps^-k on the eps-trimmed order-2k moment."""
    if k < 1 or not 0.0 < eps < 1.0:
        raise InvalidArgumentError("need k >= 1 and eps in (0, 1)")
    pairings = math.factorial(2 * k) // (math.factorial(k) * 2**k)
    return pairings * eps ** (-k)


# ---------------------------------------------------------------------------
# empirical-vs-limit comparison report


@dataclass(frozen=True)
class ComparisonRow:
    order: int
    empirical: float
    empirical_se: float
    limit: float
    limit_se: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ComparisonReport:
    kind: str
    n: int
    reps: int
    dist: str
    seed: int
    rows: list[ComparisonRow]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "reps": self.reps,
            "dist": self.dist,
            "seed": self.seed,
            "rows": [vars(r) for r in self.rows],
            "all_passed": self.all_passed,
        }


def compare_empirical_limit(
    kind: MatrixKind,
    n: int,
    reps: int,
    k_max: int,
    seed: int,
    dist=None,
    *,
    method: str = "mc-ladder",
    samples: int = 200_000,
    threads: int | None = None,
    tol_even: float = 0.05,
    tol_odd: float = 0.1,
) -> ComparisonReport:
    """Averaged empirical ESD moments vs limiting moments, orders 1..2*k_max.

    Even orders are compared relative to the limit value; odd orders are
    checked against an absolute noise threshold (the limit is exactly zero).
    """
    from .experiments import simulate_spectra  # local import avoids a cycle
    from .inputs import Distribution
    from .spectra import moment

    if kind not in (MatrixKind.BT, MatrixKind.BH):
        raise InvalidArgumentError("empirical-vs-limit comparison targets balanced kinds (bt, bh)")
    if reps < 2:
        raise InvalidArgumentError("need reps >= 2 for standard errors")
    dist = dist or Distribution.STANDARD_NORMAL
    spectra = simulate_spectra(kind, dist, n, reps, seed, threads=threads)
    rows = []
    for order in range(1, 2 * k_max + 1):
        values = np.array([moment(s, order) for s in spectra])
        emp = float(values.mean())
        emp_se = float(values.std(ddof=1) / math.sqrt(reps))
        lim = limit_moment_of_order(order, kind, method, samples=samples, seed=derive_seed(seed, 10_000 + order))
        if order % 2 == 1:
            tol = max(tol_odd, 4.0 * emp_se)
            passed = bool(abs(emp) <= tol)
        else:
            tol = max(tol_even * abs(lim.value), 4.0 * math.hypot(emp_se, lim.std_error))
            passed = bool(abs(emp - lim.value) <= tol)
        rows.append(
            ComparisonRow(
                order=order,
                empirical=emp,
                empirical_se=emp_se,
                limit=lim.value,
                limit_se=lim.std_error,
                tolerance=tol,
                passed=passed,
            )
        )
    return ComparisonReport(
        kind=kind.value, n=n, reps=reps, dist=dist.value, seed=seed, rows=rows
    )
