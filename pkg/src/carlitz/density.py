"""Image orders and densities of the t-adic representations.

The unit a of F_q[[t]] acts on the order-k jet side through the matrix with
rows (a, D^(1)a, ..., D^(k)a); reducing mod t^N gives a finite image whose
order D(N) is counted two independent ways: a literal enumeration of all
units mod t^(N+k) (entries of the jet mod t^N read nothing beyond that),
and a closed form counting which coefficients of a beyond t^(N-1) the jet
still pins down.  D(N) is always of the structural form unit * q^E and is
kept that way; only display ever touches a floating-point logarithm.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .binomials import binom_mod_p
from .errors import (
    BudgetExceeded,
    CrossCheckMismatch,
    InsufficientPrecision,
    MalformedOrder,
    NonUnit,
)
from .field import FqSpec
from .jets import JetMatrix, jet
from .series import (
    ENUM_BUDGET_DEFAULT,
    TruncSeries,
    as_series,
    unit_count,
    unit_enumerate,
)

DEFAULT_SEED = 1729
LINALG_BUDGET_DEFAULT = 10 ** 7
EXHAUSTIVE_LIMIT_DEFAULT = 10 ** 5

_MERGE_ROW_LIMIT = 1 << 21


@dataclass(frozen=True)
class DensityProblem:
    """One table instance: a field, a jet order or tensor degree, a range of N.

    `kind` is "prolongation" (param = k) or "tensor" (param = d).  The
    enumeration budget is validated up front by run().
    """

    spec: FqSpec
    kind: str
    param: int
    n_max: int
    mode: str = "both"
    budget: int = ENUM_BUDGET_DEFAULT
    threads: int = 1
    seed: int = DEFAULT_SEED

    def run(self) -> "ImageTable":
        if self.kind == "prolongation":
            return build_density_table(
                self.spec, self.param, self.n_max, self.mode,
                threads=self.threads, budget=self.budget, seed=self.seed,
            )
        if self.kind == "tensor":
            return build_tensor_table(
                self.spec, self.param, self.n_max, self.mode,
                budget=self.budget, threads=self.threads, seed=self.seed,
            )
        raise ValueError(f"unknown problem kind {self.kind!r}")


def galois_rep(a, k: int, n: int) -> JetMatrix:
    """The jet matrix of a unit a, reduced mod t^n.

    Needs a known to precision n+k; the result has unit diagonal, i.e. it
    lies in the Toeplitz group of the corresponding order.
    """
    s = as_series(a)
    if not s.is_unit:
        raise NonUnit("representation is defined on units only")
    if s.prec < n + k:
        raise InsufficientPrecision(
            f"unit precision {s.prec} below required {n + k}"
        )
    return jet(k, s.truncate(n + k), prec=n)


# ---------------------------------------------------------------------------
# brute-force image counting (vectorized enumeration core)
# ---------------------------------------------------------------------------

_SCALAR_TABLES: dict = {}


def _np_scalar_table(spec):
    tab = _SCALAR_TABLES.get(spec.key)
    if tab is None:
        tab = np.empty((spec.p, spec.q), dtype=np.uint8)
        for c in range(spec.p):
            row = spec.tables[1][c]
            tab[c] = row
        _SCALAR_TABLES[spec.key] = tab
    return tab


def _digit_block(q, m, start, stop):
    r = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, m), dtype=np.uint8)
    out[:, 0] = r // q ** (m - 1) + 1
    for j in range(1, m):
        out[:, j] = (r // q ** (m - 1 - j)) % q
    return out


def image_order_brute(spec: FqSpec, k: int, n: int, *,
                      budget: int = ENUM_BUDGET_DEFAULT, threads: int = 1,
                      chunk_size: int = 1 << 16,
                      enum_precision: int | None = None) -> int:
    """Count distinct jet images mod t^n over every unit mod t^(n+k).

    The count is a literal deduplication of coefficient keys, chunked by
    coefficient prefix; chunk results merge by set union, so the answer is
    independent of chunking and thread count.  `enum_precision` may raise
    the enumeration precision above n+k to double-check sufficiency.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    m = n + k if enum_precision is None else enum_precision
    if m < n + k:
        raise InsufficientPrecision(f"enumeration precision {m} below n+k={n + k}")
    q = spec.q
    total = unit_count(q, m)
    if total > budget:
        raise BudgetExceeded(f"{total} units exceed budget {budget}")
    scal = _np_scalar_table(spec)
    coeff = [[binom_mod_p(i + j, j, spec.p) for i in range(n)] for j in range(k + 1)]

    def run(start):
        stop = min(start + chunk_size, total)
        block = _digit_block(q, m, start, stop)
        out = np.empty((stop - start, (k + 1) * n), dtype=np.uint8)
        for j in range(k + 1):
            for i in range(n):
                out[:, j * n + i] = scal[coeff[j][i], block[:, i + j]]
        return np.unique(out, axis=0)

    starts = range(0, total, chunk_size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(run, starts)
            parts, acc = [], 0
            for part in results:
                parts.append(part)
                acc += len(part)
                if acc > _MERGE_ROW_LIMIT:
                    parts = [np.unique(np.vstack(parts), axis=0)]
                    acc = len(parts[0])
    else:
        parts, acc = [], 0
        for start in starts:
            part = run(start)
            parts.append(part)
            acc += len(part)
            if acc > _MERGE_ROW_LIMIT:
                parts = [np.unique(np.vstack(parts), axis=0)]
                acc = len(parts[0])
    merged = parts[0] if len(parts) == 1 else np.unique(np.vstack(parts), axis=0)
    return int(merged.shape[0])


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

def extra_indices(p: int, k: int, n: int) -> list[int]:
    """Coefficient indices in [n, n+k-1] still pinned by the jet mod t^n.

    The jet entry in row j at t^(l-j) is C(l, j) a_l, so a_l with l >= n is
    visible exactly when C(l, j) != 0 mod p for some j with l-n+1 <= j <= k.
    """
    out = []
    for l in range(n, n + k):
        if any(binom_mod_p(l, j, p) for j in range(l - n + 1, k + 1)):
            out.append(l)
    return out


def image_order_formula(spec: FqSpec, k: int, n: int) -> int:
    """D(N) = (q-1) q^(N-1+m) with m the number of extra pinned indices."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return (spec.q - 1) * spec.q ** (n - 1 + len(extra_indices(spec.p, k, n)))


def factor_structured_order(value: int, q: int, unit: int) -> int:
    """Write value = unit * q^E and return E; anything else is malformed."""
    if value <= 0 or unit <= 0 or value % unit:
        raise MalformedOrder(f"{value} is not {unit} * q^E")
    rest = value // unit
    e = 0
    while rest % q == 0:
        rest //= q
        e += 1
    if rest != 1:
        raise MalformedOrder(f"{value} is not {unit} * q^E")
    return e


# ---------------------------------------------------------------------------
# density bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityEstimate:
    """log_q(unit * q^E) / (N * dim), kept as the exact pair (E, unit)."""

    q: int
    unit: int
    exponent: int
    denominator: int

    @property
    def rational(self) -> Fraction:
        """The exact q-exponent component E / (N * dim)."""
        return Fraction(self.exponent, self.denominator)

    @property
    def real(self) -> float:
        log_unit = 0.0 if self.unit == 1 else math.log(self.unit, self.q)
        return (self.exponent + log_unit) / self.denominator


def density_estimate(q: int, dim: int, n: int, unit: int, exponent: int) -> DensityEstimate:
    return DensityEstimate(q=q, unit=unit, exponent=exponent, denominator=n * dim)


def density_bounds(k: int, n: int, q: int) -> tuple[Fraction, Fraction]:
    """Bounds for the exponent component of the order-k density estimate.

    (q-1) q^(N-1) <= D(N) <= (q-1) q^(N+k-1) sandwiches the exponent E in
    [N-1, N+k-1]; the full estimate adds log_q(q-1)/(N(k+1)) in [0, 1/(N(k+1))).
    """
    den = n * (k + 1)
    return Fraction(n - 1, den), Fraction(n + k - 1, den)


def torsion_level_m(p: int, n: int, k: int) -> int:
    """The largest Carlitz torsion level reached by order-k level-n torsion.

    Level l is reached when C(l, j) != 0 mod p for some j with
    max(0, l-n) <= j <= min(k, l).  The achieved levels must form an initial
    segment 0..m with n <= m <= n+k; any violation would falsify the
    combinatorics this rests on and raises SegmentViolation.
    """
    from .errors import SegmentViolation

    def achieved(l):
        return any(
            binom_mod_p(l, j, p)
            for j in range(max(0, l - n), min(k, l) + 1)
        )

    levels = [l for l in range(n + k + 1) if achieved(l)]
    m = max(levels)
    if levels != list(range(m + 1)):
        raise SegmentViolation(
            f"achieved levels {levels} are not an initial segment (p={p}, n={n}, k={k})"
        )
    if not n <= m <= n + k:
        raise SegmentViolation(f"level m={m} outside [{n}, {n + k}]")
    return m


# ---------------------------------------------------------------------------
# Carlitz tensor powers
# ---------------------------------------------------------------------------

def tensor_decompose(d: int, p: int) -> tuple[int, int]:
    """d = p^e * d' with d' prime to p; returns (e, d')."""
    if d < 1:
        raise ValueError("tensor degree must be >= 1")
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return e, d


def tensor_unit_part(q: int, d_prime: int) -> int:
    """The number of d'-th powers in F_q^x."""
    return (q - 1) // gcd(d_prime, q - 1)


def tensor_image_order_formula(spec: FqSpec, d: int, n: int) -> int:
    """D(N) = w * q^floor((N-1)/p^e) for the d-th tensor power action."""
    e, dp = tensor_decompose(d, spec.p)
    w = tensor_unit_part(spec.q, dp)
    return w * spec.q ** ((n - 1) // spec.p ** e)


def tensor_image_order_brute(spec: FqSpec, d: int, n: int, *,
                             budget: int = ENUM_BUDGET_DEFAULT,
                             threads: int = 1) -> int:
    """Count distinct d-th powers a^d mod t^n over all units mod t^n.

    Partitioned by the leading coefficient; partition counts merge by set
    union, so the result is independent of the thread count.
    """
    if unit_count(spec.q, n) > budget:
        raise BudgetExceeded(
            f"{unit_count(spec.q, n)} units exceed budget {budget}"
        )

    def run(lead):
        part = set()
        for u in unit_enumerate(spec, n, budget=budget, prefix=(lead,)):
            part.add((u.series ** d).ranks)
        return part

    leads = range(1, spec.q)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, leads))
    else:
        parts = [run(lead) for lead in leads]
    return len(set().union(*parts))


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass
class ImageRow:
    n: int
    d_brute: int | None
    d_formula: int | None
    extra_m: int
    delta_num: int
    delta_den: int
    delta_real: float


@dataclass
class ImageTable:
    """Per-N image orders and density estimates for one problem instance."""

    kind: str               # "prolongation" | "tensor"
    q: int
    p: int
    e: int
    param: int              # k for prolongations, d for tensor powers
    mode: str
    seed: int
    dim: int
    unit: int
    rows: list[ImageRow]

    def estimate(self, row: "ImageRow") -> "DensityEstimate":
        return DensityEstimate(q=self.q, unit=self.unit,
                               exponent=row.delta_num, denominator=row.delta_den)

    def header_dict(self):
        key = "k" if self.kind == "prolongation" else "d"
        return {
            "q": self.q,
            "p": self.p,
            "e": self.e,
            key: self.param,
            "mode": self.mode,
            "seed": self.seed,
        }

    def to_csv_text(self) -> str:
        lines = ["N,D_brute,D_formula,extra_m,delta_hat_num,delta_hat_den,delta_hat_real"]
        for r in self.rows:
            lines.append(
                f"{r.n},"
                f"{'' if r.d_brute is None else r.d_brute},"
                f"{'' if r.d_formula is None else r.d_formula},"
                f"{r.extra_m},{r.delta_num},{r.delta_den},{r.delta_real!r}"
            )
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        import json

        obj = {
            "header": self.header_dict(),
            "rows": [
                {
                    "N": r.n,
                    "D_brute": r.d_brute,
                    "D_formula": r.d_formula,
                    "extra_m": r.extra_m,
                    "delta_hat_num": r.delta_num,
                    "delta_hat_den": r.delta_den,
                    "delta_hat_real": r.delta_real,
                }
                for r in self.rows
            ],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _table_row(n, dim, q, unit, brute, formula):
    value = formula if formula is not None else brute
    exponent = factor_structured_order(value, q, unit)
    est = density_estimate(q, dim, n, unit, exponent)
    return ImageRow(
        n=n,
        d_brute=brute,
        d_formula=formula,
        extra_m=exponent - (n - 1),
        delta_num=exponent,
        delta_den=est.denominator,
        delta_real=est.real,
    )


def build_density_table(spec: FqSpec, k: int, n_max: int, mode: str = "both", *,
                        threads: int = 1, budget: int = ENUM_BUDGET_DEFAULT,
                        seed: int = DEFAULT_SEED) -> ImageTable:
    """Image orders for the order-k jet action, N = 1..n_max.

    In mode "both" every row is cross-checked; the first disagreement
    raises CrossCheckMismatch.
    """
    if mode not in ("brute", "formula", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "formula":
        # fail fast on the largest row instead of grinding up to it
        worst = unit_count(spec.q, n_max + k)
        if worst > budget:
            raise BudgetExceeded(
                f"row N={n_max} needs {worst} units, over budget {budget}"
            )
    rows = []
    for n in range(1, n_max + 1):
        brute = formula = None
        if mode in ("formula", "both"):
            formula = image_order_formula(spec, k, n)
        if mode in ("brute", "both"):
            brute = image_order_brute(spec, k, n, budget=budget, threads=threads)
        if mode == "both" and brute != formula:
            raise CrossCheckMismatch(n, brute, formula)
        rows.append(_table_row(n, k + 1, spec.q, spec.q - 1, brute, formula))
    return ImageTable(
        kind="prolongation", q=spec.q, p=spec.p, e=spec.e, param=k,
        mode=mode, seed=seed, dim=k + 1, unit=spec.q - 1, rows=rows,
    )


def build_tensor_table(spec: FqSpec, d: int, n_max: int, mode: str = "both", *,
                       budget: int = ENUM_BUDGET_DEFAULT, threads: int = 1,
                       seed: int = DEFAULT_SEED) -> ImageTable:
    """Image orders for the d-th tensor power action, N = 1..n_max."""
    if mode not in ("brute", "formula", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode != "formula" and unit_count(spec.q, n_max) > budget:
        raise BudgetExceeded(
            f"row N={n_max} needs {unit_count(spec.q, n_max)} units, over budget {budget}"
        )
    e, dp = tensor_decompose(d, spec.p)
    w = tensor_unit_part(spec.q, dp)
    rows = []
    for n in range(1, n_max + 1):
        brute = formula = None
        if mode in ("formula", "both"):
            formula = tensor_image_order_formula(spec, d, n)
        if mode in ("brute", "both"):
            brute = tensor_image_order_brute(spec, d, n, budget=budget,
                                             threads=threads)
        if mode == "both" and brute != formula:
            raise CrossCheckMismatch(n, brute, formula)
        rows.append(_table_row(n, 1, spec.q, w, brute, formula))
    return ImageTable(
        kind="tensor", q=spec.q, p=spec.p, e=spec.e, param=d,
        mode=mode, seed=seed, dim=1, unit=w, rows=rows,
    )


# ---------------------------------------------------------------------------
# group law sanity and the relation-freeness certificate
# ---------------------------------------------------------------------------

def motivic_group_check(spec: FqSpec, k: int, *, prec: int = 6, samples: int = 25,
                        seed: int = DEFAULT_SEED) -> bool:
    """Exercise the Toeplitz group law on random unit-diagonal jets.

    Checks closure of products and inverses (unit diagonal throughout, k+1
    free rows), associativity on triples, the identity element, and that
    jet images of random units land inside the group.
    """
    rng = random.Random(seed)
    q = spec.q

    def random_jet():
        rows = [TruncSeries.from_ranks(
            spec, [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(prec - 1)]
        )]
        for _ in range(k):
            rows.append(TruncSeries.from_ranks(
                spec, [rng.randrange(q) for _ in range(prec)]
            ))
        return JetMatrix(rows)

    ident = JetMatrix.identity(spec, k, prec)
    mats = [random_jet() for _ in range(samples)]
    for a in mats:
        if len(a.rows) != k + 1:
            return False
        inv = a.inverse()
        if not inv.is_invertible or a * inv != ident:
            return False
        if a * ident != a or ident * a != a:
            return False
    for i in range(0, samples - 2, 3):
        a, b, c = mats[i], mats[i + 1], mats[i + 2]
        ab = a * b
        if not ab.is_invertible:
            return False
        if (ab) * c != a * (b * c):
            return False
    for _ in range(samples):
        ranks = [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(prec + k - 1)]
        img = galois_rep(TruncSeries.from_ranks(spec, ranks), k, prec)
        if not img.is_invertible or len(img.rows) != k + 1:
            return False
    return True


@dataclass
class ZariskiReport:
    full_rank: bool
    rank: int
    n_columns: int
    n_units: int
    k: int
    deg_bound: int
    tdeg_bound: int
    n: int
    seed: int
    sampled: bool


def _monomials(n_vars, deg_bound):
    """Exponent vectors with total degree <= deg_bound, lexicographic."""
    import itertools

    out = [
        m for m in itertools.product(range(deg_bound + 1), repeat=n_vars)
        if sum(m) <= deg_bound
    ]
    return sorted(out)


def zariski_rank_certificate(spec: FqSpec, k: int, deg_bound: int, tdeg_bound: int,
                             n: int, *, seed: int = DEFAULT_SEED,
                             exhaustive_limit: int = EXHAUSTIVE_LIMIT_DEFAULT,
                             sample_count: int = 512,
                             budget: int = LINALG_BUDGET_DEFAULT,
                             units: Sequence | None = None) -> ZariskiReport:
    """Certify that no low-degree relation annihilates all jet tuples mod t^n.

    A candidate relation is P = sum c_{m,s} t^s X^m over monomials X^m in
    the k+1 variables (total degree <= deg_bound) and t-degrees s <=
    tdeg_bound, with unknown F_q coefficients.  Evaluating X_j at D^(j)a and
    reading off the n t-coefficients is linear in the c_{m,s}; a kernel
    vector of this map is exactly a relation vanishing on every sampled
    unit, so full column rank certifies that no relation within the bounds
    exists.  Unit sets are exhaustive below `exhaustive_limit`, else sampled
    reproducibly from `seed`.
    """
    monos = _monomials(k + 1, deg_bound)
    columns = [(m, s) for m in monos for s in range(tdeg_bound + 1)]
    n_cols = len(columns)
    if n_cols * n > budget:
        raise BudgetExceeded(f"{n_cols} columns x {n} rows exceeds budget {budget}")
    q = spec.q
    prec = n + k
    sampled = False
    if units is not None:
        unit_list = [as_series(u) for u in units]
    elif unit_count(q, prec) <= exhaustive_limit:
        unit_list = [u.series for u in unit_enumerate(spec, prec)]
    else:
        sampled = True
        rng = random.Random(seed)
        unit_list = [
            TruncSeries.from_ranks(
                spec, [rng.randrange(1, q)] + [rng.randrange(q) for _ in range(prec - 1)]
            )
            for _ in range(sample_count)
        ]

    add, mul, neg, _, _ = spec.tables
    pivots: dict[int, list[int]] = {}
    rank = 0
    one_col = TruncSeries.one(spec, n)
    for a in unit_list:
        rows_jet = galois_rep(a, k, n).rows
        powers = []
        for v in rows_jet:
            pw = [one_col, v]
            for _ in range(2, deg_bound + 1):
                pw.append(pw[-1] * v)
            powers.append(pw)
        evals = []
        for m in monos:
            acc = one_col
            for j, mj in enumerate(m):
                if mj:
                    acc = acc * powers[j][mj]
            evals.append(acc.ranks)
        for i in range(n):
            row = [0] * n_cols
            for c in range(n_cols):
                s = columns[c][1]
                if i >= s:
                    row[c] = evals[c // (tdeg_bound + 1)][i - s]
            # Gaussian reduction against current pivots
            lead = None
            for col in range(n_cols):
                if row[col]:
                    if col in pivots:
                        f = neg[row[col]]
                        prow = pivots[col]
                        for cc in range(col, n_cols):
                            if prow[cc]:
                                row[cc] = add[row[cc]][mul[f][prow[cc]]]
                    else:
                        lead = col
                        break
            if lead is not None:
                inv_lead = spec.inv_rank(row[lead])
                pivots[lead] = [mul[inv_lead][x] for x in row]
                rank += 1
                if rank == n_cols:
                    break
        if rank == n_cols:
            break
    return ZariskiReport(
        full_rank=rank == n_cols, rank=rank, n_columns=n_cols,
        n_units=len(unit_list), k=k, deg_bound=deg_bound,
        tdeg_bound=tdeg_bound, n=n, seed=seed, sampled=sampled,
    )
