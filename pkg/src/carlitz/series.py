"""Truncated power series F_q[t]/(t^T) and its unit group.

Coefficients are exact; the only approximation is the truncation order T,
and the precision of any binary operation is the min of the operand
precisions.  Series hash and compare by (spec, precision, coefficients),
which is the canonical deduplication key used by the image counting.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, NonUnit, ParseError, SpecMismatch
from .field import FqElem, FqSpec

ENUM_BUDGET_DEFAULT = 10 ** 8

_NP_MUL_MIN_PREC = 16


class TruncSeries:
    """A power series in t over F_q, exact modulo t^prec.

    `exhausted` marks the flagged-zero result of differentiating past the
    available precision; it is metadata and takes no part in equality.
    """

    __slots__ = ("spec", "prec", "_ranks", "exhausted")

    def __init__(self, spec: FqSpec, coeffs: Iterable, prec: int | None = None,
                 *, exhausted: bool = False):
        ranks = []
        for c in coeffs:
            if isinstance(c, FqElem):
                if c.spec.key != spec.key:
                    raise SpecMismatch("coefficient from a different field")
                ranks.append(c.rank)
            else:
                ranks.append(spec.element(c).rank)
        if prec is None:
            prec = len(ranks)
        if prec < 1:
            raise ValueError("precision must be >= 1")
        if len(ranks) < prec:
            ranks.extend([0] * (prec - len(ranks)))
        elif len(ranks) > prec:
            ranks = ranks[:prec]
        self.spec = spec
        self.prec = prec
        self._ranks = tuple(ranks)
        self.exhausted = exhausted

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_ranks(cls, spec, ranks, *, exhausted=False):
        obj = object.__new__(cls)
        obj.spec = spec
        obj.prec = len(ranks)
        obj._ranks = tuple(ranks)
        obj.exhausted = exhausted
        return obj

    @classmethod
    def zero(cls, spec, prec):
        return cls(spec, [], prec)

    @classmethod
    def one(cls, spec, prec):
        return cls(spec, [1], prec)

    @classmethod
    def monomial(cls, spec, i, prec, coeff=1):
        if i >= prec:
            raise ValueError("monomial degree beyond precision")
        ranks = [0] * prec
        ranks[i] = spec.element(coeff).rank
        return cls.from_ranks(spec, ranks)

    # -- accessors --------------------------------------------------------------

    @property
    def coeffs(self):
        return tuple(FqElem(self.spec, r) for r in self._ranks)

    @property
    def ranks(self):
        return self._ranks

    def coeff(self, i) -> FqElem:
        return FqElem(self.spec, self._ranks[i])

    def eval0(self) -> FqElem:
        """Value at t = 0."""
        return FqElem(self.spec, self._ranks[0])

    @property
    def is_unit(self) -> bool:
        return self._ranks[0] != 0

    def key(self):
        return (self.spec.key, self.prec, self._ranks)

    def truncate(self, prec: int) -> "TruncSeries":
        if prec > self.prec:
            raise ValueError("cannot raise precision by truncation")
        if prec == self.prec:
            return self
        return TruncSeries.from_ranks(self.spec, self._ranks[:prec])

    # -- arithmetic ---------------------------------------------------------------

    def _common(self, other):
        if not isinstance(other, TruncSeries):
            raise SpecMismatch(f"expected a series, got {type(other).__name__}")
        if other.spec.key != self.spec.key:
            raise SpecMismatch("mixed field specs")
        return min(self.prec, other.prec)

    def __add__(self, other):
        prec = self._common(other)
        add = self.spec.tables[0]
        return TruncSeries.from_ranks(
            self.spec, [add[a][b] for a, b in zip(self._ranks[:prec], other._ranks[:prec])]
        )

    def __sub__(self, other):
        prec = self._common(other)
        add, _, neg, _, _ = self.spec.tables
        return TruncSeries.from_ranks(
            self.spec,
            [add[a][neg[b]] for a, b in zip(self._ranks[:prec], other._ranks[:prec])],
        )

    def __neg__(self):
        neg = self.spec.tables[2]
        return TruncSeries.from_ranks(self.spec, [neg[a] for a in self._ranks])

    def scale(self, c) -> "TruncSeries":
        """Multiply by a scalar (an FqElem, or an int residue mod p)."""
        r = self.spec.element(c).rank if not isinstance(c, FqElem) else c.rank
        if isinstance(c, FqElem) and c.spec.key != self.spec.key:
            raise SpecMismatch("scalar from a different field")
        row = self.spec.tables[1][r]
        return TruncSeries.from_ranks(self.spec, [row[a] for a in self._ranks])

    def __mul__(self, other):
        if isinstance(other, (FqElem, int)):
            return self.scale(other)
        prec = self._common(other)
        if prec >= _NP_MUL_MIN_PREC:
            return TruncSeries.from_ranks(
                self.spec, _mul_ranks_np(self.spec, self._ranks, other._ranks, prec)
            )
        add, mul = self.spec.tables[0], self.spec.tables[1]
        out = [0] * prec
        xr, yr = self._ranks, other._ranks
        for i in range(prec):
            a = xr[i]
            if a:
                row = mul[a]
                for j in range(prec - i):
                    b = yr[j]
                    if b:
                        out[i + j] = add[out[i + j]][row[b]]
        return TruncSeries.from_ranks(self.spec, out)

    def __rmul__(self, other):
        if isinstance(other, (FqElem, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = TruncSeries.one(self.spec, self.prec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse mod t^prec; requires a unit constant term."""
        if self._ranks[0] == 0:
            raise NonUnit("series has zero constant term")
        add, mul, neg, _, _ = self.spec.tables
        c = self.spec.inv_rank(self._ranks[0])
        out = [0] * self.prec
        out[0] = c
        xr = self._ranks
        for n in range(1, self.prec):
            acc = 0
            for i in range(1, n + 1):
                a = xr[i]
                if a:
                    acc = add[acc][mul[a][out[n - i]]]
            out[n] = mul[neg[acc]][c]
        return TruncSeries.from_ranks(self.spec, out)

    # -- comparison -----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"TruncSeries({render_series(self)!r}, prec={self.prec}, q={self.spec.q})"


def _np_digit_matrix(spec):
    cache = spec._np_tables
    if cache is None:
        p, e, q = spec.p, spec.e, spec.q
        digits = np.empty((q, e), dtype=np.int64)
        for r in range(q):
            digits[r] = spec.decode(r)
        xd = np.array(spec.xd_rows, dtype=np.int64) if e > 1 else None
        weights = np.array([p ** i for i in range(e)], dtype=np.int64)
        cache = spec._np_tables = (digits, xd, weights)
    return cache


def _mul_ranks_np(spec, xr, yr, prec):
    """Exact truncated product via componentwise integer convolution."""
    p, e = spec.p, spec.e
    if e == 1:
        a = np.asarray(xr[:prec], dtype=np.int64)
        b = np.asarray(yr[:prec], dtype=np.int64)
        c = np.convolve(a, b)[:prec] % p
        return [int(v) for v in c]
    digits, xd, weights = _np_digit_matrix(spec)
    X = digits[np.asarray(xr[:prec])]
    Y = digits[np.asarray(yr[:prec])]
    # component d of the product polynomial in the basis variable, d < 2e-1
    comp = [np.zeros(prec, dtype=np.int64) for _ in range(2 * e - 1)]
    for i in range(e):
        xi = X[:, i]
        if not xi.any():
            continue
        for j in range(e):
            yj = Y[:, j]
            if yj.any():
                comp[i + j] += np.convolve(xi, yj)[:prec]
    res = [comp[m] for m in range(e)]
    for d in range(e, 2 * e - 1):
        row = xd[d - e]
        for m in range(e):
            if row[m]:
                res[m] = res[m] + row[m] * comp[d]
    ranks = np.zeros(prec, dtype=np.int64)
    for m in range(e):
        ranks += (res[m] % p) * weights[m]
    return [int(v) for v in ranks]


class UnitClass:
    """A truncated series with invertible constant term."""

    __slots__ = ("series",)

    def __init__(self, series: TruncSeries):
        if not series.is_unit:
            raise NonUnit("constant term is zero")
        self.series = series

    def inverse(self) -> TruncSeries:
        return self.series.inverse()

    def __eq__(self, other):
        if isinstance(other, UnitClass):
            return self.series == other.series
        return NotImplemented

    def __hash__(self):
        return hash(("unit", self.series.key()))

    def __repr__(self):
        return f"UnitClass({render_series(self.series)!r})"


def as_series(a) -> TruncSeries:
    return a.series if isinstance(a, UnitClass) else a


def unit_count(q: int, prec: int) -> int:
    return (q - 1) * q ** (prec - 1)


def unit_enumerate(spec: FqSpec, prec: int, *, budget: int = ENUM_BUDGET_DEFAULT,
                   prefix: Sequence[int] | None = None) -> Iterator[UnitClass]:
    """All units of F_q[t]/(t^prec), lexicographic in the coefficient ranks.

    `prefix` pins the leading coefficient ranks, which partitions the
    enumeration into disjoint, jointly exhaustive slices for parallel runs.
    """
    if prec < 1:
        raise ValueError("precision must be >= 1")
    total = unit_count(spec.q, prec)
    if total > budget:
        raise BudgetExceeded(f"{total} units exceed budget {budget}")
    q = spec.q
    ranges = [range(1, q)] + [range(q)] * (prec - 1)
    if prefix is not None:
        if len(prefix) > prec:
            raise ValueError("prefix longer than precision")
        for i, r in enumerate(prefix):
            if r not in ranges[i]:
                raise ValueError(f"prefix rank {r} invalid at position {i}")
            ranges[i] = (r,)

    def gen():
        for tup in itertools.product(*ranges):
            yield UnitClass(TruncSeries.from_ranks(spec, tup))

    return gen()


# ---------------------------------------------------------------------------
# text literals: c0+c1*t+c2*t^2+..., integer coefficients in prime fields and
# bracketed coefficient vectors [c0,...,c_{e-1}] in extension fields
# ---------------------------------------------------------------------------

def render_fq(x: FqElem) -> str:
    return str(x)


def render_series(f: TruncSeries) -> str:
    parts = []
    for i, r in enumerate(f._ranks):
        if r == 0:
            continue
        c = str(FqElem(f.spec, r))
        if i == 0:
            parts.append(c)
        else:
            base = "t" if i == 1 else f"t^{i}"
            parts.append(base if r == 1 else f"{c}*{base}")
    return "+".join(parts) if parts else "0"


def _parse_coeff(spec, text):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(f"unterminated coefficient vector {text!r}")
        try:
            coeffs = [int(c) for c in text[1:-1].split(",")]
        except ValueError as exc:
            raise ParseError(f"bad coefficient vector {text!r}") from exc
        if len(coeffs) != spec.e:
            raise ParseError(
                f"coefficient vector {text!r} needs exactly {spec.e} entries"
            )
        return spec.encode(coeffs)
    try:
        v = int(text)
    except ValueError as exc:
        raise ParseError(f"bad coefficient {text!r}") from exc
    return v % spec.p


def _parse_term(spec, term):
    if "*" in term:
        coeff_text, _, power_text = term.partition("*")
        rank = _parse_coeff(spec, coeff_text)
    else:
        if term.startswith("t"):
            power_text, rank = term, 1
        else:
            return _parse_coeff(spec, term), 0
        coeff_text = None
    power_text = power_text.strip()
    if power_text == "t":
        return rank, 1
    if power_text.startswith("t^"):
        try:
            power = int(power_text[2:])
        except ValueError as exc:
            raise ParseError(f"bad power in term {term!r}") from exc
        if power < 0:
            raise ParseError(f"negative power in term {term!r}")
        return rank, power
    raise ParseError(f"malformed term {term!r}")


def parse_series(spec: FqSpec, text: str, prec: int) -> TruncSeries:
    """Parse a series literal; terms at or beyond t^prec are discarded."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty series literal")
    ranks = [0] * prec
    if s != "0":
        add = spec.tables[0]
        for term in s.split("+"):
            if not term:
                raise ParseError(f"empty term in literal {text!r}")
            rank, power = _parse_term(spec, term)
            if power < prec:
                ranks[power] = add[ranks[power]][rank]
    return TruncSeries.from_ranks(spec, ranks)
