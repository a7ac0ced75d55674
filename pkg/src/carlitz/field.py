"""Exact arithmetic in the small finite fields F_q, q = p^e.

Elements are stored by their *rank*: the integer sum(c_i * p^i) over the
polynomial-basis coefficients (c_0, ..., c_{e-1}).  Rank 0 is zero, ranks
below p are the prime-field constants, and enumeration order is ascending
rank.  All arithmetic runs through per-spec lookup tables, which keeps the
hot enumeration loops free of object overhead.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .errors import (
    DivisionByZero,
    InvalidCharacteristic,
    ParseError,
    SpecMismatch,
    UnsupportedOrder,
)

ORDER_BOUND_DEFAULT = 256

# Built-in monic irreducible defining polynomials, low-to-high coefficients.
_BUILTIN_POLYS = {
    4: (2, (1, 1, 1)),          # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),       # x^3 + x + 1
    9: (3, (1, 0, 1)),          # x^2 + 1
    16: (2, (1, 1, 0, 0, 1)),   # x^4 + x + 1
    25: (5, (2, 0, 1)),         # x^2 + 2
    27: (3, (1, 2, 0, 1)),      # x^3 + 2x + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p, used only for spec validation and
# one-time table construction
# ---------------------------------------------------------------------------

def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        if c:
            for i, y in enumerate(m):
                a[shift + i] = (a[shift + i] - c * y) % p
        _ptrim(a)
        if not a:
            break
    return a


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, n, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while n:
        if n & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        n >>= 1
    return result


def _is_irreducible(poly, p):
    """Rabin's test for a monic polynomial over F_p."""
    e = len(poly) - 1
    if e < 1 or poly[-1] != 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    # x^(p^d) mod poly, iterating the p-power map d times
    def xq_power(d):
        r = list(x)
        for _ in range(d):
            r = _ppowmod(r, p, poly, p)
        return r

    prime_divs = set()
    m = e
    d = 2
    while d * d <= m:
        while m % d == 0:
            prime_divs.add(d)
            m //= d
        d += 1
    if m > 1:
        prime_divs.add(m)
    for r in prime_divs:
        h = xq_power(e // r)
        diff = list(h)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(_ptrim(diff), poly, p)
        if len(g) != 1:
            return False
    h = xq_power(e)
    diff = list(h)
    while len(diff) < 2:
        diff.append(0)
    diff[1] = (diff[1] - 1) % p
    return not _ptrim(diff)


# ---------------------------------------------------------------------------
# field spec
# ---------------------------------------------------------------------------

class FqSpec:
    """Description of F_q, q = p^e: characteristic, degree, defining polynomial.

    The defining polynomial must be monic of degree e over F_p and
    irreducible; both are checked at construction.
    """

    def __init__(self, p: int, e: int, defining_poly: Sequence[int] | None = None,
                 *, order_bound: int = ORDER_BOUND_DEFAULT):
        if not is_prime(p):
            raise InvalidCharacteristic(f"p={p} is not prime")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > order_bound:
            raise UnsupportedOrder(f"q={q} exceeds the configured bound {order_bound}")
        if defining_poly is None:
            if e == 1:
                defining_poly = (0, 1)
            elif q in _BUILTIN_POLYS:
                defining_poly = _BUILTIN_POLYS[q][1]
            else:
                raise UnsupportedOrder(
                    f"no built-in defining polynomial for q={q}; supply one"
                )
        poly = tuple(c % p for c in defining_poly)
        if len(poly) != e + 1 or poly[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree e")
        if not _is_irreducible(list(poly), p):
            raise ValueError(f"defining polynomial {poly} is reducible over F_{p}")
        self.p = p
        self.e = e
        self.q = q
        self.defining_poly = poly
        self._tables = None
        self._np_tables = None

    @property
    def key(self):
        return (self.p, self.e, self.defining_poly)

    def __eq__(self, other):
        return isinstance(other, FqSpec) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FqSpec(q={self.q})"

    # -- rank <-> coefficient encoding --------------------------------------

    def decode(self, rank: int):
        p = self.p
        return tuple((rank // p ** i) % p for i in range(self.e))

    def encode(self, coeffs) -> int:
        p = self.p
        r = 0
        for i, c in enumerate(coeffs):
            r += (c % p) * p ** i
        return r

    # -- tables --------------------------------------------------------------

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        # coefficient rows of x^d mod defining_poly for d in [e, 2e-1)
        xd_rows = []
        cur = [(-c) % p for c in self.defining_poly[:e]]
        xd_rows.append(tuple(cur))
        for _ in range(e + 1, 2 * e - 1):
            carry = cur[-1]
            nxt = [0] + cur[:-1]
            if carry:
                for m in range(e):
                    nxt[m] = (nxt[m] + carry * xd_rows[0][m]) % p
            cur = nxt
            xd_rows.append(tuple(cur))

        def raw_mul(r1, r2):
            a, b = self.decode(r1), self.decode(r2)
            tmp = [0] * (2 * e - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        tmp[i + j] = (tmp[i + j] + x * y) % p
            res = list(tmp[:e])
            for d in range(e, 2 * e - 1):
                c = tmp[d]
                if c:
                    row = xd_rows[d - e]
                    for m in range(e):
                        res[m] = (res[m] + c * row[m]) % p
            return self.encode(res)

        add = [[0] * q for _ in range(q)]
        for r1 in range(q):
            a = self.decode(r1)
            for r2 in range(r1, q):
                b = self.decode(r2)
                s = self.encode((x + y) % p for x, y in zip(a, b))
                add[r1][r2] = s
                add[r2][r1] = s
        mul = [[0] * q for _ in range(q)]
        for r1 in range(1, q):
            for r2 in range(r1, q):
                v = raw_mul(r1, r2)
                mul[r1][r2] = v
                mul[r2][r1] = v
        neg = [self.encode((-c) % p for c in self.decode(r)) for r in range(q)]
        inv = [0] * q
        for r in range(1, q):
            if inv[r]:
                continue
            row = mul[r]
            for s in range(1, q):
                if row[s] == 1:
                    inv[r] = s
                    inv[s] = r
                    break
        self._tables = (add, mul, neg, inv, xd_rows)
        return self._tables

    @property
    def tables(self):
        return self._tables or self._build_tables()

    def add_rank(self, r1, r2):
        return self.tables[0][r1][r2]

    def mul_rank(self, r1, r2):
        return self.tables[1][r1][r2]

    def neg_rank(self, r):
        return self.tables[2][r]

    def inv_rank(self, r):
        if r == 0:
            raise DivisionByZero("inversion of zero")
        return self.tables[3][r]

    def sub_rank(self, r1, r2):
        t = self.tables
        return t[0][r1][t[2][r2]]

    def pow_rank(self, r, n):
        if n < 0:
            r = self.inv_rank(r)
            n = -n
        out = 1
        mul = self.tables[1]
        while n:
            if n & 1:
                out = mul[out][r]
            r = mul[r][r]
            n >>= 1
        return out

    @property
    def xd_rows(self):
        return self.tables[4]

    # -- element constructors ------------------------------------------------

    def element(self, value) -> "FqElem":
        """Build an element from an int or a coefficient sequence.

        Ints are residues mod p in prime fields; in extension fields an int
        is taken as a rank and must lie in [0, q).
        """
        if isinstance(value, FqElem):
            if value.spec.key != self.key:
                raise SpecMismatch("element from a different field")
            return value
        if isinstance(value, int):
            if self.e == 1:
                return FqElem(self, value % self.p)
            if not 0 <= value < self.q:
                raise ValueError(f"rank {value} out of range for q={self.q}")
            return FqElem(self, value)
        coeffs = tuple(value)
        if len(coeffs) != self.e:
            raise ValueError(f"expected {self.e} coefficients, got {len(coeffs)}")
        return FqElem(self, self.encode(coeffs))

    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    def one(self) -> "FqElem":
        return FqElem(self, 1)

    def from_rank(self, rank: int) -> "FqElem":
        if not 0 <= rank < self.q:
            raise ValueError(f"rank {rank} out of range for q={self.q}")
        return FqElem(self, rank)

    def gen(self) -> "FqElem":
        """The class of x in the polynomial-basis presentation (e >= 2)."""
        if self.e < 2:
            raise ValueError("prime fields have no polynomial generator")
        return FqElem(self, self.p)

    def elements(self) -> Iterator["FqElem"]:
        """All q elements in ascending rank order, starting at zero."""
        for r in range(self.q):
            yield FqElem(self, r)


class FqElem:
    """An element of F_q in polynomial-basis representation."""

    __slots__ = ("spec", "rank")

    def __init__(self, spec: FqSpec, rank: int):
        self.spec = spec
        self.rank = rank

    @property
    def coeffs(self):
        return self.spec.decode(self.rank)

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.spec.key != self.spec.key:
                raise SpecMismatch("mixed field specs")
            return other.rank
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FqElem(self.spec, self.spec.add_rank(self.rank, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FqElem(self.spec, self.spec.sub_rank(self.rank, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FqElem(self.spec, self.spec.sub_rank(r, self.rank))

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FqElem(self.spec, self.spec.mul_rank(self.rank, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FqElem(self.spec, self.spec.mul_rank(self.rank, self.spec.inv_rank(r)))

    def __neg__(self):
        return FqElem(self.spec, self.spec.neg_rank(self.rank))

    def __pow__(self, n: int):
        return FqElem(self.spec, self.spec.pow_rank(self.rank, n))

    def inverse(self):
        return FqElem(self.spec, self.spec.inv_rank(self.rank))

    def __bool__(self):
        return self.rank != 0

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.spec.key == other.spec.key and self.rank == other.rank
        if isinstance(other, int):
            return self.rank == (other % self.spec.p if self.spec.e == 1 else other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.key, self.rank))

    def __str__(self):
        if self.spec.e == 1:
            return str(self.rank)
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"

    def __repr__(self):
        return f"Fq{self.spec.q}({self})"


def fq_enumerate(spec: FqSpec):
    """Deterministic enumeration of all q elements; zero comes first."""
    return spec.elements()


# ---------------------------------------------------------------------------
# spec resolution: built-ins plus a key/value config for custom polynomials
# ---------------------------------------------------------------------------

_SPEC_CACHE: dict = {}


def _factor_prime_power(q):
    if q < 2:
        raise UnsupportedOrder(f"q={q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    e = 0
    m = q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise UnsupportedOrder(f"q={q} is not a prime power")
    return p, e


def parse_fq_config(path: str) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Read `q=<int> poly=<c0,...,ce>` lines; '#' starts a comment."""
    entries = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = dict()
            for tok in line.split():
                if "=" not in tok:
                    raise ParseError(f"{path}:{lineno}: expected key=value, got {tok!r}")
                k, v = tok.split("=", 1)
                fields[k] = v
            try:
                q = int(fields["q"])
                poly = tuple(int(c) for c in fields["poly"].split(","))
            except (KeyError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed entry") from exc
            p, _ = _factor_prime_power(q)
            entries[q] = (p, poly)
    return entries


def spec_for_order(q: int, config_path: str | None = None,
                   *, order_bound: int = ORDER_BOUND_DEFAULT) -> FqSpec:
    """Resolve q to a spec: config entries first, then built-ins and primes."""
    custom = None
    if config_path:
        entries = parse_fq_config(config_path)
        if q in entries:
            custom = entries[q][1]
    cache_key = (q, custom)
    if cache_key in _SPEC_CACHE:
        return _SPEC_CACHE[cache_key]
    p, e = _factor_prime_power(q)
    if custom is not None:
        spec = FqSpec(p, e, custom, order_bound=order_bound)
    elif e == 1:
        spec = FqSpec(p, 1, order_bound=order_bound)
    elif q in _BUILTIN_POLYS:
        spec = FqSpec(p, e, _BUILTIN_POLYS[q][1], order_bound=order_bound)
    else:
        raise UnsupportedOrder(
            f"q={q} has no built-in defining polynomial; add one to the config"
        )
    _SPEC_CACHE[cache_key] = spec
    return spec
