"""Arithmetic in binary fields GF(2^n), 2 <= n <= 20.

Elements are n-bit integers in the polynomial basis of the field modulus.
:class:`Field` carries log/antilog tables and vectorised operations on
``numpy`` integer arrays; :class:`FieldElement` is the scalar value type used
for coefficients.

    >>> F = Field(2)
    >>> w = F.primitive
    >>> w * w == w + 1
    True
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources

import numpy as np

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NotADivisor,
    OddExtension,
    ReducibleModulus,
    UnsupportedWidth,
    ZeroInput,
)

MIN_N = 2
MAX_N = 20
EAGER_TABLE_MAX_N = 16


def _load_default_moduli():
    text = resources.files("apnwb").joinpath("data/conway.json").read_text()
    return {int(k): int(v, 16) for k, v in json.loads(text).items()}


DEFAULT_MODULI = _load_default_moduli()


# -- integer polynomials over GF(2) ------------------------------------------

def clmul(a, b):
    """Carry-less product of two bit-masks."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a, f):
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def poly_mulmod(a, b, f):
    return poly_mod(clmul(a, b), f)


def poly_powmod(a, e, f):
    r = 1
    a = poly_mod(a, f)
    while e:
        if e & 1:
            r = poly_mulmod(r, a, f)
        a = poly_mulmod(a, a, f)
        e >>= 1
    return r


def poly_gcd(a, b):
    while b:
        a, b = b, poly_mod(a, b)
    return a


def prime_factors(k):
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible(f):
    """Rabin's test for a polynomial given as a bit-mask."""
    n = f.bit_length() - 1
    if n < 1:
        return False
    if poly_powmod(2, 1 << n, f) != poly_mod(2, f):
        return False
    for p in prime_factors(n):
        t = poly_powmod(2, 1 << (n // p), f) ^ poly_mod(2, f)
        if poly_gcd(f, t) != 1:
            return False
    return True


# -- fields -----------------------------------------------------------------

class Field:
    """The field GF(2^n) = GF(2)[x]/(modulus).

    Parameters
    ----------
    n : int
        Extension degree, 2 <= n <= 20.
    modulus : int, optional
        Degree-n irreducible polynomial as an (n+1)-bit mask. Defaults to the
        Conway polynomial shipped in ``data/conway.json``.

    The primitive element is the generator of the multiplicative group with
    the smallest bit value. For Conway moduli this is always ``x`` (bits 0b10).
    When n is even, ``m = n // 2`` and ``q = 2**m``; both are None otherwise.
    """

    def __init__(self, n, modulus=None):
        if not isinstance(n, int) or not MIN_N <= n <= MAX_N:
            raise UnsupportedWidth(f"n must be in [{MIN_N}, {MAX_N}], got {n!r}")
        if modulus is None:
            modulus = DEFAULT_MODULI[n]
        modulus = int(modulus)
        if modulus.bit_length() - 1 != n:
            raise UnsupportedWidth(
                f"modulus {modulus:#x} has degree {modulus.bit_length() - 1}, expected {n}")
        if not is_irreducible(modulus):
            raise ReducibleModulus(f"{modulus:#x} is reducible over GF(2)")
        self.n = n
        self.modulus = modulus
        self.size = 1 << n
        self.order = self.size - 1
        self.m = n // 2 if n % 2 == 0 else None
        self.q = 1 << self.m if self.m is not None else None
        self.gen = self._find_generator()
        if n <= EAGER_TABLE_MAX_N:
            self._exp  # noqa: B018  build tables now

    def _find_generator(self):
        N = self.order
        cofactors = [N // p for p in prime_factors(N)]
        for g in range(2, self.size):
            if all(poly_powmod(g, k, self.modulus) != 1 for k in cofactors):
                return g
        raise AssertionError("no generator found")  # unreachable for irreducible moduli

    def __repr__(self):
        return f"Field(n={self.n}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.n, self.modulus) == (other.n, other.modulus)

    def __hash__(self):
        return hash((self.n, self.modulus))

    def __call__(self, bits):
        return FieldElement(int(bits), self)

    # tables

    def mul_scalar_schoolbook(self, arr, s):
        """Multiply an array by the element ``s`` without using the tables."""
        acc = np.zeros_like(arr)
        a = np.array(arr, copy=True)
        top = self.size
        for i in range(self.n):
            if (s >> i) & 1:
                acc ^= a
            a <<= 1
            a ^= np.where(a & top, self.modulus, 0)
        return acc

    @cached_property
    def _exp(self):
        N = self.order
        block = 1 << ((self.n + 1) // 2)
        head = np.empty(block, dtype=np.int64)
        v = 1
        for k in range(block):
            head[k] = v
            v = poly_mulmod(v, self.gen, self.modulus)
        step = v  # gen ** block
        nblocks = -(-N // block)
        out = np.empty(nblocks * block, dtype=np.int64)
        scale = 1
        for i in range(nblocks):
            out[i * block:(i + 1) * block] = self.mul_scalar_schoolbook(head, scale)
            scale = poly_mulmod(scale, step, self.modulus)
        exp = np.concatenate([out[:N], out[:N]])
        exp.flags.writeable = False
        return exp

    @cached_property
    def _log(self):
        log = np.zeros(self.size, dtype=np.int64)
        log[self._exp[:self.order]] = np.arange(self.order, dtype=np.int64)
        log.flags.writeable = False
        return log

    @property
    def exp_table(self):
        """gen**k for k in [0, 2*order); read-only."""
        return self._exp

    @property
    def log_table(self):
        """Discrete log base gen; entry 0 is meaningless."""
        return self._log

    @cached_property
    def trace_table(self):
        """Absolute trace Tr^n_1 of every element, as 0/1 ints."""
        basis = np.array([1 << i for i in range(self.n)], dtype=np.int64)
        tb = np.zeros(basis.shape, dtype=np.int64)
        y = basis.copy()
        for _ in range(self.n):
            tb ^= y
            y = self.mul(y, y)
        tb &= 1  # traces of basis vectors are 0 or 1
        table = np.zeros(self.size, dtype=np.int64)
        for i in range(self.n):
            table[1 << i: 1 << (i + 1)] = table[: 1 << i] ^ tb[i]
        table.flags.writeable = False
        return table

    # scalar helpers

    @property
    def zero(self):
        return FieldElement(0, self)

    @property
    def one(self):
        return FieldElement(1, self)

    @property
    def primitive(self):
        return FieldElement(self.gen, self)

    def z(self, k):
        """The element primitive**k (k may be any integer)."""
        return FieldElement(int(self._exp[k % self.order]), self)

    def log(self, x):
        """Exponent k in [0, order) with primitive**k == x."""
        x = int(x)
        if x == 0:
            raise ZeroInput("log of zero")
        return int(self._log[x])

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    def nonzero_elements(self):
        return np.arange(1, self.size, dtype=np.int64)

    def random_element(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return FieldElement(int(rng.integers(lo, self.size)), self)

    # vectorised arithmetic on int arrays

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow(self, a, e):
        """a**e elementwise for a non-negative (arbitrary precision) exponent."""
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return np.ones_like(a)
        k = e % self.order
        out = self._exp[(self._log[a] * k) % self.order]
        return np.where(a == 0, 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self._exp[(self.order - self._log[a]) % self.order]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frob(self, a, k=1):
        """a**(2**k)."""
        return self.pow(a, pow(2, k % self.n))

    def sqrt(self, a):
        return self.frob(a, self.n - 1)

    def trace_rel(self, a, m):
        """Relative trace Tr^n_m(a) = sum_{j < n/m} a**(2**(j*m))."""
        if m <= 0 or self.n % m:
            raise NotADivisor(f"{m} does not divide {self.n}")
        a = np.asarray(a, dtype=np.int64)
        acc = np.zeros_like(a)
        y = a
        for _ in range(self.n // m):
            acc = acc ^ y
            y = self.frob(y, m)
        return acc

    def trace(self, a):
        """Absolute trace Tr^n_1 as 0/1 ints."""
        return self.trace_table[np.asarray(a, dtype=np.int64)]

    def in_subfield(self, a, m):
        """True where a lies in GF(2^m) (Frobenius-fixed)."""
        a = np.asarray(a, dtype=np.int64)
        return self.frob(a, m) == a

    def is_cube(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.order % 3:
            return np.ones(a.shape, dtype=bool)
        return (a == 0) | (self._log[a] % 3 == 0)

    def require_even(self):
        if self.m is None:
            raise OddExtension(f"GF(2^{self.n}) is not a quadratic extension")


@lru_cache(maxsize=None)
def get_field(n, modulus=None):
    """Cached :class:`Field` constructor."""
    return Field(n, modulus)


def field_new(n, modulus=None):
    return Field(n, modulus)


# -- elements ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldElement:
    """An element of a specific :class:`Field`.

    Plain ints are accepted in arithmetic and comparisons and are read as
    bit patterns, so ``x + 1`` and ``x == 0`` work as expected.
    """

    bits: int
    field: Field

    def __post_init__(self):
        if not 0 <= self.bits < self.field.size:
            raise ValueError(f"{self.bits:#x} is not an element of {self.field}")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.bits
        if isinstance(other, (int, np.integer)):
            return FieldElement(int(other), self.field).bits
        return NotImplemented

    def __int__(self):
        return self.bits

    __index__ = __int__

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return f"GF(2^{self.field.n})({self.bits:#x})"

    def __str__(self):
        if self.bits == 0:
            return "0"
        return f"z^{self.field.log(self.bits)}"

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.bits == o

    def __hash__(self):
        return hash((self.field.n, self.field.modulus, self.bits))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.bits ^ o, self.field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.bits == 0 or o == 0:
            return FieldElement(0, self.field)
        F = self.field
        return FieldElement(int(F._exp[F._log[self.bits] + F._log[o]]), F)

    __rmul__ = __mul__

    def inverse(self):
        if self.bits == 0:
            raise DivisionByZero("inverse of zero")
        F = self.field
        return FieldElement(int(F._exp[F.order - F._log[self.bits]]), F)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FieldElement(o, self.field).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(o, self.field) * self.inverse()

    def __pow__(self, e):
        e = int(e)
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return F.one
        if self.bits == 0:
            return F.zero
        k = e % F.order
        return FieldElement(int(F._exp[(int(F._log[self.bits]) * k) % F.order]), F)

    def frob(self, k=1):
        return self ** pow(2, k % self.field.n)

    def conj(self):
        """x**q for n = 2m."""
        self.field.require_even()
        return self ** self.field.q

    def in_subfield(self, m):
        return self.frob(m) == self

    def trace(self):
        """Absolute trace, as 0 or 1."""
        return int(self.field.trace_table[self.bits])

    def log(self):
        return self.field.log(self.bits)


# -- structural operations --------------------------------------------------

def trace_rel(x, m):
    """Tr^n_m(x); the result lies in GF(2^m)."""
    return FieldElement(int(x.field.trace_rel(x.bits, m)), x.field)


def is_cube(x):
    """Whether x = y**3 for some y in the field (0 counts as a cube)."""
    return bool(x.field.is_cube(x.bits))


def polar_decompose(u):
    """Unique (v, k) with u = v*k, v**(q+1) = 1 and k**(q-1) = 1."""
    F = u.field
    F.require_even()
    if not u:
        raise ZeroInput("polar decomposition of zero")
    k = u ** ((F.q + 1) << (F.m - 1))
    return u / k, k


def _gf2_solve(cols, rhs, n):
    """Solve sum_i t_i * cols[i] = rhs over GF(2).

    Returns (particular, kernel_basis) with vectors as n-bit ints, or
    (None, kernel_basis) when there is no solution.
    """
    # rows of augmented system: row j holds bit j of every column, plus rhs bit
    rows = []
    for j in range(n):
        r = 0
        for i, c in enumerate(cols):
            if (c >> j) & 1:
                r |= 1 << i
        rows.append((r, (rhs >> j) & 1))
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((k for k in range(rank, n) if (rows[k][0] >> col) & 1), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr, pb = rows[rank]
        for k in range(n):
            if k != rank and (rows[k][0] >> col) & 1:
                rows[k] = (rows[k][0] ^ pr, rows[k][1] ^ pb)
        pivots.append(col)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fcol in free:
        v = 1 << fcol
        for r, pcol in zip(rows, pivots):
            if (r[0] >> fcol) & 1:
                v |= 1 << pcol
        kernel.append(v)
    if any(b and r == 0 for r, b in rows[rank:]):
        return None, kernel
    t = 0
    for (r, b), pcol in zip(rows, pivots):
        if b:
            t |= 1 << pcol
    return t, kernel


def solve_affine_p2(a, b):
    """All t with t**2 + a*t + b = 0, found by linearising over GF(2).

    With a = 0 the equation is t**2 = b and the unique square root is
    returned.
    """
    F = a.field
    b_bits = a._coerce(b)
    if not a:
        return {FieldElement(int(F.sqrt(b_bits)), F)}
    basis = [FieldElement(1 << i, F) for i in range(F.n)]
    cols = [(e * e + a * e).bits for e in basis]
    t, kernel = _gf2_solve(cols, b_bits, F.n)
    if t is None:
        return set()
    sols = {t}
    for k in kernel:
        sols |= {s ^ k for s in sols}
    return {FieldElement(s, F) for s in sols}


class RootCount(enum.Enum):
    NO_ROOTS = 0
    ONE_ROOT = 1
    THREE_ROOTS = 3

    @property
    def count(self):
        return self.value


@dataclass(frozen=True)
class WilliamsResult:
    kind: RootCount
    t1: FieldElement | None = None


def williams_classify(a):
    """Number of roots of x**3 + x + a in GF(2^{2m}), without searching.

    Tr(1/a^2) = 1 gives one root; otherwise t^2 + a t + 1 = 0 has a root t1
    and the cubic has three roots when t1 is a cube and none when it is not.
    """
    F = a.field
    F.require_even()
    if not a:
        raise ZeroInput("williams_classify needs a != 0")
    if (a * a).inverse().trace() == 1:
        return WilliamsResult(RootCount.ONE_ROOT)
    t1 = min(solve_affine_p2(a, F.one), key=int)
    kind = RootCount.THREE_ROOTS if is_cube(t1) else RootCount.NO_ROOTS
    return WilliamsResult(kind, t1)
