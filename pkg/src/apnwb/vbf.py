"""Truth-table (n,n)-functions and their exhaustive analyses.

Every analysis here loops over the whole field, so the dense table is the
only internal representation. Walsh components are transformed in chunks of
about 2**22 entries to keep memory bounded at n = 14.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from ._kernels import apn_kernel, differential_histogram, walsh_histogram
from .errors import FieldMismatch
from .gf2n import Field, FieldElement

CHUNK_LOG2 = 22


class Spectrum(dict):
    """Multiset stored as ``{value: count}``.

    Used for differential spectra (value = number of solutions of
    D_a f(x) = b, counted over all a != 0 and b) and extended Walsh spectra
    (value = |W_f(a, b)| over all a and b != 0).
    """

    def total(self):
        return sum(self.values())

    def max_key(self):
        return max((k for k, c in self.items() if c), default=0)

    def to_json(self):
        return json.dumps({str(k): int(self[k]) for k in sorted(self)})

    @classmethod
    def from_json(cls, text):
        return cls({int(k): int(v) for k, v in json.loads(text).items()})

    @classmethod
    def from_counts(cls, hist):
        """Build from ``np.bincount`` output indexed by value."""
        return cls({int(k): int(c) for k, c in enumerate(hist) if c})


@dataclass(frozen=True, eq=False)
class VBF:
    """An (n,n)-function over ``field`` given by its truth table.

    ``table[x]`` is the value at the element whose bit pattern is x.
    """

    field: Field
    table: np.ndarray
    provenance: Any = dc_field(default=None, compare=False)

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64, copy=True)
        if t.shape != (self.field.size,):
            raise ValueError(f"table must have length {self.field.size}, got {t.shape}")
        if t.size and (t.min() < 0 or t.max() >= self.field.size):
            raise ValueError("table entries must be field elements")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    @property
    def n(self):
        return self.field.n

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.field != self.field:
                raise FieldMismatch(f"{x.field} vs {self.field}")
            return FieldElement(int(self.table[x.bits]), self.field)
        return self.table[x]

    def __eq__(self, other):
        if not isinstance(other, VBF):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.field, self.table.tobytes()))

    def __add__(self, other):
        if isinstance(other, VBF):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return VBF(self.field, self.table ^ other.table)
        return NotImplemented

    def __repr__(self):
        tag = f", {self.provenance.family}" if self.provenance is not None else ""
        return f"VBF(GF(2^{self.n}){tag})"

    def compose(self, inner):
        """self o inner."""
        return VBF(self.field, self.table[inner.table])

    def scale(self, c):
        return VBF(self.field, self.field.mul(int(c), self.table))


# -- construction -----------------------------------------------------------

def vbf_from_terms(field, terms, provenance=None):
    """Tabulate x -> sum of coeff * x**exponent; 0**0 is taken as 1."""
    xs = field.elements()
    acc = np.zeros(field.size, dtype=np.int64)
    for coeff, exponent in terms:
        if isinstance(coeff, FieldElement):
            if coeff.field != field:
                raise FieldMismatch(f"coefficient from {coeff.field}, expected {field}")
            coeff = coeff.bits
        exponent = int(exponent)
        if not 0 <= exponent <= field.order:
            raise ValueError(f"exponent {exponent} outside [0, {field.order}]")
        if coeff:
            acc ^= field.mul(coeff, field.pow(xs, exponent))
    return VBF(field, acc, provenance)


def vbf_from_eval(field, evaluator, vectorized=True, provenance=None):
    """Tabulate an evaluator.

    With ``vectorized=True`` the evaluator receives the int array of all field
    elements and returns an int array; otherwise it is called once per
    element with a :class:`FieldElement`.
    """
    if vectorized:
        table = np.asarray(evaluator(field.elements()), dtype=np.int64)
    else:
        table = np.array([int(evaluator(field(x))) for x in range(field.size)], dtype=np.int64)
    return VBF(field, table, provenance)


def identity(field):
    return VBF(field, field.elements())


# -- derivatives ------------------------------------------------------------

def derivative(f, d):
    """x -> f(x) + f(x + d)."""
    d = int(d)
    xs = f.field.elements()
    return VBF(f.field, f.table ^ f.table[xs ^ d])


def delta_dx(f, d):
    """x -> f(d x) + f(d x + d) + f(d)."""
    F = f.field
    d = int(d)
    dx = F.mul(d, F.elements())
    return VBF(F, f.table[dx] ^ f.table[dx ^ d] ^ f.table[d])


def differential_spectrum(f):
    """Histogram of Delta_f(a, b) over all a != 0 and all b."""
    return Spectrum.from_counts(differential_histogram(f.table))


def differential_uniformity(f):
    return differential_spectrum(f).max_key()


def is_apn(f):
    """True iff every derivative equation has at most two solutions."""
    return bool(apn_kernel(f.table))


# -- Walsh ------------------------------------------------------------------

def fwht(a):
    """Unnormalised Walsh-Hadamard transform along the last axis."""
    a = np.array(a, copy=True)
    lead = a.shape[:-1]
    size = a.shape[-1]
    h = 1
    while h < size:
        a = a.reshape(*lead, size // (2 * h), 2, h)
        x = a[..., 0, :].copy()
        a[..., 0, :] += a[..., 1, :]
        a[..., 1, :] = x - a[..., 1, :]
        h *= 2
    return a.reshape(*lead, size)


def walsh_spectrum_extended(f):
    """Multiset of |W_f(a, b)| over all a and all b != 0.

    For each b the sign vector of x -> Tr(b f(x)) is transformed with the
    fast Walsh-Hadamard transform. The transform pairs x with the dot product
    <u, x> rather than Tr(a x); both run over all linear functionals, so the
    multiset of absolute values is the same. :func:`walsh_spectrum_reference`
    is the plain numpy version.
    """
    F = f.field
    hist = walsh_histogram(f.table, F.exp_table, F.log_table, F.trace_table)
    return Spectrum.from_counts(hist)


def walsh_spectrum_reference(f):
    """Same multiset as :func:`walsh_spectrum_extended`, via numpy in chunks."""
    F = f.field
    per = max(1, (1 << CHUNK_LOG2) >> f.n)
    hist = np.zeros(F.size + 1, dtype=np.int64)
    tr = F.trace_table
    for start in range(1, F.size, per):
        bs = np.arange(start, min(start + per, F.size), dtype=np.int64)
        comp = tr[F.mul(bs[:, None], f.table[None, :])]
        signs = (1 - 2 * comp).astype(np.int32)
        w = np.abs(fwht(signs))
        hist += np.bincount(w.ravel(), minlength=hist.size)
    return Spectrum.from_counts(hist)


# -- degree -----------------------------------------------------------------

def anf(f):
    """ANF coefficients of the n coordinate functions, shape (2^n, n)."""
    n = f.n
    bits = ((f.table[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    size = bits.shape[0]
    h = 1
    while h < size:
        v = bits.reshape(size // (2 * h), 2, h, n)
        v[:, 1] ^= v[:, 0]
        h *= 2
    return bits


def algebraic_degree(f):
    """Largest weight of a monomial present in some coordinate's ANF."""
    coeffs = anf(f)
    monomials = np.nonzero(coeffs.any(axis=1))[0]
    if monomials.size == 0:
        return 0
    return int(np.bitwise_count(monomials.astype(np.uint64)).max())


# -- code matrix ------------------------------------------------------------

def code_columns(field):
    """Column order of the code matrix: 0, then gen**k for k < 2^n - 1."""
    return np.concatenate([[0], field.exp_table[:field.order]]).astype(np.int64)


def code_matrix(f):
    """(2n+1) x 2^n generator matrix over GF(2), rows: ones, bits of x, bits of f(x)."""
    n = f.n
    xs = code_columns(f.field)
    ys = f.table[xs]
    shifts = np.arange(n)
    rows = [np.ones((1, xs.size), dtype=np.uint8),
            ((xs[None, :] >> shifts[:, None]) & 1).astype(np.uint8),
            ((ys[None, :] >> shifts[:, None]) & 1).astype(np.uint8)]
    return np.vstack(rows)


def code_matrix_export(f, sink, fmt="plain"):
    """Write the code matrix to a text stream.

    ``plain``: a first line ``"<length> <rows>"`` then one 0/1 string per row.
    ``magma``: a ``Matrix(GF(2), rows, length, [...])`` literal.
    """
    M = code_matrix(f)
    k, length = M.shape
    if fmt == "plain":
        sink.write(f"{length} {k}\n")
        for row in M:
            sink.write("".join("01"[b] for b in row) + "\n")
    elif fmt == "magma":
        body = ",\n".join(",".join(str(b) for b in row) for row in M)
        sink.write(f"Matrix(GF(2), {k}, {length}, [\n{body}\n]);\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
