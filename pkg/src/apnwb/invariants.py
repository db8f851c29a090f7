"""CCZ-invariant fingerprints and comparison against a catalog.

Equal fingerprints are necessary for CCZ-equivalence, not sufficient. A
comparison that finds no difference therefore says "indistinguishable by
computed invariants" and nothing stronger.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ._kernels import gamma_rows, gf2_rank_packed
from .errors import FieldMismatch, TooLarge
from .vbf import VBF, Spectrum, algebraic_degree, differential_spectrum, walsh_spectrum_extended

GAMMA_DEFAULT_MAX_N = 6
GAMMA_MAX_N = 8  # 2^16 packed rows of 2^16 bits = 512 MiB

DISTINGUISHED = "distinguished"
INDISTINGUISHABLE = "indistinguishable by computed invariants"


def gamma_rank(f):
    """GF(2)-rank of the 2^2n x 2^2n matrix with a 1 at ((a, b), (x, y)) iff
    y = b + f(x + a)."""
    if f.n > GAMMA_MAX_N:
        raise TooLarge(f"gamma rank needs n <= {GAMMA_MAX_N}, got {f.n}")
    rows = gamma_rows(np.ascontiguousarray(f.table), f.n)
    return int(gf2_rank_packed(rows, 1 << (2 * f.n)))


def gamma_matrix_dense(f):
    """The same matrix as a dense 0/1 array (small n only; for testing)."""
    size = f.field.size
    M = np.zeros((size * size, size * size), dtype=np.uint8)
    xs = np.arange(size)
    for a in range(size):
        for b in range(size):
            M[a * size + b, xs * size + (b ^ f.table[xs ^ a])] = 1
    return M


@dataclass(frozen=True)
class Fingerprint:
    n: int
    differential_spectrum: Spectrum
    extended_walsh: Spectrum
    algebraic_degree: int
    gamma_rank: int | None = None

    def to_dict(self):
        return {
            "n": self.n,
            "differential_spectrum": json.loads(self.differential_spectrum.to_json()),
            "extended_walsh": json.loads(self.extended_walsh.to_json()),
            "algebraic_degree": self.algebraic_degree,
            "gamma_rank": self.gamma_rank,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n"]),
                   Spectrum.from_json(json.dumps(d["differential_spectrum"])),
                   Spectrum.from_json(json.dumps(d["extended_walsh"])),
                   int(d["algebraic_degree"]),
                   None if d.get("gamma_rank") is None else int(d["gamma_rank"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def fingerprint(f, gamma=None):
    """Differential spectrum, extended Walsh spectrum, degree and optionally
    the gamma rank.

    ``gamma=None`` includes the gamma rank for n <= 6; ``gamma=True`` forces
    it (up to n = 8, where it needs about 512 MiB); ``gamma=False`` skips it.
    """
    if gamma is None:
        gamma = f.n <= GAMMA_DEFAULT_MAX_N
    return Fingerprint(
        f.n,
        differential_spectrum(f),
        walsh_spectrum_extended(f),
        algebraic_degree(f),
        gamma_rank(f) if gamma else None,
    )


FIELDS = ("differential_spectrum", "extended_walsh", "algebraic_degree", "gamma_rank")


def compare_fingerprints(fa, fb):
    """Per-invariant equality; gamma rank is skipped unless both have it."""
    out = {}
    for name in FIELDS:
        va, vb = getattr(fa, name), getattr(fb, name)
        if name == "gamma_rank" and (va is None or vb is None):
            continue
        out[name] = va == vb
    return out


def compare(f, catalog, gamma=None):
    """Compare f against every (name, VBF or Fingerprint) in ``catalog``."""
    fp = f if isinstance(f, Fingerprint) else fingerprint(f, gamma)
    entries = []
    for name, g in catalog:
        if isinstance(g, VBF):
            if isinstance(f, VBF) and g.field != f.field:
                raise FieldMismatch(f"{name} lives in {g.field}")
            gp = fingerprint(g, gamma)
        else:
            gp = g
        if gp.n != fp.n:
            raise FieldMismatch(f"{name} has n = {gp.n}, expected {fp.n}")
        eq = compare_fingerprints(fp, gp)
        entries.append({"name": name, "equal": eq,
                        "verdict": INDISTINGUISHABLE if all(eq.values()) else DISTINGUISHED})
    return {"fingerprint": fp.to_dict(), "entries": entries}


# -- the shipped catalog ----------------------------------------------------------

CATALOG_RESOURCE = "data/catalog.json"


def catalog_fingerprints(catalog):
    return [(name, fingerprint(f, gamma=False)) for name, f in catalog]


def catalog_document(catalog):
    return {"n": catalog[0][1].n if catalog else None,
            "entries": [{"name": name, "fingerprint": fp.to_dict()}
                        for name, fp in catalog_fingerprints(catalog)]}


def load_catalog(path=None):
    """Read precomputed (name, Fingerprint) pairs; defaults to the shipped file."""
    if path is None:
        text = resources.files("apnwb").joinpath(CATALOG_RESOURCE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    return [(e["name"], Fingerprint.from_dict(e["fingerprint"])) for e in doc["entries"]]


# -- EA transformations ------------------------------------------------------------

def random_invertible_matrix(n, rng):
    """Columns of a random invertible n x n GF(2) matrix, as n-bit ints."""
    while True:
        cols = [int(v) for v in rng.integers(0, 1 << n, size=n)]
        if _gf2_rank(cols) == n:
            return cols


def _gf2_rank(vectors):
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def linear_table(cols, n):
    """Table of x -> sum of cols[i] over the set bits i of x."""
    size = 1 << n
    out = np.zeros(size, dtype=np.int64)
    for i, c in enumerate(cols):
        out[1 << i: 1 << (i + 1)] = out[: 1 << i] ^ c
    return out


def random_affine_permutation(n, rng):
    return linear_table(random_invertible_matrix(n, rng), n) ^ int(rng.integers(0, 1 << n))


def random_affine(n, rng):
    cols = [int(v) for v in rng.integers(0, 1 << n, size=n)]
    return linear_table(cols, n) ^ int(rng.integers(0, 1 << n))


def random_ea_transform(f, rng):
    """L2 o f o L1 + A with L1, L2 random affine permutations and A random affine."""
    n = f.n
    L1 = random_affine_permutation(n, rng)
    L2 = random_affine_permutation(n, rng)
    A = random_affine(n, rng)
    return VBF(f.field, L2[f.table[L1]] ^ A)
