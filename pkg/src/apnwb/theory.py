"""Exhaustive falsifiers for the lemmas and theorems behind the constructions.

Every scan returns a :class:`ScanReport` with the number of points checked,
the number skipped as degenerate, how many met the hypothesis, and the list of
counterexamples (expected empty). None of this is a proof: it confirms the
statements on the fields small enough to enumerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .constructions import ITEM_IV_READINGS, item_s, theorem31_condition_mask
from .errors import (
    BadExponent,
    DegenerateA,
    DegenerateInput,
    DegenerateX,
    FieldMismatch,
    NonzeroConstant,
    NotQuadratic,
    OddExtension,
    ZeroInput,
)
from .gf2n import FieldElement, is_cube, polar_decompose, williams_classify
from .vbf import VBF, algebraic_degree, is_apn, vbf_from_terms


@dataclass
class ScanReport:
    name: str
    checked: int = 0
    degenerate: int = 0
    admissible: int | None = None
    violations: list = dc_field(default_factory=list)
    extra: dict = dc_field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        d = {"name": self.name, "checked": self.checked, "degenerate": self.degenerate,
             "violations": [_jsonable(v) for v in sorted(self.violations, key=_sort_key)]}
        if self.admissible is not None:
            d["admissible"] = self.admissible
        d.update(self.extra)
        return d


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, FieldElement):
        return str(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def _sort_key(v):
    return tuple(int(x) for x in v) if isinstance(v, (list, tuple)) else (int(v),)


def _require_m_odd(field):
    field.require_even()
    if field.m % 2 == 0:
        raise OddExtension(f"n/2 = {field.m} must be odd")


# -- the quadratic criterion --------------------------------------------------

def lemma21_solution_mask(F, G, d_values=None):
    """M[k, x]: Tr^n_m of both dx-derivatives vanishes at x for d = d_values[k]."""
    fld = F.field
    if d_values is None:
        d_values = fld.nonzero_elements()
    d = np.asarray(d_values, dtype=np.int64)[:, None]
    X = fld.mul(d, fld.elements()[None, :])
    m = fld.m

    def in_half(t):
        delta = t[X] ^ t[X ^ d] ^ t[d]
        return fld.in_subfield(delta, m)

    return in_half(F.table) & in_half(G.table)


def lemma21_check(F, G, a):
    """APN test for a Tr(F) + a^q Tr(G) through the derivative system.

    True iff for every d != 0 the only x with Tr(Delta_{d,F}(x)) = 0 and
    Tr(Delta_{d,G}(x)) = 0 are x = 0 and x = 1.
    """
    fld = F.field
    if G.field != fld or a.field != fld:
        raise FieldMismatch("F, G and a must share a field")
    fld.require_even()
    if a + a ** fld.q == 0:
        raise DegenerateA(f"a = {a} lies in the half subfield")
    for name, f in (("F", F), ("G", G)):
        if f.table[0]:
            raise NonzeroConstant(f"{name}(0) != 0")
        if algebraic_degree(f) > 2:
            raise NotQuadratic(f"{name} has algebraic degree {algebraic_degree(f)}")
    mask = lemma21_solution_mask(F, G)
    return bool(np.all(mask.sum(axis=1) == 2))


# -- cube lemmas --------------------------------------------------------------

def lemma31_scan(field):
    """All c with c^3 (c + c^2 + c^4)^q in F_{2^m} that are not cubes."""
    _require_m_odd(field)
    c = field.elements()
    inner = c ^ field.mul(c, c) ^ field.pow(c, 4)
    val = field.mul(field.pow(c, 3), field.frob(inner, field.m))
    hyp = field.in_subfield(val, field.m)
    bad = hyp & ~field.is_cube(c)
    return ScanReport("lemma31", checked=field.size, admissible=int(hyp.sum()),
                      violations=[int(v) for v in c[bad]])


def lemma32_scan(field, s):
    """All x outside {0, 1} with (x + x^2) / (x + x^(2^s))^(2^2s - 2^s + 1) in
    F_{2^m} for which x + x^(2^s) is not a cube."""
    _require_m_odd(field)
    n, m = field.n, field.m
    if (3 * s) % n != 1:
        raise BadExponent(f"3*{s} is not 1 mod {n}")
    if math.gcd(3, m) != 1:
        raise BadExponent(f"gcd(3, {m}) != 1")
    x = field.elements()[2:]
    d = x ^ field.frob(x, s)
    e = (1 << 2 * s) - (1 << s) + 1
    ratio = field.div(x ^ field.mul(x, x), field.pow(d, e))
    hyp = field.in_subfield(ratio, m)
    bad = hyp & ~field.is_cube(d)
    return ScanReport("lemma32", checked=x.size, admissible=int(hyp.sum()),
                      violations=[int(v) for v in x[bad]], extra={"s": s})


# -- Williams -----------------------------------------------------------------

def cubic_root_counts(field):
    """r[a] = number of x with x^3 + x = a, by enumeration."""
    xs = field.elements()
    return np.bincount(field.pow(xs, 3) ^ xs, minlength=field.size)


def williams_scan(field):
    """Compare the closed-form classification of x^3 + x + a with counting."""
    field.require_even()
    counts = cubic_root_counts(field)
    bad = []
    for a in range(1, field.size):
        if williams_classify(field(a)).kind.count != counts[a]:
            bad.append(a)
    return ScanReport("williams", checked=field.order, violations=bad)


# -- the cubic Ay^3 + By^2 + B^q y + A^q --------------------------------------

@dataclass(frozen=True)
class VitalContext:
    """Derived quantities for one x outside {0, 1} and one case (1 or 2)."""

    x: FieldElement
    case: int
    r: FieldElement
    h: FieldElement
    c: FieldElement
    A: FieldElement
    B: FieldElement
    D: FieldElement
    H: FieldElement

    @classmethod
    def build(cls, x, case):
        F = x.field
        _require_m_odd(F)
        if x == 0 or x == 1:
            raise DegenerateX("x must lie outside {0, 1}")
        q = F.q
        r = x ** (q + 1)
        h = x + x ** q
        c = x + x * x
        if case == 1:
            A = c ** (2 - 2 * q) * (h + c + c * c)
            B = c + c * c
        elif case == 2:
            A = (h + c + c * c) / c ** q
            B = 1 + c
        else:
            raise ValueError(f"case must be 1 or 2, got {case!r}")
        D = A * (A ** (q + 1) + B ** (q + 1))
        H = A * A * (A ** q * B ** 3 + A * B ** (3 * q) + B ** (2 + 2 * q))
        return cls(x, case, r, h, c, A, B, D, H)


@dataclass(frozen=True)
class VitalResult:
    count: int

    @property
    def no_solutions(self):
        return self.count == 0

    def __str__(self):
        return "NoSolutions" if self.count == 0 else f"SolutionsExist({self.count})"


def _vital_AB(field, xs, case):
    """Vectorised A, B for the given x values (none of them 0 or 1)."""
    q = field.q
    h = xs ^ field.frob(xs, field.m)
    c = xs ^ field.mul(xs, xs)
    top = h ^ c ^ field.mul(c, c)
    if case == 1:
        A = field.mul(field.pow(c, 2 - 2 * q), top)
        B = c ^ field.mul(c, c)
    elif case == 2:
        A = field.div(top, field.pow(c, q))
        B = c ^ 1
    else:
        raise ValueError(f"case must be 1 or 2, got {case!r}")
    return A, B


def _vital_counts(field, xs, case):
    """Brute-force root counts of the cubic for each x in xs."""
    q = field.q
    A, B = _vital_AB(field, xs, case)
    ys = field.elements()
    y2 = field.mul(ys, ys)
    y3 = field.mul(y2, ys)
    Aq = field.pow(A, q)
    Bq = field.pow(B, q)
    out = np.empty(xs.size, dtype=np.int64)
    step = max(1, (1 << 22) >> field.n)
    for lo in range(0, xs.size, step):
        sl = slice(lo, lo + step)
        val = (field.mul(A[sl, None], y3[None, :]) ^ field.mul(B[sl, None], y2[None, :])
               ^ field.mul(Bq[sl, None], ys[None, :]) ^ Aq[sl, None])
        out[sl] = (val == 0).sum(axis=1)
    return out


def vital_check(x, case):
    """Count the roots in the whole field of A y^3 + B y^2 + B^q y + A^q."""
    ctx = VitalContext.build(x, case)
    return VitalResult(int(_vital_counts(x.field, np.array([ctx.x.bits]), case)[0]))


def vital_scan(field, case):
    """Every x whose c = x + x^2 is a non-cube must give a cubic with no roots."""
    _require_m_odd(field)
    xs = field.elements()[2:]
    c = xs ^ field.mul(xs, xs)
    sel = xs[~field.is_cube(c)]
    counts = _vital_counts(field, sel, case)
    return ScanReport(f"vital case {case}", checked=int(xs.size), admissible=int(sel.size),
                      violations=[int(v) for v in sel[counts != 0]])


def depressed_parameter(ctx):
    """The a' with y -> y + B/A, y -> E z turning the cubic into z^3 + z + a'.

    Returns None when A = 0 or E = 0 (the substitution is undefined).
    """
    A, B, q = ctx.A, ctx.B, ctx.x.field.q
    if not A:
        return None
    E2 = (A * B ** q + B * B) / (A * A)
    if not E2:
        return None
    E = FieldElement(int(ctx.x.field.sqrt(E2.bits)), ctx.x.field)
    return (A ** (q + 1) + B ** (q + 1)) / (A * A * E ** 3)


def williams_consistency_scan(field, case):
    """For every x, the brute-force root count of the cubic must equal the
    closed-form count of its depressed form (and lie in {0, 1, 3})."""
    _require_m_odd(field)
    xs = field.elements()[2:]
    counts = _vital_counts(field, xs, case)
    bad, degenerate = [], 0
    for x, cnt in zip(xs, counts):
        if cnt not in (0, 1, 3):
            bad.append(int(x))
            continue
        a = depressed_parameter(VitalContext.build(field(int(x)), case))
        if a is None or not a:
            degenerate += 1
            continue
        if williams_classify(a).kind.count != cnt:
            bad.append(int(x))
    return ScanReport(f"williams consistency case {case}", checked=int(xs.size),
                      degenerate=degenerate, violations=bad)


# -- closed-form identities used in the solvability argument -----------------

def appendix_identity_checks(x, case):
    """Evaluate each intermediate identity at one x outside F_{2^m}.

    Returns a dict of identity name -> bool. The non-cube conclusions are
    only meaningful when c = x + x^2 is a non-cube and are reported under
    keys starting with ``noncube_`` only in that situation.
    """
    ctx = VitalContext.build(x, case)
    F = x.field
    q = F.q
    r, h, c, A, B, D, H = ctx.r, ctx.h, ctx.c, ctx.A, ctx.B, ctx.D, ctx.H
    if not h:
        raise DegenerateInput("x lies in F_{2^m} (h = 0)")
    if not A or not B:
        raise DegenerateInput("A = 0 or B = 0")
    if not A * B ** q + B * B:
        raise DegenerateInput("A B^q + B^2 = 0")
    out = {}
    out["h_plus_h2"] = h + h * h == c + c ** q
    out["c_norm"] = c ** (q + 1) == r + r * r + h * r
    if case == 1:
        out["norm_sum"] = A ** (q + 1) + B ** (q + 1) == h ** 5
        u = (h * h * (r + r * r) + r + r ** 4 + h * r * r) / h ** 5
        out["A_form"] = A == c ** (2 - 2 * q) * (x ** q + x ** 4)
    else:
        out["norm_sum"] = A ** (q + 1) + B ** (q + 1) == h ** 5 / c ** (q + 1)
        u = (r + r ** 4 + r * r * h + (r + r * r) * h * h) / h ** 5
        out["A_form"] = A == ((x + x ** (4 * q)) / c) ** q
        out["B_form"] = B == 1 + x + x * x
    ratio = H / (D * D)
    out["H_over_D2"] = ratio == u + u * u
    out["H_over_D2_in_half_field"] = ratio.in_subfield(F.m)
    out["trace_zero"] = ratio.trace() == 0
    out["u_in_half_field"] = u.in_subfield(F.m)
    M = D * u
    out["M_solves"] = M * M + D * M + H == 0
    if case == 1:
        closed = (h * (c ** (2 * q + 4) + c ** (q + 5) + c ** (q + 4))
                  + c ** (2 * q + 4) + c ** (q + 5)) / c ** (2 * q)
        out["B3_plus_M"] = B ** 3 + M == closed
        lhs = h * c * c * (h * (c ** (2 * q + 4) + c ** (q + 5) + c ** (q + 4))
                           + c ** (2 * q + 4) + c ** (q + 5))
        out["factor_form"] = lhs == c ** 5 * c ** (q + 1) * ((c + c ** q) ** 2 + h * h)
    # Williams data: 1/a^2 = v + v^2 with v = (B^3 + M)/D, and t1 = a v
    a = depressed_parameter(ctx)
    v = (B ** 3 + M) / D
    out["inv_a2"] = (a * a).inverse() == v + v * v
    t1 = a * v
    out["t1_root"] = t1 * t1 + a * t1 + 1 == 0
    if not is_cube(c):
        out["noncube_t1"] = not is_cube(t1)
        out["noncube_B3_plus_M"] = not is_cube(B ** 3 + M)
    return out


def appendix_scan(field, case):
    """appendix_identity_checks at every x outside F_{2^m}."""
    _require_m_odd(field)
    bad, degenerate, checked = [], 0, 0
    for xb in range(2, field.size):
        x = field(xb)
        checked += 1
        try:
            res = appendix_identity_checks(x, case)
        except DegenerateInput:
            degenerate += 1
            continue
        failed = sorted(k for k, ok in res.items() if not ok)
        if failed:
            bad.append([xb, ",".join(failed)])
    rep = ScanReport(f"appendix case {case}", checked=checked, degenerate=degenerate,
                     admissible=checked - degenerate)
    rep.violations = bad
    return rep


# -- the reduction chain in the corollary's proof -----------------------------

def corollary_reduction_steps(field, variant, d, x, alpha=None):
    """Evaluate both sides of every rewriting step at concrete (d, x).

    b is solved from d^3 b (x + x^2) = alpha (default alpha = 1); g and e then
    follow from the variant. Returns an ordered dict step -> bool.
    """
    _require_m_odd(field)
    if not d:
        raise ZeroInput("d must be nonzero")
    if x == 0 or x == 1:
        raise DegenerateX("x must lie outside {0, 1}")
    alpha = field.one if alpha is None else alpha
    if not alpha or not alpha.in_subfield(field.m):
        raise ValueError("alpha must be a nonzero element of F_{2^m}")
    q = field.q
    c = x + x * x
    P = x + x ** 4
    R = x + x ** (4 * q)
    b = alpha / (d ** 3 * c)
    steps = {}
    steps["first_equation"] = d ** 3 * b * c == alpha
    if variant == 1:
        e = (b ** (2 * q - 2)).inverse()
        delta_G = d ** 5 * P + d ** (4 * q + 1) * e * R
        steps["e_substituted"] = e == d ** (6 * q - 6) * c ** (2 * q - 2)
        lhs1 = d ** 5 * P + d ** (10 * q - 5) * c ** (2 * q - 2) * R
        steps["delta_G_rewritten"] = delta_G == lhs1

        def E(w):
            return w * P + w ** (2 * q - 1) * c ** (2 * q - 2) * R

        u = d ** 5
    elif variant == 2:
        delta_G = d ** 5 * b * P + d ** (4 * q + 1) * b * R
        lhs1 = d * d * P / c + d ** (4 * q - 2) * R / c
        steps["b_substituted"] = delta_G / alpha == lhs1

        def E(w):
            return w * P / c + w ** (2 * q - 1) * R / c

        u = d * d
    else:
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    steps["power_substitution"] = E(u) == lhs1
    v, k = polar_decompose(u)
    steps["polar_split"] = (v ** (q + 1) == 1 and k.in_subfield(field.m)
                            and E(u) == k * E(v))
    steps["half_field_condition"] = (E(u) + E(u) ** q) == k * (E(v) + E(v) ** q)
    ctx = VitalContext.build(x, variant)
    y = v * v
    cubic = ctx.A * y ** 3 + ctx.B * y * y + ctx.B ** q * y + ctx.A ** q
    steps["times_v3_is_cubic"] = v ** 3 * (E(v) + E(v) ** q) == cubic
    if variant == 2:
        steps["A_closed_form"] = ctx.A == (R / c) ** q
        steps["B_closed_form"] = ctx.B == P / c == 1 + x + x * x
    return steps


def corollary_reduction_check(field, variant, d, x, alpha=None):
    return all(corollary_reduction_steps(field, variant, d, x, alpha).values())


def corollary_chain_scan(field, variant, samples=None, rng=None):
    """corollary_reduction_check over all (d, x), or ``samples`` random pairs."""
    _require_m_odd(field)
    if samples is None:
        pairs = [(d, x) for d in range(1, field.size) for x in range(2, field.size)]
    else:
        rng = np.random.default_rng(0) if rng is None else rng
        pairs = sorted({(int(rng.integers(1, field.size)), int(rng.integers(2, field.size)))
                        for _ in range(samples)})
    bad = [[d, x] for d, x in pairs
           if not corollary_reduction_check(field, variant, field(d), field(x))]
    return ScanReport(f"corollary chain variant {variant}", checked=len(pairs), violations=bad)


# -- item iv of the main theorem ---------------------------------------------

def item_iv_scan(field, reading):
    """Exhaustive search for (b, c) meeting item iv's hypotheses.

    Hits are reported as violations of the claim that the set is empty.
    """
    _require_m_odd(field)
    s = item_s(field, "iv")
    if s is None or math.gcd(3, field.m) != 1:
        return ScanReport(f"item iv ({reading})", checked=0, extra={"applicable": False})
    mask = theorem31_condition_mask(field, "iv", s, reading)
    hits = np.argwhere(mask)
    rep = ScanReport(f"item iv ({reading})", checked=field.size ** 2, admissible=int(len(hits)),
                     extra={"s": s, "reading": reading})
    rep.violations = [[int(b), int(c)] for b, c in hits]
    return rep


# -- the whole suite ----------------------------------------------------------

THEORY_CHECKS = ("lemma21", "lemma31", "lemma32", "williams", "vital", "appendix",
                 "corollary-chain", "item-iv-empty")


def run_checks(field, which="all", rng=None, lemma21_trials=50, chain_samples=None):
    """Run the selected checks and return a list of ScanReports."""
    rng = np.random.default_rng(0) if rng is None else rng
    names = THEORY_CHECKS if which == "all" else (which,)
    reports = []
    for name in names:
        if name == "lemma21":
            bad = []
            for t in range(lemma21_trials):
                Fq, Gq, a = random_quadratic_triple(field, rng)
                f_tab = _trace_composed_table(field, Fq, Gq, a)
                if lemma21_check(Fq, Gq, a) != is_apn(VBF(field, f_tab)):
                    bad.append(t)
            reports.append(ScanReport("lemma21", checked=lemma21_trials, violations=bad))
        elif name == "lemma31":
            reports.append(lemma31_scan(field))
        elif name == "lemma32":
            s = pow(3, -1, field.n) if math.gcd(3, field.n) == 1 else None
            if s is None or math.gcd(3, field.m) != 1:
                reports.append(ScanReport("lemma32", extra={"applicable": False}))
            else:
                reports.append(lemma32_scan(field, s))
        elif name == "williams":
            reports.append(williams_scan(field))
            for case in (1, 2):
                reports.append(williams_consistency_scan(field, case))
        elif name == "vital":
            reports += [vital_scan(field, case) for case in (1, 2)]
        elif name == "appendix":
            reports += [appendix_scan(field, case) for case in (1, 2)]
        elif name == "corollary-chain":
            reports += [corollary_chain_scan(field, v, chain_samples, rng) for v in (1, 2)]
        elif name == "item-iv-empty":
            reports += [item_iv_scan(field, r) for r in ITEM_IV_READINGS]
        else:
            raise ValueError(f"unknown check {name!r}")
    return reports


def random_quadratic(field, rng, terms=3):
    """A random polynomial with only Gold-type and linear exponents."""
    n = field.n
    exps = [(1 << i) + (1 << j) for i in range(n) for j in range(i, n)]
    picks = rng.choice(len(exps), size=terms, replace=False)
    coeffs = [field.random_element(rng, nonzero=True) for _ in picks]
    return vbf_from_terms(field, [(c, exps[k] % field.order or field.order)
                                  for c, k in zip(coeffs, picks)])


def random_quadratic_triple(field, rng):
    """(F, G, a) with F, G random quadratics and a outside F_{2^m}."""
    Fq = random_quadratic(field, rng)
    Gq = random_quadratic(field, rng)
    while True:
        a = field.random_element(rng, nonzero=True)
        if a + a ** field.q != 0:
            return Fq, Gq, a


def _trace_composed_table(field, Fq, Gq, a):
    aq = (a ** field.q).bits
    return (field.mul(a.bits, field.trace_rel(Fq.table, field.m))
            ^ field.mul(aq, field.trace_rel(Gq.table, field.m)))
