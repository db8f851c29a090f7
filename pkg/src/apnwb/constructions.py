"""Generators for the trace-composed APN families and the GF(2^10) catalog.

All functions here have the shape

    f(x) = a Tr^n_m(F(x)) + a^q Tr^n_m(G(x)),   n = 2m, q = 2^m, a + a^q != 0,

with F and G quadratic. Builders return :class:`~apnwb.vbf.VBF` objects that
record a :class:`ConstructionParams` as provenance so they can be written to
and rebuilt from JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from ._kernels import apn_batch
from .errors import CubeB, DegenerateA, NonzeroConstant, OddExtension, OddnessViolation, ZeroInput
from .gf2n import FieldElement, get_field, is_cube
from .vbf import VBF, is_apn, vbf_from_eval, vbf_from_terms

FAMILIES = (
    "TraceComposed",
    "Fs",
    "Hexanomial",
    "CorollaryH",
    "F14Quadrinomial",
    "PowerMap",
    "F3Instance",
    "F4",
    "F12Taniguchi",
    "Sporadic",
)

TERM_SLOTS = ("F_terms", "G_terms", "terms")
INT_SLOTS = ("s", "i", "variant", "exponent")
TEXT_SLOTS = ("item", "reading")

THEOREM_ITEMS = ("i", "ii", "iii", "iv", "v", "vi", "vii")
ITEM_IV_READINGS = ("statement", "proof")


# -- parameters -------------------------------------------------------------

def encode_value(v):
    if isinstance(v, FieldElement):
        return f"z^{v.log()}" if v else "0x0"
    if isinstance(v, (list, tuple)):
        return [encode_value(x) for x in v]
    return v


def decode_value(field, v):
    """'z^k' -> primitive**k, '0x..' -> raw bits, lists recursively, ints as is."""
    if isinstance(v, str):
        s = v.strip()
        if s.startswith("z^"):
            return field.z(int(s[2:]))
        return field(int(s, 16))
    if isinstance(v, list):
        return [decode_value(field, x) for x in v]
    return v


def _decode_terms(field, terms):
    # exponents stay ints even though decode_value would leave them alone
    return [(decode_value(field, c), int(e)) for c, e in terms]


@dataclass
class ConstructionParams:
    """A family tag plus its named coefficients.

    Field-element coefficients are :class:`FieldElement` objects; integer
    slots (s, i, variant, exponent, item) are plain ints or strings.
    """

    family: str
    n: int
    coeffs: dict = dc_field(default_factory=dict)
    modulus: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        F = self.field
        for name, v in self.coeffs.items():
            for x in v if isinstance(v, list) else [v]:
                if isinstance(x, FieldElement) and x.field != F:
                    raise ValueError(f"coefficient {name} is not in {F}")

    @property
    def field(self):
        return get_field(self.n, self.modulus)

    def to_dict(self):
        d = {"family": self.family, "field_n": self.n,
             "coeffs": {k: encode_value(v) for k, v in self.coeffs.items()}}
        if self.modulus is not None:
            d["modulus"] = hex(self.modulus)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        n = int(d["field_n"])
        modulus = int(d["modulus"], 16) if d.get("modulus") else None
        F = get_field(n, modulus)
        coeffs = {}
        for k, v in d.get("coeffs", {}).items():
            if k in TERM_SLOTS:
                coeffs[k] = _decode_terms(F, v)
            elif k in INT_SLOTS:
                coeffs[k] = int(v)
            elif k in TEXT_SLOTS:
                coeffs[k] = str(v)
            else:
                coeffs[k] = decode_value(F, v)
        return cls(d["family"], n, coeffs, modulus)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ConditionReport:
    item: str
    satisfied: bool
    witness: str | None = None

    def __post_init__(self):
        if not self.satisfied and not self.witness:
            raise ValueError("an unsatisfied report needs a witness")


# -- helpers ----------------------------------------------------------------

def _check_a(field, a):
    field.require_even()
    if a + a ** field.q == 0:
        raise DegenerateA(f"a = {a} satisfies a + a^q = 0")


def _require_m_odd(field):
    field.require_even()
    if field.m % 2 == 0:
        raise OddExtension(f"n/2 = {field.m} must be odd")


def _tr(field, arr):
    return field.trace_rel(arr, field.m)


def _combine(field, a, Ftab, Gtab):
    """a Tr(F) + a^q Tr(G) on tables (broadcasts over leading axes)."""
    a = int(a)
    aq = int(field.pow(a, field.q))
    return field.mul(a, _tr(field, Ftab)) ^ field.mul(aq, _tr(field, Gtab))


def _monomial(field, e):
    return field.pow(field.elements(), e)


def _sub(field, name, v):
    if isinstance(v, FieldElement):
        return v
    return field(int(v))


# -- builders ---------------------------------------------------------------

def build_trace_composed(field, F_terms, G_terms, a):
    """a Tr^n_m(F(x)) + a^q Tr^n_m(G(x)) for F, G given as (coeff, exponent) terms."""
    _check_a(field, a)
    Fv = vbf_from_terms(field, F_terms)
    Gv = vbf_from_terms(field, G_terms)
    if Fv.table[0] or Gv.table[0]:
        raise NonzeroConstant("F(0) and G(0) must be 0")
    params = ConstructionParams("TraceComposed", field.n,
                                {"a": a, "F_terms": list(F_terms), "G_terms": list(G_terms)},
                                _mod(field))
    return VBF(field, _combine(field, a, Fv.table, Gv.table), params)


def _mod(field):
    return None if field == get_field(field.n) else field.modulus


def build_fs(field, s, a, b, c):
    """f_s(x) = a Tr(b x^3) + a^q Tr(c x^(2^s+1))."""
    _require_m_odd(field)
    _check_a(field, a)
    if not b or not c:
        raise ZeroInput("b c must be nonzero")
    if s % 2 == 0:
        raise OddnessViolation(f"s = {s} must be odd")
    tab = _combine(field, a,
                   field.mul(b.bits, _monomial(field, 3)),
                   field.mul(c.bits, _monomial(field, (1 << s) + 1)))
    params = ConstructionParams("Fs", field.n, {"s": s, "a": a, "b": b, "c": c}, _mod(field))
    return VBF(field, tab, params)


def build_hexanomial(field, i, s, b, c, g, e, a):
    """a Tr(b x^(2^i+1) + c x^(2^(i+m)+1)) + a^q Tr(g x^(2^s+1) + e x^(2^(s+m)+1))."""
    _check_a(field, a)
    m = field.m
    Ftab = (field.mul(int(b), _monomial(field, (1 << i) + 1))
            ^ field.mul(int(c), _monomial(field, (1 << (i + m)) + 1)))
    Gtab = (field.mul(int(g), _monomial(field, (1 << s) + 1))
            ^ field.mul(int(e), _monomial(field, (1 << (s + m)) + 1)))
    params = ConstructionParams("Hexanomial", field.n,
                                {"i": i, "s": s, "a": a, "b": b, "c": c, "g": g, "e": e},
                                _mod(field))
    return VBF(field, _combine(field, a, Ftab, Gtab), params)


def corollary_coefficients(field, variant, b):
    """(g, e) for the two s = 2 hexanomial families."""
    if variant == 1:
        return field.one, (b ** (2 * field.q - 2)).inverse()
    if variant == 2:
        return b, b
    raise ValueError(f"variant must be 1 or 2, got {variant!r}")


def build_corollary(field, variant, a, b):
    """h(x) = a Tr(b x^3) + a^q Tr(g x^5 + e x^(4q+1)), b a non-cube."""
    _require_m_odd(field)
    _check_a(field, a)
    if is_cube(b):
        raise CubeB(f"b = {b} is a cube")
    g, e = corollary_coefficients(field, variant, b)
    f = build_hexanomial(field, 1, 2, b, field.zero, g, e, a)
    params = ConstructionParams("CorollaryH", field.n, {"variant": variant, "a": a, "b": b},
                                _mod(field))
    return VBF(field, f.table, params)


def build_power(field, exponent):
    params = ConstructionParams("PowerMap", field.n, {"exponent": int(exponent)}, _mod(field))
    return vbf_from_terms(field, [(field.one, exponent)], params)


def build_f14(field, s):
    """x^3 + w x^(2^s+1) + w^2 x^(3q) + x^((2^s+1) q), w = z^((2^n-1)/3)."""
    field.require_even()
    w = field.z(field.order // 3)
    q = field.q
    terms = [(field.one, 3), (w, (1 << s) + 1), (w * w, 3 * q % field.order),
             (field.one, ((1 << s) + 1) * q % field.order)]
    params = ConstructionParams("F14Quadrinomial", field.n, {"s": s}, _mod(field))
    return vbf_from_terms(field, terms, params)


def build_f4(field, alpha):
    """x^3 + alpha^-1 Tr^n_1(alpha^3 x^9)."""
    xs = field.elements()
    tr = field.trace(field.mul((alpha ** 3).bits, field.pow(xs, 9)))
    tab = field.pow(xs, 3) ^ np.where(tr == 1, alpha.inverse().bits, 0)
    params = ConstructionParams("F4", field.n, {"alpha": alpha}, _mod(field))
    return VBF(field, tab, params)


def build_taniguchi(field, i, alpha, beta, u=None):
    """u(u^q x + u x^q)(x + x^q) + (u^q x + u x^q)^(2^2i + 2^3i)
    + alpha (u^q x + u x^q)^(2^2i) (x + x^q)^(2^i) + beta (x + x^q)^(2^i + 1)."""
    field.require_even()
    u = field.primitive if u is None else u
    m, q = field.m, field.q
    ub, uq = u.bits, (u ** q).bits

    def ev(x):
        L = field.mul(uq, x) ^ field.mul(ub, field.frob(x, m))
        T = x ^ field.frob(x, m)
        return (field.mul(ub, field.mul(L, T))
                ^ field.pow(L, (1 << 2 * i) + (1 << 3 * i))
                ^ field.mul(int(alpha), field.mul(field.frob(L, 2 * i), field.frob(T, i)))
                ^ field.mul(int(beta), field.pow(T, (1 << i) + 1)))

    params = ConstructionParams("F12Taniguchi", field.n,
                                {"i": i, "alpha": alpha, "beta": beta, "u": u}, _mod(field))
    return vbf_from_eval(field, ev, provenance=params)


def build_terms(field, terms, family="Sporadic"):
    params = ConstructionParams(family, field.n, {"terms": list(terms)}, _mod(field))
    return vbf_from_terms(field, terms, params)


def build(params):
    """Rebuild a VBF from :class:`ConstructionParams`."""
    F = params.field
    c = params.coeffs
    fam = params.family
    if fam == "TraceComposed":
        return build_trace_composed(F, c["F_terms"], c["G_terms"], c["a"])
    if fam == "Fs":
        return build_fs(F, int(c["s"]), c["a"], c["b"], c["c"])
    if fam == "Hexanomial":
        return build_hexanomial(F, int(c["i"]), int(c["s"]), c["b"], c["c"], c["g"], c["e"], c["a"])
    if fam == "CorollaryH":
        return build_corollary(F, int(c["variant"]), c["a"], c["b"])
    if fam == "F14Quadrinomial":
        return build_f14(F, int(c["s"]))
    if fam == "PowerMap":
        return build_power(F, int(c["exponent"]))
    if fam == "F4":
        return build_f4(F, c["alpha"])
    if fam == "F12Taniguchi":
        return build_taniguchi(F, int(c["i"]), c["alpha"], c["beta"], c.get("u"))
    return build_terms(F, c["terms"], fam)


# -- theorem side conditions ------------------------------------------------

def _item_exponent(s):
    return (1 << 2 * s) - (1 << s) + 1


def _inverse_mod(a, n):
    try:
        return pow(a, -1, n)
    except ValueError:
        return None


def item_s(field, item):
    """The exponent s an item prescribes for n = 2m (None if undefined)."""
    n, m = field.n, field.m
    if item == "i":
        return m - 2
    if item == "ii":
        return _inverse_mod(m - 2, n)
    if item == "iii":
        return 3
    if item == "iv":
        return _inverse_mod(3, n)
    if item == "v":
        return m
    if item == "vi":
        return m + 2
    if item == "vii":
        return n - 1
    raise ValueError(f"unknown item {item!r}")


def check_theorem31_item(field, item, s, a, b, c, reading="statement"):
    """Evaluate the hypotheses under which f_s is claimed APN for one item.

    "x in F_{2^m}" conditions on ratios are read as "nonzero and fixed by
    x -> x^q". Item iv has two readings: ``"statement"`` checks
    c / b^(2^2s - 2^s + 1) and ``"proof"`` checks c^(2^2s - 2^s + 1) / b.
    ``a`` may be None to skip the a not in F_q hypothesis.
    """
    if item not in THEOREM_ITEMS:
        raise ValueError(f"unknown item {item!r}")
    fails = []
    if field.m is None or field.m % 2 == 0:
        return ConditionReport(item, False, "n is not twice an odd integer")
    n, m, q = field.n, field.m, field.q
    if a is not None and a + a ** q == 0:
        fails.append("a lies in F_{2^m}")
    if not b or not c:
        fails.append("bc = 0")
        return ConditionReport(item, False, "; ".join(fails))
    if s % 2 == 0:
        fails.append("s is even")

    def in_sub_star(x):
        return bool(x) and x.in_subfield(m)

    noncube_b = item != "vii"
    if noncube_b and is_cube(b):
        fails.append("b is a cube")

    target = item_s(field, item)
    if target is None or s % n != target % n:
        fails.append(f"s = {s} is not the exponent for item {item}")

    if item == "i":
        if not in_sub_star(c ** 4 / b):
            fails.append("c^4/b not in F_{2^m}*")
    elif item == "ii":
        if not in_sub_star(c ** ((1 << s) - 1) / b ** (1 << 2 * s)):
            fails.append("c^(2^s-1)/b^(2^2s) not in F_{2^m}*")
    elif item == "iii":
        if not in_sub_star(c / b ** 3):
            fails.append("c/b^3 not in F_{2^m}*")
    elif item == "iv":
        if math.gcd(3, m) != 1:
            fails.append("gcd(3, m) != 1")
        if (3 * s) % n != 1:
            fails.append("3s != 1 mod n")
        e = _item_exponent(s)
        if reading == "statement":
            ratio = c / b ** e
        elif reading == "proof":
            ratio = c ** e / b
        else:
            raise ValueError(f"unknown reading {reading!r}")
        if not in_sub_star(ratio):
            fails.append(f"item iv ratio ({reading} reading) not in F_{{2^m}}*")
    elif item == "v":
        if c.in_subfield(m):
            fails.append("c in F_{2^m}")
    elif item == "vi":
        if not in_sub_star(b * c):
            fails.append("bc not in F_{2^m}*")
    elif item == "vii":
        if (c * c / b).in_subfield(m):
            fails.append("c^2/b in F_{2^m}")
    if fails:
        return ConditionReport(item, False, "; ".join(fails))
    return ConditionReport(item, True)


def theorem31_condition_mask(field, item, s, reading="statement"):
    """Boolean matrix M[b, c] over all b, c: does (s, b, c) meet the item's
    coefficient conditions? Structural conditions on s and m are folded in,
    so the whole matrix is False when they fail. The a hypothesis is not
    included."""
    size = field.size
    none = np.zeros((size, size), dtype=bool)
    if field.m is None or field.m % 2 == 0:
        return none
    n, m = field.n, field.m
    target = item_s(field, item)
    if s % 2 == 0 or target is None or s % n != target % n:
        return none
    if item == "iv" and (math.gcd(3, m) != 1 or (3 * s) % n != 1):
        return none
    xs = field.elements()
    B = xs[:, None]
    C = xs[None, :]
    nonzero = (B != 0) & (C != 0)
    noncube_b = ~field.is_cube(xs)[:, None]

    def in_sub_star(r):
        return (r != 0) & field.in_subfield(r, m)

    safe_b = np.where(B == 0, 1, B)
    if item == "i":
        cond = in_sub_star(field.div(field.pow(C, 4), safe_b))
    elif item == "ii":
        cond = in_sub_star(field.div(field.pow(C, (1 << s) - 1), field.pow(safe_b, 1 << 2 * s)))
    elif item == "iii":
        cond = in_sub_star(field.div(C, field.pow(safe_b, 3)))
    elif item == "iv":
        e = _item_exponent(s)
        if reading == "statement":
            cond = in_sub_star(field.div(C, field.pow(safe_b, e)))
        elif reading == "proof":
            cond = in_sub_star(field.div(field.pow(C, e), safe_b))
        else:
            raise ValueError(f"unknown reading {reading!r}")
    elif item == "v":
        cond = ~field.in_subfield(C, m)
    elif item == "vi":
        cond = in_sub_star(field.mul(B, C))
    elif item == "vii":
        cond = ~field.in_subfield(field.div(field.mul(C, C), safe_b), m)
    if item != "vii":
        cond = cond & noncube_b
    return cond & nonzero


def fs_tables(field, s, a_values, pairs):
    """Truth tables of f_s for every a in a_values and (b, c) in pairs.

    Returns an array of shape (len(a_values), len(pairs), 2^n).
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    cube = _monomial(field, 3)
    gold = _monomial(field, (1 << s) + 1)
    TF = _tr(field, field.mul(pairs[:, :1], cube[None, :]))
    TG = _tr(field, field.mul(pairs[:, 1:], gold[None, :]))
    out = np.empty((len(a_values), len(pairs), field.size), dtype=np.int64)
    for k, a in enumerate(a_values):
        a = int(a)
        aq = int(field.pow(a, field.q))
        out[k] = field.mul(a, TF) ^ field.mul(aq, TG)
    return out


def outside_half_field(field):
    """All a with a + a^q != 0, as ints."""
    xs = field.elements()
    return xs[~field.in_subfield(xs, field.m)]


def apn_many(tables):
    """Vectorised is_apn over the last axis."""
    t = np.asarray(tables, dtype=np.int64)
    flat = t.reshape(-1, t.shape[-1])
    return apn_batch(flat).reshape(t.shape[:-1])


# -- searches ---------------------------------------------------------------

def pm2_u_set(field):
    """{(z^j)^i : gcd(3, i) = 1} with j = (2^m + 1)/3, as FieldElements."""
    _require_m_odd(field)
    j = (field.q + 1) // 3
    ks = sorted({(j * i) % field.order for i in range(1, field.order + 1) if i % 3})
    return [field.z(k) for k in ks]


def _pm2_ratio(field):
    """R(x) = (x^q + x^4) / (x + x^2) over x not in {0, 1}, and x + x^2."""
    xs = field.elements()[2:]
    c = xs ^ field.mul(xs, xs)
    num = field.frob(xs, field.m) ^ field.pow(xs, 4)
    return field.div(num, c), c


def satisfies_pm2(field, b, c):
    """Whether (b, c) has the property that makes f_{m-2} APN.

    b must be a nonzero cube and c nonzero; then for every x outside {0, 1},
    (c^4/b) (x^q + x^4)/(x + x^2) in F_{2^m} must force x + x^2 to be a
    non-cube.
    """
    _require_m_odd(field)
    if not b or not c or not is_cube(b):
        return False
    R, cc = _pm2_ratio(field)
    w = (c ** 4 / b).bits
    hyp = field.in_subfield(field.mul(w, R), field.m)
    return not bool(np.any(hyp & field.is_cube(cc)))


@dataclass(frozen=True)
class Pm2Hit:
    b: FieldElement
    c: FieldElement
    apn: bool


def search_Pm2(field, b_set, u_set, a=None):
    """Pairs (b, c) with c^4/b = u for u in u_set that satisfy the property.

    Each hit is also checked directly: ``apn`` is is_apn(f_{m-2}) with the
    given a (default: the primitive element).
    """
    _require_m_odd(field)
    a = field.primitive if a is None else a
    s = field.m - 2
    hits = []
    for b in sorted(b_set, key=int):
        for u in sorted(u_set, key=int):
            c = (u * b) ** pow(2, field.n - 2)  # fourth root
            if satisfies_pm2(field, b, c):
                hits.append(Pm2Hit(b, c, is_apn(build_fs(field, s, a, b, c))))
    return hits


# -- the sporadic hexanomial over GF(2^10) ----------------------------------

EXAMPLE1_E_EXPONENT = 369


def example1_instance(field=None, e_exponent=EXAMPLE1_E_EXPONENT):
    """a Tr(b x^3) + a^q Tr(g x^5 + e x^(4q+1)) with a = z, b = 1, g = z, e = z^369."""
    field = get_field(10) if field is None else field
    z = field.primitive
    return build_hexanomial(field, 1, 2, field.one, field.zero, z, field.z(e_exponent), z)


def example1_scan(field=None):
    """All k in [0, 2^n - 1) for which e = z^k makes the instance APN."""
    field = get_field(10) if field is None else field
    z = field.primitive
    base = example1_instance(field).table
    # only the e x^(4q+1) term depends on e
    X = _monomial(field, 4 * field.q + 1)
    aq = (z ** field.q).bits
    e_vals = field.exp_table[:field.order]
    e_part = field.mul(aq, _tr(field, field.mul(e_vals[:, None], X[None, :])))
    e0 = field.z(EXAMPLE1_E_EXPONENT).bits
    fixed = base ^ field.mul(aq, _tr(field, field.mul(e0, X)))
    ok = apn_many(fixed[None, :] ^ e_part)
    return [int(k) for k in np.nonzero(ok)[0]]


def example1_verify(field=None):
    """Check the instance; if it is not APN under this representation, also
    report every exponent k such that e = z^k gives an APN instance."""
    field = get_field(10) if field is None else field
    apn = is_apn(example1_instance(field))
    report = {"apn": apn, "e_exponent": EXAMPLE1_E_EXPONENT, "modulus": hex(field.modulus)}
    if not apn:
        report["fallback_exponents"] = example1_scan(field)
    return report


# -- catalog ----------------------------------------------------------------

def subfield_generator(field, m):
    """Smallest-bit-value element of multiplicative order 2^m - 1."""
    order = (1 << m) - 1
    xs = field.nonzero_elements()
    logs = field.log_table[xs]
    orders = field.order // np.gcd(logs, field.order)
    return field(int(xs[orders == order].min()))


TANIGUCHI_BETAS = {1: (0, 7, 11), 2: (0, 3, 15)}


def catalog_f2_10(field=None):
    """Representatives of the known CCZ classes of APN functions over GF(2^10)."""
    F = get_field(10) if field is None else field
    if F.n != 10:
        raise ValueError("the catalog is defined over GF(2^10)")
    z = F.primitive
    q = F.q
    gamma = subfield_generator(F, 5)
    out = [
        ("Gold x^3", build_power(F, 3)),
        ("Gold x^9", build_power(F, 9)),
        ("Kasami x^57", build_power(F, 57)),
        ("Dobbertin x^339", build_power(F, 339)),
        ("F3 x^6+x^33+z^31x^192",
         build_terms(F, [(F.one, 6), (F.one, 33), (F.z(31), 192)], "F3Instance")),
        ("F3 x^33+x^72+z^31x^258",
         build_terms(F, [(F.one, 33), (F.one, 72), (F.z(31), 258)], "F3Instance")),
        ("F4 x^3+Tr(x^9)", build_f4(F, F.one)),
        ("F4 x^3+z^-1Tr(z^3x^9)", build_f4(F, z)),
    ]
    for i, exps in TANIGUCHI_BETAS.items():
        for k in exps:
            out.append((f"F12 i={i} alpha=1 beta=g^{k}", build_taniguchi(F, i, F.one, gamma ** k, z)))
    out += [
        ("sporadic x^3+z^341x^36", build_terms(F, [(F.one, 3), (F.z(341), 36)])),
        ("F14 s=3", build_f14(F, 3)),
        ("F14 s=7", build_f14(F, 7)),
        ("F15 zTr(zx^3)+z^qTr(z^3x^9)", build_fs(F, 3, z, z, z ** 3)),
        ("sporadic zTr(x^3)+z^qTr(z^11x^9)", build_fs(F, 3, z, F.one, F.z(11))),
        ("sporadic zTr(x^3)+z^qTr(zx^5+z^369x^(4q+1))", example1_instance(F)),
    ]
    assert q == 32
    return out
