"""Command-line interface: ``apnwb <command> ...``.

Exit codes: 0 success, 1 a verification came out false, 2 a precondition or
validation failure, 3 an I/O or parse failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import constructions as cons
from . import invariants as inv
from . import theory
from ._kernels import set_workers
from .errors import ApnwbError
from .fileio import ParseError, format_table, read_function, read_params
from .gf2n import DEFAULT_MODULI, get_field
from .vbf import (
    algebraic_degree,
    code_matrix_export,
    differential_spectrum,
    differential_uniformity,
    is_apn,
    walsh_spectrum_extended,
)

EXIT_OK, EXIT_FALSE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3
MAX_LISTED_VIOLATIONS = 100


class Invalid(Exception):
    """Validation failure with a report to print."""

    def __init__(self, report):
        super().__init__(report)
        self.report = report


def _dump(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _open_out(out):
    if out is None or out == "-":
        return sys.stdout, False
    return open(out, "w", newline=""), True


def _field(args):
    modulus = int(args.modulus, 16) if getattr(args, "modulus", None) else None
    return get_field(args.n, modulus)


# -- commands ---------------------------------------------------------------

def cmd_field_info(args):
    F = _field(args)
    _dump({"n": F.n, "modulus": hex(F.modulus), "default_modulus": F.modulus == DEFAULT_MODULI[F.n],
           "primitive": hex(F.gen), "m": F.m, "q": F.q,
           "cubes_differ": F.order % 3 == 0}, args.output)
    return EXIT_OK


def cmd_build(args):
    params = read_params(args.params)
    F = params.field
    item = params.coeffs.get("item")
    if params.family == "Fs" and item is not None:
        c = params.coeffs
        rep = cons.check_theorem31_item(F, str(item), int(c["s"]), c.get("a"), c["b"], c["c"],
                                        c.get("reading", "statement"))
        if not rep.satisfied:
            raise Invalid({"item": rep.item, "satisfied": False, "witness": rep.witness})
    f = cons.build(params)
    text = format_table(f)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_verify(args):
    f = read_function(args.function)
    apn = is_apn(f)
    _dump({"apn": apn, "uniformity": differential_uniformity(f), "degree": algebraic_degree(f)},
          args.output)
    return EXIT_OK if apn else EXIT_FALSE


def cmd_spectrum(args):
    f = read_function(args.function)
    out = {}
    if args.kind in ("differential", "both"):
        out["differential"] = json.loads(differential_spectrum(f).to_json())
    if args.kind in ("walsh", "both"):
        out["walsh"] = json.loads(walsh_spectrum_extended(f).to_json())
    _dump(out, args.output)
    return EXIT_OK


def cmd_fingerprint(args):
    f = read_function(args.function)
    _dump(inv.fingerprint(f, args.gamma).to_dict(), args.output)
    return EXIT_OK


def cmd_compare(args):
    f = read_function(args.function)
    catalog = inv.load_catalog(args.catalog)
    _dump(inv.compare(f, catalog, gamma=False), args.output)
    return EXIT_OK


def cmd_export_code(args):
    f = read_function(args.function)
    fh, close = _open_out(args.output)
    try:
        code_matrix_export(f, fh, args.format)
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_catalog(args):
    cat = cons.catalog_f2_10()
    if args.write:
        doc = inv.catalog_document(cat)
        with open(args.write, "w") as fh:
            fh.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if args.dump_dir:
        os.makedirs(args.dump_dir, exist_ok=True)
        for k, (name, f) in enumerate(cat):
            with open(os.path.join(args.dump_dir, f"{k:02d}.txt"), "w") as fh:
                fh.write(format_table(f))
    rows = [{"index": k, "name": name, "apn": is_apn(f), "degree": algebraic_degree(f)}
            for k, (name, f) in enumerate(cat)]
    _dump({"modulus": hex(cat[0][1].field.modulus),
           "gamma": str(cons.subfield_generator(cat[0][1].field, 5)),
           "entries": rows}, args.output)
    return EXIT_OK if all(r["apn"] for r in rows) else EXIT_FALSE


def _report_dict(rep):
    d = rep.to_dict()
    d["violation_count"] = len(d["violations"])
    d["violations"] = d["violations"][:MAX_LISTED_VIOLATIONS]
    return d


def cmd_check_theory(args):
    F = _field(args)
    rng = np.random.default_rng(args.seed)
    if args.which == "lemma32" and args.s is not None:
        reports = [theory.lemma32_scan(F, args.s)]
    else:
        reports = theory.run_checks(F, args.which, rng=rng, chain_samples=args.samples)
    out = [_report_dict(r) for r in reports]
    _dump({"n": F.n, "modulus": hex(F.modulus), "checks": out}, args.output)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FALSE


# -- search -----------------------------------------------------------------

def _exp(x):
    return str(x) if not hasattr(x, "field") else (f"z^{x.log()}" if x else "0")


def _z(F, bits):
    return _exp(F(int(bits)))


def _sample(rng, items, k):
    if not k or k >= len(items):
        return list(items)
    idx = np.sort(rng.choice(len(items), size=k, replace=False))
    return [items[i] for i in idx]


def _search_rows(args, F, rng, deadline):
    space = args.space
    if space == "Pm2":
        cubes = [int(x) for x in F.nonzero_elements() if F.is_cube(x)]
        U = cons.pm2_u_set(F)
        k = args.samples or len(cubes) * len(U)
        picks = sorted({(int(rng.choice(cubes)), int(rng.integers(len(U)))) for _ in range(k)})
        yield ["b", "c", "u", "apn"]
        for b, ui in picks:
            if time.monotonic() > deadline:
                return
            for hit in cons.search_Pm2(F, [F(b)], [U[ui]]):
                yield [_exp(hit.b), _exp(hit.c), _exp(U[ui]), int(hit.apn)]
    elif space == "corollary":
        noncubes = [int(x) for x in F.nonzero_elements() if not F.is_cube(x)]
        bs = _sample(rng, noncubes, args.samples)
        a = F.primitive
        yield ["variant", "a", "b", "apn"]
        for v in (1, 2):
            for b in bs:
                if time.monotonic() > deadline:
                    return
                yield [v, _exp(a), _z(F, b), int(is_apn(cons.build_corollary(F, v, a, F(b))))]
    elif space == "fs-item":
        item = args.item
        s = cons.item_s(F, item)
        readings = cons.ITEM_IV_READINGS if item == "iv" else ("statement",)
        yield ["item", "reading", "s", "a", "b", "c", "apn"]
        a = F.primitive
        for reading in readings:
            mask = cons.theorem31_condition_mask(F, item, s if s is not None else 0, reading)
            pairs = [tuple(int(v) for v in p) for p in np.argwhere(mask)]
            for b, c in _sample(rng, pairs, args.samples):
                if time.monotonic() > deadline:
                    return
                f = cons.build_fs(F, s, a, F(b), F(c))
                yield [item, reading, s, _exp(a), _z(F, b), _z(F, c), int(is_apn(f))]
    elif space == "example1-fallback":
        yield ["e", "apn"]
        for k in cons.example1_scan(F):
            yield [f"z^{k}", 1]
    else:
        raise ValueError(f"unknown search space {space!r}")


def cmd_search(args):
    F = _field(args)
    rng = np.random.default_rng(args.seed)
    deadline = time.monotonic() + args.budget if args.budget else float("inf")
    fh, close = _open_out(args.output)
    try:
        w = csv.writer(fh, lineterminator="\n")
        for row in _search_rows(args, F, rng, deadline):
            w.writerow(row)
    finally:
        if close:
            fh.close()
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def _add_field_args(p):
    p.add_argument("--n", type=int, required=True, help="extension degree")
    p.add_argument("--modulus", help="irreducible modulus as hex (default: Conway)")


def build_parser():
    ap = argparse.ArgumentParser(prog="apnwb", description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, help="threads for parallel kernels "
                    "(default: $APNWB_THREADS, else all cores)")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        return p

    p = cmd("field-info", cmd_field_info, "describe a field")
    _add_field_args(p)
    p = cmd("build", cmd_build, "tabulate a function from a parameter JSON file")
    p.add_argument("params")
    for name, fn, help_ in (("verify", cmd_verify, "APN check, uniformity and degree"),
                            ("fingerprint", cmd_fingerprint, "CCZ-invariant fingerprint"),
                            ("compare", cmd_compare, "compare against a fingerprint catalog"),
                            ("spectrum", cmd_spectrum, "differential and Walsh spectra"),
                            ("export-code", cmd_export_code, "write the code generator matrix")):
        p = cmd(name, fn, help_)
        p.add_argument("function", help="truth-table file or parameter JSON")
    sub.choices["fingerprint"].add_argument(
        "--gamma", action=argparse.BooleanOptionalAction, default=None,
        help="include the gamma rank (default: only for n <= 6)")
    sub.choices["compare"].add_argument("--catalog", help="catalog JSON (default: shipped)")
    sub.choices["spectrum"].add_argument("--kind", choices=("differential", "walsh", "both"),
                                         default="both")
    sub.choices["export-code"].add_argument("--format", choices=("plain", "magma"),
                                            default="plain")
    p = cmd("check-theory", cmd_check_theory, "run the lemma and theorem scans")
    _add_field_args(p)
    p.add_argument("--which", choices=("all",) + theory.THEORY_CHECKS, default="all")
    p.add_argument("--s", type=int, help="exponent for lemma32 (default: 3^-1 mod n)")
    p.add_argument("--samples", type=int, help="sampled (d, x) pairs for the corollary "
                   "chain (default: exhaustive)")
    p.add_argument("--seed", type=int, default=0)
    p = cmd("search", cmd_search, "search coefficient spaces, CSV output")
    p.add_argument("space", choices=("Pm2", "corollary", "fs-item", "example1-fallback"))
    _add_field_args(p)
    p.add_argument("--item", choices=cons.THEOREM_ITEMS, default="iii")
    p.add_argument("--samples", type=int, default=20, help="candidates to test (0 = all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=float, help="stop after this many seconds")
    p = cmd("catalog", cmd_catalog, "list and verify the GF(2^10) catalog")
    p.add_argument("--write", help="regenerate the fingerprint catalog JSON at this path")
    p.add_argument("--dump-dir", help="write every entry as a truth-table file")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    workers = args.workers if args.workers is not None else os.environ.get("APNWB_THREADS")
    try:
        if workers is not None:
            set_workers(int(workers))
        return args.func(args)
    except Invalid as exc:
        print(json.dumps(exc.report, sort_keys=True), file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ApnwbError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
