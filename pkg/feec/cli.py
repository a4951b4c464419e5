"""
Command line interface: ``feec <verb> [options]``.

Exit codes: 0 success, 1 verification failure, 2 bad flags,
3 invalid input (mesh, form or parameters).
"""

import io
import csv
import sys
import json
import logging
import argparse
import concurrent.futures

from . import __version__
from .base import FEECError, Malformed, NotSquare, Report, Singular, fstr, to_fraction
from .combinatorics import MultiIndex
from .dof import dof_system, verify_unisolvence
from .duality import (
    PAIRS,
    gram_matrix,
    verify_dependencies,
    verify_gram,
    verify_quadratic_forms,
    verify_wedge_phi_identities,
)
from .forms import NormalForm, add, make_term, verify_identities
from .simplicial import (
    GlobalForm,
    build_complex,
    form_coordinates,
    geometric_decompose,
    load_mesh,
    verify_decomposition,
    verify_extension_axioms,
)
from .spaces import FAMILIES, SpaceId, basis, dimension, verify_bases


log = logging.getLogger("feec.cli")

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


def _emit(stream, fmt, records, header, text):
    """records: list of dicts in header order; text: line formatter"""
    if fmt == "json":
        stream.write(json.dumps(records, indent=None) + "\n")
    elif fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
    else:
        for record in records:
            stream.write(text(record) + "\n")


def _matrix_records(matrix):
    return [[fstr(v) for v in row] for row in matrix.tolist()]


def _emit_matrix(stream, fmt, matrix):
    rows = _matrix_records(matrix)
    if fmt == "json":
        stream.write(json.dumps(rows) + "\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerows(rows)
    else:
        stream.write(str(matrix) + "\n")


def _families(args):
    return FAMILIES if args.family is None else (args.family,)


def _degrees(args, n):
    return range(n + 1) if args.k is None else (args.k,)


def _complex(args):
    """--mesh, or the single simplex [0,...,n]"""
    if args.mesh:
        return load_mesh(args.mesh)
    return build_complex([list(range(args.n + 1))])


def cmd_dims(args, stream):
    records = []
    for family in _families(args):
        for k in _degrees(args, args.n):
            s = SpaceId(family, args.r, k, args.n, ring=args.ring)
            records.append(
                {
                    "family": family,
                    "ring": args.ring,
                    "r": args.r,
                    "k": k,
                    "n": args.n,
                    "dim": dimension(s),
                }
            )
    _emit(
        stream,
        args.format,
        records,
        ["family", "ring", "r", "k", "n", "dim"],
        lambda e: "{}{} k={} dim={}".format(
            "ring" if e["ring"] else "", e["family"], e["k"], e["dim"]
        ),
    )
    return EXIT_OK


def cmd_basis(args, stream):
    records = []
    for family in _families(args):
        for k in _degrees(args, args.n):
            s = SpaceId(family, args.r, k, args.n, ring=args.ring)
            for term in basis(s):
                records.append(
                    {
                        "space": str(s),
                        "kind": term.kind,
                        "alpha": list(term.alpha.exp),
                        "index": list(term.index.image),
                        "term": str(term),
                    }
                )
    _emit(
        stream,
        args.format,
        records,
        ["space", "kind", "alpha", "index", "term"],
        lambda e: "{} {}".format(e["space"], e["term"]),
    )
    return EXIT_OK


def _suite_jobs(args, c):
    """(suite name, keyword arguments) in a fixed order"""
    n, r_max = args.n, args.r
    jobs = [
        ("identities", dict(n=n, r_max=r_max)),
        ("wedge-phi", dict(n=n)),
    ]
    for r in range(r_max + 1):
        for k in range(n + 1):
            jobs.append(("bases", dict(r=r, k=k, n=n)))
            jobs.append(("gram", dict(r=r, k=k, n=n)))
            for which in PAIRS:
                options = dict(which=which, r=r, k=k, n=n, samples=args.samples, seed=args.seed)
                jobs.append(("dependencies", options))
                jobs.append(("quadratic", options))
    cells = [list(cell.vertices) for cell in c.cells]
    for r in range(1, r_max + 1):
        for k in range(c.n + 1):
            for family in FAMILIES:
                jobs.append(("extension", dict(family=family, r=r, k=k, n=c.n)))
                options = dict(family=family, r=r, k=k, cells=cells)
                jobs.append(("unisolvence", options))
                jobs.append(
                    ("decomposition", dict(options, samples=args.samples, seed=args.seed))
                )
    return jobs


def run_suite(job):
    """run one verification suite; top level so a process pool can pickle it"""
    name, options = job
    options = dict(options)
    if name == "identities":
        return verify_identities(**options)
    if name == "wedge-phi":
        return verify_wedge_phi_identities(**options)
    if name == "bases":
        return verify_bases(**options)
    if name == "gram":
        return verify_gram(**options)
    if name == "dependencies":
        return verify_dependencies(**options)
    if name == "quadratic":
        return verify_quadratic_forms(**options)
    if name == "extension":
        return verify_extension_axioms(SpaceId(options.pop("family"), **options))
    cells = options.pop("cells")
    c = build_complex(cells)
    if name == "unisolvence":
        return verify_unisolvence(c, **options)
    if name == "decomposition":
        s = SpaceId(options.pop("family"), options.pop("r"), options.pop("k"), c.n)
        return verify_decomposition(s, c, **options)
    raise ValueError("unknown verification suite {!r}".format(name))


def _run_jobs(jobs, workers):
    if workers <= 1:
        return [run_suite(job) for job in jobs]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_suite, jobs))


def cmd_verify(args, stream):
    c = _complex(args)
    args.n = c.n
    jobs = _suite_jobs(args, c)
    log.info("running {} verification suites with {} jobs".format(len(jobs), args.jobs))
    report = Report("verify")
    for result in _run_jobs(jobs, args.jobs):
        report.extend(result)
    coverage = report.coverage()
    failures = [
        {"family": family, "instance": instance, "detail": detail}
        for family, instance, _, detail in report.failures
    ]
    if args.format == "json":
        stream.write(
            json.dumps(
                {"coverage": coverage, "failures": failures, "passed": report.passed}
            )
            + "\n"
        )
    elif args.format == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["family", "checked"])
        writer.writerows(coverage.items())
    else:
        for family, count in coverage.items():
            stream.write("{:<24} {:>6} checked\n".format(family, count))
        for failure in failures:
            stream.write("FAILED {family} {instance}: {detail}\n".format(**failure))
        if report.passed:
            stream.write("all identities passed\n")
        else:
            stream.write("{} identities failed\n".format(len(failures)))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_pair(args, stream):
    matrix = gram_matrix(args.which, args.r, args.k, args.n)
    _emit_matrix(stream, args.format, matrix)
    return EXIT_OK


def _cell_form(c, s, key, triples):
    form = NormalForm(c.n, s.k, s.r)
    for triple in triples:
        try:
            alpha, sigma, value = triple
            term = make_term(MultiIndex(tuple(alpha)), tuple(sigma), c.n, to_fraction(value))
        except (TypeError, ValueError) as error:
            raise Malformed("cell {}: bad term {!r} ({})".format(key, triple, error)) from error
        if term.k != s.k:
            raise Malformed("cell {}: {!r} is not a {}-form term".format(key, sigma, s.k))
        form = add(form, term)
    return form


def read_global_form(path, s, c):
    """
    JSON map from top cell index to [alpha, sigma, "p/q"] triples in
    normal-form coordinates.
    """
    with open(path) as f:
        try:
            document = json.load(f)
        except ValueError as error:
            raise Malformed("{}: not JSON ({})".format(path, error)) from error
    if not isinstance(document, dict):
        raise Malformed("{}: expected a map from cell index to terms".format(path))
    per_cell = {}
    for key, triples in document.items():
        try:
            cell = c.cells[int(key)]
        except (ValueError, IndexError) as error:
            raise Malformed("{}: no cell {!r}".format(path, key)) from error
        per_cell[cell] = _cell_form(c, s, key, triples)
    return GlobalForm(s, c, per_cell)


def cmd_decompose(args, stream):
    c = _complex(args)
    s = SpaceId(args.family or "P", args.r, args.k, c.n)
    g = read_global_form(args.form, s, c)
    pieces = sorted(
        geometric_decompose(s, c, g).items(), key=lambda item: (item[0].dim, item[0])
    )
    records = [
        {
            "face": list(F.vertices),
            "terms": [
                [list(exp), list(image), fstr(value)]
                for exp, image, value in form_coordinates(piece)
            ],
        }
        for F, piece in pieces
    ]
    if args.format == "text":
        for F, piece in pieces:
            stream.write("{} {}\n".format(F, piece))
    else:
        _emit(stream, args.format, records, ["face", "terms"], str)
    return EXIT_OK


def cmd_dofs(args, stream):
    c = _complex(args)
    family = args.family or "P"
    rows, cols, matrix = dof_system(c, family, args.r, args.k)
    if matrix.rows != matrix.cols:
        raise NotSquare("{} dofs for {} basis forms".format(matrix.rows, matrix.cols))
    det = matrix.det()
    if det == 0:
        raise Singular("dof matrix is singular")
    if args.format == "json":
        document = {
            "rows": [
                {"face": list(phi.face.vertices), "weight": str(phi.term)} for phi in rows
            ],
            "cols": [
                {"face": list(face.vertices), "term": str(term)} for face, term, _ in cols
            ],
            "matrix": _matrix_records(matrix),
            "det": fstr(det),
        }
        stream.write(json.dumps(document) + "\n")
    elif args.format == "csv":
        _emit_matrix(stream, "csv", matrix)
    else:
        _emit_matrix(stream, "text", matrix)
        stream.write("det={}\n".format(fstr(det)))
    return EXIT_OK


COMMANDS = {
    "dims": (cmd_dims, "dimension table of the form spaces"),
    "basis": (cmd_basis, "list the basis spanning terms"),
    "verify": (cmd_verify, "run the identity and theorem suites"),
    "pair": (cmd_pair, "Gram matrix of a duality pairing"),
    "decompose": (cmd_decompose, "face decomposition of a global form"),
    "dofs": (cmd_dofs, "degrees of freedom matrix and its determinant"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="feec", description="Exact finite element exterior calculus"
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="simplex dimension")
    common.add_argument("--r", type=int, default=1, help="polynomial degree")
    common.add_argument("--k", type=int, default=None, help="form degree")
    common.add_argument("--family", choices=FAMILIES, default=None)
    common.add_argument("--ring", action="store_true", help="trace-free subspace")
    common.add_argument("--which", choices=PAIRS, default="first")
    common.add_argument("--mesh", default=None, help='JSON {"cells": [[...], ...]}')
    common.add_argument("--form", default=None, help="JSON global form")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=50)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--log-level", choices=sorted(LOG_LEVELS), default="warning")
    verbs = parser.add_subparsers(dest="verb", metavar="VERB")
    verbs.required = True
    for verb, (_, text) in COMMANDS.items():
        verbs.add_parser(verb, parents=[common], help=text)
    return parser


def _check(args, parser):
    needs_n = args.verb in {"dims", "basis", "pair"}
    if needs_n and args.n is None:
        parser.error("{} needs --n".format(args.verb))
    if args.verb in {"verify", "decompose", "dofs"} and args.n is None and not args.mesh:
        parser.error("{} needs --n or --mesh".format(args.verb))
    if args.verb in {"pair", "decompose", "dofs"} and args.k is None:
        parser.error("{} needs --k".format(args.verb))
    if args.verb == "decompose" and not args.form:
        parser.error("decompose needs --form")
    if args.n is not None and args.n < 0:
        parser.error("--n must be >= 0")
    if args.r < 0:
        parser.error("--r must be >= 0")
    if args.k is not None and (args.k < 0 or (args.n is not None and args.k > args.n)):
        parser.error("--k must lie in [0, n]")
    if args.samples < 0 or args.jobs < 1:
        parser.error("--samples must be >= 0 and --jobs >= 1")


def main(argv=None, stream=None):
    stream = sys.stdout if stream is None else stream
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code
    logging.basicConfig(
        level=LOG_LEVELS[args.log_level],
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        _check(args, parser)
    except SystemExit:
        return EXIT_USAGE
    buffer = io.StringIO()
    try:
        code = COMMANDS[args.verb][0](args, buffer)
    except (NotSquare, Singular) as error:
        log.error("construction failure: {}".format(error))
        return EXIT_FAILED
    except (FEECError, OSError) as error:
        log.error("{}: {}".format(error.__class__.__name__, error))
        return EXIT_INPUT
    stream.write(buffer.getvalue())
    return code
