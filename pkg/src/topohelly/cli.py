"""Batch command-line front end.

Every command prints (or writes with ``--output``) one JSON report carrying
a ``status`` field.  Exit codes: 0 all verdicts hold, 1 a verdict failed or
a theorem's hypothesis does not hold, 2 usage or parse error, 3 resource
cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .corpus import load_config, run_corpus
from .errors import (EmptySpaceError, MalformedInputError, ResourceLimitError, TopoHellyError,
                     UnsupportedCoefficientsError)
from .generators import GeneratorSpec, generate
from .helly import (fractional_helly_check, intersection_depth, point_coordinates, pq_condition,
                    transversal_number)
from .homology import betti_numbers_field, homology, reduced_homology
from .io import dumps, family_to_json, load_complex, load_family, read_json
from .linalg import check_characteristic
from .nerve import (DEFAULT_MAX_N, DEFAULT_MAX_VERTICES, IntersectionHomology, is_k_acyclic_family,
                    leray_analysis, nerve)
from .spectral import convergence_check, nerve_theorem_check

LOG_ENV = "TOPOHELLY_LOG_LEVEL"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

log = logging.getLogger("topohelly")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _status(ok: bool) -> tuple[str, int]:
    return ("ok", EXIT_OK) if ok else ("fail", EXIT_FAIL)


def _homology_json(h):
    out = h.to_json()
    out["groups_text"] = {str(n): h.group(n) for n in range(len(h.betti))}
    return out


def cmd_homology(args):
    K = load_complex(args.input)
    result = {"cells": len(K), "dim": K.dim, "integral": _homology_json(homology(K)),
              "reduced": _homology_json(reduced_homology(K))}
    if args.field is not None:
        result["field"] = {"characteristic": args.field, "betti": betti_numbers_field(K, args.field)}
    return "ok", EXIT_OK, result


def cmd_nerve(args):
    fam = load_family(args.input)
    N = nerve(fam)
    facets = N.facets()
    result = {
        "n": fam.n, "names": list(fam.names), "dim": N.complex.dim, "faces": len(N.faces),
        "facets": [list(f) for f in facets],
        "facets_named": [[fam.names[i] for i in f] for f in facets],
        "back_map": [{"face": list(f), "intersection_cells": len(N.intersection(f))} for f in facets],
    }
    return "ok", EXIT_OK, result


def cmd_leray(args):
    doc = read_json(args.input)
    if isinstance(doc, dict) and "members" in doc:
        K, source = nerve(load_family(args.input)).complex, "nerve"
    else:
        K, source = load_complex(args.input), "complex"
        if K.kind != "simplicial":
            raise MalformedInputError("Leray numbers are computed for simplicial complexes")
    result = leray_analysis(K, args.max_vertices).to_json()
    result["source"] = source
    return "ok", EXIT_OK, result


def _family_k(fam, k, max_n):
    if k is not None:
        return k, None
    if fam.n > max_n:
        raise UsageError("--k is required above the enumeration cap")
    ih = IntersectionHomology(fam, max_n)
    return ih.minimal_k(), ih


def cmd_acyclic(args):
    fam = load_family(args.input)
    k, ih = _family_k(fam, args.k, args.max_n)
    rep = is_k_acyclic_family(fam, k, max_n=args.max_n, intersections=ih)
    st, code = _status(rep.verdict)
    return st, code, rep.to_json(fam.names)


def cmd_fh(args):
    fam = load_family(args.input)
    k = args.k if args.k is not None else fam.grid_dimension
    rep = fractional_helly_check(fam, k, max_n=args.max_n)
    result = rep.to_json(fam.names)
    if not rep.hypothesis_holds:
        return "hypothesis-failed", EXIT_FAIL, result
    st, code = _status(rep.verdict)
    return st, code, result


def cmd_pq(args):
    if args.p is None or args.q is None:
        raise UsageError("pq needs --p and --q")
    fam = load_family(args.input)
    pq = pq_condition(fam, args.p, args.q)
    tau = transversal_number(fam)
    depth = intersection_depth(fam)
    result = {"pq": pq.to_json(fam.names), "transversal": tau.to_json(),
              "depth": depth.depth, "depth_witness": point_coordinates(depth.witness, fam.ambient.kind) if depth.witness else None}
    return ("ok" if pq.holds else "pq-violated"), EXIT_OK, result


def cmd_spectral(args):
    fam = load_family(args.input)
    k, ih = _family_k(fam, args.k, args.max_n)
    ch = 0 if args.field is None else args.field
    rep = convergence_check(fam, k, characteristic=ch, max_n=args.max_n, intersections=ih)
    st, code = _status(rep.verdict)
    return st, code, rep.to_json(fam.names)


def cmd_nervethm(args):
    fam = load_family(args.input)
    if args.k is None:
        raise UsageError("nervethm needs --k")
    rep = nerve_theorem_check(fam, args.k, max_n=args.max_n)
    if rep.status != "ok":
        return rep.status, EXIT_FAIL, rep.to_json()
    st, code = _status(rep.verdict)
    return st, code, rep.to_json()


def cmd_generate(args):
    if args.kind is None:
        raise UsageError("generate needs --kind")
    params = json.loads(args.params) if args.params else {}
    spec = GeneratorSpec(args.kind, d=args.d, extent=args.extent, n=args.n,
                         seed=args.seed if args.seed is not None else 0, params=params)
    fam = generate(spec, max_n=args.max_n)
    return "ok", EXIT_OK, family_to_json(fam)


def cmd_corpus(args):
    cfg = load_config(args.input)
    if args.max_n != DEFAULT_MAX_N:
        cfg.max_n = args.max_n
    out = args.output_dir or "corpus_out"
    run = run_corpus(cfg, out)
    code = run.exit_code
    status = {EXIT_OK: "ok", EXIT_FAIL: "fail", EXIT_LIMIT: "resource-limit"}[code]
    result = run.manifest()
    result["output_dir"] = str(out)
    return status, code, result


COMMANDS = {
    "homology": (cmd_homology, "Betti numbers and torsion of a complex"),
    "nerve": (cmd_nerve, "nerve facets with the intersection back-map"),
    "leray": (cmd_leray, "Leray number of a simplicial complex or of a family's nerve"),
    "acyclic": (cmd_acyclic, "(k-|G|)-acyclicity of a family"),
    "fh": (cmd_fh, "fractional Helly bound: depth against floor(beta n)"),
    "pq": (cmd_pq, "(p,q)-condition and exact transversal number"),
    "spectral": (cmd_spectral, "both spectral sequences of the Mayer-Vietoris double complex"),
    "nervethm": (cmd_nervethm, "union and nerve homology agree up to degree k"),
    "generate": (cmd_generate, "build a seeded family"),
    "corpus": (cmd_corpus, "generate and check a whole corpus"),
}


def _field(value: str) -> int:
    try:
        return check_characteristic(int(value))
    except (ValueError, TopoHellyError) as e:
        raise argparse.ArgumentTypeError("field must be 0 or a prime: %s" % e)


def _nonneg(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topohelly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--input", help="complex/family JSON (corpus: config JSON, default: shipped config)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--k", type=_nonneg)
        p.add_argument("--p", type=_positive)
        p.add_argument("--q", type=_positive)
        p.add_argument("--field", type=_field, help="0 for Q, or a prime p for F_p")
        p.add_argument("--seed", type=_nonneg)
        p.add_argument("--max-n", type=_positive, default=DEFAULT_MAX_N)
        p.add_argument("--max-vertices", type=_positive, default=DEFAULT_MAX_VERTICES)
        p.add_argument("--format", choices=["json"], default="json")
        if name == "generate":
            p.add_argument("--kind")
            p.add_argument("--d", type=_positive, default=2)
            p.add_argument("--extent", type=_positive, default=16)
            p.add_argument("--n", type=_nonneg, default=4)
            p.add_argument("--params", help="kind-specific parameters as a JSON object")
        if name == "corpus":
            p.add_argument("--output-dir", help="directory for families, counterexamples and the manifest")
    return parser


def _emit(report: dict, output) -> None:
    text = dumps(report)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get(LOG_ENV, "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    output = None
    command = None
    try:
        args = parser.parse_args(argv)
        command, output = args.command, args.output
        if command not in ("corpus", "generate") and not args.input:
            raise UsageError("--input is required")
        func = COMMANDS[command][0]
        status, code, result = func(args)
        if command == "generate":
            report = result
        else:
            report = {"command": command, "status": status, "result": result}
    except UsageError as e:
        status, code, report = "usage-error", EXIT_USAGE, {"command": command, "status": "usage-error",
                                                            "error": str(e)}
    except (MalformedInputError, UnsupportedCoefficientsError, json.JSONDecodeError) as e:
        status, code, report = "parse-error", EXIT_USAGE, {"command": command, "status": "parse-error",
                                                            "error": str(e)}
    except ResourceLimitError as e:
        status, code, report = "resource-limit", EXIT_LIMIT, {"command": command, "status": "resource-limit",
                                                               "error": str(e)}
    except EmptySpaceError as e:
        status, code, report = "parse-error", EXIT_USAGE, {"command": command, "status": "parse-error",
                                                            "error": str(e)}
    log.info("%s finished with status %s", command, status)
    _emit(report, output)
    return code


if __name__ == "__main__":
    sys.exit(main())
