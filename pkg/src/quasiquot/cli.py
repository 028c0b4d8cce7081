"""Command-line front end.

Every subcommand prints one JSON report to stdout (sorted keys, so reports
are byte-stable for a given input and ``--seed``).  Exit codes: 0 success,
1 a mathematical negative or failed check, 2 bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .exact import ConductorMismatch, ExactMatrix
from .group import DEFAULT_CAP, ClosureCapExceeded, Representation, close
from .invariants import (
    InvariantBasis,
    generators,
    molien,
    reynolds_dimension,
    relations,
    subalgebra_dimension,
)
from .lifting import LiftingError, PathSpec, fiber, lift_along_path, monodromy
from .poly import Poly
from .quasiiso import find_quasi_isomorphism, verify_quasi_isomorphism
from .quasilinear import (
    LowOrderObstruction,
    QuotientMap,
    convergence_table,
    drop_low_terms,
    maps_Y_to_Z,
    quasilinear_part,
)
from .strata import real_membership, stratify

logger = logging.getLogger("quasiquot")

__all__ = ["SpecError", "load_spec", "parse_spec", "run", "main", "corpus_specs"]

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class SpecError(ValueError):
    """A representation spec file violates the schema."""


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------


def parse_spec(data: Any, cap: int = DEFAULT_CAP, source: str = "<spec>") -> Representation:
    if not isinstance(data, dict):
        raise SpecError("%s: top level must be an object" % source)
    for key in ("name", "dimension", "conductor", "field", "generators"):
        if key not in data:
            raise SpecError("%s: missing field %r" % (source, key))
    name = data["name"]
    if not isinstance(name, str):
        raise SpecError("%s: field 'name' must be a string" % source)
    dim, n = data["dimension"], data["conductor"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SpecError("%s: field 'dimension' must be a positive integer" % source)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SpecError("%s: field 'conductor' must be a positive integer" % source)
    if data["field"] not in ("real", "complex"):
        raise SpecError("%s: field 'field' must be \"real\" or \"complex\"" % source)
    gens = data["generators"]
    if not isinstance(gens, list) or not gens:
        raise SpecError("%s: field 'generators' must be a non-empty list of matrices" % source)
    mats = []
    for gi, mat in enumerate(gens):
        where = "%s: generator %d" % (source, gi)
        if not isinstance(mat, list) or len(mat) != dim:
            raise SpecError("%s must have %d rows" % (where, dim))
        for ri, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != dim:
                got = len(row) if isinstance(row, list) else type(row).__name__
                raise SpecError("%s, row %d has %s entries, expected %d" % (where, ri, got, dim))
        try:
            mats.append(ExactMatrix.from_literal(mat, n, name="generator %d" % gi))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise SpecError("%s: %s" % (where, exc)) from exc
    rep = close(mats, cap=cap, field=data["field"], name=name)
    rep.meta["provenance"] = source
    return rep


def load_spec(path: str | Path, cap: int = DEFAULT_CAP) -> Representation:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecError("%s: invalid JSON (%s)" % (path, exc)) from exc
    return parse_spec(data, cap=cap, source=path.name)


def corpus_specs() -> list[tuple[str, dict]]:
    """The shipped example specs, sorted by file name."""
    root = resources.files("quasiquot") / "corpus"
    out = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            out.append((entry.name, json.loads(entry.read_text())))
    return out


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------


def _names(m: int) -> list[str]:
    return ["y%d" % (i + 1) for i in range(m)]


def _poly_out(p: Poly, names: Sequence[str] | None = None) -> dict:
    return {"terms": p.to_json(), "text": p.to_str(names)}


def _cnum(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError("%s: invalid JSON (%s)" % (path, exc)) from exc


def _read_point(text: str) -> list[complex]:
    """A point given inline as JSON or as a path to a JSON file."""
    candidate = Path(text)
    data = _read_json(text) if candidate.exists() else json.loads(text)
    if not isinstance(data, list):
        raise SpecError("point must be a JSON list")
    return [complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in data]


def _load_map(path: str | None, source: InvariantBasis, target: InvariantBasis) -> QuotientMap:
    if path is None:
        if source.weight_system != target.weight_system:
            raise SpecError("--map is required when the quotient weights differ")
        return QuotientMap.identity(source.weight_system, source.rep.conductor)
    data = _read_json(path)
    if not isinstance(data, dict) or "components" not in data:
        raise SpecError("%s: map needs a 'components' list" % path)
    n = data.get("conductor", 1)
    if not isinstance(n, int) or n < 1:
        raise SpecError("%s: 'conductor' must be a positive integer" % path)
    comps = []
    for i, c in enumerate(data["components"]):
        try:
            comps.append(Poly.from_json(c, source.m, n))
        except (ValueError, TypeError, KeyError) as exc:
            raise SpecError("%s: component %d: %s" % (path, i, exc)) from exc
    try:
        return QuotientMap(source.weight_system, target.weight_system, tuple(comps))
    except ValueError as exc:
        raise SpecError("%s: %s" % (path, exc)) from exc


def _digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    h.update(args.command.encode())
    for key in sorted(vars(args)):
        if key in ("func",):
            continue
        val = getattr(args, key)
        h.update(("%s=%r;" % (key, val)).encode())
        if isinstance(val, str) and Path(val).is_file():
            h.update(Path(val).read_bytes())
    return h.hexdigest()


def _report(args: argparse.Namespace, results: dict) -> str:
    payload = {
        "command": args.command,
        "inputs_digest": _digest(args),
        "results": results,
        "version": __version__,
        "seed": args.seed,
    }
    return json.dumps(payload, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, results)
# ---------------------------------------------------------------------------


def _basis(rep: Representation, args) -> InvariantBasis:
    return generators(rep, args.max_degree)


def _invariants_payload(basis: InvariantBasis, cap: int | None) -> dict:
    rel = relations(basis, cap)
    names = _names(basis.m)
    return {
        "group": basis.rep.name,
        "order": basis.rep.order,
        "degrees": list(basis.degrees),
        "generators": [_poly_out(p) for p in basis.gens],
        "molien": list(basis.molien),
        "relations": [_poly_out(r, names) for r in rel.relations],
        "relation_degrees": list(rel.relation_degrees),
        "relation_cap": rel.weighted_degree_bound,
        "complete": basis.complete,
    }


def cmd_invariants(args):
    basis = _basis(load_spec(args.spec, args.closure_cap), args)
    return EXIT_OK, _invariants_payload(basis, args.cap)


def cmd_relations(args):
    basis = _basis(load_spec(args.spec, args.closure_cap), args)
    rel = relations(basis, args.cap)
    names = _names(basis.m)
    return EXIT_OK, {
        "degrees": list(basis.degrees),
        "relations": [_poly_out(r, names) for r in rel.relations],
        "relation_degrees": list(rel.relation_degrees),
        "relation_cap": rel.weighted_degree_bound,
    }


def _strata_payload(basis: InvariantBasis) -> dict:
    strat = stratify(basis)
    return {
        "strata": [
            {"class": s.class_index, "order": s.order, "fixed_dim": s.fixed_dim,
             "codim": s.codim, "principal": s.principal,
             "members": [list(m.element_indices) for m in strat.classes[s.class_index].members]}
            for s in strat.strata
        ],
        "codim_one": [
            {"index": c.index, "class": c.class_index, "order": c.order,
             "pseudoreflection": c.pseudoreflection}
            for c in strat.codim_one
        ],
    }


def cmd_strata(args):
    basis = _basis(load_spec(args.spec, args.closure_cap), args)
    return EXIT_OK, _strata_payload(basis)


def cmd_real_membership(args):
    basis = _basis(load_spec(args.spec, args.closure_cap), args)
    point = [float(z.real) for z in _read_point(args.point)]
    rel = relations(basis, args.cap) if args.cap else None
    out = real_membership(basis, point, tol=args.tol, rel=rel, seed=args.seed)
    cert = out.certificate
    return (EXIT_OK if out.status == "certified" else EXIT_NEGATIVE), {
        "status": out.status,
        "relation_residual": out.relation_residual,
        "best_residual": out.best_residual if cert else (None if out.best_residual == float("inf")
                                                          else out.best_residual),
        "certificate": None if cert is None else {
            "h": cert.h,
            "h_matrix": basis.rep.elements[cert.h].to_literal(),
            "params": list(cert.params),
            "witness": [_cnum(x) for x in cert.witness],
            "residual": cert.residual,
        },
    }


def _quasi_iso_payload(G: Representation, H: Representation, seed: int) -> tuple[int, dict]:
    search = find_quasi_isomorphism(G, H, seed=seed)
    out: dict[str, Any] = {"verdict": search.status, "certificates": list(search.certificates),
                           "isomorphisms_tried": search.isomorphisms}
    if search.witness is None:
        return EXIT_NEGATIVE, out
    ver = verify_quasi_isomorphism(search.witness, seed=seed)
    out.update({
        "witness": search.witness.L.to_literal(),
        "conductor": search.witness.conductor,
        "isomorphism": list(search.witness.iso.image_of),
        "verification": {"conjugation": ver.conjugation_ok, "orbits": ver.orbit_ok,
                         "offending": list(ver.offending)},
    })
    return (EXIT_OK if ver.ok else EXIT_NEGATIVE), out


def cmd_quasi_iso(args):
    G = load_spec(args.spec_a, args.closure_cap)
    H = load_spec(args.spec_b, args.closure_cap)
    return _quasi_iso_payload(G, H, args.seed)


def cmd_quasilinearize(args):
    BY = _basis(load_spec(args.spec_y, args.closure_cap), args)
    BZ = _basis(load_spec(args.spec_z, args.closure_cap), args)
    f = _load_map(args.map, BY, BZ)
    rel_y, rel_z = relations(BY, args.cap), relations(BZ, args.cap)
    out: dict[str, Any] = {}
    try:
        f = drop_low_terms(f, rel_y)
        out["low_order"] = "removed"
    except LowOrderObstruction as exc:
        out["low_order"] = str(exc)
        return EXIT_NEGATIVE, out
    f0 = quasilinear_part(f)
    names = _names(BY.m)
    table = convergence_table(f, BY, seed=args.seed)
    verdict = maps_Y_to_Z(f, rel_y, rel_z, tol=args.tol, seed=args.seed)
    verdict0 = maps_Y_to_Z(f0, rel_y, rel_z, tol=args.tol, seed=args.seed)
    out.update({
        "f0": [_poly_out(c, names) for c in f0.components],
        "convergence": {"t": list(table.ts), "deviation": list(table.deviations),
                        "slope": table.slope, "monotone": table.monotone},
        "maps_Y_to_Z": {"status": verdict.status, "max_residual": verdict.max_residual,
                        "certified_degree": verdict.certified_degree},
        "f0_maps_Y_to_Z": {"status": verdict0.status, "max_residual": verdict0.max_residual},
    })
    ok = verdict.status != "fails" and verdict0.status != "fails"
    return (EXIT_OK if ok else EXIT_NEGATIVE), out


def cmd_lift(args):
    BV = _basis(load_spec(args.spec_v, args.closure_cap), args)
    BW = _basis(load_spec(args.spec_w, args.closure_cap), args)
    f = _load_map(args.map, BV, BW)
    path = PathSpec.from_json(_read_json(args.path))
    if args.start is not None:
        start = _read_point(args.start)
    else:
        z = f.numeric()(BV.numeric()(path.point(0.0)))
        start = list(sorted(fiber(BW, z, tol=args.tol, seed=args.seed),
                            key=lambda p: [round(c, 9) for x in p for c in _cnum(x)])[0])
    lp = lift_along_path(BV, BW, f, path, start, tol=args.tol, seed=args.seed)
    out = lp.to_json()
    out["start"] = [_cnum(x) for x in start]
    out["endpoint"] = [_cnum(x) for x in lp.endpoint]
    # same acceptance rule as the tracker: tolerance relative to |z| once |z| > 1
    ok = all(r <= args.tol * max(1.0, float(np.linalg.norm(z)))
             for r, z in zip(lp.residuals, lp.downstairs))
    return (EXIT_OK if ok else EXIT_NEGATIVE), out


def cmd_monodromy(args):
    basis = _basis(load_spec(args.spec, args.closure_cap), args)
    loop = PathSpec.from_json(_read_json(args.loop))
    if args.base is not None:
        base = _read_point(args.base)
    else:
        z = np.asarray(loop.waypoints[0])
        base = sorted(fiber(basis, z, tol=args.tol, seed=args.seed),
                      key=lambda p: [round(c, 9) for x in p for c in _cnum(x)])[0]
    res = monodromy(basis, loop, base, tol=args.tol, seed=args.seed)
    return EXIT_OK, {
        "element": res.element,
        "matrix": basis.rep.elements[res.element].to_literal(),
        "distance": res.distance,
        "base": [_cnum(x) for x in base],
        "samples": len(res.path.ts),
        "max_residual": res.path.max_residual,
    }


# ---------------------------------------------------------------------------
# golden corpus
# ---------------------------------------------------------------------------


def _random_conjugator(dim: int, rng: np.random.Generator) -> ExactMatrix:
    while True:
        A = ExactMatrix(rng.integers(-3, 4, size=(dim, dim)).tolist())
        if A.is_invertible():
            return A


def conjugate_rep(rep: Representation, A: ExactMatrix) -> Representation:
    A = A.lift(rep.conductor)
    Ai = A.inverse()
    return close([A @ g @ Ai for g in rep.generators], field=rep.field, name=rep.name + "^A")


def run_corpus(seed: int = 0, max_check_degree: int = 8) -> dict:
    """Golden checks on every shipped spec; returns a JSON-ready summary."""
    checks: list[dict] = []

    def record(name: str, ok: bool, detail: Any = None):
        checks.append({"check": name, "pass": bool(ok), "detail": detail})

    rng = np.random.default_rng(seed)
    reps = {}
    for fname, data in corpus_specs():
        rep = parse_spec(data, source=fname)
        reps[fname] = rep
        basis = generators(rep)
        series = molien(rep, max(max_check_degree, basis.degree_cap))
        brute = [reynolds_dimension(rep, d) for d in range(max_check_degree + 1)]
        record("%s: Molien equals averaged-monomial rank, d <= %d" % (fname, max_check_degree),
               brute == series[:max_check_degree + 1], {"molien": series[:max_check_degree + 1]})
        sub = [subalgebra_dimension(basis, d) for d in range(basis.degree_cap + 1)]
        record("%s: generated subalgebra matches Molien, d <= %d" % (fname, basis.degree_cap),
               sub == series[:basis.degree_cap + 1], {"degrees": list(basis.degrees)})
        A = _random_conjugator(rep.dim, rng)
        search = find_quasi_isomorphism(rep, conjugate_rep(rep, A), seed=seed)
        ok = search.witness is not None and verify_quasi_isomorphism(search.witness).ok
        record("%s: conjugate copy is quasi-isomorphic" % fname, ok, {"A": A.to_literal()})

    line = generators(reps["z2_line.json"])
    strat = stratify(line)
    x = Poly.var(0, 1)
    record("z2_line.json: single generator proportional to x^2",
           line.degrees == (2,) and line.gens[0].monic() == x * x,
           [_poly_out(p) for p in line.gens])
    record("z2_line.json: one codimension-one component of order 2",
           [c.order for c in strat.codim_one] == [2], None)

    for k in (2, 3, 4, 6):
        fname = "rot%d.json" % k
        basis = generators(reps[fname])
        rel = relations(basis)
        n = basis.rep.conductor
        y = [Poly.var(i, 3, n) for i in range(3)]
        expected = y[1] ** 2 + y[2] ** 2 - y[0] ** k
        ok = (basis.degrees == (2, k, k) and len(rel.relations) == 1
              and rel.relations[0].monic() == expected.monic()
              and rel.relation_degrees == (2 * k,))
        record("%s: degrees (2,k,k), one relation y2^2 + y3^2 - y1^k" % fname, ok,
               [r.to_str(_names(3)) for r in rel.relations])
        record("%s: no codimension-one components" % fname, not stratify(basis).codim_one, None)

    search = find_quasi_isomorphism(reps["neg_i.json"], reps["refl_x.json"], seed=seed)
    record("neg_i.json vs refl_x.json: no quasi-isomorphism", search.status == "none",
           list(search.certificates))

    passed = sum(c["pass"] for c in checks)
    return {"checks": checks, "passed": passed, "failed": len(checks) - passed}


def cmd_corpus(args):
    out = run_corpus(seed=args.seed)
    return (EXIT_OK if out["failed"] == 0 else EXIT_NEGATIVE), out


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None,
                        help="weighted-degree cap for relations (default 2 * max degree * m)")
    common.add_argument("--max-degree", type=int, default=None,
                        help="degree cap for generators (default |G|)")
    common.add_argument("--closure-cap", type=int, default=DEFAULT_CAP,
                        help="largest group order accepted when closing generators")
    common.add_argument("--tol", type=float, default=1e-8, help="numeric tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")

    parser = argparse.ArgumentParser(prog="quasiquot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="generators, Molien series, relations")
    p.add_argument("spec")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("strata", parents=[common], help="isotropy strata and codim-one components")
    p.add_argument("spec")
    p.set_defaults(func=cmd_strata)

    p = sub.add_parser("relations", parents=[common], help="relations among the generators")
    p.add_argument("spec")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("quasi-iso", parents=[common], help="decide quasi-isomorphism")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.set_defaults(func=cmd_quasi_iso)

    p = sub.add_parser("quasilinearize", parents=[common], help="f_0, convergence and map checks")
    p.add_argument("spec_y")
    p.add_argument("spec_z")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_quasilinearize)

    p = sub.add_parser("real-membership", parents=[common], help="certify a real point of Y")
    p.add_argument("spec")
    p.add_argument("--point", required=True, help="JSON list or path to a JSON file")
    p.set_defaults(func=cmd_real_membership)

    p = sub.add_parser("lift", parents=[common], help="continue a lift along a path")
    p.add_argument("spec_v")
    p.add_argument("spec_w")
    p.add_argument("--map", default=None, help="map JSON (identity if omitted)")
    p.add_argument("--path", required=True)
    p.add_argument("--start", default=None, help="starting lift (JSON list or file)")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("monodromy", parents=[common], help="monodromy of a loop in the quotient")
    p.add_argument("spec")
    p.add_argument("--loop", required=True)
    p.add_argument("--base", default=None, help="base fiber point (JSON list or file)")
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("corpus", parents=[common], help="run the golden checks on shipped specs")
    p.set_defaults(func=cmd_corpus)
    return parser


INPUT_ERRORS = (SpecError, FileNotFoundError, IsADirectoryError, ClosureCapExceeded,
                ConductorMismatch, json.JSONDecodeError)


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        code, results = args.func(args)
    except INPUT_ERRORS as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (LiftingError, RuntimeError, ValueError) as exc:
        print("%s failed: %s" % (args.command, exc), file=sys.stderr)
        return EXIT_NEGATIVE
    stdout.write(_report(args, results) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
