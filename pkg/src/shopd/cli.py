"""
Command line front end.

Exit codes: 0 when every check passes, 1 on a verification failure (the
report carries witnesses with tree literals), 2 on bad input.
"""

import argparse
import json
import os
import random
import sys

from .exactlin import scalar_str

DEFAULT_SEED = 0


class InputError(Exception):
    pass


def default_seed():
    raw = os.environ.get("SHOPD_SEED")
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError("SHOPD_SEED must be an integer, got %r" % raw)


def parse_any_tree(text):
    """Planar tree "((1,3),2)" or numbered tree "[1:*,[2:*,*]]"."""
    from .psopd import parse_numbered
    from .trees import parse_tree
    s = text.strip()
    if s.startswith("["):
        return parse_numbered(s)
    return parse_tree(s)


def _caps(text):
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("caps look like 3,3")
    if len(parts) != 2 or min(parts) < 1:
        raise argparse.ArgumentTypeError("caps must be two integers >= 1")
    return tuple(parts)


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected an integer >= 1")
    return v


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x if x == x and abs(x) != float("inf") else str(x)
    try:
        return scalar_str(x)
    except Exception:
        return str(x)


def emit(report, args, out=sys.stdout):
    """Print the report; JSON with --json, otherwise key: value lines."""
    rep = _jsonable(report)
    if getattr(args, "json", False):
        out.write(json.dumps(rep, sort_keys=True, indent=1) + "\n")
        return
    for key in sorted(rep):
        val = rep[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        out.write("%s: %s\n" % (key, val))


def _load(loader, path, *extra):
    try:
        return loader(path, *extra)
    except FileNotFoundError:
        raise InputError("no such file: %s" % path)
    except json.JSONDecodeError as e:
        raise InputError("%s: invalid JSON (%s)" % (path, e))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("%s: %s" % (path, e))


# ---------------------------------------------------------------------------
# commands


def cmd_trees_enum(args):
    from .trees import enumerate_trees, parse_tree, planar_shapes, trees_within
    if args.n is not None:
        ts = enumerate_trees(args.n, args.k, args.min_arity) if args.labeled \
            else planar_shapes(args.n, args.k, args.min_arity)
    else:
        ts = trees_within(args.nmax, args.k, args.min_arity)
    roundtrip = all(parse_tree(str(t)) == t for t in ts)
    if args.list:
        for t in ts:
            sys.stdout.write("%s\n" % t)
    return {"ok": roundtrip, "count": len(ts), "roundTrip": roundtrip}


def cmd_psopd_selfdual(args):
    from .psopd import check_self_duality
    rep = check_self_duality(args.legs)
    out = {"ok": rep["ok"], "legs": args.legs, "signatures": len(rep["signatures"]),
           "adoptedWordSign": all(r["word"] for r in rep["signatures"]),
           "halfDimension": all(r["half"] for r in rep["signatures"]),
           "literalTreeSign": rep["literalReading"]}
    if args.verbose:
        out["table"] = rep["signatures"]
    return out


def cmd_psopd_relations(args):
    from .psopd import (check_eq3, dual_relations, generators, relation_case,
                        relations_from_substitution)
    gens = generators(args.bound)
    rels = relations_from_substitution(args.legs)
    dual = dual_relations(args.legs)
    if args.list:
        for g in gens:
            sys.stdout.write("generator %s\n" % g)
        for rel, d in zip(rels, dual):
            (w1, w2) = sorted(rel)
            T = w1[0]
            sys.stdout.write("relation %s edges %d,%d %s dual %+d%+d\n" % (
                T, w1[1], w2[1], relation_case(T), d[w1], d[w2]))
    eq3 = check_eq3(min(args.bound, 3))
    ok = all(eq3[c][0] == eq3[c][1] for c in ("sequential", "parallelBefore", "parallelAfter"))
    return {"ok": ok, "generators": len(gens), "relations": len(rels),
            "dualRelations": len(dual), "indexCrossCheck": eq3}


def cmd_psopd_bar(args):
    from .exactlin import GradedSpace
    from .psopd import bar_homology_of_free
    C = {}
    for spec in args.generator:
        try:
            a, d = (int(v) for v in spec.split(":"))
        except ValueError:
            raise InputError("generators look like ARITY:DEGREE, got %r" % spec)
        if a < 2:
            raise InputError("generators need arity >= 2")
        V = C.get(a)
        names = (V.names if V else []) + ["g%d_%d" % (a, len(V.names) if V else 0)]
        degs = (V.degrees if V else []) + [d]
        C[a] = GradedSpace(names, degs)
    if not C:
        C = {2: GradedSpace(["mu"], [0])}
    rep = bar_homology_of_free(C, args.arity)
    conc = all(sum(rep["homology"][n].values()) == rep["generators"][n]
               for n in rep["homology"])
    return {"ok": rep["squareZero"], "squareZero": rep["squareZero"],
            "homology": rep["homology"], "generators": rep["generators"],
            "complexDims": rep["complexDims"], "onlyCogenerators": conc}


def _load_sh(path, caps=None):
    from .shcore import TableSh, load_sh
    P = _load(load_sh, path)
    if caps:
        if isinstance(P, TableSh):
            P.nmax, P.kmax = min(P.nmax, caps[0]), min(P.kmax, caps[1])
        else:
            P.kmax = min(P.kmax, caps[1])
    return P


def cmd_sh_check(args):
    from .shcore import check_equivariance, check_square_zero
    P = _load_sh(args.file, args.caps)
    rep = check_square_zero(P)
    out = {"ok": rep["ok"], "squareZero": rep["ok"], "checked": rep["checked"],
           "failures": rep["failures"]}
    if args.equivariance:
        eq = check_equivariance(P)
        out["equivariant"] = eq["ok"]
        out["ok"] = out["ok"] and eq["ok"]
    return out


def cmd_sh_bar(args):
    from .shcore import check_bar
    P = _load_sh(args.file, args.caps)
    rep = check_bar(P, args.arity)
    return {"ok": all(rep.values()), "squareZero": rep}


def cmd_sh_cohomology(args):
    from .collection import check_pseudo_operad
    from .shcore import check_square_zero, cohomology_operad
    P = _load_sh(args.file, args.caps)
    sz = check_square_zero(P)
    if not sz["ok"]:
        return {"ok": False, "squareZero": False, "failures": sz["failures"]}
    Q = cohomology_operad(P)
    rep = check_pseudo_operad(Q)
    out = {"ok": rep["ok"], "squareZero": True, "gradedOperad": rep["ok"],
           "dims": {n: Q.fiber(n).dim for n in range(1, Q.cap + 1)}}
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(Q.to_json(), fh, sort_keys=True, indent=1)
    return out


def _load_morphism(args, src, tgt, path):
    from .shmaps import load_morphism
    return _load(load_morphism, path, src, tgt)


def cmd_morphism_check(args):
    from .shmaps import check_equivariant_morphism, check_morphism
    P, Q = _load_sh(args.source, args.caps), _load_sh(args.target, args.caps)
    phi = _load_morphism(args, P, Q, args.morphism)
    rep = check_morphism(phi)
    out = {"ok": rep["ok"], "morphism": rep["ok"], "checked": rep["checked"],
           "failures": rep["failures"]}
    if args.equivariance:
        eq = check_equivariant_morphism(phi)
        out["equivariant"] = eq["ok"]
        out["ok"] = out["ok"] and eq["ok"]
    return out


def _write_morphism(phi, path):
    from .shmaps import tabulate_morphism
    doc = tabulate_morphism(phi).to_json()
    if path:
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
    return doc


def cmd_morphism_compose(args):
    from .shmaps import check_morphism, compose
    P = _load_sh(args.source, args.caps)
    Q = _load_sh(args.middle, args.caps)
    S = _load_sh(args.target, args.caps)
    phi = _load_morphism(args, P, Q, args.first)
    psi = _load_morphism(args, Q, S, args.second)
    c = compose(psi, phi)
    rep = check_morphism(c)
    _write_morphism(c, args.output)
    return {"ok": rep["ok"], "morphism": rep["ok"], "failures": rep["failures"]}


def cmd_morphism_symmetrize(args):
    from .shmaps import check_equivariant_morphism, check_morphism, symmetrize, tabulate_morphism
    P, Q = _load_sh(args.source, args.caps), _load_sh(args.target, args.caps)
    phi = _load_morphism(args, P, Q, args.morphism)
    s = tabulate_morphism(symmetrize(phi))
    ss = tabulate_morphism(symmetrize(s))
    idem = ss.comps == s.comps
    eq = check_equivariant_morphism(s)
    mo = check_morphism(s)
    _write_morphism(s, args.output)
    return {"ok": eq["ok"] and idem and mo["ok"], "equivariant": eq["ok"],
            "idempotent": idem, "morphism": mo["ok"]}


def cmd_morphism_quasiinverse(args):
    from .shmaps import ObstructionError, check_morphism, compose, homology_map, quasi_inverse
    P, Q = _load_sh(args.source, args.caps), _load_sh(args.target, args.caps)
    phi = _load_morphism(args, P, Q, args.morphism)
    try:
        psi = quasi_inverse(phi)
    except (ObstructionError, ValueError) as e:
        return {"ok": False, "error": str(e)}
    rep = check_morphism(psi)
    inv = True
    for c in (compose(psi, phi), compose(phi, psi)):
        for n in range(1, min(c.source.nmax, c.target.nmax) + 1):
            f, _, _ = homology_map(c, n)
            inv = inv and f == f.source.identity()
    _write_morphism(psi, args.output)
    return {"ok": rep["ok"] and inv, "morphism": rep["ok"], "homologyInverse": inv,
            "failures": rep["failures"]}


def _retract_for(args, rng):
    from .transfer import load_retract, random_retract, validate_retract
    if args.retract:
        R = _load(load_retract, args.retract)
        chk = validate_retract(R)
        if not chk["ok"]:
            raise InputError("%s is not a deformation retract: %s" % (args.retract, chk))
        return R
    return random_retract(rng, [0, 1], pair_degrees=[0], side=args.side)


def cmd_transfer_run(args):
    from . import dense
    from .shmaps import check_morphism, check_strictly_unital, is_quasi_iso
    from .transfer import transfer_hom, validate_retract
    rng = random.Random(args.seed)
    R = _retract_for(args, rng)
    phi = transfer_hom(R, args.caps[0], args.caps[1])
    try:
        rep = dense.check_morphism_dense(phi)
        backend = "dense"
    except (dense.NotIntegral, dense.PrecisionRisk):
        rep = check_morphism(phi)
        backend = "exact"
    v = validate_retract(R)
    out = {"ok": rep["ok"], "morphism": rep["ok"], "backend": backend,
           "checked": rep["checked"], "failures": rep["failures"],
           "sideConditions": v["sideConditions"], "quasiIso": is_quasi_iso(phi),
           "seed": args.seed, "dimW": R.W.dim, "dimV": R.V.dim}
    if v["sideConditions"]:
        # strict unitality is only promised with the side conditions
        out["strictlyUnital"] = check_strictly_unital(phi)["ok"]
        out["ok"] = out["ok"] and out["strictlyUnital"]
    return out


def cmd_transfer_ainf(args):
    from .transfer import ainf_demo, example_algebra
    W, m = example_algebra(args.example)
    rep = ainf_demo(W, m, cap=args.cap)
    return {"ok": rep["ok"], "example": args.example, "checks": rep["checks"],
            "homologyDegrees": rep["H"].degrees,
            "m": {k: v for k, v in rep["m"].items()}}


def cmd_transfer_remark(args):
    from .collection import EndOperad
    from .transfer import check_remark_signs, random_retract
    rng = random.Random(args.seed)
    counts = {"displayedOdd": [0, 0], "displayedEven": [0, 0], "machinery": [0, 0]}
    witnesses = []
    for _ in range(args.retracts):
        R = random_retract(rng, [0, 1], pair_degrees=[0], side=False)
        for _ in range(args.pairs):
            n, m = rng.randint(1, 2), rng.randint(1, 2)
            E = EndOperad(R.W, n + m - 1)
            g = rng.randrange(E.fiber(n).dim)
            f = rng.randrange(E.fiber(m).dim)
            k = rng.randint(1, n)
            rep = check_remark_signs(R, f, g, k, n=n, m=m, reading=args.reading)
            par = "displayedOdd" if sum(rep["degrees"]) & 1 else "displayedEven"
            counts[par][0] += rep["displayed"]
            counts[par][1] += 1
            counts["machinery"][0] += rep["machinery"]
            counts["machinery"][1] += 1
            if not rep["displayed"] and len(witnesses) < 3:
                witnesses.append({"tree": "g o_%d f" % k, "arities": [n, m],
                                  "degrees": rep["degrees"]})
    literal = all(a == b for a, b in (counts["displayedOdd"], counts["displayedEven"]))
    mach = counts["machinery"][0] == counts["machinery"][1]
    return {"ok": literal and mach, "displayedExpansion": literal, "machinery": mach,
            "counts": counts, "witnesses": witnesses, "seed": args.seed,
            "reading": args.reading}


def cmd_littledisks_check(args):
    from .littledisks import check_all
    rep = check_all(args.n, args.samples, args.seed)
    h = rep["homotopy"]
    return {"ok": rep["ok"], "n": args.n, "samples": args.samples, "seed": args.seed,
            "retraction": rep["retraction"]["ok"], "homotopy": h["ok"],
            "containmentMargin": h["containmentMargin"],
            "disjointnessMargin": h["disjointnessMargin"],
            "equivariance": rep["equivariance"]["ok"],
            "associativity": rep["associativity"]["ok"],
            "associativityDeviation": rep["associativity"]["maxDeviation"]}


# ---------------------------------------------------------------------------
# parser


def build_parser(seed):
    p = argparse.ArgumentParser(prog="shopd", description="strongly homotopy operad checks")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    verbs = p.add_subparsers(dest="verb", required=True)

    def sub(verb, name, fn, help=None):
        sp = verb.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        return sp

    tr = verbs.add_parser("trees").add_subparsers(dest="sub", required=True)
    s = sub(tr, "enum", cmd_trees_enum, "enumerate planar trees")
    s.add_argument("--n", type=_positive)
    s.add_argument("--nmax", type=_positive, default=3)
    s.add_argument("--k", type=_positive, default=3)
    s.add_argument("--min-arity", type=int, default=1)
    s.add_argument("--labeled", action="store_true")
    s.add_argument("--list", action="store_true")

    ps = verbs.add_parser("psopd").add_subparsers(dest="sub", required=True)
    s = sub(ps, "selfdual", cmd_psopd_selfdual, "Koszul self-duality check")
    s.add_argument("--legs", type=_positive, default=5)
    s.add_argument("--verbose", action="store_true")
    s = sub(ps, "relations", cmd_psopd_relations, "quadratic presentation")
    s.add_argument("--legs", type=_positive, default=3)
    s.add_argument("--bound", type=_positive, default=2)
    s.add_argument("--list", action="store_true")
    s = sub(ps, "bar", cmd_psopd_bar, "bar complex of a free operad")
    s.add_argument("--arity", type=_positive, default=4)
    s.add_argument("--generator", action="append", default=[],
                   help="ARITY:DEGREE, repeatable (default one binary generator)")

    sh = verbs.add_parser("sh").add_subparsers(dest="sub", required=True)
    for name, fn in (("check", cmd_sh_check), ("bar", cmd_sh_bar),
                     ("cohomology", cmd_sh_cohomology)):
        s = sub(sh, name, fn)
        s.add_argument("file")
        s.add_argument("--caps", type=_caps)
        if name == "check":
            s.add_argument("--equivariance", action="store_true")
        if name == "bar":
            s.add_argument("--arity", type=_positive)
        if name == "cohomology":
            s.add_argument("--output")

    mo = verbs.add_parser("morphism").add_subparsers(dest="sub", required=True)
    s = sub(mo, "check", cmd_morphism_check)
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("morphism")
    s.add_argument("--equivariance", action="store_true")
    s = sub(mo, "compose", cmd_morphism_compose)
    for a in ("source", "middle", "target", "first", "second"):
        s.add_argument(a)
    for name, fn in (("symmetrize", cmd_morphism_symmetrize),
                     ("quasiinverse", cmd_morphism_quasiinverse)):
        s = sub(mo, name, fn)
        s.add_argument("source")
        s.add_argument("target")
        s.add_argument("morphism")
    for name in ("check", "compose", "symmetrize", "quasiinverse"):
        sp = mo.choices[name]
        sp.add_argument("--caps", type=_caps)
        if name != "check":
            sp.add_argument("--output")

    tf = verbs.add_parser("transfer").add_subparsers(dest="sub", required=True)
    s = sub(tf, "run", cmd_transfer_run, "transfer End_W to End_V and check it")
    s.add_argument("--retract", help="retract JSON (default: a random retract)")
    s.add_argument("--caps", type=_caps, default=(3, 3))
    s.add_argument("--side", action="store_true", help="random retract with side conditions")
    s.add_argument("--seed", type=int, default=seed)
    s = sub(tf, "ainf", cmd_transfer_ainf, "transferred A-infinity structure")
    s.add_argument("--example", default="unit", choices=["unit", "massey", "massey2"])
    s.add_argument("--cap", type=_positive, default=4)
    s = sub(tf, "remark-signs", cmd_transfer_remark, "one-edge sign expansion")
    s.add_argument("--retracts", type=_positive, default=5)
    s.add_argument("--pairs", type=_positive, default=4)
    s.add_argument("--reading", default="map", choices=["map", "element", "plain"])
    s.add_argument("--seed", type=int, default=seed)

    ld = verbs.add_parser("littledisks").add_subparsers(dest="sub", required=True)
    s = sub(ld, "check", cmd_littledisks_check, "retraction and homotopy data")
    s.add_argument("--n", type=_positive, default=3)
    s.add_argument("--samples", type=_positive, default=200)
    s.add_argument("--seed", type=int, default=seed)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        seed = default_seed()
    except InputError as e:
        sys.stderr.write("error: %s\n" % e)
        return 2
    parser = build_parser(seed)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        report = args.func(args)
    except InputError as e:
        sys.stderr.write("error: %s\n" % e)
        return 2
    except OSError as e:
        sys.stderr.write("error: %s\n" % e)
        return 2
    emit(report, args, out)
    return 0 if report.get("ok") else 1


if __name__ == "__main__":
    sys.exit(main())
