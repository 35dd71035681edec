"""Command-line front end.

Exit status: 0 when every check passed (or no counterexample was found),
2 when a counterexample certificate was emitted, 1 on input or resource
errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from typing import Callable

from . import __version__
from .errors import InputError, ResourceExceeded
from .scalars import QQ, parse_field

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_COUNTEREXAMPLE = 0, 1, 2


class Job:
    def __init__(self, args):
        self.args = args
        self.inputs: dict = {}
        self.docs: dict = {}

    def doc(self, path):
        from .textformat import load
        if path not in self.docs:
            doc, data = load(path)
            self.inputs[path] = hashlib.sha256(data).hexdigest()
            self.docs[path] = doc
        return self.docs[path]

    def field(self, doc=None):
        from .textformat import field_of
        if getattr(self.args, "field", None):
            return parse_field(self.args.field)
        return field_of(doc) if doc is not None else QQ

    def group(self, path=None):
        from .textformat import build_group
        doc = self.doc(path or self.args.group)
        return build_group(doc), doc


def _options(args) -> dict:
    skip = {"func", "command", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _write(report: dict, path: str | None):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_normal_form(job: Job):
    from .textformat import parse_word
    G, doc = job.group()
    g = G.normal_form(parse_word(job.args.word, G.names))
    return {"input": job.args.word, "normal_form": repr(g)}, True, f"normal form: {g!r}"


def _tower(job: Job):
    from .tower import PolyZTower
    G, doc = job.group()
    return PolyZTower(G, job.field(doc)), G, doc


def cmd_tower_build(job: Job):
    T, G, doc = _tower(job)
    checks = []
    for r in G.relators():
        x = T.monomial(G.normal_form(r)) if T.spec.layers else T.field.one
        checks.append({"relator": list(r), "image_is_one": x == T.top.one})
    ok = all(c["image_is_one"] for c in checks)
    return {"tower": T.describe(), "relator_checks": checks}, ok, f"tower of {G!r}: {len(T.levels) - 1} layers"


def cmd_invert(job: Job):
    from .textformat import parse_element
    T, G, doc = _tower(job)
    x = parse_element(job.args.element, T.algebra)
    X = T.embed(x)
    if T.top.is_zero(X):
        raise InputError("element maps to zero and has no inverse")
    Y = X.inverse()
    ok = X * Y == T.top.one and Y * X == T.top.one
    return {"element": repr(x), "inverse": repr(Y), "verified": ok}, ok, f"inverse: {Y!r}"


def cmd_hf_check(job: Job):
    from .textformat import subgroup_extras, subgroup_generators
    from .tower import hf_witness_check
    T, G, doc = _tower(job)
    sdoc = job.doc(job.args.subgroup) if job.args.subgroup else doc
    gens = subgroup_generators(sdoc, G)
    extra = subgroup_extras(sdoc, G)
    mode = job.args.mode or extra.get("mode", "HF")
    rep = hf_witness_check(T, gens, extra.get("t"), job.args.range or extra.get("range", 1),
                           mode=mode, transversal=extra.get("transversal"))
    rep = dict(rep, subgroup=[repr(g) for g in gens])
    return rep, rep["independent"], f"{mode} witness: {'independent' if rep['independent'] else 'DEPENDENT'}"


def _crossed(job: Job):
    from .crossed import ExtensionCrossedProduct
    from .groups import FiniteExtension
    G, doc = job.group()
    if not isinstance(G, FiniteExtension):
        raise InputError("crossed products need a group of kind klein_extension or cyclic")
    return ExtensionCrossedProduct(G, job.field(doc))


def cmd_crossed_invert(job: Job):
    from .crossed import ZeroDivisorWitness, crossed_inverse
    from .textformat import parse_element
    E = _crossed(job)
    x = parse_element(job.args.element, E.algebra)
    X = E.embed(x)
    try:
        Y = crossed_inverse(X)
    except ZeroDivisorWitness as w:
        return {"element": repr(x), "zero_divisor": {"left": repr(w.left), "right": repr(w.right)}}, False, \
            "not invertible: zero-divisor witness"
    R = E.ring
    ok = X * Y == R.one and Y * X == R.one
    return {"element": repr(x), "inverse": repr(Y), "verified": ok}, ok, f"inverse: {Y!r}"


def cmd_domain_fuzz(job: Job):
    from .crossed import domain_fuzz
    E = _crossed(job)
    rep = domain_fuzz(E, job.args.trials, job.args.support, seed=job.args.seed)
    ok = rep["outcome"] != "zero divisor found"
    return rep, ok, rep["outcome"]


def _rank_ring(job: Job):
    from .agrarian import division_ring_for
    from .ore import OreLaurent
    from .textformat import tower_spec
    path = job.args.tower or job.args.group
    doc = job.doc(path)
    spec = tower_spec(doc)
    F = job.field(doc)
    if spec["kind"] == "rational":
        from .group_algebra import GroupAlgebra
        from .groups import FreeAbelian
        var = spec.get("variable", "t")
        R = OreLaurent(F, [], [], var=var)
        A = GroupAlgebra(F, FreeAbelian(1, [var]))

        def embed(x):
            total = R.zero
            for g, c in x.terms.items():
                total = total + R.monomial(c, g.data[0])
            return total
        return R, A, embed, f"{F!r}({var})"
    from .textformat import build_group
    G = build_group(doc)
    order = job.args.order or spec.get("order", 4)
    model = division_ring_for(G, F, order)
    from .group_algebra import GroupAlgebra
    return model.ring, GroupAlgebra(F, G), model.embed, model.description.get("kind", "division ring")


def _parse_matrix(job: Job, A, text):
    from .textformat import parse_element
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix is not JSON (column {exc.colno}): {exc.msg}") from None
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix must be a JSON list of rows of element strings")
    return [[parse_element(str(e), A) for e in r] for r in rows]


def cmd_rank(job: Job):
    from .rank import rank_over_tower
    R, A, embed, name = _rank_ring(job)
    M = _parse_matrix(job, A, job.args.matrix)
    from .malcev import MNRing
    rows = M if isinstance(R, MNRing) else [[embed(x) for x in r] for r in M]
    r = rank_over_tower(rows, R)
    out = {"rank": int(r), "ring": name}
    if hasattr(r, "stabilized"):
        out.update(lower_bound=True, stabilized=r.stabilized, order=r.order)
    return out, True, f"rank: {r!r}"


def _sampler(R, A, embed, rng_elems=2):
    def el(rng):
        return embed(A.random_element(rng, rng_elems, 1))
    return el


def cmd_rank_axioms(job: Job):
    from .malcev import MNRing
    from .rank import axiom_suite, division_rank, matrix_sampler
    R, A, embed, name = _rank_ring(job)
    if isinstance(R, MNRing):
        raise InputError("the axiom suite needs a division ring with exact zero testing")
    rk = division_rank(R, name)
    rep = axiom_suite(rk, matrix_sampler(R, 3, 0.6, _sampler(R, A, embed)), job.args.trials, job.args.seed)
    return rep, rep["passed"], f"axioms: {len(rep['violations'])} violations in {rep['trials']} trials"


def _rank_fn(spec: str, R, name):
    from .rank import division_rank, evaluation_hom, pullback
    if spec == "division":
        return division_rank(R, name)
    if spec.startswith("eval:"):
        base = R.base if hasattr(R, "base") else R
        vals = [base(_scalar(v)) for v in spec[5:].split(",")]
        if len(vals) != len(R.gens()):
            raise InputError(f"{spec!r} gives {len(vals)} values for {len(R.gens())} generators")
        return pullback(division_rank(base, repr(base)), evaluation_hom(R, vals, base, spec))
    raise InputError(f"unknown rank function {spec!r} (use 'division' or 'eval:v1,v2,...')")


def _scalar(v):
    from fractions import Fraction
    try:
        return Fraction(v.strip())
    except ValueError:
        raise InputError(f"bad scalar {v!r}") from None


def cmd_rank_compare(job: Job):
    from .rank import compare_on_samples
    R, A, embed, name = _rank_ring(job)
    left = _rank_fn(job.args.left, R, name)
    right = _rank_fn(job.args.right, R, name)
    samples = [[[embed(x) for x in r] for r in _parse_matrix(job, A, m)] for m in job.args.matrix]
    rep = compare_on_samples(left, right, samples)
    return rep, True, f"relation on this sample: {rep['relation']}"


def _complex(job: Job, G, doc, F):
    from .textformat import build_complex, complex_options
    cdoc = job.doc(job.args.complex) if getattr(job.args, "complex", None) else doc
    return build_complex(cdoc, G, F), complex_options(cdoc)


def cmd_betti(job: Job):
    from .agrarian import betti, division_ring_for, euler_check
    G, doc = job.group()
    F = job.field(doc)
    C, opts = _complex(job, G, doc, F)
    model = division_ring_for(G, F, job.args.order or 4)
    rng = random.Random(job.args.seed) if job.args.seed is not None else None
    rep = betti(C, model, rng=rng)
    out = rep.to_json()
    if opts["aspherical"]:
        chk = euler_check(rep)
    else:
        chk = {"status": "not applicable", "reason": "complex declared non-aspherical"}
    out["euler_check"] = chk
    ok = chk["status"] != "fail"
    summary = f"b = {rep.betti} ({', '.join(rep.annotations)}); euler check: {chk['status']}"
    return out, ok, summary


def cmd_euler_check(job: Job):
    out, ok, summary = cmd_betti(job)
    return {"euler_check": out["euler_check"], "betti": out["betti"], "dims": out["dims"]}, ok, summary


def cmd_scaling_check(job: Job):
    from .agrarian import scaling_check
    from .textformat import build_subgroup
    G, doc = job.group()
    F = job.field(doc)
    sdoc = job.doc(job.args.subgroup) if job.args.subgroup else doc
    H = build_subgroup(sdoc, G)
    rep = scaling_check(G, H, F, order=job.args.order or 4)
    return rep, rep["status"] != "fail", f"index {rep['index']}: {rep['status']}"


def cmd_zerodivisor_scan(job: Job):
    from .agrarian import zerodivisor_scan
    G, doc = job.group()
    F = job.field(doc)
    a = job.args
    rep = zerodivisor_scan(G, F, support=a.support, radius=a.radius, mode=a.mode, trials=a.trials, seed=a.seed)
    if rep["status"] == "refused":
        raise ResourceExceeded(rep["reason"], ceiling="exhaustive_products", limit=rep.get("estimated_products"))
    return rep, rep["status"] != "zero divisor found", rep["status"]


def cmd_graph_nf(job: Job):
    from .graph_rings import GraphGroupRings, format_sequence, format_tokens
    from .group_algebra import GroupAlgebra
    from .groups import GraphOfGroups
    from .textformat import parse_element
    G, doc = job.group()
    if not isinstance(G, GraphOfGroups):
        raise InputError("graph-nf needs a group of kind graph")
    F = job.field(doc)
    rings = GraphGroupRings(G, F)
    x = parse_element(job.args.element, GroupAlgebra(F, G))
    nf = rings.normal_form(x)
    left, right = rings.bases()
    fmt = (lambda w: format_tokens(w, left, right)) if rings.kind == "hnn" else \
        (lambda w: format_sequence(w, left, right))
    terms = [{"basis_word": fmt(w), "coefficient": repr(c)} for w, c in nf]
    return {"kind": rings.kind, "element": repr(x), "normal_form": terms}, True, \
        f"{len(terms)} basis terms"


def cmd_embed_fuzz(job: Job):
    from .graph_rings import embed_injectivity_fuzz
    from .groups import GraphOfGroups
    G, doc = job.group()
    if not isinstance(G, GraphOfGroups):
        raise InputError("embed-fuzz needs a group of kind graph")
    rep = embed_injectivity_fuzz(G, job.field(doc), trials=job.args.trials, seed=job.args.seed,
                                 support=job.args.support)
    return rep, not rep["witnesses"], rep["outcome"]


COMMANDS: dict[str, tuple[Callable, str]] = {
    "normal-form": (cmd_normal_form, "normal form of a group word"),
    "tower-build": (cmd_tower_build, "build the Ore tower of a poly-Z group"),
    "invert": (cmd_invert, "invert a group-algebra element in the Ore tower"),
    "hf-check": (cmd_hf_check, "Hughes-free (HF) or Linnell (L) independence witness"),
    "crossed-invert": (cmd_crossed_invert, "invert in a crossed product"),
    "domain-fuzz": (cmd_domain_fuzz, "random products in a crossed product"),
    "rank": (cmd_rank, "rank of a matrix over a division ring"),
    "rank-axioms": (cmd_rank_axioms, "fuzz the Sylvester rank axioms"),
    "rank-compare": (cmd_rank_compare, "compare two rank functions on sample matrices"),
    "betti": (cmd_betti, "Betti numbers over the division ring of a group"),
    "euler-check": (cmd_euler_check, "alternating Euler identity for Betti numbers"),
    "scaling-check": (cmd_scaling_check, "index scaling of Betti numbers"),
    "zerodivisor-scan": (cmd_zerodivisor_scan, "search for zero divisors in a group algebra"),
    "graph-nf": (cmd_graph_nf, "linked normal form in a graph of rings"),
    "embed-fuzz": (cmd_embed_fuzz, "injectivity of kG into the graph of division rings"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divring", description="Division rings for group algebras.")
    p.add_argument("--version", action="version", version=f"divring {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (fn, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.set_defaults(func=fn)
        s.add_argument("--output", "-o", help="write the JSON report here (default: standard output)")
        s.add_argument("--field", help="override the base field (QQ or GF(p))")
        if name != "rank-axioms" and name != "rank-compare" and name != "rank":
            s.add_argument("--group", required=True, help="group file")
        else:
            s.add_argument("--group", help="group file (towers of groups)")
            s.add_argument("--tower", help="tower file")
        if name == "normal-form":
            s.add_argument("--word", required=True)
        if name in ("invert", "crossed-invert", "graph-nf"):
            s.add_argument("--element", required=True)
        if name == "hf-check":
            s.add_argument("--subgroup", help="subgroup file (default: the group file)")
            s.add_argument("--mode", choices=["HF", "L"])
            s.add_argument("--range", type=int)
        if name in ("domain-fuzz", "rank-axioms", "embed-fuzz", "zerodivisor-scan"):
            s.add_argument("--trials", type=int, default=1000 if name == "rank-axioms" else 100)
        if name in ("domain-fuzz", "rank-axioms", "embed-fuzz", "zerodivisor-scan", "betti", "euler-check"):
            s.add_argument("--seed", type=int, default=0 if name != "betti" and name != "euler-check" else None)
        if name in ("domain-fuzz", "embed-fuzz"):
            s.add_argument("--support", type=int, default=3)
        if name == "zerodivisor-scan":
            s.add_argument("--support", type=int, default=2)
            s.add_argument("--radius", type=int, default=2)
            s.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
        if name == "rank":
            s.add_argument("--matrix", required=True, help='JSON rows of element strings, e.g. [["x-1","y-1"]]')
        if name == "rank-compare":
            s.add_argument("--left", default="division")
            s.add_argument("--right", default="division")
            s.add_argument("--matrix", action="append", required=True)
        if name in ("betti", "euler-check", "scaling-check", "rank", "rank-axioms", "rank-compare"):
            s.add_argument("--order", type=int, help="truncation order for free groups (default 4)")
        if name in ("betti", "euler-check"):
            s.add_argument("--complex", help="complex file (default: the group file)")
        if name == "scaling-check":
            s.add_argument("--subgroup", help="subgroup file (default: the group file)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    job = Job(args)
    if args.command in ("rank", "rank-axioms", "rank-compare") and not (args.tower or args.group):
        parser.error("one of --tower or --group is required")
    report = {"schema_version": SCHEMA_VERSION, "tool": "divring", "tool_version": __version__,
              "command": args.command, "options": _options(args)}
    started = False
    try:
        for attr in ("group", "tower", "subgroup", "complex"):
            path = getattr(args, attr, None)
            if path:
                job.doc(path)
        started = True
        result, ok, summary = args.func(job)
    except (InputError, ResourceExceeded) as exc:
        report.update(inputs=job.inputs, status="error", error=str(exc))
        if isinstance(exc, ResourceExceeded):
            report["ceiling"] = getattr(exc, "ceiling", None)
        if started:
            _write(report, args.output)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report.update(inputs=job.inputs, result=result, status="pass" if ok else "counterexample")
    _write(report, args.output)
    if args.output:
        print(summary)
    else:
        print(summary, file=sys.stderr)
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


if __name__ == "__main__":
    sys.exit(main())
