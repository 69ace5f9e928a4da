"""Command-line interface: word reduction, ball exports, the verify harness,
and automorphism utilities.

Exit codes: 0 pass, 1 audit failure, 2 resource or validation error,
3 no failures but at least one inconclusive check.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from typing import Optional

from . import algebraic, davis, diagrams, walls
from .autgroup import (
    AutElement,
    aut_decompose,
    aut_serialize,
    enumerate_loc,
    generator_images,
    loc_stabilizes_P_audit,
    witness_details,
    witness_fixator_check,
)
from .errors import (
    CycleWallError,
    DecompositionError,
    InconclusiveError,
    ResourceLimitError,
    ValidationError,
)
from .localgroups import cyclic_group, integers_group, table_group
from .reports import Report
from .words import (
    GroupElement,
    Presentation,
    Syllable,
    coset_rep,
    enumerate_ball_elements,
    format_word,
    identity,
    parse_word,
    reduce_word,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_RESOURCE = 2
EXIT_INCONCLUSIVE = 3

_S3_NAME = "S3"


def _builtin_s3():
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(3))] for b in perms]
             for a in perms]
    names = ["".join(map(str, p)) for p in perms]
    return table_group(table, names=names, name=_S3_NAME)


def _group_from_json(spec, where: str):
    if isinstance(spec, str):
        text = spec.strip()
        if text == "Z":
            return integers_group()
        if text.upper() == _S3_NAME:
            return _builtin_s3()
        if text.startswith("Z/"):
            try:
                k = int(text[2:])
            except ValueError:
                raise ValidationError(f"{where}: bad cyclic order in {text!r}")
            return cyclic_group(k, name=text)
        raise ValidationError(
            f"{where}: unknown group {text!r} (use 'Z/k', 'Z', 'S3', or a table)")
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "cyclic":
            return cyclic_group(int(spec["order"]), name=spec.get("name", ""))
        if kind == "integers":
            return integers_group(name=spec.get("name", ""))
        if kind == "table":
            return table_group(spec["table"], names=spec.get("names"),
                               name=spec.get("name", ""))
        raise ValidationError(f"{where}: unknown group kind {kind!r}")
    raise ValidationError(f"{where}: a group is a string or an object")


def load_presentation(path: str) -> Presentation:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read presentation file: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    n = doc.get("n")
    groups = doc.get("groups")
    if not isinstance(n, int) or not isinstance(groups, list):
        raise ValidationError(f"{path}: required fields: n (int), groups (list)")
    if len(groups) != n:
        raise ValidationError(f"{path}: n={n} but {len(groups)} groups given")
    built = tuple(_group_from_json(g, f"{path}: groups[{i}]")
                  for i, g in enumerate(groups))
    return Presentation(built)


# -- suites --------------------------------------------------------------------


def words_suite(p: Presentation, depth: int, seed: int) -> Report:
    report = Report()
    rng = random.Random(seed)
    pool = enumerate_ball_elements(p, min(depth, 3)) if p.all_finite \
        else [identity(p)]

    bad = [format_word(g) for g in pool if parse_word(p, format_word(g)) != g]
    report.add("words.parse-format-roundtrip", f"elements={len(pool)}",
               not bad, bad[:5] or None)

    # words with no two equal or adjacent consecutive supports come back verbatim
    verbatim_bad = []
    for _ in range(200):
        word = []
        last = None
        for _ in range(rng.randrange(1, 7)):
            choices = [v for v in range(p.n)
                       if last is None or (v != last and not p.adjacent(v, last))]
            v = rng.choice(choices)
            last = v
            size = p.group(v).size
            word.append(Syllable(v, rng.randrange(1, size if size else 5)))
        g = reduce_word(p, word)
        if g.word != tuple(word):
            verbatim_bad.append(format_word(GroupElement(p, tuple(word))))
    report.add("words.rigid-words-come-back-verbatim", "samples=200",
               not verbatim_bad, verbatim_bad[:5] or None)

    windows = [frozenset({i, (i + 1) % p.n}) for i in range(p.n)]
    rep_bad = []
    for g in pool[:400]:
        for S in windows:
            r = coset_rep(g, S)
            if coset_rep(r, S) != r:
                rep_bad.append((format_word(g), sorted(S)))
    report.add("words.coset-representative-idempotent",
               f"elements={min(len(pool), 400)}", not rep_bad, rep_bad[:5] or None)
    return report


def davis_suite(p: Presentation, radius: int, seed: int) -> Report:
    b = davis.build_ball(p, radius)
    report = Report()
    report.extend(davis.t4_audit(b))
    report.extend(davis.polygon_pair_audit(b))
    report.extend(davis.free_face_audit(b))
    report.extend(davis.links_audit(b))
    return report


def walls_suite(p: Presentation, radius: int, depth: int, seed: int) -> Report:
    b = davis.build_ball(p, radius)
    cg = walls.crossing_graph(b)
    report = Report()
    report.extend(walls.tree_property_audit(b))
    report.extend(walls.wall_no_shared_polygon_audit(b))
    report.extend(walls.wall_fixator_audit(b, depth))
    report.extend(walls.wall_stabilizer_audit(b, depth))
    report.extend(walls.no_triple_crossing_audit(cg))
    report.extend(walls.min_set_audit(b, cg))
    report.extend(walls.hyperplane_treewall_audit(davis.subdivide(b)))
    report.extend(walls.vertex_stabilizer_criterion_audit(b, min(depth, 2)))
    report.extend(walls.adjacency_criterion_audit(b, depth))
    rng = random.Random(seed)
    keys = sorted(cg.nodes)
    pairs = list(itertools.combinations(keys, 2))
    rng.shuffle(pairs)
    for k1, k2 in pairs[:25]:
        report.extend(walls.classify_pair(
            b, cg, cg.nodes[k1]["wall"], cg.nodes[k2]["wall"], depth))
    return report


def algebraic_suite(p: Presentation, radius: int, depth: int, seed: int) -> Report:
    b = davis.build_ball(p, radius)
    report = Report()
    report.extend(algebraic.phi_iso_check(b, seed=seed, L=depth + 1))
    report.extend(algebraic.induced_cycle_audit(b))
    report.extend(algebraic.join_agreement_audit(b))
    return report


def aut_suite(p: Presentation, depth: int, seed: int) -> Report:
    report = Report()
    loc = enumerate_loc(p)
    report.extend(loc_stabilizes_P_audit(p, loc[:60], seed=seed))

    rng = random.Random(seed)
    pool = enumerate_ball_elements(p, min(depth, 3))
    bad = []
    trials = 60
    for _ in range(trials):
        a = AutElement(rng.choice(pool), rng.choice(loc))
        try:
            got = aut_decompose(p, generator_images(a))
        except (DecompositionError, CycleWallError) as exc:
            bad.append({"aut": aut_serialize(a), "error": str(exc)})
            continue
        if got != a:
            bad.append({"aut": aut_serialize(a), "got": aut_serialize(got)})
    report.add("aut.decompose-roundtrip", f"samples={trials}",
               not bad, bad[:3] or None)

    d = witness_details(p)
    if d["degenerate"]:
        report.add("aut.witness-degenerate-case-reported",
                   "all vertex groups have trivial automorphism groups", True)
    else:
        report.extend(witness_fixator_check(p, d["element"]))
    return report


def diagrams_suite(p: Presentation, radius: int, seed: int) -> Report:
    b = davis.build_ball(p, max(radius, 2))
    return diagrams.filling_audit(b, seed=seed, count=20)


_SUITES = ("words", "davis", "walls", "algebraic", "aut", "diagrams", "all")


def run_suite(p: Presentation, suite: str, radius: int, depth: int,
              seed: int) -> Report:
    report = Report()
    if suite in ("words", "all"):
        report.extend(words_suite(p, depth, seed))
    if suite in ("davis", "all"):
        report.extend(davis_suite(p, radius, seed))
    if suite in ("walls", "all"):
        report.extend(walls_suite(p, radius, depth, seed))
    if suite in ("algebraic", "all"):
        report.extend(algebraic_suite(p, radius, depth, seed))
    if suite in ("aut", "all"):
        report.extend(aut_suite(p, depth, seed))
    if suite in ("diagrams", "all"):
        report.extend(diagrams_suite(p, radius, seed))
    return report


# -- commands ----------------------------------------------------------------------


def cmd_reduce(args) -> int:
    p = load_presentation(args.presentation)
    words = args.word if args.word else [line.rstrip("\n") for line in sys.stdin]
    for text in words:
        print(format_word(parse_word(p, text)))
    return EXIT_PASS


def cmd_ball(args) -> int:
    p = load_presentation(args.presentation)
    b = davis.build_ball(p, args.radius)
    if args.subdivide:
        b = davis.subdivide(b)
    out = davis.ball_to_json(b) if args.format == "json" else davis.ball_to_dot(b)
    _write(args.output, out)
    return EXIT_PASS


def cmd_verify(args) -> int:
    p = load_presentation(args.presentation)
    report = run_suite(p, args.suite, args.radius, args.depth, args.seed)
    _write(args.output, report.to_json())
    if report.failures:
        return EXIT_FAIL
    if report.inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def cmd_aut(args) -> int:
    p = load_presentation(args.presentation)
    if args.action == "witness":
        d = witness_details(p)
        doc = {"schema": "cyclewall/1",
               "element": format_word(d["element"]),
               "degenerate": d["degenerate"],
               "m": d["m"],
               "vertex_sequence": d.get("vertex_sequence", [])}
        _write(args.output, json.dumps(doc, indent=2, sort_keys=True))
        return EXIT_PASS
    if args.action == "fixator":
        d = witness_details(p)
        g = parse_word(p, args.element) if args.element is not None \
            else d["element"]
        report = witness_fixator_check(p, g)
        _write(args.output, report.to_json())
        return EXIT_PASS if report.ok else EXIT_FAIL
    # decompose
    if args.images is None:
        raise ValidationError("aut decompose requires --images FILE")
    with open(args.images) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "images" not in doc:
        raise ValidationError("images file must contain an 'images' field")
    images = [[parse_word(p, w) for w in per_vertex]
              for per_vertex in doc["images"]]
    try:
        a = aut_decompose(p, images)
    except DecompositionError as exc:
        _write(args.output, json.dumps(
            {"schema": "cyclewall/1", "error": str(exc),
             "witness": exc.witness}, indent=2, sort_keys=True, default=str))
        return EXIT_FAIL
    _write(args.output, json.dumps(aut_serialize(a), indent=2, sort_keys=True))
    return EXIT_PASS


def _write(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclewall",
        description="Toolkit for cyclic products of groups: normal forms, "
                    "polygonal complex audits, tree-walls, automorphisms, "
                    "and curvature checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--presentation", required=True,
                        help="JSON file: {\"n\": int, \"groups\": [...]}")
        sp.add_argument("--radius", type=int, default=2)
        sp.add_argument("--depth", type=int, default=3,
                        help="syllable-length bound for truncated searches")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", default=None, help="write to file, not stdout")

    sp = sub.add_parser("reduce", help="print canonical forms of words")
    common(sp)
    sp.add_argument("word", nargs="*",
                    help="words like 'v1:1 v2:1'; reads stdin lines if omitted")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("ball", help="build and export a bounded ball")
    common(sp)
    sp.add_argument("--format", choices=("json", "dot"), default="json")
    sp.add_argument("--subdivide", action="store_true",
                    help="export the square subdivision instead")
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("verify", help="run an audit suite and print the report")
    common(sp)
    sp.add_argument("--suite", choices=_SUITES, default="all")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("aut", help="automorphism utilities")
    common(sp)
    sp.add_argument("action", choices=("decompose", "witness", "fixator"))
    sp.add_argument("--images", default=None,
                    help="JSON file {\"images\": [[word, ...], ...]} for decompose")
    sp.add_argument("--element", default=None,
                    help="word whose local fixator to compute (fixator action)")
    sp.set_defaults(func=cmd_aut)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
