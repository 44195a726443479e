"""``stallings`` command line.

Every subcommand prints one JSON document (UTF-8) to stdout, or to
``--out``.  Exit status is 0 on success, 2 when an input is malformed or
violates a precondition, and 1 when ``verify`` finds a failing property.

Subgroups are given as comma-separated words (``a``/``A`` for the first
generator and its inverse, ``b``/``B`` for the second, and so on) or as
``@path`` naming a JSON file holding a core dump or a
``{"rank": r, "generators": [...]}`` document.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path as FilePath

from . import bounds, covering, pullback, sampling, verify
from .cores import BasedCore, core_from_words, free_basis, lattice_excision, trace
from .graph import Graph, Path, Subgraph, spanning_tree
from .words import Substitution, apply_substitution, format_word, parse_word, parse_words


class InputError(ValueError):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(FilePath(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_subgroup(text: str, rank: int = 2, subst: str | None = None) -> BasedCore:
    if text.startswith("@"):
        doc = _read_json(text[1:])
        if "generators" in doc:
            r = int(doc.get("rank", rank))
            gens = [parse_word(w, r) for w in doc["generators"]]
        else:
            core = BasedCore.from_dict(doc)
            r, gens = core.rank, free_basis(core)
    else:
        r, gens = rank, parse_words(text, rank)
    if subst:
        s = Substitution.parse(subst, r)
        gens = apply_substitution(gens, s)
    return core_from_words(gens, r)


def _gens(core: BasedCore) -> list[str]:
    return [format_word(w) for w in free_basis(core)]


def _core_doc(core: BasedCore) -> dict:
    return {"generators": _gens(core), "core": core.to_dict()}


# -- subcommands ---------------------------------------------------------


def cmd_core(args) -> dict:
    return load_subgroup(args.gens, args.rank, args.subst).to_dict()


def cmd_invariants(args) -> dict:
    return covering.invariants_report(load_subgroup(args.gens, args.rank, args.subst))


def cmd_index(args) -> dict:
    idx = covering.index(load_subgroup(args.gens, args.rank, args.subst))
    return {"index": "infinite" if idx == covering.INFINITE else idx}


def cmd_member(args) -> dict:
    core = load_subgroup(args.gens, args.rank, args.subst)
    t = trace(core, parse_word(args.word, core.rank))
    return {"word": args.word, "member": t.closed, "status": t.status, "vertex": t.vertex, "position": t.position}


def cmd_galois(args) -> dict:
    res = covering.is_galois(load_subgroup(args.gens, args.rank, args.subst))
    doc = {"galois": res.galois}
    if not res.galois:
        doc["witness"] = format_word(res.witness)
        doc["vertex"] = res.vertex
    return doc


def cmd_intersect(args) -> dict:
    c1 = load_subgroup(args.gens1, args.rank, args.subst)
    c2 = load_subgroup(args.gens2, args.rank, args.subst)
    report = pullback.fiber_product(c1, c2)
    doc = report.to_dict()
    doc["double_coset_reps"] = [
        {"rep": format_word(g), "rank": comp.rank, "intersection": _gens(pullback.conjugate_intersection(c1, c2, g))}
        for g, comp in pullback.double_coset_reps(report)
    ]
    doc["pointed_intersection"] = _gens(pullback.pointed_intersection(c1, c2))
    return doc


def cmd_bound(args) -> dict:
    c1 = load_subgroup(args.gens1, args.rank, args.subst)
    c2 = load_subgroup(args.gens2, args.rank, args.subst)
    return bounds.compare(c1, c2).to_dict()


def cmd_join(args) -> dict:
    c1 = load_subgroup(args.gens1, args.rank, args.subst)
    c2 = load_subgroup(args.gens2, args.rank, args.subst)
    return _core_doc(pullback.join(c1, c2))


def cmd_complete(args) -> dict:
    core = load_subgroup(args.gens, args.rank, args.subst)
    avoid = parse_words(args.avoid, core.rank) if args.avoid else []
    cover = covering.complete_to_finite_cover(core, avoid)
    doc = _core_doc(cover)
    doc["index"] = cover.num_vertices
    return doc


def cmd_witness(args) -> dict:
    core = load_subgroup(args.gens, args.rank, args.subst)
    g = covering.escape_witness(core, parse_word(args.word, core.rank))
    return {"word": args.word, "witness": format_word(g)}


def cmd_family(args) -> dict:
    c1, c2 = bounds.family_pair(args.k)
    doc = {"k": args.k, "generators": _gens(c1)}
    doc.update(bounds.compare(c1, c2).to_dict())
    return doc


def cmd_excise(args) -> dict:
    doc = _read_json(args.file)
    try:
        base = Graph.from_dict(doc["base"])
        loops = [Path(int(p["start"]), tuple(int(d) for d in p["darts"])) for p in doc["loops"]]
        if "tree" in doc:
            tree = Subgraph(frozenset(base.vertices), frozenset(int(d) for d in doc["tree"]))
        else:
            tree = spanning_tree(base, loops[0].start if loops else base.vertices[0])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed excision document: {exc!r}") from exc
    _, words = lattice_excision(base, tree, loops)
    core = core_from_words(words, 2)
    return {
        "tree": sorted(tree.darts),
        "words": [format_word(w) for w in words],
        "rank": core.subgroup_rank,
        "core": core.to_dict(),
    }


def cmd_sample(args) -> dict | list:
    cfg = _config(args)
    if args.kind == "words":
        return sampling.sample_words(cfg)
    cores = sampling.sample_complete(cfg, args.index)
    return [{"index": c.num_vertices, "generators": _gens(c)} for c in cores]


def _config(args) -> sampling.RunConfig:
    return sampling.RunConfig.from_env(
        seed=args.seed,
        count=args.count,
        max_len=args.maxlen,
        rank=args.rank,
        jobs=getattr(args, "jobs", None),
        csv=args.csv,
        svg=args.svg,
    )


def cmd_verify(args) -> dict:
    cfg = _config(args)
    results = verify.run_suite(cfg, mutant=args.mutant)
    for r in results:
        print(r.line(), file=sys.stderr)
        for f in r.failures:
            print(f"    {f}", file=sys.stderr)
    rows = next((r.data for r in results if r.data), [])
    if cfg.csv:
        verify.write_csv(cfg.csv, rows)
    if cfg.svg:
        verify.write_svg(cfg.svg, rows)
    args.failed = not all(r.passed for r in results)
    return {
        "seed": cfg.seed,
        "passed": not args.failed,
        "properties": [
            {"name": r.name, "passed": r.passed, "cases": r.cases, "failures": r.failure_count,
             "examples": r.failures}
            for r in results
        ],
    }


def _batch_bound(line: str) -> dict:
    left, right = line.split(";")
    return bounds.compare(core_from_words(parse_words(left)), core_from_words(parse_words(right))).to_dict()


def cmd_batch_bound(args) -> list:
    """Bound reports for ``gens1;gens2`` lines, evaluated in a worker pool, input order kept."""
    lines = [ln.strip() for ln in FilePath(args.file).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            return list(pool.map(_batch_bound, lines))
    return [_batch_bound(ln) for ln in lines]


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rank", type=int, default=2, help="rank of the ambient free group")
    common.add_argument("--seed", type=int, default=None, help="sampler seed (STALLINGS_SEED overrides)")
    common.add_argument("--count", type=int, default=None)
    common.add_argument("--maxlen", type=int, default=None)
    common.add_argument("--out", default=None, help="write the document here instead of stdout")
    common.add_argument("--csv", default=None)
    common.add_argument("--svg", default=None)
    common.add_argument("--subst", default=None, help="apply a substitution such as 'a,Ab' to the generators")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="stallings", description="Subgroups of free groups via core graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, *positionals):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for arg, kw in positionals:
            p.add_argument(arg, **kw)
        p.set_defaults(func=fn)
        return p

    one = ("gens", {"help": "comma-separated generators or @file.json"})
    two = [("gens1", {}), ("gens2", {})]
    add("core", cmd_core, "canonical core of a subgroup", one)
    add("invariants", cmd_invariants, "H, n1, n2, rank, index, normality", one)
    add("index", cmd_index, "index of the subgroup", one)
    add("member", cmd_member, "membership of a word", one, ("word", {}))
    add("galois", cmd_galois, "normality of a finite-index subgroup", one)
    add("intersect", cmd_intersect, "fiber product and conjugate intersections", *two)
    add("bound", cmd_bound, "exact intersection rank sum against bounds", *two)
    add("join", cmd_join, "subgroup generated by both", *two)
    p = add("complete", cmd_complete, "finite-index overgroup with the subgroup as free factor", one)
    p.add_argument("--avoid", default=None, help="comma-separated words to keep outside")
    add("witness", cmd_witness, "conjugator moving a word out of the subgroup", one, ("word", {}))
    add("family", cmd_family, "the two-sided family with k a-loops", ("k", {"type": int}))
    add("excise", cmd_excise, "collapse a spanning tree of a rank-2 base graph", ("file", {}))
    p = add("verify", cmd_verify, "run the seeded property suite")
    p.add_argument("--mutant", choices=["skip-n2"], default=None, help=argparse.SUPPRESS)
    p = add("sample", cmd_sample, "seeded random instances", ("kind", {"choices": ["words", "complete"]}))
    p.add_argument("--index", type=int, default=None, help="fixed index for complete samples")
    add("batch-bound", cmd_batch_bound, "bound reports for 'gens1;gens2' lines of a file", ("file", {}))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.failed = False
    try:
        doc = args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"stallings {args.command}: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    if args.out:
        FilePath(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 1 if args.failed else 0


if __name__ == "__main__":
    sys.exit(main())
