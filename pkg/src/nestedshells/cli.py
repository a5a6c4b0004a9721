"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 verification failure or catalog
mismatch, 3 unreadable input.  Results go to stdout (or ``--out``);
progress goes to stderr.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path

from . import capsidfit, dihedral, export, icosa, shells
from .errors import CatalogMismatch, EmptyModel, NoSurface, ParseError, VerificationError
from .exactnum import CycInt
from .groupcore import b6

log = logging.getLogger("nestedshells")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_PARSE = 0, 1, 2, 3

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_seed(text: str, length: int | None = None) -> tuple[int, ...]:
    try:
        seed = tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(","))
    except ValueError as exc:
        raise UsageError(f"seed must be comma-separated integers, got {text!r}") from exc
    if length is not None and len(seed) != length:
        raise UsageError(f"seed needs {length} coordinates, got {len(seed)}")
    return seed


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment.  Keys use option names
    with dashes or underscores."""
    cfg = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        low = value.lower()
        cfg[key.replace("-", "_")] = True if low in _TRUE else False if low in _FALSE else value
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_classify(args) -> int:
    if args.ambient_check:
        order = b6().order
        if order != 46080:
            raise VerificationError(f"|B6| = {order}")
        log.info("ambient group order %d", order)
    cat = icosa.build_catalog()
    if not args.from_appendix_only:
        log.info("running subgroup discovery (about half a minute)")
        found = icosa.build_catalog(discover=True, threads=args.threads)
        if found.keys() != cat.keys() or found.inclusion_edges != cat.inclusion_edges:
            raise CatalogMismatch("discovered catalog differs from the hardcoded generators")
    report = icosa.verify_h3_structure(cat)
    if report["failures"]:
        raise VerificationError("; ".join(report["failures"]))
    doc = cat.to_json_dict()
    doc["source"] = "generators" if args.from_appendix_only else "generators+discovery"
    _emit(export.dumps(doc), args.out)
    if args.edges:
        _emit("".join(f"{a} {b}\n" for a, b in sorted(cat.inclusion_edges, key=_edge_key)), args.edges)
    return EXIT_OK


def _edge_key(e):
    return tuple(int(x[1:]) for x in e)


def cmd_orbit(args) -> int:
    cat = icosa.build_catalog()
    if args.group not in cat.labels:
        raise UsageError(f"unknown group {args.group}; choose from {', '.join(cat.labels)}")
    seed = parse_seed(args.seed, 6)
    arr = shells.build_point_array(cat[args.group], seed, label=args.group)
    if args.format == "json":
        text = export.array_to_json(arr)
    elif args.format == "csv":
        text = export.array_to_csv(arr)
    else:
        layer = args.layer or len(arr.layers)
        if not 1 <= layer <= len(arr.layers):
            raise UsageError(f"layer must be between 1 and {len(arr.layers)}")
        text = export.array_to_off(arr, layer)
    _emit(text, args.out)
    return EXIT_OK


def cmd_library(args) -> int:
    if args.N < 1:
        raise UsageError("N must be at least 1")
    lib = shells.build_library(args.N, threads=args.threads)
    doc = lib.summary()
    doc["arrays"] = [
        {"group": a.group_label, "seed": list(a.seed), "points": a.total_points, "layers": a.sizes(),
         "aliases": [[list(s), g] for s, g in lib.aliases(i)]}
        for i, a in enumerate(lib.arrays)
    ]
    _emit(export.dumps(doc), args.out)
    return EXIT_OK


def cmd_dihedral(args) -> int:
    if args.basis == "roots":
        if args.n != 5:
            raise UsageError("the root-lattice basis exists only for n = 5")
        chain = dihedral.a4_case()
        which = {"dihedral": "H", "holomorph": "K", "lattice": "Lambda"}[args.subgroup]
        seed = parse_seed(args.seed or "1,2,4,3", 4)
        layers = chain.orbit_layers(which, seed)
        label = f"A4:{which}"
    else:
        if args.subgroup == "lattice":
            raise UsageError("the full lattice group needs --basis roots (n = 5)")
        if args.n < 3:
            raise UsageError("n must be at least 3")
        seed = parse_seed(args.seed or "1,2", None)
        z = CycInt(args.n, list(seed))
        grp = dihedral.hol_group(args.n) if args.subgroup == "holomorph" else dihedral.dihedral_subgroup(args.n)
        layers = dihedral.lift_and_orbit(args.n, grp, z, rtol=args.tolerance).layers
        label = f"n={args.n}:{args.subgroup}"
    if args.format == "csv":
        text = export.planar_to_csv(layers)
    else:
        text = export.dumps(export.planar_to_dict(layers, label, seed))
    _emit(text, args.out)
    return EXIT_OK


def cmd_fit(args) -> int:
    model = capsidfit.ingest_pdb(args.pdb, expand_symmetry=args.expand_symmetry)
    clusters = capsidfit.surface_clusters(model, args.radial_fraction, args.linkage_cutoff)
    log.info("%d C-alpha atoms, max radius %.2f A, %d surface clusters",
             len(model.calpha), model.max_radius, len(clusters))
    lib = shells.build_library(args.N, threads=args.threads)
    results = capsidfit.rank_library(lib, model, args.r_tilde, args.scale_override)
    if args.format == "csv":
        rows = ["group,seed,selected,outer_match,score,scale"]
        rows += [f"{r.array_id[1]},\"{','.join(map(str, r.array_id[0]))}\",{int(r.selected)},"
                 f"{r.outer_match:.6f},{r.score:.6f},{r.scale:.6f}" for r in results]
        text = "\n".join(rows) + "\n"
    else:
        text = export.dumps({
            "pdb": str(args.pdb), "N": args.N, "calpha": int(len(model.calpha)),
            "max_radius": round(model.max_radius, 6), "clusters": len(clusters),
            "radial_fraction": args.radial_fraction, "linkage_cutoff": args.linkage_cutoff,
            "r_tilde": args.r_tilde, "results": [r.to_dict() for r in results]})
    _emit(text, args.out)
    if args.export_pdb:
        best = next((r for r in results if r.selected), None)
        if best is None:
            log.warning("no selected array to export")
        else:
            arr = next(a for a in lib.arrays if a.fingerprint == best.fingerprint)
            pts = [layer.points_float * best.scale for layer in arr.layers]
            _emit(export.pseudo_pdb(pts), args.export_pdb)
    return EXIT_OK


def cmd_verify(args) -> int:
    failures = []
    emb = icosa.build_embedding()
    failures += icosa.verify_embedding(emb)
    cat = icosa.build_catalog()
    failures += icosa.verify_h3_structure(cat)["failures"]
    log.info("embedding and catalog checked")
    lib = shells.build_library(1)
    h = cat["G1"]
    for seed in lib.seeds:
        for lab in lib.labels:
            rep = shells.verify_coset_orbits(cat[lab], h, seed)
            failures += [f"{lab} {seed}: {v}" for v in rep.violations]
    log.info("coset-orbit properties checked on %d pairs", lib.n_pairs)
    for n in (5, 6, 7, 8, 12):
        if not dihedral.verify_hol(n).ok:
            failures.append(f"holomorph checks failed for n = {n}")
    chain = dihedral.a4_case()
    rng = random.Random(args.seed)
    seeds = [tuple(rng.randint(-5, 5) for _ in range(4)) for _ in range(50)]
    failures += dihedral.verify_a4_coset_orbits(chain, seeds)
    doc = {"failures": failures, "ok": not failures}
    _emit(export.dumps(doc), args.out)
    return EXIT_OK if not failures else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nestedshells", description="Nested icosahedral point arrays from projected B6 orbits.")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="catalog of B6 subgroups containing the icosahedral group")
    c.add_argument("--from-appendix-only", action="store_true", help="skip subgroup discovery")
    c.add_argument("--ambient-check", action="store_true", help="assert the order of B6")
    c.add_argument("--edges", help="also write the inclusion edges to this file")
    c.add_argument("--out", help="output file (default stdout)")
    c.set_defaults(func=cmd_classify)

    o = sub.add_parser("orbit", help="layered projected orbit of one seed")
    o.add_argument("group", help="catalog label, G1..G13")
    o.add_argument("seed", help="six comma-separated integers")
    o.add_argument("--format", choices=("json", "csv", "off"), default="json")
    o.add_argument("--layer", type=int, help="layer for OFF output, 1 = innermost (default outermost)")
    o.add_argument("--out")
    o.set_defaults(func=cmd_orbit)

    lb = sub.add_parser("library", help="all distinct arrays for seeds in the cube [-N, N]^6")
    lb.add_argument("N", type=int)
    lb.add_argument("--out")
    lb.set_defaults(func=cmd_library)

    d = sub.add_parser("dihedral", help="planar orbits with n-fold symmetry")
    d.add_argument("--n", type=int, default=5)
    d.add_argument("--subgroup", choices=("dihedral", "holomorph", "lattice"), default="holomorph")
    d.add_argument("--basis", choices=("cyclotomic", "roots"), default="cyclotomic",
                   help="seed as coefficients of powers of xi_n, or A4 simple-root coordinates")
    d.add_argument("--seed", help="comma-separated integers")
    d.add_argument("--tolerance", type=float, default=dihedral.RADIUS_RTOL,
                   help="relative radius tolerance for n != 5 (default %(default)g)")
    d.add_argument("--format", choices=("json", "csv"), default="json")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dihedral)

    f = sub.add_parser("fit", help="rank library arrays against a capsid structure")
    f.add_argument("pdb")
    f.add_argument("--N", type=int, default=2)
    f.add_argument("--expand-symmetry", action="store_true")
    f.add_argument("--radial-fraction", type=float, default=capsidfit.RADIAL_FRACTION)
    f.add_argument("--linkage-cutoff", type=float, default=capsidfit.LINKAGE_CUTOFF)
    f.add_argument("--r-tilde", type=float, default=capsidfit.R_TILDE)
    f.add_argument("--scale-override", type=float, help="fixed scale instead of anchoring to the surface")
    f.add_argument("--format", choices=("json", "csv"), default="json")
    f.add_argument("--export-pdb", help="write the best selected array as HETATM records")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)

    v = sub.add_parser("verify", help="run the invariant checks")
    v.add_argument("--seed", type=int, default=0, help="random seed for sampled checks")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    parser.set_defaults(**cfg)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**cfg)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except ParseError as exc:
        print(f"nestedshells: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nestedshells: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        sys.stderr.close()  # downstream reader went away; nothing left to report
        return EXIT_OK
    except (CatalogMismatch, VerificationError) as exc:
        print(f"nestedshells: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ParseError, EmptyModel, NoSurface, OSError) as exc:
        print(f"nestedshells: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
