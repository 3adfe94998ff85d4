"""Command-line interface.

Every command prints one JSON document on stdout. Exit codes: 0 ok / UPB,
1 negative verdict, 2 usage or input error, 3 timeout or inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import __version__
from .catalog import BASES, CompleteBasis, export_upb, existence_facts, load_upb
from .combinators import DerivationNode
from .states import UpbError, missing_number

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=1)
    sys.stdout.write("\n")


def _default_seed() -> int:
    try:
        return int(os.environ.get("UPB_SEED", "1"))
    except ValueError:
        return 1


def _parse_imports(items) -> dict:
    imports = {}
    for item in items or []:
        if "=" in item:
            name, path = item.split("=", 1)
        else:
            path = item
            name = None
        u = load_upb(path, source=f"import:{Path(path).name}")
        if name:
            u = type(u)(u.dims, u.states, label=name, derivation=u.derivation, source=u.source)
        imports[u.label or Path(path).stem] = u
    return imports


# -- subcommands ------------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.action == "list":
        bases = []
        for name, factory in BASES.items():
            u = factory()
            bases.append({"name": name, "dims": list(u.dims.dims), "size": len(u.states),
                          "missing": missing_number(u)})
        facts = [f.to_json() for f in existence_facts(args.max, args.max)]
        _emit({"schema": "upb/1", "bases": bases, "facts": facts})
        return EXIT_OK
    if args.name not in BASES:
        raise UpbError("bad_recipe", f"unknown catalog entry {args.name!r}")
    doc = export_upb(BASES[args.name]())
    if args.name == "tiles3x3_shifted" and args.embedded:
        from .catalog import tiles_3x3_shifted

        doc = export_upb(tiles_3x3_shifted())
    return _write_doc(doc, args.out)


def _write_doc(doc, out) -> int:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
        _emit({"schema": "upb/1", "written": str(out), "dims": doc["dims"],
               "size": len(doc["states"])})
    else:
        _emit(doc)
    return EXIT_OK


def _load_recipe(text: str):
    p = Path(text)
    if p.suffix == ".json" and p.exists():
        with open(p, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UpbError("malformed", f"{p}: {exc}") from exc
        if isinstance(data, dict) and "derivation" in data:
            data = data["derivation"]
        return DerivationNode.from_json(data)
    return text


def cmd_construct(args) -> int:
    from .recipe import build, build_derivation

    imports = _parse_imports(args.imports)
    recipe = _load_recipe(args.recipe)
    if isinstance(recipe, DerivationNode):
        u = build_derivation(recipe, imports)
    else:
        u = build(recipe, imports)
    if isinstance(u, CompleteBasis):
        raise UpbError("all_complete", "a recipe must produce a UPB, not a complete basis")
    if args.fig:
        from .plotting import plot_tiles

        plot_tiles(u, args.fig)
    return _write_doc(export_upb(u), args.out)


def cmd_verify(args) -> int:
    from .seesaw import seesaw
    from .verifier import EXTENDIBLE, INCONCLUSIVE, UPB, VerificationCertificate, verify_exact

    u = load_upb(args.file)
    seed = args.seed if args.seed is not None else _default_seed()
    cert = None
    if args.method in ("exact", "both"):
        cert = verify_exact(u, timeout_ms=args.timeout_ms, threads=args.threads)
    if args.method in ("seesaw", "both"):
        ss = seesaw(u, seed=seed, restarts=args.restarts, workers=args.threads)
        if cert is None:
            verdict = EXTENDIBLE if ss.extendible else INCONCLUSIVE
            cert = VerificationCertificate(verdict, mode="seesaw")
        elif cert.verdict == INCONCLUSIVE and ss.extendible:
            cert.verdict = EXTENDIBLE
            cert.mode += "+seesaw"
        cert.extra["seesaw"] = ss.to_json()
        if cert.verdict == UPB and ss.extendible:
            # cannot happen for a correct exact search; surface rather than hide
            cert.extra["conflict"] = True
            _emit(cert.to_json())
            return EXIT_LIMIT
    payload = cert.to_json()
    payload["label"] = u.label
    payload["dims"] = list(u.dims.dims)
    payload["missing"] = missing_number(u)
    if u.source:
        payload["source"] = u.source
    _emit(payload)
    return {UPB: EXIT_OK, EXTENDIBLE: EXIT_NEGATIVE}.get(cert.verdict, EXIT_LIMIT)


def cmd_plan(args) -> int:
    from .planner import closure, multipartite_plan, realize, theorem_ranges, compress

    try:
        dims = tuple(int(x) for x in args.dims.split(","))
    except ValueError as exc:
        raise UpbError("usage", f"bad --dims {args.dims!r}") from exc
    if len(dims) < 2 or any(d < 2 for d in dims):
        raise UpbError("dims_invalid", f"bad dims {dims}")
    imports = list(_parse_imports(args.imports).values())
    if len(dims) == 2:
        top = max(args.max, *dims)
        fact = closure(top, top, imports).fact(*dims)
    else:
        fact = multipartite_plan(dims, imports)
    payload = fact.to_json()
    payload["compact"] = compress(fact.values)
    payload["guarantees"] = {k: compress(v) for k, v in theorem_ranges(*dims).items()}
    if args.realize is not None:
        r = realize(dims, args.realize, max_dim=args.max, imports=imports)
        payload["realize"] = r.to_json()
        if r.derivation is not None and r.status == "buildable":
            from .recipe import to_recipe

            payload["realize"]["recipe"] = to_recipe(r.derivation)
    _emit(payload)
    if args.realize is not None and payload["realize"]["status"] == "unknown":
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_table1(args) -> int:
    from .planner import reproduce_table1

    rep = reproduce_table1()
    payload = rep.to_json()
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "table1.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["m", "n", "closure", "missed", "extra"])
            for cell in payload["cells"]:
                w.writerow([cell["m"], cell["n"], cell["closure"],
                            " ".join(map(str, cell["missed"])),
                            " ".join(map(str, cell["extra"]))])
        (out / "table1.txt").write_text(rep.grid_text() + "\n", encoding="utf-8")
        from .plotting import plot_table1

        plot_table1(rep, out / "table1.png")
        payload["files"] = ["table1.csv", "table1.txt", "table1.png"]
    if not args.quiet:
        print(rep.grid_text(), file=sys.stderr)
    _emit(payload)
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_bes(args) -> int:
    from .bes import jacobi_eigvalsh, partial_transpose, report, upb_state
    from .verifier import UPB, verify_exact

    u = load_upb(args.file)
    cert = None
    if not args.skip_verify:
        cert = verify_exact(u, timeout_ms=args.timeout_ms)
        if cert.verdict != UPB:
            payload = {"schema": "upb/1", "error": "not_upb",
                       "message": f"verification verdict {cert.verdict}"}
            _emit(payload)
            return EXIT_NEGATIVE if cert.verdict != "Inconclusive" else EXIT_LIMIT
    rho = upb_state(u, certificate=cert, waive=args.skip_verify)
    payload = report(u, rho)
    if args.out_dir:
        from .bes import bipartitions
        from .plotting import plot_spectrum

        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        eigs = {"rho": jacobi_eigvalsh(rho.matrix)}
        for cut in bipartitions(len(rho.dims)):
            eigs[f"PT{list(cut)}"] = jacobi_eigvalsh(partial_transpose(rho, cut))
        plot_spectrum(eigs, out / "bes_spectrum.png")
        with open(out / "bes_spectrum.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["operator", "index", "eigenvalue"])
            for name, ev in eigs.items():
                for i, e in enumerate(ev):
                    w.writerow([name, i, repr(float(e))])
        payload["files"] = ["bes_spectrum.png", "bes_spectrum.csv"]
    _emit(payload)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="upbforge", description="Construct and certify unextendible product bases."
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list or export catalog UPBs")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("name", nargs="?", default="tiles3x3")
    p.add_argument("--max", type=int, default=14, help="grid bound for size facts")
    p.add_argument("--embedded", action="store_true",
                   help="export tiles3x3_shifted on its 3x6 block instead of 3x3")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("construct", help="build a UPB from a recipe")
    p.add_argument("--recipe", required=True, help="recipe text or derivation .json")
    p.add_argument("--import", dest="imports", action="append", metavar="[NAME=]PATH")
    p.add_argument("--out")
    p.add_argument("--fig", help="write a tile figure (bipartite only)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="decide unextendibility")
    p.add_argument("file")
    p.add_argument("--method", choices=["exact", "seesaw", "both"], default="exact")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--timeout-ms", type=float)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plan", help="reachable missing numbers for given dims")
    p.add_argument("--dims", required=True, help="comma separated, e.g. 7,7 or 10,4,2")
    p.add_argument("--max", type=int, default=14)
    p.add_argument("--import", dest="imports", action="append", metavar="[NAME=]PATH")
    p.add_argument("--realize", type=int, metavar="K", help="also derive missing number K")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("table1", help="reproduce the small-dimension table")
    p.add_argument("--out-dir", help="write table1.csv/.txt/.png here")
    p.add_argument("--quiet", action="store_true", help="no grid on stderr")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("bes", help="bound entangled state from a UPB")
    p.add_argument("file")
    p.add_argument("--skip-verify", action="store_true")
    p.add_argument("--timeout-ms", type=float)
    p.add_argument("--out-dir", help="write spectrum figure and CSV here")
    p.set_defaults(func=cmd_bes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UpbError as exc:
        _emit({"schema": "upb/1", **exc.to_json()})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`)
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except (OSError, ValueError) as exc:
        _emit({"schema": "upb/1", "error": "usage", "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
