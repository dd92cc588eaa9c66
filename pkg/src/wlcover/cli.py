"""Command-line interface: ``wlcover <subcommand> ...``.

JSON (the default) is the stable machine interface and is emitted with
sorted keys. Exit codes: 0 success, 1 usage, 2 validation failure, 3 cap
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    AddendumViolated,
    CapExceeded,
    NotApplicable,
    NotTransitive,
    ParseError,
    RelationViolated,
    UnknownComponent,
    WLCoverError,
    WrongDiagram,
)
from .fpgroups import OrbifoldGroupSpec, branched_cover_h1, branched_cover_pi1, orbifold_group, try_trivialize
from .links import LinkDiagram, builtin_diagram, parse_pd
from .monodromy import Monodromy, branching_indices, search_monodromies, theorem2_constraints, validate
from .moves import run_script
from .oracles import alexander_polynomial, cyclic_cover_h1_order, goeritz_h1_double_cover
from .regular import DEFAULT_REGULAR_CAP, associated_regular, is_regular, verify_addendum

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    output: str = "json"
    degree_cap: int | None = None
    group_cap: int = DEFAULT_REGULAR_CAP
    mode: str = "exhaustive"
    seed: int | None = None
    script: str | None = None

    def __post_init__(self):
        if self.output not in ("json", "text"):
            raise UsageError(f"unknown output format {self.output!r}")
        if self.degree_cap is not None and self.degree_cap < 1:
            raise UsageError("degree cap must be positive")
        if self.group_cap < 1:
            raise UsageError("group cap must be positive")
        if self.mode == "random" and self.seed is None:
            raise UsageError("--random needs --seed")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def load_monodromy(path: str) -> Monodromy:
    try:
        return Monodromy.from_json(_read(path))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: not a monodromy file ({exc})") from exc


def load_diagram(arg: str) -> LinkDiagram:
    """A built-in name, a JSON diagram (or monodromy) file, or a PD text file."""
    p = Path(arg)
    if not p.exists():
        try:
            return builtin_diagram(arg)
        except UnknownComponent:
            raise UsageError(f"{arg}: neither a file nor a built-in diagram") from None
    text = _read(arg)
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if "diagram" in data:
            data = data["diagram"]
            if isinstance(data, str):
                return builtin_diagram(data)
        return LinkDiagram.from_json(data)
    return parse_pd(text)


def _emit(cfg: RunConfig, obj, text: str | None = None):
    if cfg.output == "json":
        print(_dump(obj))
    else:
        print(text if text is not None else json.dumps(obj, indent=2, sort_keys=True))


# -- subcommands ------------------------------------------------------------------------


def cmd_validate(args, cfg):
    m = load_monodromy(args.monodromy)
    try:
        report = validate(m, with_h1=args.h1)
    except RelationViolated as exc:
        out = {"valid": False, "violated_crossing": exc.crossing}
        _emit(cfg, out, f"invalid: relation fails at crossing {exc.crossing}")
        return EXIT_INVALID
    out = {"valid": True, **report.to_json()}
    _emit(cfg, out)
    return EXIT_OK


def _require_valid(m: Monodromy):
    bad = m.violated_crossing()
    if bad is not None:
        raise RelationViolated(bad)


def cmd_indices(args, cfg):
    m = load_monodromy(args.monodromy)
    _require_valid(m)
    out = {n: list(branching_indices(m, n).lengths) for n in m.diagram.names}
    text = "\n".join(f"{n}: {' '.join(map(str, v))}" for n, v in out.items())
    _emit(cfg, out, text)
    return EXIT_OK


def cmd_regular(args, cfg):
    m = load_monodromy(args.monodromy)
    _require_valid(m)
    rc = associated_regular(m, cap=cfg.group_cap)
    try:
        report = verify_addendum(rc)
    except AddendumViolated as exc:
        report = rc.to_json()
        report["addendum"] = f"violated at arc {exc.args[0]}"
        _emit(cfg, report)
        return EXIT_INVALID
    report["regular"] = is_regular(rc.rho, cap=max(cfg.group_cap, rc.order))
    text = f"|G| = {rc.order}; indices " + ", ".join(f"{n}: {v}" for n, v in rc.regular_indices().items())
    _emit(cfg, report, text)
    return EXIT_OK


def cmd_homology(args, cfg):
    m = load_monodromy(args.monodromy)
    _require_valid(m)
    h = branched_cover_h1(m)
    _emit(cfg, {"h1": h.to_json(), "text": str(h)}, str(h))
    return EXIT_OK


def cmd_pi1(args, cfg):
    m = load_monodromy(args.monodromy)
    _require_valid(m)
    g = branched_cover_pi1(m)
    out = {"presentation": g.to_text(), "generators": g.rank, "relators": len(g.relators)}
    if args.try_trivialize:
        out["simply_connected"] = try_trivialize(g).to_json()
    _emit(cfg, out, g.to_text() + (f"\n{out['simply_connected']['status']}" if args.try_trivialize else ""))
    return EXIT_OK


def cmd_search(args, cfg):
    d = load_diagram(args.diagram)
    constraints = None
    if args.theorem2:
        if d.names != ("W1", "W2"):
            raise WrongDiagram("--theorem2 needs the Whitehead link")
        constraints = theorem2_constraints(args.degree)
    hits = search_monodromies(
        d, args.degree, constraints, limit=args.limit, mode=cfg.mode, seed=cfg.seed,
        jobs=args.jobs, cap=cfg.degree_cap,
    )
    diagram_ref = args.diagram if not Path(args.diagram).exists() else d.to_json()
    count = 0
    for m in hits:
        count += 1
        rec = {
            "diagram": diagram_ref,
            "degree": m.degree,
            "assignment": {str(i + 1): p.to_oneline() for i, p in enumerate(m.images)},
            "indices": {n: list(branching_indices(m, n).lengths) for n in d.names},
        }
        if cfg.output == "json":
            print(_dump(rec))
        else:
            print(" ".join(p.to_cycle_string() for p in m.images))
    if cfg.output == "text":
        print(f"{count} monodromies")
    return EXIT_OK


def cmd_orbifold(args, cfg):
    d = load_diagram(args.diagram)
    try:
        orders = [int(x) for x in args.indices.split(",")]
    except ValueError:
        raise UsageError("--indices takes comma-separated integers") from None
    if len(orders) != len(d.names):
        raise UsageError(f"need {len(d.names)} indices, got {len(orders)}")
    g = orbifold_group(OrbifoldGroupSpec(d, dict(zip(d.names, orders))))
    inv = g.abelian_invariants()
    out = {"presentation": g.to_text(), "abelian_invariants": inv.to_json(), "text": str(inv)}
    _emit(cfg, out, f"{g.to_text()}\n{inv}")
    return EXIT_OK


def cmd_move(args, cfg):
    m = load_monodromy(args.monodromy)
    _require_valid(m)
    script = json.loads(_read(args.script))
    new, certs = run_script(m, script, with_h1=not args.no_h1)
    out = {"monodromy": new.to_json(), "certificates": [c.to_json() for c in certs]}
    _emit(cfg, out)
    return EXIT_OK


def cmd_oracle(args, cfg):
    d = load_diagram(args.diagram)
    if args.which == "alexander":
        p = alexander_polynomial(d)
        out = {"alexander": p.coefficient_list(), "text": str(p)}
    elif args.which == "cyclic":
        ns = [int(x) for x in args.n.split(",")] if args.n else list(range(2, 7))
        out = {"cyclic_h1_order": {str(n): cyclic_cover_h1_order(d, n) for n in ns}}
    else:
        h = goeritz_h1_double_cover(d)
        out = {"goeritz_h1": h.to_json(), "text": str(h)}
    _emit(cfg, out, out.get("text"))
    return EXIT_OK


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wlcover", description="Branched coverings of S^3 over links.")
    ap.add_argument("--format", choices=("json", "text"), default="json", help="output format (default json)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check Wirtinger relations and summarize the cover")
    p.add_argument("monodromy")
    p.add_argument("--h1", action="store_true", help="also compute H1 of the branched cover")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("indices", help="branching indices per component")
    p.add_argument("monodromy")
    p.set_defaults(func=cmd_indices)

    p = sub.add_parser("regular", help="associated regular covering and index check")
    p.add_argument("monodromy")
    p.add_argument("--cap", type=int, default=DEFAULT_REGULAR_CAP, help="largest image group to build")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("homology", help="first homology of the branched cover")
    p.add_argument("monodromy")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("pi1", help="presentation of the fundamental group of the cover")
    p.add_argument("monodromy")
    p.add_argument("--try-trivialize", action="store_true")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("search", help="enumerate transitive monodromies")
    p.add_argument("diagram")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--theorem2", action="store_true", help="keep cycle types allowed for the Whitehead link")
    p.add_argument("--limit", type=int)
    p.add_argument("--random", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cap", type=int, help="largest degree allowed")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("orbifold", help="link group modulo meridian powers")
    p.add_argument("diagram")
    p.add_argument("--indices", required=True, help="comma-separated orders, one per component")
    p.set_defaults(func=cmd_orbifold)

    p = sub.add_parser("move", help="apply a move script with certificates")
    p.add_argument("monodromy")
    p.add_argument("script")
    p.add_argument("--no-h1", action="store_true", help="skip homology certificates")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("oracle", help="independent invariants of a diagram")
    p.add_argument("which", choices=("alexander", "cyclic", "goeritz"))
    p.add_argument("diagram")
    p.add_argument("--n", help="comma-separated cover degrees for 'cyclic' (default 2..6)")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        cmd = args.command
        cfg = RunConfig(
            inputs=[v for k, v in vars(args).items() if k in ("monodromy", "diagram", "script") and v],
            output=args.format,
            degree_cap=getattr(args, "cap", None) if cmd == "search" else None,
            group_cap=getattr(args, "cap", None) or DEFAULT_REGULAR_CAP if cmd == "regular" else DEFAULT_REGULAR_CAP,
            mode="random" if getattr(args, "random", False) else "exhaustive",
            seed=getattr(args, "seed", None),
            script=getattr(args, "script", None),
        )
        if cmd == "search" and args.jobs < 1:
            raise UsageError("--jobs must be positive")
        return args.func(args, cfg)
    except UsageError as exc:
        return _fail(fmt, "UsageError", str(exc), EXIT_USAGE)
    except CapExceeded as exc:
        return _fail(fmt, "CapExceeded", str(exc), EXIT_CAP)
    except (ParseError, UnknownComponent) as exc:
        return _fail(fmt, type(exc).__name__, str(exc), EXIT_USAGE)
    except (RelationViolated, NotApplicable, NotTransitive, WrongDiagram, AddendumViolated, WLCoverError, ValueError) as exc:
        return _fail(fmt, type(exc).__name__, str(exc), EXIT_INVALID)


def _fail(fmt, kind, message, code) -> int:
    if fmt == "json":
        print(_dump({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
