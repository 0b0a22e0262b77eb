"""Command-line front end.

Usage::

    refrad COMMAND CONFIG [--seed N] [--samples N] [--max-split-degree N]
                          [--denominator-bound E] [--format json|csv] [-o PATH]

Commands: radii, refined, frobenius, variation, swan, rsw, filtration.
Exit codes: 0 ok, 2 parse error, 3 precondition failure, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import traceback
from fractions import Fraction
from typing import Dict, List, Optional

from .conductors import (
    ASCharacter,
    dwork_module,
    filtration_level,
    reduce_AS,
    refined_swan,
)
from .errors import InvariantViolation, ParseError, PreconditionError, RefradError
from .fiber import FiberModule, analyze
from .frobenius import descendant, pullback_radii, pushforward_radii
from .parse import Config, parse_config
from .variation import FamilyModule, break_decomposition, fit_family, to_csv

COMMANDS = ("radii", "refined", "frobenius", "variation", "swan", "rsw", "filtration")


def _q(x) -> str:
    return str(Fraction(x))


def _family(cfg: Config, args) -> FamilyModule:
    if cfg.kind == "family":
        M = cfg.obj
    elif cfg.kind == "dwork":
        M = cfg.obj.build()
    elif cfg.kind == "character":
        M = dwork_module(reduce_AS(cfg.obj))
    else:
        raise PreconditionError(f"command needs a family, dwork or character config, not {cfg.kind}")
    changes = dict(seed=args.seed, max_split_degree=args.max_split_degree)
    if args.denominator_bound is not None:
        changes["denominator"] = args.denominator_bound
    return dataclasses.replace(M, **changes)


def _module(cfg: Config, args) -> FiberModule:
    if cfg.kind != "module":
        raise PreconditionError(f"command needs a module config, not {cfg.kind}")
    return cfg.obj.build(args.seed, args.max_split_degree)


def _radii_json(V: FiberModule) -> Dict:
    dirs = []
    for D in V.derivations:
        m = V.subsidiary_radii(D.index)
        dirs.append(
            {
                "index": D.index,
                "derivation": str(D),
                "intrinsic": [_q(x) for x in m.intrinsic],
                "extrinsic": [_q(x) for x in m.extrinsic],
            }
        )
    agg = [_q(max(col)) for col in zip(*([Fraction(x) for x in d["intrinsic"]] for d in dirs))]
    return {"directions": dirs, "intrinsic": agg, "IR": [f"p^(-{x})" for x in agg]}


def _refined_json(V: FiberModule) -> List[Dict]:
    out = []
    for D in V.derivations:
        entry: Dict = {"index": D.index, "derivation": str(D)}
        try:
            data = V.refined_radii(D.index)
            entry["grade"] = _q(data[0].grade)
            entry["theta"] = [str(d.theta) for d in data]
        except PreconditionError as exc:
            entry["unavailable"] = f"{type(exc).__name__}: {exc}"
        out.append(entry)
    return out


def _samples(M: FamilyModule, args) -> List[Fraction]:
    return M.default_radii(args.samples)


def cmd_radii(cfg: Config, args) -> Dict:
    if cfg.kind == "module":
        return {"kind": "module", **_radii_json(_module(cfg, args))}
    M = _family(cfg, args)
    rows = []
    for r in _samples(M, args):
        rep = _radii_json(M.fiber(r))
        rows.append({"r": _q(r), "eta": f"p^(-{r})", **rep})
    return {"kind": cfg.kind, "name": M.name, "samples": rows}


def cmd_refined(cfg: Config, args) -> Dict:
    if cfg.kind == "module":
        return {"kind": "module", "refined": _refined_json(_module(cfg, args))}
    M = _family(cfg, args)
    rows = [{"r": _q(r), "refined": _refined_json(M.fiber(r))} for r in _samples(M, args)]
    return {"kind": cfg.kind, "name": M.name, "samples": rows}


def cmd_frobenius(cfg: Config, args) -> Dict:
    V = _module(cfg, args)
    p = V.ctx.p
    out = []
    for D in V.derivations:
        m = V.subsidiary_radii(D.index)
        N, Dn = descendant(V.matrix(D.index), D)
        parts = analyze(N, Dn, V.ctx, V.descent_depth, refined=False, max_rank=V.max_descent_rank)
        direct = sorted((part.ir for part in parts for _ in range(part.mult)), reverse=True)
        law = pushforward_radii(m.intrinsic, p)
        back = pullback_radii(m.intrinsic, p)
        out.append(
            {
                "index": D.index,
                "derivation": str(D),
                "intrinsic": [_q(x) for x in m.intrinsic],
                "descendant_direct": [_q(x) for x in direct],
                "pushforward_law": [_q(x) for x in law],
                "agree": direct == law,
                "pullback": [[_q(iv.lo), _q(iv.hi)] for iv in back],
            }
        )
        if direct != law:
            raise InvariantViolation(f"descendant radii {direct} differ from the pushforward law {law}")
    return {"kind": "module", "directions": out}


def cmd_variation(cfg: Config, args):
    M = _family(cfg, args)
    fns = fit_family(M, samples=args.samples)
    if args.format == "csv":
        return to_csv(fns)
    rep: Dict = {
        "kind": cfg.kind,
        "name": M.name,
        "samples": [{"r": _q(s.r), "f": [_q(x) for x in s.intrinsic]} for s in fns.samples],
        "f": [_pieces(f) for f in fns.f],
        "F": [_pieces(F) for F in fns.F],
        "certificates": {"continuous": True, "convex": True, "slope_lattice": True, "monotone": M.disc},
    }
    return rep


def _pieces(f) -> List[Dict]:
    return [{"lo": _q(p.lo), "hi": _q(p.hi), "slope": _q(p.slope), "intercept": _q(p.intercept)} for p in f.pieces]


def cmd_swan(cfg: Config, args) -> Dict:
    M = _family(cfg, args)
    bd = break_decomposition(M, samples=args.samples)
    rep: Dict = {
        "kind": cfg.kind,
        "name": M.name,
        "blocks": [{"rank": m, "break": _q(b)} for m, b in bd.blocks],
        "swan": bd.swan,
        "artin": bd.artin,
        "certificate": bd.certificate,
    }
    if cfg.kind == "character":
        rep["reduced"] = str(reduce_AS(cfg.obj))
    return rep


def _character(cfg: Config) -> ASCharacter:
    if cfg.kind != "character":
        raise PreconditionError(f"command needs a character config, not {cfg.kind}")
    return cfg.obj


def cmd_rsw(cfg: Config, args) -> Dict:
    chi = _character(cfg)
    rc = refined_swan(chi)
    bd = break_decomposition(_family(cfg, args), samples=args.samples)
    level = filtration_level(rc, cfg.local_params, chi.basis)
    return {
        "character": str(chi),
        "reduced": str(reduce_AS(chi)),
        "break": _q(rc.break_),
        "swan": bd.swan,
        "rsw": [{"basis": b, "coeff": str(c)} for b, c in rc.form],
        "level": [_q(x) for x in level.values],
    }


def cmd_filtration(cfg: Config, args) -> Dict:
    chi = _character(cfg)
    rc = refined_swan(chi)
    level = filtration_level(rc, cfg.local_params, chi.basis)
    return {
        "character": str(chi),
        "local_params": list(cfg.local_params),
        "break": _q(rc.break_),
        "level": [_q(x) for x in level.values],
    }


HANDLERS = {
    "radii": cmd_radii,
    "refined": cmd_refined,
    "frobenius": cmd_frobenius,
    "variation": cmd_variation,
    "swan": cmd_swan,
    "rsw": cmd_rsw,
    "filtration": cmd_filtration,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="refrad", description="Radii and refined radii of p-adic differential modules.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("config", help="job config file")
    ap.add_argument("-o", "--output", help="report path (default: standard output)")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized root finding")
    ap.add_argument("--samples", type=int, default=5, help="number of sample radii for families")
    ap.add_argument("--max-split-degree", type=int, default=4, help="largest residue extension degree")
    ap.add_argument("--denominator-bound", type=int, default=None, help="tame exponent denominator e")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


def _origin(exc: BaseException) -> str:
    tb = traceback.extract_tb(exc.__traceback__)
    for frame in reversed(tb):
        mod = os.path.splitext(os.path.basename(frame.filename))[0]
        if os.path.basename(os.path.dirname(frame.filename)) == "refrad" and mod != "cli":
            return f"{mod}.{frame.name}"
    return "cli"


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.format == "csv" and args.command != "variation":
        print(json.dumps({"error": "UsageError", "message": "csv output is available for variation only"}), file=stderr)
        return 3
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=stderr)
        return 3
    try:
        cfg = parse_config(text)
        result = HANDLERS[args.command](cfg, args)
    except RefradError as exc:
        report = {
            "error": type(exc).__name__,
            "command": args.command,
            "origin": _origin(exc),
            "message": str(exc),
        }
        if isinstance(exc, ParseError):
            report["line"] = exc.line
            report["column"] = exc.column
        print(json.dumps(report), file=stderr)
        return exc.exit_code
    if isinstance(result, str):
        body = result
    else:
        body = json.dumps({"command": args.command, **result}, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
    else:
        stdout.write(body)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
