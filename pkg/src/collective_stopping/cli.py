"""Declarative game configuration, subcommand dispatch, CSV/SVG emission.

Configurations are JSON documents validated against a schema before any
computation; violations are reported with JSON-pointer paths.  Exit codes
separate bad input (1) from a computation that ran but failed certification
(2), so shell pipelines can branch on the difference.  All emitted CSV uses
'.' as the decimal separator regardless of locale, and repeated runs with the
same configuration and seed produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .applications import (PoissonGameSpec, WarSpec, poisson_solve, war_solve,
                           war_scan)
from .coalitions import (CoalitionRule, SamplingRegion, chairperson_rule,
                         normalize_rule, quota_rule, unanimity_rule,
                         unilateral_rule)
from .committee import CommitteeSpec, pivotal_players, strong_solve
from .concavify import inward_closure_values, outward_closure_values
from .costs import CostSpec
from .equilibrium import (EquilibriumCertificate, Game, GameSpec,
                          MisalignmentFamily, ParetoWeights, PlayerSpec,
                          RuleFamily, check_equilibrium, efficient_region,
                          enumerate_interval_equilibria, extremal_equilibria,
                          region_payoff_values)
from .grid import PiecewiseLinearSpec
from .montecarlo import SimConfig, simulate
from .process import DiffusionSpec, PoissonSpec

SCHEMA_VERSION = 1

_PWL_SCHEMA = {
    "type": "object",
    "oneOf": [
        {"required": ["points"]},
        {"required": ["breakpoints", "left", "right"]},
        {"required": ["type", "v", "w_piv"]},
    ],
    "properties": {
        "type": {"enum": ["pwl", "committee"]},
        "points": {"type": "array",
                   "items": {"type": "array", "minItems": 2, "maxItems": 2,
                             "items": {"type": "number"}},
                   "minItems": 2},
        "breakpoints": {"type": "array", "items": {"type": "number"}},
        "left": {"type": "array", "items": {"type": "number"}},
        "right": {"type": "array", "items": {"type": "number"}},
        "v": {"type": "number"},
        "w_piv": {"type": "number"},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "prior", "process", "players", "rule"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "prior": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "grid": {
            "type": "object",
            "properties": {"n": {"type": "integer", "minimum": 16},
                           "delta": {"type": "number", "exclusiveMinimum": 0,
                                     "maximum": 0.01}},
        },
        "process": {
            "type": "object",
            "required": ["type"],
            "properties": {"type": {"enum": ["diffusion", "poisson"]},
                           "sigma": {"type": "number", "exclusiveMinimum": 0},
                           "lambda": {"type": "number", "exclusiveMinimum": 0}},
        },
        "players": {
            "type": "array", "minItems": 1,
            "items": {
                "type": "object",
                "required": ["u", "c"],
                "properties": {"u": _PWL_SCHEMA,
                               "c": {"oneOf": [{"type": "number", "minimum": 0},
                                               _PWL_SCHEMA]}},
            },
        },
        "rule": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["unilateral", "unanimity", "quota", "chair",
                                  "explicit"]},
                "q": {"type": "integer", "minimum": 1},
                "i": {"type": "integer", "minimum": 1},
                "coalitions": {"type": "array",
                               "items": {"type": "array",
                                         "items": {"type": "integer"}}},
            },
        },
        "enumerate": {"type": "object"},
        "simulate": {"type": "object"},
        "compare": {"type": "object"},
        "committee": {"type": "object"},
        "weights": {"type": "array", "items": {"type": "number", "minimum": 0}},
    },
}


class InputError(ValueError):
    pass


def _validate(config: dict) -> None:
    import jsonschema

    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: e.json_path)
    if errors:
        msgs = [f"{e.json_path}: {e.message}" for e in errors]
        raise InputError("config validation failed:\n  " + "\n  ".join(msgs))


def _parse_pwl(doc) -> PiecewiseLinearSpec:
    if "points" in doc:
        return PiecewiseLinearSpec.from_points([(x, y) for x, y in doc["points"]])
    if "breakpoints" in doc:
        return PiecewiseLinearSpec.from_breakpoints(doc["breakpoints"],
                                                    doc["left"], doc["right"])
    if doc.get("type") == "committee":
        from .committee import committee_payoff
        return committee_payoff(doc["v"], doc["w_piv"])
    raise InputError(f"unrecognized piecewise-linear spec {doc}")


def _parse_cost(doc) -> CostSpec:
    if isinstance(doc, (int, float)):
        return CostSpec(float(doc))
    return CostSpec(_parse_pwl(doc))


def _parse_rule(doc, n: int) -> CoalitionRule:
    kind = doc["type"]
    if kind == "unilateral":
        return unilateral_rule(n)
    if kind == "unanimity":
        return unanimity_rule(n)
    if kind == "quota":
        return quota_rule(doc["q"], n)
    if kind == "chair":
        return chairperson_rule(doc["q"], doc["i"], n)
    return normalize_rule([set(g) for g in doc["coalitions"]], n)


def _parse_process(doc):
    if doc["type"] == "diffusion":
        return DiffusionSpec(sigma=doc.get("sigma", 1.0))
    return PoissonSpec(lam=doc.get("lambda", 1.0))


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    _validate(config)
    return config


def build_game(config: dict) -> Game:
    players = tuple(PlayerSpec(_parse_pwl(p["u"]), _parse_cost(p["c"]))
                    for p in config["players"])
    grid = config.get("grid", {})
    spec = GameSpec(prior=config["prior"], players=players,
                    process=_parse_process(config["process"]),
                    rule=_parse_rule(config["rule"], len(players)),
                    grid_n=grid.get("n", 512),
                    grid_delta=grid.get("delta", 1e-4))
    return spec.build()


def _fmt(x: float) -> str:
    return repr(float(x))


def _region_json(region: SamplingRegion) -> list[list[float]]:
    return [[lo, hi] for lo, hi in region.intervals()]


def parse_region(game: Game, text: str) -> SamplingRegion:
    """'0.3,0.7' or '0.2,0.4;0.5,0.7' or a JSON file of [lo, hi] pairs."""
    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            pairs = json.load(fh)
        return SamplingRegion.from_intervals(game.grid, [tuple(p) for p in pairs])
    pairs = []
    for chunk in text.split(";"):
        lo, hi = chunk.split(",")
        pairs.append((float(lo), float(hi)))
    return SamplingRegion.from_intervals(game.grid, pairs)


def _cert_doc(cert: EquilibriumCertificate) -> dict:
    return {
        "verdict": "pass" if cert.verdict else "fail",
        "vacuous": cert.vacuous,
        "region": _region_json(cert.region),
        "checked_players": list(cert.checked_players),
        "violations": list(cert.violations),
        "worst_beliefs": list(cert.worst_beliefs),
        "tolerances": list(cert.tolerances),
        "warnings": list(cert.warnings),
    }


def _write_json(doc, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _closures_csv(game: Game, region: SamplingRegion, path: Path) -> None:
    n_p = game.n_players
    cols = ["p"]
    for i in range(1, n_p + 1):
        cols += [f"u{i}", f"phi{i}", f"net{i}", f"V{i}"]
    cols.append("in_region")
    rows = [",".join(cols)]
    vs = []
    from .coalitions import classify_players
    n_uni, n_una = classify_players(game.rule)
    for i in range(1, n_p + 1):
        net = game.nets[i - 1]
        if i in n_una and i not in n_uni:
            vs.append(outward_closure_values(net, region))
        else:
            vs.append(inward_closure_values(net, region))
    for k, p in enumerate(game.grid.points):
        row = [_fmt(p)]
        for i in range(1, n_p + 1):
            row += [_fmt(game.us[i - 1].values[k]), _fmt(game.phis[i - 1].values[k]),
                    _fmt(game.nets[i - 1].values[k]), _fmt(vs[i - 1][k])]
        row.append(str(int(region.mask[k])))
        rows.append(",".join(row))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _svg_figure(game: Game, region: SamplingRegion, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    pts = game.grid.points
    for i in range(1, game.n_players + 1):
        net = game.nets[i - 1]
        ax.plot(pts, net.values, lw=1.2, label=f"net payoff {i}")
        u = region_payoff_values(net, region)
        ax.plot(pts, u, lw=1.0, ls="--", label=f"region payoff {i}")
    for lo, hi in region.intervals():
        ax.axvspan(lo, hi, color="0.9", zorder=0)
    ax.axvline(game.prior, color="0.4", lw=0.8)
    ax.set_xlabel("belief")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args) -> int:
    config = load_config(args.config)
    game = build_game(config)
    region = parse_region(game, args.region)
    cert = check_equilibrium(game, region)
    _write_json(_cert_doc(cert), args.out)
    if args.svg:
        _svg_figure(game, region, args.svg)
    return 0 if cert.verdict else 2


def _cmd_enumerate(args) -> int:
    config = load_config(args.config)
    game = build_game(config)
    opts = config.get("enumerate", {})
    scan = enumerate_interval_equilibria(game, scope=opts.get("scope", "single"),
                                         coarse=opts.get("coarse"))
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = ["region_id,intervals,max_violation"]
    for rid, (region, cert) in enumerate(zip(scan.regions, scan.certificates)):
        worst = max(cert.violations) if cert.violations else 0.0
        rows.append(f"{rid},\"{json.dumps(_region_json(region))}\",{_fmt(worst)}")
    (outdir / "regions.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    if scan.regions:
        (union, cert), _ = extremal_equilibria(game, list(scan.regions))
        _closures_csv(game, union, outdir / "closures.csv")
    if scan.vacuous:
        print("warning: rule has no lone stoppers or universal members; every "
              "common region certifies vacuously -- see the committee module's "
              "strong-equilibrium refinement", file=sys.stderr)
    print(f"{len(scan.regions)} certified regions -> {outdir}")
    return 0


def _cmd_solve(args) -> int:
    config = load_config(args.config)
    game = build_game(config)
    weights = ParetoWeights(tuple(config.get("weights",
                                             [1.0] * game.n_players)))
    eff = efficient_region(game, weights)
    scan = enumerate_interval_equilibria(game)
    doc = {"efficient_region": _region_json(eff),
           "equilibria": [_region_json(r) for r in scan.regions],
           "vacuous_rule": scan.vacuous}
    if scan.regions:
        (union, cert), minimal = extremal_equilibria(game, list(scan.regions))
        doc["maximum_equilibrium"] = _region_json(union)
        doc["minimal_equilibria"] = [_region_json(r) for r in minimal]
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        _write_json(doc, str(outdir / "solution.json"))
        _closures_csv(game, eff, outdir / "closures.csv")
        if args.svg:
            _svg_figure(game, eff, str(outdir / "solution.svg"))
    else:
        _write_json(doc, None)
    return 0


def _cmd_committee(args) -> int:
    config = load_config(args.config)
    doc = config["committee"]
    n = len(doc["v"])
    rule = _parse_rule(doc.get("rule", {"type": "quota", "q": (n + 1) // 2}), n)
    spec = CommitteeSpec(stakes=tuple(doc["v"]),
                         approval_quota=doc.get("piv", (n + 1) // 2),
                         cost=_parse_cost(doc.get("c", 0.05)),
                         rule=rule,
                         process=DiffusionSpec(doc.get("sigma", 1.0)),
                         grid_n=doc.get("n", 512))
    game = spec.build()
    lower_piv, upper_piv = pivotal_players(rule)
    certs = strong_solve(game, deviation_scan=doc.get("deviation_scan", False))
    out = {"threshold": spec.threshold,
           "lower_pivot": lower_piv, "upper_pivot": upper_piv,
           "fixed_points": [{"p_low": c.p_low, "p_high": c.p_high,
                             "residuals": [c.residual_low, c.residual_high],
                             "status": c.status,
                             "deviation_verdict": c.deviation_verdict}
                            for c in certs]}
    _write_json(out, args.out)
    return 0


def _cmd_war(args) -> int:
    from .applications import ApplicationError

    spec = WarSpec(c1=args.c1, c2=args.c2, sigma=args.sigma,
                   grid_n=args.n)
    game = spec.build()
    try:
        sol = war_solve(game)
    except ApplicationError as exc:
        # the computation ran but found no certified fixed point
        print(f"no certified solution: {exc}", file=sys.stderr)
        return 2
    doc = {"g_star": sol.lower, "G_star": sol.upper,
           "residuals": [sol.residual_lower, sol.residual_upper],
           "sweeps": sol.sweeps}
    if args.scan:
        doc["scan_fixed_cells"] = war_scan(game)
    _write_json(doc, args.out)
    return 0


def _cmd_poisson(args) -> int:
    config = load_config(args.config)
    players = tuple(PlayerSpec(_parse_pwl(p["u"]), _parse_cost(p["c"]))
                    for p in config["players"])
    grid = config.get("grid", {})
    spec = PoissonGameSpec(lam=config["process"].get("lambda", 1.0),
                           prior=config["prior"], players=players,
                           rule=_parse_rule(config["rule"], len(players)),
                           grid_n=grid.get("n", 512),
                           grid_delta=grid.get("delta", 1e-4))
    candidates = poisson_solve(spec)
    passing = [c for c in candidates if c.verdict]
    doc = {"label": "consistent with the reformulated stopping problems",
           "passing_bounds": [{"p_low": c.p_low, "values": list(c.value),
                               "slacks": list(c.slack)} for c in passing]}
    _write_json(doc, args.out)
    return 0 if passing else 2


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    game = build_game(config)
    region = parse_region(game, args.region)
    sim = config.get("simulate", {})
    cfg = SimConfig(n_paths=sim.get("n_paths", 100_000),
                    dt=sim.get("dt", 1e-4),
                    seed=sim.get("seed", 0),
                    max_time=sim.get("max_time", 50.0))
    report = simulate(game, region, cfg)
    doc = {"mean_terminal": list(report.mean_terminal),
           "se_terminal": list(report.se_terminal),
           "mean_cost": list(report.mean_cost),
           "se_cost": list(report.se_cost),
           "mean_time": report.mean_time,
           "lower_exit_fraction": report.lower_exit_fraction,
           "truncated_fraction": report.truncated_fraction,
           "clamp_fraction": report.clamp_fraction,
           "n_paths": report.n_paths}
    _write_json(doc, args.out)
    if report.clamp_fraction > 1e-3:
        print("warning: clamp events at the clipped boundary exceeded 1e-3",
              file=sys.stderr)
    return 0


def _cmd_compare(args) -> int:
    config = load_config(args.config)
    doc = config["compare"]
    axis = doc["axis"]
    grid = config.get("grid", {})
    if axis == "misalignment":
        from .equilibrium import comparative_statics
        fam = MisalignmentFamily(
            common=_parse_pwl(doc["f"]), private=_parse_pwl(doc["g"]),
            misalignments=tuple(doc["b"]),
            cost=_parse_cost(doc.get("c", 0.05)),
            process=_parse_process(config["process"]),
            rule=_parse_rule(config["rule"], 2), prior=config["prior"],
            grid_n=grid.get("n", 64), grid_delta=grid.get("delta", 1e-4))
        report = comparative_statics(fam)
    elif axis == "rules":
        from .equilibrium import comparative_statics
        players = tuple(PlayerSpec(_parse_pwl(p["u"]), _parse_cost(p["c"]))
                        for p in config["players"])
        rules = tuple(_parse_rule(r, len(players)) for r in doc["rules"])
        fam = RuleFamily(players=players,
                         process=_parse_process(config["process"]),
                         rules=rules, prior=config["prior"],
                         grid_n=grid.get("n", 64),
                         grid_delta=grid.get("delta", 1e-4))
        report = comparative_statics(fam)
    else:
        raise InputError(f"unknown compare axis {axis!r}")
    out = {"axis": report.axis,
           "equilibrium_counts": report.equilibrium_counts,
           "verdicts": [{k: (v if not isinstance(v, tuple) else list(v))
                         for k, v in d.items()} for d in report.verdicts],
           "violations": report.violations,
           "ok": report.ok}
    _write_json(out, args.out)
    return 0 if report.ok else 2


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collective-stopping",
        description="Solver and simulator for collective stopping games")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certify a sampling region")
    p.add_argument("--config", required=True)
    p.add_argument("--region", required=True,
                   help="'lo,hi[;lo,hi...]' or a JSON file of [lo, hi] pairs")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("enumerate", help="scan interval equilibria")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("solve", help="efficient region, equilibria, closures")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("committee", help="strong equilibria of committee search")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_committee)

    p = sub.add_parser("war", help="war-of-information fixed point")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--scan", action="store_true",
                   help="add the full 2-D uniqueness scan (n <= 256)")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_war)

    p = sub.add_parser("poisson", help="conclusive-Poisson stopping bounds")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_poisson)

    p = sub.add_parser("simulate", help="Monte Carlo of a region")
    p.add_argument("--config", required=True)
    p.add_argument("--region", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="comparative-statics report")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)
    return parser


def run(argv=None) -> int:
    from .equilibrium import ExtremalCertificationError

    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except ExtremalCertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
