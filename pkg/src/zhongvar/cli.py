"""Scenario-driven command line: validate instances, run theorem checkers,
exercise profile properties, and generate seeded corpora.

Exit codes: 0 pass, 1 check failure, 2 parse/malformed input, 3 rejected
precondition or premise.  Reports are text on stdout and, with --out, JSON
on disk; identical scenario and flags yield identical JSON bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import generate as gen
from .almost_metric import TAU_AXIOM, validate_almost_metric
from .equilibrium import (
    bkp_point,
    equilibrium_via_e,
    equilibrium_zhong,
    marginal,
    validate_bifunction,
)
from .errors import (
    DivergenceError,
    DomainError,
    MalformedInputError,
    PreconditionError,
    PremiseError,
    ScenarioError,
    SufficiencyError,
    UndeterminedError,
)
from .normal_fn import (
    TAU_INV,
    TAU_QUAD,
    check_integral_properties,
    check_normality,
    quadrature_B,
    reparametrization_gap,
    sample_property_triples,
)
from .reporting import encode_number
from .scenarios import Scenario, load_scenario, parse_scenario
from .solver import evp_local, evp_point, zvp_local, zvp_point
from .zhong import TAU_ROUNDTRIP, validate_weight

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_REJECTED = 3

_PARSE_ERRORS = (ScenarioError, MalformedInputError)
_REJECTED_ERRORS = (DomainError, PremiseError, PreconditionError,
                    SufficiencyError, DivergenceError, UndeterminedError)


@dataclass(frozen=True)
class Tolerances:
    tau_axiom: float = TAU_AXIOM
    tau_quad: float = TAU_QUAD
    tau_inv: float = TAU_INV
    tau_roundtrip: float = TAU_ROUNDTRIP
    property_tol: float = 1e-6

    def to_dict(self) -> dict:
        return {
            "tau_axiom": self.tau_axiom,
            "tau_quad": self.tau_quad,
            "tau_inv": self.tau_inv,
            "tau_roundtrip": self.tau_roundtrip,
            "property_tol": self.property_tol,
        }


def _require(scenario: Scenario, **parts):
    missing = [label for label, value in parts.items() if value is None]
    if missing:
        raise ScenarioError(
            f"selector {scenario.theorem!r} needs fields: {', '.join(missing)}")


def _validation_block(scenario: Scenario, tol: Tolerances) -> dict:
    out = {}
    if scenario.space is not None:
        out["space"] = validate_almost_metric(scenario.space.values,
                                              tol.tau_axiom).to_dict()
    if scenario.weight_spec is not None and scenario.space is not None:
        out["weight"] = validate_weight(scenario.weight(), scenario.space,
                                        tol.tau_axiom).to_dict()
    if scenario.potential is not None:
        out["potential"] = {"passed": True, "violations": [],
                            "notes": ["inf-proper by construction"]}
    if scenario.bifunction is not None:
        out["bifunction"] = validate_bifunction(scenario.bifunction,
                                                tol.tau_axiom).to_dict()
        out["marginal"] = {
            "passed": bool(marginal(scenario.bifunction).proper),
            "violations": [],
            "notes": ["proper" if marginal(scenario.bifunction).proper
                      else "marginal is everywhere infinite"],
        }
    return out


def _properties_block(scenario: Scenario, tol: Tolerances) -> dict:
    _require(scenario, normal=scenario.normal)
    f = scenario.normal
    rng = np.random.default_rng(scenario.seed)
    grid = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0]
    normality = check_normality(f, grid, growth_bound=20.0)
    triples = sample_property_triples(rng, scenario.samples)
    calculus = check_integral_properties(f, triples, tol.property_tol)
    reparam = 0.0
    for _ in range(25):
        p = float(rng.uniform(0.0, 5.0))
        q = p + float(rng.uniform(0.01, 5.0))
        reparam = max(reparam, reparametrization_gap(f, p, q, tol.tau_quad))
    quad_gap = 0.0
    for t in (0.5, 1.0, 2.0, 5.0):
        quad_gap = max(quad_gap, abs(f.B(t) - quadrature_B(f, t, tol.tau_quad)))
    passed = (normality.passed and calculus.passed
              and reparam <= 1e-8 and quad_gap <= 1e-8)
    return {
        "kind": f.kind,
        "samples": scenario.samples,
        "normality": normality.to_dict(),
        "calculus": calculus.to_dict(),
        "max_reparametrization_gap": reparam,
        "max_quadrature_gap": quad_gap,
        "passed": passed,
    }


def _certificate_block(scenario: Scenario, tol: Tolerances):
    sel = scenario.theorem
    if sel in ("evp", "evp-local"):
        _require(scenario, space=scenario.space, potential=scenario.potential,
                 u=scenario.u)
        if sel == "evp":
            return evp_point(scenario.u, scenario.space, scenario.potential)
        _require(scenario, rho=scenario.rho)
        return evp_local(scenario.u, scenario.rho, scenario.space,
                         scenario.potential)
    if sel in ("zvp", "zvp-local"):
        _require(scenario, space=scenario.space, potential=scenario.potential,
                 normal=scenario.normal, weight=scenario.weight_spec,
                 u=scenario.u)
        w = scenario.weight()
        if sel == "zvp":
            return zvp_point(scenario.u, scenario.space, scenario.potential,
                             scenario.normal, w)
        _require(scenario, rho=scenario.rho)
        return zvp_local(scenario.u, scenario.rho, scenario.space,
                         scenario.potential, scenario.normal, w)
    if sel == "eq":
        _require(scenario, space=scenario.space, bifunction=scenario.bifunction,
                 u=scenario.u)
        return equilibrium_via_e(scenario.u, scenario.bifunction,
                                 scenario.space, scenario.space, tol.tau_axiom)
    if sel == "eq-zhong":
        _require(scenario, space=scenario.space, bifunction=scenario.bifunction,
                 normal=scenario.normal, weight=scenario.weight_spec,
                 u=scenario.u)
        return equilibrium_zhong(scenario.u, scenario.bifunction, scenario.space,
                                 scenario.normal, scenario.weight(),
                                 rho=scenario.rho, tol=tol.tau_axiom)
    if sel == "bkp":
        _require(scenario, space=scenario.space, bifunction=scenario.bifunction,
                 u=scenario.u)
        return bkp_point(scenario.u, scenario.bifunction, scenario.space,
                         tol.tau_axiom)
    raise ScenarioError(f"selector {sel!r} does not produce a certificate")


def run_scenario(scenario: Scenario, tol: Tolerances | None = None) -> tuple[int, dict]:
    """Dispatch a parsed scenario; returns (exit_code, report)."""
    tol = tol or Tolerances()
    report = {
        "name": scenario.name,
        "theorem": scenario.theorem,
        "scenario": scenario.raw,
        "tolerances": tol.to_dict(),
        "validation": {},
        "certificate": None,
        "properties": None,
    }
    if scenario.theorem == "properties":
        block = _properties_block(scenario, tol)
        report["properties"] = block
        report["passed"] = block["passed"]
        return (EXIT_PASS if block["passed"] else EXIT_FAIL), report
    report["validation"] = _validation_block(scenario, tol)
    if scenario.theorem == "validate":
        ok = all(part.get("passed", False) for part in report["validation"].values())
        report["passed"] = ok
        return (EXIT_PASS if ok else EXIT_FAIL), report
    cert = _certificate_block(scenario, tol)
    report["certificate"] = cert.to_dict()
    ok = cert.passed(tol.tau_axiom)
    ok = ok and all(part.get("passed", False)
                    for part in report["validation"].values())
    report["passed"] = ok
    return (EXIT_PASS if ok else EXIT_FAIL), report


def render_text(report: dict) -> str:
    lines = []
    lines.append(f"scenario: {report['name']}   selector: {report['theorem']}")
    for part, block in report.get("validation", {}).items():
        status = "ok" if block.get("passed") else "VIOLATED"
        lines.append(f"  validate {part:<11} {status}")
        for viol in block.get("violations", []):
            lines.append(f"    - {viol['axiom']} at {tuple(viol['witness'])}: "
                         f"off by {viol['magnitude']}")
    cert = report.get("certificate")
    if cert:
        lines.append(f"  start u = {cert['u']}   found v = {cert['v']}   "
                     f"chain = {' -> '.join(str(p) for p in cert['chain'])}")
        if "premise" in cert:
            prem = ", ".join(f"{k}={v}" for k, v in sorted(cert["premise"].items()))
            lines.append(f"  premise: {prem}")
        lines.append(f"  {'inequality':<24}{'lhs':>14}{'rhs':>14}{'slack':>14}  ok")
        for q in cert["inequalities"]:
            ok = (q["slack"] != "-inf"
                  and ((q["slack"] == "inf")
                       or (q["slack"] > 0 if q["strict"] else q["slack"] >= -1e-9)))
            rel = "<" if q["strict"] else "<="
            lines.append(
                f"  {q['name']:<24}{_fmt(q['lhs']):>14}{_fmt(q['rhs']):>14}"
                f"{_fmt(q['slack']):>14}  {'yes' if ok else 'NO'} ({rel})")
        for note in cert.get("notes", []):
            lines.append(f"  note: {note}")
    props = report.get("properties")
    if props:
        lines.append(f"  profile kind: {props['kind']}   samples: {props['samples']}")
        lines.append(f"  normality: "
                     f"{'ok' if props['normality']['passed'] else 'VIOLATED'}")
        lines.append(f"  calculus suite: "
                     f"{'ok' if props['calculus']['passed'] else 'VIOLATED'}")
        lines.append(f"  max reparametrization gap: "
                     f"{props['max_reparametrization_gap']:.3g}")
        lines.append(f"  max closed-form vs quadrature gap: "
                     f"{props['max_quadrature_gap']:.3g}")
    lines.append("PASS" if report.get("passed") else "FAIL")
    return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return f"{x:.6g}"


def _write_report(report: dict, out_path: Path) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(report, indent=2, sort_keys=True,
                                   default=encode_number) + "\n")


def _tolerances(args) -> Tolerances:
    return Tolerances(
        tau_axiom=args.tau_axiom,
        tau_quad=args.tau_quad,
        tau_inv=args.tau_inv,
        tau_roundtrip=args.tau_roundtrip,
        property_tol=args.property_tol,
    )


def _solve_one(path_str: str, theorem: str | None, tol: Tolerances):
    try:
        scenario = load_scenario(path_str)
        if theorem is not None:
            raw = dict(scenario.raw)
            raw["theorem"] = theorem
            scenario = parse_scenario(raw, Path(path_str).name)
        code, report = run_scenario(scenario, tol)
    except _PARSE_ERRORS as exc:
        return path_str, EXIT_PARSE, None, f"parse error: {exc}"
    except _REJECTED_ERRORS as exc:
        return path_str, EXIT_REJECTED, None, f"rejected: {type(exc).__name__}: {exc}"
    return path_str, code, report, None


def _run_paths(paths: list[Path], args, tol: Tolerances) -> int:
    theorem = getattr(args, "theorem", None)
    jobs = getattr(args, "jobs", 1) or 1
    out = getattr(args, "out", None)
    out_dir = None
    out_file = None
    if out is not None:
        out = Path(out)
        if len(paths) > 1:
            out_dir = out
        else:
            out_file = out
    results = []
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve_one,
                                    [str(p) for p in paths],
                                    [theorem] * len(paths),
                                    [tol] * len(paths)))
    else:
        results = [_solve_one(str(p), theorem, tol) for p in paths]
    worst = EXIT_PASS
    for path_str, code, report, err in results:
        if report is None:
            print(f"{Path(path_str).name}: exit {code} ({err})", file=sys.stderr)
        else:
            if len(paths) == 1:
                print(render_text(report))
            else:
                print(f"{Path(path_str).name}: "
                      f"{'PASS' if code == EXIT_PASS else 'FAIL'}")
            target = None
            if out_file is not None:
                target = out_file
            elif out_dir is not None:
                target = out_dir / (Path(path_str).stem + ".report.json")
            if target is not None:
                _write_report(report, target)
        worst = max(worst, code)
    return worst


def _scenario_paths(arg: str) -> list[Path]:
    p = Path(arg)
    if p.is_dir():
        paths = sorted(p.glob("*.json"))
        if not paths:
            raise ScenarioError(f"no scenario files in {p}")
        return paths
    return [p]


def cmd_validate(args) -> int:
    return _run_with_selector(args, "validate")


def cmd_properties(args) -> int:
    return _run_with_selector(args, "properties")


def _run_with_selector(args, selector: str) -> int:
    args.theorem = selector
    args.jobs = getattr(args, "jobs", 1)
    try:
        paths = _scenario_paths(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return _run_paths(paths, args, _tolerances(args))


def cmd_solve(args) -> int:
    try:
        paths = _scenario_paths(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return _run_paths(paths, args, _tolerances(args))


def cmd_generate(args) -> int:
    if args.n < 1 or args.count < 1:
        print("error: --n and --count must be >= 1", file=sys.stderr)
        return EXIT_PARSE
    paths = gen.write_corpus(args.out, args.seed, args.n, args.count,
                             theorem=args.theorem or "zvp")
    print(f"wrote {len(paths)} scenarios to {args.out}")
    return EXIT_PASS


def _add_common(parser: argparse.ArgumentParser, with_theorem: bool = False):
    parser.add_argument("--scenario", required=True,
                        help="scenario JSON file, or a directory of them")
    parser.add_argument("--out", default=None,
                        help="write JSON report(s) here (file, or directory "
                             "when running a corpus)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel workers for corpus runs")
    if with_theorem:
        parser.add_argument("--theorem", default=None,
                            help="override the scenario's selector")
    parser.add_argument("--tau-axiom", type=float, default=TAU_AXIOM)
    parser.add_argument("--tau-quad", type=float, default=TAU_QUAD)
    parser.add_argument("--tau-inv", type=float, default=TAU_INV)
    parser.add_argument("--tau-roundtrip", type=float, default=TAU_ROUNDTRIP)
    parser.add_argument("--property-tol", type=float, default=1e-6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zhongvar",
        description="Validate finite asymmetric distance instances, run "
                    "variational/equilibrium theorem checkers, and emit "
                    "inequality certificates.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("validate", help="axiom checks only")
    _add_common(p)

    p = sub.add_parser("solve", help="run the scenario's theorem selector")
    _add_common(p, with_theorem=True)

    p = sub.add_parser("properties", help="rate-profile property suite")
    _add_common(p)

    p = sub.add_parser("generate", help="write a seeded scenario corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=8, help="points per instance")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--theorem", default="zvp",
                   help="selector stamped into the generated scenarios")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args)
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "properties":
        return cmd_properties(args)
    if args.command == "generate":
        return cmd_generate(args)
    parser.print_help()
    return EXIT_PASS


if __name__ == "__main__":
    raise SystemExit(main())
