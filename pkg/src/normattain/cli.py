"""Command-line interface for normattain.

Usage:
    normattain decompose FILE       Canonical decomposition of a projection pair
    normattain analyze FILE         Norm and attainment verdict
    normattain skew [FILE]          Skew projection analysis and its families
    normattain verify               Randomised oracle suites
    normattain truncate FILE        Norms of finite truncations
    normattain config               Show/edit configuration

Exit codes: 0 success, 1 validation or parse error, 2 numerical failure,
3 indeterminate spectral measure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any

from normattain.config import Config, Settings
from normattain.errors import IndeterminateMeasure, NormAttainError, NumericalFailure, ValidationError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

Report = dict[str, Any]


# -- helpers ---------------------------------------------------------------------


def _settings(config: Config, args: argparse.Namespace) -> Settings:
    """Config snapshot with --tol/--grid/--refine applied."""
    settings = Settings.from_config(config)
    overrides = {k: getattr(args, k) for k in ("tol", "grid", "refine") if getattr(args, k, None) is not None}
    return dataclasses.replace(settings, **overrides) if overrides else settings


def _verdict_for(element: Any, subject: str, settings: Settings) -> Report:
    from normattain.attain import decide_attainment, kernel_nontrivial, norming_vector
    from normattain.problem.report import verdict_report

    verdict = decide_attainment(element, **settings.search)
    report = verdict_report(verdict, subject, element.scalar_max, norming_vector(element, verdict))
    if not element.model.is_empty:
        try:
            report["kernel_nontrivial"] = kernel_nontrivial(
                element, settings.zero_threshold, settings.grid, settings.min_run
            )
        except IndeterminateMeasure:
            logger.warning("Kernel criterion left undecided: zero set inside an unspecified interval")
    return report


def _pair_element(problem: Any, settings: Settings) -> Any:
    """Element of a projection-pair problem: extracted from ``a`` or built from the symbol."""
    from normattain.halmos import assemble, decompose, extract_symbol, model_of
    from normattain.symbol import build_element

    d = decompose(problem.p, problem.q, settings.tol, settings.classify_eps, settings.max_sweeps)
    if problem.a is not None:
        return extract_symbol(d, problem.a, settings.tol)
    if problem.symbol is None:
        raise ValidationError("projection_pair problem needs 'a' or 'element' to analyze")
    present = {f"{i}{j}" for i, j in d.present}
    scalars = {k: v for k, v in (problem.scalars or {}).items() if k in present}
    element = build_element(scalars, problem.symbol, model_of(d))
    assemble(d, element)
    return element


def _family_element(problem: Any, settings: Settings) -> tuple[Any, Any]:
    from normattain.skew import example3_model, skew_element

    model, a = example3_model(problem.variant, problem.n_atoms or settings.ex3_atoms)
    return model, (a if problem.operator == "A" else skew_element(model))


def _parse_family(text: str) -> tuple[str, list[str]]:
    name, _, rest = text.partition(":")
    params = [p.strip() for p in rest.split(",") if p.strip()]
    counts = {"lin": (2,), "alt": (1,), "ex3": (1, 2)}
    if name not in counts:
        raise ValidationError(f"--family must be lin:a,b | alt:m | ex3:variant[,n], got {text!r}")
    if len(params) not in counts[name]:
        raise ValidationError(f"--family {name}: wrong number of parameters in {text!r}")
    from normattain.skew import Ex3Variant

    try:
        if name == "lin":
            [float(p) for p in params]
        elif name == "alt" or len(params) == 2:
            int(params[-1])
        if name == "ex3":
            Ex3Variant(params[0])
    except ValueError as exc:
        raise ValidationError(f"--family {name}: {exc}") from exc
    return name, params


def _emit(report: Report, args: argparse.Namespace) -> None:
    from normattain.problem.report import render_text, to_json, validate_report

    validate_report(report)
    text = to_json(report) if args.json else render_text(report)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info("Report written to %s", args.output)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------


def _cmd_decompose(args: argparse.Namespace, settings: Settings) -> Report:
    """Canonical decomposition of a projection pair."""
    from normattain.halmos import decompose, reconstruct
    from normattain.linalg import max_abs
    from normattain.problem import load
    from normattain.problem.report import decomposition_report

    problem = load(args.file)
    if problem.kind != "projection_pair":
        raise ValidationError(f"decompose needs a projection_pair problem, got {problem.kind}")
    pair = problem.payload
    d = decompose(pair.p, pair.q, settings.tol, settings.classify_eps, settings.max_sweeps)
    p2, q2 = reconstruct(d)
    residual = max(max_abs(pair.p - p2), max_abs(pair.q - q2))
    return decomposition_report(d, residual)


def _cmd_analyze(args: argparse.Namespace, settings: Settings) -> Report:
    """Norm, lambda_max, Sigma(A) and the attainment verdict."""
    from normattain.problem import load
    from normattain.skew import analyze_skew, attains_norm

    problem = load(args.file)
    if problem.kind == "element":
        return _verdict_for(problem.payload, "element", settings)
    if problem.kind == "projection_pair":
        return _verdict_for(_pair_element(problem.payload, settings), "A", settings)
    if problem.kind == "skew":
        analysis = analyze_skew(
            problem.payload.t, settings.tol, settings.classify_eps, settings.max_sweeps, **settings.search
        )
        attains_norm(analysis, **settings.search)
        return _verdict_for(analysis.t_symbol, "T", settings)
    family = problem.payload
    _, element = _family_element(family, settings)
    return _verdict_for(element, f"example3 {family.variant.value} {family.operator}", settings)


def _cmd_skew(args: argparse.Namespace, settings: Settings) -> Report:
    """Skew projection analysis, optionally followed by one of its operator families."""
    from normattain.problem import load
    from normattain.problem.report import skew_report
    from normattain.skew import (
        alternating_power,
        analyze_skew,
        attains_norm,
        example3_model,
        linear_family,
        skew_element,
    )

    family = _parse_family(args.family) if args.family else None
    analysis = None
    model = None
    m01 = m10 = False
    ex3_a = None

    if args.file:
        problem = load(args.file)
        if problem.kind == "skew":
            analysis = analyze_skew(
                problem.payload.t, settings.tol, settings.classify_eps, settings.max_sweeps, **settings.search
            )
            model = analysis.h_model
            m01 = (0, 1) in analysis.t_symbol.present
            m10 = (1, 0) in analysis.t_symbol.present
        elif problem.kind == "model_family":
            model, ex3_a = example3_model(problem.payload.variant, problem.payload.n_atoms or settings.ex3_atoms)
        elif problem.kind == "element":
            model = problem.payload.model
        else:
            raise ValidationError(f"skew needs a skew, model_family or element problem, got {problem.kind}")

    if family is not None and family[0] == "ex3":
        n_atoms = int(family[1][1]) if len(family[1]) > 1 else settings.ex3_atoms
        model, ex3_a = example3_model(family[1][0], n_atoms)
        analysis, m01, m10 = None, False, False
    if model is None:
        raise ValidationError("skew needs a problem file or --family ex3:variant[,n]")

    t_verdict = attains_norm(analysis if analysis is not None else model, **settings.search)
    t_element = analysis.t_symbol if analysis is not None else skew_element(model, m01, m10)
    verdict = _verdict_for(t_element, "T", settings)
    if verdict["attained"] != t_verdict.attained:
        raise NumericalFailure("Verdict for T changed between evaluations")

    family_report = None
    if family is not None:
        name, params = family
        if name == "lin":
            alpha, beta = float(params[0]), float(params[1])
            element = linear_family(model, alpha, beta, m01, m10, **settings.search)
            subject = f"T + ({alpha:g}) T* + ({beta:g}) I"
        elif name == "alt":
            m = int(params[0])
            element = alternating_power(model, m, m01, m10)
            subject = f"T^({m})"
        else:
            element = ex3_a
            subject = "TT* + T*T - T - T* - I"
        family_report = _verdict_for(element, subject, settings)
    return skew_report(analysis, verdict, family_report)


def _cmd_verify(args: argparse.Namespace, settings: Settings) -> Report:
    """Randomised oracle suites."""
    from normattain.problem.report import verify_report
    from normattain.verify import eigenvalue_oracle_suite, kernel_oracle_suite, run_random_suite

    config = args.config_obj
    n = args.n if args.n is not None else int(config.get("verify.n", 8))
    trials = args.trials if args.trials is not None else int(config.get("verify.trials", 100))
    seed = args.seed if args.seed is not None else int(config.get("verify.seed", 1))

    reports = []
    if args.random or not (args.kernel or args.eigen):
        reports.append(run_random_suite(n, trials, seed, settings.suite_tol, settings.tol))
    if args.kernel:
        reports.append(kernel_oracle_suite(trials, seed))
    if args.eigen:
        reports.append(eigenvalue_oracle_suite(trials, seed))
    return verify_report(reports)


def _cmd_truncate(args: argparse.Namespace, settings: Settings) -> Report:
    """Spectral norms of finite truncations of an example operator."""
    from normattain.problem import load
    from normattain.problem.report import truncation_report
    from normattain.verify import truncation_norms

    problem = load(args.file)
    if problem.kind != "model_family":
        raise ValidationError(f"truncate needs a model_family problem, got {problem.kind}")
    operator = args.operator or problem.payload.operator
    variant = problem.payload.variant
    norms = truncation_norms(variant, args.dims, operator)
    return truncation_report(variant.value, operator, args.dims, norms)


def _cmd_config(args: argparse.Namespace) -> int:
    """Show or edit configuration."""
    config = args.config_obj

    if args.action == "show":
        import yaml

        print(yaml.safe_dump(config.as_dict(), default_flow_style=False, sort_keys=False))

    elif args.action == "get":
        value = config.get(args.key)
        if value is None:
            print(f"Key not found: {args.key}", file=sys.stderr)
            return 1
        print(value)

    elif args.action == "set":
        if not args.key or args.value is None:
            print("Usage: normattain config set KEY VALUE", file=sys.stderr)
            return 1
        config.set(args.key, args.value)
        config.save(args.config)
        print(f"Set {args.key} = {args.value}")

    elif args.action == "path":
        print(f"Config directory: {config.config_dir}")
        print(f"Defaults: {config.default_path}")
    return 0


# -- entry point -----------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Options accepted before and after the subcommand; subparsers must not reset them."""
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--tol", type=float, default=default, help="Residual / rank tolerance")
    parser.add_argument("--grid", type=int, default=default, help="Grid points per essential interval")
    parser.add_argument("--refine", type=int, default=default, help="Trisection rounds per grid peak")
    parser.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS if suppress else False, help="JSON output"
    )
    parser.add_argument("--output", default=default, help="Write the report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normattain",
        description="Norm attainment for operators in the algebra generated by two orthogonal projections",
    )
    parser.add_argument("-c", "--config", help="Path to config file")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    _add_common(parser, suppress=False)

    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # -- decompose -------------------------------------------------------------
    p_dec = subparsers.add_parser("decompose", parents=[common], help="Decompose a projection pair")
    p_dec.add_argument("file", help="projection_pair problem file")

    # -- analyze ---------------------------------------------------------------
    p_an = subparsers.add_parser("analyze", parents=[common], help="Norm and attainment verdict")
    p_an.add_argument("file", help="Problem file of any kind")

    # -- skew ------------------------------------------------------------------
    p_skew = subparsers.add_parser("skew", parents=[common], help="Analyze a skew projection")
    p_skew.add_argument("file", nargs="?", help="skew, model_family or element problem file")
    p_skew.add_argument("--family", help="lin:a,b | alt:m | ex3:variant[,n]")

    # -- verify ----------------------------------------------------------------
    p_ver = subparsers.add_parser("verify", parents=[common], help="Randomised oracle suites")
    p_ver.add_argument("--random", action="store_true", help="Norm oracle and round trip on random pairs")
    p_ver.add_argument("--kernel", action="store_true", help="Kernel criterion oracle")
    p_ver.add_argument("--eigen", action="store_true", help="Eigenvalue criterion oracle")
    p_ver.add_argument("--n", type=int, help="Dimension of the random pairs")
    p_ver.add_argument("--trials", type=int, help="Number of trials")
    p_ver.add_argument("--seed", type=int, help="Seed of the PCG64 generator")

    # -- truncate --------------------------------------------------------------
    p_tr = subparsers.add_parser("truncate", parents=[common], help="Norms of finite truncations")
    p_tr.add_argument("file", help="model_family problem file")
    p_tr.add_argument("--dims", type=int, nargs="+", required=True, help="Ascending numbers of 2x2 blocks")
    p_tr.add_argument("--operator", choices=["A", "T"], help="Override the file's operator")

    # -- config ----------------------------------------------------------------
    p_cfg = subparsers.add_parser("config", help="Configuration management")
    p_cfg.add_argument("action", choices=["show", "get", "set", "path"], help="Config action")
    p_cfg.add_argument("key", nargs="?", help="Config key (for get/set)")
    p_cfg.add_argument("value", nargs="?", help="Config value (for set)")
    return parser


def main(argv: list[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    config = Config(args.config) if args.config else Config()
    level_name = str(config.get("app.log_level", "WARNING")).upper()
    level = logging.DEBUG if args.verbose else getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    args.config_obj = config

    if not args.command:
        parser.print_help()
        return 0
    if args.command == "config":
        return _cmd_config(args)

    cmd_map = {
        "decompose": _cmd_decompose,
        "analyze": _cmd_analyze,
        "skew": _cmd_skew,
        "verify": _cmd_verify,
        "truncate": _cmd_truncate,
    }
    try:
        settings = _settings(config, args)
        report = cmd_map[args.command](args, settings)
        _emit(report, args)
    except NormAttainError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        logger.exception("Unexpected failure in %s", args.command)
        raise
    if report.get("kind") == "verify" and not report["passed"]:
        return NumericalFailure.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
