"""Command-line front end: run / sweep / verify.

run    executes the pipeline once and writes the report as JSON.
sweep  runs a list of accuracy targets or node counts and writes CSV; with
       --minimal-nodes it searches the smallest power-of-two node count per
       target (solver-error budget zero, truncation saturated).
verify runs the named invariant checks.

Options may come from a flat key = value config file (same names as the
long flags, underscores for dashes, '#' comments); explicit flags win.

Exit codes: 0 success, 1 a completed run missed its guarantee (or a check
failed), 2 unusable input (files, flags, config), 3 a documented
precondition failed (norm too large, infeasible target, vanishing image).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import mmio, pipeline, verify
from .errors import (
    InfeasibleTarget,
    MatfuncError,
    NormTooLarge,
    NullImage,
    NullProjection,
    SizeCap,
)
from .numkernel import FunctionSpec, normalize, spectral_norm

_FUNCTION_KINDS = ("exp", "cos", "sin", "geometric", "poly", "custom")

# Keys accepted in config files; values are parsed like the matching flag.
_CONFIG_KEYS = {
    "matrix": str,
    "rhs": str,
    "function": str,
    "radius": float,
    "pole": complex,
    "coeffs": str,
    "beta": float,
    "epsilon": str,
    "nodes": str,
    "order": int,
    "hhl_error": float,
    "seed": int,
    "normalize": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "out": str,
    "minimal_nodes": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
}


class CliError(Exception):
    """Unusable input; maps to exit code 2."""


def _parse_config_file(path) -> dict:
    out = {}
    try:
        with open(path, "r", encoding="ascii") as fh:
            for ln, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise CliError("%s:%d: expected 'key = value'" % (path, ln))
                key, _, value = line.partition("=")
                key = key.strip().replace("-", "_")
                value = value.strip()
                if key not in _CONFIG_KEYS:
                    raise CliError("%s:%d: unknown key %r" % (path, ln, key))
                try:
                    out[key] = _CONFIG_KEYS[key](value)
                except ValueError as exc:
                    raise CliError("%s:%d: bad value for %s: %s" % (path, ln, key, exc))
    except OSError as exc:
        raise CliError("cannot read config %s: %s" % (path, exc))
    return out


def _merge(args: argparse.Namespace, config: dict) -> dict:
    merged = dict(config)
    for key in _CONFIG_KEYS:
        flag_val = getattr(args, key, None)
        if flag_val not in (None, False):
            merged[key] = flag_val
    return merged


def _build_function(opts) -> FunctionSpec:
    kind = opts.get("function")
    if kind is None:
        raise CliError("no function selected (--function)")
    if kind not in _FUNCTION_KINDS:
        raise CliError("unknown function kind %r" % kind)
    radius = float(opts.get("radius", 2.0))
    try:
        if kind == "exp":
            return FunctionSpec.exp(radius)
        if kind == "cos":
            return FunctionSpec.cos(radius)
        if kind == "sin":
            return FunctionSpec.sin(radius)
        if kind == "geometric":
            if "pole" not in opts:
                raise CliError("geometric function needs --pole")
            return FunctionSpec.geometric(opts["pole"], radius)
        if "coeffs" not in opts:
            raise CliError("%s function needs --coeffs FILE" % kind)
        coeffs = mmio.load_vector(opts["coeffs"])
        maker = FunctionSpec.polynomial if kind == "poly" else FunctionSpec.custom
        return maker(coeffs, radius)
    except (ValueError, OSError) as exc:
        raise CliError(str(exc))


def _load_problem(opts):
    if "matrix" not in opts:
        raise CliError("no matrix file given (--matrix)")
    try:
        a = mmio.load_matrix_market(opts["matrix"])
    except (ValueError, OSError) as exc:
        raise CliError(str(exc))
    if "rhs" in opts:
        try:
            b = normalize(mmio.load_vector(opts["rhs"]))
        except (ValueError, OSError, MatfuncError) as exc:
            raise CliError(str(exc))
        if b.shape[0] != a.shape[0]:
            raise CliError("rhs length %d does not match matrix size %d"
                           % (b.shape[0], a.shape[0]))
    else:
        b = np.zeros(a.shape[0], dtype=np.complex128)
        b[0] = 1.0
    return a, b


def _float_list(text) -> list:
    if text is None:
        return []
    items = [t for t in str(text).split(",") if t.strip()]
    return [float(t) for t in items]


def _prepare(opts):
    """Shared run/sweep setup: function, matrix, beta, instance scale."""
    fs = _build_function(opts)
    a, b = _load_problem(opts)
    norm_a = spectral_norm(a)
    if opts.get("normalize"):
        a = a / norm_a
        norm_a = spectral_norm(a)
    elif norm_a > 1.0 + 1e-9:
        raise NormTooLarge(
            "spectral norm %.12g exceeds 1 (pass --normalize to rescale)" % norm_a
        )
    beta = float(opts["beta"]) if "beta" in opts else math.sqrt(fs.radius)
    if not (1.0 < beta < fs.radius):
        raise CliError("need 1 < beta < radius, got beta=%g radius=%g"
                       % (beta, fs.radius))
    f_scale = pipeline.compute_F(fs, a, b, beta, norm_a=norm_a)
    return fs, a, b, beta, f_scale


def _write_text(path, text) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def _report_passes(report, epsilon) -> bool:
    if epsilon is not None:
        return (
            report.error_measured <= epsilon
            and report.success_prob >= report.success_lower_bound - 1e-9
        )
    # Explicit parameters carry no target; the certified bound must hold.
    return report.error_measured <= report.error_bound + 1e-9


def cmd_run(args) -> int:
    opts = _merge(args, _parse_config_file(args.config) if args.config else {})
    fs, a, b, beta, f_scale = _prepare(opts)
    epsilons = _float_list(opts.get("epsilon"))
    nodes = [int(v) for v in _float_list(opts.get("nodes"))]
    explicit = bool(nodes) or ("order" in opts) or ("hhl_error" in opts)
    if len(epsilons) > 1 or len(nodes) > 1:
        raise CliError("run takes a single epsilon or a single node count")
    if bool(epsilons) == explicit:
        raise CliError(
            "exactly one of --epsilon or the explicit trio "
            "--nodes/--order/--hhl-error must drive the run"
        )
    if epsilons:
        epsilon = epsilons[0]
        plan = pipeline.select_parameters(fs, beta, f_scale, epsilon)
    else:
        epsilon = None
        if not nodes or "order" not in opts:
            raise CliError("explicit runs need --nodes and --order")
        plan = pipeline.manual_plan(
            fs, beta, f_scale, nodes[0], int(opts["order"]),
            float(opts.get("hhl_error", 0.0)),
        )
    seed = int(opts.get("seed", 1))
    report = pipeline.run_algorithm(fs, a, b, plan, beta, seed, keep_internals=False)
    _write_text(opts.get("out"), report.to_json())
    return 0 if _report_passes(report, epsilon) else 1


def _csv_row(epsilon, report) -> str:
    eps_field = "" if epsilon is None else format(epsilon, ".17g")
    return ",".join(
        [
            eps_field,
            str(report.nodes),
            str(report.order),
            format(report.error_measured, ".17g"),
            format(report.error_bound, ".17g"),
            format(report.success_prob, ".17g"),
        ]
    )


def cmd_sweep(args) -> int:
    opts = _merge(args, _parse_config_file(args.config) if args.config else {})
    fs, a, b, beta, f_scale = _prepare(opts)
    epsilons = _float_list(opts.get("epsilon"))
    nodes = [int(v) for v in _float_list(opts.get("nodes"))]
    seed = int(opts.get("seed", 1))
    if bool(epsilons) == bool(nodes):
        raise CliError("sweep needs --epsilon LIST or --nodes LIST (not both)")

    rows = ["epsilon,M,L,error_measured,error_bound,success_prob"]
    all_pass = True
    if opts.get("minimal_nodes"):
        if not epsilons:
            raise CliError("--minimal-nodes needs an epsilon list")
        for epsilon in epsilons:
            m_min, report = pipeline.minimal_nodes_for_error(
                fs, a, b, beta, epsilon, f_scale
            )
            rows.append(_csv_row(epsilon, report))
            all_pass = all_pass and report.error_measured <= epsilon
    elif epsilons:
        for epsilon in epsilons:
            plan = pipeline.select_parameters(fs, beta, f_scale, epsilon)
            report = pipeline.run_algorithm(
                fs, a, b, plan, beta, seed, keep_internals=False
            )
            rows.append(_csv_row(epsilon, report))
            all_pass = all_pass and _report_passes(report, epsilon)
    else:
        order = int(opts["order"]) if "order" in opts else pipeline.saturated_order(
            fs, beta, f_scale
        )
        eps_prime = float(opts.get("hhl_error", 0.0))
        for m_nodes in nodes:
            plan = pipeline.manual_plan(fs, beta, f_scale, m_nodes, order, eps_prime)
            report = pipeline.run_algorithm(
                fs, a, b, plan, beta, seed, keep_internals=False
            )
            rows.append(_csv_row(None, report))
            all_pass = all_pass and _report_passes(report, None)
    _write_text(opts.get("out"), "\n".join(rows) + "\n")
    return 0 if all_pass else 1


def cmd_verify(args) -> int:
    only = args.only
    try:
        results = verify.run_checks(args.seed, only)
    except KeyError:
        print(
            "error: unknown module %r (choose from %s)"
            % (only, ", ".join(verify.available_groups())),
            file=sys.stderr,
        )
        return 2
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append("%s %s%s" % (status, res.name, " - " + res.detail if res.detail else ""))
    passed = sum(1 for r in results if r.passed)
    lines.append("verified %d/%d invariants (seed %d)" % (passed, len(results), args.seed))
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        payload = {
            "seed": args.seed,
            "results": [
                {"name": r.name, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        }
        import json

        with open(args.out, "w", encoding="ascii") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    if passed == len(results):
        return 0
    first_bad = next(r for r in results if not r.passed)
    print("error: invariant failed: %s" % first_bad.name, file=sys.stderr)
    return 1


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("config", nargs="?", help="optional key = value config file")
    p.add_argument("--matrix", help="Matrix Market coordinate file")
    p.add_argument("--rhs", help="vector file for b (default: first basis state)")
    p.add_argument("--function", choices=_FUNCTION_KINDS)
    p.add_argument("--radius", type=float, help="analyticity radius R (default 2)")
    p.add_argument("--pole", type=complex, help="pole s for the geometric kind")
    p.add_argument("--coeffs", help="coefficient file for poly/custom kinds")
    p.add_argument("--beta", type=float, help="contour radius (default sqrt(R))")
    p.add_argument("--epsilon", help="accuracy target(s), comma separated for sweep")
    p.add_argument("--nodes", help="node count(s) M, comma separated for sweep")
    p.add_argument("--order", type=int, help="series truncation L")
    p.add_argument("--hhl-error", dest="hhl_error", type=float,
                   help="solver-stage error budget eps'")
    p.add_argument("--seed", type=int, default=None, help="error-injection seed")
    p.add_argument("--normalize", action="store_true",
                   help="rescale the matrix to unit spectral norm")
    p.add_argument("--out", help="output path (default: stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matfunc",
        description="simulate and certify the matrix-function state pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one pipeline execution, JSON report")
    _add_common_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="parameter sweep, CSV report")
    _add_common_flags(p_sweep)
    p_sweep.add_argument(
        "--minimal-nodes", dest="minimal_nodes", action="store_true",
        help="search the smallest node count per epsilon (eps'=0, L saturated)",
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the named invariant checks")
    p_verify.add_argument("--seed", type=int, default=1)
    p_verify.add_argument("--only", help="restrict to one module group")
    p_verify.add_argument("--out", help="also write results as JSON")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, matching the parse-error contract
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (NormTooLarge, NullImage, InfeasibleTarget, NullProjection, SizeCap) as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 3
    except MatfuncError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
