"""Command line interface: ``tensorrho <command> --input FILE [options]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import mpmath

from ._rational import parse_rational
from .coercivity import nu_with_point
from .ellipsoid import glp_minimize
from .errors import InputError, TensorRhoError
from .problem_io import read_problem
from .tensor_reduction import (
    clique_upper_bound,
    connected_components,
    hypergraph_rho,
    is_weakly_irreducible,
    mu_d,
    mu_p_lifted,
    spectral_radius,
)

COMMANDS = {
    "rho": "map",
    "mu-d": "form",
    "mu-p": "form",
    "hypergraph": "hypergraph",
    "clique-bound": "hypergraph",
    "glp-min": "glp",
    "check": None,
}
DIGITS = 20


def fmt_real(x) -> str:
    """20 significant digits, deterministic."""
    with mpmath.workprec(256):
        if isinstance(x, Fraction):
            x = mpmath.mpf(x.numerator) / x.denominator
        return mpmath.nstr(mpmath.mpf(x), DIGITS, strip_zeros=False)


def fmt_vec(v) -> list:
    return [fmt_real(x) for x in v]


def _spectral_report(res, report):
    report["value"] = fmt_real(res.rho)
    report["bracket"] = [fmt_real(res.lower), fmt_real(res.upper)]
    report["bracket_exact"] = [str(res.lower), str(res.upper)]
    report["achieved_eps"] = fmt_real(res.eps)
    report["eigenvector"] = fmt_vec(res.eigvec_hp or res.eigvec)
    report["normalization"] = f"|u|_{res.norm} = 1"
    lo, hi = res.certificate
    report["cw_lower"] = fmt_real(lo)
    report["cw_upper"] = fmt_real(hi)
    report["cw_gap"] = fmt_real(hi - lo)
    report["method"] = res.method
    report["iterations"] = str(res.iterations)
    if res.quasi:
        report["quasi"] = "true"
    if res.dropped:
        report["dropped_variables"] = [str(i + 1) for i in res.dropped]
    if len(res.components) > 1:
        report["components"] = [
            "{" + ",".join(str(i + 1) for i in vs) + "}=" + fmt_real(r) for vs, r in res.components
        ]


def _verify_map(F, res, report):
    from .verify import entropic_value, occupation_from_eigenpair, power_iteration_matrix

    if F.is_linear:
        rho_p, _ = power_iteration_matrix(F.matrix())
        report["verify_power_iteration"] = fmt_real(rho_p)
        report["verify_power_diff"] = fmt_real(abs(float(res.rho) - rho_p))
    if not F.quasi and res.eigvec_hp:
        mu = occupation_from_eigenpair(F, res.rho, res.eigvec_hp)
        report["verify_occupation_mass"] = fmt_real(mu.mass())
        report["verify_occupation_balance"] = fmt_real(mu.balance_residual())
        report["verify_entropic_diff"] = fmt_real(
            abs(entropic_value(F, mu) - math.log(float(res.rho)))
        )


def _verify_form(g, value, p, report):
    from .verify import grid_maximize_form

    if g.n_plus_1 > 3:
        report["verify"] = "skipped (grid oracle needs n + 1 <= 3)"
        return
    val, _ = grid_maximize_form(g, p)
    report["verify_grid_value"] = fmt_real(val)
    report["verify_grid_diff"] = fmt_real(abs(float(value) - val))


def run_command(cmd: str, problem, eps: Fraction, args) -> dict:
    kw = {"precision": args.precision}
    report = {"command": cmd, "type": problem.kind, "eps": str(eps)}
    obj = problem.obj
    want = COMMANDS[cmd]
    if want is not None and problem.kind != want:
        raise InputError(f"command {cmd} needs a {want} file, got {problem.kind}")
    if cmd == "rho":
        res = spectral_radius(obj, eps, **kw)
        _spectral_report(res, report)
        if args.verify:
            _verify_map(obj, res, report)
    elif cmd == "mu-d":
        res = mu_d(obj, eps, **kw)
        _spectral_report(res, report)
        if args.verify:
            _verify_form(obj, res.rho, None, report)
    elif cmd == "mu-p":
        if args.p is None:
            raise InputError("mu-p needs --p")
        p = parse_rational(args.p)
        res = mu_p_lifted(obj, p, eps, **kw)
        report["p"] = str(p)
        report["value"] = fmt_real(res.value)
        report["bracket"] = [fmt_real(res.lower), fmt_real(res.upper)]
        report["bracket_exact"] = [str(res.lower), str(res.upper)]
        report["alpha"] = fmt_real(res.alpha)
        if res.alpha_exact is not None:
            report["alpha_exact"] = str(res.alpha_exact)
        report["maximizer"] = fmt_vec(res.maximizer)
        report["iterations"] = str(res.lifted.iterations)
        if args.verify:
            _verify_form(obj, res.value, p, report)
    elif cmd == "hypergraph":
        res = hypergraph_rho(obj, eps, **kw)
        _spectral_report(res, report)
        if args.verify:
            _verify_form(obj.form(), res.rho, None, report)
    elif cmd == "clique-bound":
        res = hypergraph_rho(obj, eps, **kw)
        report["rho_upper"] = fmt_real(res.upper)
        report["clique_bound"] = str(clique_upper_bound(obj, eps, **kw))
    elif cmd == "glp-min":
        res = glp_minimize(obj, eps, **kw)
        report["value"] = fmt_real(res.value)
        report["bracket"] = [fmt_real(res.value - eps), fmt_real(res.value + eps)]
        report["certified_bracket"] = [fmt_real(res.lower), fmt_real(res.upper)]
        report["certified_bracket_exact"] = [str(res.lower), str(res.upper)]
        report["minimizer"] = fmt_vec(res.minimizer)
        report["iterations"] = str(res.altitude.iterations)
        report["backend"] = res.altitude.backend
        if args.verify:
            _verify_glp(obj, res, report)
    else:
        _check_report(problem, report)
    return report


def _verify_glp(f, res, report):
    from .errors import UnsupportedError
    from .verify import grid_error, grid_minimize_f

    step = Fraction(1, 128)
    try:
        val, _ = grid_minimize_f(f, step=step)
    except UnsupportedError as exc:
        report["verify"] = f"skipped ({exc})"
        return
    report["verify_grid_value"] = fmt_real(val)
    report["verify_grid_error"] = fmt_real(grid_error(f, step))
    report["verify_grid_diff"] = fmt_real(abs(float(res.value) - val))


def _check_report(problem, report):
    obj = problem.obj
    if problem.kind == "map":
        report["dim"] = str(obj.n_plus_1)
        report["degree_minus_1"] = str(obj.degree_minus_1)
        report["weakly_irreducible"] = str(is_weakly_irreducible(obj)).lower()
        report["quasi"] = str(obj.quasi).lower()
    elif problem.kind in ("form", "hypergraph"):
        g = obj if problem.kind == "form" else obj.form()
        report["dim"] = str(g.n_plus_1)
        report["degree"] = str(g.degree)
        report["components"] = [
            "{" + ",".join(str(i + 1) for i in c.variables) + "}" for c in connected_components(g)
        ]
        report["quasi"] = str(g.quasi).lower()
    else:
        nu, x = nu_with_point(obj)
        report["dim"] = str(obj.n)
        report["branches"] = str(obj.N)
        report["nu"] = str(nu)
        report["coercive"] = str(nu > 0).lower()
        if nu <= 0:
            report["witness"] = [str(v) for v in x]


def render_text(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, list):
            v = "[" + ", ".join(v) + "]"
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tensorrho",
        description="Certified spectral radii of nonnegative tensors and log-sum-exp minima.",
    )
    ap.add_argument("command", choices=list(COMMANDS))
    ap.add_argument("--input", required=True, help="problem file, or - for stdin")
    ap.add_argument("--eps", default="1/1000000", help="target accuracy (rational)")
    ap.add_argument("--p", default=None, help="norm exponent for mu-p (rational >= d + 1)")
    ap.add_argument("--precision", type=int, default=None,
                    help="working bits (default binary128; PRECISION_BITS overrides)")
    ap.add_argument("--verify", action="store_true", help="add independent oracle checks")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    return ap


def _fail(kind: str, exc: Exception, code: int) -> int:
    msg = " ".join(str(exc).split())
    print(f"error: {kind}: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        eps = parse_rational(args.eps)
        if eps <= 0:
            raise InputError("--eps must be positive")
        problem = read_problem(args.input)
        report = run_command(args.command, problem, eps, args)
    except TensorRhoError as exc:
        kinds = {2: "input", 3: "reducibility", 4: "precision"}
        return _fail(kinds.get(exc.exit_code, "error"), exc, exc.exit_code)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail("input", exc, 2)
    except ArithmeticError as exc:
        return _fail("precision", exc, 4)
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(report))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
