"""Command-line front end: verification suites and data exports.

Exit codes are the contract: 0 when every check passes, 1 when a check
fails (the report names the first counterexample), 2 on invalid
configuration. Reports are deterministic: the same configuration and seed
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath as mp

from .dual import commutator_residual, conjugate_series, dual_partition, dual_recursive, fisher_info
from .fock import FockSpace, FockVector
from .ncpoly import (
    diff_partition,
    diff_quotient,
    duality_residual,
    gibbs_gradient_residuals,
    gibbs_potential,
    vector_to_poly,
    wick_partition,
    wick_recursive,
)
from .onevariable import (
    cheb,
    hermite,
    q_identity_residual,
    rescale_identity_residual,
    trace_cheb,
    trace_cheb_odd,
)
from .norms import gram_domination_residual, haagerup_residual, right_annihilation_norm, series_tail
from .partitions import enumerate_family
from .scalars import FORMAL_Q, Deformation, QPoly, QRat, analytic_constants, float_eval, magnitude

SUITES = (
    "commutator",
    "dual-agree",
    "wick-agree",
    "derivative-agree",
    "duality",
    "gibbs",
    "bounds",
    "univar",
    "all",
)
EXPORTS = ("xi", "gibbs", "partitions", "hermite", "fisher")


class ConfigError(Exception):
    pass


def _scalar_json(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, QPoly):
        return {"poly": [_scalar_json(c) for c in value.coeffs]}
    if isinstance(value, QRat):
        return {
            "num": [_scalar_json(c) for c in value.num.coeffs],
            "den": [_scalar_json(c) for c in value.den.coeffs],
        }
    if isinstance(value, mp.mpf):
        return mp.nstr(value, 12)
    return str(value)


def _parse_config(args):
    mode = args.mode
    if args.level < 0:
        raise ConfigError("level must be nonnegative")
    if args.series_m < 0:
        raise ConfigError("series length must be nonnegative")

    if args.q_matrix is not None:
        if mode == "symbolic":
            raise ConfigError("symbolic mode requires the scalar parameter left formal")
        deformation = Deformation.from_json(args.q_matrix)
        numeric = [v for row in deformation.entries for v in row]
        if mode == "exact" and any(isinstance(v, float) for v in numeric):
            raise ConfigError("exact mode requires rational matrix entries")
        if mode == "float":
            deformation = Deformation(
                [[float_eval(v) for v in row] for row in deformation.entries]
            )
        if deformation.d != args.d:
            raise ConfigError("matrix dimension disagrees with --d")
        if deformation.max_abs_float() >= 1.0:
            raise ConfigError("matrix entries must have absolute value below 1")
    elif mode == "symbolic":
        if args.q is not None:
            raise ConfigError("symbolic mode requires the scalar parameter left formal")
        deformation = Deformation.constant(args.d, FORMAL_Q)
    else:
        text = args.q if args.q is not None else "1/2"
        try:
            q_exact = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse q: {text!r}") from exc
        if not abs(q_exact) < 1:
            raise ConfigError("q must satisfy |q| < 1")
        q_value = float(q_exact) if mode == "float" else q_exact
        deformation = Deformation.constant(args.d, q_value)
    return deformation


def _tolerance(mode):
    return 1e-10 if mode == "float" else 0


def _q_float(deformation):
    if deformation.is_symbolic:
        return None
    return deformation.max_abs_float()


def _check(name, value, passed, **params):
    return {
        "check": name,
        "params": params,
        "value": _scalar_json(value) if not isinstance(value, str) else value,
        "pass": bool(passed),
    }


def _suite_commutator(space, args, tol):
    checks = []
    limit = min(args.level - 1, 5)
    for i in range(1, space.d + 1):
        for j in range(1, space.d + 1):
            res = commutator_residual(space, i, j, limit)
            checks.append(
                _check(
                    f"commutator/i={i},j={j}",
                    magnitude(res),
                    magnitude(res) <= tol,
                    level_limit=limit,
                )
            )
    return checks


def _suite_dual_agree(space, args, tol):
    checks = []
    limit = min(args.level, 6)
    bad = None
    count = 0
    for n in range(limit + 1):
        for w in space.words(n):
            for i in range(1, space.d + 1):
                lhs = dual_partition(space, i, w)
                rhs = dual_recursive(space, i, w)
                count += 1
                if magnitude((lhs - rhs).max_coeff_magnitude()) > tol and bad is None:
                    bad = (i, w)
    checks.append(
        _check(
            "dual-agree/strategies",
            f"{count} words" if bad is None else f"counterexample i={bad[0]} w={bad[1]}",
            bad is None,
            max_length=limit,
        )
    )
    return checks


def _suite_wick_agree(space, args, tol):
    limit = min(args.level, 6)
    bad = None
    count = 0
    for n in range(limit + 1):
        for w in space.words(n):
            count += 1
            diff = wick_partition(space, w) - wick_recursive(space, w)
            worst = max((magnitude(c) for _, c in diff.items()), default=0)
            if worst > tol and bad is None:
                bad = w
    return [
        _check(
            "wick-agree/strategies",
            f"{count} words" if bad is None else f"counterexample w={bad}",
            bad is None,
            max_length=limit,
        )
    ]


def _suite_derivative_agree(space, args, tol):
    limit = min(args.level, 5)
    bad = None
    count = 0
    for n in range(limit + 1):
        for w in space.words(n):
            for i in range(1, space.d + 1):
                count += 1
                lhs = diff_partition(space, i, w)
                rhs = diff_quotient(i, wick_recursive(space, w))
                diff = lhs - rhs
                worst = max((magnitude(c) for _, c in diff.items()), default=0)
                if worst > tol and bad is None:
                    bad = (i, w)
    return [
        _check(
            "derivative-agree/strategies",
            f"{count} pairs" if bad is None else f"counterexample i={bad[0]} w={bad[1]}",
            bad is None,
            max_length=limit,
        )
    ]


def _suite_duality(space, args, tol):
    if space.deformation.is_symbolic and space.d > 1:
        raise ConfigError("duality suite needs numeric entries for d > 1")
    m = args.series_m
    if 2 * m + 1 > args.level:
        raise ConfigError("duality suite needs level >= 2*series_m + 1")
    limit = min(args.level, m + 2)
    bad = None
    count = 0
    for n in range(limit + 1):
        for u in space.words(n):
            for i in range(1, space.d + 1):
                count += 1
                res = duality_residual(space, u, i, m)
                if magnitude(res) > tol and bad is None:
                    bad = (i, u)
    return [
        _check(
            "duality/pairing",
            f"{count} monomials" if bad is None else f"counterexample i={bad[0]} u={bad[1]}",
            bad is None,
            max_length=limit,
            series_m=m,
        )
    ]


def _suite_gibbs(space, args, tol):
    if space.deformation.is_symbolic and space.d > 1:
        raise ConfigError("gibbs suite needs numeric entries for d > 1")
    m = args.series_m
    if 2 * m + 1 > args.level:
        raise ConfigError("gibbs suite needs level >= 2*series_m + 1")
    residuals = gibbs_gradient_residuals(space, m)
    checks = []
    for degree in sorted(residuals):
        checks.append(
            _check(
                f"gibbs/degree={degree}",
                magnitude(residuals[degree]),
                magnitude(residuals[degree]) <= tol,
                series_m=m,
            )
        )
    return checks


def _suite_bounds(space, args, tol):
    q0 = _q_float(space.deformation)
    if q0 is None:
        q0 = 0.5
    d = space.d
    checks = []
    w, _ = analytic_constants(q0)
    for m in range(min(4, args.level - 1) + 1):
        val = gram_domination_residual(m, q0, d)
        checks.append(
            _check(f"bounds/gram-domination m={m}", val, val >= -1e-9, q0=q0)
        )
    norm = right_annihilation_norm(1, q0, d, min(args.level, 6))
    bound = 1.0 / (w**0.5)
    checks.append(
        _check("bounds/right-annihilation-norm", norm, norm <= bound + 1e-9, bound=bound)
    )
    res = haagerup_residual(min(3, args.level - 2), q0, d, trials=20, seed=args.seed)
    checks.append(_check("bounds/haagerup", res, res <= 1e-12, trials=20))
    for series in ("xi", "fisher", "gibbs", "lipschitz"):
        t1 = series_tail(series, args.series_m, q0, d)
        t2 = series_tail(series, args.series_m + 2, q0, d)
        ok = t1.is_finite() and t2.is_finite() and t2.bound <= t1.bound
        checks.append(
            _check(
                f"bounds/tail-{series}",
                t1.bound,
                ok,
                truncation=args.series_m,
            )
        )
    return checks


def _suite_univar(space, args, tol):
    checks = []
    for n in range(4):
        value = trace_cheb(n)
        expected = (-1) ** n * FORMAL_Q ** (n * (n + 1) // 2)
        checks.append(_check(f"univar/trace-even n={n}", value, value == expected))
    for n in range(1, 3):
        checks.append(_check(f"univar/trace-odd n={n}", trace_cheb_odd(n), True))
    q0 = _q_float(space.deformation)
    if q0 is None:
        q0 = 0.5
    for n in range(1, 7):
        res = rescale_identity_residual(n, q0)
        checks.append(_check(f"univar/rescale n={n}", res, res < 1e-10, q0=q0))
    for m in range(4):
        chk = q_identity_residual(m, q0, 200)
        checks.append(
            _check(
                f"univar/q-identity m={m}",
                chk.residual,
                chk.residual < 1e-12 + chk.tail_bound,
                tail=chk.tail_bound,
            )
        )
    ok = all(hermite(n, 0) == cheb("U", n) for n in range(9))
    checks.append(_check("univar/free-case-hermite", "n<=8", ok))
    return checks


_SUITE_FN = {
    "commutator": _suite_commutator,
    "dual-agree": _suite_dual_agree,
    "wick-agree": _suite_wick_agree,
    "derivative-agree": _suite_derivative_agree,
    "duality": _suite_duality,
    "gibbs": _suite_gibbs,
    "bounds": _suite_bounds,
    "univar": _suite_univar,
}


def run_verify(args) -> int:
    deformation = _parse_config(args)
    space = FockSpace(deformation, args.level)
    tol = _tolerance(args.mode)
    names = list(_SUITE_FN) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        checks.extend(_SUITE_FN[name](space, args, tol))
    checks.sort(key=lambda c: c["check"])
    report = {
        "command": "verify",
        "suite": args.suite,
        "config": _config_json(args),
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    _emit(args, json.dumps(report, sort_keys=True, indent=2))
    return 0 if report["pass"] else 1


def _config_json(args):
    return {
        "d": args.d,
        "q": args.q,
        "q_matrix": args.q_matrix,
        "level": args.level,
        "series_m": args.series_m,
        "mode": args.mode,
        "seed": args.seed,
    }


def _word_json(word):
    return list(word)


def _export_xi(space, args):
    rows = []
    q0 = _q_float(space.deformation)
    for i in range(1, space.d + 1):
        xi = conjugate_series(space, i, args.series_m)
        terms = []
        for w in xi.support():
            c = xi.coeff(w)
            entry = {"word": _word_json(w)}
            if isinstance(c, Fraction):
                entry["coeff_num"] = c.numerator
                entry["coeff_den"] = c.denominator
            else:
                entry["coeff"] = _scalar_json(c)
            terms.append(entry)
        tail = (
            series_tail("xi", args.series_m, q0, space.d).bound_float
            if q0 is not None
            else None
        )
        rows.append({"i": i, "M": args.series_m, "terms": terms, "tail_bound": tail})
    return {"xi": rows}


def _export_gibbs(space, args):
    potential = gibbs_potential(space, args.series_m)
    residuals = gibbs_gradient_residuals(space, args.series_m)
    return {
        "terms": [
            {"word": _word_json(w), "coeff": _scalar_json(c)}
            for w, c in sorted(potential.items(), key=lambda t: (len(t[0]), t[0]))
        ],
        "gradient_residuals": {
            str(k): _scalar_json(magnitude(v)) for k, v in sorted(residuals.items())
        },
    }


def _export_partitions(space, args):
    rows = []
    for part in enumerate_family(args.family, args.n):
        rows.append(
            {
                "family": part.family,
                "n": part.n_vertices,
                "blocks": [list(b) for b in part.blocks()],
                "crossings": part.crossings(),
            }
        )
    return {"partitions": rows}


def _export_hermite(space, args):
    q = space.deformation.constant_value if space.deformation.is_constant else FORMAL_Q
    rows = []
    for n in range(args.n + 1):
        rows.append({"n": n, "coeffs": [_scalar_json(c) for c in hermite(n, q).coeffs]})
    return {"hermite": rows}


def _export_fisher(space, args):
    rows = []
    for m in range(args.series_m + 1):
        rep = fisher_info(space, m)
        rows.append(
            {
                "M": m,
                "value": _scalar_json(rep.value),
                "value_float": rep.value_float,
                "tail_bound": rep.tail_bound,
            }
        )
    return {"fisher": rows}


_EXPORT_FN = {
    "xi": _export_xi,
    "gibbs": _export_gibbs,
    "partitions": _export_partitions,
    "hermite": _export_hermite,
    "fisher": _export_fisher,
}

_CSVABLE = {"partitions", "hermite", "fisher"}


def run_export(args) -> int:
    deformation = _parse_config(args)
    if args.what in ("xi", "gibbs", "fisher"):
        if 2 * args.series_m + 1 > args.level:
            raise ConfigError("export needs level >= 2*series_m + 1")
        if args.what in ("fisher",) and deformation.is_symbolic:
            raise ConfigError("fisher export needs numeric entries")
    space = FockSpace(deformation, args.level)
    payload = _EXPORT_FN[args.what](space, args)
    if args.format == "csv":
        if args.what not in _CSVABLE:
            raise ConfigError(f"{args.what} export has no tabular form; use json")
        key = next(iter(payload))
        rows = payload[key]
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: json.dumps(v, sort_keys=True, default=_scalar_json) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        _emit(args, buf.getvalue())
    else:
        report = {"command": "export", "what": args.what, "config": _config_json(args)}
        report.update(payload)
        _emit(args, json.dumps(report, sort_keys=True, indent=2))
    return 0


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qfock",
        description="Verification suites and exports for deformed Gaussian computations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--d", type=int, default=2, help="number of letters")
        p.add_argument("--q", type=str, default=None, help="scalar parameter, 'p/q' or decimal")
        p.add_argument("--q-matrix", type=str, default=None, help="path to a matrix JSON file")
        p.add_argument("--level", type=int, default=6, help="truncation level")
        p.add_argument("--series-m", dest="series_m", type=int, default=2, help="series truncation")
        p.add_argument("--mode", choices=("exact", "symbolic", "float"), default="exact")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=str, default=None)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=SUITES)
    common(pv)

    pe = sub.add_parser("export", help="export computed objects")
    pe.add_argument("what", choices=EXPORTS)
    common(pe)
    pe.add_argument("--family", choices=("B", "C", "D"), default="B")
    pe.add_argument("--n", type=int, default=4, help="vertex count / table size")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "verify":
            return run_verify(args)
        return run_export(args)
    except ConfigError as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
