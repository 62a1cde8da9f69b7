"""Command-line entry point ``fracmf``.

Every subcommand accepts the shared flags --prec, --format, --tol,
--full-sturm and --jobs. Defaults can be overridden through environment
variables FRACMF_PREC, FRACMF_FORMAT, FRACMF_TOL, FRACMF_FULL_STURM and
FRACMF_JOBS. The exit status is 0 exactly when every requested check passes.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .errors import FracMFError
from .minimal import (IDENTITY_PREC_FLOOR, check_identity, connecting_phase, ibukiyama,
                      load_identities, character, n_level_closed, n_level_oracle,
                      scaled_character)
from .mlde import (MLDE, eta_commutes, exponent_check, fit_mlde, format_mlde,
                   frobenius_solve, display_terms, indicial_poly)
from .qseries import QSeries, coeff_at, eq_to_prec, format_series
from .validation import check_odd_level, check_precision, check_tolerance

ENV_PREFIX = "FRACMF_"
SHIPPED_LEVELS = (5, 7, 15, 21)
FULL_STURM = 1440


@dataclass(frozen=True)
class RunConfig:
    precision_steps: int = 200
    tolerance_alg: float = 1e-10
    tolerance_eval: float = 1e-6
    output_format: str = "text"
    parallelism: int = 1
    full_sturm: bool = False


def _env(name, default, cast=str):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    if cast is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return cast(raw)


def _common_parser(suppress: bool = False) -> argparse.ArgumentParser:
    """Shared flags. The per-subcommand copy uses suppressed defaults so a flag
    given before the subcommand is not overwritten by the subparser."""
    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=default(_env("PREC", 200, int)),
                        help="precision in integer q-steps (default 200)")
    common.add_argument("--format", choices=("text", "json"), default=default(_env("FORMAT", "text")))
    common.add_argument("--tol", type=float, default=default(_env("TOL", 1e-6, float)),
                        help="tolerance for numeric series-evaluation checks")
    common.add_argument("--full-sturm", action="store_true",
                        default=default(_env("FULL_STURM", False, bool)),
                        help=f"run identity checks to {FULL_STURM} steps")
    common.add_argument("--jobs", type=int, default=default(_env("JOBS", 1, int)),
                        help="worker processes for independent items")
    return common


def _config(args) -> RunConfig:
    return RunConfig(precision_steps=check_precision(args.prec),
                     tolerance_eval=check_tolerance(args.tol),
                     output_format=args.format, parallelism=max(1, args.jobs),
                     full_sturm=args.full_sturm)


def _pmap(fn, items, jobs: int):
    """Map preserving input order; uses a process pool when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _emit(cfg: RunConfig, payload, text: str):
    if cfg.output_format == "json":
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print(text)


def _odd_p(value: str) -> int:
    try:
        return check_odd_level(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _frac(value: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {value!r}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_char(args, cfg: RunConfig) -> int:
    p, s = args.p, args.s
    if not 0 < s <= (p - 1) // 2:
        raise FracMFError(f"s must satisfy 0 < s <= {(p - 1) // 2}")
    if args.scaled:
        f = scaled_character(p, s, cfg.precision_steps)
    else:
        f = character(2, p, 1, s, cfg.precision_steps)
    payload = dict(f.to_dict(), p=p, s=s, scaled=args.scaled, phase="0/1")
    _emit(cfg, payload, format_series(f, max_terms=args.terms))
    return 0


def cmd_ibukiyama(args, cfg: RunConfig) -> int:
    f = ibukiyama(args.p, args.r, cfg.precision_steps)
    payload = dict(f.to_dict(), p=args.p, r=args.r)
    _emit(cfg, payload, f"{f.phase} * {format_series(f.series, max_terms=args.terms)}")
    return 0


def _characters(p: int, prec: int) -> list[QSeries]:
    return [scaled_character(p, s, prec) for s in range(1, (p - 1) // 2 + 1)]


def _fit(p: int, prec: int) -> MLDE:
    return fit_mlde(Fraction(p - 3, 2 * p), _characters(p, prec))


def _solve_item(item):
    p, prec = item
    L = _fit(p, prec)
    out = []
    for s, f in enumerate(_characters(p, prec), start=1):
        lam = f.valuation
        g, info = frobenius_solve(L, lam, prec, return_info=True)
        matched = eq_to_prec(g, f)
        free = {}
        if info.resonances and not matched:
            free = {m: coeff_at(f, lam + m) for m in info.resonances}
            matched = eq_to_prec(frobenius_solve(L, lam, prec, free=free), f)
        out.append({"s": s, "lambda": str(lam), "resonances": info.resonances,
                    "free": {str(m): str(v) for m, v in free.items()}, "pass": matched})
    return out


def cmd_mlde(args, cfg: RunConfig) -> int:
    p = args.p
    if args.action == "solve":
        rows = _solve_item((p, cfg.precision_steps))
        ok = all(r["pass"] for r in rows)
        lines = []
        for r in rows:
            note = f" free={r['free']}" if r["free"] else ""
            lines.append(f"s={r['s']} lambda={r['lambda']}: "
                         f"{'regenerated' if r['pass'] else 'MISMATCH'}{note}")
        _emit(cfg, {"p": p, "solutions": rows, "pass": ok}, "\n".join(lines))
        return 0 if ok else 1
    L = _fit(p, cfg.precision_steps)
    psi = indicial_poly(L)
    if args.action == "fit":
        payload = dict(L.to_dict(), roots=[str(r) for r in psi.roots()])
        _emit(cfg, payload, format_mlde(L))
        return 0
    terms = display_terms(L)
    payload = {"p": p, "weight": str(L.weight), "order": L.order,
               "terms": [t.to_dict() for t in terms], "indicial_roots": [str(r) for r in psi.roots()]}
    text = [format_mlde(L), f"indicial polynomial: {psi}",
            "roots: " + ", ".join(str(r) for r in psi.roots())]
    _emit(cfg, payload, "\n".join(text))
    return 0


def cmd_np(args, cfg: RunConfig) -> int:
    rows = []
    ok = True
    for p in range(5, args.max + 1, 2):
        r = (p - 3) // 2
        n = n_level_closed(p)
        row = {"p": p, "ell": r % 12, "n": n, "multiple_of_p": n // p}
        if args.verify:
            o = n_level_oracle(2, p)
            row["oracle"] = o
            row["match"] = o == n
            ok &= o == n
        rows.append(row)
    lines = [f"{'p':>5} {'l':>3} {'n_p':>8}" + (f" {'oracle':>8} ok" if args.verify else "")]
    for row in rows:
        line = f"{row['p']:>5} {row['ell']:>3} {row['n']:>8}"
        if args.verify:
            line += f" {row['oracle']:>8} {'yes' if row['match'] else 'NO'}"
        lines.append(line)
    _emit(cfg, {"rows": rows, "pass": ok}, "\n".join(lines))
    return 0 if ok else 1


def _identity_item(item):
    ident, prec = item
    return check_identity(ident, prec).to_dict()


def _verify_identities(args, cfg: RunConfig):
    prec = FULL_STURM if cfg.full_sturm else cfg.precision_steps
    if prec < IDENTITY_PREC_FLOOR:
        raise FracMFError(
            f"insufficient precision for meaningful check: {prec} < floor {IDENTITY_PREC_FLOOR}")
    status = "corrected" if args.corrected else "printed"
    idents = load_identities(args.pair, status=status)
    reports = _pmap(_identity_item, [(i, prec) for i in idents], cfg.parallelism)
    for ident, rep in zip(idents, reports):
        rep["statement"] = ident.printed()
    lines = [f"{'PASS' if r['pass'] else 'FAIL'}  {r['statement']}" for r in reports]
    lines.append(f"{sum(r['pass'] for r in reports)}/{len(reports)} pass at {prec} steps")
    return reports, lines


def _rep_item(item):
    from .rep import check_relations, check_transformation

    p, tol_alg, tol_eval, prec = item
    out = [r.to_dict() for r in check_relations(p, tol_alg)]
    out.append(check_transformation(p, "T").to_dict())
    if p in (5, 7):
        out.append(check_transformation(p, "S", prec=max(prec, 60), tol=tol_eval).to_dict())
    return out


def _verify_rep(args, cfg: RunConfig):
    import numpy as np

    from .fixtures import repd_matrices
    from .rep import s_matrix, t_matrix

    levels = args.p or list(range(5, 23, 2))
    chunks = _pmap(_rep_item, [(p, cfg.tolerance_alg, cfg.tolerance_eval, cfg.precision_steps)
                               for p in levels], cfg.parallelism)
    reports = [r for c in chunks for r in c]
    lines = [f"{'PASS' if r['pass'] else 'FAIL'}  p={r['p']:<3} {r['relation']:<11} "
             f"dev={r['max_abs_dev']:.2e} tol={r['tol']:.0e}" for r in reports]
    if 5 in levels:
        T5, S5 = repd_matrices()
        for label, mine, printed in (("repdT", t_matrix(5).entries, T5),
                                     ("repdS", s_matrix(5).entries, S5)):
            dev = float(np.max(np.abs(mine - printed)))
            reports.append({"p": 5, "relation": label, "max_abs_dev": dev, "tol": 1e-12,
                            "pass": dev < 1e-12})
            lines.append(f"{'PASS' if dev < 1e-12 else 'FAIL'}  p=5   {label:<11} dev={dev:.2e}")
        lines.append("S(5) =\n" + np.array2string(s_matrix(5).entries, precision=6))
        lines.append("T(5) =\n" + np.array2string(t_matrix(5).entries, precision=6))
    return reports, lines


def _verify_eta_commutation(args, cfg: RunConfig):
    rng = random.Random(args.seed)
    prec = min(cfg.precision_steps, 100)
    reports = []
    for ell in range(-4, 25):
        n = rng.randint(1, 5)
        k = Fraction(rng.randint(-12, 12), rng.choice([1, 2, 5, 7]))
        lead = Fraction(rng.randint(0, 10), rng.choice([1, 5, 7]))
        coeffs = [Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                                  for _ in range(prec - 1)]
        f = QSeries.from_power_series(coeffs, prec, offset=lead)
        reports.append({"ell": ell, "n": n, "k": str(k), "pass": eta_commutes(f, k, ell, n)})
    lines = [f"{'PASS' if r['pass'] else 'FAIL'}  ell={r['ell']:>3} n={r['n']} k={r['k']}"
             for r in reports]
    return reports, lines


def _verify_exponents(args, cfg: RunConfig):
    reports = []
    prec = min(cfg.precision_steps, 120)
    for p in SHIPPED_LEVELS:
        L = _fit(p, prec)
        roots = indicial_poly(L).roots()
        reports.append({"case": f"p={p}", "sum": str(sum(roots)),
                        "expected": str(Fraction(L.order * (L.order + L.weight - 1), 12)),
                        "pass": exponent_check(L.weight, L.order, roots)})
    for m in range(1, 21):
        k = Fraction(m, 5)
        lams = [Fraction(ell, 5) for ell in range(m + 1)]
        ok = exponent_check(k, m + 1, lams) and 12 * sum(lams) == 6 * k * (5 * k + 1)
        reports.append({"case": f"sym m={m}", "sum": str(sum(lams)),
                        "expected": str(Fraction((m + 1) * (m + k), 12)), "pass": ok})
    lines = [f"{'PASS' if r['pass'] else 'FAIL'}  {r['case']:<10} sum={r['sum']}"
             for r in reports]
    return reports, lines


def _verify_phase(args, cfg: RunConfig):
    reports = []
    for p in args.p or SHIPPED_LEVELS:
        for s in range(1, (p - 1) // 2 + 1):
            reports.append(connecting_phase(p, s).to_dict())
    for r in reports:
        r["pass"] = r["series_equal"]
    lines = [f"p={r['p']:<3} s={r['s']:<3} series_equal={r['series_equal']} e({r['phase']}) "
             f"4p:{r['matches_4p']} 8p:{r['matches_8p']}" for r in reports]
    return reports, lines


SUITES = {
    "identities": _verify_identities,
    "rep": _verify_rep,
    "eta-lemma": _verify_eta_commutation,
    "exponents": _verify_exponents,
    "phase": _verify_phase,
}


def cmd_verify(args, cfg: RunConfig) -> int:
    reports, lines = SUITES[args.suite](args, cfg)
    ok = all(r["pass"] for r in reports)
    _emit(cfg, {"suite": args.suite, "reports": reports, "pass": ok}, "\n".join(lines))
    return 0 if ok else 1


def cmd_rep(args, cfg: RunConfig) -> int:
    import numpy as np

    from .rep import extract_multiplier, s_matrix, t_matrix

    S, T = s_matrix(args.p).entries, t_matrix(args.p).entries
    _, vS = extract_multiplier(args.p)
    payload = {"p": args.p,
               "S": [[[z.real, z.imag] for z in row] for row in S.tolist()],
               "T": [[z.real, z.imag] for z in np.diag(T).tolist()],
               "vS": [vS.value.real, vS.value.imag]}
    text = (f"S =\n{np.array2string(S, precision=8)}\nT = diag "
            f"{np.array2string(np.diag(T), precision=8)}\nv_p(S) = {vS.value:.12f}")
    _emit(cfg, payload, text)
    return 0


def cmd_vvmf(args, cfg: RunConfig) -> int:
    from .rep import check_vvmf_transformation, vvmf_sym5

    res = vvmf_sym5(args.k, cfg.precision_steps)
    m = int(args.k * 5)
    rep = check_vvmf_transformation(m, prec=max(60, min(cfg.precision_steps, 200)),
                                    tol=cfg.tolerance_eval).to_dict()
    ok = res.exponents_ok and rep["pass"]
    payload = {"k": str(res.k), "mlde": res.mlde.to_dict(),
               "leading_exponents": [str(c.valuation) for c in res.components],
               "exponent_check": res.exponents_ok, "transformation": rep, "pass": ok}
    text = "\n".join([format_mlde(res.mlde),
                      "leading exponents: " + ", ".join(str(c.valuation) for c in res.components),
                      f"exponent check: {res.exponents_ok}",
                      f"S-transformation dev: {rep['max_abs_dev']:.2e}"])
    _emit(cfg, payload, text)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser(suppress=True)
    parser = argparse.ArgumentParser(prog="fracmf", description=__doc__.splitlines()[0],
                                     parents=[_common_parser()])
    parser.add_argument("--version", action="version", version=f"fracmf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("char", parents=[common], help="minimal-model character of type (2, p)")
    p.add_argument("--p", type=_odd_p, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--scaled", action="store_true", help="multiply by eta^{c_eff}")
    p.add_argument("--terms", type=int, default=10, help="terms shown in text output")
    p.set_defaults(func=cmd_char)

    p = sub.add_parser("ibukiyama", parents=[common], help="Ibukiyama form f_r")
    p.add_argument("--p", type=_odd_p, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--terms", type=int, default=10)
    p.set_defaults(func=cmd_ibukiyama)

    p = sub.add_parser("mlde", parents=[common], help="fit, solve or show the level-p MLDE")
    p.add_argument("--p", type=_odd_p, required=True)
    p.add_argument("action", choices=("fit", "solve", "show"))
    p.set_defaults(func=cmd_mlde)

    p = sub.add_parser("np", parents=[common], help="table of n_p")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="compare with the brute-force oracle")
    p.set_defaults(func=cmd_np)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--pair", choices=("5:15", "7:21"), default=None)
    p.add_argument("--corrected", action="store_true",
                   help="check the corrected identities instead of the printed ones")
    p.add_argument("--p", type=_odd_p, action="append", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rep", parents=[common], help="print S and T matrices")
    p.add_argument("--p", type=_odd_p, required=True)
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("vvmf", parents=[common], help="symmetric-power VVMF from the p = 5 pair")
    p.add_argument("--k", type=_frac, required=True, help="weight, a multiple of 1/5")
    p.set_defaults(func=cmd_vvmf)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except (FracMFError, ValueError) as exc:
        if getattr(args, "format", "text") == "json":
            print(json.dumps({"error": str(exc), "pass": False}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
