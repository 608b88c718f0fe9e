"""Command-line interface: one subcommand per table/figure dataset.

Exit codes: 0 success, 2 tolerance failure, 3 budget exceeded, 4 bad input.
Every output embeds the resolved run configuration as a JSON header comment,
so precision-sensitive results stay auditable.  Desk-tier budget caps keep
each command under roughly half an hour; --tier full lifts them (and is
expected to run for hours on the biggest sweeps).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

EXIT_OK = 0
EXIT_TOLERANCE = 2
EXIT_BUDGET = 3
EXIT_BADINPUT = 4


class BudgetExceeded(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):           # bad input contract: exit 4
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_BADINPUT)


def _load_config(path: str | None) -> dict:
    out = {}
    if path:
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def _resolved_config(args, extra: dict | None = None) -> dict:
    cfg = {
        "digits": args.digits,
        "tier": args.tier,
        "seed": args.seed,
        "threads": args.threads,
        "prime_cap": args.prime_cap,
        "zeta_correction_order": args.zeta_correction_order,
        "out_dir": str(args.out_dir),
    }
    if extra:
        cfg.update(extra)
    return cfg


def _out_path(args, name: str) -> Path:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    return args.out_dir / name

def _write_rows(args, name: str, header: list, rows: list, extra_cfg: dict):
    path = _out_path(args, name)
    lines = ["# config: " + json.dumps(_resolved_config(args, extra_cfg), sort_keys=True)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")
    return path


# ---------------------------------------------------------------------------
# poly
# ---------------------------------------------------------------------------

_POLY_DIGITS = {"unitary": 25, "symplectic": 25, "orthogonal11": 3}


def cmd_poly(args) -> int:
    from .momentpoly import pk_unitary, qk_symplectic, upsilonk_orthogonal11
    from .precision import ctx_for

    digits = args.digits or _POLY_DIGITS[args.family]
    ctx = ctx_for(digits)
    t0 = time.time()
    if args.family == "unitary":
        poly = pk_unitary(args.k, ctx, method=args.method)
    elif args.family == "symplectic":
        parity = 1 if args.parity == "neg" else 0
        poly = qk_symplectic(args.k, parity=parity, ctx=ctx, method=args.method)
    else:
        poly = upsilonk_orthogonal11(args.k, ctx=ctx,
                                     prime_cap=args.prime_cap or 100000)
    took = time.time() - t0

    path = _out_path(args, f"poly_{args.family}_k{args.k}"
                     + (f"_{args.parity}" if args.family == "symplectic" else "")
                     + ".json")
    blob = json.loads(poly.to_json())
    blob["config"] = _resolved_config(args, {"family": args.family, "k": args.k})
    path.write_text(json.dumps(blob, indent=2) + "\n")

    print(f"{poly.family} k={poly.k} degree={poly.degree} method={poly.method} "
          f"err~{poly.err_estimate:.1e}  ({took:.1f}s)")
    for m, c in enumerate(reversed(poly.coeffs)):
        print(f"  x^{poly.degree - m:<2} {c}")
    print(f"wrote {path}")
    if poly.err_estimate > 10.0 ** (-digits):
        print(f"err_estimate exceeds requested 1e-{digits}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_lemmas(args, checks):
    import random

    from mpmath import mp

    from . import mpsf
    from .momentpoly import concise_sum_check
    from .precision import ctx_for

    ctx = ctx_for(20)
    rng = random.Random(args.seed)
    tol = 1e-15                       # 10^(-target+5)
    with ctx.workprec():
        f = lambda w: mpsf.zeta(1 + w, ctx)
        sets = 0
        for k, kind, pair_rule in [(1, "unitary_Xi", None), (2, "unitary_Xi", None),
                                   (1, "pm_sum", "le"), (2, "pm_sum", "le"),
                                   (3, "pm_sum", "le"), (2, "pm_sum", "lt"),
                                   (3, "pm_sum", "lt"), (2, "pm_signed_sum", "le"),
                                   (3, "pm_signed_sum", "lt")]:
            reps = 3 if kind != "unitary_Xi" or k < 2 else 2
            for _ in range(reps):
                n = 2 * k if kind == "unitary_Xi" else k
                shifts = [mp.mpf(rng.uniform(0.005, 0.02)) * (-1) ** rng.randint(0, 1)
                          for _ in range(n)]
                coef = [mp.mpf(rng.uniform(-1, 1)) for _ in range(n)]
                F = lambda z, c=coef: mp.exp(sum(ci * zi for ci, zi in zip(c, z)))
                lhs, rhs, diff = concise_sum_check(kind, F, f, shifts, ctx,
                                                   pair_rule=pair_rule or "le")
                scale = max(1.0, float(abs(lhs)))
                checks.append({
                    "name": f"{kind} k={k} ({pair_rule or 'cross'})",
                    "ok": float(diff) / scale < tol,
                    "diff": float(diff / scale),
                })
                sets += 1


def _verify_bp(args, checks):
    import random

    from mpmath import mp

    from .localfactors import ShiftVector, bp_closed, bp_quadrature, zeta_model
    from .ntheory import primes_up_to
    from .precision import ctx_for

    ctx = ctx_for(20)
    rng = random.Random(args.seed)
    primes = primes_up_to(500)
    model = zeta_model()
    with ctx.workprec():
        for i in range(50):
            k = rng.choice((1, 2, 3))
            p = rng.choice(primes)
            shifts = ShiftVector(tuple(mp.mpf(rng.uniform(-0.05, 0.05))
                                       for _ in range(2 * k)))
            b1 = bp_closed(p, mp.mpf("0.5"), shifts, ctx)
            b2 = bp_quadrature(p, mp.mpf("0.5"), shifts, model, ctx)
            diff = float(abs(b1 - b2) / abs(b1))
            checks.append({"name": f"bp p={p} k={k} [{i}]", "ok": diff < 1e-17,
                           "diff": diff})


def _verify_ak_explicit(args, checks):
    import random

    from mpmath import mp

    from .localfactors import ShiftVector, ak_explicit_small_k, ak_global, zeta_model
    from .precision import ctx_for

    ctx = ctx_for(16)
    rng = random.Random(args.seed)
    with ctx.workprec():
        for trial in range(2):
            shifts = ShiftVector(tuple(mp.mpf(rng.uniform(-0.02, 0.02))
                                       for _ in range(6)))
            g = ak_global(shifts, zeta_model(), ctx=ctx)
            x = ak_explicit_small_k(shifts, which=3, ctx=ctx)
            diff = float(abs(g - x) / abs(x))
            checks.append({"name": f"A_3 explicit vs generic [{trial}]",
                           "ok": diff < 1e-11, "diff": diff})


def _verify_leading(args, checks):
    from mpmath import mp

    from .momentpoly import leading_coefficient, pk_unitary, qk_symplectic
    from .precision import ctx_for

    ctx = ctx_for(30)
    with ctx.workprec():
        for k in (1, 2, 3):
            p = pk_unitary(k, ctx)
            lead = leading_coefficient("unitary_zeta", k, ctx)
            rel = float(abs(p.coeffs[-1] - lead["lead"]) / abs(lead["lead"]))
            checks.append({"name": f"lead P_{k}", "ok": rel < 1e-15, "diff": rel})
        for k in (1, 2, 3):
            q = qk_symplectic(k, parity=1, ctx=ctx)
            lead = leading_coefficient("symplectic_quadratic", k, ctx)
            rel = float(abs(q.coeffs[-1] - lead["lead"]) / abs(lead["lead"]))
            checks.append({"name": f"lead Q_{k}", "ok": rel < 1e-15, "diff": rel})
        for k in range(1, 11):
            g = leading_coefficient("unitary_zeta", k, ctx, a_trunc=(100, 3))["g"]
            checks.append({"name": f"g_{k} integral", "ok": g.denominator == 1,
                           "diff": 0.0})


def _verify_rmt(args, checks):
    from .rmt import jk_exact, mc_moment

    samples = int(args.samples or 1e5)
    for group, N, k in (("U", 3, 1), ("U", 5, 2), ("USp", 3, 1), ("USp", 4, 2),
                        ("SO", 3, 1), ("SO", 4, 2)):
        r = mc_moment(group, N, k, samples, seed=args.seed)
        z = abs(r["estimate"] - r["exact"]) / r["std_error"]
        checks.append({"name": f"mc {group} N={N} k={k}", "ok": z < 4.0,
                       "diff": z})


def _verify_counts(args, checks):
    from .lvalues import count_asymptotic
    from .lvalues.discriminants import DiscriminantStream

    X = int(args.X or 1e6)
    for (a, N) in ((1, 1), (2, 11), (5, 8), (1, 3), (4, 5)):
        exact = sum(blk.size for blk in
                    DiscriminantStream(1, X, 1, residue_class=(a, N)).blocks())
        asym = count_asymptotic(a, N, X)
        rel = abs(exact - asym) / asym
        checks.append({"name": f"count (a={a}, N={N})", "ok": rel < 0.01,
                       "diff": rel})


def _verify_hecke(args, checks):
    from itertools import product

    from .localfactors import chebyshev_product_constant, hecke_delta

    # oracle: brute-force Hecke linearization over one prime
    def brute(ms):
        coeffs = {0: 1}
        for m in ms:
            nxt = {}
            for e, c in coeffs.items():
                for t in range(min(e, m) + 1):
                    nxt[e + m - 2 * t] = nxt.get(e + m - 2 * t, 0) + c
            coeffs = nxt
        return coeffs.get(0, 0)

    cases = [t for r in range(1, 4) for t in product(range(0, 5), repeat=r)
             if sum(t) <= 8]
    bad = 0
    for t in cases:
        if hecke_delta(t) != brute(t):
            bad += 1
    checks.append({"name": f"hecke delta ({len(cases)} tuples)", "ok": bad == 0,
                   "diff": bad})


def cmd_verify(args) -> int:
    runner = {
        "lemmas": _verify_lemmas,
        "bp": _verify_bp,
        "ak_explicit": _verify_ak_explicit,
        "leading": _verify_leading,
        "rmt": _verify_rmt,
        "counts": _verify_counts,
        "hecke": _verify_hecke,
    }[args.which]
    checks: list = []
    t0 = time.time()
    runner(args, checks)
    passed = all(c["ok"] for c in checks)
    report = {
        "which": args.which,
        "passed": passed,
        "elapsed_s": round(time.time() - t0, 2),
        "config": _resolved_config(args),
        "checks": checks,
    }
    path = _out_path(args, f"verify_{args.which}.json")
    path.write_text(json.dumps(report, indent=2) + "\n")
    for c in checks:
        print(f"  [{'pass' if c['ok'] else 'FAIL'}] {c['name']}  ({c['diff']:.3g})")
    print(f"{'PASS' if passed else 'FAIL'}: {args.which} -> {path}")
    return EXIT_OK if passed else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


def _parse_blocks(specstr: str):
    lo, hi = specstr.split(":")
    return float(lo), float(hi)


def cmd_table(args) -> int:
    from .precision import ctx_for

    try:
        if args.which == "t2":
            return _table_t2(args)
        if args.which == "t4":
            return _table_t4(args)
        if args.which in ("t7", "t9"):
            return _table_quadratic(args)
        if args.which == "t10":
            return _table_t10(args)
        if args.which in ("fig1", "fig2"):
            return _table_fig(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    raise AssertionError


def _table_t2(args) -> int:
    from .lvalues import Weight, conjecture_integral, moment_integral_zeta
    from .lvalues.checkpoint import Checkpoint
    from .momentpoly import pk_unitary
    from .precision import ctx_for

    lo, hi = _parse_blocks(args.blocks or "0:50000")
    if args.tier == "desk" and hi > 300000:
        raise BudgetExceeded("desk tier caps t2 at t <= 3e5; use --tier full")
    ctx = ctx_for(30)
    with ctx.workprec():
        p3 = pk_unitary(3, ctx)
    w = Weight("sharp")
    rows = []
    blocklen = 50000.0
    c = lo
    while c < hi:
        d = min(hi, c + blocklen)
        ck = None
        if args.resume:
            ck = Checkpoint(_out_path(args, f"t2_{int(c)}_{int(d)}.ckpt"),
                            "t2", 3, "sharp")
        conj = conjecture_integral(p3, c, d, w, ctx)
        real = moment_integral_zeta(3, c, d, w, checkpoint=ck)
        rows.append((f"[{int(c)};{int(d)}]", f"{conj:.1f}", f"{real['value']:.1f}",
                     f"{real['value']/conj:.6f}"))
        c = d
    _write_rows(args, "table_t2.csv", ["[C;D]", "conjecture", "reality", "ratio"],
                rows, {"table": "t2", "blocks": f"{lo}:{hi}"})
    return EXIT_OK


def _table_t4(args) -> int:
    from .lvalues import Weight, conjecture_integral, moment_integrals_multi
    from .momentpoly import pk_unitary
    from .precision import ctx_for

    T = float(args.T or 10000.0)
    kmax = int(args.k or 4)
    ctx = ctx_for(30)
    w = Weight("exp_decay", T=T)
    ks = list(range(1, kmax + 1))
    reals = moment_integrals_multi(ks, 0.0, None, w)
    rows = []
    for k, real in zip(ks, reals):
        with ctx.workprec():
            poly = pk_unitary(k, ctx, method="jets" if k <= 3 else "fit")
        conj = conjecture_integral(poly, 0.0, None, w, ctx)
        diff = real["value"] - conj
        rows.append((k, f"{real['value']:.7f}", f"{conj:.7f}", f"{diff:.6f}",
                     f"{diff/real['value']:.3e}"))
        print(f"  k={k}: reality={real['value']:.4f} conjecture={conj:.4f} "
              f"difference={diff:.5f}")
    _write_rows(args, "table_t4.csv",
                ["k", "smoothed moment", "conjecture", "difference",
                 "relative difference"],
                rows, {"table": "t4", "T": T})
    return EXIT_OK


def _table_quadratic(args) -> int:
    from .lvalues import quad_moment_sum

    sign = -1 if args.which == "t7" else +1
    if args.tier == "desk":
        X = int(args.X or 10 ** 4)
        weight = "sharp"
        kmax = int(args.k or 4)
        if X > 10 ** 5:
            raise BudgetExceeded("desk tier caps t7/t9 at X <= 1e5; use --tier full")
    else:
        X = int(args.X or 10 ** 6)
        weight = "paper_bump"
        kmax = int(args.k or 6)
        if kmax > 6:
            raise BudgetExceeded(
                "full moment polynomials are computed for k <= 6; the k=7,8 "
                "rows need only the leading coefficients (see verify leading)")
    ck = str(_out_path(args, f"{args.which}.ckpt")) if args.resume else None
    res = quad_moment_sum(kmax, X, sign, weight=weight, checkpoint_path=ck)
    rows = [(k, f"{res[k]['reality']:.1f}", f"{res[k]['conjecture']:.1f}",
             f"{res[k]['ratio']:.6f}") for k in range(1, kmax + 1)]
    _write_rows(args, f"table_{args.which}.csv",
                ["k", "reality", "conjecture", "ratio"], rows,
                {"table": args.which, "X": X, "weight": weight})
    return EXIT_OK


def _table_t10(args) -> int:
    from .lvalues import l11_moment_sum
    from .momentpoly import upsilonk_orthogonal11
    from .precision import ctx_for

    X = int(args.X or (10 ** 6 if args.tier == "desk" else 85 * 10 ** 6))
    if args.tier == "desk" and X > 4 * 10 ** 6:
        raise BudgetExceeded("desk tier caps t10 at X <= 4e6; use --tier full")
    kmax = int(args.k or 4)
    ctxp = ctx_for(12)
    polys = {k: upsilonk_orthogonal11(k, ctx=ctxp,
                                      prime_cap=args.prime_cap or 100000)
             for k in range(1, kmax + 1)}
    ck = str(_out_path(args, "t10.ckpt")) if args.resume else None
    res = l11_moment_sum(kmax, X, polys=polys, checkpoint_path=ck)
    rows = [(k, f"{res[k]['reality']:.1f}", f"{res[k]['conjecture']:.1f}",
             f"{res[k]['ratio']:.5f}") for k in range(1, kmax + 1)]
    _write_rows(args, "table_t10.csv",
                ["k", "left side", "right side", "ratio"], rows,
                {"table": "t10", "X": X})
    return EXIT_OK


def _table_fig(args) -> int:
    """Cumulative sharp-cutoff moment ratios sampled at X, 2X, ... (the
    underlying data of the ratio figures)."""
    import numpy as np

    from .lvalues.discriminants import DiscriminantStream
    from .lvalues.quadratic import central_values_block
    from .momentpoly import qk_symplectic
    from .precision import ctx_for

    sign = -1 if args.which == "fig1" else +1
    X = int(args.X or 10 ** 5)
    step = int(args.step or 10 ** 4)
    k = int(args.k or 1)
    if args.tier == "desk" and X > 10 ** 6:
        raise BudgetExceeded("desk tier caps figures at X <= 1e6; use --tier full")
    ctx = ctx_for(25)
    poly = qk_symplectic(k, parity=1 if sign < 0 else 0, ctx=ctx)
    pcoef = np.array([float(c) for c in poly.coeffs])
    rows = []
    reality = conject = 0.0
    for mark in range(step, X + 1, step):
        for blk in DiscriminantStream(mark - step + 1, mark, sign,
                                      block=step).blocks():
            lv = central_values_block(blk, digits=8)
            logs = np.log(np.abs(blk).astype(float))
            reality += float((lv ** k).sum())
            conject += float(np.polynomial.polynomial.polyval(logs, pcoef).sum())
        rows.append((mark, f"{reality / conject:.6f}"))
    _write_rows(args, f"table_{args.which}_k{k}.csv", ["X", "ratio"], rows,
                {"table": args.which, "k": k, "X": X, "step": step})
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value config file")
    common.add_argument("--digits", type=int, default=None)
    common.add_argument("--tier", choices=("desk", "full"), default="desk")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--prime-cap", type=int, default=None, dest="prime_cap")
    common.add_argument("--zeta-order", type=int, default=None,
                        dest="zeta_correction_order")
    common.add_argument("--out-dir", type=Path,
                        default=Path(os.environ.get("LFMOMENTS_OUTPUT_DIR", ".")),
                        dest="out_dir")
    parser = _Parser(prog="lfmoments", parents=[common],
                     description="moment-polynomial conjectures for L-function "
                                 "families, their direct verification, and "
                                 "random-matrix cross checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", help="moment polynomial coefficients",
                       parents=[common])
    p.add_argument("family", choices=("unitary", "symplectic", "orthogonal11"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--parity", choices=("neg", "pos"), default="neg")
    p.add_argument("--method", choices=("auto", "jets", "fit"), default="auto")
    p.set_defaults(func=cmd_poly)

    v = sub.add_parser("verify", help="property-suite verification",
                       parents=[common])
    v.add_argument("which", choices=("lemmas", "bp", "ak_explicit", "leading",
                                     "rmt", "counts", "hecke"))
    v.add_argument("--samples", type=float, default=None)
    v.add_argument("--X", type=float, default=None)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="reproduce a table/figure dataset as CSV",
                       parents=[common])
    t.add_argument("which", choices=("t2", "t4", "t7", "t9", "t10", "fig1", "fig2"))
    t.add_argument("--blocks", help="t range a:b for t2")
    t.add_argument("--k", type=int, default=None)
    t.add_argument("--T", type=float, default=None)
    t.add_argument("--X", type=float, default=None)
    t.add_argument("--step", type=float, default=None)
    t.add_argument("--resume", action="store_true")
    t.set_defaults(func=cmd_table)

    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BADINPUT
    for key, val in cfg.items():
        if hasattr(args, key) and getattr(args, key) in (None, False):
            cur = getattr(args, key)
            cast = type(cur) if cur is not None else str
            setattr(args, key, cast(val) if cast is not bool else val == "true")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BADINPUT


if __name__ == "__main__":
    sys.exit(main())
