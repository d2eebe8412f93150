"""Command-line surface: parameter sweeps, cross-route validation
suites, and machine-readable CSV/JSON reports.

Every run writes its full configuration into the report header (first
line for CSV, `config` field for JSON) so the run is reproducible from
its own output.  Exit codes: 0 all rows pass, 1 numerical failure in
at least one row, 2 usage error.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import sys

import click
import mpmath
from mpmath import mpf

from . import __version__, asymptotics, finite_n, fredholm, mc, painleve
from .precision import PrecisionCtx
from .specfun import log_barnes_g

__all__ = ["main", "parse_grid", "constant_extract"]


def parse_grid(spec: str):
    """Parse a `lo:hi:count[:log]` grid specification into mpf values."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise click.BadParameter(
            f"grid must be lo:hi:count[:log], got {spec!r}")
    try:
        with mpmath.workprec(128):
            lo, hi, count = mpf(parts[0]), mpf(parts[1]), int(parts[2])
    except (ValueError, TypeError):
        raise click.BadParameter(f"non-numeric grid bounds in {spec!r}")
    spacing = parts[3] if len(parts) == 4 else "linear"
    if spacing not in ("linear", "log"):
        raise click.BadParameter(f"grid spacing must be linear or log, got {spacing!r}")
    if count < 1:
        raise click.BadParameter("grid count must be >= 1")
    if count == 1:
        return [lo]
    if not lo < hi:
        raise click.BadParameter(f"grid requires lo < hi, got {spec!r}")
    with mpmath.workprec(128):
        if spacing == "log":
            if lo <= 0:
                raise click.BadParameter("log spacing requires lo > 0")
            llo, lhi = mpmath.log(lo), mpmath.log(hi)
            return [mpmath.e ** (llo + (lhi - llo) * i / (count - 1))
                    for i in range(count)]
        return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _digits(bits: int) -> int:
    return min(30, int(bits / 3.3))


def _fmt(x, digits: int):
    if x is None:
        return ""
    if isinstance(x, (bool, int, str)):
        return x
    # convert under ample precision so the report never re-rounds a
    # high-precision value through the ambient (53-bit) context
    with mpmath.workprec(max(128, int(digits * 3.33) + 16)):
        return mpmath.nstr(mpf(x), digits, strip_zeros=False)


def _write_report(out, fmt: str, config: dict, columns, rows, digits: int):
    """Write rows to `out` ('-' for stdout) in csv or json format."""
    cfg_json = json.dumps(config, sort_keys=True, separators=(",", ":"))
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# hardedge v{__version__} config={cfg_json}\n")
        buf.write(f"# timestamp={stamp}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c), digits) for c in columns])
        text = buf.getvalue()
    else:
        payload = {
            "version": __version__,
            "config": config,
            "timestamp": stamp,
            "rows": [{c: _fmt(r.get(c), digits) for c in columns} for r in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _finish(out, fmt, config, columns, rows, digits):
    _write_report(out, fmt, config, columns, rows, digits)
    failed = sum(1 for r in rows if r.get("status") == "fail")
    sys.exit(1 if failed else 0)


_common = [
    click.option("--bits", type=int, default=None,
                 help="Working precision in bits (>= 53); default scales with n."),
    click.option("--out", default="-", show_default=True,
                 help="Report path, or - for stdout."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                 default="csv", show_default=True),
]


def _apply(options):
    def deco(f):
        for opt in reversed(options):
            f = opt(f)
        return f
    return deco


def _resolve_bits(bits, n):
    if bits is not None:
        if bits < 53:
            raise click.BadParameter("--bits must be >= 53")
        return bits
    return finite_n.default_bits(n) if n else 256


@click.group()
@click.version_option(__version__)
def main():
    """Smallest-eigenvalue gap probabilities of the unitary Jacobi
    ensemble by four cross-validating routes."""


@main.command()
@click.option("--alpha", type=str, required=True)
@click.option("--beta", type=str, required=True)
@click.option("--n", type=int, required=True)
@click.option("--t", "t_grid", type=str, required=True,
              help="t grid lo:hi:count[:log] in (0,1).")
@_apply(_common)
def finite(alpha, beta, n, t_grid, bits, out, fmt):
    """Exact finite-n route: log P(t) and H_n(t) over a t grid."""
    bits = _resolve_bits(bits, n)
    ctx = PrecisionCtx(bits)
    params = finite_n.EnsembleParams(mpf(alpha), mpf(beta), n)
    grid = parse_grid(t_grid)
    config = {"subcommand": "finite", "alpha": alpha, "beta": beta, "n": n,
              "t": t_grid, "bits": bits, "format": fmt}
    rows = []
    for t in grid:
        row = {"t": t, "alpha": alpha, "beta": beta, "n": n}
        try:
            row["log_p"] = finite_n.log_prob_smallest(t, params, ctx)
            row["h_n"] = finite_n.hn_exact(t, params, ctx)
            row["status"] = "pass"
        except (ArithmeticError, ValueError) as exc:
            row["status"] = "fail"
            row["error"] = str(exc)
        rows.append(row)
    _finish(out, fmt, config, ["t", "alpha", "beta", "n", "log_p", "h_n",
                               "status", "error"], rows, _digits(bits))


@main.command("painleve")
@click.option("--alpha", type=str, required=True)
@click.option("--beta", type=str, required=True)
@click.option("--n", type=int, required=True)
@click.option("--t", "t_grid", type=str, required=True)
@click.option("--ode-tol", type=str, default=None,
              help="Per-step tolerance; default scales with 2n+1+alpha+beta.")
@_apply(_common)
def painleve_cmd(alpha, beta, n, t_grid, ode_tol, bits, out, fmt):
    """Painlevé route: W_n, W_n' and H_n along a t grid."""
    params = finite_n.EnsembleParams(mpf(alpha), mpf(beta), n)
    opts = painleve.IntegratorOpts(
        tol=mpf(ode_tol) if ode_tol is not None else None)
    ctx = PrecisionCtx(bits) if bits is not None else None
    grid = sorted(parse_grid(t_grid))
    config = {"subcommand": "painleve", "alpha": alpha, "beta": beta, "n": n,
              "t": t_grid, "ode_tol": ode_tol, "bits": bits, "format": fmt}
    rows = []
    try:
        traj = painleve.integrate_w(params, grid, opts=opts, ctx=ctx)
        rbits = traj.ctx.bits
        for t, w, wp in zip(traj.grid, traj.w, traj.wp):
            rows.append({"t": t, "w": w, "wp": wp,
                         "h_n": painleve.hn_from_w(t, w, wp, params, traj.ctx),
                         "steps": traj.steps, "status": "pass"})
    except (ArithmeticError, ValueError) as exc:
        rbits = bits or 256
        rows.append({"t": grid[0], "status": "fail", "error": str(exc)})
    _finish(out, fmt, config, ["t", "w", "wp", "h_n", "steps",
                               "status", "error"], rows, _digits(rbits))


@main.command("fredholm")
@click.option("--alpha", type=str, required=True)
@click.option("--s", "s_grid", type=str, required=True,
              help="s grid lo:hi:count[:log], s > 0.")
@click.option("--m", type=int, default=None,
              help="Quadrature points; default ceil(10 + 2.2 sqrt(s)).")
@click.option("--check-doubling", is_flag=True,
              help="Recompute at 2m and report the shift (pass iff <= 1e-10).")
@_apply(_common)
def fredholm_cmd(alpha, s_grid, m, check_doubling, bits, out, fmt):
    """Bessel-kernel Fredholm determinant log det(I-K) on (0, s)."""
    bits = bits or 256
    ctx = PrecisionCtx(bits)
    a = mpf(alpha)
    config = {"subcommand": "fredholm", "alpha": alpha, "s": s_grid, "m": m,
              "check_doubling": check_doubling, "bits": bits, "format": fmt}
    rows = []
    for s in parse_grid(s_grid):
        row = {"s": s, "alpha": alpha}
        try:
            mm = m if m is not None else fredholm.default_points(s)
            row["m"] = mm
            row["logdet"] = fredholm.log_fredholm_det(s, a, mm, ctx)
            row["status"] = "pass"
            if check_doubling:
                shift = abs(fredholm.log_fredholm_det(s, a, 2 * mm, ctx)
                            - row["logdet"])
                row["doubling_shift"] = shift
                if shift > mpf("1e-10"):
                    row["status"] = "fail"
        except (ArithmeticError, ValueError) as exc:
            row["status"] = "fail"
            row["error"] = str(exc)
        rows.append(row)
    _finish(out, fmt, config, ["s", "alpha", "m", "logdet", "doubling_shift",
                               "status", "error"], rows, _digits(bits))


@main.command("asymptotic")
@click.option("--alpha", type=str, default=None)
@click.option("--beta", type=str, default=None)
@click.option("--n", type=int, default=None)
@click.option("--t", "t_grid", type=str, default=None,
              help="t grid: large-n log P expansion (needs --alpha --beta --n).")
@click.option("--s", "s_grid", type=str, default=None,
              help="s grid: large-s log det expansion (needs --alpha).")
@click.option("--b", "b_grid", type=str, default=None,
              help="b grid: symmetric-interval gap-constant expansion.")
@_apply(_common)
def asymptotic(alpha, beta, n, t_grid, s_grid, b_grid, bits, out, fmt):
    """Truncated expansions with explicit error budgets.

    Exactly one of --t, --s, --b selects the expansion family.
    """
    chosen = [g for g in (t_grid, s_grid, b_grid) if g is not None]
    if len(chosen) != 1:
        raise click.UsageError("exactly one of --t, --s, --b is required")
    bits = bits or 256
    ctx = PrecisionCtx(bits)
    config = {"subcommand": "asymptotic", "alpha": alpha, "beta": beta,
              "n": n, "t": t_grid, "s": s_grid, "b": b_grid,
              "bits": bits, "format": fmt}
    rows = []
    if t_grid is not None:
        if alpha is None or beta is None or n is None:
            raise click.UsageError("--t requires --alpha, --beta and --n")
        params = finite_n.EnsembleParams(mpf(alpha), mpf(beta), n)
        for t in parse_grid(t_grid):
            r = asymptotics.logp_large_n(t, params, ctx)
            rows.append({"x": t, "family": "logp_large_n", "value": r.value,
                         "budget": r.budget, "order": r.order, "status": "pass"})
    elif s_grid is not None:
        if alpha is None:
            raise click.UsageError("--s requires --alpha")
        for s in parse_grid(s_grid):
            r = asymptotics.logdet_series(s, mpf(alpha), ctx)
            rows.append({"x": s, "family": "logdet_series", "value": r.value,
                         "budget": r.budget, "order": r.order, "status": "pass"})
    else:
        for b in parse_grid(b_grid):
            r = asymptotics.sym_gap_series(b, ctx)
            rows.append({"x": b, "family": "sym_gap_series", "value": r.value,
                         "budget": r.budget, "order": r.order, "status": "pass"})
    _finish(out, fmt, config, ["x", "family", "value", "budget", "order",
                               "status"], rows, _digits(bits))


@main.command("mc")
@click.option("--alpha", type=int, required=True)
@click.option("--beta", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--t", "t_grid", type=str, required=True)
@click.option("--samples", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_apply(_common)
def mc_cmd(alpha, beta, n, t_grid, samples, seed, bits, out, fmt):
    """Monte Carlo survival estimates vs the exact finite-n values.

    Integer alpha and beta only (Wishart-quotient construction); each
    row passes iff |p_hat - exact| <= 4 se.
    """
    bits = _resolve_bits(bits, n)
    ctx = PrecisionCtx(bits)
    params = finite_n.EnsembleParams(mpf(alpha), mpf(beta), n)
    config = {"subcommand": "mc", "alpha": alpha, "beta": beta, "n": n,
              "t": t_grid, "samples": samples, "seed": seed,
              "bits": bits, "format": fmt}
    rows = []
    for t in parse_grid(t_grid):
        row = {"t": t, "alpha": alpha, "beta": beta, "n": n,
               "samples": samples, "seed": seed}
        try:
            p_hat, se = mc.survival_estimate(samples, float(t), n,
                                             alpha, beta, seed)
            exact = mpmath.e ** finite_n.log_prob_smallest(t, params, ctx)
            row.update(p_hat=p_hat, se=se, exact=exact,
                       discrepancy=abs(mpf(p_hat) - exact))
            row["status"] = "pass" if row["discrepancy"] <= 4 * mpf(se) else "fail"
        except (ArithmeticError, ValueError) as exc:
            row["status"] = "fail"
            row["error"] = str(exc)
        rows.append(row)
    _finish(out, fmt, config,
            ["t", "alpha", "beta", "n", "samples", "seed", "p_hat", "se",
             "exact", "discrepancy", "status", "error"], rows, _digits(bits))


def constant_extract(alpha, s_lo, s_hi, points: int, m: int | None = None,
                     ctx: PrecisionCtx = PrecisionCtx(192)):
    """Measure the constant term of the large-s log det expansion.

    Over a log-spaced s grid, averages log_fredholm_det(s, alpha) minus
    every non-constant printed term of the large-s series; compares to
    the closed form log G(alpha+1) - (alpha/2) log 2pi.  Returns
    (c_hat, c_exact, |c_hat - c_exact|).
    """
    with ctx.workprec():
        a = mpf(alpha)
        if mpf(s_lo) < 100:
            raise ValueError(f"constant_extract requires s_lo >= 100, got {s_lo}")
        c_exact = log_barnes_g(a + 1, ctx) - a / 2 * mpmath.log(2 * mpmath.pi)
        grid = parse_grid(f"{s_lo}:{s_hi}:{points}:log") if points > 1 else [mpf(s_lo)]
        acc = mpf(0)
        for s in grid:
            nonconst = asymptotics.logdet_series(s, a, ctx).value - c_exact
            acc += fredholm.log_fredholm_det(s, a, m, ctx) - nonconst
        c_hat = acc / len(grid)
        return c_hat, c_exact, abs(c_hat - c_exact)


@main.command("constant")
@click.option("--alpha", type=str, required=True)
@click.option("--s", "s_range", type=str, default="400:900:5:log",
              show_default=True, help="s grid for the extraction.")
@click.option("--m", type=int, default=None)
@click.option("--tol", type=str, default="1e-3", show_default=True)
@_apply(_common)
def constant_cmd(alpha, s_range, m, tol, bits, out, fmt):
    """Extract the universal constant log G(a+1) - (a/2) log 2pi."""
    bits = bits or 192
    ctx = PrecisionCtx(bits)
    parts = s_range.split(":")
    if len(parts) < 3:
        raise click.UsageError("--s must be lo:hi:count[:log]")
    config = {"subcommand": "constant", "alpha": alpha, "s": s_range,
              "m": m, "tol": tol, "bits": bits, "format": fmt}
    row = {"alpha": alpha, "s": s_range}
    try:
        c_hat, c_exact, diff = constant_extract(
            alpha, parts[0], parts[1], int(parts[2]), m, ctx)
        row.update(c_hat=c_hat, c_exact=c_exact, discrepancy=diff)
        row["status"] = "pass" if diff <= mpf(tol) else "fail"
    except (ArithmeticError, ValueError) as exc:
        row["status"] = "fail"
        row["error"] = str(exc)
    _finish(out, fmt, config, ["alpha", "s", "c_hat", "c_exact",
                               "discrepancy", "status", "error"],
            [row], _digits(bits))


@main.command("validate")
@click.option("--suite", type=click.Choice(["painleve-vs-hankel"]),
              required=True)
@click.option("--alpha", type=str, required=True)
@click.option("--beta", type=str, required=True)
@click.option("--n", type=int, required=True)
@click.option("--t", "t_grid", type=str, default="0.05:0.9:18",
              show_default=True)
@click.option("--tol", type=str, default="1e-6", show_default=True,
              help="Relative H_n discrepancy bound per grid point.")
@_apply(_common)
def validate(suite, alpha, beta, n, t_grid, tol, bits, out, fmt):
    """Cross-route validation suites (exit 0 iff every row passes)."""
    params = finite_n.EnsembleParams(mpf(alpha), mpf(beta), n)
    hbits = _resolve_bits(bits, n)
    hctx = PrecisionCtx(hbits)
    tol = mpf(tol)
    grid = sorted(parse_grid(t_grid))
    config = {"subcommand": "validate", "suite": suite, "alpha": alpha,
              "beta": beta, "n": n, "t": t_grid, "tol": str(tol),
              "bits": bits, "format": fmt}
    rows = []
    try:
        traj = painleve.integrate_w(params, grid,
                                    ctx=PrecisionCtx(bits) if bits else None)
        for t, w, wp in zip(traj.grid, traj.w, traj.wp):
            h_ode = painleve.hn_from_w(t, w, wp, params, traj.ctx)
            h_exact = finite_n.hn_exact(t, params, hctx)
            rel = abs(h_ode - h_exact) / abs(h_exact)
            rows.append({"t": t, "h_n_painleve": h_ode, "h_n_hankel": h_exact,
                         "discrepancy": h_ode - h_exact, "rel": rel,
                         "status": "pass" if rel <= tol else "fail"})
    except (ArithmeticError, ValueError) as exc:
        rows.append({"t": grid[0], "status": "fail", "error": str(exc)})
    _finish(out, fmt, config,
            ["t", "h_n_painleve", "h_n_hankel", "discrepancy", "rel",
             "status", "error"], rows, _digits(hbits))


if __name__ == "__main__":
    main()
