"""Command-line front end: ``lcjdt <subcommand> [--config FILE] [--key value ...]``.

Configuration is a flat ``key = value`` file (``#`` starts a comment); any
key can also be given as a flag, which wins over the file. Lists are
comma-separated or ``lo:hi:n`` for ``n`` evenly spaced values. Outputs are
CSV files in ``out`` plus a plain-text report for ``check``.

Exit status: 0 success, 1 a check exceeded its tolerance, 2 bad
configuration or usage.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import canonical as lc
from .checks import CAVEATS, SUITE, dilation_context, run_suite
from .jd_core import JacobiParams, TruncationError
from .pde_app import HeatProblem, half_line_relative_l2, heat_solve, nonhom_solve, source_23
from .spectral import PROBES, SpatialGridSpec, SpectralGridSpec, default_spatial_spec

__all__ = ["ConfigError", "RunConfig", "KEYS", "load_config", "main"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


def _floats(text):
    text = text.strip()
    if text.count(":") == 2:
        lo, hi, n = text.split(":")
        return tuple(np.linspace(float(lo), float(hi), int(n)).tolist())
    return tuple(float(v) for v in text.split(",") if v.strip())


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError("expected one of " + ", ".join(options))
        return text
    return parse


# key -> (parser, default, help)
KEYS = {
    "alpha": (float, 0.5, "Jacobi parameter alpha (alpha > -1/2, alpha > beta)"),
    "beta": (float, -0.5, "Jacobi parameter beta (beta >= -1/2)"),
    "a": (float, 1.0, "matrix entry a"),
    "b": (float, 1.0, "matrix entry b (nonzero)"),
    "c": (float, 1.0, "matrix entry c (0 selects the plain Jacobi-Dunkl transform)"),
    "d": (float, 2.0, "matrix entry d (ad - bc must be 1)"),
    "half_width": (float, 0.0, "spatial half-width X; 0 = automatic (12 or wider if the probes need it)"),
    "points_per_unit": (int, 64, "spatial Gauss-Legendre nodes per unit length"),
    "panel_order": (int, 16, "Gauss-Legendre order per panel (spatial and spectral)"),
    "mu_max": (float, 25.0, "spectral cutoff in mu = sqrt(eps^2 - rho^2)"),
    "mu_points": (int, 400, "spectral nodes per sign of eps"),
    "calibrate": (_choice("yes", "no"), "yes", "apply the Parseval-calibrated measure constant"),
    "probe": (_choice(*PROBES), "gauss", "built-in test function: " + ", ".join(PROBES)),
    "probe2": (_choice(*PROBES), "shifted-gauss", "second function for convolve"),
    "x": (_floats, (0.0, 0.5, 1.0, 2.0), "x values (kernel, roundtrip output points)"),
    "lambda": (_floats, (), "lambda values; empty = spectral grid nodes (transform) or 0:5:11 (kernel)"),
    "path": (_choice("modulation", "direct"), "modulation", "forward-transform route"),
    "gamma": (float, 1.0, "uncertainty exponent gamma"),
    "m": (float, 1.0, "uncertainty exponent m"),
    "n": (float, 1.0, "uncertainty exponent n"),
    "scale": (float, 1.0, "multiply the probe by this amplitude (uncertainty)"),
    "dilation": (float, 1.0, "uncertainty probe exp(-(s x)^2) with this s"),
    "initial": (_choice(*PROBES), "xgauss", "pde initial data on x > 0 (its odd/even extension must be smooth)"),
    "times": (_floats, (0.0, 0.5, 1.0), "output times for pde (ascending, >= 0)"),
    "source": (_choice("none", "gauss-cos"), "none", "pde source: none or gauss-cos = exp(-x^2) cos t"),
    "steps_per_unit": (int, 2000, "time steps per unit time for the source integral"),
    "extension": (_choice("odd", "even"), "odd", "half-line extension of pde initial data"),
    "groups": (str, "all", "check groups to run, ';'-separated names, or 'all'"),
    "out": (str, "lcjdt-out", "output directory"),
}


@dataclass(frozen=True)
class RunConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    def params(self) -> JacobiParams:
        try:
            return JacobiParams(self["alpha"], self["beta"])
        except ValueError as exc:
            raise ConfigError(f"alpha/beta: {exc}") from exc

    def matrix(self) -> lc.CanonicalMatrix:
        try:
            return lc.CanonicalMatrix(self["a"], self["b"], self["c"], self["d"])
        except ValueError as exc:
            raise ConfigError(f"a/b/c/d: {exc}") from exc

    def context(self) -> lc.LcjdtContext:
        p = self.params()
        M = self.matrix()
        try:
            if self["half_width"] > 0:
                spatial = SpatialGridSpec(self["half_width"], self["points_per_unit"], self["panel_order"])
            else:
                spatial = default_spatial_spec(p, self["points_per_unit"], self["panel_order"])
        except (ValueError, TruncationError) as exc:
            raise ConfigError(f"half_width/points_per_unit/panel_order: {exc}") from exc
        try:
            spectral = SpectralGridSpec(self["mu_max"], self["mu_points"], True, self["panel_order"])
        except ValueError as exc:
            raise ConfigError(f"mu_max/mu_points: {exc}") from exc
        return lc.LcjdtContext(p, M, spatial, spectral, self["calibrate"] == "yes")


def _parse_value(key, text):
    parser = KEYS[key][0]
    try:
        return parser(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {text!r} ({exc})") from exc


def load_config(path=None, overrides=None) -> RunConfig:
    """Defaults, then the file at ``path``, then ``overrides`` (strings)."""
    vals = {k: v[1] for k, v in KEYS.items()}
    if path is not None:
        try:
            lines = Path(path).read_text().splitlines()
        except OSError as exc:
            raise ConfigError(f"config: {exc}") from exc
        for num, line in enumerate(lines, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"config line {num}: expected key = value")
            key, text = (s.strip() for s in line.split("=", 1))
            if key not in KEYS:
                raise ConfigError(f"{key}: unknown key (config line {num})")
            vals[key] = _parse_value(key, text)
    for key, text in (overrides or {}).items():
        if text is not None:
            vals[key] = _parse_value(key, text)
    return RunConfig(vals)


# --------------------------------------------------------------------------
# output

def _fmt(v) -> str:
    return format(float(v), ".17g")


def write_csv(path: Path, header: list[str], columns: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for h in header:
            fh.write(f"# {h}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _context_lines(cfg, ctx):
    M = ctx.matrix
    return [f"alpha={_fmt(cfg['alpha'])} beta={_fmt(cfg['beta'])} rho={_fmt(ctx.rho)}",
            f"matrix (a,b;c,d)=({_fmt(M.a)},{_fmt(M.b)};{_fmt(M.c)},{_fmt(M.d)})",
            f"spatial X={_fmt(ctx.spatial.half_width)} points_per_unit={ctx.spatial.points_per_unit}; "
            f"spectral mu_max={_fmt(ctx.spectral.mu_max)} mu_points={ctx.spectral.mu_points}"]


KERNEL_DOC = ("canonical Jacobi-Dunkl kernel Psi(x,lambda) = exp(-i(a x^2 + d lambda^2)/(2b)) psi_eps(x), "
              "eps = -lambda/c (plain kernel psi_lambda when c = 0)")
FORWARD_DOC = "forward transform L f(lambda) = int f(x) Psi(x,lambda) A(x) dx"
INVERSE_DOC = "inverse transform f(x) = int L f(lambda) conj Psi(x,lambda) dsigma(lambda)"


def cmd_kernel(cfg: RunConfig) -> int:
    ctx = cfg.context()
    xs = np.asarray(cfg["x"])
    lams = np.asarray(cfg["lambda"] or _floats("0:5:11"))
    K = lc.lc_kernel(xs[:, None], lams[None, :], ctx)
    rows = [(x, l, K[i, j].real, K[i, j].imag, abs(K[i, j]))
            for i, x in enumerate(xs) for j, l in enumerate(lams)]
    out = write_csv(Path(cfg["out"]) / "kernel.csv", [KERNEL_DOC] + _context_lines(cfg, ctx),
                    ["x", "lambda", "re", "im", "abs"], rows)
    print(f"wrote {out}")
    return 0


def _forward(cfg, ctx, f):
    if cfg["lambda"]:
        return lc.lc_forward(f, np.asarray(cfg["lambda"]), ctx, path=cfg["path"])
    return lc.lc_forward_grid(f, ctx, path=cfg["path"])


def cmd_transform(cfg: RunConfig) -> int:
    ctx = cfg.context()
    f = ctx.sample(PROBES[cfg["probe"]])
    F = _forward(cfg, ctx, f)
    rows = [(l, e, v.real, v.imag, abs(v)) for l, e, v in zip(F.lambdas, F.epsilons, F.values)]
    head = [FORWARD_DOC, f"probe={cfg['probe']} path={cfg['path']}"] + _context_lines(cfg, ctx)
    out = write_csv(Path(cfg["out"]) / "transform.csv", head, ["lambda", "eps", "re", "im", "abs"], rows)
    print(f"wrote {out}")
    return 0


def cmd_roundtrip(cfg: RunConfig) -> int:
    ctx = cfg.context()
    fn = PROBES[cfg["probe"]]
    f = ctx.sample(fn)
    F = lc.lc_forward_grid(f, ctx, path=cfg["path"])
    err = lc.relative_l2(lc.lc_inverse(F, f.grid, ctx), f, ctx.params)
    xs = np.asarray(cfg["x"])
    back = lc.lc_inverse(F, xs, ctx).values
    exact = np.asarray(fn(xs), complex) * np.ones_like(xs)
    rows = [(x, e.real, b.real, b.imag, abs(b - e)) for x, e, b in zip(xs, exact, back)]
    head = [INVERSE_DOC + " applied to the forward transform", f"probe={cfg['probe']}",
            f"relative L2(A dx) round-trip error on the quadrature grid = {_fmt(err)}"] + _context_lines(cfg, ctx)
    out = write_csv(Path(cfg["out"]) / "roundtrip.csv", head, ["x", "f", "re", "im", "abs_err"], rows)
    print(f"wrote {out}")
    print(f"relative L2 error: {err:.3e}")
    return 0


def cmd_convolve(cfg: RunConfig) -> int:
    ctx = cfg.context()
    f = ctx.sample(PROBES[cfg["probe"]])
    r = ctx.sample(PROBES[cfg["probe2"]])
    conv = lc.convolve_spectral(f, r, ctx)
    rep = lc.convolution_report(f, r, ctx)
    head = ["convolution f * r = L^-1(L f . L r) on the spatial quadrature grid",
            f"f={cfg['probe']} r={cfg['probe2']}"] + _context_lines(cfg, ctx)
    rows = [(x, v.real, v.imag) for x, v in zip(conv.grid, conv.values)]
    out = write_csv(Path(cfg["out"]) / "convolve.csv", head, ["x", "re", "im"], rows)
    print(f"wrote {out}")
    print(rep.text())
    return 0 if rep.passed else 1


def cmd_pde(cfg: RunConfig) -> int:
    ctx = cfg.context()
    h = PROBES[cfg["initial"]]
    src = source_23 if cfg["source"] == "gauss-cos" else None
    try:
        prob = HeatProblem(h, ctx, cfg["times"], src, cfg["extension"], steps_per_unit=cfg["steps_per_unit"])
    except ValueError as exc:
        raise ConfigError(f"times/extension/steps_per_unit: {exc}") from exc
    sol = nonhom_solve(prob) if src is not None else heat_solve(prob)
    base = Path(cfg["out"])
    ctx_lines = _context_lines(cfg, ctx)
    x0 = sol[0].grid
    h0 = np.asarray(h(x0), complex) * np.ones_like(x0)
    write_csv(base / "pde_initial.csv", [f"initial data h(x) = {cfg['initial']} on x > 0"] + ctx_lines,
              ["x", "re", "im"], [(x, v.real, v.imag) for x, v in zip(x0, h0)])
    doc = ("solution of u_t = P u on x > 0 by spectral evolution Z(t) = exp(-i eps t) Z(0)"
           + (" plus the Duhamel integral of the transformed source" if src else ""))
    rows = [(t, x, v.real, v.imag) for t, s in zip(sol.times, sol) for x, v in zip(s.grid, s.values)]
    out = write_csv(base / "pde.csv", [doc, f"h={cfg['initial']} source={cfg['source']} "
                                      f"extension={cfg['extension']}"] + ctx_lines + sol.notes,
                    ["t", "x", "re", "im"], rows)
    print(f"wrote {out}")
    if sol.times[0] == 0.0:
        print(f"t=0 recovery (relative L2): {half_line_relative_l2(sol[0], h, ctx):.3e}")
    return 0


def cmd_uncertainty(cfg: RunConfig) -> int:
    base = cfg.context()
    ctx, fn = dilation_context(base, cfg["dilation"])
    f = ctx.sample(fn)
    f = f.with_values(cfg["scale"] * f.values)
    r = lc.uncertainty_ratio(f, cfg["gamma"], cfg["m"], cfg["n"], ctx)
    head = ["uncertainty ratio || |x|^(gamma m) f ||^(n/(m+n)) || |lambda|^n L f ||^(m/(m+n)) / || f ||",
            f"f(x) = {_fmt(cfg['scale'])} exp(-({_fmt(cfg['dilation'])} x)^2)"] + _context_lines(cfg, ctx)
    out = write_csv(Path(cfg["out"]) / "uncertainty.csv", head, ["gamma", "m", "n", "scale", "dilation", "ratio"],
                    [(cfg["gamma"], cfg["m"], cfg["n"], cfg["scale"], cfg["dilation"], r)])
    print(f"wrote {out}")
    print(f"ratio: {r:.17g}")
    return 0


def cmd_check(cfg: RunConfig) -> int:
    ctx = cfg.context()
    names = [name for name, _ in SUITE]
    groups = None
    if cfg["groups"] != "all":
        groups = [g.strip() for g in cfg["groups"].split(";") if g.strip()]
        bad = [g for g in groups if g not in names]
        if bad:
            raise ConfigError(f"groups: unknown group(s) {bad}; choose from {names}")
    lines = ["lcjdt verification report"] + _context_lines(cfg, ctx) + [""]

    def echo(name, rep):
        block = [f"== {name}", rep.text()]
        print("\n".join(block), flush=True)
        lines.extend(block)

    results = run_suite(ctx, groups, echo)
    failed = [e.name for rep in results.values() for e in rep if not e.passed]
    tail = ["", "Caveats:"] + [f"- {c}" for c in CAVEATS] + [
        "", f"overall: {'FAIL (' + ', '.join(failed) + ')' if failed else 'PASS'}"]
    print("\n".join(tail))
    out = Path(cfg["out"]) / "report.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines + tail) + "\n")
    print(f"wrote {out}")
    return 1 if failed else 0


COMMANDS = {
    "kernel": (cmd_kernel, "tabulate the canonical kernel on x and lambda lists (kernel.csv)"),
    "transform": (cmd_transform, "forward transform of a probe (transform.csv)"),
    "roundtrip": (cmd_roundtrip, "forward then inverse; prints the relative L2 error (roundtrip.csv)"),
    "check": (cmd_check, "run the verification suite (report.txt); exit 1 on any failure"),
    "convolve": (cmd_convolve, "spectral convolution of two probes (convolve.csv)"),
    "pde": (cmd_pde, "half-line evolution problem with optional source (pde.csv, pde_initial.csv)"),
    "uncertainty": (cmd_uncertainty, "uncertainty ratio of a dilated Gaussian (uncertainty.csv)"),
}


def build_parser() -> argparse.ArgumentParser:
    keys_help = "\n".join(f"  {k:16s} {v[2]} (default: {v[1] if not isinstance(v[1], tuple) else ','.join(map(str, v[1])) or 'empty'})"
                          for k, v in KEYS.items())
    parser = argparse.ArgumentParser(
        prog="lcjdt", formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Linear canonical Jacobi-Dunkl transform toolkit.",
        epilog="configuration keys (config file 'key = value' or --key VALUE):\n" + keys_help
               + "\n\nexit status: 0 ok, 1 check failure, 2 configuration error")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, text) in COMMANDS.items():
        sp = sub.add_parser(name, help=text, description=text, formatter_class=argparse.RawDescriptionHelpFormatter,
                            epilog="configuration keys:\n" + keys_help)
        sp.add_argument("--config", help="flat key = value configuration file")
        for key, (_, _, khelp) in KEYS.items():
            sp.add_argument(f"--{key}", dest=f"key_{key}", metavar="VALUE", help=khelp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {k: getattr(args, f"key_{k}") for k in KEYS}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command][0](cfg)
    except ConfigError as exc:
        print(f"lcjdt: configuration error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, OverflowError) as exc:
        print(f"lcjdt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
