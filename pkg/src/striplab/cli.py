"""Command-line front end.

Commands: eval, curves, fov, zeros, convolve-demo, verify.  A JSON config
file (``--config`` or the STRIPLAB_CONFIG environment variable) supplies
defaults; explicit flags override it.  Exit codes: 0 success, 2 usage or
validation error, 3 numerical failure, 4 verification failures present.

All numeric CSV output uses 17 significant digits, '.' decimals, ','
separators and LF line endings, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import curves, gfunc, intops, opconv, quadrule, verify, zerofind
from .errors import StripLabError
from .quadrule import QuadConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY_FAILED = 4


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row))
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


class ConfigError(ValueError):
    pass


_ALLOWED = {
    "quad": {"target_rel_tol", "max_level", "fourier_truncation_L",
             "delta_limit"},
    "operator": {"scheme", "beta", "n"},
    "curves": {"s_samples", "sigma_grid"},
    "zeros": {"t_max", "sigma_margin", "tile_dt"},
    "output": {"format", "path"},
}


@dataclass
class RunConfig:
    quad: QuadConfig = field(default_factory=QuadConfig)
    operator: dict = field(default_factory=lambda: {
        "scheme": "trapezoid", "beta": 1.0, "n": 128})
    curves: dict = field(default_factory=lambda: {
        "s_samples": 101, "sigma_grid": [round(0.1 * k, 1) for k in range(1, 10)]})
    zeros: dict = field(default_factory=lambda: {
        "t_max": 30.0, "sigma_margin": 0.05, "tile_dt": 5.0})
    output: dict = field(default_factory=lambda: {"format": "json", "path": "-"})

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config document must be a JSON object")
        unknown = set(data) - set(_ALLOWED)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        cfg = cls()
        for section, values in data.items():
            bad = set(values) - _ALLOWED[section]
            if bad:
                raise ConfigError(
                    f"unknown keys in [{section}]: {sorted(bad)}")
            if section == "quad":
                cfg.quad = QuadConfig(**values)
            else:
                getattr(cfg, section).update(values)
        return cfg


def _load_config(args) -> RunConfig:
    path = args.config or os.environ.get("STRIPLAB_CONFIG")
    if path:
        return RunConfig.from_file(path)
    return RunConfig()


def _parse_complex(text: str) -> complex:
    cleaned = text.strip().replace(" ", "")
    try:
        return complex(cleaned.replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def cmd_eval(args) -> int:
    rc = _load_config(args)
    z = _parse_complex(args.z)
    if z.real <= 0:
        raise ConfigError("need Re z > 0")
    value, err = gfunc.g_integral_err(z, args.method, rc.quad)
    print(json.dumps({
        "z": [z.real, z.imag],
        "G": [value.real, value.imag],
        "method": args.method,
        "err": err,
    }))
    return EXIT_OK


def cmd_curves(args) -> int:
    rc = _load_config(args)
    sigma = args.sigma
    if not 0.0 < sigma < 1.0:
        raise ConfigError("sigma must lie in the open strip (0, 1)")
    samples = args.samples or rc.curves["s_samples"]
    s_grid = np.linspace(0.0, 1.0, samples)
    report = curves.curve_eval(sigma, s_grid, rc.quad)
    header = ["s", "re_L", "im_L", "re_C", "im_C", "re_C_sigma",
              "im_C_sigma", "re_C_prime", "im_C_prime",
              "re_C_prime_sigma", "im_C_prime_sigma",
              "im_C_sigma_poisson", "im_C_prime_sigma_poisson"]
    rows = [[smp.s, smp.L.real, smp.L.imag, smp.C.real, smp.C.imag,
             smp.C_sigma.real, smp.C_sigma.imag, smp.C_prime.real,
             smp.C_prime.imag, smp.C_prime_sigma.real,
             smp.C_prime_sigma.imag, smp.im_C_sigma_poisson,
             smp.im_C_prime_sigma_poisson] for smp in report.samples]
    _write_csv(args.out, header, rows)
    print(json.dumps({"sigma": sigma, "sign_summary": report.sign_summary,
                      "min_abs_C": report.min_abs_C,
                      "argmin_C": report.argmin_C,
                      "min_abs_C_prime": report.min_abs_C_prime,
                      "argmin_C_prime": report.argmin_C_prime}),
          file=sys.stderr)
    return EXIT_OK


def cmd_fov(args) -> int:
    rc = _load_config(args)
    beta = args.beta or rc.operator["beta"]
    n = args.n or rc.operator["n"]
    if args.angles < 8:
        raise ConfigError("need at least 8 angles")
    op = intops.build_J("Jplus", rc.operator["scheme"], beta, n)
    boundary = intops.field_of_values(op, args.angles)
    header = ["angle", "re_point", "im_point", "support_value"]
    rows = [[float(a), p.real, p.imag, float(v)]
            for a, p, v in zip(boundary.angles, boundary.support_points,
                               boundary.support_values)]
    _write_csv(args.out, header, rows)
    print(json.dumps({"min_re": boundary.min_real(),
                      "max_re": boundary.max_real()}), file=sys.stderr)
    return EXIT_OK


def cmd_zeros(args) -> int:
    rc = _load_config(args)
    t_max = args.t_max or rc.zeros["t_max"]
    summary = zerofind.theorem510_suite(
        t_max, rc.quad, sigma_margin=rc.zeros["sigma_margin"],
        tile_dt=rc.zeros["tile_dt"], with_curves=False)
    records = summary["records"]
    fmt = args.format or rc.output["format"]
    if fmt == "csv":
        header = ["sigma", "t", "abs_G", "re_G_sigma", "im_G_sigma",
                  "multiplicity", "on_line", "zeta_residual"]
        rows = [[r.z.sigma, r.z.t, r.abs_G, r.G_deriv.real, r.G_deriv.imag,
                 r.multiplicity_estimate, int(r.on_critical_line),
                 r.zeta_residual] for r in records]
        _write_csv(args.out, header, rows)
    else:
        doc = {
            "t_max": t_max,
            "total_winding": summary["total_winding"],
            "zeros": [{
                "sigma": r.z.sigma, "t": r.z.t, "abs_G": r.abs_G,
                "G_sigma": [r.G_deriv.real, r.G_deriv.imag],
                "deriv_scaled": r.deriv_scaled,
                "multiplicity": r.multiplicity_estimate,
                "on_line": r.on_critical_line,
                "zeta_residual": r.zeta_residual,
            } for r in records],
            "discrepancies": summary["discrepancies"],
        }
        text = json.dumps(doc, indent=2) + "\n"
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    if summary["discrepancies"]:
        print(json.dumps({"discrepancies": summary["discrepancies"]}),
              file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_convolve_demo(args) -> int:
    rc = _load_config(args)
    jp = intops.build_J("Jplus", "sinc", rc.operator["beta"], 64)
    plan = opconv.make_plan(jp)
    pairs = opconv.builtin_pairs()
    inputs = {"one": lambda y: np.ones_like(y), "t": lambda y: y,
              "sin": np.sin}
    w = jp.weights
    worst = 0.0
    for kname in ("exp", "exp2", "texp", "gauss"):
        for gname, gfun in inputs.items():
            qd = opconv.convolve_direct(pairs[kname], gfun, jp, rc.quad)
            qo = opconv.convolve_operator(pairs[kname], gfun, plan)
            r = float(np.sqrt(np.sum(w * np.abs(qo - qd) ** 2)
                              / np.sum(w * np.abs(qd) ** 2)))
            worst = max(worst, r)
            print(f"{kname:6s} * {gname:4s}  rel_l2 {_fmt(r)}")
    print(f"worst {_fmt(worst)}")
    return EXIT_OK if worst < 1e-3 else EXIT_VERIFY_FAILED


def cmd_verify(args) -> int:
    rc = _load_config(args)
    try:
        results, timings = verify.run_suite(args.suite, rc.quad)
    except KeyError as exc:
        raise ConfigError(str(exc)) from None
    doc = verify.report_document(args.suite, results)
    if args.report in (None, "-"):
        sys.stdout.write(doc)
    else:
        with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
    for r in results:
        print(f"{r.id}: {r.status} ({timings.get(r.id, 0.0):.0f} ms)",
              file=sys.stderr)
    if args.timings:
        with open(args.timings, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(timings, fh, indent=2)
            fh.write("\n")
    n_fail = sum(1 for r in results if r.status == "fail")
    return EXIT_VERIFY_FAILED if n_fail else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="striplab",
        description="numerical laboratory for the critical-strip integral, "
                    "integration operators, and zero finding")
    p.add_argument("--config", help="JSON config file "
                   "(default: $STRIPLAB_CONFIG)")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate the strip integral at z")
    pe.add_argument("--z", required=True, help="complex point, e.g. 0.5+14.1i")
    pe.add_argument("--method", choices=("direct", "fourier"),
                    default="fourier")
    pe.set_defaults(func=cmd_eval)

    pc = sub.add_parser("curves", help="sample the comparison curves")
    pc.add_argument("--sigma", type=float, required=True)
    pc.add_argument("--samples", type=int, default=None)
    pc.add_argument("--out", default="-")
    pc.set_defaults(func=cmd_curves)

    pf = sub.add_parser("fov", help="trace a numerical-range boundary")
    pf.add_argument("--beta", type=float, default=None)
    pf.add_argument("--n", type=int, default=None)
    pf.add_argument("--angles", type=int, default=360)
    pf.add_argument("--out", default="-")
    pf.set_defaults(func=cmd_fov)

    pz = sub.add_parser("zeros", help="locate zeros up to a height")
    pz.add_argument("--t-max", dest="t_max", type=float, default=None)
    pz.add_argument("--format", choices=("json", "csv"), default=None)
    pz.add_argument("--out", default="-")
    pz.set_defaults(func=cmd_zeros)

    pd = sub.add_parser("convolve-demo",
                        help="path-equivalence table for the stock kernels")
    pd.set_defaults(func=cmd_convolve_demo)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", default="all",
                    help=f"one of {', '.join(verify.SUITE_NAMES)}")
    pv.add_argument("--report", default="-")
    pv.add_argument("--timings", default=None,
                    help="optional JSON file for per-check timings")
    pv.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StripLabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
