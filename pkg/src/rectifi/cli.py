"""Command-line interface.

Subcommands: ``rates`` (all model rates for a parameter set), ``evolve``
(population time trace), ``fisher`` (I(theta) time series), ``steady``
(stationary populations and optional steady-state I(theta)), ``sweep``
(run a config-file sweep), ``figure`` (run a bundled scenario preset).

Data goes to stdout or ``--out``; diagnostics to stderr. Exit codes:
0 success, 1 domain error, 2 usage error. Times on this interface are
physical (1/eV); figure presets additionally print their documented axis.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import fisher as fi
from . import multilevel as ml
from . import output
from . import sweep as sw
from . import tls
from .config import load_config
from .distributions import Reservoir
from .errors import RectifiError
from .presets import PRESETS, get_preset

_TLS_DEFAULTS = dict(eps_d=-5.4, eps_a=-3.8, omega0=0.091, gamma_hyb=0.7,
                     mu_l=1.0, mu_r=-1.0, t_l=2.0, t_r=1.0)


def _add_param_flags(parser, multilevel_extras):
    group = parser.add_argument_group("junction parameters (eV)")
    group.add_argument("--eps-d", type=float, default=_TLS_DEFAULTS["eps_d"],
                       help="donor energy (default %(default)s)")
    group.add_argument("--eps-a", type=float, default=_TLS_DEFAULTS["eps_a"],
                       help="acceptor energy (default %(default)s)")
    group.add_argument("--omega0", type=float, default=_TLS_DEFAULTS["omega0"],
                       help="vibrational quantum (default %(default)s)")
    group.add_argument("--mu-l", type=float, default=_TLS_DEFAULTS["mu_l"],
                       help="left chemical potential (default %(default)s)")
    group.add_argument("--mu-r", type=float, default=_TLS_DEFAULTS["mu_r"],
                       help="right chemical potential (default %(default)s)")
    group.add_argument("--t-l", type=float, default=_TLS_DEFAULTS["t_l"],
                       help="left temperature (default %(default)s)")
    group.add_argument("--t-r", type=float, default=_TLS_DEFAULTS["t_r"],
                       help="right temperature (default %(default)s)")
    group.add_argument("--gamma-hyb", type=float, default=0.7,
                       help="two-level rate prefactor (default %(default)s)")
    if multilevel_extras:
        group.add_argument("--gamma-l", type=float, default=1.0,
                           help="left hybridization (default %(default)s)")
        group.add_argument("--gamma-r", type=float, default=1.0,
                           help="right hybridization (default %(default)s)")
        group.add_argument("--gamma-da", type=float, default=1.0,
                           help="donor-to-acceptor prefactor (default %(default)s)")
        group.add_argument("--gamma-ad", type=float, default=1.0,
                           help="acceptor-to-donor prefactor (default %(default)s)")
        group.add_argument("--gamma0", type=float, default=0.5,
                           help="vibrational relaxation prefactor "
                                "(default %(default)s)")
        group.add_argument("--t-vib", type=float, default=None,
                           help="phonon bath temperature (default: left lead)")
        group.add_argument("--lam", "--lambda", dest="lam", type=float,
                           default=0.0,
                           help="polaron displacement; 0 keeps all "
                                "Franck-Condon weights at 1 (default)")


def _params_from(args, model):
    left = Reservoir(args.mu_l, args.t_l)
    right = Reservoir(args.mu_r, args.t_r)
    if model == "tls":
        return tls.JunctionParams(
            eps_d=args.eps_d, eps_a=args.eps_a, omega0=args.omega0,
            gamma_hyb=args.gamma_hyb, left=left, right=right)
    return ml.MultilevelParams(
        eps_d=args.eps_d, eps_a=args.eps_a, omega0=args.omega0,
        left=left, right=right,
        gamma_L=getattr(args, "gamma_l", 1.0),
        gamma_R=getattr(args, "gamma_r", 1.0),
        gamma_DA=getattr(args, "gamma_da", 1.0),
        gamma_AD=getattr(args, "gamma_ad", 1.0),
        gamma0=getattr(args, "gamma0", 0.5),
        lam=getattr(args, "lam", 0.0),
        t_vib=getattr(args, "t_vib", None))


def _parse_p0(arg, n):
    if arg is None:
        return None
    values = tuple(float(v) for v in arg.split(","))
    if len(values) != n:
        raise RectifiError(f"--p0 needs {n} comma-separated values, got {len(values)}")
    return values


def _open_out(args):
    if args.out is None:
        return sys.stdout, None
    return None, args.out


def _singleton_sweep(model, params, observable, time_grid, p0=None,
                     diff_step=None, p_floor=fi.DEFAULT_P_FLOOR):
    # A 1x1 sweep reuses the tabular writer for direct evaluations.
    axis = sw.SweepAxis("omega0", (params.omega0,))
    return sw.SweepSpec(model_id=model, base_params=params, axis1=axis,
                        observable=observable, time_grid=time_grid, p0=p0,
                        diff_step=diff_step, p_floor=p_floor)


def _emit(result, args, layout="wide", time_unit="1/eV", preset=None):
    stream, path = _open_out(args)
    display = preset.time_display if preset is not None else None
    if stream is not None:
        output.write_csv(stream, result, layout=layout, time_display=display,
                         time_unit=time_unit)
    else:
        output.write_result_files(
            path, result, layout=layout, time_display=display,
            time_unit=time_unit,
            preset_id=None if preset is None else preset.id,
            description=None if preset is None else preset.description)
        print(f"wrote {path} and sidecar "
              f"{Path(path).with_suffix('.meta')}", file=sys.stderr)


def _cmd_rates(args):
    models = ("tls", "multilevel") if args.model == "both" else (args.model,)
    for model in models:
        params = _params_from(args, model)
        print(f"[{model}]")
        if model == "tls":
            rates = tls.tls_rates(params)
            for name in ("a_da_plus", "a_ad_plus", "a_da_minus", "a_ad_minus"):
                print(f"  {name:12s} = {getattr(rates, name):.6g}")
            print(f"  {'gamma_eff':12s} = "
                  f"{tls.tls_decay_rate(rates, params.gamma_hyb):.6g} eV")
        else:
            rates = ml.multilevel_rates(params)
            for name, value in rates.as_dict().items():
                print(f"  {name:12s} = {value:.6g} eV")
    return 0


def _cmd_evolve(args):
    params = _params_from(args, args.model)
    n = 2 if args.model == "tls" else 5
    times = tuple(np.linspace(0.0, args.t_max, args.t_points))
    spec = _singleton_sweep(args.model, params, sw.Observable("populations"),
                            times, p0=_parse_p0(args.p0, n))
    _emit(sw.run_sweep(spec), args)
    return 0


def _cmd_fisher(args):
    params = _params_from(args, args.model)
    n = 2 if args.model == "tls" else 5
    times = tuple(np.linspace(0.0, args.t_max, args.t_points))
    spec = _singleton_sweep(args.model, params,
                            sw.Observable("fisher", theta=args.theta),
                            times, p0=_parse_p0(args.p0, n),
                            diff_step=args.fd_step, p_floor=args.p_floor)
    _emit(sw.run_sweep(spec), args)
    return 0


def _cmd_steady(args):
    params = _params_from(args, args.model)
    labels = ("p1", "p2") if args.model == "tls" else \
        tuple(f"p{s}" for s in ml.STATE_LABELS)
    pops = fi._curve(params).steady()
    lines = [f"{name} = {value:.6g}" for name, value in zip(labels, pops)]
    if args.theta is not None:
        value = fi.fisher_steady_state(params, args.theta,
                                       diff_step=args.fd_step,
                                       p_floor=args.p_floor)
        lines.append(f"I_ss({args.theta}) = {value:.6g} eV^-2")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _cmd_sweep(args):
    spec = load_config(args.config)
    if args.fd_step is not None:
        spec = dataclasses.replace(spec, diff_step=args.fd_step)
    if args.p_floor is not None:
        spec = dataclasses.replace(spec, p_floor=args.p_floor)
    if args.tol is not None:
        spec = dataclasses.replace(spec, saturation_slope=args.tol)
    result = sw.run_sweep(spec, threads=args.threads)
    _emit(result, args, layout="long")
    return 0


def _cmd_figure(args):
    preset = get_preset(args.id)
    out = args.out if args.out is not None else f"{preset.id}.csv"
    spec = preset.spec
    if args.fd_step is not None:
        spec = dataclasses.replace(spec, diff_step=args.fd_step)
    if args.p_floor is not None:
        spec = dataclasses.replace(spec, p_floor=args.p_floor)
    result = sw.run_sweep(spec, threads=args.threads)
    output.write_result_files(
        out, result, layout=preset.layout, time_display=preset.time_display,
        time_unit=preset.time_unit, preset_id=preset.id,
        description=preset.description)
    print(f"wrote {out} and sidecar {Path(out).with_suffix('.meta')}",
          file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rectifi",
        description="Donor-acceptor rectifier models and the Fisher "
                    "information of their populations.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def numeric_flags(p):
        p.add_argument("--fd-step", type=float, default=None,
                       help="finite-difference step override (eV)")
        p.add_argument("--p-floor", type=float, default=None,
                       help="positivity floor for Fisher quotients")

    p = sub.add_parser("rates", help="print all transition rates")
    p.add_argument("--model", choices=("tls", "multilevel", "both"),
                   default="both")
    _add_param_flags(p, multilevel_extras=True)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("evolve", help="population time trace (CSV)")
    p.add_argument("--model", choices=("tls", "multilevel"), required=True)
    p.add_argument("--t-max", type=float, required=True,
                   help="final time (1/eV)")
    p.add_argument("--t-points", type=int, default=201)
    p.add_argument("--p0", default=None,
                   help="initial distribution, comma-separated")
    p.add_argument("--out", default=None, help="write CSV here (default stdout)")
    _add_param_flags(p, multilevel_extras=True)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("fisher", help="I(theta) time series (CSV)")
    p.add_argument("--model", choices=("tls", "multilevel"), required=True)
    p.add_argument("--theta", required=True,
                   help="target parameter, e.g. eps_a or omega0")
    p.add_argument("--t-max", type=float, required=True,
                   help="final time (1/eV)")
    p.add_argument("--t-points", type=int, default=201)
    p.add_argument("--p0", default=None,
                   help="initial distribution, comma-separated")
    p.add_argument("--out", default=None, help="write CSV here (default stdout)")
    numeric_flags(p)
    _add_param_flags(p, multilevel_extras=True)
    p.set_defaults(func=_cmd_fisher)

    p = sub.add_parser("steady",
                       help="steady-state populations and optional I(theta)")
    p.add_argument("--model", choices=("tls", "multilevel"), required=True)
    p.add_argument("--theta", default=None,
                   help="also print steady-state I(theta)")
    p.add_argument("--out", default=None)
    numeric_flags(p)
    _add_param_flags(p, multilevel_extras=True)
    p.set_defaults(func=_cmd_steady)

    p = sub.add_parser("sweep", help="run a sweep from a config file (CSV)")
    p.add_argument("--config", required=True, help="key-value config file")
    p.add_argument("--threads", type=int, default=1,
                   help="parallel cell evaluation cap")
    p.add_argument("--tol", type=float, default=None,
                   help="saturating-series slope tolerance override")
    p.add_argument("--out", default=None, help="write CSV here (default stdout)")
    numeric_flags(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="run a scenario preset and write its data")
    p.add_argument("id", choices=sorted(PRESETS),
                   help="preset identifier, e.g. fig1b")
    p.add_argument("--out", default=None,
                   help="output CSV path (default <id>.csv)")
    p.add_argument("--threads", type=int, default=1)
    numeric_flags(p)
    p.set_defaults(func=_cmd_figure)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RectifiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
