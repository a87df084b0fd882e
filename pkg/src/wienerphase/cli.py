"""Command-line front end.

Every subcommand writes CSV (to ``--out`` or stdout). Settings can also come
from a ``--config`` file of ``key = value`` lines; command-line flags win over
the file, which wins over the built-in defaults.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys

from . import bounds, csvio, estimators
from .bounds import (
    AmplitudeBoundInputs,
    PhaseBoundInputs,
    amplitude_bound,
    amplitude_nu_schedule,
    bound_report,
    cosine_lower_bound,
    k_bound,
    phase_bound,
    prelog_components,
)
from .errors import InfeasiblePowerError, InvalidArgumentError
from .estimators import McConfig
from .fading import fading_moments
from .params import ChannelParams
from .verify import REPORT_COLUMNS, VerifyConfig, run_verify

log = logging.getLogger("wienerphase")

LN2 = math.log(2.0)


def parse_list(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


def parse_grid(text):
    """``a,b,c`` or ``start:stop:step`` (stop excluded)."""
    text = str(text)
    if ":" not in text:
        return parse_list(text)
    parts = [float(x) for x in text.split(":")]
    if len(parts) != 3 or parts[2] <= 0:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:step")
    start, stop, step = parts
    count = int(round((stop - start) / step))
    if start + count * step < stop - 1e-9 * step:
        count += 1
    return [float(f"{start + i * step:.15g}") for i in range(count)]


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file; flags given here override it")
    p.add_argument("--gamma", type=parse_list, default=[1.0], help="phase noise rate(s), comma list")
    p.add_argument("--snr", type=parse_list, default=[1e6], help="linear SNR value(s), comma list")
    p.add_argument("--alpha", type=parse_grid, default=[0.5],
                   help="growth exponent(s): comma list or start:stop:step")
    p.add_argument("--L", type=int, default=10, help="samples per symbol (fixed-resolution commands)")
    p.add_argument("--delta", type=float, default=0.1, help="sample interval in seconds")
    p.add_argument("--t", type=float, default=None, help="support exponent; default from the schedule or 1")
    p.add_argument("--a", type=float, default=bounds.REFERENCE_A, help="g(0) of the K construction")
    p.add_argument("--nu", type=float, default=None, help="auxiliary amplitude width override")
    p.add_argument("--zeta", type=float, default=None, help="von Mises concentration override")
    p.add_argument("--samples", type=int, default=20_000, help="Monte Carlo sample count (0 disables MC)")
    p.add_argument("--inner-steps", type=int, default=512, help="path grid steps per interval")
    p.add_argument("--chunk-size", type=int, default=4096, help="samples per work unit")
    p.add_argument("--workers", type=int, default=1, help="worker threads")
    p.add_argument("--seed", type=int, default=1, help="master seed")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.add_argument("--bits", action="store_true", help="report information in bits instead of nats")


def build_parser():
    parser = argparse.ArgumentParser(prog="wienerphase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "moments": "closed-form fading statistics, with Monte Carlo values when --samples > 0",
        "bounds": "analytic bounds on the schedule 1/delta = ceil(snr**alpha), per (gamma, snr, alpha)",
        "mc": "Monte Carlo estimates beside their analytic bounds at fixed (gamma, delta, L, snr)",
        "sweep": "bound vs Monte Carlo ordering chain over the --snr list at fixed delta and L",
        "prelog": "pre-log lower bound and its amplitude/phase split over the --alpha grid",
        "verify": "run the self-check suite; non-zero exit on failure",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        _common(p)
    return parser


def _load_config(path):
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidArgumentError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = val
    return values


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, val in _load_config(args.config).items():
            if key not in actions or key in ("config", "help"):
                parser.error(f"unknown config key {key!r}")
            act = actions[key]
            if isinstance(act, argparse._StoreTrueAction):
                defaults[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                defaults[key] = act.type(val) if act.type else val
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    for name in ("samples", "inner_steps", "chunk_size", "workers"):
        if getattr(args, name) < 0 or (name != "samples" and getattr(args, name) < 1):
            parser.error(f"--{name.replace('_', '-')} must be positive")
    if not (args.gamma and args.snr and args.alpha):
        parser.error("--gamma, --snr and --alpha need at least one value")
    return args


def _info(args, x):
    return x / LN2 if args.bits else x


def _mc_config(args, samples=None):
    return McConfig(
        n_samples=samples or args.samples,
        inner_steps=args.inner_steps,
        chunk_size=args.chunk_size,
        master_seed=args.seed,
        workers=args.workers,
    )


def cmd_prelog(args):
    cols = ("alpha", "prelog_total", "prelog_amplitude", "prelog_phase")
    rows = []
    for a in args.alpha:
        amp, ph = prelog_components(a)
        rows.append({"alpha": a, "prelog_total": bounds.prelog(a), "prelog_amplitude": amp, "prelog_phase": ph})
    return cols, rows


BOUND_COLUMNS = (
    "gamma", "snr", "alpha", "delta", "L", "t", "lam", "mu", "nu", "var_g", "rho", "zeta", "K",
    "i_amp", "i_phase", "i_total", "i_amp_offset", "i_phase_offset",
    "asymptote_amp", "asymptote_phase", "prelog", "status", "reason",
)


def cmd_bounds(args):
    K = k_bound(args.a, bounds.REFERENCE_SIGMA, 1.0).K
    rows = []
    for gamma in args.gamma:
        for snr in args.snr:
            for alpha in args.alpha:
                row = {"gamma": gamma, "snr": snr, "alpha": alpha}
                try:
                    nu, t = amplitude_nu_schedule(alpha, snr, gamma)
                    t = args.t if args.t is not None else t
                    nu = args.nu if args.nu is not None else nu
                    p = ChannelParams.asymptotic(snr, alpha, gamma, t=t)
                    rep = bound_report(p, nu, alpha=alpha, K=K)
                except (InfeasiblePowerError, InvalidArgumentError) as exc:
                    log.warning("skipping gamma=%g snr=%g alpha=%g: %s", gamma, snr, alpha, exc)
                    row.update(status="skipped", reason=str(exc))
                    rows.append(row)
                    continue
                amp_pl, ph_pl = prelog_components(alpha)
                row.update(
                    delta=p.delta, L=p.L, t=p.t, lam=rep.lam, mu=rep.mu, nu=rep.nu, var_g=rep.var_g,
                    rho=rep.rho, zeta=rep.zeta, K=rep.K,
                    i_amp=_info(args, rep.i_amp), i_phase=_info(args, rep.i_phase), i_total=_info(args, rep.i_total),
                    i_amp_offset=_info(args, rep.i_amp - amp_pl * math.log(snr)),
                    i_phase_offset=_info(args, rep.i_phase - ph_pl * math.log(snr)),
                    asymptote_amp=_info(args, rep.asymptote_amp),
                    asymptote_phase=_info(args, rep.asymptote_phase),
                    prelog=rep.prelog, status="ok", reason="",
                )
                rows.append(row)
    return BOUND_COLUMNS, rows


def cmd_moments(args):
    cols = ("quantity", "closed_form", "mc_value", "mc_std_error", "z_score", "n", "seed", "gamma", "delta", "L")
    rows = []
    for gamma in args.gamma:
        p = ChannelParams(gamma=gamma, delta=args.delta, L=args.L)
        cf = fading_moments(p)
        mc = estimators.mc_fading_moments(p, _mc_config(args)) if args.samples > 0 else None
        pairs = [
            ("m2", cf.m2, "m2"), ("m4", cf.m4, "m4"), ("m6", cf.m6, "m6"),
            ("mean_f", cf.mean_f, "mean_f"), ("mean_f_rot", cf.mean_f_rot, "mean_f_rot"),
            ("mean_f_rot_time_average", cf.mean_f_rot, "mean_f_rot_time_average"),
            ("mean_g", cf.mean_g, "m2"), ("var_g", cf.var_g, "var_g"), ("var_n", p.sigma2, "var_n"),
        ]
        for name, value, mc_name in pairs:
            row = {"quantity": name, "closed_form": value, "gamma": gamma, "delta": p.delta, "L": p.L}
            if mc is not None:
                est = getattr(mc, mc_name)
                row.update(mc_value=est.value, mc_std_error=est.std_error, z_score=est.z_score(value),
                           n=est.n_samples, seed=est.seed)
            rows.append(row)
    return cols, rows


MC_COLUMNS = ("quantity", "value", "std_error", "n", "seed", "gamma", "delta", "L", "snr", "t", "nu", "zeta", "status")


def _fixed_params(args, gamma, snr):
    t = args.t if args.t is not None else 1.0
    return ChannelParams(gamma=gamma, delta=args.delta, L=args.L, snr=snr, t=t)


def _mc_rows(args, p):
    cfg = _mc_config(args)
    nu = args.nu if args.nu is not None else 4.0 / p.delta
    ph_in = PhaseBoundInputs.from_params(p, k_bound(args.a, bounds.REFERENCE_SIGMA, 1.0).K)
    zeta = args.zeta if args.zeta is not None else ph_in.zeta
    base = {"seed": cfg.master_seed, "gamma": p.gamma, "delta": p.delta, "L": p.L, "snr": p.snr, "t": p.t,
            "nu": nu, "zeta": zeta}
    amp_b = amplitude_bound(AmplitudeBoundInputs.from_params(p, nu))
    ph_b = phase_bound(PhaseBoundInputs(p, ph_in.K, 1 / (2 * zeta))) if args.zeta is not None else phase_bound(ph_in)
    cos_b = cosine_lower_bound(p, ph_in.K, p.delta**p.t)
    amp = estimators.mc_amplitude_mi(p, nu, cfg)
    ph = estimators.mc_phase_mi(p, zeta, cfg)
    cos = estimators.mc_cos_phi(p, cfg)
    out = []
    for name, est, bound, info in (
        ("amplitude_mi", amp, amp_b, True),
        ("phase_mi", ph, ph_b, True),
        ("cos_phi", cos, cos_b, False),
    ):
        ok = est.value >= bound - 3 * est.std_error
        f = (lambda x: _info(args, x)) if info else (lambda x: x)
        out.append(dict(base, quantity=name, value=f(est.value), std_error=f(est.std_error), n=est.n_samples,
                        status="ok" if ok else "below_bound"))
        out.append(dict(base, quantity=name.replace("_mi", "_bound").replace("cos_phi", "cos_phi_bound"),
                        value=f(bound), std_error=0.0, n=0, status=""))
    return out


def cmd_mc(args):
    rows = []
    for gamma in args.gamma:
        for snr in args.snr:
            p = _fixed_params(args, gamma, snr)
            try:
                p.require_feasible()
            except InfeasiblePowerError as exc:
                log.warning("skipping gamma=%g snr=%g: %s", gamma, snr, exc)
                rows.append({"quantity": "skipped", "gamma": gamma, "snr": snr, "status": str(exc)})
                continue
            rows.extend(_mc_rows(args, p))
    return MC_COLUMNS, rows


SWEEP_COLUMNS = (
    "gamma", "snr", "delta", "L", "t",
    "amp_bound", "amp_mc", "amp_se", "phase_bound", "phase_mc", "phase_se",
    "cos_bound", "cos_mc", "cos_se", "n", "seed", "status",
)


def cmd_sweep(args):
    rows = []
    for gamma in args.gamma:
        for snr in args.snr:
            p = _fixed_params(args, gamma, snr)
            row = {"gamma": gamma, "snr": snr, "delta": p.delta, "L": p.L, "t": p.t, "seed": args.seed}
            try:
                p.require_feasible()
            except InfeasiblePowerError as exc:
                log.warning("skipping gamma=%g snr=%g: %s", gamma, snr, exc)
                row["status"] = "skipped: " + str(exc)
                rows.append(row)
                continue
            got = {r["quantity"]: r for r in _mc_rows(args, p)}
            row.update(
                amp_bound=got["amplitude_bound"]["value"], amp_mc=got["amplitude_mi"]["value"],
                amp_se=got["amplitude_mi"]["std_error"],
                phase_bound=got["phase_bound"]["value"], phase_mc=got["phase_mi"]["value"],
                phase_se=got["phase_mi"]["std_error"],
                cos_bound=got["cos_phi_bound"]["value"], cos_mc=got["cos_phi"]["value"],
                cos_se=got["cos_phi"]["std_error"], n=got["amplitude_mi"]["n"],
            )
            bad = [q for q in ("amplitude_mi", "phase_mi", "cos_phi") if got[q]["status"] != "ok"]
            row["status"] = "ok" if not bad else "below_bound:" + "+".join(bad)
            rows.append(row)
    return SWEEP_COLUMNS, rows


def cmd_verify(args):
    cfg = VerifyConfig(inner_steps=min(args.inner_steps, 256), seed=args.seed, workers=args.workers)
    report = run_verify(cfg)
    for c in report.checks:
        print(c.line(), file=sys.stderr)
    print(f"{len(report.checks)} checks, {len(report.failures)} failed", file=sys.stderr)
    return REPORT_COLUMNS, [c.as_row() for c in report.checks], report.exit_code


COMMANDS = {
    "prelog": cmd_prelog,
    "bounds": cmd_bounds,
    "moments": cmd_moments,
    "mc": cmd_mc,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = parse_args(sys.argv[1:] if argv is None else argv)
    result = COMMANDS[args.command](args)
    cols, rows = result[:2]
    code = result[2] if len(result) > 2 else 0
    if args.command in ("prelog",) and not rows:
        print("error: empty alpha grid", file=sys.stderr)
        return 2
    csvio.write(cols, rows, args.out, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
