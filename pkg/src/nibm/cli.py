"""Command-line front end.

JSON for scalar records, CSV for grids; every run emits a reproducibility
manifest (subcommand, parameters, version, wall time, output digest) on
stderr.  Exit codes: 0 success, 1 numerical failure, 2 argument errors.
"""

import argparse
import hashlib
import io
import json
import sys
import time

import numpy as np

from . import __version__
from .errors import NibmError

_FLOAT_FMT = "%.17g"


def _fmt(x):
    return _FLOAT_FMT % float(x)


def _emit(args, text, manifest_extra):
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    manifest = {
        "subcommand": args.command,
        "params": manifest_extra,
        "version": __version__,
        "wall_time_s": round(time.time() - args._t0, 3),
        "output_digest": digest,
    }
    print(json.dumps(manifest), file=sys.stderr)


def _cmd_phase(args):
    from .phase import phase_data, rho_T

    pd = phase_data(args.T)
    if args.format == "csv":
        lim = pd.beta * 1.1
        xs = np.linspace(-lim, lim, args.grid)
        rows = ["x,rho"] + [f"{_fmt(x)},{_fmt(rho_T(x, pd))}" for x in xs]
        return "\n".join(rows) + "\n"
    rec = {k: v for k, v in pd.__dict__.items()}
    return json.dumps(rec, default=float, indent=2) + "\n"


def _cmd_recurrence(args):
    from .dgop import build_lattice, stieltjes

    deg = args.degree if args.degree is not None else args.n
    lm = build_lattice(args.n, args.tau, args.T)
    rt = stieltjes(lm, deg)
    rows = ["j,log_h,beta,gamma_sq"]
    for j in range(deg + 1):
        rows.append(
            f"{j},{_fmt(rt.log_h[j])},{_fmt(rt.beta[j])},{_fmt(rt.gamma_sq[j])}"
        )
    return "\n".join(rows) + "\n"


def _cmd_winding(args):
    from .phase import T_CRITICAL
    from .winding import discrete_normal, winding_distribution

    wd = winding_distribution(args.n, args.T, args.omega_max, args.quad)
    if args.T > T_CRITICAL:
        limit, _ = discrete_normal(args.T)
    else:
        limit = lambda o: 1.0 if o == 0 else 0.0  # noqa: E731
    rows = ["omega,P_n,P_limit"]
    for o in range(-args.omega_max, args.omega_max + 1):
        rows.append(f"{o},{_fmt(wd.prob(o))},{_fmt(limit(o))}")
    return "\n".join(rows) + "\n"


def _cmd_painleve(args):
    from .painleve import default_hastings_mcleod

    hm = default_hastings_mcleod()
    return json.dumps(
        {"s": args.s, "q": hm.q_at(args.s), "q_prime": hm.q_prime_at(args.s)}
    ) + "\n"


def _cmd_psi(args):
    from .painleve import default_hastings_mcleod, psi_solve

    hm = default_hastings_mcleod()
    P = psi_solve(complex(args.re, args.im), args.s, hm)
    rec = {}
    for i in range(2):
        for j in range(2):
            rec[f"psi{i+1}{j+1}_re"] = P[i, j].real
            rec[f"psi{i+1}{j+1}_im"] = P[i, j].imag
    return json.dumps(rec, default=float) + "\n"


def _kernel_json(kv):
    return json.dumps(
        {
            "value_re": kv.value.real,
            "value_im": kv.value.imag,
            "counterterm": kv.counterterm,
            "est_err": kv.quad_estimate,
        },
        default=float,
    ) + "\n"


def _cmd_kernel(args):
    if args.which == "pearcey":
        from .kernels import pearcey_kernel

        return _kernel_json(pearcey_kernel(args.s, args.t, args.xi, args.eta))
    if args.which == "tacnode":
        from .kernels import tacnode_kernel

        return _kernel_json(
            tacnode_kernel(args.tau_i, args.tau_j, args.xi, args.eta, args.sigma)
        )
    from .finite import CorrelationContext

    ctx = CorrelationContext.build(args.n, args.T, args.tau)
    return _kernel_json(ctx.corr_kernel(args.t1, args.t2, args.x, args.y))


def _cmd_density(args):
    from .asymptotics import hsgn
    from .finite import CorrelationContext

    tau = args.tau if args.tau is not None else hsgn(args.n)
    ctx = CorrelationContext.build(args.n, args.T, tau)
    xs = np.linspace(-np.pi, np.pi, args.grid, endpoint=False)
    rows = ["x,K"]
    for x in xs:
        rows.append(f"{_fmt(x)},{_fmt(ctx.corr_kernel(args.t, args.t, x, x).value.real)}")
    return "\n".join(rows) + "\n"


def _cmd_probe(args):
    ns = [int(v) for v in args.n_list.split(",")]
    if args.which == "pearcey":
        from .finite import pearcey_probe

        errs = pearcey_probe(ns, args.T, tau=args.tau, tau_i=args.tau_i,
                             tau_j=args.tau_j, xi=args.xi, eta=args.eta)
    else:
        from .finite import tacnode_probe

        errs = tacnode_probe(ns, sigma=args.sigma, tau_i=args.tau_i,
                             tau_j=args.tau_j, xi=args.xi, eta=args.eta)
    rows = ["n,error"] + [f"{n},{_fmt(e)}" for n, e in zip(ns, errs)]
    return "\n".join(rows) + "\n"


def _cmd_oracle(args):
    from .walkers import CylinderEnsemble, dp_generating_function, km_discrete_check

    n = args.n
    starts = tuple(2 * i - 2 * (n // 2) for i in range(n))
    ce = CylinderEnsemble(M=args.M, N=args.N, n=n, starts=starts, ends=starts,
                          tau=args.tau)
    gf = dp_generating_function(ce, per_offset=True)
    rep = km_discrete_check(ce)
    rec = {
        "per_offset": {str(o): [v.real, v.imag] for o, v in sorted(gf.items())},
        "determinant_identity_exact": rep.exact_equal,
        "counts": {str(o): v for o, v in sorted(rep.counts.items())},
    }
    return json.dumps(rec, indent=2) + "\n"


def _cmd_verify(args):
    from .acceptance import run_acceptance

    results = run_acceptance(suite=args.suite, names=args.only, jobs=args.jobs)
    rows = []
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if not r.passed:
            failed += 1
        rows.append(f"[{status}] {r.name}  ({r.elapsed:.1f}s)  {r.detail}")
    text = "\n".join(rows) + "\n"
    text += f"{len(results) - failed}/{len(results)} criteria passed\n"
    if failed:
        raise NibmError(f"{failed} acceptance criteria failed\n{text}")
    return text


def build_parser():
    p = argparse.ArgumentParser(prog="nibm", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("phase")
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--grid", type=int, default=200)
    common(sp)
    sp.set_defaults(fn=_cmd_phase)

    sp = sub.add_parser("recurrence")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--tau", type=float, default=0.0)
    sp.add_argument("--degree", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_recurrence)

    sp = sub.add_parser("winding")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--omega-max", dest="omega_max", type=int, default=3)
    sp.add_argument("--quad", type=int, default=256)
    common(sp)
    sp.set_defaults(fn=_cmd_winding)

    sp = sub.add_parser("painleve")
    sp.add_argument("--s", type=float, required=True)
    common(sp)
    sp.set_defaults(fn=_cmd_painleve)

    sp = sub.add_parser("psi")
    sp.add_argument("--re", type=float, required=True)
    sp.add_argument("--im", type=float, required=True)
    sp.add_argument("--s", type=float, required=True)
    common(sp)
    sp.set_defaults(fn=_cmd_psi)

    sp = sub.add_parser("kernel")
    ksub = sp.add_subparsers(dest="which", required=True)
    kp = ksub.add_parser("pearcey")
    for name in ("s", "t", "xi", "eta"):
        kp.add_argument(f"--{name}", type=float, required=True)
    common(kp)
    kp.set_defaults(fn=_cmd_kernel)
    kt = ksub.add_parser("tacnode")
    for name, dest in (("tau-i", "tau_i"), ("tau-j", "tau_j")):
        kt.add_argument(f"--{name}", dest=dest, type=float, required=True)
    for name in ("xi", "eta", "sigma"):
        kt.add_argument(f"--{name}", type=float, required=True)
    common(kt)
    kt.set_defaults(fn=_cmd_kernel)
    kf = ksub.add_parser("finite")
    kf.add_argument("--n", type=int, required=True)
    kf.add_argument("--T", type=float, required=True)
    kf.add_argument("--tau", type=float, default=0.0)
    for name in ("t1", "t2", "x", "y"):
        kf.add_argument(f"--{name}", type=float, required=True)
    common(kf)
    kf.set_defaults(fn=_cmd_kernel)

    sp = sub.add_parser("density")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--tau", type=float, default=None)
    sp.add_argument("--grid", type=int, default=128)
    common(sp)
    sp.set_defaults(fn=_cmd_density)

    sp = sub.add_parser("probe")
    psub = sp.add_subparsers(dest="which", required=True)
    for which in ("pearcey", "tacnode"):
        pp = psub.add_parser(which)
        pp.add_argument("--n-list", dest="n_list", required=True)
        if which == "pearcey":
            pp.add_argument("--T", type=float, required=True)
            pp.add_argument("--tau", type=float, default=None)
        else:
            pp.add_argument("--sigma", type=float, default=0.0)
        pp.add_argument("--tau-i", dest="tau_i", type=float, default=0.0)
        pp.add_argument("--tau-j", dest="tau_j", type=float, default=0.0)
        pp.add_argument("--xi", type=float, default=0.0)
        pp.add_argument("--eta", type=float, default=0.0)
        common(pp)
        pp.set_defaults(fn=_cmd_probe)

    sp = sub.add_parser("oracle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--tau", type=float, default=0.0)
    common(sp)
    sp.set_defaults(fn=_cmd_oracle)

    sp = sub.add_parser("verify")
    sp.add_argument("--suite", default="primary")
    sp.add_argument("--only", default=None)
    sp.add_argument("--jobs", type=int, default=1)
    common(sp)
    sp.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args._t0 = time.time()
    try:
        text = args.fn(args)
    except NibmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    params = {
        k: v for k, v in vars(args).items()
        if not k.startswith("_") and k not in ("fn", "out") and v is not None
        and not callable(v)
    }
    _emit(args, text, params)
    return 0


if __name__ == "__main__":
    sys.exit(main())
