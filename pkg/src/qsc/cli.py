"""Command-line interface.

Subcommands: frame-transform, ito-check, detector, oscillator, qsde-sim,
response-rate, wedge-data. Outputs are deterministic for identical flags:
quadrature orders and RK4 step counts are fixed, and the only randomness
(random triples in ito-check) is driven by --seed, which defaults to 0.

Frequency/angle flags accept "Npi" tokens (e.g. ``4pi``, ``0.5pi``) besides
plain floats, so golden files avoid decimal drift. ``--config FILE`` reads
``key=value`` lines (keys = long option names with dashes or underscores);
explicit flags override the file. Exit codes: 0 success, 1 numerical
failure (diagnostic JSON on stderr), 2 argument errors.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__, ito, kinematics, noise, open_system, unruh
from .operators import haar_unitary, random_hermitian

SCHEMA_VERSION = 1


def parse_pi(text):
    """Float parser accepting 'Npi' tokens: '4pi' -> 4*pi, 'pi' -> pi."""
    s = str(text).strip().lower()
    if s.endswith("pi"):
        head = s[:-2]
        factor = 1.0 if head in ("", "+") else (-1.0 if head == "-" else float(head))
        return factor * math.pi
    return float(s)


def parse_pi_list(text):
    return [parse_pi(tok) for tok in str(text).split(",") if tok.strip()]


def _fmt(x):
    # shortest round-trip representation: parsing the CSV recovers the exact value
    return repr(float(x))


class _Sub:
    """Subparser wrapper recording option converters for --config support."""

    def __init__(self, parser):
        self.parser = parser
        self.types = {}

    def add(self, name, **kwargs):
        action = self.parser.add_argument(name, **kwargs)
        self.types[action.dest] = kwargs.get("type", str)
        return action


def _emit(args, text):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)
    return 0


def _emit_json(args, command, params, results):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
    }
    return _emit(args, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------- subcommands


def cmd_frame_transform(args):
    u, v = args.u, args.v
    gu = kinematics.gamma(u)
    gv = kinematics.gamma(v)
    vp = kinematics.velocity_add(v, u)
    gvp = kinematics.gamma(vp) if abs(vp) < 1 else None
    z = kinematics.zeta(u, v)
    results = {
        "gamma_u": gu,
        "gamma_v": gv,
        "v_prime": vp,
        "gamma_v_prime": gvp,
        "zeta": z,
        "zeta_from_gammas": (gvp / gv) if gvp is not None else None,
        "proper_time_per_dt": 1.0 / gv,
    }
    if args.event:
        t, x = (float(tok) for tok in args.event.split(","))
        boosted = kinematics.lorentz_boost(kinematics.Event(t, x), u)
        results["boosted_event"] = {"t": boosted.t, "x": boosted.x}
        results["interval_invariant"] = boosted.interval()
    if args.format == "csv":
        return _emit(
            args,
            _csv(
                "u,v,gamma_u,gamma_v,v_prime,zeta",
                [(u, v, gu, gv, vp, z)],
            ),
        )
    return _emit_json(args, "frame-transform", {"u": u, "v": v}, results)


def cmd_ito_check(args):
    rng = np.random.default_rng(args.seed)
    max_defect = 0.0
    for _ in range(args.triples):
        for d in (2, 3):
            s = haar_unitary(rng, d)
            ell = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            h = random_hermitian(rng, d)
            g = ito.hp_generator(open_system.HPTriple(s, ell, h))
            max_defect = max(max_defect, ito.unitarity_defect(g).max_abs())

    zetas = (0.25, 0.8, 1.0, 2.5)
    covariant = True
    for z in zetas:
        f = ito.FrameScaling(z)
        for basis in (ito.FOCK, ito.thermal(1.0)):
            for m1 in basis.increments:
                for m2 in basis.increments:
                    e1 = ito.monomial(basis, m1)
                    e2 = ito.monomial(basis, m2)
                    lhs = ito.ito_product(ito.frame_scale(e1, f), ito.frame_scale(e2, f))
                    rhs = ito.frame_scale(ito.ito_product(e1, e2), f)
                    for inc in basis.increments:
                        if not np.array_equal(lhs.coefficient(inc), rhs.coefficient(inc)):
                            covariant = False

    sample = ito.hp_generator(
        open_system.HPTriple(np.diag([1, -1]).astype(complex), np.array([[0, 0], [1, 0]], dtype=complex), np.zeros((2, 2)))
    )
    results = {
        "max_unitarity_defect": max_defect,
        "defect_threshold": 1e-10,
        "defect_ok": bool(max_defect < 1e-10),
        "table_covariance_exact": covariant,
        "zetas": list(zetas),
        "sample_generator": str(sample),
    }
    if args.format == "csv":
        rows = [
            ("max_unitarity_defect", max_defect, 1e-10, int(max_defect < 1e-10)),
            ("table_covariance_exact", float(covariant), 1.0, int(covariant)),
        ]
        return _emit(args, _csv("check,value,threshold,pass", rows))
    return _emit_json(args, "ito-check", {"triples": args.triples, "seed": args.seed}, results)


def _initial_detector_state(args):
    ee = args.rho_ee0
    eg = complex(args.re_eg0, args.im_eg0)
    return np.array([[ee, eg], [np.conj(eg), 1.0 - ee]], dtype=complex)


def cmd_detector(args):
    gen = open_system.detector_generator(args.n, args.omega)
    rho0 = _initial_detector_state(args)
    traj = open_system.evolve_master(gen, rho0, args.tau, args.steps, args.store_every)
    if args.format == "json":
        exact = open_system.detector_exact(rho0, args.tau, args.n, args.omega)
        final = traj.final_state
        results = {
            "final": {
                "rho_ee": final[0, 0].real,
                "rho_gg": final[1, 1].real,
                "re_rho_eg": final[0, 1].real,
                "im_rho_eg": final[0, 1].imag,
            },
            "exact_rho_ee": exact[0, 0].real,
            "abs_error_vs_exact": float(np.max(np.abs(final - exact))),
            "max_trace_drift": float(traj.trace_drift.max()),
        }
        params = {"n": args.n, "omega": args.omega, "tau": args.tau, "steps": args.steps}
        return _emit_json(args, "detector", params, results)
    buf = io.StringIO()
    open_system.write_trajectory_csv(buf, traj)
    return _emit(args, buf.getvalue())


def cmd_oscillator(args):
    gen = open_system.oscillator_generator(args.n, args.gamma, args.cutoff, args.omega)
    rho0 = np.zeros((args.cutoff + 1, args.cutoff + 1), dtype=complex)
    rho0[0, 0] = 1.0
    store = args.store_every if args.store_every else max(1, args.steps // 50)
    if args.steps % store:
        store = 1
    traj = open_system.evolve_master(gen, rho0, args.tau, args.steps, store)
    from .operators import gibbs_truncated, state_fidelity

    gibbs = gibbs_truncated(args.n, args.cutoff)
    if args.format == "csv":
        rows = [
            (float(t), state_fidelity(rho, gibbs), float(dr))
            for t, rho, dr in zip(traj.times, traj.states, traj.trace_drift)
        ]
        return _emit(args, _csv("tau,fidelity_gibbs,trace_drift", rows))
    final = traj.final_state
    results = {
        "fidelity_gibbs": state_fidelity(final, gibbs),
        "final_populations": [float(x) for x in np.real(np.diag(final))],
        "gibbs_populations": [float(x) for x in np.real(np.diag(gibbs))],
        "max_trace_drift": float(traj.trace_drift.max()),
    }
    params = {
        "n": args.n,
        "gamma": args.gamma,
        "cutoff": args.cutoff,
        "tau": args.tau,
        "steps": args.steps,
    }
    return _emit_json(args, "oscillator", params, results)


def cmd_qsde_sim(args):
    cfg = noise.SimConfig(
        dtau=args.dtau,
        steps=args.steps,
        cutoff=args.cutoff,
        occupation=args.n,
        rate=args.omega / (4.0 * math.pi),
    )
    ell = math.sqrt(cfg.rate) * np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    rho0 = _initial_detector_state(args)
    traj = noise.simulate_qsde(cfg, ell, rho0)
    if args.format == "json":
        exact = open_system.detector_exact(rho0, cfg.horizon, args.n, args.omega)
        results = {
            "final_rho_ee": traj.final_state[0, 0].real,
            "exact_rho_ee": exact[0, 0].real,
            "abs_error_vs_exact": float(np.max(np.abs(traj.final_state - exact))),
            "max_trace_drift": float(traj.trace_drift.max()),
            "horizon": cfg.horizon,
        }
        params = {
            "n": args.n,
            "omega": args.omega,
            "dtau": args.dtau,
            "steps": args.steps,
            "cutoff": args.cutoff,
        }
        return _emit_json(args, "qsde-sim", params, results)
    buf = io.StringIO()
    open_system.write_trajectory_csv(buf, traj)
    return _emit(args, buf.getvalue())


def cmd_response_rate(args):
    p = unruh.WightmanParams(args.a)
    rows = []
    detail = []
    for omega in args.omega:
        pos = unruh.response_rate(unruh.ResponseConfig(omega), p)
        neg = unruh.response_rate(unruh.ResponseConfig(-omega), p)
        ratio = pos.value / neg.value
        expected = math.exp(-2.0 * math.pi * omega / args.a)
        rows.append((args.a, omega, pos.value, neg.value, ratio, expected))
        detail.append(
            {
                "omega": omega,
                "response_pos": pos.value,
                "response_neg": neg.value,
                "ratio": ratio,
                "expected_ratio": expected,
                "prefactor_vs_quoted": pos.prefactor_vs_quoted,
                "epsilon_values_pos": list(pos.epsilon_values),
                "residual_pos": pos.residual,
            }
        )
    if args.format == "json":
        return _emit_json(args, "response-rate", {"a": args.a}, {"sweep": detail})
    return _emit(args, _csv("a,Omega,response_pos,response_neg,ratio,expected_ratio", rows))


def cmd_wedge_data(args):
    a = args.a
    etas = np.linspace(args.eta_min, args.eta_max, args.eta_curves)
    xis = np.linspace(args.xi_min, args.xi_max, args.xi_curves)
    if not np.any(np.isclose(xis, 0.0)):
        xis = np.sort(np.append(xis, 0.0))
    rows = []
    for eta in etas:
        for xi in np.linspace(args.xi_min, args.xi_max, args.samples):
            e = kinematics.radar_to_minkowski(kinematics.RadarCoord(eta, xi, a))
            rows.append(("const_eta", float(eta), float(xi), e.t, e.x))
    for xi in xis:
        for eta in np.linspace(args.eta_min, args.eta_max, args.samples):
            e = kinematics.radar_to_minkowski(kinematics.RadarCoord(eta, xi, a))
            rows.append(("const_xi", float(xi), float(eta), e.t, e.x))
    if args.format == "json":
        results = {
            "rows": [
                {"curve": c, "param": p_, "s": s, "t": t, "x": x} for c, p_, s, t, x in rows
            ]
        }
        return _emit_json(args, "wedge-data", {"a": a}, results)
    return _emit(args, _csv("curve,param,s,t,x", rows))


# ---------------------------------------------------------------- wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qsc",
        description="Quantum stochastic calculus toolkit (units c = hbar = 1; "
        "velocities are fractions of c).",
    )
    parser.add_argument("--version", action="version", version=f"qsc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def new_sub(name, help_text):
        sp = _Sub(
            sub.add_parser(
                name,
                help=help_text,
                description=f"{help_text} (units: c = hbar = 1; velocities are fractions of c)",
            )
        )
        sp.add("--out", default="-", help="output path, '-' for stdout (default: stdout)")
        sp.add("--config", default=None, help="key=value file supplying option defaults")
        sp.add("--seed", type=int, default=0, help="seed for any randomized check (default 0)")
        subs[name] = sp
        return sp

    sp = new_sub("frame-transform", "kinematic factors between inertial frames")
    sp.add("--u", type=float, required=True, help="frame velocity (fraction of c)")
    sp.add("--v", type=float, required=True, help="system velocity in the unprimed frame")
    sp.add("--event", default=None, help="optional event to boost, as 't,x'")
    sp.add("--format", choices=("json", "csv"), default="json", help="output format (default json)")

    sp = new_sub("ito-check", "algebraic identity checks on random generators")
    sp.add("--triples", type=int, default=100, help="random (S, L, H) triples per dimension (default 100)")
    sp.add("--format", choices=("json", "csv"), default="json", help="output format (default json)")

    sp = new_sub("detector", "two-level detector master equation (RK4)")
    sp.add("--n", type=float, required=True, help="thermal occupation n >= 0")
    sp.add("--omega", type=parse_pi, required=True, help="level splitting; accepts Npi tokens")
    sp.add("--tau", type=float, default=1.0, help="proper-time horizon (default 1)")
    sp.add("--steps", type=int, default=1000, help="RK4 steps (default 1000)")
    sp.add("--store-every", type=int, default=1, help="keep every k-th state (default 1)")
    sp.add("--rho-ee0", type=float, default=0.0, help="initial excited population (default 0)")
    sp.add("--re-eg0", type=float, default=0.0, help="Re of initial coherence (default 0)")
    sp.add("--im-eg0", type=float, default=0.0, help="Im of initial coherence (default 0)")
    sp.add("--format", choices=("csv", "json"), default="csv", help="trajectory csv or summary json (default csv)")

    sp = new_sub("oscillator", "truncated damped-oscillator thermalization")
    sp.add("--n", type=float, required=True, help="thermal occupation n >= 0")
    sp.add("--gamma", type=float, default=1.0, help="damping rate (default 1)")
    sp.add("--cutoff", type=int, default=30, help="highest retained level (default 30)")
    sp.add("--omega", type=parse_pi, default=1.0, help="mode frequency (only used with a Hamiltonian hook)")
    sp.add("--tau", type=float, default=40.0, help="horizon in units of 1/gamma (default 40)")
    sp.add("--steps", type=int, default=2000, help="RK4 steps (default 2000)")
    sp.add("--store-every", type=int, default=0, help="0 picks ~50 stored states (default 0)")
    sp.add("--format", choices=("json", "csv"), default="json", help="summary json or fidelity csv (default json)")

    sp = new_sub("qsde-sim", "collision-model simulation of the detector QSDE")
    sp.add("--n", type=float, required=True, help="thermal occupation n >= 0")
    sp.add("--omega", type=parse_pi, required=True, help="level splitting; accepts Npi tokens")
    sp.add("--dtau", type=float, default=1e-3, help="collision step (default 1e-3)")
    sp.add("--steps", type=int, default=1000, help="number of collisions (default 1000)")
    sp.add("--cutoff", type=int, default=2, help="per-slice Fock cutoff (default 2)")
    sp.add("--rho-ee0", type=float, default=0.0, help="initial excited population (default 0)")
    sp.add("--re-eg0", type=float, default=0.0, help="Re of initial coherence (default 0)")
    sp.add("--im-eg0", type=float, default=0.0, help="Im of initial coherence (default 0)")
    sp.add("--format", choices=("csv", "json"), default="csv", help="trajectory csv or summary json (default csv)")

    sp = new_sub("response-rate", "detector response and detailed-balance ratio")
    sp.add("--a", type=float, required=True, help="proper acceleration a > 0")
    sp.add("--omega", type=parse_pi_list, required=True, help="comma list of frequencies; Npi tokens allowed")
    sp.add("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")

    sp = new_sub("wedge-data", "constant-eta and constant-xi curves of the right wedge")
    sp.add("--a", type=float, default=1.0, help="proper acceleration a > 0 (default 1)")
    sp.add("--eta-min", type=float, default=-2.0, help="eta range lower end (default -2)")
    sp.add("--eta-max", type=float, default=2.0, help="eta range upper end (default 2)")
    sp.add("--xi-min", type=float, default=-1.0, help="xi range lower end (default -1)")
    sp.add("--xi-max", type=float, default=1.0, help="xi range upper end (default 1)")
    sp.add("--eta-curves", type=int, default=5, help="number of constant-eta curves (default 5)")
    sp.add("--xi-curves", type=int, default=5, help="number of constant-xi curves (default 5; xi=0 always added)")
    sp.add("--samples", type=int, default=41, help="points per curve (default 41)")
    sp.add("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")

    handlers = {
        "frame-transform": cmd_frame_transform,
        "ito-check": cmd_ito_check,
        "detector": cmd_detector,
        "oscillator": cmd_oscillator,
        "qsde-sim": cmd_qsde_sim,
        "response-rate": cmd_response_rate,
        "wedge-data": cmd_wedge_data,
    }
    return parser, subs, handlers


def _load_config(path):
    cfg = {}
    with open(path, encoding="utf-8") as fp:
        for line in fp:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, value = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs, handlers = build_parser()
    if argv and argv[0] in subs and "--config" in argv:
        path = argv[argv.index("--config") + 1]
        try:
            raw = _load_config(path)
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
        sp = subs[argv[0]]
        defaults = {}
        for key, value in raw.items():
            if key not in sp.types:
                parser.error(f"unknown config key {key!r} for {argv[0]}")
            conv = sp.types[key]
            defaults[key] = conv(value) if conv is not str else value
        sp.parser.set_defaults(**defaults)
        for action in sp.parser._actions:
            if action.dest in defaults:
                action.required = False
    args = parser.parse_args(argv)
    try:
        return handlers[args.command](args)
    except Exception as exc:
        diag = {
            "schema_version": SCHEMA_VERSION,
            "error": type(exc).__name__,
            "message": str(exc),
        }
        sys.stderr.write(json.dumps(diag, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
