"""Command-line front end: ``qic <command> [options]``.

Exit status is 0 on success and 2 on any validation failure (bad input,
failed criteria), with a diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import config, linalg
from .capsule import (
    THETA_GRID,
    NotPossible,
    check_qic,
    construct_qic,
    ghz_fixture,
    max_entangled_partner,
    alternate_qic,
)
from .config import QICError
from .correlation import VirtualQubit, check_partner
from .dynamics import PRESETS, random_two_local
from .formats import FormatError, dumps_report, load_hamiltonian, load_state, rows_to_csv
from .info import WriteOp, apply_write, axis_generator, extract
from .qubits import KET0, KET1, KET_MINUS, KET_PLUS, X, bell_state, embed, ghz_state, haar_random_state, reduced_density
from .reports import envelope, extraction_rows, fisher_dict, params_dict, qic_report, sweep_rows, trajectory_rows

COMMANDS = ("demo", "find-qic", "sweep-g", "extract", "evolve", "fisher", "verify")
TABULAR = ("sweep-g", "extract", "evolve")
CHI0 = {"0": KET0, "1": KET1, "+": KET_PLUS, "-": KET_MINUS}


class UsageFailure(Exception):
    pass


def _axis(values) -> tuple:
    v = np.asarray(values, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise UsageFailure("--axis must be nonzero")
    return tuple(v / norm)


def _source(args):
    """Resolve exactly one input source into (state, description)."""
    given = [name for name in ("state", "demo_name", "seed") if getattr(args, name, None) is not None]
    if len(given) != 1:
        raise UsageFailure("give exactly one input source: --state PATH, --demo NAME or --seed S")
    if args.state is not None:
        return load_state(args.state), {"state_path": str(args.state)}
    if args.seed is not None:
        return haar_random_state(args.n, args.seed), {"haar": {"n": args.n, "seed": args.seed}}
    return _demo_state(args.demo_name, args), {"demo": args.demo_name}


def _demo_state(name, args):
    if name == "bell":
        return bell_state()
    if name == "ghz":
        return ghz_state()
    if name == "haar":
        return haar_random_state(args.n, 0 if args.seed is None else args.seed)
    raise UsageFailure(f"unknown demo {name!r}")


def cmd_demo(args) -> tuple[dict, bool]:
    theta = args.theta
    if args.name == "ghz":
        fx = ghz_fixture()
        psi_t = apply_write(fx.state, WriteOp(theta))
        exps = {}
        ok = True
        for key, q in (("qic1", fx.qic1), ("qic2", fx.qic2)):
            ex = extract(psi_t, q)
            crit = check_qic(fx.state, q)
            ok &= crit.passed
            exps[key] = {"operators": q.to_dict(), "criteria": crit.as_dict(),
                         "readout_bloch": ex.readout_bloch, "residual_fisher": ex.residual_fisher}
        witness = alternate_qic(fx.state, fx.construction, linalg.tensor(X, X))
        body = {
            "fisher": fisher_dict(fx.state, embed(np.diag([1, -1]), 0, 3), theta),
            "qics": exps,
            "alternate_from_involution_XX_matches_qic2": all(
                np.array_equal(a, b) for a, b in zip(witness.alt_qic.sigma, fx.qic2.sigma)),
            "qic1_vs_qic2_equivalent": witness.equivalence.equivalent,
            "equivalence_residual": witness.equivalence.residual,
        }
        return body, ok
    if args.name == "bell":
        psi = bell_state()
        psi_t = apply_write(psi, WriteOp(theta))
        pair = max_entangled_partner(psi)
        neg = extract(psi_t, VirtualQubit.physical(0, 2))
        con = construct_qic(psi)
        crit = check_qic(psi, con.qic, phi=con.phi)
        body = {
            "fisher": fisher_dict(psi, embed(np.diag([1, -1]), 0, 2), theta),
            "reduced_first_qubit": reduced_density(psi_t, [0]),
            "max_entangled_pair": None if isinstance(pair, NotPossible) else {
                "params": params_dict(pair.params), "purity_b": pair.entanglement_purity},
            "physical_qubit_extraction": {"readout_bloch": neg.readout_bloch, "readout_purity": neg.readout_purity,
                                          "residual_fisher": neg.residual_fisher},
            "qic": qic_report(psi, con, crit),
        }
        return body, crit.passed
    psi = haar_random_state(args.n, args.seed if args.seed is not None else 0)
    con = construct_qic(psi, _axis(args.axis))
    crit = check_qic(psi, con.qic, con.generator, phi=con.phi)
    return {"qic": qic_report(psi, con, crit)}, crit.passed


def cmd_find_qic(args, psi):
    con = construct_qic(psi, _axis(args.axis))
    crit = check_qic(psi, con.qic, con.generator, phi=con.phi)
    return {"qic": qic_report(psi, con, crit)}, crit.passed


def cmd_sweep_g(args, psi):
    if args.g_points < 2:
        raise UsageFailure("--g-points must be >= 2")
    header, rows = sweep_rows(psi, args.g_points)
    worst = max(abs(r[3]) for r in rows)
    return header, rows, worst <= config.get().pure


def cmd_extract(args, psi):
    con = construct_qic(psi, _axis(args.axis))
    header, rows = extraction_rows(psi, con.qic, con.generator, THETA_GRID, CHI0[args.chi0])
    ok = all(r[4] >= 1 - config.get().pure and abs(r[6]) <= config.get().residual_fisher for r in rows)
    return header, rows, ok


def _hamiltonian(args, n):
    if args.hamiltonian is not None:
        h = load_hamiltonian(args.hamiltonian)
        if h.n_qubits != n:
            raise UsageFailure(f"Hamiltonian acts on {h.n_qubits} qubits, state on {n}")
        return h, {"hamiltonian_path": str(args.hamiltonian)}
    if args.preset == "random":
        return random_two_local(n, args.h_seed), {"preset": "random", "seed": args.h_seed}
    if args.preset == "ising":
        return PRESETS["ising"](n, args.J, args.hx), {"preset": "ising", "J": args.J, "h_x": args.hx}
    return PRESETS["xxz"](n, args.J, args.delta), {"preset": "xxz", "J": args.J, "delta": args.delta}


def cmd_evolve(args, psi):
    h, h_desc = _hamiltonian(args, psi.n_qubits)
    times = np.linspace(0.0, args.t_max, args.t_steps)
    con = construct_qic(psi, _axis(args.axis))
    psi_t = apply_write(psi, WriteOp(args.theta, _axis(args.axis)))
    header, rows = trajectory_rows(psi_t, con.qic, h, times, con.generator)
    fisher = [r[1] for r in rows]
    ok = max(fisher) - min(fisher) <= 1e-7 and min(r[2] for r in rows) >= 1 - config.get().pure
    return header, rows, ok, h_desc


def cmd_fisher(args, psi):
    axis = _axis(args.axis)
    g = embed(axis_generator(axis), 0, psi.n_qubits)
    rep = fisher_dict(psi, g, args.theta)
    return {"axis": axis, "theta": args.theta, "fisher": rep}, rep["agrees"]


def cmd_verify(args, psi):
    con = construct_qic(psi, _axis(args.axis))
    crit = check_qic(psi, con.qic, con.generator, phi=con.phi)
    body = {"qic": qic_report(psi, con, crit)}
    ok = crit.passed
    if con.partner is not None:
        pc = check_partner(psi, con.qic, con.partner)
        body["partner_check"] = {"algebra_ok": pc.algebra_ok, "locality_ok": pc.locality_ok,
                                 "purity": pc.purity, "is_partner": pc.is_partner}
        ok &= pc.is_partner
    if psi.n_qubits >= 2:
        w = alternate_qic(psi, con)
        alt = check_qic(psi, w.alt_qic, con.generator)
        body["alternate_qic"] = {"criteria": alt.as_dict(), "equivalent_to_base": w.equivalence.equivalent,
                                 "equivalence_residual": w.equivalence.residual}
        ok &= alt.passed and not w.equivalence.equivalent
    return body, ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qic", description="Find, verify and extract quantum information capsules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, source=True):
        if source:
            p.add_argument("--state", type=Path, help="state JSON file")
            p.add_argument("--demo", dest="demo_name", choices=["bell", "ghz", "haar"], help="built-in state")
        p.add_argument("--seed", type=int, help="seed for a Haar-random state")
        p.add_argument("--n", type=int, default=4, help="qubits for Haar-random states (default 4)")
        p.add_argument("--theta", type=float, default=0.3)
        p.add_argument("--axis", type=float, nargs=3, default=[0.0, 0.0, 1.0], metavar=("NX", "NY", "NZ"))
        p.add_argument("-o", "--output", type=Path, help="report file (default stdout)")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")

    p = sub.add_parser("demo", help="worked examples: bell, ghz, haar")
    p.add_argument("name", choices=["bell", "ghz", "haar"])
    common(p, source=False)
    common(sub.add_parser("find-qic", help="construct a QIC and check its criteria"))
    p = sub.add_parser("sweep-g", help="purity of the partner B' across the disentangler family")
    common(p)
    p.add_argument("--g-points", type=int, default=64)
    p = sub.add_parser("extract", help="swap the QIC out over the theta grid")
    common(p)
    p.add_argument("--chi0", choices=sorted(CHI0), default="0", help="readout qubit preparation")
    p = sub.add_parser("evolve", help="track a QIC under Hamiltonian evolution")
    common(p)
    p.add_argument("--hamiltonian", type=Path, help="Hamiltonian JSON file")
    p.add_argument("--preset", choices=["ising", "xxz", "random"], default="ising")
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--hx", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--h-seed", type=int, default=0)
    p.add_argument("--t-max", type=float, default=4.0)
    p.add_argument("--t-steps", type=int, default=9)
    common(sub.add_parser("fisher", help="analytic and finite-difference Fisher information"))
    common(sub.add_parser("verify", help="validate a state and every QIC construction on it"))
    return parser


def _emit(text: str, output: Path | None):
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("csv" if args.command in TABULAR else "json")
    try:
        if fmt == "csv" and args.command not in TABULAR:
            raise UsageFailure(f"csv output is only available for {', '.join(TABULAR)}")
        if args.command == "demo":
            body, ok = cmd_demo(args)
            source = {"demo": args.name}
        else:
            psi, source = _source(args)
            if args.command in TABULAR:
                handler = {"sweep-g": cmd_sweep_g, "extract": cmd_extract, "evolve": cmd_evolve}[args.command]
                header, rows, ok, *extra = handler(args, psi)
                if extra:
                    source = {**source, "hamiltonian": extra[0]}
                if fmt == "csv":
                    _emit(rows_to_csv(header, rows), args.output)
                    if not ok:
                        print(f"qic: {args.command} criteria failed", file=sys.stderr)
                    return 0 if ok else 2
                body = {"columns": header, "rows": rows, "passed": ok}
            else:
                handler = {"find-qic": cmd_find_qic, "fisher": cmd_fisher, "verify": cmd_verify}[args.command]
                body, ok = handler(args, psi)
        body = {"passed": ok, **body} if "passed" not in body else body
        _emit(dumps_report(envelope(args.command, source, body, not args.no_timestamp)), args.output)
    except (UsageFailure, QICError, FormatError, ValueError) as exc:
        print(f"qic: error: {exc}", file=sys.stderr)
        return 2
    if not ok:
        print(f"qic: {args.command} criteria failed", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
