"""Report builders shared by the CLI: plain dicts for JSON and row lists for CSV."""

from __future__ import annotations

import numpy as np

from . import config
from .capsule import THETA_GRID, QICConstruction, QICCriteria, build_partner_family, purity_curve_params
from .correlation import VirtualQubit, corr_state_single
from .dynamics import HamiltonianSpec, evolve_qic, evolve_state, mean_weight
from .info import extract, fisher_for_generator, generator_family, pure_fisher_fd, swap_operator
from .qubits import KET0, StateVector, schmidt_first_qubit


def params_dict(params) -> dict | None:
    if params is None:
        return None
    return {"a": params.a, "b": params.b, "c": params.c, "d": params.d, "g": params.g,
            "p0": params.p0, "overlap0": params.overlap}


def qic_report(psi: StateVector, con: QICConstruction, criteria: QICCriteria) -> dict:
    s = schmidt_first_qubit(psi)
    partner_purity = None if con.partner is None else corr_state_single(psi, con.partner).purity
    return {
        "n_qubits": psi.n_qubits,
        "schmidt_probs": s.probs,
        "schmidt_rank": s.rank,
        "disentangler": params_dict(con.params),
        "partner_purity": partner_purity,
        "capsule_state": con.phi,
        "qic": con.qic.to_dict(),
        "criteria": criteria.as_dict(),
    }


def sweep_rows(psi: StateVector, g_points: int) -> tuple[list[str], list[list]]:
    """Directly computed B' purity against the closed-form curve over g in [0, pi)."""
    params = purity_curve_params(schmidt_first_qubit(psi))
    rows = []
    for g in np.linspace(0, np.pi, g_points, endpoint=False):
        pair = build_partner_family(psi, g)
        predicted = float(params.purity(g))
        rows.append([g, pair.entanglement_purity, predicted, pair.entanglement_purity - predicted])
    return ["g", "purity", "predicted", "deviation"], rows


def extraction_rows(psi: StateVector, q: VirtualQubit, generator: np.ndarray, thetas=THETA_GRID, chi0=KET0):
    family = generator_family(generator, psi.amps)
    swap = swap_operator(q)
    rows = []
    for t in thetas:
        ex = extract(StateVector.from_amplitudes(family(t)), q, chi0, generator, swap=swap)
        r = ex.readout_bloch
        rows.append([t, r[0], r[1], r[2], ex.readout_purity, ex.readout_fisher, ex.residual_fisher, ex.remainder_fisher])
    header = ["theta", "bloch_x", "bloch_y", "bloch_z", "purity", "readout_fisher", "residual_fisher", "remainder_fisher"]
    return header, rows


def trajectory_rows(psi_theta: StateVector, q: VirtualQubit, h: HamiltonianSpec, times, generator: np.ndarray):
    """Per-time Fisher information, capsule purity and Pauli-weight profile."""
    n = psi_theta.n_qubits
    family = generator_family(generator, psi_theta.amps)
    rows = []
    for t in times:
        e = evolve_qic(q, h, t)
        u = e.propagator
        fisher = pure_fisher_fd(lambda d: u @ family(d), 0.0)
        purity = corr_state_single(evolve_state(psi_theta, h, t), e.qic).purity
        profile = e.weight_profile
        rows.append([float(t), fisher, purity, mean_weight(profile), *profile])
    header = ["t", "fisher", "purity", "mean_weight"] + [f"weight_{k}" for k in range(n + 1)]
    return header, rows


def fisher_dict(psi: StateVector, generator: np.ndarray, theta: float) -> dict:
    rep = fisher_for_generator(psi, generator, theta)
    return {"analytic": rep.analytic, "finite_diff": rep.finite_diff,
            "generator_expectation": rep.generator_expectation, "agrees": rep.agrees}


def envelope(command: str, source: dict, body: dict, timestamp: bool) -> dict:
    out = {"command": command, "input": source, "tolerances": config.as_dict()}
    if timestamp:
        from datetime import datetime, timezone

        out["timestamp"] = datetime.now(timezone.utc).isoformat()
    out.update(body)
    return out
