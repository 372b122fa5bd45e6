"""File formats: state, virtual-qubit and Hamiltonian JSON; report JSON and CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import config
from .config import QICError
from .correlation import VirtualQubit
from .dynamics import HamiltonianSpec
from .qubits import StateVector


class FormatError(QICError):
    pass


def state_from_dict(data: dict) -> StateVector:
    try:
        n = int(data["n_qubits"])
        amps = np.array([complex(float(re), float(im)) for re, im in data["amps"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed state: {exc}") from exc
    if n < 1 or amps.size != 2**n:
        raise FormatError(f"expected {2 ** n if n >= 1 else '2^N'} amplitudes for n_qubits={n}, got {amps.size}")
    if 2**n > config.get().max_state_dim:
        raise FormatError(f"state dimension {2 ** n} exceeds cap {config.get().max_state_dim}")
    if not np.all(np.isfinite(amps)):
        raise FormatError("state has non-finite amplitudes")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1) > config.get().load_norm:
        raise FormatError(f"state norm {norm:.12g} is not within {config.get().load_norm:g} of 1")
    return StateVector(n, amps / norm)


def state_to_dict(psi: StateVector) -> dict:
    return {"n_qubits": psi.n_qubits, "amps": [[float(a.real), float(a.imag)] for a in psi.amps]}


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON in {path}: {exc}") from exc


def load_state(path) -> StateVector:
    return state_from_dict(_read_json(path))


def save_state(psi: StateVector, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(psi)) + "\n", encoding="utf-8")


def load_hamiltonian(path) -> HamiltonianSpec:
    data = _read_json(path)
    try:
        return HamiltonianSpec.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed Hamiltonian: {exc}") from exc


def load_virtual_qubit(path) -> VirtualQubit:
    data = _read_json(path)
    try:
        return VirtualQubit.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed virtual qubit: {exc}") from exc


def dense_operator(op: np.ndarray) -> dict:
    return {"dense": [[[float(z.real), float(z.imag)] for z in row] for row in op]}


def to_jsonable(obj):
    """Recursively convert numpy values, complex numbers and NaN into JSON-safe data."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps_report(report: dict) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(to_jsonable(report), indent=2) + "\n"


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()
