"""Dense 2**n matrix reference for gate programs.

Independent of the optical model: gates are plain Kronecker embeddings,
qubit 1 being the most significant bit of the frequency index.
"""

from __future__ import annotations

import numpy as np

MAX_QUBITS = 10

# the signed, involutory Hadamard realized by the frequency Hadamard gate
U_FHG = np.array([[1, -1], [-1, -1]], dtype=complex) / np.sqrt(2)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


class OracleError(ValueError):
    pass


def embed(gate: np.ndarray, qubit: int, n: int) -> np.ndarray:
    mats = [gate if q == qubit else IDENTITY for q in range(1, n + 1)]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _projector(qubit: int, n: int, value: int) -> np.ndarray:
    p = np.diag([1 - value, value]).astype(complex)
    return embed(p, qubit, n)


def controlled(gate: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    return _projector(control, n, 0) + _projector(control, n, 1) @ embed(gate, target, n)


def op_matrix(op, n: int) -> np.ndarray:
    name, *args = op
    name = name.upper()
    for q in args[:1] if name == "BBPHASE" else args:
        if not 1 <= q <= n:
            raise OracleError(f"qubit {q} out of range 1..{n} in {op!r}")
    if name == "H":
        return embed(U_FHG, args[0], n)
    if name == "Z":
        return embed(PAULI_Z, args[0], n)
    if name == "BBPHASE":
        return embed(PAULI_Z, args[0], n) if args[1] else np.eye(2 ** n, dtype=complex)
    if name in ("CZ", "CNOT"):
        c, t = args
        if c == t:
            raise OracleError(f"{name} needs distinct qubits, got {c} twice")
        return controlled(PAULI_Z if name == "CZ" else PAULI_X, c, t, n)
    raise OracleError(f"unknown gate {name!r}")


def dense_oracle(program, n: int | None = None) -> np.ndarray:
    """Product of the program's gate matrices, first op applied first.

    ``program`` is a GateProgram or a plain sequence of op tuples.
    """
    ops = getattr(program, "ops", program)
    if n is None:
        n = program.n
    if n > MAX_QUBITS:
        raise OracleError(f"dense oracle limited to {MAX_QUBITS} qubits, got {n}")
    if n < 1:
        raise OracleError("need at least one qubit")
    out = np.eye(2 ** n, dtype=complex)
    for op in ops:
        out = op_matrix(tuple(op), n) @ out
    return out


def phase_aligned_error(actual: np.ndarray, expected: np.ndarray) -> float:
    """Max elementwise deviation after removing one shared global phase."""
    overlap = np.vdot(expected, actual)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(actual - phase * expected)))
