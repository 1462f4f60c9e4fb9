"""Logical frequency gates and the three bench emulation circuits.

Logical gates act on a register carried on path 1 and return it on path 1.
Each one splits the register with a comb filter (CF1), works on the two
arms, then folds the arms back together with a mirror and the
port-complementary comb (CF2).

Bench circuits emulate the gates without comb filters, using beam
splitters, shifters detuned by one beat unit and a detector on path 1.
"""

from __future__ import annotations

import math

from .comb import make_bandmap
from .components import BB, CF, FS, HWP, NPBS, PBS, PS, Circuit, Mirror, concat
from .state import qubit_weight

ARM_1, ARM_2 = 1, 2
SOURCE_PORT = 0
DETECTOR_PATH = 1


def _check_qubit(n: int, qubit: int):
    if n < 1:
        raise ValueError("need at least one qubit")
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")


def _split(n, qubits, epsilon):
    return [CF(ARM_1, ARM_2, make_bandmap(n, qubits, "CF1"), epsilon)]


def _recombine(n, qubits, epsilon):
    return [Mirror(ARM_1, ARM_2), CF(ARM_1, ARM_2, make_bandmap(n, qubits, "CF2"), epsilon)]


def build_fhg(n: int, target_qubit: int, eta: float = 1.0, epsilon: float = 0.0) -> Circuit:
    """Frequency Hadamard gate on ``target_qubit``.

    Realizes ``(1/sqrt2)[[1, -1], [-1, -1]]`` on the target (identity on the
    other qubits) times a global phase ``i``.  Both arms carry two shifter
    passes so that ``eta < 1`` scales the whole output by ``eta`` instead of
    distorting it.
    """
    _check_qubit(n, target_qubit)
    w = qubit_weight(n, target_qubit)
    stages = [
        *_split(n, target_qubit, epsilon),
        # bit-0 arm up onto its partner frequency; the null shifter balances loss
        FS(ARM_1, w, 0, eta),
        FS(ARM_2, 0, 0, eta),
        NPBS(ARM_1, ARM_2),
        FS(ARM_1, -w, 0, eta),
        FS(ARM_2, 0, 0, eta),
        PS(ARM_2, math.pi),
        *_recombine(n, target_qubit, epsilon),
    ]
    return Circuit(stages, (ARM_1, ARM_2), f"fhg_q{target_qubit}",
                   "frequency Hadamard (signed variant [[1,-1],[-1,-1]]/sqrt2)", n)


def _conditional_sign(n, qubits, element, epsilon, name, description) -> Circuit:
    stages = [*_split(n, qubits, epsilon), element, *_recombine(n, qubits, epsilon)]
    return Circuit(stages, (ARM_1, ARM_2), name, description, n)


def build_fqpg(n: int, flip_qubit: int, epsilon: float = 0.0) -> Circuit:
    """Frequency phase gate: sign flip on the ``flip_qubit = 1`` subspace."""
    _check_qubit(n, flip_qubit)
    return _conditional_sign(n, flip_qubit, PS(ARM_2, math.pi), epsilon,
                             f"fqpg_q{flip_qubit}", "frequency phase gate (Z)")


def build_cz(n: int, control: int, target: int, epsilon: float = 0.0) -> Circuit:
    """Sign flip where both qubits are 1: one comb whose REFLECT bands are that set."""
    _check_qubit(n, control)
    _check_qubit(n, target)
    if control == target:
        raise ValueError("control and target must differ")
    return _conditional_sign(n, (control, target), PS(ARM_2, math.pi), epsilon,
                             f"cz_q{control}_q{target}", "conditional phase (CZ)")


def build_bbphase(n: int, qubit: int, bit: int, epsilon: float = 0.0) -> Circuit:
    """Black-box phase: a pi delay on the ``qubit = 1`` subspace when ``bit`` is 1."""
    _check_qubit(n, qubit)
    return _conditional_sign(n, qubit, BB(ARM_2, bit), epsilon,
                             f"bb_q{qubit}_{bit}", "black-box phase")


def build_cnot(n: int, control: int, target: int, eta: float = 1.0,
               epsilon: float = 0.0) -> Circuit:
    """CNOT as FHG . CZ . FHG followed by a phase repair.

    ``U Z U = -X`` for the signed Hadamard, so the sandwich alone gives ``-X``
    on the control-1 block; a phase gate on the control restores ``X``.
    """
    _check_qubit(n, control)
    _check_qubit(n, target)
    if control == target:
        raise ValueError("control and target must differ")
    parts = [
        build_fhg(n, target, eta, epsilon),
        build_cz(n, control, target, epsilon),
        build_fhg(n, target, eta, epsilon),
        build_fqpg(n, control, epsilon),
    ]
    return concat(parts, f"cnot_q{control}_q{target}",
                  "CNOT = FHG . CZ . FHG . Z(control)", n)


def _source(source_coupler: bool):
    # unmonitored port of the input coupler; halves the detected intensity
    return [NPBS(ARM_1, SOURCE_PORT)] if source_coupler else []


def _bench_paths(source_coupler: bool):
    return (SOURCE_PORT, ARM_1, ARM_2) if source_coupler else (ARM_1, ARM_2)


def build_experimental_fhg(theta: float, eta: float = 1.0, source_coupler: bool = True) -> Circuit:
    """Comb-free Hadamard bench: amplitude of the beat follows ``cos(theta)``.

    First interferometer: split, phase ``theta`` on arm 1, fixed quadrature
    bias of -pi/2 on arm 2, recombine.  Second: shifters one beat unit apart,
    then a half mirror in place of the comb filter.
    """
    stages = [
        *_source(source_coupler),
        NPBS(ARM_1, ARM_2),
        PS(ARM_1, theta),
        PS(ARM_2, -math.pi / 2),
        NPBS(ARM_1, ARM_2),
        FS(ARM_1, 1, 1, eta),
        FS(ARM_2, 1, 0, eta),
        NPBS(ARM_1, ARM_2),
    ]
    return Circuit(stages, _bench_paths(source_coupler), "experimental_fhg",
                   f"Hadamard bench, theta={theta!r}, detector on path {DETECTOR_PATH}")


def build_experimental_fqpg(phi: float, eta: float = 1.0, source_coupler: bool = True) -> Circuit:
    """Polarization-tagged phase-gate bench: the beat phase follows ``phi``.

    After the first polarizing beam splitter the photon is in
    ``(i/sqrt2)|w0>_H + (i/sqrt2)|w1>_V`` on arm 2 (times the coupler factor).
    """
    stages = [
        *_source(source_coupler),
        NPBS(ARM_1, ARM_2),
        FS(ARM_1, 1, 1, eta),
        HWP(ARM_1),
        FS(ARM_2, 1, 0, eta),
        PBS(ARM_1, ARM_2),
        PBS(ARM_1, ARM_2),
        PS(ARM_2, phi),
        HWP(ARM_2),
        NPBS(ARM_1, ARM_2),
    ]
    return Circuit(stages, _bench_paths(source_coupler), "experimental_fqpg",
                   f"phase-gate bench, phi={phi!r}, detector on path {DETECTOR_PATH}")


def entangled_prefix(circuit: Circuit) -> Circuit:
    """Stages of a phase-gate bench up to and including the combining PBS."""
    for i, comp in enumerate(circuit.stages):
        if isinstance(comp, PBS):
            return Circuit(circuit.stages[: i + 1], circuit.paths, circuit.name + "_prefix")
    raise ValueError("circuit has no polarizing beam splitter")


def build_dj_circuit(bb1: int, bb2: int, eta: float = 1.0) -> Circuit:
    """Two cascaded interferometer stages with one black box each.

    Both shifters run at null detuning, so the two output arms share one
    frequency and form a stationary far-field pattern.  The arms' relative
    phase is ``(-1)**(bb1 + bb2)`` after the quadrature bias on arm 2.
    """
    for b in (bb1, bb2):
        if b not in (0, 1):
            raise ValueError(f"black-box settings are bits, got {b!r}")
    stages = [
        NPBS(ARM_1, ARM_2),
        BB(ARM_1, bb1),
        NPBS(ARM_1, ARM_2),
        NPBS(ARM_1, ARM_2),
        BB(ARM_1, bb2),
        FS(ARM_1, 1, 0, eta),
        FS(ARM_2, 1, 0, eta),
        PS(ARM_2, math.pi / 2),
    ]
    return Circuit(stages, (ARM_1, ARM_2), f"dj_{bb1}{bb2}",
                   "Deutsch-Jozsa, far-field read-out of paths 1 and 2")
