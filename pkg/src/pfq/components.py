"""Optical elements as sparse mode-to-mode transfers, and in-line circuits.

Conventions:

* beam splitters are symmetric, ``(1/sqrt2) [[1, i], [i, 1]]``;
* a polarizing beam splitter transmits H and reflects V onto the other
  path with a factor ``i``;
* a comb filter is a two-port splitter whose power reflectance is ``eps`` on
  PASS bands and ``1 - eps`` on REFLECT bands, so it is lossless for every
  crosstalk level;
* mirror and propagation phases are absorbed into the phase shifters.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .comb import BandMap
from .state import H, V, Frequency, Mode, PathLabel, PhotonState, path_sort_key

SQRT_HALF = 1 / math.sqrt(2)
NPBS_MATRIX = SQRT_HALF * np.array([[1, 1j], [1j, 1]])


class CircuitError(ValueError):
    """Invalid circuit construction or application."""

    def __init__(self, message: str, stage: int | None = None):
        self.stage = stage
        if stage is not None:
            message = f"stage {stage}: {message}"
        super().__init__(message)


class ConfigurationError(CircuitError):
    """A component was asked to act outside the range it was configured for."""


def leak_path(path: PathLabel) -> str:
    """Path label that holds light a shifter failed to convert."""
    return f"leak:{path}"


def is_leak_path(path: PathLabel) -> bool:
    return isinstance(path, str) and path.startswith("leak:")


def _distinct(a: PathLabel, b: PathLabel, kind: str):
    if a == b:
        raise CircuitError(f"{kind} needs two distinct ports, got {a!r} twice")


def _two_port(state: PhotonState, path_a: PathLabel, path_b: PathLabel,
              matrix_for: Callable[[Frequency, str], np.ndarray | None]) -> PhotonState:
    """Apply a 2x2 matrix per (frequency, polarization) class across two paths.

    ``matrix_for`` returns None to leave a class untouched.
    """
    out: dict[Mode, complex] = {}
    classes: dict[tuple[Frequency, str], list[complex]] = {}
    for md, a in state.items():
        if md.path == path_a:
            classes.setdefault((md.freq, md.pol), [0j, 0j])[0] += a
        elif md.path == path_b:
            classes.setdefault((md.freq, md.pol), [0j, 0j])[1] += a
        else:
            out[md] = out.get(md, 0j) + a
    for (freq, pol), (a, b) in classes.items():
        mat = matrix_for(freq, pol)
        if mat is None:
            na, nb = a, b
        else:
            na = mat[0, 0] * a + mat[0, 1] * b
            nb = mat[1, 0] * a + mat[1, 1] * b
        out[Mode(freq, path_a, pol)] = complex(na)
        out[Mode(freq, path_b, pol)] = complex(nb)
    return PhotonState(out, state.loss)


def _map_path(state: PhotonState, path: PathLabel,
              fn: Callable[[Mode, complex], tuple[Mode, complex]]) -> PhotonState:
    out: dict[Mode, complex] = {}
    for md, a in state.items():
        if md.path == path:
            md, a = fn(md, a)
        out[md] = out.get(md, 0j) + a
    return PhotonState(out, state.loss)


@dataclass(frozen=True)
class NPBS:
    path_a: PathLabel
    path_b: PathLabel

    def __post_init__(self):
        _distinct(self.path_a, self.path_b, "npbs")

    @property
    def paths(self):
        return (self.path_a, self.path_b)

    def transfer(self, state: PhotonState) -> PhotonState:
        return _two_port(state, self.path_a, self.path_b, lambda f, p: NPBS_MATRIX)


_PBS_V = np.array([[0, 1j], [1j, 0]])


@dataclass(frozen=True)
class PBS:
    path_a: PathLabel
    path_b: PathLabel

    def __post_init__(self):
        _distinct(self.path_a, self.path_b, "pbs")

    @property
    def paths(self):
        return (self.path_a, self.path_b)

    def transfer(self, state: PhotonState) -> PhotonState:
        return _two_port(state, self.path_a, self.path_b,
                         lambda f, p: _PBS_V if p == V else None)


@dataclass(frozen=True)
class FS:
    """Frequency shifter: ``(k, m) -> (k + dk, m + dm)`` with efficiency ``eta``.

    Unconverted power goes to the loss accumulator, or with ``leak=True`` stays
    at the original frequency on a separate leakage path.
    """

    path: PathLabel
    dk: int = 0
    dm: int = 0
    eta: float = 1.0
    leak: bool = False

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise CircuitError(f"shifter efficiency must lie in (0, 1], got {self.eta}")

    @property
    def paths(self):
        return (self.path,)

    def transfer(self, state: PhotonState) -> PhotonState:
        gain = math.sqrt(self.eta)
        spill = math.sqrt(1 - self.eta)
        out: dict[Mode, complex] = {}
        lost = 0.0
        for md, a in state.items():
            if md.path != self.path:
                out[md] = out.get(md, 0j) + a
                continue
            shifted = md.moved(freq=md.freq.shifted(self.dk, self.dm))
            out[shifted] = out.get(shifted, 0j) + gain * a
            if self.eta < 1:
                if self.leak:
                    kept = md.moved(path=leak_path(self.path))
                    out[kept] = out.get(kept, 0j) + spill * a
                else:
                    lost += (1 - self.eta) * abs(a) ** 2
        return PhotonState(out, state.loss + lost)


@dataclass(frozen=True)
class PS:
    """Frequency-independent phase shift ``exp(i*theta)`` on one path."""

    path: PathLabel
    theta: float

    @property
    def paths(self):
        return (self.path,)

    def transfer(self, state: PhotonState) -> PhotonState:
        phase = cmath.exp(1j * self.theta)
        return _map_path(state, self.path, lambda md, a: (md, phase * a))


@dataclass(frozen=True)
class HWP:
    """Half-wave plate at 45 degrees: swaps H and V on one path."""

    path: PathLabel

    @property
    def paths(self):
        return (self.path,)

    def transfer(self, state: PhotonState) -> PhotonState:
        return _map_path(state, self.path,
                         lambda md, a: (md.moved(pol=V if md.pol == H else H), a))


def cf_matrix(reflect: bool, epsilon: float) -> np.ndarray:
    c = math.sqrt(1 - epsilon)
    s = math.sqrt(epsilon)
    if reflect:
        c, s = s, c
    return np.array([[c, 1j * s], [1j * s, c]])


@dataclass(frozen=True)
class CF:
    """Comb filter between two ports, routed per frequency band."""

    path_a: PathLabel
    path_b: PathLabel
    bandmap: BandMap
    epsilon: float = 0.0

    def __post_init__(self):
        _distinct(self.path_a, self.path_b, "cf")
        if not 0 <= self.epsilon < 1:
            raise CircuitError(f"crosstalk must lie in [0, 1), got {self.epsilon}")

    @property
    def paths(self):
        return (self.path_a, self.path_b)

    def transfer(self, state: PhotonState) -> PhotonState:
        matrices = (cf_matrix(False, self.epsilon), cf_matrix(True, self.epsilon))

        def pick(freq: Frequency, pol: str):
            if not 0 <= freq.k < self.bandmap.size:
                raise ConfigurationError(
                    f"frequency index {freq.k} has no band in a "
                    f"{self.bandmap.n}-qubit comb filter")
            return matrices[self.bandmap.reflects(freq.k)]

        return _two_port(state, self.path_a, self.path_b, pick)


@dataclass(frozen=True)
class BB:
    """Black box: a wedge giving no delay (bit 0) or a pi delay (bit 1)."""

    path: PathLabel
    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise CircuitError(f"black-box bit must be 0 or 1, got {self.bit!r}")

    @property
    def paths(self):
        return (self.path,)

    def transfer(self, state: PhotonState) -> PhotonState:
        if self.bit == 0:
            return state
        return _map_path(state, self.path, lambda md, a: (md, -a))


@dataclass(frozen=True)
class Mirror:
    """Fold mirror.  With a second path it exchanges the two paths' contents."""

    path_a: PathLabel
    path_b: PathLabel | None = None

    def __post_init__(self):
        if self.path_b is not None:
            _distinct(self.path_a, self.path_b, "mirror")

    @property
    def paths(self):
        return (self.path_a,) if self.path_b is None else (self.path_a, self.path_b)

    def transfer(self, state: PhotonState) -> PhotonState:
        if self.path_b is None:
            return state
        swap = {self.path_a: self.path_b, self.path_b: self.path_a}
        out = {}
        for md, a in state.items():
            if md.path in swap:
                md = md.moved(path=swap[md.path])
            out[md] = a
        return PhotonState(out, state.loss)


Component = (NPBS, PBS, FS, PS, HWP, CF, BB, Mirror)


def apply(component, state: PhotonState) -> PhotonState:
    if not isinstance(component, Component):
        raise CircuitError(f"not an optical component: {component!r}")
    return component.transfer(state)


@dataclass(frozen=True)
class Circuit:
    """Ordered in-line cascade of components over declared paths."""

    stages: tuple = ()
    paths: tuple = (1, 2)
    name: str = ""
    description: str = ""
    n: int | None = None
    constants: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "paths", tuple(self.paths))
        object.__setattr__(self, "constants", tuple(self.constants))
        if len(set(self.paths)) != len(self.paths):
            raise CircuitError(f"duplicate path declaration in {self.paths}")
        declared = set(self.paths)
        for i, comp in enumerate(self.stages):
            if not isinstance(comp, Component):
                raise CircuitError(f"not an optical component: {comp!r}", i)
            for p in comp.paths:
                if p not in declared:
                    raise CircuitError(f"undeclared path {p!r}", i)

    def __add__(self, other: "Circuit") -> "Circuit":
        return concat([self, other], name=self.name, description=self.description)

    def __len__(self):
        return len(self.stages)

    def shifter_count(self, path: PathLabel) -> int:
        return sum(1 for c in self.stages if isinstance(c, FS) and c.path == path)


def concat(circuits: Sequence[Circuit], name: str = "", description: str = "",
           n: int | None = None) -> Circuit:
    paths: list = []
    stages: list = []
    for c in circuits:
        for p in c.paths:
            if p not in paths:
                paths.append(p)
        stages.extend(c.stages)
        if n is None:
            n = c.n
    return Circuit(tuple(stages), tuple(sorted(paths, key=path_sort_key)), name, description, n)


def run_circuit(circuit: Circuit, state: PhotonState, prune: float = 0.0) -> PhotonState:
    """Fold the stages over ``state`` in order."""
    declared = set(circuit.paths)
    stray = {p for p in state.paths() if p not in declared and not is_leak_path(p)}
    # a circuit with no stages touches nothing, so any input passes through
    if stray and circuit.stages:
        raise CircuitError(f"input state uses undeclared paths {sorted(map(str, stray))}")
    for i, comp in enumerate(circuit.stages):
        try:
            state = comp.transfer(state)
        except CircuitError as err:
            raise type(err)(str(err), i) from err
        if prune > 0:
            state = state.pruned(prune)
    return state


def transfer_matrix(circuit: Circuit, n: int, path: PathLabel = 1, pol: str = H) -> np.ndarray:
    """Frequency-register matrix of ``circuit`` on one path: column k = image of |k>."""
    dim = 2 ** n
    cols = []
    for k in range(dim):
        out = run_circuit(circuit, PhotonState({Mode(Frequency(k), path, pol): 1.0}))
        cols.append(out.register_vector(n, path, pol))
    return np.column_stack(cols)
