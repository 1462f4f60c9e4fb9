"""Single-photon states over frequency x path x polarization modes.

A photon frequency qubit register of ``n`` qubits lives on the grid of
``2**n`` frequencies ``w0 + k*dw``.  Frequencies are kept as exact integer
pairs ``(k, m)``: ``k`` counts grid spacings and ``m`` counts small beat
detunings.  Only frequency differences ever reach a detector, so the base
frequency stays symbolic.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

PathLabel = Union[int, str]

H = "H"
V = "V"
POLARIZATIONS = (H, V)


class DegenerateStateError(ValueError):
    """Raised when a state with zero norm would have to be normalized."""


@dataclass(frozen=True, order=True)
class Frequency:
    """Grid frequency ``w0 + k*dw + m*delta``."""

    k: int
    m: int = 0

    def shifted(self, dk: int = 0, dm: int = 0) -> "Frequency":
        return Frequency(self.k + dk, self.m + dm)

    def angular_offset(self, constants: "PhysicalConstants") -> float:
        """Angular frequency above ``w0`` in rad/s."""
        return self.k * constants.delta_omega_num + self.m * constants.delta_num


def path_sort_key(path: PathLabel):
    if isinstance(path, int):
        return (0, path, "")
    return (1, 0, str(path))


@dataclass(frozen=True)
class Mode:
    freq: Frequency
    path: PathLabel = 1
    pol: str = H

    def __post_init__(self):
        if self.pol not in POLARIZATIONS:
            raise ValueError(f"polarization must be 'H' or 'V', got {self.pol!r}")

    def sort_key(self):
        return (self.freq.k, self.freq.m, path_sort_key(self.path), self.pol)

    def moved(self, *, freq: Frequency | None = None, path: PathLabel | None = None,
              pol: str | None = None) -> "Mode":
        return Mode(
            self.freq if freq is None else freq,
            self.path if path is None else path,
            self.pol if pol is None else pol,
        )


def mode(k: int = 0, m: int = 0, path: PathLabel = 1, pol: str = H) -> Mode:
    """Shorthand constructor used throughout the tests and builders."""
    return Mode(Frequency(k, m), path, pol)


@dataclass(frozen=True)
class PhysicalConstants:
    """Numeric values for the symbolic frequency units.

    Defaults: 1 MHz beats, an 80 MHz grid spacing (acousto-optic shifter
    scale), 85 % shifter conversion efficiency and crosstalk-free filters.
    """

    delta_omega_num: float = 2 * math.pi * 80e6
    delta_num: float = 2 * math.pi * 1e6
    eta_fs: float = 0.85
    epsilon_cf: float = 0.0

    def __post_init__(self):
        if self.delta_omega_num <= 0 or self.delta_num <= 0:
            raise ValueError("frequency units must be positive")
        if not 0 < self.eta_fs <= 1:
            raise ValueError(f"eta_fs must lie in (0, 1], got {self.eta_fs}")
        if not 0 <= self.epsilon_cf < 1:
            raise ValueError(f"epsilon_cf must lie in [0, 1), got {self.epsilon_cf}")
        if self.delta_num / self.delta_omega_num > 0.1:
            warnings.warn(
                "beat detuning is not small against the grid spacing "
                f"(ratio {self.delta_num / self.delta_omega_num:.3g})",
                stacklevel=2,
            )

    @classmethod
    def ideal(cls, **overrides) -> "PhysicalConstants":
        """Lossless shifters and crosstalk-free filters."""
        values = dict(eta_fs=1.0, epsilon_cf=0.0)
        values.update(overrides)
        return cls(**values)

    def replace(self, **overrides) -> "PhysicalConstants":
        values = dict(
            delta_omega_num=self.delta_omega_num,
            delta_num=self.delta_num,
            eta_fs=self.eta_fs,
            epsilon_cf=self.epsilon_cf,
        )
        values.update(overrides)
        return PhysicalConstants(**values)


class PhotonState:
    """Immutable single-photon amplitude map plus a scalar loss accumulator.

    Entries with an exactly zero amplitude are never stored; every other
    amplitude is kept unless a prune threshold is explicitly requested.
    """

    __slots__ = ("_amps", "_loss")

    def __init__(self, amplitudes: Mapping[Mode, complex] | None = None, loss: float = 0.0):
        amps: dict[Mode, complex] = {}
        for md, a in (amplitudes or {}).items():
            if not isinstance(md, Mode):
                raise TypeError(f"keys must be Mode, got {type(md).__name__}")
            a = complex(a)
            if a != 0:
                amps[md] = a
        if loss < 0:
            raise ValueError("loss must be non-negative")
        self._amps = amps
        self._loss = float(loss)

    @property
    def amplitudes(self) -> Mapping[Mode, complex]:
        return MappingProxyType(self._amps)

    @property
    def loss(self) -> float:
        return self._loss

    def __getitem__(self, md: Mode) -> complex:
        return self._amps.get(md, 0j)

    def __iter__(self) -> Iterator[Mode]:
        return iter(self._amps)

    def __len__(self) -> int:
        return len(self._amps)

    def items(self):
        return self._amps.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhotonState):
            return NotImplemented
        return self._amps == other._amps and self._loss == other._loss

    def __hash__(self):
        return hash((frozenset(self._amps.items()), self._loss))

    def __repr__(self) -> str:
        terms = ", ".join(
            f"({md.freq.k},{md.freq.m},{md.path!r},{md.pol}): {a:.6g}"
            for md, a in self.sorted_items()
        )
        return f"PhotonState({{{terms}}}, loss={self._loss:.6g})"

    def sorted_items(self) -> list[tuple[Mode, complex]]:
        return sorted(self._amps.items(), key=lambda kv: kv[0].sort_key())

    def __mul__(self, scalar: complex) -> "PhotonState":
        # scales amplitudes only; loss bookkeeping is a property of the history
        return PhotonState({md: scalar * a for md, a in self._amps.items()}, self._loss)

    __rmul__ = __mul__

    def __neg__(self) -> "PhotonState":
        return self * -1

    def power(self) -> float:
        return float(sum(abs(a) ** 2 for a in self._amps.values()))

    def paths(self) -> set:
        return {md.path for md in self._amps}

    def on_path(self, path: PathLabel) -> "PhotonState":
        return PhotonState({md: a for md, a in self._amps.items() if md.path == path})

    def path_amplitude(self, path: PathLabel) -> complex:
        """Coherent sum of all amplitudes on ``path``."""
        return complex(sum(a for md, a in self._amps.items() if md.path == path))

    def with_loss(self, extra: float) -> "PhotonState":
        return PhotonState(self._amps, self._loss + extra)

    def pruned(self, threshold: float) -> "PhotonState":
        """Move modes with ``|a|**2 < threshold`` into the loss accumulator."""
        if threshold <= 0:
            return self
        kept, dropped = {}, 0.0
        for md, a in self._amps.items():
            p = abs(a) ** 2
            if p < threshold:
                dropped += p
            else:
                kept[md] = a
        return PhotonState(kept, self._loss + dropped)

    def register_vector(self, n: int, path: PathLabel = 1, pol: str = H, m: int = 0) -> np.ndarray:
        """Amplitudes on the ``2**n`` grid frequencies of one path as a vector."""
        vec = np.zeros(2 ** n, dtype=complex)
        for k in range(2 ** n):
            vec[k] = self[Mode(Frequency(k, m), path, pol)]
        return vec

    def to_dict(self) -> dict:
        return {
            "modes": [
                {"k": md.freq.k, "m": md.freq.m, "path": md.path, "pol": md.pol,
                 "re": a.real, "im": a.imag}
                for md, a in self.sorted_items()
            ],
            "loss": self._loss,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "PhotonState":
        amps: dict[Mode, complex] = {}
        for entry in data.get("modes", []):
            md = Mode(Frequency(int(entry["k"]), int(entry.get("m", 0))),
                      entry.get("path", 1), entry.get("pol", H))
            amps[md] = amps.get(md, 0j) + complex(float(entry["re"]), float(entry.get("im", 0.0)))
        return cls(amps, float(data.get("loss", 0.0)))

    @classmethod
    def from_json(cls, text: str) -> "PhotonState":
        return cls.from_dict(json.loads(text))


def basis_state(md: Mode) -> PhotonState:
    return PhotonState({md: 1.0})


def superpose(terms: Iterable[tuple[Mode, complex]], normalize: bool = False) -> PhotonState:
    """Build a state from ``(mode, amplitude)`` terms; duplicate modes add."""
    terms = list(terms)
    if not terms:
        raise ValueError("superpose needs at least one term")
    amps: dict[Mode, complex] = {}
    for md, a in terms:
        amps[md] = amps.get(md, 0j) + complex(a)
    state = PhotonState(amps)
    if normalize:
        nrm = norm(state)
        if nrm == 0:
            raise DegenerateStateError("cannot normalize an all-zero superposition")
        state = state * (1 / nrm)
    return state


def register_state(vector, path: PathLabel = 1, pol: str = H, m: int = 0) -> PhotonState:
    """Place a length-``2**n`` amplitude vector onto the frequency grid."""
    return PhotonState({Mode(Frequency(k, m), path, pol): a for k, a in enumerate(vector)})


def encode_bits(bits: str) -> int:
    """Grid index of a bit string; qubit 1 is the leftmost, most significant bit."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"expected a non-empty string of 0/1, got {bits!r}")
    return int(bits, 2)


def decode_bits(k: int, n: int) -> str:
    if n < 1 or not 0 <= k < 2 ** n:
        raise ValueError(f"index {k} out of range for {n} qubits")
    return format(k, f"0{n}b")


def qubit_weight(n: int, qubit: int) -> int:
    """Grid spacing carried by ``qubit`` (1-based) in an ``n``-qubit register."""
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    return 2 ** (n - qubit)


def bit_of(k: int, n: int, qubit: int) -> int:
    return (k // qubit_weight(n, qubit)) % 2


def norm(state: PhotonState) -> float:
    return math.sqrt(state.power())


def inner(s1: PhotonState, s2: PhotonState) -> complex:
    """``<s1|s2>``."""
    small, big = (s1, s2) if len(s1) <= len(s2) else (s2, s1)
    total = 0j
    for md in small:
        if md in big.amplitudes:
            total += s1[md].conjugate() * s2[md]
    return total


def global_phase_equal(s1: PhotonState, s2: PhotonState, tol: float = 1e-10) -> bool:
    """True when ``s1 == exp(i*g) * s2`` for some real ``g``, within ``tol``."""
    return phase_aligned_deviation(s1, s2) <= tol


def phase_aligned_deviation(s1: PhotonState, s2: PhotonState) -> float:
    """Largest amplitude deviation after aligning ``s2`` to ``s1`` by one phase."""
    overlap = inner(s2, s1)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    modes = set(s1) | set(s2)
    if not modes:
        return 0.0
    return max(abs(s1[md] - phase * s2[md]) for md in modes)
