"""Comb-filter band maps and idealized reflectance spectra.

A comb filter is a multi-band edge mirror: each grid frequency either
passes straight through or is reflected onto the other port.  The band
assignment for qubit ``i`` depends only on bit ``i`` of the grid index.
Spectra use flat plateaus with raised-cosine edges; no thin-film physics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .state import bit_of

PASS = "PASS"
REFLECT = "REFLECT"
ROLES = ("CF1", "CF2")


class BandError(ValueError):
    """Frequency outside the grid a band map is defined on."""


@dataclass(frozen=True)
class BandMap:
    """Band assignment over ``k in [0, 2**n)``.

    ``qubits`` selects the bits that must all be 1 for a CF1 band to reflect;
    a single qubit gives the plain per-qubit comb.  CF2 is the
    port-complementary assignment: same band positions, ports exchanged.
    """

    n: int
    qubits: tuple[int, ...]
    role: str = "CF1"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a band map needs at least one qubit")
        if not self.qubits:
            raise ValueError("a band map needs at least one selecting qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.qubits}")
        for q in self.qubits:
            if not 1 <= q <= self.n:
                raise ValueError(f"qubit {q} out of range 1..{self.n}")
        if self.role not in ROLES:
            raise ValueError(f"role must be CF1 or CF2, got {self.role!r}")

    @property
    def size(self) -> int:
        return 2 ** self.n

    @property
    def target_qubit(self) -> int:
        return self.qubits[0]

    def reflects(self, k: int) -> bool:
        if not 0 <= k < self.size:
            raise BandError(f"frequency index {k} has no band in a {self.n}-qubit comb")
        selected = all(bit_of(k, self.n, q) for q in self.qubits)
        return selected if self.role == "CF1" else not selected

    def assignment(self, k: int) -> str:
        return REFLECT if self.reflects(k) else PASS

    def table(self) -> dict[int, str]:
        return {k: self.assignment(k) for k in range(self.size)}

    def complement(self) -> "BandMap":
        return BandMap(self.n, self.qubits, "CF2" if self.role == "CF1" else "CF1")

    def reflect_set(self) -> list[int]:
        return [k for k in range(self.size) if self.reflects(k)]


def make_bandmap(n: int, target_qubit: int | Sequence[int], role: str = "CF1") -> BandMap:
    if isinstance(target_qubit, int):
        qubits = (target_qubit,)
    else:
        qubits = tuple(int(q) for q in target_qubit)
    return BandMap(n, qubits, role.upper())


def _raised_cosine_step(u: np.ndarray) -> np.ndarray:
    """0 -> 1 smooth step on u in [0, 1], clamped outside."""
    u = np.clip(u, 0.0, 1.0)
    return 0.5 * (1.0 - np.cos(np.pi * u))


def band_indicator(bandmap: BandMap, x: np.ndarray, edge_width: float) -> np.ndarray:
    """Smoothed REFLECT indicator at offsets ``x`` (units of the grid spacing).

    Cell ``k`` spans ``[k - 1/2, k + 1/2]``; transitions of total width
    ``edge_width`` sit on the interior cell boundaries.  Outside the grid the
    end-cell values are held.
    """
    x = np.asarray(x, dtype=float)
    values = np.array([1.0 if bandmap.reflects(k) else 0.0 for k in range(bandmap.size)])
    cell = np.clip(np.floor(x + 0.5).astype(int), 0, bandmap.size - 1)
    s = values[cell]
    half = edge_width / 2
    for b in range(bandmap.size - 1):
        left, right = values[b], values[b + 1]
        if left == right:
            continue
        boundary = b + 0.5
        near = np.abs(x - boundary) < half
        if np.any(near):
            u = (x[near] - boundary + half) / edge_width
            s[near] = left + (right - left) * _raised_cosine_step(u)
    return s


def reflectance_spectrum(bandmap: BandMap, edge_width: float = 0.1,
                         epsilon_floor: float = 0.0, samples: int = 801,
                         span: tuple[float, float] | None = None) -> np.ndarray:
    """Sampled ``(offset/dw, R)`` pairs as an ``(samples, 2)`` array.

    ``R = eps + (1 - 2*eps) * S`` with ``S`` the smoothed band indicator, so
    plateaus sit exactly at ``eps`` and ``1 - eps``.
    """
    if not 0 < edge_width < 0.5:
        raise ValueError("edge_width must lie in (0, 0.5)")
    if not 0 <= epsilon_floor < 0.5:
        raise ValueError("epsilon_floor must lie in [0, 0.5)")
    if samples < 2:
        raise ValueError("need at least two samples")
    lo, hi = span if span is not None else (-0.5, bandmap.size - 0.5)
    x = np.linspace(lo, hi, samples)
    r = epsilon_floor + (1 - 2 * epsilon_floor) * band_indicator(bandmap, x, edge_width)
    return np.column_stack([x, r])


def band_center_reflectance(bandmap: BandMap, epsilon_floor: float = 0.0,
                            edge_width: float = 0.1) -> np.ndarray:
    """Reflectance evaluated exactly at the ``2**n`` band centers."""
    centers = np.arange(bandmap.size, dtype=float)
    return epsilon_floor + (1 - 2 * epsilon_floor) * band_indicator(bandmap, centers, edge_width)


def spectrum_csv(rows: Iterable[Sequence[float]]) -> str:
    lines = ["omega_over_dw,R"]
    lines += [f"{x!r},{r!r}" for x, r in ((float(a), float(b)) for a, b in rows)]
    return "\n".join(lines) + "\n"
