"""Read-out: heterodyne time traces, quadrature demodulation, far-field fringes.

Only light on the detector path is seen.  Orthogonal polarizations add in
intensity, never in amplitude, so a beat needs co-polarized modes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .state import Frequency, PathLabel, PhotonState, PhysicalConstants, POLARIZATIONS

TIME_TRACE = "TIME_TRACE"
FRINGE = "FRINGE"
ANTIFRINGE = "ANTIFRINGE"
FLAT = "FLAT"

FLAT_RATIO = 1e-6
CLASSIFY_BAND = 0.10


class SamplingError(ValueError):
    """Time grid unsuitable for beat extraction."""


class DetectionError(ValueError):
    """Read-out precondition violated."""


class ClassificationError(ValueError):
    """Fringe pattern is neither a fringe nor an anti-fringe."""


@dataclass(frozen=True, eq=False)
class DetectionRecord:
    kind: str
    x: np.ndarray
    intensity: np.ndarray
    dc: float
    beat_amplitude: float
    beat_phase: float | None = None
    classification: str | None = None
    delta_num: float | None = None

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.intensity.tolist()))

    def axis_name(self) -> str:
        return "t" if self.kind == TIME_TRACE else "x"

    def to_csv(self) -> str:
        lines = [f"{self.axis_name()},intensity"]
        lines += [f"{x!r},{i!r}" for x, i in zip(self.x.tolist(), self.intensity.tolist())]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dc": self.dc,
            "beat_amplitude": self.beat_amplitude,
            "beat_phase": self.beat_phase,
            "classification": self.classification,
            "delta_num": self.delta_num,
            "samples": [[x, i] for x, i in zip(self.x.tolist(), self.intensity.tolist())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def beat_time_grid(constants: PhysicalConstants, periods: int = 10,
                   samples_per_period: int = 64) -> np.ndarray:
    """Uniform grid over whole beat periods, right endpoint excluded."""
    period = 2 * math.pi / constants.delta_num
    count = periods * samples_per_period
    return np.arange(count) * (period / samples_per_period)


def _by_polarization(state: PhotonState, path: PathLabel) -> dict[str, list]:
    groups: dict[str, list] = {}
    for md, a in state.items():
        if md.path == path:
            groups.setdefault(md.pol, []).append((md.freq, a))
    return groups


def _flat(intensity: np.ndarray, dc: float) -> bool:
    spread = float(np.ptp(intensity)) if intensity.size else 0.0
    return dc <= 0 or spread < FLAT_RATIO * dc


def _check_time_grid(t: np.ndarray, delta_num: float, min_periods=3, min_spp=16):
    if t.size < 2:
        raise SamplingError("time grid needs at least two samples")
    dt = t[1] - t[0]
    if dt <= 0 or not np.allclose(np.diff(t), dt, rtol=1e-9, atol=0):
        raise SamplingError("time grid must be uniform and increasing")
    period = 2 * math.pi / delta_num
    spp = period / dt
    span = t.size * dt / period
    if spp < min_spp - 1e-9:
        raise SamplingError(f"{spp:.3g} samples per beat period, need {min_spp}")
    if span < min_periods - 1e-9:
        raise SamplingError(f"grid covers {span:.3g} beat periods, need {min_periods}")


def time_trace(state: PhotonState, detector_path: PathLabel,
               constants: PhysicalConstants, t_grid: Sequence[float] | None = None) -> DetectionRecord:
    """Detector intensity ``sum_pol |sum_modes a exp(-i w t)|**2`` on the grid."""
    t = beat_time_grid(constants) if t_grid is None else np.asarray(t_grid, dtype=float)
    _check_time_grid(t, constants.delta_num)
    intensity = np.zeros_like(t)
    for terms in _by_polarization(state, detector_path).values():
        field_t = np.zeros(t.shape, dtype=complex)
        for freq, a in terms:
            field_t += a * np.exp(-1j * freq.angular_offset(constants) * t)
        intensity += np.abs(field_t) ** 2
    record = DetectionRecord(TIME_TRACE, t, intensity, 0.0, 0.0, 0.0, None, constants.delta_num)
    dc, amp, phase = demodulate(record, constants.delta_num)
    return replace(record, dc=dc, beat_amplitude=amp, beat_phase=phase,
                   classification=FLAT if _flat(intensity, dc) else None)


def _quadrature(record: DetectionRecord, delta_num: float) -> tuple[float, complex]:
    t, intensity = record.x, record.intensity
    if t.size < 2:
        raise SamplingError("record needs at least two samples")
    dt = t[1] - t[0]
    if dt <= 0:
        raise SamplingError("time axis must be increasing")
    period = 2 * math.pi / delta_num
    spp = period / dt
    if spp < 8 - 1e-9:
        raise SamplingError(f"{spp:.3g} samples per beat period, need at least 8")
    whole = math.floor(t.size / spp + 1e-9)
    if whole < 1:
        raise SamplingError("record is shorter than one beat period")
    used = min(t.size, int(round(whole * spp)))
    t, intensity = t[:used], intensity[:used]
    dc = float(np.mean(intensity))
    q = complex(2.0 / used * np.sum(intensity * np.exp(-1j * delta_num * t)))
    return dc, q


def wrap_phase(x: float) -> float:
    """Map to ``[-pi, pi)``."""
    return (x + math.pi) % (2 * math.pi) - math.pi


def demodulate(record: DetectionRecord, delta_num: float,
               reference_phase: float | None = None) -> tuple[float, float, float]:
    """Return ``(dc, beat_amplitude, beat_phase)`` at the beat frequency.

    For ``I = dc + a cos(delta t + psi)`` the quadrature is ``a exp(i psi)``.
    Without a reference the amplitude is ``|Q|`` and the phase ``arg Q``.  With
    one, the amplitude is signed by projecting onto the reference quadrature
    and the phase is measured from it.
    """
    dc, q = _quadrature(record, delta_num)
    amp, phase = abs(q), math.atan2(q.imag, q.real)
    if reference_phase is None:
        return dc, amp, phase
    rel = wrap_phase(phase - reference_phase)
    sign = 1.0 if math.cos(rel) >= 0 else -1.0
    return dc, sign * amp, rel


@dataclass(frozen=True)
class Calibration:
    """Beat reference fixed once at a circuit's reference setting.

    ``time_origin`` is where the reference beat reads as ``cos(delta t)``
    (``form='cos'``) or ``sin(delta t)`` (``form='sin'``).
    """

    reference_phase: float
    time_origin: float
    delta_num: float

    def demodulate(self, record: DetectionRecord) -> tuple[float, float, float]:
        return demodulate(record, self.delta_num, self.reference_phase)

    def apply(self, record: DetectionRecord) -> DetectionRecord:
        dc, amp, phase = self.demodulate(record)
        return replace(record, dc=dc, beat_amplitude=amp, beat_phase=phase)


def calibrate(record: DetectionRecord, delta_num: float, form: str = "cos") -> Calibration:
    dc, q = _quadrature(record, delta_num)
    if abs(q) <= FLAT_RATIO * abs(dc) or abs(q) == 0:
        raise DetectionError("reference record has no beat to calibrate against")
    psi = math.atan2(q.imag, q.real)
    # cos(delta (t - t0)) has psi = -delta t0; sin adds a quarter period
    offset = psi + (math.pi / 2 if form == "sin" else 0.0)
    period = 2 * math.pi / delta_num
    return Calibration(psi, (-offset / delta_num) % period, delta_num)


def fringe_pattern(state: PhotonState, path_a: PathLabel, path_b: PathLabel,
                   kappa: float = 2 * math.pi, x_grid: Sequence[float] | None = None) -> DetectionRecord:
    """Far-field pattern ``|A exp(i k x/2) + B exp(-i k x/2)|**2`` of two arms."""
    if kappa <= 0:
        raise DetectionError("fringe wavenumber must be positive")
    x = np.linspace(-2.0, 2.0, 401) if x_grid is None else np.asarray(x_grid, dtype=float)
    freqs: set[Frequency] = {md.freq for md in state if md.path in (path_a, path_b)}
    if len(freqs) > 1:
        raise DetectionError(
            "arms carry different frequencies; a stationary pattern needs null detuning")
    intensity = np.zeros_like(x)
    dc, cross = 0.0, 0.0
    for pol in POLARIZATIONS:
        a = sum((amp for md, amp in state.items() if md.path == path_a and md.pol == pol), 0j)
        b = sum((amp for md, amp in state.items() if md.path == path_b and md.pol == pol), 0j)
        intensity += np.abs(a * np.exp(0.5j * kappa * x) + b * np.exp(-0.5j * kappa * x)) ** 2
        dc += abs(a) ** 2 + abs(b) ** 2
        cross += 2 * (a * b.conjugate()).real
    record = DetectionRecord(FRINGE, x, intensity, dc, cross)
    return replace(record, classification=classify_fringe(record, strict=False))


def classify_fringe(record: DetectionRecord, strict: bool = True) -> str | None:
    """FRINGE when the centre is a maximum, ANTIFRINGE when a minimum.

    A centre value more than 10 % of the swing away from both extrema raises
    ClassificationError, or returns None with ``strict=False``.
    """
    if record.kind != FRINGE:
        raise DetectionError("classification applies to fringe records only")
    intensity = record.intensity
    if intensity.size == 0:
        return FLAT
    dc = float(np.mean(intensity))
    top, bottom = float(intensity.max()), float(intensity.min())
    if _flat(intensity, dc):
        return FLAT
    centre = float(np.interp(0.0, record.x, intensity))
    swing = top - bottom
    if top - centre <= CLASSIFY_BAND * swing:
        return FRINGE
    if centre - bottom <= CLASSIFY_BAND * swing:
        return ANTIFRINGE
    if strict:
        raise ClassificationError(
            f"centre intensity {centre:.4g} is between extrema {bottom:.4g}..{top:.4g}")
    return None


def poisson_sample(record: DetectionRecord, mean_counts_per_sample: float,
                   seed: int | None = 0) -> list[int]:
    """Photon counts per sample, Poisson with mean ``mean_counts * intensity``.

    ``mean_counts_per_sample`` is the mean count for unit intensity.
    """
    if mean_counts_per_sample <= 0:
        raise ValueError("mean_counts_per_sample must be positive")
    rng = np.random.default_rng(seed)
    lam = mean_counts_per_sample * np.clip(record.intensity, 0.0, None)
    return rng.poisson(lam).astype(int).tolist()
