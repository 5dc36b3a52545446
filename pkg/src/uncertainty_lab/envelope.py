"""Dyadic-bin decay envelopes of sampled spectra (or any radial magnitude data)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SampledFunction1D, SampledFunctionND
from .errors import ConfigurationError
from .weights import WeightFunction

THETA = "theta"
PSI = "psi"


@dataclass(frozen=True)
class EnvelopeFit:
    """Per-bin sup of |F| and the decay constants implied by it.

    For ``mode="theta"`` the model is |F(xi)| <= C exp(-c theta(xi) |xi|); for
    ``mode="psi"`` it is |F(xi)| <= C exp(-c psi(xi)). ``c_bins`` holds, per
    bin, the largest c compatible with the bin sup; ``c_fit`` is their minimum
    over the top half of the bins.
    """

    mode: str
    bin_edges: np.ndarray
    sup_values: np.ndarray
    effective: np.ndarray
    C_fit: float
    c_bins: np.ndarray
    c_fit: float
    threshold: float
    holds: bool
    no_decay: bool
    degenerate: bool
    details: dict = field(default_factory=dict)

    @property
    def bin_centers(self) -> np.ndarray:
        return np.sqrt(self.bin_edges[:-1] * self.bin_edges[1:])

    def to_dict(self) -> dict:
        return {
            "mode": self.mode, "bin_edges": self.bin_edges.tolist(),
            "bin_centers": self.bin_centers.tolist(), "sup_values": self.sup_values.tolist(),
            "effective": [None if not math.isfinite(v) else float(v) for v in self.effective],
            "C_fit": self.C_fit, "c_bins": [None if not math.isfinite(v) else float(v) for v in self.c_bins],
            "c_fit": self.c_fit if math.isfinite(self.c_fit) else None, "threshold": self.threshold,
            "holds": self.holds, "no_decay": self.no_decay, "degenerate": self.degenerate,
            **self.details,
        }


def radial_magnitudes(spec: SampledFunction1D | SampledFunctionND) -> tuple[np.ndarray, np.ndarray, float]:
    """(|xi|, |F|, Nyquist) flattened from a sampled spectrum."""
    if isinstance(spec, SampledFunction1D):
        nyq = 0.5 * spec.grid.count * spec.grid.step
        return np.abs(spec.points()), np.abs(spec.values), nyq
    nyq = min(0.5 * g.count * g.step for g in spec.axes)
    return spec.radius().ravel(), np.abs(spec.values).ravel(), nyq


def decay_envelope(spec, weight: WeightFunction | None = None, mode: str = THETA, lo: float = 2.0,
                   hi: float | None = None, min_bins: int = 6, threshold: float = 0.05,
                   radii: np.ndarray | None = None, nyquist: float | None = None) -> EnvelopeFit:
    """Fit a decay envelope on dyadic bins [lo 2^j, lo 2^(j+1)).

    ``spec`` is a sampled spectrum (1D, or ND binned by |xi|) or, with
    ``radii``, a magnitude array. ``nyquist`` overrides the band limit; on
    anisotropic ND grids a value above the smallest axis Nyquist bins the
    partially sampled shells as well. C is the sup over |xi| < lo. The effective
    weight per bin uses the bin's lower edge and is regularized by a running
    minimum (from the left for theta, from the right for psi) so that it is
    monotone in the direction the model requires.
    """
    if mode not in (THETA, PSI):
        raise ConfigurationError(f"unknown envelope mode {mode!r}")
    if radii is not None:
        r, mag = np.asarray(radii, float).ravel(), np.abs(np.asarray(spec)).ravel()
        nyq = nyquist if nyquist is not None else float(r.max())
    else:
        r, mag, nyq = radial_magnitudes(spec)
        if nyquist is not None:
            nyq = nyquist
    hi = nyq / 4.0 if hi is None else min(hi, nyq)
    if not hi > lo:
        raise ConfigurationError(f"bin range [{lo}, {hi}] is empty")
    nb = int(math.floor(math.log2(hi / lo) + 1e-9))
    if nb < min_bins:
        raise ConfigurationError(f"only {nb} dyadic bins in [{lo}, {hi}]; need at least {min_bins}")
    edges = lo * 2.0 ** np.arange(nb + 1)
    sups = np.zeros(nb)
    for b in range(nb):
        sel = (r >= edges[b]) & (r < edges[b + 1]) if b < nb - 1 else (r >= edges[b]) & (r <= edges[b + 1])
        sups[b] = float(mag[sel].max()) if np.any(sel) else 0.0
    low = mag[r < lo]
    C = float(low.max()) if low.size else float(sups[0])
    C = max(C, float(sups.max()))
    degenerate = C == 0.0
    with np.errstate(divide="ignore"):
        drop = np.where(sups > 0, -np.log(np.where(sups > 0, sups, 1.0) / C), np.inf) if not degenerate \
            else np.full(nb, np.inf)
    if mode == THETA:
        eff = drop / edges[:-1]
        eff = np.minimum.accumulate(eff)
    else:
        eff = drop.copy()
        eff = np.minimum.accumulate(eff[::-1])[::-1]
    c_bins = np.full(nb, np.nan)
    top = slice(nb // 2, nb)
    if weight is not None:
        fine = [np.geomspace(edges[b], edges[b + 1], 33) for b in range(nb)]
        if mode == THETA:
            scale = np.array([float(np.max(weight(x) * x)) for x in fine])
        else:
            scale = np.array([float(np.max(weight(x))) for x in fine])
        with np.errstate(divide="ignore", invalid="ignore"):
            c_bins = np.where(scale > 0, drop / scale, np.where(drop > 0, np.inf, 0.0))
        c_fit = float(np.min(c_bins[top]))
    else:
        c_fit = float("nan")
    # bins at the float64 floor only bound the decay from below
    saturated = int(np.sum(sups <= 1e-14 * C)) if not degenerate else nb
    no_decay = (not degenerate) and sups[-1] > 0 and math.log(C / sups[-1]) < 1.0
    holds = bool(degenerate or (weight is not None and c_fit >= threshold))
    return EnvelopeFit(mode, edges, sups, eff, C, c_bins, c_fit, threshold, holds, bool(no_decay),
                       bool(degenerate), {"lo": lo, "hi": float(edges[-1]), "nyquist": nyq,
                                          "weight": None if weight is None else weight.name,
                                          "saturated_bins": saturated})
