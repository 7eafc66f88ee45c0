"""Vortex localization by phase winding around grid plaquettes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from vortexlab.core.model import ComplexField, VortexConfiguration
from vortexlab.errors import InvalidConfigError

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass(frozen=True, eq=False)
class DetectedVortices:
    """Vortex positions ``(K, 2)`` and nonzero integer windings ``(K,)``."""

    positions: np.ndarray
    windings: np.ndarray

    def __post_init__(self) -> None:
        positions = np.array(self.positions, dtype=float).reshape(-1, 2)
        windings = np.array(self.windings, dtype=int).reshape(-1)
        if positions.shape[0] != windings.shape[0]:
            raise InvalidConfigError("one winding per detected position is required")
        if np.any(windings == 0):
            raise InvalidConfigError("detected windings must be nonzero")
        if positions.size and np.max(np.hypot(*positions.T)) >= 1.0:
            raise InvalidConfigError("detected positions must lie inside the disk")
        positions.setflags(write=False)
        windings.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "windings", windings)

    def __len__(self) -> int:
        return int(self.windings.shape[0])

    @property
    def total_winding(self) -> int:
        return int(np.sum(self.windings))

    def _pairs(self, config: VortexConfiguration) -> np.ndarray:
        """Detection index paired with every vortex of *config*, ``-1`` if none.

        Pairs of equal degree are formed greedily, closest first.
        """
        partner = np.full(config.n, -1)
        if config.n == 0 or len(self) == 0:
            return partner
        diff = config.positions[:, None, :] - self.positions[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        dist[config.degrees[:, None] != self.windings[None, :]] = np.inf
        for flat in np.argsort(dist, axis=None, kind="stable"):
            ref, det = np.unravel_index(flat, dist.shape)
            if not np.isfinite(dist[ref, det]):
                break
            if partner[ref] >= 0:
                continue
            partner[ref] = det
            dist[:, det] = np.inf
        return partner

    def match(self, config: VortexConfiguration) -> np.ndarray:
        """Distance from every vortex of *config* to its paired detection (``inf`` if none)."""
        partner = self._pairs(config)
        distances = np.full(config.n, np.inf)
        found = partner >= 0
        offsets = config.positions[found] - self.positions[partner[found]]
        distances[found] = np.hypot(offsets[:, 0], offsets[:, 1])
        return distances

    def paired_configuration(self, config: VortexConfiguration) -> Optional[VortexConfiguration]:
        """Detections reordered to follow *config*, or ``None`` if a vortex is unmatched."""
        partner = self._pairs(config)
        if np.any(partner < 0):
            return None
        return config.moved_to(self.positions[partner])


def _phase_step(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Phase increment from *a* to *b* wrapped to ``(−π, π]``."""
    return np.angle(b * np.conj(a))


def plaquette_windings(field: ComplexField) -> Tuple[np.ndarray, int]:
    """Winding of every plaquette and of the central disk inside the first ring.

    Plaquette ``(i, k)`` has corners ``(i, k), (i+1, k), (i+1, k+1), (i, k+1)``
    traversed counter-clockwise; the result has shape ``(n_r − 1, n_theta)``.
    """
    psi = field.values
    nxt = np.roll(psi, -1, axis=1)
    circulation = (
        _phase_step(psi[:-1], psi[1:])
        + _phase_step(psi[1:], nxt[1:])
        + _phase_step(nxt[1:], nxt[:-1])
        + _phase_step(nxt[:-1], psi[:-1])
    )
    windings = np.rint(circulation / (2.0 * math.pi)).astype(int)
    centre = int(np.rint(np.sum(_phase_step(psi[0], nxt[0])) / (2.0 * math.pi)))
    return windings, centre


def localize_vortices(field: ComplexField) -> DetectedVortices:
    """Locate vortices of *field* as plaquettes with nonzero phase winding.

    Detections in 8-connected plaquettes (periodic in ``θ``) are merged into
    one vortex at their winding-weighted mean position; clusters whose
    windings cancel are dropped.  A winding of the first ring places a
    vortex at the origin.
    """
    grid = field.grid
    windings, centre = plaquette_windings(field)
    labels, count = ndimage.label(windings != 0, structure=_EIGHT_CONNECTED)
    if count:
        labels = _join_across_seam(labels)

    radius = (np.arange(grid.n_r - 1) + 1.0) * grid.dr
    angle = grid.theta + 0.5 * grid.dtheta
    centroids = np.stack(
        [
            radius[:, None] * np.cos(angle)[None, :],
            radius[:, None] * np.sin(angle)[None, :],
        ],
        axis=-1,
    )

    positions: List[np.ndarray] = []
    totals: List[int] = []
    if centre:
        positions.append(np.zeros(2))
        totals.append(centre)
    for label in np.unique(labels[labels > 0]):
        members = labels == label
        total = int(np.sum(windings[members]))
        if total == 0:
            continue
        weights = np.abs(windings[members]).astype(float)
        positions.append(np.average(centroids[members], axis=0, weights=weights))
        totals.append(total)
    return DetectedVortices(positions=np.array(positions).reshape(-1, 2), windings=np.array(totals))


def _join_across_seam(labels: np.ndarray) -> np.ndarray:
    """Merge clusters touching across the ``θ = 0`` seam."""
    first, last = labels[:, 0], labels[:, -1]
    rows = labels.shape[0]
    for i in range(rows):
        for j in (i - 1, i, i + 1):
            if not 0 <= j < rows:
                continue
            a, b = last[i], first[j]
            if a and b and a != b:
                labels[labels == b] = a
    return labels
