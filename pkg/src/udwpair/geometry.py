"""Spacetime topologies, static worldlines, and image separations.

Besides Minkowski space, two locally flat quotients are supported, each
generated by a discrete isometry acting on the spatial section:

* cylinder:          J0 : (x, y, z) -> (x, y, z + ell)
* twisted cylinder:  J- : (x, y, z) -> (-x, -y, z + ell)

A scalar field on the quotient picks up the weight eta^n on the n-th image
(eta = +1 for an ordinary field, eta = -1 for a twisted field).

Image separations are computed from the explicit isometry action applied to
the second worldline, |x_A - J^n x_B|, which is immune to sign-convention
drift in Delta z = z_A - z_B.  The equivalent quadratic closed forms

    L_n^2      = L^2 + n^2 ell^2 - 2 n ell Delta z
    Ltilde_n^2 = L_n^2 + 4 d_A . d_B P(n)        (P(n) = n mod 2)

are provided as cross-checks only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import GeometryError

__all__ = [
    "TopologyKind",
    "Topology",
    "WorldlinePair",
    "parity",
    "separation",
    "image_point",
    "image_separation",
    "image_separation_cylinder",
    "image_separation_twisted",
    "cylinder_separation_formula",
    "twisted_separation_formula",
    "effective_ell_twisted",
    "worldlines_from_orientation",
    "self_pair",
]

Vec2 = tuple[float, float]


class TopologyKind(enum.Enum):
    MINKOWSKI = "minkowski"
    CYLINDER = "cylinder"
    TWISTED_CYLINDER = "twisted"


@dataclass(frozen=True)
class Topology:
    """Spatial topology descriptor: kind, compactification scale, field weight."""

    kind: TopologyKind
    ell: float | None = None
    eta: int = 1

    def __post_init__(self) -> None:
        if self.eta not in (1, -1):
            raise GeometryError(f"eta must be +1 or -1, got {self.eta!r}")
        if self.kind is TopologyKind.MINKOWSKI:
            if self.ell is not None:
                raise GeometryError("Minkowski space has no compactification scale")
        else:
            if self.ell is None or not math.isfinite(self.ell) or self.ell <= 0.0:
                raise GeometryError(
                    f"{self.kind.value} requires a finite ell > 0, got {self.ell!r}"
                )

    @classmethod
    def minkowski(cls) -> "Topology":
        return cls(TopologyKind.MINKOWSKI)

    @classmethod
    def cylinder(cls, ell: float, eta: int = 1) -> "Topology":
        return cls(TopologyKind.CYLINDER, float(ell), eta)

    @classmethod
    def twisted_cylinder(cls, ell: float, eta: int = 1) -> "Topology":
        return cls(TopologyKind.TWISTED_CYLINDER, float(ell), eta)


@dataclass(frozen=True)
class WorldlinePair:
    """Static worldlines of the two detectors.

    ``d_a`` and ``d_b`` are the transverse-plane positions (the plane the
    twisted identification reflects); ``z_a``, ``z_b`` lie along the
    identified direction.
    """

    d_a: Vec2
    d_b: Vec2
    z_a: float = 0.0
    z_b: float = 0.0

    @property
    def delta_z(self) -> float:
        return self.z_a - self.z_b


def parity(n: int) -> int:
    """P(n): 0 for even n, 1 for odd n."""
    return abs(int(n)) % 2


def separation(pair: WorldlinePair) -> float:
    """Euclidean distance L = |x_A - x_B| between the static worldlines."""
    dx = pair.d_a[0] - pair.d_b[0]
    dy = pair.d_a[1] - pair.d_b[1]
    dz = pair.z_a - pair.z_b
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def image_point(
    kind: TopologyKind, ell: float, n: int, d: Vec2, z: float
) -> tuple[Vec2, float]:
    """Apply the n-th power of the generating isometry to a spatial point."""
    if kind is TopologyKind.MINKOWSKI:
        raise GeometryError("Minkowski space has no identification isometry")
    z_im = z + n * ell
    if kind is TopologyKind.CYLINDER or parity(n) == 0:
        return (d[0], d[1]), z_im
    return (-d[0], -d[1]), z_im


def image_separation(topology: Topology, pair: WorldlinePair, n: int) -> float:
    """Distance |x_A - J^n x_B| from the explicit isometry action."""
    if topology.kind is TopologyKind.MINKOWSKI:
        if n != 0:
            raise GeometryError("Minkowski space has no nontrivial images")
        return separation(pair)
    d_im, z_im = image_point(topology.kind, topology.ell, n, pair.d_b, pair.z_b)
    shifted = WorldlinePair(pair.d_a, d_im, pair.z_a, z_im)
    return separation(shifted)


def image_separation_cylinder(pair: WorldlinePair, ell: float, n: int) -> float:
    """L_n for the cylinder, via the shift isometry acting on detector B."""
    return image_separation(Topology.cylinder(ell), pair, n)


def image_separation_twisted(pair: WorldlinePair, ell: float, n: int) -> float:
    """Ltilde_n for the twisted cylinder (flip of the transverse plane on odd n)."""
    return image_separation(Topology.twisted_cylinder(ell), pair, n)


def cylinder_separation_formula(pair: WorldlinePair, ell: float, n: int) -> float:
    """Quadratic closed form L_n^2 = L^2 + n^2 ell^2 - 2 n ell Delta z (cross-check)."""
    lsq = separation(pair) ** 2 + (n * ell) ** 2 - 2.0 * n * ell * pair.delta_z
    # exact identity |d_A - d_B|^2 + (Delta z - n ell)^2 >= 0; tiny negatives
    # can only be roundoff
    if lsq < 0.0:
        if lsq < -1e-12:
            raise GeometryError(f"inconsistent geometry: L_n^2 = {lsq!r} < 0")
        lsq = 0.0
    return math.sqrt(lsq)


def twisted_separation_formula(pair: WorldlinePair, ell: float, n: int) -> float:
    """Quadratic closed form with the odd-n term 4 d_A . d_B (cross-check)."""
    dot = pair.d_a[0] * pair.d_b[0] + pair.d_a[1] * pair.d_b[1]
    lsq = (
        separation(pair) ** 2
        + (n * ell) ** 2
        - 2.0 * n * ell * pair.delta_z
        + 4.0 * dot * parity(n)
    )
    if lsq < 0.0:
        if lsq < -1e-12:
            raise GeometryError(f"inconsistent geometry: Ltilde_n^2 = {lsq!r} < 0")
        lsq = 0.0
    return math.sqrt(lsq)


def effective_ell_twisted(d_k: float, ell: float, n: int) -> float:
    """Effective scale ell_n with n^2 ell_n^2 = n^2 ell^2 + 4 d_k^2 P(n).

    This is the twisted-cylinder substitution for the single-detector image
    terms: detector k at transverse distance d_k from the rotation axis sees
    its own n-th image at separation |n| ell_n.
    """
    if n == 0:
        raise GeometryError("ell_n is undefined for n = 0")
    if ell <= 0.0:
        raise GeometryError(f"ell must be > 0, got {ell!r}")
    return math.sqrt(ell * ell + 4.0 * d_k * d_k * parity(n) / (n * n))


def worldlines_from_orientation(length: float, theta: float) -> WorldlinePair:
    """Detector A at the spatial origin, B at (L cos(theta), 0, L sin(theta)).

    theta = pi/2 aligns the pair with the identified z-direction.  Only
    meaningful for translation-invariant spacetimes (Minkowski, cylinder);
    for the twisted cylinder absolute positions matter and should be set
    directly on :class:`WorldlinePair`.
    """
    if not (math.isfinite(length) and length > 0.0):
        raise GeometryError(f"separation must be finite and > 0, got {length!r}")
    return WorldlinePair(
        d_a=(0.0, 0.0),
        d_b=(length * math.cos(theta), 0.0),
        z_a=0.0,
        z_b=length * math.sin(theta),
    )


def self_pair(d: Vec2, z: float = 0.0) -> WorldlinePair:
    """Degenerate pair of one worldline with itself (single-detector image sums)."""
    return WorldlinePair(d_a=d, d_b=d, z_a=z, z_b=z)
