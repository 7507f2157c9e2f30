"""Closed-form matrix elements of the joint two-detector state.

Each detector is a two-level system with energy gap Omega, coupled to a
massless scalar field through a Gaussian switching function
e^{-t^2 / 2 sigma^2} with strength eps0.  At leading order the joint state
in the basis {|00>, |01>, |10>, |11>} is the X-state

    rho = [[1-A-B+E, 0,   0,   X ],
           [0,       B-E, C,   0 ],
           [0,       C*,  A-E, 0 ],
           [X*,      0,   0,   E ]],

with  E = |X|^2 + A B + 2|C|^2  at order eps0^4.  This module evaluates the
coefficients A/eps0^2, B/eps0^2, X/eps0^2, C/eps0^2, E/eps0^4 in Minkowski
space and, by the method of images, in the cylinder and twisted-cylinder
quotients.

The three building blocks, written for switching width sigma = s and a
static pair at spatial separation r > 0, are

    self term      a(Omega)    = (1/4 pi) [e^{-s^2 Omega^2}
                                   - sqrt(pi) s Omega erfc(s Omega)]
    exchange term  c(Omega, r) = (s / 4 sqrt(pi) r) e^{-r^2/4 s^2}
                                   ( Im[e^{i Omega r} erf(s Omega + i r/2s)]
                                     - sin(Omega r) )
    nonlocal term  x(Omega, r) = (s / 4 sqrt(pi) r) e^{-s^2 Omega^2}
                                   [ i e^{-r^2/4s^2} - (2/sqrt(pi)) D(r/2s) ]

where D is Dawson's integral and the Gaussian-times-erf factor of the
exchange term is evaluated through the overflow-safe combination
e^{-y^2} e^{2ixy} erf(x+iy) (:func:`udwpair.special.phase_scaled_erf`).
All three are verified term by term against an independent distributional
quadrature of the Wightman function (see :mod:`udwpair.wightman`).

A note on decay: the delta-function (sin) parts of the pair terms fall off
like e^{-r^2/4s^2}, but the principal-value parts fall off only like
(s/r)^2 e^{-s^2 Omega^2} / 2 pi.  Image sums therefore converge
polynomially, ~ 1/(n ell)^2 per term, not Gaussianly; the truncation
bookkeeping below reflects that.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.special as _sp

from .errors import (
    GeometryError,
    InvalidStateError,
    PositivityError,
    StateConsistencyWarning,
    TruncationWarning,
)
from .geometry import Topology, TopologyKind, WorldlinePair, self_pair, separation, image_separation
from .special import dawson, erfc_real, phase_scaled_erf

__all__ = [
    "DetectorParams",
    "XStateAB",
    "joint_excitation",
    "self_excitation_coefficient",
    "exchange_coefficient",
    "nonlocal_coefficient",
    "elements_minkowski",
    "elements_cylinder",
    "elements_twisted",
    "elements_for",
    "assemble_density_matrix",
]

_SQRT_PI = math.sqrt(math.pi)
#: Relative tail size above which an image sum warns about its truncation.
TRUNCATION_RTOL = 1e-12


@dataclass(frozen=True)
class DetectorParams:
    """One detector: energy gap, Gaussian switching width, coupling strength.

    ``omega`` may be negative (a de-excitation probe of an initially excited
    detector maps onto a negative gap at this order).
    """

    omega: float
    sigma: float
    eps0: float = 0.01

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise InvalidStateError(f"sigma must be > 0, got {self.sigma!r}")
        if not (math.isfinite(self.eps0) and self.eps0 > 0.0):
            raise InvalidStateError(f"eps0 must be > 0, got {self.eps0!r}")
        if not math.isfinite(self.omega):
            raise InvalidStateError(f"omega must be finite, got {self.omega!r}")


@dataclass(frozen=True)
class XStateAB:
    """Leading-order X-state data, stored as coefficients of eps0 powers.

    ``a``, ``b``, ``x``, ``c`` are per eps0^2; ``e`` is per eps0^4.
    ``tail_bound`` estimates the magnitude omitted by truncating an image
    sum (zero for Minkowski space).
    """

    a: float
    b: float
    x: complex
    c: complex
    e: float
    tail_bound: float = 0.0


def joint_excitation(a: float, b: float, x: complex, c: complex) -> float:
    """E/eps0^4 = |x|^2 + a b + 2 |c|^2 (valid also when a != b)."""
    return abs(x) ** 2 + a * b + 2.0 * abs(c) ** 2


def self_excitation_coefficient(p: DetectorParams) -> float:
    """Transition probability coefficient A/eps0^2 for a single static detector.

    Equals 1/4 pi at Omega = 0.  For s*Omega > 0 the subtraction is done
    through the scaled complement erfcx to avoid cancellation.
    """
    y = p.sigma * p.omega
    if y >= 0.0:
        return math.exp(-y * y) * (1.0 - _SQRT_PI * y * float(_sp.erfcx(y))) / (4.0 * math.pi)
    return (math.exp(-y * y) - _SQRT_PI * y * erfc_real(y)) / (4.0 * math.pi)


def exchange_coefficient(p: DetectorParams, r: float) -> float:
    """Exchange coefficient C/eps0^2 for a static pair at separation r > 0.

    The same function gives the n-th image term of the single-detector
    probability at r = |x - J^n x| (detector correlating with its own
    image).  As r -> 0 it tends to the self term; as r -> infinity it decays
    like (s/r)^2 e^{-s^2 Omega^2} / 2 pi.
    """
    if not (math.isfinite(r) and r > 0.0):
        raise GeometryError(f"separation must be finite and > 0, got {r!r}")
    s = p.sigma
    x = s * p.omega
    y = r / (2.0 * s)
    osc = phase_scaled_erf(x, y).imag - math.exp(-y * y) * math.sin(p.omega * r)
    return s / (4.0 * _SQRT_PI * r) * osc


def nonlocal_coefficient(p: DetectorParams, r: float) -> complex:
    """Nonlocal coefficient X/eps0^2 for a static pair at separation r > 0.

    The Dawson representation
    e^{-r^2/4s^2} [1 + erf(i r/2s)] = e^{-r^2/4s^2} + i (2/sqrt(pi)) D(r/2s)
    keeps the evaluation finite at any separation.
    """
    if not (math.isfinite(r) and r > 0.0):
        raise GeometryError(f"separation must be finite and > 0, got {r!r}")
    s = p.sigma
    y = r / (2.0 * s)
    envelope = math.exp(-((s * p.omega) ** 2))
    bracket = complex(-2.0 / _SQRT_PI * dawson(y), math.exp(-y * y))
    return s / (4.0 * _SQRT_PI * r) * envelope * bracket


def elements_minkowski(p: DetectorParams, length: float) -> XStateAB:
    """All leading-order elements for identical detectors at separation L > 0."""
    if not (math.isfinite(length) and length > 0.0):
        raise GeometryError(f"separation must be finite and > 0, got {length!r}")
    a = self_excitation_coefficient(p)
    x = nonlocal_coefficient(p, length)
    c = complex(exchange_coefficient(p, length))
    return XStateAB(a=a, b=a, x=x, c=c, e=joint_excitation(a, a, x, c))


def _eta_weight(eta: int, n: int) -> int:
    return 1 if (eta == 1 or n % 2 == 0) else -1


def _image_sum(
    p: DetectorParams, pair: WorldlinePair, topology: Topology, nmax: int
) -> XStateAB:
    if nmax < 1:
        raise GeometryError(f"nmax must be >= 1, got {nmax!r}")
    length = separation(pair)
    if length <= 0.0:
        raise GeometryError("nonlocal elements require distinct worldlines (L > 0)")

    pair_a = self_pair(pair.d_a, pair.z_a)
    pair_b = self_pair(pair.d_b, pair.z_b)

    a = self_excitation_coefficient(p)
    b = a
    x = nonlocal_coefficient(p, length)
    c = complex(exchange_coefficient(p, length))

    last = {"a": 0.0, "b": 0.0, "x": 0.0, "c": 0.0}
    for n in range(-nmax, nmax + 1):
        if n == 0:
            continue
        w = _eta_weight(topology.eta, n)
        t_a = w * exchange_coefficient(p, image_separation(topology, pair_a, n))
        t_b = w * exchange_coefficient(p, image_separation(topology, pair_b, n))
        l_n = image_separation(topology, pair, n)
        t_x = w * nonlocal_coefficient(p, l_n)
        t_c = w * exchange_coefficient(p, l_n)
        a += t_a
        b += t_b
        x += t_x
        c += t_c
        if abs(n) == nmax:
            last["a"] += abs(t_a)
            last["b"] += abs(t_b)
            last["x"] += abs(t_x)
            last["c"] += abs(t_c)

    # Terms decay ~ K/n^2, so the omitted tail is roughly |t_nmax| * nmax.
    tail = max(last.values()) * nmax
    sums = {"a": a, "b": b, "x": x, "c": c}
    worst = max(last[k] / max(abs(sums[k]), 1e-300) for k in last)
    if worst > TRUNCATION_RTOL:
        warnings.warn(
            f"image sum truncated at |n| <= {nmax} with last-term relative "
            f"size {worst:.2e}; estimated omitted tail {tail:.2e} "
            "(principal-value parts decay only like 1/(n ell)^2)",
            TruncationWarning,
            stacklevel=3,
        )
    return XStateAB(
        a=a, b=b, x=x, c=c, e=joint_excitation(a, b, x, c), tail_bound=tail
    )


def elements_cylinder(
    p: DetectorParams, pair: WorldlinePair, topology: Topology, nmax: int = 10
) -> XStateAB:
    """Image-sum elements on the cylinder; translation invariance gives b = a."""
    if topology.kind is not TopologyKind.CYLINDER:
        raise GeometryError(f"expected a cylinder topology, got {topology.kind}")
    state = _image_sum(p, pair, topology, nmax)
    # single-detector image separations |n| ell are position independent
    return replace(state, b=state.a, e=joint_excitation(state.a, state.a, state.x, state.c))


def elements_twisted(
    p: DetectorParams, pair: WorldlinePair, topology: Topology, nmax: int = 10
) -> XStateAB:
    """Image-sum elements on the twisted cylinder.

    The odd-n image of detector k sits at separation |n| ell_n with
    n^2 ell_n^2 = n^2 ell^2 + 4 d_k^2, so a and b differ whenever
    |d_A| != |d_B|: the twisted quotient is not translation invariant in the
    reflected plane.
    """
    if topology.kind is not TopologyKind.TWISTED_CYLINDER:
        raise GeometryError(f"expected a twisted-cylinder topology, got {topology.kind}")
    return _image_sum(p, pair, topology, nmax)


def elements_for(
    p: DetectorParams, pair: WorldlinePair, topology: Topology, nmax: int = 10
) -> XStateAB:
    """Dispatch on topology kind."""
    if topology.kind is TopologyKind.MINKOWSKI:
        return elements_minkowski(p, separation(pair))
    if topology.kind is TopologyKind.CYLINDER:
        return elements_cylinder(p, pair, topology, nmax)
    return elements_twisted(p, pair, topology, nmax)


def assemble_density_matrix(state: XStateAB, eps0: float) -> np.ndarray:
    """Assemble the physical 4x4 density matrix from eps0-scaled coefficients.

    Raises :class:`PositivityError` when either positivity condition
    r11 r44 >= |X|^2 or r22 r33 >= |C|^2 fails beyond 1e-12, which signals a
    coupling too strong for the leading-order truncation.
    """
    if not (math.isfinite(eps0) and eps0 > 0.0):
        raise InvalidStateError(f"eps0 must be > 0, got {eps0!r}")
    e2 = eps0 * eps0
    big_a = e2 * state.a
    big_b = e2 * state.b
    big_x = e2 * complex(state.x)
    big_c = e2 * complex(state.c)
    big_e = e2 * e2 * state.e

    e_consistent = joint_excitation(state.a, state.b, state.x, state.c)
    if abs(state.e - e_consistent) > 1e-9 * max(1.0, abs(e_consistent)):
        warnings.warn(
            f"supplied e={state.e!r} differs from |x|^2 + a b + 2|c|^2 = "
            f"{e_consistent!r}",
            StateConsistencyWarning,
            stacklevel=2,
        )

    for name, val in (("A", big_a), ("B", big_b)):
        if not 0.0 <= val <= 1.0:
            raise InvalidStateError(
                f"{name} = {val!r} outside [0, 1]; eps0 too large or invalid state"
            )

    r11 = 1.0 - big_a - big_b + big_e
    r22 = big_b - big_e
    r33 = big_a - big_e
    r44 = big_e
    tol = 1e-12
    if abs(big_x) ** 2 > r11 * r44 + tol:
        raise PositivityError(
            f"|X|^2 = {abs(big_x)**2!r} exceeds r11 r44 = {r11 * r44!r}"
        )
    if abs(big_c) ** 2 > r22 * r33 + tol:
        raise PositivityError(
            f"|C|^2 = {abs(big_c)**2!r} exceeds r22 r33 = {r22 * r33!r}"
        )

    return np.array(
        [
            [r11, 0.0, 0.0, big_x],
            [0.0, r22, big_c, 0.0],
            [0.0, big_c.conjugate(), r33, 0.0],
            [big_x.conjugate(), 0.0, 0.0, r44],
        ],
        dtype=complex,
    )
