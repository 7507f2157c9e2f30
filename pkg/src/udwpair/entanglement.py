"""Entanglement and correlation measures on the two-detector state.

Exact eigenvalue-based negativity and Wootters concurrence for arbitrary
two-qubit density matrices, their closed forms on X-states, the
leading-order harvesting condition max(0, |X| - A), the entanglement of
formation, and the sigma_z measurement correlation.

For an X-state with diagonal (r11, r22, r33, r44) and anti-diagonal entries
rho14, rho23, the partial transpose swaps the anti-diagonal entries between
the two 2x2 blocks, so the exact negativity is

    N = max(0, sqrt(((r22-r33)/2)^2 + |rho14|^2) - (r22+r33)/2,
               sqrt(((r11-r44)/2)^2 + |rho23|^2) - (r11+r44)/2)

and the entanglement condition is |rho14|^2 > r22 r33 or
|rho23|^2 > r11 r44 (the two branches are mutually exclusive for a valid
state).  The matching concurrence is
2 max(0, |rho14| - sqrt(r22 r33), |rho23| - sqrt(r11 r44)).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .elements import XStateAB, assemble_density_matrix
from .errors import DomainError, InvalidStateError

__all__ = [
    "EntanglementReport",
    "partial_transpose_a",
    "negativity_exact",
    "concurrence_exact",
    "xstate_entanglement",
    "entanglement_of_formation",
    "EntanglementOfFormation",
    "correlation",
    "Correlation",
    "xstate_measures",
]

_SY_SY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


def _require_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidStateError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(float))):
        raise InvalidStateError("density matrix contains non-finite entries")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidStateError(f"trace = {np.trace(rho)!r} differs from 1")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidStateError("matrix is not Hermitian")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise InvalidStateError("matrix is not positive semidefinite")
    return rho


def partial_transpose_a(rho: np.ndarray) -> np.ndarray:
    """Partial transpose over the first qubit: (kl, mn) -> (ml, kn)."""
    rho = np.asarray(rho, dtype=complex)
    return rho.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)


def negativity_exact(rho: np.ndarray) -> float:
    """Negativity (trace-norm form): sum of |negative eigenvalues| of rho^{T_A}."""
    rho = _require_density_matrix(rho)
    lams = np.linalg.eigvalsh(partial_transpose_a(rho))
    return float(np.sum(np.clip(-lams, 0.0, None)))


def concurrence_exact(rho: np.ndarray) -> float:
    """Wootters concurrence from the spin-flipped product rho rho~.

    The decreasing lambda_i are the square roots of the eigenvalues of
    rho rho~ with rho~ = (sy x sy) rho* (sy x sy).  They equal the singular
    values of sqrt(rho) (sy x sy) conj(sqrt(rho)), which is how they are
    computed here: the SVD route is backward stable and avoids the
    sqrt-of-eigenvalue noise amplification near degenerate points.
    """
    rho = _require_density_matrix(rho)
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    lams = np.linalg.svd(sqrt_rho @ _SY_SY @ sqrt_rho.conj(), compute_uv=False)
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def _xstate_entries(rho: np.ndarray, tol: float = 1e-12):
    zero_mask = np.array(
        [
            [False, True, True, False],
            [True, False, False, True],
            [True, False, False, True],
            [False, True, True, False],
        ]
    )
    if np.max(np.abs(rho[zero_mask])) > tol:
        raise InvalidStateError("matrix does not have the X zero pattern")
    diag = rho.diagonal().real
    return diag[0], diag[1], diag[2], diag[3], rho[0, 3], rho[1, 2]


def xstate_entanglement(rho: np.ndarray) -> tuple[float, float]:
    """Closed-form (negativity, concurrence) of an X-state density matrix."""
    rho = _require_density_matrix(rho)
    r11, r22, r33, r44, x14, x23 = _xstate_entries(rho)
    neg = max(
        0.0,
        math.sqrt(((r22 - r33) / 2.0) ** 2 + abs(x14) ** 2) - (r22 + r33) / 2.0,
        math.sqrt(((r11 - r44) / 2.0) ** 2 + abs(x23) ** 2) - (r11 + r44) / 2.0,
    )
    conc = 2.0 * max(
        0.0,
        abs(x14) - math.sqrt(max(r22 * r33, 0.0)),
        abs(x23) - math.sqrt(max(r11 * r44, 0.0)),
    )
    return neg, conc


class EntanglementOfFormation(NamedTuple):
    exact: float
    perturbative: float


def _binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def entanglement_of_formation(concurrence: float) -> EntanglementOfFormation:
    """Entanglement of formation in ebits from the concurrence.

    Returns the exact value h((1 + sqrt(1 - C^2))/2) together with its
    small-C expansion C^2/(4 ln 2) (1 - ln(C^2/4)), whose remainder is
    O(C^4 log C).
    """
    c = float(concurrence)
    if not math.isfinite(c) or c < 0.0 or c > 1.0:
        # absorb eigenvalue roundoff at the endpoints only
        if math.isfinite(c) and -1e-12 <= c <= 1.0 + 1e-12:
            c = min(max(c, 0.0), 1.0)
        else:
            raise DomainError(f"concurrence must lie in [0, 1], got {c!r}")
    exact = _binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0)
    if c == 0.0:
        pert = 0.0
    else:
        csq = c * c
        pert = csq / (4.0 * math.log(2.0)) * (1.0 - math.log(csq / 4.0))
    return EntanglementOfFormation(exact, pert)


class Correlation(NamedTuple):
    general: float
    leading_identical: float | None


def correlation(state: XStateAB, eps0: float) -> Correlation:
    """sigma_z measurement correlation between the two detectors.

    ``general`` is (E - A B)/sqrt(A(1-A) B(1-B)) with the physical eps0
    scaling restored; ``leading_identical`` is the identical-detector
    shortcut eps0^2 (|x|^2 + 2|c|^2)/a (None when a != b), which agrees with
    the general form to relative O(eps0^2).
    """
    e2 = eps0 * eps0
    big_a = e2 * state.a
    big_b = e2 * state.b
    big_e = e2 * e2 * state.e
    var_a = big_a * (1.0 - big_a)
    var_b = big_b * (1.0 - big_b)
    if var_a <= 0.0 or var_b <= 0.0:
        raise DomainError(
            "degenerate variance: excitation probabilities must lie strictly "
            f"inside (0, 1), got A={big_a!r}, B={big_b!r}"
        )
    general = (big_e - big_a * big_b) / math.sqrt(var_a * var_b)
    leading = None
    if math.isclose(state.a, state.b, rel_tol=1e-12, abs_tol=0.0):
        leading = e2 * (abs(state.x) ** 2 + 2.0 * abs(state.c) ** 2) / state.a
    return Correlation(general, leading)


class EntanglementReport(NamedTuple):
    """Exact measures plus the closed-form and leading-order diagnostics.

    All entanglement values carry the physical eps0 scaling; ``corr`` is the
    general correlation.  ``negativity_leading = eps0^2 max(0, |x| - a)`` is
    the leading-order harvesting formula (concurrence twice that), and
    ``harvested`` flags |x| > a.
    """

    negativity: float
    concurrence: float
    eof: float
    corr: float
    harvested: bool
    negativity_xstate: float
    concurrence_xstate: float
    negativity_leading: float
    concurrence_leading: float
    negativity_identical: float | None
    corr_identical: float | None
    eof_perturbative: float


def xstate_measures(state: XStateAB, eps0: float) -> EntanglementReport:
    """Evaluate every measure on the assembled detector X-state.

    Reports the exact eigenvalue-based negativity/concurrence, the X-state
    closed forms, the identical-detector simplification r14 - r22 (when
    r22 = r33), and the leading-order max(0, |x| - a), together with the
    entanglement of formation and the measurement correlation.
    """
    rho = assemble_density_matrix(state, eps0)
    neg = negativity_exact(rho)
    conc = concurrence_exact(rho)
    neg_x, conc_x = xstate_entanglement(rho)
    e2 = eps0 * eps0
    neg_lead = e2 * max(0.0, abs(state.x) - state.a)
    r22 = rho[1, 1].real
    r33 = rho[2, 2].real
    neg_ident = None
    if math.isclose(r22, r33, rel_tol=1e-12, abs_tol=1e-16):
        neg_ident = max(0.0, abs(rho[0, 3]) - r22)
    eof = entanglement_of_formation(conc)
    corr = correlation(state, eps0)
    return EntanglementReport(
        negativity=neg,
        concurrence=conc,
        eof=eof.exact,
        corr=corr.general,
        harvested=abs(state.x) > state.a,
        negativity_xstate=neg_x,
        concurrence_xstate=conc_x,
        negativity_leading=neg_lead,
        concurrence_leading=2.0 * neg_lead,
        negativity_identical=neg_ident,
        corr_identical=corr.leading_identical,
        eof_perturbative=eof.perturbative,
    )
