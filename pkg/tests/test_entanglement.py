"""Entanglement measures: eigenvalue-exact computations against X-state
closed forms, known states, bounds, and structural properties."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udwpair import (
    DetectorParams,
    DomainError,
    InvalidStateError,
    XStateAB,
    concurrence_exact,
    correlation,
    elements_minkowski,
    entanglement_of_formation,
    joint_excitation,
    negativity_exact,
    partial_transpose_a,
    xstate_entanglement,
    xstate_measures,
)


def random_xstate_matrix(rng) -> np.ndarray:
    """Random valid X-state: diagonal simplex point with anti-diagonal entries
    drawn inside the positivity disks, random phases."""
    diag = rng.dirichlet(np.ones(4))
    r11, r22, r33, r44 = diag
    m14 = math.sqrt(r11 * r44) * rng.uniform(0.0, 1.0)
    m23 = math.sqrt(r22 * r33) * rng.uniform(0.0, 1.0)
    x14 = m14 * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    x23 = m23 * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    rho = np.diag(diag).astype(complex)
    rho[0, 3] = x14
    rho[3, 0] = np.conj(x14)
    rho[1, 2] = x23
    rho[2, 1] = np.conj(x23)
    return rho


def random_density_matrix(rng) -> np.ndarray:
    """Random full-rank two-qubit state from a complex Ginibre matrix."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


BELL_PHI = np.zeros((4, 4), dtype=complex)
BELL_PHI[0, 0] = BELL_PHI[3, 3] = BELL_PHI[0, 3] = BELL_PHI[3, 0] = 0.5


class TestExactMeasures:
    def test_product_state_is_separable(self):
        rho = np.kron(np.diag([0.9, 0.1]), np.diag([0.7, 0.3])).astype(complex)
        assert negativity_exact(rho) == 0.0
        assert concurrence_exact(rho) == 0.0

    def test_bell_state(self):
        assert negativity_exact(BELL_PHI) == pytest.approx(0.5, abs=1e-14)
        assert concurrence_exact(BELL_PHI) == pytest.approx(1.0, abs=1e-12)

    def test_partial_transpose_index_convention(self):
        rng = np.random.default_rng(1)
        rho = random_density_matrix(rng)
        pt = partial_transpose_a(rho)
        for k in range(2):
            for l in range(2):
                for m in range(2):
                    for n in range(2):
                        assert pt[2 * k + l, 2 * m + n] == rho[2 * m + l, 2 * k + n]

    def test_invalid_states_rejected(self):
        with pytest.raises(InvalidStateError):
            negativity_exact(np.eye(4, dtype=complex))  # trace 4
        bad = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        bad[0, 1] = 0.3  # not Hermitian
        with pytest.raises(InvalidStateError):
            concurrence_exact(bad)
        nonpsd = np.diag([1.2, -0.2, 0.0, 0.0]).astype(complex)
        with pytest.raises(InvalidStateError):
            negativity_exact(nonpsd)

    def test_xstate_pattern_enforced(self):
        rho = np.full((4, 4), 0.25, dtype=complex)
        with pytest.raises(InvalidStateError):
            xstate_entanglement(rho)


class TestXStateClosedForms:
    def test_bell_closed_form(self):
        neg, conc = xstate_entanglement(BELL_PHI)
        assert neg == pytest.approx(0.5, abs=1e-15)
        assert conc == pytest.approx(1.0, abs=1e-15)

    def test_matches_eigen_exact_on_random_states(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            rho = random_xstate_matrix(rng)
            neg_cf, conc_cf = xstate_entanglement(rho)
            assert neg_cf == pytest.approx(negativity_exact(rho), abs=1e-12)
            assert conc_cf == pytest.approx(concurrence_exact(rho), abs=1e-12)

    def test_branch_exclusivity(self):
        # r14^2 > r22 r33 and r23^2 > r11 r44 cannot hold simultaneously for
        # a valid state: positivity gives r14^2 <= r11 r44 and r23^2 <= r22 r33
        rng = np.random.default_rng(7)
        for _ in range(2000):
            rho = random_xstate_matrix(rng)
            d = rho.diagonal().real
            branch1 = abs(rho[0, 3]) ** 2 > d[1] * d[2]
            branch2 = abs(rho[1, 2]) ** 2 > d[0] * d[3]
            assert not (branch1 and branch2)

    def test_identical_detector_equality_case(self):
        # r22 = r33 with r14 > r22: negativity = concurrence/2 exactly and
        # the negative-eigenvalue eigenvector of the partial transpose is
        # the singlet-like (0, -1, 1, 0)/sqrt(2)
        rho = np.diag([0.66, 0.1, 0.1, 0.14]).astype(complex)
        rho[0, 3] = rho[3, 0] = 0.14
        neg, conc = xstate_entanglement(rho)
        assert neg == pytest.approx(conc / 2.0, abs=1e-15)
        assert neg == pytest.approx(0.14 - 0.1, abs=1e-15)
        vals, vecs = np.linalg.eigh(partial_transpose_a(rho))
        vec = vecs[:, 0]
        vec = vec * np.exp(-1j * np.angle(vec[2]))
        want = np.array([0.0, -1.0, 1.0, 0.0]) / math.sqrt(2.0)
        assert np.allclose(vec.real, want, atol=1e-12)
        assert np.allclose(vec.imag, 0.0, atol=1e-12)
        assert vals[0] == pytest.approx(-neg, abs=1e-15)


class TestBounds:
    def test_concurrence_dominates_twice_negativity(self):
        rng = np.random.default_rng(11)
        for _ in range(800):
            rho = random_density_matrix(rng)
            assert concurrence_exact(rho) + 1e-10 >= 2.0 * negativity_exact(rho)


class TestEntanglementOfFormation:
    def test_endpoints(self):
        assert entanglement_of_formation(0.0).exact == 0.0
        assert entanglement_of_formation(1.0).exact == pytest.approx(1.0, abs=1e-15)

    def test_small_concurrence_expansion(self):
        res = entanglement_of_formation(1e-3)
        assert res.exact == pytest.approx(5.8435672281927477204e-6, rel=1e-12)
        assert res.perturbative == pytest.approx(res.exact, rel=1e-4)

    def test_monotone(self):
        vals = [entanglement_of_formation(c).exact for c in np.linspace(0, 1, 50)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_range_errors(self):
        with pytest.raises(DomainError):
            entanglement_of_formation(1.5)
        with pytest.raises(DomainError):
            entanglement_of_formation(-0.2)
        # eigenvalue roundoff at the boundary is absorbed
        assert entanglement_of_formation(1.0 + 1e-15).exact == pytest.approx(1.0)


class TestCorrelation:
    def test_uncorrelated_product(self):
        stx = XStateAB(a=0.02, b=0.03, x=0.0, c=0.0, e=0.02 * 0.03)
        assert correlation(stx, 0.1).general == pytest.approx(0.0, abs=1e-18)

    def test_identical_shortcut_matches_general(self):
        p = DetectorParams(omega=0.7, sigma=1.0, eps0=0.01)
        stx = elements_minkowski(p, 1.3)
        res = correlation(stx, p.eps0)
        assert res.leading_identical is not None
        assert res.general == pytest.approx(
            res.leading_identical, rel=100.0 * p.eps0**2
        )

    def test_nonidentical_has_no_shortcut(self):
        stx = XStateAB(a=0.02, b=0.05, x=0.001, c=0.0, e=joint_excitation(0.02, 0.05, 0.001, 0.0))
        assert correlation(stx, 0.01).leading_identical is None

    def test_degenerate_variance_rejected(self):
        stx = XStateAB(a=0.0, b=0.02, x=0.0, c=0.0, e=0.0)
        with pytest.raises(DomainError):
            correlation(stx, 0.01)

    def test_vanishes_at_large_separation(self):
        p = DetectorParams(omega=1.0, sigma=1.0, eps0=0.01)
        near = correlation(elements_minkowski(p, 1.0), p.eps0).general
        far = correlation(elements_minkowski(p, 40.0), p.eps0).general
        assert abs(far) < abs(near) * 1e-3


class TestReport:
    def test_spec_point_reproduces_expected_concurrence(self):
        p = DetectorParams(omega=1.0, sigma=1.0, eps0=0.01)
        report = xstate_measures(elements_minkowski(p, 1.0), p.eps0)
        # leading order: 2 (|x| - a) = 2 (0.047440 - 0.0070883)
        assert report.concurrence_leading / p.eps0**2 == pytest.approx(
            0.0807041257, abs=1e-9
        )
        assert report.harvested
        assert report.negativity == pytest.approx(
            report.negativity_leading, abs=10.0 * p.eps0**4
        )
        assert report.concurrence == pytest.approx(
            report.concurrence_xstate, abs=1e-12
        )
        assert report.negativity_identical is not None

    def test_separable_point(self):
        p = DetectorParams(omega=2.5, sigma=1.0, eps0=0.01)
        report = xstate_measures(elements_minkowski(p, 8.0), p.eps0)
        assert not report.harvested
        assert report.concurrence_leading == 0.0
        assert report.concurrence == pytest.approx(0.0, abs=1e-12)
        assert report.eof == pytest.approx(0.0, abs=1e-10)

    def test_second_entanglement_branch_never_fires_at_leading_order(self):
        # |C| > sqrt(E) would need |c|^2 > |x|^2 + a b + 2|c|^2, impossible;
        # the assembled detector state is only ever entangled through the
        # |rho_14| > sqrt(r22 r33) branch
        from udwpair import assemble_density_matrix

        for om in np.linspace(-3.0, 3.0, 7):
            p = DetectorParams(omega=float(om), sigma=1.0, eps0=0.01)
            for length in np.linspace(0.2, 8.0, 9):
                stx = elements_minkowski(p, float(length))
                rho = assemble_density_matrix(stx, p.eps0)
                r = rho.diagonal().real
                assert abs(rho[1, 2]) <= math.sqrt(r[0] * r[3])


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_closed_forms_match_eigen_on_arbitrary_xstates(seed):
    rng = np.random.default_rng(seed)
    rho = random_xstate_matrix(rng)
    neg_cf, conc_cf = xstate_entanglement(rho)
    assert neg_cf == pytest.approx(negativity_exact(rho), abs=1e-12)
    assert conc_cf == pytest.approx(concurrence_exact(rho), abs=1e-12)
