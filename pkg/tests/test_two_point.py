import numpy as np
import pytest

from ptpoint.boundary import TwoPoint, is_selfadjoint_connected
from ptpoint.errors import (
    ContourThroughZero,
    DegenerateIdenticallyZero,
    InvalidParams,
    NotAnEigenvalue,
)
from ptpoint.finitediff import OracleConfig, oracle_discrete_spectrum
from ptpoint.spectra import (
    ContourSpec,
    NEGATIVE_REAL,
    default_contour,
    delta_pair_matrix,
    two_point_dispersion_value,
    two_point_spectrum,
)
from ptpoint.states import (
    eigenfunction_two_point,
    interface_residual,
    pt_apply,
    pt_symmetry_defect,
    two_point_system_matrix,
)

# fixtures with vanishing lower-right entry: for these the closed-form
# dispersion equals the 4x4 interface-system determinant identically, so the
# contour solver, the kernel construction, and the finite-difference oracle
# can all be cross-checked against each other
REAL_PAIR_MODEL = np.array([[1.0, 1.0], [-1.0, 0.0]], dtype=complex)
COMPLEX_PAIR_MODEL = np.array([[1j, 1.0], [1.0, 0.0]], dtype=complex)


class TestDispersionValue:
    def test_free_conditions(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            k = rng.normal() + 1j * rng.normal()
            l = rng.uniform(0.3, 2.0)
            d = two_point_dispersion_value(np.eye(2), l, k)
            assert abs(d - 2j * k * k * np.cos(2 * k * l)) < 1e-12 * max(1.0, abs(d))

    def test_delta_pair_factorization(self):
        v = 2.0
        B = delta_pair_matrix(0.0, v)
        rng = np.random.default_rng(13)
        for _ in range(20):
            k = rng.normal() + 1j * rng.normal()
            expect = np.sin(2 * k) * (k * k * (1 - v * v) + 2j * k - 1)
            assert abs(two_point_dispersion_value(B, 1.0, k) - expect) < 1e-12 * max(1.0, abs(expect))

    def test_vanishes_at_origin(self):
        rng = np.random.default_rng(14)
        B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert two_point_dispersion_value(B, 0.7, 0.0) == 0

    def test_vectorized(self):
        ks = np.array([0.2 + 0.1j, 1.0 + 1.0j, -0.5 + 2.0j])
        vals = two_point_dispersion_value(REAL_PAIR_MODEL, 1.0, ks)
        singles = [two_point_dispersion_value(REAL_PAIR_MODEL, 1.0, k) for k in ks]
        assert np.allclose(vals, singles)


class TestDeltaPairMatrix:
    def test_entry_assignment(self):
        assert np.allclose(delta_pair_matrix(0, 2), [[1, 0], [1, 2j]])
        assert np.allclose(delta_pair_matrix(0, 0), [[1, 0], [1, 0]])

    def test_degenerate_at_zero_coupling(self):
        assert abs(np.linalg.det(delta_pair_matrix(0, 0))) == 0

    def test_selfadjoint_at_unit_real_coupling(self):
        assert is_selfadjoint_connected(delta_pair_matrix(1, 0))

    def test_textbook_variant_differs(self):
        paper = delta_pair_matrix(2, 0)
        textbook = delta_pair_matrix(2, 0, variant="textbook")
        assert np.allclose(textbook, [[1, 0], [2, 1]])
        assert not np.allclose(paper, textbook)

    def test_unknown_variant(self):
        with pytest.raises(InvalidParams):
            delta_pair_matrix(0, 1, variant="other")


class TestTwoPointSpectrum:
    def test_delta_pair_strong_coupling(self):
        rep = two_point_spectrum(delta_pair_matrix(0, 2), 1.0, ContourSpec(-5, 5, 1e-6, 5))
        assert rep.total_multiplicity == 1
        e = rep.eigenvalues[0]
        assert abs(e.lam + 1) < 1e-8 and e.kind == NEGATIVE_REAL and rep.all_real

    def test_delta_pair_weak_coupling(self):
        rep = two_point_spectrum(delta_pair_matrix(0, 0.5), 1.0, ContourSpec(-5, 5, 1e-6, 5))
        assert rep.eigenvalues == ()

    def test_free_conditions_empty(self):
        rep = two_point_spectrum(np.eye(2), 1.0, ContourSpec(-5, 5, 1e-6, 5))
        assert rep.eigenvalues == ()

    @pytest.mark.parametrize("v", [0.5, -0.5, 2.0, -2.0, 3.0, -3.0])
    def test_matches_closed_form_roots(self, v):
        rep = two_point_spectrum(delta_pair_matrix(0, v), 1.0)
        expect = [k for k in (-1j / (1 + v), -1j / (1 - v)) if k.imag > 1e-6]
        got = sorted((e.k.k for e in rep.eigenvalues), key=lambda z: z.imag)
        assert len(got) == len(expect)
        for a, b in zip(got, sorted(expect, key=lambda z: z.imag)):
            assert abs(a - b) < 1e-8

    def test_exact_axis_roots(self):
        # pure imaginary zeros come back with exactly zero real part
        rep = two_point_spectrum(delta_pair_matrix(0, 2), 1.0)
        assert rep.eigenvalues[0].k.k.real == 0.0

    def test_root_set_mirror_symmetry(self):
        for B in (REAL_PAIR_MODEL, COMPLEX_PAIR_MODEL, delta_pair_matrix(0, 2)):
            rep = two_point_spectrum(B, 1.0)
            ks = [e.k.k for e in rep.eigenvalues]
            for k in ks:
                assert min(abs(-np.conj(k) - kk) for kk in ks) < 1e-8

    def test_eigenvalues_closed_under_conjugation(self):
        rep = two_point_spectrum(COMPLEX_PAIR_MODEL, 1.0)
        lams = [e.lam for e in rep.eigenvalues]
        assert len(lams) >= 2 and not rep.all_real
        for lam in lams:
            assert min(abs(np.conj(lam) - mu) for mu in lams) < 1e-8

    def test_lowest_pair_isolated_by_contour(self):
        rep = two_point_spectrum(COMPLEX_PAIR_MODEL, 1.0, ContourSpec(-1.2, 1.2, 1e-6, 1.0))
        lams = sorted((e.lam for e in rep.eigenvalues), key=lambda z: z.imag)
        assert len(lams) == 2
        assert abs(lams[0] - np.conj(lams[1])) < 1e-8

    def test_contour_through_zero(self):
        # delta-pair root k = i sits exactly on the top edge im_max = 1
        with pytest.raises(ContourThroughZero):
            two_point_spectrum(delta_pair_matrix(0, 2), 1.0, ContourSpec(-5, 5, 1e-6, 1.0))

    def test_identically_zero_dispersion(self):
        with pytest.raises(DegenerateIdenticallyZero):
            two_point_spectrum(np.zeros((2, 2)), 1.0, ContourSpec(-5, 5, 1e-6, 5))

    def test_default_contour_covers_known_roots(self):
        c = default_contour(delta_pair_matrix(0, 2), 1.0)
        assert c.im_max > 1.0 and c.re_max > 1.0 and c.im_min > 0

    def test_wide_contour_large_roots(self):
        # v near 1 pushes the root high up the axis; default contour tracks it
        v = 1.015
        rep = two_point_spectrum(delta_pair_matrix(0, v), 1.0)
        expect = -1j / (1 - v)
        assert rep.total_multiplicity == 1
        assert abs(rep.eigenvalues[0].k.k - expect) < 1e-6 * abs(expect)


class TestInterfaceSystem:
    def test_determinant_matches_dispersion_when_lower_right_vanishes(self):
        rng = np.random.default_rng(15)
        for _ in range(30):
            B = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            B[1, 1] = 0.0
            if abs(np.linalg.det(B)) < 0.1:
                continue
            k = rng.normal() + 1j * rng.normal()
            det = np.linalg.det(two_point_system_matrix(B, 1.0, k))
            disp = two_point_dispersion_value(B, 1.0, k)
            assert abs(det - disp) < 1e-10 * max(1.0, abs(det))

    def test_delta_pair_closed_root_is_not_a_kernel_point(self):
        # the closed-form relation vanishes at k = i for v = 2, but the
        # interface system stays nonsingular there: the two objects separate
        # when the lower-right entry is nonzero
        B = delta_pair_matrix(0, 2)
        assert abs(two_point_dispersion_value(B, 1.0, 1j)) < 1e-14
        sv = np.linalg.svd(two_point_system_matrix(B, 1.0, 1j), compute_uv=False)
        assert sv[-1] > 0.5
        with pytest.raises(NotAnEigenvalue):
            eigenfunction_two_point(B, 1.0, 1j)


class TestTwoPointEigenfunctions:
    def test_real_pair_model(self):
        rep = two_point_spectrum(REAL_PAIR_MODEL, 1.0)
        assert rep.total_multiplicity == 2 and rep.all_real
        for e in rep.eigenvalues:
            psi = eigenfunction_two_point(REAL_PAIR_MODEL, 1.0, e.k.k)
            assert interface_residual(psi, REAL_PAIR_MODEL, 1.0) < 1e-8
            assert pt_symmetry_defect(psi) < 1e-8

    def test_complex_pair_partner_map(self):
        rep = two_point_spectrum(COMPLEX_PAIR_MODEL, 1.0, ContourSpec(-1.2, 1.2, 1e-6, 1.0))
        e = rep.eigenvalues[0]
        psi = eigenfunction_two_point(COMPLEX_PAIR_MODEL, 1.0, e.k.k)
        assert interface_residual(psi, COMPLEX_PAIR_MODEL, 1.0) < 1e-8
        assert pt_symmetry_defect(psi) > 0.1
        partner = pt_apply(psi)
        assert interface_residual(partner, COMPLEX_PAIR_MODEL, 1.0) < 1e-8

    def test_free_conditions_have_no_eigenfunctions(self):
        with pytest.raises(NotAnEigenvalue):
            eigenfunction_two_point(np.eye(2), 1.0, 0.5j)

    def test_lower_half_plane_rejected(self):
        with pytest.raises(NotAnEigenvalue):
            eigenfunction_two_point(REAL_PAIR_MODEL, 1.0, -0.5j)


@pytest.mark.slow
class TestTwoPointOracle:
    def test_real_pair_model_confirmed_independently(self):
        spec = TwoPoint(1.0, REAL_PAIR_MODEL)
        closed = [e.lam for e in two_point_spectrum(REAL_PAIR_MODEL, 1.0).eigenvalues]
        cand = oracle_discrete_spectrum(spec, OracleConfig(L=12.0, N=1200))
        for lam in closed:
            assert min(abs(lam - mu) for mu in cand) < 1e-3
