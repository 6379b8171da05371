import math

import numpy as np
import pytest

from gaussent.exceptions import ConstraintViolation, DomainError, NotSymmetric, UnphysicalPurities
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import Bipartition
from gaussent.twomode import service as twomode
from gaussent.twomode.schemas import EntanglementClass, TwoModeInvariants, TwoModeStandardForm


def _invariants(mu1, mu2, mu, delta):
    return TwoModeInvariants(mu1=mu1, mu2=mu2, mu=mu, delta=delta)


def _tmsv_eof(r):
    c2, s2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return c2 * math.log(c2) - s2 * math.log(s2)


# ==================== Invariants and standard form ====================

def test_vacuum_standard_form():
    sf = twomode.standard_form_from_invariants(_invariants(1, 1, 1, 2))
    assert (sf.a, sf.b) == pytest.approx((1, 1))
    assert (sf.c_plus, sf.c_minus) == pytest.approx((0, 0), abs=1e-12)


def test_product_of_thermal_states_has_no_correlations():
    cm = phasespace.direct_sum(phasespace.thermal(2.0), phasespace.thermal(3.0))
    sf = twomode.standard_form_from_cm(cm)
    assert (sf.a, sf.b) == pytest.approx((2, 3))
    assert (sf.c_plus, sf.c_minus) == pytest.approx((0, 0), abs=1e-6)
    assert twomode.symplectic_eigenvalues(twomode.invariants_from_cm(cm)) == pytest.approx((2, 3))


@pytest.mark.parametrize("r", [0.3, 1.0])
def test_tmsv_standard_form(r):
    sf = twomode.standard_form_from_cm(phasespace.two_mode_squeezed_vacuum(r))
    assert sf.a == pytest.approx(math.cosh(2 * r))
    assert sf.c_plus == pytest.approx(math.sinh(2 * r))
    assert sf.c_minus == pytest.approx(-math.sinh(2 * r))
    assert sf.symmetric


def test_standard_form_reproduces_random_states(make_state):
    for _ in range(30):
        cm = make_state(2)
        inv = twomode.invariants_from_cm(cm)
        rebuilt = twomode.cm_from_standard_form(twomode.standard_form_from_invariants(inv))
        back = twomode.invariants_from_cm(rebuilt)
        assert (back.mu1, back.mu2, back.mu) == pytest.approx((inv.mu1, inv.mu2, inv.mu), rel=1e-8)
        assert back.delta == pytest.approx(inv.delta, rel=1e-8)
        bp = Bipartition.split(2, {1})
        assert phasespace.log_negativity(rebuilt, bp) == pytest.approx(phasespace.log_negativity(cm, bp), abs=1e-7)
        assert twomode.log_negativity_two_mode(inv) == pytest.approx(phasespace.log_negativity(cm, bp), abs=1e-7)


def test_standard_form_rejects_bad_ordering():
    with pytest.raises(ValueError):
        TwoModeStandardForm(a=2, b=2, c_plus=0.1, c_minus=-0.5)


def test_global_purity_outside_bounds_is_rejected():
    with pytest.raises(ConstraintViolation) as exc:
        twomode.standard_form_from_invariants(_invariants(0.5, 0.5, 0.2, 10.0))
    assert exc.value.constraint == "global_purity_bounds"


def test_delta_outside_bounds_is_rejected():
    with pytest.raises(ConstraintViolation) as exc:
        twomode.standard_form_from_invariants(_invariants(0.8, 0.8, 0.9, 5.0))
    assert exc.value.constraint == "delta_bounds"


# ==================== Spectra ====================

@pytest.mark.parametrize("r", [0.3, 1.0, 2.0])
def test_tmsv_transposed_pair(r):
    inv = _invariants(1 / math.cosh(2 * r), 1 / math.cosh(2 * r), 1.0, 2.0)
    pair = twomode.ppt_eigenvalues(inv)
    assert pair.nu_tilde_minus == pytest.approx(math.exp(-2 * r), rel=1e-9)
    assert pair.nu_tilde_plus == pytest.approx(math.exp(2 * r), rel=1e-9)
    assert twomode.log_negativity_two_mode(inv) == pytest.approx(2 * r, abs=1e-9)


def test_transposed_larger_eigenvalue_is_at_least_one(make_state):
    for _ in range(50):
        pair = twomode.ppt_eigenvalues(twomode.invariants_from_cm(make_state(2)))
        assert pair.nu_tilde_plus >= 1 - 1e-9


def test_transposed_smaller_eigenvalue_grows_with_delta():
    mu1, mu2, mu = 0.5, 0.5, 0.45
    lower, upper = twomode.delta_bounds(mu1, mu2, mu)
    values = [
        twomode.ppt_eigenvalues(_invariants(mu1, mu2, mu, delta)).nu_tilde_minus
        for delta in np.linspace(lower, upper, 41)
    ]
    assert np.all(np.diff(values) >= -1e-12)
    assert values[-1] > values[0]


# ==================== Classification ====================

def test_thresholds_for_equal_marginals():
    mu1 = mu2 = 0.5
    separable = mu1 * mu2 / (mu1 + mu2 - mu1 * mu2)
    coexistence = 0.25 / math.sqrt(0.4375)
    assert separable == pytest.approx(1 / 3, abs=1e-12)
    assert twomode.classify_by_purities(mu1, mu2, separable) is EntanglementClass.SEPARABLE
    assert twomode.classify_by_purities(mu1, mu2, separable + 1e-9) is EntanglementClass.COEXISTENCE
    assert twomode.classify_by_purities(mu1, mu2, coexistence) is EntanglementClass.COEXISTENCE
    assert twomode.classify_by_purities(mu1, mu2, coexistence + 1e-9) is EntanglementClass.ENTANGLED
    assert twomode.classify_by_purities(mu1, mu2, 0.35) is EntanglementClass.COEXISTENCE
    assert twomode.classify_by_purities(mu1, mu2, 0.45) is EntanglementClass.ENTANGLED
    assert twomode.classify_by_purities(mu1, mu2, 0.9) is EntanglementClass.ENTANGLED


def test_unphysical_purities_are_rejected():
    with pytest.raises(UnphysicalPurities):
        twomode.classify_by_purities(0.5, 0.5, 0.2)
    with pytest.raises(UnphysicalPurities):
        twomode.classify_by_purities(0.5, 0.9, 0.99)


def _sample_band(rng, low, high, count=200):
    mu1 = mu2 = 0.5
    values = []
    for _ in range(count):
        mu = rng.uniform(low, high)
        lower, upper = twomode.delta_bounds(mu1, mu2, mu)
        delta = rng.uniform(lower, upper)
        inv = _invariants(mu1, mu2, mu, delta)
        cm = twomode.cm_from_standard_form(twomode.standard_form_from_invariants(inv))
        values.append(phasespace.log_negativity(cm, Bipartition.split(2, {1})))
    return np.array(values)


def test_band_verdicts_on_random_states(rng):
    separable = 1 / 3
    coexistence = 0.25 / math.sqrt(0.4375)
    assert np.all(_sample_band(rng, 0.25, separable) <= 1e-9)
    assert np.all(_sample_band(rng, coexistence + 1e-6, 1.0) > 0)
    mixed = _sample_band(rng, separable + 1e-6, coexistence)
    assert np.any(mixed <= 1e-9) and np.any(mixed > 1e-6)


# ==================== Extremal states ====================

def test_symmetric_gmems_has_degenerate_spectrum():
    cm = twomode.cm_from_standard_form(twomode.gmems(0.8, 0.8, 0.9))
    expected = 1 / math.sqrt(0.9)
    assert phasespace.symplectic_spectrum(cm).values == pytest.approx([expected, expected], abs=1e-8)


def test_glems_sit_on_unit_symplectic_eigenvalue():
    sf = twomode.glems(0.8, 0.8, 0.9)
    inv = twomode.invariants_from_cm(twomode.cm_from_standard_form(sf))
    nu_minus, _ = twomode.symplectic_eigenvalues(inv)
    assert nu_minus == pytest.approx(1.0, abs=1e-8)


def test_gmemms_is_where_extremal_states_meet():
    mu1, mu2 = 0.5, 0.8
    mu = mu1 * mu2 / (mu1 * mu2 + abs(mu1 - mu2))
    top = twomode.gmemms(mu1, mu2)
    least = twomode.glems(mu1, mu2, mu)
    assert (top.c_plus, top.c_minus) == pytest.approx((least.c_plus, least.c_minus), abs=1e-6)
    report = twomode.extremal_entanglement(mu1, mu2, mu)
    assert report.e_max == pytest.approx(report.e_min, abs=1e-7)


def test_extremal_bounds_are_ordered():
    report = twomode.extremal_entanglement(0.5, 0.5, 0.8)
    assert report.entanglement_class is EntanglementClass.ENTANGLED
    assert 0 < report.e_min <= report.e_max
    assert report.e_avg == pytest.approx((report.e_min + report.e_max) / 2)
    assert 0 <= report.rel_error < 1


def test_extremal_errors_at_band_edges():
    separable = twomode.extremal_entanglement(0.5, 0.5, 0.3)
    assert (separable.e_max, separable.e_min, separable.rel_error) == (0.0, 0.0, 0.0)
    coexisting = twomode.extremal_entanglement(0.5, 0.5, 0.35)
    assert coexisting.e_min == 0.0
    assert coexisting.e_max > 0
    assert coexisting.rel_error == 1.0


def test_glems_exist_below_separable_threshold():
    sf = twomode.glems(0.5, 0.5, 0.3)
    inv = twomode.invariants_from_cm(twomode.cm_from_standard_form(sf))
    assert twomode.log_negativity_two_mode(inv) == 0.0


def test_relative_error_small_for_strong_entanglement(rng):
    kept = 0
    for _ in range(500):
        m = rng.uniform(0.02, 0.65)
        mu = rng.uniform(m, 1.0)
        if mu <= m:
            continue
        report = twomode.extremal_entanglement(m, m, mu)
        if report.e_avg >= 1:
            kept += 1
            assert report.rel_error < 0.05
    assert kept > 50


def test_bounds_scan_spans_physical_range():
    rows = twomode.entanglement_bounds_scan(0.5, 0.5, 21)
    assert len(rows) == 21
    assert rows[0].mu == pytest.approx(0.25)
    assert rows[-1].mu == pytest.approx(1.0)
    assert rows[0].entanglement_class is EntanglementClass.SEPARABLE
    assert rows[-1].entanglement_class is EntanglementClass.ENTANGLED
    assert all(row.e_min <= row.e_max + 1e-12 for row in rows)


# ==================== Entanglement of formation ====================

@pytest.mark.parametrize("r", [0.3, 1.0, 2.0])
def test_eof_of_tmsv(r):
    assert twomode.eof_symmetric(phasespace.two_mode_squeezed_vacuum(r)) == pytest.approx(_tmsv_eof(r), abs=1e-9)


def test_eof_function_edges():
    assert twomode.eof_function(1.0) == 0.0
    assert twomode.eof_function(0.5) > 0
    with pytest.raises(DomainError):
        twomode.eof_function(0.0)


def test_eof_requires_symmetric_state():
    cm = phasespace.direct_sum(phasespace.thermal(2.0), phasespace.thermal(3.0))
    with pytest.raises(NotSymmetric):
        twomode.eof_symmetric(cm)
