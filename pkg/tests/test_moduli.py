"""Moduli, Osgood verdicts, the Omega transform, and Bihari bounds.

Closed-form oracles: for omega(s)=s the partial integrals are ln(u0/eps)
and the Bihari bound collapses to the exponential Gronwall form; for
omega(s)=sqrt(s) the integral converges to 2*sqrt(u0).
"""

import math

import numpy as np
import pytest

from stieltjes import BoundInapplicableError, Derivator, ModulusOverflowError
from stieltjes.moduli import (
    OmegaTransform,
    OsgoodModulus,
    bihari_bound,
    exp_iter,
    log_iter,
    omega_k,
    omega_k_modulus,
    osgood_check,
)


class TestIteratedExpLog:
    def test_exp_iter_values(self):
        assert exp_iter(0, 1.0) == 1.0
        assert exp_iter(1, 1.0) == pytest.approx(math.e, rel=1e-15)
        assert exp_iter(2, 1.0) == pytest.approx(math.exp(math.e), rel=1e-15)

    def test_log_iter_inverts_exp_iter(self):
        for k, ts in ((1, (0.5, 1.0, 2.0)), (2, (0.5, 1.0, 2.0)), (3, (0.5, 1.0))):
            for t in ts:
                assert log_iter(k, exp_iter(k, t)) == pytest.approx(t, rel=1e-10)

    def test_log_iter_domain(self):
        with pytest.raises(ValueError):
            log_iter(2, 1.0)  # needs t > e^0 = 1
        with pytest.raises(ValueError):
            log_iter(1, 0.0)

    def test_overflow_is_explicit(self):
        with pytest.raises(ModulusOverflowError):
            exp_iter(4, 1.0)
        with pytest.raises(ModulusOverflowError):
            omega_k(4, 0.5)


class TestOmegaK:
    def test_zero_at_zero(self):
        for k in (1, 2, 3):
            assert omega_k(k, 0.0) == 0.0

    def test_k1_branch_value(self):
        # at the branch point both pieces give 1/e
        assert omega_k(1, 1.0 / math.e) == pytest.approx(1.0 / math.e, rel=1e-14)
        assert omega_k(1, 0.9) == pytest.approx(1.0 / math.e, rel=1e-15)

    def test_k1_formula_inside_branch(self):
        t = 0.01
        assert omega_k(1, t) == pytest.approx(t * math.log(1.0 / t), rel=1e-14)

    def test_branch_plateau_continuity(self):
        for k in (1, 2, 3):
            ek = exp_iter(k, 1.0)
            below = (1.0 / ek) * (1 - 1e-9)
            assert abs(omega_k(k, below) - omega_k(k, 1.0 / ek)) <= 1e-9

    def test_vectorized(self):
        ts = np.array([0.0, 1e-4, 0.2, 5.0])
        vals = omega_k(1, ts)
        assert vals.shape == ts.shape
        assert vals[0] == 0.0
        assert vals[-1] == pytest.approx(1.0 / math.e)

    def test_monotone_nondecreasing(self):
        for k in (1, 2, 3):
            ts = np.geomspace(1e-14, 10.0, 500)
            vals = omega_k(k, ts)
            assert np.all(np.diff(vals) >= -1e-15)

    def test_subadditive_inequality(self, rng):
        # |omega_k(|x|) - omega_k(|y|)| <= omega_k(|x - y|), 1e5 random pairs
        for k in (1, 2, 3):
            x = rng.uniform(-2.0, 2.0, size=100_000)
            y = rng.uniform(-2.0, 2.0, size=100_000)
            lhs = np.abs(omega_k(k, np.abs(x)) - omega_k(k, np.abs(y)))
            rhs = omega_k(k, np.abs(x - y))
            assert np.all(lhs <= rhs + 1e-12)


class TestOsgoodCheck:
    def test_linear_modulus_diverges(self):
        report = osgood_check(lambda s: s, u0=1.0)
        assert report.verdict == "DIVERGENT"
        # oracle: I(eps) = ln(u0/eps)
        for eps, val in report.trace_rows():
            assert val == pytest.approx(math.log(1.0 / eps), rel=1e-10)

    def test_square_modulus_diverges(self):
        # I(eps) = 1/eps - 1/u0 grows without bound
        report = osgood_check(lambda s: s * s, u0=1.0)
        assert report.verdict == "DIVERGENT"

    def test_sqrt_modulus_converges(self):
        report = osgood_check(lambda s: math.sqrt(s), u0=1.0)
        assert report.verdict == "CONVERGENT"
        for eps, val in report.trace_rows():
            assert val == pytest.approx(2.0 * (1.0 - math.sqrt(eps)), rel=1e-9)

    def test_omega_k_family_diverges(self):
        for k in (1, 2, 3):
            report = osgood_check(omega_k_modulus(k), u0=1.0 / math.e)
            assert report.verdict == "DIVERGENT", f"k={k}: {report.increments[-6:]}"

    def test_omega1_trace_oracle(self):
        # antiderivative of 1/(s log(1/s)) is -log(log(1/s))
        report = osgood_check(omega_k_modulus(1), u0=1.0 / math.e)
        for eps, val in report.trace_rows():
            expected = math.log(math.log(1.0 / eps)) - math.log(math.log(math.e))
            assert val == pytest.approx(expected, rel=1e-8)

    def test_u0_validation(self):
        with pytest.raises(ValueError):
            osgood_check(lambda s: s, u0=0.0)


class TestOsgoodModulus:
    def test_validate_accepts_good(self):
        OsgoodModulus(evaluator=lambda s: s, name="linear").validate()

    def test_validate_rejects_nonzero_origin(self):
        with pytest.raises(ValueError):
            OsgoodModulus(evaluator=lambda s: s + 1.0).validate()

    def test_validate_rejects_decreasing(self):
        with pytest.raises(ValueError):
            OsgoodModulus(evaluator=lambda s: s * (1.5 - s)).validate(u0=1.4)


class TestOmegaTransform:
    def test_anchored_at_zero(self):
        tr = OmegaTransform(lambda s: s, u0=1.0)
        assert tr.omega_of(1.0) == pytest.approx(0.0, abs=1e-14)

    def test_matches_log_closed_form(self):
        tr = OmegaTransform(lambda s: s, u0=1.0)
        for r in np.geomspace(1e-6, 1e6, 25):
            assert tr.omega_of(r) == pytest.approx(math.log(r), rel=1e-10, abs=1e-10)

    def test_strictly_increasing(self):
        tr = OmegaTransform(omega_k_modulus(1), u0=0.25)
        assert np.all(np.diff(tr.values) > 0)

    def test_inverse_round_trip(self):
        tr = OmegaTransform(omega_k_modulus(2), u0=0.05, r_min=1e-9, r_max=10.0)
        for r in np.geomspace(1e-8, 5.0, 40):
            back = tr.inverse(tr.omega_of(r))
            assert back == pytest.approx(r, rel=1e-8)


class TestBihariBound:
    def test_gronwall_closed_form(self):
        # omega(s) = s, u0 = 1: bound(t) = kappa * exp(h(t) - h(a))
        tr = OmegaTransform(lambda s: s, u0=1.0)
        h = Derivator.identity((0.0, 2.0)).with_jumps([(1.0, 0.5)])
        kappa = 0.3
        bound = bihari_bound(kappa, h, 0.0, 2.0, tr)
        for t in np.linspace(0.0, 2.0, 100):
            expected = kappa * math.exp(h.eval(t) - h.eval(0.0))
            assert bound(float(t)) == pytest.approx(expected, rel=1e-8)

    def test_constant_h_gives_constant_kappa(self):
        tr = OmegaTransform(lambda s: s, u0=1.0)
        h = Derivator.constant((0.0, 1.0), value=7.0)
        bound = bihari_bound(0.9, h, 0.0, 1.0, tr)
        for t in (0.0, 0.4, 1.0):
            assert bound(t) == pytest.approx(0.9, rel=1e-10)

    def test_anchored_at_kappa(self):
        tr = OmegaTransform(omega_k_modulus(1), u0=0.25, r_min=1e-10, r_max=10.0)
        h = Derivator.identity((0.0, 1.0))
        bound = bihari_bound(1e-6, h, 0.0, 1.0, tr)
        assert bound(0.0) == pytest.approx(1e-6, rel=1e-8)

    def test_nondecreasing(self):
        tr = OmegaTransform(lambda s: s, u0=1.0)
        h = Derivator.identity((0.0, 2.0)).with_jumps([(0.7, 1.0)])
        bound = bihari_bound(0.5, h, 0.0, 2.0, tr)
        ts = np.linspace(0, 2, 50)
        vals = [bound(float(t)) for t in ts]
        assert np.all(np.diff(vals) >= -1e-12)

    def test_precondition_violation(self):
        # tiny table: the required growth exceeds the tabulated beta estimate
        tr = OmegaTransform(lambda s: s, u0=1.0, r_min=0.5, r_max=2.0)
        h = Derivator.identity((0.0, 2.0))
        with pytest.raises(BoundInapplicableError) as exc:
            bihari_bound(1.0, h, 0.0, 2.0, tr)
        assert exc.value.required is not None
        assert exc.value.available is not None
