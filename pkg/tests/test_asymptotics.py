import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from bintables.asymptotics import (
    Series,
    delta,
    delta_bounds,
    delta_infimum,
    finite_n_typical_prediction,
    gamma_c,
    log_count_assembled,
    log_count_expansion,
    log_heuristic_assembled,
    log_heuristic_expansion,
    x_value,
    z11_star,
)
from bintables.errors import DomainError
from bintables.heuristic import log_heuristic
from bintables.margins import FamilyParams, bmax, build_family_margins
from bintables.typical import bernoulli_entropy, solve_typical_table

LN2 = math.log(2)


def params(B, C, d=0.5, n=100):
    return FamilyParams(n, d, B, C)


@st.composite
def admissible(draw):
    C = draw(st.floats(1e-3, 0.75 - 1e-3))
    B = draw(st.floats(1e-3, 1 - 1e-3)) * bmax(C)
    return B, C


# figure curves, transcribed from the plot code
FIGURE_CURVES = {
    0.5: lambda x: -x * x + 2 * x - 1 + math.log(x * x - 2 * x + 2),
    0.25: lambda x: 1 - (1 / 3) * (x * x - 2 * x + 4) - math.log(3) + math.log(x * x - 2 * x + 4),
    0.625: lambda x: 1 - (1 / 3) * (5 * x * x - 10 * x + 8) - math.log(3) + math.log(5 * x * x - 10 * x + 8),
    0.125: lambda x: 1 - (1 / 7) * (x * x - 2 * x + 8) - math.log(7) + math.log(x * x - 2 * x + 8),
}


class TestZ11Star:
    @pytest.mark.parametrize("C", [0.1, 0.3, 0.5, 0.7])
    def test_uniform(self, C):
        assert z11_star(1.0, C) == pytest.approx(C, rel=1e-14)

    def test_values(self):
        assert z11_star(0.5, 0.5) == pytest.approx(0.1, rel=1e-14)
        assert z11_star(0.5, 0.25) == pytest.approx(0.1875 / 3.25, rel=1e-14)
        assert z11_star(0.5, 0.25) == pytest.approx(0.057692, abs=5e-7)

    @pytest.mark.parametrize("B, C", [(1.0, 0.75), (2.0, 0.25), (0.0, 0.5), (1.0, 0.0)])
    def test_domain(self, B, C):
        with pytest.raises(DomainError):
            z11_star(B, C)

    @given(admissible())
    def test_in_unit_interval(self, bc):
        assert 0 < z11_star(*bc) < 1


class TestCountExpansion:
    def test_uniform_half(self):
        c = log_count_expansion(params(1.0, 0.5))
        assert c.c_n2 == pytest.approx(LN2, rel=1e-15)
        assert c.c_n1d == pytest.approx(2 * LN2, rel=1e-15)
        assert c.c_n2d == pytest.approx(LN2 - 0.5, rel=1e-14)

    def test_half_half(self):
        c = log_count_expansion(params(0.5, 0.5))
        expected = bernoulli_entropy(0.1) + 0.1 * math.log(1 / 9) - 0.125
        assert c.c_n2d == pytest.approx(expected, rel=1e-14)
        assert c.c_n2d == pytest.approx(-0.019639, abs=5e-7)

    def test_flags(self):
        c = log_count_expansion(params(0.5, 0.5, d=0.5))
        assert c.dominated_by_error and c.n_log_n
        assert c.error_exponents == (0.5, 1.0)
        c = log_count_expansion(params(0.5, 0.5, d=0.7))
        assert not c.dominated_by_error
        assert c.error_exponents[0] == pytest.approx(1.1)

    @given(admissible())
    def test_leading_term(self, bc):
        B, C = bc
        assert log_count_expansion(params(B, C)).c_n2 == bernoulli_entropy(C)

    @settings(max_examples=300)
    @given(admissible())
    def test_closed_form_matches_taylor_assembly(self, bc):
        a = log_count_expansion(params(*bc))
        b = log_count_assembled(params(*bc))
        assert a.c_n2 == pytest.approx(b.c_n2, abs=1e-12)
        assert a.c_n1d == pytest.approx(b.c_n1d, abs=1e-12)
        assert a.c_n2d == pytest.approx(b.c_n2d, abs=1e-12)


class TestHeuristicExpansion:
    def test_uniform_half(self):
        c = log_heuristic_expansion(params(1.0, 0.5))
        assert c.c_n2d == pytest.approx(-0.5 + LN2, rel=1e-14)
        assert c.c_n2d == pytest.approx(log_count_expansion(params(1.0, 0.5)).c_n2d, rel=1e-14)

    def test_half_half(self):
        c = log_heuristic_expansion(params(0.5, 0.5))
        assert c.c_n2d == pytest.approx(0.125 - LN2 - 2 * math.log(0.75), rel=1e-14)
        assert c.c_n2d == pytest.approx(0.007217, abs=5e-7)

    def test_wider_domain(self):
        # the heuristic expansion only needs C < 1 and BC < 1
        log_heuristic_expansion(params(1.2, 0.8))
        with pytest.raises(DomainError):
            log_heuristic_expansion(params(1.25, 0.8))

    @settings(max_examples=300)
    @given(st.floats(1e-3, 1 - 1e-3), st.floats(1e-3, 1 - 1e-3))
    def test_closed_form_matches_stirling_assembly(self, C, frac):
        B = frac / C
        a = log_heuristic_expansion(params(B, C))
        b = log_heuristic_assembled(params(B, C))
        scale = max(1.0, abs(a.c_n2d))
        assert a.c_n2 == pytest.approx(b.c_n2, abs=1e-12)
        assert a.c_n1d == pytest.approx(b.c_n1d, abs=1e-12 * scale)
        assert a.c_n2d == pytest.approx(b.c_n2d, abs=1e-10 * scale)

    @given(admissible())
    def test_shares_leading_terms_with_count(self, bc):
        a = log_count_expansion(params(*bc))
        h = log_heuristic_expansion(params(*bc))
        assert a.c_n2 == h.c_n2
        assert a.c_n1d == h.c_n1d

    @pytest.mark.parametrize("d", [0.5, 0.6, 0.75])
    def test_tracks_exact_log_heuristic(self, d):
        scaled = []
        for n in [100, 400, 1600, 6400]:
            p = FamilyParams(n, d, 0.5, 0.5)
            resid = (log_heuristic(build_family_margins(p)).log_estimate
                     - log_heuristic_expansion(p).evaluate(n, d))
            scaled.append(abs(resid) / (n * math.log(n) + n ** (3 * d - 1)))
        assert max(scaled) < 2.0
        assert max(scaled[2:]) <= max(scaled[:2])


class TestDelta:
    @pytest.mark.parametrize("C", [0.01, 0.125, 0.25, 0.5, 0.625, 0.74])
    def test_zero_at_one(self, C):
        assert delta(1.0, C) == 0.0
        x = (Fraction(C) - 2 * Fraction(C) + 1) / (1 - Fraction(C))
        assert x == 1

    def test_half_half(self):
        assert delta(0.5, 0.5) == pytest.approx(-0.25 + math.log(1.25), rel=1e-14)
        diff = (log_count_expansion(params(0.5, 0.5)).c_n2d
                - log_heuristic_expansion(params(0.5, 0.5)).c_n2d)
        assert delta(0.5, 0.5) == pytest.approx(diff, abs=1e-15)
        assert delta(0.5, 0.5) == pytest.approx(-0.026856, abs=5e-7)

    @pytest.mark.parametrize("C", sorted(FIGURE_CURVES))
    def test_figure_curves(self, C):
        curve = FIGURE_CURVES[C]
        for B in np.linspace(0, bmax(C), 400)[1:-1]:
            assert delta(B, C) == pytest.approx(curve(B), abs=1e-12)

    @settings(max_examples=500)
    @given(admissible())
    def test_identity(self, bc):
        B, C = bc
        diff = log_count_expansion(params(B, C)).c_n2d - log_heuristic_expansion(params(B, C)).c_n2d
        assert delta(B, C) == pytest.approx(diff, abs=1e-12)

    @settings(max_examples=500)
    @given(admissible())
    def test_sign_and_x_form(self, bc):
        B, C = bc
        assume(B != 1.0)
        x = x_value(B, C)
        assert x != 1.0
        assert delta(B, C) < 0
        assert delta(B, C) == pytest.approx(1 - x + math.log(x), abs=1e-15)

    @pytest.mark.parametrize("C", [0.1, 0.3, 0.5, 0.7])
    def test_unimodal(self, C):
        bs = np.linspace(0, bmax(C), 2001)[1:-1]
        vals = np.array([delta(B, C) for B in bs])
        peak = int(np.argmax(vals))
        assert abs(bs[peak] - 1.0) < bs[1] - bs[0] + 1e-12
        assert np.all(np.diff(vals[:peak + 1]) > 0)
        assert np.all(np.diff(vals[peak:]) < 0)


class TestGammaC:
    def test_quarter(self):
        assert gamma_c(0.25) == pytest.approx(4 / 3, rel=1e-14)

    def test_half(self):
        b = math.sqrt(1 / 12) + 0.5
        assert gamma_c(0.5) == pytest.approx((0.5 - b + b * b) / (0.5 * b * b), rel=1e-14)
        assert gamma_c(0.5) == pytest.approx(1.0717968, abs=5e-8)

    @given(st.floats(1e-4, 0.75 - 1e-4))
    def test_positive_and_edge_value(self, C):
        b = 1 / bmax(C)
        # numerator rearranges to C(1-b)^2 + b^2(1-C)
        num = C - 2 * C * b + b * b
        assert num == pytest.approx(C * (1 - b) ** 2 + b * b * (1 - C), rel=1e-12, abs=1e-15)
        assert gamma_c(C) > 0
        assert gamma_c(C) == pytest.approx((bmax(C) ** 2 * C - 2 * bmax(C) * C + 1) / (1 - C), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_c(0.75)


class TestBounds:
    def test_half(self):
        lower, upper = delta_bounds(0.5)
        assert upper == 0.0
        assert lower == pytest.approx(-2 + LN2 + 1, rel=1e-14)
        assert lower == pytest.approx(-0.306853, abs=5e-7)
        g = gamma_c(0.5)
        assert 1 - g + math.log(g) == pytest.approx(-0.0024603, abs=5e-8)

    def test_quarter(self):
        assert -4 + math.log(4) + 1 == pytest.approx(-1.613706, abs=5e-7)
        assert delta_bounds(0.25)[0] == pytest.approx(-4 + math.log(4) + 1, rel=1e-14)

    def test_sandwich_up_to_half(self):
        for C in np.linspace(0, 0.5, 52)[1:-1]:
            lower, upper = delta_bounds(C)
            for B in np.linspace(0, bmax(C), 52)[1:-1]:
                assert lower < delta(B, C) <= upper

    def test_published_bound_fails_above_half(self):
        # as B -> 0, delta -> 1 - 1/(1-C) + log(1/(1-C)), below 1 - 1/C + log(1/C) once C > 1/2
        C = 0.625
        lower, _ = delta_bounds(C)
        assert lower == pytest.approx(-0.1299964, abs=1e-7)
        assert delta(0.01, C) < lower
        assert delta(1e-6, C) == pytest.approx(1 - 1 / (1 - C) + math.log(1 / (1 - C)), abs=1e-5)

    def test_infimum_holds_everywhere_and_is_tight(self):
        for C in np.linspace(0, 0.75, 52)[1:-1]:
            inf = delta_infimum(C)
            vals = [delta(B, C) for B in np.linspace(0, bmax(C), 52)[1:-1]]
            assert all(inf < v <= 0 for v in vals)
            ends = [delta(bmax(C) * 1e-7, C), delta(bmax(C) * (1 - 1e-9), C)]
            assert min(ends) == pytest.approx(inf, abs=1e-5)


class TestPrediction:
    def test_uniform(self):
        pred = finite_n_typical_prediction(params(1.0, 0.3))
        assert pred["z1"] == pytest.approx(0.3) and pred["z2"] == 0.3 and pred["z3"] == 0.3

    def test_half_half(self):
        pred = finite_n_typical_prediction(params(0.5, 0.5, n=200))
        assert (pred["z1"], pred["z2"], pred["z3"]) == pytest.approx((0.1, 0.25, 0.5), rel=1e-14)
        assert pred["z3_bound"] == pytest.approx(0.25 * 200 ** -0.5, rel=1e-14)
        assert pred["z3_bound"] == pytest.approx(0.01768, abs=5e-6)

    def test_bulk_block_at_200(self):
        p = params(0.5, 0.5, n=200)
        t = solve_typical_table(build_family_margins(p))
        z3 = t.entries[p.heavy, p.heavy]
        assert abs(z3 - 0.5) <= finite_n_typical_prediction(p)["z3_bound"]


class TestSeries:
    @given(st.floats(0.1, 5), st.floats(-2, 2), st.floats(-2, 2))
    def test_log_matches_numeric(self, a0, a1, a2):
        s = Series(a0, a1, a2).log()
        h = 1e-5
        exact = math.log(a0 + a1 * h + a2 * h * h)
        approx = s.a[0] + s.a[1] * h + s.a[2] * h * h
        # truncation error is O(h^3 / a0^3)
        assert exact == pytest.approx(approx, abs=1e-12 + 10 * (h / a0) ** 3 * (abs(a1) + abs(a2)) ** 3)

    def test_arithmetic(self):
        s = Series(1, 2, 3) * Series(0, 1) + 2
        assert s.a == (2.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            Series(0, 1).log()
