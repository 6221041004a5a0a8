"""Regime parameter pickers: values, feasibility flags, precision stability."""

import pytest
from mpmath import mp, mpf

from treexplore.errors import InfeasibleParamsError
from treexplore.harness.params import (
    pick_params,
    pick_params_thm1,
    pick_params_thm2,
    pick_params_thm3,
    pick_params_thm4,
)


class TestThm1:
    def test_million_vertices_full_team_is_infeasible(self):
        p = pick_params_thm1(10**6, 10**6, 1)
        assert p.m == 1
        assert not p.feasible
        assert "m must exceed 1" in p.violated

    def test_manual_override_hits_the_feasible_point(self):
        p = pick_params_thm1(4096, 541, 1, m=3, L=1)
        assert p.feasible
        assert (p.L, p.m) == (1, 3)
        assert p.details["max_team_size"] == 541

    def test_precondition(self):
        with pytest.raises(InfeasibleParamsError):
            pick_params_thm1(2, 1, 1)


class TestThm2:
    def test_eps_tenth(self):
        p = pick_params_thm2(0.1)
        assert (p.L, p.m) == (1, 5)
        assert p.details["round_bound"] == pytest.approx(10.0)
        assert p.details["binomial_m_2"] == 10
        assert p.details["binomial_covers_bound"]
        assert p.feasible  # 16^5 = 2^20 sits exactly at desk scale

    def test_eps_twentieth_needs_astronomical_n(self):
        p = pick_params_thm2(1 / 20)
        assert p.m == 10
        assert p.details["min_n"] == 16**10
        assert not p.feasible

    def test_eps_out_of_range(self):
        with pytest.raises(InfeasibleParamsError):
            pick_params_thm2(0.25)

    def test_concrete_n_checked_against_preconditions(self):
        p = pick_params_thm2(0.1, n=2**20, k=5)
        assert p.feasible
        p = pick_params_thm2(0.1, n=1000)
        assert not p.feasible


class TestThm3:
    def test_megavertex_tree(self):
        p = pick_params_thm3(2**20)
        assert p.m == 4
        assert not p.feasible  # k = n far exceeds the team bound
        assert p.details["max_team_size"] == 188105

    def test_tiny(self):
        assert pick_params_thm3(16).m == 2

    def test_precondition(self):
        with pytest.raises(InfeasibleParamsError):
            pick_params_thm3(2)


class TestThm4:
    def test_boundary_budget_point(self):
        p = pick_params_thm4(16384, 4, 3)
        assert (p.L, p.m) == (4, 3)
        # n equals L*16^m exactly, but the default linear team overshoots
        assert not p.feasible
        assert p.details["max_team_size"] == 541
        assert p.details["m_within_limit"]

    def test_boundary_point_with_bounded_team(self):
        p = pick_params_thm4(16384, 4, 3, k=541)
        assert p.feasible

    def test_budget_violation(self):
        p = pick_params_thm4(100, 10, 3)
        assert not p.feasible
        assert "16^" in p.violated or "16" in p.violated

    def test_m_growth_flagged(self):
        p = pick_params_thm4(16384, 1, 9, k=1)
        assert not p.details["m_within_limit"]
        assert not p.feasible


def test_dispatch():
    assert pick_params("thm2", eps=0.1).theorem == "thm2"
    assert pick_params("thm3", n=16).m == 2
    with pytest.raises(InfeasibleParamsError):
        pick_params("thm9", n=16)


@pytest.mark.parametrize(
    "n,k,c",
    [(10**6, 10**6, 1), (10**7, 10**5, 2), (4096, 541, 1), (65536, 65536, 3)],
)
def test_thm1_m_is_stable_at_256_bit_precision(n, k, c):
    mp.prec = 256
    hi = int(mp.ceil(mp.log(n) / ((8 + c) * mp.log(mp.log(n)))))
    assert pick_params_thm1(n, k, c).m == hi


@pytest.mark.parametrize("n", [16, 1024, 2**20, 10**6, 10**9])
def test_thm3_m_is_stable_at_256_bit_precision(n):
    mp.prec = 256
    hi = int(mp.ceil(mp.sqrt(mp.log(n))))
    assert pick_params_thm3(n).m == hi


@pytest.mark.parametrize("eps", [0.1, 0.05, 0.19, 1 / 30, 0.12])
def test_thm2_m_is_stable_at_256_bit_precision(eps):
    # same snap rule as the implementation: binary rounding of the input
    # may put 1/(2*eps) a hair off a true integer
    mp.prec = 256
    x = 1 / (2 * mpf(eps))
    hi = int(mp.nint(x)) if abs(x - mp.nint(x)) <= mpf("1e-9") * max(1, abs(x)) else int(mp.ceil(x))
    assert pick_params_thm2(eps).m == hi
