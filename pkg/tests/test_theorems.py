"""Inequality-chain checking: chains, corollaries, degenerate and vacuous paths."""

import math

import pytest

from rittgrowth.errors import SpecFormatError
from rittgrowth.growth import GridSpec
from rittgrowth.theorems import (IndicatorWorkspace, TheoremInstance, check_instance,
                                 load_batch, run_batch)

OSC_GRID = GridSpec(3.0, 3.0 * math.exp(6 * math.pi), 480, "log")


@pytest.fixture(scope="module")
def ws():
    # shared workspace: estimates are deterministic, caching only saves time
    return IndicatorWorkspace()


class TestOrderChain:
    def test_regular_triple_all_two(self, ws):
        # rates 2, 1, 3: every chain entry is (2/3)/(1/3) = 2
        inst = TheoremInstance("T1", "expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert len(r.chain) == 6
        for _, value in r.chain:
            assert value == pytest.approx(2.0, abs=2e-2)

    def test_irregular_f_has_strict_middle(self, ws):
        inst = TheoremInstance("T1", "osc:rho=2,lam=1,p=2,q=0", "tower:k=2,rho=2,q=0",
                               "tower:k=2,rho=1,q=0", grid=OSC_GRID)
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        values = [v for _, v in r.chain]
        assert values[0] == pytest.approx(0.5, abs=1e-2)
        assert values[1] == pytest.approx(0.5, abs=1e-2)
        assert values[3] == pytest.approx(1.0, abs=1e-2)
        assert values[5] == pytest.approx(1.0, abs=1e-2)

    def test_degenerate_orders_make_it_vacuous(self, ws):
        # g one tower level deeper than h: its relative order diverges
        inst = TheoremInstance("T1", "tower:k=2,rho=1,q=0", "tower:k=3,rho=1,q=0",
                               "tower:k=2,rho=2,q=0")
        r = check_instance(inst, ws)
        assert r.verdict == "vacuous"


class TestTypeChains:
    def test_type_chain_entries(self, ws):
        # types through h are c-ratios: Delta_h(f) = 2, tau_h(g) = 2/3,
        # so every entry of the bound chain is 3 = c_f/c_g
        inst = TheoremInstance("Tt1", "expexp:a=1,c=6", "expexp:a=1,c=2", "expexp:a=1,c=3")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        for _, value in r.chain:
            assert value == pytest.approx(3.0, abs=2e-2)

    def test_regular_case_chains(self, ws):
        for tid in ("Tt2", "Tt3", "Tt4", "Ct1", "Ct2", "Ct3", "Ct4", "T41", "T42"):
            inst = TheoremInstance(tid, "expexp:a=1,c=6", "expexp:a=1,c=2", "expexp:a=1,c=3")
            r = check_instance(inst, ws)
            assert r.verdict == "pass", (tid, r.hypothesis_status, r.links)

    def test_vacuous_when_types_degenerate(self, ws):
        inst = TheoremInstance("Tt1", "osc:rho=2,lam=1,p=2,q=0", "tower:k=2,rho=2,q=0",
                               "tower:k=2,rho=1,q=0", grid=OSC_GRID)
        r = check_instance(inst, ws)
        assert r.verdict == "vacuous"
        assert not r.hypothesis_status["Delta_bar_h(f) finite nonzero"]


class TestCorollaries:
    def test_c1_equalities_and_unit_clause(self, ws):
        inst = TheoremInstance("C1", "expexp:a=1,c=3", "expexp:a=1,c=5", "expexp:a=1,c=2")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert len(r.links) == 4  # two ratio equalities plus the two unit claims
        assert any("both orientations" in n for n in r.notes)

    def test_c3_collapse(self, ws):
        inst = TheoremInstance("C3", "expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        for link in r.links:
            assert link.right.value == pytest.approx(2.0, abs=2e-2)

    def test_c5_reciprocal_product(self, ws):
        inst = TheoremInstance("C5", "expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert r.chain[0][1] == pytest.approx(1.0, abs=2e-2)
        assert r.links[0].relation == "eq"

    def test_c5_irregular_inequality(self, ws):
        inst = TheoremInstance("C5", "osc:rho=2,lam=1,p=2,q=0", "tower:k=2,rho=2,q=0",
                               "tower:k=2,rho=1,q=0", grid=OSC_GRID)
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert r.links[0].relation == "ge"
        assert r.chain[0][1] == pytest.approx(2.0, abs=2e-2)

    def test_c6_irregular_inequality(self, ws):
        inst = TheoremInstance("C6", "osc:rho=2,lam=1,p=2,q=0", "tower:k=2,rho=2,q=0",
                               "tower:k=2,rho=1,q=0", grid=OSC_GRID)
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert r.chain[0][1] == pytest.approx(0.5, abs=2e-2)


class TestDegenerate:
    def test_c8_fires_and_passes(self, ws):
        inst = TheoremInstance("C8", "tower:k=3,rho=2,q=0", "tower:k=2,rho=1,q=0",
                               "tower:k=2,rho=2,q=0")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert len(r.links) >= 1

    def test_no_trigger_is_vacuous(self, ws):
        inst = TheoremInstance("C7", "expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1")
        r = check_instance(inst, ws)
        assert r.verdict == "vacuous"
        assert any("no degenerate hypothesis" in n for n in r.notes)

    def test_short_grid_misses_slow_zero(self, ws):
        # the trigger (rho_h(g) huge) fires immediately, but the conclusion
        # lambda_g(f) -> 0 decays like log(sigma)/sigma and has not crossed
        # the zero threshold by sigma = 30: an honest finite-grid failure
        inst = TheoremInstance("C7", "tower:k=2,rho=2,q=0", "tower:k=3,rho=1,q=0",
                               "tower:k=2,rho=1,q=0")
        r = check_instance(inst, ws)
        assert r.verdict == "fail"

    def test_long_grid_resolves_it(self, ws):
        inst = TheoremInstance("C7", "tower:k=2,rho=2,q=1", "tower:k=1,rho=1,q=0",
                               "tower:k=2,rho=1,q=0", m=0, p=0, q=1,
                               grid=GridSpec(5.0, 3e4, 200, "log"))
        r = check_instance(inst, ws)
        assert r.verdict == "pass"


class TestRemark:
    def test_both_branches_on_regular_triple(self, ws):
        inst = TheoremInstance("R1", "expexp:a=2,c=1", "expexp:a=1,c=1", "expexp:a=3,c=1")
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert len(r.links) == 4

    def test_g_regular_branch_only(self, ws):
        inst = TheoremInstance("R1", "osc:rho=2,lam=1,p=2,q=0", "tower:k=2,rho=2,q=0",
                               "tower:k=2,rho=1,q=0", grid=OSC_GRID)
        r = check_instance(inst, ws)
        assert r.verdict == "pass"
        assert r.notes == ["branch: g regular wrt h"]

    def test_neither_regular_is_vacuous(self, ws):
        inst = TheoremInstance("R1", "osc:rho=2,lam=1,p=2,q=0", "osc:rho=3,lam=2,p=2,q=0",
                               "tower:k=2,rho=1,q=0", grid=OSC_GRID)
        r = check_instance(inst, ws)
        assert r.verdict == "vacuous"


class TestBatch:
    def test_load_rejects_unknown_fields(self):
        with pytest.raises(SpecFormatError):
            load_batch({"instances": [{"theorem": "T1", "f": "x", "g": "y", "h": "z",
                                       "bogus": 1}]})

    def test_load_rejects_missing_instances(self):
        with pytest.raises(SpecFormatError):
            load_batch({})

    def test_unknown_theorem_id(self, ws):
        with pytest.raises(SpecFormatError):
            check_instance(TheoremInstance("T99", "expexp:a=1,c=1", "expexp:a=1,c=1",
                                           "expexp:a=1,c=1"), ws)

    def test_small_batch_runs(self):
        doc = {"instances": [
            {"theorem": "C5", "f": "tower:k=2,rho=2,q=0", "g": "tower:k=2,rho=1,q=0",
             "h": "tower:k=2,rho=1.5,q=0", "m": 0, "p": 0, "q": 0},
        ]}
        reports = run_batch(load_batch(doc))
        assert reports[0].verdict == "pass"
        payload = reports[0].to_json()
        assert payload["theorem"] == "C5"
        assert payload["verdict"] == "pass"
