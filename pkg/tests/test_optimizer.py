import json
from fractions import Fraction

import pytest

from boldplay.analysis import classify, region_grid
from boldplay.core import Params, Stakes, average_play, bold_play, tail_enum
from boldplay.errors import RegimeError, SizeCapError
from boldplay.optimizer import (
    SearchReport,
    conjecture_scan,
    csoka_check,
    optimize_exhaustive,
    optimize_local,
)

F = Fraction


def P(p, t):
    return Params(F(p), F(t))


class TestExhaustive:
    def test_half(self):
        r = optimize_exhaustive(P("1/2", "1/2"), 5)
        assert r.best.value == F(3, 4)
        assert Stakes.of("1/2", "1/2") in r.all_maximizers
        assert r.best.kind == "bold" and r.best.k == 2

    def test_two_thirds(self):
        r = optimize_exhaustive(P("2/3", "2/3"), 4)
        assert r.best.value == F(20, 27) > bold_play(P("2/3", "2/3")).value == F(2, 3)
        assert r.all_maximizers == (Stakes.average(3),)

    def test_single_bet(self):
        r = optimize_exhaustive(P("1/3", "3/5"), 4)
        assert r.best.value == F(1, 3)
        assert r.all_maximizers[0] == Stakes.of(1)

    def test_every_maximizer_reproduces_value(self):
        for params in (P("1/2", "1/2"), P("1/4", "2/5"), P("7/10", "4/5")):
            r = optimize_exhaustive(params, 4)
            for s in r.all_maximizers:
                assert tail_enum(s, params).value == r.best.value

    def test_representative_order(self):
        r = optimize_exhaustive(P("1/2", "1/2"), 5)
        ns = [s.n for s in r.all_maximizers]
        assert ns == sorted(ns)

    def test_caps(self):
        with pytest.raises(SizeCapError):
            optimize_exhaustive(P("1/2", "1/2"), 6)
        with pytest.raises(SizeCapError):
            optimize_exhaustive(P("1/2", "1/2"), 0)

    def test_regime(self):
        with pytest.raises(RegimeError):
            optimize_exhaustive(P("3/5", "1/2"), 3)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_beats_every_average(self, n):
        for g in region_grid(8):
            if g.p > g.t or g.t == 0:
                continue
            params = Params(g.p, g.t)
            top = optimize_exhaustive(params, n).best.value
            assert top >= bold_play(params).value or bold_play(params).k > n
            assert all(top >= average_play(k, params).value for k in range(1, n + 1))

    def test_bold_regions_attain_bold_value(self):
        for g in region_grid(10):
            if g.verdict.status != "bold_optimal":
                continue
            params = Params(g.p, g.t)
            bold = bold_play(params)
            if bold.k > 4:
                continue
            assert optimize_exhaustive(params, 4).best.value == bold.value, (g.p, g.t)

    @pytest.mark.parametrize("p, t", [("11/20", "3/5"), ("3/5", "2/3"), ("7/12", "5/8"), ("3/5", "3/5")])
    def test_majority_region_at_five(self, p, t):
        params = P(p, t)
        verdict = classify(params)
        assert verdict.justification == "majority-family" and verdict.witness.k <= 5
        r = optimize_exhaustive(params, 5)
        assert r.best.value > bold_play(params).value
        assert Stakes.average(verdict.witness.k) in r.all_maximizers

    def test_majority_region_wide_witness(self):
        # the (2k+1)-average does not fit in 5 bets, bold play still loses
        params = P("11/20", "11/20")
        assert optimize_exhaustive(params, 5).best.value > F(11, 20)

    def test_json(self):
        r = optimize_exhaustive(P("2/3", "2/3"), 3)
        data = json.loads(json.dumps(r.to_json()))
        assert data["best"]["value"] == "20/27"
        assert data["all_maximizers"] == [["1/3", "1/3", "1/3"]]
        assert data["scope"] == "restricted to <= 3 stakes"
        assert data["method"] == "exhaustive_families"

    def test_method_validation(self):
        r = optimize_exhaustive(P("1/2", "1/2"), 2)
        with pytest.raises(ValueError):
            SearchReport(r.params, r.best, r.all_maximizers, "guess", 2)


class TestLocal:
    def test_majority_point(self):
        r = optimize_local(P("11/20", "3/5"), 7, denominator_cap=60)
        assert r.best.value >= average_play(5, P("11/20", "3/5")).value

    @pytest.mark.parametrize("p", ["1/5", "1/3", "1/2"])
    def test_cannot_beat_single_bet(self, p):
        for n in (2, 4, 6):
            assert optimize_local(P(p, "7/10"), n, restarts=3).best.value == F(p)

    def test_uniform_start(self):
        r = optimize_local(P("2/3", "2/3"), 3, restarts=0)
        assert r.best.value == F(20, 27)

    @pytest.mark.parametrize("p, t", [("1/2", "1/2"), ("1/4", "2/5"), ("3/5", "2/3"), ("1/10", "1/4")])
    def test_never_above_exhaustive(self, p, t):
        params = P(p, t)
        for n in (2, 3, 4):
            assert optimize_local(params, n, restarts=4, seed=7).best.value <= optimize_exhaustive(params, n).best.value

    def test_deterministic(self):
        a = optimize_local(P("3/10", "9/20"), 5, restarts=5, seed=42)
        b = optimize_local(P("3/10", "9/20"), 5, restarts=5, seed=42)
        assert a == b
        assert a.to_json() == b.to_json()

    def test_entries_on_grid(self):
        r = optimize_local(P("1/4", "2/5"), 4, denominator_cap=12, restarts=2)
        for s in r.all_maximizers:
            assert all((c * 12).denominator == 1 for c in s.coefficients)
        assert r.method == "local_search"

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            optimize_local(P("1/2", "1/2"), 0)


class TestConjecture:
    def test_two_thirds(self):
        v = csoka_check(P("2/3", "2/3"), 4)
        assert v.confirmed and v.optimal_k == 3 and not v.is_bold

    def test_third_threshold(self):
        v = csoka_check(P("1/6", "1/3"), 5)
        assert v.confirmed and v.optimal_k == 3 and v.is_bold
        assert v.max_value == F(91, 216)

    def test_high_threshold(self):
        v = csoka_check(P("1/5", "9/10"), 4)
        assert v.confirmed and v.optimal_k == 1 and v.is_bold and v.max_value == F(1, 5)

    def test_json(self):
        data = csoka_check(P("2/3", "2/3"), 3).to_json()
        assert data["confirmed"] and data["optimal_k"] == 3 and data["counterexample"] is None
        assert data["scope"] == "restricted to <= 3 stakes"

    def test_scan(self):
        pts = [P(F(i, 5), F(j, 5)) for i in range(1, 6) for j in range(i, 6)]
        out = conjecture_scan(pts, 3)
        assert out["points"] == len(pts) == out["confirmed"]
        assert out["counterexamples"] == []
        assert {(e["p"], e["t"]) for e in out["optimal_k"]} == {(str(p.p), str(p.t)) for p in pts}
