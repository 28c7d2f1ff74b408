import math

import pytest

from treepack import (FractionalEdgeVector, degree_constraints,
                      generate_instance, keep_probabilities, sparsify,
                      uniform_fractional_tree, verify_sparsified)
from treepack.sparsify import RATE_CONSTANT


class TestKeepProbabilities:
    def test_formula(self):
        x = FractionalEdgeVector({0: 1e-4, 1: 0.5})
        eps = 0.25
        alpha = keep_probabilities(x, k=3, m=10, eps=eps)
        rate = RATE_CONSTANT * math.log(13) / eps ** 2
        assert alpha[0] == pytest.approx(rate * 1e-4)
        assert alpha[1] == 1.0

    def test_zero_entries_excluded(self):
        alpha = keep_probabilities(FractionalEdgeVector({2: 0.3}), 1, 4, 0.5)
        assert set(alpha) == {2}

    def test_saturation_at_one(self):
        alpha = keep_probabilities(FractionalEdgeVector({0: 1.0}), 1, 4, 0.5)
        assert alpha[0] == 1.0


class TestSparsify:
    def instance(self):
        g, _ = generate_instance("random_gnm", {"n": 40, "m": 120}, seed=7)
        cs = degree_constraints(g, 6)
        return g, cs

    def test_eps_validation(self):
        g, cs = self.instance()
        with pytest.raises(ValueError):
            sparsify(g, uniform_fractional_tree(g), cs, 1.5)

    def test_deterministic_per_seed(self):
        g, cs = self.instance()
        x = uniform_fractional_tree(g)
        g1, r1 = sparsify(g, x, cs, 0.3, seed=11)
        g2, r2 = sparsify(g, x, cs, 0.3, seed=11)
        assert r1.kept == r2.kept
        assert [e.eid for e in g1.edges] == [e.eid for e in g2.edges]

    def test_large_values_always_kept(self):
        g, cs = self.instance()
        x = uniform_fractional_tree(g)
        _, report = sparsify(g, x, cs, 0.3, seed=0)
        forced = {eid for eid, a in report.alpha.items() if a >= 1.0}
        assert forced <= set(report.kept)

    def test_realized_size_near_expected(self):
        g, cs = self.instance()
        # scale the uniform point down so alpha stays fractional
        x = FractionalEdgeVector(
            {eid: v * 1e-3 for eid, v in uniform_fractional_tree(g).items()})
        sizes = []
        expected = None
        for s in range(30):
            _, report = sparsify(g, x, cs, 0.5, seed=s)
            sizes.append(report.realized_size)
            expected = report.expected_size
        mean = sum(sizes) / len(sizes)
        sigma = math.sqrt(expected)
        assert abs(mean - expected) <= 4 * sigma / math.sqrt(len(sizes)) + 1.0

    def test_report_json_shape(self):
        g, cs = self.instance()
        _, report = sparsify(g, uniform_fractional_tree(g), cs, 0.3, seed=2)
        d = report.to_json_dict()
        assert d["kept"] == sorted(d["kept"])
        assert d["realized_size"] == len(d["kept"])
        assert set(d) == {"kept", "alpha", "realized_size", "expected_size",
                          "eps", "k", "m", "seed"}


class TestVerifySparsified:
    def test_connected_feasible(self):
        g, _ = generate_instance("cycle", {"n": 6}, seed=0)
        cs = degree_constraints(g, 3)
        out = verify_sparsified(g, cs, 0.2, seed=1)
        assert out["feasible"]
        assert out["value"] >= 1 - 1.5 * 0.2

    def test_disconnected_reported(self):
        g, _ = generate_instance("cycle", {"n": 6}, seed=0)
        cs = degree_constraints(g, 3)
        g_sub = g.subgraph([0, 2, 4])
        out = verify_sparsified(g_sub, cs, 0.2)
        assert not out["feasible"]
        assert "disconnected" in out["reason"]
