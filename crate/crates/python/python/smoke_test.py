"""Smoke test for the gumbel_lpp extension module.

Build with `maturin develop --release` (or copy the compiled library to
gumbel_lpp.so on PYTHONPATH) and run `python python/smoke_test.py`.
"""

import json
import math

import gumbel_lpp as g


def main():
    c, sigma = g.corollary1_constants()
    assert round(c, 3) == 3.927 and round(sigma, 3) == 2.563
    assert abs(-2 * g.digamma(0.5) - c) < 1e-12
    assert abs(g.airy_ai(0.0) - 0.3550280539) < 1e-10
    assert abs(g.tracy_widom_gue_cdf(-2.0) - 0.41322414) < 1e-7

    # Hand-checkable polymer grid from a weight table.
    rows = g.grid("gumbel_lpp", 2, 2, seed=5)
    assert len(rows) == 2 and len(rows[0]) == 2
    assert rows[1][1] >= max(rows[0][1], rows[1][0])

    t = g.sample_statistic("gumbel_lpp", 4, 4, 20000, seed=1)
    z = g.sample_statistic("log_gamma", 4, 4, 20000, seed=1, gamma=1.0)
    ks = g.ks_two_sample(t, z)
    assert ks["p_value"] > 0.001, ks
    assert len(t) == 20000 and t.provenance()["model"] == "gumbel_lpp"

    lpp, poly = g.one_step_laws(0.3, 2.7, 20000, 3)
    recip = g.SampleSet([1.0 / v for v in lpp.values()])
    ks = g.ks_one_sample(recip, lambda x: 1.0 - math.exp(-3.0 * x))
    assert ks["p_value"] > 0.001, ks

    tau = g.first_passage_samples(3, 3, 5, 5000, seed=2)
    me = g.sample_statistic("multi_edge_lpp", 3, 3, 5000, seed=2, copies=5)
    assert g.ks_two_sample(tau, me)["p_value"] > 0.001

    config = """
[experiment]
name = "theorem1_match"
samples = 2000
master_seed = 9

[model]
m = [2, 3]
"""
    report = json.loads(g.run_experiment(config))
    assert [c["label"] for c in report["cases"]] == ["m2_n2", "m3_n3"]

    try:
        g.sample_statistic("gumbel_lpp", 0, 3, 10, seed=1)
    except ValueError:
        pass
    else:
        raise AssertionError("0x3 grid accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
