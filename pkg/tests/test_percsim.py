import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from critwindow.percsim import (
    MCEstimate,
    _profile_values,
    block_rng,
    estimate_chi_perc,
    perc_p,
    profile_fit,
    sample_cluster,
    sample_cluster_skip,
)


def test_trivial_edge_probabilities():
    rng = block_rng(0, 0)
    assert all(sample_cluster(50, 0.0, rng) == 1 for _ in range(20))
    assert all(sample_cluster(50, 1.0, rng) == 50 for _ in range(5))
    assert sample_cluster_skip(50, 0.0, rng) == (1, False)
    assert sample_cluster_skip(50, 1.0, rng) == (50, True)
    with pytest.raises(ValueError):
        sample_cluster(10, 1.5, rng)


def test_samplers_agree():
    a = estimate_chi_perc(10**4, 0.0, 10**4, seed=1)
    b = estimate_chi_perc(10**4, 0.0, 10**4, seed=2, sampler="skip")
    assert abs(a.mean - b.mean) < 3 * math.hypot(a.std_error, b.std_error)
    assert abs(a.tau_mean - b.tau_mean) < 3 * math.hypot(a.tau_se, b.tau_se)


def test_small_graph_exact_mean():
    # V = 3: |C(0)| = 1 + #{x in {1, 2} joined to 0}, tau = q + (1 - q) q^2 ... by enumeration
    q = 0.4
    import itertools
    exact = 0.0
    for e01, e02, e12 in itertools.product((0, 1), repeat=3):
        w = (q if e01 else 1 - q) * (q if e02 else 1 - q) * (q if e12 else 1 - q)
        reach1 = e01 or (e02 and e12)
        reach2 = e02 or (e01 and e12)
        exact += w * (1 + reach1 + reach2)
    est = estimate_chi_perc(3, (q * 3 - 1) * 3 ** (1 / 3), 40_000, seed=4)
    assert est.mean == pytest.approx(exact, abs=4 * est.std_error)


def test_tau_consistency():
    est = estimate_chi_perc(4096, 0.5, 20_000, seed=8)
    predicted = (est.mean - 1) / (est.V - 1)
    assert abs(est.tau_mean - predicted) < 3 * est.tau_se


def test_monotone_in_s_with_shared_streams():
    vals = [estimate_chi_perc(2**16, s, 10**4, seed=3).mean for s in (-3.0, 0.0, 3.0)]
    assert vals[0] < vals[1] < vals[2]


@settings(max_examples=10)
@given(seed=st.integers(0, 2**63 - 1), replicas=st.integers(1, 3000), s=st.floats(-2, 2))
def test_property_deterministic(seed, replicas, s):
    a = estimate_chi_perc(1024, s, replicas, seed)
    b = estimate_chi_perc(1024, s, replicas, seed, threads=3)
    assert a == b
    assert a.mean >= 1
    if replicas > 1:
        assert a.std_error >= 0


def test_std_error_definition():
    est = estimate_chi_perc(512, 0.0, 5000, seed=12)
    assert isinstance(est, MCEstimate)
    assert est.replicas == 5000 and est.seed == 12
    with pytest.raises(ValueError):
        estimate_chi_perc(512, 0.0, 0, seed=1)
    with pytest.raises(ValueError):
        perc_p(1000, -20)


def _synthetic(a, b, noise, seed):
    rng = np.random.default_rng(seed)
    out = []
    for V in (2**14, 2**18):
        for s in (-2.0, -1.0, 0.0, 1.0, 2.0):
            mean = b * _profile_values(np.array([a * s]))[0] * V ** (1 / 3)
            se = noise * mean
            out.append(MCEstimate(mean * (1 + noise * rng.standard_normal()), se, 1000, seed, V, s))
    return out


def test_profile_fit_recovers_synthetic_parameters():
    fit = profile_fit(_synthetic(0.8, 1.3, 0.01, 5))
    assert fit.a == pytest.approx(0.8, rel=0.05)
    assert fit.b == pytest.approx(1.3, rel=0.05)
    assert fit.residual <= fit.constant_residual


def test_profile_fit_rejects_degenerate_designs():
    data = _synthetic(1.0, 1.0, 0.01, 1)
    with pytest.raises(ValueError):
        profile_fit([e for e in data if e.s in (0.0, 1.0)])
    with pytest.raises(ValueError):
        profile_fit([e for e in data if e.V == 2**14])
