import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import locally_rotated, random_physical_sf, random_sts_sf
from ggdiscord.errors import DomainError, UnphysicalStateError
from ggdiscord.families import make_extot, make_pure_tmss, sts_c_max
from ggdiscord.gaussian_core import SeedParams, StandardForm, purity, symplectic_invariants
from ggdiscord.measures import (
    ggd,
    ggd_alternative,
    ggd_numeric,
    ggd_sts_closed,
    ggd_sts_closed_array,
    gqc_invariant,
    gqc_numeric,
    gqc_objective,
    gqc_standard_form,
    hs_residual,
    hs_residual_product,
    hs_residual_theta0,
)
from ggdiscord.measures import _distance_sq, _seed_entries


def grid_minimum(sf, m_hi=20.0):
    """Brute-force minimum of the theta = 0 residual over (m, lambda).

    Vectorised grid followed by two zoomed regrids around the best cell.
    """
    a, b, c, d = sf.as_tuple()

    def residual(m, lam):
        x = (a * (b + lam * m) - c * c) * (a * (b * lam + m) - d * d * lam)
        return (1.0 / np.sqrt(m * m * x / ((b * lam + m) * (b + lam * m)))
                - 4.0 / np.sqrt(x / lam) + 1.0 / math.sqrt((a * b - c * c) * (a * b - d * d)))

    m_lo, m_top, l_lo, l_hi = 1.0, m_hi, 0.05, 20.0
    for _ in range(4):
        m = np.linspace(m_lo, m_top, 400)
        lam = np.geomspace(l_lo, l_hi, 400)
        mm, ll = np.meshgrid(m, lam, indexing="ij")
        vals = residual(mm, ll)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        dm, fl = (m_top - m_lo) / 20.0, (l_hi / l_lo) ** (1 / 40.0)
        best = (vals[i, j], m[i], lam[j])
        m_lo, m_top = max(1.0, m[i] - dm), m[i] + dm
        l_lo, l_hi = lam[j] / fl, lam[j] * fl
    return best


# -- residual -------------------------------------------------------------------


def test_residual_of_product_state_with_marginal_seed_is_zero():
    sf = StandardForm(3.0, 2.0, 0.0, 0.0)
    assert hs_residual(sf, SeedParams(2.0, 1.0)) == pytest.approx(0.0, abs=1e-14)


def test_residual_tmss_heterodyne_example():
    # TMSS a = 2 with the vacuum seed: posterior is the vacuum, product is pure
    sf = make_pure_tmss(2.0).standard_form()
    value = hs_residual(sf, SeedParams(1.0, 1.0))
    # 1 + 1 - 2 * 4 / sqrt(det(sigma + 1)) with det(sigma + 1) = 36
    assert value == pytest.approx(2.0 - 8.0 / 6.0, rel=1e-12)


def test_residual_theta0_matches_matrix_route(rng):
    for _ in range(10_000):
        sf = random_physical_sf(rng)
        m, lam = 1.0 + rng.exponential(3.0), math.exp(rng.normal(0, 1))
        assert hs_residual_theta0(sf, m, lam) == pytest.approx(
            hs_residual(sf, SeedParams(m, lam, 0.0)), rel=1e-9, abs=1e-12)


def test_residual_theta0_domain():
    sf = StandardForm(2.0, 2.0, 1.0, -1.0)
    with pytest.raises(DomainError):
        hs_residual_theta0(sf, 0.5, 1.0)
    with pytest.raises(DomainError):
        hs_residual_theta0(sf, 2.0, 0.0)


def test_residual_heterodyne_rotation_invariant(rng):
    for _ in range(50):
        sf = random_physical_sf(rng)
        m = 1.0 + rng.exponential(2.0)
        base = hs_residual(sf, SeedParams(m, 1.0, 0.0))
        for theta in rng.uniform(0, math.pi, 5):
            assert hs_residual(sf, SeedParams(m, 1.0, theta)) == pytest.approx(base, rel=1e-10, abs=1e-14)


def test_residual_local_invariance(rng):
    # distance to the optimal product is a property of the state, not its frame
    for _ in range(20):
        sf = random_sts_sf(rng, hi=10.0)
        rotated = locally_rotated(sf, rng)
        assert ggd_numeric(rotated).value == pytest.approx(ggd_sts_closed(sf)[0], abs=1e-6)


def test_fast_objective_matches_matrix_route(rng):
    for _ in range(500):
        sf = random_physical_sf(rng)
        p1 = SeedParams(1 + rng.exponential(2), math.exp(rng.normal()), rng.uniform(0, 3))
        p2 = SeedParams(1 + rng.exponential(2), math.exp(rng.normal()), rng.uniform(0, 3))
        fast = _distance_sq(*sf.as_tuple(), _seed_entries(p1.m, p1.lam, p1.theta),
                            _seed_entries(p2.m, p2.lam, p2.theta), purity(sf))
        assert fast == pytest.approx(hs_residual_product(sf, p1, p2), rel=1e-9, abs=1e-12)


# -- GGD ------------------------------------------------------------------------


def test_ggd_closed_examples():
    # product states carry no correlations
    assert ggd_sts_closed(StandardForm(3.0, 5.0, 0.0, 0.0))[0] == pytest.approx(0.0, abs=1e-15)
    # pure TMSS a = 2: 1/1 - 9 / (sqrt(16 - 9) + 2)^2
    expected = 1.0 - 9.0 / (math.sqrt(7.0) + 2.0) ** 2
    assert ggd_sts_closed(make_pure_tmss(2.0).standard_form())[0] == pytest.approx(expected, rel=1e-14)


def test_ggd_closed_rejects_non_sts():
    with pytest.raises(DomainError):
        ggd_sts_closed(StandardForm(3.0, 3.0, 1.0, 0.5))


def test_ggd_closed_tmss_against_grid_oracle():
    sf = make_pure_tmss(2.0).standard_form()
    oracle, m_best, lam_best = grid_minimum(sf)
    value, seed = ggd_sts_closed(sf)
    assert value == pytest.approx(oracle, abs=1e-8)
    assert seed.m == pytest.approx(m_best, rel=1e-3)
    assert lam_best == pytest.approx(1.0, abs=1e-3)


def test_ggd_closed_general_sts_against_grid_oracle(rng):
    for _ in range(5):
        sf = random_sts_sf(rng, hi=6.0)
        assert ggd_sts_closed(sf)[0] == pytest.approx(grid_minimum(sf, 30.0)[0], abs=1e-8)


def test_ggd_numeric_matches_closed_form(rng):
    for _ in range(30):
        sf = random_sts_sf(rng)
        closed, seed = ggd_sts_closed(sf)
        res = ggd_numeric(sf)
        assert res.converged
        assert res.value == pytest.approx(closed, abs=1e-6)
        assert res.argmin.lam == pytest.approx(1.0, abs=1e-4)
        assert res.argmin.m == pytest.approx(seed.m, rel=1e-4)


@given(st.floats(1, 1e3), st.floats(1, 1e3), st.floats(0, 1))
def test_ggd_closed_swap_symmetric(a, b, frac):
    c = frac * sts_c_max(a, b)
    x = ggd_sts_closed(StandardForm(a, b, c, -c))[0]
    y = ggd_sts_closed(StandardForm(b, a, c, -c))[0]
    assert abs(x - y) <= 1e-12


def test_ggd_closed_array_matches_scalar(rng):
    a, b = rng.uniform(1, 30, (2, 100))
    c = rng.uniform(0, 1, 100) * np.sqrt((np.minimum(a, b) - 1) * (np.maximum(a, b) + 1))
    vec = ggd_sts_closed_array(a, b, c)
    for i in range(100):
        assert vec[i] == ggd_sts_closed(StandardForm(a[i], b[i], c[i], -c[i]))[0]


def test_ggd_bounded_by_purity(rng):
    for _ in range(200):
        sf = random_sts_sf(rng)
        value = ggd_sts_closed(sf)[0]
        assert 0.0 <= value <= purity(sf) + 1e-8 <= 1.0 + 1e-8


def test_ggd_dispatch(rng):
    sts = random_sts_sf(rng)
    assert ggd(sts) == ggd_sts_closed(sts)[0]
    general = StandardForm(3.0, 4.0, 2.0, 0.5)
    assert ggd(general) == ggd_numeric(general).value
    with pytest.raises(UnphysicalStateError):
        ggd(StandardForm(1.0, 5.0, 1.0, 1.0))


def test_ggd_vanishes_for_asymptotic_family():
    values = [ggd_sts_closed(StandardForm(a, 0.5 * (a - 1) + 1, math.sqrt((a + 1) * 0.5 * (a - 1)),
                                          -math.sqrt((a + 1) * 0.5 * (a - 1))))[0]
              for a in 2.0 ** np.arange(2, 21)]
    assert np.all(np.diff(values) < 0)
    assert values[-1] <= 1e-3


def test_theta_flat_for_sts(rng):
    for _ in range(10):
        sf = random_sts_sf(rng, hi=10.0)
        value = ggd_sts_closed(sf)[0]
        m = ggd_sts_closed(sf)[1].m
        for theta in np.linspace(0, math.pi, 7):
            assert hs_residual(sf, SeedParams(m, 1.0, theta)) == pytest.approx(value, abs=1e-10)


def test_general_state_minimum_at_axis_angles(rng):
    # theta = pi/2 is theta = 0 with lambda -> 1/lambda, so the grid covers both axes
    for _ in range(5):
        sf = random_physical_sf(rng, hi=8.0)
        res = ggd_numeric(sf)
        assert res.value == pytest.approx(grid_minimum(sf, 40.0)[0], abs=1e-6)
        assert min(res.argmin.theta, math.pi - res.argmin.theta, abs(res.argmin.theta - math.pi / 2)) < 1e-3 \
            or abs(res.argmin.lam - 1.0) < 1e-3


def test_ggd_numeric_deterministic():
    sf = StandardForm(4.0, 3.0, 2.0, 1.0)
    assert ggd_numeric(sf) == ggd_numeric(sf)


# -- product-state variant ---------------------------------------------------------


def test_alternative_never_exceeds_ggd(rng):
    for _ in range(5):
        sf = random_physical_sf(rng, hi=10.0)
        g = ggd_numeric(sf)
        alt = ggd_alternative(sf, warm_start=g)
        assert -1e-12 <= alt.value <= g.value
        p1, p2 = alt.argmin
        assert hs_residual_product(sf, p1, p2) == pytest.approx(alt.value, abs=1e-10)


def test_alternative_zero_on_product_state():
    assert ggd_alternative(StandardForm(3.0, 2.0, 0.0, 0.0)).value <= 1e-10


# -- GQC --------------------------------------------------------------------------


def test_gqc_triple_agreement(rng):
    for _ in range(20):
        sf = random_physical_sf(rng)
        closed = gqc_standard_form(sf)
        assert gqc_invariant(symplectic_invariants(sf)) == pytest.approx(closed, rel=1e-10, abs=1e-10)
        assert gqc_numeric(sf).value == pytest.approx(closed, rel=1e-8, abs=1e-8)


def test_gqc_invariant_frame_independent(rng):
    for _ in range(50):
        sf = random_physical_sf(rng)
        rotated = locally_rotated(sf, rng)
        assert gqc_invariant(symplectic_invariants(rotated)) == pytest.approx(
            gqc_standard_form(sf), rel=1e-8, abs=1e-8)


def test_gqc_objective_at_marginals_is_offdiagonal_weight():
    sf = StandardForm(3.0, 2.0, 1.5, -0.5)
    assert gqc_objective(sf, SeedParams(3.0, 1.0), SeedParams(2.0, 1.0)) == pytest.approx(2 * (1.5 ** 2 + 0.25))


@pytest.mark.parametrize("a", [1.0, 1.5, 2.0, 4.0, 8.0, 16.0])
def test_extot_family(a):
    sf = make_extot(a)
    assert gqc_standard_form(sf) == 2.0 * (a - 1.0) ** 2
    assert ggd_numeric(sf).value <= 1.0 / 40.0 + 1e-3


@settings(max_examples=50)
@given(st.floats(1, 50), st.floats(1, 50), st.floats(0, 1), st.floats(-1, 1))
def test_gqc_nonnegative_and_zero_only_without_correlations(a, b, fc, fd):
    c = fc * math.sqrt(a * b - 1) if a * b > 1 else 0.0
    sf = StandardForm(a, b, c, fd * c)
    assert gqc_standard_form(sf) >= 0.0
    if c == 0.0:
        assert gqc_standard_form(sf) == 0.0
    elif c > 1e-150:
        assert gqc_standard_form(sf) > 0.0
