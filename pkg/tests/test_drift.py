import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import cayley_sphere_sizes, mc_delta, random_k, random_lorentz
from propact.drift import (
    GeneratorSet,
    GramCheckError,
    WordCeilingError,
    block_embed,
    boost,
    c_car_estimate,
    cartan_mu,
    check_lorentz,
    conjugated_rho,
    convex_cocompact_drift,
    delta_constant,
    distance_to_subspace,
    drift_statistics,
    embedded_rho,
    enumerate_words,
    fit_envelope,
    intersection_basis,
    line_distance,
    parse_slope,
    ping_pong_generators,
    right_angled_polygon_generators,
    rotation,
    sample_words,
    trivial_rho,
)

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def hexagon():
    return right_angled_polygon_generators(3)


# --- Cartan projection -----------------------------------------------------


def test_mu_identity_and_boost():
    assert cartan_mu(np.eye(3)) == 0.0
    assert cartan_mu(boost(1.0)) == pytest.approx(1.0, abs=1e-9)
    assert cartan_mu(boost(2.5, n=4, axis=2)) == pytest.approx(2.5, abs=1e-9)
    assert cartan_mu(rotation(0.7)) == pytest.approx(0.0, abs=1e-12)


def test_mu_gram_failure():
    with pytest.raises(GramCheckError):
        cartan_mu(np.diag([2.0, 1.0, 1.0]))
    with pytest.raises(GramCheckError):
        check_lorentz(np.ones((2, 3)))


@settings(max_examples=100)
@given(seeds, st.integers(2, 4))
def test_mu_inverse_symmetry(seed, n):
    g = random_lorentz(np.random.default_rng(seed), n)
    assert cartan_mu(np.linalg.inv(g)) == pytest.approx(cartan_mu(g), abs=1e-9)


@settings(max_examples=100)
@given(seeds, st.integers(2, 4))
def test_mu_subadditive(seed, n):
    rng = np.random.default_rng(seed)
    g, h = random_lorentz(rng, n), random_lorentz(rng, n)
    assert cartan_mu(g @ h) <= cartan_mu(g) + cartan_mu(h) + 1e-7


@settings(max_examples=100)
@given(seeds, st.integers(2, 4))
def test_mu_bi_k_invariant(seed, n):
    rng = np.random.default_rng(seed)
    g = random_lorentz(rng, n)
    assert cartan_mu(random_k(rng, n) @ g @ random_k(rng, n)) == pytest.approx(cartan_mu(g), abs=1e-9)


# --- polygon groups and embeddings -----------------------------------------


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_polygon_invariants(k):
    g = right_angled_polygon_generators(k)
    R, eye = g.matrices, np.eye(3)
    assert len(g) == 2 * k
    for i in range(2 * k):
        assert np.max(np.abs(R[i] @ R[i] - eye)) < 1e-9
        p = R[i] @ R[(i + 1) % (2 * k)]
        assert np.max(np.abs(p @ p - eye)) < 1e-9
    assert cartan_mu(R[0] @ R[k]) > 0


def test_polygon_rejects_small_k():
    with pytest.raises(ValueError):
        right_angled_polygon_generators(2)


def test_hexagon_mirror_angles(hexagon):
    # non-adjacent non-opposite sides are ultraparallel too (no other relations)
    R = hexagon.matrices
    assert cartan_mu(R[0] @ R[2]) > 0.1


def test_block_embed():
    assert np.array_equal(block_embed(np.eye(3), 3), np.eye(4))
    assert cartan_mu(block_embed(boost(0.8), 3)) == pytest.approx(0.8, abs=1e-12)
    with pytest.raises(ValueError):
        block_embed(np.eye(4), 2)


@settings(max_examples=50)
@given(seeds, st.integers(3, 5))
def test_block_embed_random(seed, N):
    g = random_lorentz(np.random.default_rng(seed), 2)
    e = block_embed(g, N)
    check_lorentz(e)
    assert cartan_mu(e) == pytest.approx(cartan_mu(g), abs=1e-9)


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet(np.array([boost(1.0), boost(-1.0)]), (0, 0))
    with pytest.raises(ValueError):
        GeneratorSet(np.array([boost(1.0), boost(-0.5)]), (1, 0))
    with pytest.raises(GramCheckError):
        GeneratorSet(np.array([np.diag([2.0, 1, 1])]), (0,))


def test_commuting_closed_under_inverse():
    g = GeneratorSet(np.array([boost(1.0), boost(-1.0), boost(2.0), boost(-2.0)]), (1, 0, 3, 2), commuting={(0, 2)})
    assert {(1, 3), (3, 1), (0, 3), (1, 2)} <= g.commuting


# --- words ----------------------------------------------------------------


def test_words_length_one(hexagon):
    words = [w for w, _ in enumerate_words(hexagon, 1)]
    assert words == [(i,) for i in range(6)]


def test_free_group_word_count():
    words = list(enumerate_words(ping_pong_generators(), 2))
    assert len(words) == 4 + 12
    assert () not in [w for w, _ in words]
    for ell in range(1, 6):
        n = sum(1 for w, _ in enumerate_words(ping_pong_generators(), ell) if len(w) == ell)
        assert n == 4 * 3 ** (ell - 1)


def test_hexagon_sphere_sizes(hexagon):
    counts = np.bincount([len(w) for w, _ in enumerate_words(hexagon, 6)])[1:]
    assert list(counts) == cayley_sphere_sizes(hexagon.matrices, 6)
    assert list(counts[:4]) == [6, 24, 90, 336]


def test_hexagon_words_are_distinct_elements(hexagon):
    keys = {tuple(np.round(g, 6).ravel()) for _, g in enumerate_words(hexagon, 5)}
    assert len(keys) == sum(1 for _ in enumerate_words(hexagon, 5))


def test_word_products_match_evaluate(hexagon):
    for w, g in enumerate_words(hexagon, 3):
        assert np.allclose(g, hexagon.evaluate(w))


def test_word_ceiling(hexagon):
    with pytest.raises(WordCeilingError):
        next(enumerate_words(hexagon, 15))
    with pytest.raises(WordCeilingError):
        sample_words(hexagon, [hexagon], 15)
    assert next(enumerate_words(hexagon, 15, allow_long=True))[0] == (0,)


def test_sampling_exhaustive_small(hexagon):
    ws = sample_words(hexagon, [hexagon], 4)
    assert ws.exhaustive
    assert sorted(ws.words) == sorted(w for w, _ in enumerate_words(hexagon, 4))


def test_sampling_seeded(hexagon):
    a = sample_words(hexagon, [hexagon], 8, per_length=200, seed=3)
    b = sample_words(hexagon, [hexagon], 8, per_length=200, seed=3)
    assert not a.exhaustive
    assert a.words == b.words
    assert np.bincount(a.lengths).max() == 200


# --- envelope, lines, drift -----------------------------------------------


def test_fit_envelope_linear():
    ell = np.repeat(np.arange(1, 11), 3)
    vals = 0.5 * ell + np.tile([0.0, 1.0, 2.0], 10)
    eps, M = fit_envelope(ell, vals)
    assert eps == pytest.approx(0.5)
    assert np.all(vals >= eps * ell - M)


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(1, 12), st.floats(0, 50)), min_size=1, max_size=60))
def test_fit_envelope_certified(pts):
    ell = np.array([p[0] for p in pts], dtype=float)
    vals = np.array([p[1] for p in pts])
    eps, M = fit_envelope(ell, vals)
    assert np.all(vals >= eps * ell - M)


def test_line_distance():
    x, y = np.array([3.0, 1.0]), np.array([4.0, 1.0])
    assert line_distance(x, y, math.inf).tolist() == [3.0, 1.0]
    assert line_distance(x, y, 1.0)[1] == 0.0
    assert line_distance(np.array([1.0]), np.array([1.0]), -1.0)[0] == pytest.approx(math.sqrt(2))
    assert parse_slope("axis") == math.inf and parse_slope("-1") == -1.0


def test_convex_cocompact_hexagon(hexagon):
    fit = convex_cocompact_drift(hexagon, 12)
    assert fit.epsilon > 0 and fit.holds()


def test_convex_cocompact_identity_generators():
    g = GeneratorSet(np.array([np.eye(3), np.eye(3)]), (1, 0))
    fit = convex_cocompact_drift(g, 8)
    assert fit.epsilon <= 0 and fit.holds()


def test_convex_cocompact_ping_pong():
    fit = convex_cocompact_drift(ping_pong_generators((2.0, 2.0)), 8)
    assert fit.epsilon > 0


def test_drift_trivial_axis(hexagon):
    fit = drift_statistics(hexagon, trivial_rho(hexagon), math.inf, 10)
    assert np.allclose(fit.dist_to_line, fit.mu_j)
    assert fit.epsilon > 0 and fit.holds()


def test_drift_diagonal_negative_control(hexagon):
    fit = drift_statistics(hexagon, hexagon, 1.0, 10)
    assert np.all(fit.dist_to_line == 0)
    assert fit.epsilon <= 0


def test_drift_conjugated_slope_minus_one(hexagon):
    h = boost(0.7) @ rotation(0.3)
    fit = drift_statistics(hexagon, conjugated_rho(hexagon, h), -1.0, 10)
    assert fit.epsilon > 0 and fit.holds()


def test_drift_rejects_misaligned(hexagon):
    with pytest.raises(ValueError):
        drift_statistics(hexagon, ping_pong_generators(), 1.0, 3)


def test_samples_nonnegative(hexagon):
    fit = drift_statistics(hexagon, embedded_rho(hexagon, 3), 1.0, 6)
    for s in fit.samples:
        assert s.word_length >= 1 and min(s.mu_j, s.mu_rho, s.dist_to_line) >= 0
        assert all(map(math.isfinite, (s.mu_j, s.mu_rho, s.dist_to_line)))


def test_csv_format_and_determinism(hexagon):
    a = drift_statistics(hexagon, trivial_rho(hexagon), -1.0, 9, per_length=100, seed=7).to_csv()
    b = drift_statistics(hexagon, trivial_rho(hexagon), -1.0, 9, per_length=100, seed=7).to_csv()
    assert a == b
    assert "\r" not in a
    rows = list(csv.reader(io.StringIO(a)))
    assert rows[0] == ["word_length", "mu_j", "mu_rho", "dist_to_line"]
    fit = drift_statistics(hexagon, trivial_rho(hexagon), -1.0, 9, per_length=100, seed=7)
    assert len(rows) - 1 == fit.sample_count
    assert float(rows[1][1]) == fit.mu_j[0]


def test_c_car(hexagon):
    assert c_car_estimate(hexagon, hexagon, 10) == pytest.approx(1.0, abs=0.05)
    assert c_car_estimate(hexagon, embedded_rho(hexagon, 3), 10) == pytest.approx(1.0, abs=0.05)
    assert c_car_estimate(hexagon, trivial_rho(hexagon), 10) == 0.0


def test_c_car_dominated_ping_pong():
    j = ping_pong_generators((2.0, 2.0))
    rho = j.with_matrices(ping_pong_generators((1.0, 1.0)).matrices)
    assert c_car_estimate(j, rho, 8) < 0.95


# --- delta constant --------------------------------------------------------


def test_delta_examples():
    assert delta_constant([[1, 0]], [[0, 1]]) == pytest.approx(1.0)
    assert delta_constant([[1, 0, 0], [0, 1, 0]], [[1, 0, 0], [0, 1, 0]]) == math.inf
    assert delta_constant([[1, 0]], [[1, 1]]) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        delta_constant([[1, 0], [2, 0]], [[0, 1]])


def test_intersection_and_distance():
    inter = intersection_basis([[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]])
    assert inter.shape == (1, 3) and abs(abs(inter[0, 1]) - 1) < 1e-12
    assert distance_to_subspace(np.array([[1.0, 2.0, 3.0]]), [[1, 0, 0]])[0] == pytest.approx(math.sqrt(13))
    assert distance_to_subspace(np.array([[3.0, 4.0]]), np.zeros((0, 2)))[0] == pytest.approx(5.0)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([(1, 1), (2, 2), (2, 3), (3, 3), (3, 4), (1, 3)]))
def test_delta_matches_monte_carlo(seed, dims):
    rng = np.random.default_rng(seed)
    vp, vpp = rng.standard_normal((dims[0], 5)), rng.standard_normal((dims[1], 5))
    d = delta_constant(vp, vpp)
    mc, _ = mc_delta(vp, vpp, rng, samples=20_000)
    assert mc >= d * (1 - 1e-9)
    assert mc <= d * (1 + 1e-3) + 1e-9


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([(2, 2), (3, 3), (3, 4), (2, 4)]))
def test_delta_distance_inequality(seed, dims):
    rng = np.random.default_rng(seed)
    vp, vpp = rng.standard_normal((dims[0], 5)), rng.standard_normal((dims[1], 5))
    d = delta_constant(vp, vpp)
    pts = rng.standard_normal((2000, dims[0])) @ vp
    lhs = distance_to_subspace(pts, vpp)
    inter = intersection_basis(vp, vpp)
    rhs = distance_to_subspace(pts, inter)
    assert np.all(lhs >= (d - 1e-6) * rhs)
