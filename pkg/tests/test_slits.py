"""Screen interference: fringes, which-way labels, wire-grid interception."""

import math

import numpy as np
import pytest
from scipy import stats

from hqs.experiments import (
    afshar,
    default_half_width,
    delayed_choice,
    first_minimum_position,
    fringe_visibility,
    path_difference,
    run_two_slit,
    two_slit,
)


def test_path_difference_oracle():
    # brute geometry: distances from both slits to the screen point
    d, L, x = 20.0, 2000.0, 37.5
    upper = math.sqrt(L * L + (x + d / 2) ** 2)
    lower = math.sqrt(L * L + (x - d / 2) ** 2)
    assert path_difference(x, d, L) == pytest.approx(upper - lower, rel=1e-15)


def test_first_minimum_sits_at_half_wavelength_difference():
    x1 = first_minimum_position(20.0, 2000.0)
    assert path_difference(x1, 20.0, 2000.0) == pytest.approx(0.5, abs=1e-10)
    # small-angle estimate L/(2 d) lands nearby but not exactly
    assert x1 == pytest.approx(2000.0 / 40.0, rel=0.01)


def test_default_screen_width_places_a_bin_on_the_minimum():
    half_width = default_half_width()
    x1 = first_minimum_position(20.0, 2000.0)
    centers = np.linspace(-half_width, half_width, 201)
    assert np.min(np.abs(centers - x1)) < 1e-9


def test_unlabeled_fringes_reach_full_visibility():
    profile = two_slit()
    assert len(profile.bin_centers) == 201
    assert profile.total == pytest.approx(1.0, abs=1e-9)
    assert profile.visibility >= 1.0 - 1e-9


def test_minima_land_on_half_integer_path_differences():
    profile = two_slit()
    probs = np.array(profile.probabilities)
    centers = np.array(profile.bin_centers)
    # all interior local minima of the profile
    interior = (probs[1:-1] < probs[:-2]) & (probs[1:-1] < probs[2:])
    for x in centers[1:-1][interior]:
        delta = path_difference(float(x), 20.0, 2000.0)
        assert abs(delta - round(delta) - 0.5) < 0.02 or abs(delta - round(delta) + 0.5) < 0.02


def test_profile_is_symmetric_about_the_axis():
    profile = two_slit()
    probs = np.array(profile.probabilities)
    assert np.allclose(probs, probs[::-1], atol=1e-12)


def test_labeled_profile_is_flat_and_incoherent():
    labeled = two_slit(labeled=True)
    assert labeled.visibility <= 1e-9
    # oracle: labeling makes the pattern the mean of the two one-slit profiles
    only1 = two_slit(slits=(True, False))
    only2 = two_slit(slits=(False, True))
    mean = 0.5 * (np.array(only1.probabilities) + np.array(only2.probabilities))
    assert np.allclose(np.array(labeled.probabilities), mean, atol=1e-12)


def test_monte_carlo_histogram_matches_profile():
    n = 100_000
    profile, bins = run_two_slit(n=n, seed=3)
    assert sum(bins) == n
    expected = np.array(profile.probabilities) * n
    observed = np.array(bins, dtype=float)
    # pool low-expectation bins so the chi-square approximation holds
    order = np.argsort(expected)
    pooled_obs, pooled_exp = [], []
    acc_o = acc_e = 0.0
    for idx in order:
        acc_o += observed[idx]
        acc_e += expected[idx]
        if acc_e >= 5.0:
            pooled_obs.append(acc_o)
            pooled_exp.append(acc_e)
            acc_o = acc_e = 0.0
    pooled_obs[-1] += acc_o
    pooled_exp[-1] += acc_e
    pooled_exp = np.array(pooled_exp) * (np.sum(pooled_obs) / np.sum(pooled_exp))
    chi2 = float(np.sum((np.array(pooled_obs) - pooled_exp) ** 2 / pooled_exp))
    dof = len(pooled_obs) - 1
    p = float(stats.chi2.sf(chi2, dof))
    assert p > 1e-3, (chi2, dof, p)


def test_delayed_choice_timing_label_changes_nothing():
    for screen_up in (True, False):
        before = delayed_choice(screen_up, "before_slits", 5_000, seed=13)
        after = delayed_choice(screen_up, "after_slits", 5_000, seed=13)
        assert before["counts"] == after["counts"]  # bit-exact


def test_delayed_choice_modes():
    up = delayed_choice(True, "before_slits", 2_000, seed=1)
    assert up["mode"] == "screen"
    assert up["profile"].visibility >= 1.0 - 1e-9
    down = delayed_choice(False, "before_slits", 2_000, seed=1)
    assert down["mode"] == "image"
    assert set(down["counts"]) == {"img1", "img2"}
    # the lens restores a clean 50/50 which-way split
    total = sum(down["counts"].values())
    assert abs(down["counts"]["img1"] / total - 0.5) <= 4.0 * math.sqrt(0.25 / total)


def test_delayed_choice_rejects_unknown_timing():
    with pytest.raises(ValueError):
        delayed_choice(True, "later", 10, seed=0)


def test_wire_grid_interception_oracle():
    """Independent quadrature for the intercepted fraction.

    Normalized both-slit intensity over one fringe period is
    (1 + cos 2 pi x); wires of width w cover [m - w/2, m + w/2] around
    each half-integer minimum.  Dense trapezoid integration is the
    oracle for the closed-form module value.
    """
    w = 0.06
    xs = np.linspace(0.5 - w / 2, 0.5 + w / 2, 20_001)
    covered = np.trapezoid(1.0 + np.cos(2 * np.pi * xs), xs) / 1.0  # per unit period
    both = afshar(wire_count=6, wire_width=w, both_slits=True)
    assert both["intercepted_fraction"] == pytest.approx(covered, rel=1e-6)
    assert both["intercepted_fraction"] < 0.002

    one = afshar(wire_count=6, wire_width=w, both_slits=False)
    assert one["intercepted_fraction"] == pytest.approx(w, abs=3e-3)


def test_wire_grid_scales_with_width_cubed():
    # near a minimum, 1 + cos(2 pi x) is quadratic, so coverage ~ w^3
    small = afshar(wire_width=0.01)["intercepted_fraction"]
    large = afshar(wire_width=0.02)["intercepted_fraction"]
    assert large / small == pytest.approx(8.0, rel=0.01)


def test_wire_grid_input_validation():
    with pytest.raises(ValueError):
        afshar(wire_count=0)
    with pytest.raises(ValueError):
        afshar(wire_width=0.0)
    with pytest.raises(ValueError):
        afshar(wire_width=1.5)


def test_visibility_helper():
    assert fringe_visibility([1.0, 0.0, 1.0, 0.0], interior=False) == pytest.approx(1.0)
    assert fringe_visibility([0.5, 0.5, 0.5], interior=False) == pytest.approx(0.0)
    # interior mode trims the partial edge fringes
    assert fringe_visibility([9.0, 1.0, 1.0, 9.0]) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        fringe_visibility([1.0, 2.0], interior=True)
    with pytest.raises(ValueError):
        fringe_visibility([], interior=False)
