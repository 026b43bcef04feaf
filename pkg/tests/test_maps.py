import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import random_blobs
from sharpgan_kit import MaskGenConfig, binary_mask, contour_map, distance_map, relabel_sequential, synthesize_layout
from sharpgan_kit.errors import ModeError


def test_distance_row_example():
    m = np.array([[0, 1, 1, 1, 0]])
    assert distance_map(m).tolist() == [[0.0, 1.0, 0.0, 1.0, 0.0]]
    assert distance_map(m, normalize=True).tolist() == [[0.0, 1.0, 0.0, 1.0, 0.0]]
    assert distance_map(m, "centroid_inverted", True).tolist() == [[0.0, 0.0, 1.0, 0.0, 0.0]]


def test_distance_background_and_single_pixel():
    assert not distance_map(np.zeros((4, 4), int)).any()
    m = np.zeros((3, 3), int)
    m[1, 1] = 4
    assert distance_map(m)[1, 1] == 0.0
    assert distance_map(m, normalize=True)[1, 1] == 1.0


def test_inverted_requires_normalize():
    with pytest.raises(ModeError):
        distance_map(np.ones((2, 2), int), mode="centroid_inverted")
    with pytest.raises(ModeError):
        distance_map(np.ones((2, 2), int), mode="boundary")


def test_distance_matches_bruteforce(rng):
    for _ in range(20):
        m = random_blobs(rng)
        np.testing.assert_allclose(distance_map(m), oracles.distance_map(m), rtol=0, atol=1e-9)
        np.testing.assert_allclose(distance_map(m, normalize=True), oracles.distance_map(m, True), rtol=0, atol=1e-9)


def test_normalized_maxima_are_one(rng):
    m = synthesize_layout(MaskGenConfig(canvas_width=64, canvas_height=64, overlap_policy="overlapping"), 2)
    d = distance_map(m, normalize=True)
    for k in range(1, m.max() + 1):
        assert d[m == k].max() == 1.0
    assert d.min() >= 0.0 and d.max() <= 1.0
    assert np.all(d[m == 0] == 0.0)


def test_distance_support():
    m = synthesize_layout(MaskGenConfig(canvas_width=64, canvas_height=64), 5)
    d = distance_map(m)
    # zero inside a nucleus only where a pixel sits exactly on the centroid
    zeros_inside = (d == 0) & (m > 0)
    assert zeros_inside.sum() <= m.max()


def test_contour_single_square_ring():
    m = np.zeros((7, 7), int)
    m[2:5, 2:5] = 1
    c = contour_map(m, 8)
    assert c.sum() == 8 and c[3, 3] == 0
    assert np.array_equal(c, oracles.contour_map(m, 8))


def test_contour_touching_border():
    m = np.zeros((4, 6), int)
    m[:, 1:3] = 1
    m[:, 3:5] = 2
    c = contour_map(m, 4)
    assert c[:, 2].all() and c[:, 3].all()
    assert np.array_equal(c, oracles.contour_map(m, 4))
    assert not contour_map(np.zeros((5, 5), int)).any()


def test_image_border_counts_as_background():
    c = contour_map(np.ones((3, 3), int))
    assert c.sum() == 8 and c[1, 1] == 0


@pytest.mark.parametrize("conn", [4, 8])
def test_contour_matches_bruteforce(rng, conn):
    for _ in range(20):
        m = random_blobs(rng)
        assert np.array_equal(contour_map(m, conn), oracles.contour_map(m, conn))


def test_contour_subset_of_mask_and_removal(rng):
    for _ in range(10):
        m = random_blobs(rng)
        c = contour_map(m)
        assert np.all(c <= binary_mask(m))
        k = int(rng.integers(1, m.max() + 1))
        removed = np.where(m == k, 0, m)
        expected = c.copy()
        expected[m == k] = 0
        assert np.array_equal(contour_map(removed), expected)


def test_binary_mask():
    m = np.array([[0, 1], [2, 0]])
    assert binary_mask(m).tolist() == [[0, 1], [1, 0]]
    assert not binary_mask(np.zeros((3, 3), int)).any()
    m = np.array([[0, 7], [3, 0]])
    assert np.array_equal(binary_mask(relabel_sequential(m)), binary_mask(m))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(0, 6), st.integers(0, 6))
def test_translation_equivariance(seed, dy, dx):
    m = random_blobs(np.random.default_rng(seed), shape=(20, 20), max_half=4)
    big = np.zeros((40, 40), int)
    big[8:28, 8:28] = m
    moved = np.roll(big, (dy, dx), axis=(0, 1))
    for f in (lambda x: distance_map(x, normalize=True), contour_map):
        np.testing.assert_allclose(np.roll(f(big), (dy, dx), axis=(0, 1)), f(moved), atol=1e-12)
