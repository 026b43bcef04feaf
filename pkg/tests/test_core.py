import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sharpgan_kit import relabel_sequential, rgb_to_gray, validate_instance_map
from sharpgan_kit.core import as_gray, to_gray
from sharpgan_kit.errors import DimensionMismatch


def test_rgb_to_gray_white_black_red():
    assert np.all(rgb_to_gray(np.ones((3, 4, 3))) == 1.0)
    assert np.all(rgb_to_gray(np.zeros((3, 4, 3))) == 0.0)
    red = np.zeros((2, 2, 3))
    red[..., 0] = 1.0
    np.testing.assert_allclose(rgb_to_gray(red), 0.299, rtol=0, atol=1e-15)


@given(arrays(np.float64, (5, 6), elements=st.floats(0, 1)))
def test_gray_replicated_rgb_is_exact(v):
    img = np.stack([v, v, v], axis=-1)
    g = rgb_to_gray(img)
    assert g.shape == v.shape
    assert np.array_equal(g, v)


def test_rgb_to_gray_rejects_bad_shape():
    with pytest.raises(DimensionMismatch):
        rgb_to_gray(np.zeros((4, 4)))
    with pytest.raises(ValueError):
        rgb_to_gray(np.full((2, 2, 3), 1.5))


def test_to_gray_dispatch():
    g = np.random.default_rng(0).random((4, 4))
    assert to_gray(g) is not None and np.array_equal(to_gray(g), g)
    with pytest.raises(DimensionMismatch):
        as_gray(np.zeros((0, 3)))


def test_relabel_examples():
    m = np.array([[0, 5, 9], [9, 5, 0]])
    assert relabel_sequential(m).tolist() == [[0, 1, 2], [2, 1, 0]]
    seq = np.array([[0, 1], [2, 2]])
    assert np.array_equal(relabel_sequential(seq), seq)
    assert not relabel_sequential(np.zeros((3, 3), int)).any()


@given(arrays(np.int64, (6, 7), elements=st.integers(0, 40)))
def test_relabel_idempotent_and_partition_preserving(m):
    r = relabel_sequential(m)
    assert np.array_equal(relabel_sequential(r), r)
    flat_m, flat_r = m.ravel(), r.ravel()
    same_before = flat_m[:, None] == flat_m[None, :]
    same_after = flat_r[:, None] == flat_r[None, :]
    assert np.array_equal(same_before, same_after)
    assert np.array_equal(r == 0, m == 0)
    assert validate_instance_map(r).ok


def test_validate_reports():
    assert validate_instance_map(np.array([[0, 1], [2, 2]])).ok
    rep = validate_instance_map(np.array([[0, 2], [2, 0]]))
    assert not rep.ok and rep.issues[0][0] == "non-sequential"
    assert "non-sequential labels" in rep.issues[0][1]
    rep = validate_instance_map(np.zeros((0, 0), dtype=int))
    assert [code for code, _ in rep.issues] == ["empty-dimensions"]
    rep = validate_instance_map(np.array([[0, 1]]), shape=(2, 2))
    assert [code for code, _ in rep.issues] == ["dimension-mismatch"]
    rep = validate_instance_map(np.array([[0, 1]]), num_labels=3)
    assert [code for code, _ in rep.issues] == ["empty-label"]
    assert not validate_instance_map(np.array([[0.5, 1.0]])).ok
