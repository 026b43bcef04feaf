import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sharpgan_kit import relabel_sequential  # noqa: E402


# filled by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_blobs(rng, shape=(32, 32), n=(1, 8), max_half=7):
    """Random overlapping rectangles and discs painted later-wins, relabeled."""
    h, w = shape
    out = np.zeros(shape, dtype=np.int64)
    yy, xx = np.mgrid[0:h, 0:w]
    for k in range(1, int(rng.integers(n[0], n[1], endpoint=True)) + 1):
        ci, cj = rng.integers(0, h), rng.integers(0, w)
        a, b = rng.integers(1, max_half + 1, size=2)
        if rng.random() < 0.5:
            m = (abs(yy - ci) <= a) & (abs(xx - cj) <= b)
        else:
            m = ((yy - ci) / a) ** 2 + ((xx - cj) / b) ** 2 <= 1.0
        out[m] = k
    return relabel_sequential(out)


def perturb(rng, labels):
    """A plausible 'prediction' for ``labels``: shifted, with extra and dropped blobs, permuted ids."""
    h, w = labels.shape
    dy, dx = rng.integers(-2, 3, size=2)
    pred = np.roll(labels, (int(dy), int(dx)), axis=(0, 1)).copy()
    if rng.random() < 0.5:
        extra = random_blobs(rng, labels.shape, n=(0, 3), max_half=4)
        pred[extra > 0] = extra[extra > 0] + pred.max()
    ids = np.unique(pred[pred > 0])
    if ids.size and rng.random() < 0.5:
        pred[pred == rng.choice(ids)] = 0
    pred = relabel_sequential(pred)
    return permute_labels(rng, pred)


def permute_labels(rng, labels):
    k = int(labels.max())
    perm = np.concatenate(([0], rng.permutation(k) + 1 + rng.integers(0, 50)))
    return perm[labels]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
