from __future__ import annotations

import numpy as np

from ..errors import DegenerateReference
from ._common import pair


def nrmse(ref, test) -> float:
    """Root mean square error normalized by the reference's intensity range."""
    ref, test = pair(ref, test)
    span = float(ref.max() - ref.min())
    if span == 0.0:
        raise DegenerateReference("reference image is constant; NRMSE is undefined")
    return float(np.sqrt(np.mean((ref - test) ** 2)) / span)
