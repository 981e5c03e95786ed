"""Paracontrolled calculus on the torus.

Grid arrays are real values on the uniform collocation grid of [0, 2pi)^d with
shape (n,) * d.
"""

import json as _json

from ._paralab import (
    InvalidArgument,
    IoError,
    LatticeMismatch,
    NumericalFailure,
    block_norms,
    bony,
    holder_norm,
    ks_two_sample,
    product,
    renorm_constants,
    roundtrip,
    sample_polymer,
    solve_kpz,
    solve_pam,
    suites,
    white_noise,
)


def acceptance(k):
    """Run acceptance criterion k (1..10) and return its report as a dict."""
    from ._paralab import acceptance_json

    return _json.loads(acceptance_json(k))


__all__ = [
    "InvalidArgument",
    "IoError",
    "LatticeMismatch",
    "NumericalFailure",
    "acceptance",
    "block_norms",
    "bony",
    "holder_norm",
    "ks_two_sample",
    "product",
    "renorm_constants",
    "roundtrip",
    "sample_polymer",
    "solve_kpz",
    "solve_pam",
    "suites",
    "white_noise",
]
