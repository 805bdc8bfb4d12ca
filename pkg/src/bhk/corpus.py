"""Registered test-function corpus shared by the CLI and the verification
suites.  Every entry is Gaussian-localized (or a polynomial times a Gaussian),
so grid truncation error stays far below the verification tolerances."""

from __future__ import annotations

import numpy as np

from .grids import as_gamma
from .polys import EvenPoly, b_harmonic_basis, eval_poly

__all__ = ["corpus_names", "corpus_function"]


def _gaussian(scale: float):
    return lambda p: np.exp(-scale * np.sum(p * p, axis=-1))


def _harmonic(gamma, k: int) -> EvenPoly:
    g = as_gamma(gamma)
    if g.n < 2:
        raise ValueError(f"no B-harmonic degree-{k} polynomials exist for n = 1")
    basis = b_harmonic_basis(g.n, k, g)
    if not basis:
        raise ValueError(f"b-harmonic basis empty for n={g.n}, k={k}")
    return basis[0]


_REGISTRY = {
    "gaussian": lambda g: _gaussian(1.0),
    "gaussian-s05": lambda g: _gaussian(0.5),
    "gaussian-s2": lambda g: _gaussian(2.0),
    "b-harmonic-k2": lambda g: (lambda p: eval_poly(_harmonic(g, 2), p)),
    "b-harmonic-k4": lambda g: (lambda p: eval_poly(_harmonic(g, 4), p)),
    "harmonic-gaussian-k2": lambda g: (
        lambda p: eval_poly(_harmonic(g, 2), p) * np.exp(-np.sum(p * p, axis=-1))
    ),
}


def corpus_names() -> list:
    return sorted(_REGISTRY)


def corpus_function(name: str, gamma):
    """Callable(points (..., n)) -> values for a registered corpus entry."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise ValueError(
            f"unknown corpus function {name!r}; known: {', '.join(corpus_names())}"
        ) from None
    return factory(as_gamma(gamma))
