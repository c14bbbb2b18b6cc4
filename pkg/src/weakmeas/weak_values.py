"""Overlaps and weak values of the +-1 observable on the measured qubit.

The observable is fixed to A = diag(-1, +1) in the {|0>, |1>} basis, the
only one the two-port scheme uses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .states_and_grids import QubitState

OVERLAP_DIVERGENCE_THRESHOLD = 1e-15


class NearOrthogonalError(ValueError):
    """Pre- and postselection are (numerically) orthogonal; weak value diverges."""


@dataclass(frozen=True)
class WeakValue:
    """Weak value <post|A|pre> / <post|pre> together with the raw overlap."""

    value: complex
    overlap: complex


def overlap(pre: QubitState, post: QubitState) -> complex:
    """Inner product <post|pre>, conjugating the postselection amplitudes."""
    return post.c0.conjugate() * pre.c0 + post.c1.conjugate() * pre.c1


def weak_value(
    pre: QubitState,
    post: QubitState,
    min_overlap: float = OVERLAP_DIVERGENCE_THRESHOLD,
) -> WeakValue:
    """Weak value of A = diag(-1, +1) for the given pre/postselection.

    Raises NearOrthogonalError when |<post|pre>| <= min_overlap, where the
    ratio is dominated by rounding rather than physics. The returned value
    is invariant under global phases of either state.
    """
    ov = overlap(pre, post)
    if abs(ov) <= min_overlap:
        raise NearOrthogonalError(
            f"|<post|pre>| = {abs(ov):.3e} <= {min_overlap:.3e}; "
            "weak value diverges at orthogonal postselection"
        )
    numerator = post.c0.conjugate() * (-pre.c0) + post.c1.conjugate() * pre.c1
    return WeakValue(value=numerator / ov, overlap=ov)
