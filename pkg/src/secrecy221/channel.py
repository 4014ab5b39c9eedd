"""Wiretap channel instances: validation, classification, and Gaussian rates.

A channel is the triple (H, g, P): a 2x2 main-channel gain, a length-2
eavesdropper gain, and an average transmit power budget.  Receiver and
eavesdropper noises are unit-variance Gaussians.  The classifier decides
whether the eavesdropper is degraded (``||H^{-T} g|| <= 1``), the channel is
the interesting non-degraded full-rank case, or the main channel is rank
deficient and the problem collapses to a two-input single-output one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import matkit as mk
from .errors import (
    BoundaryAmbiguous,
    InvalidCovariance,
    InvariantViolated,
    NotPSD,
    NotRankDeficient,
    PowerExceeded,
)
from .matkit import Mat2, Vec2
from .tolerances import EPS_CLASS, EPS_ID, EPS_PSD, EPS_RANK, EPS_TRACE


def _check_finite(values, what: str) -> None:
    for x in values:
        if not math.isfinite(x):
            raise ValueError(f"{what} must be finite, got {x!r}")


@dataclass(frozen=True)
class WiretapChannel:
    """Channel instance: main gain H (2x2), eavesdropper gain g, power P."""

    H: Mat2
    g: Vec2
    P: float

    def __post_init__(self):
        _check_finite((*self.H[0], *self.H[1]), "H entries")
        _check_finite(self.g, "g entries")
        if not (math.isfinite(self.P) and self.P > 0.0):
            raise ValueError(f"power budget must be finite and positive, got {self.P!r}")

    def gram(self) -> Mat2:
        """H^T H."""
        return mk.symmetrize2(mk.matmul2(mk.transpose2(self.H), self.H))

    def with_power(self, power: float) -> "WiretapChannel":
        return WiretapChannel(self.H, self.g, power)


class ChannelKind(Enum):
    GENERAL = "General"
    DEGRADED = "Degraded"
    REDUCED_RANK = "ReducedRank"


@dataclass(frozen=True)
class ChannelClass:
    """Classification result.

    ``eve_norm`` is ||H^{-T} g||, the eavesdropper gain seen after inverting
    the main channel; it is None when H is rank deficient.  ``sv_ratio`` is
    sigma_min / sigma_max of H.
    """

    kind: ChannelKind
    eve_norm: float | None
    sv_ratio: float


@dataclass(frozen=True)
class MisoChannel:
    """Equivalent 2-1-1 channel after rotating out a rank-deficient H."""

    h: Vec2
    g: Vec2
    P: float

    def __post_init__(self):
        if mk.norm2(self.h) <= 0.0:
            raise ValueError("effective main channel row must be nonzero")


@dataclass(frozen=True)
class CovMat:
    """Validated transmit covariance: symmetric PSD with trace within budget."""

    S: Mat2


def singular_values(h: Mat2) -> tuple[float, float]:
    """(sigma_max, sigma_min) of a 2x2 matrix, via the Gram eigenvalues."""
    gram = mk.symmetrize2(mk.matmul2(mk.transpose2(h), h))
    (l1, l2), _ = mk.sym_eig2(gram)
    return math.sqrt(max(l1, 0.0)), math.sqrt(max(l2, 0.0))


def classify(ch: WiretapChannel) -> ChannelClass:
    """Classify the channel as General, Degraded, or ReducedRank.

    Raises BoundaryAmbiguous when ||H^{-T} g|| is within EPS_CLASS of 1:
    the two regimes use different machinery and neither covers the boundary,
    so the caller has to pick a branch explicitly.
    """
    smax, smin = singular_values(ch.H)
    ratio = smin / smax if smax > 0.0 else 0.0
    if ratio <= EPS_RANK:
        return ChannelClass(ChannelKind.REDUCED_RANK, None, ratio)
    ht_inv = mk.inv2(mk.transpose2(ch.H))
    eve_norm = mk.norm2(mk.matvec2(ht_inv, ch.g))
    if abs(eve_norm - 1.0) < EPS_CLASS:
        raise BoundaryAmbiguous(
            f"||H^-T g|| = {eve_norm!r} is within {EPS_CLASS} of 1; "
            "choose the degraded or non-degraded branch explicitly"
        )
    kind = ChannelKind.GENERAL if eve_norm > 1.0 else ChannelKind.DEGRADED
    return ChannelClass(kind, eve_norm, ratio)


def reduce_rank_deficient(ch: WiretapChannel) -> MisoChannel:
    """Collapse a rank-deficient channel to its equivalent 2-1-1 form.

    Rotating the receiver by the left singular basis of H leaves a single
    informative output with row gain sigma_1 v_1 (top singular pair of H);
    g and P carry over unchanged.
    """
    cls = classify(ch)
    if cls.kind is not ChannelKind.REDUCED_RANK:
        raise NotRankDeficient("channel has a full-rank main gain")
    gram = ch.gram()
    (l1, _), (v1, _) = mk.sym_eig2(gram)
    sigma1 = math.sqrt(max(l1, 0.0))
    return MisoChannel(mk.scale2(sigma1, v1), ch.g, ch.P)


def validate_covariance(s, power: float) -> CovMat:
    """Check PSD-ness and the trace budget; clip roundoff-negative eigenvalues.

    Accepts either a CovMat (returned as-is) or a raw 2x2 matrix.  Eigenvalues
    in [-EPS_PSD * scale, 0) are treated as zero and the covariance is
    reconstructed without them; anything more negative raises NotPSD.
    """
    if isinstance(s, CovMat):
        return s
    if not all(math.isfinite(x) for row in s for x in row):
        raise InvalidCovariance("covariance entries must be finite")
    sym = mk.symmetrize2(s)
    (l1, l2), (v1, v2) = mk.sym_eig2(sym)
    scale = max(1.0, abs(l1))
    if l2 < -EPS_PSD * scale:
        raise NotPSD(f"covariance has negative eigenvalue {l2!r}")
    if l1 + l2 > power + EPS_TRACE * max(1.0, power):
        raise PowerExceeded(f"trace {l1 + l2!r} exceeds power budget {power!r}")
    if l2 < 0.0:
        sym = mk.symmetrize2(mk.matscale2(max(l1, 0.0), mk.outer2(v1, v1)))
    return CovMat(sym)


def beam_covariance(q: Vec2, power: float) -> CovMat:
    """Unit-rank covariance P q q^T for a unit beam direction q."""
    return CovMat(mk.symmetrize2(mk.matscale2(power, mk.outer2(q, q))))


def _gaussian_rate_detail(ch: WiretapChannel, cov: CovMat) -> tuple[float, float]:
    s = cov.S
    eye = mk.eye2()
    hsh = mk.matmul2(mk.matmul2(ch.H, s), mk.transpose2(ch.H))
    num_a = mk.det2(mk.matadd2(eye, hsh))
    num_b = mk.det2(mk.matadd2(eye, mk.matmul2(ch.gram(), s)))
    den = 1.0 + mk.quad2(s, ch.g)
    rate_a = 0.5 * math.log(num_a / den)
    rate_b = 0.5 * math.log(num_b / den)
    residual = abs(rate_a - rate_b) / max(1.0, abs(rate_a))
    return rate_a, residual


def gaussian_rate(ch: WiretapChannel, cov) -> float:
    """Secrecy rate of a Gaussian input with covariance S (nats, unclamped).

    Computes (1/2) log det(I + H S H^T) - (1/2) log(1 + g^T S g) and
    cross-checks the determinant against the algebraically equal form
    det(I + H^T H S); disagreement means a broken kernel, not a property of
    the input.
    """
    cov = validate_covariance(cov, ch.P)
    rate, residual = _gaussian_rate_detail(ch, cov)
    if residual > EPS_ID:
        raise InvariantViolated(
            f"determinant identity residual {residual!r} exceeds {EPS_ID}"
        )
    return rate
