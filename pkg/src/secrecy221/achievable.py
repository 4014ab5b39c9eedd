"""Lower bound: optimal Gaussian beamforming for the 2-2-1 wiretap channel.

For any unit beam q at full power the secrecy rate is the log of a
generalized Rayleigh quotient,

    rate(q) = (1/2) log [ q^T (I + P H^T H) q / q^T (I + P g g^T) q ],

so the best beam is the top generalized eigenvector and the achievable
secrecy rate is (1/2) log lambda_1.  A beam orthogonal to the eavesdropper
witnesses strict positivity of that rate whenever H is full-rank, which in
turn forces lambda_1 > 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import matkit as mk
from .channel import ChannelClass, ChannelKind, WiretapChannel, singular_values
from .errors import InvariantViolated, PreconditionFailed, RankDeficient
from .matkit import Mat2, Vec2
from .tolerances import EPS_EIG, EPS_ID, EPS_RANK


@dataclass(frozen=True)
class BeamSolution:
    """Optimal beam direction, its generalized eigenvalue, and the rate (nats).

    ``degenerate`` flags a (numerically) tied eigenvalue pair, in which case
    the direction is not unique.  ``no_eavesdropper`` flags g = 0, where the
    solution is simply the strongest direction of the main channel.
    """

    q_a: Vec2
    lambda1: float
    rate: float
    degenerate: bool
    no_eavesdropper: bool = False


def rayleigh_matrices(ch: WiretapChannel) -> tuple[Mat2, Mat2]:
    """The pair (I + P H^T H, I + P g g^T) defining the beam problem."""
    eye = mk.eye2()
    a = mk.matadd2(eye, mk.matscale2(ch.P, ch.gram()))
    b = mk.matadd2(eye, mk.matscale2(ch.P, mk.outer2(ch.g, ch.g)))
    return mk.symmetrize2(a), mk.symmetrize2(b)


def _require_full_rank(ch: WiretapChannel) -> None:
    smax, smin = singular_values(ch.H)
    if smax == 0.0 or smin / smax <= EPS_RANK:
        raise RankDeficient("main channel gain is rank deficient")


def beam_rate(ch: WiretapChannel, q: Vec2) -> float:
    """Secrecy rate (nats) of the unit-rank covariance P q q^T, directly."""
    hq = mk.matvec2(ch.H, q)
    num = 1.0 + ch.P * mk.dot2(hq, hq)
    den = 1.0 + ch.P * mk.dot2(ch.g, q) ** 2
    return 0.5 * math.log(num / den)


def optimal_beam(ch: WiretapChannel) -> BeamSolution:
    """Solve the beam problem and verify the solution two independent ways.

    The eigenvector is checked against its fixed-point relation
    (I + P g g^T)^{-1} (I + P H^T H) q = lambda_1 q, and the eigenvalue rate
    against the rate evaluated directly from the beam.  Requires a full-rank
    main channel; works for degraded channels too (there it is the best
    unit-rank strategy rather than the capacity).
    """
    _require_full_rank(ch)
    a, b = rayleigh_matrices(ch)
    (l1, l2), (q1, _) = mk.gen_eig2_rank1(a, ch.P, ch.g)

    # Fixed-point relation B^{-1} A q = lambda_1 q, verified in the
    # equivalent form A q = lambda_1 B q.  The residual is normalized by
    # the pencil's scale (backward-error style), which neither inherits the
    # conditioning of B^{-1} at large power nor collapses when A q itself
    # is small.
    aq = mk.matvec2(a, q1)
    bq = mk.scale2(l1, mk.matvec2(b, q1))
    scale = max(1.0, mk.fro2(a) + abs(l1) * mk.fro2(b))
    resid = mk.norm2(mk.sub2(aq, bq)) / scale
    if resid > EPS_EIG:
        raise InvariantViolated(
            f"generalized eigenpair fixed-point residual {resid!r}"
        )

    rate = 0.5 * math.log(l1)
    direct = beam_rate(ch, q1)
    if abs(rate - direct) > EPS_ID * max(1.0, abs(rate)):
        raise InvariantViolated(
            f"eigenvalue rate {rate!r} disagrees with direct beam rate {direct!r}"
        )

    degenerate = (l1 - l2) <= EPS_EIG * max(1.0, abs(l1))
    return BeamSolution(
        q_a=q1,
        lambda1=l1,
        rate=rate,
        degenerate=degenerate,
        no_eavesdropper=mk.norm2(ch.g) == 0.0,
    )


def null_beam_rate(ch: WiretapChannel) -> float:
    """Rate of beaming orthogonally to the eavesdropper: (1/2) log(1 + P ||H g_perp||^2).

    Strictly positive for full-rank H, and never better than the optimal
    beam.  When g = 0 there is no direction to avoid, so the strongest main
    channel direction is used instead (the continuous limit of the problem).
    """
    _require_full_rank(ch)
    if mk.norm2(ch.g) == 0.0:
        (l1, _), _ = mk.sym_eig2(ch.gram())
        return 0.5 * math.log(1.0 + ch.P * l1)
    g_perp = mk.orth_perp(mk.unit2(ch.g))
    hg = mk.matvec2(ch.H, g_perp)
    return 0.5 * math.log(1.0 + ch.P * mk.dot2(hg, hg))


def assert_lambda_exceeds_one(
    sol: BeamSolution, cls: ChannelClass, ch: WiretapChannel | None = None
) -> bool:
    """Check lambda_1 > 1 on a non-degraded channel.

    When the channel is supplied, the gap threshold is half the guaranteed
    excess implied by the positive null-beam rate (lambda_1 >= 1 + P ||H
    g_perp||^2); otherwise a bare eigenvalue tolerance is used.  Failure is
    an InvariantViolated, i.e. an implementation bug, never a valid outcome.
    """
    if cls.kind is not ChannelKind.GENERAL:
        raise PreconditionFailed("lambda_1 > 1 is only asserted for General channels")
    if ch is not None:
        gap = 0.5 * math.expm1(2.0 * null_beam_rate(ch))
    else:
        gap = EPS_EIG
    if not sol.lambda1 > 1.0 + gap:
        raise InvariantViolated(
            f"lambda_1 = {sol.lambda1!r} does not exceed 1 + {gap!r}"
        )
    return True
