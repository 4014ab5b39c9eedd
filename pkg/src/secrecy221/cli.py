"""Command-line front end: capacity certificates, power sweeps, oracle runs.

Verbs:
  capacity  print the capacity certificate for a channel spec (JSON)
  sweep     capacity vs power as CSV
  oracle    brute-force cross-check report (JSON)
  random    emit seeded random non-degraded channel specs, one per line

Channel specs are JSON documents {"H": [[..,..],[..,..]], "g": [..,..],
"P": ..} with finite numbers; unknown fields are rejected.  ``-`` reads the
spec from stdin.  All numbers are serialized with 17 significant digits so
reports round-trip exactly and identical seeds give byte-identical output.
Exit codes: 0 success (Tight or resolved), 1 parse/validation error,
2 a check failed (NotTight certificate or oracle out of tolerance).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import matkit as mk
from .channel import ChannelKind, WiretapChannel, classify
from .converse import CapacityCertificate, capacity_certificate
from .errors import ChannelSpecError, SecrecyError
from .tolerances import EPS_CERT, RECOMMENDED_MIN_GRID

LOG2 = math.log(2.0)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x!r}")
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0, compact: bool = False) -> str:
    """JSON with 17-significant-digit floats and stable key order.

    ``compact`` renders everything on one line (used for line-oriented
    output such as random channel specs).
    """
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if compact:
            items = ", ".join(
                f"{json.dumps(str(k))}: {dumps(v, compact=True)}" for k, v in obj.items()
            )
            return "{" + items + "}"
        items = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v, indent, compact) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _error_exit(kind: str, message: str) -> int:
    sys.stderr.write(dumps({"error": {"type": kind, "message": message}}) + "\n")
    return EXIT_ERROR


# --------------------------------------------------------------------------
# channel spec IO
# --------------------------------------------------------------------------

def read_channel(path: str) -> WiretapChannel:
    """Parse a channel spec file (or stdin for ``-``)."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ChannelSpecError(f"cannot read channel spec: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelSpecError(f"invalid channel spec: {exc}") from exc
    return channel_from_dict(doc)


def channel_from_dict(doc) -> WiretapChannel:
    if not isinstance(doc, dict):
        raise ChannelSpecError("invalid channel spec: document is not an object")
    unknown = set(doc) - {"H", "g", "P"}
    if unknown:
        raise ChannelSpecError(f"invalid channel spec: unknown fields {sorted(unknown)}")
    missing = {"H", "g", "P"} - set(doc)
    if missing:
        raise ChannelSpecError(f"invalid channel spec: missing fields {sorted(missing)}")

    h = doc["H"]
    g = doc["g"]
    p = doc["P"]
    if (
        not isinstance(h, list)
        or len(h) != 2
        or any(not isinstance(row, list) or len(row) != 2 for row in h)
    ):
        raise ChannelSpecError("invalid channel spec: H must be a 2x2 array")
    if not isinstance(g, list) or len(g) != 2:
        raise ChannelSpecError("invalid channel spec: g must be a 2-vector")
    try:
        hmat = ((float(h[0][0]), float(h[0][1])), (float(h[1][0]), float(h[1][1])))
        gvec = (float(g[0]), float(g[1]))
        power = float(p)
    except (TypeError, ValueError) as exc:
        raise ChannelSpecError(f"invalid channel spec: {exc}") from exc
    try:
        return WiretapChannel(hmat, gvec, power)
    except ValueError as exc:
        raise ChannelSpecError(f"invalid channel spec: {exc}") from exc


def channel_to_dict(ch: WiretapChannel) -> dict:
    return {
        "H": [[ch.H[0][0], ch.H[0][1]], [ch.H[1][0], ch.H[1][1]]],
        "g": [ch.g[0], ch.g[1]],
        "P": ch.P,
    }


# --------------------------------------------------------------------------
# certificate rendering
# --------------------------------------------------------------------------

def certificate_to_dict(cert: CapacityCertificate) -> dict:
    out: dict = {
        "class": cert.kind.value,
        "verdict": cert.verdict,
        # Secrecy rates are reported clamped at zero; the raw bound values
        # are in lower_nats / upper_nats.
        "capacity_nats": max(0.0, cert.capacity_nats),
        "capacity_bits": max(0.0, cert.capacity_nats) / LOG2,
        "lower_nats": cert.lower,
        "upper_nats": cert.upper,
        "lambda1": cert.lambda1,
        "eigenvalues_of_bound": (
            list(cert.eigenvalues_of_bound) if cert.eigenvalues_of_bound else None
        ),
        "residuals": dict(cert.residuals),
    }
    if cert.beam is not None:
        out["beam"] = {
            "q_a": list(cert.beam.q_a),
            "rate_nats": cert.beam.rate,
            "degenerate": cert.beam.degenerate,
        }
    if cert.correlation is not None:
        out["correlation"] = {
            "alpha_star": cert.correlation.alpha_star,
            "theta_star": cert.correlation.theta_star,
            "a_star": list(cert.correlation.a_star),
            "A_star": [list(r) for r in cert.correlation.A_star],
        }
    out["flags"] = dict(cert.flags)
    return out


def _resolve_tol(flag_value: float | None) -> float:
    if flag_value is not None:
        return flag_value
    env = os.environ.get("SECRECY_TOL")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise ChannelSpecError(f"invalid SECRECY_TOL: {env!r}") from exc
    return EPS_CERT


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_capacity(args) -> int:
    ch = read_channel(args.channel)
    tol = _resolve_tol(args.tol)
    cert = capacity_certificate(ch, eps_cert=tol)
    doc = {"channel": channel_to_dict(ch), "tolerance": tol}
    doc.update(certificate_to_dict(cert))
    if args.bits:
        doc["capacity"] = doc["capacity_bits"]
        doc["units"] = "bits"
    else:
        doc["capacity"] = doc["capacity_nats"]
        doc["units"] = "nats"
    sys.stdout.write(dumps(doc) + "\n")
    return EXIT_CHECK_FAILED if cert.verdict == "NotTight" else EXIT_OK


def cmd_sweep(args) -> int:
    ch = read_channel(args.channel)
    if not (0.0 < args.pmin <= args.pmax):
        raise ChannelSpecError("sweep requires 0 < pmin <= pmax")
    if args.steps < 2:
        raise ChannelSpecError("sweep requires steps >= 2")
    if args.log_spacing:
        lo, hi = math.log(args.pmin), math.log(args.pmax)
        powers = [math.exp(lo + (hi - lo) * i / (args.steps - 1)) for i in range(args.steps)]
    else:
        powers = [
            args.pmin + (args.pmax - args.pmin) * i / (args.steps - 1)
            for i in range(args.steps)
        ]

    sys.stdout.write("P,capacity_nats,capacity_bits,lambda1,verdict\n")
    previous = -math.inf
    for power in powers:
        cert = capacity_certificate(ch.with_power(power))
        cap = max(0.0, cert.capacity_nats)
        if cap < previous - 1e-12:
            sys.stderr.write(
                f"warning: capacity decreased at P={_fmt_float(power)} "
                f"({_fmt_float(cap)} < {_fmt_float(previous)})\n"
            )
        previous = cap
        lam = cert.lambda1
        sys.stdout.write(
            ",".join(
                (
                    _fmt_float(power),
                    _fmt_float(cap),
                    _fmt_float(cap / LOG2),
                    _fmt_float(lam),
                    cert.verdict,
                )
            )
            + "\n"
        )
    return EXIT_OK


def cmd_oracle(args) -> int:
    from . import oracle
    from .achievable import beam_rate, optimal_beam
    from .channel import beam_covariance
    from .converse import optimize_alpha

    ch = read_channel(args.channel)
    if args.grid < RECOMMENDED_MIN_GRID:
        sys.stderr.write(
            f"warning: resolution below recommended minimum ({RECOMMENDED_MIN_GRID})\n"
        )
    grid = (args.grid, args.grid)
    cls = classify(ch)
    doc: dict = {
        "channel": channel_to_dict(ch),
        "class": cls.kind.value,
        "grid": {"nphi": args.grid, "npower": args.grid},
        "samples": args.samples,
        "seed": args.seed,
    }
    checks: list[bool] = []

    if cls.kind is ChannelKind.REDUCED_RANK:
        doc["note"] = "rank-deficient main channel; oracle checks are not applicable"
        doc["passes"] = True
        sys.stdout.write(dumps(doc) + "\n")
        return EXIT_OK

    beam = optimal_beam(ch)
    s_best, grid_rate = oracle.brute_force_gaussian(ch, grid, args.seed)
    (se1, se2), _ = mk.sym_eig2(s_best.S)
    gap = beam.rate - grid_rate
    doc["closed_form"] = {"lambda1": beam.lambda1, "rate_nats": beam.rate}
    doc["grid_search"] = {
        "rate_nats": grid_rate,
        "gap_nats": gap,
        "S_best": [list(r) for r in s_best.S],
        "unit_rank_margin": se2 / max(se1, 1e-300) if se1 > 0 else 0.0,
    }

    if cls.kind is ChannelKind.GENERAL:
        checks.append(-1e-12 <= gap <= 1e-3 * max(1.0, abs(beam.rate)))
        checks.append(se2 <= 1e-3 * ch.P)
    else:
        # Degraded: the grid may legitimately beat the best unit-rank beam.
        checks.append(grid_rate >= beam.rate - 1e-9)

    kkt_opt = oracle.kkt_check(ch.gram(), ch.g, ch.P, beam_covariance(beam.q_a, ch.P))
    doc["kkt_optimum"] = {
        "multiplier": kkt_opt.multiplier,
        "residual_stationarity": kkt_opt.residual_stationarity,
        "residual_complementarity": kkt_opt.residual_complementarity,
        "psd_margin": kkt_opt.psd_margin,
        "passes": kkt_opt.passes,
    }
    rot = 0.1
    q_rot = (
        beam.q_a[0] * math.cos(rot) - beam.q_a[1] * math.sin(rot),
        beam.q_a[0] * math.sin(rot) + beam.q_a[1] * math.cos(rot),
    )
    kkt_pert = oracle.kkt_check(ch.gram(), ch.g, ch.P, beam_covariance(q_rot, ch.P))
    doc["kkt_perturbed"] = {
        "rotation_rad": rot,
        "rate_nats": beam_rate(ch, q_rot),
        "passes": kkt_pert.passes,
    }
    if cls.kind is ChannelKind.GENERAL:
        checks.append(kkt_opt.passes)
        checks.append(not kkt_pert.passes)

        a_best, min_value = oracle.min_over_a(ch, args.samples, args.seed, grid)
        tc = optimize_alpha(ch, mk.orth_perp(beam.q_a))
        star_value = oracle.brute_force_upper(ch, tc.a_star, grid)
        doc["min_over_a"] = {
            "a_best": list(a_best),
            "value_nats": min_value,
            "a_star": list(tc.a_star),
            "a_star_value_nats": star_value,
            "lower_nats": beam.rate,
            "min_minus_lower_nats": min_value - beam.rate,
            "a_star_minus_min_nats": star_value - min_value,
        }
        checks.append(min_value >= beam.rate - 1e-3 * max(1.0, abs(beam.rate)))
        checks.append(star_value <= min_value + 1e-3 * max(1.0, abs(min_value)))

    doc["passes"] = all(checks)
    sys.stdout.write(dumps(doc) + "\n")
    return EXIT_OK if doc["passes"] else EXIT_CHECK_FAILED


def cmd_random(args) -> int:
    from .oracle import sample_general_channels

    if args.count < 1:
        raise ChannelSpecError("count must be at least 1")
    if args.power <= 0.0 or not math.isfinite(args.power):
        raise ChannelSpecError("power must be finite and positive")
    channels, attempts = sample_general_channels(args.seed, args.count, args.power)
    for ch in channels:
        sys.stdout.write(dumps(channel_to_dict(ch), compact=True) + "\n")
    sys.stderr.write(
        f"accepted {len(channels)} of {attempts} draws "
        f"(rate {_fmt_float(len(channels) / attempts)})\n"
    )
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecy221",
        description="Secrecy capacity of the 2-2-1 Gaussian MIMO wiretap channel",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cap = sub.add_parser("capacity", help="capacity certificate as JSON")
    p_cap.add_argument("channel", help="channel spec path, or - for stdin")
    units = p_cap.add_mutually_exclusive_group()
    units.add_argument("--bits", action="store_true", help="report capacity in bits")
    units.add_argument("--nats", action="store_true", help="report capacity in nats (default)")
    p_cap.add_argument(
        "--tol",
        type=float,
        default=None,
        help="tightness tolerance (overrides SECRECY_TOL and the default)",
    )
    p_cap.set_defaults(func=cmd_capacity)

    p_sweep = sub.add_parser("sweep", help="capacity vs power as CSV")
    p_sweep.add_argument("channel")
    p_sweep.add_argument("--pmin", type=float, required=True)
    p_sweep.add_argument("--pmax", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--log-spacing", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="brute-force cross-check report as JSON")
    p_oracle.add_argument("channel")
    p_oracle.add_argument("--grid", type=int, default=256, help="grid resolution per axis")
    p_oracle.add_argument("--samples", type=int, default=32, help="correlation samples")
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.set_defaults(func=cmd_oracle)

    p_random = sub.add_parser("random", help="emit random non-degraded channel specs")
    p_random.add_argument("--seed", type=int, default=0)
    p_random.add_argument("--count", type=int, default=1)
    p_random.add_argument("--power", type=float, default=1.0)
    p_random.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SecrecyError as exc:
        return _error_exit(type(exc).__name__, str(exc))
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - contract: never print a traceback
        return _error_exit(type(exc).__name__, str(exc))


def entry() -> None:
    sys.exit(main())
