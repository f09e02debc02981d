"""Command-line front end.

Subcommands: check-params | run | attack | sweep | ot-demo. Exit codes are a
stable contract: 0 success (or constraints satisfied), 1 constraint-violation
outcome or runtime failure, 2 usage error. Every subcommand is fully
deterministic for a fixed --seed; the two-process mode of ``run`` derives
per-party streams from the seed, so a loopback run reproduces the in-process
transcript exactly.
"""

from __future__ import annotations

import argparse
import socket
import sys
from itertools import product
from typing import Sequence

from .attacks import break_ot, ot_from_ppsp, test_candidate
from .harness import (
    Attack,
    PairMode,
    TrialConfig,
    VectorMode,
    crossing_summary,
    run_attack_trials,
    run_original_attack_trials,
    sweep_k4,
    write_sweep_csv,
)
from .params import (
    ParameterError,
    ProtocolParams,
    Variant,
    attack_thresholds,
    validate,
)
from .protocol import (
    ForcedSecrets,
    dot_oracle,
    p0_finalize,
    p0_round1,
    p1_round2,
    gen_prime,
    run_session,
    Round1Msg,
    Round2Msg,
)
from .rng import derive_rng, derive_seed
from .wire import FramingError, encode_message, read_message


def _parse_k4_range(text: str) -> tuple[int, int, int]:
    try:
        lo, hi, step = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected FROM:TO:STEP, got {text!r}"
        ) from None
    return lo, hi, step


def _parse_address(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    return host, int(port)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--n", type=int, default=256, help="vector length")
    shared.add_argument(
        "--q-bits", type=int, default=32, help="elements lie in [0, 2**Q_BITS)"
    )
    shared.add_argument("--k1", type=int, default=512, help="modulus bits")
    shared.add_argument("--k2", type=int, default=200, help="structuring base bits")
    shared.add_argument("--k3", type=int, default=128, help="additive mask bits")
    shared.add_argument("--k4", type=int, default=128, help="multiplicative mask bits")
    shared.add_argument(
        "--variant",
        choices=[v.value for v in Variant],
        default=Variant.TPDS14.value,
        help="protocol revision",
    )
    shared.add_argument("--seed", type=int, default=1, help="root seed")
    shared.add_argument("--trials", type=int, default=1000, help="trials per batch")

    parser = argparse.ArgumentParser(
        prog="ppsp-lab",
        description="masked scalar-product protocol, attacks, and sweep harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser(
        "check-params",
        parents=[shared],
        help="evaluate correctness constraints and attack thresholds",
    )
    p_check.set_defaults(func=cmd_check_params)

    p_run = sub.add_parser(
        "run",
        parents=[shared],
        help="run one session (in-process, or across two processes)",
    )
    mode = p_run.add_mutually_exclusive_group()
    mode.add_argument(
        "--listen", type=_parse_address, metavar="HOST:PORT", help="act as P0"
    )
    mode.add_argument(
        "--connect", type=_parse_address, metavar="HOST:PORT", help="act as P1"
    )
    p_run.add_argument(
        "--transcript", metavar="FILE", help="dump framed messages as hex lines"
    )
    p_run.set_defaults(func=cmd_run)

    p_attack = sub.add_parser(
        "attack", parents=[shared], help="measure attack accuracy"
    )
    p_attack.add_argument(
        "--attack",
        choices=["original", "fixed-a0", "fixed-general", "test-candidate"],
        default="fixed-a0",
        help="original implies spoc13; the others imply tpds14",
    )
    p_attack.add_argument(
        "--pair",
        choices=[m.value for m in PairMode],
        default=PairMode.RANDOM_PAIR.value,
        help="how the second candidate is built",
    )
    p_attack.add_argument(
        "--slack-bits", type=int, default=2, help="test-candidate slack"
    )
    p_attack.set_defaults(func=cmd_attack)

    p_sweep = sub.add_parser(
        "sweep", parents=[shared], help="k4 sweep, written as CSV"
    )
    p_sweep.add_argument(
        "--k4-range",
        type=_parse_k4_range,
        default=(128, 400, 8),
        metavar="FROM:TO:STEP",
        help="inclusive k4 grid (default 128:400:8)",
    )
    p_sweep.add_argument("--out", required=True, metavar="FILE", help="CSV path")
    p_sweep.add_argument(
        "--workers", type=int, default=None, help="parallel grid workers"
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_ot = sub.add_parser(
        "ot-demo",
        parents=[shared],
        help="bit-transfer demo (n=2, q=2, tpds14 regardless of flags)",
    )
    p_ot.set_defaults(func=cmd_ot_demo)

    return parser


def _params_from_args(args: argparse.Namespace, **overrides) -> ProtocolParams:
    fields = dict(
        n=args.n,
        q=1 << args.q_bits,
        k1=args.k1,
        k2=args.k2,
        k3=args.k3,
        k4=args.k4,
        variant=Variant(args.variant),
    )
    fields.update(overrides)
    return ProtocolParams(**fields)


def cmd_check_params(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    report = validate(params)
    thresholds = attack_thresholds(params)
    print(
        f"params: n={params.n} q={params.q} k1={params.k1} k2={params.k2} "
        f"k3={params.k3} k4={params.k4} variant={params.variant.value}"
    )
    print("constraints:")
    print(report.as_text())
    print("thresholds (k4, bits):")
    print(thresholds.as_text())
    print(report.as_record())
    print(thresholds.as_record())
    return 0 if report.all_satisfied else 1


def _write_transcript(path: str | None, lines: Sequence[str]) -> None:
    if path is None:
        return
    with open(path, "w", newline="") as fh:
        for line in lines:
            fh.write(line + "\n")


def _recv_exact(sock: socket.socket, k: int) -> bytes:
    buf = bytearray()
    while len(buf) < k:
        chunk = sock.recv(k - len(buf))
        if not chunk:
            raise FramingError(
                f"stream ended early: expected {k} bytes, got {len(buf)} "
                f"({k - len(buf)} missing)"
            )
        buf.extend(chunk)
    return bytes(buf)


def _run_in_process(args: argparse.Namespace, params: ProtocolParams) -> int:
    a = tuple(derive_rng(args.seed, "a").randrange(params.q) for _ in range(params.n))
    b = tuple(derive_rng(args.seed, "b").randrange(params.q) for _ in range(params.n))
    result, view = run_session(a, b, params, args.seed)
    oracle = dot_oracle(a, b)
    _write_transcript(
        args.transcript,
        [
            f"P0->P1: {encode_message(view.round1).hex()}",
            f"P1->P0: {encode_message(view.round2).hex()}",
        ],
    )
    match = result == oracle
    print(f"a.b = {oracle}")
    print(f"E = {view.E}")
    print(f"result = {result}")
    print(f"result == oracle: {'true' if match else 'false'}")
    return 0 if match else 1


def _run_p0_listen(args: argparse.Namespace, params: ProtocolParams) -> int:
    host, port = args.listen
    a = tuple(derive_rng(args.seed, "a").randrange(params.q) for _ in range(params.n))
    with socket.create_server((host, port)) as server:
        conn, _ = server.accept()
        with conn:
            state, msg1 = p0_round1(a, params, derive_rng(args.seed, "p0"))
            conn.sendall(encode_message(msg1))
            msg2 = read_message(lambda k: _recv_exact(conn, k))
            if not isinstance(msg2, Round2Msg):
                raise FramingError("expected a round 2 frame from P1")
            result, view = p0_finalize(state, msg2, msg1)
    _write_transcript(
        args.transcript,
        [
            f"P0->P1: {encode_message(msg1).hex()}",
            f"P1->P0: {encode_message(msg2).hex()}",
        ],
    )
    print(f"E = {view.E}")
    print(f"result = {result}")
    return 0


def _run_p1_connect(args: argparse.Namespace, params: ProtocolParams) -> int:
    host, port = args.connect
    b = tuple(derive_rng(args.seed, "b").randrange(params.q) for _ in range(params.n))
    with socket.create_connection((host, port), timeout=30) as conn:
        msg1 = read_message(lambda k: _recv_exact(conn, k))
        if not isinstance(msg1, Round1Msg):
            raise FramingError("expected a round 1 frame from P0")
        msg2 = p1_round2(b, msg1, params, derive_rng(args.seed, "p1"))
        conn.sendall(encode_message(msg2))
    _write_transcript(
        args.transcript,
        [
            f"P0->P1: {encode_message(msg1).hex()}",
            f"P1->P0: {encode_message(msg2).hex()}",
        ],
    )
    print("response sent")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    if args.listen is not None:
        return _run_p0_listen(args, params)
    if args.connect is not None:
        return _run_p1_connect(args, params)
    return _run_in_process(args, params)


def _test_candidate_rates(
    args: argparse.Namespace, params: ProtocolParams
) -> tuple[float, float]:
    pin = ForcedSecrets(p=gen_prime(params.k1, derive_rng(args.seed, "p")))
    accept_true = 0
    accept_perturbed = 0
    for t in range(args.trials):
        rng = derive_rng(args.seed, "test-candidate", t)
        a = tuple(rng.randrange(params.q) for _ in range(params.n))
        b = tuple(rng.randrange(params.q) for _ in range(params.n))
        state, msg1 = p0_round1(a, params, rng, forced=pin)
        msg2 = p1_round2(b, msg1, params, rng)
        _, view = p0_finalize(state, msg2, msg1)
        idx = rng.randrange(params.n)
        delta = rng.randrange(1, params.q)
        perturbed = b[:idx] + ((b[idx] + delta) % params.q,) + b[idx + 1 :]
        accept_true += test_candidate(view, b, args.slack_bits)
        accept_perturbed += test_candidate(view, perturbed, args.slack_bits)
    return accept_true / args.trials, accept_perturbed / args.trials


def cmd_attack(args: argparse.Namespace) -> int:
    variant = Variant.SPOC13 if args.attack == "original" else Variant.TPDS14
    params = _params_from_args(args, variant=variant)
    pair = PairMode(args.pair)
    cfg = TrialConfig(
        base_params=params,
        trials=args.trials,
        seed=args.seed,
        a_mode=VectorMode.RANDOM,
        pair_mode=pair,
    )
    print(f"attack={args.attack} pair={pair.value} trials={args.trials}")
    if args.attack == "test-candidate":
        rate_true, rate_perturbed = _test_candidate_rates(args, params)
        print(f"accept(true b) = {rate_true:.4f}")
        print(f"accept(perturbed b) = {rate_perturbed:.4f}")
    elif args.attack == "original":
        acc = run_original_attack_trials(cfg)
        print(f"accuracy = {acc:.4f}")
    else:
        kind = Attack(args.attack)
        acc = run_attack_trials(cfg, kind)
        print(f"accuracy = {acc:.4f}")
    print("thresholds: " + attack_thresholds(params).as_record())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    lo, hi, step = args.k4_range
    cfg = TrialConfig(base_params=params, trials=args.trials, seed=args.seed)
    rows = sweep_k4(cfg, lo, hi, step, workers=args.workers)
    try:
        with open(args.out, "w", newline="") as fh:
            write_sweep_csv(rows, fh)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} rows to {args.out}")
    print(crossing_summary(rows))
    return 0


def cmd_ot_demo(args: argparse.Namespace) -> int:
    params_ot = ProtocolParams(
        n=2,
        q=2,
        k1=args.k1,
        k2=args.k2,
        k3=args.k3,
        k4=args.k4,
        variant=Variant.TPDS14,
    )
    total = 8 * args.trials
    output_ok = 0
    forbidden_ok = 0
    ambiguous = 0
    for sigma, x0, x1 in product((0, 1), repeat=3):
        for t in range(args.trials):
            seed = derive_seed(args.seed, "ot", sigma, x0, x1, t)
            transcript = ot_from_ppsp(sigma, x0, x1, params_ot, seed)
            output_ok += transcript.output == (x0 if sigma == 0 else x1)
            recovered = break_ot(transcript)
            if recovered is None:
                ambiguous += 1
            else:
                forbidden_ok += recovered[1 - sigma] == (x1 if sigma == 0 else x0)
    print(f"sessions = {total} (8 cases x {args.trials} seeds)")
    print(f"ot output correctness = {output_ok / total:.4f}")
    print(f"forbidden-bit recovery = {forbidden_ok / total:.4f}")
    print(f"ambiguous rate = {ambiguous / total:.4f}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except FramingError as exc:
        print(f"framing error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
