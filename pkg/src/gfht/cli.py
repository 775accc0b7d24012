"""Command-line entry point: ``gfht encrypt|decrypt|analyze``.

Exit status: 0 success, 2 invalid arguments or input data, 3 I/O failure,
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import os
import sys

from .cipher import CipherEnvelope, decrypt, encrypt_image
from .eigen import ConvergenceError
from .image_io import load_image, save_image
from .keys import DEFAULT_ROUNDS
from .report import AnalysisConfig, emit_reference_rows, run_analysis, summary_lines, write_csvs

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _rounds(text):
    value = _positive(text)
    if value > 255:
        raise argparse.ArgumentTypeError("rounds must be at most 255")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gfht", description="GFHT image cipher and randomness battery")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    enc = sub.add_parser("encrypt", help="encrypt an image into an envelope file")
    enc.add_argument("--in", dest="input", required=True, help="PPM or PNG image")
    enc.add_argument("--out", required=True, help="envelope file to write")
    enc.add_argument("--passphrase", required=True)
    enc.add_argument("--rounds", type=_rounds, default=DEFAULT_ROUNDS)

    dec = sub.add_parser("decrypt", help="decrypt an envelope file into an image")
    dec.add_argument("--in", dest="input", required=True, help="envelope file")
    dec.add_argument("--out", required=True, help="image to write (.png for PNG, otherwise PPM)")
    dec.add_argument("--passphrase", required=True)

    ana = sub.add_parser("analyze", help="run the randomness battery on a plaintext image")
    ana.add_argument("--in", dest="input", required=True)
    ana.add_argument("--passphrase", required=True)
    ana.add_argument("--trials", type=_positive, default=100)
    ana.add_argument("--window", type=_positive, default=600)
    ana.add_argument("--overlap", type=float, default=0.5)
    ana.add_argument("--bins", type=_positive, default=10)
    ana.add_argument("--alpha", type=float, default=0.01)
    ana.add_argument("--dof-mode", choices=("fixed", "dynamic"), default="fixed")
    ana.add_argument("--segment", type=_positive, default=1024)
    ana.add_argument("--psd-window", choices=("rectangular", "hann", "hamming"), default="rectangular")
    ana.add_argument("--rounds", type=_rounds, default=DEFAULT_ROUNDS)
    ana.add_argument("--seed", type=int, default=0, help="seed for avalanche pixel choice and noise baseline")
    ana.add_argument("--rmt-max-dim", type=_positive, default=512)
    ana.add_argument("--id", dest="image_id", default=None)
    ana.add_argument("--report", default=None, help="write the JSON report here")
    ana.add_argument("--plots", default=None, help="directory for CSV plot data")
    return parser


def cmd_encrypt(args) -> int:
    image = load_image(args.input)
    env = encrypt_image(image, args.passphrase, args.rounds)
    with open(args.out, "wb") as fh:
        fh.write(env.to_bytes())
    print(env.salt.hex())
    return EXIT_OK


def cmd_decrypt(args) -> int:
    with open(args.input, "rb") as fh:
        env = CipherEnvelope.from_bytes(fh.read())
    save_image(decrypt(env, args.passphrase), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    image = load_image(args.input)
    config = AnalysisConfig(
        trials=args.trials,
        window=args.window,
        overlap=args.overlap,
        bins=args.bins,
        alpha=args.alpha,
        dof_mode=args.dof_mode,
        segment=args.segment,
        psd_window=args.psd_window,
        rounds=args.rounds,
        seed=args.seed,
        rmt_max_dim=args.rmt_max_dim,
    )
    image_id = args.image_id or os.path.splitext(os.path.basename(args.input))[0]
    report = run_analysis(image, args.passphrase, config, image_id)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if args.plots:
        write_csvs(report, args.plots)
    print("\n".join(summary_lines(report)))
    print()
    print(emit_reference_rows(report), end="")
    return EXIT_OK


_COMMANDS = {"encrypt": cmd_encrypt, "decrypt": cmd_decrypt, "analyze": cmd_analyze}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"gfht: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:  # includes ImageFormatError and EnvelopeError
        print(f"gfht: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"gfht: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
