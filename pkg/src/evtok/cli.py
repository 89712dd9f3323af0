"""Command-line front end.

Subcommands: generate, tokenize, voxelize, frames, embed, analyze
(sparsity | accumulate | counts | delay), bench. Durations are given in
milliseconds on the command line and converted to integer microseconds
internally. Exit codes: 0 success, 1 usage error, 2 data error.

Outputs are byte-reproducible for fixed inputs, flags, and seeds (bench
timing lines excepted; its token output is still deterministic).
"""

from __future__ import annotations

import argparse
import sys

from . import analysis, event_io
from .baselines import FrameConfig, VoxelConfig, frame_patches, voxelize
from .embedding import histograms_for_stream, write_histograms
from .errors import EvtokError
from .events import SensorGeometry
from .spiking import TokenizerConfig, tokenize_stream


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ms_to_us(ms: float) -> int:
    return int(round(ms * 1000.0))


def _add_tokenizer_flags(p: _Parser) -> None:
    p.add_argument("--patch-size", type=int, default=16, help="patch side in pixels")
    p.add_argument("--threshold", type=float, default=None,
                   help="spike threshold (default: patch-size squared)")
    p.add_argument("--refractory-ms", type=float, default=0.0,
                   help="absolute refractory period")
    p.add_argument("--variant", choices=["plain", "decay", "discrete"], default="plain")
    p.add_argument("--decay-lambda", type=float, default=0.0,
                   help="potential leak per millisecond (decay variant)")
    p.add_argument("--rrp-ms", type=float, default=0.0,
                   help="relative refractory period")
    p.add_argument("--rrp-alpha", type=float, default=1.0,
                   help="potential gain inside the relative refractory window")
    p.add_argument("--t-max-ms", type=float, default=None,
                   help="discrete variant: prune pending events older than this")


def _tokenizer_config(args) -> TokenizerConfig:
    threshold = args.threshold
    if threshold is None:
        threshold = float(args.patch_size * args.patch_size)
    return TokenizerConfig(
        patch_size=args.patch_size,
        threshold=threshold,
        refractory_us=_ms_to_us(args.refractory_ms),
        rrp_us=_ms_to_us(args.rrp_ms),
        rrp_alpha=args.rrp_alpha,
        decay_per_us=args.decay_lambda / 1000.0,
        t_max_us=None if args.t_max_ms is None else _ms_to_us(args.t_max_ms),
        variant=args.variant,
    )


def _add_input_flags(p: _Parser) -> None:
    p.add_argument("-i", "--input", required=True, help=".evs (or .csv) event file")
    p.add_argument("--width", type=int, default=None, help="sensor width (csv input)")
    p.add_argument("--height", type=int, default=None, help="sensor height (csv input)")


def _load_stream(args, parser: _Parser):
    if args.input.endswith(".csv"):
        if args.width is None or args.height is None:
            parser.error("--width and --height are required for csv input")
        return event_io.read_csv(args.input, SensorGeometry(args.width, args.height))
    return event_io.read_evs(args.input)


def _write_records(path, header, rows) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def _cmd_generate(args, parser) -> int:
    spec = event_io.MovingBarSpec(
        bar_width=args.bar_width, bar_height=args.bar_height,
        velocity_px_s=args.velocity, start_col=args.start_col,
        span_cols=args.span, noise_rate_hz=args.noise_rate, seed=args.seed,
    )
    geo = SensorGeometry(args.width, args.height)
    stream = event_io.generate_moving_bar(spec, geo)
    event_io.write_evs(stream, args.output)
    print(f"events={len(stream)}")
    return 0


def _cmd_tokenize(args, parser) -> int:
    stream = _load_stream(args, parser)
    tokens = tokenize_stream(_tokenizer_config(args), stream)
    event_io.write_tokens_text(tokens, args.output,
                               with_events=args.with_events,
                               with_indices=args.with_indices)
    print(f"tokens={len(tokens)}")
    print(f"captured_events={tokens.total_member_count}")
    return 0


def _cmd_voxelize(args, parser) -> int:
    stream = _load_stream(args, parser)
    cfg = VoxelConfig(args.patch_size, _ms_to_us(args.duration_ms), args.min_events)
    tokens = voxelize(stream, cfg)
    event_io.write_tokens_text(tokens, args.output,
                               with_events=args.with_events,
                               with_indices=args.with_indices)
    print(f"tokens={len(tokens)}")
    return 0


def _cmd_frames(args, parser) -> int:
    stream = _load_stream(args, parser)
    cfg = FrameConfig(args.patch_size, _ms_to_us(args.duration_ms))
    t0 = None if args.t0_ms is None else _ms_to_us(args.t0_ms)
    t1 = None if args.t1_ms is None else _ms_to_us(args.t1_ms)
    tokens = frame_patches(stream, cfg, t0=t0, t1=t1)
    event_io.write_tokens_text(tokens, args.output,
                               with_events=args.with_events,
                               with_indices=args.with_indices)
    print(f"tokens={len(tokens)}")
    return 0


def _cmd_embed(args, parser) -> int:
    stream = _load_stream(args, parser)
    tokens = tokenize_stream(_tokenizer_config(args), stream)
    hists = histograms_for_stream(tokens)
    write_histograms(args.output, hists)
    print(f"tokens={len(tokens)}")
    print(f"histogram_total={int(hists.sum())}")
    return 0


def _representation(args, parser, stream):
    rep = args.rep
    if rep == "events":
        return stream
    if rep == "spiking":
        return tokenize_stream(_tokenizer_config(args), stream)
    if rep == "voxel":
        return voxelize(stream, VoxelConfig(
            args.patch_size, _ms_to_us(args.duration_ms), args.min_events))
    if rep == "frames":
        return frame_patches(stream, FrameConfig(
            args.patch_size, _ms_to_us(args.duration_ms)))
    parser.error(f"unknown representation {rep!r}")


def _cmd_analyze(args, parser) -> int:
    stream = _load_stream(args, parser)
    window_us = _ms_to_us(args.window_ms)

    if args.what == "sparsity":
        rep = _representation(args, parser, stream)
        if rep is stream:
            report = analysis.sparsity(stream, window_us=window_us)
            print(f"windows={len(report.per_window)}")
            print(f"mean_sparsity_pct={report.mean:.6f}")
            rows = [(i, report.per_window[i]) for i in range(len(report.per_window))]
            if args.output:
                _write_records(args.output, "window,sparsity_pct",
                               [(i, f"{v:.6f}") for i, v in rows])
        else:
            cmp = analysis.compare_sparsity(stream, rep, window_us=window_us)
            print(f"windows={len(cmp.tokens.per_window)}")
            print(f"mean_sparsity_events_pct={cmp.events.mean:.6f}")
            print(f"mean_sparsity_tokens_pct={cmp.tokens.mean:.6f}")
            print(f"mean_difference_pct={cmp.mean_difference:.6f}")
            if args.output:
                n = max(len(cmp.events.per_window), len(cmp.tokens.per_window))
                def _cell(rep_arr, i):
                    return f"{rep_arr[i]:.6f}" if i < len(rep_arr) else ""
                _write_records(args.output, "window,sparsity_events_pct,sparsity_tokens_pct",
                               [(i, _cell(cmp.events.per_window, i), _cell(cmp.tokens.per_window, i))
                                for i in range(n)])
        return 0

    if args.what == "accumulate":
        rep = _representation(args, parser, stream)
        curve = analysis.accumulation_curve(rep)
        print(f"points={len(curve.times)}")
        print(f"total={curve.total}")
        if args.output:
            _write_records(args.output, "t_us,cumulative",
                           zip(curve.times.tolist(), curve.counts.tolist()))
        return 0

    if args.what == "counts":
        rep = _representation(args, parser, stream)
        if rep is stream:
            parser.error("counts needs a tokenizer representation, not events")
        report = analysis.token_count_stats(rep, window_us)
        print(f"windows={len(report.per_window)}")
        print(f"mean_tokens_per_window={report.mean:.6f}")
        if args.output:
            _write_records(args.output, "window,tokens",
                           enumerate(report.per_window.tolist()))
        return 0

    if args.what == "delay":
        tokens = tokenize_stream(_tokenizer_config(args), stream)
        ev_curve = analysis.accumulation_curve(stream)
        tok_curve = analysis.accumulation_curve(tokens)
        delay = analysis.delay_estimate(ev_curve, tok_curve)
        print(f"delay_us={delay:.6f}")
        print(f"delay_ms={delay / 1000.0:.6f}")
        return 0

    parser.error(f"unknown analysis {args.what!r}")


def _cmd_bench(args, parser) -> int:
    stream = _load_stream(args, parser)
    if args.rep == "voxel":
        config = VoxelConfig(args.patch_size, _ms_to_us(args.duration_ms), args.min_events)
    else:
        config = _tokenizer_config(args)
    report = analysis.bench_throughput(stream, config, repeats=args.repeats)
    print(f"events={report.events}")
    print(f"tokens={report.tokens}")
    print(f"repeats={report.repeats}")
    print(f"wall_s={report.wall_s:.6f}")
    print(f"events_per_sec={report.events_per_sec:.1f}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="evtok",
                     description="Event-camera tokenization and stream analysis")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a synthetic moving-bar .evs stream")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--width", type=int, default=304)
    p.add_argument("--height", type=int, default=240)
    p.add_argument("--bar-width", type=int, default=2)
    p.add_argument("--bar-height", type=int, default=64)
    p.add_argument("--velocity", type=float, default=1000.0, help="pixels per second")
    p.add_argument("--start-col", type=int, default=0)
    p.add_argument("--span", type=int, default=128, help="columns traversed")
    p.add_argument("--noise-rate", type=float, default=0.0, help="background events/s")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("tokenize", help="spiking-patch tokenization to token text")
    _add_input_flags(p)
    p.add_argument("-o", "--output", required=True)
    _add_tokenizer_flags(p)
    p.add_argument("--with-events", action="store_true",
                   help="append member events to each token row")
    p.add_argument("--with-indices", action="store_true",
                   help="append member input indices to each token row")
    p.set_defaults(fn=_cmd_tokenize)

    p = sub.add_parser("voxelize", help="fixed-duration voxel tokenization")
    _add_input_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--patch-size", type=int, default=16)
    p.add_argument("--duration-ms", type=float, default=50.0)
    p.add_argument("--min-events", type=int, default=1)
    p.add_argument("--with-events", action="store_true")
    p.add_argument("--with-indices", action="store_true")
    p.set_defaults(fn=_cmd_voxelize)

    p = sub.add_parser("frames", help="dense per-window frame patches")
    _add_input_flags(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--patch-size", type=int, default=16)
    p.add_argument("--duration-ms", type=float, default=50.0)
    p.add_argument("--t0-ms", type=float, default=None)
    p.add_argument("--t1-ms", type=float, default=None)
    p.add_argument("--with-events", action="store_true")
    p.add_argument("--with-indices", action="store_true")
    p.set_defaults(fn=_cmd_frames)

    p = sub.add_parser("embed", help="tokenize and export stacked histograms")
    _add_input_flags(p)
    p.add_argument("-o", "--output", required=True)
    _add_tokenizer_flags(p)
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("analyze", help="sparsity / accumulation / counts / delay")
    p.add_argument("what", choices=["sparsity", "accumulate", "counts", "delay"])
    _add_input_flags(p)
    p.add_argument("-o", "--output", default=None, help="per-window records csv")
    p.add_argument("--rep", choices=["events", "spiking", "voxel", "frames"],
                   default="spiking")
    p.add_argument("--window-ms", type=float, default=50.0)
    p.add_argument("--duration-ms", type=float, default=50.0,
                   help="voxel/frame window duration")
    p.add_argument("--min-events", type=int, default=1, help="voxel threshold")
    _add_tokenizer_flags(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("bench", help="tokenization throughput")
    _add_input_flags(p)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--rep", choices=["spiking", "voxel"], default="spiking")
    p.add_argument("--duration-ms", type=float, default=50.0)
    p.add_argument("--min-events", type=int, default=1)
    _add_tokenizer_flags(p)
    p.set_defaults(fn=_cmd_bench)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, parser)
    except SystemExit as exc:  # parser.error inside a command
        return int(exc.code or 0)
    except (EvtokError, OSError) as exc:
        print(f"evtok: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
