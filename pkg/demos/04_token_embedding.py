"""From token to model input: the stacked-histogram representation.

Every member event of a token lands in a (row, col, time-bucket, polarity)
cell; the ten time buckets double in width (first millisecond, [1,2) ms,
[2,4) ms, ... more than 256 ms before the spike). Flattening time and
polarity gives a P x P x 20 patch, log(x+1) tames the count scale, and a
divisor on the time axis brings spike times to unit scale for models.
"""

import numpy as np

import evtok as ev

geo = ev.SensorGeometry(64, 64)
spec = ev.MovingBarSpec(bar_width=3, bar_height=32, velocity_px_s=300.0,
                        span_cols=48, noise_rate_hz=30_000.0, seed=2)
stream = ev.generate_moving_bar(spec, geo)
tokens = ev.tokenize_stream(ev.TokenizerConfig(16, 200.0), stream)
print(f"{len(stream)} events -> {len(tokens)} tokens")

tok = tokens.token(len(tokens) // 2)
print(f"\nexample token: patch ({tok.patch_x},{tok.patch_y}), "
      f"{tok.n_events} events, spike at {tok.t_spike / 1000:.2f} ms")

hist = ev.stacked_histogram(tok, 16)
print(f"histogram shape {hist.counts.shape}, total = {hist.total} "
      f"(= member count: {hist.total == tok.n_events})")

per_bucket = hist.counts.sum(axis=(0, 1, 3))
labels = ["<1", "1-2", "2-4", "4-8", "8-16", "16-32", "32-64", "64-128",
          "128-256", ">=256"]
print("\nevents by elapsed time before the spike (ms):")
for label, count in zip(labels, per_bucket):
    if count:
        print(f"  {label:>8} ms: {'#' * min(int(count), 60)} {count}")

flat = hist.flat
print(f"\nflattened view: {flat.shape} (channel = 2*bucket + polarity)")
embedded = ev.embed_log(hist)
print(f"log(x+1) range: [{embedded.min():.3f}, {embedded.max():.3f}] "
      f"(raw counts reach {int(flat.max())})")

print("\ntemporal scaling for model families (t / s):")
for family, s in (("graph nets", 25_000.0), ("point nets", 10_000.0),
                  ("attention", 50_000.0)):
    print(f"  {family:>10}: spike at {ev.scale_time(tok.t_spike, s):.3f} "
          f"scaled units (s = {s:,.0f})")

# whole-stream embedding is one call and conserves every event
hists = ev.histograms_for_stream(tokens)
print(f"\nbatch embedding: {hists.shape}, "
      f"total counts = {int(hists.sum())} = captured events "
      f"({int(hists.sum()) == tokens.total_member_count})")
