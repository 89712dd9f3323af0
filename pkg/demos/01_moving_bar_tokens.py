"""A first look: synthesize a moving-bar event stream and tokenize it.

A vertical bar sweeps across the sensor; every pixel it enters fires a
+1 event, every pixel it leaves fires a -1 event. Each 16x16 patch of the
sensor integrates its incoming events into a potential and emits a token
whenever the potential crosses the threshold.
"""

import evtok as ev

geo = ev.SensorGeometry(128, 96)
spec = ev.MovingBarSpec(bar_width=2, bar_height=48, velocity_px_s=2000.0,
                        start_col=0, span_cols=96, noise_rate_hz=20_000.0,
                        seed=7)
stream = ev.generate_moving_bar(spec, geo)
print(f"stream: {len(stream)} events over "
      f"{stream.span[1] / 1000:.1f} ms on a {geo.width}x{geo.height} sensor")

cfg = ev.TokenizerConfig(patch_size=16, threshold=64.0)
tokens = ev.tokenize_stream(cfg, stream)
print(f"tokenized: {len(tokens)} tokens capture "
      f"{tokens.total_member_count}/{len(stream)} events")

print("\nfirst five tokens (patch, spike time, group size):")
for i in range(min(5, len(tokens))):
    tok = tokens.token(i)
    print(f"  patch ({tok.patch_x:2d},{tok.patch_y:2d})  "
          f"t = {tok.t_spike / 1000:7.2f} ms  |group| = {tok.n_events}")

# the streaming interface produces the same tokens one push at a time
tk = ev.new_tokenizer(cfg, geo)
live = [tok for e in stream if (tok := tk.push(e)) is not None]
print(f"\nstreaming fold emits {len(live)} tokens (same as batch: "
      f"{len(live) == len(tokens)})")

residue = tk.finalize()
print(f"residue after the stream: {residue.total_pending} events pending in "
      f"{len(residue.per_patch)} patches (these never became tokens)")
