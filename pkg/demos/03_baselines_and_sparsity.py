"""Spatial sparsity: spiking patches versus voxel and frame baselines.

Sparsity is the percentage of grid cells holding zero tokens within a
50 ms window (for raw events: pixels with zero events). Frames are dense
by construction; voxels lose sparsity at low thresholds; spiking patches
track the event-level sparsity once the threshold is high enough.
"""

import evtok as ev

geo = ev.SensorGeometry(304, 240)
spec = ev.PoissonFieldSpec(cell_size=16, active_cells=60,
                           total_rate_hz=400_000.0, duration_us=1_000_000,
                           seed=11)
stream = ev.generate_poisson_field(spec, geo)
W = 50_000

ev_sparsity = ev.sparsity(stream, window_us=W).mean
print(f"events:   sparsity = {ev_sparsity:6.2f}%  (pixels without events)")

frames = ev.frame_patches(stream, ev.FrameConfig(16, W))
print(f"frames:   sparsity = {ev.sparsity(frames, window_us=W).mean:6.2f}%  "
      "(dense: every cell gets a token)")

print("\nvoxels (50 ms bins) at increasing min-event thresholds:")
for m in (1, 10, 100):
    vox = ev.voxelize(stream, ev.VoxelConfig(16, W, m))
    rep = ev.sparsity(vox, window_us=W)
    print(f"  min_events = {m:3d}: sparsity = {rep.mean:6.2f}%  "
          f"(difference vs events: {ev_sparsity - rep.mean:+6.2f}%)")

print("\nspiking patches at increasing thresholds:")
for sigma in (50, 250, 500):
    tokens = ev.tokenize_stream(ev.TokenizerConfig(16, float(sigma)), stream)
    rep = ev.sparsity(tokens, window_us=W)
    print(f"  sigma = {sigma:3d}: sparsity = {rep.mean:6.2f}%  "
          f"(difference vs events: {ev_sparsity - rep.mean:+6.2f}%)")

print("\ninput sizes (mean items per 50 ms window):")
print(f"  events: {len(stream) / (1_000_000 / W):8.1f}")
print(f"  frames: {ev.token_count_stats(frames, W).mean:8.1f}")
vox1 = ev.voxelize(stream, ev.VoxelConfig(16, W, 1))
print(f"  voxels: {ev.token_count_stats(vox1, W).mean:8.1f}")
sp = ev.tokenize_stream(ev.TokenizerConfig(16, 250.0), stream)
print(f"  tokens: {ev.token_count_stats(sp, W).mean:8.1f}   (sigma = 250)")
