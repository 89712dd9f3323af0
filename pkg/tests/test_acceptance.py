"""Acceptance suite: one test per top-level criterion, each printing a
[PASS] line with its measured numbers (run with -s or check captured
output). Tolerances are fixed here, not tuned elsewhere.

Run: pytest tests/test_acceptance.py -v
"""

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from evtok import (
    Event,
    FrameConfig,
    PoissonFieldSpec,
    SensorGeometry,
    TokenizerConfig,
    VoxelConfig,
    accumulation_curve,
    delay_estimate,
    frame_patches,
    from_arrays,
    generate_poisson_field,
    grid_shape,
    histograms_for_stream,
    read_csv,
    read_evs,
    sparsity,
    time_bucket,
    token_count_stats,
    tokenize_stream,
    validate_stream,
    voxelize,
    write_csv,
    write_evs,
)

from conftest import bursty_stream, random_stream
from oracle import chunk_boundaries

MS = 1000
GEO_AUTO = SensorGeometry(304, 240)


def _ok(name, detail=""):
    print(f"[PASS] {name}" + (f" :: {detail}" if detail else ""))


# ----------------------------------------------------------------------
def test_fig2_replay():
    """4-event spike, 3 refractory-discarded events, second 4-event spike."""
    times = [0, 1 * MS, 2 * MS, 3 * MS, 5 * MS, 7 * MS, 9 * MS,
             14 * MS, 15 * MS, 16 * MS, 17 * MS]
    stream = validate_stream([Event(4, 4, t, 1) for t in times],
                             SensorGeometry(64, 64))
    cfg = TokenizerConfig(patch_size=16, threshold=4.0, refractory_us=10 * MS)
    tokens = tokenize_stream(cfg, stream)
    assert len(tokens) == 2
    assert list(tokens.members_of(0)) == [0, 1, 2, 3]
    assert list(tokens.members_of(1)) == [7, 8, 9, 10]
    assert int(tokens.t_spike[0]) == 3 * MS
    assert int(tokens.t_spike[1]) == 17 * MS
    assert set(tokens.member_idx.tolist()).isdisjoint({4, 5, 6})
    _ok("Fig-2 replay", "tokens {e1..e4}, {e8..e11}; e5..e7 dropped")


# ----------------------------------------------------------------------
def test_brute_force_oracle_100_seeds():
    """plain, T=0, integer sigma in {1,2,5,25,250}, 100 seeded random
    streams of 1e5 events: token boundaries equal per-patch chunking."""
    sigmas = (1, 2, 5, 25, 250)
    n_seeds = 100
    for seed in range(n_seeds):
        stream = random_stream(seed, n=100_000, width=128, height=128,
                               max_t=2_000_000)
        for sigma in sigmas:
            got = tokenize_stream(TokenizerConfig(16, float(sigma)), stream)
            want = chunk_boundaries(stream, 16, sigma)
            assert len(got) == len(want)
            w_t = np.asarray([w[0] for w in want], dtype=np.int64)
            w_py = np.asarray([w[1] for w in want], dtype=np.int64)
            w_px = np.asarray([w[2] for w in want], dtype=np.int64)
            assert np.array_equal(got.t_spike, w_t)
            assert np.array_equal(got.patch_y, w_py)
            assert np.array_equal(got.patch_x, w_px)
            if len(want):
                w_members = np.concatenate([np.asarray(w[3], dtype=np.int64)
                                            for w in want])
                assert np.array_equal(got.member_idx, w_members)
    _ok("brute-force oracle", f"{n_seeds} seeds x 1e5 events x sigma {sigmas}")


# ----------------------------------------------------------------------
def test_reduction_identities_100_seeds():
    n_seeds = 100
    for seed in range(n_seeds):
        stream = (random_stream(seed, n=20_000, max_t=400_000)
                  if seed % 2 == 0 else bursty_stream(seed, n=20_000))
        plain = tokenize_stream(TokenizerConfig(16, 5.0), stream)
        # lambda = 0 decay == plain
        assert plain == tokenize_stream(
            TokenizerConfig(16, 5.0, variant="decay", decay_per_us=0.0), stream)
        # t_max = infinity discrete == plain boundaries
        assert plain == tokenize_stream(
            TokenizerConfig(16, 5.0, variant="discrete", t_max_us=None), stream)
        # alpha = 1 RRP == no RRP
        arp = tokenize_stream(TokenizerConfig(16, 5.0, refractory_us=4 * MS),
                              stream)
        assert arp == tokenize_stream(
            TokenizerConfig(16, 5.0, refractory_us=4 * MS, rrp_us=10 * MS,
                            rrp_alpha=1.0), stream)
        # alpha = 0 RRP spike times == ARP(T + T_rel) spike times
        rrp0 = tokenize_stream(
            TokenizerConfig(16, 5.0, refractory_us=4 * MS, rrp_us=10 * MS,
                            rrp_alpha=0.0), stream)
        arp_long = tokenize_stream(
            TokenizerConfig(16, 5.0, refractory_us=14 * MS), stream)
        assert np.array_equal(rrp0.t_spike, arp_long.t_spike)
        assert np.array_equal(rrp0.patch_x, arp_long.patch_x)
        assert np.array_equal(rrp0.patch_y, arp_long.patch_y)
        for i in range(len(rrp0)):
            a = list(rrp0.members_of(i))
            b = list(arp_long.members_of(i))
            assert a[len(a) - len(b):] == b  # RRP keeps the window events too
    _ok("reduction identities",
        f"lambda=0, alpha=1, t_max=inf, alpha=0 bit-exact on {n_seeds} seeds")


# ----------------------------------------------------------------------
def test_monotonicity_zero_violations():
    sigmas = (1, 2, 5, 25, 250)
    refractories = (0, 5 * MS, 25 * MS, 100 * MS)
    min_events = (1, 2, 4, 8)
    streams = [random_stream(s, n=30_000, max_t=600_000) for s in range(10)]
    streams += [bursty_stream(s, n=30_000) for s in range(10)]
    for stream in streams:
        counts = [len(tokenize_stream(TokenizerConfig(16, float(s)), stream))
                  for s in sigmas]
        assert counts == sorted(counts, reverse=True)
        counts_T = [len(tokenize_stream(
            TokenizerConfig(16, 5.0, refractory_us=T), stream))
            for T in refractories]
        assert counts_T == sorted(counts_T, reverse=True)
        sp = [sparsity(tokenize_stream(TokenizerConfig(16, float(s)), stream),
                       window_us=50 * MS).mean for s in sigmas]
        assert sp == sorted(sp)
        spv = [sparsity(voxelize(stream, VoxelConfig(16, 50 * MS, m)),
                        window_us=50 * MS).mean for m in min_events]
        assert spv == sorted(spv)
    _ok("monotonicity", f"{len(streams)} streams, zero violations")


# ----------------------------------------------------------------------
def test_refractory_size_anchor_synthetic():
    """GEN1-like Poisson patch activity (~36k events / 50 ms on 304x240):
    mean tokens per 50 ms at sigma=250 falls 3x-5x from T=0 to T=100ms."""
    spec = PoissonFieldSpec(cell_size=16, active_cells=100,
                            total_rate_hz=720_000.0, duration_us=2_000_000,
                            seed=0)
    stream = generate_poisson_field(spec, GEO_AUTO)
    per_window = len(stream) / (spec.duration_us / 50_000)
    assert 30_000 < per_window < 42_000  # ~36k events per 50 ms
    mean_t0 = token_count_stats(
        tokenize_stream(TokenizerConfig(16, 250.0), stream), 50 * MS).mean
    mean_t100 = token_count_stats(
        tokenize_stream(TokenizerConfig(16, 250.0, refractory_us=100 * MS),
                        stream), 50 * MS).mean
    ratio = mean_t0 / mean_t100
    assert 3.0 <= ratio <= 5.0
    _ok("refractory size anchor",
        f"{per_window:.0f} ev/50ms; tokens/50ms {mean_t0:.1f} -> {mean_t100:.1f} "
        f"(x{ratio:.2f} reduction in [3, 5])")


@pytest.mark.skipif("EVTOK_GEN1_EVS" not in os.environ,
                    reason="set EVTOK_GEN1_EVS to converted GEN1 data to enable")
def test_refractory_size_anchor_gen1():
    """User-supplied GEN1 data: reproduce 143/64/46/32 tokens per 50 ms
    within +-10% (sigma=250, P=16, T in {0,25,50,100} ms)."""
    stream = read_evs(os.environ["EVTOK_GEN1_EVS"])
    expected = {0: 143.0, 25: 64.0, 50: 46.0, 100: 32.0}
    for T_ms, want in expected.items():
        mean = token_count_stats(
            tokenize_stream(TokenizerConfig(16, 250.0, refractory_us=T_ms * MS),
                            stream), 50 * MS).mean
        assert abs(mean - want) <= 0.10 * want
    _ok("refractory size anchor (GEN1)", "143/64/46/32 within 10%")


# ----------------------------------------------------------------------
def test_sparsity_exactness():
    gw, gh = grid_shape(GEO_AUTO, 16)
    assert gw * gh == 285
    for seed in range(5):
        stream = random_stream(seed, n=5000, width=304, height=240,
                               max_t=400_000)
        frames = frame_patches(stream, FrameConfig(16, 50 * MS))
        report = sparsity(frames, window_us=50 * MS)
        assert report.mean == 0.0
        assert (report.per_window == 0.0).all()
    _ok("sparsity exactness", "frames 0% on all inputs; 304x240/P16 grid = 285")


# ----------------------------------------------------------------------
def test_histogram_conservation_and_bucket_table():
    total_tokens = 0
    for seed in range(4):
        stream = bursty_stream(seed, n=40_000)
        tokens = tokenize_stream(TokenizerConfig(16, 10.0), stream)
        hists = histograms_for_stream(tokens)
        assert np.array_equal(hists.sum(axis=(1, 2, 3)), tokens.counts)
        assert int(hists.sum()) == tokens.total_member_count
        total_tokens += len(tokens)
    assert total_tokens >= 10_000
    edges = [1, 2, 4, 8, 16, 32, 64, 128, 256]
    for i, edge in enumerate(edges):
        assert time_bucket(edge - 0.001) == i
        assert time_bucket(float(edge)) == i + 1
    assert time_bucket(0.0) == 0
    _ok("histogram conservation + bucket table",
        f"{total_tokens} random tokens conserved; all boundary values exact")


# ----------------------------------------------------------------------
def test_throughput_and_linearity():
    """plain >= 5M events/s; every tested config >= 1.4M events/s (2x the
    0.7M events/s arrival rate); t(2N) <= 2.5 * t(N)."""
    spec = PoissonFieldSpec(16, 100, 720_000.0, 5_600_000, seed=1)
    stream = generate_poisson_field(spec, GEO_AUTO)
    half = stream.slice(0, 2_000_000)
    full = stream.slice(0, 4_000_000)
    t_start = time.perf_counter()

    def best_of(cfg, data, repeats=5):
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            tokenize_stream(cfg, data) if isinstance(cfg, TokenizerConfig) \
                else voxelize(data, cfg)
            best = min(best, time.perf_counter() - t0)
        return len(data) / best

    plain_rate = best_of(TokenizerConfig(16, 256.0), half)
    assert plain_rate >= 5e6
    rates = {"plain T=0": plain_rate}
    for name, cfg in [
        ("plain T=100ms", TokenizerConfig(16, 250.0, refractory_us=100 * MS)),
        ("decay", TokenizerConfig(16, 250.0, variant="decay",
                                  decay_per_us=2 ** -14)),
        ("discrete", TokenizerConfig(16, 250.0, variant="discrete",
                                     t_max_us=250 * MS)),
        ("voxel", VoxelConfig(16, 50 * MS, 1)),
    ]:
        rates[name] = best_of(cfg, half, repeats=3)
    assert all(r >= 1.4e6 for r in rates.values()), rates

    # linearity: paired back-to-back runs share ambient host noise; the
    # median of per-pair ratios is the scaling estimate, re-measured up to
    # three times in case a noise burst spans a whole round
    cfg = TokenizerConfig(16, 256.0)
    tokenize_stream(cfg, full)  # warm
    ratio = np.inf
    for _ in range(3):
        pair_ratios = []
        for _ in range(9):
            t0 = time.perf_counter(); tokenize_stream(cfg, half)
            t1 = time.perf_counter(); tokenize_stream(cfg, full)
            t2 = time.perf_counter()
            pair_ratios.append((t2 - t1) / (t1 - t0))
        ratio = min(ratio, float(np.median(pair_ratios)))
        if ratio <= 2.3:
            break
    assert ratio <= 2.5
    elapsed = time.perf_counter() - t_start
    assert elapsed < 60.0
    _ok("throughput + linearity",
        "; ".join(f"{k} {v / 1e6:.1f}M ev/s" for k, v in rates.items())
        + f"; t(2N)/t(N)={ratio:.2f}; bench took {elapsed:.1f}s")


# ----------------------------------------------------------------------
def test_cli_determinism_and_round_trips(tmp_path):
    env = dict(os.environ, PYTHONHASHSEED="0")

    def cli(*args):
        proc = subprocess.run([sys.executable, "-m", "evtok.cli", *args],
                              capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        return proc.stdout

    src = tmp_path / "in.evs"
    cli("generate", "-o", str(src), "--width", "128", "--height", "96",
        "--bar-height", "32", "--span", "64", "--noise-rate", "40000",
        "--seed", "11")
    commands = [
        ("generate", ["generate", "--width", "128", "--height", "96",
                      "--bar-height", "32", "--span", "64",
                      "--noise-rate", "40000", "--seed", "11"]),
        ("tokenize", ["tokenize", "-i", str(src), "--threshold", "64",
                      "--refractory-ms", "5", "--with-events"]),
        ("voxelize", ["voxelize", "-i", str(src), "--duration-ms", "20"]),
        ("frames", ["frames", "-i", str(src), "--duration-ms", "25"]),
        ("embed", ["embed", "-i", str(src), "--threshold", "32"]),
        ("analyze", ["analyze", "sparsity", "-i", str(src),
                     "--rep", "spiking", "--threshold", "64"]),
    ]
    for name, argv in commands:
        a, b = tmp_path / f"{name}.a", tmp_path / f"{name}.b"
        out1 = cli(*argv, "-o", str(a))
        out2 = cli(*argv, "-o", str(b))
        assert out1 == out2, name
        assert a.read_bytes() == b.read_bytes(), name

    stream = read_evs(src)
    evs2 = tmp_path / "roundtrip.evs"
    write_evs(stream, evs2)
    assert read_evs(evs2) == stream
    assert evs2.read_bytes() == src.read_bytes()
    csv = tmp_path / "roundtrip.csv"
    write_csv(stream, csv)
    assert read_csv(csv, stream.geometry) == stream
    _ok("determinism", "CLI byte-reproducible; .evs and CSV round-trip identity")


# ----------------------------------------------------------------------
def test_delay_property():
    geo = SensorGeometry(32, 32)
    n = 3000
    t = np.arange(n, dtype=np.int64) * MS  # 1 event per ms, single patch
    stream = from_arrays(np.full(n, 3), np.full(n, 3), t,
                         np.ones(n, dtype=np.int64), geo)
    ev_curve = accumulation_curve(stream)
    delays = {}
    for sigma in (1, 10, 50, 150):
        tokens = tokenize_stream(TokenizerConfig(16, float(sigma)), stream)
        delays[sigma] = delay_estimate(ev_curve, accumulation_curve(tokens))
    assert abs(delays[10] - 4.5 * MS) <= 0.5 * MS
    ordered = [delays[s] for s in (1, 10, 50, 150)]
    assert ordered == sorted(ordered)
    _ok("delay property",
        "; ".join(f"sigma={s}: {d / 1000:.2f}ms" for s, d in delays.items()))
