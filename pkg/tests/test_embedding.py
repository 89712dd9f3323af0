import math

import numpy as np
import pytest

from evtok import (
    Event,
    EventOutsidePatch,
    NegativeDelta,
    SensorGeometry,
    Token,
    TokenizerConfig,
    ZeroScale,
    embed_log,
    histograms_for_stream,
    read_histograms,
    scale_time,
    stacked_histogram,
    time_bucket,
    tokenize_stream,
    write_histograms,
)

from conftest import random_stream

MS = 1000


def test_bucket_examples():
    assert time_bucket(0.5) == 0
    assert time_bucket(3.0) == 2
    assert time_bucket(600.0) == 9


def test_bucket_boundaries_exact():
    edges = [1, 2, 4, 8, 16, 32, 64, 128, 256]
    for i, edge in enumerate(edges):
        assert time_bucket(edge - 0.001) == i
        assert time_bucket(float(edge)) == i + 1
    assert time_bucket(0.0) == 0
    assert time_bucket(1e9) == 9


def test_bucket_negative_delta():
    with pytest.raises(NegativeDelta):
        time_bucket(-0.1)


def test_histogram_singleton_at_origin():
    tok = Token(0, 0, 100, (Event(0, 0, 100, 1),))
    hist = stacked_histogram(tok, 16)
    assert hist.total == 1
    assert hist.counts[0, 0, 0, 1] == 1
    assert hist.flat[0, 0, 1] == 1  # channel = 2*bucket + polarity


def test_histogram_two_events_same_pixel():
    tok = Token(0, 0, 3 * MS, (
        Event(2, 5, int(2.8 * MS), -1),  # 0.2 ms before the spike -> bucket 0
        Event(2, 5, 0, -1),              # 3 ms before -> bucket 2
    ))
    hist = stacked_histogram(tok, 16)
    assert hist.counts[5, 2, 0, 0] == 1
    assert hist.counts[5, 2, 2, 0] == 1
    assert hist.total == 2


def test_histogram_rejects_outside_patch():
    tok = Token(0, 0, 10, (Event(20, 0, 10, 1),))
    with pytest.raises(EventOutsidePatch):
        stacked_histogram(tok, 16)


def test_histogram_conservation_random_tokens():
    stream = random_stream(13, n=5000)
    tokens = tokenize_stream(TokenizerConfig(16, 10.0), stream)
    hists = histograms_for_stream(tokens)
    assert hists.shape == (len(tokens), 16, 16, 20)
    assert int(hists.sum()) == tokens.total_member_count
    assert np.array_equal(hists.sum(axis=(1, 2, 3)), tokens.counts)
    # per-token path agrees with the batched path
    for i in range(0, len(tokens), 17):
        single = stacked_histogram(tokens.token(i), 16)
        assert np.array_equal(single.flat, hists[i])


def test_histogram_shift_invariance():
    evs = [Event(1, 1, 0, 1), Event(2, 2, 5 * MS, -1), Event(3, 3, 7 * MS, 1)]
    tok = Token(0, 0, 7 * MS, tuple(evs))
    shifted = Token(0, 0, 7 * MS + 123456,
                    tuple(Event(e.x, e.y, e.t + 123456, e.p) for e in evs))
    a = stacked_histogram(tok, 16)
    b = stacked_histogram(shifted, 16)
    assert np.array_equal(a.counts, b.counts)


def test_embed_log_values():
    tok = Token(0, 0, 0, (Event(0, 0, 0, 1),))
    hist = stacked_histogram(tok, 4)
    out = embed_log(hist)
    assert out.shape == (4, 4, 20)
    assert out[0, 0, 1] == pytest.approx(math.log(2.0))
    assert out.sum() == pytest.approx(math.log(2.0))
    zero = np.zeros((4, 4, 20), dtype=np.int64)
    assert not embed_log(zero).any()
    # log(x + 1) identity: a count of e - 1 maps to exactly 1
    arr = np.full((1, 1, 1), math.e - 1.0)
    assert embed_log(arr)[0, 0, 0] == pytest.approx(1.0, abs=1e-12)


def test_embed_log_monotone_per_cell():
    a = embed_log(np.asarray([[0, 1, 2, 3, 10, 100]], dtype=np.int64))
    assert (np.diff(a) > 0).all()
    assert a[0, 0] == 0.0


def test_scale_time():
    assert scale_time(50_000, 50_000.0) == 1.0
    assert scale_time(0, 10_000.0) == 0.0
    assert scale_time(25_000, 25_000.0) == 1.0
    assert np.allclose(scale_time(np.array([10_000, 20_000]), 10_000.0), [1.0, 2.0])
    with pytest.raises(ZeroScale):
        scale_time(100, 0.0)


def test_histogram_export_round_trip(tmp_path):
    stream = random_stream(17, n=3000)
    tokens = tokenize_stream(TokenizerConfig(8, 6.0), stream)
    hists = histograms_for_stream(tokens)
    path = tmp_path / "h.bin"
    write_histograms(path, hists)
    back = read_histograms(path)
    assert np.array_equal(back, hists)
    raw = path.read_bytes()
    assert raw[:2] == (8).to_bytes(2, "little")
    assert raw[2:4] == (20).to_bytes(2, "little")
    assert len(raw) == 4 + hists.size * 4


def test_partial_edge_patches_zero_pad():
    geo = SensorGeometry(20, 20)  # 16-pixel patches leave a 4-pixel rim
    stream = random_stream(19, n=500, width=20, height=20)
    tokens = tokenize_stream(TokenizerConfig(16, 3.0), stream)
    hists = histograms_for_stream(tokens)
    assert hists.shape[1:] == (16, 16, 20)
    edge = (tokens.patch_x == 1)
    if edge.any():
        i = int(np.argmax(edge))
        assert hists[i][:, 4:, :].sum() == 0  # only 4 columns exist there
