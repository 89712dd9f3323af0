"""Temporal-resolution controls: refractory periods and tokenizer variants.

An absolute refractory period (ARP) discards a patch's events for a fixed
window after each spike, trading temporal resolution for far fewer tokens.
The relative refractory period (RRP) is the soft version: events still
join the group but raise the potential by only alpha. The decay variant
leaks potential between events; the discrete variant bounds a token's
duration by pruning events older than t_max.
"""

import evtok as ev

geo = ev.SensorGeometry(304, 240)
spec = ev.PoissonFieldSpec(cell_size=16, active_cells=100,
                           total_rate_hz=720_000.0, duration_us=1_000_000,
                           seed=3)
stream = ev.generate_poisson_field(spec, geo)
print(f"synthetic automotive-like stream: {len(stream)} events / 1 s\n")

print("absolute refractory period at sigma=250 (tokens per 50 ms window):")
for T_ms in (0, 25, 50, 100):
    cfg = ev.TokenizerConfig(16, 250.0, refractory_us=T_ms * 1000)
    tokens = ev.tokenize_stream(cfg, stream)
    mean = ev.token_count_stats(tokens, 50_000).mean
    print(f"  T = {T_ms:3d} ms -> {len(tokens):5d} tokens ({mean:6.1f} per window)")

print("\nrelative refractory period, T=10ms then RRP of 100ms:")
for alpha in (0.0, 0.25, 0.5, 1.0):
    cfg = ev.TokenizerConfig(16, 250.0, refractory_us=10_000,
                             rrp_us=100_000, rrp_alpha=alpha)
    tokens = ev.tokenize_stream(cfg, stream)
    print(f"  alpha = {alpha:4.2f} -> {len(tokens):5d} tokens")
print("  (alpha=1 behaves like no RRP, alpha=0 like a longer ARP that still"
      " collects the window's events)")

print("\ndecay variant (potential leaks between events):")
for lam_per_ms in (0.0, 0.5, 2.0):
    cfg = ev.TokenizerConfig(16, 250.0, variant="decay",
                             decay_per_us=lam_per_ms / 1000.0)
    tokens = ev.tokenize_stream(cfg, stream)
    print(f"  lambda = {lam_per_ms:3.1f}/ms -> {len(tokens):5d} tokens")

print("\ndiscrete variant (potential = pruned group size, bounded duration):")
for tmax_ms in (250, 50, 10):
    cfg = ev.TokenizerConfig(16, 250.0, variant="discrete",
                             t_max_us=tmax_ms * 1000)
    tokens = ev.tokenize_stream(cfg, stream)
    spans = [int(stream.t[m[-1]]) - int(stream.t[m[0]])
             for m in (tokens.members_of(i) for i in range(len(tokens)))]
    worst = max(spans) / 1000 if spans else 0.0
    print(f"  t_max = {tmax_ms:3d} ms -> {len(tokens):5d} tokens, "
          f"longest token spans {worst:.1f} ms")
