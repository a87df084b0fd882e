# Same seed, same numbers, however the work is split
#
# Random numbers come from fixed blocks of 256 samples, one stream per block.
# Worker count and chunk size only change who computes which block, so the
# estimates match bit for bit.

from wienerphase import ChannelParams, McConfig, mc_fading_moments

params = ChannelParams(gamma=1.0, delta=0.1)
runs = [
    McConfig(n_samples=10_000, inner_steps=64, chunk_size=256, workers=1, master_seed=5),
    McConfig(n_samples=10_000, inner_steps=64, chunk_size=1024, workers=3, master_seed=5),
    McConfig(n_samples=10_000, inner_steps=64, chunk_size=4096, workers=2, master_seed=5),
]
values = [mc_fading_moments(params, cfg).m2.value for cfg in runs]
for cfg, v in zip(runs, values):
    print(f"workers={cfg.workers} chunk={cfg.chunk_size:5d}  E|F|^2 = {v!r}")
print("identical:", len(set(values)) == 1)
