"""One noisy product block through the whole decoder family.

The combining table for the soft-aided kinds comes straight from density
evolution at the operating noise level.
"""

import numpy as np

from prodec import get_code
from prodec.channel import awgn, bit_llrs, modulate, snr_to_sigma
from prodec.de import build_lut, sr_factors
from prodec.pc import DecodeSchedule, pc_decode, pc_encode, pc_rate

code = get_code("C2")
ebn0 = 1.15
sigma = snr_to_sigma(ebn0, pc_rate(code), 2)
rng = np.random.default_rng(5)

info = rng.integers(0, 2, (code.k, code.k)).astype(np.uint8)
block = pc_encode(code, info)
y = awgn(modulate(block.reshape(-1), 1), sigma, rng)
llr = bit_llrs(y, 1, sigma)[:, 0].reshape(code.n, code.n)
received = (llr < 0).astype(np.uint8)
print(f"C2 product block at {ebn0} dB (sigma={sigma:.4f}): "
      f"{int((received != block).sum())} channel errors in {block.size} bits")

print("building the combining table from density evolution...")
lut = build_lut(code, sigma, 2, iters=10, samples=8000, code_id="C2")
print("  weights:", [f"{w:.2f}" for w in lut.weights])
weights = sr_factors(code, sigma, 2, iters=10)

schedule = DecodeSchedule(soft_iters=10, plain_iters=2)
for kind in ("ibdd", "ideal-ibdd", "ibdd-sr", "ibdd-cr", "ibdd-cr-ee"):
    kwargs = {}
    if kind == "ibdd-sr":
        kwargs["sr_weights"] = weights
    if kind.startswith("ibdd-cr"):
        kwargs["lut"] = lut
    res = pc_decode(code, received.copy(), llr, kind, schedule,
                    transmitted=block, **kwargs)
    errs = int((res.bits != block).sum())
    print(f"{kind:12s}: {errs:5d} residual bit errors, "
          f"{res.stats.miscorrections:5d} miscorrections, "
          f"{res.stats.failures:6d} component failures")
