"""Density evolution: trajectories, thresholds, and the coupling gain."""

import numpy as np

from prodec import get_scc_code
from prodec.channel import snr_to_sigma
from prodec.de import (de_gldpc, de_scc_emulate, threshold_search,
                       transfer_table)
from prodec.scc import scc_rate

code = get_scc_code("C2")
rate = scc_rate(code)
print(f"sampling the component transfer statistics of {code!r} ...")
table = transfer_table(code, samples_per_point=8000)

for db in (1.0, 1.4, 1.8):
    sigma = snr_to_sigma(db, rate, 2)
    res = de_gldpc(code, sigma, 2, iters=60, table=table)
    print(f"uncoupled at {db} dB: p_ch={res.trajectory[0]:.4f} -> "
          f"residual {res.trajectory[-1]:.2e}")

print("\nwindowed spatially-coupled run at 1.4 dB (emitted-position profile):")
res = de_scc_emulate(code, snr_to_sigma(1.4, rate, 2), 2, chain_len=30,
                     window_size=7, iters_per_slide=10, table=table)
profile = ", ".join(f"{x:.1e}" for x in res.emitted[:8])
print(f"  first positions: {profile} ...  success={res.success}")

th_flat = threshold_search("gldpc", code, 2, rate, iters=300, table=table,
                           lo_db=0.3, hi_db=6.0)
th_sc = threshold_search("scgldpc", code, 2, rate, iters_per_slide=40,
                         table=table, lo_db=0.3, hi_db=6.0)
th_sc_matched = threshold_search("scgldpc", code, 2, rate, iters_per_slide=10,
                                 table=table, lo_db=0.3, hi_db=6.0)
print(f"\nthresholds (Eb/N0, this package's convention):")
print(f"  uncoupled, 300 iterations : {th_flat:.3f} dB")
print(f"  coupled, 40 sweeps/slide  : {th_sc:.3f} dB "
      f"(coupling gain {th_flat - th_sc:+.3f} dB)")
print(f"  coupled, 10 sweeps/slide  : {th_sc_matched:.3f} dB "
      f"(the window decoder's actual budget)")
