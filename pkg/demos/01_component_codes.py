"""Component codes: construction, encoding, and the two decoders.

Walks the three standard fixtures, corrupts codewords, and shows
bounded-distance decoding (exact radius-t sphere) and errors-and-erasures
decoding (2e + s <= dmin - 1) doing their jobs.
"""

import numpy as np

from prodec import build_code, get_code

rng = np.random.default_rng(7)

print("fixtures:")
for cid in ("C1", "C2", "C3"):
    c = get_code(cid)
    print(f"  {cid}: {c!r}, dmin={c.dmin}, generator degree {len(c.generator) - 1}")

c = get_code("C2")
info = rng.integers(0, 2, c.k).astype(np.uint8)
cw = c.encode(info)
print(f"\nC2 codeword: {c.n} bits, info prefix intact:",
      bool(np.array_equal(cw[:c.k], info)))

# bounded-distance decoding corrects up to t errors
w = cw.copy()
flip = rng.choice(c.n, c.t, replace=False)
w[flip] ^= 1
out = c.bdd_decode(w)
print(f"BDD on {c.t} errors: decoded={out.decoded}, "
      f"exact={bool(np.array_equal(out.bits(), cw))}")

# one error too many usually fails (the all-zero ternary outcome)
w = cw.copy()
w[rng.choice(c.n, c.t + 1, replace=False)] ^= 1
out = c.bdd_decode(w)
print(f"BDD on {c.t + 1} errors: decoded={out.decoded} "
      f"(values all zero: {not out.values.any()})")

# errors-and-erasures: dmin-1 = 6 affords 2 errors + 2 erasures
w = cw.copy()
pos = rng.permutation(c.n)
erasures, errors = pos[:2], pos[2:4]
w[errors] ^= 1
w[erasures] = rng.integers(0, 2, 2)  # erased values carry no information
out = c.eed_decode(w, erasures)
print(f"EED with 2 errors + 2 erasures: decoded={out.decoded}, "
      f"exact={bool(np.array_equal(out.bits(), cw))}")

# the extended fixture detects overload via its overall parity bit
c1 = get_code("C1")
cw1 = c1.encode(rng.integers(0, 2, c1.k).astype(np.uint8))
w = cw1.copy()
w[rng.choice(c1.n, c1.t + 1, replace=False)] ^= 1
print(f"C1 (extended) on t+1 errors: decoded={c1.bdd_decode(w).decoded}")

# a tiny code where the sphere semantics are easy to enumerate
h = build_code(4, 1, 0)
print(f"\ntoy {h!r}: perfect Hamming code, every weight-2 pattern miscorrects:")
w = h.encode(np.zeros(h.k, dtype=np.uint8))
w[[3, 9]] ^= 1
out = h.bdd_decode(w)
print(f"  decoded={out.decoded}, distance to input="
      f"{int((out.bits() != w).sum())} (a different codeword)")
