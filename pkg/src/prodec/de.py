"""Density evolution for the combined-reliability decoder family.

The component transfer statistics are estimated by Monte Carlo at the
component-code level: transmit the all-zero codeword, flip the input hard
decisions independently, decode, and record the outcome class of a probe
bit conditioned on whether that bit's own input was wrong.  The
statistics depend only on the input message error probability (not on the
channel or the combining weight), so they are sampled once per code on a
geometric grid and interpolated.

The recursion follows the assumptions that make density evolution valid
for this family: extrinsic message passing over the (spatially coupled)
generalized LDPC ensemble and a symmetrized channel.  The update for a
probe bit reads its constraint node's outcome with the bit's own input
taken from the channel hard decision, whose sign is reused when the
outcome is combined with the channel LLR:

    x' = F(0) * [P(fail | ch. wrong) + P(dec, bit wrong | ch. wrong)]
       + F(-w) * P(dec, bit correct | ch. wrong)
       + (F(w) - F(0)) * P(dec, bit wrong | ch. right)

with F the channel LLR distribution of a zero bit and w the combining
weight.  Failed or miscorrected outcomes leave a channel-wrong bit wrong
(the combining cannot overcome its own LLR), which is what makes the
recursion stall where the real decoder stalls.  Combining weights are the
log-ratio of decoded-bit correctness, w = ln(p_c / p_e), clamped to
``w_max``.

``estimate_g`` is the direct single-shot transfer estimate (all inputs at
the message error rate, intrinsic read-out); it mirrors one decoding phase
on a full block and is cross-checked against exactly that in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .bch import BchCode
from .channel import Constellation, bit_llrs, hard_detection_ber
from .softcore import W_MAX_DEFAULT, CombiningLut


# ----------------------------------------------------------------------
# channel LLR distribution given a transmitted zero bit
# ----------------------------------------------------------------------

class LlrModel:
    """Distribution of the channel LLR of a bit whose true value is 0."""

    def __init__(self, sigma: float, m: int, samples: int = 2_000_000,
                 seed: int = 20_000_101):
        self.sigma = float(sigma)
        self.m = int(m)
        if m == 1:
            self.mean = 2.0 / (sigma * sigma)
            self.sd = 2.0 / sigma
            self._sorted = None
        else:
            rng = np.random.default_rng(seed)
            self._sorted = np.sort(self._draw(rng, samples))
        self.p_ch = hard_detection_ber(sigma, m)

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        const = Constellation(self.m)
        q = rng.integers(0, self.m, size=count)
        out = np.empty(count, dtype=np.float64)
        for level in range(self.m):
            sel = q == level
            ncur = int(sel.sum())
            if not ncur:
                continue
            amps0 = const.amplitudes[const.level_bits[:, level] == 0]
            a = amps0[rng.integers(0, len(amps0), size=ncur)]
            y = a + rng.normal(0.0, self.sigma, size=ncur)
            out[sel] = bit_llrs(y, self.m, self.sigma)[:, level]
        return out

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.m == 1:
            return rng.normal(self.mean, self.sd, size=count)
        return self._draw(rng, count)

    def cdf(self, z: float) -> float:
        """P(llr < z | bit 0)."""
        if self.m == 1:
            return float(norm.cdf((z - self.mean) / self.sd))
        return float(np.searchsorted(self._sorted, z, side="left") / len(self._sorted))


# ----------------------------------------------------------------------
# component transfer statistics
# ----------------------------------------------------------------------

@dataclass
class TransferSample:
    x_in: float
    sigma: float
    mod_order: int
    x_out: float
    ci95: float
    samples: int


class BddTransferTable:
    """Outcome statistics of bounded-distance decoding on an error-rate grid.

    For each grid probability two batches are decoded, one with a probe
    bit forced wrong and one with it forced right (remaining bits i.i.d.).
    Stored per grid point and probe state: the probabilities that the word
    fails, that it decodes with the probe bit correct, and that it decodes
    with the probe bit wrong.  Queries interpolate in log(x).
    """

    GRID_MIN = 1e-8
    GRID_MAX = 0.3
    GRID_POINTS = 34

    def __init__(self, code: BchCode, samples_per_point: int = 10_000,
                 seed: int = 77_001):
        self.code = code
        self.samples = samples_per_point
        self.grid = np.geomspace(self.GRID_MIN, self.GRID_MAX, self.GRID_POINTS)
        self._log_grid = np.log(self.grid)
        # [gi, probe_state(1 wrong/0 right), class(fail, dec-ok, dec-err)]
        self.cond = np.zeros((self.GRID_POINTS, 2, 3))
        rng = np.random.default_rng(seed)
        n = code.n
        chunk = max(1, min(samples_per_point, (1 << 22) // (2 * code.t * n)))
        for gi, x in enumerate(self.grid):
            for probe in (1, 0):
                fail = dec_ok = dec_err = 0
                done = 0
                while done < samples_per_point:
                    b = min(chunk, samples_per_point - done)
                    words = (rng.random((b, n)) < x).astype(np.uint8)
                    pos = rng.integers(0, n, b)
                    words[np.arange(b), pos] = probe
                    out = code.decode_batch(words)
                    ok = out.ok
                    probe_out = out.words[np.arange(b), pos]
                    fail += int((~ok).sum())
                    dec_err += int((ok & (probe_out == 1)).sum())
                    dec_ok += int((ok & (probe_out == 0)).sum())
                    done += b
                tot = float(samples_per_point)
                self.cond[gi, probe] = (fail / tot, dec_ok / tot, dec_err / tot)

    def cond_fractions(self, x: float) -> np.ndarray:
        """(2, 3) conditional class probabilities at message error rate x."""
        if x <= 0.0:
            out = np.zeros((2, 3))
            out[1] = (0.0, 1.0, 0.0)
            out[0] = (0.0, 1.0, 0.0)
            return out
        lx = math.log(min(max(x, self.GRID_MIN), self.GRID_MAX))
        i = int(np.clip(np.searchsorted(self._log_grid, lx), 1, self.GRID_POINTS - 1))
        tt = (lx - self._log_grid[i - 1]) / (self._log_grid[i] - self._log_grid[i - 1])
        tt = min(max(tt, 0.0), 1.0)
        return self.cond[i - 1] + (self.cond[i] - self.cond[i - 1]) * tt

    def marginal_fractions(self, x: float) -> tuple[float, float, float]:
        """(fail, dec-ok, dec-err) bit fractions with all inputs at rate x."""
        c = self.cond_fractions(x)
        mix = x * c[1] + (1.0 - x) * c[0]
        return float(mix[0]), float(mix[1]), float(mix[2])

    def weight(self, x: float, w_max: float = W_MAX_DEFAULT) -> tuple[float, bool]:
        """Combining weight ln(p_c/p_e) at input error rate ``x``."""
        _, dok, derr = self.marginal_fractions(x)
        if derr <= 0.0:
            return w_max, True
        if dok <= 0.0:
            return 0.0, True
        w = math.log(dok / derr)
        return min(max(w, 0.0), w_max), False

    def g_extrinsic(self, x: float, llr: LlrModel, weight: float) -> float:
        """One-step message error probability update of the DE recursion."""
        c = self.cond_fractions(x)
        f0 = llr.p_ch
        cf1, cok1, cerr1 = c[1]
        _cf0, _cok0, cerr0 = c[0]
        return (f0 * (cf1 + cerr1)
                + llr.cdf(-weight) * cok1
                + (llr.cdf(weight) - f0) * cerr0)

    def g_intrinsic(self, x: float, llr: LlrModel, weight: float) -> float:
        """Single-shot transfer with every input at rate x (see estimate_g)."""
        ff, dok, derr = self.marginal_fractions(x)
        return (ff * llr.p_ch
                + dok * llr.cdf(-weight)
                + derr * llr.cdf(weight))


_TABLE_CACHE: dict = {}


def transfer_table(code: BchCode, samples_per_point: int = 10_000,
                   seed: int = 77_001) -> BddTransferTable:
    key = (code.v, code.t, code.s, code.extended, samples_per_point, seed)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = BddTransferTable(code, samples_per_point, seed)
    return _TABLE_CACHE[key]


def estimate_g(code: BchCode, x_in: float, sigma: float, mod_order: int,
               weight: float, samples: int = 20_000,
               rng: np.random.Generator | None = None,
               llr_model: LlrModel | None = None) -> TransferSample:
    """Direct Monte-Carlo estimate of the post-combining error probability.

    All-zero transmission; every input hard decision is drawn wrong with
    probability ``x_in`` and the channel LLRs from the BICM mixture given
    the transmitted bit; the outcome is combined with the given weight and
    re-sliced.  This mirrors one decoding phase on a full block.
    """
    if not 0.0 <= x_in <= 1.0:
        raise ValueError("x_in must be a probability")
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = rng or np.random.default_rng(1234)
    m = int(round(math.log2(mod_order)))
    llr = llr_model or LlrModel(sigma, m)
    n = code.n
    chunk = max(1, min(samples, (1 << 22) // (2 * code.t * n)))
    done = 0
    word_err = []
    while done < samples:
        b = min(chunk, samples - done)
        words = (rng.random((b, n)) < x_in).astype(np.uint8)
        out = code.decode_batch(words)
        l = llr.sample(rng, b * n).reshape(b, n)
        mu = np.zeros((b, n))
        mu[out.ok] = weight * (1.0 - 2.0 * out.words[out.ok].astype(np.float64))
        errs = ((mu + l) < 0).mean(axis=1)
        word_err.append(errs)
        done += b
    word_err = np.concatenate(word_err)
    x_out = float(word_err.mean())
    ci = 1.96 * float(word_err.std(ddof=1)) / math.sqrt(len(word_err))
    return TransferSample(x_in=x_in, sigma=sigma, mod_order=mod_order,
                          x_out=x_out, ci95=ci, samples=samples)


# ----------------------------------------------------------------------
# recursions
# ----------------------------------------------------------------------

@dataclass
class DeResult:
    trajectory: list
    weights: list
    clamped: list = field(default_factory=list)


def de_gldpc(code: BchCode, sigma: float, mod_order: int, iters: int,
             lut: CombiningLut | None = None,
             table: BddTransferTable | None = None,
             llr_model: LlrModel | None = None) -> DeResult:
    """Uncoupled ensemble recursion x <- g(x); starts from p_ch."""
    m = int(round(math.log2(mod_order)))
    table = table or transfer_table(code)
    llr = llr_model or LlrModel(sigma, m)
    x = llr.p_ch
    traj = [x]
    weights = []
    clamped = []
    for ell in range(1, iters + 1):
        if lut is not None:
            w = lut.weight(min(ell, lut.iterations))
        else:
            w, was_clamped = table.weight(x)
            if was_clamped:
                clamped.append(ell)
        weights.append(w)
        x = table.g_extrinsic(x, llr, w)
        traj.append(x)
    return DeResult(trajectory=traj, weights=weights, clamped=clamped)


def de_scgldpc(code: BchCode, sigma: float, mod_order: int, positions: int,
               window: set | list, iters: int,
               lut: CombiningLut | None = None,
               table: BddTransferTable | None = None,
               llr_model: LlrModel | None = None,
               state: np.ndarray | None = None) -> list[np.ndarray]:
    """Window-restricted spatially-coupled recursion (coupling memory 2).

    Positions are indexed 1..positions; index 0 is the known all-zero
    boundary pinned at zero, and out-of-window positions contribute zero.
    Returns the state history including the initial state.
    """
    m = int(round(math.log2(mod_order)))
    table = table or transfer_table(code)
    llr = llr_model or LlrModel(sigma, m)
    win = sorted(int(i) for i in window)
    if win and not set(win) <= set(range(1, positions + 1)):
        raise ValueError("window positions outside the chain")
    x = np.zeros(positions + 2)
    if state is not None:
        x[:len(state)] = state
        x[0] = 0.0
    else:
        for i in win:
            x[i] = llr.p_ch
    hist = [x[:positions + 1].copy()]
    for ell in range(1, iters + 1):
        xw = np.zeros_like(x)
        for i in win:
            xw[i] = x[i]
        if lut is not None:
            w = lut.weight(min(ell, lut.iterations))
        else:
            probs = [0.5 * (xw[i - 1] + xw[i]) for i in win]
            probs += [0.5 * (xw[i] + xw[i + 1]) for i in win]
            w, _ = table.weight(float(np.mean(probs))) if probs else (0.0, False)
        new = x.copy()
        for i in win:
            left = table.g_extrinsic(0.5 * (xw[i - 1] + xw[i]), llr, w)
            right = table.g_extrinsic(0.5 * (xw[i] + xw[i + 1]), llr, w)
            new[i] = 0.5 * (left + right)
        x = new
        x[0] = 0.0
        hist.append(x[:positions + 1].copy())
    return hist


@dataclass
class SccDeResult:
    emitted: np.ndarray          # error probability of each position at emission
    weights: list                # per-iteration aggregate weights (steady state)
    clamped: list
    success: bool = False


def de_scc_emulate(code: BchCode, sigma: float, mod_order: int,
                   chain_len: int = 50, window_size: int = 7,
                   iters_per_slide: int = 10,
                   lut: CombiningLut | None = None,
                   table: BddTransferTable | None = None,
                   llr_model: LlrModel | None = None,
                   target: float = 1e-5) -> SccDeResult:
    """Slide a decoding window along the chain as the window decoder does.

    Each slide runs ``iters_per_slide`` window-restricted sweeps and the
    leftmost position then leaves the window (out-of-window positions,
    emitted ones included, contribute zero).  Sweeps walk the window oldest
    to newest using already-updated left neighbors, matching the decoder's
    sweep order.  Weight statistics from the middle slide provide the
    per-iteration combining table for staircase decoding.
    """
    m = int(round(math.log2(mod_order)))
    table = table or transfer_table(code)
    llr = llr_model or LlrModel(sigma, m)
    x = np.zeros(chain_len + 2)
    emitted = np.zeros(chain_len + 1)
    weights_mid: list[float] = []
    clamped_mid: list[int] = []
    mid_slide = max(1, (chain_len - window_size) // 2)
    arrived = 0
    for emit_pos in range(1, chain_len + 1):
        hi = min(emit_pos + window_size - 1, chain_len)
        while arrived < hi:
            arrived += 1
            x[arrived] = llr.p_ch
        win = list(range(emit_pos, hi + 1))
        collect = emit_pos == mid_slide

        def nbr(i, lo=emit_pos, hi_pos=hi):
            return x[i] if lo <= i <= hi_pos else 0.0

        for ell in range(1, iters_per_slide + 1):
            if lut is not None:
                w = lut.weight(min(ell, lut.iterations))
                was_clamped = False
            else:
                probs = [0.5 * (nbr(i - 1) + x[i]) for i in win]
                probs += [0.5 * (x[i] + nbr(i + 1)) for i in win]
                w, was_clamped = table.weight(float(np.mean(probs)))
            if collect:
                weights_mid.append(w)
                if was_clamped:
                    clamped_mid.append(ell)
            for i in win:
                left = table.g_extrinsic(0.5 * (nbr(i - 1) + x[i]), llr, w)
                right = table.g_extrinsic(0.5 * (x[i] + nbr(i + 1)), llr, w)
                x[i] = 0.5 * (left + right)
        emitted[emit_pos] = x[emit_pos]
    success = bool(np.max(emitted[1:]) <= target)
    return SccDeResult(emitted=emitted[1:], weights=weights_mid,
                       clamped=clamped_mid, success=success)


# ----------------------------------------------------------------------
# combining table generation
# ----------------------------------------------------------------------

def build_lut(code: BchCode, sigma: float, mod_order: int, iters: int = 10,
              samples: int = 10_000, ensemble: str = "gldpc",
              window_size: int = 7, chain_len: int = 50,
              w_max: float = W_MAX_DEFAULT, code_id: str = "") -> CombiningLut:
    """Generate the per-iteration combining table from density evolution."""
    table = transfer_table(code, samples_per_point=samples)
    m = int(round(math.log2(mod_order)))
    llr = LlrModel(sigma, m)
    if ensemble == "gldpc":
        res = de_gldpc(code, sigma, mod_order, iters, table=table, llr_model=llr)
        weights, clamped = res.weights, res.clamped
    elif ensemble == "scgldpc":
        res = de_scc_emulate(code, sigma, mod_order, chain_len, window_size,
                             iters, table=table, llr_model=llr)
        weights, clamped = res.weights, res.clamped
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}")
    weights = [min(max(w, 0.0), w_max) for w in weights]
    return CombiningLut(weights=weights, code_id=code_id or (code.name or ""),
                        sigma=sigma, mod_order=mod_order, w_max=w_max,
                        clamped=clamped)


def sr_factors(code: BchCode, sigma: float, mod_order: int, iters: int = 10,
               candidates: np.ndarray | None = None,
               table: BddTransferTable | None = None) -> list[float]:
    """Per-iteration scaling factors chosen by a one-dimensional DE sweep."""
    m = int(round(math.log2(mod_order)))
    table = table or transfer_table(code)
    llr = LlrModel(sigma, m)
    cands = candidates if candidates is not None else np.linspace(0.0, W_MAX_DEFAULT, 56)
    x = llr.p_ch
    out = []
    for _ in range(iters):
        best_w, best_x = 0.0, float("inf")
        for w in cands:
            gx = table.g_extrinsic(x, llr, float(w))
            if gx < best_x:
                best_x, best_w = gx, float(w)
        out.append(best_w)
        x = best_x
    return out


# ----------------------------------------------------------------------
# threshold search
# ----------------------------------------------------------------------

def threshold_search(kind: str, code: BchCode, mod_order: int, rate: float,
                     target: float = 1e-5, tol_db: float = 0.02,
                     iters: int = 200, window_size: int = 7,
                     iters_per_slide: int = 10, chain_len: int = 50,
                     lo_db: float = 0.0, hi_db: float = 10.0,
                     table: BddTransferTable | None = None) -> float:
    """Smallest Eb/N0 (dB) whose DE run reaches the target residual."""
    from .channel import snr_to_sigma

    if tol_db <= 0:
        raise ValueError("tolerance must be positive")
    m = int(round(math.log2(mod_order)))
    table = table or transfer_table(code)

    def converges(db: float) -> bool:
        sigma = snr_to_sigma(db, rate, 2 * m)
        llr = LlrModel(sigma, m)
        if kind == "gldpc":
            res = de_gldpc(code, sigma, mod_order, iters, table=table, llr_model=llr)
            return res.trajectory[-1] <= target
        if kind == "scgldpc":
            res = de_scc_emulate(code, sigma, mod_order, chain_len, window_size,
                                 iters_per_slide, table=table, llr_model=llr,
                                 target=target)
            return res.success
        raise ValueError(f"unknown recursion kind {kind!r}")

    lo, hi = lo_db, hi_db
    if converges(lo):
        return lo
    if not converges(hi):
        raise RuntimeError("bracket failure: DE does not converge at the upper SNR")
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if converges(mid):
            hi = mid
        else:
            lo = mid
    return hi
