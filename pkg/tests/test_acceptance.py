"""Acceptance gate: every primary criterion at its stated tolerance.

Each test prints one ``ACCEPTANCE <name>: PASS`` line (run with ``-s`` to
see them); an assertion failure marks the criterion red.  Monte-Carlo
criteria use fixed seeds and the calibrated SNR points recorded here, and
report their measured values alongside the verdict.
"""

import math
from dataclasses import replace

import numpy as np
import pytest

from prodec import build_code, get_code, get_scc_code
from prodec.de import threshold_search, transfer_table
from prodec.fixtures import FIXTURE_PARAMS, pc_rate, scc_rate
from prodec.pc import DecodeSchedule, pc_decode, pc_encode, soft_reference_decode
from prodec.scc import WindowDecoder
from prodec.sim import SweepConfig, _PointRunner, _resolve_lut, records_to_csv, run_sweep
from prodec.channel import snr_to_sigma
from prodec.softcore import gd, packing_overhead

from conftest import enumerate_codewords, oracle_bdd, oracle_eed

RNG_SEED = 20_260_809
TRIALS_PER_FIXTURE = 100_000

# calibrated mid-waterfall operating points (this package's dB convention)
PC_ORDERING_POINTS = (1.00, 1.05)
SCC_ORDERING_POINTS = (0.95, 1.00)
GAIN_GRID_IBDD = (1.85, 1.95, 2.05)
GAIN_GRID_EE = (1.40, 1.50, 1.60)
SCC_WATERFALL_GRID = (1.05, 1.10, 1.15, 1.20, 1.25)


def report(name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"\nACCEPTANCE {name}: {verdict}{suffix}")
    assert ok, f"{name}: {detail}"


# ----------------------------------------------------------------------
# component-decoder guarantees
# ----------------------------------------------------------------------

class TestComponentGuarantees:
    def test_bdd_corrects_all_within_t(self):
        rng = np.random.default_rng(RNG_SEED)
        for cid in FIXTURE_PARAMS:
            code = get_code(cid)
            failures = 0
            done = 0
            while done < TRIALS_PER_FIXTURE:
                b = min(4096, TRIALS_PER_FIXTURE - done)
                info = rng.integers(0, 2, (b, code.k)).astype(np.uint8)
                cws = code.encode(info)
                words = cws.copy()
                e = rng.integers(1, code.t + 1, size=b)
                for i in range(b):
                    pos = rng.choice(code.n, e[i], replace=False)
                    words[i, pos] ^= 1
                out = code.decode_batch(words)
                bad = ~out.ok | (out.words != cws).any(axis=1)
                failures += int(bad.sum())
                done += b
            report(f"bdd-guarantee-{cid}", failures == 0,
                   f"{TRIALS_PER_FIXTURE} trials, {failures} failures")

    def test_eed_corrects_all_within_bound(self):
        rng = np.random.default_rng(RNG_SEED + 1)
        for cid in FIXTURE_PARAMS:
            code = get_code(cid)
            pairs = [(e, s) for e in range(code.t + 1)
                     for s in range(code.dmin) if 2 * e + s <= code.dmin - 1]
            failures = 0
            done = 0
            while done < TRIALS_PER_FIXTURE:
                b = min(4096, TRIALS_PER_FIXTURE - done)
                info = rng.integers(0, 2, (b, code.k)).astype(np.uint8)
                cws = code.encode(info)
                words = cws.copy()
                erasures = []
                for i in range(b):
                    e, s = pairs[rng.integers(len(pairs))]
                    pos = rng.permutation(code.n)
                    ers = np.sort(pos[:s])
                    words[i, pos[s:s + e]] ^= 1
                    if s:
                        words[i, ers] = rng.integers(0, 2, s)
                    erasures.append(ers)
                out = code.decode_batch(words, erasures)
                bad = ~out.ok | (out.words != cws).any(axis=1)
                failures += int(bad.sum())
                done += b
            report(f"eed-guarantee-{cid}", failures == 0,
                   f"{TRIALS_PER_FIXTURE} trials, {failures} failures")


# ----------------------------------------------------------------------
# brute-force oracle equivalence on the (15,11,1) code
# ----------------------------------------------------------------------

class TestOracleEquivalence:
    def test_bdd_equals_nearest_codeword_exhaustive(self):
        code = build_code(4, 1, 0)
        cws = enumerate_codewords(code)
        mismatches = 0
        total = 1 << code.n
        for start in range(0, total, 8192):
            nums = np.arange(start, min(start + 8192, total))
            words = ((nums[:, None] >> np.arange(code.n)[::-1]) & 1).astype(np.uint8)
            ok_o, cw_o = oracle_bdd(code, words, cws)
            out = code.decode_batch(words)
            mismatches += int((ok_o != out.ok).sum())
            both = ok_o & out.ok
            mismatches += int((out.words[both] != cw_o[both]).any(axis=1).sum())
        report("bdd-oracle-exhaustive-15-11", mismatches == 0,
               f"all {total} inputs, {mismatches} mismatches")

    def test_eed_equals_erasure_aware_oracle(self):
        code = build_code(4, 1, 0)
        cws = enumerate_codewords(code)
        rng = np.random.default_rng(RNG_SEED + 2)
        mismatches = 0
        trials = 10_000
        for _ in range(trials):
            word = rng.integers(0, 2, code.n).astype(np.uint8)
            s = rng.integers(0, code.dmin)
            ers = np.sort(rng.choice(code.n, s, replace=False))
            got = code.eed_decode(word, ers)
            exp_ok, exp_cw = oracle_eed(code, word, ers, cws)
            if got.decoded != exp_ok:
                mismatches += 1
            elif exp_ok and not np.array_equal(got.bits(), exp_cw):
                mismatches += 1
        report("eed-oracle-15-11", mismatches == 0,
               f"{trials} random inputs, {mismatches} mismatches")


# ----------------------------------------------------------------------
# generalized-distance property suite
# ----------------------------------------------------------------------

class TestGdProperties:
    def test_gd_suite(self):
        rng = np.random.default_rng(RNG_SEED + 3)
        ok = True
        for _ in range(3000):
            n = int(rng.integers(2, 80))
            a = rng.integers(0, 2, n)
            b = rng.integers(0, 2, n)
            r = rng.random(n) * 10
            score = gd(a, b, r)
            ok &= 0.0 <= score <= 2 * n + 1e-9
            ok &= abs(score - gd(b, a, r)) < 1e-9
            # binary reliability convention reduces to the Hamming distance
            rb = np.where(a == b, 1.0, 0.0)
            if rb.any():
                ok &= abs(gd(a, b, rb) - float((a != b).sum())) < 1e-12
            # positive rescaling leaves the score (hence any argmin) alone
            ok &= abs(score - gd(a, b, r * 37.5)) < 1e-9
        report("gd-properties", ok, "range, symmetry, Hamming reduction, scale")


# ----------------------------------------------------------------------
# degeneration equalities (branch 2 disabled == combined reliability)
# ----------------------------------------------------------------------

class TestDegeneration:
    def test_pc_branch2_disabled_equals_cr(self):
        code = get_code("C2")
        sigma = snr_to_sigma(1.1, float(pc_rate(code)), 2)
        cfg = SweepConfig(code="C2", structure="pc", decoder="ibdd-cr",
                          snr_db=(1.1,), seed=RNG_SEED, de_samples=6000)
        lut = _resolve_lut(cfg, sigma)
        rng = np.random.default_rng(RNG_SEED + 4)
        identical = 0
        blocks = 100
        for _ in range(blocks):
            info = rng.integers(0, 2, (code.k, code.k)).astype(np.uint8)
            block = pc_encode(code, info)
            noise = rng.normal(0, sigma, size=block.size)
            llr = (2.0 / sigma ** 2) * ((1.0 - 2.0 * block.reshape(-1)) + noise)
            llr = llr.reshape(code.n, code.n)
            rec = (llr < 0).astype(np.uint8)
            a = pc_decode(code, rec.copy(), llr, "ibdd-cr", lut=lut)
            b = pc_decode(code, rec.copy(), llr, "ibdd-cr-ee", lut=lut,
                          branch2=False)
            identical += int(np.array_equal(a.bits, b.bits))
        report("degeneration-pc", identical == blocks,
               f"{identical}/{blocks} blocks decision-identical")

    def test_scc_branch2_disabled_equals_cr(self):
        code = get_scc_code("C2")
        sigma = snr_to_sigma(1.2, float(scc_rate(code)), 2)
        cfg = SweepConfig(code="C2", structure="scc", decoder="ibdd-cr",
                          snr_db=(1.2,), seed=RNG_SEED, de_samples=6000)
        lut = _resolve_lut(cfg, sigma)
        rng = np.random.default_rng(RNG_SEED + 5)
        half = code.n // 2
        info_cols = code.k - half
        total_blocks = 0
        identical = 0
        for _stream in range(4):
            from prodec.scc import SccEncoder
            enc = SccEncoder(code)
            dec_a = WindowDecoder(code, "ibdd-cr", 7, DecodeSchedule(10, 2), lut=lut)
            dec_b = WindowDecoder(code, "ibdd-cr-ee", 7, DecodeSchedule(10, 2), lut=lut)
            dec_b.branch2 = False
            outs_a, outs_b = [], []
            for _ in range(25):
                info = rng.integers(0, 2, (half, info_cols)).astype(np.uint8)
                block = enc.encode_block(info)
                noise = rng.normal(0, sigma, size=block.size)
                llr = (2.0 / sigma ** 2) * ((1.0 - 2.0 * block.reshape(-1)) + noise)
                llr = llr.reshape(half, half)
                a = dec_a.push(llr.copy())
                b = dec_b.push(llr.copy())
                if a is not None:
                    outs_a.append(a)
                    outs_b.append(b)
            outs_a.extend(dec_a.flush())
            outs_b.extend(dec_b.flush())
            total_blocks += len(outs_a)
            identical += sum(int(np.array_equal(x, y))
                             for x, y in zip(outs_a, outs_b))
        report("degeneration-scc", identical == total_blocks,
               f"{identical}/{total_blocks} blocks decision-identical")


# ----------------------------------------------------------------------
# packed-message equivalence and overhead
# ----------------------------------------------------------------------

class TestPackingEquivalence:
    def test_packed_two_attempt_decoder_matches_soft_reference(self):
        code = get_code("C2")
        sigma = snr_to_sigma(1.1, float(pc_rate(code)), 2)
        cfg = SweepConfig(code="C2", structure="pc", decoder="ibdd-cr-ee",
                          snr_db=(1.1,), seed=RNG_SEED, de_samples=6000)
        lut = _resolve_lut(cfg, sigma)
        rng = np.random.default_rng(RNG_SEED + 6)
        identical = 0
        blocks = 100
        for _ in range(blocks):
            info = rng.integers(0, 2, (code.k, code.k)).astype(np.uint8)
            block = pc_encode(code, info)
            noise = rng.normal(0, sigma, size=block.size)
            llr = (2.0 / sigma ** 2) * ((1.0 - 2.0 * block.reshape(-1)) + noise)
            llr = llr.reshape(code.n, code.n)
            rec = (llr < 0).astype(np.uint8)
            packed = pc_decode(code, rec, llr, "ibdd-cr-ee", lut=lut,
                               packed_messages=True)
            ref = soft_reference_decode(code, llr, "ibdd-cr-ee", lut=lut)
            identical += int(np.array_equal(packed.bits, ref.bits))
        overhead_ok = (abs(packing_overhead(255) - 0.0039) < 3e-5
                       and abs(packing_overhead(511) - 0.0020) < 5e-5)
        report("packing-equivalence", identical == blocks and overhead_ok,
               f"{identical}/{blocks} blocks bit-identical; overhead "
               f"{packing_overhead(255):.4%} (n=255), "
               f"{packing_overhead(511):.4%} (n=511)")


# ----------------------------------------------------------------------
# decoder ordering with confidence intervals
# ----------------------------------------------------------------------

def _measure(cfg: SweepConfig, snr_db: float, min_errors: int,
             min_trials: int, max_trials: int):
    """Trial-resolved point measurement: returns (ber, ci95, errors)."""
    code = get_code(cfg.code) if cfg.structure == "pc" else get_scc_code(cfg.code)
    rate = float(pc_rate(code)) if cfg.structure == "pc" else float(scc_rate(code))
    sigma = snr_to_sigma(snr_db, rate, 2 * cfg.modulation_m)
    lut = _resolve_lut(cfg, sigma)
    runner = _PointRunner(cfg, 0, sigma, lut, None)
    per_trial = []
    bits_per_trial = None
    errors = 0
    trial = 0
    while trial < max_trials and (errors < min_errors or trial < min_trials):
        res = runner(trial)
        per_trial.append(res.bit_errors)
        bits_per_trial = res.info_bits
        errors += res.bit_errors
        trial += 1
    counts = np.array(per_trial, dtype=np.float64)
    total_bits = bits_per_trial * len(counts)
    ber = errors / total_bits
    ci = 1.96 * counts.std(ddof=1) / (math.sqrt(len(counts)) * bits_per_trial)
    return ber, ci, errors


class TestDecoderOrdering:
    def _check_points(self, structure, points, min_errors, min_trials,
                      max_trials, scc_blocks=20):
        ok_all = True
        details = []
        for snr in points:
            measured = {}
            for dec in ("ibdd", "ibdd-cr", "ibdd-cr-ee"):
                cfg = SweepConfig(code="C2", structure=structure, decoder=dec,
                                  snr_db=(snr,), seed=RNG_SEED,
                                  scc_blocks=scc_blocks, de_samples=6000)
                measured[dec] = _measure(cfg, snr, min_errors, min_trials,
                                         max_trials)
            b_i, c_i, e_i = measured["ibdd"], measured["ibdd-cr"], measured["ibdd-cr-ee"]
            sep1 = e_i[0] + e_i[1] < c_i[0] - c_i[1]
            sep2 = c_i[0] + c_i[1] < b_i[0] - b_i[1]
            enough = all(m[2] >= min_errors for m in measured.values())
            ok_all &= sep1 and sep2 and enough
            details.append(
                f"{snr:.2f} dB: ee {e_i[0]:.2e}+-{e_i[1]:.1e} < "
                f"cr {c_i[0]:.2e}+-{c_i[1]:.1e} < ibdd {b_i[0]:.2e}+-{b_i[1]:.1e}")
        report(f"ordering-{structure}", ok_all, "; ".join(details))

    def test_pc_ordering(self):
        self._check_points("pc", PC_ORDERING_POINTS, min_errors=300,
                           min_trials=12, max_trials=400)

    def test_scc_ordering(self):
        self._check_points("scc", SCC_ORDERING_POINTS, min_errors=300,
                           min_trials=4, max_trials=60)


# ----------------------------------------------------------------------
# gain magnitude at BER 1e-4 (C1, one real dimension)
# ----------------------------------------------------------------------

def _log_crossing(records, target):
    pts = sorted((r.snr_db, r.ber) for r in records if r.bit_errors >= 40)
    lt = math.log10(target)
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        if b1 >= b0:
            continue
        l0, l1 = math.log10(b0), math.log10(b1)
        if l1 <= lt <= l0:
            return s0 + (lt - l0) / (l1 - l0) * (s1 - s0)
    raise AssertionError(f"BER {target} not bracketed by measured points: {pts}")


class TestGainMagnitude:
    def test_two_attempt_gain_over_ibdd_c1(self):
        base = SweepConfig(code="C1", structure="pc", decoder="ibdd",
                           snr_db=GAIN_GRID_IBDD, min_errors=300,
                           max_bits=30_000_000, seed=RNG_SEED,
                           de_samples=6000)
        rec_ibdd = run_sweep(base)
        rec_ee = run_sweep(replace(base, decoder="ibdd-cr-ee",
                                   snr_db=GAIN_GRID_EE))
        snr_ibdd = _log_crossing(rec_ibdd, 1e-4)
        snr_ee = _log_crossing(rec_ee, 1e-4)
        gain = snr_ibdd - snr_ee
        report("gain-c1", 0.35 <= gain <= 1.0,
               f"measured {gain:.3f} dB at BER 1e-4 "
               f"(ibdd crossing {snr_ibdd:.3f}, two-attempt {snr_ee:.3f})")


# ----------------------------------------------------------------------
# density-evolution validity
# ----------------------------------------------------------------------

class TestDeValidity:
    def test_sc_threshold_predicts_scc_waterfall(self):
        code = get_scc_code("C2")
        rate = float(scc_rate(code))
        table = transfer_table(code, samples_per_point=8000)
        th = threshold_search("scgldpc", code, 2, rate, tol_db=0.01,
                              table=table, lo_db=0.3, hi_db=6.0)
        cfg = SweepConfig(code="C2", structure="scc", decoder="ibdd-cr",
                          snr_db=SCC_WATERFALL_GRID, scc_blocks=20,
                          min_errors=150, max_bits=6_000_000,
                          seed=RNG_SEED, de_samples=6000)
        records = run_sweep(cfg)
        crossing = _log_crossing(records, 1e-3)
        gap = abs(crossing - th)
        report("de-vs-sim", gap <= 0.25,
               f"DE threshold {th:.3f} dB, simulated BER 1e-3 crossing "
               f"{crossing:.3f} dB, gap {gap:.3f} dB")

    def test_coupling_gain_thresholds(self):
        ok = True
        details = []
        for cid in ("C2", "C3"):
            code = get_scc_code(cid)
            rate = float(scc_rate(code))
            table = transfer_table(code, samples_per_point=8000)
            th_flat = threshold_search("gldpc", code, 2, rate, iters=300,
                                       tol_db=0.01, table=table,
                                       lo_db=0.3, hi_db=8.0)
            th_sc = threshold_search("scgldpc", code, 2, rate, tol_db=0.01,
                                     iters_per_slide=40, table=table,
                                     lo_db=0.3, hi_db=8.0)
            ok &= th_sc < th_flat
            details.append(f"{cid}: coupled {th_sc:.3f} < flat {th_flat:.3f} dB")
        report("coupling-gain", ok, "; ".join(details))


# ----------------------------------------------------------------------
# reproducibility
# ----------------------------------------------------------------------

class TestReproducibility:
    def test_byte_identical_reruns_and_worker_invariance(self):
        cfg = SweepConfig(code="C2", structure="pc", decoder="ibdd",
                          snr_db=(0.5, 1.5), min_errors=60,
                          max_bits=2_000_000, seed=RNG_SEED)

        def normalized(records):
            text = records_to_csv(records)
            out = []
            for line in text.splitlines():
                if line.startswith("#") or line.startswith("snr_db"):
                    out.append(line)
                else:
                    cells = line.split(",")
                    cells[7] = "_"  # wall-time column
                    out.append(",".join(cells))
            return "\n".join(out)

        a = normalized(run_sweep(cfg))
        b = normalized(run_sweep(cfg))
        c = normalized(run_sweep(replace(cfg, workers=2)))
        report("reproducibility", a == b == c,
               "re-run and worker-count runs byte-identical modulo wall time")
