"""Seeded Monte-Carlo BER sweeps over the BICM/AWGN chain.

A sweep point simulates independent trials (one product block, or one
staircase stream with warm-up) until the stop rule fires.  Trials are
keyed by ``(master seed, SNR index, trial index)`` through counter-based
seed sequences, and the accumulator walks trials in index order, so the
results are byte-identical for any worker count.

BER counts information bits only; for staircase streams the first
``warmup_blocks`` emitted blocks are excluded.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .bch import BchCode
from .channel import awgn, bit_llrs, hard_detection_ber, modulate, snr_to_sigma
from .de import build_lut, sr_factors, transfer_table
from .fixtures import FIXTURE_PARAMS, get_code, get_scc_code, pc_rate, scc_rate
from .pc import DECODER_KINDS, DecodeSchedule, pc_decode, pc_encode
from .scc import SccEncoder, WindowDecoder
from .softcore import CombiningLut

CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = ["snr_db", "bits", "bit_errors", "ber", "block_errors",
               "miscorrections", "failures", "seconds", "seed", "flag"]


@dataclass
class SweepConfig:
    code: str = "C2"
    structure: str = "pc"              # pc | scc
    decoder: str = "ibdd"
    modulation_m: int = 1              # bits per real dimension
    snr_db: tuple = (4.0,)
    soft_iters: int = 10
    plain_iters: int = 2
    window: int = 7
    scc_blocks: int = 20               # counted blocks per staircase trial
    warmup_blocks: int = -1            # -1: use the window size
    lut: str = "auto"                  # auto | auto@<dB> | <path> | none
    sr_weights: str = "auto"           # auto | comma list
    min_errors: int = 100
    max_bits: int = 1_000_000_000
    seed: int = 1
    workers: int = 1
    de_samples: int = 10_000

    def __post_init__(self):
        if not self.snr_db:
            raise ValueError("SNR grid must not be empty")
        if self.min_errors <= 0 or self.max_bits <= 0:
            raise ValueError("stop rule must be positive")
        if self.structure not in ("pc", "scc"):
            raise ValueError(f"unknown structure {self.structure!r}")
        if self.decoder not in DECODER_KINDS:
            raise ValueError(f"unknown decoder {self.decoder!r}")

    @property
    def schedule(self) -> DecodeSchedule:
        return DecodeSchedule(self.soft_iters, self.plain_iters)


def parse_config(text: str) -> SweepConfig:
    """Parse the flat key = value sweep configuration format."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()
    kwargs = {}
    ints = {"modulation_m", "soft_iters", "plain_iters", "window", "scc_blocks",
            "warmup_blocks", "min_errors", "max_bits", "seed", "workers",
            "de_samples"}
    for key, value in raw.items():
        if key == "snr_db":
            kwargs[key] = tuple(float(v) for v in value.replace(",", " ").split())
        elif key in ints:
            kwargs[key] = int(value)
        elif key in ("code", "structure", "decoder", "lut", "sr_weights"):
            kwargs[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    cfg = SweepConfig(**kwargs)
    env_seed = os.environ.get("PRODEC_SEED")
    if env_seed is not None:
        cfg = replace(cfg, seed=int(env_seed))
    return cfg


def load_config(path) -> SweepConfig:
    with open(path) as fh:
        return parse_config(fh.read())


@dataclass
class BerRecord:
    snr_db: float
    bits: int
    bit_errors: int
    ber: float
    block_errors: int
    miscorrections: int
    failures: int
    seconds: float
    seed: int
    flag: str = ""


# ----------------------------------------------------------------------
# per-trial simulation
# ----------------------------------------------------------------------

def _trial_rng(seed: int, snr_idx: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(snr_idx, trial)))


def _transmit(bits: np.ndarray, m: int, sigma: float, rng: np.random.Generator):
    """Interleave, modulate, add noise, demap, deinterleave; returns LLRs."""
    perm = rng.permutation(bits.size)
    tx = bits[perm]
    pad = (-tx.size) % m
    if pad:
        tx = np.concatenate([tx, np.zeros(pad, dtype=tx.dtype)])
    symbols = modulate(tx, m)
    y = awgn(symbols, sigma, rng)
    llrs = bit_llrs(y, m, sigma).reshape(-1)
    if pad:
        llrs = llrs[:-pad]
    out = np.empty_like(llrs)
    out[perm] = llrs
    return out


@dataclass
class _TrialResult:
    info_bits: int
    bit_errors: int
    block_errors: int
    miscorrections: int
    failures: int


class _PointRunner:
    """Simulates trials for one SNR point; picklable for worker pools."""

    def __init__(self, cfg: SweepConfig, snr_idx: int, sigma: float,
                 lut: CombiningLut | None, weights: list | None):
        self.cfg = cfg
        self.snr_idx = snr_idx
        self.sigma = sigma
        self.lut = lut
        self.weights = weights
        self._code: BchCode | None = None

    @property
    def code(self) -> BchCode:
        if self._code is None:
            self._code = (get_code(self.cfg.code) if self.cfg.structure == "pc"
                          else get_scc_code(self.cfg.code))
        return self._code

    def __call__(self, trial: int) -> _TrialResult:
        rng = _trial_rng(self.cfg.seed, self.snr_idx, trial)
        if self.cfg.structure == "pc":
            return self._pc_trial(rng)
        return self._scc_trial(rng)

    def _pc_trial(self, rng) -> _TrialResult:
        cfg = self.cfg
        code = self.code
        info = rng.integers(0, 2, size=(code.k, code.k)).astype(np.uint8)
        block = pc_encode(code, info)
        llr = _transmit(block.reshape(-1), cfg.modulation_m, self.sigma,
                        rng).reshape(code.n, code.n)
        received = (llr < 0).astype(np.uint8)
        res = pc_decode(code, received, llr, cfg.decoder, cfg.schedule,
                        lut=self.lut, sr_weights=self.weights,
                        transmitted=block)
        errors = int((res.info_bits != info).sum())
        return _TrialResult(info_bits=info.size, bit_errors=errors,
                            block_errors=int(errors > 0),
                            miscorrections=res.stats.miscorrections,
                            failures=res.stats.failures)

    def _scc_trial(self, rng) -> _TrialResult:
        cfg = self.cfg
        code = self.code
        warmup = cfg.warmup_blocks if cfg.warmup_blocks >= 0 else cfg.window
        # Trailing uncounted blocks keep every counted block inside a full
        # window; blocks drained at stream end see shrinking windows and
        # would otherwise dominate the error count.
        trail = cfg.window - 1
        total = warmup + cfg.scc_blocks + trail
        enc = SccEncoder(code)
        dec = WindowDecoder(code, cfg.decoder, cfg.window, cfg.schedule,
                            lut=self.lut, sr_weights=self.weights)
        txs = []
        emitted = []
        for _ in range(total):
            info = rng.integers(0, 2, size=(enc.half, enc.info_cols)).astype(np.uint8)
            block = enc.encode_block(info)
            llr = _transmit(block.reshape(-1), cfg.modulation_m, self.sigma,
                            rng).reshape(enc.half, enc.half)
            out = dec.push(llr, transmitted=block)
            txs.append(block)
            if out is not None:
                emitted.append(out)
        emitted.extend(dec.flush())
        ic = enc.info_cols
        errors = 0
        blocks_bad = 0
        for i in range(warmup, warmup + cfg.scc_blocks):
            diff = int((emitted[i][:, :ic] != txs[i][:, :ic]).sum())
            errors += diff
            blocks_bad += int(diff > 0)
        return _TrialResult(info_bits=cfg.scc_blocks * enc.half * ic,
                            bit_errors=errors, block_errors=blocks_bad,
                            miscorrections=dec.stats.miscorrections,
                            failures=dec.stats.failures)


# ----------------------------------------------------------------------
# sweep driver
# ----------------------------------------------------------------------

def _resolve_lut(cfg: SweepConfig, sigma: float) -> CombiningLut | None:
    if cfg.decoder not in ("ibdd-cr", "ibdd-cr-ee"):
        return None
    spec = cfg.lut
    if spec == "none":
        raise ValueError(f"decoder {cfg.decoder} needs a combining table")
    code = get_code(cfg.code) if cfg.structure == "pc" else get_scc_code(cfg.code)
    ensemble = "gldpc" if cfg.structure == "pc" else "scgldpc"
    if spec == "auto":
        design_sigma = sigma
    elif spec.startswith("auto@"):
        rate = float(pc_rate(code)) if cfg.structure == "pc" else float(scc_rate(code))
        design_sigma = snr_to_sigma(float(spec[5:]), rate, 2 * cfg.modulation_m)
    else:
        return CombiningLut.load(spec)
    return build_lut(code, design_sigma, 1 << cfg.modulation_m,
                     iters=cfg.soft_iters, samples=cfg.de_samples,
                     ensemble=ensemble, window_size=cfg.window,
                     code_id=cfg.code)


def _resolve_sr_weights(cfg: SweepConfig, sigma: float) -> list | None:
    if cfg.decoder != "ibdd-sr":
        return None
    if cfg.sr_weights == "auto":
        code = get_code(cfg.code) if cfg.structure == "pc" else get_scc_code(cfg.code)
        return sr_factors(code, sigma, 1 << cfg.modulation_m, iters=cfg.soft_iters,
                          table=transfer_table(code, cfg.de_samples))
    return [float(v) for v in cfg.sr_weights.replace(",", " ").split()]


def run_sweep(cfg: SweepConfig, progress=None) -> list[BerRecord]:
    """Run every SNR point of the sweep; deterministic in (config, seed)."""
    records = []
    code = get_code(cfg.code) if cfg.structure == "pc" else get_scc_code(cfg.code)
    rate = float(pc_rate(code)) if cfg.structure == "pc" else float(scc_rate(code))
    for snr_idx, snr in enumerate(cfg.snr_db):
        sigma = snr_to_sigma(snr, rate, 2 * cfg.modulation_m)
        lut = _resolve_lut(cfg, sigma)
        weights = _resolve_sr_weights(cfg, sigma)
        runner = _PointRunner(cfg, snr_idx, sigma, lut, weights)
        t0 = time.perf_counter()
        agg = _run_point(runner, cfg)
        seconds = time.perf_counter() - t0
        flag = ""
        if agg["bit_errors"] < cfg.min_errors:
            flag = "max_bits"
            ber = (agg["bit_errors"] or 1) / agg["bits"]  # upper bound when zero
        else:
            ber = agg["bit_errors"] / agg["bits"]
        records.append(BerRecord(
            snr_db=snr, bits=agg["bits"], bit_errors=agg["bit_errors"],
            ber=ber, block_errors=agg["block_errors"],
            miscorrections=agg["miscorrections"], failures=agg["failures"],
            seconds=seconds, seed=cfg.seed, flag=flag))
        if progress is not None:
            progress(records[-1])
    return records


def _run_point(runner: _PointRunner, cfg: SweepConfig) -> dict:
    agg = {"bits": 0, "bit_errors": 0, "block_errors": 0,
           "miscorrections": 0, "failures": 0}

    def add(res: _TrialResult) -> bool:
        agg["bits"] += res.info_bits
        agg["bit_errors"] += res.bit_errors
        agg["block_errors"] += res.block_errors
        agg["miscorrections"] += res.miscorrections
        agg["failures"] += res.failures
        done = agg["bit_errors"] >= cfg.min_errors or agg["bits"] >= cfg.max_bits
        return done

    if cfg.workers <= 1:
        trial = 0
        while True:
            if add(runner(trial)):
                break
            trial += 1
        return agg

    # Worker pool: trials are dispatched in batches but accumulated strictly
    # in trial-index order, so the stop decision (and thus every recorded
    # number) does not depend on the worker count.
    import multiprocessing as mp

    batch = max(2 * cfg.workers, 4)
    with mp.get_context("spawn").Pool(cfg.workers) as pool:
        start = 0
        done = False
        while not done:
            results = pool.map(runner, range(start, start + batch))
            for res in results:
                if add(res):
                    done = True
                    break
            start += batch
    return agg


# ----------------------------------------------------------------------
# persistence
# ----------------------------------------------------------------------

def write_csv(records: list[BerRecord], fh) -> None:
    fh.write(f"# prodec-sweep-csv v{CSV_SCHEMA_VERSION}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.snr_db, r.bits, r.bit_errors, repr(r.ber),
                         r.block_errors, r.miscorrections, r.failures,
                         f"{r.seconds:.3f}", r.seed, r.flag])


def records_to_csv(records: list[BerRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def write_records(records: list[BerRecord], cfg: SweepConfig, fh) -> None:
    fh.write(f"# prodec sweep records v{CSV_SCHEMA_VERSION}\n")
    for key in ("code", "structure", "decoder", "modulation_m", "soft_iters",
                "plain_iters", "window", "lut", "seed"):
        fh.write(f"{key} = {getattr(cfg, key)}\n")
    for r in records:
        fh.write("\n[point]\n")
        for col in CSV_COLUMNS:
            fh.write(f"{col} = {getattr(r, col)!r}\n")


def _trunc3(x: float) -> str:
    """Truncate to three decimals (matches the usual code-table style)."""
    return f"{int(x * 1000) / 1000:.3f}"


def fixture_table() -> str:
    """Text table of the code fixtures and their derived rates."""
    from .fixtures import SHANNON_LIMITS_DB

    lines = ["id  component        rate   pc_rate scc_rate  "
             "pc HD/SD (dB)  scc HD/SD (dB)"]
    for cid in FIXTURE_PARAMS:
        code = get_code(cid)
        scode = get_scc_code(cid)
        lim = SHANNON_LIMITS_DB[cid]
        lines.append(
            f"{cid}  {code!r:16s} {_trunc3(code.k / code.n)}  "
            f"{_trunc3(float(pc_rate(code)))}   {_trunc3(float(scc_rate(scode)))}    "
            f"{lim['pc'][0]:.2f}/{lim['pc'][1]:.2f}      "
            f"{lim['scc'][0]:.2f}/{lim['scc'][1]:.2f}")
    return "\n".join(lines)
