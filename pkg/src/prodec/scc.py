"""Staircase encoding and sliding-window decoding.

A staircase stream is a chain of square blocks where every row of
``[B_{i-1}^T, B_i]`` is a component codeword; ``B_0`` is a known all-zero
block.  Column constraints of a block are realized as the row constraints
of the next block pair.

The window decoder keeps ``window_size`` received blocks.  Per emission it
runs the iteration budget (soft sweeps followed by appended plain sweeps),
each sweep walking the block pairs oldest to newest and re-deciding every
row of each pair, then emits the oldest block and slides.  Emitted blocks
are frozen: their positions carry pinned LLRs of very large magnitude so
they are never flipped nor erased, and plain sweeps mask writes to them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bch import BchCode
from .pc import DecodeSchedule, DecodeStats, _gd_rows, _hard, _ternary
from .softcore import CombiningLut

SCC_DECODER_KINDS = ("ibdd", "ideal-ibdd", "ibdd-sr", "ibdd-cr", "ibdd-cr-ee")

PIN_LLR = 1e4  # magnitude used for known/frozen positions


def scc_rate(code: BchCode) -> float:
    return 1.0 - 2.0 * (code.n - code.k) / code.n


class SccEncoder:
    """Streaming encoder; each call encodes one new staircase block."""

    def __init__(self, code: BchCode):
        if code.n % 2:
            raise ValueError("staircase needs an even component length "
                             "(shorten by one bit first)")
        self.code = code
        self.half = code.n // 2
        self.info_cols = code.k - self.half  # information columns per block
        if self.info_cols <= 0:
            raise ValueError("component code has no room for information bits")
        self.prev = np.zeros((self.half, self.half), dtype=np.uint8)

    def encode_block(self, info: np.ndarray) -> np.ndarray:
        info = np.asarray(info, dtype=np.uint8)
        if info.shape != (self.half, self.info_cols):
            raise ValueError(f"info block must be {self.half}x{self.info_cols}")
        rows = self.code.encode(np.concatenate([self.prev.T, info], axis=1))
        block = np.ascontiguousarray(rows[:, self.half:])
        self.prev = block
        return block

    def encode_stream(self, info_blocks) -> list[np.ndarray]:
        return [self.encode_block(b) for b in info_blocks]


@dataclass
class _WinEntry:
    hard: np.ndarray
    llr: np.ndarray
    transmitted: np.ndarray | None = None


@dataclass
class SccDecodeResult:
    blocks: list = field(default_factory=list)        # emitted hard decisions
    stats: DecodeStats = field(default_factory=DecodeStats)


class WindowDecoder:
    """Sliding-window decoder over a staircase stream."""

    def __init__(self, code: BchCode, kind: str, window_size: int = 7,
                 schedule: DecodeSchedule | None = None,
                 lut: CombiningLut | None = None, sr_weights=None):
        if kind not in SCC_DECODER_KINDS:
            raise ValueError(f"unknown decoder kind {kind!r}")
        if code.n % 2:
            raise ValueError("component length must be even")
        if kind in ("ibdd-cr", "ibdd-cr-ee") and lut is None:
            raise ValueError(f"{kind} needs a combining table")
        if kind == "ibdd-sr" and sr_weights is None:
            raise ValueError("ibdd-sr needs scaling factors")
        self.code = code
        self.kind = kind
        self.window_size = window_size
        self.schedule = schedule or DecodeSchedule()
        self.lut = lut
        self.sr_weights = None if sr_weights is None else [float(w) for w in sr_weights]
        self.half = code.n // 2
        self.branch2 = True
        self.stats = DecodeStats()
        self._window: list[_WinEntry] = []
        # Block to the left of the window: starts as the known all-zero B_0.
        self._left_hard = np.zeros((self.half, self.half), dtype=np.uint8)
        self._left_transmitted = np.zeros((self.half, self.half), dtype=np.uint8)

    # -- streaming interface -------------------------------------------

    def push(self, llr_block: np.ndarray, transmitted: np.ndarray | None = None):
        """Feed one received block; returns the emitted block once full."""
        llr_block = np.asarray(llr_block, dtype=np.float64)
        if llr_block.shape != (self.half, self.half):
            raise ValueError(f"LLR block must be {self.half}x{self.half}")
        self._window.append(_WinEntry(hard=_hard(llr_block), llr=llr_block.copy(),
                                      transmitted=transmitted))
        if len(self._window) < self.window_size:
            return None
        self._run_budget()
        return self._emit()

    def flush(self) -> list[np.ndarray]:
        """Decode and emit everything still inside the window."""
        out = []
        while self._window:
            self._run_budget()
            out.append(self._emit())
        return out

    # -- internals -------------------------------------------------------

    def _emit(self) -> np.ndarray:
        entry = self._window.pop(0)
        self._left_hard = entry.hard
        if entry.transmitted is not None:
            self._left_transmitted = entry.transmitted
        return entry.hard

    def _run_budget(self) -> None:
        if self.kind in ("ibdd", "ideal-ibdd"):
            for _ in range(self.schedule.total):
                self._sweep_plain(genie=self.kind == "ideal-ibdd")
        else:
            for ell in range(1, self.schedule.soft_iters + 1):
                self._sweep_soft(ell)
            for _ in range(self.schedule.plain_iters):
                self._sweep_plain(genie=False)

    def _sweep(self, update_rows) -> None:
        """One oldest-to-newest pass over the block pairs.

        Pairs are built lazily so each one sees the state already updated by
        the pair before it inside the same sweep (the pairs of a sweep are
        sequentially dependent through their shared blocks).
        """
        half = self.half
        prev: _WinEntry | None = None
        for entry in self._window:
            if prev is None:
                left_hard = self._left_hard
                left_llr = (1.0 - 2.0 * left_hard.astype(np.float64)) * PIN_LLR
                left_tx = self._left_transmitted
            else:
                left_hard = prev.hard
                left_llr = prev.llr
                left_tx = prev.transmitted
            rows = np.concatenate([left_hard.T, entry.hard], axis=1)
            llrs = np.concatenate([left_llr.T, entry.llr], axis=1)
            if entry.transmitted is not None and left_tx is not None:
                tx = np.concatenate([left_tx.T, entry.transmitted], axis=1)
            else:
                tx = None
            new_rows = update_rows(rows, llrs, tx)
            if prev is not None:
                prev.hard = np.ascontiguousarray(new_rows[:, :half].T)
            entry.hard = np.ascontiguousarray(new_rows[:, half:])
            prev = entry

    def _sweep_plain(self, genie: bool) -> None:
        def update(rows, llrs, tx):
            batch = self.code.decode_batch(rows)
            ok = batch.ok
            if genie:
                if tx is None:
                    raise ValueError("the genie decoder needs transmitted blocks")
                ok = ok & ~(batch.words != tx).any(axis=1)
            self._note(ok, batch.words, tx)
            new_rows = rows.copy()
            new_rows[ok] = batch.words[ok]
            return new_rows

        self._sweep(update)

    def _sweep_soft(self, ell: int) -> None:
        def update(rows, llrs, tx):
            if self.kind == "ibdd-sr":
                w = self.sr_weights[min(ell, len(self.sr_weights)) - 1]
                batch = self.code.decode_batch(rows)
                M = _ternary(batch.ok, batch.words)
                self._note(batch.ok, batch.words, tx)
                return _hard(llrs + w * M)
            if self.kind == "ibdd-cr":
                return self._row_update_cr(rows, llrs, ell, tx)
            return self._row_update_cr_ee(rows, llrs, ell, tx)

        self._sweep(update)

    def _note(self, ok, words, tx) -> None:
        self.stats.component_decodes += len(ok)
        self.stats.failures += int((~ok).sum())
        if tx is not None and ok.any():
            self.stats.miscorrections += int((words[ok] != tx[ok]).any(axis=1).sum())

    def _row_update_cr(self, rows, llrs, ell, tx=None):
        batch = self.code.decode_batch(rows)
        M = _ternary(batch.ok, batch.words)
        self._note(batch.ok, batch.words, tx)
        return _hard(llrs + self.lut.weight(ell) * M)

    def _row_update_cr_ee(self, rows, llrs, ell, tx=None):
        return bee_scc_row_update(self.code, rows, llrs, self.lut, ell,
                                  branch2=self.branch2, stats=self.stats,
                                  transmitted=tx)


def bee_scc_row_update(code: BchCode, rows: np.ndarray, llr_rows: np.ndarray,
                       lut: CombiningLut, iteration: int, branch2: bool = True,
                       stats: DecodeStats | None = None, transmitted=None):
    """Two-attempt in-place update of block-pair rows.

    Branch 1 is the combined-reliability update; its output reliabilities
    rank the two bits erased for the errors-and-erasures branch.  Each
    candidate is scored by generalized distance against the current hard
    decisions with the candidate's own reliabilities; the lower score wins
    and ties keep branch 1.  Only the updated hard rows leave this function.
    """
    n = code.n
    w = lut.weight(iteration)
    b1 = code.decode_batch(rows)
    M1 = _ternary(b1.ok, b1.words)
    L1 = llr_rows + w * M1
    psi1 = _hard(L1)
    rel1 = np.abs(L1)
    d1 = np.where(b1.ok, _gd_rows(psi1, rows, rel1), float(2 * n))
    if not branch2:
        if stats is not None:
            stats.component_decodes += len(b1.ok)
            stats.failures += int((~b1.ok).sum())
            if transmitted is not None and b1.ok.any():
                stats.miscorrections += int(
                    (b1.words[b1.ok] != transmitted[b1.ok]).any(axis=1).sum())
        return psi1

    order = np.argsort(rel1, axis=1, kind="stable")
    erasures = order[:, :2]
    b2 = code.decode_batch(rows, list(erasures))
    M2 = _ternary(b2.ok, b2.words)
    L2 = llr_rows + w * M2
    psi2 = _hard(L2)
    d2 = np.where(b2.ok, _gd_rows(psi2, rows, np.abs(L2)), float(2 * n))
    use2 = d2 < d1
    if stats is not None:
        ok = np.where(use2, b2.ok, b1.ok)
        words = np.where(use2[:, None], b2.words, b1.words)
        stats.component_decodes += len(ok)
        stats.failures += int((~ok).sum())
        if transmitted is not None and ok.any():
            stats.miscorrections += int(
                (words[ok] != transmitted[ok]).any(axis=1).sum())
    return np.where(use2[:, None], psi2, psi1)
