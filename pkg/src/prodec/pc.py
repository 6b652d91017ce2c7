"""Product-code encoding and the iterative decoder family.

Decoder kinds
-------------
``ibdd``
    Plain iterative bounded-distance decoding; rows and columns exchange
    hard decisions, failed component decodes pass their input through.
``ideal-ibdd``
    Same, but a genie discards every miscorrected component word.
``ibdd-sr``
    Scaled reliability: each bit is re-decided as the sign of
    ``w_l * outcome + channel_llr`` with a per-iteration scalar weight.
``ibdd-cr``
    Combined reliability: the scalar weights come from a density-evolution
    combining table, and the phases exchange ternary component outcomes
    from which the receiving phase reconstructs both the hard decisions
    and their reliabilities.
``ibdd-cr-ee``
    Combined reliability plus a second decoding attempt per component word:
    the two least reliable bits are erased and errors-and-erasures decoding
    produces an alternative candidate; the generalized-distance score picks
    the winner.

All soft-aided kinds run ``soft_iters`` iterations followed by
``plain_iters`` appended plain-iBDD iterations that ignore reliabilities
(they recover bits whose channel LLR is confidently wrong).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bch import BchCode, TernaryWord
from .softcore import CombiningLut, pack, unpack

DECODER_KINDS = ("ibdd", "ideal-ibdd", "ibdd-sr", "ibdd-cr", "ibdd-cr-ee")


@dataclass
class DecodeSchedule:
    soft_iters: int = 10
    plain_iters: int = 2

    def __post_init__(self):
        if self.soft_iters + self.plain_iters < 1:
            raise ValueError("schedule must contain at least one iteration")

    @property
    def total(self) -> int:
        return self.soft_iters + self.plain_iters


@dataclass
class DecodeStats:
    component_decodes: int = 0
    failures: int = 0
    miscorrections: int = 0
    ber_trajectory: list = field(default_factory=list)


@dataclass
class PcDecodeResult:
    bits: np.ndarray
    info_bits: np.ndarray
    stats: DecodeStats


def pc_encode(code: BchCode, info: np.ndarray) -> np.ndarray:
    """Encode a k x k information array into an n x n product block."""
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.k, code.k):
        raise ValueError(f"information array must be {code.k}x{code.k}")
    rows = code.encode(info)          # k x n, each row a codeword
    block = code.encode(rows.T).T     # encode columns; parity-on-parity is consistent
    return block


def pc_rate(code: BchCode) -> float:
    return (code.k / code.n) ** 2


# ----------------------------------------------------------------------
# phase helpers (row orientation; callers transpose for column phases)
# ----------------------------------------------------------------------

def _ternary(batch_ok: np.ndarray, batch_words: np.ndarray) -> np.ndarray:
    """Ternary outcome grid: +-1 for decoded rows, all-zero rows on failure."""
    M = np.zeros(batch_words.shape, dtype=np.int8)
    M[batch_ok] = (1 - 2 * batch_words[batch_ok].astype(np.int8))
    return M


def _hard(llrs: np.ndarray) -> np.ndarray:
    return (llrs < 0).astype(np.uint8)


def _gd_rows(a: np.ndarray, b: np.ndarray, rel: np.ndarray) -> np.ndarray:
    """Row-wise generalized distance with per-row max normalization."""
    peak = rel.max(axis=1, keepdims=True)
    alpha = np.divide(rel, peak, out=np.zeros_like(rel), where=peak > 0)
    sgn = np.where(a != b, 1.0, -1.0)
    return a.shape[1] + (alpha * sgn).sum(axis=1)


def _count(stats: DecodeStats, ok: np.ndarray, words: np.ndarray, transmitted) -> None:
    stats.component_decodes += len(ok)
    stats.failures += int((~ok).sum())
    if transmitted is not None and ok.any():
        mis = (words[ok] != transmitted[ok]).any(axis=1)
        stats.miscorrections += int(mis.sum())


def ibdd_cr_row_phase(code: BchCode, M_prev: np.ndarray, prev_weight: float,
                      llr_rows: np.ndarray, lut: CombiningLut, iteration: int,
                      stats: DecodeStats | None = None, transmitted=None):
    """One combined-reliability phase over the rows of a block.

    Reconstructs the previous phase's hard decisions from its ternary
    outcomes, runs bounded-distance decoding, and combines the outcome with
    the channel LLRs.  Returns the new hard-decision rows and outcomes.
    """
    llr_in = llr_rows + prev_weight * M_prev
    psi_in = _hard(llr_in)
    batch = code.decode_batch(psi_in)
    M_new = _ternary(batch.ok, batch.words)
    if stats is not None:
        _count(stats, batch.ok, batch.words, transmitted)
    psi_out = _hard(llr_rows + lut.weight(iteration) * M_new)
    return psi_out, M_new


def bee_pc_row_phase(code: BchCode, M_prev: np.ndarray, prev_weight: float,
                     llr_rows: np.ndarray, lut: CombiningLut, iteration: int,
                     branch2: bool = True, stats: DecodeStats | None = None,
                     transmitted=None):
    """Two-attempt phase: bounded-distance branch plus an erasure branch.

    Branch scores are generalized distances against the reconstructed input
    decisions using the reconstructed input reliabilities; a failed branch
    scores the 2n maximum, and ties keep the bounded-distance branch.
    """
    n = code.n
    llr_in = llr_rows + prev_weight * M_prev
    psi_in = _hard(llr_in)
    rel_in = np.abs(llr_in)
    w = lut.weight(iteration)

    b1 = code.decode_batch(psi_in)
    M1 = _ternary(b1.ok, b1.words)
    psi1 = _hard(llr_rows + w * M1)
    d1 = np.where(b1.ok, _gd_rows(psi1, psi_in, rel_in), float(2 * n))

    if branch2:
        order = np.argsort(rel_in, axis=1, kind="stable")
        erasures = order[:, :2]
        b2 = code.decode_batch(psi_in, list(erasures))
        M2 = _ternary(b2.ok, b2.words)
        psi2 = _hard(llr_rows + w * M2)
        d2 = np.where(b2.ok, _gd_rows(psi2, psi_in, rel_in), float(2 * n))
        use2 = d2 < d1
        M_new = np.where(use2[:, None], M2, M1)
        psi_out = np.where(use2[:, None], psi2, psi1)
        ok = np.where(use2, b2.ok, b1.ok)
        words = np.where(use2[:, None], b2.words, b1.words)
    else:
        M_new, psi_out, ok, words = M1, psi1, b1.ok, b1.words
    if stats is not None:
        _count(stats, ok, words, transmitted)
    return psi_out, M_new


def _plain_phase(code: BchCode, grid_rows: np.ndarray,
                 stats: DecodeStats | None = None, transmitted=None,
                 genie: bool = False) -> np.ndarray:
    batch = code.decode_batch(grid_rows)
    ok = batch.ok
    if genie:
        if transmitted is None:
            raise ValueError("the genie decoder needs the transmitted block")
        ok = ok & ~(batch.words != transmitted).any(axis=1)
    if stats is not None:
        _count(stats, ok, batch.words, transmitted)
    out = grid_rows.copy()
    out[ok] = batch.words[ok]
    return out


def _sr_phase(code: BchCode, grid_rows: np.ndarray, llr_rows: np.ndarray,
              weight: float, stats: DecodeStats | None = None,
              transmitted=None) -> np.ndarray:
    batch = code.decode_batch(grid_rows)
    M = _ternary(batch.ok, batch.words)
    if stats is not None:
        _count(stats, batch.ok, batch.words, transmitted)
    return _hard(llr_rows + weight * M)


def _repack(M: np.ndarray) -> np.ndarray:
    """Round-trip a ternary outcome grid through the (n+1)-bit messages."""
    out = np.empty_like(M)
    for i in range(M.shape[0]):
        row = M[i]
        word = TernaryWord(values=row, decoded=bool(row.any()))
        out[i] = unpack(pack(word)).values
    return out


# ----------------------------------------------------------------------
# full decoders
# ----------------------------------------------------------------------

def pc_decode(code: BchCode, received: np.ndarray, llr_grid: np.ndarray | None,
              kind: str, schedule: DecodeSchedule | None = None,
              lut: CombiningLut | None = None, sr_weights=None,
              transmitted: np.ndarray | None = None, branch2: bool = True,
              packed_messages: bool = False) -> PcDecodeResult:
    """Decode one product block with the selected decoder kind."""
    if kind not in DECODER_KINDS:
        raise ValueError(f"unknown decoder kind {kind!r}")
    schedule = schedule or DecodeSchedule()
    n = code.n
    received = np.asarray(received, dtype=np.uint8)
    if received.shape != (n, n):
        raise ValueError(f"received block must be {n}x{n}")
    if llr_grid is not None:
        llr_grid = np.asarray(llr_grid, dtype=np.float64)
        if llr_grid.shape != (n, n):
            raise ValueError("LLR grid shape mismatch")
    stats = DecodeStats()

    def note(grid):
        if transmitted is not None:
            stats.ber_trajectory.append(float((grid != transmitted).mean()))

    if kind in ("ibdd", "ideal-ibdd"):
        genie = kind == "ideal-ibdd"
        grid = received.copy()
        for _ in range(schedule.total):
            grid = _plain_phase(code, grid, stats, transmitted, genie)
            grid = _plain_phase(code, grid.T, stats,
                                None if transmitted is None else transmitted.T,
                                genie).T
            note(grid)
    elif kind == "ibdd-sr":
        if sr_weights is None:
            raise ValueError("ibdd-sr needs per-iteration scaling factors")
        if llr_grid is None:
            raise ValueError("soft-aided decoding needs the channel LLR grid")
        weights = list(sr_weights)
        if len(weights) < schedule.soft_iters:
            raise ValueError("not enough scaling factors for the schedule")
        grid = received.copy()
        for ell in range(1, schedule.soft_iters + 1):
            w = float(weights[ell - 1])
            grid = _sr_phase(code, grid, llr_grid, w, stats, transmitted)
            grid = _sr_phase(code, grid.T, llr_grid.T, w, stats,
                             None if transmitted is None else transmitted.T).T
            note(grid)
        for _ in range(schedule.plain_iters):
            grid = _plain_phase(code, grid, stats, transmitted)
            grid = _plain_phase(code, grid.T, stats,
                                None if transmitted is None else transmitted.T).T
            note(grid)
    else:
        if lut is None:
            raise ValueError(f"{kind} needs a combining table")
        if llr_grid is None:
            raise ValueError("soft-aided decoding needs the channel LLR grid")
        if lut.iterations < schedule.soft_iters:
            raise ValueError("combining table shorter than the schedule")
        M = np.zeros((n, n), dtype=np.int8)
        prev_w = 0.0
        ttr = None if transmitted is None else transmitted.T
        for ell in range(1, schedule.soft_iters + 1):
            w = lut.weight(ell)
            if kind == "ibdd-cr":
                _, M = ibdd_cr_row_phase(code, M, prev_w, llr_grid, lut, ell,
                                         stats, transmitted)
            else:
                _, M = bee_pc_row_phase(code, M, prev_w, llr_grid, lut, ell,
                                        branch2, stats, transmitted)
            if packed_messages:
                M = _repack(M)
            prev_w = w
            if kind == "ibdd-cr":
                _, Mt = ibdd_cr_row_phase(code, M.T, prev_w, llr_grid.T, lut,
                                          ell, stats, ttr)
            else:
                _, Mt = bee_pc_row_phase(code, M.T, prev_w, llr_grid.T, lut,
                                         ell, branch2, stats, ttr)
            M = Mt.T
            if packed_messages:
                M = _repack(M.T).T
            prev_w = w
            note(_hard(llr_grid + prev_w * M))
        grid = _hard(llr_grid + prev_w * M)
        for _ in range(schedule.plain_iters):
            grid = _plain_phase(code, grid, stats, transmitted)
            grid = _plain_phase(code, grid.T, stats,
                                None if transmitted is None else transmitted.T).T
            note(grid)

    return PcDecodeResult(bits=grid, info_bits=grid[:code.k, :code.k], stats=stats)


def ibdd_decode(code, received, schedule=None, transmitted=None):
    return pc_decode(code, received, None, "ibdd", schedule, transmitted=transmitted)


def ideal_ibdd_decode(code, received, transmitted, schedule=None):
    return pc_decode(code, received, None, "ideal-ibdd", schedule,
                     transmitted=transmitted)


def ibdd_sr_decode(code, received, llr_grid, sr_weights, schedule=None,
                   transmitted=None):
    return pc_decode(code, received, llr_grid, "ibdd-sr", schedule,
                     sr_weights=sr_weights, transmitted=transmitted)


def soft_reference_decode(code: BchCode, llr_grid: np.ndarray, kind: str,
                          schedule: DecodeSchedule | None = None,
                          lut: CombiningLut | None = None,
                          branch2: bool = True) -> PcDecodeResult:
    """Reference implementation passing soft state between phases directly.

    Instead of exchanging ternary outcomes and reconstructing the hard
    decisions and reliabilities locally, each phase hands the next one its
    combined LLR grid.  Exists to cross-check the message-passing
    implementation; the two must agree bit for bit.
    """
    if kind not in ("ibdd-cr", "ibdd-cr-ee"):
        raise ValueError("reference decoder covers the combined-reliability kinds")
    schedule = schedule or DecodeSchedule()
    if lut is None:
        raise ValueError("needs a combining table")
    n = code.n
    llr_grid = np.asarray(llr_grid, dtype=np.float64)
    stats = DecodeStats()

    def phase(llr_in_rows, llr_rows, ell):
        psi_in = _hard(llr_in_rows)
        rel_in = np.abs(llr_in_rows)
        w = lut.weight(ell)
        b1 = code.decode_batch(psi_in)
        M1 = _ternary(b1.ok, b1.words)
        L1 = llr_rows + w * M1
        if kind == "ibdd-cr":
            return L1
        d1 = np.where(b1.ok, _gd_rows(_hard(L1), psi_in, rel_in), float(2 * n))
        if branch2:
            order = np.argsort(rel_in, axis=1, kind="stable")
            b2 = code.decode_batch(psi_in, list(order[:, :2]))
            M2 = _ternary(b2.ok, b2.words)
            L2 = llr_rows + w * M2
            d2 = np.where(b2.ok, _gd_rows(_hard(L2), psi_in, rel_in), float(2 * n))
            return np.where((d2 < d1)[:, None], L2, L1)
        return L1

    L_state = llr_grid.copy()  # combined LLRs from the previous phase
    for ell in range(1, schedule.soft_iters + 1):
        L_state = phase(L_state, llr_grid, ell)
        L_state = phase(L_state.T, llr_grid.T, ell).T
    grid = _hard(L_state)
    for _ in range(schedule.plain_iters):
        grid = _plain_phase(code, grid, stats)
        grid = _plain_phase(code, grid.T, stats).T
    return PcDecodeResult(bits=grid, info_bits=grid[:code.k, :code.k], stats=stats)
