"""Shared soft-aided decoding machinery.

Houses the LLR hard mapping, the generalized-distance score used to pick
between decoding attempts, the per-iteration combining table that turns a
component-decoder outcome into an additive reliability, least-reliable-bit
selection, and the (n+1)-bit packing of ternary outcome messages.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .bch import TernaryWord

#: Default clamp for combining weights when the error side of the
#: log-ratio estimate underflows to zero counts.
W_MAX_DEFAULT = float(np.log(1e6))


def hard_map(llr):
    """Map LLRs to bits: positive -> 0, negative -> 1, exact zero -> 0.

    Accepts scalars or arrays.
    """
    arr = np.asarray(llr)
    bits = (arr < 0).astype(np.uint8)
    return bits if arr.ndim else int(bits)


def gd(a_bits: np.ndarray, b_bits: np.ndarray, reliabilities: np.ndarray) -> float:
    """Generalized distance between two binary words.

    Reliabilities are normalized by their maximum (all-zero input gives
    all-zero normalized reliabilities); matching positions contribute
    ``1 - alpha`` and differing positions ``1 + alpha``, so the score lies
    in ``[0, 2n]``.
    """
    a = np.asarray(a_bits)
    b = np.asarray(b_bits)
    r = np.asarray(reliabilities, dtype=np.float64)
    if a.shape != b.shape or a.shape != r.shape:
        raise ValueError("length mismatch between words and reliabilities")
    if np.any(r < 0):
        raise ValueError("reliabilities must be non-negative")
    peak = r.max() if r.size else 0.0
    alpha = r / peak if peak > 0 else np.zeros_like(r)
    mismatch = a != b
    return float(np.sum(np.where(mismatch, 1.0 + alpha, 1.0 - alpha)))


def two_least_reliable(magnitudes: np.ndarray) -> tuple[int, int]:
    """Indices of the two smallest magnitudes; ties resolve to lower index."""
    mags = np.asarray(magnitudes)
    if mags.ndim != 1 or len(mags) < 2:
        raise ValueError("need at least two reliabilities")
    order = np.argsort(mags, kind="stable")
    return int(order[0]), int(order[1])


@dataclass
class CombiningLut:
    """Additive reliability magnitudes per decoding iteration.

    ``weights[i]`` is the magnitude applied at iteration ``i + 1`` to a
    decoded outcome (sign follows the decoded bit); failures always map to
    zero.  One magnitude is shared by the row and column phase of an
    iteration.  ``clamped`` flags iterations where the error-count estimate
    degenerated and the weight was clamped to ``w_max``.
    """

    weights: list[float]
    code_id: str = ""
    sigma: float = float("nan")
    mod_order: int = 2
    w_max: float = W_MAX_DEFAULT
    clamped: list[int] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.weights)

    def weight(self, iteration: int) -> float:
        """Weight for 1-based ``iteration``; 0 is the no-information input."""
        if iteration == 0:
            return 0.0
        if not 1 <= iteration <= len(self.weights):
            raise IndexError(
                f"iteration {iteration} outside table range 1..{len(self.weights)}")
        return self.weights[iteration - 1]

    def lookup(self, outcome: TernaryWord, iteration: int) -> np.ndarray:
        """Per-bit additive reliability of a component outcome."""
        w = self.weight(iteration)
        if not outcome.decoded:
            return np.zeros(len(outcome.values))
        return outcome.values * w

    # -- serialization -------------------------------------------------

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write("# prodec combining table v1\n")
        buf.write(f"code = {self.code_id}\n")
        buf.write(f"sigma = {self.sigma!r}\n")
        buf.write(f"M = {self.mod_order}\n")
        buf.write(f"w_max = {self.w_max!r}\n")
        buf.write(f"iterations = {len(self.weights)}\n")
        for i, w in enumerate(self.weights, start=1):
            mark = " clamped" if i in self.clamped else ""
            buf.write(f"w {i} {w!r}{mark}\n")
        return buf.getvalue()

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "CombiningLut":
        meta = {}
        weights = {}
        clamped = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("w "):
                parts = line.split()
                idx = int(parts[1])
                weights[idx] = float(parts[2])
                if "clamped" in parts[3:]:
                    clamped.append(idx)
            else:
                key, _, value = line.partition("=")
                meta[key.strip()] = value.strip()
            continue
        count = int(meta.get("iterations", len(weights)))
        if sorted(weights) != list(range(1, count + 1)):
            raise ValueError("combining table is missing iteration entries")
        return cls(
            weights=[weights[i] for i in range(1, count + 1)],
            code_id=meta.get("code", ""),
            sigma=float(meta.get("sigma", "nan")),
            mod_order=int(meta.get("M", "2")),
            w_max=float(meta.get("w_max", W_MAX_DEFAULT)),
            clamped=clamped,
        )

    @classmethod
    def load(cls, path) -> "CombiningLut":
        with open(path) as fh:
            return cls.loads(fh.read())

    @classmethod
    def constant(cls, weight: float, iterations: int, **meta) -> "CombiningLut":
        return cls(weights=[float(weight)] * iterations, **meta)


def lut_apply(outcome: TernaryWord, channel_llrs: np.ndarray, lut: CombiningLut,
              iteration: int) -> np.ndarray:
    """Combine a component outcome with the channel LLRs at ``iteration``."""
    llrs = np.asarray(channel_llrs, dtype=np.float64)
    if len(outcome.values) != len(llrs):
        raise ValueError("length mismatch between outcome and channel LLRs")
    return lut.lookup(outcome, iteration) + llrs


@dataclass
class PackedMessage:
    """Flag bit plus n payload bits (+1 -> 0, -1 -> 1; zeros on failure)."""

    bits: np.ndarray  # uint8, length n + 1

    @property
    def n(self) -> int:
        return len(self.bits) - 1


def pack(word: TernaryWord) -> PackedMessage:
    n = len(word.values)
    bits = np.zeros(n + 1, dtype=np.uint8)
    if word.decoded:
        bits[0] = 1
        bits[1:] = (word.values < 0).astype(np.uint8)
    return PackedMessage(bits=bits)


def unpack(message: PackedMessage) -> TernaryWord:
    bits = message.bits
    if bits[0] == 1:
        return TernaryWord.from_bits(bits[1:])
    if np.any(bits[1:]):
        raise ValueError("malformed message: failure flag with nonzero payload")
    return TernaryWord.failure(len(bits) - 1)


def packing_overhead(n: int) -> float:
    """Relative message-size increase of the (n+1)-bit format over n bits."""
    return (n + 1) / n - 1.0
