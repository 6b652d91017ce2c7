"""BER curve loading and log-domain gain computation.

Consumes the sweep CSV schema of the prodec harness (`# prodec-sweep-csv
v1` header plus named columns).  Gains between curves are horizontal gaps
at a target BER, interpolated linearly in log10(BER) versus SNR on a
bracketing monotone segment only; extrapolation beyond the measured
points is refused rather than fabricated.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

# Reference Shannon limits in dB at the product / staircase code rates,
# consumed as constants for figure markers: code id -> structure -> (HD, SD).
SHANNON_LIMITS_DB = {
    "C1": {"pc": (4.05, 2.64), "scc": (3.99, 2.74)},
    "C2": {"pc": (3.54, 2.23), "scc": (3.46, 2.14)},
    "C3": {"pc": (4.36, 3.15), "scc": (4.32, 3.11)},
}


@dataclass
class Curve:
    label: str
    snr_db: list[float]
    ber: list[float]

    def __post_init__(self):
        if len(self.snr_db) != len(self.ber) or not self.snr_db:
            raise ValueError("curve needs matching, non-empty SNR/BER lists")
        if any(b <= 0.0 or b > 1.0 for b in self.ber):
            raise ValueError(f"curve {self.label!r}: BER values must be in (0, 1]")
        if any(a >= b for a, b in zip(self.snr_db, self.snr_db[1:])):
            raise ValueError(f"curve {self.label!r}: SNR must increase strictly")


def load_curve(path, label: str | None = None) -> Curve:
    """Read one harness CSV into a curve (rows sorted by SNR)."""
    path = Path(path)
    rows = []
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# prodec-sweep-csv"):
            raise ValueError(f"{path}: not a prodec sweep CSV (missing schema line)")
        reader = csv.DictReader(fh)
        required = {"snr_db", "ber", "bit_errors"}
        if not required <= set(reader.fieldnames or ()):
            raise ValueError(f"{path}: schema mismatch, missing {required}")
        for rec in reader:
            rows.append((float(rec["snr_db"]), float(rec["ber"])))
    rows.sort()
    return Curve(label=label or path.stem,
                 snr_db=[r[0] for r in rows], ber=[r[1] for r in rows])


def snr_at_ber(curve: Curve, target_ber: float) -> float:
    """SNR where the curve crosses the target BER.

    Interpolates linearly in log10(BER) on the first bracketing segment
    whose BER decreases with SNR; raises when the target is outside every
    measured segment.
    """
    if target_ber <= 0:
        raise ValueError("target BER must be positive")
    lt = math.log10(target_ber)
    for (s0, b0), (s1, b1) in zip(zip(curve.snr_db, curve.ber),
                                  zip(curve.snr_db[1:], curve.ber[1:])):
        if b1 >= b0:
            continue  # not a waterfall segment
        l0, l1 = math.log10(b0), math.log10(b1)
        if l1 <= lt <= l0:
            frac = (lt - l0) / (l1 - l0)
            return s0 + frac * (s1 - s0)
    raise ValueError(
        f"curve {curve.label!r} never crosses BER {target_ber:g} inside the "
        "measured points (refusing to extrapolate)")


def gain_db(reference: Curve, improved: Curve, target_ber: float) -> float:
    """Horizontal dB gap at the target BER; positive when ``improved``
    reaches it at a lower SNR than ``reference``."""
    return snr_at_ber(reference, target_ber) - snr_at_ber(improved, target_ber)


def gain_table(curves: list[Curve], target_ber: float) -> str:
    lines = [f"gain at BER {target_ber:g} (row minus column, dB)"]
    header = "          " + "  ".join(f"{c.label[:10]:>10s}" for c in curves)
    lines.append(header)
    for a in curves:
        cells = []
        for b in curves:
            try:
                cells.append(f"{gain_db(b, a, target_ber):10.3f}")
            except ValueError:
                cells.append(f"{'n/a':>10s}")
        lines.append(f"{a.label[:10]:>10s} " + " ".join(cells))
    return "\n".join(lines)
