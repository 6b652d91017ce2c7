"""Figure rendering: log-BER waterfall plots with reference limit markers."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .curves import SHANNON_LIMITS_DB, Curve


def render(curves: list[Curve], out_path, title: str | None = None,
           limits: str | None = None) -> None:
    """Write a BER-vs-SNR figure; one line per curve, log BER axis.

    ``limits`` names a code fixture (``C2`` or ``C2:scc``) whose HD/SD
    Shannon-limit columns are drawn as vertical markers.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.4), dpi=120)
    for curve in curves:
        ax.semilogy(curve.snr_db, curve.ber, marker="o", label=curve.label)
    if limits:
        code_id, _, structure = limits.partition(":")
        structure = structure or "pc"
        try:
            hd, sd = SHANNON_LIMITS_DB[code_id][structure]
        except KeyError as exc:
            raise ValueError(f"no reference limits for {limits!r}") from exc
        ax.axvline(hd, color="gray", linestyle="--", linewidth=1.0)
        ax.axvline(sd, color="gray", linestyle=":", linewidth=1.0)
        ax.text(hd, ax.get_ylim()[0], " HD limit", rotation=90,
                va="bottom", ha="right", fontsize=8, color="gray")
        ax.text(sd, ax.get_ylim()[0], " SD limit", rotation=90,
                va="bottom", ha="right", fontsize=8, color="gray")
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    # strip the writer's software tag so renders are byte-stable
    fig.savefig(out_path, metadata={"Software": None})
    plt.close(fig)
