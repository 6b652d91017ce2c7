"""BER reporting toolkit for prodec sweep CSVs."""

from .curves import (SHANNON_LIMITS_DB, Curve, gain_db, gain_table,
                     load_curve, snr_at_ber)
from .figure import render

__all__ = ["Curve", "load_curve", "snr_at_ber", "gain_db", "gain_table",
           "render", "SHANNON_LIMITS_DB"]
