import math

import pytest

from reportplots import (Curve, gain_db, gain_table, load_curve, render,
                         snr_at_ber)
from reportplots.cli import main as cli_main

CSV_A = """# prodec-sweep-csv v1
snr_db,bits,bit_errors,ber,block_errors,miscorrections,failures,seconds,seed,flag
2.0,1000000,20000,0.02,10,5,5,1.0,1,
2.5,1000000,3000,0.003,8,4,4,1.0,1,
3.0,1000000,200,0.0002,5,3,3,1.0,1,
3.5,1000000,10,1e-05,1,1,1,1.0,1,
"""

CSV_B = """# prodec-sweep-csv v1
snr_db,bits,bit_errors,ber,block_errors,miscorrections,failures,seconds,seed,flag
1.5,1000000,25000,0.025,10,5,5,1.0,1,
2.0,1000000,2500,0.0025,9,4,4,1.0,1,
2.5,1000000,120,0.00012,4,2,2,1.0,1,
3.0,1000000,6,6e-06,1,1,1,1.0,1,
"""


@pytest.fixture
def csv_paths(tmp_path):
    a = tmp_path / "plain.csv"
    a.write_text(CSV_A)
    b = tmp_path / "assisted.csv"
    b.write_text(CSV_B)
    return a, b


def hand_interpolated_snr(snrs, bers, target):
    # independent reference computation for the crossing
    for i in range(len(snrs) - 1):
        l0, l1 = math.log10(bers[i]), math.log10(bers[i + 1])
        lt = math.log10(target)
        if l1 <= lt <= l0:
            return snrs[i] + (lt - l0) / (l1 - l0) * (snrs[i + 1] - snrs[i])
    raise AssertionError("target not bracketed")


class TestCurves:
    def test_load(self, csv_paths):
        a, _ = csv_paths
        curve = load_curve(a)
        assert curve.label == "plain"
        assert curve.snr_db == [2.0, 2.5, 3.0, 3.5]
        assert curve.ber[0] == 0.02

    def test_schema_rejected(self, tmp_path):
        bad = tmp_path / "x.csv"
        bad.write_text("snr,ber\n1,0.1\n")
        with pytest.raises(ValueError):
            load_curve(bad)

    def test_validation(self):
        with pytest.raises(ValueError):
            Curve("x", [1.0, 2.0], [0.1, 0.0])      # BER must be positive
        with pytest.raises(ValueError):
            Curve("x", [2.0, 1.0], [0.1, 0.01])     # SNR must increase

    def test_interpolation_matches_hand_computation(self, csv_paths):
        a, b = csv_paths
        ca, cb = load_curve(a), load_curve(b)
        target = 1e-4
        want_a = hand_interpolated_snr(ca.snr_db, ca.ber, target)
        want_b = hand_interpolated_snr(cb.snr_db, cb.ber, target)
        assert snr_at_ber(ca, target) == pytest.approx(want_a, abs=1e-9)
        assert gain_db(ca, cb, target) == pytest.approx(want_a - want_b,
                                                        abs=1e-6)

    def test_gain_antisymmetric(self, csv_paths):
        a, b = csv_paths
        ca, cb = load_curve(a), load_curve(b)
        assert gain_db(ca, cb, 1e-3) == pytest.approx(-gain_db(cb, ca, 1e-3),
                                                      abs=1e-9)

    def test_extrapolation_refused(self, csv_paths):
        a, _ = csv_paths
        curve = load_curve(a)
        with pytest.raises(ValueError):
            snr_at_ber(curve, 1e-9)
        with pytest.raises(ValueError):
            snr_at_ber(curve, 0.5)

    def test_non_monotone_segment_skipped(self):
        curve = Curve("bump", [1.0, 2.0, 3.0], [1e-2, 2e-2, 1e-4])
        # the rising 1e-2 -> 2e-2 segment is not a waterfall; the crossing
        # must come from the falling one
        got = snr_at_ber(curve, 1e-3)
        assert 2.0 < got < 3.0

    def test_gain_table_renders(self, csv_paths):
        a, b = csv_paths
        text = gain_table([load_curve(a), load_curve(b)], 1e-4)
        assert "plain" in text and "assisted" in text


class TestFigure:
    def test_two_curve_figure(self, csv_paths, tmp_path):
        a, b = csv_paths
        out = tmp_path / "fig.png"
        render([load_curve(a), load_curve(b)], out, limits="C2")
        data = out.read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(data) > 10_000

    def test_render_deterministic(self, csv_paths, tmp_path):
        a, b = csv_paths
        curves = [load_curve(a), load_curve(b)]
        p1, p2 = tmp_path / "f1.png", tmp_path / "f2.png"
        render(curves, p1)
        render(curves, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_unknown_limits(self, csv_paths, tmp_path):
        a, _ = csv_paths
        with pytest.raises(ValueError):
            render([load_curve(a)], tmp_path / "x.png", limits="C9")


class TestCli:
    def test_figure_and_gain(self, csv_paths, tmp_path, capsys):
        a, b = csv_paths
        out = tmp_path / "cli.png"
        rc = cli_main([str(a), str(b), "--out", str(out),
                       "--labels", "plain,assisted",
                       "--gain-at", "1e-4", "--limits", "C2"])
        assert rc == 0
        assert out.exists()
        captured = capsys.readouterr().out
        assert "gain at BER 0.0001" in captured

    def test_usage_error(self, csv_paths, capsys):
        a, _ = csv_paths
        assert cli_main([str(a)]) == 2
        assert "error" in capsys.readouterr().err
