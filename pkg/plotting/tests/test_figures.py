"""Figure builders: data correctness, column validation, determinism."""

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from plots import (
    PlotSpec,
    plot_dof_convergence,
    plot_min_distance,
    plot_region2d,
    plot_ser,
    render,
)

SAMPLES = Path(__file__).resolve().parents[1] / "samples"
SAMPLE_FOR_KIND = {
    "ser-vs-P": SAMPLES / "ser_sweep.csv",
    "min-distance-loglog": SAMPLES / "min_distance.csv",
    "dof-convergence": SAMPLES / "dof_series.csv",
    "region-2d": SAMPLES / "region_k2.json",
}


def test_spec_rejects_unknown_kind():
    with pytest.raises(ValueError) as err:
        PlotSpec(kind="ber-vs-snr", input_path="a.csv", output_path="b.png")
    assert "ber-vs-snr" in str(err.value)


class TestSerFigure:
    def test_one_curve_per_receiver(self):
        fig = plot_ser(SAMPLES / "ser_sweep.csv")
        ax = fig.axes[0]
        labels = sorted(line.get_label() for line in ax.get_lines())
        assert labels == ["receiver 0", "receiver 1"]

    def test_curve_matches_csv_averages(self):
        frame = pd.read_csv(SAMPLES / "ser_sweep.csv")
        fig = plot_ser(SAMPLES / "ser_sweep.csv")
        line = {l.get_label(): l for l in fig.axes[0].get_lines()}["receiver 0"]
        sub = frame[frame["receiver"] == 0]
        expected = (1.0 - sub.groupby("P_db")["success"].mean()).to_numpy()
        got = line.get_ydata()
        assert np.array_equal(line.get_xdata(),
                              np.sort(sub["P_db"].unique()))
        for want, have in zip(expected, got):
            if want == 0.0:
                assert np.isnan(have)  # zeros cannot sit on a log axis
            else:
                assert have == pytest.approx(want, rel=0, abs=0)

    def test_missing_column_is_named(self, tmp_path):
        broken = tmp_path / "broken.csv"
        broken.write_text("P_db,receiver\n10.0,0\n")
        with pytest.raises(ValueError) as err:
            plot_ser(broken)
        assert "success" in str(err.value)
        assert str(broken) in str(err.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValueError) as err:
            plot_ser(tmp_path / "nope.csv")
        assert "not found" in str(err.value)


class TestMinDistanceFigure:
    def test_reference_line_has_documented_slope(self):
        fig = plot_min_distance(SAMPLES / "min_distance.csv")
        ax = fig.axes[0]
        ref = [l for l in ax.get_lines()
               if l.get_label().startswith("reference slope")][0]
        assert ref.get_label() == "reference slope -6"
        x, y = ref.get_xdata(), ref.get_ydata()
        slope = np.polyfit(np.log(x), np.log(y), 1)[0]
        assert slope == pytest.approx(-6.0, abs=1e-9)

    def test_fitted_slope_annotation_present(self):
        fig = plot_min_distance(SAMPLES / "min_distance.csv")
        texts = [t.get_text() for t in fig.axes[0].texts]
        assert any(t.startswith("fitted slope") for t in texts)

    def test_median_curve_matches_csv(self):
        frame = pd.read_csv(SAMPLES / "min_distance.csv")
        fig = plot_min_distance(SAMPLES / "min_distance.csv")
        ax = fig.axes[0]
        med = [l for l in ax.get_lines() if l.get_label().startswith("median")][0]
        expected = frame.groupby("Q")["d_min"].median().sort_index()
        assert np.array_equal(med.get_xdata(), expected.index.to_numpy())
        assert np.allclose(med.get_ydata(), expected.to_numpy(), rtol=0, atol=0)

    def test_rejects_all_degenerate_input(self, tmp_path):
        bad = tmp_path / "degenerate.csv"
        bad.write_text(
            "channel_seed,receiver,matrix,dim,K,M,N,n,D,Dp,Q,mode,d_min,q_min,degenerate\n"
            "0,0,raw,2,2,1,1,1,1,4,1,exhaustive,0.0,1 -2,1\n")
        with pytest.raises(ValueError) as err:
            plot_min_distance(bad)
        assert "non-degenerate" in str(err.value)

    def test_rejects_mixed_direction_counts(self, tmp_path):
        bad = tmp_path / "mixed.csv"
        bad.write_text(
            "channel_seed,receiver,matrix,dim,K,M,N,n,D,Dp,Q,mode,d_min,q_min,degenerate\n"
            "0,0,raw,5,2,1,1,1,1,4,1,exhaustive,0.5,1 0 0 0 0,0\n"
            "1,0,raw,10,2,1,1,2,2,8,1,exhaustive,0.25,1 0 0 0 0,0\n")
        with pytest.raises(ValueError) as err:
            plot_min_distance(bad)
        assert "mixes direction counts" in str(err.value)

    def test_missing_column_is_named(self, tmp_path):
        bad = tmp_path / "short.csv"
        bad.write_text("Q,d_min\n1,0.5\n")
        with pytest.raises(ValueError) as err:
            plot_min_distance(bad)
        message = str(err.value)
        for column in ("channel_seed", "D", "Dp", "degenerate"):
            assert column in message


class TestDofConvergenceFigure:
    def test_curve_and_asymptote(self):
        frame = pd.read_csv(SAMPLES / "dof_series.csv")
        fig = plot_dof_convergence(SAMPLES / "dof_series.csv")
        ax = fig.axes[0]
        curve = ax.get_lines()[0]
        assert np.array_equal(curve.get_xdata(),
                              np.sort(frame["n"].to_numpy()))
        assert np.all(np.diff(curve.get_ydata()) > 0)
        asymptote = [l for l in ax.get_lines()
                     if l.get_label().startswith("asymptote")][0]
        assert set(asymptote.get_ydata()) == {2.0}

    def test_rejects_inconsistent_limit(self, tmp_path):
        bad = tmp_path / "twolimits.csv"
        bad.write_text("n,total_dof,limit\n1,0.5,2.0\n2,0.8,3.0\n")
        with pytest.raises(ValueError) as err:
            plot_dof_convergence(bad)
        assert "inconsistent" in str(err.value)

    def test_missing_column_is_named(self, tmp_path):
        bad = tmp_path / "nolimit.csv"
        bad.write_text("n,total_dof\n1,0.5\n")
        with pytest.raises(ValueError) as err:
            plot_dof_convergence(bad)
        assert "limit" in str(err.value)


class TestRegionFigure:
    def test_polygon_matches_json_vertices(self):
        payload = json.loads((SAMPLES / "region_k2.json").read_text())
        fig = plot_region2d(SAMPLES / "region_k2.json")
        polygon = fig.axes[0].patches[0]
        drawn = {tuple(p) for p in polygon.get_xy()[:-1]}
        assert drawn == {tuple(v) for v in payload["vertices"]}

    def test_vertices_annotated_with_exact_fractions(self):
        fig = plot_region2d(SAMPLES / "region_k2.json")
        texts = {t.get_text() for t in fig.axes[0].texts}
        assert {"(0, 0)", "(1, 0)", "(0, 1)"} <= texts

    def test_missing_vertices_key(self, tmp_path):
        bad = tmp_path / "empty.json"
        bad.write_text(json.dumps({"K": 2, "M": 1, "N": 1}))
        with pytest.raises(ValueError) as err:
            plot_region2d(bad)
        assert "vertices" in str(err.value)

    def test_rejects_more_than_two_users(self, tmp_path):
        bad = tmp_path / "k3.json"
        bad.write_text(json.dumps({"K": 3, "vertices": [[0, 0], [1, 0],
                                                        [0, 1]]}))
        with pytest.raises(ValueError) as err:
            plot_region2d(bad)
        assert "two users" in str(err.value)

    def test_rejects_garbage_json(self, tmp_path):
        bad = tmp_path / "trunc.json"
        bad.write_text("{\"vertices\": [[0, 0")
        with pytest.raises(ValueError) as err:
            plot_region2d(bad)
        assert "parse" in str(err.value)


class TestRender:
    @pytest.mark.parametrize("kind", sorted(SAMPLE_FOR_KIND))
    def test_writes_nonempty_png(self, tmp_path, kind):
        out = tmp_path / f"{kind}.png"
        got = render(PlotSpec(kind=kind,
                              input_path=str(SAMPLE_FOR_KIND[kind]),
                              output_path=str(out)))
        assert got == out
        data = out.read_bytes()
        assert len(data) > 1000
        assert data[:8] == b"\x89PNG\r\n\x1a\n"

    def test_figure_data_is_deterministic(self):
        a = plot_ser(SAMPLES / "ser_sweep.csv")
        b = plot_ser(SAMPLES / "ser_sweep.csv")
        for la, lb in zip(a.axes[0].get_lines(), b.axes[0].get_lines()):
            assert np.array_equal(la.get_xdata(), lb.get_xdata())
            assert np.array_equal(la.get_ydata(), lb.get_ydata(),
                                  equal_nan=True)

    def test_input_file_untouched(self, tmp_path):
        src = SAMPLES / "dof_series.csv"
        before = src.read_bytes()
        render(PlotSpec(kind="dof-convergence", input_path=str(src),
                        output_path=str(tmp_path / "fig.png")))
        assert src.read_bytes() == before
