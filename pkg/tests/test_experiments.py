import numpy as np
import pytest

from risnoma import DomainError
from risnoma.experiments import (
    CSV_COLUMNS,
    Experiment,
    PRESETS,
    Series,
    parse_config,
    preset,
    run_experiment,
    serialize_config,
)


def _tiny_experiment(**kw) -> Experiment:
    base = dict(
        scenario="internal",
        sweep_var="d_u2",
        sweep_start=2.5,
        sweep_stop=3.0,
        sweep_step=0.5,
        series=(Series("proposed_internal", 4, 4), Series("baseline_alg4", 4, 4)),
        trials=8,
        seed=3,
    )
    base.update(kw)
    return Experiment(**base)


def test_series_token_round_trip():
    for s in (
        Series("scheme2"),
        Series("proposed_internal", 8, 16),
        Series("proposed_csi", 16, 16, m=20),
    ):
        assert Series.parse(s.token()) == s


def test_series_parse_rejects_garbage():
    with pytest.raises(DomainError):
        Series.parse("proposed_internal@axb")
    with pytest.raises(DomainError):
        Series.parse("scheme4@16x16@mfoo")


def test_config_round_trip_all_presets():
    for name in PRESETS:
        exp = preset(name)
        again = parse_config(serialize_config(exp))
        assert again == exp


def test_parse_config_diagnostics():
    with pytest.raises(DomainError, match="missing config keys"):
        parse_config("scenario = internal\n")
    with pytest.raises(DomainError, match="line 1"):
        parse_config("not a key value pair\n")
    with pytest.raises(DomainError, match="unknown config key"):
        parse_config("bogus_key = 1\n")
    with pytest.raises(DomainError, match="bad value"):
        parse_config("trials = many\n")


def test_validation_rules():
    with pytest.raises(DomainError):
        _tiny_experiment(scenario="nope").validate()
    with pytest.raises(DomainError):
        _tiny_experiment(sweep_var="velocity").validate()
    with pytest.raises(DomainError):
        _tiny_experiment(trials=0).validate()
    with pytest.raises(DomainError):
        _tiny_experiment(series=()).validate()
    with pytest.raises(DomainError):
        _tiny_experiment(sweep_step=-0.1).validate()
    with pytest.raises(DomainError):
        _tiny_experiment(series=(Series("proposed_csi", 4, 4),), m=0).validate()
    with pytest.raises(DomainError):
        _tiny_experiment(series=(Series("proposed_no_csi", 2, 4),), m=1).validate()


def test_invalid_experiment_writes_nothing(tmp_path):
    out = tmp_path / "out.csv"
    with pytest.raises(DomainError):
        run_experiment(_tiny_experiment(trials=0), str(out))
    assert not out.exists()


def test_sweep_values_avoid_float_drift():
    exp = _tiny_experiment(sweep_start=0.05, sweep_stop=1.0, sweep_step=0.05)
    vals = exp.sweep_values()
    assert len(vals) == 20
    assert vals[0] == 0.05
    assert vals[-1] == 1.0
    assert all(round(v, 12) == v for v in vals)


def test_preset_fields():
    fig4 = preset("fig4")
    assert fig4.scenario == "internal"
    assert len(fig4.series) == 4
    assert fig4.trials == 10_000
    fig7 = preset("fig7")
    assert fig7.scenario == "imperfect_csi"
    assert fig7.sweep_var == "t"
    fig8 = preset("fig8")
    assert fig8.sweep_var == "psi"
    assert fig8.m == 10
    fig9 = preset("fig9")
    tokens = [s.token() for s in fig9.series]
    assert "proposed_csi@16x16" in tokens
    assert "proposed_csi@16x16@m20" in tokens
    assert {"scheme4", "scheme5", "scheme6"} <= {s.scheme for s in fig9.series}
    fig10 = preset("fig10")
    assert fig10.scenario == "dynamic_users"
    assert fig10.sweep_var == "p_dbm"
    assert preset("fig6") == preset("fig5")
    with pytest.raises(DomainError):
        preset("fig99")


def test_run_writes_exact_schema(tmp_path):
    out = tmp_path / "res.csv"
    exp = _tiny_experiment()
    rows = run_experiment(exp, str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    # 2 sweep values x 2 series
    assert len(lines) == 1 + 4
    assert len(rows) == 4
    for line in lines[1:]:
        fields = line.split(",")
        assert len(fields) == len(CSV_COLUMNS)
        # every float field fits in 9 significant digits
        for f in fields:
            try:
                float(f)
            except ValueError:
                continue
            if "." in f:
                digits = f.replace("-", "").replace(".", "").split("e")[0].lstrip("0")
                assert len(digits) <= 9


def test_rerun_is_byte_identical(tmp_path):
    exp = _tiny_experiment()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(exp, str(a))
    run_experiment(exp, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_worker_count_does_not_change_output(tmp_path):
    exp = _tiny_experiment(trials=12)
    a, b = tmp_path / "w1.csv", tmp_path / "w2.csv"
    run_experiment(exp, str(a), workers=1)
    run_experiment(exp, str(b), workers=2)
    assert a.read_bytes() == b.read_bytes()


def test_normalized_column_peaks_at_one(tmp_path):
    out = tmp_path / "n.csv"
    rows = run_experiment(_tiny_experiment(), str(out))
    normed = [r["avg_secrecy_rate_normalized"] for r in rows]
    assert max(normed) == pytest.approx(1.0, abs=1e-15)
    assert all(0.0 <= v <= 1.0 for v in normed)
    top = max(rows, key=lambda r: r["avg_secrecy_rate"])
    assert top["avg_secrecy_rate_normalized"] == 1.0


def test_per_series_eavesdropper_count_lands_in_csv(tmp_path):
    exp = _tiny_experiment(
        scenario="external_csi",
        series=(Series("proposed_csi", 4, 4), Series("proposed_csi", 4, 4, m=5)),
        m=2,
        trials=4,
    )
    out = tmp_path / "m.csv"
    rows = run_experiment(exp, str(out))
    ms = sorted({r["m"] for r in rows})
    assert ms == [2, 5]


def test_imperfect_csi_scenario_reports_relative_error(tmp_path):
    exp = _tiny_experiment(
        scenario="imperfect_csi",
        sweep_var="t",
        sweep_start=0.0,
        sweep_stop=0.1,
        sweep_step=0.1,
        series=(Series("proposed_internal", 4, 4),),
        trials=6,
    )
    rows = run_experiment(exp, str(tmp_path / "t.csv"))
    by_t = {r["sweep_value"]: r for r in rows}
    assert by_t[0.0]["avg_rel_error"] == pytest.approx(0.0, abs=1e-12)
    assert by_t[0.1]["avg_rel_error"] > 0.0


def test_overrides_reach_system_config():
    exp = _tiny_experiment(overrides=(("p_dbm", "30"), ("k_factor", "5")))
    cfg = exp.base_config()
    assert cfg.p_dbm == 30.0
    assert cfg.k_factor == 5.0
    again = parse_config(serialize_config(exp))
    assert again == exp
