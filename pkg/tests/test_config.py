"""Run configuration parsing: schema, expansion, validation contexts."""

import copy
from datetime import timedelta
from pathlib import Path

import pytest

from shortfall import (
    Method,
    MethodConfig,
    ParameterError,
    ThresholdSpec,
    config_from_mapping,
    load_config,
)

FULL = {
    "step_hours": 1.0,
    "inputs": [
        {"path": "avail.csv", "role": "availability"},
        {"path": "load.csv", "role": "load", "columns": {"value": "mw"}, "max_fill_gap": 3},
    ],
    "portfolios": [
        {
            "name": "wind_mix",
            "entries": [
                {"technology": "onshore", "region": "DE", "weight": 0.75},
                {"technology": "offshore", "region": "DE", "weight": 0.25},
            ],
        }
    ],
    "residual_loads": [
        {"name": "de_rl", "load": "load", "capacities": {"onshore@DE": 120.0}}
    ],
    "droughts": [
        {
            "series": ["onshore@DE", "wind_mix"],
            "thresholds": [
                {"kind": "absolute", "param": 0.1},
                {"kind": "mean_fraction", "sweep": [0.1, 0.5, 0.9]},
            ],
            "methods": [
                {"name": "CBT"},
                {"name": "FMBT", "intdur": [5, 10]},
            ],
        }
    ],
    "prl": [
        {
            "series": ["de_rl"],
            "methods": [
                {"name": "CAZ"},
                {"name": "SPA_PRL", "eff": [1.0, 0.5], "literal_eq8": False},
            ],
        }
    ],
    "output_dir": "out",
    "parallelism": 2,
}


def full_config():
    return copy.deepcopy(FULL)


class TestParsing:
    def test_full_mapping(self):
        cfg = config_from_mapping(full_config(), base_dir="study")
        assert cfg.step_hours == 1.0
        assert cfg.step == timedelta(hours=1)
        assert cfg.parallelism == 2
        assert cfg.output_dir == str(Path("study") / "out")
        assert [Path(i.path).name for i in cfg.inputs] == ["avail.csv", "load.csv"]
        assert cfg.inputs[1].columns.value == "mw"
        assert cfg.inputs[1].max_fill_gap == 3
        assert cfg.portfolios[0].name == "wind_mix"
        assert len(cfg.portfolios[0].spec.entries) == 2
        assert cfg.residual_loads[0].capacities == ((("onshore", "DE"), 120.0),)
        drought = cfg.droughts[0]
        assert drought.series == ("onshore@DE", "wind_mix")
        assert drought.thresholds == (
            ThresholdSpec("absolute", 0.1),
            ThresholdSpec("mean_fraction", 0.1),
            ThresholdSpec("mean_fraction", 0.5),
            ThresholdSpec("mean_fraction", 0.9),
        )
        assert [m.method for m in drought.methods] == [Method.CBT, Method.FMBT]
        assert cfg.prl[0].thresholds == ()

    def test_defaults(self):
        data = full_config()
        del data["step_hours"], data["parallelism"], data["portfolios"]
        del data["residual_loads"], data["prl"]
        data["droughts"][0]["series"] = ["onshore@DE"]
        cfg = config_from_mapping(data)
        assert cfg.step_hours == 1.0
        assert cfg.parallelism == 1
        assert cfg.portfolios == ()
        assert cfg.prl == ()

    def test_fractional_step(self):
        data = full_config()
        data["step_hours"] = 0.5
        assert config_from_mapping(data).step == timedelta(minutes=30)

    def test_method_expansion(self):
        cfg = config_from_mapping(full_config())
        fmbt = cfg.droughts[0].methods[1]
        assert fmbt.expand() == [
            (Method.FMBT, {"intdur": 5}),
            (Method.FMBT, {"intdur": 10}),
        ]
        spa = cfg.prl[0].methods[1]
        assert spa.expand() == [
            (Method.SPA_PRL, {"eff": 1.0, "literal_eq8": False}),
            (Method.SPA_PRL, {"eff": 0.5, "literal_eq8": False}),
        ]

    def test_expand_without_lists_is_singleton(self):
        mc = MethodConfig(method=Method.FMBT, params=(("intdur", 7),))
        assert mc.expand() == [(Method.FMBT, {"intdur": 7})]
        assert MethodConfig(method=Method.CBT, params=()).expand() == [(Method.CBT, {})]


class TestSchemaErrors:
    def test_unknown_top_level_key(self):
        data = full_config()
        data["cache"] = True
        with pytest.raises(ParameterError, match=r"config: unknown keys \['cache'\]"):
            config_from_mapping(data)

    def test_context_paths_in_messages(self):
        data = full_config()
        data["droughts"][0]["methods"][1]["warmup"] = 3
        with pytest.raises(ParameterError, match=r"droughts\[0\].methods\[1\]"):
            config_from_mapping(data)

    def test_inputs_required(self):
        data = full_config()
        data["inputs"] = []
        with pytest.raises(ParameterError, match="at least one input"):
            config_from_mapping(data)
        del data["inputs"]
        with pytest.raises(ParameterError, match="missing required keys"):
            config_from_mapping(data)

    def test_unknown_role(self):
        data = full_config()
        data["inputs"][0]["role"] = "demand"
        with pytest.raises(ParameterError, match=r"inputs\[0\]: unknown role"):
            config_from_mapping(data)

    def test_analysis_required(self):
        data = full_config()
        del data["droughts"], data["prl"]
        with pytest.raises(ParameterError, match="runs nothing"):
            config_from_mapping(data)

    def test_threshold_param_xor_sweep(self):
        data = full_config()
        data["droughts"][0]["thresholds"][0] = {
            "kind": "absolute", "param": 0.1, "sweep": [0.2],
        }
        with pytest.raises(ParameterError, match="exactly one of param or sweep"):
            config_from_mapping(data)
        data["droughts"][0]["thresholds"][0] = {"kind": "absolute"}
        with pytest.raises(ParameterError, match="exactly one of param or sweep"):
            config_from_mapping(data)

    def test_empty_sweep(self):
        data = full_config()
        data["droughts"][0]["thresholds"][1]["sweep"] = []
        with pytest.raises(ParameterError, match="empty sweep"):
            config_from_mapping(data)

    def test_threshold_param_validated(self):
        data = full_config()
        data["droughts"][0]["thresholds"][0]["param"] = 1.5
        with pytest.raises(ParameterError, match="absolute threshold"):
            config_from_mapping(data)

    def test_unknown_method(self):
        data = full_config()
        data["droughts"][0]["methods"][0] = {"name": "LOLE"}
        with pytest.raises(ParameterError, match="unknown method 'LOLE'"):
            config_from_mapping(data)

    def test_method_scope_enforced(self):
        data = full_config()
        data["prl"][0]["methods"][0] = {"name": "CBT"}
        with pytest.raises(ParameterError, match="does not apply here"):
            config_from_mapping(data)
        data = full_config()
        data["droughts"][0]["methods"][0] = {"name": "CAZ"}
        with pytest.raises(ParameterError, match="does not apply here"):
            config_from_mapping(data)

    def test_spa_adj_not_configurable(self):
        data = full_config()
        data["prl"][0]["methods"][0] = {"name": "SPA_ADJ", "eff": 0.5}
        with pytest.raises(ParameterError, match="SPA_PRL"):
            config_from_mapping(data)

    def test_method_parameter_requirements(self):
        data = full_config()
        data["droughts"][0]["methods"][1] = {"name": "FMBT"}
        with pytest.raises(ParameterError, match="FMBT requires intdur"):
            config_from_mapping(data)
        data["droughts"][0]["methods"][1] = {"name": "WINDOW"}
        with pytest.raises(ParameterError, match="WINDOW requires window_len"):
            config_from_mapping(data)

    @pytest.mark.parametrize("value", [0, -3, 2.5, True, [4, 0]])
    def test_intdur_validated(self, value):
        data = full_config()
        data["droughts"][0]["methods"][1]["intdur"] = value
        with pytest.raises(ParameterError, match="positive integer"):
            config_from_mapping(data)

    @pytest.mark.parametrize("value", [0.0, 1.5, "high", True])
    def test_eff_validated(self, value):
        data = full_config()
        data["prl"][0]["methods"][1]["eff"] = value
        with pytest.raises(ParameterError, match="eff"):
            config_from_mapping(data)

    def test_literal_eq8_must_be_boolean(self):
        data = full_config()
        data["prl"][0]["methods"][1]["literal_eq8"] = "yes"
        with pytest.raises(ParameterError, match="literal_eq8"):
            config_from_mapping(data)

    def test_deficit_basis_validated(self):
        data = full_config()
        data["droughts"][0]["methods"][1]["deficit_basis"] = "raw"
        with pytest.raises(ParameterError, match="deficit_basis"):
            config_from_mapping(data)

    def test_capacity_key_shape(self):
        data = full_config()
        data["residual_loads"][0]["capacities"] = {"onshore": 10.0}
        with pytest.raises(ParameterError, match="technology@region"):
            config_from_mapping(data)

    @pytest.mark.parametrize("value", [0, -1, True, 2.5])
    def test_parallelism_validated(self, value):
        data = full_config()
        data["parallelism"] = value
        with pytest.raises(ParameterError, match="parallelism"):
            config_from_mapping(data)

    def test_step_hours_positive(self):
        data = full_config()
        data["step_hours"] = 0.0
        with pytest.raises(ParameterError, match="step_hours"):
            config_from_mapping(data)

    def test_max_fill_gap_validated(self):
        data = full_config()
        data["inputs"][0]["max_fill_gap"] = -2
        with pytest.raises(ParameterError, match="max_fill_gap"):
            config_from_mapping(data)

    def test_series_list_required(self):
        data = full_config()
        data["droughts"][0]["series"] = []
        with pytest.raises(ParameterError, match="at least one series"):
            config_from_mapping(data)
        data["droughts"][0]["series"] = "onshore@DE"
        with pytest.raises(ParameterError, match="expected a list"):
            config_from_mapping(data)


class TestLoadConfig:
    YAML = """
step_hours: 1.0
inputs:
  - path: avail.csv
    role: availability
droughts:
  - series: [onshore@DE]
    thresholds:
      - {kind: mean_fraction, param: 0.5}
    methods:
      - {name: CBT}
output_dir: out
"""

    def test_paths_resolve_against_config_dir(self, tmp_path):
        sub = tmp_path / "study"
        sub.mkdir()
        cfg_path = sub / "run.yaml"
        cfg_path.write_text(self.YAML, encoding="utf-8")
        cfg = load_config(cfg_path)
        assert cfg.inputs[0].path == str(sub / "avail.csv")
        assert cfg.output_dir == str(sub / "out")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParameterError, match="cannot read config"):
            load_config(tmp_path / "run.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("inputs: [\n", encoding="utf-8")
        with pytest.raises(ParameterError, match="not valid YAML"):
            load_config(path)

    def test_non_mapping_document(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("- just\n- a\n- list\n", encoding="utf-8")
        with pytest.raises(ParameterError, match="expected a mapping"):
            load_config(path)
