import pytest
from pydantic import ValidationError

from src.cli.config import RunConfig, load_run_config, read_config_file


class TestRunConfig:
    """Test validation of run configurations"""

    def test_defaults(self):
        config = RunConfig(command="table1")
        assert config.map == "doubling"
        assert config.weight == "half"
        assert config.format == "csv"

    def test_labels_are_case_insensitive(self):
        config = RunConfig(command="wold", map="Gauss", weight="PF")
        assert (config.map, config.weight) == ("gauss", "pf")

    def test_probabilities_from_text(self):
        assert RunConfig(command="ifs-measure", p="0.25, 0.75").p == [0.25, 0.75]

    @pytest.mark.parametrize("overrides", [
        {"map": "tent"},
        {"weight": "custom"},
        {"n": 1},
        {"steps": 0},
        {"seed": -1},
        {"tol": 0.0},
        {"x0": 1.0},
        {"format": "xml"},
        {"colour": "red"},
    ])
    def test_rejects_invalid_values(self, overrides):
        with pytest.raises(ValidationError):
            RunConfig(command="table1", **overrides)


class TestConfigFile:
    """Test merging of config files and flags"""

    def test_keys_are_normalized(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("K-MAX=20\nseed=4\n")
        assert read_config_file(path) == {"k_max": "20", "seed": "4"}
        assert read_config_file(None) == {}

    def test_flags_override_the_file(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("n=64\nk-max=20\n")
        config = load_run_config({"command": "table1", "n": 128, "seed": None}, path)
        assert config.n == 128
        assert config.k_max == 20
        assert config.seed == 0

    def test_progress_from_the_file(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("progress=yes\n")
        assert load_run_config({"command": "table1"}, path).progress is True
        assert RunConfig(command="table1").progress is False
