import json

import pytest

from src.cli.commands import COMMANDS, get_command
from src.cli.runner import EXIT_INVALID, EXIT_OK, build_parser, run


def read_manifest(output_dir):
    return json.loads((output_dir / "manifest.json").read_text())


class TestRunner:
    """Test the command-line run loop and its exit codes"""

    def test_every_command_has_a_subparser(self):
        parser = build_parser()
        for name in COMMANDS:
            assert parser.parse_args([name]).command == name

    def test_unknown_command(self):
        assert get_command("spectrum") is None
        assert run(["spectrum"]) == EXIT_INVALID

    def test_table1_writes_a_manifest(self, output_dir):
        assert run(["table1", "--n", "256", "--output", str(output_dir)]) == EXIT_OK
        manifest = read_manifest(output_dir)
        assert manifest["config"]["n"] == 256
        assert len(manifest["checks"]) == 4
        assert all(check["pass"] for check in manifest["checks"])
        assert (output_dir / "table1.json").exists()

    def test_markov_sample(self, output_dir):
        code = run(["markov-sample", "--x0", "0.6", "--paths", "10", "--steps", "5", "--format", "json",
                    "--output", str(output_dir)])
        assert code == EXIT_OK
        payload = json.loads((output_dir / "paths.json").read_text())
        assert len(payload["rows"]) == 60
        assert json.loads((output_dir / "paths_manifest.json").read_text())["n_paths"] == 10

    def test_couplings(self, output_dir):
        assert run(["couple-roundtrip", "--trials", "5", "--output", str(output_dir)]) == EXIT_OK

    @pytest.mark.parametrize("argv", [
        ["table1", "--n", "1"],
        ["wold", "--map", "tent"],
        ["markov-sample", "--x0", "1.5"],
        ["markov-sample", "--map", "gauss", "--k-max", "10", "--weight", "pf", "--paths", "4"],
        ["chaos-game", "--map", "twin_doubling", "--samples", "10"],
    ])
    def test_invalid_runs(self, argv, output_dir):
        assert run(argv + ["--output", str(output_dir)]) == EXIT_INVALID

    def test_config_file(self, tmp_path, output_dir):
        path = tmp_path / "run.env"
        path.write_text("n=1\n")
        assert run(["table1", "--config", str(path), "--output", str(output_dir)]) == EXIT_INVALID
        assert run(["table1", "--config", str(path), "--n", "256", "--output", str(output_dir)]) == EXIT_OK

    def test_progress_flag_is_scoped_to_the_run(self, monkeypatch, output_dir):
        calls = []
        monkeypatch.setattr("src.cli.runner.set_progress", calls.append)
        assert run(["table1", "--n", "256", "--progress", "--output", str(output_dir)]) == EXIT_OK
        assert calls == [True, False]
        assert read_manifest(output_dir)["config"]["progress"] is True
