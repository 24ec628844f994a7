"""Command-line surface: exit codes, output formats and the on-disk cache."""

from __future__ import annotations

import json

import pytest

from g2kit._cache import cachePath, loadStages
from g2kit._cobordismMassey import VERDICT_NO_DATA, VERDICT_NON_FORMAL
from g2kit._config import parseConfig
from g2kit._presets import presetDocument
from g2kit._report import formalityReport
from g2kit.cli import EXIT_CONFIG, EXIT_MASSEY, EXIT_OK, buildParser, main, run

PAPER = parseConfig(presetDocument("paper"))
NO_COBORDISM = parseConfig(presetDocument("paper-no-cobordism"))


def test_betti_json_through_main(capsys):
	status = main(["betti", "--preset", "paper-no-cobordism", "--format", "json"])
	assert status == EXIT_OK
	report = json.loads(capsys.readouterr().out)
	assert report["command"] == "betti"
	assert report["betti"]["orbifold"] == [1, 0, 1, 6, 6, 1, 0, 1]
	assert report["betti"]["model"] == [1, 0, 11, 16, 16, 11, 0, 1]
	assert report["betti"]["poincareSymmetric"]


def test_massey_text_report():
	result = run("massey", PAPER)
	assert result.status == EXIT_OK
	assert VERDICT_NON_FORMAL in result.output
	assert "boundary: +N3 -N7" in result.output
	assert "member of ideal: no" in result.output


def test_json_output_is_deterministic():
	first = run("pd", NO_COBORDISM, "json")
	second = run("pd", NO_COBORDISM, "json")
	assert first.status == EXIT_OK
	assert first.output == second.output
	report = json.loads(first.output)
	assert report["pd"]["volume"] == "1/8"


def test_text_marks_decimal_approximations():
	result = run("pd", NO_COBORDISM)
	assert "vol(X) = 1/8 (≈ 0.125)" in result.output


def test_report_without_cobordism_stops_after_duals():
	result = run("report", NO_COBORDISM, "json")
	report = json.loads(result.output)
	assert report["stages"] == ["closure", "strata", "betti", "pd"]
	assert report["verdict"] == VERDICT_NO_DATA
	assert report["closure"]["order"] == 32
	assert report["strata"]["fixedSubtori"] == 80


def test_config_error_exit_code(tmp_path, capsys):
	doc = presetDocument("paper-no-cobordism")
	del doc["lattice"]
	path = tmp_path / "broken.json"
	path.write_text(json.dumps(doc), encoding="utf-8")
	assert main(["closure", "--config", str(path)]) == EXIT_CONFIG
	assert "lattice" in capsys.readouterr().err


def test_ill_defined_massey_exit_code():
	doc = presetDocument("paper")
	doc["massey"]["a"] = {"thom": {"N1": 1}}
	doc["massey"]["b"] = {"thom": {"N1": 1}}
	result = run("massey", parseConfig(doc))
	assert result.status == EXIT_MASSEY
	assert result.error is not None
	assert "witnesses" in result.error
	assert result.output == ""


def test_unknown_command_is_a_pipeline_error():
	assert run("frobnicate", PAPER).status == 1


def test_preset_and_config_are_exclusive():
	with pytest.raises(SystemExit):
		buildParser().parse_args(["betti", "--preset", "paper", "--config", "x.json"])


def test_cache_is_transparent(tmp_path):
	uncached = run("strata", NO_COBORDISM, "json")
	cold = run("strata", NO_COBORDISM, "json", tmp_path)
	assert cachePath(tmp_path, NO_COBORDISM.cacheKey).is_file()
	warm = run("strata", NO_COBORDISM, "json", tmp_path)
	assert uncached.output == cold.output == warm.output
	stages = loadStages(tmp_path, NO_COBORDISM.cacheKey)
	assert stages is not None
	group, strata = stages
	assert group.order == 32
	assert strata is not None and len(strata) == 10


def test_unreadable_cache_is_recomputed(tmp_path):
	cachePath(tmp_path, NO_COBORDISM.cacheKey).write_text("{not json", encoding="utf-8")
	assert loadStages(tmp_path, NO_COBORDISM.cacheKey) is None
	result = run("closure", NO_COBORDISM, "json", tmp_path)
	assert result.status == EXIT_OK
	assert json.loads(result.output)["closure"]["order"] == 32


def test_formality_report_runs_every_stage():
	report = formalityReport(PAPER)
	assert report["config"] == "paper"
	assert report["stages"] == ["closure", "strata", "betti", "pd", "cobordism", "massey"]
	assert report["verdict"] == VERDICT_NON_FORMAL


def test_paper_preset_through_main(capsys):
	assert main(["massey", "--preset", "paper"]) == EXIT_OK
	out = capsys.readouterr().out
	assert VERDICT_NON_FORMAL in out
	assert "boundary: +N3 -N7" in out


def test_default_preset_is_paper(capsys):
	assert main(["closure", "--format", "json"]) == EXIT_OK
	assert json.loads(capsys.readouterr().out)["config"] == "paper"


def test_cache_write_failure_is_not_fatal(tmp_path, capsys):
	blocker = tmp_path / "blocker"
	blocker.write_text("", encoding="utf-8")
	argv = ["closure", "--preset", "paper-no-cobordism", "--format", "json", "--cache", str(blocker / "sub")]
	status = main(argv)
	assert status == EXIT_OK
	assert json.loads(capsys.readouterr().out)["closure"]["order"] == 32
