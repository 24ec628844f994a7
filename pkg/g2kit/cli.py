"""Command-line entry point: ``g2kit <command> [--preset NAME | --config PATH]``.

Exit status 0 on success, 1 on a pipeline error, 2 on a configuration
error and 3 when the requested Massey product is not well-defined.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ._config import G2Config, loadConfig, parseConfig
from ._errors import ConfigError, G2kitError, MasseyNotWellDefined
from ._presets import presetDocument, presetNames
from ._report import COMMANDS, commandReport, renderText
from .logHandler import configureLogging, log

EXIT_OK = 0
EXIT_PIPELINE = 1
EXIT_CONFIG = 2
EXIT_MASSEY = 3

_HELP = {
	"closure": "Close the generators into the isometry group",
	"strata": "Enumerate the singular strata",
	"betti": "Betti numbers of the orbifold and of the resolution model",
	"pd": "Poincaré duals of the strata",
	"massey": "Cobordism, Massey value and the ideal membership test",
	"report": "Run every stage and print the full formality report",
}


@dataclass(frozen=True)
class RunResult:
	status: int
	output: str
	error: str | None = None


def formatReport(report: dict[str, Any], fmt: str) -> str:
	if fmt == "json":
		return json.dumps(report, sort_keys=True, indent=2) + "\n"
	return renderText(report)


def run(command: str, config: G2Config, fmt: str = "text", cacheDir: str | Path | None = None) -> RunResult:
	"""Execute one command; errors become a status and a message, never an exception."""
	if command not in COMMANDS:
		return RunResult(EXIT_PIPELINE, "", f"unknown command {command!r}")
	try:
		report = commandReport(command, config, cacheDir)
	except MasseyNotWellDefined as e:
		witnesses = json.dumps(e.witnesses, sort_keys=True)
		return RunResult(EXIT_MASSEY, "", f"{e}\nwitnesses: {witnesses}")
	except ConfigError as e:
		return RunResult(EXIT_CONFIG, "", str(e))
	except G2kitError as e:
		log.debug(f"g2kit cli: {command} failed", exc_info=True)
		return RunResult(EXIT_PIPELINE, "", str(e))
	return RunResult(EXIT_OK, formatReport(report, fmt))


def _commonOptions() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	source = common.add_mutually_exclusive_group()
	source.add_argument("--preset", choices=presetNames(), help="Built-in configuration (default: paper)")
	source.add_argument("--config", type=Path, help="Path to a JSON configuration")
	common.add_argument("--format", choices=("text", "json"), default="text", help="Output format")
	common.add_argument("--cache", type=Path, metavar="DIR", help="Cache closure and strata in DIR")
	common.add_argument("--verbose", action="store_true", help="Log progress to stderr")
	return common


def buildParser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(
		prog="g2kit",
		description="Exact computations on flat G2 orbifolds, their resolutions and Massey products.",
	)
	sub = parser.add_subparsers(dest="command", required=True)
	common = _commonOptions()
	for command in COMMANDS:
		sub.add_parser(command, parents=[common], help=_HELP[command])
	return parser


def _loadConfig(args: argparse.Namespace) -> G2Config:
	if args.config is not None:
		return loadConfig(args.config)
	return parseConfig(presetDocument(args.preset or "paper"))


def main(argv: list[str] | None = None) -> int:
	args = buildParser().parse_args(argv)
	configureLogging(args.verbose)
	try:
		config = _loadConfig(args)
	except ConfigError as e:
		print(f"g2kit: {e}", file=sys.stderr)
		return EXIT_CONFIG
	result = run(args.command, config, args.format, args.cache)
	if result.output:
		sys.stdout.write(result.output)
	if result.error:
		print(f"g2kit: {result.error}", file=sys.stderr)
	return result.status


if __name__ == "__main__":
	raise SystemExit(main())
