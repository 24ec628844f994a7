"""Package-wide logger.

Every module logs through ``log`` with a short ``"g2kit <stage>: ..."``
prefix. Nothing is emitted until ``configureLogging`` attaches a handler,
so machine-format reports on stdout are never interleaved with log text.
"""

import logging
import sys

log = logging.getLogger("g2kit")
log.addHandler(logging.NullHandler())

_configured = False


def configureLogging(verbose: bool = False) -> None:
	"""Attach a stderr handler once; later calls only adjust the level."""
	global _configured
	log.setLevel(logging.DEBUG if verbose else logging.WARNING)
	if _configured:
		return
	handler = logging.StreamHandler(sys.stderr)
	handler.setFormatter(logging.Formatter("%(levelname)s - %(name)s (%(asctime)s):\n%(message)s"))
	log.addHandler(handler)
	_configured = True
