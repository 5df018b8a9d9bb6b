"""
Reader for JSON command payloads (file, stdin or inline text)
"""

import json
import logging
import os
import sys
from typing import Any, Dict, Optional

from src.models.errors import InputError

logger = logging.getLogger(__name__)


class JSONReader:
    """Reader for the JSON payload of a CLI subcommand."""

    def __init__(self, stdin=None):
        self.stdin = stdin if stdin is not None else sys.stdin

    def read_text(self, source: Optional[str]) -> str:
        """'-' reads stdin, text starting with '{' is inline JSON, anything else is a path."""
        if source is None:
            return "{}"
        if source == "-":
            return self.stdin.read()
        if source.lstrip().startswith("{"):
            return source
        if not os.path.exists(source):
            raise InputError(f"input file not found: {source}")
        with open(source, "r", encoding="utf-8") as f:
            return f.read()

    def read_payload(self, source: Optional[str]) -> Dict[str, Any]:
        """Parse the payload; decode errors are reported with their line and column."""
        text = self.read_text(source)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"line {e.lineno} column {e.colno}: {e.msg}") from e
        if not isinstance(data, dict):
            raise InputError(f"line 1: payload must be a JSON object, got {type(data).__name__}")
        logger.debug("Read payload with keys %s", sorted(data))
        return data
