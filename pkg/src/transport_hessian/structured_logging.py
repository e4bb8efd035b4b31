from __future__ import annotations

import json
import logging
import sys
from typing import Any

_EVENT_LOGGER = "transport_hessian.events"


class JsonLineFormatter(logging.Formatter):
    """One JSON object per record; structured fields ride on `record.fields`."""

    def format(self, record: logging.LogRecord) -> str:
        payload: dict[str, Any] = {
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        fields = getattr(record, "fields", None)
        if isinstance(fields, dict):
            payload.update(fields)
        if record.exc_info:
            payload["exc"] = self.formatException(record.exc_info)
        return json.dumps(payload, sort_keys=True, default=str)


def configure_logging(service: str, level: str = "INFO") -> logging.Logger:
    """Route package logs to stderr as JSON lines; returns the service logger."""
    root = logging.getLogger("transport_hessian")
    root.setLevel(level)
    for handler in list(root.handlers):
        if getattr(handler, "_tihd_handler", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    handler._tihd_handler = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.propagate = False
    logger = logging.getLogger(f"transport_hessian.{service}")
    logger.debug("logging configured at %s", level)
    return logger


def log_json(level: int, event: str, **fields: Any) -> None:
    logging.getLogger(_EVENT_LOGGER).log(level, event, extra={"fields": {"event": event, **fields}})


__all__ = ["JsonLineFormatter", "configure_logging", "log_json"]
