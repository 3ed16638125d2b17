"""Structured run log: one JSON line per run event.

Records which command ran with which configuration, which files it wrote
and how it ended.
"""

import json
import logging
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional


@dataclass
class RunEvent:
    """Structured run event."""

    timestamp: str
    event_type: str  # run_started, output_written, run_finished, run_failed
    command: str
    details: Dict[str, Any]
    success: bool
    error: Optional[str] = None


class RunLogger:
    """Append run events to ``<log_dir>/run.log``."""

    def __init__(self, log_dir: str | Path):
        """Initialize run logger.

        Args:
            log_dir: Directory for the run log file
        """
        self.path = Path(log_dir) / "run.log"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(f"runlog.{self.path.resolve()}")
        self.logger.setLevel(logging.INFO)
        self.logger.propagate = False
        self._lock = threading.Lock()

        if not self.logger.handlers:
            handler = logging.FileHandler(str(self.path), encoding="utf-8")
            handler.setFormatter(logging.Formatter("%(message)s"))
            self.logger.addHandler(handler)

            console_handler = logging.StreamHandler()
            console_handler.setFormatter(
                logging.Formatter("%(asctime)s - RUN - %(message)s")
            )
            self.logger.addHandler(console_handler)

    def _log(self, event: RunEvent) -> None:
        line = json.dumps(asdict(event), ensure_ascii=False)
        with self._lock:
            self.logger.info(line)
            for handler in self.logger.handlers:
                handler.flush()

    @staticmethod
    def _now() -> str:
        return datetime.now(timezone.utc).isoformat()

    def run_started(self, command: str, config: Dict[str, Any]) -> None:
        self._log(RunEvent(self._now(), "run_started", command, {"config": config}, True))

    def output_written(self, command: str, path: str | Path) -> None:
        self._log(RunEvent(self._now(), "output_written", command, {"path": str(path)}, True))

    def run_finished(self, command: str, summary: Dict[str, Any]) -> None:
        self._log(RunEvent(self._now(), "run_finished", command, summary, True))

    def run_failed(self, command: str, error: str) -> None:
        self._log(RunEvent(self._now(), "run_failed", command, {}, False, error=error))

    def close(self) -> None:
        """Detach and close the handlers of this log file."""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
