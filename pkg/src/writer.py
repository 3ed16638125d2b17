"""Result files: JSON envelopes and CSV tables with the run config embedded."""

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel

logger = logging.getLogger(__name__)


@dataclass
class WriteResult:
    """Files written by one command."""

    json_paths: list[str] = field(default_factory=list)
    csv_paths: list[str] = field(default_factory=list)

    @property
    def all_paths(self) -> list[str]:
        return self.json_paths + self.csv_paths


class ResultWriter:
    """Write command outputs under a structured directory.

    Path structure: {out_dir}/{command}/{name}
    Example: output/fixation/fixation.json
    """

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def build_path(self, command: str, filename: str) -> Path:
        """Build the output path of a file and create its folder.

        Args:
            command: Command name (subfolder)
            filename: File name, e.g. record.json

        Returns:
            Path like output/simulate/record.json
        """
        path = self.out_dir / command / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_json(
        self, command: str, name: str, config: dict[str, Any], result: BaseModel | dict[str, Any]
    ) -> Path:
        """Write ``{generated_at, command, config, result}`` as indented JSON."""
        if isinstance(result, BaseModel):
            result = result.model_dump(mode="json")
        envelope = {
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "command": command,
            "config": config,
            "result": result,
        }
        path = self.build_path(command, f"{name}.json")
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(envelope, f, indent=2, ensure_ascii=False)
            f.write("\n")
        logger.info(f"Wrote {path}")
        return path

    def write_csv(
        self, command: str, name: str, config: dict[str, Any], frame: pd.DataFrame
    ) -> Path:
        """Write a table preceded by a ``# config: {...}`` comment line."""
        path = self.build_path(command, f"{name}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"# config: {json.dumps(config, separators=(',', ':'))}\n")
            frame.to_csv(f, index=False, lineterminator="\n")
        logger.info(f"Wrote {path} ({len(frame)} rows)")
        return path


def read_csv(path: str | Path) -> pd.DataFrame:
    """Read a table written by ResultWriter, skipping the config line."""
    return pd.read_csv(path, comment="#")
