"""
Self-describing result files. Every CSV opens with a block of ``#`` lines carrying the
schema version, the resolved configuration and the seed list; JSON outputs carry the same
fields at the top level. Nothing time-dependent is written to CSVs.
"""

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from mahbf.bench.spec import ExperimentSpec, resolved_dict
from mahbf.lib.exceptions import OutputError
from mahbf.log import logger

SCHEMA_VERSION = 1
COMMENT = "#"


def prepare_output_dir(path: Path | str) -> Path:
    """
    Create ``path`` if needed and check it is writable.

    :raises OutputError: before any experiment work is done.
    """
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
        marker = path / ".write-test"
        marker.touch()
        marker.unlink()
    except OSError as e:
        raise OutputError(f"Output directory '{path}' is not writable: {e}") from e
    return path


def header_block(spec: ExperimentSpec) -> list[str]:
    config = json.dumps(resolved_dict(spec), sort_keys=True)
    return [
        f"{COMMENT} schema_version: {SCHEMA_VERSION}",
        f"{COMMENT} config: {config}",
        f"{COMMENT} seeds: {json.dumps(spec.seeds)}",
    ]


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def write_csv(
    path: Path,
    fieldnames: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    spec: ExperimentSpec,
) -> Path:
    with open(path, "w", newline="") as file:
        for line in header_block(spec):
            file.write(line + "\n")
        writer = csv.DictWriter(file, fieldnames=list(fieldnames))
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(row.get(key)) for key in fieldnames})
    logger.debug(f"Wrote {path}")
    return path


def write_json(path: Path, payload: Mapping[str, Any], spec: ExperimentSpec) -> Path:
    document = {
        "schema_version": SCHEMA_VERSION,
        "config": resolved_dict(spec),
        "seeds": spec.seeds,
        **payload,
    }
    with open(path, "w") as file:
        json.dump(document, file, indent=2, sort_keys=True)
        file.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_resolved_config(directory: Path, spec: ExperimentSpec) -> Path:
    return write_json(directory / "resolved_config.json", {}, spec)


def write_episodes(
    directory: Path, entries: Sequence[Mapping[str, Any]], spec: ExperimentSpec
) -> Path:
    """
    ``episodes.json``: one entry per run with its identifying fields and the serialized
    episode (trace, chosen solution, phase timings), or null for a run that never
    trained.
    """
    return write_json(directory / "episodes.json", {"episodes": list(entries)}, spec)


def read_csv(path: Path | str) -> tuple[list[str], list[dict[str, str]]]:
    """
    :return: the header block lines (without the comment marker) and the data rows.
    """
    with open(path, "r", newline="") as file:
        lines = file.read().splitlines()
    header = [
        line[len(COMMENT) :].strip() for line in lines if line.startswith(COMMENT)
    ]
    body = [line for line in lines if not line.startswith(COMMENT)]
    return header, list(csv.DictReader(body))
