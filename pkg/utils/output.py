"""
CSV / JSON emission with run manifests
"""
import hashlib
import io
import json
import math
from typing import Dict, List, Optional

import pandas as pd

from config.settings import APP_CONFIG, OUTPUT_CONFIG


def frame_to_csv_bytes(frame: pd.DataFrame) -> bytes:
    buffer = io.StringIO()
    frame.to_csv(
        buffer,
        index=False,
        float_format=OUTPUT_CONFIG["float_format"],
        lineterminator=OUTPUT_CONFIG["line_terminator"],
    )
    return buffer.getvalue().encode(OUTPUT_CONFIG["encoding"])


def read_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, encoding=OUTPUT_CONFIG["encoding"])


def checksum(data: bytes) -> str:
    digest = hashlib.new(OUTPUT_CONFIG["checksum_algorithm"], data).hexdigest()
    return f"{OUTPUT_CONFIG['checksum_algorithm']}:{digest}"


def _json_safe(value):
    """NaN and infinities become null; numpy scalars become Python numbers"""
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def canonical_json(value) -> bytes:
    return json.dumps(_json_safe(value), sort_keys=True, separators=(",", ":")).encode(OUTPUT_CONFIG["encoding"])


def build_manifest(command: str, parameters: Dict, output_checksum: str,
                   rng: Optional[Dict] = None) -> Dict:
    manifest = {
        "tool": APP_CONFIG["name"],
        "version": APP_CONFIG["version"],
        "command": command,
        "parameters": _json_safe(parameters),
        "checksum": output_checksum,
    }
    if rng is not None:
        manifest["rng"] = rng
    return manifest


def _write_bytes(path: str, data: bytes):
    with open(path, "wb") as handle:
        handle.write(data)


def write_csv(frame: pd.DataFrame, path: str, command: str, parameters: Dict,
              rng: Optional[Dict] = None) -> Dict:
    """Write the CSV and its sidecar manifest; returns the manifest"""
    data = frame_to_csv_bytes(frame)
    manifest = build_manifest(command, parameters, checksum(data), rng)
    _write_bytes(path, data)
    manifest_text = json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    _write_bytes(path + OUTPUT_CONFIG["manifest_suffix"], manifest_text.encode(OUTPUT_CONFIG["encoding"]))
    return manifest


def write_json(records: List[Dict], path: str, command: str, parameters: Dict,
               rng: Optional[Dict] = None) -> Dict:
    """Write {manifest, records}; the checksum covers the canonical records"""
    records = _json_safe(records)
    manifest = build_manifest(command, parameters, checksum(canonical_json(records)), rng)
    text = json.dumps({"manifest": manifest, "records": records}, sort_keys=True, indent=2) + "\n"
    _write_bytes(path, text.encode(OUTPUT_CONFIG["encoding"]))
    return manifest
