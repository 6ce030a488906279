import json
import logging
import math

import numpy as np
import pandas as pd

from utils.output import build_manifest, canonical_json, checksum, frame_to_csv_bytes, read_csv, write_csv, write_json
from utils.performance import EXECUTION_TIMES, get_execution_summary, measure_execution_time
from utils.run_logger import RunLogger


def sample_frame():
    return pd.DataFrame({
        "omega_t": [0.0, 1000.0, 2000.0],
        "b": [2.0 * math.sqrt(2.0), 2.41421356237309, 2.0],
        "flag": ["found", "asymptotic", "exceeds-horizon"],
    })


def test_csv_format():
    text = frame_to_csv_bytes(sample_frame()).decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == "omega_t,b,flag"
    assert lines[1] == "0,2.82842712475,found"
    assert "\r" not in text and text.endswith("\n")


def test_csv_reemits_identically(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(sample_frame(), str(path), "sweep", {"r": 0.91})
    assert frame_to_csv_bytes(read_csv(str(path))) == path.read_bytes()


def test_manifest_sidecar(tmp_path):
    path = tmp_path / "out.csv"
    manifest = write_csv(sample_frame(), str(path), "fig2", {"r_grid": [0.72, 0.999, 200]},
                         rng={"algorithm": "PCG64", "seed": 1})
    sidecar = json.loads((tmp_path / "out.csv.manifest.json").read_text())
    assert sidecar == manifest
    assert sidecar["command"] == "fig2"
    assert sidecar["checksum"] == checksum(path.read_bytes())
    assert sidecar["checksum"].startswith("sha256:")
    assert sidecar["rng"]["algorithm"] == "PCG64"


def test_json_output(tmp_path):
    path = tmp_path / "out.json"
    records = [{"omega_t_vsd": float("nan"), "flag": "asymptotic", "r": np.float64(1.0)}]
    manifest = write_json(records, str(path), "vsd", {"mode": "adiabatic"})
    data = json.loads(path.read_text())
    assert data["records"] == [{"omega_t_vsd": None, "flag": "asymptotic", "r": 1.0}]
    assert data["manifest"] == manifest
    assert manifest["checksum"] == checksum(canonical_json(data["records"]))


def test_manifest_fields():
    manifest = build_manifest("sweep", {"t_max": np.float64(10.0)}, "sha256:00")
    assert manifest["tool"] == "bell-decay"
    assert manifest["parameters"] == {"t_max": 10.0}
    assert "rng" not in manifest


def test_measure_execution_time():
    @measure_execution_time
    def work(x):
        return 2 * x

    assert work(21) == 42
    assert work.__name__ == "work"
    assert len(EXECUTION_TIMES["work"]) >= 1
    assert get_execution_summary()["work"]["count"] == len(EXECUTION_TIMES["work"])


def test_run_logger_writes_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    run_logger = RunLogger(level="INFO", log_file=str(log_file))
    run_logger.log_command_start("vsd", {"r": 0.91})
    run_logger.log_crossing("VSD", 3350.0, "found")
    run_logger.log_failure("vsd", ValueError("bad r"))
    logging.getLogger("components.analysis").debug("hidden at INFO")
    for handler in run_logger.logger.handlers:
        handler.flush()

    text = log_file.read_text()
    assert "Command start - Name: vsd" in text
    assert "Crossing - VSD: Omega t = 3350.0, Flag: found" in text
    assert "Command failed - Name: vsd, Error: ValueError: bad r" in text
    assert "hidden at INFO" not in text
