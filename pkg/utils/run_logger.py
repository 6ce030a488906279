"""
Run logging for simulator commands
"""
import json
import logging
import os
import sys
from typing import Dict, Optional

from config.settings import LOGGING_CONFIG


class RunLogger:
    """Command-level event logging (stderr, plus a file when configured)"""

    def __init__(self, level: Optional[str] = None, log_file: Optional[str] = None):
        self.logger = logging.getLogger(LOGGING_CONFIG["logger_name"])
        self.logger.setLevel(level or LOGGING_CONFIG["level"])
        self.logger.propagate = False
        formatter = logging.Formatter(LOGGING_CONFIG["format"])

        # one handler per destination, even when several commands run in one process
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        stream = logging.StreamHandler(sys.stderr)
        stream.setFormatter(formatter)
        self.logger.addHandler(stream)

        log_file = log_file or LOGGING_CONFIG["log_file"]
        if log_file:
            os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
            handler = logging.FileHandler(log_file)
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)

        # library and command modules log under their package names; route them through the same handlers
        for package in ("components", "backend"):
            package_logger = logging.getLogger(package)
            package_logger.setLevel(self.logger.level)
            package_logger.handlers = list(self.logger.handlers)
            package_logger.propagate = False

    def log_command_start(self, command: str, parameters: Dict):
        """Log command start with its resolved parameters"""
        self.logger.info(
            f"Command start - Name: {command}, Parameters: {json.dumps(parameters, sort_keys=True, default=str)}"
        )

    def log_crossing(self, label: str, omega_t: Optional[float], flag: str):
        """Log a located crossing"""
        self.logger.info(f"Crossing - {label}: Omega t = {omega_t}, Flag: {flag}")

    def log_output_written(self, path: str, checksum: str):
        """Log an emitted output file"""
        self.logger.info(f"Output written - Path: {path}, Checksum: {checksum}")

    def log_failure(self, command: str, error: Exception):
        """Log a failed command"""
        self.logger.error(f"Command failed - Name: {command}, Error: {type(error).__name__}: {error}")
