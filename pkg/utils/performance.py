"""
Execution timing for simulator commands
"""
import logging
import time
from functools import wraps
from typing import Dict, List

from config.settings import LOGGING_CONFIG

logger = logging.getLogger(LOGGING_CONFIG["logger_name"])

# elapsed seconds per function name, kept for the life of the process
EXECUTION_TIMES: Dict[str, List[float]] = {}


def measure_execution_time(func):
    """Decorator to measure function execution time"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            elapsed = time.perf_counter() - start
            EXECUTION_TIMES.setdefault(func.__name__, []).append(elapsed)
            logger.debug(f"{func.__name__} took {elapsed:.3f}s")
    return wrapper


def get_execution_summary() -> Dict[str, Dict[str, float]]:
    return {
        name: {
            "count": len(times),
            "avg_time": sum(times) / len(times),
            "max_time": max(times),
            "min_time": min(times),
        }
        for name, times in EXECUTION_TIMES.items()
    }
