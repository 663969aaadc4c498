"""Bipartite open-system model of neutral kaon decay and its complementarity measures."""
from .linalg import BACKEND
from .model import ModelParams
from .measures import MeasureBundle
from .verification import ScanConfig, run_all, scan

__all__ = ["BACKEND", "ModelParams", "MeasureBundle", "ScanConfig", "run_all", "scan"]
__version__ = "0.1.0"
