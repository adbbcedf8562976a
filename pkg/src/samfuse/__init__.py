"""Small-area-aware multi-focus image fusion.

Fuses two partially focused photographs of one scene into an all-in-focus
image via saliency-weighted pre-fusion, detail enhancement, per-source
structural-similarity scoring, edge-aware recursive filtering, and a
trinary (focused / defocused / uncertain) decision map.
"""

from .bench import Fixture, make_pair, map_accuracy, random_scene
from .config import FusionConfig, config_hash
from .dtrf import RfParams, rf
from .estimator import MultiFocusFuser
from .fuse import FusionResult, compose, run_pipeline
from .imgcore import load_image, save_decision_map, save_image, to_gray
from .metrics import psnr, q_mi
from .validation import DimensionMismatchError, FusionError, ParameterError

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatchError",
    "Fixture",
    "FusionConfig",
    "FusionError",
    "FusionResult",
    "MultiFocusFuser",
    "ParameterError",
    "RfParams",
    "compose",
    "config_hash",
    "load_image",
    "make_pair",
    "map_accuracy",
    "psnr",
    "q_mi",
    "random_scene",
    "rf",
    "run_pipeline",
    "save_decision_map",
    "save_image",
    "to_gray",
    "__version__",
]
