"""Configuration settings for epsk."""

import os
from pathlib import Path

# Base directory
BASE_DIR = Path(__file__).parent.parent.parent.parent

# Artifact directories
GOLDEN_DIR = BASE_DIR / "golden"
MODELS_DIR = BASE_DIR / "models"
CORPUS_DIR = BASE_DIR / "corpus"
OUTPUT_DIR = Path(os.environ.get("EPSK_OUTPUT_DIR", BASE_DIR / "output"))

# Calculus defaults (values of the kernel enums)
DEFAULT_CALCULUS = "ipce"
DEFAULT_EPS_MODE = "augmented"
DEFAULT_CUT_POLICY = "definedness-only"

# Search bounds
SEARCH_DEFAULTS = {
    "instantiation_depth": 3,
    "eps_nesting": 2,
    "world_budget": 8,
    "formula_budget": 64,
    "step_budget": 20000,
}

# JSON artifacts
JSON_SETTINGS = {
    "encoding": "utf-8",
    "indent": 2,
    "sort_keys": True,
    "ensure_ascii": False,
}

# Process exit codes
EXIT_CODES = {
    "ok": 0,
    "failed": 1,
    "exhausted": 2,
    "usage": 3,
}

# Terminal colour: EPSK_COLOR=1 forces, EPSK_COLOR=0 disables, unset follows the tty
COLOR_ENV = "EPSK_COLOR"

LOG_LEVEL = os.environ.get("EPSK_LOG_LEVEL", "WARNING").upper()

# Logging configuration
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
        },
        "detailed": {
            "format": "%(asctime)s [%(levelname)s] %(name)s:%(lineno)d: %(message)s"
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "level": LOG_LEVEL,
            "formatter": "standard",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "epsk": {
            "level": "DEBUG",
            "handlers": ["console"],
            "propagate": False,
        },
    },
    "root": {
        "level": "WARNING",
        "handlers": ["console"],
    },
}

# Corpus file annotations
CORPUS_SETTINGS = {
    "comment": "#",
    "expect_marker": "EXPECT",
    "expectations": ("provable", "refutable", "unknown"),
}
