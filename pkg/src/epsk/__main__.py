"""Entry point for ``python -m epsk``."""

import sys

from .cli import main

sys.exit(main())
