"""Allow ``python -m vsqe``."""

import sys

from .cli import main

sys.exit(main())
