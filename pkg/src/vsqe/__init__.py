"""Real quantifier elimination by virtual substitution with Thom-coded roots."""

from __future__ import annotations

__version__ = "0.1.0"
