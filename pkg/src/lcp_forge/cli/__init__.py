"""Command-line front end and the built-in worked examples."""

from .report import Check, RunReport
from .main import main

__all__ = ["Check", "RunReport", "main"]
