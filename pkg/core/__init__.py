"""Core package: finite domains, relations, functions, budgets and workspace files."""

from .config import settings
from .orchestrator import orchestrator

__all__ = ["settings", "orchestrator"]
