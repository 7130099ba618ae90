"""Exact checks of topological vertex, Fock space trace and DT series identities."""

from src.config.settings import settings

__version__ = settings.TOOL_VERSION
