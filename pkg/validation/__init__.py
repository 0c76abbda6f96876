"""Validation of run configurations."""

from .config_validator import ConfigValidator

__all__ = ['ConfigValidator']
