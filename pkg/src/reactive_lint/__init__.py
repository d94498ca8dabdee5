"""Framework-aware static analysis for Angular reactivity anti-patterns."""

__version__ = "0.1.0"
