"""Comparative analytics over two time-separated social-media corpora."""

__version__ = "0.1.0"

from .embed import DEFAULT_ENGINE, HAVE_FAST_KERNEL

__all__ = ["__version__", "DEFAULT_ENGINE", "HAVE_FAST_KERNEL"]
