"""Host-core typed calculus: checker, rewriter, finite models, extraction."""

__version__ = "0.1.0"
