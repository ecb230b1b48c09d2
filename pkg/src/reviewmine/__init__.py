"""Rule-based mining of design evidence from product reviews."""

__version__ = "0.1.0"
