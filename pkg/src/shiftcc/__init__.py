"""shiftcc: subshift entropy, rectangle covers, and infinite protocols."""

__version__ = "0.1.0"
