"""Build, saturate, reduce and compare qualitative temporal graphs."""

__version__ = "0.1.0"
