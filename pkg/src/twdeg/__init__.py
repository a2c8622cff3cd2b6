"""Twisted wreath groups over PSL(2,q): construction, subdegrees, verifier."""

__version__ = "0.1.0"
