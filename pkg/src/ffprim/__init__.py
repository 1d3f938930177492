"""Existence of 2-primitive elements with prescribed trace in finite fields of odd characteristic."""

__version__ = "0.1.0"
