"""Compiler and exact simulators for fine-grained quantum supremacy instances."""

__version__ = "0.1.0"
