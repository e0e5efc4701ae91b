"""Interpreter for a DSL that judges arguments to an induction tactic."""

__version__ = "0.1.0"
