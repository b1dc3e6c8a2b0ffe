"""Workbench for repairing missing is-a relations in acyclic ALC terminologies."""

__version__ = "0.1.0"
