"""Workbench for partition-regular polynomial equations."""

ENGINE_VERSION = "0.1.0"
