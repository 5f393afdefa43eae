"""Filesystem adapters for run directories and result tables."""
