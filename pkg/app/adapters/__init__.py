"""Adapters - implementations of the storage and recording ports."""
