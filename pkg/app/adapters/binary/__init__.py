"""Little-endian binary codecs for datasets and checkpoints."""
