"""In-memory adapters for testing."""
