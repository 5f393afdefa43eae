"""Domain layer - channel model, estimation, networks and training without I/O."""
