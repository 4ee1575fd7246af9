"""HTTP service wrapping the simulation core."""
