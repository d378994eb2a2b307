"""Deformed sl3 link homology of braid closures and beta invariants."""
