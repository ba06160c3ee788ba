"""Realizations, the bounded oracle and determination strings."""
