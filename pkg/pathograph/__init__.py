"""Pathograph data model, paths, inclusions and isomorphism."""
