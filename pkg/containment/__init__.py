"""Encodings of containment relations and Truemper configurations as pathograph families."""
