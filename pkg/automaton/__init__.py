"""Finite automata deciding the realization problem for rungless pathographs."""
