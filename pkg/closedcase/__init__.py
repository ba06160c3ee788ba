"""Rung elimination for families closed under adding edges, spokes and rungs."""
