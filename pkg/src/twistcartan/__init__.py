"""Twisted groupoids, their Weyl groupoids and twists, and Cartan/diagonal checks."""
