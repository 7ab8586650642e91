"""Homology of dual graphs, finite flat graph morphisms and weight dimensions of wide open curves."""
