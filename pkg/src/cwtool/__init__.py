"""Exact Clifford-Weil groups, Molien series and weight enumerators of self-dual codes over finite form rings."""

__version__ = "0.1.0"
