"""triforge: triangulations of 3-manifolds from surgery and Heegaard data."""

__version__ = "0.1.0"
