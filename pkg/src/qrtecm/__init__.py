"""Stage-1 ECM factorisation on QRT maps (Somos-4, Somos-5 and Lyness)."""

__version__ = "0.1.0"
