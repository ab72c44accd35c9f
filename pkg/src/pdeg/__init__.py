"""p-degree of elliptic curves over Q_p: closed-form engine plus brute-force oracles."""

__version__ = "0.1.0"
