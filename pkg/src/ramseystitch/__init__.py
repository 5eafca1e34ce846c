"""Construction and cataloguing of almost-minimal triangle-free Ramsey graphs."""

__version__ = "0.1.0"
