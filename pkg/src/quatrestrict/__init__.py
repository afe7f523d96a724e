"""Local restriction multiplicities and quaternionic modular forms of prime-power level."""

__version__ = "0.1.0"
