"""Real-valued quantum mechanics with flag qubits and a quotient-space tensor product."""

__version__ = "0.1.0"
