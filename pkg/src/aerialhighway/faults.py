"""Shared error types."""


class SimulationFault(RuntimeError):
    """Non-finite physics output or other unrecoverable simulation state."""


class ConfigError(ValueError):
    """Scenario configuration failed validation; message carries the field path."""
