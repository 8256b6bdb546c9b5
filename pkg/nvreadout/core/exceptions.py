"""
Custom exceptions for the readout simulator
"""


class NVReadoutError(Exception):
    """Base exception for the readout simulator"""

    pass


class ConfigurationError(NVReadoutError):
    """Raised when a configuration file is missing, malformed or inconsistent"""

    pass


class InvalidInputError(NVReadoutError):
    """Raised when an operation receives arguments outside its domain"""

    pass


class IllPosedSteadyStateError(NVReadoutError):
    """Raised when the Liouvillian null space is not one-dimensional"""

    pass


class StabilityError(NVReadoutError):
    """Raised when a fixed-step integrator is asked to take an unstable step"""

    pass


class SingularSusceptibilityError(NVReadoutError):
    """Raised when the susceptibility pole sits on the real frequency axis"""

    pass


class AliasingError(NVReadoutError):
    """Raised when a sampled waveform violates the demodulator sampling preconditions"""

    pass


class UndefinedPhaseError(NVReadoutError):
    """Raised when a phase is requested for a zero phasor"""

    pass


class StepTooLargeError(NVReadoutError):
    """Raised when a finite-difference step lets the phase wrap between samples"""

    pass
