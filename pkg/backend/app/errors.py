"""
Exception hierarchy for the machine-minimization lab.

Scheduling failures (a CMS run touching its forbidden machine, a deadline miss)
are reported as data inside RunResult; the exceptions below are reserved for bad
input, bad configuration and broken contracts.
"""


class MachMinError(Exception):
    """Root of every error raised by this package."""


class InvalidJobError(MachMinError, ValueError):
    """A job or instance violates the job model (p >= 1, d >= r + p, unique ids)."""


class ConfigError(MachMinError, ValueError):
    """An algorithm, generator or environment setting is out of range."""


class GeneratorError(MachMinError, ValueError):
    """A generator spec cannot be satisfied with integer job data."""


class BruteForceLimitError(MachMinError, ValueError):
    """The exhaustive oracle was asked to solve an instance above its size guard."""


class UnknownJobError(MachMinError, KeyError):
    """A certificate or schedule references a job id the instance does not contain."""


class CertificateError(MachMinError, ValueError):
    """A certificate could not be built or is malformed."""


class OracleError(MachMinError):
    """No machine count admits a feasible schedule (only possible at speed < 1)."""


class SchedulerContractError(MachMinError, RuntimeError):
    """A scheduler returned a decision the engine cannot execute."""
