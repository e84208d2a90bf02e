import constants


class SimulationError(Exception):
    """
    Base class for every failure the simulator reports on purpose.

    The command line maps the exit_code attribute to the process exit status.
    """

    exit_code = constants.EXIT_NUMERICAL


class ConfigurationError(SimulationError):
    exit_code = constants.EXIT_CONFIG


class ValidationError(ConfigurationError):
    """
    An input state, operator or parameter set is not what the operation accepts.
    """


class DimensionError(ValidationError):
    pass


class DomainError(ValidationError):
    """
    An argument lies outside the domain where a closed-form expression holds.
    """


class DegeneratePostselectionError(SimulationError):
    """
    All probability has left the postselected subspace.
    """

    exit_code = constants.EXIT_POSTSELECTION

    def __init__(self, message, time = None):
        super().__init__(message)
        self.time = time


class NumericalError(SimulationError):
    exit_code = constants.EXIT_NUMERICAL
