import sys
import textwrap
import logging

import constants
from errors import ConfigurationError

logger = logging.getLogger(constants.TOOL_NAME)

BAD_USAGE = object()


class Command:
    """
    A subcommand of the command line tool.
    """

    def __init__(self, require_ladder = False, sweeps = (), max_sweeps = 0):
        self.require_ladder = require_ladder
        self.sweeps = sweeps
        self.max_sweeps = max_sweeps
        self.function = None
        self.short_help = None
        self.long_help = None
        self.usage = None


    def set_function(self, function):
        """
        Bind a function to this command.

        This also reads the help and usage text from the docstring.
        """

        self.function = function

        if function.__doc__:
            helps = textwrap.dedent(function.__doc__).strip().split('\n\n')

            if helps and helps[-1].startswith('Usage:'):
                self.usage = helps[-1]
                del helps[-1]

            if helps:
                self.short_help = helps[0]

            if len(helps) >= 2:
                self.long_help = '\n\n'.join(helps[1:])


    def check_config(self, arguments):
        """
        Check that the run configuration fits this command.
        """

        cfg = arguments.config

        if self.require_ladder and not cfg.is_ladder:
            raise ConfigurationError(f'{arguments.command} needs a ladder system; give --gamma-1 and --gamma-2.')

        if len(cfg.sweeps) > self.max_sweeps:
            if self.max_sweeps == 0:
                raise ConfigurationError(f'{arguments.command} does not take sweeps.')
            raise ConfigurationError(f'{arguments.command} takes at most {self.max_sweeps} sweep(s), got {len(cfg.sweeps)}.')

        for sweep in cfg.sweeps:
            if sweep.name not in self.sweeps:
                raise ConfigurationError(f'{arguments.command} cannot sweep {sweep.name!r}; choose from {", ".join(self.sweeps)}.')


    def run(self, arguments):
        """
        Run the command and return the process exit code.
        """

        self.check_config(arguments)

        logger.info(f'Running {arguments.command}.')

        try:
            result = self.function(arguments)
        except Exception as e:
            logger.debug(f'{arguments.command} failed: {e!r}')
            raise e

        # Common error messages are handled here instead.
        if result is BAD_USAGE:
            self.bad_usage_error(arguments)
            return constants.EXIT_CONFIG

        logger.info(f'Finished {arguments.command}.')
        return constants.EXIT_OK


    def bad_usage_error(self, arguments):
        """
        Print the usage text for when a command is passed invalid arguments.
        """
        usage_text = self.usage or 'Bad usage.'
        usage_text = usage_text.replace('%COMMAND%', arguments.command).replace('%TOOL%', constants.TOOL_NAME)
        print(usage_text, file = arguments.stderr)


class CommandArguments:
    """
    The context passed to a command when it is run.
    """

    def __init__(self, command, config, stdout = None, stderr = None):
        self.command = command
        self.config = config
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
