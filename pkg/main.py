#!/usr/bin/python3
# .env may set GLSIM_LOG_FILE and GLSIM_LOG_LEVEL, so it is loaded before the logger is configured.
from dotenv import load_dotenv
load_dotenv()

import logger as loggermodule
import logging
logger = logging.getLogger('glsim')

import sys

import cli


if __name__ == '__main__':
    logger.debug("Starting glsim.")
    sys.exit(cli.run(sys.argv[1:]))
