import os
import cmath
import math

# Constants used by the simulator in various places.

TOOL_NAME = "glsim"
VERSION = "1.0.0"
ENVVAR_PREFIX = 'GLSIM_'
WORKING_DIR = os.getcwd()
LOG_FILE = os.environ.get(f'{ENVVAR_PREFIX}LOG_FILE', os.path.join(WORKING_DIR, "glsim.log"))
LOG_LEVEL = os.environ.get(f'{ENVVAR_PREFIX}LOG_LEVEL', "INFO").upper()

# Linear algebra.
DEFECTIVE_CONDITION = 1e8
DEFECTIVE_GAP = 1e-8
# Two unit eigenvectors this close to parallel are treated as coalesced.
COALESCED_OVERLAP = 1 - 1e-12
HERMITIAN_TOL = 1e-12

# States.
STATE_TOL = 1e-10
TRACE_FLOOR = 1e-300
STEADY_TOL = 1e-9
ROOT_IMAG_TOL = 1e-9

# Monte-Carlo trajectories.
DT_FACTOR = 1e-3
RATE_EPSILON = 1e-12
TRAJECTORY_BLOCK = 128
# Steps of random numbers drawn at a time per trajectory.
RANDOM_CHUNK = 1024
NORM_TOL = 1e-10

# Command line defaults.
DEFAULT_GAMMA_D = 1.0
DEFAULT_GAMMA_J = 1.0
DEFAULT_OMEGA = 0.0
DEFAULT_POINTS = 201
DEFAULT_T_SCALE = 10.0
DEFAULT_TRAJECTORY_T_SCALE = 5.0
DEFAULT_N_TRAJ = 10000
DEFAULT_SEED = 20240607
DEFAULT_WORKERS = 1
DEFAULT_FORMAT = "csv"

# Reproduction panels use this rate as the unit of |gamma_d| and gamma.
PANEL_RATE = 1.0

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_POSTSELECTION = 3
EXIT_NUMERICAL = 4

# (|1> + e^{i 3pi/4} |2>) / sqrt(2)
PSI0_AMPLITUDES = (1 / math.sqrt(2), cmath.exp(0.75j * math.pi) / math.sqrt(2))
