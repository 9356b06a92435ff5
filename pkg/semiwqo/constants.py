import logging

# ================================
# Logging
# ================================
LOG_LEVEL = logging.INFO
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s(%(funcName)s): %(message)s"
LOG_COLOR_FORMAT = "%(log_color)s" + LOG_FORMAT
LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "green",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "bold_red",
}


# ================================
# Configuration
# ================================
CONFIG_ENV_VAR = "SEMIWQO_CONFIG"
DEFAULT_CONFIG_FILE = "semiwqo.yaml"


# ================================
# Size limits (desk scale)
# ================================
CUTWIDTH_N_LIMIT = 22            # subset DP over 2^n masks
BRUTEFORCE_CUTWIDTH_N_LIMIT = 9  # n! orderings
IMMERSION_PATTERN_N_LIMIT = 6
IMMERSION_HOST_N_LIMIT = 10
ORDERED_CUTS_EXHAUSTIVE_N_LIMIT = 8
DOMINATES_BRUTEFORCE_N_LIMIT = 14


# ================================
# Exit codes
# ================================
EXIT_OK = 0          # affirmative result
EXIT_NEGATIVE = 1    # well-formed negative result
EXIT_USAGE = 2
EXIT_INVALID = 3


# ================================
# Output formats
# ================================
FORMAT_HUMAN = "human"
FORMAT_LINES = "lines"
OUTPUT_FORMATS = (FORMAT_HUMAN, FORMAT_LINES)
