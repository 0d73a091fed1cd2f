import os

# Groebner resource guard
MAX_BASIS = int(os.getenv("NERONKIT_MAX_BASIS", "500"))
MAX_DEGREE = int(os.getenv("NERONKIT_MAX_DEGREE", "60"))

# Weil reconstruction
WORD_BOUND = int(os.getenv("NERONKIT_WORD_BOUND", "3"))
ATLAS_WORKERS = int(os.getenv("NERONKIT_ATLAS_WORKERS", "4"))

# Volume forms: cap on pi-divisions along one component
MAX_ORDER_STEPS = 64

# Exit-code contract of the job runner
EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_INPUT_ERROR = 3
EXIT_RESOURCE_CAP = 4

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

REPORT_VERSION = "1.0"

COMMANDS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "commands")
