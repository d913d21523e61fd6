import os
from dotenv import load_dotenv

load_dotenv()

# Solve defaults
TIME_LIMIT_S = float(os.getenv("FORESTCUT_TIME_LIMIT", "3600"))
REL_GAP_TOL = float(os.getenv("FORESTCUT_GAP", "1e-6"))
INT_TOL = float(os.getenv("FORESTCUT_INT_TOL", "1e-6"))
ROOT_ROUNDS_MAX = int(os.getenv("FORESTCUT_ROOT_ROUNDS", "50"))
ROOT_CUTS_PER_ROUND = int(os.getenv("FORESTCUT_ROOT_CUTS_PER_ROUND", "200"))
BEST_BOUND_EVERY = int(os.getenv("FORESTCUT_BEST_BOUND_EVERY", "64"))
LOG_EVERY_NODES = int(os.getenv("FORESTCUT_LOG_EVERY_NODES", "1000"))

# Separation
EPS_SUPPORT = float(os.getenv("FORESTCUT_EPS_SUPPORT", "1e-6"))
EPS_CUT = float(os.getenv("FORESTCUT_EPS_CUT", "1e-6"))
MAX_FLOW_SCALE = int(os.getenv("FORESTCUT_MAX_FLOW_SCALE", "1000000000"))

# LP core
LP_FEAS_TOL = float(os.getenv("FORESTCUT_LP_FEAS_TOL", "1e-9"))
LP_OPT_TOL = float(os.getenv("FORESTCUT_LP_OPT_TOL", "1e-9"))
LP_BLAND_AFTER = int(os.getenv("FORESTCUT_LP_BLAND_AFTER", "50"))
LP_ITERATION_FACTOR = int(os.getenv("FORESTCUT_LP_ITER_FACTOR", "200"))
LP_REFACTOR_EVERY = int(os.getenv("FORESTCUT_LP_REFACTOR_EVERY", "100"))
LP_FACTORS_KEPT = int(os.getenv("FORESTCUT_LP_FACTORS_KEPT", "16"))

# Oracle
ORACLE_MAX_N = int(os.getenv("FORESTCUT_ORACLE_MAX_N", "25"))

# Batch
THREADS = int(os.getenv("FORESTCUT_THREADS", str(os.cpu_count() or 1)))
LOG_LEVEL = os.getenv("FORESTCUT_LOG_LEVEL", "INFO")

# Paths
_PROJECT_ROOT = os.path.dirname(os.path.dirname(__file__))
INSTANCE_DIR = os.path.join(_PROJECT_ROOT, "instances")
FIXTURE_DIR = os.path.join(INSTANCE_DIR, "fixtures")
RESULTS_DIR = os.path.join(_PROJECT_ROOT, "results")
