import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Root directory
ROOT_DIR = Path(__file__).resolve().parent

OUTPUT_DIR = Path(os.getenv("SEQSUM_OUTPUT_DIR", ROOT_DIR / "analysis_reports"))

# Granularity grids (finer -> coarser)
MIN_SUPPORT_LEVELS = (0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
LAMBDA_LEVELS = (0.90, 0.75, 0.60, 0.45, 0.30, 0.15)

# SentenTree stops growing after this many visible nodes (0 = no cap)
DEFAULT_NODE_CAP = int(os.getenv("SEQSUM_NODE_CAP", "50"))

# Default count tolerance for insight queries
DEFAULT_TOLERANCE = 0.10

# Bench
MEMORY_SAMPLE_INTERVAL = 0.010  # seconds
DEFAULT_REPEATS = 1
DEFAULT_SEED = 7

# Layout (pixels)
NODE_WIDTH = 120.0
NODE_HEIGHT = 24.0
HORIZONTAL_GAP = 30.0
VERTICAL_GAP = 40.0
CANVAS_WIDTH = 960.0
CANVAS_HEIGHT = 600.0
MARGIN = 20.0
LINK_WIDTH_PER_SEQUENCE = 1.0

# Render
LABEL_MAX_CHARS = 18
FONT_SIZE = 12.0
BACKGROUND = "#ffffff"
