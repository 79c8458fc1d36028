import sys
from pathlib import Path

# Allow running the tests straight from a checkout, before `pip install -e .`.
SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))
