import sys
from pathlib import Path

# The module under test lives one directory up and may not be installed.
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
