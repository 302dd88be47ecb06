"""Write the default Wundt curve to results/wundt.csv (1001 points)."""

import sys
from pathlib import Path

from curious_elm.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    (ROOT / "results").mkdir(exist_ok=True)
    sys.exit(main(["wundt", "--points", "1001", "--out", str(ROOT / "results" / "wundt.csv")] + sys.argv[1:]))
