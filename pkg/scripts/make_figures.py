"""Write the four figure datasets (CSV + manifest) into one directory.

    python scripts/make_figures.py out/
"""

import sys
from pathlib import Path

from brownwave.cli import main

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(parents=True, exist_ok=True)
for which in ("fig2", "fig3", "fig4", "fig5"):
    code = main(["figures", which, "--out", str(out / f"{which}.csv")])
    if code:
        sys.exit(code)
    print(f"wrote {out / which}.csv")
