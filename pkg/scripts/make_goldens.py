"""Regenerate the CLI golden files under tests/goldens.

Each golden records the exit code, standard output and standard error of one
command on one bundled fixture.  Run from the repository root:

    python scripts/make_goldens.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from fixtures import GOLDEN_DIR, golden_jobs, run_job  # noqa: E402


def main() -> None:
    GOLDEN_DIR.mkdir(exist_ok=True)
    for _, argv, golden in golden_jobs():
        # fixture paths are made relative so the goldens do not depend on the checkout
        text = run_job(argv).replace(str(ROOT) + "/", "")
        (GOLDEN_DIR / golden).write_text(text, encoding="utf-8", newline="\n")
        print(golden)


if __name__ == "__main__":
    main()
