"""Access to the bundled job configs."""

from __future__ import annotations

import io
from pathlib import Path
from typing import List, Tuple

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "refrad" / "fixtures"


def fixture_names() -> List[str]:
    return sorted(p.name for p in FIXTURE_DIR.glob("*.cfg"))


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / name


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")


GOLDEN_DIR = Path(__file__).resolve().parent / "goldens"

COMMANDS_BY_KIND = {
    "module": [["radii"], ["refined"], ["frobenius"]],
    "family": [["radii"], ["refined"], ["variation"], ["variation", "--format", "csv"], ["swan"]],
    "dwork": [["radii"], ["refined"], ["variation"], ["swan"]],
    "character": [["radii"], ["refined"], ["variation"], ["swan"], ["rsw"], ["filtration"]],
}


def fixture_kind(name: str) -> str:
    for line in fixture_text(name).splitlines():
        key, _, value = line.partition("=")
        if key.strip() == "kind":
            return value.strip()
    raise ValueError(f"{name} has no kind")


def golden_jobs() -> List[Tuple[str, List[str], str]]:
    """``(fixture, argv, golden file name)`` for every bundled fixture and applicable command."""
    jobs = []
    for name in fixture_names():
        stem = name[: -len(".cfg")]
        for cmd in COMMANDS_BY_KIND[fixture_kind(name)]:
            tag = "-".join(x.lstrip("-") for x in cmd)
            argv = [cmd[0], str(fixture_path(name)), "--seed", "0"] + cmd[1:]
            jobs.append((name, argv, f"{stem}.{tag}.golden"))
    return jobs


def run_job(argv: List[str]) -> str:
    """Exit code, standard output and standard error of one in-process CLI run."""
    from refrad.cli import run

    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return f"exit: {code}\n--- stdout\n{out.getvalue()}--- stderr\n{err.getvalue()}"


# PASS/FAIL lines of the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: List[str] = []
