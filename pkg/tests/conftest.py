import json
from pathlib import Path

import pytest

PKG_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = PKG_ROOT / "corpus"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def corpus_run(tmp_path_factory):
    """Run the whole bundled corpus once per session through the real CLI.

    Returns (summary dict, {config filename: full report dict}, elapsed seconds).
    """
    import time
    from filtra.cli import main

    out = tmp_path_factory.mktemp("corpus_out")
    summary_path = out / "summary.json"
    reports_dir = out / "reports"
    t0 = time.perf_counter()
    code = main(["corpus", str(CORPUS_DIR), "--summary", str(summary_path),
                 "--reports", str(reports_dir), "--quiet"])
    elapsed = time.perf_counter() - t0
    assert code == 0, "corpus sweep must exit 0"
    summary = json.loads(summary_path.read_text())
    reports = {p.name: json.loads(p.read_text())
               for p in sorted(reports_dir.glob("*.json"))}
    return summary, reports, elapsed


def load_golden(name: str):
    return json.loads((GOLDEN_DIR / name).read_text())
