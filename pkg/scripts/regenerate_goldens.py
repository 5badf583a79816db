"""Rewrite tests/golden/<name>.json from the current code.

Run only after a deliberate change to report contents; the test suite
compares fresh reports against these files under tolerance.
"""
import argparse
from pathlib import Path

from spinstat import catalog
from spinstat.config import RunConfig
from spinstat.report import build_report, dumps

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=GOLDEN_DIR)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    for name in catalog.NAMES:
        report = build_report(catalog.get(name).spec, RunConfig(), command="report")
        path = args.out / f"{name}.json"
        path.write_text(dumps(report) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
