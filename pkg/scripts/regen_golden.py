"""Re-freeze tests/golden/ from a pipeline run on the bundled fixture.

Run only after the oracle tests pass; the golden files are then the
reference for byte-exact regression checks.

    python scripts/regen_golden.py
"""

import shutil
from pathlib import Path

from turingnet.config import build_config, read_config_file
from turingnet.pipeline import run_pipeline

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "tests" / "data" / "fixture"
GOLDEN = ROOT / "tests" / "golden"


def main():
    cfg = build_config(read_config_file(FIXTURE / "pipeline.ini"),
                       {"output_dir": str(GOLDEN)})
    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    manifest = run_pipeline(cfg)
    for name in sorted(manifest["outputs"]):
        print(f"{manifest['outputs'][name][:16]}  {name}")


if __name__ == "__main__":
    main()
