#!/usr/bin/env python3
"""Run the full default pipeline (generate -> analyze -> quasi -> hull) and
write every artifact under out/default/."""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from apxlat import cli  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))

if __name__ == "__main__":
    cfg = os.path.join(HERE, "..", "configs", "default.json")
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, "..", "out", "default")
    raise SystemExit(cli.main(["run", "--config", cfg, "--out", out, "--timings"]))
