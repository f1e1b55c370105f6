"""
A small reproducible sweep
==========================

Run every method on a few instances through the command-line entry point
and turn the results into plot data.  Rerunning gives byte-identical files.
"""
from __future__ import annotations

import json
import tempfile
from pathlib import Path

from gmqaoa.cli import main

work = Path(tempfile.mkdtemp())
config = {"problem": "SK", "n_list": [5, 6], "d_list": [2, 3], "instances": 4,
          "max_depth": 12, "methods": ["XM", "GM", "GMa", "GMc"], "seed": 0}
(work / "config.json").write_text(json.dumps(config, indent=2))

main(["sweep", str(work / "config.json"), "--out", str(work / "results")])
for fig in ("fig3", "fig5"):
    main(["report", str(work / "results"), "--figure", fig, "--svg"])

print((work / "results" / "fig3.csv").read_text())
print("outputs in", work / "results")
