#!/usr/bin/env python3
"""Export every golden scenario as a JSON file under scenarios/.

The exported files are what `racsim run --scenario ...` consumes; the
`racsim golden` subcommand builds the same scenarios in memory.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from racsim.golden import GOLDEN_CASES
from racsim.sim import scenario_to_json


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("scenarios")
    out_dir.mkdir(parents=True, exist_ok=True)
    for case in GOLDEN_CASES:
        data = scenario_to_json(case.build())
        data["description"] = case.description
        path = out_dir / f"{case.name}.json"
        path.write_text(json.dumps(data, indent=2) + "\n")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
