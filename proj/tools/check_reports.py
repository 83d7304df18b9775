#!/usr/bin/env python3
"""Validate every JSON report under a directory against docs/report.schema.json."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    schema_path, root = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    reports = sorted(root.rglob("*.json"))
    reports = [p for p in reports if p.name != "config.json"]
    if not reports:
        print(f"no reports under {root}")
        return 1
    failed = 0
    for path in reports:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        if errors:
            failed += 1
            print(f"FAIL {path}: {errors[0].message}")
        else:
            print(f"ok   {path}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
