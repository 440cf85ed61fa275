"""Validate metrics-json files against the published schema.

usage: check_schema.py SCHEMA FILE... [--expect-invalid FILE...]
Exit 0 when every file validates (and every --expect-invalid file does not),
1 on any mismatch, 77 when the jsonschema package is unavailable.
"""

import json
import sys

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)


def main(argv):
    schema_path, rest = argv[0], argv[1:]
    valid, invalid = rest, []
    if "--expect-invalid" in rest:
        cut = rest.index("--expect-invalid")
        valid, invalid = rest[:cut], rest[cut + 1:]

    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    jsonschema.Draft202012Validator.check_schema(schema)

    ok = True
    for path in valid:
        with open(path) as f:
            errors = list(validator.iter_errors(json.load(f)))
        for e in errors[:3]:
            print(f"{path}: {e.message}")
        print(f"{'ok  ' if not errors else 'FAIL'} {path}")
        ok = ok and not errors
    for path in invalid:
        with open(path) as f:
            rejected = not validator.is_valid(json.load(f))
        print(f"{'ok  ' if rejected else 'FAIL'} {path} (expected invalid)")
        ok = ok and rejected
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
