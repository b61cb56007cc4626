"""Validates every sample document against the schema for its kind, and
checks that malformed documents are rejected."""

import json
import pathlib
import sys

from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def main(schema_dir: pathlib.Path, sample_dir: pathlib.Path) -> int:
    schemas = {p.name: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    registry = Registry().with_resources(
        (s["$id"], Resource.from_contents(s)) for s in schemas.values()
    )
    for s in schemas.values():
        Draft202012Validator.check_schema(s)
    document = Draft202012Validator(schemas["document.schema.json"], registry=registry)
    by_kind = {
        name[: -len(".schema.json")]: Draft202012Validator(s, registry=registry)
        for name, s in schemas.items()
        if name not in ("document.schema.json", "common.schema.json")
    }

    failures = 0
    seen = set()
    for path in sorted(sample_dir.glob("*.json")):
        data = json.loads(path.read_text())
        errors = list(document.iter_errors(data))
        for doc in data if isinstance(data, list) else [data]:
            seen.add(doc["kind"])
            errors += list(by_kind[doc["kind"]].iter_errors(doc))
        status = "ok" if not errors else "INVALID"
        print(f"{status:8} {path.name}")
        for e in errors[:3]:
            print(f"         {e.message}")
        failures += bool(errors)

    missing = set(by_kind) - seen
    if missing:
        print(f"no sample covers kinds: {sorted(missing)}")
        failures += 1

    bad = [
        {"kind": "measure", "space": "X", "atoms": {"a": "inf"}},
        {"kind": "measure", "space": "X"},
        {"kind": "space", "name": "X"},
        {"kind": "map", "source": "X", "target": "Y", "table": {}, "extra": 1},
        {"kind": "coupling", "rows": "X", "cols": "Y", "table": [[0, "+inf"]]},
        {"kind": "bogus"},
    ]
    for doc in bad:
        if document.is_valid(doc):
            print(f"accepted malformed document: {json.dumps(doc)}")
            failures += 1
    print(f"{failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])))
