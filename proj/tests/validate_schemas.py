"""Validate shipped fixtures and fresh CLI reports against schemas/."""
import json
import pathlib
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource

root = pathlib.Path(__file__).resolve().parent.parent
cli = sys.argv[1]
schemas = {p.name: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
registry = Registry().with_resources(
    [(s["$id"], Resource.from_contents(s)) for s in schemas.values()]
)


def check(instance, schema_name, what):
    jsonschema.Draft202012Validator(schemas[schema_name], registry=registry).validate(instance)
    print(f"ok  {what} ~ {schema_name}")


fx = root / "fixtures"
kinds = {
    "variety": ["conic", "nodal_cubic", "quartic", "quadric_surface", "twisted_cubic"],
    "linear_space": ["conic_secant_line", "conic_orthogonal_line", "conic_tangent_line",
                     "twisted_cubic_hyperplane", "quadric_line", "nodal_cubic_line_through_node"],
    "matrix": ["conic_A", "conic_B"],
    "point": ["point_100"],
    "path": ["conic_loop_path", "conic_tangent_crossing_path"],
}
for kind, names in kinds.items():
    for n in names:
        check(json.loads((fx / f"{n}.json").read_text()), f"{kind}.schema.json", n)

runs = [
    ["intersect", "--variety", fx / "twisted_cubic.json", "--hyperplane", fx / "twisted_cubic_hyperplane.json"],
    ["kappa", "--variety", fx / "conic.json", "--line", fx / "conic_secant_line.json"],
    ["kappa", "--variety", fx / "conic.json", "--line", fx / "conic_tangent_line.json"],
    ["track", "--variety", fx / "conic.json", "--path", fx / "conic_loop_path.json"],
    ["volumes", "--n", "3", "--m", "1"],
    ["tail", "--variety", fx / "conic.json", "--samples", "500", "--seed", "3", "--bootstrap", "20"],
]
for args in runs:
    out = subprocess.run([cli, *map(str, args)], capture_output=True, text=True)
    report = json.loads(out.stdout)
    check(report, "report.schema.json", args[0])
    if args[0] == "kappa":
        jsonschema.Draft202012Validator(
            {"$ref": schemas["report.schema.json"]["$id"] + "#/$defs/condition_report"}, registry=registry
        ).validate(report["result"])
    if args[0] == "tail":
        jsonschema.Draft202012Validator(
            {"$ref": schemas["report.schema.json"]["$id"] + "#/$defs/tail_estimate"}, registry=registry
        ).validate(report["result"])
    # round trip: what we emit re-parses to the same document
    assert json.loads(json.dumps(report)) == report
