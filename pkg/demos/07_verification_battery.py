"""Driving the verification battery programmatically.

The same machinery backs the ``frobsym`` command line tool:

    frobsym catalog                      # list built-in entries
    frobsym catalog orthant_cone2       # run one entry
    frobsym catalog all                 # self-test: every entry behaves
                                        # as documented (broken fixtures fail)
    frobsym check my_spec.json --report machine --out report.jsonl
"""

import json

from frobsym.battery import (
    builtin_catalog,
    emit_report,
    load_manifold_spec,
    parse_machine_report,
    run_battery,
)

print("== run a built-in entry ==")
catalog = builtin_catalog()
report = run_battery(catalog["orthant_cone2"].spec)
print(emit_report(report, "human"))

print("== a spec is plain JSON; unknown ids and checks are rejected ==")
spec_text = json.dumps({
    "name": "demo",
    "kind": "exponential_family",
    "payload": {"statistics": [[0.0, 1.0, 0.5], [1.0, -1.0, 0.25]],
                "beta": [0.2, -0.1]},
    "checks": ["gibbs_normalization", "cumulants_low_order", "dual_coordinates"],
    "tolerances": {"cumulants_low_order": 1e-5},
    "seed": 7,
})
spec = load_manifold_spec(spec_text)
report = run_battery(spec)
machine = emit_report(report, "machine")
print(machine)

print("== the machine format round-trips ==")
again = parse_machine_report(machine)
print(f"parsed back equal: {again == report}")

print("== the deliberately broken fixture documents its own failure ==")
entry = catalog["perturbed_wdvv3"]
report = run_battery(entry.spec)
row = report.rows[0]
print(f"row status = {row.status}, expected failures = {sorted(entry.expect_fail)}")
print(f"entry behaves as documented: {entry.matches_expectation(report)}")
