"""Prints one verdict line per acceptance criterion at the end of the run."""

CRITERIA = {
    "test_criterion_01_oracle_equivalence": (1, "oracle equivalence"),
    "test_criterion_02_feasibility_invariant": (2, "feasibility invariant"),
    "test_criterion_03_coupling_characterization": (3, "coupling characterization"),
    "test_criterion_04_metric_suite": (4, "metric suite"),
    "test_criterion_05_gluing": (5, "gluing"),
    "test_criterion_06_restriction_optimality": (6, "restriction optimality"),
    "test_criterion_07_moreau_yosida": (7, "moreau-yosida"),
    "test_criterion_08_tail_bound": (8, "tail bound"),
    "test_criterion_09_liminf": (9, "liminf inequality"),
    "test_criterion_10_scale": (10, "scale"),
}

_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.split("::")[-1]
    if name in CRITERIA:
        _RESULTS[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for name, (number, label) in sorted(CRITERIA.items(), key=lambda kv: kv[1][0]):
        if name not in _RESULTS:
            continue
        verdict = "PASS" if _RESULTS[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} ({label}): {verdict}")
