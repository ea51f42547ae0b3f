from hypothesis import settings

settings.register_profile("cwtool", deadline=None, max_examples=60)
settings.load_profile("cwtool")

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is not None:
        prev = _CRITERIA.get(crit[0], (crit[1], True))
        _CRITERIA[crit[0]] = (crit[1], prev[1] and report.outcome == "passed")


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is not None and ("criterion", m.args) not in item.user_properties:
        item.user_properties.append(("criterion", m.args))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        label, ok = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {label}")
