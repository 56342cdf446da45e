_results: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    n = marker.args[0]
    if call.when == "setup":
        _results.setdefault(n, [])
    elif call.when == "call":
        _results[n].append(call.excinfo is None)
    elif call.excinfo is not None:
        _results.setdefault(n, []).append(False)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        outcomes = _results[n]
        ok = bool(outcomes) and all(outcomes)
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE criterion {n}: {status} ({sum(outcomes)}/{len(outcomes)} checks)")
