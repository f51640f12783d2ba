import pytest

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion for the summary."""
    lines = request.config.stash[ACCEPTANCE]
    reporter = request.config.pluginmanager.getplugin("terminalreporter")

    def record(criterion: int, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] AC{criterion:>2}: {detail}"
        lines.append(line)
        if reporter is not None and request.config.option.verbose > 0:
            reporter.ensure_newline()
            reporter.write_line("    " + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("AC")[1].split(":")[0])):
            terminalreporter.write_line(line)
