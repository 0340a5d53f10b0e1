import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


def format_line(number, title, parts):
    """parts: iterable of (label, worst residual, tolerance)."""
    ok = all(res < tol for _, res, tol in parts)
    detail = "; ".join(f"{label} {res:.2e} < {tol:g}" if res < tol else f"{label} {res:.2e} !< {tol:g}"
                       for label, res, tol in parts)
    return ok, f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]"


@pytest.fixture
def criterion(request):
    lines = request.config.stash[_LINES]

    def record(number, title, parts):
        ok, line = format_line(number, title, parts)
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
