import math

import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_force_crossings(needle, d, y, alpha, beta):
    """Count segment/line intersections by enumerating lines and solving for t."""
    total = 0
    for length, angle in ((needle.a, alpha), (needle.b, beta)):
        x0, y0 = 0.0, y
        x1, y1 = length * math.cos(angle), y + length * math.sin(angle)
        if y1 == y0:
            continue
        for m in range(math.floor(min(y0, y1) / d) - 2, math.ceil(max(y0, y1) / d) + 3):
            t = (m * d - y0) / (y1 - y0)
            if 0.0 <= t <= 1.0:
                total += 1
    return total


def near_line(heights, d, tol=1e-12):
    return any(min(h % d, d - h % d) < tol * d for h in heights)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
