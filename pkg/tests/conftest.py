from hypothesis import HealthCheck, settings

settings.register_profile(
    "verify",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("verify")

# One line per acceptance criterion, replayed after the test summary so the
# verdicts are visible without -s.
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
