from hypothesis import settings

# exact expansions and orbit batches take longer than hypothesis' default 200 ms
settings.register_profile("basinkernel", deadline=None)
settings.load_profile("basinkernel")

ACCEPTANCE_LINES: list[str] = []


def record(name: str, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
