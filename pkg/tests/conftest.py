import corpus


def pytest_terminal_summary(terminalreporter):
    if not corpus.ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(corpus.ACCEPTANCE_LINES):
        terminalreporter.write_line(corpus.ACCEPTANCE_LINES[k])
