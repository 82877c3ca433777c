from hypothesis import settings

settings.register_profile("qsphere", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("qsphere")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
