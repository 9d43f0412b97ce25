import pytest

from stackburn.abelian import FinAbGroup
from stackburn.symbols import FieldLabel

Z2 = FinAbGroup((2,))
Z3 = FinAbGroup((3,))
Z4 = FinAbGroup((4,))
V4 = FinAbGroup((2, 2))
TRIV = FinAbGroup(())
FAMILY = (Z2, Z3, Z4, V4)
K = FieldLabel()


def k_t(t: int) -> FieldLabel:
    return FieldLabel("k", 0, t)


@pytest.fixture
def family():
    return FAMILY


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    lines = test_acceptance.report()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
