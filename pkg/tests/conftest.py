from fractions import Fraction

from hypothesis import strategies as st

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def rationals(max_num=20, max_den=8):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@st.composite
def beliefs(draw, k, denominator=12):
    """Compositions of ``denominator`` into ``k`` parts."""
    parts = []
    left = denominator
    for _ in range(k - 1):
        x = draw(st.integers(0, left))
        parts.append(x)
        left -= x
    parts.append(left)
    perm = draw(st.permutations(range(k)))
    return tuple(Fraction(parts[i], denominator) for i in perm)
