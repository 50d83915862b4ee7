import itertools

import pytest

_INV = {"a": "A", "A": "a", "b": "B", "B": "b"}


def brute_reduce(letters: str) -> str:
    stack = []
    for c in letters:
        if stack and _INV[stack[-1]] == c:
            stack.pop()
        else:
            stack.append(c)
    return "".join(stack)


def brute_ball(R: int) -> list[str]:
    """Reduced words of length <= R by exhaustive enumeration, in word order."""
    words = set()
    for L in range(R + 1):
        for t in itertools.product("abAB", repeat=L):
            words.add(brute_reduce("".join(t)))
    return sorted(words, key=lambda w: (len(w), ["abAB".index(c) for c in w]))


@pytest.fixture(scope="session")
def ball_oracle():
    return brute_ball


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
