import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE = {}


@pytest.fixture
def record_criterion():
    """Record one acceptance line: record_criterion(number, title, passed, detail)."""
    def record(number, title, passed, detail=""):
        ACCEPTANCE[number] = (title, passed, detail)
        print(f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title} {detail}".rstrip())
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))


def cayley_orthogonal(n, rng: random.Random, size=3):
    """Random rational orthogonal matrix (I - A)(I + A)^{-1}, A skew, times a sign flip."""
    from flatspec import rational as rq
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = Fraction(rng.randint(-size, size), rng.randint(1, size))
            a[i][j], a[j][i] = x, -x
    eye = rq.identity(n)
    minus = [[e - x for e, x in zip(r1, r2)] for r1, r2 in zip(eye, a)]
    plus = [[e + x for e, x in zip(r1, r2)] for r1, r2 in zip(eye, a)]
    q = rq.matmul(minus, rq.inverse(plus))
    if rng.random() < 0.5:
        q = [[-x for x in q[0]]] + q[1:]
    return q


def random_unimodular(n, rng: random.Random, steps=4):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice([-1, 1])
        for row in u:
            row[j] += c * row[i]
    if rng.random() < 0.5:
        for row in u:
            row[0] = -row[0]
    return u
