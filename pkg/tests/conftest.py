import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def brute_order(a: int, p: int) -> int:
    a %= p
    x, k = a, 1
    while x != 1:
        x = x * a % p
        k += 1
    return k


def naive_count(A: int, B: int, p: int) -> int:
    """#E(F_p) by checking every (x, y)."""
    n = 1
    for x in range(p):
        r = (x**3 + A * x + B) % p
        n += sum(1 for y in range(p) if y * y % p == r)
    return n


# -- acceptance reporting -------------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
