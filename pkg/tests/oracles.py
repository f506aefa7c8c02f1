"""Independent reference implementations used only by the tests."""
from mpmath import mp, mpf, log as mlog


def is_prime_td(x: int) -> bool:
    if x < 2:
        return False
    if x % 2 == 0:
        return x == 2
    d = 3
    while d * d <= x:
        if x % d == 0:
            return False
        d += 2
    return True


def primes_td(limit: int) -> list[int]:
    return [x for x in range(2, limit + 1) if is_prime_td(x)]


def count_in_half_interval(x: int) -> int:
    """Primes q with x/2 < q <= x, by trial division."""
    return sum(1 for q in range(x // 2 + 1, x + 1) if is_prime_td(q))


def brute_ramanujan(n: int) -> int:
    """1 + the largest x below p_{4n} whose interval (x/2, x] holds fewer than n primes."""
    ps = []
    x = 1
    while len(ps) < 4 * n:
        x += 1
        if is_prime_td(x):
            ps.append(x)
    x = ps[-1]
    while count_in_half_interval(x) >= n:
        x -= 1
    return x + 1


def hp(func, *args, dps=50):
    with mp.workdps(dps):
        return func(*[mpf(a) for a in args])


def L_hp(k):
    return k * (mlog(k) + mlog(mlog(k)) - 1 + (mlog(mlog(k)) - mpf("2.1")) / mlog(k))


def U_hp(k):
    return k * (mlog(k) + mlog(mlog(k)) - 1 + (mlog(mlog(k)) - 2) / mlog(k))


def g_corollary_hp(n):
    return (mlog(n) + mlog(mlog(n)) - mlog(2) - mpf("0.5")) / (mlog(2) + mpf("0.5"))


def alpha_corollary_hp(n):
    return 2 * n * (1 + 1 / g_corollary_hp(n))


def G_corollary_hp(n):
    a = alpha_corollary_hp(n)
    return U_hp(a) - 2 * L_hp(a - n)
