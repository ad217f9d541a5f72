from typing import Sequence


def l_value(p: int, q: int, degrees: Sequence[int], start: int = 0) -> int:
    """l_p^q for elements a_start, ..., a_n with the given degrees.

    p <= q gives |a_p| + ... + |a_q| + q - p + 1; p > q is the cyclic branch
    |a_p| + ... + |a_n| + |a_0| + ... + |a_q| + n - p + q. The empty sums
    l_start^{start-1} and l_{n+1}^n are 0.
    """
    n = start + len(degrees) - 1
    if q == p - 1 and (q == start - 1 or p == n + 1):
        return 0
    if p <= q:
        if p < start or q > n:
            raise ValueError(f"l_{p}^{q} out of range {start}..{n}")
        return sum(degrees[t - start] for t in range(p, q + 1)) + q - p + 1
    if start != 0:
        raise ValueError("Cyclic l-values need a collection starting at a_0")
    if p > n or q < 0:
        raise ValueError(f"l_{p}^{q} out of range 0..{n}")
    return sum(degrees[p:]) + sum(degrees[:q + 1]) + n - p + q


def block_l(p: int, q: int, degrees: Sequence[int]) -> int:
    """l over the positions p..q read cyclically, 0 when q < p.

    Positions may run past n; a_t stands for a_{t mod (n+1)}. Agrees with
    l_value mod 2 on every range of at most n + 1 positions.
    """
    size = len(degrees)
    return sum(degrees[t % size] + 1 for t in range(p, q + 1))


def sign_l(p: int, q: int, degrees: Sequence[int], start: int = 0) -> int:
    """Parity of l_p^q"""
    return l_value(p, q, degrees, start) % 2


def shifted_sum(degrees: Sequence[int]) -> int:
    return sum(d + 1 for d in degrees)


def reversal_sign(degrees: Sequence[int]) -> int:
    """Sum over i < j of (|a_i| + 1)(|a_j| + 1), mod 2"""
    odd = sum(1 for d in degrees if (d + 1) % 2)
    return (odd * (odd - 1) // 2) % 2


def parity_sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1
