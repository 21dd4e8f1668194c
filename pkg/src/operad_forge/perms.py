"""Permutations in one-line notation.

A permutation of {1..n} is a tuple p with p[k-1] = p(k). Products follow
function composition: mul(a, b)(x) = a(b(x)).
"""

from itertools import permutations


def identity(n):
    return tuple(range(1, n + 1))


def is_perm(p):
    return sorted(p) == list(range(1, len(p) + 1))


def mul(a, b):
    if len(a) != len(b):
        raise ValueError("permutations of different sizes")
    return tuple(a[x - 1] for x in b)


def mul_all(*ps):
    out = ps[-1]
    for p in reversed(ps[:-1]):
        out = mul(p, out)
    return out


def inv(p):
    out = [0] * len(p)
    for k, x in enumerate(p, 1):
        out[x - 1] = k
    return tuple(out)


def all_perms(n):
    """All of Sigma_n in lexicographic order of one-line notation."""
    return list(permutations(range(1, n + 1)))


def transposition(n, a, b):
    p = list(range(1, n + 1))
    p[a - 1], p[b - 1] = b, a
    return tuple(p)


def adjacent_transpositions(n):
    return [transposition(n, k, k + 1) for k in range(1, n)]


def insert(sigma, i, tau):
    """Block insertion sigma o_i tau in Sigma_{n+m-1}.

    Position i of sigma is replaced by a block of m = len(tau) positions whose
    values are sigma(i)-1+tau(1), ..., sigma(i)-1+tau(m); the remaining values
    above sigma(i) move up by m-1. For m = 0 position i is deleted.
    """
    n, m = len(sigma), len(tau)
    if not 1 <= i <= n:
        raise ValueError("slot %d out of range for arity %d" % (i, n))
    s = sigma[i - 1]

    def shift(p):
        return p if p < s else p + m - 1

    out = [shift(p) for p in sigma[:i - 1]]
    out.extend(s - 1 + t for t in tau)
    out.extend(shift(p) for p in sigma[i:])
    return tuple(out)


def act_list(items, sigma):
    """Right action on lists: (items . sigma)[k] = items[sigma(k)]."""
    return tuple(items[x - 1] for x in sigma)


def block_sum(*ps):
    """Concatenation p1 + p2 + ... acting on consecutive blocks."""
    out = []
    off = 0
    for p in ps:
        out.extend(x + off for x in p)
        off += len(p)
    return tuple(out)


def block_perm(sizes, sigma):
    """Permutation moving blocks of the given sizes according to sigma.

    Uses the right-action convention: the result acts on a concatenated list
    by placing block sigma(1) first, then block sigma(2), and so on.
    """
    starts = []
    acc = 0
    for s in sizes:
        starts.append(acc)
        acc += s
    out = []
    for x in sigma:
        out.extend(starts[x - 1] + k + 1 for k in range(sizes[x - 1]))
    return tuple(out)
