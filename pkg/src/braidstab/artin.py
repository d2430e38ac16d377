"""Exact braid-word equality through the Artin action on the free group.

B_n acts faithfully on F_n = <x_1, ..., x_n> by

    sigma_i:  x_i -> x_i x_{i+1} x_i^{-1},   x_{i+1} -> x_i,

so two words represent the same braid exactly when their actions agree on
every generator.  Free-group words are freely reduced tuples of signed
indices; everything is exact integer combinatorics.
"""
from __future__ import annotations


def reduce_word(word):
    """Free reduction of a word over signed generator indices."""
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def invert(word):
    return tuple(-g for g in reversed(word))


def concat(*words):
    out = []
    for w in words:
        for g in w:
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
    return tuple(out)


def cyclic_reduce(word):
    w = list(reduce_word(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def _substitute(word, images):
    """Apply generator |-> image substitution to a free-group word."""
    out = []
    for g in word:
        img = images[abs(g) - 1]
        for h in (img if g > 0 else invert(img)):
            if out and out[-1] == -h:
                out.pop()
            else:
                out.append(h)
    return tuple(out)


def braid_action(word, n):
    """Images of (x_1, ..., x_n) under the braid word in B_n."""
    images = [((j + 1),) for j in range(n)]
    for g in word:
        i = abs(g)
        if not 1 <= i <= n - 1:
            raise ValueError("generator index %d out of range for B_%d" % (i, n))
        xi, xj = images[i - 1], images[i]
        if g > 0:
            images[i - 1] = concat(xi, xj, invert(xi))
            images[i] = xi
        else:
            images[i - 1] = xj
            images[i] = concat(invert(xj), xi, xj)
    return tuple(images)


def words_equal(w1, w2, n):
    """Exact equality of two braid words in B_n."""
    return braid_action(concat(w1, invert(w2)), n) == braid_action((), n)


def is_trivial(word, n):
    return braid_action(word, n) == braid_action((), n)


def conjugacy_search(w1, w2, n, budget=2000):
    """Budgeted conjugacy test in B_n.

    Returns True / False-not-found distinction only through True / None:
    the caller decides whether None means indeterminate (invariant
    fast-paths for definite False live in the braid layer).  The search
    explores cyclic rotations of w1 and breadth-first conjugation by
    generators, comparing exactly via the Artin action.
    """
    w1 = reduce_word(w1)
    w2 = reduce_word(w2)
    if words_equal(w1, w2, n):
        return True
    # cyclic rotations (conjugation by prefixes)
    for r in range(1, len(w1)):
        rot = w1[r:] + w1[:r]
        if words_equal(rot, w2, n):
            return True
    # BFS over short conjugators
    seen = {braid_action(w1, n)}
    frontier = [w1]
    spent = 0
    while frontier and spent < budget:
        nxt = []
        for w in frontier:
            for g in [k for i in range(1, n) for k in (i, -i)]:
                cw = concat((g,), w, (-g,))
                spent += 1
                key = braid_action(cw, n)
                if key in seen:
                    continue
                seen.add(key)
                if words_equal(cw, w2, n):
                    return True
                if len(cw) <= len(w1) + 4:
                    nxt.append(cw)
                if spent >= budget:
                    break
            if spent >= budget:
                break
        frontier = nxt
    return None
