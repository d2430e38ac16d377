"""Braids traced by orbit sets in the mapping torus, and their invariants.

Words are read on the cut cylinder: strands are ordered by y mod 1, an
adjacent transposition of that order is a sigma_i^{+-1} letter (over/under
resolved by x), and a strand wrapping through the cut y = 0 is the annular
rotation letter tau^{+-1}.  Internally a word is a tuple of integers with
|g| <= n-1 meaning sigma_|g|^{sign g} and |g| = n meaning tau^{sign g}.

For word-problem work annular braids embed into the (n+1)-strand disk braid
group with a pinned core strand at position 1:

    sigma_i -> sigma_{i+1},    tau -> sigma_1^2 sigma_2 ... sigma_n

(verified against the rotation relations tau sigma_i tau^-1 = sigma_{i+1}).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import artin
from .surface import HamiltonianStage, FlowSettings

INDETERMINATE = "indeterminate"


class ResolutionError(RuntimeError):
    """Strand collision or unresolvable event ordering; increase samples."""


@dataclass
class Strand:
    """One suspension arc: t in [0,1] -> (x, y_lift), graph over t."""
    cycle: int                  # index of the owning orbit cycle
    index: int                  # position within the cycle
    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray              # continuous lift

    @property
    def winding_increment(self):
        return self.ys[-1] - self.ys[0]


@dataclass
class AnnularBraid:
    n: int
    word: tuple                 # ints: |g|<=n-1 sigma, |g|==n tau
    winding_vector: tuple = ()  # per cycle, sorted not required here
    strands: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.word = tuple(int(g) for g in self.word)
        for g in self.word:
            if g == 0 or abs(g) > self.n:
                raise ValueError("bad generator %d for n=%d" % (g, self.n))

    # -- serialization: JSON uses +-i for sigma_i, +-n for tau^{+-1};
    #    a bare 0 is accepted as tau on input.

    def to_json(self):
        return {"n": self.n, "word": list(self.word),
                "winding": list(self.winding_vector)}

    @classmethod
    def from_json(cls, d):
        n = int(d["n"])
        word = [n if g == 0 else int(g) for g in d["word"]]
        return cls(n=n, word=tuple(word),
                   winding_vector=tuple(d.get("winding", ())))

    def inverse(self):
        return AnnularBraid(self.n, tuple(-g for g in reversed(self.word)),
                            winding_vector=tuple(-w for w in self.winding_vector))

    def __mul__(self, other):
        if self.n != other.n:
            raise ValueError("strand counts differ")
        return AnnularBraid(self.n, self.word + other.word)


def _tau_image(n):
    return (1, 1) + tuple(range(2, n + 1))


def embedded_word(b):
    """Image of the annular word in the (n+1)-strand disk braid group."""
    n = b.n
    out = []
    for g in b.word:
        if abs(g) == n:
            out.extend(_tau_image(n) if g > 0 else artin.invert(_tau_image(n)))
        else:
            out.append(g + 1 if g > 0 else g - 1)
    return artin.reduce_word(out)


# ---------------------------------------------------------------------------
# Word bookkeeping: permutation, windings, crossings


def _track_word(n, word):
    """Run the word over the positional order; return (perm, winding_by_strand,
    crossings, sigma_exp, tau_exp).  Strand ids are initial positions 0..n-1;
    perm[p] = final position of the strand that started at p; crossings are
    (strand_a, strand_b, sign)."""
    order = list(range(n))
    winding = [0] * n
    crossings = []
    s_exp = t_exp = 0
    for g in word:
        if abs(g) == n:
            if g > 0:
                s = order.pop()
                order.insert(0, s)
                winding[s] += 1
                t_exp += 1
            else:
                s = order.pop(0)
                order.append(s)
                winding[s] -= 1
                t_exp -= 1
        else:
            i = abs(g) - 1
            a, bb = order[i], order[i + 1]
            order[i], order[i + 1] = bb, a
            crossings.append((a, bb, 1 if g > 0 else -1))
            s_exp += 1 if g > 0 else -1
    perm = [0] * n
    for pos, s in enumerate(order):
        perm[s] = pos
    return perm, winding, crossings, s_exp, t_exp


def _cycles_of(perm):
    n = len(perm)
    seen = [False] * n
    cycles = []
    for i in range(n):
        if seen[i]:
            continue
        c = []
        j = i
        while not seen[j]:
            seen[j] = True
            c.append(j)
            j = perm[j]
        cycles.append(c)
    return cycles


@dataclass(frozen=True)
class BraidInvariants:
    cycle_structure: tuple       # sorted cycle lengths
    winding_sorted: tuple        # per-cycle windings, sorted
    linking: tuple               # canonical signed-crossing matrix, core first;
                                 # off-diagonal = 2 * linking number of the
                                 # closure components, diagonal = signed
                                 # self-crossings of the component
    exponent_sum: tuple          # (sigma exponent, tau exponent)

    def to_json(self):
        return {"cycle_structure": list(self.cycle_structure),
                "winding_sorted": list(self.winding_sorted),
                "linking": [list(r) for r in self.linking],
                "exponent_sum": list(self.exponent_sum)}


def invariants(b):
    """Conjugation-invariant record of an annular braid."""
    n = b.n
    perm, winding, crossings, s_exp, t_exp = _track_word(n, b.word)
    cycles = _cycles_of(perm)
    cyc_of = {}
    for ci, c in enumerate(cycles):
        for s in c:
            cyc_of[s] = ci
    k = len(cycles)
    cw = [sum(winding[s] for s in c) for c in cycles]
    # doubled linking: sigma crossings between distinct cycles; each tau
    # letter is a double crossing of the wrapping strand with the core
    L = [[0] * (k + 1) for _ in range(k + 1)]   # index 0 = core
    for a, bb, s in crossings:
        ca, cb = cyc_of[a] + 1, cyc_of[bb] + 1
        if ca != cb:
            L[ca][cb] += s
            L[cb][ca] += s
        else:
            L[ca][ca] += s
    for ci, w in enumerate(cw):
        L[0][ci + 1] += 2 * w
        L[ci + 1][0] += 2 * w
    # canonicalize: order non-core cycles to minimize (lengths, windings,
    # flattened matrix)
    lens = [len(c) for c in cycles]
    best = None
    for pi in itertools.permutations(range(k)):
        key_lens = tuple(lens[i] for i in pi)
        key_w = tuple(cw[i] for i in pi)
        idx = [0] + [i + 1 for i in pi]
        mat = tuple(tuple(L[r][c] for c in idx) for r in idx)
        cand = (key_lens, key_w, mat)
        if best is None or cand < best:
            best = cand
    return BraidInvariants(cycle_structure=tuple(sorted(lens)),
                          winding_sorted=tuple(sorted(cw)),
                          linking=best[2],
                          exponent_sum=(s_exp, t_exp))


def braid_permutation(b):
    perm, _, _, _, _ = _track_word(b.n, b.word)
    return perm


# ---------------------------------------------------------------------------
# Isotopy (conjugacy in the annular braid group)


def is_isotopic(b1, b2, budget=3000):
    """True / False / INDETERMINATE comparison of braid types.

    Fast-paths on invariants, then exact equality and a budgeted conjugacy
    search (conjugators range over annular generators only, compared via
    the faithful Artin action of the pinned-core disk embedding)."""
    if b1.n != b2.n:
        return False
    if invariants(b1) != invariants(b2):
        return False
    n = b1.n
    N = n + 1
    w2 = embedded_word(b2)
    ref = artin.braid_action(w2, N)

    def hit(w):
        return artin.braid_action(w, N) == ref

    w1 = embedded_word(b1)
    if hit(w1):
        return True
    # conjugation by cyclic rotation of the annular word
    for r in range(1, len(b1.word)):
        rot = AnnularBraid(n, b1.word[r:] + b1.word[:r])
        if hit(embedded_word(rot)):
            return True
    # BFS over annular conjugators
    gens = []
    for i in range(1, n):
        gens.append(((i + 1),))
        gens.append((-(i + 1),))
    gens.append(_tau_image(n))
    gens.append(artin.invert(_tau_image(n)))
    seen = {artin.braid_action(w1, N)}
    frontier = [w1]
    spent = 0
    while frontier and spent < budget:
        nxt = []
        for w in frontier:
            for g in gens:
                cw = artin.concat(g, w, artin.invert(g))
                spent += 1
                key = artin.braid_action(cw, N)
                if key in seen:
                    continue
                seen.add(key)
                if key == ref:
                    return True
                if len(cw) <= len(w1) + 6:
                    nxt.append(cw)
                if spent >= budget:
                    break
            if spent >= budget:
                break
        frontier = nxt
    if not frontier and spent < budget:
        # search space exhausted below the length cap without a match;
        # the cap makes this inconclusive as well
        return INDETERMINATE
    return INDETERMINATE


# ---------------------------------------------------------------------------
# Extraction from strands


def _word_from_strands(strands, tol=1e-9):
    """Read the annular word off sampled strands (common t grid)."""
    n = len(strands)
    times = strands[0].times
    if n == 0:
        raise ValueError("no strands")
    ys = np.stack([s.ys for s in strands])   # lifts, shape (n, T)
    xs = np.stack([s.xs for s in strands])
    y0 = ys[:, 0] % 1.0
    if n > 1:
        gaps = np.diff(np.sort(y0))
        wrap = 1.0 - (np.max(y0) - np.min(y0))
        if min(np.min(gaps) if len(gaps) else 1.0, wrap) < 1e-7:
            raise ResolutionError("strand collision at t=0; increase samples")
    order = list(np.argsort(y0))
    word = []
    for j in range(len(times) - 1):
        t0, t1 = times[j], times[j + 1]
        events = []
        for s in range(n):
            a0, a1 = ys[s, j], ys[s, j + 1]
            lo, hi = min(a0, a1), max(a0, a1)
            for c in range(math.floor(lo) + 1, math.floor(hi) + 1):
                if abs(a1 - a0) < tol:
                    continue
                f = (c - a0) / (a1 - a0)
                events.append((f, "cut", s, 1 if a1 > a0 else -1))
        for s in range(n):
            for u in range(s + 1, n):
                d0 = ys[s, j] - ys[u, j]
                d1 = ys[s, j + 1] - ys[u, j + 1]
                lo, hi = min(d0, d1), max(d0, d1)
                for c in range(math.floor(lo) + 1, math.floor(hi) + 1):
                    if abs(d1 - d0) < tol:
                        continue
                    f = (c - d0) / (d1 - d0)
                    events.append((f, "sig", (s, u), 1 if d1 > d0 else -1))
        events.sort(key=lambda e: e[0])
        for f, kind, who, direction in events:
            if kind == "cut":
                s = who
                if direction > 0:
                    if order[-1] != s:
                        raise ResolutionError(
                            "cut event for non-top strand near t=%.4f; "
                            "increase samples" % (t0 + f * (t1 - t0)))
                    order.pop()
                    order.insert(0, s)
                    word.append(n)     # tau
                else:
                    if order[0] != s:
                        raise ResolutionError(
                            "cut event for non-bottom strand near t=%.4f; "
                            "increase samples" % (t0 + f * (t1 - t0)))
                    order.pop(0)
                    order.append(s)
                    word.append(-n)    # tau^-1
            else:
                s, u = who
                ps, pu = order.index(s), order.index(u)
                if abs(ps - pu) != 1:
                    raise ResolutionError(
                        "non-adjacent crossing near t=%.4f; increase samples"
                        % (t0 + f * (t1 - t0)))
                i = min(ps, pu) + 1
                # ascending strand (relative y increasing): s if direction>0
                asc, desc = (s, u) if direction > 0 else (u, s)
                xa = xs[asc, j] * (1 - f) + xs[asc, j + 1] * f
                xd = xs[desc, j] * (1 - f) + xs[desc, j + 1] * f
                sign = 1 if xa < xd else -1
                order[ps], order[pu] = order[pu], order[ps]
                word.append(sign * i)
    return tuple(word), order


def extract_braid(alpha, m, samples=512):
    """Braid of a simple orbit set in the mapping torus of the map."""
    if not alpha.is_simple():
        raise ValueError("orbit set must be simple (all multiplicities 1)")
    strands = []
    for ci, (orb, _) in enumerate(alpha.entries):
        for i, (x, y) in enumerate(orb.points):
            path = m.suspension_path(x, y % 1.0, samples)
            times = m.suspension_times(samples)
            strands.append(Strand(cycle=ci, index=i, times=times,
                                  xs=path[:, 0], ys=path[:, 1]))
    word, _ = _word_from_strands(strands)
    n = len(strands)
    b = AnnularBraid(n=n, word=word, strands=strands)
    perm, winding, _, _, _ = _track_word(n, word)
    cw = [sum(winding[s] for s in c) for c in _cycles_of(perm)]
    b.winding_vector = tuple(sorted(cw))
    # consistency: word cycle structure must match orbit periods
    periods = sorted(orb.period for orb, _ in alpha.entries)
    wlens = sorted(len(c) for c in _cycles_of(perm))
    if periods != wlens:
        raise ResolutionError(
            "word permutation cycles %s disagree with orbit periods %s; "
            "increase samples" % (wlens, periods))
    return b


# ---------------------------------------------------------------------------
# Transport under a Hamiltonian isotopy


def transport_braid(b, H, settings=None, reverse=False):
    """Push the braid through (t, p) -> (t, phi_t^{-1}(p)) and re-extract.

    reverse=True applies phi_t instead (the inverse isotopy), so transport
    followed by reverse transport is an approximate identity."""
    if not b.strands:
        raise ValueError("braid carries no strand samples to transport")
    settings = settings or FlowSettings()
    new_strands = []
    for s in b.strands:
        xs = np.empty_like(s.xs)
        ys = np.empty_like(s.ys)
        prev = None
        for j, t in enumerate(s.times):
            if t < 1e-12:
                xs[j], ys[j] = s.xs[j], s.ys[j]
                prev = ys[j]
                continue
            steps = max(16, int(math.ceil(settings.steps * t)))
            st = HamiltonianStage(
                H, FlowSettings(steps=steps, fd_step=settings.fd_step,
                                tol=settings.tol),
                t0=0.0 if reverse else t, t1=t if reverse else 0.0)
            x2, y2 = st.apply(s.xs[j], s.ys[j])
            # keep the lift continuous along the strand
            if prev is not None:
                y2 -= round(y2 - prev - (s.ys[j] - s.ys[j - 1]))
            xs[j], ys[j] = x2, y2
            prev = y2
        new_strands.append(Strand(cycle=s.cycle, index=s.index,
                                  times=s.times, xs=xs, ys=ys))
    word, _ = _word_from_strands(new_strands)
    n = len(new_strands)
    nb = AnnularBraid(n=n, word=word, strands=new_strands)
    perm, winding, _, _, _ = _track_word(n, word)
    cw = [sum(winding[s] for s in c) for c in _cycles_of(perm)]
    nb.winding_vector = tuple(sorted(cw))
    return nb
