"""Independent brute-force reference implementations (pure Python, no numpy)."""

import math


def d2(p, q):
    return (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1])


def effective(u, v, pts):
    best = d2(pts[u], pts[v])
    for w in pts:
        if w in (u, v):
            continue
        best = min(best, d2(pts[u], pts[w]) + d2(pts[w], pts[v]))
    return best


def knn(pts, k):
    """pts: {id: (x, y)} -> {id: [neighbour ids, nearest first]} by full sort."""
    out = {}
    for u in pts:
        scored = sorted((effective(u, v, pts), v) for v in pts if v != u)
        out[u] = [v for _, v in scored[:k]]
    return out


def frequencies(lists):
    freq = {}
    for u in lists:
        count = 0
        for other, nbrs in lists.items():
            if other != u and u in nbrs:
                count += 1
        freq[u] = count + 1
    return freq


def threshold(freq):
    return math.floor(sum(freq.values()) / len(freq) + 0.5) + 1


def candidates(freq, k):
    t = threshold(freq)
    picked = {v for v in freq if freq[v] >= t}
    if not picked:
        picked = set(sorted(freq, key=lambda v: (-freq[v], v))[:k])
    return picked


def elect(cands, ratings, terms):
    best = None
    for v in sorted(cands):
        if terms.get(v, 0) >= 2:
            continue
        if best is None or ratings[v] > ratings[best]:
            best = v
    if best is None:
        for v in sorted(ratings):
            if v in cands or terms.get(v, 0) >= 2:
                continue
            if best is None or ratings[v] > ratings[best]:
                best = v
    return best
