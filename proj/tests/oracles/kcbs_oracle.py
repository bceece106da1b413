#!/usr/bin/env python3
"""Independent numeric oracle for frozen test values (numpy, no shared code)."""
import itertools
import numpy as np

c = np.cos
s = np.sin
pi = np.pi
r = np.sqrt(c(pi / 5))
raw = [
    (1, 0, r),
    (c(4 * pi / 5), -s(4 * pi / 5), r),
    (c(2 * pi / 5), s(2 * pi / 5), r),
    (c(2 * pi / 5), -s(2 * pi / 5), r),
    (c(4 * pi / 5), s(4 * pi / 5), r),
]
V = [np.array(v, dtype=complex) / np.linalg.norm(v) for v in raw]
P = [np.outer(v, v.conj()) for v in V]
I3 = np.eye(3)


def ip(a, b):
    return np.vdot(a, b)


print("<v0|v1>", ip(V[0], V[1]))
print("<v1|v3>", ip(V[1], V[3]))
print("dist2 overlaps", [abs(ip(V[i], V[(i + 2) % 5])) for i in range(5)])
print("Tr(P0 P2)", np.trace(P[0] @ P[2]).real)
z = np.array([0, 0, 1], dtype=complex)
print("born((0,0,1),Pi)", [np.vdot(z, P[i] @ z).real for i in range(5)])
kt = lambda st: sum(np.vdot(st, P[i] @ st).real for i in range(5)) / 5
print("ktilde z", kt(z), "ktilde v0", kt(V[0]))


def attack(k_list, rate=1.0):
    """Enumerate Alice i, Eve k, Eve branch, Bob j.  Returns kab, pe, tables."""
    anti = np.zeros((5, 5))
    succ = np.zeros((5, 5))
    for i in range(5):
        for j in range(5):
            d = (j - i) % 5
            if d not in (0, 1, 4):
                continue
            a = 0 if d == 0 else 1
            pa = 0.0
            ps = 0.0
            for k in k_list:
                w = 1.0 / len(k_list)
                branches = []
                p1 = np.vdot(V[i], P[k] @ V[i]).real
                if p1 > 1e-15:
                    branches.append((p1, V[k], 1))
                if 1 - p1 > 1e-15:
                    st = (I3 - P[k]) @ V[i]
                    branches.append((1 - p1, st / np.linalg.norm(st), 0))
                for pb, st, e in branches:
                    pj1 = np.vdot(st, P[j] @ st).real
                    p_anti = pj1 if a == 0 else 1 - pj1
                    pa += w * pb * p_anti
                    guess = 1 - e
                    ps += w * pb * (1.0 if guess == a else 0.0)
            anti[i, j] = pa
            succ[i, j] = ps
    mask = np.array([[((j - i) % 5) in (0, 1, 4) for j in range(5)] for i in range(5)])
    return anti[mask].mean(), succ[mask].mean(), anti, succ


kab, pe, anti, succ = attack([1])
print("Fixed(1): kab %.12f pe %.12f" % (kab, pe))
print("per-i anticorr", [anti[i][[i, (i + 1) % 5, (i - 1) % 5]].mean() for i in range(5)])
print("per-i eve success", [succ[i][[i, (i + 1) % 5, (i - 1) % 5]].mean() for i in range(5)])
kabr, per, _, _ = attack(list(range(5)))
print("Random: kab %.12f pe %.12f" % (kabr, per))

# entangled: Alice measures P_i x I on (1/sqrt3) sum |kk>
psi = np.zeros(9, dtype=complex)
for k in range(3):
    psi[4 * k] = 1 / np.sqrt(3)
for i in range(5):
    M = np.kron(P[i], I3)
    p = np.vdot(psi, M @ psi).real
    post = (M @ psi) / np.sqrt(p)
    bob = post.reshape(3, 3)  # [a][b]
    # rank-1: post = v_i (x) w ; w = v_i^* ... extract
    w = V[i].conj() @ bob
    print("entangled i", i, "p", p, "bob overlap with v_i", abs(np.vdot(V[i], w)) / np.linalg.norm(w))


# graphs
def joint(mode):
    E = {}
    for i in range(5):
        for a, b in [(i, (i + 1) % 5), (5 + i, 5 + (i + 1) % 5), (i, 5 + (i + 1) % 5), (i, 5 + (i - 1) % 5)]:
            E[frozenset((a, b))] = "X"
        E[frozenset((i, 5 + i))] = "X" if mode == "abstract" else "C"
    return E


def alpha(n, edges, verts=None):
    verts = list(range(n)) if verts is None else verts
    best = 0
    for m in range(1 << len(verts)):
        S = [verts[t] for t in range(len(verts)) if m >> t & 1]
        if all(frozenset((a, b)) not in edges for a, b in itertools.combinations(S, 2)):
            best = max(best, len(S))
    return best


def cover(n, edges):
    verts = list(range(n))
    cliques = []
    for m in range(1, 1 << n):
        S = [t for t in verts if m >> t & 1]
        if all(frozenset((a, b)) in edges for a, b in itertools.combinations(S, 2)):
            cliques.append(m)
    full = (1 << n) - 1
    best = {0: 0}
    from functools import lru_cache

    @lru_cache(None)
    def f(S):
        if S == 0:
            return 0
        low = S & -S
        return min(1 + f(S & ~c) for c in cliques if c & low and c & S == c)
    return f(full)


for mode in ("abstract", "mimic"):
    E = joint(mode)
    ex = {e for e, k in E.items() if k == "X"}
    print(mode, "alpha excl", alpha(10, ex), "alpha compat", alpha(10, set(E)), "cover(compat)", cover(10, set(E)), "cover(excl)", cover(10, ex))
part1 = [5, 2, 6, 1, 7]
part2 = [0, 3, 8, 4, 9]
E = set(joint("abstract"))
print("part alphas", alpha(10, E, part1), alpha(10, E, part2))
Em = {e for e, k in joint("mimic").items() if k == "X"}
print("mimic part alphas (exclusive)", alpha(10, Em, part1), alpha(10, Em, part2))
c5 = {frozenset((i, (i + 1) % 5)) for i in range(5)}
print("C5 cover", cover(5, c5))
# deterministic anticorr max over pentagon assignments
best = 0
for m in range(32):
    b = [m >> t & 1 for t in range(5)]
    if any(b[t] and b[(t + 1) % 5] for t in range(5)):
        continue
    best = max(best, sum(b[t] != b[(t + 1) % 5] for t in range(5)))
print("noncontextual anticorr max", best / 5)
print("shannon", -(1/3)*np.log2(1/3)-(2/3)*np.log2(2/3), "rate", 0.6*(-(1/3)*np.log2(1/3)-(2/3)*np.log2(2/3)))
print("(4sqrt5-5)/5", (4*np.sqrt(5)-5)/5, "2/sqrt5", 2/np.sqrt(5))
