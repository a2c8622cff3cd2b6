"""Generic algorithms on fully enumerated permutation groups.

A GroupTable stores every element of a finite permutation group as a tuple
of point images, in deterministic BFS order from a fixed generator list.
Subgroups are sorted index lists into their parent table.  All operations
are pure functions over this immutable data; scans over the element range
can be partitioned freely without changing results.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

Perm = tuple[int, ...]

MUL_TABLE_CAP = 8192


class ParentMismatchError(ValueError):
    pass


class NotMaximalError(ValueError):
    pass


class NoSuchSubgroupError(ValueError):
    pass


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def compose(g: Perm, h: Perm) -> Perm:
    """Product g*h acting on the right: x^(g*h) = (x^g)^h."""
    return tuple(h[x] for x in g)


def perm_inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def perm_order(g: Perm) -> int:
    n = len(g)
    seen = [False] * n
    o = 1
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = g[j]
                length += 1
            o = lcm(o, length)
    return o


class GroupTable:
    """A fully enumerated permutation group with index-based arithmetic."""

    def __init__(self, degree: int, elements: list[Perm], generators: list[int]):
        self.degree = degree
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        self.generators = generators
        self.order = len(elements)
        self._bfs_parent: list[tuple[int, int]] | None = None
        self._inv: np.ndarray | None = None
        self._orders: np.ndarray | None = None
        self._mul: np.ndarray | None = None

    @classmethod
    def from_generators(cls, degree: int, gens: tuple[Perm, ...]) -> "GroupTable":
        """BFS closure from the identity; FIFO queue, generators in order."""
        ident = identity_perm(degree)
        elements = [ident]
        index = {ident: 0}
        parent = [(-1, -1)]
        queue = deque([0])
        gens = list(gens)
        while queue:
            i = queue.popleft()
            e = elements[i]
            for gi, g in enumerate(gens):
                y = compose(e, g)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    parent.append((i, gi))
                    queue.append(index[y])
        table = cls(degree, elements, [index[g] for g in gens])
        table._bfs_parent = parent
        return table

    # -- element arithmetic

    @property
    def identity(self) -> int:
        return 0

    def mul(self, i: int, j: int) -> int:
        if self._mul is not None:
            return int(self._mul[i, j])
        return self.index[compose(self.elements[i], self.elements[j])]

    @property
    def inv(self) -> np.ndarray:
        if self._inv is None:
            self._inv = np.array(
                [self.index[perm_inverse(e)] for e in self.elements], dtype=np.int64
            )
        return self._inv

    def inverse(self, i: int) -> int:
        return int(self.inv[i])

    def conj(self, x: int, g: int) -> int:
        """x^g = g^-1 x g."""
        gi = self.inverse(g)
        return self.mul(self.mul(gi, x), g)

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = np.array([perm_order(e) for e in self.elements], dtype=np.int64)
        return self._orders

    def order_of(self, i: int) -> int:
        return int(self.orders[i])

    def elements_of_order(self, k: int) -> np.ndarray:
        return np.nonzero(self.orders == k)[0]

    # -- multiplication table (opt-in; hot paths only)

    def ensure_mul_table(self) -> np.ndarray:
        if self._mul is not None:
            return self._mul
        n = self.order
        if n > MUL_TABLE_CAP:
            raise MemoryError(f"mul table for order {n} exceeds cap {MUL_TABLE_CAP}")
        if self._bfs_parent is None:
            raise ValueError("mul table requires BFS construction metadata")
        mul = np.zeros((n, n), dtype=np.int32)
        mul[0] = np.arange(n, dtype=np.int32)
        done = np.zeros(n, dtype=bool)
        done[0] = True
        for g in set(self.generators):
            mul[g] = np.fromiter(
                (self.index[compose(self.elements[g], e)] for e in self.elements),
                dtype=np.int32,
                count=n,
            )
            done[g] = True
        # BFS order puts parents before children; row(y*g)[j] = row(y)[row(g)[j]]
        for x in range(1, n):
            if done[x]:
                continue
            p, gi = self._bfs_parent[x]
            g = self.generators[gi]
            mul[x] = mul[p][mul[g]]
        self._mul = mul
        return mul

    def __repr__(self):
        return f"GroupTable(order={self.order}, degree={self.degree})"


class Subgroup:
    """A subgroup as a sorted member-index list into a parent GroupTable."""

    def __init__(self, parent: GroupTable, members):
        self.parent = parent
        arr = np.array(sorted(set(int(m) for m in members)), dtype=np.int64)
        self.members = arr
        self.member_set = frozenset(int(m) for m in arr)
        self.order = len(arr)
        self._gens: list[int] | None = None

    def __contains__(self, i: int) -> bool:
        return int(i) in self.member_set

    def __iter__(self):
        return iter(int(m) for m in self.members)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.member_set == other.member_set
        )

    def __hash__(self):
        return hash((id(self.parent), self.member_set))

    def generating_set(self) -> list[int]:
        """A small generating set, grown greedily in member-index order."""
        if self._gens is None:
            gens: list[int] = []
            closed = {self.parent.identity}
            for m in self.members:
                m = int(m)
                if m not in closed:
                    gens.append(m)
                    closed = _closure_indices(self.parent, gens)
                    if len(closed) == self.order:
                        break
            self._gens = gens
        return self._gens

    def conjugate(self, g: int) -> "Subgroup":
        G = self.parent
        gi = G.inverse(g)
        if G._mul is not None:
            mem = G._mul[G._mul[gi, self.members], g]
        else:
            mem = [G.conj(int(m), g) for m in self.members]
        return Subgroup(G, mem)

    def conjugate_set(self, g: int) -> frozenset:
        G = self.parent
        gi = G.inverse(g)
        if G._mul is not None:
            return frozenset(int(v) for v in G._mul[G._mul[gi, self.members], g])
        return frozenset(G.conj(int(m), g) for m in self.members)

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent!r})"


@dataclass(frozen=True)
class IsoFingerprint:
    """(order, element-order multiset, abelian flag) isomorphism surrogate."""

    order: int
    element_orders: tuple[tuple[int, int], ...]  # sorted (order, count)
    abelian: bool

    def __str__(self):
        body = ",".join(f"{o}^{c}" for o, c in self.element_orders)
        tag = "abelian" if self.abelian else "nonabelian"
        return f"({self.order};{body};{tag})"

    @staticmethod
    def cyclic(n: int) -> "IsoFingerprint":
        cnt = Counter()
        for d in range(1, n + 1):
            if n % d == 0:
                cnt[d] = sum(1 for k in range(1, d + 1) if gcd(k, d) == 1) if d > 1 else 1
        return IsoFingerprint(n, tuple(sorted(cnt.items())), True)

    @staticmethod
    def dihedral(n: int) -> "IsoFingerprint":
        """Dihedral group of order n (n even, n >= 4); D4 is the Klein four."""
        assert n % 2 == 0 and n >= 4
        m = n // 2
        cnt = Counter()
        for d in range(1, m + 1):
            if m % d == 0:
                cnt[d] += sum(1 for k in range(1, d + 1) if gcd(k, d) == 1) if d > 1 else 1
        cnt[2] += m  # reflections
        return IsoFingerprint(n, tuple(sorted(cnt.items())), m <= 2)

    @staticmethod
    def klein4() -> "IsoFingerprint":
        return IsoFingerprint.dihedral(4)

    @staticmethod
    def alt4() -> "IsoFingerprint":
        return IsoFingerprint(12, ((1, 1), (2, 3), (3, 8)), False)

    @staticmethod
    def sym4() -> "IsoFingerprint":
        return IsoFingerprint(24, ((1, 1), (2, 9), (3, 8), (4, 6)), False)

    @staticmethod
    def alt5() -> "IsoFingerprint":
        return IsoFingerprint(60, ((1, 1), (2, 15), (3, 20), (5, 24)), False)

    @staticmethod
    def sym3() -> "IsoFingerprint":
        return IsoFingerprint.dihedral(6)


def _closure_indices(G: GroupTable, gens: list[int]) -> set[int]:
    closed = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mul(x, g)
            if y not in closed:
                closed.add(y)
                queue.append(y)
    return closed


def generate(parent: GroupTable, gens) -> Subgroup:
    """Closure of a set of element indices under multiplication/inverse."""
    gens = [int(g) for g in gens]
    return Subgroup(parent, _closure_indices(parent, gens))


def centralizer(G: GroupTable, g: int) -> Subgroup:
    if G._mul is not None:
        mask = G._mul[:, g] == G._mul[g, :]
        return Subgroup(G, np.nonzero(mask)[0])
    ge = G.elements[g]
    members = [i for i, e in enumerate(G.elements) if compose(e, ge) == compose(ge, e)]
    return Subgroup(G, members)


def normalizer(G: GroupTable, S: Subgroup) -> Subgroup:
    """All x with S^x = S, by full scan (generator conjugation suffices)."""
    if S.parent is not G:
        raise ParentMismatchError("subgroup not over this table")
    gens = S.generating_set()
    if not gens:
        return Subgroup(G, range(G.order))
    if G._mul is not None:
        M = G._mul
        inS = np.zeros(G.order, dtype=bool)
        inS[S.members] = True
        ok = np.ones(G.order, dtype=bool)
        allx = np.arange(G.order)
        for s in gens:
            conj = M[M[G.inv, s], allx]  # x^-1 s x for every x
            ok &= inS[conj]
        return Subgroup(G, np.nonzero(ok)[0])
    members = []
    for x in range(G.order):
        if all(G.conj(s, x) in S.member_set for s in gens):
            members.append(x)
    return Subgroup(G, members)


def conjugacy_class(G: GroupTable, g: int) -> np.ndarray:
    """Orbit of g under conjugation by G (closure over generators)."""
    seen = {int(g)}
    queue = deque([int(g)])
    while queue:
        x = queue.popleft()
        for h in G.generators:
            y = G.conj(x, h)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return np.array(sorted(seen), dtype=np.int64)


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.parent is not B.parent:
        raise ParentMismatchError("subgroups live in different parents")
    return Subgroup(A.parent, np.intersect1d(A.members, B.members))


def center(S: Subgroup) -> Subgroup:
    G = S.parent
    gens = S.generating_set()
    members = [m for m in S if all(G.mul(m, s) == G.mul(s, m) for s in gens)]
    return Subgroup(G, members)


def fingerprint(S: Subgroup) -> IsoFingerprint:
    G = S.parent
    cnt = Counter(int(G.orders[m]) for m in S.members)
    gens = S.generating_set()
    abelian = all(
        G.mul(a, b) == G.mul(b, a) for i, a in enumerate(gens) for b in gens[i + 1 :]
    )
    return IsoFingerprint(S.order, tuple(sorted(cnt.items())), abelian)


def is_maximal(G: GroupTable, M: Subgroup) -> bool:
    """True iff <M, g> = G for every g outside M.

    Only one representative per coset Mg is tested: <M, g> depends on g only
    through the double coset MgM, and every double coset meets every right
    coset it covers, so coset reps suffice.
    """
    if M.parent is not G:
        raise ParentMismatchError("subgroup not over this table")
    if M.order == G.order:
        return False
    cached = getattr(M, "_maximal_cache", None)
    if cached is not None:
        return cached
    gens = M.generating_set()
    visited = np.zeros(G.order, dtype=bool)
    visited[M.members] = True
    half = G.order // 2
    mark_double = M.order * M.order <= 500_000
    for s in range(G.order):
        if visited[s]:
            continue
        ms = [G.mul(int(m), s) for m in M.members]
        visited[ms] = True
        if mark_double:
            for x in ms:
                for m in M.members:
                    visited[G.mul(x, int(m))] = True
        size = _closure_size_capped(G, gens + [s], half)
        if size <= half:
            M._maximal_cache = False
            return False
    M._maximal_cache = True
    return True


def _closure_size_capped(G: GroupTable, gens: list[int], half: int) -> int:
    """Size of <gens>, stopping early once it exceeds half of |G|.

    A subgroup of size > |G|/2 has index < 2, hence equals G.
    """
    closed = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mul(x, g)
            if y not in closed:
                closed.add(y)
                if len(closed) > half:
                    return len(closed)
                queue.append(y)
    return len(closed)


def subgroup_conjugates(T: GroupTable, S: Subgroup) -> list[Subgroup]:
    """Distinct T-conjugates of S, one per coset of the normalizer."""
    N = normalizer(T, S)
    reps = coset_representatives(T, N)
    return [S.conjugate(g) for g in reps]


def coset_representatives(T: GroupTable, S: Subgroup) -> list[int]:
    """Right-coset reps of S in T: the smallest element index per coset Sg."""
    covered = np.zeros(T.order, dtype=bool)
    reps = []
    for g in range(T.order):
        if not covered[g]:
            reps.append(g)
            if T._mul is not None:
                covered[T._mul[S.members, g]] = True
            else:
                for m in S.members:
                    covered[T.mul(int(m), g)] = True
    return reps


def count_conjugate_overgroups(T: GroupTable, K: Subgroup, R: Subgroup) -> int:
    """Number y of T-conjugates of K whose intersection with K contains R.

    Requires K maximal (so its normalizer is K itself in a simple parent);
    cross-checks the double-counting identity y = x * |N_T(R)| / |K| where
    x counts conjugates of R lying inside K, both sides computed directly.
    """
    if not is_maximal(T, K):
        raise NotMaximalError("K must be maximal in T")
    if not set(int(m) for m in R.members) <= K.member_set:
        raise ValueError("R must be a subgroup of K")
    NK = normalizer(T, K)
    if NK.member_set != K.member_set:
        raise AssertionError("normalizer of a maximal subgroup of a simple group is itself")
    rgens = R.generating_set()
    y = 0
    # conjugates K^g are in bijection with right cosets Kg; R <= K^g is
    # g r g^-1 in K for the generators r of R
    for g in coset_representatives(T, K):
        gi = T.inverse(g)
        conj_in = all(T.conj(r, gi) in K.member_set for r in rgens) if rgens else True
        if conj_in:
            y += 1
    NR = normalizer(T, R)
    x = 0
    for g in coset_representatives(T, NR):
        if all(T.conj(r, g) in K.member_set for r in rgens) if rgens else True:
            x += 1
    lhs = y * K.order
    rhs = x * NR.order
    if lhs != rhs:
        raise AssertionError(f"double counting identity failed: y|K|={lhs} != x|N(R)|={rhs}")
    return y


def dihedral_class_census(T: GroupTable, d: int) -> int:
    """Number of T-conjugacy classes of dihedral subgroups of order 2d.

    Candidates are built as <c, j> from a cyclic group of order d and an
    involution j inverting it, deduplicated by member set, then partitioned
    into conjugacy orbits.
    """
    q = T.degree - 1
    tori = [(q - 1) // gcd(2, q - 1), (q + 1) // gcd(2, q - 1)]
    if d <= 2 or not any(t % d == 0 for t in tori):
        raise NoSuchSubgroupError(f"no dihedral subgroup of order {2*d} for q={q}")
    cyclics = {}
    for c in T.elements_of_order(d):
        c = int(c)
        mem = []
        x = T.identity
        while True:
            mem.append(x)
            x = T.mul(x, c)
            if x == T.identity:
                break
        cyclics.setdefault(frozenset(mem), c)
    invs = [int(i) for i in T.elements_of_order(2)]
    dihedrals = set()
    for mem, c in cyclics.items():
        cinv = T.inverse(c)
        for j in invs:
            if T.conj(c, j) == cinv:
                full = set(mem) | {T.mul(m, j) for m in mem}
                dihedrals.add(frozenset(full))
    classes = 0
    remaining = set(dihedrals)
    while remaining:
        rep = next(iter(remaining))
        orbit = {C.member_set for C in subgroup_conjugates(T, Subgroup(T, rep))}
        if not orbit <= remaining:
            raise AssertionError("census candidates are not closed under conjugation")
        remaining -= orbit
        classes += 1
    return classes


def first_subgroup_with_fingerprint(
    K: Subgroup, target: IsoFingerprint, max_gens: int = 2
) -> Subgroup | None:
    """First subgroup of K (by generator index order) matching a fingerprint."""
    T = K.parent
    mem = [int(m) for m in K.members]
    if target.order == 1:
        return Subgroup(T, [T.identity])
    singles = [m for m in mem if m != T.identity]
    for a in singles:
        if target.order % T.order_of(a) != 0:
            continue
        S = generate(T, [a])
        if S.order == target.order and fingerprint(S) == target:
            return S
    if max_gens >= 2:
        for i, a in enumerate(singles):
            if target.order % T.order_of(a) != 0:
                continue
            for b in singles[i + 1 :]:
                if target.order % T.order_of(b) != 0:
                    continue
                S = generate(T, [a, b])
                if S.order == target.order and fingerprint(S) == target:
                    return S
    return None
