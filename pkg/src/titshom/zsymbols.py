"""Modular symbols over Z^n.

Lines are primitive integer vectors up to sign; apartment symbols evaluate
to chains on flags of saturated sublattices; Ash-Rudolph style determinant
descent rewrites any symbol as a sum of unimodular ones. The X-degree
machinery (augmented partial frames, deletion differential, the map to
Steinberg chains) lives here too, as does the adapted-basis search for a
pair of flags.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from math import gcd

from .building import perm_sign
from .complexes import SignedCanonical, ZERO_GENERATOR, canonical_generator
from .errors import (
    BadCertificate,
    BudgetExceeded,
    DegreeZero,
    NotFoundWithinBudget,
    NotSaturated,
    ZeroVector,
)
from .intmat import SparseIntMatrix
from .snf import LatticeSolver, rank, smith_normal_form
from .snf import saturation as column_saturation

Vector = tuple[int, ...]
Lattice = tuple[Vector, ...]  # rows in Hermite normal form
Flag = tuple[Lattice, ...]


def normalize_line(v) -> tuple[Vector, int]:
    """Primitive, leading-positive representative of the line through v.

    Returns the representative together with the sign relating v's primitive
    part to it.
    """
    vec = tuple(int(x) for x in v)
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVector("cannot normalize the zero vector")
    vec = tuple(x // g for x in vec)
    lead = next(x for x in vec if x)
    if lead < 0:
        return tuple(-x for x in vec), -1
    return vec, 1


def det_int(rows) -> int:
    """Determinant of a square integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def row_hnf(rows) -> Lattice:
    """Canonical Hermite form of the row lattice: positive pivots, entries
    above each pivot reduced into [0, pivot)."""
    work = [list(r) for r in rows]
    if not work:
        return ()
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(work)) if work[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(work[i][c]))
            work[r], work[i0] = work[i0], work[r]
            done = True
            for i in range(r + 1, len(work)):
                if work[i][c]:
                    q = work[i][c] // work[r][c]
                    work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                    if work[i][c]:
                        done = False
            if done:
                break
        if r < len(work) and work[r][c]:
            if work[r][c] < 0:
                work[r] = [-x for x in work[r]]
            p = work[r][c]
            for j in range(r):
                q = work[j][c] // p
                if q:
                    work[j] = [x - q * y for x, y in zip(work[j], work[r])]
            r += 1
            if r == len(work):
                break
    return tuple(tuple(row) for row in work[:r])


def saturate_rows(rows) -> Lattice:
    """Hermite basis of the saturation of the row span inside Z^n."""
    cols = SparseIntMatrix.from_dense([list(v) for v in rows]).transpose()
    sat = column_saturation(cols)
    vecs = [
        tuple(sat.entry(i, j) for i in range(sat.n_rows)) for j in range(sat.n_cols)
    ]
    return row_hnf(vecs)


def is_saturated_rows(rows) -> bool:
    mat = SparseIntMatrix.from_dense([list(v) for v in rows])
    res = smith_normal_form(mat)
    return len(res.divisors) == mat.n_rows and all(d == 1 for d in res.divisors)


@dataclass(frozen=True)
class ApartmentSymbol:
    """Ordered tuple of lines with the signs picked up by normalization."""

    lines: tuple[Vector, ...]
    signs: tuple[int, ...]

    @classmethod
    def from_vectors(cls, vectors) -> "ApartmentSymbol":
        pairs = [normalize_line(v) for v in vectors]
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def ambient(self) -> int:
        return len(self.lines[0])

    def det(self) -> int:
        return det_int(self.lines)


def apartment_eval(symbol) -> dict[Flag, int]:
    """Signed sum over all orderings of the flags of saturated prefix spans.

    Dependent lines give the zero chain. The value depends only on the lines,
    not on the choice of primitive representatives.
    """
    if not isinstance(symbol, ApartmentSymbol):
        symbol = ApartmentSymbol.from_vectors(symbol)
    vectors = symbol.lines
    n = symbol.ambient
    if len(vectors) != n:
        raise ValueError("symbol length must match the ambient rank")
    if det_int(vectors) == 0:
        return {}
    memo: dict[frozenset, Lattice] = {}

    def span_of(idx: frozenset) -> Lattice:
        got = memo.get(idx)
        if got is None:
            got = saturate_rows([vectors[i] for i in sorted(idx)])
            memo[idx] = got
        return got

    chain: dict[Flag, int] = {}
    for perm in permutations(range(n)):
        sign = perm_sign(perm)
        flag = tuple(span_of(frozenset(perm[: k + 1])) for k in range(n - 1))
        new = chain.get(flag, 0) + sign
        if new:
            chain[flag] = new
        else:
            del chain[flag]
    return chain


def flag_chain_boundary(chain: dict[Flag, int]) -> dict[Flag, int]:
    """Simplicial boundary of a flag chain (down to the empty flag)."""
    out: dict[Flag, int] = {}
    for flag, coeff in chain.items():
        for j in range(len(flag)):
            sub = flag[:j] + flag[j + 1 :]
            new = out.get(sub, 0) + coeff * (-1) ** j
            if new:
                out[sub] = new
            else:
                del out[sub]
    return out


def _round_half_toward_zero(p: int, q: int) -> int:
    """Nearest integer to p/q (q > 0), ties toward zero."""
    if p < 0:
        return -((2 * -p + q - 1) // (2 * q))
    return (2 * p + q - 1) // (2 * q)


def _column_solver(vectors) -> LatticeSolver:
    cols = SparseIntMatrix.from_dense([list(v) for v in vectors]).transpose()
    return LatticeSolver(cols)


def _descent_vector(vectors, d: int) -> Vector:
    """Primitive w outside no proper face: the rounded defect of the first
    standard basis vector missing from the symbol's lattice."""
    n = len(vectors)
    solver = _column_solver(vectors)
    k = next(
        i for i in range(n) if solver.solve({i: 1}) is None
    )  # exists whenever |d| > 1
    target = tuple(1 if i == k else 0 for i in range(n))
    absd = abs(d)
    w0 = list(target)
    for i in range(n):
        replaced = list(vectors)
        replaced[i] = target
        num = det_int(replaced)
        if d < 0:
            num = -num
        m = _round_half_toward_zero(num, absd)
        if m:
            for t in range(n):
                w0[t] -= m * vectors[i][t]
    g = 0
    for x in w0:
        g = gcd(g, x)
    return tuple(x // g for x in w0)


def _fallback_vector(vectors, absd: int) -> Vector:
    """Bounded exhaustive search for a strictly-decreasing pivot vector."""
    bound = max(1, max(abs(x) for v in vectors for x in v))
    n = len(vectors)
    for w in product(range(-bound, bound + 1), repeat=n):
        if not any(w):
            continue
        g = 0
        for x in w:
            g = gcd(g, x)
        if g != 1:
            continue
        nonzero = 0
        ok = True
        for i in range(n):
            replaced = list(vectors)
            replaced[i] = w
            nd = abs(det_int(replaced))
            if nd >= absd:
                ok = False
                break
            if nd:
                nonzero += 1
        if ok and nonzero:
            return tuple(w)
    raise NotFoundWithinBudget("no descent vector within the entry bound")


def ash_rudolph(symbol, trace: list | None = None) -> list[tuple[int, ApartmentSymbol]]:
    """Rewrite an apartment symbol as a nonnegative sum of unimodular ones.

    Each descent level replaces one slot by a primitive vector whose
    coordinates in the current basis all have absolute value <= 1/2, which
    makes every child determinant strictly smaller. The terms satisfy
    sum(coeff * apartment_eval(term)) == apartment_eval(symbol) exactly.
    """
    if not isinstance(symbol, ApartmentSymbol):
        symbol = ApartmentSymbol.from_vectors(symbol)
    d = symbol.det()
    if d == 0:
        return []
    leaves: dict[tuple[Vector, ...], int] = {}

    def descend(vectors: tuple[Vector, ...], d: int) -> None:
        absd = abs(d)
        if absd == 1:
            key = tuple(normalize_line(v)[0] for v in vectors)
            leaves[key] = leaves.get(key, 0) + 1
            return
        w = _descent_vector(vectors, d)
        children = []
        for i in range(len(vectors)):
            replaced = vectors[:i] + (w,) + vectors[i + 1 :]
            nd = det_int(replaced)
            if nd:
                children.append((replaced, nd))
        if not children or any(abs(nd) >= absd for _, nd in children):
            w = _fallback_vector(vectors, absd)
            children = []
            for i in range(len(vectors)):
                replaced = vectors[:i] + (w,) + vectors[i + 1 :]
                nd = det_int(replaced)
                if nd:
                    children.append((replaced, nd))
        for replaced, nd in children:
            if trace is not None:
                trace.append((absd, abs(nd)))
            descend(replaced, nd)

    descend(symbol.lines, d)
    n = symbol.ambient
    return [
        (coeff, ApartmentSymbol(key, (1,) * n))
        for key, coeff in sorted(leaves.items())
    ]


# -- augmented partial frames and the X-degree complex -------------------------


@dataclass(frozen=True)
class AugItem:
    """One augmentation item over frame positions.

    kind "pair" adds span(s1 f_p + s2 f_q); "triple" adds the three-term
    span; "triple_pair" adds both the two-term and three-term spans with the
    shared leading signs.
    """

    kind: str
    members: tuple[int, ...]
    signs: tuple[int, ...]


@dataclass(frozen=True)
class ApfCertificate:
    frame: tuple[Vector, ...]
    items: tuple[AugItem, ...]


def _combo(frame, members, signs) -> Vector:
    n = len(frame[0])
    out = [0] * n
    for pos, s in zip(members, signs):
        for t in range(n):
            out[t] += s * frame[pos][t]
    return tuple(out)


def certificate_lines(cert: ApfCertificate) -> list[Vector]:
    """Normalized lines the certificate generates, frame first."""
    seen: set[int] = set()
    for item in cert.items:
        if item.kind not in ("pair", "triple", "triple_pair"):
            raise BadCertificate(f"unknown augmentation kind {item.kind!r}")
        want = 2 if item.kind == "pair" else 3
        if len(item.members) != want or len(item.signs) != want:
            raise BadCertificate("augmentation item has the wrong arity")
        if any(s not in (-1, 1) for s in item.signs):
            raise BadCertificate("augmentation signs must be +-1")
        for pos in item.members:
            if pos < 0 or pos >= len(cert.frame) or pos in seen:
                raise BadCertificate("augmentation index sets must be disjoint")
            seen.add(pos)
    out = [normalize_line(v)[0] for v in cert.frame]
    for item in cert.items:
        f, m, s = cert.frame, item.members, item.signs
        if item.kind == "pair":
            out.append(normalize_line(_combo(f, m, s))[0])
        elif item.kind == "triple":
            out.append(normalize_line(_combo(f, m, s))[0])
        else:
            out.append(normalize_line(_combo(f, m[:2], s[:2]))[0])
            out.append(normalize_line(_combo(f, m, s))[0])
    return out


def is_partial_frame(vectors) -> bool:
    """True when the vectors span a direct summand they freely generate."""
    if not vectors:
        return True
    return is_saturated_rows(vectors)


def byk_generator(lines, cert: ApfCertificate) -> SignedCanonical:
    """Canonical X-degree generator, or zero under the span/repeat relations.

    The certificate must reproduce the given lines as an unordered multiset
    and its frame must extend to a basis.
    """
    normalized = tuple(normalize_line(v)[0] for v in lines)
    if not is_partial_frame(cert.frame):
        raise BadCertificate("certificate frame is not a partial frame")
    produced = certificate_lines(cert)
    if sorted(produced) != sorted(normalized):
        raise BadCertificate("certificate does not reproduce the lines")
    n = len(normalized[0])
    mat = SparseIntMatrix.from_dense([list(v) for v in normalized])
    if rank(mat) < n:
        return ZERO_GENERATOR
    return canonical_generator(normalized)


@lru_cache(maxsize=None)
def recognize_apf(lines: tuple[Vector, ...]) -> ApfCertificate | None:
    """Exhaustive certificate search; None when no certificate exists.

    Restricted to at most n+2 lines in ambient rank n <= 6.
    """
    if not lines:
        return ApfCertificate((), ())
    normalized = tuple(normalize_line(v)[0] for v in lines)
    n = len(normalized[0])
    if n > 6 or len(normalized) > n + 2:
        raise BudgetExceeded("recognition restricted to <= n+2 lines, n <= 6")
    if len(set(normalized)) < len(normalized):
        return None
    positions = range(len(normalized))
    for size in range(len(normalized), -1, -1):
        for frame_pos in combinations(positions, size):
            frame = tuple(normalized[p] for p in frame_pos)
            if not is_partial_frame(frame):
                continue
            rest = sorted(normalized[p] for p in positions if p not in frame_pos)
            items = _cover_rest(tuple(rest), frame, frozenset())
            if items is not None:
                return ApfCertificate(frame, items)
    return None


def _cover_rest(
    rest: tuple[Vector, ...], frame: tuple[Vector, ...], used: frozenset
) -> tuple[AugItem, ...] | None:
    if not rest:
        return ()
    target = rest[0]
    free = [p for p in range(len(frame)) if p not in used]
    for p, q in combinations(free, 2):
        for s2 in (1, -1):
            if normalize_line(_combo(frame, (p, q), (1, s2)))[0] == target:
                sub = _cover_rest(rest[1:], frame, used | {p, q})
                if sub is not None:
                    return (AugItem("pair", (p, q), (1, s2)),) + sub
    for p, q, r in combinations(free, 3):
        for s2, s3 in product((1, -1), repeat=2):
            signs = (1, s2, s3)
            if normalize_line(_combo(frame, (p, q, r), signs))[0] == target:
                sub = _cover_rest(rest[1:], frame, used | {p, q, r})
                if sub is not None:
                    return (AugItem("triple", (p, q, r), signs),) + sub
            pairline = normalize_line(_combo(frame, (p, q), (1, s2)))[0]
            triline = normalize_line(_combo(frame, (p, q, r), signs))[0]
            if pairline == triline:
                continue
            if target in (pairline, triline):
                other = triline if target == pairline else pairline
                rem = list(rest[1:])
                if other in rem:
                    rem.remove(other)
                    sub = _cover_rest(tuple(rem), frame, used | {p, q, r})
                    if sub is not None:
                        return (AugItem("triple_pair", (p, q, r), signs),) + sub
    return None


def byk_delta(lines) -> dict[tuple[Vector, ...], int]:
    """Alternating deletion sum, each term sign-canonicalized.

    Terms whose lines stop spanning are dropped (they are zero generators).
    """
    normalized = tuple(normalize_line(v)[0] for v in lines)
    n = len(normalized[0])
    if len(normalized) <= n:
        raise DegreeZero("deletion differential needs X-degree >= 1")
    out: dict[tuple[Vector, ...], int] = {}
    for j in range(len(normalized)):
        rem = normalized[:j] + normalized[j + 1 :]
        mat = SparseIntMatrix.from_dense([list(v) for v in rem])
        if rank(mat) < n:
            continue
        can = canonical_generator(rem)
        if can.is_zero:
            continue
        coeff = (-1) ** j * can.sign
        new = out.get(can.tokens, 0) + coeff
        if new:
            out[can.tokens] = new
        else:
            del out[can.tokens]
    return out


def byk_delta_combination(comb: dict) -> dict[tuple[Vector, ...], int]:
    out: dict[tuple[Vector, ...], int] = {}
    for key, coeff in comb.items():
        for sub, c in byk_delta(key).items():
            new = out.get(sub, 0) + coeff * c
            if new:
                out[sub] = new
            else:
                del out[sub]
    return out


def byk_psi(comb: dict) -> dict[Flag, int]:
    """Linear extension of apartment evaluation to degree-zero combinations."""
    out: dict[Flag, int] = {}
    for key, coeff in comb.items():
        for flag, c in apartment_eval(key).items():
            new = out.get(flag, 0) + coeff * c
            if new:
                out[flag] = new
            else:
                del out[flag]
    return out


def random_unimodular_basis(n: int, rng: random.Random) -> tuple[Vector, ...]:
    """Product of a few random elementary operations applied to the identity."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        for t in range(n):
            rows[i][t] += c * rows[j][t]
    if rng.random() < 0.5:
        rows[0] = [-x for x in rows[0]]
    return tuple(tuple(r) for r in rows)


# -- adapted bases for a pair of flags -----------------------------------------


def _lattice_solver(member: Lattice) -> LatticeSolver:
    cols = SparseIntMatrix.from_dense([list(v) for v in member]).transpose()
    return LatticeSolver(cols)


def _member_contains(solver: LatticeSolver, v: Vector) -> bool:
    return solver.solve({i: x for i, x in enumerate(v) if x}) is not None


def _validate_flag(flag) -> list[Lattice]:
    members = []
    for raw in flag:
        rows = tuple(tuple(int(x) for x in r) for r in raw)
        if not rows:
            continue
        if not is_saturated_rows(rows):
            raise NotSaturated("flag member is not a saturated summand")
        members.append(row_hnf(rows))
    for small, big in zip(members, members[1:]):
        if len(small) >= len(big):
            raise ValueError("flag members must strictly increase in rank")
        solver = _lattice_solver(big)
        if not all(_member_contains(solver, v) for v in small):
            raise ValueError("flag members must be nested")
    return members


def _member_vectors(member: Lattice, bound: int) -> list[Vector]:
    """Primitive, sign-normalized vectors of the member with bounded
    coordinates in its Hermite basis, in deterministic order."""
    d = len(member)
    n = len(member[0])
    out = []
    for coords in product(range(-bound, bound + 1), repeat=d):
        if not any(coords):
            continue
        vec = [0] * n
        for c, row in zip(coords, member):
            if c:
                for t in range(n):
                    vec[t] += c * row[t]
        g = 0
        for x in vec:
            g = gcd(g, x)
        if g != 1:
            continue
        lead = next(x for x in vec if x)
        if lead < 0:
            continue
        out.append(tuple(vec))
    return sorted(set(out))


def _complete_basis(chosen: list[Vector], n: int) -> list[Vector] | None:
    """Extend a saturated independent set to a basis of Z^n, if possible."""
    if not chosen:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    mat = SparseIntMatrix.from_dense([list(v) for v in chosen])
    res = smith_normal_form(mat, transforms=True)
    if len(res.divisors) < len(chosen) or any(d != 1 for d in res.divisors):
        return None
    vinv_solver = LatticeSolver(res.right)
    tail = []
    for j in range(len(chosen), n):
        col = vinv_solver.solve({j: 1})
        if col is None:
            return None
        tail.append(tuple(col.get(i, 0) for i in range(n)))
    basis = list(chosen) + tail
    if abs(det_int(basis)) != 1:
        return None
    return basis


def common_basis_search(flag_a, flag_b, budget: int = 20_000):
    """Search for a basis of Z^n adapted to every member of both flags.

    Success returns a verified basis; exhaustion of the candidate space or
    of the node budget raises NotFoundWithinBudget, which is not a proof of
    incompatibility.
    """
    members_a = _validate_flag(flag_a)
    members_b = _validate_flag(flag_b)
    members = sorted(set(members_a + members_b), key=lambda m: (len(m), m))
    if not members:
        raise ValueError("both flags are empty")
    n = len(members[0][0])
    bound = max(
        (abs(x) for m in members for row in m for x in row), default=1
    )
    bound = max(bound, 1)
    solvers = {m: _lattice_solver(m) for m in members}
    nodes = 0

    def verify(basis: list[Vector]) -> bool:
        for m in members:
            inside = [v for v in basis if _member_contains(solvers[m], v)]
            if row_hnf(inside) != m:
                return False
        return True

    def place(idx: int, chosen: list[Vector]) -> list[Vector] | None:
        nonlocal nodes
        if idx == len(members):
            basis = _complete_basis(chosen, n)
            if basis is not None and verify(basis):
                return basis
            return None
        m = members[idx]
        inside = [v for v in chosen if _member_contains(solvers[m], v)]
        need = len(m) - len(inside)
        if need < 0:
            return None
        if need == 0:
            if row_hnf(inside) != m:
                return None
            return place(idx + 1, chosen)
        candidates = [
            v
            for v in _member_vectors(m, bound)
            if v not in chosen
        ]

        def pick(take: int, start: int, acc: list[Vector]) -> list[Vector] | None:
            nonlocal nodes
            if take == 0:
                if row_hnf(inside + acc) != m:
                    return None
                return place(idx + 1, chosen + acc)
            for ci in range(start, len(candidates)):
                nodes += 1
                if nodes > budget:
                    raise NotFoundWithinBudget(
                        f"adapted-basis search exceeded {budget} nodes"
                    )
                cand = candidates[ci]
                stack = inside + acc + [cand]
                mat = SparseIntMatrix.from_dense([list(v) for v in stack])
                if rank(mat) < len(stack):
                    continue
                got = pick(take - 1, ci + 1, acc + [cand])
                if got is not None:
                    return got
            return None

        return pick(need, 0, [])

    result = place(0, [])
    if result is None:
        raise NotFoundWithinBudget("adapted-basis search space exhausted")
    return tuple(result)
