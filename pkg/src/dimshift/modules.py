"""Finite-dimensional modules over the truncated algebra k[x]/(x^m), k = Q.

A module is a rational vector space with a nilpotent operator X
satisfying X^m = 0; a map of modules is a matrix intertwining the two
operators.  Every module decomposes into cyclic blocks k[x]/(x^j) with
j <= m (nilpotent canonical form), the injective objects are exactly
the free ones (all blocks of size m), and Hom spaces have an explicit
basis read off from the block decompositions of source and target.

The covariant left-exact functor under study is F = Hom(A, -) for a
fixed module A.  Its values are plain vector spaces; apply_F_object
fixes a deterministic basis once per (A, M) pair and apply_F_map
expresses post-composition in those bases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import (
    NoSolution,
    ONE,
    Rat,
    RationalMatrix,
    Subspace,
    ZERO,
    image_basis,
    inverse,
    kernel_basis,
    quotient,
    rank,
    solve_matrix,
)


class ConstructionFailure(Exception):
    """An internal construction violated one of its own invariants."""


@dataclass(frozen=True)
class TruncatedAlgebra:
    """The algebra k[x]/(x^m) over k = Q.  Needs m >= 2."""

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("truncation exponent must be at least 2")


class LambdaModule:
    """A module (V, X) over k[x]/(x^m): dim(V) = dim, X^m = 0.

    Equality and hashing use the structural fingerprint (m, dim, X
    entries), so structurally identical modules are interchangeable as
    cache and registry keys.
    """

    __slots__ = ("algebra", "dim", "X")

    def __init__(self, algebra: TruncatedAlgebra, X: RationalMatrix):
        if X.nrows != X.ncols:
            raise ValueError("operator matrix must be square")
        power = RationalMatrix.identity(X.nrows)
        for _ in range(algebra.m):
            power = power @ X
        if not power.is_zero():
            raise ValueError("operator is not nilpotent of the required order")
        self.algebra = algebra
        self.dim = X.nrows
        self.X = X

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LambdaModule)
            and self.algebra == other.algebra
            and self.X == other.X
        )

    def __hash__(self):
        return hash((self.algebra.m, self.dim, self.X))

    def __repr__(self):
        return f"LambdaModule(m={self.algebra.m}, dim={self.dim})"


def zero_module(algebra: TruncatedAlgebra) -> LambdaModule:
    return LambdaModule(algebra, RationalMatrix.zeros(0, 0))


def free_module(algebra: TruncatedAlgebra, blocks: int) -> LambdaModule:
    """Free module of the given rank: blocks copies of the regular module."""
    m = algebra.m
    n = m * blocks
    rows = [[ZERO] * n for _ in range(n)]
    for b in range(blocks):
        for t in range(m - 1):
            rows[b * m + t + 1][b * m + t] = ONE
    return LambdaModule(algebra, RationalMatrix(rows, n))


def simple_module(algebra: TruncatedAlgebra) -> LambdaModule:
    """The one-dimensional module k with X acting as zero."""
    return LambdaModule(algebra, RationalMatrix.zeros(1, 1))


def cyclic_module(algebra: TruncatedAlgebra, length: int) -> LambdaModule:
    """The cyclic module k[x]/(x^length), 1 <= length <= m."""
    if not 1 <= length <= algebra.m:
        raise ValueError("cyclic length out of range")
    rows = [[ZERO] * length for _ in range(length)]
    for t in range(length - 1):
        rows[t + 1][t] = ONE
    return LambdaModule(algebra, RationalMatrix(rows, length))


class ModuleMap:
    """A matrix f with f X_src = X_dst f, acting on column vectors."""

    __slots__ = ("src", "dst", "matrix")

    def __init__(self, src: LambdaModule, dst: LambdaModule, matrix: RationalMatrix):
        if src.algebra != dst.algebra:
            raise ValueError("maps need a common ground algebra")
        if matrix.nrows != dst.dim or matrix.ncols != src.dim:
            raise ValueError("matrix shape does not match the endpoints")
        if matrix @ src.X != dst.X @ matrix:
            raise ValueError("matrix does not intertwine the operators")
        self.src = src
        self.dst = dst
        self.matrix = matrix

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ModuleMap)
            and self.src == other.src
            and self.dst == other.dst
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.src, self.dst, self.matrix))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_mono(self) -> bool:
        return rank(self.matrix) == self.src.dim

    def is_epi(self) -> bool:
        return rank(self.matrix) == self.dst.dim

    def __repr__(self):
        return f"ModuleMap({self.src.dim} -> {self.dst.dim})"


def identity_map(M: LambdaModule) -> ModuleMap:
    return ModuleMap(M, M, RationalMatrix.identity(M.dim))

def zero_map(src: LambdaModule, dst: LambdaModule) -> ModuleMap:
    return ModuleMap(src, dst, RationalMatrix.zeros(dst.dim, src.dim))

def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    if f.dst != g.src:
        raise ValueError("maps do not compose")
    return ModuleMap(f.src, g.dst, g.matrix @ f.matrix)


class SesModules:
    """A short exact sequence 0 -> A -> C -> B -> 0 of modules."""

    __slots__ = ("a_to_c", "c_to_b")

    def __init__(self, a_to_c: ModuleMap, c_to_b: ModuleMap):
        if a_to_c.dst != c_to_b.src:
            raise ValueError("middle objects disagree")
        if not a_to_c.is_mono():
            raise ValueError("first map is not injective")
        if not c_to_b.is_epi():
            raise ValueError("second map is not surjective")
        mid = Subspace.from_columns(a_to_c.matrix)
        ker = Subspace.from_columns(kernel_basis(c_to_b.matrix))
        if mid != ker:
            raise ValueError("not exact at the middle object")
        self.a_to_c = a_to_c
        self.c_to_b = c_to_b

    @property
    def sub(self) -> LambdaModule:
        return self.a_to_c.src

    @property
    def mid(self) -> LambdaModule:
        return self.a_to_c.dst

    @property
    def quot(self) -> LambdaModule:
        return self.c_to_b.dst

    def __repr__(self):
        return (
            f"SesModules({self.sub.dim} -> {self.mid.dim} -> {self.quot.dim})"
        )


# ---------------------------------------------------------------------------
# Nilpotent canonical form.

@dataclass(frozen=True)
class CanonicalForm:
    """Block decomposition of a nilpotent operator.

    P's columns list, block by block, the chain v, Xv, ..., X^(j-1)v of
    each cyclic block, so P_inv @ X @ P is the block shift matrix with
    weakly decreasing block sizes.
    """

    block_sizes: tuple
    offsets: tuple
    P: RationalMatrix
    P_inv: RationalMatrix


class _EchelonSpan:
    """Growing subspace with O(dim) membership via echelon insertion."""

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots = {}

    def _reduce(self, vec: list):
        for i in range(self.dim):
            if vec[i]:
                if i in self.pivots:
                    c = vec[i]
                    row = self.pivots[i]
                    for j in range(i, self.dim):
                        if row[j]:
                            vec[j] -= c * row[j]
                else:
                    return i
        return None

    def add(self, vec: Sequence) -> bool:
        """Insert vec; report whether it enlarged the span."""
        vec = list(vec)
        i = self._reduce(vec)
        if i is None:
            return False
        inv = ONE / vec[i]
        self.pivots[i] = [x * inv for x in vec]
        return True


def _shift_blocks(sizes: Sequence[int], total: int) -> RationalMatrix:
    rows = [[ZERO] * total for _ in range(total)]
    off = 0
    for j in sizes:
        for t in range(j - 1):
            rows[off + t + 1][off + t] = ONE
        off += j
    return RationalMatrix(rows, total)


_canonical_cache: dict = {}


def canonical_form(M: LambdaModule) -> CanonicalForm:
    """Chain basis for the nilpotent operator of M, cached by fingerprint.

    Chains are extracted highest height first: at each height the
    kernel of X^h is extended past the lower kernel plus the height-h
    tails of the chains already chosen.  Chains of equal length keep
    extraction order, so the result is deterministic.
    """
    cached = _canonical_cache.get(M)
    if cached is not None:
        return cached
    d, X = M.dim, M.X
    if d == 0:
        result = CanonicalForm((), (), RationalMatrix.zeros(0, 0), RationalMatrix.zeros(0, 0))
        _canonical_cache[M] = result
        return result
    kernels = [Subspace.zero(d)]
    power = RationalMatrix.identity(d)
    while kernels[-1].dim < d:
        power = X @ power
        kernels.append(Subspace.from_columns(kernel_basis(power)))
    s = len(kernels) - 1
    chains = []
    for height in range(s, 0, -1):
        span = _EchelonSpan(d)
        for j in range(kernels[height - 1].dim):
            span.add(kernels[height - 1].basis.column(j))
        for ch in chains:
            if len(ch) > height:
                if not span.add(ch[len(ch) - height]):
                    raise ConstructionFailure("carried chain vector is dependent")
        for j in range(kernels[height].dim):
            cand = kernels[height].basis.column(j)
            if span.add(cand):
                chain = [cand]
                v = cand
                for _ in range(height - 1):
                    v = X.apply(v)
                    chain.append(v)
                chains.append(chain)
    chains.sort(key=len, reverse=True)
    sizes = tuple(len(ch) for ch in chains)
    if sum(sizes) != d:
        raise ConstructionFailure("chain lengths do not add up to the dimension")
    cols = [v for ch in chains for v in ch]
    P = RationalMatrix.from_columns(cols, d)
    try:
        P_inv = inverse(P)
    except ValueError as exc:
        raise ConstructionFailure("chain vectors are not a basis") from exc
    if P_inv @ X @ P != _shift_blocks(sizes, d):
        raise ConstructionFailure("conjugation does not reach the block shift form")
    offsets = []
    off = 0
    for j in sizes:
        offsets.append(off)
        off += j
    result = CanonicalForm(sizes, tuple(offsets), P, P_inv)
    _canonical_cache[M] = result
    return result


def is_injective(M: LambdaModule) -> bool:
    """Injective = free here: m * rank(X^(m-1)) = dim."""
    power = RationalMatrix.identity(M.dim)
    for _ in range(M.algebra.m - 1):
        power = power @ M.X
    return M.algebra.m * rank(power) == M.dim


def embed_into_injective(M: LambdaModule) -> ModuleMap:
    """A monomorphism from M into a free module.

    Each cyclic block k[x]/(x^j) embeds into the regular module as
    multiplication by x^(m-j); the target is one free block per chain.
    """
    cf = canonical_form(M)
    m = M.algebra.m
    blocks = len(cf.block_sizes)
    E = free_module(M.algebra, blocks)
    rows = [[ZERO] * M.dim for _ in range(E.dim)]
    for r, j in enumerate(cf.block_sizes):
        for t in range(j):
            rows[r * m + (m - j) + t][cf.offsets[r] + t] = ONE
    emb = RationalMatrix(rows, M.dim)
    mono = ModuleMap(M, E, emb @ cf.P_inv)
    if not mono.is_mono():
        raise ConstructionFailure("embedding into the free module is not injective")
    return mono


# ---------------------------------------------------------------------------
# Hom spaces.

class HomBasis:
    """Deterministic basis of Hom(A, B) from the block decompositions.

    A map between cyclic blocks of sizes a and b is determined by the
    image of the source generator, which can be x^(b-c+t) times the
    target generator for t = 0..c-1, c = min(a, b).  Basis elements are
    indexed by triples (r, s, t) = (source block, target block, t) in
    lexicographic order; coordinates of an intertwiner are read off
    directly from its matrix conjugated into canonical coordinates.
    """

    __slots__ = ("A", "B", "cf_A", "cf_B", "triples", "_elements")

    def __init__(self, A: LambdaModule, B: LambdaModule):
        self.A = A
        self.B = B
        self.cf_A = canonical_form(A)
        self.cf_B = canonical_form(B)
        triples = []
        for r, a in enumerate(self.cf_A.block_sizes):
            for s, b in enumerate(self.cf_B.block_sizes):
                for t in range(min(a, b)):
                    triples.append((r, s, t))
        self.triples = tuple(triples)
        self._elements = [None] * len(triples)

    @property
    def dim(self) -> int:
        return len(self.triples)

    def element(self, idx: int) -> RationalMatrix:
        """The idx-th basis intertwiner A -> B as an explicit matrix."""
        cached = self._elements[idx]
        if cached is not None:
            return cached
        r, s, t = self.triples[idx]
        a = self.cf_A.block_sizes[r]
        b = self.cf_B.block_sizes[s]
        c = min(a, b)
        rows = [[ZERO] * self.A.dim for _ in range(self.B.dim)]
        # P_B @ E @ P_A_inv as a sum of rank-one pieces, one per chain step.
        for l in range(c - t):
            col = self.cf_B.P.column(self.cf_B.offsets[s] + (b - c + t) + l)
            row = self.cf_A.P_inv.row(self.cf_A.offsets[r] + l)
            for i, ci in enumerate(col):
                if ci:
                    target = rows[i]
                    for j, rj in enumerate(row):
                        if rj:
                            target[j] += ci * rj
        result = RationalMatrix(rows, self.A.dim)
        self._elements[idx] = result
        return result

    def coordinates(self, h: RationalMatrix) -> tuple:
        """Coordinates of an intertwiner h: A -> B in this basis."""
        G = self.cf_B.P_inv @ (h @ self.cf_A.P)
        out = []
        for r, s, t in self.triples:
            a = self.cf_A.block_sizes[r]
            b = self.cf_B.block_sizes[s]
            c = min(a, b)
            out.append(G.entry(self.cf_B.offsets[s] + (b - c + t), self.cf_A.offsets[r]))
        return tuple(out)

    def from_coordinates(self, coords: Sequence) -> RationalMatrix:
        total = RationalMatrix.zeros(self.B.dim, self.A.dim)
        for i, c in enumerate(coords):
            if c:
                total = total + self.element(i) * c
        return total


_hom_cache: dict = {}


def hom_basis(A: LambdaModule, B: LambdaModule) -> HomBasis:
    key = (A, B)
    cached = _hom_cache.get(key)
    if cached is None:
        cached = HomBasis(A, B)
        _hom_cache[key] = cached
    return cached


def hom_space(A: LambdaModule, B: LambdaModule) -> Subspace:
    """Hom(A, B) as a subspace of row-major flattened matrices."""
    basis = hom_basis(A, B)
    flats = []
    for i in range(basis.dim):
        el = basis.element(i)
        flats.append([x for row in el.rows for x in row])
    return Subspace.from_columns(
        RationalMatrix.from_columns(flats, A.dim * B.dim)
    )


# ---------------------------------------------------------------------------
# The functor F = Hom(A, -).

@dataclass(frozen=True)
class FunctorSpec:
    """The covariant left-exact functor Hom(source, -)."""

    algebra: TruncatedAlgebra
    source: LambdaModule

    def __post_init__(self):
        if self.source.algebra != self.algebra:
            raise ValueError("source module lives over a different algebra")


def apply_F_object(F: FunctorSpec, M: LambdaModule) -> HomBasis:
    """F(M) = Hom(A, M) with its deterministic basis."""
    if M.algebra != F.algebra:
        raise ValueError("module lives over a different algebra")
    return hom_basis(F.source, M)


def apply_F_map(F: FunctorSpec, f: ModuleMap) -> RationalMatrix:
    """Matrix of F(f): Hom(A, src) -> Hom(A, dst) in the chosen bases.

    Post-composition acts block-column-wise in canonical coordinates,
    so every entry is a single lookup in P_dst_inv @ f @ P_src.
    """
    src_basis = apply_F_object(F, f.src)
    dst_basis = apply_F_object(F, f.dst)
    G = dst_basis.cf_B.P_inv @ (f.matrix @ src_basis.cf_B.P)
    a_sizes = src_basis.cf_A.block_sizes
    rows = [[ZERO] * src_basis.dim for _ in range(dst_basis.dim)]
    for col, (r, s, t) in enumerate(src_basis.triples):
        a = a_sizes[r]
        b = src_basis.cf_B.block_sizes[s]
        src_col = src_basis.cf_B.offsets[s] + (b - min(a, b)) + t
        for row, (r2, s2, t2) in enumerate(dst_basis.triples):
            if r2 != r:
                continue
            b2 = dst_basis.cf_B.block_sizes[s2]
            dst_row = dst_basis.cf_B.offsets[s2] + (b2 - min(a, b2)) + t2
            val = G.entry(dst_row, src_col)
            if val:
                rows[row][col] = val
    return RationalMatrix(rows, src_basis.dim)


def check_left_exactness(F: FunctorSpec, E: SesModules) -> bool:
    """0 -> F(A) -> F(C) -> F(B) stays exact at F(A) and F(C)."""
    Fi = apply_F_map(F, E.a_to_c)
    Fp = apply_F_map(F, E.c_to_b)
    if kernel_basis(Fi).ncols != 0:
        return False
    return Subspace.from_columns(Fi) == Subspace.from_columns(kernel_basis(Fp))


# ---------------------------------------------------------------------------
# Kernels, cokernels, direct sums.

@dataclass(frozen=True)
class Kernel:
    module: LambdaModule
    inclusion: ModuleMap


@dataclass(frozen=True)
class Cokernel:
    module: LambdaModule
    projection: ModuleMap
    presentation: object  # the underlying QuotientPresentation


def kernel_module(f: ModuleMap) -> Kernel:
    """ker f with its inclusion; the kernel is X-stable so X restricts."""
    basis = kernel_basis(f.matrix)
    restricted = solve_matrix(basis, f.src.X @ basis)
    if restricted is NoSolution:
        raise ConstructionFailure("kernel is not stable under the operator")
    K = LambdaModule(f.src.algebra, restricted)
    return Kernel(K, ModuleMap(K, f.src, basis))


def cokernel_module(f: ModuleMap) -> Cokernel:
    """coker f = dst / im f with the projection onto chosen representatives."""
    pres = quotient(f.dst.dim, Subspace.from_columns(f.matrix))
    induced_X = pres.reduction_map @ (f.dst.X @ pres.representative_basis)
    Q = LambdaModule(f.dst.algebra, induced_X)
    return Cokernel(Q, ModuleMap(f.dst, Q, pres.reduction_map), pres)


@dataclass(frozen=True)
class ImageFactorization:
    """f = inclusion o corestriction through the image submodule."""

    module: LambdaModule
    corestriction: ModuleMap
    inclusion: ModuleMap


def image_factorization(f: ModuleMap) -> ImageFactorization:
    """Factor f through its image; the image is X-stable so X restricts."""
    B = image_basis(f.matrix)
    restricted = solve_matrix(B, f.dst.X @ B)
    if restricted is NoSolution:
        raise ConstructionFailure("image is not stable under the operator")
    Z = LambdaModule(f.src.algebra, restricted)
    coords = solve_matrix(B, f.matrix)
    if coords is NoSolution:
        raise ConstructionFailure("map escapes its own image basis")
    return ImageFactorization(Z, ModuleMap(f.src, Z, coords), ModuleMap(Z, f.dst, B))


@dataclass(frozen=True)
class DirectSum:
    module: LambdaModule
    include_left: ModuleMap
    include_right: ModuleMap
    project_left: ModuleMap
    project_right: ModuleMap


def direct_sum(M: LambdaModule, N: LambdaModule) -> DirectSum:
    if M.algebra != N.algebra:
        raise ValueError("summands live over different algebras")
    d = M.dim + N.dim
    X = RationalMatrix.block(
        [
            [M.X, RationalMatrix.zeros(M.dim, N.dim)],
            [RationalMatrix.zeros(N.dim, M.dim), N.X],
        ]
    )
    S = LambdaModule(M.algebra, X)
    i_l = RationalMatrix.vstack(
        [RationalMatrix.identity(M.dim), RationalMatrix.zeros(N.dim, M.dim)]
    )
    i_r = RationalMatrix.vstack(
        [RationalMatrix.zeros(M.dim, N.dim), RationalMatrix.identity(N.dim)]
    )
    p_l = RationalMatrix.hstack(
        [RationalMatrix.identity(M.dim), RationalMatrix.zeros(M.dim, N.dim)]
    )
    p_r = RationalMatrix.hstack(
        [RationalMatrix.zeros(N.dim, M.dim), RationalMatrix.identity(N.dim)]
    )
    return DirectSum(
        S,
        ModuleMap(M, S, i_l),
        ModuleMap(N, S, i_r),
        ModuleMap(S, M, p_l),
        ModuleMap(S, N, p_r),
    )


# ---------------------------------------------------------------------------
# Extension along monomorphisms into free modules.

def _power_list(X: RationalMatrix, count: int) -> list:
    powers = [RationalMatrix.identity(X.nrows)]
    for _ in range(count - 1):
        powers.append(X @ powers[-1])
    return powers


def extend_along_mono(
    mono: ModuleMap, g: ModuleMap, rng: Optional[random.Random] = None
) -> ModuleMap:
    """h with h o mono = g, for g into a free (= injective) module.

    Free modules are self-dual here: a map into the regular module is
    the same thing as a plain linear functional (read the top
    coefficient), and linear functionals extend along any injection.
    Extending those functionals and rebuilding gives h; rng, when
    given, varies the extension within its solution space.
    """
    E = g.dst
    C = mono.dst
    if mono.src != g.src:
        raise ValueError("extension problem endpoints disagree")
    if not is_injective(E):
        raise ConstructionFailure("extension target is not injective")
    if E.dim == 0:
        return ModuleMap(C, E, RationalMatrix.zeros(0, C.dim))
    m = E.algebra.m
    cf = canonical_form(E)
    blocks = len(cf.block_sizes)
    # Top-coefficient functionals of each free block, applied to g.
    phi_rows = []
    for j in range(blocks):
        lam = cf.P_inv.row(cf.offsets[j] + m - 1)
        phi_rows.append(RationalMatrix([lam], E.dim) @ g.matrix)
    phi = RationalMatrix.vstack(phi_rows)  # blocks x dim(src)
    # Extend each functional along the mono: psi @ mono = phi.
    monoT = mono.matrix.transpose()
    psiT = solve_matrix(monoT, phi.transpose())
    if psiT is NoSolution:
        raise ConstructionFailure("functional extension system is inconsistent")
    psi = psiT.transpose()
    if rng is not None:
        null = kernel_basis(monoT)
        if null.ncols:
            shift = RationalMatrix(
                [
                    [Rat(rng.randint(-3, 3)) for _ in range(null.ncols)]
                    for _ in range(blocks)
                ],
                null.ncols,
            )
            psi = psi + shift @ null.transpose()
    # Rebuild: row m-1-t of block j, in canonical coordinates, is psi_j X^t.
    powers = _power_list(C.X, m)
    rows = [[ZERO] * C.dim for _ in range(E.dim)]
    for j in range(blocks):
        psi_j = RationalMatrix([psi.row(j)], C.dim)
        for t in range(m):
            rows[cf.offsets[j] + m - 1 - t] = list((psi_j @ powers[t]).row(0))
    h = ModuleMap(C, E, cf.P @ RationalMatrix(rows, C.dim))
    if h.matrix @ mono.matrix != g.matrix:
        raise ConstructionFailure("extension does not restrict to the given map")
    return h
