"""Injective resolutions and the constructions that compare them.

Everything here is exact through the stated horizon and is re-verified
on construction: a Resolution will not build unless the augmented
complex is exact in every degree below its horizon.  The horseshoe
filler and the two-term cylinder complex are therefore machine-checked
each time they are produced, not trusted.

Over k[x]/(x^m) the injectives are exactly the free modules, so
resolutions are built by repeatedly embedding a cokernel into a free
module, and comparison lifts reduce to extension problems along
monomorphisms into free modules.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from typing import Optional

from .linalg import (
    NoSolution,
    Rat,
    RationalMatrix,
    rank,
    solve_matrix,
)
from .complexes import (
    ChainMap,
    ModuleComplex,
    SesOfComplexes,
    apply_F_complex,
    cohomology,
)
from .modules import (
    ConstructionFailure,
    FunctorSpec,
    LambdaModule,
    ModuleMap,
    SesModules,
    cokernel_module,
    compose,
    direct_sum,
    embed_into_injective,
    extend_along_mono,
    image_factorization,
    is_injective,
)


class Resolution:
    """An exact augmented cochain complex 0 -> base -> J^0 -> J^1 -> ...

    Exactness is validated in degrees 0..horizon-1; degree `horizon`
    is where the truncation cuts, so no claim is made there.
    """

    __slots__ = ("base", "augmentation", "complex")

    def __init__(self, base: LambdaModule, augmentation: ModuleMap, complex: ModuleComplex):
        if augmentation.src != base or augmentation.dst != complex.objects[0]:
            raise ValueError("augmentation must run from the base into degree zero")
        if rank(augmentation.matrix) != base.dim:
            raise ConstructionFailure("augmentation is not injective")
        ranks = [rank(d.matrix) for d in complex.differentials]
        if complex.horizon >= 1:
            if not (complex.differentials[0].matrix @ augmentation.matrix).is_zero():
                raise ConstructionFailure("differential does not kill the base")
        incoming = base.dim
        for p in range(complex.horizon):
            if complex.objects[p].dim - ranks[p] != incoming:
                raise ConstructionFailure(f"resolution is not exact in degree {p}")
            incoming = ranks[p]
        self.base = base
        self.augmentation = augmentation
        self.complex = complex

    @classmethod
    def _trusted(cls, base, augmentation, complex) -> "Resolution":
        """Construction bypass for slices of already-validated data."""
        self = object.__new__(cls)
        self.base = base
        self.augmentation = augmentation
        self.complex = complex
        return self

    @property
    def horizon(self) -> int:
        return self.complex.horizon

    @property
    def objects(self):
        return self.complex.objects

    def differential(self, p: int) -> ModuleMap:
        return self.complex.differentials[p]

    def truncate(self, horizon: int) -> "Resolution":
        if horizon == self.horizon:
            return self
        return Resolution._trusted(
            self.base, self.augmentation, self.complex.truncate(horizon)
        )

    def is_degreewise_injective(self) -> bool:
        return all(is_injective(J) for J in self.objects)

    def __repr__(self):
        return f"Resolution(base dim {self.base.dim}, horizon {self.horizon})"


def injective_resolution(M: LambdaModule, horizon: int) -> Resolution:
    """The deterministic resolution: embed, take the cokernel, repeat."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    augmentation = embed_into_injective(M)
    objects = [augmentation.dst]
    differentials = []
    last_embedding = augmentation
    for _ in range(horizon):
        coker = cokernel_module(last_embedding)
        last_embedding = embed_into_injective(coker.module)
        differentials.append(compose(last_embedding, coker.projection))
        objects.append(last_embedding.dst)
    return Resolution(M, augmentation, ModuleComplex(objects, differentials))


class ResolutionRegistry:
    """Shared cache of the deterministic resolutions, keyed by module.

    The construction never depends on the requested horizon, so a
    longer build agrees with a shorter one degree for degree; slices of
    one cached build keep every presentation aligned across calls.
    """

    def __init__(self):
        self._store: dict = {}
        self._lock = threading.Lock()

    def resolution(self, M: LambdaModule, horizon: int) -> Resolution:
        with self._lock:
            cached = self._store.get(M)
            if cached is None or cached.horizon < horizon:
                cached = injective_resolution(M, horizon)
                self._store[M] = cached
        if cached.horizon > horizon:
            return cached.truncate(horizon)
        return cached


# ---------------------------------------------------------------------------
# Splitting a resolution into short exact sequences of cycles.

@dataclass(frozen=True)
class ResolutionSplitting:
    """Cycle data of a resolution down to some depth.

    cycles[q] is the q-th cycle module (cycles[0] is the base itself),
    inclusions[q] embeds it into degree q, corestrictions[q] is the
    differential with its target cut down to cycles[q+1], and
    sequences[q-1] is the short exact sequence
    0 -> cycles[q-1] -> J^(q-1) -> cycles[q] -> 0.
    """

    resolution: Resolution
    depth: int
    cycles: tuple
    inclusions: tuple
    corestrictions: tuple
    sequences: tuple


def split_resolution(J: Resolution, depth: int) -> ResolutionSplitting:
    if not 0 <= depth <= J.horizon:
        raise ValueError("splitting depth out of range")
    cycles = [J.base]
    inclusions = [J.augmentation]
    corestrictions = []
    sequences = []
    for q in range(depth):
        d = J.differential(q)
        fact = image_factorization(d)
        if compose(fact.inclusion, fact.corestriction) != d:
            raise ConstructionFailure("cycle factorization does not recompose")
        corestrictions.append(fact.corestriction)
        sequences.append(SesModules(inclusions[q], fact.corestriction))
        cycles.append(fact.module)
        inclusions.append(fact.inclusion)
    return ResolutionSplitting(
        J,
        depth,
        tuple(cycles),
        tuple(inclusions),
        tuple(corestrictions),
        tuple(sequences),
    )


def truncated_shift(J: Resolution, splitting: ResolutionSplitting, i: int) -> Resolution:
    """The tail J^i -> J^(i+1) -> ... as a resolution of the i-th cycles."""
    if splitting.resolution is not J:
        raise ValueError("splitting belongs to a different resolution")
    if not 0 <= i <= splitting.depth:
        raise ValueError("shift out of range")
    if i == 0:
        return J
    tail = ModuleComplex(J.objects[i:], J.complex.differentials[i:])
    return Resolution(splitting.cycles[i], splitting.inclusions[i], tail)


# ---------------------------------------------------------------------------
# Horseshoe filler.

@dataclass(frozen=True)
class Horseshoe:
    """A resolution of the middle of a short exact sequence, fitted so
    that the degreewise-split sequence of complexes extends the given
    one."""

    resolution: Resolution
    ses: SesOfComplexes


def horseshoe(
    E: SesModules,
    sub_resolution: Resolution,
    quot_resolution: Resolution,
    rng: Optional[random.Random] = None,
) -> Horseshoe:
    """Fill the middle column over resolutions of the outer terms.

    Degree by degree: extend the sub augmentation over the middle
    along the mono (this is where rng varies the outcome), pair it
    with the quotient augmentation, and pass to cokernels.  The
    outer cokernel embeddings are the factored differentials of the
    given resolutions, so the middle complex built this way has the
    block differentials of the direct sums, and its exactness is
    re-validated by the Resolution constructor.
    """
    if sub_resolution.base != E.sub or quot_resolution.base != E.quot:
        raise ValueError("resolutions do not match the sequence ends")
    h = min(sub_resolution.horizon, quot_resolution.horizon)
    RA = sub_resolution.truncate(h)
    RB = quot_resolution.truncate(h)
    iota, pi = E.a_to_c, E.c_to_b
    eA, eB = RA.augmentation, RB.augmentation
    middle = E.mid
    objects = []
    differentials = []
    sums = []
    aug = None
    prev_projection = None
    for p in range(h + 1):
        ds = direct_sum(RA.objects[p], RB.objects[p])
        sums.append(ds)
        objects.append(ds.module)
        t = extend_along_mono(iota, eA, rng)
        aug_matrix = RationalMatrix.vstack([t.matrix, eB.matrix @ pi.matrix])
        aug_p = ModuleMap(middle, ds.module, aug_matrix)
        if p == 0:
            aug = aug_p
        else:
            differentials.append(
                ModuleMap(objects[p - 1], ds.module, aug_matrix @ prev_projection.matrix)
            )
        if p == h:
            break
        cok_sub = cokernel_module(eA)
        cok_mid = cokernel_module(aug_p)
        cok_quot = cokernel_module(eB)
        reps_sub = cok_sub.presentation.representative_basis
        reps_mid = cok_mid.presentation.representative_basis
        eA = ModuleMap(
            cok_sub.module, RA.objects[p + 1], RA.differential(p).matrix @ reps_sub
        )
        eB = ModuleMap(
            cok_quot.module,
            RB.objects[p + 1],
            RB.differential(p).matrix @ cok_quot.presentation.representative_basis,
        )
        iota = ModuleMap(
            cok_sub.module,
            cok_mid.module,
            cok_mid.projection.matrix @ (ds.include_left.matrix @ reps_sub),
        )
        pi = ModuleMap(
            cok_mid.module,
            cok_quot.module,
            cok_quot.projection.matrix @ (ds.project_right.matrix @ reps_mid),
        )
        SesModules(iota, pi)  # the induced sequence of cokernels must stay exact
        prev_projection = cok_mid.projection
        middle = cok_mid.module
    filled = Resolution(E.mid, aug, ModuleComplex(objects, differentials))
    sub_chain = ChainMap(
        RA.complex, filled.complex, [s.include_left.matrix for s in sums]
    )
    quot_chain = ChainMap(
        filled.complex, RB.complex, [s.project_right.matrix for s in sums]
    )
    return Horseshoe(filled, SesOfComplexes(sub_chain, quot_chain))


# ---------------------------------------------------------------------------
# Comparison lifts.

def lift_resolution_map(
    phi: ModuleMap,
    src_resolution: Resolution,
    dst_resolution: Resolution,
    rng: Optional[random.Random] = None,
) -> ChainMap:
    """Lift a map of bases to a chain map of resolutions.

    Degree zero extends (dst augmentation) o phi along the source
    augmentation; each later degree factors the running composite
    through the image of the source differential and extends again.
    The target resolution must be degreewise injective.  Any rng
    variation stays within chain maps of the same homotopy class.
    """
    if phi.src != src_resolution.base or phi.dst != dst_resolution.base:
        raise ValueError("map endpoints do not match the resolutions")
    h = min(src_resolution.horizon, dst_resolution.horizon)
    RS = src_resolution.truncate(h)
    RT = dst_resolution.truncate(h)
    components = [
        extend_along_mono(RS.augmentation, compose(RT.augmentation, phi), rng).matrix
    ]
    for p in range(h):
        d = RS.differential(p)
        w = RT.differential(p).matrix @ components[p]
        fact = image_factorization(d)
        preimages = solve_matrix(d.matrix, fact.inclusion.matrix)
        if preimages is NoSolution:
            raise ConstructionFailure("image basis has no preimages")
        q = ModuleMap(fact.module, RT.objects[p + 1], w @ preimages)
        components.append(extend_along_mono(fact.inclusion, q, rng).matrix)
    return ChainMap(RS.complex, RT.complex, components)


# ---------------------------------------------------------------------------
# The two-term cylinder resolution of a cycle object.

@dataclass(frozen=True)
class Cylinder:
    """Resolution of J^i by direct sums of two consecutive levels of J,
    with the sign-twisted block differential, sitting between two
    shifted tails of J."""

    resolution: Resolution
    ses: SesOfComplexes


def cylinder_resolution(J: Resolution, splitting: ResolutionSplitting, i: int) -> Cylinder:
    """L^p = J^(i+p) (+) J^(i+p+1) with differential blocks
    [[d, (-1)^(p+1) id], [0, d]], augmented by (id, d^i) from J^i.

    The sign alternates so that the squares close; the Resolution
    constructor re-checks d o d = 0 and augmented exactness, and the
    surrounding short exact sequence of complexes has the shifted
    tails of J on both sides.
    """
    if splitting.resolution is not J:
        raise ValueError("splitting belongs to a different resolution")
    if not 0 <= i + 1 <= splitting.depth:
        raise ValueError("cylinder needs cycle data one step past its start")
    h = J.horizon - i - 1
    if h < 0:
        raise ValueError("resolution too short for a cylinder at this index")
    sums = [
        direct_sum(J.objects[i + p], J.objects[i + p + 1]) for p in range(h + 1)
    ]
    objects = [s.module for s in sums]
    differentials = []
    for p in range(h):
        sign = Rat(-1) if p % 2 == 0 else Rat(1)
        top_dim = J.objects[i + p].dim
        mid_dim = J.objects[i + p + 1].dim
        block = RationalMatrix.block(
            [
                [
                    J.differential(i + p).matrix,
                    sign * RationalMatrix.identity(mid_dim),
                ],
                [
                    RationalMatrix.zeros(J.objects[i + p + 2].dim, top_dim),
                    J.differential(i + p + 1).matrix,
                ],
            ]
        )
        differentials.append(ModuleMap(objects[p], objects[p + 1], block))
    aug_matrix = RationalMatrix.vstack(
        [RationalMatrix.identity(J.objects[i].dim), J.differential(i).matrix]
    )
    aug = ModuleMap(J.objects[i], objects[0], aug_matrix)
    resolution = Resolution(J.objects[i], aug, ModuleComplex(objects, differentials))
    head = ModuleComplex(J.objects[i : i + h + 1], J.complex.differentials[i : i + h])
    tail = ModuleComplex(
        J.objects[i + 1 : i + h + 2], J.complex.differentials[i + 1 : i + h + 1]
    )
    sub_chain = ChainMap(
        head, resolution.complex, [s.include_left.matrix for s in sums]
    )
    quot_chain = ChainMap(
        resolution.complex, tail, [s.project_right.matrix for s in sums]
    )
    return Cylinder(resolution, SesOfComplexes(sub_chain, quot_chain))


# ---------------------------------------------------------------------------
# Acyclicity.

_acyclicity_cache: dict = {}


def is_F_acyclic(
    F: FunctorSpec, M: LambdaModule, horizon: int, registry: ResolutionRegistry
) -> bool:
    """Whether the right derived functors of F vanish on M in degrees
    1..horizon, computed from the registry resolution."""
    key = (F, M, horizon)
    cached = _acyclicity_cache.get(key)
    if cached is None:
        R = registry.resolution(M, horizon + 1)
        FC = apply_F_complex(F, R.complex)
        cached = all(cohomology(FC, q).dim == 0 for q in range(1, horizon + 1))
        _acyclicity_cache[key] = cached
    return cached
