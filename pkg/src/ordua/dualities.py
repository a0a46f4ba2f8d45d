"""Spectra and Priestley-style dualities for finite ordered algebras.

Every spectrum here is concrete: points are filters of the appropriate sort
(all filters, prime filters, disjunctive filters), the basic set of an
element a is the set of points containing a, the topology is the patch
topology of the basic sets, and the order is inclusion of filters.
"""

from __future__ import annotations

from ordua.errors import (
    CarrierMismatch,
    InputFormatError,
    KindMismatch,
    NotAFilterImage,
    NotPriestley,
    NotT0,
)
from ordua.free import free_boolean
from ordua.spaces import (
    FiniteSpace,
    Preorder,
    PreorderedSpace,
    generate_topology,
    patch_space,
    priestley_check,
    specialization_preorder,
    upper_open_reduct,
    weakly_indecomposable_clopen_uppers,
)
from ordua.structures import (
    Poset,
    SetFamily,
    Structure,
    StructureMorphism,
    Subset,
    _satisfies_kind,
    bits,
    classify,
    disjunctive_filters,
    filter_point_label,
    filters,
    prime_filters,
    structure_from_closed_masks,
)

DUALITY_KINDS = ("poset", "msl", "dlat", "ddlat")

_DUAL_HOM_KIND = {"poset": "flat", "msl": "meet-hom", "dlat": "lattice-hom",
                  "ddlat": "disjunctive-hom"}


class DualityResult:
    """A spectrum: preordered patch space, point filters, and the embedding."""

    __slots__ = ("space", "point_filters", "point_labels", "embedding", "auxiliary")

    def __init__(self, space: PreorderedSpace, point_filters: SetFamily,
                 point_labels, embedding, auxiliary: dict | None = None):
        self.space = space
        self.point_filters = point_filters
        self.point_labels = tuple(point_labels)
        self.embedding = tuple(embedding)
        self.auxiliary = auxiliary or {}

    @property
    def n_points(self) -> int:
        return len(self.point_labels)

    def __repr__(self) -> str:
        return f"DualityResult({self.n_points} points)"


class SpaceMap:
    """A point map between preordered spaces, with its checked properties."""

    __slots__ = ("source", "target", "map", "continuous", "monotone")

    def __init__(self, source: PreorderedSpace, target: PreorderedSpace, map):
        self.source = source
        self.target = target
        self.map = tuple(map)
        masks = set(source.space.opens.masks)
        cont = True
        for o in target.space.opens.masks:
            pre = 0
            for p in range(source.n):
                if o >> self.map[p] & 1:
                    pre |= 1 << p
            if pre not in masks:
                cont = False
                break
        self.continuous = cont
        mono = True
        for i in range(source.n):
            for j in bits(source.preorder.up[i]):
                if not target.preorder.leq(self.map[i], self.map[j]):
                    mono = False
                    break
            if not mono:
                break
        self.monotone = mono

    def __repr__(self) -> str:
        return f"SpaceMap({self.source.n}->{self.target.n})"


class OrderedBoolean:
    """A Boolean algebra with the trace order on its prime filter spectrum."""

    __slots__ = ("algebra", "spec_order", "traces", "free")

    def __init__(self, algebra: Structure, spec_order: Poset, traces, free):
        self.algebra = algebra
        self.spec_order = spec_order
        self.traces = tuple(traces)
        self.free = free

    def __repr__(self) -> str:
        return f"OrderedBoolean(n={self.algebra.n}, {self.spec_order.n} primes)"


def _basic_masks(c: Structure, pts) -> list[int]:
    out = []
    for i in range(c.n):
        s = 0
        for k, m in enumerate(pts):
            if m >> i & 1:
                s |= 1 << k
        out.append(s)
    return out


def _inclusion_preorder(labels, pts) -> Preorder:
    rows = []
    for m in pts:
        row = 0
        for k2, m2 in enumerate(pts):
            if not m & ~m2:
                row |= 1 << k2
        rows.append(row)
    return Preorder(labels, rows)


def _points_for(c: Structure, duality: str, bound: int | None) -> list[int]:
    if duality == "poset":
        return list(filters(c, bound).masks)
    if duality == "msl":
        c.require("meet-semilattice", "msl spectrum")
        return list(filters(c, bound).masks)
    if duality == "dlat":
        c.require("distributive-lattice", "prime spectrum")
        return list(prime_filters(c).masks)
    if duality == "ddlat":
        c.require("dd-lattice", "disjunctive spectrum")
        return list(disjunctive_filters(c).masks)
    raise InputFormatError(f"unknown duality kind {duality!r}")


def _patch_spectrum(c: Structure, duality: str, bound: int | None,
                    auxiliary: dict | None = None) -> DualityResult:
    pts = _points_for(c, duality, bound)
    labels = [filter_point_label(c, m) for m in pts]
    basics = _basic_masks(c, pts)
    space = patch_space(labels, SetFamily(len(pts), basics), bound)
    order = _inclusion_preorder(labels, pts)
    return DualityResult(PreorderedSpace(space, order), SetFamily(c.n, pts),
                         labels, basics, auxiliary)


def stone_spectrum(d: Structure, bound: int | None = None) -> FiniteSpace:
    """The coherent (non-patch) topology on the prime filters, generated by
    the basic sets alone."""
    d.require("distributive-lattice", "stone_spectrum")
    pts = list(prime_filters(d).masks)
    labels = [filter_point_label(d, m) for m in pts]
    basics = _basic_masks(d, pts)
    return generate_topology(labels, SetFamily(len(pts), basics), bound)


def priestley_of_dlat(d: Structure, bound: int | None = None) -> DualityResult:
    """Prime filter spectrum with patch topology and inclusion order."""
    d.require("distributive-lattice", "priestley_of_dlat")
    res = _patch_spectrum(d, "dlat", bound)
    res.auxiliary["stone"] = stone_spectrum(d, bound)
    return res


def dlat_of_priestley(ps: PreorderedSpace) -> Structure:
    """The lattice of clopen upper sets of a Priestley space."""
    report = priestley_check(ps)
    if not report.ok:
        raise NotPriestley(f"not a Priestley space (pair {report.failing_pair})")
    return structure_from_closed_masks(ps.labels, ps.clopen_upper_masks())


def coherent_of_priestley(ps: PreorderedSpace) -> FiniteSpace:
    """Drop to the coherent reduct: keep only the open upper sets."""
    report = priestley_check(ps)
    if not report.ok:
        raise NotPriestley(f"not a Priestley space (pair {report.failing_pair})")
    return upper_open_reduct(ps)


def priestley_of_coherent(space: FiniteSpace, bound: int | None = None
                          ) -> PreorderedSpace:
    """Patch topology plus specialization order of a T0 space."""
    spec = specialization_preorder(space)
    if not spec.is_antisymmetric():
        raise NotT0(f"specialization has cycle {spec.antisymmetry_failure()}")
    return PreorderedSpace(patch_space(space.labels, space.opens, bound), spec)


def poset_spectrum(p: Poset, bound: int | None = None) -> DualityResult:
    """Filter spectrum of a poset: the open-set space on lower-set witnesses
    (auxiliary 'A') and the patch-plus-inclusion ordered space."""
    c = classify(p)
    res = _patch_spectrum(c, "poset", bound)
    pts = res.point_filters.masks
    a_opens = set()
    for u in p.lower_set_masks(bound):
        f_u = 0
        for k, m in enumerate(pts):
            if m & u:
                f_u |= 1 << k
        a_opens.add(f_u)
    res.auxiliary["A"] = FiniteSpace(res.point_labels, sorted(a_opens))
    return res


def msl_spectrum(m: Structure, bound: int | None = None) -> DualityResult:
    m.require("meet-semilattice", "msl_spectrum")
    return _patch_spectrum(m, "msl", bound)


def ddlat_spectrum(d: Structure, bound: int | None = None) -> DualityResult:
    d.require("dd-lattice", "ddlat_spectrum")
    return _patch_spectrum(d, "ddlat", bound)


def spectrum_for(c: Structure, duality: str, bound: int | None = None
                 ) -> DualityResult:
    if duality == "poset":
        return poset_spectrum(c.base, bound)
    if duality == "msl":
        return msl_spectrum(c, bound)
    if duality == "dlat":
        return priestley_of_dlat(c, bound)
    if duality == "ddlat":
        return ddlat_spectrum(c, bound)
    raise InputFormatError(f"unknown duality kind {duality!r}")


def dual_morphism(f: StructureMorphism, duality: str, bound: int | None = None
                  ) -> SpaceMap:
    """The spectrum map induced by f: point G of the target spectrum maps to
    the inverse image f^-1(G), which must be a point of the source spectrum."""
    if duality not in DUALITY_KINDS:
        raise InputFormatError(f"unknown duality kind {duality!r}")
    hom_kind = _DUAL_HOM_KIND[duality]
    if not _satisfies_kind(f.map, f.source, f.target, hom_kind):
        raise KindMismatch(f"map is not a {hom_kind}")
    res_src = spectrum_for(f.source, duality, bound)
    res_tgt = spectrum_for(f.target, duality, bound)
    src_index = {m: k for k, m in enumerate(res_src.point_filters.masks)}
    mapping = []
    for m in res_tgt.point_filters.masks:
        pre = 0
        for i in range(f.source.n):
            if m >> f.map[i] & 1:
                pre |= 1 << i
        if pre not in src_index:
            raise NotAFilterImage(
                "inverse image of a spectrum point is not a spectrum point")
        mapping.append(src_index[pre])
    return SpaceMap(res_tgt.space, res_src.space, mapping)


def extended_image_check(ps: PreorderedSpace, variant: str
                         ) -> tuple[bool, dict | None]:
    """Whether a Priestley space lies in the extended image of a spectrum.

    'coherent-poset': the weakly indecomposable clopen uppers order-separate
    the points. 'msl': additionally the full set is weakly indecomposable and
    the family is closed under binary intersection.
    """
    if variant not in ("coherent-poset", "msl"):
        raise InputFormatError(f"unknown extended-image variant {variant!r}")
    wi = list(weakly_indecomposable_clopen_uppers(ps).masks)
    for x in range(ps.n):
        for y in range(ps.n):
            if x == y or ps.preorder.leq(x, y):
                continue
            if not any(w >> x & 1 and not w >> y & 1 for w in wi):
                return False, {"kind": "separation",
                               "pair": (ps.labels[x], ps.labels[y])}
    if variant == "msl":
        full = (1 << ps.n) - 1
        if full not in wi:
            return False, {"kind": "top-not-weakly-indecomposable"}
        wi_set = set(wi)
        for a in range(len(wi)):
            for b in range(a + 1, len(wi)):
                if wi[a] & wi[b] not in wi_set:
                    return False, {
                        "kind": "intersection",
                        "sets": ([ps.labels[i] for i in bits(wi[a])],
                                 [ps.labels[i] for i in bits(wi[b])])}
    return True, None


def ordered_boolean_of(c: Structure, kind: str, bound: int | None = None
                       ) -> OrderedBoolean:
    """The free Boolean algebra on c with the trace order on its primes.

    The primes of the free algebra correspond to the spectrum points, and the
    trace of a prime is exactly the point's filter, so the order is inclusion
    of points.
    """
    fr = free_boolean(c, kind, bound)
    algebra = fr.structure
    pts = fr.points.masks
    rows = []
    for m in pts:
        row = 0
        for k2, m2 in enumerate(pts):
            if not m & ~m2:
                row |= 1 << k2
        rows.append(row)
    spec_order = Poset(fr.point_labels, rows)
    return OrderedBoolean(algebra, spec_order, pts, fr)


def upper_elements(ob: OrderedBoolean) -> Subset:
    """Elements b with: b in P and P <= P' imply b in P'.

    Membership of b in the prime at point k is bit k of b's powerset mask,
    which equals its element index in the materialized free algebra.
    """
    n = ob.algebra.n
    out = 0
    for x in range(n):
        good = True
        for k in bits(x):
            if ob.spec_order.up[k] & ~x:
                good = False
                break
        if good:
            out |= 1 << x
    return Subset(n, out)


def roundtrip_check(d: Structure, bound: int | None = None
                    ) -> tuple[bool, Structure, tuple | None]:
    """Dualize d, rebuild the lattice of clopen upper sets, and check that
    x -> {P : x in P} is an order isomorphism onto the rebuilt lattice.

    Returns (ok, rebuilt lattice, element map as a tuple of target indices).
    """
    res = priestley_of_dlat(d, bound)
    result = dlat_of_priestley(res.space)
    index = {m: i for i, m in enumerate(sorted(res.space.clopen_upper_masks()))}
    if d.n != result.n:
        return False, result, None
    iso = []
    for m in res.embedding:
        if m not in index:
            return False, result, None
        iso.append(index[m])
    if len(set(iso)) != d.n:
        return False, result, None
    for i in range(d.n):
        for j in range(d.n):
            if d.leq(i, j) != (res.embedding[i] & ~res.embedding[j] == 0):
                return False, result, None
    return True, result, tuple(iso)
