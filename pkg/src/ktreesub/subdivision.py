"""Building-set verification, nested set complexes, join-closure lattices of
nested families, stellar-subdivision sequences with carrier tracking, the
chain-to-factors carrier map, and the exact-arithmetic subdivision verifier.

The carrier map sends a chain of the proper part of the restricted partition
poset to the union of the factors of its members; vertices are placed at
exact rational barycenters of their factor faces.  Verification is the
interior-partition criterion, run face by face in exact arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import exact
from .complexes import SimplicialComplex
from .errors import NotLinearExtension, NotNested, ResourceLimit
from .partitions import Partition, PartitionPoset, enumerate_partitions
from .poset import Poset, product
from .trees import enumerate_ktree_complex


# ---------------------------------------------------------------------------
# building sets and nested set complexes
# ---------------------------------------------------------------------------


def is_building_set(p: Poset, g_indices):
    """Whether the elements ``g_indices`` form a building set of ``p``.

    For every x above the designated minimum, the product of the intervals
    below the maximal G-elements under x must be isomorphic to the interval
    below x by a map fixing the unit tuples.  Returns (ok, witness_label).
    """
    if p.min_index is None:
        raise ValueError("building sets need a designated minimum")
    zero = p.min_index
    gset = sorted(set(g_indices))
    if zero in gset:
        raise ValueError("the minimum cannot belong to a building set")
    for x in range(p.n):
        if x == zero:
            continue
        factors = p.maximal_in([g for g in gset if p.leq[g, x]])
        if factors == [x]:
            continue
        if not factors:
            return False, p.labels[x]
        target = p.interval(zero, x)
        intervals = [p.interval(zero, z) for z in factors]
        prod = product(intervals)
        if prod.n != target.n:
            return False, p.labels[x]
        pins = {}
        if len(factors) == 1:
            pins[prod.index(p.labels[factors[0]])] = target.index(p.labels[factors[0]])
        else:
            zero_label = p.labels[zero]
            for t, z in enumerate(factors):
                unit = tuple(
                    p.labels[z] if s == t else zero_label for s in range(len(factors))
                )
                pins[prod.index(unit)] = target.index(p.labels[z])
        if prod.is_isomorphic(target, pins=pins) is None:
            return False, p.labels[x]
    return True, None


def nested_set_complex(p: Poset, g_indices, keep_apex=False, max_faces=200_000) -> SimplicialComplex:
    """Complex of nonempty G-nested subsets: every antichain of size >= 2 must
    have a unique minimal upper bound lying outside G.

    The maximal element of the poset, when it belongs to G, is removed from
    the vertex set unless ``keep_apex`` is set; it still participates in the
    join-membership tests.
    """
    gset = set(g_indices)
    cand = sorted(gset)
    if p.max_index is not None and p.max_index in gset and not keep_apex:
        cand.remove(p.max_index)
    incomparable = {
        v: {w for w in cand if w != v and not p.leq[v, w] and not p.leq[w, v]}
        for v in cand
    }
    faces = []

    def extension_ok(face, g):
        others = [s for s in face if s in incomparable[g]]
        for size in range(1, len(others) + 1):
            for sub in combinations(others, size):
                if any(w not in incomparable[a] for a, w in combinations(sub, 2)):
                    continue
                mubs = p.minimal_upper_bounds(list(sub) + [g])
                if len(mubs) != 1 or mubs[0] in gset:
                    return False
        return True

    def grow(face):
        start = cand.index(face[-1]) + 1 if face else 0
        for pos in range(start, len(cand)):
            g = cand[pos]
            if extension_ok(face, g):
                new = face + (g,)
                faces.append(frozenset(new))
                if len(faces) > max_faces:
                    raise ResourceLimit(f"nested set complex exceeds {max_faces} faces")
                grow(new)

    grow(())
    labels = [p.labels[i] for i in cand]
    pos = {g: t for t, g in enumerate(cand)}
    return SimplicialComplex(labels, [frozenset(pos[g] for g in f) for f in faces])


# ---------------------------------------------------------------------------
# the join-closure lattice of a nested family
# ---------------------------------------------------------------------------


@dataclass
class SigmaLattice:
    """Join closure of a nested family inside the restricted poset, with the
    induced order.  Carries the base family and the subposet (minimum is the
    all-singletons partition, maximum the join of the family)."""

    family: tuple
    poset: Poset

    @property
    def top(self) -> Partition:
        return self.poset.labels[self.poset.max_index]


def _unique_kjoin(pk: PartitionPoset, idx_set):
    """Index of the unique minimal upper bound; NotNested when ambiguous."""
    if not idx_set:
        return pk.zero_index
    mubs = pk.poset.minimal_upper_bounds(idx_set)
    if len(mubs) != 1:
        labels = [pk.partition(i).text() for i in idx_set]
        raise NotNested(f"{len(mubs)} minimal upper bounds for {labels}")
    return mubs[0]


def sigma_lattice(pk: PartitionPoset, family, check=True) -> SigmaLattice:
    """Close a nested family under joins of subsets inside the restricted
    poset.  With ``check`` the lattice axioms, the factor identity
    a = join(max family below a), the meet formula, and the building-set
    property of the family are all asserted."""
    fam = sorted(set(family), key=Partition.sort_key)
    fidx = [pk.index(x) for x in fam]
    elements = set()
    for r in range(len(fidx) + 1):
        for sub in combinations(fidx, r):
            elements.add(_unique_kjoin(pk, list(sub)))
    order = sorted(elements, key=lambda i: pk.partition(i).sort_key())
    top = _unique_kjoin(pk, fidx)
    sub = pk.poset.subposet(order, min_index=pk.zero_index, max_index=top)
    sigma = SigmaLattice(tuple(fam), sub)
    if check:
        _check_sigma(pk, sigma, fidx)
    return sigma


def _check_sigma(pk: PartitionPoset, sigma: SigmaLattice, fidx):
    sub = sigma.poset
    n = sub.n
    pk_index = [pk.index(lab) for lab in sub.labels]
    for a in range(n):
        below = [i for i in fidx if pk.poset.leq[i, pk_index[a]]]
        expect = _unique_kjoin(pk, pk.poset.maximal_in(below))
        if expect != pk_index[a]:
            raise NotNested(
                f"{sub.labels[a].text()} is not the join of its family factors"
            )
    for a in range(n):
        for b in range(a + 1, n):
            if len(sub.minimal_upper_bounds([a, b])) != 1:
                raise NotNested("join closure is not a lattice (join fails)")
            mlbs = sub.maximal_lower_bounds([a, b])
            if len(mlbs) != 1:
                raise NotNested("join closure is not a lattice (meet fails)")
            shared = [
                i
                for i in fidx
                if pk.poset.leq[i, pk_index[a]] and pk.poset.leq[i, pk_index[b]]
            ]
            formula = _unique_kjoin(pk, pk.poset.maximal_in(shared))
            if formula != pk_index[mlbs[0]]:
                raise NotNested("meet differs from the factor-intersection formula")
    ok, witness = is_building_set(sub, [sub.index(x) for x in sigma.family])
    if not ok:
        raise NotNested(f"family is not a building set (witness {witness})")


# ---------------------------------------------------------------------------
# stellar subdivision sequences
# ---------------------------------------------------------------------------


@dataclass
class BlowupStep:
    new_label: object
    subdivided_face: frozenset  # labels


@dataclass
class BlowupResult:
    initial: SimplicialComplex
    final: SimplicialComplex
    steps: list
    complexes: list
    factor_map: dict  # label -> frozenset of initial vertex labels

    def carrier(self, face_labels) -> frozenset:
        """Carrier of a face of any intermediate complex inside the initial
        one: the union of the factor faces of its vertices."""
        out = set()
        for lab in face_labels:
            out |= self.factor_map[lab]
        return frozenset(out)


def run_blowup(order: Poset, initial: SimplicialComplex, ext_indices, record_intermediate=True) -> BlowupResult:
    """Perform the stellar subdivisions attached to a linear extension.

    ``ext_indices`` must be a linear extension (smallest first) of the induced
    order on the new elements; subdivisions are performed from its top end
    downward, so that each step subdivides the face spanned by the maximal
    current vertices below the new element.  Processing the extension upward
    instead provably breaks the intermediate building sets.
    """
    if not order.is_linear_extension(ext_indices):
        raise NotLinearExtension("supplied sequence is not a linear extension")
    initial_idx = [order.index(lab) for lab in initial.vertices]
    factor_map = {lab: frozenset([lab]) for lab in initial.vertices}
    for h in ext_indices:
        below = [v for v in initial_idx if order.leq[v, h]]
        factor_map[order.labels[h]] = frozenset(
            order.labels[v] for v in order.maximal_in(below)
        )
    current = initial
    complexes = [initial]
    steps = []
    current_idx = list(initial_idx)
    for h in reversed(list(ext_indices)):
        h_label = order.labels[h]
        below = [v for v in current_idx if order.leq[v, h]]
        sigma = frozenset(order.labels[v] for v in order.maximal_in(below))
        steps.append(BlowupStep(h_label, sigma))
        if len(sigma) == 1:
            continue
        current = current.stellar_subdivide(sigma, new_label=h_label)
        current_idx.append(h)
        if record_intermediate:
            complexes.append(current)
    if not record_intermediate:
        complexes = [initial, current]
    return BlowupResult(
        initial=initial,
        final=current,
        steps=steps,
        complexes=complexes,
        factor_map=factor_map,
    )


def blowup_sequence(
    l_poset: Poset,
    h_indices,
    g_indices,
    ext_indices=None,
    keep_apex=True,
    max_faces=200_000,
) -> BlowupResult:
    """Stellar-subdivision sequence from the nested set complex of the smaller
    building set to that of the larger one.

    ``ext_indices`` defaults to the canonical linear extension of G \\ H; any
    valid linear extension yields the same final complex.
    """
    hset, gset = set(h_indices), set(g_indices)
    if not hset <= gset:
        raise ValueError("the starting building set must be contained in the target")
    diff = sorted(gset - hset)
    if ext_indices is None:
        ext_indices = l_poset.linear_extension(diff)
    if set(ext_indices) != set(diff):
        raise NotLinearExtension("extension must enumerate exactly G \\ H")
    start = nested_set_complex(l_poset, hset, keep_apex=keep_apex, max_faces=max_faces)
    return run_blowup(l_poset, start, ext_indices)


# ---------------------------------------------------------------------------
# carrier maps
# ---------------------------------------------------------------------------


@dataclass
class CarrierMap:
    """Face-poset map plus exact rational vertex placement witnessing a
    subdivision.

    ``phi`` maps faces of the source (frozensets of source vertex indices)
    to faces of the target; ``f0`` places each source vertex inside the
    realization of the target, as a sparse dict of barycentric coordinates
    over target vertex indices.  ``p_faces``/``q_faces`` restrict the domain
    for localized maps.
    """

    p_complex: SimplicialComplex
    q_complex: SimplicialComplex
    phi: dict
    f0: dict
    p_faces: frozenset = None
    q_faces: frozenset = None

    def __post_init__(self):
        if self.p_faces is None:
            self.p_faces = frozenset(self.p_complex.faces)
        if self.q_faces is None:
            self.q_faces = frozenset(self.q_complex.faces)

    def p_vertices(self):
        return sorted({v for f in self.p_faces if len(f) == 1 for v in f})

    def localize(self, q_face) -> "CarrierMap":
        """Restriction to the part of the source mapping into one target
        face (the local subdivision of that closed simplex)."""
        q_face = frozenset(q_face)
        p_faces = frozenset(p for p in self.p_faces if self.phi[p] <= q_face)
        q_faces = frozenset(q for q in self.q_faces if q <= q_face)
        verts = {v for f in p_faces for v in f}
        return CarrierMap(
            p_complex=self.p_complex,
            q_complex=self.q_complex,
            phi={p: self.phi[p] for p in p_faces},
            f0={v: dict(self.f0[v]) for v in verts},
            p_faces=p_faces,
            q_faces=q_faces,
        )


def global_carrier_map(k: int, n: int, max_poset_elements=100_000, max_faces=200_000):
    """The carrier map from the order complex of the restricted partition
    poset onto the k-tree complex: chains map to the union of their members'
    factors, vertices to exact barycenters of their factor faces.

    Returns (carrier_map, partition_poset)."""
    m = (n - 1) * k + 1
    pk = enumerate_partitions(m, k, max_elements=max_poset_elements)
    q = enumerate_ktree_complex(n, k, max_faces=max_faces)
    p = pk.poset.order_complex(max_faces=max_faces)
    return carrier_map_from_parts(pk, p, q), pk


def carrier_map_from_parts(pk: PartitionPoset, p: SimplicialComplex, q: SimplicialComplex) -> CarrierMap:
    phi = {}
    for face in p.faces:
        factors = pk.chain_factors([p.vertices[v] for v in face])
        phi[face] = q.face_from_labels(factors)
    f0 = {}
    for v, x in enumerate(p.vertices):
        factors = sorted(pk.factors(x), key=Partition.sort_key)
        w = Fraction(1, len(factors))
        f0[v] = {q.vertex_index(g): w for g in factors}
    return CarrierMap(p_complex=p, q_complex=q, phi=phi, f0=f0)


@dataclass
class CheckFailure:
    check: str
    detail: str
    witness: object = None

    def to_json(self):
        out = {"check": self.check, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class CarrierCheckResult:
    passed: bool
    failures: list
    facet_volumes: dict = field(default_factory=dict)


def verify_carrier_map(cm: CarrierMap) -> CarrierCheckResult:
    """Exact verification that the carrier map witnesses a subdivision.

    Checks, in arbitrary-precision rational arithmetic: well-formedness
    (order preservation, vertex supports, injectivity), nondegeneracy of
    every cell image, pairwise disjointness of open cell images inside each
    target face (linear feasibility), and the volume identity per target
    face.  Failures are collected, not raised.
    """
    failures = []
    p, q = cm.p_complex, cm.q_complex
    label = _face_label_fn(q)

    for face in cm.p_faces:
        if face not in cm.phi:
            failures.append(CheckFailure("phi_total", f"no image for face {sorted(face)}"))
            continue
        img = cm.phi[face]
        if img not in cm.q_faces:
            failures.append(
                CheckFailure("phi_into_target", f"image of {sorted(face)} is not a target face", label(img))
            )
        if len(face) > 1:
            for v in face:
                sub = face - {v}
                if sub in cm.phi and not cm.phi[sub] <= img:
                    failures.append(
                        CheckFailure("phi_order", f"phi not order-preserving at {sorted(face)}")
                    )
                    break

    seen_points = {}
    for v in cm.p_vertices():
        coords = cm.f0.get(v)
        if coords is None:
            failures.append(CheckFailure("vertex_map_total", f"no coordinates for vertex {v}"))
            continue
        support = frozenset(i for i, c in coords.items() if c != 0)
        carrier = cm.phi.get(frozenset([v]))
        if any(c <= 0 for c in coords.values()) or support != carrier:
            failures.append(
                CheckFailure(
                    "vertex_in_carrier_interior",
                    f"vertex {p.vertices[v]!r} not strictly inside its carrier",
                    label(carrier) if carrier else None,
                )
            )
        if sum(coords.values(), Fraction(0)) != 1:
            failures.append(
                CheckFailure("vertex_coordinates_sum", f"coordinates of vertex {v} do not sum to 1")
            )
        key = tuple(sorted(coords.items()))
        if key in seen_points:
            failures.append(
                CheckFailure("vertex_map_injective", f"vertices {seen_points[key]} and {v} coincide")
            )
        seen_points[key] = v

    cells_by_image = {}
    for face in cm.p_faces:
        img = cm.phi.get(face)
        if img in cm.q_faces:
            cells_by_image.setdefault(img, []).append(face)

    facet_volumes = {}
    for qf in sorted(cm.q_faces, key=lambda f: (len(f), tuple(sorted(f)))):
        cells = cells_by_image.get(qf, [])
        if not cells:
            failures.append(
                CheckFailure("carrier_surjective", "target face has no preimage cell", label(qf))
            )
            continue
        qs = sorted(qf)
        qdim = len(qs) - 1
        local_points = {}
        degenerate = set()
        for cell in cells:
            pts = [_localize_point(cm.f0[v], qs) for v in sorted(cell)]
            local_points[cell] = pts
            if exact.affine_dim(pts) != len(cell) - 1:
                degenerate.add(cell)
                failures.append(
                    CheckFailure(
                        "cell_nondegenerate",
                        f"cell {sorted(cell)} maps to a degenerate simplex",
                        label(qf),
                    )
                )
        for c1, c2 in combinations(sorted(cells, key=lambda f: (len(f), tuple(sorted(f)))), 2):
            if c1 in degenerate or c2 in degenerate:
                continue
            witness = exact.open_simplices_intersect(local_points[c1], local_points[c2])
            if witness is not None:
                failures.append(
                    CheckFailure(
                        "interiors_disjoint",
                        f"open images of cells {sorted(c1)} and {sorted(c2)} overlap",
                        {
                            "target_face": label(qf),
                            "point": [str(x) for x in witness],
                        },
                    )
                )
        total = Fraction(0)
        for cell in cells:
            if len(cell) - 1 == qdim and cell not in degenerate:
                total += exact.simplex_volume_ratio(local_points[cell])
        facet_volumes[qf] = total
        if total != 1:
            failures.append(
                CheckFailure(
                    "volume_partition",
                    f"cell volumes sum to {total} of the target face",
                    label(qf),
                )
            )

    return CarrierCheckResult(
        passed=not failures,
        failures=failures,
        facet_volumes={label(f): str(v) for f, v in facet_volumes.items()},
    )


def _localize_point(coords, q_sorted):
    return tuple(coords.get(i, Fraction(0)) for i in q_sorted)


def _face_label_fn(q: SimplicialComplex):
    def fn(face):
        if face is None:
            return None
        return "+".join(
            lab.text() if isinstance(lab, Partition) else str(lab)
            for lab in sorted(
                (q.vertices[i] for i in face),
                key=lambda l: l.sort_key() if isinstance(l, Partition) else str(l),
            )
        )

    return fn


def build_local_carrier_maps(cm: CarrierMap) -> dict:
    """One localized carrier map per target face."""
    return {qf: cm.localize(qf) for qf in sorted(cm.q_faces, key=lambda f: (len(f), tuple(sorted(f))))}


def check_compatibility(family: dict) -> CarrierCheckResult:
    """Compatibility of a family of local carrier maps indexed by target
    faces: each local map must verify, the local sources must intersect in
    the source attached to the intersection face, and the vertex maps must
    agree on shared vertices."""
    failures = []
    for qf, cm in family.items():
        res = verify_carrier_map(cm)
        if not res.passed:
            failures.append(
                CheckFailure(
                    "local_carrier_map",
                    f"local map at {sorted(qf)} fails verification",
                    [f.to_json() for f in res.failures[:3]],
                )
            )
    keys = sorted(family, key=lambda f: (len(f), tuple(sorted(f))))
    for q1, q2 in combinations(keys, 2):
        cm1, cm2 = family[q1], family[q2]
        v1 = set(cm1.p_vertices())
        v2 = set(cm2.p_vertices())
        for v in sorted(v1 & v2):
            if cm1.f0[v] != cm2.f0[v]:
                failures.append(
                    CheckFailure(
                        "vertex_maps_agree",
                        f"vertex {v} placed differently under faces {sorted(q1)} and {sorted(q2)}",
                    )
                )
        inter = frozenset(q1 & q2)
        shared_faces = cm1.p_faces & cm2.p_faces
        if inter in family:
            expected = family[inter].p_faces
        else:
            expected = frozenset()
        if shared_faces != expected:
            failures.append(
                CheckFailure(
                    "intersection_identity",
                    f"sources over {sorted(q1)} and {sorted(q2)} do not intersect in the source over {sorted(inter)}",
                )
            )
    return CarrierCheckResult(passed=not failures, failures=failures)


# ---------------------------------------------------------------------------
# end-to-end pipeline
# ---------------------------------------------------------------------------


@dataclass
class SubdivisionReport:
    """Outcome of the end-to-end subdivision verification for one instance."""

    instance: dict
    sizes: dict
    f_vectors: dict
    extension_used: list
    extensions_checked: int
    checks: list
    homology: dict
    facet_volumes: dict
    verdict: str
    equivariance: dict = None

    def to_json(self):
        out = {
            "instance": self.instance,
            "sizes": self.sizes,
            "f_vectors": self.f_vectors,
            "extension_used": self.extension_used,
            "extensions_checked": self.extensions_checked,
            "checks": self.checks,
            "homology": self.homology,
            "facet_volumes": self.facet_volumes,
            "verdict": self.verdict,
        }
        if self.equivariance is not None:
            out["equivariance"] = self.equivariance
        return out


def _homology_json(groups):
    return [[betti, list(torsion)] for betti, torsion in groups]


def _distinct_extensions(poset: Poset, subset, count, seed):
    """The canonical extension plus seeded variants, distinct when possible."""
    exts = [tuple(poset.linear_extension(subset))]
    attempt = 0
    while len(exts) < count and attempt < 50 * count:
        attempt += 1
        cand = tuple(
            poset.linear_extension(subset, policy="seeded-random", seed=seed + attempt)
        )
        if cand not in exts:
            exts.append(cand)
    while len(exts) < count:
        exts.append(exts[0])
    return exts


def verify_theorem(
    k: int,
    n: int,
    extensions: int = 1,
    seed: int = 0,
    max_poset_elements: int = 5_000,
    max_faces: int = 200_000,
) -> SubdivisionReport:
    """Full verification that the order complex of the restricted partition
    poset subdivides the k-tree complex for one instance.

    Builds both complexes, runs the stellar sequence for the requested number
    of distinct linear extensions, compares every final complex with the
    order complex label by label, verifies the global carrier map and the
    compatibility of its localizations in exact arithmetic, and compares
    Euler characteristics and reduced homology in all degrees.
    """
    if k < 1 or n < 3:
        raise ValueError("need k >= 1 and n >= 3")
    m = (n - 1) * k + 1
    pk = enumerate_partitions(m, k, max_elements=max_poset_elements)
    q = enumerate_ktree_complex(n, k, max_faces=max_faces)
    delta = pk.poset.order_complex(max_faces=max_faces)
    checks = []

    def record(name, ok, witness=None):
        entry = {"name": name, "pass": bool(ok)}
        if witness is not None:
            entry["witness"] = witness
        checks.append(entry)

    g_idx = set(pk.g_indices())
    ext_pool = [i for i in pk.poset.proper_indices() if i not in g_idx]
    exts = _distinct_extensions(pk.poset, ext_pool, extensions, seed)
    finals = []
    for ext in exts:
        result = run_blowup(pk.poset, q, list(ext), record_intermediate=False)
        finals.append(result.final)
    for t, fin in enumerate(finals):
        same = fin == delta
        record(
            f"stellar_sequence_matches_order_complex[{t}]",
            same,
            None if same else "final complex differs from the order complex",
        )
    if len(finals) > 1:
        identical = all(fin == finals[0] for fin in finals[1:])
        record("linear_extension_independence", identical)

    if len(delta.vertices) <= 64:
        iso = finals[0].is_isomorphic(delta)
        record("abstract_isomorphism", iso is not None)

    cm = carrier_map_from_parts(pk, delta, q)
    factor_faces_ok = all(img in q.faces for img in cm.phi.values())
    record("chain_factors_are_faces", factor_faces_ok)
    carrier_res = verify_carrier_map(cm)
    record(
        "carrier_map_partition",
        carrier_res.passed,
        None if carrier_res.passed else [f.to_json() for f in carrier_res.failures[:5]],
    )
    compat_res = check_compatibility(build_local_carrier_maps(cm))
    record(
        "compatibility",
        compat_res.passed,
        None if compat_res.passed else [f.to_json() for f in compat_res.failures[:5]],
    )

    chi_equal = delta.euler_characteristic() == q.euler_characteristic()
    record("euler_characteristic_equal", chi_equal)
    h_delta = delta.reduced_homology()
    h_q = q.reduced_homology()
    record(
        "homology_equal_all_degrees",
        h_delta == h_q,
        None if h_delta == h_q else {"source": _homology_json(h_delta), "target": _homology_json(h_q)},
    )

    verdict = "pass" if all(c["pass"] for c in checks) else "fail"
    return SubdivisionReport(
        instance={"k": k, "n": n, "m": m},
        sizes={
            "poset_elements": pk.poset.n,
            "proper_elements": len(pk.poset.proper_indices()),
            "source_vertices": len(delta.vertices),
            "target_vertices": len(q.vertices),
        },
        f_vectors={"source": list(delta.f_vector()), "target": list(q.f_vector())},
        extension_used=[pk.partition(i).text() for i in exts[0]],
        extensions_checked=len(exts),
        checks=checks,
        homology={"source": _homology_json(h_delta), "target": _homology_json(h_q)},
        facet_volumes=carrier_res.facet_volumes,
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# symmetric-group equivariance
# ---------------------------------------------------------------------------


@dataclass
class EquivarianceReport:
    passed: bool
    permutations_checked: int
    top_rank_source: int
    top_rank_target: int
    failures: list

    def to_json(self):
        return {
            "passed": self.passed,
            "permutations_checked": self.permutations_checked,
            "top_rank": {"source": self.top_rank_source, "target": self.top_rank_target},
            "failures": self.failures[:10],
        }


def check_equivariance(k: int, n: int, perms="all", seed: int = 0,
                       max_poset_elements: int = 5_000, max_faces: int = 200_000) -> EquivarianceReport:
    """Leaf-relabelling equivariance of the whole carrier map.

    For each tested permutation both complexes must be setwise invariant and
    the factor map must commute with the relabelling on every chain.  Top
    reduced homology ranks of the two complexes are compared as well.
    """
    m = (n - 1) * k + 1
    pk = enumerate_partitions(m, k, max_elements=max_poset_elements)
    q = enumerate_ktree_complex(n, k, max_faces=max_faces)
    delta = pk.poset.order_complex(max_faces=max_faces)
    if perms == "all":
        perm_list = list(permutations(range(1, m + 1)))
    else:
        rng = random.Random(seed)
        universe = list(permutations(range(1, m + 1)))
        count = min(int(perms), len(universe))
        perm_list = rng.sample(universe, count)
    phi_cache = {face: pk.chain_factors([delta.vertices[v] for v in face]) for face in delta.faces}
    failures = []
    for pi in perm_list:
        relabel = lambda x: x.permute(pi)
        if delta.apply_permutation(relabel) != delta:
            failures.append({"perm": list(pi), "detail": "order complex not invariant"})
            continue
        if q.apply_permutation(relabel) != q:
            failures.append({"perm": list(pi), "detail": "k-tree complex not invariant"})
            continue
        for face, factors in phi_cache.items():
            image_chain = frozenset(
                delta.vertex_index(delta.vertices[v].permute(pi)) for v in face
            )
            lhs = phi_cache[image_chain]
            rhs = frozenset(x.permute(pi) for x in factors)
            if lhs != rhs:
                failures.append(
                    {
                        "perm": list(pi),
                        "detail": "carrier map does not commute with the relabelling",
                        "chain": [delta.vertices[v].text() for v in sorted(face)],
                    }
                )
                break
    top = n - 3
    h_delta = delta.reduced_homology()
    h_q = q.reduced_homology()
    rank_d = h_delta[top][0] if 0 <= top < len(h_delta) else 0
    rank_q = h_q[top][0] if 0 <= top < len(h_q) else 0
    passed = not failures and rank_d == rank_q
    return EquivarianceReport(
        passed=passed,
        permutations_checked=len(perm_list),
        top_rank_source=rank_d,
        top_rank_target=rank_q,
        failures=failures,
    )
