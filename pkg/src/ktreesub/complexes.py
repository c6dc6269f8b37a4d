"""Abstract simplicial complexes on labelled vertices: f-vectors, stellar
subdivision, reduced integer homology via Smith normal form, isomorphism,
and label-level group actions."""

from __future__ import annotations

import numpy as np

from . import _kernels as kernels
from .errors import FaceNotPresent, ResourceLimit
from .poset import Poset


class SimplicialComplex:
    """Family of nonempty faces over an indexed vertex list, downward closed.

    Faces are stored as frozensets of vertex indices; the empty face is
    implicit.  Complexes are immutable.
    """

    def __init__(self, vertex_labels, faces, close_downward=False):
        self.vertices = list(vertex_labels)
        self._index = {lab: i for i, lab in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise ValueError("vertex labels must be pairwise distinct")
        fs = {frozenset(f) for f in faces}
        fs.discard(frozenset())
        if close_downward:
            fs = _downward_closure(fs)
        self.faces = frozenset(fs)
        by_dim = {}
        touched = set()
        for f in self.faces:
            by_dim.setdefault(len(f) - 1, []).append(f)
            touched |= f
        for d in by_dim:
            by_dim[d].sort(key=lambda f: tuple(sorted(f)))
        self._by_dim = by_dim
        if not close_downward:
            for f in self.faces:
                if len(f) > 1:
                    for v in f:
                        if f - {v} not in self.faces:
                            raise ValueError("face family is not downward closed")
        if touched != set(range(len(self.vertices))):
            missing = set(range(len(self.vertices))) - touched
            raise ValueError(f"vertices {sorted(missing)} appear in no face")

    @classmethod
    def from_label_faces(cls, faces, close_downward=True):
        """Build from faces given as iterables of labels; the vertex list is
        collected in sorted label order."""
        faces = [tuple(f) for f in faces]
        labels = sorted({v for f in faces for v in f}, key=_label_key)
        idx = {lab: i for i, lab in enumerate(labels)}
        return cls(labels, [frozenset(idx[v] for v in f) for f in faces], close_downward)

    @classmethod
    def empty(cls):
        return cls([], [])

    # ------------------------------------------------------------------
    # basic invariants
    # ------------------------------------------------------------------

    def dimension(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def f_vector(self) -> tuple:
        d = self.dimension()
        return tuple(len(self._by_dim.get(i, ())) for i in range(d + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * fi for i, fi in enumerate(self.f_vector()))

    def facets(self):
        maximal = []
        for f in sorted(self.faces, key=lambda f: (-len(f), tuple(sorted(f)))):
            if not any(f < g for g in maximal):
                maximal.append(f)
        return sorted(maximal, key=lambda f: tuple(sorted(f)))

    def is_pure(self) -> bool:
        if not self.faces:
            return True
        d = self.dimension()
        return all(len(f) - 1 == d for f in self.facets())

    def faces_of_dim(self, d: int):
        return list(self._by_dim.get(d, ()))

    def n_vertices(self) -> int:
        return len(self.vertices)

    def has_face_labels(self, labels) -> bool:
        try:
            f = frozenset(self._index[l] for l in labels)
        except KeyError:
            return False
        return f in self.faces

    def face_from_labels(self, labels):
        return frozenset(self._index[l] for l in labels)

    def vertex_index(self, label) -> int:
        return self._index[label]

    def labels_of(self, face):
        return frozenset(self.vertices[i] for i in face)

    # ------------------------------------------------------------------
    # stellar subdivision
    # ------------------------------------------------------------------

    def stellar_subdivide(self, face_labels, new_label=None) -> "SimplicialComplex":
        """Stellar subdivision at the face with the given vertex labels.

        Subdividing a vertex is the identity.  The new vertex is labelled by
        ``new_label`` (default: the tuple of the face's labels in sorted
        order).
        """
        sigma = frozenset(self._index[l] for l in face_labels)
        if sigma not in self.faces:
            raise FaceNotPresent(f"face {sorted(face_labels, key=_label_key)} not in complex")
        if len(sigma) == 1:
            return self
        if new_label is None:
            new_label = tuple(sorted((self.vertices[i] for i in sigma), key=_label_key))
        if new_label in self._index:
            raise ValueError(f"label {new_label!r} already names a vertex")
        labels = self.vertices + [new_label]
        v = len(self.vertices)
        keep = [f for f in self.faces if not sigma <= f]
        added = []
        proper_subsets = _all_subsets(sigma) - {sigma}
        for gamma in self.faces:
            if sigma <= gamma:
                rest = gamma - sigma
                for delta in proper_subsets:
                    added.append(rest | delta | {v})
        return SimplicialComplex(labels, keep + added)

    # ------------------------------------------------------------------
    # homology
    # ------------------------------------------------------------------

    def boundary_matrix(self, d: int):
        """Integer matrix of the boundary map from d-faces to (d-1)-faces;
        d = 0 gives the augmentation row."""
        if d == 0:
            return [[1] * len(self._by_dim.get(0, ()))]
        rows = self._by_dim.get(d - 1, [])
        cols = self._by_dim.get(d, [])
        rpos = {f: i for i, f in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, f in enumerate(cols):
            vs = sorted(f)
            for t, x in enumerate(vs):
                sub = frozenset(vs[:t] + vs[t + 1 :])
                mat[rpos[sub]][j] = (-1) ** t
        return mat

    def reduced_homology(self):
        """Per-degree reduced integer homology: list of (betti, torsion
        coefficients) for degrees 0..dim."""
        dim = self.dimension()
        if dim < 0:
            return []
        ranks = {}
        torsion_by_deg = {}
        for d in range(dim + 2):
            if d > dim:
                ranks[d] = 0
                continue
            mat = self.boundary_matrix(d)
            if not mat or not mat[0]:
                ranks[d] = 0
                torsion_by_deg[d - 1] = []
                continue
            diag = kernels.snf_diagonal(np.array(mat, dtype=np.int64))
            ranks[d] = sum(1 for x in diag if x != 0)
            torsion_by_deg[d - 1] = [int(x) for x in diag if x > 1]
        out = []
        for d in range(dim + 1):
            n_d = len(self._by_dim.get(d, ()))
            betti = n_d - ranks[d] - ranks.get(d + 1, 0)
            out.append((betti, tuple(torsion_by_deg.get(d, ()))))
        return out

    # ------------------------------------------------------------------
    # comparisons and actions
    # ------------------------------------------------------------------

    def label_faces(self):
        """Faces as frozensets of labels (canonical comparison form)."""
        return frozenset(frozenset(self.vertices[i] for i in f) for f in self.faces)

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialComplex)
            and set(self.vertices) == set(other.vertices)
            and self.label_faces() == other.label_faces()
        )

    def __hash__(self):
        return hash(self.label_faces())

    def apply_permutation(self, relabel) -> "SimplicialComplex":
        """Image under a label-level action; the face structure is carried
        along vertex by vertex."""
        new_labels = [relabel(l) for l in self.vertices]
        return SimplicialComplex(new_labels, self.faces)

    def restrict_to_faces(self, faces) -> "SimplicialComplex":
        """Subcomplex on a downward-closed subset of faces (vertex labels are
        kept; unused vertices are dropped)."""
        faces = {frozenset(f) for f in faces}
        used = sorted({v for f in faces for v in f})
        remap = {v: i for i, v in enumerate(used)}
        return SimplicialComplex(
            [self.vertices[v] for v in used],
            [frozenset(remap[v] for v in f) for f in faces],
        )

    def face_poset(self) -> Poset:
        """Poset of nonempty faces ordered by inclusion (labels are frozensets
        of vertex labels)."""
        faces = sorted(self.faces, key=lambda f: (len(f), tuple(sorted(f))))
        n = len(faces)
        leq = np.zeros((n, n), dtype=bool)
        for i, f in enumerate(faces):
            for j, g in enumerate(faces):
                leq[i, j] = f <= g
        return Poset([self.labels_of(f) for f in faces], leq, validate=False)

    # ------------------------------------------------------------------
    # isomorphism
    # ------------------------------------------------------------------

    def _vertex_colors(self):
        n = len(self.vertices)
        incident = [[] for _ in range(n)]
        for f in self.faces:
            for v in f:
                incident[v].append(f)
        base = []
        for v in range(n):
            counts = {}
            for f in incident[v]:
                counts[len(f) - 1] = counts.get(len(f) - 1, 0) + 1
            base.append(tuple(sorted(counts.items())))
        colors = base
        edges = [f for f in self.faces if len(f) == 2]
        nbrs = [[] for _ in range(n)]
        for e in edges:
            a, b = sorted(e)
            nbrs[a].append(b)
            nbrs[b].append(a)
        for _ in range(2):
            sigs = [
                (colors[v], tuple(sorted(colors[w] for w in nbrs[v]))) for v in range(n)
            ]
            # rank signatures so that colors stay comparable across complexes
            rank = {s: r for r, s in enumerate(sorted(set(sigs)))}
            colors = [rank[s] for s in sigs]
        return colors, incident

    def is_isomorphic(self, other: "SimplicialComplex"):
        """A vertex bijection carrying faces to faces bijectively, as a
        label-to-label dict, or None."""
        if len(self.vertices) != len(other.vertices):
            return None
        if self.f_vector() != other.f_vector():
            return None
        ca, inca = self._vertex_colors()
        cb, _ = other._vertex_colors()
        if sorted(ca) != sorted(cb):
            return None
        by_color = {}
        for j, c in enumerate(cb):
            by_color.setdefault(c, []).append(j)
        n = len(self.vertices)
        mapping = [-1] * n
        used = [False] * len(other.vertices)
        order = sorted(range(n), key=lambda v: (len(by_color.get(ca[v], ())), v))

        def consistent(v, w):
            for f in inca[v]:
                img = set()
                complete = True
                for x in f:
                    y = w if x == v else mapping[x]
                    if y == -1:
                        complete = False
                        break
                    img.add(y)
                if complete and frozenset(img) not in other.faces:
                    return False
            return True

        def search(pos):
            if pos == n:
                return True
            v = order[pos]
            for w in by_color.get(ca[v], ()):
                if not used[w] and consistent(v, w):
                    mapping[v] = w
                    used[w] = True
                    if search(pos + 1):
                        return True
                    mapping[v] = -1
                    used[w] = False
            return False

        if not search(0):
            return None
        return {self.vertices[v]: other.vertices[mapping[v]] for v in range(n)}

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json(self, label_fn=None):
        fn = label_fn if label_fn is not None else (lambda x: x)
        return {
            "vertices": [fn(l) for l in self.vertices],
            "facets": sorted([sorted(f) for f in self.facets()]),
        }

    @classmethod
    def from_json(cls, data, label_fn=None):
        fn = label_fn if label_fn is not None else (lambda x: x)
        labels = [fn(l) for l in data["vertices"]]
        return cls(labels, [frozenset(f) for f in data["facets"]], close_downward=True)

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector()})"


def _downward_closure(faces):
    out = set()
    stack = list(faces)
    while stack:
        f = stack.pop()
        if f in out or not f:
            continue
        out.add(f)
        if len(f) > 1:
            for v in f:
                g = f - {v}
                if g not in out:
                    stack.append(g)
    return out


def _all_subsets(s):
    s = sorted(s)
    out = [frozenset()]
    for x in s:
        out += [f | {x} for f in out]
    return set(out)


def _label_key(label):
    """Deterministic sort key for mixed label types."""
    return (type(label).__name__, repr(label) if not isinstance(label, (int, str)) else label)


def check_boundary_squares_to_zero(K: SimplicialComplex) -> bool:
    """d∘d = 0 for every consecutive boundary pair (test oracle hook)."""
    for d in range(0, K.dimension()):
        a = np.array(K.boundary_matrix(d), dtype=np.int64)
        b = np.array(K.boundary_matrix(d + 1), dtype=np.int64)
        if a.size and b.size and np.any(a @ b):
            return False
    return True
