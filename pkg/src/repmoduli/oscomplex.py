"""Orbit graphs of the fixed-point-free acyclic complexes, the induced
group presentations, dimension identities, and the supporting exact
integer-homology / group-ring machinery.

Graphs come in two flavours sharing one data type: symbolic graphs carry
only stabilizer specs (enough for the dimension and restriction identities
at any q), while concrete graphs over an enumerated group also carry
explicit stabilizer subgroups and connecting elements g_e, found by
deterministic scans, and support presentations and word evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chars import (
    CharacterTable, centralizer_dim, fusion_for, inner_product,
    restricted_inner_product, rho0_character,
)
from .groups import (
    IDENTITY, GroupModel, NotFound, SubgroupSpec, build_subgroup,
    symbolic_subgroup,
)


@dataclass
class VertexOrbit:
    name: str
    sub: SubgroupSpec


@dataclass
class EdgeOrbit:
    name: str
    sub: SubgroupSpec
    s: int                      # source vertex-orbit index
    w: int                      # target representative vertex-orbit index
    in_tree: bool
    free: bool = False
    g: Optional[tuple] = None   # connecting element; identity on tree edges


@dataclass
class OrbitGraph:
    family: str
    q: int
    k: int
    vertices: list
    edges: list
    model: Optional[GroupModel] = None
    root: int = 0

    @property
    def concrete(self):
        return self.model is not None and self.model.enumerated

    def tree_path(self, v):
        """Edge-orbit indices of the unique tree path root -> v."""
        parent = {self.root: None}
        order = [self.root]
        while order:
            u = order.pop()
            for i, e in enumerate(self.edges):
                if e.in_tree and e.s == u and e.w not in parent:
                    parent[e.w] = (u, i)
                    order.append(e.w)
        if v not in parent:
            raise NotFound(f"vertex {v} not reached by the tree")
        path = []
        while parent[v] is not None:
            u, i = parent[v]
            path.append(i)
            v = u
        return list(reversed(path))


def _stabilizer_plan(family, q):
    """(vertex tags, edge specs) per family; edge spec = (tag, param, s, w,
    in_tree). The closing edge's target depends on the congruence class."""
    if family == "psl2_even":
        vertices = [("borel", 0), ("dihedral_split", 0),
                    ("dihedral_nonsplit", 0)]
        edges = [("cyclic", q - 1, 0, 1, True),
                 ("cyclic", 2, 1, 2, True),
                 ("cyclic", 2, 2, 0, False)]
    elif family == "psl2_odd":
        vertices = [("borel", 0), ("dihedral_split", 0),
                    ("dihedral_nonsplit", 0), ("a4", 0)]
        closing_w = 2 if q % 24 == 11 else 0
        edges = [("cyclic", (q - 1) // 2, 0, 1, True),
                 ("cyclic", 2, 1, 2, True),
                 ("klein4", 0, 2, 3, True),
                 ("cyclic", 3, 3, closing_w, False)]
    elif family == "sz":
        vertices = [("borel", 0), ("dihedral_split", 0),
                    ("torus_normalizer", 1), ("torus_normalizer", -1)]
        edges = [("cyclic", q - 1, 0, 1, True),
                 ("cyclic", 2, 1, 2, True),
                 ("c4", 0, 2, 3, True),
                 ("c4", 0, 3, 0, False)]
    else:
        raise ValueError(f"no orbit graph for family {family!r}")
    return vertices, edges


def build_orbit_graph(family, q, k=0, model=None, ge_choice=0) -> OrbitGraph:
    """The orbit graph with k extra free edge orbits attached at the root.

    With an enumerated `model`, stabilizers and connecting elements are
    concrete; `ge_choice` skips that many valid candidates in every
    connecting-element scan (used to confirm the choice does not matter).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    vtags, especs = _stabilizer_plan(family, q)
    if model is None:
        vertices = [VertexOrbit(f"v{i}", symbolic_subgroup(family, q, t, p))
                    for i, (t, p) in enumerate(vtags)]
        edges = [EdgeOrbit(f"eta{i}", symbolic_subgroup(family, q, t, p),
                           s, w, tree)
                 for i, (t, p, s, w, tree) in enumerate(especs)]
        for i in range(k):
            edges.append(EdgeOrbit(f"eta'{i + 1}",
                                   symbolic_subgroup(family, q, "trivial"),
                                   0, 0, False, free=True))
        return OrbitGraph(family, q, k, vertices, edges)
    return _build_concrete(family, q, k, model, ge_choice)


def _scan(candidates, pred, skip=0):
    for x in candidates:
        if pred(x):
            if skip == 0:
                return x
            skip -= 1
    raise NotFound("deterministic scan found no candidate")


def _build_concrete(family, q, k, model, ge_choice):
    if model.family != family or model.q != q:
        raise ValueError("model does not match the requested family/q")
    orders = model.element_orders
    borel = build_subgroup(model, "borel")
    d_split = build_subgroup(model, "dihedral_split")
    # the edge stabilizer must be the diagonal torus shared by the Borel
    # subgroup and its normalizer, not an arbitrary cyclic subgroup
    torus_order = (q - 1) // 2 if family == "psl2_odd" else q - 1
    f = model.spec
    a = model.canonical((f.generator, 0, 0, f.inv(f.generator)))
    torus = SubgroupSpec("cyclic", torus_order, torus_order,
                         tuple(_cyclic_set(model, a)))
    assert len(torus.elements) == torus_order
    assert set(torus.elements) <= set(borel.elements)
    assert set(torus.elements) <= set(d_split.elements)

    torus_set = set(torus.elements)
    u = _scan(d_split.elements,
              lambda g: orders[g] == 2 and g not in torus_set)
    nonsplit_order = (q + 1) if family == "psl2_even" else (q + 1) // 2

    def extends_to_nonsplit(y):
        if orders[y] != nonsplit_order:
            return False
        ys = _cyclic_set(model, y)
        return model.conjugate(y, u) in ys

    y = _scan(model.elements, extends_to_nonsplit)
    ys = _cyclic_set(model, y)
    nels = tuple(g for g in model.elements if model.conjugate(y, g) in ys)
    d_nonsplit = SubgroupSpec("dihedral_nonsplit", 0, len(nels), nels)
    assert u in set(nels)

    vertices = [VertexOrbit("v0", borel), VertexOrbit("v1", d_split),
                VertexOrbit("v2", d_nonsplit)]
    edges = [EdgeOrbit("eta0", torus, 0, 1, True, g=IDENTITY),
             EdgeOrbit("eta1", SubgroupSpec("cyclic", 2, 2, (IDENTITY, u)),
                       1, 2, True, g=IDENTITY)]
    borel_set = set(borel.elements)

    if family == "psl2_even":
        u2 = _scan(nels, lambda g: orders[g] == 2)
        g2 = _scan(model.elements,
                   lambda g: model.conjugate(u2, model.inv(g)) in borel_set,
                   skip=ge_choice)
        edges.append(EdgeOrbit(
            "eta2", SubgroupSpec("cyclic", 2, 2, (IDENTITY, u2)),
            2, 0, False, g=g2))
    elif family == "psl2_odd":
        y0 = model.power_label(y, (q + 1) // 4)
        assert orders[y0] == 2
        uprime = _scan(nels, lambda g: orders[g] == 2 and g not in ys)
        v4 = (IDENTITY, y0, uprime, model.mul(y0, uprime))
        assert len(set(v4)) == 4
        klein = SubgroupSpec("klein4", 0, 4, v4)
        v4set = set(v4)
        t = _scan(model.elements,
                  lambda g: orders[g] == 3 and
                  all(model.conjugate(x, g) in v4set for x in v4))
        a4els = _closure_set(model, list(v4) + [t])
        assert len(a4els) == 12
        a4 = SubgroupSpec("a4", 0, 12, tuple(a4els))
        vertices.append(VertexOrbit("v3", a4))
        edges.append(EdgeOrbit("eta2", klein, 2, 3, True, g=IDENTITY))
        c3 = SubgroupSpec("cyclic", 3, 3, tuple(_cyclic_set(model, t)))
        if q % 24 == 11:
            target_set, wv = set(nels), 2
        else:
            target_set, wv = borel_set, 0
        g3 = _scan(model.elements,
                   lambda g: model.conjugate(t, model.inv(g)) in target_set,
                   skip=ge_choice)
        edges.append(EdgeOrbit("eta3", c3, 3, wv, False, g=g3))
    else:
        raise ValueError("concrete graphs exist for the PSL2 families only")

    free_candidates = [g for g in model.elements if g not in borel_set]
    for i in range(k):
        edges.append(EdgeOrbit(
            f"eta'{i + 1}", SubgroupSpec("trivial", 0, 1, (IDENTITY,)),
            0, 0, False, free=True, g=free_candidates[i]))
    graph = OrbitGraph(family, q, k, vertices, edges, model)
    validate_graph(graph)
    return graph


def _cyclic_set(model, y):
    out = {IDENTITY}
    acc = y
    while acc not in out:
        out.add(acc)
        acc = model.mul(acc, y)
    return out


def _closure_set(model, gens):
    out = {IDENTITY: None}
    queue = [IDENTITY]
    while queue:
        x = queue.pop()
        for g in gens:
            z = model.mul(x, g)
            if z not in out:
                out[z] = None
                queue.append(z)
    return list(out)


def validate_graph(graph: OrbitGraph):
    """Edge-stabilizer containments and tree shape, on concrete graphs."""
    model = graph.model
    n_tree = sum(1 for e in graph.edges if e.in_tree)
    assert n_tree == len(graph.vertices) - 1, "tree edge count"
    for v in range(len(graph.vertices)):
        graph.tree_path(v)      # raises if the tree does not span
    if not graph.concrete:
        return True
    for e in graph.edges:
        sv = set(graph.vertices[e.s].sub.elements)
        wv = set(graph.vertices[e.w].sub.elements)
        assert set(e.sub.elements) <= sv, f"{e.name}: G_e not in source"
        if e.in_tree:
            assert e.g == IDENTITY, f"{e.name}: tree edge with g != 1"
        gi = model.inv(e.g)
        for x in e.sub.elements:
            assert model.mul(model.mul(gi, x), e.g) in wv, \
                f"{e.name}: conjugated stabilizer leaves target"
    return True


# -- dimension identities --------------------------------------------------------

@dataclass
class ModuliDimensionReport:
    family: str
    q: int
    k: int
    degree: int
    edge_dims: list
    vertex_dims: list
    dim_moduli: int
    dim_gauge: int
    dim_quotient: int
    dim_target: int
    equal: bool

    def to_json(self):
        return {"family": self.family, "q": self.q, "k": self.k,
                "degree": self.degree, "edge_dims": self.edge_dims,
                "vertex_dims": self.vertex_dims,
                "dim_moduli": self.dim_moduli, "dim_gauge": self.dim_gauge,
                "dim_quotient": self.dim_quotient,
                "dim_target": self.dim_target, "equal": self.equal}


def moduli_dimension_report(graph: OrbitGraph, table: CharacterTable,
                            rho0=None) -> ModuliDimensionReport:
    """Compare dim of the gauge quotient with dim of the target group power."""
    if rho0 is None:
        rho0 = rho0_character(table)
    m = rho0.degree
    edge_dims = [centralizer_dim(rho0, fusion_for(table, e.sub))
                 for e in graph.edges]
    vertex_dims = [centralizer_dim(rho0, fusion_for(table, v.sub))
                   for i, v in enumerate(graph.vertices) if i != graph.root]
    dim_m = sum(edge_dims)
    dim_h = sum(vertex_dims)
    target = (graph.k + 1) * m * m
    return ModuliDimensionReport(
        graph.family, graph.q, graph.k, m, edge_dims, vertex_dims,
        dim_m, dim_h, dim_m - dim_h, target, dim_m - dim_h == target)


def euler_identity(graph: OrbitGraph, table: CharacterTable, phi, psi,
                      free_two_cells=1):
    """Character-level Euler relation for an acyclic complex built on the
    graph plus free 2-cell orbits; returns (lhs, rhs, equal)."""
    lhs = inner_product(phi, psi)
    for e in graph.edges:
        lhs += restricted_inner_product(phi, psi, fusion_for(table, e.sub))
    rhs = Fraction(0)
    for v in graph.vertices:
        rhs += restricted_inner_product(phi, psi, fusion_for(table, v.sub))
    rhs += free_two_cells * Fraction(phi.degree * psi.degree)
    return lhs, rhs, lhs == rhs


# -- Brown presentation -----------------------------------------------------------

@dataclass
class BrownPresentation:
    graph: OrbitGraph
    model: GroupModel

    def __post_init__(self):
        if not self.graph.concrete:
            raise ValueError("a presentation needs a concrete graph")

    # words are tuples of symbols ('x', edge_index, +-1) and
    # ('v', vertex_index, element, +-1)

    def x(self, e, exp=1):
        return ("x", e, exp)

    def v(self, vidx, g, exp=1):
        return ("v", vidx, g, exp)

    def phi(self, word):
        """The quotient morphism: x_e -> g_e, i_v(g) -> g."""
        model = self.model
        acc = IDENTITY
        for sym in word:
            if sym[0] == "x":
                _, e, exp = sym
                f = self.graph.edges[e].g
            else:
                _, _, f, exp = sym
            acc = model.mul(acc, f if exp == 1 else model.inv(f))
        return acc

    def relations(self):
        """Type (i) tree relations and type (ii) conjugation relations,
        as (lhs_word, rhs_word) pairs."""
        rels = []
        for ei, e in enumerate(self.graph.edges):
            if e.in_tree:
                rels.append(((self.x(ei),), ()))
            for g in e.sub.elements:
                conj = self.model.mul(
                    self.model.mul(self.model.inv(e.g), g), e.g)
                lhs = (self.x(ei, -1), self.v(e.s, g), self.x(ei))
                rhs = (self.v(e.w, conj),)
                rels.append((lhs, rhs))
        return rels

    def verify(self):
        """phi kills every relation; membership checks run exhaustively."""
        for e in self.graph.edges:
            src = set(self.graph.vertices[e.s].sub.elements)
            tgt = set(self.graph.vertices[e.w].sub.elements)
            gi = self.model.inv(e.g)
            for g in e.sub.elements:
                assert g in src
                assert self.model.mul(self.model.mul(gi, g), e.g) in tgt
        for lhs, rhs in self.relations():
            if self.phi(lhs) != self.phi(rhs):
                return False
        return True


def brown_presentation(graph: OrbitGraph, model: GroupModel) -> BrownPresentation:
    pres = BrownPresentation(graph, model)
    if not pres.verify():
        raise NotFound("phi does not respect the presentation relations")
    return pres


# -- closed edge paths and kernel words --------------------------------------------

def random_closed_path(graph: OrbitGraph, rng, min_len=4, max_len=14):
    """A closed edge path (a_i, e_i, eps_i) based at the root vertex."""
    model = graph.model
    root_set = set(graph.vertices[graph.root].sub.elements)
    while True:
        c, vidx = IDENTITY, graph.root
        legs = []
        for _ in range(max_len):
            twist = rng.choice(graph.vertices[vidx].sub.elements)
            c = model.mul(c, twist)
            options = [(i, +1) for i, e in enumerate(graph.edges)
                       if e.s == vidx]
            options += [(i, -1) for i, e in enumerate(graph.edges)
                        if e.w == vidx]
            ei, eps = rng.choice(options)
            e = graph.edges[ei]
            if eps == 1:
                legs.append((c, ei, 1))
                c, vidx = model.mul(c, e.g), e.w
            else:
                a = model.mul(c, model.inv(e.g))
                legs.append((a, ei, -1))
                c, vidx = a, e.s
            if vidx == graph.root and len(legs) >= min_len and c in root_set:
                return legs


def path_to_word(pres: BrownPresentation, legs):
    """The kernel word of a closed edge path, with stabilizer memberships
    checked along the way."""
    graph, model = pres.graph, pres.model
    word = []
    prefix = IDENTITY
    for a, ei, eps in legs:
        e = graph.edges[ei]
        if eps == 1:
            h = model.mul(model.inv(prefix), a)
            vidx = e.s
            step = model.mul(h, e.g)
        else:
            h = model.mul(model.mul(model.inv(prefix), a), e.g)
            vidx = e.w
            step = model.mul(h, model.inv(e.g))
        assert h in set(graph.vertices[vidx].sub.elements), \
            "path legs do not line up"
        word.append(pres.v(vidx, h))
        word.append(pres.x(ei, eps))
        prefix = model.mul(prefix, step)
    assert prefix in set(graph.vertices[graph.root].sub.elements)
    word.append(pres.v(graph.root, prefix, -1))
    assert pres.phi(tuple(word)) == IDENTITY
    return tuple(word)


def word_inverse(word):
    return tuple((s[0], s[1], s[2], -s[3]) if s[0] == "v"
                 else (s[0], s[1], -s[2]) for s in reversed(word))


def random_word(pres: BrownPresentation, rng, length=8):
    """A random word in the presentation generators (not generally in the
    kernel)."""
    graph = pres.graph
    out = []
    for _ in range(length):
        if rng.random() < 0.5:
            ei = rng.randrange(len(graph.edges))
            out.append(pres.x(ei, rng.choice((1, -1))))
        else:
            vi = rng.randrange(len(graph.vertices))
            g = rng.choice(graph.vertices[vi].sub.elements)
            out.append(pres.v(vi, g, rng.choice((1, -1))))
    return tuple(out)


def random_kernel_word(pres: BrownPresentation, rng):
    """A random element of ker(phi): conjugated closed-path words and
    commutators of such."""
    base = path_to_word(pres, random_closed_path(pres.graph, rng))
    style = rng.randrange(3)
    if style == 0:
        return base
    if style == 1:
        u = random_word(pres, rng, rng.randrange(1, 5))
        return u + base + word_inverse(u)
    other = path_to_word(pres, random_closed_path(pres.graph, rng))
    return base + other + word_inverse(base) + word_inverse(other)


# -- Smith normal form and integer homology -----------------------------------------

def smith_normal_form(mat):
    """(S, U, V) with M = U S V, U and V unimodular, S in Smith form."""
    s, u, _, v, _ = _snf_full(mat)
    return s, u, v


def _snf_full(mat):
    """Returns (S, U, Uinv, V, Vinv) with M = U S V."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    s = [list(row) for row in mat]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    uinv = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]
    vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        for r in range(m):
            u[r][i], u[r][j] = u[r][j], u[r][i]
        uinv[i], uinv[j] = uinv[j], uinv[i]

    def row_add(i, j, k):
        # row_i += k * row_j
        si, sj = s[i], s[j]
        for c in range(n):
            si[c] += k * sj[c]
        for r in range(m):
            u[r][j] -= k * u[r][i]
        ui, uj = uinv[i], uinv[j]
        for c in range(m):
            ui[c] += k * uj[c]

    def row_neg(i):
        s[i] = [-x for x in s[i]]
        for r in range(m):
            u[r][i] = -u[r][i]
        uinv[i] = [-x for x in uinv[i]]

    def col_swap(i, j):
        for r in range(m):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        v[i], v[j] = v[j], v[i]
        for r in range(n):
            vinv[r][i], vinv[r][j] = vinv[r][j], vinv[r][i]

    def col_add(i, j, k):
        # col_j += k * col_i
        for r in range(m):
            s[r][j] += k * s[r][i]
        vi, vj = v[i], v[j]
        for c in range(n):
            vi[c] -= k * vj[c]
        for r in range(n):
            vinv[r][j] += k * vinv[r][i]

    def col_neg(j):
        for r in range(m):
            s[r][j] = -s[r][j]
        v[j] = [-x for x in v[j]]
        for r in range(n):
            vinv[r][j] = -vinv[r][j]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (pivot is None or
                                abs(s[i][j]) < abs(s[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        dirty = False
        for i in range(t + 1, m):
            if s[i][t]:
                k = s[i][t] // s[t][t]
                row_add(i, t, -k)
                dirty = dirty or s[i][t] != 0
        for j in range(t + 1, n):
            if s[t][j]:
                k = s[t][j] // s[t][t]
                col_add(t, j, -k)
                dirty = dirty or s[t][j] != 0
        if dirty:
            continue
        # enforce the divisibility chain
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if s[i][j] % s[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_add(t, bad, 1)
            continue
        if s[t][t] < 0:
            row_neg(t)
        t += 1
    return s, u, uinv, v, vinv


def snf_diagonal(mat):
    s, _, _ = smith_normal_form(mat)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))
            if s[i][i]]


class IntChainComplex:
    """Two integer boundary matrices d2: C2 -> C1 and d1: C1 -> C0."""

    def __init__(self, d2, d1):
        self.d2 = [list(r) for r in d2]
        self.d1 = [list(r) for r in d1]
        self.dim0 = len(self.d1)
        self.dim1 = len(self.d1[0]) if self.d1 else len(self.d2)
        self.dim2 = len(self.d2[0]) if self.d2 else 0
        if self.d2 and len(self.d2) != self.dim1:
            raise ValueError("d2 row count must equal dim C1")
        comp = _mat_mul_int(self.d1, self.d2)
        if any(any(row) for row in comp):
            raise ValueError("d1 . d2 != 0: not a chain complex")

    def homology(self):
        """{degree: (betti, [torsion invariant factors > 1])}."""
        inv1 = snf_diagonal(self.d1) if self.dim0 and self.dim1 else []
        inv2 = snf_diagonal(self.d2) if self.dim1 and self.dim2 else []
        r1, r2 = len(inv1), len(inv2)
        return {
            0: (self.dim0 - r1, [d for d in inv1 if d > 1]),
            1: (self.dim1 - r1 - r2, [d for d in inv2 if d > 1]),
            2: (self.dim2 - r2, []),
        }


def _mat_mul_int(a, b):
    if not a or not b:
        return []
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            x = ai[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    oi[j] += x * bk[j]
    return out


def homology(complex_: IntChainComplex):
    return complex_.homology()


# -- group ring --------------------------------------------------------------------

class GroupRingElement:
    """Integer group-ring element over an enumerated model."""

    __slots__ = ("model", "coeffs")

    def __init__(self, model, coeffs=None):
        self.model = model
        self.coeffs = {g: c for g, c in (coeffs or {}).items() if c}

    @staticmethod
    def unit(model, g=None, c=1):
        return GroupRingElement(model, {model.identity if g is None else g: c})

    @staticmethod
    def norm(model, sub: SubgroupSpec):
        """N(H) = sum of the elements of H."""
        return GroupRingElement(model, {g: 1 for g in sub.elements})

    def __add__(self, other):
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElement(self.model, out)

    def __neg__(self):
        return GroupRingElement(self.model,
                                {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(
                self.model, {g: c * other for g, c in self.coeffs.items()})
        out = {}
        mul = self.model.mul
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                k = mul(g, h)
                out[k] = out.get(k, 0) + c * d
        return GroupRingElement(self.model, out)

    __rmul__ = __mul__

    def bar(self):
        """The involution sum c_g g -> sum c_g g^(-1) (an anti-automorphism)."""
        inv = self.model.inv
        return GroupRingElement(self.model,
                                {inv(g): c for g, c in self.coeffs.items()})

    def augmentation(self):
        return sum(self.coeffs.values())

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and \
            self.coeffs == other.coeffs

    def __repr__(self):
        return f"GroupRingElement({len(self.coeffs)} terms)"


SOLVE_ENTRY_BOUND = 200_000


def solve_group_ring(model, targets, rhs=None):
    """Solve sum_e s_e N(G_e) x_e = rhs (default 1) for x_e in Z[G].

    `targets` is a list of (s_e, sub_e) pairs. Returns the list of x_e, or
    None when the integer system is infeasible.  The unknown for each edge
    ranges over right-coset representatives of G_e, since N(G_e) x only
    depends on cosets.
    """
    if rhs is None:
        rhs = GroupRingElement.unit(model)
    elements = model.elements
    index = {g: i for i, g in enumerate(elements)}
    ng = len(elements)
    columns = []
    col_meta = []
    total_entries = 0
    for ti, (s_e, sub) in enumerate(targets):
        f = s_e * GroupRingElement.norm(model, sub)
        seen = set()
        subset = sub.elements
        for h in elements:
            coset = min(index[model.mul(g, h)] for g in subset)
            if coset in seen:
                continue
            seen.add(coset)
            fh = f * GroupRingElement.unit(model, h)
            vec = [0] * ng
            for g, c in fh.coeffs.items():
                vec[index[g]] = c
            columns.append(vec)
            col_meta.append((ti, h))
        total_entries += ng * len(seen)
        if total_entries > SOLVE_ENTRY_BOUND:
            raise SizeBound(f"group-ring system beyond {SOLVE_ENTRY_BOUND} "
                            "entries")
    mat = [[columns[c][r] for c in range(len(columns))] for r in range(ng)]
    b = [0] * ng
    for g, c in rhs.coeffs.items():
        b[index[g]] = c
    s, _, uinv, _, vinv = _snf_full(mat)
    tb = [sum(uinv[i][j] * b[j] for j in range(ng)) for i in range(ng)]
    ncols = len(columns)
    y = [0] * ncols
    for i in range(ng):
        d = s[i][i] if i < min(ng, ncols) else 0
        if d:
            if tb[i] % d:
                return None
            y[i] = tb[i] // d
        elif tb[i]:
            return None
    x = [sum(vinv[r][i] * y[i] for i in range(ncols)) for r in range(ncols)]
    out = [GroupRingElement(model) for _ in targets]
    for c, (ti, h) in enumerate(col_meta):
        if x[c]:
            out[ti] = out[ti] + GroupRingElement.unit(model, h, x[c])
    check = GroupRingElement(model)
    for (s_e, sub), xe in zip(targets, out):
        check = check + s_e * GroupRingElement.norm(model, sub) * xe
    assert check == rhs, "solver produced a non-solution"
    return out


class SizeBound(ValueError):
    pass
