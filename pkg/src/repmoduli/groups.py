"""Explicit models of SL2(q) and PSL2(q) with conjugacy classification,
subgroup construction and class fusion; a class-data model for Sz(q).

Enumerated models hold every group element as a 4-tuple of int-encoded field
entries (row major, determinant 1).  Conjugacy classes are computed by
breadth-first search under conjugation by transvection generators, then
labelled against canonical representatives; all searches scan in enumeration
order so that every derived choice is reproducible.

Sz(q) is deliberately modelled at class-data level only: every Suzuki
computation downstream is a class function, and fusion comes from stored
tables rather than element enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import NamedTuple, Optional

from .gf import FieldSpec, gf_make


class SizeBoundExceeded(ValueError):
    pass


class NotFound(RuntimeError):
    """A structurally guaranteed subgroup search failed (a bug)."""


ENUMERATION_BOUND = 83


class ClassLabel(NamedTuple):
    kind: str
    index: int = 0

    def __str__(self):
        return self.kind if self.index == 0 else f"{self.kind}^{self.index}"


ID = ClassLabel("id")


# -- matrix helpers ----------------------------------------------------------

def mat_mul(f, x, y):
    a, b, c, d = x
    e, g, h, i = y
    return (
        f.add(f.mul(a, e), f.mul(b, h)),
        f.add(f.mul(a, g), f.mul(b, i)),
        f.add(f.mul(c, e), f.mul(d, h)),
        f.add(f.mul(c, g), f.mul(d, i)),
    )


def mat_inv(f, x):
    # determinant is 1 throughout
    a, b, c, d = x
    return (d, f.neg(b), f.neg(c), a)


def mat_neg(f, x):
    return (f.neg(x[0]), f.neg(x[1]), f.neg(x[2]), f.neg(x[3]))


def mat_det(f, x):
    a, b, c, d = x
    return f.sub(f.mul(a, d), f.mul(b, c))


IDENTITY = (1, 0, 0, 1)


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup selection: tag, optional parameter, and (when the ambient
    group is enumerated) the explicit element tuple."""
    tag: str
    param: int = 0
    order: int = 0
    elements: Optional[tuple] = None

    def name(self):
        if self.tag == "cyclic":
            return f"C{self.param}"
        if self.tag == "torus_normalizer":
            return "C+" if self.param > 0 else "C-"
        return {"borel": "B", "dihedral_split": "D_split",
                "dihedral_nonsplit": "D_nonsplit", "a4": "A4",
                "klein4": "V4", "c4": "C4", "trivial": "1"}[self.tag]


class SmallGroup:
    """Minimal ambient-group interface (elements, mul, inv, identity) for
    generic machinery such as the group-ring engine."""

    def __init__(self, elements, mul, inv, identity):
        self.elements = list(elements)
        self.mul = mul
        self.inv = inv
        self.identity = identity


def cyclic_group_model(n) -> SmallGroup:
    return SmallGroup(range(n), lambda a, b: (a + b) % n,
                      lambda a: (-a) % n, 0)


class GroupModel:
    """Either an enumerated matrix group or an abstract class-data model."""

    identity = IDENTITY

    def __init__(self, family, q, spec=None):
        self.family = family          # psl2_even | sl2_odd | psl2_odd | sz
        self.q = q
        self.spec = spec
        self.elements = None
        self.class_of = None
        self.class_labels = []        # in display order
        self.class_sizes = {}
        self.class_reps = {}
        self.element_orders = None
        self.order = 0
        self._subgroups = {}

    @property
    def enumerated(self):
        return self.elements is not None

    # matrix ops bound to the field of an enumerated model
    def mul(self, x, y):
        out = mat_mul(self.spec, x, y)
        return self.canonical(out)

    def inv(self, x):
        return self.canonical(mat_inv(self.spec, x))

    def canonical(self, x):
        if self.family == "psl2_odd":
            nx = mat_neg(self.spec, x)
            return x if x <= nx else nx
        return x

    def conjugate(self, g, by):
        return self.mul(self.mul(by, g), self.inv(by))

    def order_of(self, g):
        n = 1
        acc = g
        while acc != IDENTITY:
            acc = self.mul(acc, g)
            n += 1
        return n

    def classify(self, g):
        g = self.canonical(g)
        return self.class_of[g]

    def label_order(self, lab: ClassLabel):
        """Order of a representative of the class."""
        if self.enumerated:
            return self.element_orders[self.class_reps[lab]]
        from math import gcd, isqrt
        q = self.q
        if self.family == "sz":
            cyclic = {"pi0": q - 1, "pi1": q + isqrt(2 * q) + 1,
                      "pi2": q - isqrt(2 * q) + 1}
            if lab.kind in cyclic:
                n = cyclic[lab.kind]
                return n // gcd(n, lab.index)
            return {"id": 1, "sigma": 2, "rho": 4, "rho_inv": 4}[lab.kind]
        half = 2 if self.family == "psl2_odd" else 1
        if lab.kind == "a":
            n = (q - 1) // half
            return n // gcd(n, lab.index)
        if lab.kind == "b":
            n = (q + 1) // half
            return n // gcd(n, lab.index)
        p = _prime_power(q)[0]
        fixed = {"id": 1, "z": 2, "bq": 2, "c": p, "d": p,
                 "zc": 2 * p, "zd": 2 * p}
        return fixed[lab.kind]

    def power_label(self, g, e):
        acc = IDENTITY
        base = g
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc


def classify(g, model):
    return model.classify(g)


# -- enumeration -------------------------------------------------------------

def _sl2_elements(f):
    q = f.q
    out = []
    for a in range(q):
        if a == 0:
            for b in range(1, q):
                c = f.neg(f.inv(b))
                for d in range(q):
                    out.append((0, b, c, d))
        else:
            ainv = f.inv(a)
            for b in range(q):
                for c in range(q):
                    d = f.mul(ainv, f.add(1, f.mul(b, c)))
                    out.append((a, b, c, d))
    return out


def _transvection_generators(f):
    gens = []
    lam = 1
    for i in range(f.n):
        lam = f.pow(f.generator, i) if i else 1
        gens.append((1, 0, lam, 1))
        gens.append((1, lam, 0, 1))
    return gens


def _conjugacy_partition(model, gens):
    mul, inv = model.mul, model.inv
    inv_gens = [(g, inv(g)) for g in gens]
    class_of = {}
    sizes = []
    for x in model.elements:
        if x in class_of:
            continue
        cid = len(sizes)
        class_of[x] = cid
        queue = [x]
        count = 1
        while queue:
            y = queue.pop()
            for g, gi in inv_gens:
                z = mul(mul(g, y), gi)
                if z not in class_of:
                    class_of[z] = cid
                    count += 1
                    queue.append(z)
        sizes.append(count)
    return class_of, sizes


def _first_of_order(model, k):
    for g in model.elements:
        if model.element_orders[g] == k:
            return g
    raise NotFound(f"no element of order {k}")


def _label_classes(model):
    f = model.spec
    q = model.q
    cls, sizes = _conjugacy_partition(model, _transvection_generators(f))
    orders = {g: model.order_of(g) for g in model.elements}
    model.element_orders = orders
    nu = f.generator

    a = model.canonical((nu, 0, 0, f.inv(nu)))
    c = model.canonical((1, 0, 1, 1))
    reps = {}

    if model.family == "psl2_even":
        b = _first_of_order_raw(model, orders, q + 1)
        reps[ClassLabel("id")] = IDENTITY
        reps[ClassLabel("c")] = c
        for l in range(1, (q - 2) // 2 + 1):
            reps[ClassLabel("a", l)] = model.power_label(a, l)
        for m in range(1, q // 2 + 1):
            reps[ClassLabel("b", m)] = model.power_label(b, m)
        expected_sizes = {"id": 1, "c": q * q - 1, "a": q * (q + 1),
                          "b": q * (q - 1)}
    elif model.family == "sl2_odd":
        z = model.canonical((f.neg(1), 0, 0, f.neg(1)))
        d = model.canonical((1, 0, nu, 1))
        b = _first_of_order_raw(model, orders, q + 1)
        reps[ClassLabel("id")] = IDENTITY
        reps[ClassLabel("z")] = z
        reps[ClassLabel("c")] = c
        reps[ClassLabel("d")] = d
        reps[ClassLabel("zc")] = model.mul(z, c)
        reps[ClassLabel("zd")] = model.mul(z, d)
        for l in range(1, (q - 3) // 2 + 1):
            reps[ClassLabel("a", l)] = model.power_label(a, l)
        for m in range(1, (q - 1) // 2 + 1):
            reps[ClassLabel("b", m)] = model.power_label(b, m)
        half = (q * q - 1) // 2
        expected_sizes = {"id": 1, "z": 1, "c": half, "d": half, "zc": half,
                          "zd": half, "a": q * (q + 1), "b": q * (q - 1)}
    elif model.family == "psl2_odd":
        d = model.canonical((1, 0, nu, 1))
        b = _first_of_order_raw(model, orders, (q + 1) // 2)
        reps[ClassLabel("id")] = IDENTITY
        reps[ClassLabel("c")] = c
        reps[ClassLabel("d")] = d
        for l in range(1, (q - 3) // 4 + 1):
            reps[ClassLabel("a", l)] = model.power_label(a, l)
        for m in range(1, (q - 3) // 4 + 1):
            reps[ClassLabel("b", m)] = model.power_label(b, m)
        reps[ClassLabel("bq")] = model.power_label(b, (q + 1) // 4)
        half = (q * q - 1) // 2
        expected_sizes = {"id": 1, "c": half, "d": half, "a": q * (q + 1),
                          "b": q * (q - 1), "bq": q * (q - 1) // 2}
    else:
        raise ValueError(model.family)

    cid_to_label = {}
    for label, rep in reps.items():
        cid = cls[rep]
        if cid in cid_to_label:
            raise NotFound(f"representatives of {cid_to_label[cid]} and "
                           f"{label} are conjugate")
        cid_to_label[cid] = label
    if len(cid_to_label) != len(sizes):
        raise NotFound("class count does not match the expected labelling")

    model.class_of = {g: cid_to_label[cid] for g, cid in cls.items()}
    model.class_labels = list(reps)
    model.class_reps = reps
    model.class_sizes = {lab: sizes[cls[rep]] for lab, rep in reps.items()}
    for lab, size in model.class_sizes.items():
        assert size == expected_sizes[lab.kind], (lab, size)
    assert sum(model.class_sizes.values()) == model.order


def _first_of_order_raw(model, orders, k):
    for g in model.elements:
        if orders[g] == k:
            return g
    raise NotFound(f"no element of order {k}")


def enumerate_sl2(spec: FieldSpec) -> GroupModel:
    q = spec.q
    if q > ENUMERATION_BOUND:
        raise SizeBoundExceeded(f"q={q} beyond enumeration bound")
    family = "psl2_even" if spec.p == 2 else "sl2_odd"
    model = GroupModel(family, q, spec)
    model.elements = _sl2_elements(spec)
    model.order = q * (q * q - 1)
    assert len(model.elements) == model.order
    _label_classes(model)
    return model


def enumerate_psl2(spec: FieldSpec) -> GroupModel:
    q = spec.q
    if q > ENUMERATION_BOUND:
        raise SizeBoundExceeded(f"q={q} beyond enumeration bound")
    if spec.p == 2:
        return enumerate_sl2(spec)
    if q % 4 != 3:
        raise ValueError("only q = 3 mod 4 is in scope for PSL2 models")
    model = GroupModel("psl2_odd", q, spec)
    seen = {}
    for x in _sl2_elements(spec):
        cx = x if x <= mat_neg(spec, x) else mat_neg(spec, x)
        if cx not in seen:
            seen[cx] = None
    model.elements = list(seen)
    model.order = q * (q * q - 1) // 2
    assert len(model.elements) == model.order
    _label_classes(model)
    return model


def psl2_model(q):
    """Enumerated PSL2(q) (== SL2(q) in characteristic 2), cached."""
    spec = gf_make(*_prime_power(q))
    return enumerate_psl2(spec)


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            qq = q
            while qq % p == 0:
                qq //= p
                n += 1
            if qq != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, n
    raise ValueError(f"{q} is not a prime power")


# -- subgroups ---------------------------------------------------------------

def _closure(model, gens):
    out = {IDENTITY: None}
    queue = [IDENTITY]
    while queue:
        x = queue.pop()
        for g in gens:
            y = model.mul(x, g)
            if y not in out:
                out[y] = None
                queue.append(y)
    return tuple(out)


def _torus(model):
    f = model.spec
    nu = f.generator
    t = model.canonical((nu, 0, 0, f.inv(nu)))
    return _closure(model, [t]), t


def build_subgroup(model: GroupModel, tag, param=0) -> SubgroupSpec:
    """Concrete subgroup of an enumerated model; deterministic element search."""
    if not model.enumerated:
        raise ValueError("explicit subgroups need an enumerated model")
    key = (tag, param)
    if key in model._subgroups:
        return model._subgroups[key]
    q = model.q
    if tag == "trivial":
        els = (IDENTITY,)
    elif tag == "borel":
        els = tuple(g for g in model.elements if g[2] == 0)
    elif tag == "cyclic":
        g = _first_of_order(model, param)
        els = _closure(model, [g])
    elif tag == "dihedral_split":
        torus, t = _torus(model)
        tset = set(torus)
        els = tuple(g for g in model.elements
                    if model.conjugate(t, g) in tset)
    elif tag == "dihedral_nonsplit":
        n = (q + 1) if model.family == "psl2_even" else (q + 1) // 2
        y = _first_of_order(model, n)
        ys = set(_closure(model, [y]))
        els = tuple(g for g in model.elements if model.conjugate(y, g) in ys)
    elif tag == "klein4":
        els = _find_klein(model)
    elif tag == "a4":
        v4 = set(_find_klein(model))
        t = None
        for g in model.elements:
            if model.element_orders[g] == 3 and \
                    all(model.conjugate(x, g) in v4 for x in v4):
                t = g
                break
        if t is None:
            raise NotFound("no order-3 element normalizing the Klein subgroup")
        els = _closure(model, list(v4) + [t])
    else:
        raise ValueError(f"unsupported subgroup tag {tag!r}")

    expected = _subgroup_order(model.family, q, tag, param)
    if expected and len(els) != expected:
        raise NotFound(f"{tag} subgroup has order {len(els)}, "
                       f"expected {expected}")
    sub = SubgroupSpec(tag, param, len(els), els)
    model._subgroups[key] = sub
    return sub


def _find_klein(model):
    involutions = [g for g in model.elements if model.element_orders[g] == 2]
    for i, u in enumerate(involutions):
        for v in involutions[i + 1:]:
            if model.mul(u, v) == model.mul(v, u):
                return _closure(model, [u, v])
    raise NotFound("no Klein four subgroup")


def subgroup_order(family, q, tag, param=0):
    if tag == "cyclic":
        return param
    if tag == "trivial":
        return 1
    if tag == "klein4":
        return 4
    if tag == "torus_normalizer":
        return 4 * (q + param * isqrt(2 * q) + 1)
    table = {
        "psl2_even": {"borel": q * (q - 1), "dihedral_split": 2 * (q - 1),
                      "dihedral_nonsplit": 2 * (q + 1)},
        "sl2_odd": {"borel": q * (q - 1), "dihedral_split": 2 * (q - 1),
                    "dihedral_nonsplit": 2 * (q + 1)},
        "psl2_odd": {"borel": q * (q - 1) // 2, "dihedral_split": q - 1,
                     "dihedral_nonsplit": q + 1, "a4": 12},
        "sz": {"borel": q * q * (q - 1), "dihedral_split": 2 * (q - 1),
               "c4": 4},
    }
    return table.get(family, {}).get(tag, 0)


_subgroup_order = subgroup_order


def symbolic_subgroup(family, q, tag, param=0) -> SubgroupSpec:
    """Class-data-level subgroup handle (no elements)."""
    return SubgroupSpec(tag, param, subgroup_order(family, q, tag, param))


# -- class fusion -------------------------------------------------------------

def fusion_table(model: GroupModel, sub: SubgroupSpec):
    """|(x) cap L| for every class (x); brute force on enumerated models,
    stored tables otherwise."""
    if model.enumerated and sub.elements is not None:
        counts = {lab: 0 for lab in model.class_labels}
        for g in sub.elements:
            counts[model.class_of[g]] += 1
        return counts
    return stored_fusion(model.family, model.q, sub.tag, sub.param,
                         model.class_labels)


def stored_fusion(family, q, tag, param, labels):
    """The class-fusion rows for the subgroups appearing in the orbit graphs."""
    counts = {lab: 0 for lab in labels}

    def setk(kind, value, index=None):
        for lab in labels:
            if lab.kind == kind and (index is None or lab.index == index):
                counts[lab] = value

    counts[ID] = 1
    if family == "psl2_even":
        if tag == "borel":
            setk("c", q - 1)
            setk("a", 2 * q)
        elif tag == "dihedral_split":
            setk("c", q - 1)
            setk("a", 2)
        elif tag == "dihedral_nonsplit":
            setk("c", q + 1)
            setk("b", 2)
        elif tag == "cyclic" and param == q - 1:
            setk("a", 2)
        elif tag == "cyclic" and param == 2:
            setk("c", 1)
        elif tag == "trivial":
            pass
        else:
            raise ValueError(f"no stored fusion for {family}/{tag}/{param}")
    elif family == "psl2_odd":
        if tag == "borel":
            setk("c", (q - 1) // 2)
            setk("d", (q - 1) // 2)
            setk("a", 2 * q)
        elif tag == "a4":
            setk("bq", 3)
            if q % 3 == 0:
                setk("c", 4)
                setk("d", 4)
            elif q % 3 == 1:
                setk("a", 8, index=(q - 1) // 6)
            else:
                setk("b", 8, index=(q + 1) // 6)
        elif tag == "dihedral_split":
            setk("a", 2)
            setk("bq", (q - 1) // 2)
        elif tag == "dihedral_nonsplit":
            setk("b", 2)
            setk("bq", (q + 3) // 2)
        elif tag == "cyclic" and param == 2:
            setk("bq", 1)
        elif tag == "klein4":
            setk("bq", 3)
        elif tag == "cyclic" and param == (q - 1) // 2:
            setk("a", 2)
        elif tag == "cyclic" and param == 3:
            if q % 3 == 0:
                setk("c", 1)
                setk("d", 1)
            elif q % 3 == 1:
                setk("a", 2, index=(q - 1) // 6)
            else:
                setk("b", 2, index=(q + 1) // 6)
        elif tag == "trivial":
            pass
        else:
            raise ValueError(f"no stored fusion for {family}/{tag}/{param}")
    elif family == "sz":
        r = isqrt(2 * q)
        if tag == "borel":
            setk("sigma", q - 1)
            setk("rho", q * (q - 1) // 2)
            setk("rho_inv", q * (q - 1) // 2)
            setk("pi0", 2 * q * q)
        elif tag == "dihedral_split":
            setk("sigma", q - 1)
            setk("pi0", 2)
        elif tag == "torus_normalizer":
            m = q + param * r + 1
            setk("sigma", m)
            setk("rho", m)
            setk("rho_inv", m)
            setk("pi1" if param > 0 else "pi2", 4)
        elif tag == "cyclic" and param == q - 1:
            setk("pi0", 2)
        elif tag == "c4":
            setk("sigma", 1)
            setk("rho", 1)
            setk("rho_inv", 1)
        elif tag == "cyclic" and param == 2:
            setk("sigma", 1)
        elif tag == "trivial":
            pass
        else:
            raise ValueError(f"no stored fusion for {family}/{tag}/{param}")
    else:
        raise ValueError(f"no stored fusion for family {family!r}")
    return counts


# -- Suzuki class data ---------------------------------------------------------

def twisted_torus_reps(n, q):
    """Minimal representatives of the orbits of <q> on (Z/n)* \\ {0}.

    q^2 = -1 mod n for the Suzuki tori n = q -+ r + 1, so every orbit
    {x, xq, -x, -xq} has size four and there are (n-1)/4 of them.  These
    representatives index both the torus classes and their characters.
    """
    mults = (1, q % n, (-1) % n, (-q) % n)
    assert (q * q + 1) % n == 0
    seen = set()
    reps = []
    for x in range(1, n):
        if x in seen:
            continue
        reps.append(x)
        seen.update((x * m) % n for m in mults)
    assert len(reps) == (n - 1) // 4
    return reps


def suzuki_class_labels(q):
    """Class labels of Sz(q) in display order, q = 2^n with odd n >= 3."""
    n = q.bit_length() - 1
    if q != 1 << n or n % 2 == 0 or n < 3:
        raise ValueError("Sz(q) needs q = 2^n with odd n >= 3")
    r = isqrt(2 * q)
    assert r * r == 2 * q
    labels = [ClassLabel("id"), ClassLabel("sigma"), ClassLabel("rho"),
              ClassLabel("rho_inv")]
    labels += [ClassLabel("pi0", a) for a in range(1, (q - 2) // 2 + 1)]
    labels += [ClassLabel("pi1", b) for b in twisted_torus_reps(q + r + 1, q)]
    labels += [ClassLabel("pi2", c) for c in twisted_torus_reps(q - r + 1, q)]
    assert len(labels) == q + 3
    return labels


def suzuki_model(q) -> GroupModel:
    model = GroupModel("sz", q)
    model.class_labels = suzuki_class_labels(q)
    model.order = q * q * (q * q + 1) * (q - 1)
    return model


def class_data_model(family, q) -> GroupModel:
    """Abstract class-data model: labels and sizes without elements."""
    if family == "sz":
        return suzuki_model(q)
    model = GroupModel(family, q)
    labels = [ClassLabel("id")]
    sizes = {ClassLabel("id"): 1}
    if family == "psl2_even":
        model.order = q * (q * q - 1)
        labels.append(ClassLabel("c"))
        sizes[ClassLabel("c")] = q * q - 1
        for l in range(1, (q - 2) // 2 + 1):
            labels.append(ClassLabel("a", l))
            sizes[ClassLabel("a", l)] = q * (q + 1)
        for m in range(1, q // 2 + 1):
            labels.append(ClassLabel("b", m))
            sizes[ClassLabel("b", m)] = q * (q - 1)
    elif family == "sl2_odd":
        model.order = q * (q * q - 1)
        half = (q * q - 1) // 2
        for kind in ("z", "c", "d", "zc", "zd"):
            labels.append(ClassLabel(kind))
            sizes[ClassLabel(kind)] = 1 if kind == "z" else half
        for l in range(1, (q - 3) // 2 + 1):
            labels.append(ClassLabel("a", l))
            sizes[ClassLabel("a", l)] = q * (q + 1)
        for m in range(1, (q - 1) // 2 + 1):
            labels.append(ClassLabel("b", m))
            sizes[ClassLabel("b", m)] = q * (q - 1)
    elif family == "psl2_odd":
        if q % 4 != 3:
            raise ValueError("PSL2 class data needs q = 3 mod 4")
        model.order = q * (q * q - 1) // 2
        half = (q * q - 1) // 2
        for kind in ("c", "d"):
            labels.append(ClassLabel(kind))
            sizes[ClassLabel(kind)] = half
        for l in range(1, (q - 3) // 4 + 1):
            labels.append(ClassLabel("a", l))
            sizes[ClassLabel("a", l)] = q * (q + 1)
        for m in range(1, (q - 3) // 4 + 1):
            labels.append(ClassLabel("b", m))
            sizes[ClassLabel("b", m)] = q * (q - 1)
        labels.append(ClassLabel("bq"))
        sizes[ClassLabel("bq")] = q * (q - 1) // 2
    else:
        raise ValueError(family)
    model.class_labels = labels
    model.class_sizes = sizes
    assert sum(sizes.values()) == model.order
    return model
