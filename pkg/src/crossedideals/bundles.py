"""Fell bundles over inverse semigroups, their cross-sectional algebras,
and crossed products of function algebras by ample systems.

A bundle carries one fiber per semigroup element, bilinear multiplication
maps mu_{s,t}: B_s x B_t -> B_{st}, and injective inclusion maps
j_{t,s}: B_s -> B_t for order pairs s <= t.  The cross-sectional algebra
is the direct sum of the fibers; dividing by the redundancy ideal N
(spanned by b - j(b) across order pairs) collapses the inclusions and
yields the algebra whose ideals the rest of the package studies.

The crossed product of the function algebra K^X by an ample system is the
cross-sectional algebra of the semidirect product bundle of the induced
action alpha_s(f) = f o theta_{s*}; its basis is labeled by pairs
(point y, element s) with y in the range of theta_s.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .dynsys import AmpleSystem
from .exactlin import (
    Field,
    FiniteAlgebra,
    QuotientMap,
    Representation,
    StructureError,
    Subspace,
    ideal_generate,
    is_ideal,
    mat_from_columns,
    mat_mul,
    rref,
    unit_vector,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
    zero_vector,
)
from .semigroups import InverseSemigroup
from .validation import ValidationReport


class NotAFellBundle(StructureError):
    """Semidirect construction refused: a coefficient ideal is not
    idempotent, so no Fell bundle exists for this action."""

    def __init__(self, element: int, element_name: str, product_span: Subspace):
        self.element = element
        self.product_span = product_span
        super().__init__(
            "non-idempotent-ideal", (element_name,),
            f"ideal attached to {element_name} is not idempotent: its square spans "
            f"only {product_span.dim} of {product_span.ambient_dim} ambient dimensions "
            f"(need the full ideal back)")


class FellBundle:
    """Structure constants of a Fell bundle over an inverse semigroup."""

    def __init__(self, semigroup: InverseSemigroup, field: Field, fiber_labels,
                 mu, order_maps):
        self.semigroup = semigroup
        self.field = field
        self.fiber_labels = tuple(tuple(lbls) for lbls in fiber_labels)
        if len(self.fiber_labels) != semigroup.size:
            raise ValueError("one fiber per semigroup element required")
        self.mu = {}
        for (s, t), entries in mu.items():
            st = semigroup.product(s, t)
            cleaned = {}
            for (i, j), terms in entries.items():
                if not (0 <= i < self.fiber_dim(s) and 0 <= j < self.fiber_dim(t)):
                    raise ValueError(f"mu index out of range at ({s},{t})")
                kept = tuple((k, c) for k, c in sorted(terms) if not field.is_zero(c))
                for k, _ in kept:
                    if not 0 <= k < self.fiber_dim(st):
                        raise ValueError(f"mu target out of range at ({s},{t})")
                if kept:
                    cleaned[(i, j)] = kept
            if cleaned:
                self.mu[(s, t)] = cleaned
        order = set(semigroup.order_pairs())
        self.order_maps = {}
        for (t, s), matrix in order_maps.items():
            if (s, t) not in order:
                raise ValueError(f"inclusion given for a non-order pair ({s},{t})")
            m = tuple(tuple(row) for row in matrix)
            if len(m) != self.fiber_dim(t) or any(len(r) != self.fiber_dim(s) for r in m):
                raise ValueError(f"inclusion matrix shape mismatch at ({t},{s})")
            self.order_maps[(t, s)] = m
        for (s, t) in order:
            if (t, s) not in self.order_maps:
                raise ValueError(f"missing inclusion for order pair {s} <= {t}")

    def fiber_dim(self, s: int) -> int:
        return len(self.fiber_labels[s])

    def mu_terms(self, s: int, t: int, i: int, j: int) -> tuple:
        return self.mu.get((s, t), {}).get((i, j), ())

    def mu_vector(self, s: int, t: int, i: int, j: int) -> tuple:
        st = self.semigroup.product(s, t)
        v = [self.field.zero] * self.fiber_dim(st)
        for k, c in self.mu_terms(s, t, i, j):
            v[k] = self.field.add(v[k], c)
        return tuple(v)

    def mu_apply(self, s: int, t: int, u, v) -> tuple:
        """mu_{s,t} on arbitrary fiber vectors."""
        f = self.field
        st = self.semigroup.product(s, t)
        out = [f.zero] * self.fiber_dim(st)
        for i, a in enumerate(u):
            if f.is_zero(a):
                continue
            for j, b in enumerate(v):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in self.mu_terms(s, t, i, j):
                    out[k] = f.add(out[k], f.mul(ab, c))
        return tuple(out)

    def include(self, t: int, s: int, v) -> tuple:
        """j_{t,s} applied to a vector of B_s (s <= t)."""
        if s == t:
            return tuple(v)
        m = self.order_maps[(t, s)]
        return tuple(
            sum_terms(self.field, (self.field.mul(row[i], v[i]) for i in range(len(v))))
            for row in m
        )

    def validate(self) -> ValidationReport:
        sg, f = self.semigroup, self.field
        n = sg.size
        # inclusions are injective
        for (t, s), m in self.order_maps.items():
            cols = [tuple(m[r][c] for r in range(len(m))) for c in range(self.fiber_dim(s))]
            _, rank = rref(f, cols)
            if rank != self.fiber_dim(s):
                return ValidationReport.failed("inclusion-injective", (sg.name(s), sg.name(t)))
        # multiplication is associative fiberwise
        for r in range(n):
            for s in range(n):
                rs = sg.product(r, s)
                for t in range(n):
                    st = sg.product(s, t)
                    for i in range(self.fiber_dim(r)):
                        for j in range(self.fiber_dim(s)):
                            left_inner = self.mu_terms(r, s, i, j)
                            for k in range(self.fiber_dim(t)):
                                lhs = self._combine(rs, t, left_inner, k, left_slot=True)
                                rhs = self._combine(r, st, self.mu_terms(s, t, j, k), i, left_slot=False)
                                if lhs != rhs:
                                    return ValidationReport.failed(
                                        "fiber-associativity",
                                        (sg.name(r), sg.name(s), sg.name(t), i, j, k))
        # B_s B_{s*} B_s spans B_s
        for s in range(n):
            sstar = sg.inv(s)
            ss = sg.product(s, sstar)
            vectors = []
            for i in range(self.fiber_dim(s)):
                for j in range(self.fiber_dim(sstar)):
                    mid = self.mu_vector(s, sstar, i, j)
                    for k in range(self.fiber_dim(s)):
                        vectors.append(self.mu_apply(ss, s, mid, unit_vector(f, self.fiber_dim(s), k)))
            _, rank = rref(f, vectors)
            if rank != self.fiber_dim(s):
                return ValidationReport.failed("fiber-span", (sg.name(s), rank))
        # inclusions compose transitively
        for r in range(n):
            for s in range(n):
                if r != s and not sg.leq(r, s):
                    continue
                for t in range(n):
                    if s != t and not sg.leq(s, t):
                        continue
                    if r == s or s == t:
                        continue
                    for i in range(self.fiber_dim(r)):
                        e = unit_vector(f, self.fiber_dim(r), i)
                        via = self.include(t, s, self.include(s, r, e))
                        direct = self.include(t, r, e)
                        if via != direct:
                            return ValidationReport.failed(
                                "inclusion-transitivity", (sg.name(r), sg.name(s), sg.name(t)))
        # inclusions are multiplicative against mu
        for (r, rp) in _order_with_diagonal(sg):
            for (s, sp) in _order_with_diagonal(sg):
                if r == rp and s == sp:
                    continue
                rs, rpsp = sg.product(r, s), sg.product(rp, sp)
                if rs != rpsp and not sg.leq(rs, rpsp):
                    return ValidationReport.failed(
                        "order-multiplication", (sg.name(r), sg.name(s)))
                for i in range(self.fiber_dim(r)):
                    a = unit_vector(f, self.fiber_dim(r), i)
                    for j in range(self.fiber_dim(s)):
                        b = unit_vector(f, self.fiber_dim(s), j)
                        upper = self.mu_apply(rp, sp, self.include(rp, r, a), self.include(sp, s, b))
                        lower = self.include(rpsp, rs, self.mu_apply(r, s, a, b))
                        if upper != lower:
                            return ValidationReport.failed(
                                "inclusion-multiplicative",
                                (sg.name(r), sg.name(rp), sg.name(s), sg.name(sp)))
        return ValidationReport.passed()

    def _combine(self, s: int, t: int, terms, fixed: int, *, left_slot: bool) -> tuple:
        """Sum of c * mu_{s,t}(m, fixed) or mu_{s,t}(fixed, m) over (m, c)."""
        f = self.field
        target = self.semigroup.product(s, t)
        out = [f.zero] * self.fiber_dim(target)
        for m, c in terms:
            pair = (m, fixed) if left_slot else (fixed, m)
            for k, d in self.mu.get((s, t), {}).get(pair, ()):
                out[k] = f.add(out[k], f.mul(c, d))
        return tuple(out)


def _order_with_diagonal(sg: InverseSemigroup):
    pairs = [(s, s) for s in range(sg.size)]
    pairs.extend(sg.order_pairs())
    return pairs


def sum_terms(field: Field, terms):
    acc = field.zero
    for t in terms:
        acc = field.add(acc, t)
    return acc


# ---------------------------------------------------------------------------
# algebra actions and the semidirect product bundle

class AlgebraAction:
    """Inverse semigroup action on a finite algebra by isomorphisms between
    two-sided ideals; dom(alpha_s) is the ideal attached to s* s."""

    def __init__(self, semigroup: InverseSemigroup, algebra: FiniteAlgebra,
                 domains: Sequence[Subspace], maps: Sequence):
        self.semigroup = semigroup
        self.algebra = algebra
        self.domains = tuple(domains)
        self.maps = tuple(tuple(tuple(v) for v in m) for m in maps)
        if len(self.domains) != semigroup.size or len(self.maps) != semigroup.size:
            raise ValueError("one domain and one map per element required")
        for s in range(semigroup.size):
            if len(self.maps[s]) != self.domains[s].dim:
                raise ValueError(f"map {s} has wrong number of rows")

    def apply(self, s: int, v) -> tuple:
        f = self.algebra.field
        coords = self.domains[s].coordinates(v)
        out = zero_vector(f, self.algebra.dim)
        for c, image in zip(coords, self.maps[s]):
            if not f.is_zero(c):
                out = vec_add(f, out, vec_scale(f, c, image))
        return out

    def range_space(self, s: int) -> Subspace:
        return Subspace.span(self.algebra.field, self.algebra.dim, self.maps[s])

    def validate(self) -> ValidationReport:
        sg, alg = self.semigroup, self.algebra
        f = alg.field
        for s in range(sg.size):
            ss = sg.product(sg.inv(s), s)
            if self.domains[s] != self.domains[ss]:
                return ValidationReport.failed("domain-consistency", (sg.name(s),))
        for e in sg.idempotents:
            if not is_ideal(alg, self.domains[e]):
                return ValidationReport.failed("domain-ideal", (sg.name(e),))
        for s in range(sg.size):
            target = self.domains[sg.product(s, sg.inv(s))]
            image = self.range_space(s)
            if image != target or image.dim != self.domains[s].dim:
                return ValidationReport.failed("map-bijection", (sg.name(s),))
        for s in range(sg.size):
            basis = self.domains[s].basis
            for u in basis:
                for v in basis:
                    lhs = self.apply(s, alg.mul(u, v))
                    rhs = alg.mul(self.apply(s, u), self.apply(s, v))
                    if lhs != rhs:
                        return ValidationReport.failed("map-multiplicative", (sg.name(s),))
        for s in range(sg.size):
            for u in self.domains[s].basis:
                if self.apply(sg.inv(s), self.apply(s, u)) != u:
                    return ValidationReport.failed("map-inverse", (sg.name(s),))
        for s in range(sg.size):
            for t in range(sg.size):
                st = sg.product(s, t)
                overlap = _intersect(self.domains[s], self.range_space(t))
                pulled = Subspace.span(f, alg.dim,
                                       [self.apply(sg.inv(t), v) for v in overlap.basis])
                if pulled != self.domains[st]:
                    return ValidationReport.failed(
                        "composition-domain", (sg.name(s), sg.name(t)))
                for v in self.domains[st].basis:
                    if self.apply(st, v) != self.apply(s, self.apply(t, v)):
                        return ValidationReport.failed(
                            "composition-values", (sg.name(s), sg.name(t)))
        total = Subspace.zero(f, alg.dim)
        for e in sg.idempotents:
            total = Subspace.span(f, alg.dim, list(total.basis) + list(self.domains[e].basis))
        if total.dim != alg.dim:
            return ValidationReport.failed("domain-span", (total.dim,))
        return ValidationReport.passed()


def _intersect(a: Subspace, b: Subspace) -> Subspace:
    from .exactlin import subspace_intersect
    return subspace_intersect(a, b)


def semidirect_bundle(action: AlgebraAction,
                      labeler: Callable[[int, int], str] | None = None) -> FellBundle:
    """Semidirect product bundle of a validated algebra action.

    Exists iff every coefficient ideal is idempotent; a non-idempotent
    ideal raises NotAFellBundle naming the offending element and the
    deficient product span.  The resulting bundle is re-validated against
    the full axiom list before being returned.
    """
    action.validate().require("algebra action")
    sg, alg = action.semigroup, action.algebra
    f = alg.field
    coeff = [action.domains[sg.product(s, sg.inv(s))] for s in range(sg.size)]
    for s in range(sg.size):
        ideal = coeff[s]
        products = [alg.mul(u, v) for u in ideal.basis for v in ideal.basis]
        span = Subspace.span(f, alg.dim, products)
        if span != ideal:
            raise NotAFellBundle(s, sg.name(s), span)
    if labeler is None:
        labeler = lambda s, p: f"{alg.labels[p]}|{sg.name(s)}"
    fiber_labels = [tuple(labeler(s, p) for p in coeff[s].pivots) for s in range(sg.size)]
    mu = {}
    for s in range(sg.size):
        for t in range(sg.size):
            st = sg.product(s, t)
            entries = {}
            for i, u in enumerate(coeff[s].basis):
                pulled = action.apply(sg.inv(s), u)
                for j, v in enumerate(coeff[t].basis):
                    w = action.apply(s, alg.mul(pulled, v))
                    terms = tuple(
                        (k, c) for k, c in enumerate(coeff[st].coordinates(w))
                        if not f.is_zero(c))
                    if terms:
                        entries[(i, j)] = terms
            if entries:
                mu[(s, t)] = entries
    order_maps = {}
    for (s, t) in sg.order_pairs():
        cols = [coeff[t].coordinates(u) for u in coeff[s].basis]
        order_maps[(t, s)] = mat_from_columns(f, cols, coeff[t].dim)
    bundle = FellBundle(sg, f, fiber_labels, mu, order_maps)
    bundle.validate().require("semidirect product bundle")
    return bundle


# ---------------------------------------------------------------------------
# cross-sectional algebra

class CrossSectionalAlgebra:
    """Direct sum of the fibers with the bundle multiplication, the
    redundancy ideal N, and the quotient by N.

    The quotient basis consists of the cosets of the basis labels that are
    not pivotal in N's reduced basis (the canonical complement)."""

    def __init__(self, bundle: FellBundle):
        self.bundle = bundle
        sg, f = bundle.semigroup, bundle.field
        self.offsets = []
        labels = []
        self.label_pairs = []
        for s in range(sg.size):
            self.offsets.append(len(labels))
            for i, lbl in enumerate(bundle.fiber_labels[s]):
                labels.append(lbl)
                self.label_pairs.append((s, i))
        products = {}
        for (s, t), entries in bundle.mu.items():
            st = sg.product(s, t)
            for (i, j), terms in entries.items():
                gi, gj = self.offsets[s] + i, self.offsets[t] + j
                products[(gi, gj)] = tuple((self.offsets[st] + k, c) for k, c in terms)
        self.total = FiniteAlgebra(f, labels, products)
        gens = []
        for (s, t) in sg.order_pairs():
            for i in range(bundle.fiber_dim(s)):
                v = list(zero_vector(f, self.total.dim))
                v[self.offsets[s] + i] = f.one
                image = bundle.include(t, s, unit_vector(f, bundle.fiber_dim(s), i))
                for k, c in enumerate(image):
                    v[self.offsets[t] + k] = f.sub(v[self.offsets[t] + k], c)
                gens.append(tuple(v))
        span = Subspace.span(f, self.total.dim, gens)
        if not is_ideal(self.total, span):
            raise StructureError("redundancy-not-ideal", None,
                                 "the redundancy span fails to be two-sided")
        closed = ideal_generate(self.total, gens)
        if closed != span:
            raise StructureError("redundancy-not-closed", None,
                                 "redundancy span is a proper subset of the ideal it generates")
        self.redundancy = span
        self.qmap = QuotientMap.of(span)
        coset_labels = tuple(labels[k] for k in self.qmap.coset_positions)
        qproducts = {}
        for a, ga in enumerate(self.qmap.coset_positions):
            for b, gb in enumerate(self.qmap.coset_positions):
                prod = self.total.basis_product(ga, gb)
                terms = tuple(
                    (k, c) for k, c in enumerate(self.qmap.project(prod))
                    if not f.is_zero(c))
                if terms:
                    qproducts[(a, b)] = terms
        self.quotient = FiniteAlgebra(f, coset_labels, qproducts)

    def global_index(self, s: int, i: int) -> int:
        return self.offsets[s] + i

    def project(self, total_vector) -> tuple:
        return self.qmap.project(total_vector)

    def lift(self, quotient_vector) -> tuple:
        return self.qmap.lift(quotient_vector)

    def lift_pairs(self, quotient_vector):
        """Canonical lift as [(s, fiber_index, coeff)] with nonzero coeff."""
        f = self.bundle.field
        lifted = self.lift(quotient_vector)
        return [
            (*self.label_pairs[g], c)
            for g, c in enumerate(lifted)
            if not f.is_zero(c)
        ]


# ---------------------------------------------------------------------------
# crossed products of K^X

def function_algebra(system: AmpleSystem, field: Field) -> FiniteAlgebra:
    """K^X with pointwise multiplication, labeled by point names."""
    labels = tuple(system.point_name(x) for x in range(system.space_size))
    table = [[x if x == y else None for y in range(system.space_size)]
             for x in range(system.space_size)]
    return FiniteAlgebra.from_monomial_table(field, labels, table)


def function_action(system: AmpleSystem, field: Field) -> AlgebraAction:
    """The induced action on K^X: alpha_s(f) = f o theta_{s*}."""
    alg = function_algebra(system, field)
    domains = []
    maps = []
    for s in range(system.semigroup.size):
        pb = system.theta[s]
        dom_points = pb.domain()
        domains.append(Subspace.span(
            field, alg.dim, [unit_vector(field, alg.dim, y) for y in dom_points]))
        maps.append(tuple(unit_vector(field, alg.dim, pb.apply(y)) for y in dom_points))
    return AlgebraAction(system.semigroup, alg, domains, maps)


def transport(system: AmpleSystem, field: Field, s: int, f_vec) -> tuple:
    """The zero-extended push-forward of a function along theta_s:
    (f o theta_{s*}) on the range of theta_s, zero elsewhere."""
    pb = system.theta[s]
    out = [field.zero] * system.space_size
    for x, y in pb.pairs:
        out[y] = f_vec[x]
    return tuple(out)


class CrossedProduct:
    """The crossed product of K^X by an ample system: the quotient of the
    cross-sectional algebra of the semidirect bundle by the redundancy
    ideal.  Basis cosets are labeled "point:element"."""

    def __init__(self, system: AmpleSystem, field: Field):
        system.validate().require("ample system")
        self.system = system
        self.field = field
        labeler = lambda s, p: f"{system.point_name(p)}:{system.semigroup.name(s)}"
        self.bundle = semidirect_bundle(function_action(system, field), labeler)
        self.sections = CrossSectionalAlgebra(self.bundle)
        self.algebra = self.sections.quotient
        # fiber basis index -> point, per element
        self._fiber_points = tuple(self.system.theta[s].image()
                                   for s in range(system.semigroup.size))
        self.cache = {}

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def basis_pair(self, coset_index: int) -> tuple:
        """(point, element) of the canonical representative of a coset."""
        g = self.sections.qmap.coset_positions[coset_index]
        s, i = self.sections.label_pairs[g]
        return self._fiber_points[s][i], s

    def term(self, y: int, s: int) -> tuple:
        """Coset coordinates of the single section delta_y at element s."""
        points = self._fiber_points[s]
        if y not in points:
            raise ValueError(
                f"{self.system.point_name(y)} is outside the range of "
                f"{self.system.semigroup.name(s)}")
        g = self.sections.global_index(s, points.index(y))
        return self.sections.project(unit_vector(self.field, self.sections.total.dim, g))

    def indicator_term(self, s: int, points=None) -> tuple:
        f = self.field
        out = zero_vector(f, self.dim)
        for y in (self._fiber_points[s] if points is None else points):
            out = vec_add(f, out, self.term(y, s))
        return out

    def lift_terms(self, b):
        """Canonical lift of a coset vector, grouped per element:
        [(s, function vector over X)] with nonzero functions only."""
        f = self.field
        per_elem = {}
        for s, i, c in self.sections.lift_pairs(b):
            fn = per_elem.setdefault(s, [f.zero] * self.system.space_size)
            y = self._fiber_points[s][i]
            fn[y] = f.add(fn[y], c)
        return [(s, tuple(fn)) for s, fn in sorted(per_elem.items())
                if not vec_is_zero(f, fn)]

    def embed(self, f_vec) -> tuple:
        """Embed a function on X, greedily partitioning its support by the
        idempotent domains in element order."""
        f = self.field
        remaining = [y for y in range(self.system.space_size)
                     if not f.is_zero(f_vec[y])]
        out = zero_vector(f, self.dim)
        for e in self.system.semigroup.idempotents:
            if not remaining:
                break
            dom = set(self.system.theta[e].domain())
            covered = [y for y in remaining if y in dom]
            for y in covered:
                out = vec_add(f, out, vec_scale(f, f_vec[y], self.term(y, e)))
            remaining = [y for y in remaining if y not in dom]
        if remaining:
            raise StructureError("embed-cover", (remaining[0],),
                                 "support not covered by idempotent domains")
        return out

    def transport(self, s: int, f_vec) -> tuple:
        return transport(self.system, self.field, s, f_vec)

    def local_unit(self, b) -> tuple:
        """An idempotent phi with phi*b = b = b*phi, built from the
        orthogonal cover of the supports of b's canonical lift."""
        f = self.field
        terms = self.lift_terms(b)
        if not terms:
            return zero_vector(f, self.dim)
        sg = self.system.semigroup
        support = {}
        pulled = {}
        for s, fn in terms:
            supp = frozenset(y for y in range(self.system.space_size)
                             if not f.is_zero(fn[y]))
            support[s] = supp
            pulled[s] = frozenset(self.system.theta[sg.inv(s)].apply(y) for y in supp)
        elems = sorted(support)
        space = frozenset(range(self.system.space_size))
        phi = zero_vector(f, self.dim)
        for eps in _subsets(elems):
            for zeta in _subsets(elems):
                if not eps and not zeta:
                    continue
                region = space
                for s in elems:
                    region &= support[s] if s in eps else (space - support[s])
                for s in elems:
                    region &= pulled[s] if s in zeta else (space - pulled[s])
                if not region:
                    continue
                e = None
                for s in eps:
                    factor = sg.product(s, sg.inv(s))
                    e = factor if e is None else sg.product(e, factor)
                for s in zeta:
                    factor = sg.product(sg.inv(s), s)
                    e = factor if e is None else sg.product(e, factor)
                phi = vec_add(f, phi, self.indicator_term(e, sorted(region)))
        alg = self.algebra
        if alg.mul(phi, phi) != phi or alg.mul(phi, b) != b or alg.mul(b, phi) != b:
            raise StructureError("local-unit", None, "local unit construction failed")
        return phi


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def crossed_product(system: AmpleSystem, field: Field) -> CrossedProduct:
    return CrossedProduct(system, field)


# ---------------------------------------------------------------------------
# covariant representations

class CovariantRep:
    """A pair (pi, sigma): pi represents K^X, sigma represents the
    semigroup, tied by the covariance identities."""

    def __init__(self, system: AmpleSystem, field: Field, space_dim: int, pi, sigma):
        self.system = system
        self.field = field
        self.space_dim = space_dim
        self.pi = tuple(tuple(tuple(r) for r in m) for m in pi)
        self.sigma = tuple(tuple(tuple(r) for r in m) for m in sigma)
        if len(self.pi) != system.space_size:
            raise ValueError("one pi image per point required")
        if len(self.sigma) != system.semigroup.size:
            raise ValueError("one sigma image per element required")

    def validate(self) -> ValidationReport:
        sys, f, d = self.system, self.field, self.space_dim
        sg = sys.semigroup
        zero = tuple(zero_vector(f, d) for _ in range(d))
        for y in range(sys.space_size):
            for z in range(sys.space_size):
                prod = mat_mul(f, self.pi[y], self.pi[z])
                want = self.pi[y] if y == z else zero
                if prod != want:
                    return ValidationReport.failed(
                        "function-rep", (sys.point_name(y), sys.point_name(z)))
        cols = []
        for m in self.pi:
            for k in range(d):
                cols.append(tuple(m[r][k] for r in range(d)))
        _, rank = rref(f, cols)
        if rank != d:
            return ValidationReport.failed("nondegenerate", (rank, d))
        for s in range(sg.size):
            for t in range(sg.size):
                if mat_mul(f, self.sigma[s], self.sigma[t]) != self.sigma[sg.product(s, t)]:
                    return ValidationReport.failed(
                        "sigma-homomorphism", (sg.name(s), sg.name(t)))
        for s in range(sg.size):
            si = sg.inv(s)
            for z in sys.theta[s].domain():
                lhs = mat_mul(f, self.sigma[s], mat_mul(f, self.pi[z], self.sigma[si]))
                if lhs != self.pi[sys.theta[s].apply(z)]:
                    return ValidationReport.failed(
                        "covariance", (sg.name(s), sys.point_name(z)))
        for e in sg.idempotents:
            total = zero
            for y in sys.theta[e].domain():
                total = tuple(vec_add(f, a, b) for a, b in zip(total, self.pi[y]))
            if total != self.sigma[e]:
                return ValidationReport.failed("unit-condition", (sg.name(e),))
        return ValidationReport.passed()


def integrate(cp: CrossedProduct, cr: CovariantRep) -> Representation:
    """The integrated form pi(f) sigma_s on the crossed product basis.

    Beyond the structure-constant check inside Representation, the images
    of every section delta_y at every element are compared against the
    integrated formula, which pins down that the pair kills the
    redundancy ideal."""
    f = cp.field
    images = []
    for idx in range(cp.dim):
        y, s = cp.basis_pair(idx)
        images.append(mat_mul(f, cr.pi[y], cr.sigma[s]))
    rep = Representation(cp.algebra, cr.space_dim, images)
    for s in range(cp.system.semigroup.size):
        for y in cp.system.theta[s].image():
            got = rep.apply(cp.term(y, s))
            want = mat_mul(f, cr.pi[y], cr.sigma[s])
            if got != want:
                raise StructureError("integration-consistency",
                                     (cp.system.point_name(y),
                                      cp.system.semigroup.name(s)))
    return rep


def disintegrate(cp: CrossedProduct, rep: Representation) -> CovariantRep:
    """Recover the covariant pair from a non-degenerate representation:
    pi from the embedded functions, sigma_s as the image of the indicator
    section at s (the closed form available over a finite space)."""
    if rep.algebra is not cp.algebra:
        raise ValueError("representation is not over this crossed product")
    if not rep.is_nondegenerate():
        raise StructureError("degenerate-representation", None,
                             "disintegration needs a non-degenerate representation")
    f = cp.field
    pi = []
    for y in range(cp.system.space_size):
        one_at = unit_vector(f, cp.system.space_size, y)
        pi.append(rep.apply(cp.embed(one_at)))
    sigma = [rep.apply(cp.indicator_term(s))
             for s in range(cp.system.semigroup.size)]
    cr = CovariantRep(cp.system, f, rep.space_dim, pi, sigma)
    cr.validate().require("disintegrated pair")
    return cr


# ---------------------------------------------------------------------------
# extending fiberwise pre-representations, unitization

def extend_representation(sections: CrossSectionalAlgebra, target: FiniteAlgebra,
                          fiber_images) -> tuple:
    """Extend a fiberwise pre-representation pi_s: B_s -> target to the
    quotient algebra.

    fiber_images[s][i] is the target element assigned to the i-th basis
    vector of B_s.  Raises unless the family is multiplicative across mu
    and constant along the inclusions (exactly the condition for killing
    the redundancy ideal); returns the matrix of the induced map on the
    quotient basis and verifies it is a homomorphism."""
    bundle = sections.bundle
    sg, f = bundle.semigroup, bundle.field
    fiber_images = tuple(tuple(tuple(v) for v in per) for per in fiber_images)
    for s in range(sg.size):
        if len(fiber_images[s]) != bundle.fiber_dim(s):
            raise ValueError(f"wrong number of images for fiber {sg.name(s)}")
    for s in range(sg.size):
        for t in range(sg.size):
            st = sg.product(s, t)
            for i in range(bundle.fiber_dim(s)):
                for j in range(bundle.fiber_dim(t)):
                    want = target.mul(fiber_images[s][i], fiber_images[t][j])
                    got = zero_vector(f, target.dim)
                    for k, c in bundle.mu_terms(s, t, i, j):
                        got = vec_add(f, got, vec_scale(f, c, fiber_images[st][k]))
                    if got != want:
                        raise StructureError("pre-representation",
                                             (sg.name(s), sg.name(t), i, j))
    for (s, t) in sg.order_pairs():
        for i in range(bundle.fiber_dim(s)):
            image = bundle.include(t, s, unit_vector(f, bundle.fiber_dim(s), i))
            via = zero_vector(f, target.dim)
            for k, c in enumerate(image):
                via = vec_add(f, via, vec_scale(f, c, fiber_images[t][k]))
            if via != fiber_images[s][i]:
                raise StructureError("inclusion-compatibility", (sg.name(s), sg.name(t), i))
    for v in sections.redundancy.basis:
        acc = zero_vector(f, target.dim)
        for g, c in enumerate(v):
            if not f.is_zero(c):
                s, i = sections.label_pairs[g]
                acc = vec_add(f, acc, vec_scale(f, c, fiber_images[s][i]))
        if not vec_is_zero(f, acc):
            raise StructureError("redundancy-not-killed", None)
    cols = []
    for g in sections.qmap.coset_positions:
        s, i = sections.label_pairs[g]
        cols.append(fiber_images[s][i])
    quot = sections.quotient
    for a in range(quot.dim):
        for b in range(quot.dim):
            prod = quot.basis_product(a, b)
            lhs = zero_vector(f, target.dim)
            for k, c in enumerate(prod):
                if not f.is_zero(c):
                    lhs = vec_add(f, lhs, vec_scale(f, c, cols[k]))
            rhs = target.mul(cols[a], cols[b])
            if lhs != rhs:
                raise StructureError("extension-multiplicative", (a, b))
    return mat_from_columns(f, cols, target.dim)


@dataclass(frozen=True)
class UnitizationIso:
    plain: CrossedProduct
    unitized: CrossedProduct
    matrix: tuple


def unitization_isomorphism(system: AmpleSystem, field: Field) -> UnitizationIso:
    """The crossed product is unchanged by adjoining a unit acting as the
    identity on the whole space; returns the verified isomorphism."""
    cp = CrossedProduct(system, field)
    sg = system.semigroup
    from .dynsys import PartialBijection
    unit_theta = PartialBijection.identity(range(system.space_size))
    bigger = AmpleSystem(sg.unitize(), system.space_size,
                         tuple(system.theta) + (unit_theta,), system.point_names)
    cpu = CrossedProduct(bigger, field)
    if cpu.dim != cp.dim:
        raise StructureError("unitization-dimension", (cp.dim, cpu.dim))
    f = field
    cols = []
    for idx in range(cp.dim):
        y, s = cp.basis_pair(idx)
        cols.append(cpu.term(y, s))
    matrix = mat_from_columns(f, cols, cpu.dim)
    _, rank = rref(f, cols)
    if rank != cp.dim:
        raise StructureError("unitization-injective", (rank, cp.dim))
    for a in range(cp.dim):
        for b in range(cp.dim):
            prod = cp.algebra.basis_product(a, b)
            lhs = zero_vector(f, cpu.dim)
            for k, c in enumerate(prod):
                if not f.is_zero(c):
                    lhs = vec_add(f, lhs, vec_scale(f, c, cols[k]))
            rhs = cpu.algebra.mul(cols[a], cols[b])
            if lhs != rhs:
                raise StructureError("unitization-multiplicative",
                                     (cp.algebra.labels[a], cp.algebra.labels[b]))
    return UnitizationIso(cp, cpu, matrix)
