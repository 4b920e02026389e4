"""Exact linear algebra over prime fields and the rationals.

Everything downstream (ideal lattices, induced ideals, intersection
certificates) reduces to subspace comparisons, so subspaces are kept in
canonical reduced row echelon form: two subspaces are equal iff their basis
matrices are equal, with no tolerances anywhere.

Scalars are plain ints in [0, p) for prime fields and fractions.Fraction
for the rationals.  Matrices are tuples of row tuples; vectors are tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class StructureError(ValueError):
    """An algebraic axiom failed.  Carries the rule name and a witness."""

    def __init__(self, rule, witness=None, message=None):
        self.rule = rule
        self.witness = witness
        super().__init__(message or f"{rule}: witness {witness!r}")


class GuardError(ValueError):
    """A size guard was exceeded; the offending size is in the message."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Exact field arithmetic on plain scalars."""

    zero = None
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def of(self, x):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def from_text(self, text: str):
        return self.of(Fraction(text.strip()))

    def to_text(self, a) -> str:
        raise NotImplementedError

    def to_json(self, a):
        raise NotImplementedError

    def elements(self):
        raise GuardError(f"cannot enumerate the elements of {self}")


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    zero = 0

    @property
    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def of(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator % self.p) * self.inv(den) % self.p
        return int(x) % self.p

    def to_text(self, a) -> str:
        return str(a % self.p)

    def to_json(self, a):
        return a % self.p

    def elements(self):
        return range(self.p)

    def __str__(self):
        return f"F{self.p}"


@dataclass(frozen=True)
class RationalField(Field):
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def of(self, x):
        return Fraction(x)

    def to_text(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def to_json(self, a):
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def __str__(self):
        return "Q"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse a field description such as "Q", "F 2" or "F3"."""
    t = text.strip()
    if t in ("Q", "QQ", "q"):
        return QQ
    if t and t[0] in "Ff":
        body = t[1:].strip()
        if body.isdigit():
            return PrimeField(int(body))
    raise ValueError(f"unrecognized field {text!r}")


# ---------------------------------------------------------------------------
# vectors and matrices (tuples of scalars / tuples of row tuples)

def zero_vector(field: Field, n: int) -> tuple:
    return (field.zero,) * n


def unit_vector(field: Field, n: int, i: int) -> tuple:
    return tuple(field.one if j == i else field.zero for j in range(n))


def vec_add(field: Field, u, v):
    assert len(u) == len(v)
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_sub(field: Field, u, v):
    assert len(u) == len(v)
    return tuple(field.sub(a, b) for a, b in zip(u, v))


def vec_scale(field: Field, c, v):
    return tuple(field.mul(c, a) for a in v)


def vec_is_zero(field: Field, v) -> bool:
    return all(field.is_zero(a) for a in v)


def mat_vec(field: Field, m, v):
    """m applied to a column vector v (rows of m dot v)."""
    return tuple(
        _dot(field, row, v)
        for row in m
    )


def _dot(field, u, v):
    acc = field.zero
    for a, b in zip(u, v):
        if not (field.is_zero(a) or field.is_zero(b)):
            acc = field.add(acc, field.mul(a, b))
    return acc


def mat_mul(field: Field, a, b):
    if not a:
        return ()
    bt = tuple(zip(*b)) if b else ()
    out = []
    for row in a:
        if bt:
            out.append(tuple(_dot(field, row, col) for col in bt))
        else:
            out.append(())
    return tuple(out)


def mat_from_columns(field: Field, cols: Sequence, nrows: int):
    if not cols:
        return tuple(() for _ in range(nrows))
    for c in cols:
        assert len(c) == nrows
    return tuple(tuple(c[r] for c in cols) for r in range(nrows))


def identity_matrix(field: Field, n: int):
    return tuple(unit_vector(field, n, i) for i in range(n))


def zero_matrix(field: Field, rows: int, cols: int):
    return tuple(zero_vector(field, cols) for _ in range(rows))


def mat_eq_zero(field: Field, m) -> bool:
    return all(vec_is_zero(field, row) for row in m)


def rref(field: Field, rows: Iterable[Sequence]):
    """Canonical reduced row echelon form.

    Returns (matrix, rank).  Zero rows are dropped, pivots are normalized
    to 1 and are the only nonzero entries in their columns, so the result
    is the unique canonical basis of the row space.
    """
    work = [list(r) for r in rows]
    if not work:
        return (), 0
    ncols = len(work[0])
    for r in work:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
    lead = 0
    for col in range(ncols):
        pivot = None
        for r in range(lead, len(work)):
            if not field.is_zero(work[r][col]):
                pivot = r
                break
        if pivot is None:
            continue
        work[lead], work[pivot] = work[pivot], work[lead]
        inv = field.inv(work[lead][col])
        work[lead] = [field.mul(inv, a) for a in work[lead]]
        for r in range(len(work)):
            if r != lead and not field.is_zero(work[r][col]):
                c = work[r][col]
                work[r] = [field.sub(a, field.mul(c, b)) for a, b in zip(work[r], work[lead])]
        lead += 1
        if lead == len(work):
            break
    out = tuple(tuple(r) for r in work[:lead])
    return out, lead


def row_pivots(field: Field, reduced) -> tuple:
    """Pivot column of each row of an RREF matrix."""
    pivots = []
    for row in reduced:
        for j, a in enumerate(row):
            if not field.is_zero(a):
                pivots.append(j)
                break
    return tuple(pivots)


def nullspace(field: Field, rows, ncols: int):
    """Canonical basis of {v : rows . v = 0} as an RREF matrix."""
    reduced, _ = rref(field, rows)
    pivots = row_pivots(field, reduced)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for row, p in zip(reduced, pivots):
            v[p] = field.neg(row[free])
        basis.append(v)
    out, _ = rref(field, basis)
    return out


# ---------------------------------------------------------------------------
# subspaces

@dataclass(frozen=True)
class Subspace:
    """A subspace of K^n held as a canonical RREF basis (no zero rows)."""

    field: Field
    ambient_dim: int
    basis: tuple

    @staticmethod
    def span(field: Field, ambient_dim: int, vectors: Iterable) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ValueError(f"vector of length {len(v)} in ambient dim {ambient_dim}")
        reduced, _ = rref(field, vectors)
        return Subspace(field, ambient_dim, reduced)

    @staticmethod
    def zero(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, ())

    @staticmethod
    def full(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, identity_matrix(field, ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        return row_pivots(self.field, self.basis)

    def reduce(self, v) -> tuple:
        """Residue of v after eliminating every pivot coordinate."""
        f = self.field
        v = list(v)
        if len(v) != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if not f.is_zero(c):
                for j in range(self.ambient_dim):
                    v[j] = f.sub(v[j], f.mul(c, row[j]))
        return tuple(v)

    def contains(self, v) -> bool:
        return vec_is_zero(self.field, self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v) -> tuple:
        """Coefficients of v in the RREF basis; raises if v is outside."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return tuple(v[p] for p in self.pivots)

    def to_json(self):
        f = self.field
        return {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "basis": [[f.to_json(a) for a in row] for row in self.basis],
        }


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return Subspace.span(a.field, a.ambient_dim, list(a.basis) + list(b.basis))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: reduce [[A|A],[B|0]]; rows with zero left half carry the
    intersection in their right half."""
    _check_same_ambient(a, b)
    f, n = a.field, a.ambient_dim
    stacked = [tuple(row) + tuple(row) for row in a.basis]
    stacked += [tuple(row) + zero_vector(f, n) for row in b.basis]
    reduced, _ = rref(f, stacked)
    inter = [row[n:] for row in reduced if vec_is_zero(f, row[:n])]
    return Subspace.span(f, n, inter)


def intersect_all(spaces: Sequence[Subspace]) -> Subspace:
    if not spaces:
        raise ValueError("empty intersection")
    acc = spaces[0]
    for s in spaces[1:]:
        acc = subspace_intersect(acc, s)
    return acc


# ---------------------------------------------------------------------------
# quotients of K^n by a subspace

@dataclass(frozen=True)
class QuotientMap:
    """K^n -> K^n / W with the canonical complement basis.

    Coset coordinates are read off at the non-pivot positions of W's RREF
    basis; lifting places them back at those positions (the canonical
    coset representative).
    """

    subspace: Subspace
    coset_positions: tuple

    @staticmethod
    def of(subspace: Subspace) -> "QuotientMap":
        pivots = set(subspace.pivots)
        positions = tuple(j for j in range(subspace.ambient_dim) if j not in pivots)
        return QuotientMap(subspace, positions)

    @property
    def dim(self) -> int:
        return len(self.coset_positions)

    def project(self, v) -> tuple:
        r = self.subspace.reduce(v)
        return tuple(r[j] for j in self.coset_positions)

    def lift(self, w) -> tuple:
        f = self.subspace.field
        v = [f.zero] * self.subspace.ambient_dim
        for j, c in zip(self.coset_positions, w):
            v[j] = c
        return tuple(v)


# ---------------------------------------------------------------------------
# finite-dimensional associative algebras

class FiniteAlgebra:
    """Associative algebra over an exact field, given by structure constants.

    products maps a basis index pair (i, j) to a sparse vector
    ((k, coeff), ...); omitted pairs multiply to zero.  Associativity is
    checked on every basis triple at construction.
    """

    def __init__(self, field: Field, labels: Sequence, products, *, check: bool = True):
        self.field = field
        self.labels = tuple(labels)
        norm = {}
        for (i, j), terms in products.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError(f"structure constant index out of range: {(i, j)}")
            cleaned = tuple(
                (k, c) for k, c in sorted(terms) if not field.is_zero(c)
            )
            for k, _ in cleaned:
                if not 0 <= k < self.dim:
                    raise ValueError(f"structure constant target out of range: {k}")
            if cleaned:
                norm[(i, j)] = cleaned
        self.products = norm
        if check:
            self._check_associativity()

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def from_monomial_table(cls, field: Field, labels: Sequence, table, *, check: bool = True):
        """table[i][j] is a basis index or None (zero product)."""
        products = {}
        for i, row in enumerate(table):
            for j, k in enumerate(row):
                if k is not None:
                    products[(i, j)] = ((k, field.one),)
        return cls(field, labels, products, check=check)

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.field, self.dim, i)

    def basis_product(self, i: int, j: int) -> tuple:
        v = [self.field.zero] * self.dim
        for k, c in self.products.get((i, j), ()):
            v[k] = self.field.add(v[k], c)
        return tuple(v)

    def mul(self, u, v) -> tuple:
        f = self.field
        out = [f.zero] * self.dim
        for i, a in enumerate(u):
            if f.is_zero(a):
                continue
            for j, b in enumerate(v):
                if f.is_zero(b):
                    continue
                ab = f.mul(a, b)
                for k, c in self.products.get((i, j), ()):
                    out[k] = f.add(out[k], f.mul(ab, c))

        return tuple(out)

    def full_space(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def zero_space(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def label_index(self, label) -> int:
        return self.labels.index(label)

    def element_to_text(self, v) -> str:
        f = self.field
        terms = [
            f"{f.to_text(c)}*{self.labels[k]}"
            for k, c in enumerate(v)
            if not f.is_zero(c)
        ]
        return " + ".join(terms) if terms else "0"

    def _check_associativity(self):
        n = self.dim
        for i in range(n):
            ei = self.basis_vector(i)
            for j in range(n):
                pij = self.basis_product(i, j)
                for k in range(n):
                    left = self.mul(pij, self.basis_vector(k))
                    right = self.mul(ei, self.basis_product(j, k))
                    if left != right:
                        raise StructureError(
                            "associativity",
                            (self.labels[i], self.labels[j], self.labels[k]),
                        )


def is_ideal(algebra: FiniteAlgebra, space: Subspace) -> bool:
    """True iff the subspace is a two-sided ideal (closed under both
    multiplications by every basis element)."""
    if space.ambient_dim != algebra.dim:
        raise ValueError("subspace does not live in the algebra")
    for v in space.basis:
        for i in range(algebra.dim):
            e = algebra.basis_vector(i)
            if not space.contains(algebra.mul(e, v)):
                return False
            if not space.contains(algebra.mul(v, e)):
                return False
    return True


def ideal_generate(algebra: FiniteAlgebra, generators: Iterable) -> Subspace:
    """Smallest two-sided ideal containing the generators: span closure
    under left/right multiplication, iterated to a fixed point."""
    current = Subspace.span(algebra.field, algebra.dim, generators)
    while True:
        new_vectors = list(current.basis)
        for v in current.basis:
            for i in range(algebra.dim):
                e = algebra.basis_vector(i)
                new_vectors.append(algebra.mul(e, v))
                new_vectors.append(algebra.mul(v, e))
        nxt = Subspace.span(algebra.field, algebra.dim, new_vectors)
        if nxt.dim == current.dim:
            return nxt
        current = nxt


# ---------------------------------------------------------------------------
# representations

class Representation:
    """Algebra homomorphism into matrices acting on column vectors.

    images[i] is the matrix of the i-th basis element; multiplicativity
    against the structure constants is checked on every basis pair.
    """

    def __init__(self, algebra: FiniteAlgebra, space_dim: int, images: Sequence, *, check: bool = True):
        self.algebra = algebra
        self.space_dim = space_dim
        self.images = tuple(tuple(tuple(row) for row in m) for m in images)
        if len(self.images) != algebra.dim:
            raise ValueError("one image per basis element required")
        for m in self.images:
            if len(m) != space_dim or any(len(row) != space_dim for row in m):
                raise ValueError("image has wrong shape")
        if check:
            self._check_multiplicative()

    def _check_multiplicative(self):
        f = self.algebra.field
        n = self.algebra.dim
        for i in range(n):
            for j in range(n):
                prod = mat_mul(f, self.images[i], self.images[j])
                expected = self.apply(self.algebra.basis_product(i, j))
                if prod != expected:
                    raise StructureError(
                        "representation-multiplicativity",
                        (self.algebra.labels[i], self.algebra.labels[j]),
                    )

    def apply(self, coords) -> tuple:
        f = self.algebra.field
        out = [[f.zero] * self.space_dim for _ in range(self.space_dim)]
        for i, c in enumerate(coords):
            if f.is_zero(c):
                continue
            m = self.images[i]
            for r in range(self.space_dim):
                row = m[r]
                for col in range(self.space_dim):
                    if not f.is_zero(row[col]):
                        out[r][col] = f.add(out[r][col], f.mul(c, row[col]))
        return tuple(tuple(r) for r in out)

    def kernel(self) -> Subspace:
        """{a : image(a) = 0}, by one exact nullspace computation."""
        f = self.algebra.field
        n = self.algebra.dim
        rows = []
        for r in range(self.space_dim):
            for c in range(self.space_dim):
                rows.append(tuple(self.images[i][r][c] for i in range(n)))
        basis = nullspace(f, rows, n)
        return Subspace(f, n, basis)

    def is_nondegenerate(self) -> bool:
        """span{image(a) xi} is the whole space."""
        f = self.algebra.field
        cols = []
        for m in self.images:
            for k in range(self.space_dim):
                cols.append(tuple(m[r][k] for r in range(self.space_dim)))
        _, rank = rref(f, cols)
        return rank == self.space_dim


def left_regular_mod(algebra: FiniteAlgebra, ideal: Subspace) -> Representation:
    """Left multiplication on algebra/ideal.

    Requires the ideal to be two-sided and the algebra to admit local
    units (crossed products and Steinberg algebras always do); under that
    hypothesis the kernel is exactly the ideal and the representation is
    non-degenerate, both of which are verified here.
    """
    if not is_ideal(algebra, ideal):
        raise StructureError("quotient-by-non-ideal", None, "not a two-sided ideal")
    f = algebra.field
    qm = QuotientMap.of(ideal)
    lifted = [qm.lift(unit_vector(f, qm.dim, k)) for k in range(qm.dim)]
    images = []
    for i in range(algebra.dim):
        e = algebra.basis_vector(i)
        cols = [qm.project(algebra.mul(e, w)) for w in lifted]
        images.append(mat_from_columns(f, cols, qm.dim))
    rep = Representation(algebra, qm.dim, images)
    if rep.kernel() != ideal:
        raise StructureError("left-regular-kernel", None,
                             "kernel of the quotient action differs from the ideal "
                             "(the algebra lacks local units)")
    if not rep.is_nondegenerate():
        raise StructureError("left-regular-degenerate", None,
                             "quotient action is degenerate (no local units)")
    return rep


def representation_kernel(rep: Representation) -> Subspace:
    return rep.kernel()


# ---------------------------------------------------------------------------
# exhaustive ideal oracle

def enumerate_subspaces(field: Field, n: int):
    """All subspaces of K^n for a prime field, one canonical RREF each,
    ordered by dimension then lexicographic pivot choice."""
    if not isinstance(field, PrimeField):
        raise GuardError("subspace enumeration needs a prime field")
    scalars = list(field.elements())
    for r in range(n + 1):
        for pivot_cols in itertools.combinations(range(n), r):
            free_slots = []
            for row_i, p in enumerate(pivot_cols):
                for col in range(p + 1, n):
                    if col not in pivot_cols:
                        free_slots.append((row_i, col))
            for assignment in itertools.product(scalars, repeat=len(free_slots)):
                rows = [[field.zero] * n for _ in range(r)]
                for row_i, p in enumerate(pivot_cols):
                    rows[row_i][p] = field.one
                for (row_i, col), val in zip(free_slots, assignment):
                    rows[row_i][col] = val
                yield Subspace(field, n, tuple(tuple(row) for row in rows))


def enumerate_ideals(algebra: FiniteAlgebra, dim_limit: int = 6):
    """Brute-force oracle: every two-sided ideal, found by enumerating all
    subspaces and filtering.  Guarded to small prime-field algebras."""
    if not isinstance(algebra.field, PrimeField):
        raise GuardError("ideal enumeration needs a prime field")
    if algebra.dim > dim_limit:
        raise GuardError(
            f"ideal enumeration guarded to dim <= {dim_limit}, got dim {algebra.dim}")
    return [s for s in enumerate_subspaces(algebra.field, algebra.dim)
            if is_ideal(algebra, s)]
