"""Finite quadratic forms q: A -> Q/2Z on finite abelian groups, as they
arise on discriminant groups L*/L of even lattices.

Groups are presented by generator orders (n1 | n2 | ..., the Smith normal
form invariants), q by its values on the generators, and the induced
bilinear pairing b: A x A -> Q/Z by its generator matrix.  Elements are
coordinate tuples reduced into [0, n_i).  Everything is a Fraction or an
int; q-values are reduced into [0, 2), b-values into [0, 1).

Sign convention: every computation in this package runs on the
Neron-Severi side.  The transcendental-lattice discriminant form is the
same group with q negated; the sign flip changes no group structure, no
isotropy, no subgroup lattice and no orbit counts, so it is documentation
only.  Callers who need the other sign can negate q-values on output.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

from . import budget, kernels
from .errors import (
    CapacityError,
    InvalidElementError,
    InvalidIsometryError,
    InvalidParameterError,
)
from .intmath import distinct_primes, lcm
from .lattices import (
    IntMatrix,
    Lattice,
    NSLattice,
    RationalVector,
    dual_generators,
    ns_gram,
    smith_normal_form,
)


@dataclass(frozen=True)
class FiniteQuadForm:
    """Finite quadratic form on (+) Z/n_i, generator orders ascending by
    divisibility, all of them > 1."""

    orders: tuple[int, ...]
    q_gen: tuple[Fraction, ...]
    b_matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        r = len(self.orders)
        if len(self.q_gen) != r or len(self.b_matrix) != r:
            raise InvalidParameterError("generator data lengths disagree")
        for i, n in enumerate(self.orders):
            if n < 2:
                raise InvalidParameterError("generator orders must be >= 2")
            if i and n % self.orders[i - 1]:
                raise InvalidParameterError("orders must ascend by divisibility")
        for i in range(r):
            q = self.q_gen[i]
            if not (0 <= q < 2):
                raise InvalidParameterError("q-values must lie in [0, 2)")
            n = self.orders[i]
            if (n * q) % 1 or (n * n * q) % 2:
                raise InvalidParameterError("q is not well defined on Z/n_i")
            if len(self.b_matrix[i]) != r:
                raise InvalidParameterError("b matrix must be square")
            if (self.b_matrix[i][i] - q) % 1:
                raise InvalidParameterError("b(g, g) must equal q(g) mod 1")
            for j in range(r):
                bij = self.b_matrix[i][j]
                if not (0 <= bij < 1):
                    raise InvalidParameterError("b-values must lie in [0, 1)")
                if bij != self.b_matrix[j][i]:
                    raise InvalidParameterError("b must be symmetric")
                if (n * bij) % 1:
                    raise InvalidParameterError("b is not well defined on Z/n_i")

    @classmethod
    def make(cls, orders, q_gen, b_matrix) -> "FiniteQuadForm":
        return cls(
            tuple(int(n) for n in orders),
            tuple(Fraction(q) % 2 for q in q_gen),
            tuple(tuple(Fraction(x) % 1 for x in row) for row in b_matrix),
        )

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        s = 1
        for n in self.orders:
            s *= n
        return s

    def q(self, coords) -> Fraction:
        total = Fraction(0)
        for i, c in enumerate(coords):
            if c:
                total += c * c * self.q_gen[i]
        for i in range(len(coords)):
            for j in range(i + 1, len(coords)):
                if coords[i] and coords[j]:
                    total += 2 * coords[i] * coords[j] * self.b_matrix[i][j]
        return total % 2

    def b(self, coords1, coords2) -> Fraction:
        total = Fraction(0)
        for i, c in enumerate(coords1):
            if not c:
                continue
            for j, e in enumerate(coords2):
                if e:
                    total += c * e * self.b_matrix[i][j]
        return total % 1

    def zero(self) -> "DFElement":
        return DFElement(self, (0,) * self.rank)

    def element(self, coords) -> "DFElement":
        return DFElement(self, tuple(coords))

    def elements(self):
        """All elements in lexicographic coordinate order."""
        for coords in product(*(range(n) for n in self.orders)):
            yield DFElement(self, coords)

    def denominator(self) -> int:
        den = 1
        for q in self.q_gen:
            den = lcm(den, q.denominator)
        for row in self.b_matrix:
            for x in row:
                den = lcm(den, x.denominator)
        return den


@dataclass(frozen=True)
class DFElement:
    """Element of a FiniteQuadForm, coordinates reduced into [0, n_i)."""

    form: FiniteQuadForm
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.form.rank:
            raise InvalidElementError("coordinate length does not match rank")
        object.__setattr__(
            self,
            "coords",
            tuple(c % n for c, n in zip(self.coords, self.form.orders)),
        )

    def __add__(self, other: "DFElement") -> "DFElement":
        if self.form != other.form:
            raise InvalidElementError("elements live in different groups")
        return DFElement(
            self.form, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "DFElement":
        return DFElement(self.form, tuple(-c for c in self.coords))

    def __sub__(self, other: "DFElement") -> "DFElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "DFElement":
        return DFElement(self.form, tuple(k * c for c in self.coords))

    def order(self) -> int:
        o = 1
        for c, n in zip(self.coords, self.form.orders):
            o = lcm(o, n // gcd(n, c))
        return o

    def q(self) -> Fraction:
        return self.form.q(self.coords)

    def is_isotropic(self) -> bool:
        return self.q() == 0


@dataclass(frozen=True)
class DFIsometry:
    """Group isomorphism preserving q, stored by generator images.

    ``images[i]`` is the coordinate tuple (in the codomain) of the image of
    the i-th domain generator.
    """

    domain: FiniteQuadForm
    codomain: FiniteQuadForm
    images: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "images",
            tuple(
                tuple(c % n for c, n in zip(img, self.codomain.orders))
                for img in self.images
            ),
        )

    def apply(self, elem: DFElement) -> DFElement:
        if elem.form != self.domain:
            raise InvalidElementError("element not in the isometry's domain")
        out = [0] * self.codomain.rank
        for c, img in zip(elem.coords, self.images):
            if c:
                for j, x in enumerate(img):
                    out[j] += c * x
        return DFElement(self.codomain, tuple(out))

    def compose(self, other: "DFIsometry") -> "DFIsometry":
        """self after other."""
        if other.codomain != self.domain:
            raise InvalidIsometryError("isometries do not compose")
        return DFIsometry(
            other.domain,
            self.codomain,
            tuple(self.apply(DFElement(self.domain, img)).coords for img in other.images),
        )

    def is_identity(self) -> bool:
        if self.domain != self.codomain:
            return False
        return self.images == _identity_images(self.domain)

    def order(self) -> int:
        if self.domain != self.codomain:
            raise InvalidIsometryError("order requires an automorphism")
        power = self
        n = 1
        while not power.is_identity():
            power = self.compose(power)
            n += 1
            if n > 1_000_000:
                raise RuntimeError("automorphism order runaway (not an isometry?)")
        return n

    def inverse(self) -> "DFIsometry":
        if self.domain == self.codomain:
            n = self.order()
            power = identity_isometry(self.domain)
            for _ in range(n - 1):
                power = self.compose(power)
            return power
        table = {}
        for elem in self.domain.elements():
            table[self.apply(elem).coords] = elem.coords
        images = []
        for i in range(self.codomain.rank):
            unit = tuple(1 if j == i else 0 for j in range(self.codomain.rank))
            if unit not in table:
                raise InvalidIsometryError("map is not invertible")
            images.append(table[unit])
        return DFIsometry(self.codomain, self.domain, tuple(images))


def _identity_images(form: FiniteQuadForm) -> tuple[tuple[int, ...], ...]:
    r = form.rank
    return tuple(tuple(1 if j == i else 0 for j in range(r)) for i in range(r))


def identity_isometry(form: FiniteQuadForm) -> DFIsometry:
    return DFIsometry(form, form, _identity_images(form))


def neg_identity(form: FiniteQuadForm) -> DFIsometry:
    return DFIsometry(
        form, form, tuple(tuple(-x for x in img) for img in _identity_images(form))
    )


def _surjective_all_primes(domain, codomain, images) -> bool:
    """Nakayama-style check: surjective iff surjective on A/pA for all p."""
    if domain.size != codomain.size:
        return False
    for p in distinct_primes(codomain.size):
        rows = [j for j, n in enumerate(codomain.orders) if n % p == 0]
        cols = [i for i, n in enumerate(domain.orders) if n % p == 0]
        if len(rows) != len(cols):
            return False
        mat = IntMatrix.from_rows(
            [[images[i][j] % p for i in cols] for j in rows]
        )
        if mat.det() % p == 0:
            return False
    return True


def as_isometry(domain: FiniteQuadForm, codomain: FiniteQuadForm, images) -> DFIsometry:
    """Validate generator images and wrap them as a DFIsometry.

    Raises InvalidIsometryError when the images do not define a
    q-preserving group automorphism (or isomorphism onto the codomain).
    """
    images = tuple(tuple(int(x) for x in img) for img in images)
    if len(images) != domain.rank or any(
        len(img) != codomain.rank for img in images
    ):
        raise InvalidIsometryError("image shape does not match generator counts")
    images = tuple(
        tuple(c % n for c, n in zip(img, codomain.orders)) for img in images
    )
    for i, img in enumerate(images):
        n = domain.orders[i]
        for c, cn in zip(img, codomain.orders):
            if (n * c) % cn:
                raise InvalidIsometryError(
                    f"image of generator {i} has order not dividing {n}"
                )
    if not _surjective_all_primes(domain, codomain, images):
        raise InvalidIsometryError("images do not generate (map not bijective)")
    for i, img in enumerate(images):
        if codomain.q(img) != domain.q_gen[i]:
            raise InvalidIsometryError(f"q not preserved on generator {i}")
        for j in range(i + 1, domain.rank):
            if codomain.b(img, images[j]) != domain.b_matrix[i][j]:
                raise InvalidIsometryError(
                    f"pairing not preserved on generators ({i}, {j})"
                )
    return DFIsometry(domain, codomain, images)


@dataclass(frozen=True)
class LatticeForm:
    """Discriminant form of an even lattice, with converters both ways."""

    lattice: Lattice
    form: FiniteQuadForm
    diag: tuple[int, ...]  # full SNF diagonal, unit entries included
    u_rows: tuple[tuple[int, ...], ...]
    gens: tuple[RationalVector, ...]  # rational lifts of the form generators

    def element_from_dual(self, vec) -> DFElement:
        """Class in L*/L of a dual vector given in L's basis coordinates."""
        if not isinstance(vec, RationalVector):
            vec = RationalVector.make(vec)
        if not self.lattice.in_dual(vec):
            raise InvalidElementError("vector is not in the dual lattice")
        g = self.lattice.gram.entries
        n = self.lattice.rank
        dual_coords = [
            sum(g[i][j] * vec.coords[j] for j in range(n)) for i in range(n)
        ]
        coords = []
        for i in range(n):
            if self.diag[i] == 1:
                continue
            val = sum(self.u_rows[i][j] * dual_coords[j] for j in range(n))
            coords.append(int(val) % self.diag[i])
        return DFElement(self.form, tuple(coords))

    def lift(self, elem: DFElement) -> RationalVector:
        """A dual vector representing the class of ``elem``."""
        if elem.form != self.form:
            raise InvalidElementError("element does not belong to this form")
        vec = RationalVector(tuple(Fraction(0) for _ in range(self.lattice.rank)))
        for c, gen in zip(elem.coords, self.gens):
            if c:
                vec = vec + c * gen
        return vec


def from_lattice(lat) -> LatticeForm:
    """Discriminant form A = L*/L of an even lattice, via Smith normal form.

    Generators are the columns of the SNF transform V scaled by the
    invariant factors; unit factors are dropped.
    """
    if isinstance(lat, NSLattice):
        lat = lat.to_lattice()
    d_mat, u_mat, v_mat = smith_normal_form(lat.gram)
    n = lat.rank
    diag = tuple(d_mat.entries[i][i] for i in range(n))
    gens = []
    orders = []
    for i in range(n):
        if diag[i] == 1:
            continue
        col = v_mat.column(i)
        gens.append(RationalVector(tuple(Fraction(x, diag[i]) for x in col)))
        orders.append(diag[i])
    q_gen = tuple(g.square(lat.gram) % 2 for g in gens)
    b_matrix = tuple(
        tuple(x.pair(lat.gram, y) % 1 for y in gens) for x in gens
    )
    form = FiniteQuadForm(tuple(orders), q_gen, b_matrix)
    return LatticeForm(lat, form, diag, u_mat.entries, tuple(gens))


@dataclass(frozen=True)
class NSForm:
    """Discriminant form of the rank-two family member, with the canonical
    dual classes cached.

    ``vbar`` is the class of F/t (the fibre ray scaled to order t) and
    ``vprime`` the class of F'/t for the second isotropic ray F'.
    """

    d: int
    t: int
    lf: LatticeForm
    fstar: RationalVector
    hstar: RationalVector
    vbar: DFElement
    vprime: DFElement

    @property
    def m(self) -> int:
        return gcd(self.d, self.t)

    @property
    def form(self) -> FiniteQuadForm:
        return self.lf.form

    def fh(self, a: int, b: int) -> DFElement:
        """Class of a F* + b H* (the dual-basis coordinates of the family)."""
        vec = a * self.fstar + b * self.hstar
        return self.lf.element_from_dual(vec)


@lru_cache(maxsize=4096)
def ns_form(d: int, t: int) -> NSForm:
    """Cached discriminant-form bundle for the (d, t) member."""
    ns = ns_gram(d, t)
    lf = from_lattice(ns)
    fstar, hstar = dual_generators(ns)
    m = gcd(d, t)
    vbar = lf.element_from_dual(RationalVector((Fraction(0), Fraction(1, t))))
    vprime = lf.element_from_dual(
        RationalVector((Fraction(1, m), Fraction(-d, t * m)))
    )
    return NSForm(d, t, lf, fstar, hstar, vbar, vprime)


def structure_invariants(d: int, t: int) -> tuple[int, int]:
    """(a, b) with A = Z/a (+) Z/b, a = gcd(2d, t), b = t^2/a."""
    if t < 1:
        raise InvalidParameterError(f"t must be a positive integer, got {t}")
    a = gcd(2 * d, t)
    return a, t * t // a


def q_eval(d: int, t: int, a: int, b: int) -> Fraction:
    """q of the class a F* + b H*: the value 2a(bt - ad)/t^2 in [0, 2)."""
    if t < 1:
        raise InvalidParameterError(f"t must be a positive integer, got {t}")
    return Fraction(2 * a * (b * t - a * d), t * t) % 2


def b_eval(x: DFElement, y: DFElement) -> Fraction:
    """Bilinear pairing of two elements of the same group, in [0, 1)."""
    if x.form != y.form:
        raise InvalidElementError("elements live in different groups")
    return x.form.b(x.coords, y.coords)


def element_order(x: DFElement) -> int:
    return x.order()


def is_isotropic(x: DFElement) -> bool:
    return x.is_isotropic()


@dataclass(frozen=True)
class PrimaryPart:
    """p-primary component of a form, with projection and inclusion maps."""

    prime: int
    form: FiniteQuadForm
    parent: FiniteQuadForm
    indices: tuple[int, ...]  # positions of the parent generators involved
    cofactors: tuple[int, ...]  # m_i with n_i = p^a * m_i; part gen is m_i * g_i

    def project(self, elem: DFElement) -> DFElement:
        if elem.form != self.parent:
            raise InvalidElementError("element does not belong to the parent form")
        coords = []
        for pos, i in enumerate(self.indices):
            pk = self.form.orders[pos]
            inv = pow(self.cofactors[pos], -1, pk)
            coords.append(elem.coords[i] * inv % pk)
        return DFElement(self.form, tuple(coords))

    def embed(self, part_elem: DFElement) -> DFElement:
        if part_elem.form != self.form:
            raise InvalidElementError("element does not belong to this part")
        coords = [0] * self.parent.rank
        for pos, i in enumerate(self.indices):
            coords[i] = part_elem.coords[pos] * self.cofactors[pos]
        return DFElement(self.parent, tuple(coords))


def primary_decomposition(form: FiniteQuadForm) -> tuple[PrimaryPart, ...]:
    """Orthogonal p-primary pieces of the form, ordered by prime.

    The part at p is generated by the classes m_i g_i where n_i = p^a m_i
    with p not dividing m_i; q and b restrict accordingly.
    """
    parts = []
    for p in distinct_primes(form.size):
        indices = []
        part_orders = []
        cofactors = []
        for i, n in enumerate(form.orders):
            pk = 1
            while n % p == 0:
                pk *= p
                n //= p
            if pk > 1:
                indices.append(i)
                part_orders.append(pk)
                cofactors.append(n)
        q_gen = tuple(
            (form.q_gen[i] * m * m) % 2 for i, m in zip(indices, cofactors)
        )
        b_matrix = tuple(
            tuple(
                (form.b_matrix[i][j] * mi * mj) % 1
                for j, mj in zip(indices, cofactors)
            )
            for i, mi in zip(indices, cofactors)
        )
        part_form = FiniteQuadForm(tuple(part_orders), q_gen, b_matrix)
        parts.append(
            PrimaryPart(p, part_form, form, tuple(indices), tuple(cofactors))
        )
    return tuple(parts)


def _kernel_setup(struct_form: FiniteQuadForm, value_form: FiniteQuadForm):
    """Integerised data for the 2-generator scan kernels.

    ``struct_form`` supplies the group and the form candidate images are
    evaluated in; ``value_form`` supplies the values to hit.
    """
    den = lcm(struct_form.denominator(), value_form.denominator())
    if struct_form.rank == 1:
        n1, n2 = 1, struct_form.orders[0]
        q1, q2, b12 = 0, int(struct_form.q_gen[0] * den) % (2 * den), 0
        w1 = 0
        w2 = int(value_form.q_gen[0] * den) % (2 * den)
        w12 = 0
    else:
        n1, n2 = struct_form.orders
        q1 = int(struct_form.q_gen[0] * den) % (2 * den)
        q2 = int(struct_form.q_gen[1] * den) % (2 * den)
        b12 = int(struct_form.b_matrix[0][1] * den) % den
        w1 = int(value_form.q_gen[0] * den) % (2 * den)
        w2 = int(value_form.q_gen[1] * den) % (2 * den)
        w12 = int(value_form.b_matrix[0][1] * den) % den
    primes1 = distinct_primes(n1)
    primes2 = tuple(p for p in distinct_primes(n2) if n1 % p)
    return n1, n2, den, q1, q2, b12, w1, w2, w12, primes1, primes2


def _wrap_isometry(domain, codomain, rank, hit) -> DFIsometry:
    a, c, b, d = hit
    if rank == 1:
        return DFIsometry(domain, codomain, ((d,),))
    return DFIsometry(domain, codomain, ((a, c), (b, d)))


def isometry_group(form: FiniteQuadForm, cap: int | None = None) -> tuple[DFIsometry, ...]:
    """All automorphisms of the group preserving q (hence also b).

    Enumeration: candidate generator images with the right annihilating
    order, filtered by q on generators, pairing across generators and
    surjectivity prime by prime.  Budgeted by |A|.
    """
    if cap is None:
        cap = budget.isometry_cap()
    if form.size > cap:
        raise CapacityError(
            f"isometry enumeration budget is |A| <= {cap} "
            f"(K3FM_BUDGET overrides); got |A| = {form.size}",
            cap,
        )
    if form.rank == 0:
        return (identity_isometry(form),)
    if form.rank > 2:
        isos = _isometries_generic(form, form, first_only=False)
        return tuple(sorted(isos, key=lambda s: s.images))
    args = _kernel_setup(form, form)
    hits = kernels.scan_isometries(*args, first_only=False)
    isos = [_wrap_isometry(form, form, form.rank, h) for h in hits]
    return tuple(sorted(isos, key=lambda s: s.images))


def isometry_between(
    source: FiniteQuadForm, target: FiniteQuadForm, cap: int | None = None
) -> DFIsometry | None:
    """One isometry from ``source`` onto ``target`` or None.

    The generator orders must agree exactly (they are the group's Smith
    invariants, so this loses nothing).
    """
    if source.orders != target.orders:
        return None
    if cap is None:
        cap = budget.isometry_cap()
    if source.size > cap:
        raise CapacityError(
            f"isometry enumeration budget is |A| <= {cap} "
            f"(K3FM_BUDGET overrides); got |A| = {source.size}",
            cap,
        )
    if source.rank == 0:
        return DFIsometry(source, target, ())
    if source == target:
        return identity_isometry(source)
    if source.rank > 2:
        isos = _isometries_generic(source, target, first_only=True)
        return isos[0] if isos else None
    args = _kernel_setup(target, source)
    hits = kernels.scan_isometries(*args, first_only=True)
    if not hits:
        return None
    return _wrap_isometry(source, target, source.rank, hits[0])


def _isometries_generic(source, target, first_only):
    """Backtracking enumeration for forms with three or more generators.

    Rare path; budget was already checked by the caller.
    """
    all_elems = list(target.elements())
    candidates = []
    for i in range(source.rank):
        n = source.orders[i]
        want = source.q_gen[i]
        candidates.append(
            [
                e
                for e in all_elems
                if all((n * c) % cn == 0 for c, cn in zip(e.coords, target.orders))
                and e.q() == want
            ]
        )
    out = []
    chosen: list[DFElement] = []

    def rec(i):
        if out and first_only:
            return
        if i == source.rank:
            images = tuple(e.coords for e in chosen)
            if _surjective_all_primes(source, target, images):
                out.append(DFIsometry(source, target, images))
            return
        for e in candidates[i]:
            ok = True
            for j in range(i):
                if target.b(chosen[j].coords, e.coords) != source.b_matrix[j][i]:
                    ok = False
                    break
            if ok:
                chosen.append(e)
                rec(i + 1)
                chosen.pop()

    rec(0)
    return sorted(out, key=lambda s: s.images)
