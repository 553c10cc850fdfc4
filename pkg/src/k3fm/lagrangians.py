"""Lagrangian elements and subgroups of the discriminant group of the
(d, t) family, the canonical generator pair, the selector involution, the
unit-group action and orbit counting under a cyclic Hodge-isometry group.

A Lagrangian element is an isotropic element of order t in a group of
size t^2; a Lagrangian subgroup is cyclic of order t and isotropic.  The
only Lagrangian subgroups are mixtures of the two canonical ones, so a
subgroup is stored as a choice, per prime dividing m = gcd(d, t), between
the p-part of <vbar> and the p-part of <vprime>.  That selector encoding
is what keeps squarefree t with many prime factors (t around 510510)
cheap: subgroups are never materialized unless asked for.
"""

from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt

from . import budget, kernels
from .discforms import DFElement, DFIsometry, neg_identity, ns_form
from .errors import (
    CapacityError,
    InvalidElementError,
    InvalidIsometryError,
    InvalidParameterError,
    InvalidSubgroupError,
)
from .intmath import crt_combine, distinct_primes, solve_linear_congruence, totient

# The family's surfaces have rank-two Picard lattices, so the
# transcendental rank is fixed at 22 - 2.
TRANSCENDENTAL_RANK = 20

SELECT_V = "V"
SELECT_VPRIME = "Vprime"


@dataclass(frozen=True)
class LagrangianElement:
    """Isotropic element whose order is the square root of the group size."""

    elem: DFElement

    def __post_init__(self):
        t = self.t
        if t * t != self.elem.form.size:
            raise InvalidElementError("group size is not a perfect square")
        if self.elem.order() != t:
            raise InvalidElementError(
                f"element order {self.elem.order()} != {t}"
            )
        if not self.elem.is_isotropic():
            raise InvalidElementError("element is not isotropic")

    @property
    def t(self) -> int:
        return isqrt(self.elem.form.size)

    @property
    def coords(self) -> tuple[int, ...]:
        return self.elem.coords


@dataclass(frozen=True)
class LagrangianSubgroup:
    """Cyclic isotropic subgroup of order t, stored by per-prime selector.

    ``selector`` maps each prime dividing m = gcd(d, t) to SELECT_V or
    SELECT_VPRIME; at every other prime dividing t the two canonical
    subgroups agree and no choice exists.
    """

    d: int
    t: int
    selector: tuple[tuple[int, str], ...]
    generator: DFElement

    def __post_init__(self):
        m = gcd(self.d, self.t)
        primes = distinct_primes(m)
        if tuple(p for p, _ in self.selector) != primes:
            raise InvalidSubgroupError(
                f"selector primes must be exactly {primes}"
            )
        if any(c not in (SELECT_V, SELECT_VPRIME) for _, c in self.selector):
            raise InvalidSubgroupError("selector values must be V or Vprime")
        if self.generator.order() != self.t:
            raise InvalidSubgroupError("generator does not have order t")
        if not self.generator.is_isotropic():
            raise InvalidSubgroupError("generator is not isotropic")

    def elements(self) -> tuple[DFElement, ...]:
        """All t elements, materialized.  Avoid for very large t."""
        return tuple(s * self.generator for s in range(self.t))

    def lagrangian_generators(self) -> tuple[LagrangianElement, ...]:
        """The phi(t) elements that generate this subgroup."""
        return tuple(
            LagrangianElement(s * self.generator)
            for s in range(self.t)
            if gcd(s, self.t) == 1
        )

    def contains(self, elem: DFElement) -> bool:
        return _in_cyclic(elem, self.generator)


def _prime_power_in(t: int, p: int) -> int:
    pk = 1
    while t % p == 0:
        pk *= p
        t //= p
    return pk


def _idempotents(t: int) -> dict[int, int]:
    """c_p = 1 mod p^k, 0 mod t/p^k, for each prime power p^k || t."""
    out = {}
    for p in distinct_primes(t):
        pk = _prime_power_in(t, p)
        cof = t // pk
        out[p] = cof * pow(cof, -1, pk) % t
    return out


def _in_cyclic(x: DFElement, g: DFElement) -> bool:
    """Whether x is a multiple of g, by solving s*g = x coordinatewise."""
    if x.form != g.form:
        raise InvalidElementError("elements live in different groups")
    res, mod = 0, 1
    for gi, xi, n in zip(g.coords, x.coords, x.form.orders):
        sol = solve_linear_congruence(gi, xi, n)
        if sol is None:
            return False
        c0, step = sol
        merged = crt_combine(res, mod, c0, step)
        if merged is None:
            return False
        res, mod = merged
    return True


def count_lagrangians(d: int, t: int) -> tuple[int, int]:
    """(element count, subgroup count) = (phi(t) 2^omega(m), 2^omega(m))."""
    if t < 1:
        raise InvalidParameterError(f"t must be a positive integer, got {t}")
    subs = 1 << len(distinct_primes(gcd(d, t)))
    return totient(t) * subs, subs


def canonical_pair(d: int, t: int) -> tuple[LagrangianElement, LagrangianElement]:
    """The classes of F/t and F'/t; equal subgroups iff gcd(d, t) = 1."""
    nf = ns_form(d, t)
    return LagrangianElement(nf.vbar), LagrangianElement(nf.vprime)


def enumerate_lagrangian_elements(d: int, t: int) -> list[LagrangianElement]:
    """Exact scan of the group for isotropic order-t elements.

    Sorted by coordinates.  The group has t^2 elements, so this is
    budgeted; use count_lagrangians past the budget.
    """
    nf = ns_form(d, t)
    form = nf.form
    cap = budget.element_cap()
    if form.size > cap:
        raise CapacityError(
            f"element enumeration budget is |A| <= {cap} "
            f"(K3FM_BUDGET overrides); got |A| = {form.size}",
            cap,
        )
    if form.rank == 0:
        return [LagrangianElement(form.zero())]
    den = form.denominator()
    if form.rank == 1:
        n1, n2 = 1, form.orders[0]
        q1, b12 = 0, 0
        q2 = int(form.q_gen[0] * den) % (2 * den)
    else:
        n1, n2 = form.orders
        q1 = int(form.q_gen[0] * den) % (2 * den)
        q2 = int(form.q_gen[1] * den) % (2 * den)
        b12 = int(form.b_matrix[0][1] * den) % den
    hits = kernels.scan_isotropic_elements(n1, n2, q1, q2, b12, den, t)
    if form.rank == 1:
        return [LagrangianElement(form.element((c2,))) for _, c2 in hits]
    return [LagrangianElement(form.element(c)) for c in hits]


def enumerate_lagrangian_subgroups(d: int, t: int) -> list[LagrangianSubgroup]:
    """All 2^omega(m) subgroups, by per-prime selector.

    The generator for a selector is assembled with the CRT idempotents of
    t, so the all-V subgroup is exactly <vbar> and the all-Vprime one is
    <vprime>.  Never enumerates elements, hence no budget.
    """
    nf = ns_form(d, t)
    m = gcd(d, t)
    flip_primes = distinct_primes(m)
    idem = _idempotents(t)
    forced = sum(
        (idem[p] for p in distinct_primes(t) if m % p), 0
    )
    out = []
    for choice in product((SELECT_V, SELECT_VPRIME), repeat=len(flip_primes)):
        gen = forced * nf.vbar if t > 1 else nf.form.zero()
        for p, c in zip(flip_primes, choice):
            base = nf.vbar if c == SELECT_V else nf.vprime
            gen = gen + idem[p] * base
        out.append(
            LagrangianSubgroup(d, t, tuple(zip(flip_primes, choice)), gen)
        )
    return sorted(out, key=lambda L: L.selector)


def subgroup_generated_by(d: int, t: int, w: LagrangianElement) -> LagrangianSubgroup:
    """The Lagrangian subgroup <w>, classified prime by prime.

    At each prime p | m the p-part of w must be a multiple of the p-part
    of vbar or of vprime; those are the only possibilities for a valid
    Lagrangian element.
    """
    nf = ns_form(d, t)
    if w.elem.form != nf.form:
        raise InvalidElementError("element does not live in this family group")
    m = gcd(d, t)
    idem = _idempotents(t)
    selector = []
    for p in distinct_primes(m):
        wp = idem[p] * w.elem
        if _in_cyclic(wp, idem[p] * nf.vbar):
            selector.append((p, SELECT_V))
        elif _in_cyclic(wp, idem[p] * nf.vprime):
            selector.append((p, SELECT_VPRIME))
        else:
            raise InvalidSubgroupError(
                f"p-part at {p} generates neither canonical subgroup"
            )
    for L in enumerate_lagrangian_subgroups(d, t):
        if L.selector == tuple(selector):
            if not _in_cyclic(w.elem, L.generator):
                raise InvalidSubgroupError(
                    "element is not in the subgroup its selector names"
                )
            return L
    raise InvalidSubgroupError("selector did not match any subgroup")


def involution(d: int, t: int, sub: LagrangianSubgroup) -> LagrangianSubgroup:
    """Flip every selector entry; the identity when m = 1."""
    if (sub.d, sub.t) != (d, t):
        raise InvalidSubgroupError("subgroup belongs to a different (d, t)")
    flipped = tuple(
        (p, SELECT_VPRIME if c == SELECT_V else SELECT_V)
        for p, c in sub.selector
    )
    for L in enumerate_lagrangian_subgroups(d, t):
        if L.selector == flipped:
            return L
    raise InvalidSubgroupError("flipped selector did not match any subgroup")


def units_action(k: int, w: LagrangianElement) -> LagrangianElement:
    """k * w = (k^-1 mod t) w, the action matching Jacobian relabelling."""
    t = w.t
    if gcd(k, t) != 1:
        raise InvalidParameterError(f"k = {k} is not a unit mod {t}")
    if t == 1:
        return w
    return LagrangianElement(pow(k, -1, t) * w.elem)


@dataclass(frozen=True)
class GSpec:
    """A cyclic Hodge-isometry group, given by its image on the
    discriminant group plus its abstract (even) order.

    The abstract order may exceed the image's order: the kernel acts
    trivially on the discriminant group.  Orders are constrained by the
    transcendental rank of the family (20): even, at most 2 * 20^2, with
    totient dividing 20.
    """

    generator: DFIsometry
    order: int

    def __post_init__(self):
        gen = self.generator
        if gen.domain != gen.codomain:
            raise InvalidIsometryError("generator must be an automorphism")
        if self.order < 2 or self.order % 2:
            raise InvalidParameterError("group order must be even and >= 2")
        if self.order > 2 * TRANSCENDENTAL_RANK**2 or TRANSCENDENTAL_RANK % totient(self.order):
            raise InvalidParameterError(
                f"order {self.order} is not realizable at transcendental "
                f"rank {TRANSCENDENTAL_RANK}"
            )
        img_order = gen.order()
        if self.order % img_order:
            raise InvalidParameterError(
                "abstract order must be a multiple of the image's order"
            )
        power = gen
        minus = neg_identity(gen.domain)
        seen_minus = power.images == minus.images
        for _ in range(img_order - 1):
            power = gen.compose(power)
            if power.images == minus.images:
                seen_minus = True
        if not seen_minus:
            raise InvalidParameterError("group image must contain -id")

    @classmethod
    def sign_group(cls, form, order: int = 2) -> "GSpec":
        """The minimal group {+-1}, or a larger one acting through it."""
        return cls(neg_identity(form), order)

    @property
    def kernel_order(self) -> int:
        return self.order // self.generator.order()

    def image_elements(self) -> tuple[DFIsometry, ...]:
        out = [self.generator]
        while not out[-1].is_identity():
            out.append(self.generator.compose(out[-1]))
        return tuple(out)


def _orbit_key(item):
    if isinstance(item, LagrangianElement):
        return item.coords
    return item.selector


def _apply_to_item(sigma: DFIsometry, item):
    if isinstance(item, LagrangianElement):
        return LagrangianElement(sigma.apply(item.elem))
    image_gen = LagrangianElement(sigma.apply(item.generator))
    return subgroup_generated_by(item.d, item.t, image_gen)


def g_orbits(items, g: GSpec):
    """Partition into orbits of the cyclic group; orbits sorted by their
    least member, members sorted too."""
    items = list(items)
    if not items:
        return ()
    for item in items:
        form = item.elem.form if isinstance(item, LagrangianElement) else item.generator.form
        if form != g.generator.domain:
            raise InvalidIsometryError(
                "group generator does not act on these items"
            )
    seen = set()
    orbits = []
    for item in sorted(items, key=_orbit_key):
        k = _orbit_key(item)
        if k in seen:
            continue
        orbit = [item]
        seen.add(k)
        current = _apply_to_item(g.generator, item)
        while _orbit_key(current) != k:
            ck = _orbit_key(current)
            if ck not in seen:
                orbit.append(current)
                seen.add(ck)
            current = _apply_to_item(g.generator, current)
        orbits.append(tuple(sorted(orbit, key=_orbit_key)))
    return tuple(sorted(orbits, key=lambda o: _orbit_key(o[0])))


def double_quotient(d: int, t: int, g: GSpec):
    """Classes of Lagrangian subgroups under G and the involution jointly.

    Returns (count, representatives); representatives are the least
    subgroup of each merged class.  This is the subgroup count feeding
    the Fourier-Mukai partner count.
    """
    subs = enumerate_lagrangian_subgroups(d, t)
    orbits = g_orbits(subs, g)
    orbit_of = {}
    for i, orbit in enumerate(orbits):
        for L in orbit:
            orbit_of[L.selector] = i
    merged = list(range(len(orbits)))

    def root(i):
        while merged[i] != i:
            i = merged[i]
        return i

    for i, orbit in enumerate(orbits):
        images = {orbit_of[involution(d, t, L).selector] for L in orbit}
        if len(images) != 1:
            raise RuntimeError("involution did not map a G-orbit to a G-orbit")
        j = images.pop()
        ri, rj = root(i), root(j)
        if ri != rj:
            merged[max(ri, rj)] = min(ri, rj)
    classes = {}
    for i, orbit in enumerate(orbits):
        classes.setdefault(root(i), []).append(orbit[0])
    reps = tuple(
        sorted((min(v, key=_orbit_key) for v in classes.values()), key=_orbit_key)
    )
    return len(reps), reps
