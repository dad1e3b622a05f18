"""Twisted second cohomology of the flat 2-dimensional base groups, cocycle
extraction from built extensions, class orders, and the restriction and
transfer criteria that decide finite versus infinite type.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd

from .exact import smith_normal_form, IntMatrix
from .polycyclic import (
    PcPresentation,
    collect,
    nf_multiply,
    nf_invert,
    nf_to_word,
)
from .words import Word, Presentation, TwistMap, fox_augmented, parse_word


@dataclass(frozen=True)
class CohomologyResult:
    """Cokernel description of the twisted H^2 plus where the distinguished
    relator-lift class lands (always the element '1' of the presentation)."""

    free_rank: int
    torsion: tuple[int, ...]
    generator_image: int = 1

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z_{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.describe()


def base_kind(p: Presentation) -> str:
    """'klein' or 'torus' for the two one-relator surface bases in scope."""
    if len(p.relators) != 1 or p.ngens != 2:
        raise ValueError("expected a 2-generator one-relator presentation")
    row = [0, 0]
    for g, e in p.relators[0]:
        row[g] += e
    if row == [0, 0]:
        return "torus"
    if sorted(abs(x) for x in row) == [0, 2]:
        return "klein"
    raise ValueError("presentation is not a torus or Klein bottle group")


def h2_one_relator(p: Presentation, phi: TwistMap) -> CohomologyResult:
    """H^2 with sign-twisted integer coefficients for a one-relator
    aspherical surface presentation: the cokernel of the map whose entries
    are the twisted free derivatives of the relator."""
    if len(p.relators) != 1:
        raise ValueError("h2_one_relator needs exactly one relator")
    base_kind(p)
    r = p.relators[0]
    row = [fox_augmented(r, g, phi) for g in range(p.ngens)]
    d, _, _ = smith_normal_form(IntMatrix([row]))
    nonzero = [x for x in d if x != 0]
    free_rank = 1 - len(nonzero)
    torsion = tuple(x for x in nonzero if x > 1)
    return CohomologyResult(free_rank, torsion)


@dataclass(frozen=True)
class ClassOrder:
    kind: str  # "finite" | "infinite"
    order: int | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __str__(self):
        return f"finite({self.order})" if self.is_finite else "infinite"


def class_order(base: Presentation, phi: TwistMap, k: int) -> ClassOrder:
    """Order of k times the distinguished class in the twisted H^2."""
    h2 = h2_one_relator(base, phi)
    if h2.free_rank > 0:
        return ClassOrder("finite", 1) if k == 0 else ClassOrder("infinite")
    if not h2.torsion:
        return ClassOrder("finite", 1)
    d = h2.torsion[0]
    return ClassOrder("finite", d // gcd(k, d))


# -- cocycles from built extensions ----------------------------------------


def fiber_signs(ext: PcPresentation) -> tuple[int, ...]:
    """Conjugation sign of the fiber (last generator) per base generator."""
    fiber = ext.ngens - 1
    signs = []
    for i in range(fiber):
        rule = ext.rule(i, fiber)
        if rule == ext._unit(fiber):
            signs.append(1)
        elif rule == ext._unit(fiber, -1):
            signs.append(-1)
        else:
            raise ValueError("last generator is not a sign-twisted fiber")
    return tuple(signs)


def base_of_extension(ext: PcPresentation) -> PcPresentation:
    """The quotient by the fiber: drop the last generator coordinate."""
    fiber = ext.ngens - 1
    if fiber == 0:
        raise ValueError("extension has no base")
    conj = {}
    for (i, j), w in ext.positive_rules():
        if j < fiber:
            conj[(i, j)] = nf_to_word(w[:fiber])
    return PcPresentation(ext.names[:fiber], conj)


def _box(ngens: int, window: int):
    return product(range(-window, window + 1), repeat=ngens)


class CocycleTable:
    """The 2-cocycle of an extension, read off its normal-form section.

    The section sends a base normal form to the extension normal form with
    fiber exponent zero (optionally shifted by a bounded function, which is
    how the section-independence properties are exercised).  Values are
    precomputed on the window box and computed on demand elsewhere.
    """

    def __init__(self, ext: PcPresentation, window: int = 3, section_shift=None):
        if window < 2:
            raise ValueError("window must be at least 2")
        ext.require_consistent()
        self.ext = ext
        self.window = window
        self.fiber = ext.ngens - 1
        self.base = base_of_extension(ext)
        self.signs = fiber_signs(ext)
        self._shift = section_shift if section_shift is not None else (lambda a: 0)
        self._cache: dict[tuple, int] = {}
        self.table = {}
        for a in _box(self.fiber, window):
            for b in _box(self.fiber, window):
                self.table[(a, b)] = self.value(a, b)

    def section(self, a) -> tuple:
        return tuple(a) + (self._shift(tuple(a)),)

    def phi(self, a) -> int:
        s = 1
        for e, sg in zip(a, self.signs):
            if sg == -1 and e % 2:
                s = -s
        return s

    def value(self, a, b) -> int:
        a, b = tuple(a), tuple(b)
        key = (a, b)
        if key not in self._cache:
            ab = nf_multiply(self.base, a, b)
            lift = nf_multiply(
                self.ext,
                nf_multiply(self.ext, self.section(a), self.section(b)),
                nf_invert(self.ext, self.section(ab)),
            )
            if any(lift[:self.fiber]):
                raise ValueError("section lift did not land in the fiber")
            self._cache[key] = lift[self.fiber]
        return self._cache[key]

    def identity_defect(self, a, b, c) -> int:
        """phi(a) f(b,c) - f(ab,c) + f(a,bc) - f(a,b); zero iff the cocycle
        identity holds on the triple."""
        ab = nf_multiply(self.base, a, b)
        bc = nf_multiply(self.base, b, c)
        return (
            self.phi(a) * self.value(b, c)
            - self.value(ab, c)
            + self.value(a, bc)
            - self.value(a, b)
        )


def seifert_multiply(phi, f: CocycleTable, a, b):
    """Group law on (fiber exponent, base element) pairs:
    (n, x)(m, y) = (n + phi(x) m + f(x, y), x y)."""
    na, xa = a
    nb, xb = b
    _check_window(f, xa)
    _check_window(f, xb)
    sign = _phi_of(phi, f, xa)
    return (na + sign * nb + f.value(xa, xb), nf_multiply(f.base, xa, xb))


def seifert_invert(phi, f: CocycleTable, a):
    na, xa = a
    xinv = nf_invert(f.base, xa)
    sign = _phi_of(phi, f, xa)
    return (-sign * (na + f.value(xa, xinv)), xinv)


def _phi_of(phi, f: CocycleTable, x) -> int:
    if phi is None:
        return f.phi(x)
    if isinstance(phi, TwistMap):
        signs = phi.signs
    else:
        signs = tuple(phi)
    s = 1
    for e, sg in zip(x, signs):
        if sg == -1 and e % 2:
            s = -s
    return s


def _check_window(f: CocycleTable, x):
    if any(abs(e) > f.window for e in x):
        raise ValueError("base element outside the cocycle table window")


def cocycle_from_extension(ext: PcPresentation, window: int = 3) -> CocycleTable:
    return CocycleTable(ext, window)


def relator_pairing(f: CocycleTable, relator: Word) -> int:
    """Fiber exponent of the relator lifted through the section.

    For the defining relator of a built extension this recovers the lift
    integer k.
    """
    acc = (0, f.base.identity())
    for g, step in relator.letters():
        if g >= f.fiber:
            raise ValueError("relator references a non-base generator")
        letter = (0, f.base._unit(g))
        if step == -1:
            letter = seifert_invert(None, f, letter)
        acc = seifert_multiply(None, f, acc, letter)
    n, x = acc
    if any(x):
        raise ValueError("word is not a relator of the base")
    return n


# -- type criteria -----------------------------------------------------------


def _carries_holonomy(ext: PcPresentation, i: int) -> bool:
    """True if base generator i twists the fiber or acts nontrivially on
    later base generators."""
    fiber = ext.ngens - 1
    if ext.rule(i, fiber) != ext._unit(fiber):
        return True
    return any(ext.rule(i, j) != ext._unit(j) for j in range(i + 1, fiber))


def lattice_generators(ext: PcPresentation) -> list[tuple]:
    """Generators of the finite-index free abelian subgroup of the base on
    which the extension restricts to a central one: squares of
    holonomy-carrying generators, the others unsquared."""
    fiber = ext.ngens - 1
    gens = []
    for i in range(fiber):
        e = 2 if _carries_holonomy(ext, i) else 1
        gens.append(ext._unit(i, e))
    return gens


def restriction_nonzero(ext: PcPresentation) -> bool:
    """True iff the restriction of the extension class to the translation
    lattice of the base is nonzero, i.e. some pair of commuting lattice
    generators picks up a fiber power in the extension.  Decides infinite
    type."""
    ext.require_consistent()
    fiber = ext.ngens - 1
    gens = lattice_generators(ext)
    nonzero = False
    for s, a in enumerate(gens):
        for b in gens[s + 1:]:
            comm = nf_multiply(
                ext,
                nf_multiply(ext, a, b),
                nf_invert(ext, nf_multiply(ext, b, a)),
            )
            if any(comm[:fiber]):
                raise ValueError(
                    "lattice generators do not commute in the base; "
                    "not a depth-supported extension"
                )
            if comm[fiber] != 0:
                nonzero = True
    return nonzero


#: index-2 untwisted subgroup of each nontrivially twisted base, as
#: generator words over the base and the subgroup's own base kind.
_UNTWISTED_SUBGROUPS = {
    ("klein", (1, -1)): (("g", "h^2"), "klein"),
    ("klein", (-1, 1)): (("g^2", "h"), "torus"),
    ("klein", (-1, -1)): (("g h", "h^2"), "klein"),
    ("torus", (1, -1)): (("a", "b^2"), "torus"),
    ("torus", (-1, 1)): (("a^2", "b"), "torus"),
    ("torus", (-1, -1)): (("a b", "b^2"), "torus"),
}


def untwisted_subgroup(base: Presentation, phi: TwistMap):
    """Generator words and kind of the index-2 subgroup on which the twist
    is trivial."""
    kind = base_kind(base)
    key = (kind, phi.signs)
    if key not in _UNTWISTED_SUBGROUPS:
        raise ValueError("twist map is trivial; no index-2 untwisted subgroup")
    words_text, sub_kind = _UNTWISTED_SUBGROUPS[key]
    names = ("g", "h") if kind == "klein" else ("a", "b")
    return [parse_word(t, names) for t in words_text], sub_kind


def _subgroup_relator(u: Word, v: Word, kind: str) -> Word:
    if kind == "klein":
        return u * v * u.inverse() * v
    return u * v * u.inverse() * v.inverse()


def transfer_identity_check(base: Presentation, phi: TwistMap, k: int) -> bool:
    """Verify the transfer constraint: if the class restricts to zero on the
    index-2 untwisted subgroup, then twice the class must vanish upstairs.
    """
    if phi.is_trivial:
        raise ValueError("transfer check needs a nontrivial twist")
    from .towers import build_extension, base_pc  # local to avoid a cycle

    (u, v), sub_kind = untwisted_subgroup(base, phi)
    ext = build_extension(base_pc(base), phi, [k])
    lifted = collect(ext, _subgroup_relator(u, v, sub_kind))
    if any(lifted[:-1]):
        raise ValueError("subgroup relator did not lift to a fiber power")
    k_restricted = lifted[-1]
    if sub_kind == "torus":
        vanishes = k_restricted == 0
    else:
        vanishes = k_restricted % 2 == 0
    if not vanishes:
        return True  # restriction nonzero: the identity imposes nothing
    doubled = class_order(base, phi, 2 * k)
    return doubled.is_finite and doubled.order == 1
