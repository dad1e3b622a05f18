"""Consistent polycyclic presentations with collection-based normal forms.

A presentation has ordered generators x_0 < x_1 < ... < x_{m-1}, all of
infinite relative order, with the subnormal chain
<x_{m-1}>  <|  <x_{m-2}, x_{m-1}>  <|  ...  <|  G.
For i < j the conjugates x_i x_j x_i^-1 and x_i^-1 x_j x_i are words in
generators of index >= j.  Power relations are not supported: every group
here is torsion-free.

Normal forms are exponent vectors (e_0, ..., e_{m-1}) meaning
x_0^{e_0} ... x_{m-1}^{e_{m-1}}.  Multiplication collects from the left:
the lowest-index letters are merged first and their conjugation action is
pushed into the tail, which is the standard terminating strategy for
consistent presentations.

Only the positive conjugation rules are supplied; the inverse rules are
derived at construction by a triangular solve (the conjugation action
preserves the chain, so its leading coefficients must be units).  A
presentation whose inverse rules fail to solve is recorded as defective
and reported by consistency_check.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import smith_normal_form, IntMatrix
from .words import Word, gen, parse_word, word_str


class PcError(Exception):
    pass


class InconsistentPresentation(PcError):
    pass


NormalForm = tuple  # exponent vector, one int per generator


@dataclass
class ConsistencyResult:
    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok


class PcPresentation:
    """Polycyclic presentation; immutable once constructed.

    conj maps (i, j) with i < j to the word x_i x_j x_i^-1.  Pairs not
    listed default to the trivial rule x_i x_j x_i^-1 = x_j.
    """

    def __init__(self, names, conj=None):
        self.names = tuple(names)
        m = len(self.names)
        if m == 0:
            raise ValueError("need at least one generator")
        if len(set(self.names)) != m:
            raise ValueError("duplicate generator names")
        self._m = m
        self._rules: dict[tuple[int, int, int], NormalForm] = {}
        self._defects: list[tuple] = []

        given: dict[tuple[int, int], Word] = {}
        for (i, j), w in (conj or {}).items():
            if not (0 <= i < j < m):
                raise ValueError(f"bad rule pair ({i}, {j})")
            if not isinstance(w, Word):
                w = Word(w)
            for g, _ in w:
                if g < j or g >= m:
                    raise ValueError(
                        f"rule x_{i} x_{j} x_{i}^-1 output must use "
                        f"generators of index >= {j}"
                    )
            given[(i, j)] = w
        self._assemble(given)

    @property
    def ngens(self) -> int:
        return self._m

    def __repr__(self):
        return f"PcPresentation(<{' '.join(self.names)}>)"

    # -- assembly ---------------------------------------------------------

    def _assemble(self, given):
        m = self._m
        for i in range(m - 2, -1, -1):
            for j in range(i + 1, m):
                w = given.get((i, j), gen(j))
                try:
                    nf = self._collect_from(w, j)
                except PcError as exc:
                    self._defects.append((i, j, f"rule output: {exc}"))
                    nf = self._unit(j)
                self._rules[(i, j, 1)] = nf
            for j in range(i + 1, m):
                try:
                    self._rules[(i, j, -1)] = self._solve_inverse(i, j)
                except PcError as exc:
                    self._defects.append((i, j, str(exc)))
                    self._rules[(i, j, -1)] = self._unit(j)

    def _solve_inverse(self, i, j):
        """Find z with x_i z x_i^-1 = x_j, i.e. the rule x_i^-1 x_j x_i."""
        m = self._m
        target = self._unit(j)
        z = [0] * m
        for l in range(j, m):
            rl = self._rules[(i, l, 1)]
            lead = rl[l]
            if lead == 0 or target[l] % lead:
                raise InconsistentPresentation(
                    f"conjugation by {self.names[i]} is not invertible at "
                    f"{self.names[l]}"
                )
            s = target[l] // lead
            z[l] = s
            target = self._mult(self._invert(self._power(rl, s, l), l), target, l)
        if any(target):
            raise InconsistentPresentation(
                f"conjugation by {self.names[i]} is not surjective at "
                f"{self.names[j]}"
            )
        return tuple(z)

    # -- vector arithmetic --------------------------------------------------

    def _unit(self, j, e=1) -> NormalForm:
        return tuple(e if t == j else 0 for t in range(self._m))

    def identity(self) -> NormalForm:
        return (0,) * self._m

    def _mult(self, a, b, lvl=0) -> NormalForm:
        m = self._m
        if lvl >= m:
            return (0,) * m
        a1, b1 = a[lvl], b[lvl]
        a_tail = _zero_at(a, lvl)
        if b1 and any(a_tail):
            a_tail = self._conj(a_tail, lvl, -b1)
        tail = self._mult(a_tail, _zero_at(b, lvl), lvl + 1)
        return tail[:lvl] + (a1 + b1,) + tail[lvl + 1:]

    def _conj(self, v, i, t) -> NormalForm:
        """x_i^t v x_i^-t for v supported on indices > i."""
        sign = 1 if t > 0 else -1
        for _ in range(abs(t)):
            out = (0,) * self._m
            for j in range(i + 1, self._m):
                if v[j]:
                    key = (i, j, sign)
                    if key not in self._rules:
                        raise InconsistentPresentation(
                            f"missing conjugation rule for "
                            f"({self.names[i]}, {self.names[j]}, {sign})"
                        )
                    out = self._mult(out, self._power(self._rules[key], v[j], j), i + 1)
            v = out
        return v

    def _power(self, v, e, lvl) -> NormalForm:
        if e == 0:
            return (0,) * self._m
        if e < 0:
            return self._power(self._invert(v, lvl), -e, lvl)
        half = self._power(v, e // 2, lvl)
        out = self._mult(half, half, lvl)
        if e % 2:
            out = self._mult(out, v, lvl)
        return out

    def _invert(self, v, lvl=0) -> NormalForm:
        m = self._m
        if lvl >= m:
            return (0,) * m
        v1 = v[lvl]
        tail_inv = self._invert(_zero_at(v, lvl), lvl + 1)
        if v1 and any(tail_inv):
            tail_inv = self._conj(tail_inv, lvl, v1)
        return tail_inv[:lvl] + (-v1,) + tail_inv[lvl + 1:]

    def _collect_from(self, w: Word, lvl) -> NormalForm:
        out = (0,) * self._m
        for g, e in w:
            if not lvl <= g < self._m:
                raise PcError(f"generator index {g} out of range")
            out = self._mult(out, self._unit(g, e), lvl)
        return out

    def require_consistent(self):
        if self._defects:
            i, j, msg = self._defects[0]
            raise InconsistentPresentation(msg)

    # -- parsing helpers ----------------------------------------------------

    def word(self, text: str) -> Word:
        return parse_word(text, self.names)

    def nf_str(self, v: NormalForm) -> str:
        return word_str(nf_to_word(v), self.names)

    def rule(self, i, j, sign=1) -> NormalForm:
        return self._rules[(i, j, sign)]

    def positive_rules(self):
        for i in range(self._m):
            for j in range(i + 1, self._m):
                yield (i, j), self._rules[(i, j, 1)]

    def relators(self) -> list[Word]:
        """Defining relators x_i x_j x_i^-1 w^-1, one per positive rule."""
        rels = []
        for (i, j), w in self.positive_rules():
            lhs = gen(i) * gen(j) * gen(i, -1)
            rels.append(lhs * nf_to_word(w).inverse())
        return rels


def _zero_at(v, lvl):
    return v[:lvl] + (0,) + v[lvl + 1:]


def nf_to_word(v: NormalForm) -> Word:
    return Word(tuple((i, e) for i, e in enumerate(v) if e))


def collect(p: PcPresentation, w: Word) -> NormalForm:
    p.require_consistent()
    return p._collect_from(w, 0)


def nf_multiply(p: PcPresentation, a: NormalForm, b: NormalForm) -> NormalForm:
    p.require_consistent()
    return p._mult(a, b)


def nf_invert(p: PcPresentation, a: NormalForm) -> NormalForm:
    p.require_consistent()
    return p._invert(a)


def nf_power(p: PcPresentation, a: NormalForm, e: int) -> NormalForm:
    p.require_consistent()
    return p._power(a, e, 0)


def consistency_check(p: PcPresentation) -> ConsistencyResult:
    """Overlap test: associativity on all triples of signed generators.

    Also reports assembly defects (non-invertible conjugation rules) and
    checks that the derived inverse rules undo the positive ones.
    """
    if p._defects:
        i, j, msg = p._defects[0]
        return ConsistencyResult(
            ok=False,
            witness=(gen(i), gen(j), gen(i, -1)),
            detail=msg,
        )
    m = p.ngens
    units = [p._unit(i, e) for i in range(m) for e in (1, -1)]
    try:
        for i in range(m):
            for j in range(i + 1, m):
                back = p._conj(p._conj(p._unit(j), i, 1), i, -1)
                if back != p._unit(j):
                    return ConsistencyResult(
                        False,
                        (gen(i), gen(j), gen(i, -1)),
                        f"inverse rule mismatch at ({p.names[i]}, {p.names[j]})",
                    )
        for a in units:
            for b in units:
                ab = p._mult(a, b)
                for c in units:
                    left = p._mult(ab, c)
                    right = p._mult(a, p._mult(b, c))
                    if left != right:
                        witness = tuple(nf_to_word(x) for x in (a, b, c))
                        return ConsistencyResult(
                            False,
                            witness,
                            f"overlap collects to {p.nf_str(left)} vs "
                            f"{p.nf_str(right)}",
                        )
    except InconsistentPresentation as exc:
        return ConsistencyResult(False, None, str(exc))
    return ConsistencyResult(True)


def substitute(w: Word, images: list[Word]) -> Word:
    """Apply the generator substitution g_i -> images[i] to w."""
    out = Word()
    for g, step in w.letters():
        if g >= len(images):
            raise PcError(f"no image for generator index {g}")
        out = out * (images[g] if step == 1 else images[g].inverse())
    return out


def verify_homomorphism(src, dst: PcPresentation, images) -> bool:
    """True iff every relator of src collects to the identity in dst.

    src may be a finite Presentation (words module) or a PcPresentation;
    images are words over dst's generators, one per src generator.
    """
    relators = src.relators() if isinstance(src, PcPresentation) else src.relators
    ngens = src.ngens
    if len(images) != ngens:
        raise PcError("need one image word per source generator")
    for r in relators:
        if collect(dst, substitute(r, images)) != dst.identity():
            return False
    return True


def verify_isomorphism(a: PcPresentation, b: PcPresentation, fwd, bwd) -> bool:
    """Check fwd: a -> b and bwd: b -> a are mutually inverse isomorphisms."""
    if not verify_homomorphism(a, b, fwd) or not verify_homomorphism(b, a, bwd):
        return False
    for i in range(a.ngens):
        if collect(a, substitute(fwd[i], bwd)) != a._unit(i):
            return False
    for i in range(b.ngens):
        if collect(b, substitute(bwd[i], fwd)) != b._unit(i):
            return False
    return True


def commutator_fiber_index(p: PcPresentation) -> str:
    """'trivial' if the last generator is centralized by every generator,
    'index-2' if some generator inverts it."""
    fiber = p.ngens - 1
    for i in range(fiber):
        if p.rule(i, fiber) != p._unit(fiber):
            return "index-2"
    return "trivial"


def pc_abelianization(p: PcPresentation) -> tuple[int, list[int]]:
    """(free rank, invariant factors > 1) of p's abelianization."""
    rows = []
    for (i, j), w in p.positive_rules():
        row = list(p._unit(j))
        for t, e in enumerate(w):
            row[t] -= e
        rows.append(row)
    if not rows:
        return p.ngens, []
    d, _, _ = smith_normal_form(IntMatrix(rows))
    nonzero = [x for x in d if x != 0]
    return p.ngens - len(nonzero), [x for x in nonzero if x > 1]


def cyclic_pc(name: str = "g") -> PcPresentation:
    return PcPresentation((name,))


def parse_pc_presentation(text: str) -> PcPresentation:
    """Parse 'gens: g h n ; g n g^-1 = n^-1 ; g h g^-1 = n^2 h^-1'."""
    segments = [s.strip() for s in text.split(";") if s.strip()]
    if not segments or not segments[0].startswith("gens:"):
        raise ValueError("pc presentation must start with a 'gens:' segment")
    names = tuple(segments[0][len("gens:"):].split())
    index = {n: i for i, n in enumerate(names)}
    conj = {}
    for seg in segments[1:]:
        if "=" not in seg:
            raise ValueError(f"rule {seg!r} has no '='")
        lhs, _, rhs = seg.partition("=")
        lw = parse_word(lhs, names)
        sylls = lw.syllables
        if (
            len(sylls) != 3
            or sylls[0][0] != sylls[2][0]
            or sylls[0][1] != 1
            or sylls[2][1] != -1
            or sylls[1][1] != 1
        ):
            raise ValueError(f"rule left side must be 'a b a^-1', got {lhs!r}")
        i, j = sylls[0][0], sylls[1][0]
        if not i < j:
            raise ValueError(f"rule {seg!r} must conjugate a later generator")
        if (i, j) in conj:
            raise ValueError(f"duplicate rule for ({names[i]}, {names[j]})")
        conj[(i, j)] = parse_word(rhs, names)
    _ = index
    return PcPresentation(names, conj)


def format_pc_presentation(p: PcPresentation) -> str:
    parts = ["gens: " + " ".join(p.names)]
    for (i, j), w in p.positive_rules():
        lhs = f"{p.names[i]} {p.names[j]} {p.names[i]}^-1"
        parts.append(f"{lhs} = {p.nf_str(w)}")
    return " ; ".join(parts)
