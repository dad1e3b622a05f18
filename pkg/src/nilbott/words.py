"""Free-group words, finite presentations, sign twists and Fox calculus.

Words are stored freely reduced as tuples of (generator index, exponent).
Generator names are display metadata; all logic is index based.
"""

from __future__ import annotations

from .exact import IntMatrix, smith_normal_form


class Word:
    """Freely reduced word: ((gen, exp), ...) with exp != 0 and no adjacent
    repeats."""

    __slots__ = ("syllables",)

    def __init__(self, syllables=()):
        self.syllables = _reduce(syllables)

    def __iter__(self):
        return iter(self.syllables)

    def __len__(self):
        # letter count, not syllable count
        return sum(abs(e) for _, e in self.syllables)

    def __eq__(self, other):
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __repr__(self):
        return f"Word({list(self.syllables)})"

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word()
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.syllables

    def letters(self):
        """Yield single letters (gen, +1/-1) left to right."""
        for g, e in self.syllables:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield g, step

    def max_gen(self) -> int:
        return max((g for g, _ in self.syllables), default=-1)


def _reduce(syllables):
    out = []
    for g, e in syllables:
        e = int(e)
        if e == 0:
            continue
        if out and out[-1][0] == g:
            merged = out[-1][1] + e
            out.pop()
            if merged:
                out.append((g, merged))
        else:
            out.append((int(g), e))
    return tuple(out)


def free_reduce(w: Word) -> Word:
    return Word(w.syllables)


def gen(i: int, e: int = 1) -> Word:
    return Word(((i, e),))


def word_str(w: Word, names) -> str:
    if w.is_identity():
        return "1"
    parts = []
    for g, e in w:
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
    return " ".join(parts)


def parse_word(text: str, names) -> Word:
    """Parse letters-with-exponents notation, e.g. 'g h g^-1 h'."""
    index = {name: i for i, name in enumerate(names)}
    syllables = []
    for token in text.split():
        if "^" in token:
            name, _, exp = token.partition("^")
            try:
                e = int(exp)
            except ValueError:
                raise ValueError(f"bad exponent in token {token!r}")
        else:
            name, e = token, 1
        if name not in index:
            raise ValueError(f"unknown generator {name!r}")
        syllables.append((index[name], e))
    return Word(syllables)


class Presentation:
    """Finite presentation: generator names plus relator words."""

    def __init__(self, names, relators):
        self.names = tuple(names)
        self.relators = tuple(Word(r.syllables) for r in relators)
        for r in self.relators:
            if r.max_gen() >= len(self.names):
                raise ValueError("relator references undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.names)

    def __repr__(self):
        rels = "; ".join(word_str(r, self.names) for r in self.relators)
        return f"Presentation(<{' '.join(self.names)} | {rels}>)"


def parse_presentation(text: str) -> Presentation:
    """First line 'gens: a b ...', then one line per relator."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("gens:"):
        raise ValueError("presentation text must start with a 'gens:' line")
    names = lines[0][len("gens:"):].split()
    relators = [parse_word(ln, names) for ln in lines[1:]]
    return Presentation(names, relators)


def klein_presentation() -> Presentation:
    # g h g^-1 h, i.e. g h g^-1 = h^-1
    return Presentation(("g", "h"), [Word(((0, 1), (1, 1), (0, -1), (1, 1)))])


def torus_presentation() -> Presentation:
    return Presentation(("a", "b"), [Word(((0, 1), (1, 1), (0, -1), (1, -1)))])


class TwistMap:
    """Sign assignment on generators extending to a homomorphism to {+1,-1}."""

    __slots__ = ("signs",)

    def __init__(self, p: Presentation, signs):
        signs = tuple(int(s) for s in signs)
        if len(signs) != p.ngens or any(s not in (1, -1) for s in signs):
            raise ValueError("need one sign +1/-1 per generator")
        for r in p.relators:
            if _word_sign(r, signs) != 1:
                raise ValueError(
                    "sign assignment is not a homomorphism: relator "
                    f"{word_str(r, p.names)} maps to -1"
                )
        self.signs = signs

    def __call__(self, w) -> int:
        if isinstance(w, Word):
            return _word_sign(w, self.signs)
        return self.signs[w]

    def __eq__(self, other):
        return isinstance(other, TwistMap) and self.signs == other.signs

    def __repr__(self):
        return f"TwistMap{self.signs}"

    @property
    def is_trivial(self) -> bool:
        return all(s == 1 for s in self.signs)


def _word_sign(w: Word, signs) -> int:
    s = 1
    for g, e in w:
        if signs[g] == -1 and e % 2:
            s = -s
    return s


def fox_augmented(r: Word, target: int, phi: TwistMap) -> int:
    """Free derivative of r with respect to the target generator, pushed
    through the sign map.

    Satisfies the product rule fox(uv) = fox(u) + phi(u) * fox(v).
    """
    if not 0 <= target < len(phi.signs):
        raise ValueError("generator index out of range")
    total = 0
    prefix_sign = 1
    for g, step in r.letters():
        s = phi.signs[g]
        if g == target:
            if step == 1:
                # d(x)/dx = 1 at this prefix
                total += prefix_sign
            else:
                # d(x^-1)/dx = -x^-1
                total -= prefix_sign * s
        prefix_sign *= s
    return total


def relator_matrix(p: Presentation) -> IntMatrix:
    """Exponent-sum matrix, one row per relator."""
    rows = []
    for r in p.relators:
        row = [0] * p.ngens
        for g, e in r:
            row[g] += e
        rows.append(row)
    if not rows:
        rows = [[0] * p.ngens]
    return IntMatrix(rows)


def abelianization(p: Presentation) -> tuple[int, list[int]]:
    """(free rank, invariant factors > 1) of the abelianized group."""
    d, _, _ = smith_normal_form(relator_matrix(p))
    nonzero = [x for x in d if x != 0]
    rank = p.ngens - len(nonzero)
    torsion = [x for x in nonzero if x > 1]
    return rank, torsion
