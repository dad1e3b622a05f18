"""Exact geometric models: affine isometries of flat n-space with sign
holonomy, and affine maps of the 3-dimensional nil geometry (the product
R x C with twisted multiplication), plus the catalogue representations,
relation verification, bounded freeness certificates, Euler numbers and
the quotient-action check for the nil lattices.

All arithmetic is exact (Fraction / Gaussian rational); nothing is ever
rounded.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .catalogue import catalogue_pc
from .exact import GaussRat, IntMatrix, solve_rational
from .polycyclic import PcPresentation, nf_to_word
from .words import Word


# -- flat affine maps --------------------------------------------------------


class FlatAffineMap:
    """x -> A x + b with A an orthogonal sign matrix and b exact rational."""

    __slots__ = ("lin", "trans")

    def __init__(self, lin: IntMatrix, trans):
        if lin.rows != lin.cols:
            raise ValueError("linear part must be square")
        if any(x not in (-1, 0, 1) for row in lin.entries for x in row):
            raise ValueError("linear part entries must be -1, 0 or 1")
        if not (lin * lin.transpose()).is_identity():
            raise ValueError("linear part must be orthogonal")
        trans = tuple(Fraction(t) for t in trans)
        if len(trans) != lin.rows:
            raise ValueError("translation length mismatch")
        self.lin = lin
        self.trans = trans

    @property
    def dim(self) -> int:
        return self.lin.rows

    @classmethod
    def translation(cls, vec) -> "FlatAffineMap":
        return cls(IntMatrix.identity(len(vec)), vec)

    def __eq__(self, other):
        return (
            isinstance(other, FlatAffineMap)
            and self.lin == other.lin
            and self.trans == other.trans
        )

    def __hash__(self):
        return hash((self.lin, self.trans))

    def __repr__(self):
        return f"FlatAffineMap({self.lin!r}, {self.trans})"

    def __mul__(self, other: "FlatAffineMap") -> "FlatAffineMap":
        lin = self.lin * other.lin
        trans = tuple(
            a + b for a, b in zip(self.lin.apply(other.trans), self.trans)
        )
        return FlatAffineMap(lin, trans)

    def inverse(self) -> "FlatAffineMap":
        inv = self.lin.transpose()
        return FlatAffineMap(inv, tuple(-t for t in inv.apply(self.trans)))

    def apply(self, point):
        return tuple(a + b for a, b in zip(self.lin.apply(point), self.trans))

    def is_identity(self) -> bool:
        return self.lin.is_identity() and all(t == 0 for t in self.trans)

    def fixed_point(self):
        """Exact solution of (A - I) x = -b, or None."""
        n = self.dim
        a = [
            [Fraction(self.lin.entries[i][j] - (1 if i == j else 0)) for j in range(n)]
            for i in range(n)
        ]
        return solve_rational(a, [-t for t in self.trans])


# -- nil geometry ------------------------------------------------------------


class HeisPoint:
    """Element (x, z) of R x C with (x,z)(y,w) = (x + y - Im(conj(z) w), z + w)."""

    __slots__ = ("x", "z")

    def __init__(self, x, z):
        self.x = Fraction(x)
        self.z = z if isinstance(z, GaussRat) else GaussRat(z)

    def __eq__(self, other):
        return isinstance(other, HeisPoint) and self.x == other.x and self.z == other.z

    def __hash__(self):
        return hash((self.x, self.z))

    def __repr__(self):
        return f"HeisPoint({self.x}, {self.z})"

    def __mul__(self, other: "HeisPoint") -> "HeisPoint":
        twist = (self.z.conj() * other.z).im
        return HeisPoint(self.x + other.x - twist, self.z + other.z)

    def inverse(self) -> "HeisPoint":
        return HeisPoint(-self.x, -self.z)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z.is_zero()

    @classmethod
    def identity(cls) -> "HeisPoint":
        return cls(0, GaussRat(0))


class HeisAut:
    """Automorphism z -> u z (conj: z -> u conj(z), x -> -x) with |u| = 1."""

    __slots__ = ("u", "conj")

    def __init__(self, u=GaussRat(1), conj=False):
        u = u if isinstance(u, GaussRat) else GaussRat(u)
        if not u.is_unit():
            raise ValueError("rotation part must be a unit Gaussian rational")
        self.u = u
        self.conj = bool(conj)

    def __eq__(self, other):
        return isinstance(other, HeisAut) and self.u == other.u and self.conj == other.conj

    def __hash__(self):
        return hash((self.u, self.conj))

    def __repr__(self):
        return f"HeisAut({self.u!r}, conj={self.conj})"

    def apply(self, p: HeisPoint) -> HeisPoint:
        if self.conj:
            return HeisPoint(-p.x, self.u * p.z.conj())
        return HeisPoint(p.x, self.u * p.z)

    def __mul__(self, other: "HeisAut") -> "HeisAut":
        u2 = other.u.conj() if self.conj else other.u
        return HeisAut(self.u * u2, self.conj != other.conj)

    def inverse(self) -> "HeisAut":
        if self.conj:
            return HeisAut(self.u, True)
        return HeisAut(self.u.conj(), False)

    def is_identity(self) -> bool:
        return not self.conj and self.u == GaussRat(1)


TAU = HeisAut(GaussRat(1), conj=True)


class HeisAffineMap:
    """p -> g * aut(p): the isometry-like maps of the nil geometry."""

    __slots__ = ("g", "aut")

    def __init__(self, g: HeisPoint, aut: HeisAut = None):
        self.g = g
        self.aut = aut if aut is not None else HeisAut()

    def __eq__(self, other):
        return (
            isinstance(other, HeisAffineMap)
            and self.g == other.g
            and self.aut == other.aut
        )

    def __hash__(self):
        return hash((self.g, self.aut))

    def __repr__(self):
        return f"HeisAffineMap({self.g!r}, {self.aut!r})"

    def __mul__(self, other: "HeisAffineMap") -> "HeisAffineMap":
        return HeisAffineMap(self.g * self.aut.apply(other.g), self.aut * other.aut)

    def inverse(self) -> "HeisAffineMap":
        inv = self.aut.inverse()
        return HeisAffineMap(inv.apply(self.g).inverse(), inv)

    def apply(self, p: HeisPoint) -> HeisPoint:
        return self.g * self.aut.apply(p)

    def is_identity(self) -> bool:
        return self.g.is_identity() and self.aut.is_identity()

    def fixed_point(self):
        """Exact fixed point (x, z), or None.

        The z-component satisfies a singular 2x2 rational system; the
        x-component is then determined (conj case) or free (rotations).
        """
        a, c = self.g.x, self.g.z
        u = self.aut.u
        if not self.aut.conj:
            if u == GaussRat(1):
                if c.is_zero() and a == 0:
                    return HeisPoint(0, GaussRat(0))
                return None
            z = c / (GaussRat(1) - u)
            if (c.conj() * (u * z)).im != a:
                return None
            return HeisPoint(0, z)
        # conjugating case: solve z = c + u * conj(z) componentwise
        u1, u2 = u.re, u.im
        rows = [[1 - u1, -u2], [-u2, 1 + u1]]
        sol = solve_rational(
            [[Fraction(x) for x in row] for row in rows], [c.re, c.im]
        )
        if sol is None:
            return None
        z = GaussRat(sol[0], sol[1])
        x = (a - (c.conj() * self.aut.apply(HeisPoint(0, z)).z).im) / 2
        return HeisPoint(x, z)


def heis_multiply(p: HeisPoint, q: HeisPoint) -> HeisPoint:
    return p * q


def heis_invert(p: HeisPoint) -> HeisPoint:
    return p.inverse()


def heis_aut_apply(aut: HeisAut, p: HeisPoint) -> HeisPoint:
    return aut.apply(p)


# -- representations ---------------------------------------------------------


def _parse_vec(text: str):
    return [Fraction(t.strip()) for t in text.split(",")]


def _parse_map(line: str, dim_hint=None) -> FlatAffineMap:
    # 'lin(1,0,0; 0,-1,0; 0,0,1) t(1/2,0,0)' or 'lin I t(0,1,0)'
    line = line.strip()
    if not line.startswith("lin"):
        raise ValueError(f"bad map line {line!r}")
    rest = line[3:].strip()
    if rest.startswith("I"):
        lin = None
        rest = rest[1:].strip()
    else:
        if not rest.startswith("("):
            raise ValueError(f"bad linear part in {line!r}")
        close = rest.index(")")
        rows = [
            [int(x) for x in row.split(",")]
            for row in rest[1:close].split(";")
        ]
        lin = IntMatrix(rows)
        rest = rest[close + 1:].strip()
    if not (rest.startswith("t(") and rest.endswith(")")):
        raise ValueError(f"bad translation part in {line!r}")
    trans = _parse_vec(rest[2:-1])
    if lin is None:
        lin = IntMatrix.identity(len(trans))
    return FlatAffineMap(lin, trans)


def load_flat_catalogue() -> dict[str, dict[str, FlatAffineMap]]:
    """Parse the packaged flat-model data file: per label, one exact affine
    map per polycyclic generator."""
    text = (
        importlib.resources.files("nilbott")
        .joinpath("data/flat_catalogue.txt")
        .read_text()
    )
    out: dict[str, dict[str, FlatAffineMap]] = {}
    label = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            label = line[1:-1]
            out[label] = {}
            continue
        name, _, rhs = line.partition("=")
        if label is None or not rhs:
            raise ValueError(f"bad catalogue line {raw!r}")
        out[label][name.strip()] = _parse_map(rhs)
    return out


_FLAT_CACHE: dict | None = None


def _flat_data() -> dict:
    global _FLAT_CACHE
    if _FLAT_CACHE is None:
        _FLAT_CACHE = load_flat_catalogue()
    return _FLAT_CACHE


def delta_generators(k: int) -> list[HeisAffineMap]:
    """Nil lattice generators (a, b, c) with [a, b] = c^-k, c central."""
    a = HeisAffineMap(HeisPoint(0, GaussRat(k)))
    b = HeisAffineMap(HeisPoint(0, GaussRat(0, k)))
    c = HeisAffineMap(HeisPoint(2 * k, GaussRat(0)))
    return [a, b, c]


def gamma_generators(k: int) -> list[HeisAffineMap]:
    """Generators (a, b, n) of the index-2 nil lattice extension."""
    if k == 0:
        raise ValueError("the index-2 nil lattice needs k != 0")
    a = HeisAffineMap(HeisPoint(0, GaussRat(Fraction(k, 2))), TAU)
    b = HeisAffineMap(HeisPoint(0, GaussRat(0, k)))
    n = HeisAffineMap(HeisPoint(k, GaussRat(0)))
    return [a, b, n]


def catalogue_representation(label: str, k: int | None = None) -> list:
    """Exact generator maps for a catalogue group, aligned with the
    generator order of catalogue_pc(label, k)."""
    if label == "Delta":
        if k is None:
            raise ValueError("Delta needs k")
        if k == 0:
            # degenerate lattice: three commuting unit translations
            return [
                FlatAffineMap.translation(v)
                for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))
            ]
        return delta_generators(k)
    if label == "Gamma":
        if k is None:
            raise ValueError("Gamma needs k")
        a, b, n = gamma_generators(k)
        return [a, b, n]
    data = _flat_data()
    if label not in data:
        raise ValueError(f"unknown catalogue label {label!r}")
    p = catalogue_pc(label)
    return [data[label][name] for name in p.names]


_HALF = Fraction(1, 2)


def extension_representation(case: int, k: int) -> list:
    """Faithful exact models for the built depth-3 extensions, generator
    order (g, h, n).  Fiber coordinate first for the flat cases."""
    kh = Fraction(k, 2)
    if case == 1:
        return [
            FlatAffineMap(IntMatrix.diagonal([1, 1, -1]), (0, _HALF, 0)),
            FlatAffineMap.translation((kh, 0, 1)),
            FlatAffineMap.translation((1, 0, 0)),
        ]
    if case == 2:
        return [
            FlatAffineMap(IntMatrix.diagonal([1, 1, -1]), (kh, _HALF, 0)),
            FlatAffineMap(IntMatrix.diagonal([-1, 1, 1]), (0, 0, 1)),
            FlatAffineMap.translation((1, 0, 0)),
        ]
    if case == 3:
        if k == 0:
            g2 = catalogue_representation("G2")
            return list(g2)
        return gamma_generators(k)
    if case == 4:
        return [
            FlatAffineMap(IntMatrix.diagonal([-1, 1, -1]), (kh, _HALF, 0)),
            FlatAffineMap(IntMatrix.diagonal([-1, 1, 1]), (0, 0, 1)),
            FlatAffineMap.translation((1, 0, 0)),
        ]
    if case == 5:
        if k == 0:
            return catalogue_representation("Delta", 0)
        return delta_generators(-k)
    if case == 6:
        return [
            FlatAffineMap(IntMatrix.identity(3), (kh, 1, 0)),
            FlatAffineMap(IntMatrix.diagonal([-1, 1, 1]), (0, 0, 1)),
            FlatAffineMap.translation((1, 0, 0)),
        ]
    if case == 7:
        return [
            FlatAffineMap(IntMatrix.diagonal([-1, 1, 1]), (kh, 1, 0)),
            FlatAffineMap(IntMatrix.diagonal([-1, 1, 1]), (0, 0, 1)),
            FlatAffineMap.translation((1, 0, 0)),
        ]
    raise ValueError(f"unknown case {case}")


def rep_evaluate(rep: list, w: Word):
    """Evaluate a word (or normal-form vector) in the representation."""
    if not isinstance(w, Word):
        w = nf_to_word(w)
    out = None
    for g, e in w:
        m = rep[g]
        step = m if e > 0 else m.inverse()
        for _ in range(abs(e)):
            out = step if out is None else out * step
    if out is None:
        ident = rep[0] * rep[0].inverse()
        return ident
    return out


def verify_relations_in_rep(p: PcPresentation, rep: list):
    """Check every conjugation rule as an exact composition of maps.

    Returns (ok, witness) where witness names the failing rule and both
    sides' values.
    """
    if len(rep) != p.ngens:
        raise ValueError("need one map per generator")
    for (i, j), w in p.positive_rules():
        lhs = rep[i] * rep[j] * rep[i].inverse()
        rhs = rep_evaluate(rep, nf_to_word(w))
        if lhs != rhs:
            rule = f"{p.names[i]} {p.names[j]} {p.names[i]}^-1 = {p.nf_str(w)}"
            return False, (rule, lhs, rhs)
    return True, None


@dataclass
class FreenessReport:
    """Bounded certificate: exact fixed-point status of every nonidentity
    normal form up to the stated letter length.  Not a proof of freeness
    beyond the bound."""

    max_word_len: int
    words_checked: int
    fixed_points: list  # (normal form, point)

    @property
    def is_free_sample(self) -> bool:
        return not self.fixed_points


def freeness_sample(p: PcPresentation, rep: list, max_word_len: int) -> FreenessReport:
    if max_word_len < 1:
        raise ValueError("max_word_len must be at least 1")
    checked = 0
    fixed = []
    for vec in product(range(-max_word_len, max_word_len + 1), repeat=p.ngens):
        if sum(abs(e) for e in vec) > max_word_len or not any(vec):
            continue
        checked += 1
        m = rep_evaluate(rep, nf_to_word(vec))
        pt = m.fixed_point()
        if pt is not None:
            fixed.append((vec, pt))
    return FreenessReport(max_word_len, checked, fixed)


def euler_number(k: int) -> int:
    """Fiber exponent of the lattice commutator [a, b] in the nil lattice
    with twisting k; its magnitude is the circle-bundle Euler number."""
    if k == 0:
        return 0
    a, b, c = delta_generators(k)
    comm = a * b * a.inverse() * b.inverse()
    # comm is central: (x, 0); express as a power of c = (2k, 0)
    if not comm.g.z.is_zero() or not comm.aut.is_identity():
        raise ValueError("lattice commutator is not central")
    num = comm.g.x
    den = 2 * k
    if num % den:
        raise ValueError("commutator is not a power of the fiber generator")
    return int(num // den)


# -- quotient action of the index-2 nil lattice -------------------------------


@dataclass
class PlaneMap:
    """Induced isometry of C: w -> t + u w (or t + u conj(w))."""

    t: GaussRat
    u: GaussRat
    conj: bool

    def apply(self, w: GaussRat) -> GaussRat:
        return self.t + self.u * (w.conj() if self.conj else w)

    def compose(self, other: "PlaneMap") -> "PlaneMap":
        t2 = other.t.conj() if self.conj else other.t
        u2 = other.u.conj() if self.conj else other.u
        return PlaneMap(self.t + self.u * t2, self.u * u2, self.conj != other.conj)


def project_to_plane(m: HeisAffineMap) -> PlaneMap:
    """Quotient by the central fiber: keep the C-part."""
    return PlaneMap(m.g.z, m.aut.u, m.aut.conj)


def check_quotient_action(n: HeisAffineMap, a: HeisAffineMap, b: HeisAffineMap) -> bool:
    """Verify the induced action on the plane: the fiber projects to the
    identity, a^2 and b span the translation lattice, and the class of a
    acts by conjugation on the second lattice direction and a half-period
    shift on the first (the Klein-type quotient action)."""
    pn = project_to_plane(n)
    if not (pn.t.is_zero() and pn.u == GaussRat(1) and not pn.conj):
        return False
    pa = project_to_plane(a)
    pb = project_to_plane(b)
    if pa.u != GaussRat(1) or not pa.conj:
        return False
    if pb.conj or pb.u != GaussRat(1):
        return False
    t1 = pa.compose(pa).t
    t2 = pb.t
    # the images of a^2 and b must span a genuine plane lattice
    if t1.re * t2.im - t1.im * t2.re == 0:
        return False
    # a is a half-period shift along t1
    if pa.t + pa.t != t1:
        return False
    # induced action on the lattice: t1 fixed, t2 inverted
    if pa.u * t1.conj() != t1:
        return False
    if pa.u * t2.conj() != -t2:
        return False
    return True


def klein_quotient_check(k: int) -> bool:
    """Quotient-action check for the index-2 nil lattice with twisting k."""
    a, b, n = gamma_generators(k)
    return check_quotient_action(n, a, b)
