import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nilbott.towers import base_pc, build_extension
from nilbott.words import klein_presentation, torus_presentation

CASE_DATA = {
    1: ("klein", (1, 1)),
    2: ("klein", (1, -1)),
    3: ("klein", (-1, 1)),
    4: ("klein", (-1, -1)),
    5: ("torus", (1, 1)),
    6: ("torus", (1, -1)),
    7: ("torus", (-1, -1)),
}


def base_presentation(case):
    kind, _ = CASE_DATA[case]
    return klein_presentation() if kind == "klein" else torus_presentation()


def case_extension(case, k):
    """The depth-3 extension group for the given twist case and lift."""
    kind, signs = CASE_DATA[case]
    pres = klein_presentation() if kind == "klein" else torus_presentation()
    return build_extension(base_pc(pres), signs, [k])
