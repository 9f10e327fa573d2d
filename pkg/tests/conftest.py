from pathlib import Path

import pytest

from loopstring.cohomology import SullivanModel
from loopstring.lie import DGLieAlgebra

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"


def sphere(n):
    """Minimal model of S^n."""
    if n % 2:
        return SullivanModel.from_dict([("x", n)], {}, name=f"S{n}")
    return SullivanModel.from_dict([("x", n), ("y", 2 * n - 1)], {"y": lambda x, y: x ** 2},
                                   name=f"S{n}")


def cpn(n):
    return SullivanModel.from_dict([("x", 2), ("y", 2 * n + 1)],
                                   {"y": lambda x, y: x ** (n + 1)}, name=f"CP{n}")


def s3xs3():
    return SullivanModel.from_dict([("x", 3), ("y", 3)], {}, name="S3xS3")


def lie_s3():
    return DGLieAlgebra([("a", 2)], name="S3", dual_names={"a": "x"})


def lie_s2():
    return DGLieAlgebra([("a", 1), ("e", 2)], {("a", "a"): "e"}, name="S2",
                        dual_names={"a": "x", "e": "y"})


def lie_m11():
    """Lie model of the coformal 11-manifold: [a, b] = c."""
    return DGLieAlgebra([("a", 2), ("b", 2), ("c", 4)], {("a", "b"): "c"}, name="M11",
                        dual_names={"a": "x", "b": "y", "c": "z"})


def lie_with_d():
    """A small DGL with nonzero differential: [a, a] = e, d b = e."""
    return DGLieAlgebra([("a", 1), ("e", 2), ("b", 3)], {("a", "a"): "e"}, {"b": "e"})


# Poincaré duality spaces used across the suite: (name, model, dimension)
CORPUS = [
    ("S2", sphere(2), 2),
    ("S3", sphere(3), 3),
    ("S7", sphere(7), 7),
    ("CP2", cpn(2), 4),
    ("CP3", cpn(3), 6),
    ("S3xS3", s3xs3(), 6),
]


@pytest.fixture(scope="session")
def models_dir():
    return MODELS


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
