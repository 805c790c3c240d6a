import numpy as np
import pytest

from nestdich.data import Attribute, Dataset, make_gaussian_classes


@pytest.fixture(scope="session")
def gauss8():
    return make_gaussian_classes()


@pytest.fixture(scope="session")
def small4():
    """Four well-separated classes, 10 instances each, in 2-D."""
    rng = np.random.default_rng(0)
    centers = np.array([[0, 0], [4, 0], [0, 4], [4, 4]], dtype=float)
    labels = np.repeat(np.arange(4), 10)
    rows = centers[labels] + rng.normal(scale=0.8, size=(40, 2))
    return Dataset((Attribute("a", "numeric"), Attribute("b", "numeric")), rows, labels,
                   ("w", "x", "y", "z"))


@pytest.fixture(scope="session")
def mixed3():
    """Three classes with a numeric, a nominal attribute and some missing cells."""
    rng = np.random.default_rng(1)
    n = 60
    labels = np.arange(n) % 3
    num = labels * 1.5 + rng.normal(size=n)
    nom = (labels + rng.integers(0, 2, size=n)) % 3
    rows = np.column_stack([num, nom]).astype(float)
    rows[5, 0] = np.nan
    rows[7, 1] = np.nan
    atts = (Attribute("num", "numeric"), Attribute("color", "nominal", ("red", "green", "blue")))
    return Dataset(atts, rows, labels, ("p", "q", "r"))
