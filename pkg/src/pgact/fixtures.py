"""Named example instances.

The five main fixtures are small partial actions on coordinate rings ``K^n``
used throughout the test-suite and by ``pgact fixtures``; the remaining ones
are negative controls.
"""
from __future__ import annotations

from .action import PartialAction
from .algebra import Algebra, LinMap
from .groupoid import Groupoid
from .linalg import Field, Subspace

ARROW_GROUPOID = ("d(g)", "r(g)", "g", "g^-1")


def arrow_groupoid(name: str = "G") -> Groupoid:
    """``{d(g), r(g), g, g^-1}``: one arrow between two objects."""
    d, r, g, gi = ARROW_GROUPOID
    compose = {
        (d, d): d, (r, r): r,
        (g, d): g, (r, g): g,
        (gi, r): gi, (d, gi): gi,
        (gi, g): d, (g, gi): r,
    }
    return Groupoid(ARROW_GROUPOID, compose, {d: d, r: r, g: gi, gi: g}, name)


def loop_groupoid(name: str = "G") -> Groupoid:
    """``{g1, g2, g3}`` with identities g1, g2 and ``g3 g3 = g2``."""
    compose = {("g1", "g1"): "g1", ("g2", "g2"): "g2", ("g3", "g3"): "g2",
               ("g2", "g3"): "g3", ("g3", "g2"): "g3"}
    return Groupoid(("g1", "g2", "g3"), compose, {"g1": "g1", "g2": "g2", "g3": "g3"}, name)


def cyclic_group(n: int, name: str = "G", prefix: str = "a") -> Groupoid:
    els = ["1"] + [f"{prefix}{k}" if k > 1 else prefix for k in range(1, n)]
    mul = {(els[i], els[j]): els[(i + j) % n] for i in range(n) for j in range(n)}
    return Groupoid.from_group(els, mul, name)


def _vec(R: Algebra, *labels):
    return [R.element(lab) for lab in labels]


def _action(G, R, ideals, maps, name="alpha"):
    """``ideals``: arrow -> labels; ``maps``: arrow -> images of the rows of D_{g^-1}."""
    rows = {g: _vec(R, *labs) for g, labs in ideals.items()}
    images = {}
    for g in G:
        m = maps.get(g, "identity")
        images[g] = m if isinstance(m, str) else _vec(R, *m)
    return PartialAction.from_data(G, R, rows, images, name)


def fx_a(field: Field | None = None) -> PartialAction:
    field = field or Field.rational()
    G = arrow_groupoid()
    R = Algebra.coordinate_ring(field, 3)
    return _action(G, R,
                   {"d(g)": ["e1", "e2"], "r(g)": ["e3"], "g": ["e3"], "g^-1": ["e1"]},
                   {"g": ["e3"], "g^-1": ["e1"]})


def fx_a_hand_globalization(field: Field | None = None):
    """The explicit global action on ``K^4`` together with its embeddings.

    Returns ``(beta, phi)`` where ``phi[e]`` maps ``D_e`` of :func:`fx_a`.
    """
    field = field or Field.rational()
    A = fx_a(field)
    G = A.groupoid
    T = Algebra.coordinate_ring(field, 4, name="T")
    beta = _action(G, T,
                   {"d(g)": ["e1", "e2"], "r(g)": ["e3", "e4"], "g": ["e3", "e4"], "g^-1": ["e1", "e2"]},
                   {"g": ["e3", "e4"], "g^-1": ["e1", "e2"]}, name="beta")
    R = A.algebra
    phi = {
        "d(g)": LinMap.from_images(R, T, _vec(R, "e1", "e2"), _vec(T, "e1", "e2")),
        "r(g)": LinMap.from_images(R, T, _vec(R, "e3"), _vec(T, "e3")),
    }
    return beta, phi


def fx_b(field: Field | None = None) -> PartialAction:
    field = field or Field.rational()
    G = arrow_groupoid()
    R = Algebra.coordinate_ring(field, 5)
    return _action(G, R,
                   {"d(g)": ["e1", "e2"], "g^-1": ["e1", "e2"],
                    "r(g)": ["e3", "e4", "e5"], "g": ["e3", "e4"]},
                   {"g": ["e3", "e4"], "g^-1": ["e1", "e2"]})


def fx_c(field: Field | None = None, swap: bool = True) -> PartialAction:
    """With ``swap=False`` the non-identity arrow acts as the identity instead."""
    field = field or Field.rational()
    G = loop_groupoid()
    R = Algebra.coordinate_ring(field, 4)
    return _action(G, R,
                   {"g1": ["e1", "e2", "e3", "e4"], "g2": ["e2", "e3", "e4"], "g3": ["e2", "e3"]},
                   {"g3": ["e3", "e2"] if swap else "identity"})


def fx_d(field: Field | None = None) -> PartialAction:
    field = field or Field.rational()
    G = loop_groupoid()
    R = Algebra.coordinate_ring(field, 5)
    return _action(G, R,
                   {"g1": ["e1", "e2"], "g2": ["e3", "e4", "e5"], "g3": ["e3", "e4"]},
                   {"g3": ["e4", "e3"]})


def fx_d_galois_system(field: Field | None = None, drop_last: bool = False):
    R = fx_d(field).algebra
    pairs = [("e1 + e2 + e5", "e1 + e2 + e5"), ("e3", "e3"), ("e4", "e4")]
    if drop_last:
        pairs = pairs[:-1]
    return [(R.element(x), R.element(y)) for x, y in pairs]


def fx_e(field: Field | None = None, n: int = 1) -> PartialAction:
    field = field or Field.rational()
    G = Groupoid(("e",), {("e", "e"): "e"}, {"e": "e"})
    R = Algebra.coordinate_ring(field, n)
    return PartialAction.trivial(G, R)


# -- negative controls ------------------------------------------------------------

def trivial_z2(field: Field | None = None) -> PartialAction:
    """``Z/2`` acting trivially on ``K``: global, but not Galois."""
    field = field or Field.rational()
    return PartialAction.trivial(cyclic_group(2, prefix="s"), Algebra.coordinate_ring(field, 1))


def nonunital_dual_numbers(field: Field | None = None) -> PartialAction:
    """``Z/2`` on ``K[eps]`` with ``D_s = K eps`` and ``alpha_s = -1``.

    A valid partial action whose ideal ``D_s`` has no identity element.
    """
    field = field or Field.rational()
    G = cyclic_group(2, prefix="s")
    R = Algebra(field, 2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                ["1", "eps"], unit=(field.one, field.zero), name="R")
    return _action(G, R, {"1": ["1", "eps"], "s": ["eps"]}, {"s": ["-eps"]})


def nonideal_span(field: Field | None = None) -> PartialAction:
    """``Z/2`` on ``K^2`` with ``D_s = K(e1 - e2)``, which is not even an ideal."""
    field = field or Field.rational()
    G = cyclic_group(2, prefix="s")
    R = Algebra.coordinate_ring(field, 2)
    return _action(G, R, {"1": ["e1", "e2"], "s": ["e1 - e2"]}, {"s": ["e1 - e2"]})


def broken_composition(field: Field | None = None) -> PartialAction:
    """``Z/3`` on ``K^3`` where ``a`` and ``a^2`` both act by the same cyclic shift."""
    field = field or Field.rational()
    G = cyclic_group(3)
    R = Algebra.coordinate_ring(field, 3)
    shift = ["e2", "e3", "e1"]
    return _action(G, R, {"1": ["e1", "e2", "e3"], "a": ["e1", "e2", "e3"], "a2": ["e1", "e2", "e3"]},
                   {"a": shift, "a2": shift})


FIXTURES = {
    "FX-A": fx_a,
    "FX-B": fx_b,
    "FX-C": fx_c,
    "FX-D": fx_d,
    "FX-E": fx_e,
    "trivial-z2": trivial_z2,
    "nonunital": nonunital_dual_numbers,
    "nonideal": nonideal_span,
    "broken-composition": broken_composition,
}


def fixture(name: str, field: Field | None = None) -> PartialAction:
    try:
        return FIXTURES[name](field)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
