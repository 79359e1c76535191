"""Random partial actions on coordinate rings satisfying the standing hypotheses.

An instance is built in three steps: a groupoid that is a disjoint union of
transitive pieces, a permutation action on the coordinates of some ``K^m``
(so a global action), and a restriction of that to random coordinate ideals.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .action import PartialAction, restrict
from .groupoid import Groupoid
from .linalg import Field, Subspace
from .algebra import Algebra


def _perm_group(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    n = len(gens[0])
    ident = tuple(range(n))
    elems, frontier = [ident], [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(s[p[i]] for i in range(n))
                if q not in elems:
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    return elems


def _cycle(n: int) -> tuple[int, ...]:
    return tuple((i + 1) % n for i in range(n))


GROUPS = {
    "Z1": [(0,)],
    "Z2": _perm_group([_cycle(2)]),
    "Z3": _perm_group([_cycle(3)]),
    "Z4": _perm_group([_cycle(4)]),
    "Z2xZ2": _perm_group([(1, 0, 2, 3), (0, 1, 3, 2)]),
    "S3": _perm_group([(1, 0, 2), (1, 2, 0)]),
}


def _compose(p, q):
    """``p o q``."""
    return tuple(p[q[i]] for i in range(len(q)))


@dataclass
class RandomInstance:
    action: PartialAction
    ambient: PartialAction
    seed: int
    description: str
    # points of the permutation action kept in each D_e, with their stabilizer sizes
    stabilizers: dict[str, list[int]]

    @property
    def predicted_galois(self) -> bool:
        """Coordinate-ring criterion: no kept point has a non-trivial stabilizer."""
        return all(s == 1 for sizes in self.stabilizers.values() for s in sizes)


def random_groupoid(rng: random.Random, max_order: int = 8, max_identities: int = 3):
    """A disjoint union of transitive groupoids ``objects x H x objects``.

    Returns the groupoid and, per component, ``(objects, group_name, label)``
    where ``label(i, a, j)`` names the arrow ``(i, a, j)``.
    """
    comps = []
    order = idents = 0
    while True:
        room_objects = max_identities - idents
        room_order = max_order - order
        choices = []
        for k in range(1, room_objects + 1):
            for gname, els in GROUPS.items():
                if k * k * len(els) <= room_order:
                    choices.append((k, gname))
        if not choices or (comps and rng.random() < 0.4):
            break
        k, gname = rng.choice(choices)
        comps.append((k, gname))
        order += k * k * len(GROUPS[gname])
        idents += k
    parts, info = [], []
    for c, (k, gname) in enumerate(comps):
        els = GROUPS[gname]
        names = {p: f"{chr(65 + c)}{idx}" for idx, p in enumerate(els)}
        objects = [f"{chr(97 + c)}{i}" for i in range(k)] if k > 1 else [f"{chr(65 + c)}"]
        mul = {(names[p], names[q]): names[_compose(p, q)] for p in els for q in els}
        G = Groupoid.transitive(objects, [names[p] for p in els], mul, name=f"C{c}")
        parts.append(G)

        def label(i, a, j, _objs=objects, _names=names):
            a = _names[a]
            return f"{i}:{a}:{j}" if len(_objs) > 1 else a

        info.append((objects, gname, label))
    return Groupoid.disjoint_union(parts, name="G"), info


def _coset_space(rng: random.Random, group: list) -> list[frozenset]:
    """Left cosets of a random cyclic subgroup."""
    k = rng.choice(group)
    sub = _perm_group([k])
    cosets = []
    for a in group:
        c = frozenset(_compose(a, h) for h in sub)
        if c not in cosets:
            cosets.append(c)
    return cosets


def random_instance(seed: int, field: Field | None = None, max_dim: int = 8,
                    max_order: int = 8, max_identities: int = 3) -> RandomInstance:
    field = field or Field.rational()
    rng = random.Random(seed)
    G, info = random_groupoid(rng, max_order, max_identities)
    # a set with an H-action per component, copied at every object
    points: list = []
    offsets: dict[str, int] = {}
    comp_points = []
    budget = max(max_dim, 1)
    for objects, gname, label in info:
        group = GROUPS[gname]
        # points are (copy, coset) so that repeated orbits stay distinct
        orbit_pts: list[tuple[int, frozenset]] = []
        for copy in range(rng.randint(1, 2)):
            orbit_pts.extend((copy, c) for c in _coset_space(rng, group))
        cap = max(1, min(len(orbit_pts), 6, budget // max(1, len(objects))))
        orbit_pts = orbit_pts[:cap] if _closed(group, orbit_pts[:cap]) else _first_orbit(group, orbit_pts)
        comp_points.append(orbit_pts)
        for i in objects:
            offsets[i] = len(points)
            points.extend((i, s) for s in orbit_pts)
    m = len(points)
    T = Algebra.coordinate_ring(field, m, name="T")
    ideal_rows, images = {}, {}
    for (objects, gname, label), pts in zip(info, comp_points):
        group = GROUPS[gname]
        for i in objects:
            for a in group:
                for j in objects:
                    g = label(i, a, j)
                    ideal_rows[g] = [T.basis(offsets[i] + p) for p in range(len(pts))]
                    imgs = []
                    for s in pts:
                        t = _act(a, s)
                        imgs.append(T.basis(offsets[i] + pts.index(t)))
                    images[g] = imgs
    ambient = PartialAction.from_data(G, T, ideal_rows, images, name="beta")
    # random coordinate ideals, small enough to keep R within max_dim
    at_identity = {}
    for (objects, gname, label), pts in zip(info, comp_points):
        for i in objects:
            at_identity[label(i, GROUPS[gname][0], i)] = (i, GROUPS[gname], pts)
    D0, stabs, total = {}, {}, 0
    idents = G.identities
    for n, e in enumerate(idents):
        obj, group, pts = at_identity[e]
        left = max_dim - total - (len(idents) - n - 1)
        size = rng.randint(1, max(1, min(len(pts), left)))
        chosen = sorted(rng.sample(range(len(pts)), size))
        total += size
        D0[e] = Subspace.span(field, m, [T.basis(offsets[obj] + p) for p in chosen])
        stabs[e] = [_stabilizer_size(group, pts[p]) for p in chosen]
    res = restrict(ambient, D0)
    desc = ", ".join(f"{len(o)}x{g}" for o, g, _ in info) + f"; dim R = {res.action.algebra.dim}"
    return RandomInstance(res.action, ambient, seed, desc, stabs)


def _act(a, point):
    copy, coset = point
    return copy, frozenset(_compose(a, x) for x in coset)


def _closed(group, pts) -> bool:
    s = set(pts)
    return all(_act(a, p) in s for a in group for p in pts)


def _first_orbit(group, pts) -> list:
    orbit = []
    for a in group:
        q = _act(a, pts[0])
        if q not in orbit:
            orbit.append(q)
    return orbit


def _stabilizer_size(group, point) -> int:
    return sum(1 for a in group if _act(a, point) == point)


def instances(count: int, seed: int = 0, **kw):
    for k in range(count):
        yield random_instance(seed * 100003 + k, **kw)
