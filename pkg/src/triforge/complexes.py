"""Simplicial 3-complexes: representation, validation, homology, constructions.

A complex is a list of tetrahedra over dense integer vertex ids; a
tetrahedron is a sorted 4-tuple.  Everything downstream (the surgery and
Heegaard pipelines, the CLI) produces and consumes this type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import snf


class ComplexError(ValueError):
    pass


def _sorted_tet(t):
    a, b, c, d = sorted(t)
    if a == b or b == c or c == d:
        raise ComplexError("tetrahedron with repeated vertex: %r" % (t,))
    return (a, b, c, d)


class SimplicialComplex3:
    """A pure 3-dimensional simplicial complex over integer vertex ids."""

    def __init__(self, tetrahedra, vertex_count=None):
        tets = sorted({_sorted_tet(t) for t in tetrahedra})
        if len(tets) != len(set(tets)):
            raise ComplexError("duplicate tetrahedra")
        self.tetrahedra = tets
        if vertex_count is None:
            vertex_count = 1 + max((v for t in tets for v in t), default=-1)
        self.vertex_count = vertex_count

    # -- basic accessors -------------------------------------------------
    def __len__(self):
        return len(self.tetrahedra)

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex3)
                and self.vertex_count == other.vertex_count
                and self.tetrahedra == other.tetrahedra)

    def vertices(self):
        return sorted({v for t in self.tetrahedra for v in t})

    def triangles(self):
        tris = set()
        for t in self.tetrahedra:
            for f in itertools.combinations(t, 3):
                tris.add(f)
        return sorted(tris)

    def edges(self):
        es = set()
        for t in self.tetrahedra:
            for e in itertools.combinations(t, 2):
                es.add(e)
        return sorted(es)

    def relabelled(self):
        """Canonical form: dense vertex ids in order of appearance-by-sort."""
        verts = self.vertices()
        ren = {v: i for i, v in enumerate(verts)}
        tets = [tuple(sorted(ren[v] for v in t)) for t in self.tetrahedra]
        return SimplicialComplex3(tets, vertex_count=len(verts))

    # -- validation ------------------------------------------------------
    def boundary_triangles(self):
        count = {}
        for t in self.tetrahedra:
            for f in itertools.combinations(t, 3):
                count[f] = count.get(f, 0) + 1
        return sorted(f for f, c in count.items() if c == 1)

    def validate(self):
        return validate(self)

    # -- homology ----------------------------------------------------------
    def homology(self):
        return homology(self)

    def euler_characteristic(self):
        verts = {v for t in self.tetrahedra for v in t}
        return len(verts) - len(self.edges()) + len(self.triangles()) - len(self.tetrahedra)


@dataclass
class ValidationReport:
    simplicial: bool = True
    closed_3_manifold: bool = False
    orientable: bool = False
    connected: bool = False
    witness: object = None
    details: list = field(default_factory=list)

    @property
    def all_ok(self):
        return (self.simplicial and self.closed_3_manifold
                and self.orientable and self.connected)

    def summary(self):
        flags = []
        for name in ("simplicial", "closed_3_manifold", "orientable", "connected"):
            flags.append("%s=%s" % (name, "yes" if getattr(self, name) else "NO"))
        s = " ".join(flags)
        if self.witness is not None:
            s += " witness=%r" % (self.witness,)
        return s


def _tet_face_pairings(complex3):
    """triangle -> list of (tet index, opposite vertex)."""
    inc = {}
    for ti, t in enumerate(complex3.tetrahedra):
        for k in range(4):
            f = t[:k] + t[k + 1:]
            inc.setdefault(f, []).append((ti, t[k]))
    return inc


def validate(complex3):
    """Check the closed-3-manifold conditions; failures carry a witness."""
    rep = ValidationReport()
    tets = complex3.tetrahedra
    if not tets:
        rep.closed_3_manifold = False
        rep.details.append("empty complex")
        return rep

    inc = _tet_face_pairings(complex3)

    # face pairing: every triangle in exactly two tetrahedra
    closed = True
    for f, lst in inc.items():
        if len(lst) != 2:
            closed = False
            rep.witness = ("triangle", f, len(lst))
            rep.details.append("triangle %r lies in %d tetrahedra" % (f, len(lst)))
            break
    rep.closed_3_manifold = closed

    # edge links: tetrahedra around each edge form a single cycle
    if closed:
        edge_tets = {}
        for ti, t in enumerate(tets):
            for e in itertools.combinations(t, 2):
                edge_tets.setdefault(e, []).append(ti)
        for e, around in edge_tets.items():
            # walk tet-to-tet through shared faces containing e
            deg = len(around)
            adj = {}
            for ti in around:
                t = tets[ti]
                others = [v for v in t if v not in e]
                for v in others:
                    f = tuple(sorted(e + (v,)))
                    adj.setdefault(f, []).append(ti)
            ok = all(len(v) == 2 for v in adj.values())
            if ok:
                # connectivity of the cycle
                seen = {around[0]}
                stack = [around[0]]
                nbr = {ti: [] for ti in around}
                for f, (x, y) in adj.items():
                    nbr[x].append(y)
                    nbr[y].append(x)
                while stack:
                    x = stack.pop()
                    for y in nbr[x]:
                        if y not in seen:
                            seen.add(y)
                            stack.append(y)
                ok = len(seen) == deg
            if not ok:
                rep.closed_3_manifold = False
                rep.witness = ("edge", e)
                rep.details.append("edge %r has a bad link" % (e,))
                break

    # vertex links: closed connected surfaces with chi = 2
    if rep.closed_3_manifold:
        vert_tets = {}
        for ti, t in enumerate(tets):
            for v in t:
                vert_tets.setdefault(v, []).append(ti)
        for v, around in vert_tets.items():
            link_tris = []
            for ti in around:
                link_tris.append(tuple(x for x in tets[ti] if x != v))
            lv = {x for tr in link_tris for x in tr}
            le = set()
            ledge_count = {}
            for tr in link_tris:
                for e in itertools.combinations(tr, 2):
                    le.add(e)
                    ledge_count[e] = ledge_count.get(e, 0) + 1
            if any(c != 2 for c in ledge_count.values()):
                rep.closed_3_manifold = False
                rep.witness = ("vertex", v)
                rep.details.append("vertex %d link is not closed" % v)
                break
            chi = len(lv) - len(le) + len(link_tris)
            # connectivity of the link
            nbr = {}
            for tr in link_tris:
                for a, b in itertools.combinations(tr, 2):
                    nbr.setdefault(a, set()).add(b)
                    nbr.setdefault(b, set()).add(a)
            start = next(iter(lv))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in nbr.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if chi != 2 or len(seen) != len(lv):
                rep.closed_3_manifold = False
                rep.witness = ("vertex", v)
                rep.details.append("vertex %d link has chi=%d" % (v, chi))
                break

    # orientability via parity propagation across face pairings
    if rep.closed_3_manifold:
        ori = orientation(complex3)
        rep.orientable = ori is not None
        if not rep.orientable:
            rep.details.append("orientation parity conflict")

    # connectivity of the whole complex
    n = len(tets)
    nbr = {i: [] for i in range(n)}
    for f, lst in inc.items():
        if len(lst) == 2:
            (a, _), (b, _) = lst
            nbr[a].append(b)
            nbr[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in nbr[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    rep.connected = len(seen) == n
    return rep


def orientation(complex3):
    """Per-tet parities (+1/-1) making face pairings orientation-coherent.

    Returns a list or None when the complex is unorientable.  Two
    tetrahedra induce opposite orientations on a shared face exactly when
    the permutation parities work out; we propagate and check.
    """
    tets = complex3.tetrahedra
    inc = _tet_face_pairings(complex3)
    ori = [0] * len(tets)

    def face_sign(ti, f):
        # sign of face f (sorted) inside sorted tet = (-1)^k where k is the
        # index of the omitted vertex
        t = tets[ti]
        omitted = next(v for v in t if v not in f)
        k = t.index(omitted)
        return -1 if k % 2 else 1

    for start in range(len(tets)):
        if ori[start]:
            continue
        ori[start] = 1
        stack = [start]
        while stack:
            ti = stack.pop()
            t = tets[ti]
            for k in range(4):
                f = t[:k] + t[k + 1:]
                lst = inc[f]
                if len(lst) != 2:
                    continue
                other = lst[0][0] if lst[1][0] == ti else lst[1][0]
                # induced orientations on the shared face must be opposite
                want = -ori[ti] * face_sign(ti, f) * face_sign(other, f)
                if ori[other] == 0:
                    ori[other] = want
                    stack.append(other)
                elif ori[other] != want:
                    return None
    return ori


# -- homology ------------------------------------------------------------

@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple
    torsion: tuple  # tuple of tuples, H0..H3

    def __str__(self):
        parts = []
        for k in range(4):
            terms = []
            b = self.betti[k]
            if b == 1:
                terms.append("Z")
            elif b > 1:
                terms.append("Z^%d" % b)
            for d in self.torsion[k]:
                terms.append("Z/%d" % d)
            parts.append("H%d=%s" % (k, "+".join(terms) if terms else "0"))
        return " ".join(parts)

    @property
    def h1_order(self):
        """|H1| when finite, else 0."""
        if self.betti[1]:
            return 0
        n = 1
        for d in self.torsion[1]:
            n *= d
        return n


def boundary_entries(simplices_low, simplices_high):
    """Sparse boundary entries (row, col, sign): rows = low simplices."""
    index = {s: i for i, s in enumerate(simplices_low)}
    out = []
    for j, s in enumerate(simplices_high):
        for k in range(len(s)):
            face = s[:k] + s[k + 1:]
            out.append((index[face], j, -1 if k % 2 else 1))
    return out


def homology(complex3):
    """Integral simplicial homology H0..H3 by Smith normal form."""
    tets = complex3.tetrahedra
    tris = complex3.triangles()
    edges = complex3.edges()
    verts = [(v,) for v in sorted({v for t in tets for v in t})]

    s1 = snf.smith_from_entries(boundary_entries(verts, edges)) if edges else []
    s2 = snf.smith_from_entries(boundary_entries(edges, tris)) if tris else []
    s3 = snf.smith_from_entries(boundary_entries(tris, tets)) if tets else []
    r1, r2, r3 = len(s1), len(s2), len(s3)

    n0, n1, n2, n3 = len(verts), len(edges), len(tris), len(tets)
    betti = (
        n0 - r1,
        n1 - r1 - r2,
        n2 - r2 - r3,
        n3 - r3,
    )
    torsion = (
        (),
        tuple(d for d in s2 if d > 1),
        tuple(d for d in s3 if d > 1),
        (),
    )
    return HomologyProfile(betti=betti, torsion=torsion)


# -- constructions -------------------------------------------------------

def cone(triangles, apex):
    """Cone a triangulated 2-complex from a fresh apex: one tet per triangle."""
    tets = []
    for tr in triangles:
        if apex in tr:
            raise ComplexError("apex %r lies on the cone base" % (apex,))
        tets.append(tuple(sorted((apex,) + tuple(tr))))
    if len(set(tets)) != len(tets):
        raise ComplexError("cone produced coincident tetrahedra")
    return tets


def quad_diagonal(quad):
    """Canonical diagonal of a quadrilateral given as a corner cycle.

    Returns the diagonal through the smallest corner.
    """
    a, b, c, d = quad
    return (a, c) if min(a, c) < min(b, d) else (b, d)


def split_quad(quad, diagonal=None):
    """Two triangles covering the quad cycle (a,b,c,d)."""
    a, b, c, d = quad
    if len({a, b, c, d}) != 4:
        raise ComplexError("degenerate quadrilateral %r" % (quad,))
    if diagonal is None:
        diagonal = quad_diagonal(quad)
    if set(diagonal) == {a, c}:
        return [(a, b, c), (a, c, d)]
    if set(diagonal) == {b, d}:
        return [(a, b, d), (b, c, d)]
    raise ComplexError("diagonal %r not in quad %r" % (diagonal, quad))


def fan_polygon(cycle, apex=None):
    """Fan triangulation of a polygon cycle from one of its corners."""
    if len(cycle) < 3:
        raise ComplexError("polygon with <3 corners: %r" % (cycle,))
    if len(set(cycle)) != len(cycle):
        raise ComplexError("polygon revisits a corner: %r" % (cycle,))
    if apex is None:
        apex = min(cycle)
    i = cycle.index(apex)
    cyc = cycle[i:] + cycle[:i]
    tris = []
    for k in range(1, len(cyc) - 1):
        tris.append((cyc[0], cyc[k], cyc[k + 1]))
    return tris


def prism_tets(bottom, top, side_diagonals):
    """Split a (possibly twisted) prism into 3 tetrahedra.

    ``bottom`` = (p0,p1,p2), ``top`` = (q0,q1,q2); side quad i joins edge
    (p_i,p_j) to (q_i,q_j).  ``side_diagonals`` maps each side quad
    (frozenset of its 4 vertices) to its diagonal (2-set).  A cone from a
    prism vertex compatible with all three diagonals is returned.
    """
    p = list(bottom)
    q = list(top)
    quads = []
    for (i, j) in ((0, 1), (1, 2), (2, 0)):
        quads.append(((p[i], p[j], q[j], q[i])))

    def diag_of(quad):
        key = frozenset(quad)
        d = side_diagonals[key]
        return frozenset(d)

    verts = p + q
    for apex in verts:
        tets = []
        ok = True
        # far faces: the triangle not containing apex plus the far side quad(s)
        far_faces = []
        if apex in p:
            far_faces.append(tuple(q))
        else:
            far_faces.append(tuple(p))
        for quad in quads:
            if apex in quad:
                # apex side quads: their diagonal must pass through apex
                if apex not in diag_of(quad):
                    ok = False
                    break
            else:
                far_faces.extend(split_quad(quad, tuple(diag_of(quad))))
        if not ok:
            continue
        for f in far_faces:
            tets.append(tuple(sorted((apex,) + f)))
        if len(tets) == 3 and len(set(tets)) == 3:
            return tets
    raise ComplexError("prism admits no 3-tet split with the given diagonals")


def barycentric_subdivide(complex3):
    """Barycentric subdivision: 24 tets per tet, homology preserved."""
    tets = complex3.tetrahedra
    bary = {}

    def bid(simplex):
        key = tuple(sorted(simplex))
        if key not in bary:
            bary[key] = len(bary)
        return bary[key]

    out = []
    for t in tets:
        for verts_perm in itertools.permutations(t):
            v0 = bid(verts_perm[:1])
            v1 = bid(verts_perm[:2])
            v2 = bid(verts_perm[:3])
            v3 = bid(verts_perm[:4])
            out.append((v0, v1, v2, v3))
    return SimplicialComplex3(out, vertex_count=len(bary))


def connected_sum(a, b):
    """A # B: delete a tetrahedron from each, glue the boundary spheres
    by an orientation-reversing vertex bijection."""
    for name, cx in (("first", a), ("second", b)):
        rep = cx.validate()
        if not (rep.closed_3_manifold and rep.orientable and rep.connected):
            raise ComplexError("connected_sum: %s summand is not a closed "
                               "connected orientable manifold (%s)" % (name, rep.summary()))
    ori_a = orientation(a)
    ori_b = orientation(b)

    ta = a.tetrahedra[0]
    tb = b.tetrahedra[0]
    sign_a = ori_a[0]
    sign_b = ori_b[0]

    # map b's vertices into fresh ids above a's
    offset = a.vertex_count
    rename = {}
    for t in b.tetrahedra:
        for v in t:
            if v not in rename:
                rename[v] = v + offset

    # glue tb's vertices onto ta's: identity on sorted order reverses
    # orientation iff the two deleted tets have equal ambient signs; if not,
    # swap two targets to flip.
    targets = list(ta)
    if sign_a == sign_b:
        # identity pairing of sorted boundary spheres is orientation-reversing
        pass
    else:
        targets[2], targets[3] = targets[3], targets[2]
    for vb, va in zip(tb, targets):
        rename[vb] = va

    tets = [t for t in a.tetrahedra if t != ta]
    for t in b.tetrahedra:
        if t == tb:
            continue
        tets.append(tuple(sorted(rename[v] for v in t)))
    out = SimplicialComplex3(tets)
    return out.relabelled()


def s1_x_s2():
    """Triangle x (suspension of a triangle): S1 x S2 with 54 tetrahedra."""
    # S2 as the double cone over a 3-cycle: poles 3,4, equator 0,1,2
    sphere_tris = [(0, 1, 3), (1, 2, 3), (0, 2, 3),
                   (0, 1, 4), (1, 2, 4), (0, 2, 4)]
    nv = 5
    circle_edges = [(0, 1), (1, 2), (0, 2)]

    def pid(p, z):
        return z * nv + p

    tets = []
    for (u, v, w) in sphere_tris:
        for (z0, z1) in circle_edges:
            # staircase triangulation of triangle x edge via the vertex order
            bottom = sorted([pid(u, z0), pid(v, z0), pid(w, z0)])
            top = sorted([pid(u, z1), pid(v, z1), pid(w, z1)])
            # monotone paths in the product of chains
            ps = sorted([u, v, w])
            zs = sorted([z0, z1])
            a0, a1, a2 = [pid(p, zs[0]) for p in ps]
            b0, b1, b2 = [pid(p, zs[1]) for p in ps]
            tets.append((a0, a1, a2, b2))
            tets.append((a0, a1, b1, b2))
            tets.append((a0, b0, b1, b2))
    return SimplicialComplex3(tets, vertex_count=nv * 3).relabelled()


# -- pseudo-triangulations ------------------------------------------------

FACE_VERTICES = {f: tuple(v for v in range(4) if v != f) for f in range(4)}


@dataclass
class PseudoTriangulation:
    """Tetrahedra with affine face identifications (quotient = the space)."""
    tet_count: int
    # gluings: (t, f) -> (t2, f2, perm) where perm maps the 3 local vertices
    # of face f (ascending) to local vertices of t2
    gluings: dict

    def validate_gluings(self):
        for (t, f), (t2, f2, perm) in self.gluings.items():
            if not (0 <= t < self.tet_count and 0 <= t2 < self.tet_count):
                raise ComplexError("gluing references unknown tetrahedron")
            if sorted(perm) != sorted(FACE_VERTICES[f2]):
                raise ComplexError("gluing image is not the target face")
            back = self.gluings.get((t2, f2))
            if back is None:
                raise ComplexError("gluing not involutive: missing inverse")
            t3, f3, perm2 = back
            if (t3, f3) != (t, f):
                raise ComplexError("gluing not involutive")
            src = FACE_VERTICES[f]
            for i, v in enumerate(src):
                j = perm.index(FACE_VERTICES[f2][i]) if False else None
            # compose: perm then perm2 must be the identity on face f
            fwd = dict(zip(FACE_VERTICES[f], perm))
            bwd = dict(zip(FACE_VERTICES[f2], perm2))
            for v in FACE_VERTICES[f]:
                if bwd[fwd[v]] != v:
                    raise ComplexError("gluing maps do not invert each other")

    def _corner_classes(self, dim):
        """Union-find over (tet, frozenset of local verts) of size dim+1."""
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        items = []
        for t in range(self.tet_count):
            for sub in itertools.combinations(range(4), dim + 1):
                key = (t, frozenset(sub))
                parent[key] = key
                items.append(key)
        for (t, f), (t2, f2, perm) in self.gluings.items():
            mapping = dict(zip(FACE_VERTICES[f], perm))
            for t_, sub in items:
                if t_ != t:
                    continue
                if not set(sub) <= set(FACE_VERTICES[f]):
                    continue
                image = frozenset(mapping[v] for v in sub)
                union((t, sub), (t2, image))
        classes = {}
        for key in items:
            classes.setdefault(find(key), []).append(key)
        label = {}
        for i, (root, members) in enumerate(sorted(classes.items())):
            for m in members:
                label[m] = i
        return label

    def barycentric_subdivide(self):
        """One barycentric subdivision, returned again as a PseudoTriangulation.

        Flags (v < e < f < t) of each tetrahedron give 24 small tets; the
        old gluings glue the small tets along split faces.
        """
        flags = []   # (tet, chain of frozensets)
        index = {}
        for t in range(self.tet_count):
            for perm in itertools.permutations(range(4)):
                chain = (frozenset(perm[:1]), frozenset(perm[:2]),
                         frozenset(perm[:3]), frozenset(perm[:4]))
                index[(t, chain)] = len(flags)
                flags.append((t, chain))

        gluings = {}

        def add_gluing(key1, key2, perm):
            gluings[key1] = (key2[0], key2[1], perm)

        # local vertices of a small tet are its chain entries 0..3 (by dim).
        # faces of small tets:
        #  - omit dim k: shared with a neighbouring flag inside the same tet
        #    (or across a gluing when k==3 face lies on an outer face).
        for fi, (t, chain) in enumerate(flags):
            v0, e, f, tt = chain
            for k in range(4):
                # the face omitting the dim-k barycenter
                if k < 3:
                    # swap chain[k] for the other possibility within chain[k+1]
                    lower = chain[k - 1] if k > 0 else frozenset()
                    upper = chain[k + 1]
                    # alternatives for chain[k]: subsets of upper of size k+1
                    # containing lower
                    alts = [lower | frozenset(c)
                            for c in itertools.combinations(upper - lower, k + 1 - len(lower))]
                    alts = [a for a in alts if a != chain[k] and len(a) == k + 1]
                    # exactly one neighbouring flag shares this face
                    for a in alts:
                        nchain = tuple(chain[:k]) + (a,) + tuple(chain[k + 1:])
                        if (t, nchain) in index:
                            ni = index[(t, nchain)]
                            perm_local = [0, 1, 2, 3]
                            key1 = (fi, k)
                            key2 = (ni, k)
                            gluings[key1] = (ni, k, tuple(x for x in range(4) if x != k))
                            break
                else:
                    # face omitting the top barycenter: lies on the old face
                    # opposite the vertex of tt missing from f
                    old_face = next(v for v in tt if v not in f)
                    g = self.gluings.get((t, old_face))
                    if g is None:
                        continue
                    t2, f2, perm = g
                    mapping = dict(zip(FACE_VERTICES[old_face], perm))
                    chain2 = tuple(frozenset(mapping[v] for v in c) for c in chain[:3])
                    chain2 = chain2 + (frozenset(range(4)),)
                    ni = index[(t2, chain2)]
                    gluings[(fi, 3)] = (ni, 3, (0, 1, 2))
        # normalize to the PseudoTriangulation gluing format: local verts of a
        # small tet are 0..3 = dims; the face omitting dim k maps dim-wise.
        out_gluings = {}
        for (fi, k), (ni, k2, _) in gluings.items():
            src = FACE_VERTICES[k]
            out_gluings[(fi, k)] = (ni, k2, FACE_VERTICES[k2])
        return PseudoTriangulation(tet_count=len(flags), gluings=out_gluings)

    def to_simplicial(self):
        """Label vertex classes and emit a SimplicialComplex3.

        Raises when two tetrahedra would share all four labels (the input
        then needs further subdivision first).
        """
        label = self._corner_classes(0)
        tets = []
        for t in range(self.tet_count):
            vs = [label[(t, frozenset((v,)))] for v in range(4)]
            if len(set(vs)) != 4:
                raise ComplexError("pseudo-complex not simplicial: tet %d collapses" % t)
            tets.append(tuple(sorted(vs)))
        if len(set(tets)) != len(tets):
            raise ComplexError("pseudo-complex not simplicial: coincident tetrahedra")
        nverts = len({label[(t, frozenset((v,)))] for t in range(self.tet_count) for v in range(4)})
        return SimplicialComplex3(tets, vertex_count=nverts)


def pseudo_to_simplicial(pseudo):
    """Second barycentric subdivision of a pseudo-triangulation: a genuine
    simplicial complex with 576x the tetrahedra."""
    pseudo.validate_gluings()
    once = pseudo.barycentric_subdivide()
    twice = once.barycentric_subdivide()
    out = twice.to_simplicial()
    assert len(out) == 576 * pseudo.tet_count
    return out.relabelled()


def boundary_delta4():
    """The boundary of the 4-simplex: minimal S^3, 5 tetrahedra."""
    return SimplicialComplex3(list(itertools.combinations(range(5), 4)), vertex_count=5)


# -- file formats ---------------------------------------------------------

def to_tri_text(complex3):
    cx = complex3.relabelled()
    lines = ["TRI %d %d" % (cx.vertex_count, len(cx))]
    for t in cx.tetrahedra:
        lines.append("T %d %d %d %d" % t)
    return "\n".join(lines) + "\n"


def from_tri_text(text):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("TRI"):
        raise ComplexError("missing TRI header")
    parts = lines[0].split()
    if len(parts) != 3:
        raise ComplexError("malformed TRI header: %r" % lines[0])
    nv, nt = int(parts[1]), int(parts[2])
    tets = []
    for ln in lines[1:]:
        fields = ln.split()
        if fields[0] != "T" or len(fields) != 5:
            raise ComplexError("malformed TRI line: %r" % ln)
        t = tuple(int(x) for x in fields[1:])
        if not all(0 <= v < nv for v in t):
            raise ComplexError("vertex id out of range: %r" % ln)
        if tuple(sorted(t)) != t:
            raise ComplexError("tetrahedron not sorted: %r" % ln)
        tets.append(t)
    if len(tets) != nt:
        raise ComplexError("TRI header count %d != %d tetrahedra" % (nt, len(tets)))
    if len(set(tets)) != len(tets):
        raise ComplexError("duplicate tetrahedron in TRI file")
    return SimplicialComplex3(tets, vertex_count=nv)


def to_ptri_text(pseudo):
    lines = ["PTRI %d" % pseudo.tet_count]
    seen = set()
    for (t, f), (t2, f2, perm) in sorted(pseudo.gluings.items()):
        if (t2, f2) in seen:
            continue
        seen.add((t, f))
        lines.append("G %d %d %d %d %d %d %d" % (t, f, t2, f2, perm[0], perm[1], perm[2]))
    return "\n".join(lines) + "\n"


def from_ptri_text(text):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("PTRI"):
        raise ComplexError("missing PTRI header")
    nt = int(lines[0].split()[1])
    gluings = {}
    for ln in lines[1:]:
        fields = ln.split()
        if fields[0] != "G" or len(fields) != 8:
            raise ComplexError("malformed PTRI line: %r" % ln)
        t, f, t2, f2, p0, p1, p2 = (int(x) for x in fields[1:])
        perm = (p0, p1, p2)
        gluings[(t, f)] = (t2, f2, perm)
        # inverse gluing
        fwd = dict(zip(FACE_VERTICES[f], perm))
        inv = {v: k for k, v in fwd.items()}
        gluings[(t2, f2)] = (t, f, tuple(inv[v] for v in FACE_VERTICES[f2]))
    p = PseudoTriangulation(tet_count=nt, gluings=gluings)
    p.validate_gluings()
    return p
