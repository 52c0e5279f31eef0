"""Framed planar link diagrams: PD parsing, writhe, kinks, dual structure.

PD convention used throughout: a crossing record ``X a b c d s`` lists the
four arc ids counterclockwise starting from the incoming under-strand, so
slot 0 = under-in, slot 2 = under-out.  The sign ``s`` fixes the
over-strand direction: ``+`` means the over strand enters at slot 3 and
exits at slot 1, ``-`` the reverse.  With slots drawn S,E,N,W this agrees
with the usual right-hand crossing sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    id: int
    arcs: tuple          # (a, b, c, d): slot 0..3, counterclockwise
    sign: int            # +1 or -1

    def under_in(self):
        return 0

    def under_out(self):
        return 2

    def over_in(self):
        return 3 if self.sign > 0 else 1

    def over_out(self):
        return 1 if self.sign > 0 else 3


@dataclass
class ComponentStats:
    component: int
    writhe: int
    crossing_incidences: int
    framing: int


@dataclass
class DualCellStructure:
    faces: list            # list of dart-orbits (each a tuple of darts)
    dual_edges: list       # one per arc: (face_left, face_right, arc)
    quadrangle_map: dict   # crossing index -> tuple of 4 corner faces


class FramedLinkDiagram:
    """A PD diagram plus crossingless unknot components and framings."""

    def __init__(self, crossings, crossingless=(), framings=None):
        self.crossings = list(crossings)
        self.crossingless = sorted(crossingless)   # component ids
        self._build()
        framings = dict(framings or {})
        for k in framings:
            if k not in self.component_ids:
                raise DiagramError("framing given for unknown component %r" % k)
        self.framings = {k: int(framings.get(k, 0)) for k in self.component_ids}

    # -- construction of the combinatorial map ---------------------------
    def _build(self):
        # arc incidences: each arc appears once as an outgoing end and once
        # as an incoming end
        heads = {}
        tails = {}
        for ci, x in enumerate(self.crossings):
            if len(set([0, 1, 2, 3])) != 4 or len(x.arcs) != 4:
                raise DiagramError("crossing %d needs 4 arcs" % x.id)
            if x.sign not in (1, -1):
                raise DiagramError("crossing %d: sign must be +-1" % x.id)
            ins = [(0, x.arcs[0]), (x.over_in(), x.arcs[x.over_in()])]
            outs = [(2, x.arcs[2]), (x.over_out(), x.arcs[x.over_out()])]
            for slot, a in ins:
                if a in heads:
                    raise DiagramError("arc %d has two incoming ends" % a)
                heads[a] = (ci, slot)
            for slot, a in outs:
                if a in tails:
                    raise DiagramError("arc %d has two outgoing ends" % a)
                tails[a] = (ci, slot)
        if set(heads) != set(tails):
            bad = set(heads) ^ set(tails)
            raise DiagramError("inconsistent arc orientations at arcs %r" % sorted(bad))
        self.arc_head = heads
        self.arc_tail = tails
        self.arcs = sorted(heads)

        # components by strand-following
        comp_of_arc = {}
        components = []
        for a0 in self.arcs:
            if a0 in comp_of_arc:
                continue
            walk_arcs = []
            a = a0
            while True:
                comp_of_arc[a] = len(components)
                walk_arcs.append(a)
                ci, slot = self.arc_head[a]
                out_slot = (slot + 2) % 4
                a = self.crossings[ci].arcs[out_slot]
                if a == a0:
                    break
                if a in comp_of_arc:
                    raise DiagramError("strand following collapsed at arc %d" % a)
            components.append(walk_arcs)
        # component ids 1..n in order of smallest arc id, then the
        # crossingless ones by their given ids (which must not clash)
        order = sorted(range(len(components)), key=lambda i: min(components[i]))
        self.component_arcs = {}
        self.component_of_arc = {}
        for new_id, i in enumerate(order, start=1):
            self.component_arcs[new_id] = components[i]
            for a in components[i]:
                self.component_of_arc[a] = new_id
        n = len(components)
        for k in self.crossingless:
            if k <= n:
                raise DiagramError(
                    "crossingless component id %d clashes with strand components" % k)
        self.component_ids = sorted(self.component_arcs) + list(self.crossingless)

    # -- darts ------------------------------------------------------------
    def dart(self, crossing_index, slot):
        return 4 * crossing_index + slot

    def dart_vertex_slot(self, d):
        return divmod(d, 4)

    def rot(self, d):
        return 4 * (d // 4) + (d % 4 + 1) % 4

    def partner(self, d):
        """Other end of the arc at this dart."""
        ci, slot = divmod(d, 4)
        a = self.crossings[ci].arcs[slot]
        head = self.arc_head[a]
        tail = self.arc_tail[a]
        if (ci, slot) == head:
            ci2, s2 = tail
        else:
            ci2, s2 = head
        return 4 * ci2 + s2

    def faces(self):
        """Dart orbits of rot-then-partner; dart d stands for the corner
        between d and rot(d)."""
        n = 4 * len(self.crossings)
        seen = [False] * n
        out = []
        for d0 in range(n):
            if seen[d0]:
                continue
            orbit = []
            d = d0
            while not seen[d]:
                seen[d] = True
                orbit.append(d)
                d = self.partner(self.rot(d))
            out.append(tuple(orbit))
        return out

    def corner_face_map(self):
        fm = {}
        for fi, orbit in enumerate(self.faces()):
            for d in orbit:
                fm[d] = fi
        return fm

    # -- statistics --------------------------------------------------------
    @property
    def crossing_number(self):
        return len(self.crossings)

    def writhe(self, component):
        if component in self.crossingless:
            return 0
        if component not in self.component_arcs:
            raise DiagramError("unknown component %r" % component)
        w = 0
        for x in self.crossings:
            cu = self.component_of_arc[x.arcs[0]]
            co = self.component_of_arc[x.arcs[x.over_in()]]
            if cu == component and co == component:
                w += x.sign
        return w

    def total_writhe(self):
        return sum(x.sign for x in self.crossings)

    def crossing_incidences(self, component):
        if component in self.crossingless:
            return 0
        k = 0
        for x in self.crossings:
            if self.component_of_arc[x.arcs[0]] == component:
                k += 1
            if self.component_of_arc[x.arcs[x.over_in()]] == component:
                k += 1
        return k

    def component_stats(self):
        out = []
        for cid in self.component_ids:
            out.append(ComponentStats(
                component=cid,
                writhe=self.writhe(cid),
                crossing_incidences=self.crossing_incidences(cid),
                framing=self.framings[cid],
            ))
        return out

    def f_total(self):
        return sum(abs(n) for n in self.framings.values())

    def surgery_certificate(self):
        """2c + f + n evaluated on this diagram."""
        return 2 * self.crossing_number + self.f_total() + self.split_zero_count()

    def split_zero_count(self):
        return sum(1 for k in self.crossingless if self.framings[k] == 0)

    # -- connectivity -------------------------------------------------------
    def nonsplit_pieces(self):
        """Partition of crossing indices into connected pieces of the map."""
        n = len(self.crossings)
        if n == 0:
            return []
        adj = {i: set() for i in range(n)}
        for a in self.arcs:
            hi = self.arc_head[a][0]
            ti = self.arc_tail[a][0]
            adj[hi].add(ti)
            adj[ti].add(hi)
        seen = set()
        pieces = []
        for start in range(n):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            pieces.append(sorted(comp))
        return pieces

    def restricted_to(self, crossing_indices):
        """Sub-diagram on the given crossings (must be a union of pieces)."""
        keep = set(crossing_indices)
        crossings = [self.crossings[i] for i in sorted(keep)]
        sub = FramedLinkDiagram(crossings)
        fr = {}
        for cid, arcs in sub.component_arcs.items():
            old = self.component_of_arc[arcs[0]]
            fr[cid] = self.framings[old]
        sub.framings = {k: fr.get(k, 0) for k in sub.component_ids}
        return sub

    def euler_check(self):
        """chi = V - E + F per nonsplit piece must be 2."""
        for piece in self.nonsplit_pieces():
            sub = self.restricted_to(piece) if len(piece) != len(self.crossings) else self
            v = len(sub.crossings)
            e = len(sub.arcs)
            f = len(sub.faces())
            if v - e + f != 2:
                raise DiagramError("piece has Euler characteristic %d" % (v - e + f))
        return True

    # -- transformations ---------------------------------------------------
    def add_kink(self, component, sign):
        """Reidemeister-I kink on the given component.

        + kinks raise the writhe by 1, - kinks lower it.  The kink goes on
        the arc segment immediately after the component's lowest arc id; a
        crossingless component becomes a 1-crossing diagram piece.
        """
        if sign not in (1, -1):
            raise DiagramError("kink sign must be +-1")
        next_arc = max(self.arcs, default=0) + 1
        next_xid = max((x.id for x in self.crossings), default=0) + 1
        if component in self.crossingless:
            # spawn the one-crossing unknot; the kink loop runs from the
            # over-out slot to the under-in slot (a dropping loop)
            p, q = next_arc, next_arc + 1
            if sign > 0:
                arcs = (q, q, p, p)
            else:
                arcs = (q, p, p, q)
            x = Crossing(id=next_xid, arcs=arcs, sign=sign)
            crossings = self.crossings + [x]
            crossingless = [k for k in self.crossingless if k != component]
            framings = {}
            out = FramedLinkDiagram(crossings, crossingless)
            # map old framings onto the new component ids
            for cid, arcs_ in out.component_arcs.items():
                if p in arcs_ or q in arcs_:
                    framings[cid] = self.framings[component]
                else:
                    old = self.component_of_arc[arcs_[0]]
                    framings[cid] = self.framings[old]
            for k in crossingless:
                framings[k] = self.framings[k]
            out.framings = {k: framings.get(k, 0) for k in out.component_ids}
            return out

        if component not in self.component_arcs:
            raise DiagramError("unknown component %r" % component)
        a = min(self.component_arcs[component])
        # split arc a (tail -> head) into a (tail -> kink) and r (kink -> head),
        # with the dropping loop arc q from the over-out to the under-in slot
        q, r = next_arc, next_arc + 1
        ti, tslot = self.arc_tail[a]
        hi, hslot = self.arc_head[a]
        crossings = []
        for ci, x in enumerate(self.crossings):
            arcs = list(x.arcs)
            if ci == hi:
                arcs[hslot] = r
            # note: tail keeps arc a
            if ci == ti and ti == hi and tslot == hslot:
                raise DiagramError("arc bookkeeping error")
            crossings.append(Crossing(id=x.id, arcs=tuple(arcs), sign=x.sign))
        if sign > 0:
            arcs = (q, q, r, a)
        else:
            arcs = (q, a, r, q)
        crossings.append(Crossing(id=next_xid, arcs=arcs, sign=sign))
        out = FramedLinkDiagram(crossings, self.crossingless)
        framings = {}
        for cid, arcs_ in out.component_arcs.items():
            probe = arcs_[0]
            if probe in (q, r):
                probe = a
            old = self.component_of_arc.get(probe, component)
            framings[cid] = self.framings[old]
        for k in self.crossingless:
            framings[k] = self.framings[k]
        out.framings = {k: framings.get(k, 0) for k in out.component_ids}
        return out

    def normalize_framing(self):
        """Kink every component until its writhe equals its framing."""
        diag = self
        changed = True
        while changed:
            changed = False
            for cid in list(diag.component_ids):
                w = diag.writhe(cid)
                n = diag.framings[cid]
                if cid in diag.crossingless and n == 0:
                    continue
                if w != n:
                    diag = diag.add_kink(cid, 1 if n > w else -1)
                    changed = True
                    break
        return diag

    def is_normalized(self):
        return all(self.writhe(c) == self.framings[c]
                   for c in self.component_ids if c not in self.crossingless)

    # -- dual structure ------------------------------------------------------
    def dual_structure(self):
        if len(self.nonsplit_pieces()) > 1:
            raise DiagramError("dual structure needs a nonsplit diagram")
        if self.crossingless:
            raise DiagramError("dual structure: crossingless component present")
        if self.crossing_number == 0:
            raise DiagramError("dual structure needs at least one crossing")
        faces = self.faces()
        fm = self.corner_face_map()
        dual_edges = []
        for a in self.arcs:
            ti, tslot = self.arc_tail[a]
            d = self.dart(ti, tslot)
            left = fm[d]
            right = fm[self.rot(self.rot(self.rot(d)))]
            dual_edges.append((left, right, a))
        quad = {}
        for ci in range(len(self.crossings)):
            quad[ci] = tuple(fm[self.dart(ci, s)] for s in range(4))
        v = len(self.crossings)
        e = len(self.arcs)
        f = len(faces)
        if v - e + f != 2:
            raise DiagramError("not a sphere diagram: chi=%d" % (v - e + f))
        return DualCellStructure(faces=faces, dual_edges=dual_edges, quadrangle_map=quad)

    # -- linking matrix --------------------------------------------------------
    def linking_matrix(self):
        ids = self.component_ids
        idx = {c: i for i, c in enumerate(ids)}
        r = len(ids)
        m = [[0] * r for _ in range(r)]
        for x in self.crossings:
            cu = self.component_of_arc[x.arcs[0]]
            co = self.component_of_arc[x.arcs[x.over_in()]]
            if cu != co:
                i, j = idx[cu], idx[co]
                m[i][j] += x.sign
                m[j][i] += x.sign
        for i in range(r):
            for j in range(r):
                if i != j:
                    if m[i][j] % 2:
                        raise DiagramError("odd inter-component crossing count")
                    m[i][j] //= 2
        for c, i in idx.items():
            m[i][i] = self.framings[c]
        return m

    # -- serialization ----------------------------------------------------------
    def to_text(self):
        lines = []
        for x in self.crossings:
            lines.append("X %d %d %d %d %s" % (x.arcs + ("+" if x.sign > 0 else "-",)))
        for k in self.crossingless:
            lines.append("U %d" % k)
        for c in self.component_ids:
            lines.append("F %d %d" % (c, self.framings[c]))
        return "\n".join(lines) + "\n"


def parse_diagram(text):
    """Parse the PD file format into a FramedLinkDiagram."""
    crossings = []
    crossingless = []
    framings = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0].upper()
        try:
            if kind == "X":
                if len(fields) != 6:
                    raise DiagramError("want X a b c d s")
                a, b, c, d = (int(v) for v in fields[1:5])
                if min(a, b, c, d) < 1:
                    raise DiagramError("arc ids are positive integers")
                s = fields[5]
                if s in ("+", "+1"):
                    sign = 1
                elif s in ("-", "-1"):
                    sign = -1
                else:
                    raise DiagramError("sign must be + or -")
                crossings.append(Crossing(id=len(crossings) + 1,
                                          arcs=(a, b, c, d), sign=sign))
            elif kind == "U":
                if len(fields) != 2:
                    raise DiagramError("want U k")
                crossingless.append(int(fields[1]))
            elif kind == "F":
                if len(fields) != 3:
                    raise DiagramError("want F k n")
                framings.append((int(fields[1]), int(fields[2])))
            else:
                raise DiagramError("unknown record %r" % kind)
        except DiagramError as exc:
            raise DiagramError("line %d: %s" % (lineno, exc)) from None
        except ValueError:
            raise DiagramError("line %d: malformed integer" % lineno) from None
    seen = set()
    for k, _ in framings:
        if k in seen:
            raise DiagramError("duplicate framing line for component %d" % k)
        seen.add(k)
    diag = FramedLinkDiagram(crossings, crossingless, dict(framings))
    diag.euler_check()
    return diag


def writhe(diagram, component):
    return diagram.writhe(component)


def add_kink(diagram, component, sign):
    return diagram.add_kink(component, sign)


def normalize_framing(diagram):
    return diagram.normalize_framing()


def split_zero_count(diagram):
    return diagram.split_zero_count()


def dual_structure(diagram):
    return diagram.dual_structure()


def linking_matrix(diagram):
    return diagram.linking_matrix()


# -- a small corpus of named diagrams --------------------------------------

def unknot(framing=0):
    return FramedLinkDiagram([], crossingless=[1], framings={1: framing})


def braid_closure(n_strands, word, framings=None):
    """Closure of a braid word (letters +-i for sigma_i^+-1, 1-based)."""
    fresh = [0]

    def new_label():
        fresh[0] += 1
        return ("a", fresh[0])

    cur = [("s", i) for i in range(n_strands)]
    start = list(cur)
    raw = []
    for k in word:
        if k == 0 or abs(k) >= n_strands:
            raise DiagramError("bad braid letter %r" % k)
        i = abs(k) - 1
        oi, oj = new_label(), new_label()
        if k > 0:
            # over strand from position i: enters SW(slot3), exits NE(slot1)
            raw.append(((cur[i + 1], oj, oi, cur[i]), 1))
        else:
            raw.append(((cur[i], cur[i + 1], oj, oi), -1))
        cur[i], cur[i + 1] = oi, oj
    # close up: final label at position i is the same arc as the start label
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for i in range(n_strands):
        union(start[i], cur[i])
    labels = set()
    for arcs, _ in raw:
        labels.update(arcs)
    number = {}
    for lab in sorted(labels, key=lambda l: (l[0], l[1])):
        root = find(lab)
        if root not in number:
            number[root] = len(number) + 1
    crossings = [Crossing(id=i + 1, arcs=tuple(number[find(a)] for a in arcs), sign=s)
                 for i, (arcs, s) in enumerate(raw)]
    # strands never involved in a crossing close into unknot components
    crossingless = []
    diag0 = FramedLinkDiagram(crossings)
    next_free = max(diag0.component_arcs, default=0) + 1
    for i in range(n_strands):
        if find(start[i]) not in number:
            crossingless.append(next_free)
            next_free += 1
    d = FramedLinkDiagram(crossings, crossingless)
    if framings is not None:
        fr = dict(zip(d.component_ids, framings))
        d = FramedLinkDiagram(crossings, crossingless, fr)
    d.euler_check()
    return d


def trefoil(right=True, framing=0):
    """Braid closure of sigma_1^{+-3}: writhe +-3."""
    w = [1, 1, 1] if right else [-1, -1, -1]
    return braid_closure(2, w, framings=[framing])


def hopf_link(positive=True, framings=(0, 0)):
    """Braid closure of sigma_1^{+-2}: lk = +-1."""
    w = [1, 1] if positive else [-1, -1]
    return braid_closure(2, w, framings=list(framings))


def rii_unknot(framing=0):
    """Two-crossing unknot with writhe 0 (a +kink and a -kink)."""
    d = unknot(framing).add_kink(1, +1)
    cid = d.component_ids[0]
    return d.add_kink(cid, -1)


def figure_eight(framing=0):
    """Closure of (sigma_1 sigma_2^{-1})^2: the 4-crossing figure-eight."""
    return braid_closure(3, [1, -2, 1, -2], framings=[framing])
