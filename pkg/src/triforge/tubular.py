"""Triangulated exteriors of links in thickened surfaces.

This is the engine behind both pipelines: a link sitting over a 4-valent
graph on a closed oriented surface (the planar diagram for surgery, the
kinked Lickorish curve system for Heegaard words) is thickened, its open
tube neighbourhoods removed, and the complement triangulated by coning
one cell per quadrant of each crossing piece.

The combinatorics realised here is a vertex-set-simplicial version of the
cut-along-the-dual-graph decomposition.  Tube cross-sections are pinched
onto the central axis of each piece (consecutive stacked tubes share a
pole), and tube-wall quadrangles are sheared backward along each
component so that no two of them carry the same vertex set.  Every cone
cell's boundary is checked to be an embedded 2-sphere as it is built.

Boundary bookkeeping (the two surface copies and one torus per component,
with the framing curve alpha and its parallel alpha') comes back to the
caller, which attaches caps and Dehn filling tori.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import ComplexError, fan_polygon, quad_diagonal, split_quad


class BuildError(RuntimeError):
    pass


@dataclass
class MapData:
    """A 4-valent combinatorial map: darts are 4*vertex + slot."""
    nv: int
    arc_of: dict          # dart -> arc id
    partner: dict         # dart -> dart (other end of the arc)
    corner_face: dict     # dart d -> face id of the corner (d, rot d)

    def rot(self, d):
        return 4 * (d // 4) + (d % 4 + 1) % 4

    def dart(self, v, s):
        return 4 * v + s


@dataclass
class Passage:
    component: int
    index: int            # position along the component walk
    vertex: int
    in_dart: int
    out_dart: int
    height: object        # sortable; smaller = higher in the stack
    pos: int = 0          # 1-based stack position at the vertex (1 = top)


@dataclass
class Traversal:
    component: int
    index: int            # traversal i runs from passage i-1 to passage i
    arc: int
    from_passage: Passage
    to_passage: Passage
    slot: int = 0         # stack slot on the arc (0 = top)


@dataclass
class ExteriorResult:
    tets: list                    # tetrahedra over vertex keys
    top_tris: list                # triangles of the outer surface copy
    bottom_tris: list
    alpha: dict                   # component -> list of keys (cycle)
    alpha_prime: dict
    hatched: dict                 # component -> list of quad cycles (L0,R0,L1,R1,...)
    diagonals: dict               # frozenset(corners) -> diagonal pair
    surface_edge_paths: dict      # (vertex,) data for cap builders
    stats: dict


def _fan(cycle, apex):
    return [tuple(t) for t in fan_polygon(list(cycle), apex)]


class _Cell:
    """A cone cell under construction: far faces make tets, near faces are
    shared with neighbouring cells and must contain the apex."""

    def __init__(self, name, apex, allowed_multi=()):
        self.name = name
        self.apex = apex
        self.far = []
        self.near = []
        self.allowed_multi = set(allowed_multi)

    def add_far(self, tris):
        self.far.extend(tuple(sorted(t)) for t in tris)

    def add_near(self, tris):
        self.near.extend(tuple(sorted(t)) for t in tris)

    def _dump(self):
        import os
        if os.environ.get("TRIFORGE_DEBUG"):
            print("CELL %s apex=%r" % (self.name, self.apex))
            for t in self.far:
                print("  far ", t)
            for t in self.near:
                print("  near", t)

    def build(self):
        apex = self.apex
        for t in self.far:
            if apex in t:
                raise BuildError("%s: far face %r contains apex %r" % (self.name, t, apex))
        for t in self.near:
            if apex not in t:
                raise BuildError("%s: near face %r misses apex %r" % (self.name, t, apex))
        tris = self.far + self.near
        if len(set(tris)) != len(tris):
            dup = [t for t in tris if tris.count(t) > 1]
            raise BuildError("%s: duplicated boundary face %r" % (self.name, dup[:1]))
        # each edge in exactly 2 triangles (links are then circle unions);
        # boundary self-contact along a registered edge suspends the local
        # sphere check for this cell (the global manifold check still runs)
        edge_count = {}
        for t in tris:
            for e in itertools.combinations(t, 2):
                edge_count[e] = edge_count.get(e, 0) + 1
        suspended = False
        for e, c in edge_count.items():
            if c == 2:
                continue
            if frozenset(e) in self.allowed_multi and c == 4:
                suspended = True
                continue
            raise BuildError("%s: boundary not a surface at edge %r (count %d)"
                             % (self.name, e, c))
        if suspended:
            return [tuple(sorted((self.apex,) + t)) for t in self.far]
        # the boundary may touch itself at vertices (shear bulges do that);
        # resolving those pinches must leave a single 2-sphere.
        verts = {v for t in tris for v in t}
        pinches = 0
        for v in verts:
            link_edges = [tuple(x for x in t if x != v) for t in tris if v in t]
            nbr = {}
            for a, b in link_edges:
                nbr.setdefault(a, set()).add(b)
                nbr.setdefault(b, set()).add(a)
            start = link_edges[0][0]
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in nbr[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps = 1
            rest = set(nbr) - seen
            while rest:
                comps += 1
                s0 = next(iter(rest))
                seen2 = {s0}
                stack = [s0]
                while stack:
                    x = stack.pop()
                    for y in nbr[x]:
                        if y not in seen2:
                            seen2.add(y)
                            stack.append(y)
                rest -= seen2
            pinches += comps - 1
        chi = len(verts) - len(edge_count) + len(tris)
        if chi + pinches != 2:
            raise BuildError("%s: boundary resolves to Euler characteristic %d"
                             % (self.name, chi + pinches))
        # connectivity
        nbr = {}
        for t in tris:
            for a, b in itertools.combinations(t, 2):
                nbr.setdefault(a, set()).add(b)
                nbr.setdefault(b, set()).add(a)
        start = next(iter(verts))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nbr[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(verts):
            raise BuildError("%s: boundary sphere disconnected" % self.name)
        return [tuple(sorted((apex,) + t)) for t in self.far]


def build_exterior(mapdata, walks, heights):
    """Triangulate (surface x [-1,1]) minus open tubes around the link.

    ``walks``: per component, the cyclic list of (vertex, in_dart) pairs
    (out darts are opposite).  ``heights[(component, index)]`` orders the
    passages at each vertex (smaller on top).  Returns an ExteriorResult.
    """
    md = mapdata
    rot = md.rot

    # -- passages and traversals -----------------------------------------
    passages = []
    walks_p = {}
    for comp, walk in walks.items():
        plist = []
        for idx, (v, in_dart) in enumerate(walk):
            out_dart = rot(rot(in_dart))
            if in_dart // 4 != v:
                raise BuildError("walk dart not at its vertex")
            p = Passage(component=comp, index=idx, vertex=v,
                        in_dart=in_dart, out_dart=out_dart,
                        height=heights[(comp, idx)])
            plist.append(p)
            passages.append(p)
        if len(plist) < 2:
            raise BuildError("component %r has fewer than 2 passages" % comp)
        walks_p[comp] = plist

    by_vertex = {}
    for p in passages:
        by_vertex.setdefault(p.vertex, []).append(p)
    for v, ps in by_vertex.items():
        ps.sort(key=lambda p: (p.height, p.component, p.index))
        hs = [p.height for p in ps]
        if len(set(hs)) != len(hs):
            raise BuildError("equal passage heights at vertex %d" % v)
        for i, p in enumerate(ps):
            p.pos = i + 1

    traversals = []
    by_arc = {}
    trav_at_dart = {}
    for comp, plist in walks_p.items():
        n = len(plist)
        for i in range(n):
            pf = plist[(i - 1) % n]
            pt = plist[i]
            arc = md.arc_of[pf.out_dart]
            if md.arc_of[pt.in_dart] != arc or md.partner[pf.out_dart] != pt.in_dart:
                raise BuildError("walk of component %r is not arc-consistent" % comp)
            tr = Traversal(component=comp, index=i, arc=arc,
                           from_passage=pf, to_passage=pt)
            traversals.append(tr)
            by_arc.setdefault(arc, []).append(tr)
            trav_at_dart.setdefault(pf.out_dart, []).append(tr)
            trav_at_dart.setdefault(pt.in_dart, []).append(tr)
    for arc, trs in by_arc.items():
        # co-orientation along each arc and a consistent stack order
        d0 = trs[0].to_passage.in_dart
        for tr in trs:
            if tr.to_passage.in_dart != d0:
                raise BuildError("arc %r traversed in both directions" % arc)
        trs.sort(key=lambda tr: (_wall_height(tr), tr.component, tr.index))
        for i, tr in enumerate(trs):
            tr.slot = i

    # per-passage incoming/outgoing traversal
    in_trav = {}
    out_trav = {}
    for tr in traversals:
        in_trav[id(tr.to_passage)] = tr
        out_trav[id(tr.from_passage)] = tr

    # -- pole ladders -------------------------------------------------------
    # Consecutive stacked tubes share a pole (the tangency merge) except
    # when a traversal runs directly from the upper tube to the lower one
    # at this vertex: the backward bulge would then collide with the lower
    # tube's top pole, so that gap keeps a free segment.
    adjacent_drop = set()
    drop_traversals = []
    for tr in traversals:
        pf, pt = tr.from_passage, tr.to_passage
        if pf.vertex == pt.vertex and pf.pos + 1 == pt.pos:
            adjacent_drop.add((pf.vertex, pf.pos))
            drop_traversals.append(tr)

    poles = {}        # v -> list of pole keys, top to bottom
    segs = {}         # v -> list parallel to pole gaps: ("passage", p) | ("free",)
    pt_key = {}
    pb_key = {}
    for v in range(md.nv):
        ps = by_vertex.get(v, [])
        pl = [("P", v, 0)]
        sg = []
        if not ps:
            sg.append(("free",))
            pl.append(("P", v, 1))
        for k, p in enumerate(ps):
            pt_key[id(p)] = pl[-1]
            sg.append(("passage", p))
            pl.append(("P", v, len(pl)))
            pb_key[id(p)] = pl[-1]
            if k + 1 < len(ps) and (v, p.pos) in adjacent_drop:
                sg.append(("free",))
                pl.append(("P", v, len(pl)))
        poles[v] = pl
        segs[v] = sg

    def pole(v, i):
        return poles[v][i]

    def pole_max(v):
        return poles[v][-1]

    def PT(p):
        return pt_key[id(p)]

    def PB(p):
        return pb_key[id(p)]

    def pole_index(v, key):
        return poles[v].index(key)

    def WT(tr):
        return ("WT", tr.arc, tr.slot)

    def WB(tr):
        return ("WB", tr.arc, tr.slot)

    def MT(arc):
        return ("MT", arc)

    def MB(arc):
        return ("MB", arc)

    def FT(face):
        return ("FT", face)

    def FB(face):
        return ("FB", face)

    # bulge vertex of a traversal's wall interface (backward shear)
    def bulge(tr):
        return PB(tr.from_passage)

    # pole order consistency between arcs and vertex stacks
    for dart, trs in trav_at_dart.items():
        ps = []
        for tr in sorted(trs, key=lambda t: t.slot):
            p = tr.to_passage if tr.to_passage.in_dart == dart else tr.from_passage
            ps.append(p)
        poss = [p.pos for p in ps]
        if poss != sorted(poss):
            raise BuildError("stack order mismatch at dart %d" % dart)

    # -- curl quadrants (both darts of a corner on the same arc) -----------
    # corner d means the quadrant between darts d and rot(d)
    all_corners = [md.dart(v, s) for v in range(md.nv) for s in range(4)]
    curl = {}
    for d in all_corners:
        if md.arc_of[d] == md.arc_of[rot(d)]:
            curl[d] = md.arc_of[d]
    # reroute the spoke at the *second* dart of each curl through the
    # monogon face's barycenter
    rerouted = {}          # dart -> face whose FT/FB sits on the spoke
    for d, arc in curl.items():
        rerouted[rot(d)] = md.corner_face[d]

    def spoke_top(v, dart):
        """Vertex path of the top spoke at a dart, centre to mid-arc."""
        if dart in rerouted:
            return [pole(v, 0), FT(rerouted[dart]), MT(md.arc_of[dart])]
        return [pole(v, 0), MT(md.arc_of[dart])]

    def spoke_bottom(v, dart):
        if dart in rerouted:
            return [pole_max(v), FB(rerouted[dart]), MB(md.arc_of[dart])]
        return [pole_max(v), MB(md.arc_of[dart])]

    # -- shared face tables -------------------------------------------------
    diagonals = {}

    def set_diag(cycle, diag):
        key = frozenset(cycle)
        if key in diagonals and set(diagonals[key]) != set(diag):
            raise BuildError("conflicting diagonals for quad %r" % (cycle,))
        diagonals[key] = tuple(diag)

    def quad_tris(cycle, diag=None):
        if diag is None:
            diag = diagonals.get(frozenset(cycle)) or quad_diagonal(cycle)
        set_diag(cycle, diag)
        return [tuple(sorted(t)) for t in split_quad(cycle, diag)]

    # hatched band quads per passage, with their owning quadrant corner
    alpha = {}
    alpha_prime = {}
    hatched = {}
    hatch_corner = {}      # (comp, index) -> corner dart
    hatch_traversal = {}   # (comp, index) -> traversal at the quad's station
    for comp, plist in walks_p.items():
        a_cycle = []
        b_cycle = []
        quads = []
        n = len(plist)
        for i in range(n):
            p = plist[i]
            tin = in_trav[id(p)]
            tout = out_trav[id(p)]
            a_cycle.extend([WT(tin), PT(p)])
            b_cycle.extend([WB(tin), PB(p)])
            prev = tin.from_passage
            in_L = (WT(tin), PT(p), PB(p), WB(tin))
            in_R = (WT(tin), PT(p), WB(tin), PB(prev))
            out_L = (PT(p), WT(tout), WB(tout), PB(p))
            out_R = (PT(p), WT(tout), PB(p), WB(tin))
            # corner assignment: L side is the rot(in_dart) side
            for cyc, corner, tr in (
                    (in_L, p.in_dart, tin),
                    (in_R, rot(rot(rot(p.in_dart))), tin),
                    (out_L, rot(p.in_dart), tout),
                    (out_R, p.out_dart, tout)):
                hatch_corner[(comp, len(quads))] = corner
                hatch_traversal[(comp, len(quads))] = tr
                quads.append(cyc)
        alpha[comp] = a_cycle
        alpha_prime[comp] = b_cycle
        hatched[comp] = quads

    # -- radial walls ---------------------------------------------------------
    # wall at (vertex, dart): regions between the bands of passages using
    # this dart, with the centre path walking the pole ladder and inserting
    # cross-passage structure (a rung edge on its left wall, the sheared
    # two-edge path on its right wall) and free segments.
    def centre_path(v, lo_idx, hi_idx, dart):
        """Pole-ladder path from pole index lo up to hi (lo > hi), as the
        ordered vertex list strictly between the endpoints."""
        out = []
        for j in range(lo_idx - 1, hi_idx - 1, -1):
            seg = segs[v][j]
            if seg[0] == "passage":
                p = seg[1]
                if dart == rot(p.in_dart):
                    pass  # the rung is a single edge
                elif dart == rot(rot(rot(p.in_dart))):
                    out.append(WB(in_trav[id(p)]))
                else:
                    raise BuildError("cross passage does not flank this wall")
            if j != hi_idx:
                out.append(pole(v, j))
        return out

    # -- phase A: collect every boundary polygon ----------------------------
    # owners: the corner darts of the (at most two) quadrant cells whose
    # boundary carries the polygon.  kind tags drive cap bookkeeping.
    polygons = []

    def add_poly(kind, key, cycle, owners, prefer=()):
        cycle = _dedup_cycle(list(cycle))
        if len(cycle) < 3:
            return
        if len(set(cycle)) != len(cycle):
            raise BuildError("polygon %r revisits a corner: %r" % (key, cycle))
        polygons.append({"kind": kind, "key": key, "cycle": cycle,
                         "owners": tuple(owners), "prefer": tuple(prefer)})

    allowed_multi = {frozenset({PB(tr.from_passage), PT(tr.to_passage)})
                     for tr in drop_traversals}

    # hatched band quads
    for comp in sorted(hatched):
        for qi, cycle in enumerate(hatched[comp]):
            corner = hatch_corner[(comp, qi)]
            add_poly("hatch", ("hatch", comp, qi), cycle, [corner])

    # radial wall regions
    for v in range(md.nv):
        for s in range(4):
            dart = md.dart(v, s)
            arc = md.arc_of[dart]
            owners = [rot(rot(rot(dart))), dart]
            own = []
            for tr in sorted(trav_at_dart.get(dart, ()), key=lambda t: t.slot):
                p = tr.to_passage if tr.to_passage.in_dart == dart else tr.from_passage
                own.append((tr, p))
            last_idx = len(poles[v]) - 1
            if not own:
                cycle = spoke_top(v, dart)[:]
                cycle.append(MB(arc))
                bot = spoke_bottom(v, dart)
                cycle.extend(reversed(bot[:-1]))
                cycle.extend(centre_path(v, last_idx, 0, dart))
                add_poly("wall", ("wall", v, s, 0), cycle, owners)
            else:
                tr0, p0 = own[0]
                i0 = pole_index(v, PT(p0))
                cycle = spoke_top(v, dart) + [WT(tr0), PT(p0)]
                if i0 > 0:
                    cycle.extend(centre_path(v, i0, 0, dart))
                add_poly("wall", ("wall", v, s, 0), cycle, owners)
                for gi, ((tra, pa), (trb, pb)) in enumerate(zip(own, own[1:])):
                    ia = pole_index(v, PB(pa))
                    ib = pole_index(v, PT(pb))
                    cycle = [PB(pa), WB(tra), WT(trb), PT(pb)]
                    if ib > ia:
                        cycle.extend(centre_path(v, ib, ia, dart))
                    add_poly("wall", ("wall", v, s, 1 + gi), cycle, owners)
                trl, pl = own[-1]
                il = pole_index(v, PB(pl))
                cycle = [PB(pl), WB(trl)] + list(reversed(spoke_bottom(v, dart)))
                if last_idx > il:
                    cycle.extend(centre_path(v, last_idx, il, dart))
                add_poly("wall", ("wall", v, s, 999), cycle, owners)

    # G-wall halves
    for arc in sorted({md.arc_of[d] for d in all_corners}):
        darts = sorted({d for d in all_corners if md.arc_of[d] == arc})
        assert len(darts) == 2
        trs = sorted(by_arc.get(arc, ()), key=lambda t: t.slot)
        if trs:
            d_in = trs[0].to_passage.in_dart
            d_out = trs[0].from_passage.out_dart
        else:
            d_in, d_out = darts
        rot3 = lambda d: rot(rot(rot(d)))
        for side in ("L", "R"):
            if side == "L":
                c1, c2 = d_in, rot3(d_out)
            else:
                c1, c2 = rot3(d_in), d_out
            if c1 == c2:
                continue   # curl side: the quadrant sees the tube directly
            f = md.corner_face[c1]
            if md.corner_face[c2] != f:
                raise BuildError("wall sides of arc %r disagree on the face" % arc)
            path = [MT(arc)]
            for tr in trs:
                if side == "L":
                    path.extend([WT(tr), WB(tr)])
                else:
                    path.extend([WT(tr), bulge(tr), WB(tr)])
            path.append(MB(arc))
            cycle = path + [FB(f), FT(f)]
            add_poly("ghalf", ("ghalf", arc, side), cycle, [c1, c2],
                     prefer=[FT(f), FB(f)])

    # top and bottom quadrant faces
    for v in range(md.nv):
        for s in range(4):
            d1 = md.dart(v, s)
            d2 = rot(d1)
            f = md.corner_face[d1]
            a1 = md.arc_of[d1]
            if d1 in curl:
                add_poly("top", ("top", v, s), [pole(v, 0), MT(a1), FT(f)], [d1])
                add_poly("bottom", ("bottom", v, s),
                         [pole_max(v), MB(a1), FB(f)], [d1])
            else:
                sp1t = spoke_top(v, d1)
                sp2t = spoke_top(v, d2)
                cyc = sp1t + [FT(f)] + list(reversed(sp2t))[:-1]
                add_poly("top", ("top", v, s), cyc, [d1], prefer=[FT(f)])
                sp1b = spoke_bottom(v, d1)
                sp2b = spoke_bottom(v, d2)
                cyc = sp1b + [FB(f)] + list(reversed(sp2b))[:-1]
                add_poly("bottom", ("bottom", v, s), cyc, [d1], prefer=[FB(f)])

    # -- phase B: triangulate with edge-collision avoidance ------------------
    reserved = {}
    for poly in polygons:
        cyc = poly["cycle"]
        n = len(cyc)
        for i in range(n):
            e = frozenset((cyc[i], cyc[(i + 1) % n]))
            reserved[e] = reserved.get(e, 0) + 1
    chosen = set()

    def try_fan(cycle, apex):
        n = len(cycle)
        i = cycle.index(apex)
        diags = []
        for k in range(2, n - 1):
            d = frozenset((apex, cycle[(i + k) % n]))
            if d in reserved or d in chosen:
                return None
            diags.append(d)
        return diags

    for poly in sorted(polygons, key=lambda p: p["key"]):
        cyc = poly["cycle"]
        if len(cyc) == 3:
            poly["tris"] = [tuple(sorted(cyc))]
            continue
        done = False
        for apex in list(poly["prefer"]) + sorted(cyc):
            if apex not in cyc:
                continue
            diags = try_fan(cyc, apex)
            if diags is not None:
                chosen.update(diags)
                poly["tris"] = [tuple(sorted(t)) for t in fan_polygon(cyc, apex=apex)]
                if len(cyc) == 4:
                    set_diag(cyc, tuple(next(iter(diags))))
                done = True
                break
        if not done and len(cyc) == 4:
            # the registered drop case: accept the reserved diagonal
            a, b, c, d = cyc
            for diag in ((a, c), (b, d)):
                if frozenset(diag) in allowed_multi:
                    set_diag(cyc, diag)
                    poly["tris"] = [tuple(sorted(t)) for t in split_quad(cyc, diag)]
                    done = True
                    break
        if not done:
            raise BuildError("no collision-free triangulation for %r %r"
                             % (poly["key"], cyc))

    # -- phase C: assemble the quadrant cone cells ---------------------------
    faces_of_corner = {}
    for poly in polygons:
        for c in poly["owners"]:
            faces_of_corner.setdefault(c, []).append(poly)

    tets = []
    top_tris = []
    bottom_tris = []
    for poly in polygons:
        if poly["kind"] == "top":
            top_tris.extend(poly["tris"])
        elif poly["kind"] == "bottom":
            bottom_tris.extend(poly["tris"])

    for v in range(md.nv):
        for s in range(4):
            d1 = md.dart(v, s)
            f = md.corner_face[d1]
            polys = faces_of_corner.get(d1, ())
            # a registered multi-edge on the boundary forces the apex onto
            # one of its endpoints (otherwise the cone would replicate the
            # internal face apex*edge once per incident far triangle)
            multi_here = set()
            for poly in polys:
                cyc = poly["cycle"]
                n = len(cyc)
                for i in range(n):
                    e = frozenset((cyc[i], cyc[(i + 1) % n]))
                    if e in allowed_multi:
                        multi_here.add(e)
                if n == 4:
                    dpair = diagonals.get(frozenset(cyc))
                    if dpair and frozenset(dpair) in allowed_multi:
                        multi_here.add(frozenset(dpair))
            if multi_here:
                common = set.intersection(*(set(e) for e in multi_here))
                if not common:
                    raise BuildError("cell at dart %d meets disjoint multi-edges" % d1)
                apex = min(common)
            elif d1 in curl:
                hq = [p for p in polys if p["kind"] == "hatch"]
                top_tr = None
                for p in hq:
                    comp, qi = p["key"][1], p["key"][2]
                    tr = hatch_traversal[(comp, qi)]
                    if top_tr is None or tr.slot < top_tr.slot:
                        top_tr = tr
                if top_tr is None:
                    raise BuildError("curl quadrant with no tube")
                apex = WT(top_tr)
            else:
                apex = FT(f)
            cell = _Cell("quad(v=%d,s=%d)" % (v, s), apex, allowed_multi)
            for poly in polys:
                for t in poly["tris"]:
                    if apex in t:
                        cell.add_near([t])
                    else:
                        cell.add_far([t])
            tets.extend(cell.build())

    stats = {
        "pieces": md.nv,
        "exterior_tets": len(tets),
        "top_triangles": len(top_tris),
        "bottom_triangles": len(bottom_tris),
        "hatched_quads": sum(len(q) for q in hatched.values()),
    }
    return ExteriorResult(
        tets=tets, top_tris=top_tris, bottom_tris=bottom_tris,
        alpha=alpha, alpha_prime=alpha_prime, hatched=hatched,
        diagonals=diagonals, surface_edge_paths={}, stats=stats,
    )


def _wall_height(tr):
    hf = tr.from_passage.height
    ht = tr.to_passage.height
    return (_as_frac(hf) + _as_frac(ht)) / 2


def _as_frac(h):
    if isinstance(h, tuple):
        # lexicographic heights (level, tweak): flatten
        return Fraction(h[0]) + Fraction(h[1]) / 1000
    return Fraction(h)


def _dedup_cycle(cycle):
    out = []
    for x in cycle:
        if not out or out[-1] != x:
            out.append(x)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _diag_through(cycle, apex):
    a, b, c, d = cycle
    if apex in (a, c):
        return (a, c)
    if apex in (b, d):
        return (b, d)
    raise BuildError("apex not on quad")


def fill_tori(result):
    """Dehn filling solid tori: two coned meridian disks per component and
    one triangular prism per hatched quadrangle (3 tets each)."""
    from .complexes import prism_tets

    tets = []
    for comp in sorted(result.alpha):
        a = result.alpha[comp]
        b = result.alpha_prime[comp]
        m = len(a)
        if m < 4:
            raise BuildError("degenerate filling torus for component %r" % comp)
        o = ("O", comp)
        op = ("O'", comp)
        quads = result.hatched[comp]

        def diag_of(cycle):
            key = frozenset(cycle)
            d = result.diagonals.get(key)
            if d is None:
                d = quad_diagonal(cycle)
            return d

        for i in range(m):
            j = (i + 1) % m
            jm = (i - 1) % m
            # left prism: bottom (o, a_i, a_j), top (o', b_i, b_j)
            lq = {frozenset((o, a[i], b[i], op)): (o, b[i]),
                  frozenset((o, a[j], b[j], op)): (o, b[j]),
                  frozenset((a[i], a[j], b[j], b[i])): diag_of((a[i], a[j], b[j], b[i]))}
            tets.extend(prism_tets((o, a[i], a[j]), (op, b[i], b[j]), lq))
            # right prism: bottom (o, a_i, a_j), top (o', b_{i-1}, b_i)
            rq = {frozenset((o, a[i], b[jm], op)): (o, b[jm]),
                  frozenset((o, a[j], b[i], op)): (o, b[i]),
                  frozenset((a[i], a[j], b[i], b[jm])): diag_of((a[i], a[j], b[i], b[jm]))}
            tets.extend(prism_tets((o, a[i], a[j]), (op, b[jm], b[i]), rq))
    return tets


def cone_cap(tris, apex_key):
    """Cone a closed surface piece (a sphere) from a fresh apex."""
    out = []
    for t in tris:
        if apex_key in t:
            raise BuildError("cap apex collides")
        out.append(tuple(sorted((apex_key,) + t)))
    return out


def handlebody_cap(tris, cycles, tag):
    """Triangulate the handlebody glued on a closed genus-g surface.

    ``cycles``: disjoint edge-cycles bounding the compressing disks.  The
    handlebody is cut along the disks into a ball, coned from a fresh
    centre, and the doubled disks filled with lens cells.
    """
    tris = [tuple(sorted(t)) for t in tris]
    tri_set = set(tris)
    # adjacency for star rotation at cycle vertices
    edge_tris = {}
    for t in tris:
        for e in itertools.combinations(t, 2):
            edge_tris.setdefault(tuple(sorted(e)), []).append(t)
    for e, lst in edge_tris.items():
        if len(lst) != 2:
            raise BuildError("cap surface not closed at %r" % (e,))

    prime_map = {}

    def prime(v, k):
        return ("HC", tag, k, v)

    new_tris = list(tris)
    cap_faces = []
    lens_tets = []
    for k, cycle in enumerate(cycles):
        n = len(cycle)
        if n < 3:
            raise BuildError("disk cycle too short")
        # adjacency over the current (possibly already recut) triangle list
        edge_tris = {}
        for t in new_tris:
            for e in itertools.combinations(t, 2):
                edge_tris.setdefault(tuple(sorted(e)), []).append(t)
        cyc_edges = {tuple(sorted((cycle[i], cycle[(i + 1) % n]))) for i in range(n)}
        for e in cyc_edges:
            if e not in edge_tris or len(edge_tris[e]) != 2:
                raise BuildError("disk cycle edge %r not on the surface" % (e,))
        # flood fill one side of the cycle, not crossing its edges
        e0 = tuple(sorted((cycle[0], cycle[1])))
        t0 = edge_tris[e0][0]
        seen = {t0}
        stack = [t0]
        while stack:
            t = stack.pop()
            for e in itertools.combinations(t, 2):
                e = tuple(sorted(e))
                if e in cyc_edges:
                    continue
                for t2 in edge_tris[e]:
                    if t2 not in seen:
                        seen.add(t2)
                        stack.append(t2)
        left_side = seen
        # relabel cycle vertices in left-side triangles
        ren = {v: prime(v, k) for v in cycle}
        out = []
        for t in new_tris:
            if t in left_side and any(v in ren for v in t):
                out.append(tuple(sorted(ren.get(v, v) for v in t)))
            else:
                out.append(t)
        new_tris = out
        # caps: fan over the original cycle from u; over the primed from w'
        u = min(cycle)
        iu = cycle.index(u)
        w = cycle[(iu + 1) % n]
        fan_u = _fan(cycle, u)
        fan_wp = [tuple(sorted(tuple(ren[x] for x in t)))
                  for t in _fan(cycle, w)]
        cap_faces.extend([tuple(sorted(t)) for t in fan_u])
        cap_faces.extend(fan_wp)
        # lens: cone from u over fan_w's u-free triangles (unprimed labels)
        fan_w = _fan(cycle, w)
        for t in fan_w:
            if u not in t:
                lens_tets.append(tuple(sorted((u,) + t)))
        prime_map.update({pv: v for v, pv in ren.items()})

    centre = ("CAP", tag)
    ball_tets = []
    for t in new_tris + cap_faces:
        ball_tets.append(tuple(sorted((centre,) + t)))
    # unprime
    out = []
    for t in ball_tets:
        out.append(tuple(sorted(prime_map.get(v, v) for v in t)))
    if len(set(out)) != len(out):
        raise BuildError("handlebody cap produced coincident tetrahedra")
    return out + lens_tets
