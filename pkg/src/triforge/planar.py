"""Exact planar projections: closed polylines -> PD diagrams.

Strands are closed polygonal curves with Fraction coordinates; crossings
are computed exactly and turned into PD records under the package's slot
convention (slot 0 = under-in, counterclockwise).  The caller decides
over/under per crossing through a callback, which is how surface-level
data (component heights) becomes a planar diagram.
"""

from __future__ import annotations

from fractions import Fraction

from .diagrams import Crossing, DiagramError, FramedLinkDiagram


def _frac_pt(p):
    return (Fraction(p[0]), Fraction(p[1]))


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _seg_intersection(p1, p2, q1, q2):
    """Interior intersection point and parameters, or None.

    Touching endpoints and collinear overlaps raise; the layouts we build
    are generic by design, so any such case is a bug in the layout.
    """
    d1 = _sub(p2, p1)
    d2 = _sub(q2, q1)
    denom = _cross(d1, d2)
    w = _sub(q1, p1)
    if denom == 0:
        if _cross(d1, w) == 0:
            # collinear: forbid any overlap
            def param(pt):
                if d1[0]:
                    return (pt[0] - p1[0]) / d1[0]
                return (pt[1] - p1[1]) / d1[1]
            ts = sorted([param(q1), param(q2)])
            if ts[1] <= 0 or ts[0] >= 1:
                return None
            raise DiagramError("collinear overlapping segments in layout")
        return None
    s = _cross(w, d2) / denom
    t = _cross(w, d1) / denom
    if s <= 0 or s >= 1 or t <= 0 or t >= 1:
        if 0 <= s <= 1 and 0 <= t <= 1:
            raise DiagramError("segment endpoints touch in layout")
        return None
    pt = (p1[0] + s * d1[0], p1[1] + s * d1[1])
    return pt, s, t


def pd_from_strands(strands, over_of, framings=None):
    """Build a FramedLinkDiagram from closed polylines.

    ``strands``: list of closed polylines (lists of points, Fractions or
    ints).  ``over_of(passing_a, passing_b)`` gets two passing dicts with
    keys ``strand``, ``segment``, ``direction``, ``point`` and returns the
    one that goes over.  ``framings``: optional framing per strand.
    """
    polys = []
    for strand in strands:
        pts = [_frac_pt(p) for p in strand]
        if len(pts) < 3:
            raise DiagramError("strand needs at least 3 points")
        polys.append(pts)

    # collect crossing events
    events = {}       # (strand, seg) -> list of (t, crossing_id)
    crossings = []    # list of dicts with the two passings

    def segs(si):
        pts = polys[si]
        n = len(pts)
        for k in range(n):
            yield k, pts[k], pts[(k + 1) % n]

    for si in range(len(polys)):
        for sj in range(si, len(polys)):
            for ka, a1, a2 in segs(si):
                for kb, b1, b2 in segs(sj):
                    if si == sj:
                        if kb <= ka:
                            continue
                        n = len(polys[si])
                        if kb == ka + 1 or (ka == 0 and kb == n - 1):
                            continue
                    hit = _seg_intersection(a1, a2, b1, b2)
                    if hit is None:
                        continue
                    pt, s, t = hit
                    cid = len(crossings)
                    pa = {"strand": si, "segment": ka, "point": pt,
                          "direction": _sub(a2, a1)}
                    pb = {"strand": sj, "segment": kb, "point": pt,
                          "direction": _sub(b2, b1)}
                    crossings.append({"passings": (pa, pb)})
                    events.setdefault((si, ka), []).append((s, cid, 0))
                    events.setdefault((sj, kb), []).append((t, cid, 1))

    # arcs along each strand
    arc_counter = [0]
    crossingless = []
    # per (crossing, passing index): in/out arc ids
    arcs_in = {}
    arcs_out = {}
    strand_first_arc = {}
    for si in range(len(polys)):
        evs = []
        for k, _, _ in segs(si):
            for (t, cid, pi) in sorted(events.get((si, k), [])):
                evs.append((cid, pi))
        if not evs:
            crossingless.append(si)
            continue
        arc_ids = []
        for _ in evs:
            arc_counter[0] += 1
            arc_ids.append(arc_counter[0])
        strand_first_arc[si] = arc_ids[0]
        # arc i runs from event i to event i+1
        for i, (cid, pi) in enumerate(evs):
            arcs_in[(cid, pi)] = arc_ids[i - 1]
            arcs_out[(cid, pi)] = arc_ids[i]

    records = []
    for cid, cr in enumerate(crossings):
        pa, pb = cr["passings"]
        over = over_of(pa, pb)
        if over is pa:
            ov, un = (0, 1)
        elif over is pb:
            ov, un = (1, 0)
        else:
            raise DiagramError("over_of must return one of its arguments")
        u_dir = crossings[cid]["passings"][un]["direction"]
        o_dir = crossings[cid]["passings"][ov]["direction"]
        # slots: 0 = under-in; 2 = under-out; over-in at 1 or 3 by the
        # side: cross(u, o) > 0 puts +o on the CCW side of +u.
        cr_uo = _cross(u_dir, o_dir)
        if cr_uo == 0:
            raise DiagramError("tangential crossing in layout")
        ui = arcs_in[(cid, un)]
        uo = arcs_out[(cid, un)]
        oi = arcs_in[(cid, ov)]
        oo = arcs_out[(cid, ov)]
        # rays from the crossing: -u (slot0), then CCW.  +u sits at slot2.
        # the over-out ray +o has angle in (0,pi) from -u iff cross(-u,o)>0,
        # i.e. iff cross(u,o)<0; then over-out is slot1 and over-in slot3.
        if cr_uo < 0:
            arcs = (ui, oo, uo, oi)
            sign = 1
        else:
            arcs = (ui, oi, uo, oo)
            sign = -1
        records.append(Crossing(id=cid + 1, arcs=arcs, sign=sign))

    # crossingless strands become U components
    diag0 = FramedLinkDiagram(records)
    next_free = max(diag0.component_arcs, default=0) + 1
    u_ids = []
    for _ in crossingless:
        u_ids.append(next_free)
        next_free += 1
    d = FramedLinkDiagram(records, u_ids)
    d.euler_check()

    # map strands to component ids so framings land correctly
    strand_component = {}
    for si, first in strand_first_arc.items():
        strand_component[si] = d.component_of_arc[first]
    for si, uid in zip(crossingless, u_ids):
        strand_component[si] = uid
    if framings is not None:
        fr = {strand_component[si]: framings[si] for si in range(len(polys))}
        d = FramedLinkDiagram(records, u_ids, fr)
    d.strand_component = strand_component
    return d


def _plat_loops(word):
    """Closed polylines of the 4-plat closure of a B4 word."""
    Q = Fraction
    L = len(word)
    cols = [[c] for c in range(4)]
    for let in word:
        i = abs(let) - 1
        for w in cols:
            c = w[-1]
            if c == i:
                w.append(i + 1)
            elif c == i + 1:
                w.append(i)
            else:
                w.append(c)

    def wire_points(w):
        pts = [(Q(w[0]), Q(0))]
        for k in range(L):
            a, b = w[k], w[k + 1]
            if a != b:
                pts.append((Q(a), Q(4 * k + 1, 4)))
                pts.append((Q(b), Q(4 * k + 3, 4)))
        pts.append((Q(w[L]), Q(L)))
        return pts

    perm = {w[0]: w[L] for w in cols}
    inv = {v: k for k, v in perm.items()}
    loops = []
    used = set()
    for c0 in range(4):
        if c0 in used:
            continue
        pts = []
        c = c0
        while True:
            used.add(c)
            pts.extend(wire_points(cols[c]))
            tp = perm[c] ^ 1
            pts.append((Q(perm[c] + tp, 2), Q(L + 1)))
            c2 = inv[tp]
            used.add(c2)
            pts.extend(wire_points(cols[c2])[::-1])
            bp = c2 ^ 1
            pts.append((Q(c2 + bp, 2), Q(-1)))
            c = bp
            if c == c0:
                break
        out = []
        for p in pts:
            if not out or out[-1] != p:
                out.append(p)
        if out[0] == out[-1]:
            out.pop()
        loops.append(out)
    return loops


def plat_closure(word, framings=None):
    """4-plat closure of a word in B4 (letters +-1,+-2,+-3).

    A positive letter puts the strand heading up-right over the other one.
    """
    Q = Fraction
    loops = _plat_loops(word)
    overs = {Q(4 * k + 2, 4): let > 0 for k, let in enumerate(word)}

    def over_of(pa, pb):
        ne_over = overs[pa["point"][1]]
        a_ne = pa["direction"][0] > 0
        if ne_over:
            return pa if a_ne else pb
        return pb if a_ne else pa

    if framings is None:
        framings = [0] * len(loops)
    return pd_from_strands(loops, over_of, framings=framings)


def stevedore(framing=0):
    """The stevedore knot 6_1: six crossings, writhe -2.

    Four negative crossings (the twist region) and two positive ones (the
    clasp), determinant 9; zero-framing normalization adds two positive
    kinks for eight crossings and writhe zero.
    """
    return plat_closure([2, 2, 2, 2, -1, 2], framings=[framing])
