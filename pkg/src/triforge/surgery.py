"""Surgery pipeline: framed planar diagram -> closed triangulated 3-manifold.

Stages mirror the blackboard-framing construction: triangulate the link
exterior inside the thickened diagram sphere, cap the two sphere copies
with cone balls, then glue one Dehn filling solid torus per component so
that the blackboard longitude bounds a meridian disk.  Split diagrams are
handled by connected-summing the per-piece results, with one S^1 x S^2
summand per split unknotted zero-framed component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import tubular
from .complexes import SimplicialComplex3, boundary_delta4, connected_sum, s1_x_s2
from .diagrams import DiagramError, FramedLinkDiagram


@dataclass
class SurgeryAssembly:
    """Staged construction for one nonsplit all-crossing-involved diagram."""
    diagram: FramedLinkDiagram
    exterior: tubular.ExteriorResult
    exterior_tets: list
    cap_tets: list = field(default_factory=list)
    fill_tets: list = field(default_factory=list)

    @property
    def stage_counts(self):
        return {
            "exterior": len(self.exterior_tets),
            "caps": len(self.cap_tets),
            "fill": len(self.fill_tets),
            "total": len(self.exterior_tets) + len(self.cap_tets) + len(self.fill_tets),
        }

    def complex(self):
        keys = self.exterior_tets + self.cap_tets + self.fill_tets
        return intern_complex(keys)


def intern_complex(key_tets):
    verts = sorted({v for t in key_tets for v in t})
    index = {k: i for i, k in enumerate(verts)}
    tets = [tuple(sorted(index[v] for v in t)) for t in key_tets]
    return SimplicialComplex3(tets, vertex_count=len(verts))


def _diagram_map_data(diagram):
    """MapData + component walks + heights from a PD diagram."""
    d = diagram
    arc_of = {}
    partner = {}
    for ci, x in enumerate(d.crossings):
        for s in range(4):
            dart = 4 * ci + s
            arc_of[dart] = x.arcs[s]
            partner[dart] = d.partner(dart)
    corner_face = d.corner_face_map()
    md = tubular.MapData(nv=len(d.crossings), arc_of=arc_of,
                         partner=partner, corner_face=corner_face)

    walks = {}
    heights = {}
    for comp, arcs in d.component_arcs.items():
        walk = []
        a0 = arcs[0]
        a = a0
        idx = 0
        while True:
            ci, slot = d.arc_head[a]
            in_dart = 4 * ci + slot
            walk.append((ci, in_dart))
            x = d.crossings[ci]
            over = slot == x.over_in()
            heights[(comp, idx)] = 0 if over else 1
            idx += 1
            a = x.arcs[(slot + 2) % 4]
            if a == a0:
                break
        walks[comp] = walk
    return md, walks, heights


def build_exterior(diagram):
    """Triangulated exterior of the link in the thickened diagram sphere."""
    if len(diagram.nonsplit_pieces()) != 1:
        raise DiagramError("build_exterior needs a nonsplit diagram")
    if diagram.crossingless:
        raise DiagramError("build_exterior: crossingless component present")
    if diagram.crossing_number < 1:
        raise DiagramError("build_exterior needs at least one crossing")
    if not diagram.is_normalized():
        raise DiagramError("framings must equal writhes (run normalize_framing)")
    md, walks, heights = _diagram_map_data(diagram)
    res = tubular.build_exterior(md, walks, heights)
    return SurgeryAssembly(diagram=diagram, exterior=res,
                           exterior_tets=list(res.tets))


def cap_spheres(assembly):
    """Attach the two cone balls over the diagram-sphere copies."""
    res = assembly.exterior
    caps = tubular.cone_cap(res.top_tris, ("CAP", "T"))
    caps += tubular.cone_cap(res.bottom_tris, ("CAP", "B"))
    assembly.cap_tets = caps
    return assembly


def fill_tori(assembly):
    """Glue the Dehn filling solid tori along the blackboard longitudes."""
    assembly.fill_tets = tubular.fill_tori(assembly.exterior)
    return assembly


def triangulate_nonsplit(diagram):
    """Closed manifold for one nonsplit, all-crossing-involved diagram."""
    asm = build_exterior(diagram)
    cap_spheres(asm)
    fill_tori(asm)
    return asm


def triangulate(diagram, return_assemblies=False):
    """Full pipeline for any valid framed diagram.

    normalize framings -> split into nonsplit pieces -> one construction
    per piece -> one S^1 x S^2 per split unknotted zero-framed component ->
    connected sum of everything; the empty link gives the minimal S^3.
    """
    norm = diagram.normalize_framing()
    pieces = norm.nonsplit_pieces()
    summands = []
    assemblies = []
    for piece in pieces:
        sub = norm.restricted_to(piece)
        asm = triangulate_nonsplit(sub)
        assemblies.append(asm)
        summands.append(asm.complex())
    for _ in range(norm.split_zero_count()):
        summands.append(s1_x_s2())
    if not summands:
        out = boundary_delta4()
    else:
        out = summands[0]
        for s in summands[1:]:
            out = connected_sum(out, s)
    out = out.relabelled()
    if return_assemblies:
        return out, assemblies
    return out
