"""One-off: build the half-integral gadget instance files from the drawing.

Vertex layout (x, y):
  junctions: bl(8,11) tl(8,19) bm(16,11) tm(16,19) br(24,11) tr(24,19) bR(32,11) tR(32,19)
  terminals on the middle row y=15 at x = 6,10,14,18,22,26,30,34
Two long bypass arcs bow around the bottom/top (control points at y=7 / y=23).
"""
import math, sys
sys.path.insert(0, "/root/pkg/src")
from planarmcf.embedding import EmbeddedDigraph, validate_embedding
from planarmcf.instances import Demand, Instance, check_eulerian, normalize, scale_instance
from planarmcf.io import write_instance, parse_instance

P = {  # name -> coordinate
    "s13": (6, 15), "s24": (10, 15), "t15": (14, 15), "t26": (18, 15),
    "s67": (22, 15), "s58": (26, 15), "t37": (30, 15), "t48": (34, 15),
    "bl": (8, 11), "tl": (8, 19), "bm": (16, 11), "tm": (16, 19),
    "br": (24, 11), "tr": (24, 19), "bR": (32, 11), "tR": (32, 19),
}
names = sorted(P)  # deterministic id assignment
vid = {n: i for i, n in enumerate(sorted(P, key=lambda n: (P[n][0], P[n][1])))}

# arcs: (tail, head, tail_dir_point, head_dir_point); dir points define attachment angles
ARCS = [
    ("bl", "bR", (12, 7), (28, 7)),    # long bottom bypass
    ("tl", "tR", (12, 23), (28, 23)),  # long top bypass
    ("bR", "t48", None, None), ("bR", "t37", None, None),
    ("tR", "t48", None, None), ("tR", "t37", None, None),
    ("tr", "tR", None, None), ("br", "bR", None, None),
    ("s58", "br", None, None), ("s67", "br", None, None),
    ("s58", "tr", None, None), ("s67", "tr", None, None),
    ("tl", "tm", None, None), ("br", "bm", None, None), ("tr", "tm", None, None),
    ("tm", "t26", None, None), ("tm", "t15", None, None),
    ("bm", "t15", None, None), ("bm", "t26", None, None),
    ("bl", "bm", None, None),
    ("s24", "bl", None, None), ("s13", "bl", None, None),
    ("s24", "tl", None, None), ("s13", "tl", None, None),
]
arcs = {}
angles = {v: [] for v in P}
for aid, (t, h, td, hd) in enumerate(ARCS):
    arcs[aid] = (vid[t], vid[h])
    tp = td if td is not None else P[h]
    hp = hd if hd is not None else P[t]
    angles[t].append((math.atan2(tp[1]-P[t][1], tp[0]-P[t][0]) % (2*math.pi), aid))
    angles[h].append((math.atan2(hp[1]-P[h][1], hp[0]-P[h][0]) % (2*math.pi), aid))
rot = {vid[n]: [a for _ang, a in sorted(angles[n])] for n in P}

# demands: request 1 from source terminal i to sink terminal i'
DEM = [("s13", "t15"), ("s24", "t26"), ("s13", "t37"), ("s24", "t48"),
       ("s58", "t15"), ("s67", "t26"), ("s67", "t37"), ("s58", "t48")]
demands = [Demand(id=i, tail=vid[t], head=vid[s], request=1) for i, (s, t) in enumerate(DEM)]

g = EmbeddedDigraph(vid.values(), arcs, rot)
inst = Instance(graph=g, capacities={a: 1 for a in arcs}, demands=demands,
                coords={vid[n]: (float(P[n][0]), float(P[n][1])) for n in P})
v = validate_embedding(g)
print("validate:", v)
print("eulerian:", check_eulerian(inst))
norm = normalize(inst)
print("normalize ok; faces:", len(g.faces()), "expected:", 2 - len(g.vertices) + len(g.arc_tail))
data = write_instance(inst)
parse_instance(data)  # round trip
with open("/root/pkg/src/planarmcf/data/half_integral.json", "wb") as f:
    f.write(data)
doubled = scale_instance(inst, 2)
with open("/root/pkg/src/planarmcf/data/half_integral_doubled.json", "wb") as f:
    f.write(write_instance(doubled))
print("files written")
