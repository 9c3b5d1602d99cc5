#!/usr/bin/env python3
"""Generate the bundled building environments under data/.

Both schools are reconstructed layouts: corridor strips, closed room boxes,
door openings for exits. Line-of-sight tables are computed here from the
wall segments and written explicitly so that loaders do not depend on
floating-point geometry.

Usage: tools/make_environments.py [output_dir]
"""
import json
import math
import sys
from pathlib import Path

HALL_CAP = 20
ROOM_CAP = 20
EXIT_CAP = 999
WALK_SPEED = 1.5
ROOM_HALF = 2.5
ROOM_OFFSET = 4.0


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def on_segment(p, q, r):
    return (min(p[0], r[0]) - 1e-12 <= q[0] <= max(p[0], r[0]) + 1e-12 and
            min(p[1], r[1]) - 1e-12 <= q[1] <= max(p[1], r[1]) + 1e-12)


def segments_touch(p1, p2, p3, p4):
    d1 = cross(p3, p4, p1)
    d2 = cross(p3, p4, p2)
    d3 = cross(p1, p2, p3)
    d4 = cross(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and \
       ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and on_segment(p3, p1, p4):
        return True
    if d2 == 0 and on_segment(p3, p2, p4):
        return True
    if d3 == 0 and on_segment(p1, p3, p2):
        return True
    if d4 == 0 and on_segment(p1, p4, p2):
        return True
    return False


def room_box(c):
    x, y = c
    h = ROOM_HALF
    pts = [(x - h, y - h), (x + h, y - h), (x + h, y + h), (x - h, y + h)]
    return [(pts[i], pts[(i + 1) % 4]) for i in range(4)]


class Builder:
    def __init__(self, name, description):
        self.name = name
        self.description = description
        self.nodes = {}
        self.edges = []
        self.walls = []

    def node(self, nid, kind, pos):
        hardness = 5 if kind == "room" else 0
        cap = {"room": ROOM_CAP, "hall": HALL_CAP, "exit": EXIT_CAP}[kind]
        self.nodes[nid] = dict(id=nid, kind=kind, hardness=hardness,
                               max_occupancy=cap, position=[pos[0], pos[1]])

    def room(self, nid, pos):
        self.node(nid, "room", pos)
        self.walls.extend(room_box(pos))

    def edge(self, a, b, door="none", sojourn=None):
        pa = self.nodes[a]["position"]
        pb = self.nodes[b]["position"]
        dist = math.hypot(pa[0] - pb[0], pa[1] - pb[1])
        s = sojourn if sojourn is not None else max(1, math.ceil(dist / WALK_SPEED - 1e-9))
        cap = {"none": HALL_CAP, "single": 2, "double": 4}[door]
        self.edges.append(dict(a=a, b=b, sojourn_s=s, capacity=cap, door_kind=door))

    def wall(self, x1, y1, x2, y2):
        self.walls.append(((x1, y1), (x2, y2)))

    def los(self):
        ids = sorted(self.nodes)
        pos = {i: tuple(self.nodes[i]["position"]) for i in ids}
        table = {}
        for i in ids:
            seen = []
            for j in ids:
                if i == j:
                    seen.append(j)
                    continue
                blocked = any(segments_touch(pos[i], pos[j], w[0], w[1]) for w in self.walls)
                if not blocked:
                    seen.append(j)
            table[str(i)] = seen
        return table

    def dump(self, path):
        doc = dict(
            name=self.name,
            description=self.description,
            nodes=[self.nodes[i] for i in sorted(self.nodes)],
            edges=self.edges,
            walls=[[w[0][0], w[0][1], w[1][0], w[1][1]] for w in self.walls],
            los=self.los(),
        )
        path.write_text(json.dumps(doc, indent=1) + "\n")


def acyclic_school():
    b = Builder("acyclic_school",
                "Reconstructed U-shaped single-level school: west corridor 1-6, "
                "north wing 7-12, south wing 13-18 (branching at 3); rooms 19-51; exits 52-55.")
    # west corridor, x = 0, south to north
    for i, y in enumerate([0, 6, 12, 18, 24, 30]):
        b.node(i + 1, "hall", (0, y))
    wing_x = [9, 15, 21, 27, 33, 39]
    for i, x in enumerate(wing_x):
        b.node(7 + i, "hall", (x, 30))
        b.node(13 + i, "hall", (x, 12))
    # rooms
    west = {1: 19, 2: 20, 3: 21, 4: 22, 5: 23, 6: 28}
    east = {1: 24, 2: 25, 4: 26, 5: 27}
    for h, r in west.items():
        b.room(r, (-ROOM_OFFSET, b.nodes[h]["position"][1]))
    for h, r in east.items():
        b.room(r, (ROOM_OFFSET, b.nodes[h]["position"][1]))
    b.room(29, (0, 30 + ROOM_OFFSET))
    for k, h in enumerate(range(7, 12)):
        b.room(30 + k, (wing_x[k], 30 + ROOM_OFFSET))
    for k, h in enumerate(range(7, 13)):
        b.room(35 + k, (wing_x[k], 30 - ROOM_OFFSET))
    for k, h in enumerate(range(13, 19)):
        b.room(41 + k, (wing_x[k], 12 - ROOM_OFFSET))
    for k, h in enumerate(range(13, 18)):
        b.room(47 + k, (wing_x[k], 12 + ROOM_OFFSET))
    b.node(52, "exit", (0, -3))
    b.node(53, "exit", (42, 30))
    b.node(54, "exit", (39, 34))
    b.node(55, "exit", (42, 12))

    for i in range(1, 6):
        b.edge(i, i + 1)
    b.edge(6, 7)
    for i in range(7, 12):
        b.edge(i, i + 1)
    b.edge(3, 13)
    for i in range(13, 18):
        b.edge(i, i + 1)
    room_hall = {**{r: h for h, r in west.items()}, **{r: h for h, r in east.items()}, 29: 6}
    for k in range(5):
        room_hall[30 + k] = 7 + k
    for k in range(6):
        room_hall[35 + k] = 7 + k
        room_hall[41 + k] = 13 + k
    for k in range(5):
        room_hall[47 + k] = 13 + k
    for r in sorted(room_hall):
        b.edge(room_hall[r], r, door="single")
    b.edge(1, 52, door="double")
    b.edge(12, 53, door="double")
    b.edge(12, 54, door="double")
    b.edge(18, 55, door="double")

    # corridor walls (union outline) with exit door openings
    b.wall(-1.5, -1.5, -1.5, 31.5)
    b.wall(-1.5, -1.5, -0.5, -1.5)
    b.wall(0.5, -1.5, 1.5, -1.5)
    b.wall(1.5, -1.5, 1.5, 10.5)
    b.wall(1.5, 13.5, 1.5, 28.5)
    b.wall(-1.5, 31.5, 38.5, 31.5)
    b.wall(39.5, 31.5, 40.5, 31.5)
    b.wall(1.5, 28.5, 40.5, 28.5)
    b.wall(40.5, 28.5, 40.5, 29.5)
    b.wall(40.5, 30.5, 40.5, 31.5)
    b.wall(1.5, 10.5, 40.5, 10.5)
    b.wall(1.5, 13.5, 40.5, 13.5)
    b.wall(40.5, 10.5, 40.5, 11.5)
    b.wall(40.5, 12.5, 40.5, 13.5)
    return b


def cyclic_school():
    b = Builder("cyclic_school",
                "Reconstructed two-corridor school: north corridor 1-14, south corridor 15-29, "
                "connectors 5-19 and 9-23, central exit lobbies 69 (2/16) and 70 (13/27); rooms 30-68.")
    north_y, south_y = 14, 0
    for k in range(14):
        b.node(1 + k, "hall", (6 * k, north_y))
    for k in range(15):
        b.node(15 + k, "hall", (6 * k, south_y))
    for k in range(14):
        b.room(30 + k, (6 * k, north_y + ROOM_OFFSET))
    for k in range(15):
        b.room(44 + k, (6 * k, south_y - ROOM_OFFSET))
    between = [(0, "n"), (2, "n"), (6, "n"), (10, "n"), (13, "n"),
               (3, "s"), (5, "s"), (7, "s"), (9, "s"), (11, "s")]
    between_ids = {}
    for i, (k, side) in enumerate(sorted(between)):
        rid = 59 + i
        y = north_y - ROOM_OFFSET if side == "n" else south_y + ROOM_OFFSET
        b.room(rid, (6 * k, y))
        between_ids[rid] = (1 + k) if side == "n" else (15 + k)
    b.node(69, "exit", (6, 7))
    b.node(70, "exit", (72, 7))

    for k in range(13):
        b.edge(1 + k, 2 + k)
    for k in range(14):
        b.edge(15 + k, 16 + k)
    b.edge(5, 19)
    b.edge(9, 23)
    for k in range(14):
        b.edge(1 + k, 30 + k, door="single")
    for k in range(15):
        b.edge(15 + k, 44 + k, door="single")
    for rid in sorted(between_ids):
        b.edge(between_ids[rid], rid, door="single")
    b.edge(2, 69, door="double")
    b.edge(16, 69, door="double")
    b.edge(13, 70, door="double")
    b.edge(27, 70, door="double")

    gaps = [(4.5, 7.5), (22.5, 25.5), (46.5, 49.5), (70.5, 73.5)]

    def gapped(y, x0, x1):
        cur = x0
        for g0, g1 in gaps:
            if g0 > x1:
                break
            b.wall(cur, y, g0, y)
            cur = g1
        b.wall(cur, y, x1, y)

    b.wall(-1.5, north_y + 1.5, 79.5, north_y + 1.5)
    gapped(north_y - 1.5, -1.5, 79.5)
    b.wall(-1.5, north_y - 1.5, -1.5, north_y + 1.5)
    b.wall(79.5, north_y - 1.5, 79.5, north_y + 1.5)
    b.wall(-1.5, south_y - 1.5, 85.5, south_y - 1.5)
    gapped(south_y + 1.5, -1.5, 85.5)
    b.wall(-1.5, south_y - 1.5, -1.5, south_y + 1.5)
    b.wall(85.5, south_y - 1.5, 85.5, south_y + 1.5)
    for g0, g1 in gaps:
        b.wall(g0, south_y + 1.5, g0, north_y - 1.5)
        b.wall(g1, south_y + 1.5, g1, north_y - 1.5)
    return b


def toy_graph():
    # Six-node walk example. Sojourns were fitted so that the exact
    # propagation reproduces the reference shooter-location table.
    b = Builder("toy_graph", "Six-node shooter-propagation example with explicit line of sight.")
    kinds = {1: "exit", 2: "hall", 3: "room", 4: "hall", 5: "room", 6: "room"}
    pos = {1: (0, 6), 2: (6, 6), 3: (12, 6), 4: (6, 0), 5: (0, 0), 6: (12, 0)}
    for i in range(1, 7):
        b.node(i, kinds[i], pos[i])
    for a, c, s in [(1, 2, 4), (2, 3, 3), (2, 4, 4), (4, 5, 3), (4, 6, 4)]:
        b.edge(a, c, sojourn=s)
    b.walls = []
    doc_los = {str(i): [i] for i in range(1, 7)}
    for i in (2, 4, 6):
        doc_los[str(i)] = [2, 4, 6]
    b.los = lambda: doc_los
    for n in b.nodes.values():
        del n["position"]
    return b


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
    out.mkdir(parents=True, exist_ok=True)
    acyclic_school().dump(out / "acyclic_school.json")
    cyclic_school().dump(out / "cyclic_school.json")
    toy_graph().dump(out / "toy_graph.json")


if __name__ == "__main__":
    main()
