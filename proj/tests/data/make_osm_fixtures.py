"""Writes the small OSM XML fixtures used by the importer tests.

Coordinates are given in meters around (lon 11.0, lat 48.0) and converted
with the same equirectangular projection the importer uses.
"""
import math
from pathlib import Path

R = 6371008.8
LON0, LAT0 = 11.0, 48.0
DEG = math.pi / 180.0


def geo(x, y):
    lon = LON0 + x / (R * DEG * math.cos(LAT0 * DEG))
    lat = LAT0 + y / (R * DEG)
    return lon, lat


def write(name, nodes, ways, tagged_nodes=()):
    out = ['<?xml version="1.0" encoding="UTF-8"?>', '<osm version="0.6" generator="fixture">']
    for nid, (x, y) in nodes.items():
        lon, lat = geo(x, y)
        tags = dict(tagged_nodes).get(nid)
        if tags:
            out.append(f'  <node id="{nid}" lat="{lat:.10f}" lon="{lon:.10f}">')
            out += [f'    <tag k="{k}" v="{v}"/>' for k, v in tags.items()]
            out.append('  </node>')
        else:
            out.append(f'  <node id="{nid}" lat="{lat:.10f}" lon="{lon:.10f}"/>')
    for wid, refs, tags in ways:
        out.append(f'  <way id="{wid}">')
        out += [f'    <nd ref="{r}"/>' for r in refs]
        out += [f'    <tag k="{k}" v="{v}"/>' for k, v in tags.items()]
        out.append('  </way>')
    out.append('</osm>')
    Path(__file__).with_name(name).write_text("\n".join(out) + "\n")


def building(base_id, cx, cy, half=4.0):
    return {base_id + i: (cx + dx, cy + dy) for i, (dx, dy) in
            enumerate([(-half, -half), (half, -half), (half, half), (-half, half)])}


# One 50 m footway, a house whose centroid sits at (10, 5), an untagged
# node, and a road without sidewalks that must be ignored.
nodes = {1: (-25.0, 0.0), 2: (25.0, 0.0), 3: (-25.0, 30.0), 4: (25.0, 30.0), 5: (-20.0, 6.0)}
nodes.update(building(100, 10.0, 5.0, half=2.0))
write("simple.osm", nodes, [
    (10, [1, 2], {"highway": "footway"}),
    (11, [3, 4], {"highway": "residential", "sidewalk": "no"}),
    (12, [100, 101, 102, 103, 100], {"building": "house"}),
])

# The only building lies outside the 500 m radius.
nodes = {1: (-25.0, 0.0), 2: (25.0, 0.0)}
nodes.update(building(100, 2000.0, 0.0))
write("no_depot.osm", nodes, [
    (10, [1, 2], {"highway": "footway"}),
    (12, [100, 101, 102, 103, 100], {"building": "house"}),
])

# Two disconnected footways: 10 nodes and 3 nodes at 10 m spacing.
nodes = {i + 1: (10.0 * i, 0.0) for i in range(10)}
nodes.update({20 + i: (10.0 * i, 100.0) for i in range(3)})
nodes[50] = (45.0, 5.0)
write("components.osm", nodes, [
    (10, list(range(1, 11)), {"highway": "footway"}),
    (11, [20, 21, 22], {"highway": "path"}),
], tagged_nodes=[(50, {"amenity": "cafe"})])

Path(__file__).with_name("malformed.osm").write_text(
    '<?xml version="1.0"?>\n<osm version="0.6">\n  <node id="1" lat="48.0" lon="11.0">\n</osm>\n')
