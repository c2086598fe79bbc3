#!/usr/bin/env python3
"""Generate the default scenario's building extract (data/nyc_buildings.geojson).

The extract is a simplified reconstruction of tall towers east of a sensor in
Central Park, not survey data. Footprints are laid out in the local ENU frame
so that the noiseless default trajectory passes behind five of them, then
written as WGS-84 longitude/latitude polygons. A few extra features exercise
the height and boundary filters.

Run from the repository root:  python3 tools/fixtures/make_nyc_fixture.py
"""

import json
import math
import pathlib

REF = (-73.9675, 40.781, 200.0)  # lon, lat, alt
A = 6378137.0
F = 1.0 / 298.257223563
E2 = F * (2.0 - F)

SPEED = 13.0
HEADING_DEG = 209.0  # clockwise from north, along the avenue grid
START = (640.0, 20.0)
TURN_K = 46
TURN_RATE = math.pi / 180.0
NUM_STEPS = 80


def ecef(lon, lat, h):
    lon, lat = math.radians(lon), math.radians(lat)
    n = A / math.sqrt(1.0 - E2 * math.sin(lat) ** 2)
    return ((n + h) * math.cos(lat) * math.cos(lon),
            (n + h) * math.cos(lat) * math.sin(lon),
            (n * (1.0 - E2) + h) * math.sin(lat))


def enu_to_geodetic(e, n, u=0.0):
    lon0, lat0, h0 = REF
    x0, y0, z0 = ecef(lon0, lat0, h0)
    la, lo = math.radians(lat0), math.radians(lon0)
    x = x0 - math.sin(lo) * e - math.sin(la) * math.cos(lo) * n + math.cos(la) * math.cos(lo) * u
    y = y0 + math.cos(lo) * e - math.sin(la) * math.sin(lo) * n + math.cos(la) * math.sin(lo) * u
    z = z0 + math.cos(la) * n + math.sin(la) * u
    lon = math.atan2(y, x)
    p = math.hypot(x, y)
    lat = math.atan2(z, p * (1.0 - E2))
    for _ in range(8):
        nn = A / math.sqrt(1.0 - E2 * math.sin(lat) ** 2)
        h = p / math.cos(lat) - nn
        lat = math.atan2(z, p * (1.0 - E2 * nn / (nn + h)))
    return math.degrees(lon), math.degrees(lat)


def trajectory():
    h = math.radians(HEADING_DEG)
    x = [START[0], SPEED * math.sin(h), START[1], SPEED * math.cos(h), 0.0]
    out = [tuple(x)]
    for k in range(2, NUM_STEPS + 1):
        pe, ve, pn, vn, w = x
        if abs(w) < 1e-6:
            x = [pe + ve, ve, pn + vn, vn, w]
        else:
            s, c = math.sin(w), math.cos(w)
            so, co = s / w, 2.0 * math.sin(0.5 * w) ** 2 / w
            x = [pe + so * ve - co * vn, c * ve - s * vn, pn + co * ve + so * vn, s * ve + c * vn, w]
        if k == TURN_K:
            x[4] = TURN_RATE
        out.append(tuple(x))
    return out


def azimuth(p):
    return math.atan2(p[1], p[0])  # math angle, counter-clockwise from east


def polar(angle, radius):
    return (radius * math.cos(angle), radius * math.sin(angle))


def shadow_tower(track, first, last, near, far):
    """Trapezoid whose silhouette rays pass between steps first-1/first and last/last+1.

    `near` and `far` are fractions of the target's range at the middle of the interval.
    """
    def mid(k):
        a, b = track[k - 2], track[k - 1]
        return ((a[0] + b[0]) / 2.0, (a[2] + b[2]) / 2.0)
    a0 = azimuth(mid(first))
    a1 = azimuth(mid(last + 1))
    centre = track[(first + last) // 2 - 1]
    reach = math.hypot(centre[0], centre[2])
    near, far = near * reach, far * reach
    lo, hi = min(a0, a1), max(a0, a1)
    inset = 0.15 * (hi - lo)
    far_lo, far_hi = polar(lo, far), polar(hi, far)
    notch = polar(0.5 * (lo + hi), far - 0.01 * reach)  # concave notch; removed by the hull
    return [polar(lo + inset, near), far_lo, notch, far_hi, polar(hi - inset, near)]


def rect(ce, cn, w, d, rot_deg=29.0):
    r = math.radians(rot_deg)
    ux, uy = math.cos(r), -math.sin(r)
    vx, vy = math.sin(r), math.cos(r)
    pts = []
    for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        pts.append((ce + sx * w / 2 * ux + sy * d / 2 * vx, cn + sx * w / 2 * uy + sy * d / 2 * vy))
    return pts


def feature(name, ring_enu, ground, roof):
    ring = [list(enu_to_geodetic(e, n)) for e, n in ring_enu]
    ring = [[round(lon, 9), round(lat, 9)] for lon, lat in ring]
    ring.append(ring[0])
    return {
        "type": "Feature",
        "properties": {"name": name, "ground_elev": ground, "roof_height": roof},
        "geometry": {"type": "Polygon", "coordinates": [ring]},
    }


def main():
    track = trajectory()
    towers = [
        ("tower-a", 15, 18, 0.58, 0.73, 24.0, 262.0),
        ("tower-b", 24, 27, 0.64, 0.78, 22.0, 231.0),
        ("tower-c", 37, 40, 0.57, 0.73, 18.0, 305.0),
        ("tower-d", 60, 63, 0.67, 0.82, 12.0, 188.0),
        ("tower-e", 69, 72, 0.68, 0.84, 10.0, 246.0),
    ]
    features = []
    for name, first, last, near, far, ground, roof in towers:
        features.append(feature(name, shadow_tower(track, first, last, near, far), ground, roof))

    # Mid-rise block that would shadow steps 51-54 if it passed the height filter.
    features.append(feature("midrise-low", shadow_tower(track, 51, 54, 0.6, 0.7), 15.0, 100.0))
    # Tall tower beyond the avenue; blocks particles but never the truth.
    k = 33
    pe, ve, pn, vn, _ = track[k - 1]
    v = math.hypot(ve, vn)
    off = 40.0
    ce, cn = pe - off * vn / v, pn + off * ve / v
    features.append(feature("tower-street", rect(ce, cn, 30.0, 60.0), 20.0, 190.0))
    # West of the park: shadows fall away from the target.
    features.append(feature("tower-west", rect(-600.0, -250.0, 40.0, 70.0), 25.0, 240.0))
    # Outside the surveillance boundary.
    features.append(feature("tower-far", rect(2600.0, -400.0, 50.0, 50.0), 10.0, 280.0))

    out = {"type": "FeatureCollection", "features": features}
    root = pathlib.Path(__file__).resolve().parents[2]
    path = root / "data" / "nyc_buildings.geojson"
    path.write_text(json.dumps(out, indent=1) + "\n")
    x = track[0]
    print(f"wrote {path}")
    print("initial_state:", {"p_east": x[0], "v_east": x[1], "p_north": x[2], "v_north": x[3]})
    for k in (1, 15, 24, 37, 46, 60, 69, 80):
        p = track[k - 1]
        b = math.degrees(math.atan2(p[0], p[2]))
        print(f"k={k:2d} pos=({p[0]:8.1f},{p[2]:8.1f}) bearing={b:6.1f} range={math.hypot(p[0], p[2]):7.1f}")


if __name__ == "__main__":
    main()
