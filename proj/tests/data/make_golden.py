"""Writes golden trace files and their expected feature series.

Independent numpy implementation used to freeze the fixtures in this
directory. Run from the repository root: python3 tests/data/make_golden.py
"""
import json
import math
import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
ETA = 3
XI_FRACTION = 0.1


def spiral_events(finger, x0, y0, t0, n, closed=False):
    events = []
    t = t0
    for j in range(n):
        u = j / (n - 1)
        if closed:
            ang = 2 * math.pi * u * 0.98
            x = x0 + 120 * math.cos(ang) + 15 * math.sin(3 * ang)
            y = y0 + 80 * math.sin(ang)
        else:
            r = 40 + 90 * u
            ang = 3.5 * u
            x = x0 + r * math.cos(ang) + 7 * u * u
            y = y0 + r * math.sin(ang) - 20 * u
        p = round(0.35 + 0.3 * math.sin(math.pi * u) + 0.01 * (j % 3), 6)
        events.append({"finger": finger, "x": round(x, 4), "y": round(y, 4), "t": t, "p": p, "s": 0.25})
        t += 15 + (j * 7) % 4
    return events


def adjust_single(xy):
    centred = xy - xy.mean(axis=0)
    start = centred[:ETA].mean(axis=0)
    end = centred[-ETA:].mean(axis=0)
    radius = np.max(np.hypot(centred[:, 0], centred[:, 1]))
    xi = XI_FRACTION * 2 * radius
    arrow = end - start
    if math.hypot(*arrow) <= xi:
        arrow = (start + end) / 2
    a = math.atan2(arrow[1], arrow[0])
    c, s = math.cos(a), math.sin(a)
    x = centred[:, 0] * c + centred[:, 1] * s
    y = -centred[:, 0] * s + centred[:, 1] * c
    return np.stack([x, y], axis=1)


def adjust_multi(strokes):
    origin = strokes[0][:ETA].mean(axis=0)
    second = strokes[1][:ETA].mean(axis=0) - origin
    g = math.atan2(second[1], second[0])
    c, s = math.cos(g), math.sin(g)
    out = []
    for xy in strokes:
        d = xy - origin
        out.append(np.stack([d[:, 0] * c + d[:, 1] * s, -d[:, 0] * s + d[:, 1] * c], axis=1))
    return out


def normalize(xy):
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    return (xy - lo) / (hi - lo)


def features(xy_adj, t, p):
    n = normalize(xy_adj)
    x, y = n[:, 0], n[:, 1]
    t = np.asarray(t, dtype=float)
    kappa = []
    for j in range(1, len(x) - 1):
        dx = (x[j + 1] - x[j - 1]) / 2
        dy = (y[j + 1] - y[j - 1]) / 2
        px = x[j + 1] - 2 * x[j] + x[j - 1]
        py = y[j + 1] - 2 * y[j] + y[j - 1]
        kappa.append((4 * py * dx - 4 * px * dy) / (dx * dx + dy * dy) ** 1.5)
    dt = np.diff(t)
    vx = np.diff(x) / dt
    vy = np.diff(y) / dt
    ax = np.diff(vx) / dt[1:]
    ay = np.diff(vy) / dt[1:]
    direction = np.arctan2(np.diff(y), np.diff(x))
    return {
        "x_coord": x.tolist(),
        "y_coord": y.tolist(),
        "curvature": kappa,
        "x_velocity": vx.tolist(),
        "y_velocity": vy.tolist(),
        "x_acceleration": ax.tolist(),
        "y_acceleration": ay.tolist(),
        "direction": direction.tolist(),
        "pressure": list(p),
    }


def stroke_arrays(events, finger):
    ev = [e for e in events if e["finger"] == finger]
    xy = np.array([[e["x"], e["y"]] for e in ev])
    return xy, [e["t"] for e in ev], [e["p"] for e in ev]


def write(name, sample, expected):
    with open(os.path.join(HERE, name + ".json"), "w") as f:
        json.dump(sample, f, indent=1)
        f.write("\n")
    with open(os.path.join(HERE, name + ".expected.json"), "w") as f:
        json.dump(expected, f, indent=1)
        f.write("\n")


def main():
    # Open spiral: start/end arrow orientation.
    ev = spiral_events(0, 400.0, 600.0, 1000, 30)
    xy, t, p = stroke_arrays(ev, 0)
    write("golden_open", {"sample_id": "golden-open", "device": "fixture", "events": ev},
          {"curves": [features(adjust_single(xy), t, p)], "hand_geometry": None})

    # Nearly closed loop: anchor-point orientation.
    ev = spiral_events(3, 300.0, 500.0, 0, 40, closed=True)
    xy, t, p = stroke_arrays(ev, 3)
    write("golden_closed", {"sample_id": "golden-closed", "device": "fixture", "events": ev},
          {"curves": [features(adjust_single(xy), t, p)], "hand_geometry": None})

    # Two fingers; finger 4 touches first so it becomes curve 1.
    a = spiral_events(4, 250.0, 700.0, 0, 26)
    b = spiral_events(1, 360.0, 640.0, 20, 24)
    ev = sorted(a + b, key=lambda e: (e["t"], e["finger"]))
    xy1, t1, p1 = stroke_arrays(ev, 4)
    xy2, t2, p2 = stroke_arrays(ev, 1)
    adj = adjust_multi([xy1, xy2])
    s1 = adj[0][:ETA].mean(axis=0)
    s2 = adj[1][:ETA].mean(axis=0)
    write("golden_two_finger", {"sample_id": "golden-two", "device": "fixture", "events": ev},
          {"curves": [features(adj[0], t1, p1), features(adj[1], t2, p2)],
           "hand_geometry": [float(np.hypot(*(s1 - s2)))]})


if __name__ == "__main__":
    main()
