#!/usr/bin/env python3
"""Generate the bundled scheme configs.

Each geometric config is rebuilt from first principles (dissection
coordinates, similarity fits for child placements) and checked before being
written: placements must be orthogonal, children must cover their parent
exactly once, and scale rows must conserve volume.

Usage: python3 tools/gen_configs.py [output_dir]   (default: configs/)
"""

import json
import math
import os
import sys


# ----------------------------------------------------------------------
# small 2x2 linear algebra
# ----------------------------------------------------------------------

def det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mul2(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def inv2(m):
    d = det2(m)
    return [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]


def matmul2(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def fit_similarity(proto, target):
    """Solve target_i = alpha * R * proto_i + t for the given correspondence.

    Returns (alpha, R, t) or None when the map is not a similarity.
    """
    p0, p1, p2 = proto
    q0, q1, q2 = target
    mp = [[p1[0] - p0[0], p2[0] - p0[0]], [p1[1] - p0[1], p2[1] - p0[1]]]
    mq = [[q1[0] - q0[0], q2[0] - q0[0]], [q1[1] - q0[1], q2[1] - q0[1]]]
    dp, dq = det2(mp), det2(mq)
    if abs(dp) < 1e-14:
        return None
    alpha = math.sqrt(abs(dq / dp))
    a = matmul2(mq, inv2(mp))
    r = [[a[i][j] / alpha for j in range(2)] for i in range(2)]
    # R must be orthogonal.
    for i in range(2):
        for j in range(2):
            dot = r[0][i] * r[0][j] + r[1][i] * r[1][j]
            want = 1.0 if i == j else 0.0
            if abs(dot - want) > 1e-9:
                return None
    # Rebuild R in exactly orthogonal cos/sin form, snapping near-axis values.
    c, s = r[0][0], r[1][0]
    n = math.hypot(c, s)
    c, s = c / n, s / n
    c = 0.0 if abs(c) < 1e-12 else (1.0 if abs(c - 1) < 1e-12 else (-1.0 if abs(c + 1) < 1e-12 else c))
    s = 0.0 if abs(s) < 1e-12 else (1.0 if abs(s - 1) < 1e-12 else (-1.0 if abs(s + 1) < 1e-12 else s))
    if det2(r) > 0:
        r = [[c + 0.0, -s + 0.0], [s + 0.0, c + 0.0]]
    else:
        r = [[c + 0.0, s + 0.0], [s + 0.0, -c + 0.0]]
    t = (q0[0] - alpha * mul2(r, p0)[0], q0[1] - alpha * mul2(r, p0)[1])
    for pp, qq in zip(proto, target):
        im = mul2(r, pp)
        if abs(alpha * im[0] + t[0] - qq[0]) > 1e-9 or abs(alpha * im[1] + t[1] - qq[1]) > 1e-9:
            return None
    return alpha, r, t


def fit_triangle(proto, target):
    """Fit with either base orientation, preferring a proper rotation."""
    fits = []
    for tgt in (target, (target[1], target[0], target[2])):
        f = fit_similarity(proto, tgt)
        if f:
            fits.append(f)
    if not fits:
        raise SystemExit("similarity fit failed")
    for f in fits:
        if det2(f[1]) > 0:
            return f
    return fits[0]


def child(types, label, alpha, rot=None, trans=None):
    c = {"type": label, "alpha": alpha}
    if rot is not None:
        c["rotation"] = [list(rot[0]), list(rot[1])]
    if trans is not None:
        c["translation"] = list(trans)
    types.append(c)
    return c


# ----------------------------------------------------------------------
# coverage check: every sampled parent point must lie in exactly one child
# ----------------------------------------------------------------------

def point_in_poly(pt, poly, eps=1e-9):
    """Convex polygon given counterclockwise or clockwise; sign-consistent."""
    n = len(poly)
    sign = 0
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        cr = (b[0] - a[0]) * (pt[1] - a[1]) - (b[1] - a[1]) * (pt[0] - a[0])
        if abs(cr) <= eps:
            continue
        s = 1 if cr > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def sample_in_poly(poly, rng):
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    while True:
        x = min(xs) + rng.random() * (max(xs) - min(xs))
        y = min(ys) + rng.random() * (max(ys) - min(ys))
        if point_in_poly((x, y), poly, eps=-1e-9):
            return (x, y)


def verify_cover(parent_poly, children, protos, samples=4000):
    """children: list of (alpha, R, t, child_poly).  Interior points of the
    parent must be covered exactly once (boundary hits are skipped)."""
    import random

    rng = random.Random(12345)
    skipped = 0
    for _ in range(samples):
        pt = sample_in_poly(parent_poly, rng)
        hits = 0
        boundary = False
        for alpha, r, t, poly in children:
            # invert: local = R^T (pt - t) / alpha
            vx, vy = pt[0] - t[0], pt[1] - t[1]
            lx = (r[0][0] * vx + r[1][0] * vy) / alpha
            ly = (r[0][1] * vx + r[1][1] * vy) / alpha
            if point_in_poly((lx, ly), poly, eps=1e-7):
                if point_in_poly((lx, ly), poly, eps=-1e-7):
                    hits += 1
                else:
                    boundary = True
        if boundary and hits != 1:
            skipped += 1
            continue
        if hits != 1:
            raise SystemExit(f"coverage failure: point {pt} covered {hits} times")
    if skipped > samples // 10:
        raise SystemExit("too many boundary-ambiguous samples")


def poly_area(poly):
    s = 0.0
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        s += a[0] * b[1] - b[0] * a[1]
    return abs(s) / 2.0


# ----------------------------------------------------------------------
# configs
# ----------------------------------------------------------------------

def cfg_kakutani_third():
    return {
        "dimension": 1,
        "prototiles": [
            {"label": "I", "volume": "1", "polygon": [[0.0], [1.0]]},
        ],
        "rules": [
            {
                "parent": "I",
                "children": [
                    {"type": "I", "alpha": "1/3", "translation": [0.0]},
                    {"type": "I", "alpha": "2/3", "translation": [1.0 / 3.0]},
                ],
            }
        ],
    }


def cfg_kakutani_golden():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    a1 = 1.0 / phi
    a2 = 1.0 / (phi * phi)
    return {
        "dimension": 1,
        "prototiles": [
            {"label": "I", "volume": "1", "polygon": [[0.0], [1.0]]},
        ],
        "rules": [
            {
                "parent": "I",
                "children": [
                    {"type": "I", "alpha": a1, "translation": [0.0]},
                    {"type": "I", "alpha": a2, "translation": [a1]},
                ],
            }
        ],
    }


def cfg_kakutani_half_quarter():
    return {
        "dimension": 1,
        "prototiles": [
            {"label": "I", "volume": "1", "polygon": [[0.0], [1.0]]},
        ],
        "rules": [
            {
                "parent": "I",
                "children": [
                    {"type": "I", "alpha": "1/2", "translation": [0.0]},
                    {"type": "I", "alpha": "1/4", "translation": [0.5]},
                    {"type": "I", "alpha": "1/4", "translation": [0.75]},
                ],
            }
        ],
    }


def cfg_rect_square():
    ident = [[1.0, 0.0], [0.0, 1.0]]
    rot90 = [[0.0, -1.0], [1.0, 0.0]]
    third = 1.0 / 3.0
    cfg = {
        "dimension": 2,
        "prototiles": [
            {
                "label": "R",
                "volume": "2",
                "polygon": [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]],
            },
            {
                "label": "S",
                "volume": "1",
                "polygon": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            },
        ],
        "rules": [
            {
                "parent": "R",
                "children": [
                    {"type": "S", "alpha": "1", "translation": [0.0, 0.0]},
                    {"type": "R", "alpha": "1/2", "translation": [1.0, 0.5]},
                    {"type": "S", "alpha": "1/2", "translation": [1.0, 0.0]},
                    {"type": "S", "alpha": "1/2", "translation": [1.5, 0.0]},
                ],
            },
            {
                "parent": "S",
                "children": [
                    {"type": "R", "alpha": "1/3", "translation": [0.0, 2.0 / 3.0]},
                    {"type": "R", "alpha": "1/3", "rotation": rot90, "translation": [1.0, 0.0]},
                    {"type": "S", "alpha": "1/3", "translation": [2.0 / 3.0, 2.0 / 3.0]},
                    {"type": "S", "alpha": "2/3", "translation": [0.0, 0.0]},
                ],
            },
            {
                "parent": "S",
                "children": [
                    {"type": "R", "alpha": "1/3", "translation": [third, 0.0]},
                    {"type": "R", "alpha": "1/3", "rotation": rot90, "translation": [third, third]},
                    {"type": "S", "alpha": "1/3", "translation": [0.0, 0.0]},
                    {"type": "S", "alpha": "2/3", "translation": [third, third]},
                ],
            },
        ],
        "rule_policy": {"kind": "round_robin"},
    }
    # verify both square rules cover the unit square
    rect = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]
    square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    polys = {"R": rect, "S": square}
    for rule in cfg["rules"]:
        kids = []
        for c in rule["children"]:
            alpha = eval_frac(c["alpha"])
            r = c.get("rotation", ident)
            kids.append((alpha, r, tuple(c["translation"]), polys[c["type"]]))
        verify_cover(polys[rule["parent"]], kids, polys)
    return cfg


def eval_frac(s):
    if isinstance(s, (int, float)):
        return float(s)
    if "/" in s:
        n, d = s.split("/")
        return float(n) / float(d)
    return float(s)


def triangle_children(parent_label, pieces, protos, cfg_children):
    """pieces: list of (child_label, ordered target vertices)."""
    out = []
    for label, target in pieces:
        alpha, r, t = fit_triangle(protos[label], target)
        out.append((label, alpha, r, t))
        cfg_children.append(
            {
                "type": label,
                "alpha": alpha,
                "rotation": [list(r[0]), list(r[1])],
                "translation": list(t),
            }
        )
    return out


def cfg_penrose_robinson():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    ha = math.sqrt(phi * phi - 0.25)     # acute apex height
    ho = math.sqrt(1.0 - phi * phi / 4.0)  # obtuse apex height
    # prototile vertex order: (base-left, base-right, apex)
    acute = ((0.0, 0.0), (1.0, 0.0), (0.5, ha))
    obtuse = ((0.0, 0.0), (phi, 0.0), (phi / 2.0, ho))
    protos = {"A": acute, "O": obtuse}

    X, Y, Z = acute
    s_pt = (Z[0] / (phi * phi), Z[1] / (phi * phi))            # on XZ at 1/phi from X
    t_pt = (Y[0] + (Z[0] - Y[0]) / (phi * phi), (Z[1]) / (phi * phi))  # on YZ at 1/phi from Y

    XO, YO, ZO = obtuse
    v_pt = (1.0, 0.0)

    acute_pieces = [
        ("A", (s_pt, t_pt, Z)),     # apex keeps the old apex
        ("A", (Y, t_pt, X)),        # apex at the base-left corner
        ("O", (X, t_pt, s_pt)),     # obtuse filler
    ]
    obtuse_pieces = [
        ("A", (v_pt, ZO, XO)),
        ("O", (YO, ZO, v_pt)),
    ]

    cfg = {
        "dimension": 2,
        "prototiles": [
            {"label": "A", "volume": poly_area(acute), "polygon": [list(p) for p in acute]},
            {"label": "O", "volume": poly_area(obtuse), "polygon": [list(p) for p in obtuse]},
        ],
        "rules": [],
    }
    for parent, pieces in (("A", acute_pieces), ("O", obtuse_pieces)):
        children = []
        placed = triangle_children(parent, pieces, protos, children)
        cfg["rules"].append({"parent": parent, "children": children})
        kids = [(alpha, r, t, protos[label]) for label, alpha, r, t in placed]
        verify_cover(protos[parent], kids, protos)
        for label, alpha, _, _ in placed:
            if abs(alpha - 1.0 / phi) > 1e-9:
                raise SystemExit(f"penrose alpha {alpha} != 1/phi")
    return cfg


def cfg_pinwheel_half():
    # right triangle, legs 2 and 1; (right-angle vtx, long-leg end, short-leg end)
    tri = ((0.0, 0.0), (2.0, 0.0), (0.0, 1.0))
    protos = {"T": tri}
    A, B, C = tri
    H = (0.4, 0.8)                       # foot of the altitude from A
    m_ab = (1.0, 0.0)
    m_ah = (0.2, 0.4)
    m_bh = (1.2, 0.4)
    pieces = [
        ("T", (H, A, C)),
        ("T", (m_ah, m_ab, A)),
        ("T", (m_bh, B, m_ab)),
        ("T", (m_ab, m_ah, m_bh)),
        ("T", (H, m_bh, m_ah)),
    ]
    children = []
    placed = triangle_children("T", pieces, protos, children)
    kids = [(alpha, r, t, protos[label]) for label, alpha, r, t in placed]
    verify_cover(tri, kids, protos)
    a5 = math.sqrt(1.0 / 5.0)
    for c, (label, alpha, _, _) in zip(children, placed):
        if abs(alpha - a5) > 1e-12:
            raise SystemExit(f"pinwheel alpha {alpha} != 5^-1/2")
        c["alpha"] = {"base": "1/5", "exponent": "1/2"}
    return {
        "dimension": 2,
        "prototiles": [
            {"label": "T", "volume": "1", "polygon": [list(p) for p in tri]},
        ],
        "rules": [{"parent": "T", "children": children}],
    }


def cfg_nonprimitive_grid():
    s3 = math.sqrt(3.0)
    a = {"base": "1/3", "exponent": "1/2"}
    sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    r1 = [[0.0, 0.0], [s3, 0.0], [s3, 1.0 / s3], [0.0, 1.0 / s3]]
    r2 = [[0.0, 0.0], [s3, 0.0], [s3, 2.0 / s3], [0.0, 2.0 / s3]]
    step = 1.0 / s3
    cfg = {
        "dimension": 2,
        "prototiles": [
            {"label": "S", "volume": "1", "polygon": sq},
            {"label": "R1", "volume": "1", "polygon": r1},
            {"label": "R2", "volume": "2", "polygon": r2},
        ],
        "rules": [
            {
                "parent": "S",
                "children": [
                    {"type": "R1", "alpha": a, "translation": [0.0, 0.0]},
                    {"type": "R2", "alpha": a, "translation": [0.0, 1.0 / 3.0]},
                ],
            },
            {
                "parent": "R1",
                "children": [
                    {"type": "S", "alpha": a, "translation": [0.0, 0.0]},
                    {"type": "S", "alpha": a, "translation": [step, 0.0]},
                    {"type": "S", "alpha": a, "translation": [2.0 * step, 0.0]},
                ],
            },
            {
                "parent": "R2",
                "children": [
                    {"type": "S", "alpha": a, "translation": [0.0, 0.0]},
                    {"type": "S", "alpha": a, "translation": [step, 0.0]},
                    {"type": "S", "alpha": a, "translation": [2.0 * step, 0.0]},
                    {"type": "S", "alpha": a, "translation": [0.0, step]},
                    {"type": "S", "alpha": a, "translation": [step, step]},
                    {"type": "S", "alpha": a, "translation": [2.0 * step, step]},
                ],
            },
        ],
    }
    ident = [[1.0, 0.0], [0.0, 1.0]]
    polys = {"S": [tuple(p) for p in sq], "R1": [tuple(p) for p in r1],
             "R2": [tuple(p) for p in r2]}
    alpha = math.sqrt(1.0 / 3.0)
    for rule in cfg["rules"]:
        kids = [(alpha, ident, tuple(c["translation"]), polys[c["type"]])
                for c in rule["children"]]
        verify_cover(polys[rule["parent"]], kids, polys)
    return cfg


def cfg_tr_rhombus_triangle():
    alpha = math.sqrt(2.0) - 1.0
    t = {"type": "T", "alpha": alpha}
    r = {"type": "R", "alpha": alpha}
    return {
        "dimension": 2,
        "prototiles": [
            {"label": "T", "volume": "1"},
            {"label": "R", "volume": {"base": "2", "exponent": "1/2"}},
        ],
        "rules": [
            {"parent": "T", "children": [dict(t), dict(t), dict(t), dict(r), dict(r)]},
            {"parent": "R", "children": [dict(t), dict(t), dict(t), dict(t),
                                         dict(r), dict(r), dict(r)]},
        ],
    }


def cfg_rauzy():
    # real root of x^3 + x^2 + x = 1, then s = sqrt(x): the three child
    # contractions s, s^2, s^3 satisfy sum of squares = 1 in two dimensions.
    x = 0.5
    for _ in range(200):
        f = x * x * x + x * x + x - 1.0
        df = 3.0 * x * x + 2.0 * x + 1.0
        x -= f / df
    s = math.sqrt(x)
    return {
        "dimension": 2,
        "prototiles": [{"label": "F", "volume": "1"}],
        "rules": [
            {
                "parent": "F",
                "children": [
                    {"type": "F", "alpha": s},
                    {"type": "F", "alpha": s * s},
                    {"type": "F", "alpha": s * s * s},
                ],
            }
        ],
    }


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "configs"
    os.makedirs(outdir, exist_ok=True)
    configs = {
        "kakutani_third": cfg_kakutani_third(),
        "kakutani_golden": cfg_kakutani_golden(),
        "kakutani_half_quarter": cfg_kakutani_half_quarter(),
        "rect_square": cfg_rect_square(),
        "penrose_robinson": cfg_penrose_robinson(),
        "pinwheel_half": cfg_pinwheel_half(),
        "nonprimitive_grid": cfg_nonprimitive_grid(),
        "tr_rhombus_triangle": cfg_tr_rhombus_triangle(),
        "rauzy": cfg_rauzy(),
    }
    for name, cfg in configs.items():
        path = os.path.join(outdir, name + ".json")
        with open(path, "w") as f:
            json.dump(cfg, f, indent=2)
            f.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
