#!/usr/bin/env python3
"""Writes the shipped fixtures into fixtures/ in canonical key order."""

import json
import os
import sys
from fractions import Fraction

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def rat(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def tvertex(vid, rate, m, selfint, delta=False, separation=False, arrows=(), prefix="y = 0"):
    return {"id": vid, "rate": rat(rate), "m": m, "selfint": selfint, "delta": delta,
            "separation": separation, "arrows": list(arrows), "prefix": prefix}


def graph(vertices, edges):
    # vertices: (id, rate, marks)
    return {"vertices": [{"id": v, "rate": rat(r), "marks": sorted(m)} for v, r, m in vertices],
            "edges": [[a, b] for a, b in edges]}


def dump(name, doc):
    with open(os.path.join(OUT, name), "w") as f:
        f.write(json.dumps(doc, indent=2) + "\n")


def cusp74():
    dump("cusp74.json", {
        "schema": "lipgerm/1",
        "branches": {"a": "y = x^(3/2) + x^(7/4)"},
        "delta": [],
        "directives": [],
        "notes": ["Single branch y = x^(3/2) + x^(7/4); its minimal resolution has five exceptional curves."],
    })


def e8():
    T = [tvertex("t1", 1, 1, -3), tvertex("t32", Fraction(3, 2), 2, -2), tvertex("t53", Fraction(5, 3), 3, -2),
         tvertex("t2", 2, 1, -3),
         tvertex("t103", Fraction(10, 3), 3, -1, delta=True, arrows=["d"], prefix="y = -x^(5/3)")]
    tedges = [("t1", "t32"), ("t32", "t53"), ("t53", "t2"), ("t53", "t103")]
    G = graph([("g1", 1, {"L"}), ("g32", Fraction(3, 2), set()), ("g53", Fraction(5, 3), set()),
               ("g2", 2, set()), ("g103", Fraction(10, 3), {"P"})],
              [("g1", "g32"), ("g32", "g53"), ("g53", "g2"), ("g53", "g103")])
    F = graph([("f1", 1, set()), ("f32", Fraction(3, 2), set()), ("f53", Fraction(5, 3), set()),
               ("f2", 2, set()), ("f103a", Fraction(10, 3), set()), ("f103b", Fraction(10, 3), set()),
               ("f103c", Fraction(10, 3), set())],
              [("f1", "f32"), ("f32", "f53"), ("f53", "f2"), ("f53", "f103a"), ("f53", "f103b"),
               ("f53", "f103c")])
    Fhat = graph([("h1", 1, {"L"}), ("h32", Fraction(3, 2), set()), ("h53", Fraction(5, 3), set()),
                  ("h2a", 2, set()), ("h2b", 2, set()), ("hpa", Fraction(10, 3), {"P"}),
                  ("hpb", Fraction(10, 3), {"P"}), ("hpc", Fraction(10, 3), {"P"})],
                 [("h1", "h32"), ("h32", "h53"), ("h53", "h2a"), ("h53", "h2b"), ("h53", "hpa"),
                  ("h53", "hpb"), ("h53", "hpc")])
    doc = {
        "schema": "lipgerm/1",
        "mult": 2,
        "branches": {"d": "y = -x^(5/3)"},
        "delta": ["d"],
        "directives": [],
        "tree": {"root": "t1", "vertices": T, "edges": [list(e) for e in tedges]},
        "graphs": {"G": G, "F": F, "Fhat": Fhat},
        "maps": {
            "E": {"f1": "t1", "f32": "t32", "f53": "t53", "f2": "t2", "f103a": "t103", "f103b": "t103",
                  "f103c": "t103"},
            "C": {"g1": "t1", "g32": "t32", "g53": "t53", "g2": "t2", "g103": "t103"},
            "Ehat": {"h1": "g1", "h32": "g32", "h53": "g53", "h2a": "g2", "h2b": "g2", "hpa": "g103",
                     "hpb": "g103", "hpc": "g103"},
            "Chat": {"h1": "f1", "h32": "f32", "h53": "f53", "h2a": "f2", "h2b": "f2", "hpa": "f103a",
                     "hpb": "f103b", "hpc": "f103c"},
        },
        "covers": {
            "F": {"order": 3, "generator": ["f1", "f32", "f53", "f2", "f103b", "f103c", "f103a"]},
            "Fhat": {"order": 6, "generator": ["h1", "h32", "h53", "h2b", "h2a", "hpb", "hpc", "hpa"]},
        },
        "lifts": {
            "t1": [lift("t1.a", ["h1"] * 2, "g1", 2, 2)],
            "t53": [lift("t53.a", ["h53"] * 6, "g53", 2, 6)],
            "t103": [lift("t103.a", ["hpa", "hpb", "hpc"], "g103", 1, 3),
                     lift("t103.b", ["hpa", "hpb", "hpc"], "g103", 1, 3)],
        },
        "notes": [
            "E8 surface x^2 + y^3 + z^5 = 0, generic projection to (y, z); discriminant y^3 + z^5 = 0, "
            "written as the branch y = -x^(5/3) in the plane coordinates (x, y) = (z, y).",
            "The tree is declared: the rate-10/3 vertex carrying the discriminant is drawn adjacent to the "
            "rate-5/3 vertex. Free blow-ups along the branch would put four intermediate vertices between them.",
            "Lifts: the hyperplane-section curvette (root) and the 5/3 curvette each lift to one component "
            "of degree 2; the 10/3 curvette lifts to two degree-1 components whose slices sit at the three "
            "rate-10/3 Fhat vertices.",
        ],
    }
    dump("e8.json", doc)


def lift(eid, fhat, g, degree, mult_hat):
    return {"id": eid, "fhat": fhat, "g": g, "degree": degree, "mult_hat": mult_hat, "qout": {}}


# Fiber graph of the minimal singularity, vertices named by their picture coordinates.
COLOUR = {  # Fhat vertex -> T vertex
    "(-3,0)": "C1", "(1,0)": "C1", "(5,0)": "C1", "(0,-3)": "C1",
    "(0,0)": "C2", "(-2,0)": "C2", "(0,-2)": "C2", "(5,-1)": "C2", "(-2,-1)": "C2", "(-4,-1)": "C2",
    "(0,-1)": "C5", "(-2.5,1)": "C5", "(4,-1)": "C5", "(-1,-1)": "C5", "(-3,-1)": "C5",
    "(-1,0)": "C4", "(1,-2)": "C4", "(5,-2)": "C4", "(-2,-2)": "C4", "(-4,-2)": "C4",
    "(-1.5,1)": "C3", "(2,-2)": "C3", "(5,-3)": "C3", "(-2,-3)": "C3", "(-4,-3)": "C3",
    "(2,0)": "C7", "(4,0)": "C7", "(1,-3)": "C7", "(-3.65,.65)": "C7", "(-3,1)": "C7", "(-4,0)": "C7",
    "(3,0)": "C6", "(2,-3)": "C6", "(-5,0)": "C6", "(-3,2)": "C6", "(-4.3,1.3)": "C6",
}

FHAT_EDGES = [
    # thick lines
    ("(-3,0)", "(-2,0)"), ("(-2,0)", "(-1,0)"), ("(-1,0)", "(0,0)"), ("(0,0)", "(1,0)"), ("(1,0)", "(2,0)"),
    ("(2,0)", "(3,0)"), ("(3,0)", "(4,0)"), ("(4,0)", "(5,0)"),
    ("(0,0)", "(0,-1)"), ("(0,-1)", "(0,-2)"), ("(0,-2)", "(0,-3)"),
    # dotted
    ("(-2,0)", "(-2.5,1)"), ("(-1,0)", "(-1.5,1)"),
    ("(0,-2)", "(1,-2)"), ("(1,-2)", "(2,-2)"),
    ("(5,0)", "(5,-1)"), ("(5,-1)", "(5,-2)"), ("(5,-2)", "(5,-3)"), ("(5,-1)", "(4,-1)"),
    ("(-3,0)", "(-2,-1)"), ("(-2,-1)", "(-2,-2)"), ("(-2,-2)", "(-2,-3)"), ("(-2,-1)", "(-1,-1)"),
    ("(-3,0)", "(-4,-1)"), ("(-4,-1)", "(-4,-2)"), ("(-4,-2)", "(-4,-3)"), ("(-4,-1)", "(-3,-1)"),
    ("(-3,0)", "(-3,1)"), ("(-3,1)", "(-3,2)"),
    ("(-3,0)", "(-4,0)"), ("(-4,0)", "(-5,0)"),
    ("(-3,0)", "(-3.65,.65)"), ("(-3.65,.65)", "(-4.3,1.3)"),
    ("(0,-3)", "(1,-3)"), ("(1,-3)", "(2,-3)"),
]

L_NODES = {"(-3,0)", "(1,0)", "(5,0)", "(0,-3)"}
P_NODES = {"(-3,0)", "(-1,0)", "(0,-1)", "(3,0)"}

# Order-6 deck transformation: swap the two C2-arms at (-3,0), rotate the three C7-arms.
SIGMA = {
    "(-2,-1)": "(-4,-1)", "(-4,-1)": "(-2,-1)", "(-2,-2)": "(-4,-2)", "(-4,-2)": "(-2,-2)",
    "(-2,-3)": "(-4,-3)", "(-4,-3)": "(-2,-3)", "(-1,-1)": "(-3,-1)", "(-3,-1)": "(-1,-1)",
    "(-3,1)": "(-4,0)", "(-4,0)": "(-3.65,.65)", "(-3.65,.65)": "(-3,1)",
    "(-3,2)": "(-5,0)", "(-5,0)": "(-4.3,1.3)", "(-4.3,1.3)": "(-3,2)",
}

RATE = {"C1": 1, "C2": 2, "C3": 3, "C4": Fraction(5, 2), "C5": 3, "C6": 2, "C7": Fraction(3, 2),
        "C8": Fraction(4, 3)}
MULT = {"C1": 1, "C2": 1, "C3": 1, "C4": 2, "C5": 1, "C6": 1, "C7": 2, "C8": 3}

MINIMAL_BRANCHES = {
    "l1": "y = x", "l2": "y = 2*x", "l3": "y = 3*x", "l4": "y = 4*x",
    "cusp": "y = @t*x + @d*x^(5/2)",
    "s1": "y = @t*x + @e*x^2 + @f*x^3", "s2": "y = @t*x + @e*x^2 + @g*x^3",
    "q1": "y = @b*x^2", "q2": "y = @c*x^2",
}


def minimal(variant=None):
    colour = dict(COLOUR)
    edges = list(FHAT_EDGES)
    sigma = dict(SIGMA)
    separation = "C7"
    if variant:
        # blow up every C1-C7 edge: one new rate-4/3 vertex per lifted edge
        new = {("(1,0)", "(2,0)"): "(1.5,0)", ("(4,0)", "(5,0)"): "(4.5,0)",
               ("(0,-3)", "(1,-3)"): "(.5,-3)", ("(-3,0)", "(-3,1)"): "(-3,.5)",
               ("(-3,0)", "(-4,0)"): "(-3.5,0)", ("(-3,0)", "(-3.65,.65)"): "(-3.33,.33)"}
        out = []
        for a, b in edges:
            mid = new.get((a, b))
            if mid:
                colour[mid] = "C8"
                out += [(a, mid), (mid, b)]
            else:
                out.append((a, b))
        edges = out
        sigma.update({"(-3,.5)": "(-3.5,0)", "(-3.5,0)": "(-3.33,.33)", "(-3.33,.33)": "(-3,.5)"})
        separation = "C8" if variant == "a" else "C7"

    fhat_ids = list(colour)
    g_of = lambda v: sigma.get(v, v)
    orbit_rep = {}
    for v in fhat_ids:
        orbit, w = [v], g_of(v)
        while w != v:
            orbit.append(w)
            w = g_of(w)
        rep = min(orbit, key=fhat_ids.index)
        orbit_rep[v] = "g" + rep

    def marks(v):
        m = set()
        if v in L_NODES:
            m.add("L")
        if v in P_NODES:
            m.add("P")
        return m

    Fhat = graph([(v, RATE[colour[v]], marks(v)) for v in fhat_ids], edges)
    g_ids = []
    for v in fhat_ids:
        if orbit_rep[v] not in g_ids:
            g_ids.append(orbit_rep[v])
    g_marks = {g: set() for g in g_ids}
    g_colour = {}
    for v in fhat_ids:
        g_marks[orbit_rep[v]] |= marks(v)
        g_colour[orbit_rep[v]] = colour[v]
    g_edges = []
    for a, b in edges:
        e = (orbit_rep[a], orbit_rep[b])
        if e not in g_edges and e[::-1] not in g_edges:
            g_edges.append(e)
    G = graph([(g, RATE[g_colour[g]], g_marks[g]) for g in g_ids], g_edges)

    tids = ["C1", "C2", "C3", "C4", "C5", "C6", "C7"] + (["C8"] if variant else [])
    selfint = {"C1": -4, "C2": -4, "C3": -2, "C4": -1, "C5": -1, "C6": -2, "C7": -1}
    tedges = [("C1", "C2"), ("C2", "C4"), ("C4", "C3"), ("C2", "C5"), ("C1", "C7"), ("C7", "C6")]
    if variant:
        selfint.update({"C1": -5, "C7": -2, "C8": -1})
        tedges = tedges[:4] + [("C1", "C8"), ("C8", "C7"), ("C7", "C6")]
    arrows = {"C1": ["l1", "l2", "l3", "l4"], "C4": ["cusp"], "C5": ["s1", "s2"], "C6": ["q1", "q2"]}
    prefix = {"C2": "y = @t*x", "C3": "y = @t*x", "C4": "y = @t*x", "C5": "y = @t*x + @e*x^2"}
    delta = {"C1", "C4", "C5", "C6"}
    T = [tvertex(t, RATE[t], MULT[t], selfint[t], delta=t in delta, separation=t == separation,
                 arrows=arrows.get(t, []), prefix=prefix.get(t, "y = 0")) for t in tids]
    F = graph([(t, RATE[t], set()) for t in tids], tedges)

    nodes = [t for t in tids if t in delta or t == separation or t == "C2"]
    extra = {"C1": {"(-3,0)": 3}, "C4": {"(-1,0)": 2}, "C5": {"(0,-1)": 2}, "C6": {"(3,0)": 2}}
    lifts = {}
    for t in nodes:
        es = []
        for v in fhat_ids:
            if colour[v] != t:
                continue
            for _ in range(extra.get(t, {}).get(v, 1)):
                es.append(lift(f"{t}.{len(es) + 1}", [v] * MULT[t], orbit_rep[v], 1, MULT[t]))
        assert len(es) == 6, (t, len(es))
        lifts[t] = es

    notes = [
        "Minimal rational singularity, generic projection; multiplicity 6.",
        "Fhat is the 36-vertex fiber graph as drawn, vertices named by their picture coordinates; "
        "L-nodes are the four rate-1 vertices, P-nodes are (-3,0), (-1,0), (0,-1) and (3,0).",
        "G is reconstructed as the quotient of Fhat by the order-6 deck "
        "transformation that swaps the two C2-arms at (-3,0) and rotates its three C7-arms.",
        "F = T (cover of order 1); every lift component has degree 1.",
    ]
    if variant:
        notes.append("Variant: the C1-C7 edge of T is blown up once more (C8, rate 4/3, m 3). The string "
                     f"C1-C8-C7-C6 carries its separation node at {separation}.")
    doc = {
        "schema": "lipgerm/1",
        "mult": 6,
        "branches": MINIMAL_BRANCHES,
        "delta": list(MINIMAL_BRANCHES),
        "directives": [],
        "tree": {"root": "C1", "vertices": T, "edges": [list(e) for e in tedges]},
        "graphs": {"G": G, "F": F, "Fhat": Fhat},
        "maps": {
            "E": {t: t for t in tids},
            "C": {g: g_colour[g] for g in g_ids},
            "Ehat": {v: orbit_rep[v] for v in fhat_ids},
            "Chat": {v: colour[v] for v in fhat_ids},
        },
        "covers": {
            "F": {"order": 1, "generator": tids},
            "Fhat": {"order": 6, "generator": [g_of(v) for v in fhat_ids]},
        },
        "lifts": lifts,
        "notes": notes,
    }
    name = "minimal-b2.json" if not variant else f"minimal-b2-sep-{variant}.json"
    dump(name, doc)


def single_vertex():
    doc = {
        "schema": "lipgerm/1",
        "graphs": {"G": {"vertices": [{"id": "v", "rate": "3/2", "marks": []}], "edges": []}},
        "notes": ["One vertex, no edges."],
    }
    dump("single-vertex.json", doc)


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    cusp74()
    e8()
    minimal()
    minimal("a")
    minimal("b")
    single_vertex()
    sys.exit(0)
