"""Smoke test for the depnet extension module."""

import json
import math

import depnet

EDGES = """#depnet-edges v1 isolated=keep
p.A\tp.B\tfield
p.B\tq.C\tfield
p.A\tq.C\tfield
r.D\tr.E\tfield
r.E\tr.F\tfield
r.D\tr.F\tfield
q.C\tr.D\tfield
"""


def main():
    g = depnet.Graph.from_edge_list(EDGES)
    assert (g.node_count, g.edge_count) == (6, 7), g
    assert g.degree("q.C") == 3

    packages = g.packages()
    assert packages["p.A"] == "p" and packages["r.F"] == "r"
    assert math.isclose(g.modularity(packages), 0.193878, abs_tol=1e-6)

    best = g.detect("mo", seed=1)
    assert len(set(best.values())) == 2
    assert math.isclose(g.modularity(best), 5 / 14, abs_tol=1e-12)

    stats, partition = g.batch("lp", runs=10, seed=3)
    stats = json.loads(stats)
    assert len(stats["q_values"]) == 10 and stats["max_q"] <= 5 / 14 + 1e-12
    assert set(partition) == set(g.classes())

    refined, q_before, q_after = g.refine(packages, seed=7)
    assert set(refined.values()) <= set(packages.values())
    assert math.isclose(q_after, 5 / 14, abs_tol=1e-12) and q_before < q_after

    split = g.split_disconnected({c: "x" if c in ("p.A", "r.F") else "y" for c in g.classes()})
    assert len(set(split.values())) == 3

    order = g.classes()
    halves = [best[c] for c in order]
    assert depnet.nmi(halves, halves) == 1.0
    assert abs(depnet.nmi(["a", "a", "b", "b"], ["a", "a", "a", "b"]) - 0.3437) < 5e-4

    dot = g.abstract_network(best, format="dot")
    assert dot.startswith("graph communities {") and dot.count(" -- ") == 1
    doc = json.loads(g.abstract_network(best))
    assert doc["version"] == 1 and sum(c["size"] for c in doc["communities"]) == 6

    header = depnet.Graph.extract([("a.chd", "package p; class A extends B { C c; }"), ("b.chd", "package p; class B {} class C {}")])
    assert sorted(header.edges()) == [("p.A", "p.B", "inheritance"), ("p.A", "p.C", "field")]
    assert depnet.Graph.from_edge_list(header.to_edge_list()).edge_count == 2

    alpha = depnet.fit_power_law([1] * 60 + [2] * 15 + [3] * 7 + [4] * 4 + [5] * 2 + [10, 20])
    assert alpha is not None and 1.5 < alpha < 3.0
    assert depnet.fit_power_law([4, 5]) is None

    for bad in (lambda: g.detect("xx"), lambda: g.modularity({"p.A": "p"}), lambda: depnet.Graph.from_edge_list("A\tB\tbogus")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("depnet smoke test passed:", g)


if __name__ == "__main__":
    main()
