"""Smoke test for the fillin_lab extension module.

Build and install first:  pip install --no-build-isolation -e crates/py
"""

import itertools

import fillin_lab as fl


def brute_min_fill(g):
    # minimum elimination-game fill over every ordering
    return min(len(fl.elimination_fill(g, list(p))) for p in itertools.permutations(range(g.n)))


def main():
    c6 = fl.Graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert not fl.is_chordal(c6)
    assert sorted(fl.find_hole(c6)) == list(range(6))
    fill, order = fl.exact_fillin(c6)
    assert len(fill) == brute_min_fill(c6) == 3
    assert fl.verify_fillin(c6, fill)[0]
    assert fl.is_chordal(c6.add_edges(fill))
    assert fl.exact_fillin_branch(c6, 3) is not None and fl.exact_fillin_branch(c6, 2) is None
    assert len(fl.greedy_fillin(c6, "min-degree")[0]) >= 3
    assert len(fl.exact_vertex_cover(c6)) == 3

    k2 = fl.Graph(2, [(0, 1)])
    inst = fl.reduce_primitive(k2)
    assert inst.host.n == 10 and inst.block_deficit == 4
    inst.check_invariants()
    split = fl.split_completion(inst, [0])
    assert fl.full_vertices(inst, split) == [0]
    report = fl.verify_sandwich(inst)
    assert report["pass"] and report["phi"] == 4

    petersen = fl.Graph.from_dimacs(
        "p edge 10 15\n"
        + "".join(f"e {u} {v}\n" for u, v in [
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 6), (2, 7), (3, 8),
            (4, 9), (5, 10), (6, 8), (8, 10), (10, 7), (7, 9), (9, 6)])
    )
    colors = fl.brooks_coloring(petersen, 3)
    assert all(colors[u] != colors[v] for u, v in petersen.edges())
    colored = fl.reduce_colored(petersen, b=1)
    assert colored.kind == "colored" and colored.host.n == (3 + 1) * 10

    cover, rep = fl.vc_via_transfer(petersen, "1/2", d=3)
    assert len(cover) == rep["tau"] == 6 and rep["pass"]
    cover, rep = fl.vc_via_transfer(petersen, "0.25", d=3, mode="completion", procedure="min-fill")
    assert rep["pass"]

    fill, nnz = fl.symbolic_factor(4, [(0, 1), (0, 2), (0, 3)], [0, 1, 2, 3])
    assert len(fill) == 3 and nnz == 16
    assert fl.symbolic_factor(4, [(0, 1), (0, 2), (0, 3)], [1, 2, 3, 0])[0] == []

    try:
        fl.Graph(2, [(0, 0)])
    except ValueError:
        pass
    else:
        raise AssertionError("self-loop accepted")
    try:
        fl.exact_fillin(fl.Graph(12))
    except RuntimeError as e:
        assert "oracle limit" in str(e)
    else:
        raise AssertionError("oracle limit not enforced")

    print("smoke test passed")


if __name__ == "__main__":
    main()
