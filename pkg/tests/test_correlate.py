import pytest

from evidential.correlate import (
    CorrelationGraph,
    CorrelationMatrix,
    Group,
    build_graph,
    pearson_matrix,
    prune_components,
)
from evidential.records import CaseRecord


def cases_from_columns(columns: dict[str, list[float | None]]) -> list[CaseRecord]:
    length = len(next(iter(columns.values())))
    cases = []
    for i in range(length):
        values = {p: col[i] for p, col in columns.items() if col[i] is not None}
        cases.append(CaseRecord(f"c{i}", "x", values))
    return cases


def graph(nodes, edges, threshold=0.5):
    return CorrelationGraph(Group.BIOCHEMICAL, tuple(nodes), tuple(edges), threshold)


class TestPearson:
    def test_exact_linear(self):
        xs = [float(i) for i in range(10)]
        cases = cases_from_columns({"A": xs, "B": [2 * x + 1 for x in xs]})
        matrix = pearson_matrix(cases, ["A", "B"])
        assert matrix.get("A", "B") == pytest.approx(1.0, abs=1e-12)

    def test_exact_inverse(self):
        xs = [float(i) for i in range(10)]
        cases = cases_from_columns({"A": xs, "B": [-x for x in xs]})
        matrix = pearson_matrix(cases, ["A", "B"])
        assert matrix.get("A", "B") == pytest.approx(-1.0, abs=1e-12)

    def test_constant_column_absent(self):
        cases = cases_from_columns({"A": [float(i) for i in range(10)], "B": [5.0] * 10})
        matrix = pearson_matrix(cases, ["A", "B"])
        assert matrix.get("A", "B") is None

    def test_min_pairs(self):
        xs = [float(i) for i in range(9)]
        cases = cases_from_columns({"A": xs, "B": [2 * x for x in xs]})
        assert pearson_matrix(cases, ["A", "B"], min_pairs=10).get("A", "B") is None
        assert pearson_matrix(cases, ["A", "B"], min_pairs=9).get("A", "B") is not None

    def test_pairwise_complete(self):
        # the row with the missing value must not poison the complete pairs
        a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, None]
        b = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 100.0]
        cases = cases_from_columns({"A": a, "B": b})
        matrix = pearson_matrix(cases, ["A", "B"], min_pairs=10)
        assert matrix.get("A", "B") == pytest.approx(1.0, abs=1e-12)

    def test_no_params_rejected(self):
        with pytest.raises(ValueError):
            pearson_matrix([], [])


class TestBuildGraph:
    def test_threshold_filter(self):
        matrix = CorrelationMatrix(("A", "B", "C"), {("A", "B"): 0.6, ("A", "C"): 0.3})
        g = build_graph(matrix, 0.5)
        assert g.edges == (("A", "B", 0.6),)

    def test_negative_branch(self):
        matrix = CorrelationMatrix(("A", "B"), {("A", "B"): -0.55})
        g = build_graph(matrix, 0.5)
        assert g.edges == (("A", "B", -0.55),)

    def test_empty_matrix_gives_isolated_nodes(self):
        g = build_graph(CorrelationMatrix(("A", "B"), {}), 0.5)
        assert g.edges == ()
        assert g.nodes == ("A", "B")

    def test_threshold_validation(self):
        matrix = CorrelationMatrix(("A",), {})
        with pytest.raises(ValueError):
            build_graph(matrix, 0.0)
        with pytest.raises(ValueError):
            build_graph(matrix, 1.5)


class TestPruneComponents:
    def test_pair_keeps_first_name(self):
        result = prune_components(graph(["P", "Q"], [("P", "Q", 0.7)]))
        assert result.kept == {"P"}
        assert result.removed == {"Q"}
        assert result.components[0].rule == "two-node-first-name"

    def test_triangle_keeps_max_weight(self):
        # |r| sums: P = 0.6+0.7 = 1.3, Q = 0.6+0.5 = 1.1, R = 0.7+0.5 = 1.2
        edges = [("P", "Q", 0.6), ("P", "R", 0.7), ("Q", "R", 0.5)]
        result = prune_components(graph(["P", "Q", "R"], edges))
        assert result.kept == {"P"}
        assert result.removed == {"Q", "R"}
        assert result.components[0].rule == "equal-degree-max-weight"

    def test_star_plus_edge(self):
        edges = [
            ("A", "B", 0.6),
            ("A", "C", 0.55),
            ("A", "D", 0.5),
            ("B", "C", 0.52),
        ]
        result = prune_components(graph(["A", "B", "C", "D"], edges))
        assert result.kept == {"A", "B", "C"}
        assert result.removed == {"D"}
        assert result.components[0].rule == "hub-and-shared-neighbours"

    def test_isolated_nodes_always_kept(self):
        result = prune_components(graph(["A", "B", "C"], [("A", "B", 0.9)]))
        assert "C" in result.kept
        rules = {tuple(d.nodes): d.rule for d in result.components}
        assert rules[("C",)] == "isolated"

    def test_every_component_keeps_at_least_one(self):
        edges = [("A", "B", 0.9), ("C", "D", 0.8), ("C", "E", 0.7), ("D", "E", 0.6)]
        result = prune_components(graph(["A", "B", "C", "D", "E"], edges))
        for decision in result.components:
            assert len(decision.kept) >= 1
        assert result.kept | result.removed == {"A", "B", "C", "D", "E"}
        assert not result.kept & result.removed

    def test_equal_degree_beyond_triangle(self):
        # 4-cycle, every node degree 2; |r| sums A=1.4, B=1.5, C=1.4, D=1.3
        edges = [("A", "B", 0.9), ("B", "C", 0.6), ("C", "D", 0.8), ("A", "D", 0.5)]
        result = prune_components(graph(["A", "B", "C", "D"], edges))
        assert result.components[0].rule == "equal-degree-max-weight"
        assert result.kept == {"B"}

    def test_determinism_ten_runs(self):
        edges = [
            ("A", "B", 0.6),
            ("A", "C", 0.55),
            ("A", "D", 0.5),
            ("B", "C", 0.52),
            ("X", "Y", 0.7),
        ]
        g = graph(["A", "B", "C", "D", "X", "Y", "Z"], edges)
        first = prune_components(g)
        for _ in range(9):
            assert prune_components(g) == first

    def test_raising_threshold_never_adds_edges(self):
        matrix = CorrelationMatrix(
            ("A", "B", "C"), {("A", "B"): 0.6, ("A", "C"): 0.52, ("B", "C"): 0.8}
        )
        edge_counts = [len(build_graph(matrix, t).edges) for t in (0.5, 0.55, 0.7, 0.9)]
        assert edge_counts == sorted(edge_counts, reverse=True)

    def test_threshold_above_max_removes_nothing(self):
        matrix = CorrelationMatrix(("A", "B"), {("A", "B"): 0.6})
        result = prune_components(build_graph(matrix, 0.7))
        assert result.removed == frozenset()
