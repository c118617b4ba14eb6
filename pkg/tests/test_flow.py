import pytest

from mbqcflow import (
    FlowConsistencyError,
    GFlow,
    OpenGraph,
    Plane,
    correction_dependencies,
    find_causal_flow,
    find_gflow,
    flow_wires,
    has_entanglement_capacity,
    measurement_rounds,
    odd_neighborhood,
    verify_gflow,
)
from mbqcflow.fixtures import (
    bottleneck_graph,
    cluster_graph,
    cluster_row_flow,
    fig3b_gflow,
    fig3b_graph,
    fig4_depth_one_gflow,
    fig4_flow,
    fig4_graph,
    path_flow,
    path_graph,
)

from conftest import random_open_graph, sample_graphs_with_gflow


def exhaustive_gflow_exists(graph: OpenGraph) -> bool:
    """Independent completeness oracle: enumerate layered orders directly.

    For every ordered partition of the measured vertices into rounds,
    check each vertex independently for a correcting set among the
    strictly-later non-inputs by brute-force subset enumeration (the
    XY-plane conditions decouple across vertices once the layering is
    fixed).
    """
    measured = [v for v in range(graph.n) if v not in graph.output_set]
    non_inputs = [v for v in range(graph.n) if v not in graph.input_set]

    def ordered_partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for sub in ordered_partitions(rest):
            for k in range(len(sub)):
                yield sub[:k] + [[first] + sub[k]] + sub[k + 1 :]
            for k in range(len(sub) + 1):
                yield sub[:k] + [[first]] + sub[k:]

    def vertex_ok(i, layer_of, n_layers):
        later = [
            j
            for j in non_inputs
            if j != i and layer_of.get(j, n_layers) > layer_of[i]
        ]
        for mask in range(1, 1 << len(later)):
            corr = {later[b] for b in range(len(later)) if (mask >> b) & 1}
            odd = odd_neighborhood(graph, corr)
            if i not in odd:
                continue
            if any(
                j != i and layer_of.get(j, n_layers) <= layer_of[i]
                for j in odd
            ):
                continue
            return True
        return False

    if not measured:
        return True
    for layering in ordered_partitions(measured):
        layer_of = {v: k for k, layer in enumerate(layering) for v in layer}
        if all(vertex_ok(i, layer_of, len(layering)) for i in measured):
            return True
    return False


class TestFindCausalFlow:
    def test_path_flow_structure(self):
        for n in (2, 3, 5):
            flow = find_causal_flow(path_graph(n))
            assert flow is not None
            assert flow.successor == {i: i + 1 for i in range(n - 1)}
            assert [sorted(l) for l in flow.layers] == [[i] for i in range(n)]

    def test_bottleneck_has_no_flow(self):
        assert find_causal_flow(bottleneck_graph()) is None

    def test_nothing_measured_gives_empty_flow(self):
        g = OpenGraph(n=3, edges=[(0, 1), (1, 2)], inputs=(0, 1, 2), outputs=(0, 1, 2))
        flow = find_causal_flow(g)
        assert flow is not None
        assert flow.successor == {}
        assert flow.layers == (frozenset({0, 1, 2}),)
        assert flow.depth == 0

    def test_cluster_flow_is_row_flow(self):
        for rows, cols in [(2, 3), (3, 3), (2, 4)]:
            found = find_causal_flow(cluster_graph(rows, cols))
            expected = cluster_row_flow(rows, cols)
            assert found is not None
            assert found.successor == expected.successor
            assert found.layers == expected.layers

    def test_io_size_precondition(self):
        g = OpenGraph(n=3, edges=[(0, 1), (1, 2)], inputs=(0, 1), outputs=(2,))
        with pytest.raises(ValueError, match="inputs"):
            find_causal_flow(g)

    def test_found_flows_verify(self, rng):
        for _ in range(40):
            g = random_open_graph(rng, n_max=8, equal_io=True)
            flow = find_causal_flow(g)
            if flow is not None:
                assert verify_gflow(g, flow.to_gflow()) == []


class TestFindGflow:
    def test_flow_implies_gflow(self, rng):
        for _ in range(40):
            g = random_open_graph(rng, n_max=8, equal_io=True)
            if find_causal_flow(g) is not None:
                assert find_gflow(g) is not None

    def test_bottleneck_has_no_gflow(self):
        assert find_gflow(bottleneck_graph()) is None

    def test_found_gflows_verify(self, rng):
        for _ in range(40):
            g = random_open_graph(rng, n_max=9, equal_io=True)
            gflow = find_gflow(g)
            if gflow is not None:
                assert verify_gflow(g, gflow) == []

    def test_fig3b_quoted_gflow_is_valid(self):
        assert verify_gflow(fig3b_graph(), fig3b_gflow()) == []

    def test_fig3b_has_gflow_but_no_flow(self):
        g = fig3b_graph()
        assert find_causal_flow(g) is None
        assert find_gflow(g) is not None

    def test_fig4_wide_gflow_found(self):
        found = find_gflow(fig4_graph())
        assert found is not None
        assert found.corrections == fig4_depth_one_gflow().corrections
        assert found.depth == 1

    def test_matches_exhaustive_search_small(self, rng):
        # Smoke-sized version of the completeness criterion.
        for _ in range(60):
            g = random_open_graph(rng, n_min=2, n_max=5)
            if len(g.inputs) > len(g.outputs):
                continue
            assert (find_gflow(g) is not None) == exhaustive_gflow_exists(g)

    def test_maximally_delayed_depth_is_minimal(self, rng):
        # No valid gFlow found by exhaustive layering search is shallower.
        for graph, gflow in sample_graphs_with_gflow(15, seed=99, n_max=6):
            measured = [v for v in range(graph.n) if v not in graph.output_set]
            found_depth = gflow.depth
            best = None
            seen = set()

            def layerings(items):
                if not items:
                    yield []
                    return
                first, rest = items[0], items[1:]
                for sub in layerings(rest):
                    for k in range(len(sub)):
                        yield sub[:k] + [[first] + sub[k]] + sub[k + 1 :]
                    for k in range(len(sub) + 1):
                        yield sub[:k] + [[first]] + sub[k:]

            for layering in layerings(measured):
                depth = len(layering)
                if best is not None and depth >= best:
                    continue
                candidate_layers = [set(l) for l in layering] + [set(graph.outputs)]
                layer_of = {
                    v: k for k, layer in enumerate(candidate_layers) for v in layer
                }
                ok = True
                for i in measured:
                    later = [
                        j
                        for j in range(graph.n)
                        if j not in graph.input_set
                        and j != i
                        and layer_of[j] > layer_of[i]
                    ]
                    good = False
                    for mask in range(1, 1 << len(later)):
                        corr = {
                            later[b] for b in range(len(later)) if (mask >> b) & 1
                        }
                        odd = odd_neighborhood(graph, corr)
                        if i not in odd:
                            continue
                        if any(
                            j != i and layer_of[j] <= layer_of[i] for j in odd
                        ):
                            continue
                        good = True
                        break
                    if not good:
                        ok = False
                        break
                if ok:
                    best = depth
            assert best is not None
            assert found_depth <= best


class TestVerifyGflow:
    def test_path_flow_ok(self):
        g = path_graph(3)
        assert verify_gflow(g, path_flow(3).to_gflow()) == []

    def test_g3_violation(self):
        g = path_graph(3)
        bad = GFlow(corrections={0: {2}, 1: {2}}, layers=[{0}, {1}, {2}])
        rules = {(v.vertex, v.rule) for v in verify_gflow(g, bad)}
        assert (0, "g3") in rules

    def test_g1_violation(self):
        g = path_graph(3)
        bad = GFlow(corrections={0: {1}, 1: {2}}, layers=[{1}, {0}, {2}])
        rules = {(v.vertex, v.rule) for v in verify_gflow(g, bad)}
        assert (0, "g1") in rules

    def test_g2_violation(self):
        # Vertex 0's correction puts a Z on vertex 1, measured earlier.
        g = OpenGraph(n=4, edges=[(0, 2), (1, 2), (1, 3)], inputs=(), outputs=(2, 3))
        bad = GFlow(corrections={0: {2}, 1: {3}}, layers=[{1}, {0}, {2, 3}])
        rules = {(v.vertex, v.rule) for v in verify_gflow(g, bad)}
        assert (0, "g2") in rules

    def test_g2_rejects_same_round_interference(self):
        # Corrections of the two round-one vertices write Z onto each
        # other; banning only strictly-earlier leakage would accept this
        # layering even though no serialization of the round can realize
        # the corrections (and the peeling algorithm rightly finds no
        # gFlow on this graph at all).
        g = OpenGraph(
            n=5,
            edges=[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 3), (3, 4)],
            inputs=(1,),
            outputs=(4,),
        )
        degenerate = GFlow(
            corrections={0: {4}, 1: {0}, 2: {0}, 3: {4}},
            layers=[{1, 2}, {0, 3}, {4}],
        )
        rules = {(v.vertex, v.rule) for v in verify_gflow(g, degenerate)}
        assert (1, "g2") in rules and (2, "g2") in rules
        assert find_gflow(g) is None

    def test_yz_plane_rule(self):
        g = path_graph(3)
        bad = GFlow(
            corrections={0: {1}, 1: {2}},
            layers=[{0}, {1}, {2}],
            planes={0: Plane.YZ, 1: Plane.XY},
        )
        rules = {(v.vertex, v.rule) for v in verify_gflow(g, bad)}
        assert (0, "g5") in rules

    def test_xz_plane_rule_accepts_hand_example(self):
        # Single vertex measured in XZ: g(0) = {0} needs odd self-loop,
        # impossible, so use a two-vertex graph with g(0) = {0, 1}.
        g = OpenGraph(n=2, edges=[(0, 1)], inputs=(), outputs=(1,))
        gf = GFlow(
            corrections={0: {0, 1}},
            layers=[{0}, {1}],
            planes={0: Plane.XZ},
        )
        assert verify_gflow(g, gf) == []

    def test_malformed_domain_raises(self):
        g = path_graph(3)
        with pytest.raises(ValueError, match="non-output"):
            verify_gflow(g, GFlow(corrections={0: {1}}, layers=[{0}, {1}, {2}]))

    def test_correcting_set_reaching_inputs_raises(self):
        g = OpenGraph(n=3, edges=[(0, 1), (1, 2)], inputs=(0, 1), outputs=(1, 2))
        with pytest.raises(ValueError, match="input"):
            verify_gflow(g, GFlow(corrections={0: {1}}, layers=[{0}, {1, 2}]))


class TestRoundsAndDependencies:
    def test_path_depth(self):
        rounds, depth = measurement_rounds(path_flow(5).to_gflow())
        assert depth == 4
        assert [sorted(r) for r in rounds] == [[0], [1], [2], [3]]

    def test_fig4_depths(self):
        assert measurement_rounds(fig4_flow().to_gflow())[1] == 4
        assert measurement_rounds(fig4_depth_one_gflow())[1] == 1

    def test_fig4_wide_parities(self):
        report = correction_dependencies(fig4_graph(), fig4_depth_one_gflow())
        assert report.x_parity[7] == (0, 1, 2, 3)
        assert report.depth == 1

    def test_path_parities(self):
        n = 6
        report = correction_dependencies(path_graph(n), path_flow(n).to_gflow())
        for j in range(1, n):
            assert report.x_parity[j] == (j - 1,)
        for j in range(2, n):
            assert report.z_parity[j] == (j - 2,)

    def test_empty_measured_set(self):
        g = OpenGraph(n=2, edges=[(0, 1)], inputs=(0, 1), outputs=(0, 1))
        gf = GFlow(corrections={}, layers=[{0, 1}])
        report = correction_dependencies(g, gf)
        assert report.total_cost == 0
        assert report.depth == 0


class TestFlowWires:
    def test_path_single_wire(self):
        report = flow_wires(path_graph(4), path_flow(4))
        assert report.wires == ((0, 1, 2, 3),)
        assert report.uncovered_non_outputs == frozenset()

    def test_cluster_row_wires(self):
        rows, cols = 3, 4
        report = flow_wires(cluster_graph(rows, cols), cluster_row_flow(rows, cols))
        assert len(report.wires) == rows
        for r, wire in enumerate(report.wires):
            assert wire == tuple(r * cols + c for c in range(cols))
        assert report.uncovered_non_outputs == frozenset()

    def test_flow_wires_cover_all_when_io_balanced(self, rng):
        from conftest import sample_graphs_with_flow

        for graph, flow in sample_graphs_with_flow(25, seed=5, n_max=8):
            report = flow_wires(graph, flow)
            assert report.uncovered_non_outputs == frozenset()
            seen = set()
            for wire in report.wires:
                assert not (seen & set(wire))
                seen.update(wire)
            assert seen == set(range(graph.n)) - (
                graph.output_set - {w[-1] for w in report.wires}
            )

    def test_unbalanced_flow_reports_uncovered(self):
        # Valid flow with one input and two outputs; vertex 1 sits on a
        # chain not rooted at an input.
        g = OpenGraph(n=4, edges=[(0, 2), (1, 3)], inputs=(0,), outputs=(2, 3))
        flow = find_causal_flow(g)
        assert flow is not None
        report = flow_wires(g, flow)
        assert report.wires == ((0, 2),)
        assert report.uncovered_non_outputs == frozenset({1})

    def test_menger_failure_raises(self):
        fake = GFlow(
            corrections={0: {2, 3}, 1: {2, 4}, 2: {3, 4}},
            layers=[{0, 1}, {2}, {3, 4}],
        )
        with pytest.raises(FlowConsistencyError, match="disjoint"):
            flow_wires(bottleneck_graph(), fake)

    def test_gflow_route_uses_max_flow(self):
        g = fig3b_graph()
        gflow = find_gflow(g)
        report = flow_wires(g, gflow)
        assert len(report.wires) == 3
        seen = set()
        for wire in report.wires:
            assert wire[0] in g.input_set and wire[-1] in g.output_set
            assert not (seen & set(wire))
            seen.update(wire)

    def test_input_equals_output_wire(self):
        g = OpenGraph(n=2, edges=[(0, 1)], inputs=(0,), outputs=(0, 1))
        flow = find_causal_flow(g)
        report = flow_wires(g, flow)
        assert report.wires == ((0,),)


class TestGflowImpliesCapacity:
    def test_gflow_graphs_pass_capacity_check(self):
        for graph, _ in sample_graphs_with_gflow(30, seed=11, n_max=8):
            ok, witness = has_entanglement_capacity(graph)
            assert ok, f"capacity violated on {graph} with witness {witness}"


class TestSerialization:
    def test_gflow_json_round_trip(self):
        gf = fig4_depth_one_gflow()
        assert GFlow.from_json(gf.to_json()) == gf

    def test_flow_json_via_gflow(self):
        gf = path_flow(4).to_gflow()
        again = GFlow.from_json(gf.to_json())
        assert again.corrections == gf.corrections
        assert again.layers == gf.layers
        assert again.is_flow
