"""ファイル形式・ID変換のテスト"""

import json

import pytest

from coloring.colorings import WitnessCertificate, WitnessKind
from coloring.errors import InvalidInstanceError, MalformedCertificateError
from coloring.formats import (
    dump_json,
    graph_to_dimacs,
    graph_to_dot,
    graph_to_json,
    instance_to_json,
    load_certificate,
    load_graph,
    load_instance,
    load_solution,
    make_envelope,
    parse_dimacs,
    solution_to_json,
    write_graph,
)
from coloring.generators import t5_edge_tree
from coloring.graph_core import Graph
from coloring.id_utils import edges_to_internal, to_external, to_internal, validate_vertex_ids
from coloring.reductions import MisInstance, random_gridtiling_yes_instance
from tests.strategies import P4


class TestIdUtils:
    def test_conversion(self):
        assert to_internal(1, 4) == 0
        assert to_external(3, 4) == 4
        assert edges_to_internal([[1, 2], [2, 3]], 3) == [(0, 1), (1, 2)]

    @pytest.mark.parametrize("vertex_id", [0, 5, True, "1"])
    def test_rejects_bad_ids(self, vertex_id):
        with pytest.raises(ValueError):
            to_internal(vertex_id, 4)

    def test_validate_vertex_ids(self):
        assert validate_vertex_ids([0, 2, 1], 3) == (True, "")
        assert validate_vertex_ids([0, 0], 3) == (False, "duplicate vertex id 0")
        assert validate_vertex_ids([0, 0], 3, allow_duplicates=True) == (True, "")
        ok, message = validate_vertex_ids([3], 3)
        assert not ok and "out of range" in message


class TestGraphFiles:
    def test_json_is_one_based(self):
        g = Graph.from_edges(3, [(0, 1)], {2: "leaf"})
        data = graph_to_json(g)
        assert data == {"n": 3, "edges": [[1, 2]], "roles": {"3": "leaf"}}
        assert load_graph(json.dumps(data)) == g

    def test_loads_envelope(self):
        envelope = make_envelope("gen", {"graph": graph_to_json(P4)}, seed=3)
        assert envelope["seed"] == 3
        assert load_graph(dump_json(envelope)) == P4

    @pytest.mark.parametrize(
        "text",
        [
            '{"n": 2, "edges": [[1, 3]]}',
            '{"n": 2, "edges": [[1, 1]]}',
            '{"n": 2, "edges": [[0, 1]]}',
            '{"n": 2, "roles": {"x": "a"}}',
            '{"edges": []}',
            '{"n": 2,',
        ],
    )
    def test_rejects_bad_json(self, text):
        with pytest.raises(InvalidInstanceError):
            load_graph(text)

    def test_dimacs(self):
        text = graph_to_dimacs(Graph.from_edges(3, [(0, 1), (1, 2)], {0: "root"}))
        assert text.splitlines()[:2] == ["c schema_version 1.0", "p edge 3 2"]
        assert "c role 1 root" in text
        assert load_graph(text).edges() == [(0, 1), (1, 2)]

    def test_dimacs_keeps_roles(self):
        tree = t5_edge_tree()
        back = load_graph(graph_to_dimacs(tree))
        assert back.edges() == tree.edges()
        assert dict(back.role_labels) == dict(tree.role_labels)
        assert back.vertices_with_role("beta") == tree.vertices_with_role("beta")

    def test_dimacs_rejects_bad_role_line(self):
        with pytest.raises(InvalidInstanceError):
            load_graph("p edge 2 1\nc role x root\ne 1 2\n")

    def test_dimacs_warns_on_edge_count(self):
        result = parse_dimacs("p edge 3 5\ne 1 2\n")
        assert result.is_valid
        assert result.warnings

    @pytest.mark.parametrize("text", ["e 1 2\n", "p edge 3 1\nx 1 2\n", "c only a comment\n", "p edge 2 1\ne 1 3\n"])
    def test_dimacs_errors(self, text):
        with pytest.raises(InvalidInstanceError):
            load_graph(text)

    def test_dot(self):
        text = graph_to_dot(Graph.from_edges(2, [(0, 1)], {1: 'say "hi"'}))
        assert "1 -- 2;" in text
        assert 'label="say \\"hi\\""' in text
        assert text.splitlines()[1] == '  schema_version="1.0";'

    def test_write_graph(self):
        assert write_graph(P4, "dimacs").splitlines()[1] == "p edge 4 3"
        with pytest.raises(ValueError):
            write_graph(P4, "graphml")

    def test_dump_json_is_deterministic(self):
        assert dump_json({"b": 1, "a": 2}) == dump_json({"a": 2, "b": 1})


class TestCertificateFiles:
    def test_loads_one_based_classes(self):
        cert = load_certificate('{"kind": "grundy", "classes": [[1, 4], [3], [2]]}', 4)
        assert cert == WitnessCertificate(WitnessKind.GRUNDY, ((0, 3), (2,), (1,)))

    def test_loads_centers_from_envelope(self):
        text = dump_json({"result": {"certificate": {"kind": "b_coloring", "classes": [[1], [2]], "centers": [1, 2]}}})
        cert = load_certificate(text, 2)
        assert cert.kind == WitnessKind.B_COLORING
        assert cert.centers == (0, 1)

    @pytest.mark.parametrize(
        "text",
        [
            '{"kind": "grundy", "classes": [[1], [1]]}',
            '{"kind": "grundy", "classes": [[5]]}',
            '{"kind": "rainbow", "classes": [[1]]}',
            '{"result": {"certificate": null}}',
            "not json",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(MalformedCertificateError):
            load_certificate(text, 4)


class TestInstanceFiles:
    def test_mis_round_trip(self):
        inst = MisInstance(P4, ((0, 1), (2, 3)))
        data = instance_to_json(inst)
        assert data["parts"] == [[1, 2], [3, 4]]
        loaded = load_instance(dump_json(data))
        assert loaded.parts == inst.parts
        solution = load_solution(dump_json(solution_to_json((0, 3), inst)), loaded)
        assert solution == (0, 3)

    def test_gridtiling_solution(self):
        inst, solution = random_gridtiling_yes_instance(2, 3, 2, seed=1)
        loaded = load_instance(dump_json(instance_to_json(inst)))
        assert loaded.cells == inst.cells
        assert load_solution(dump_json(solution_to_json(solution, inst)), loaded) == solution

    def test_rejects_unknown_type(self):
        with pytest.raises(InvalidInstanceError):
            load_instance('{"type": "sat"}')

    def test_rejects_invalid_partition(self):
        data = instance_to_json(MisInstance(P4, ((0, 1), (2, 3))))
        data["parts"] = [[1, 2], [2, 3, 4]]
        with pytest.raises(InvalidInstanceError):
            load_instance(dump_json(data))

    def test_solution_kind_must_match(self):
        inst = MisInstance(P4, ((0, 1), (2, 3)))
        with pytest.raises(InvalidInstanceError):
            load_solution('{"kind": "gridtiling", "pairs": []}', inst)
