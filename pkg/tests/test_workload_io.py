import pytest

from winoconv.cost_model import LayerShape
from winoconv.workload import (
    Workload,
    WorkloadLayer,
    format_workload,
    load_workload,
    parse_workload,
    save_workload,
)


def test_builtin_vgg16d():
    w = load_workload("vgg16d")
    assert w.name == "vgg16d"
    assert len(w.layers) == 13
    assert w.groups == ("conv1", "conv2", "conv3", "conv4", "conv5")
    assert [len(w.group_layers(g)) for g in w.groups] == [2, 2, 3, 3, 3]
    first, last = w.layers[0].shape, w.layers[-1].shape
    assert (first.h, first.c, first.k) == (224, 3, 64)
    assert (last.h, last.c, last.k) == (14, 512, 512)
    assert all(l.shape.r == 3 and l.pad == 1 and l.shape.n == 1 for l in w.layers)


def test_round_trip(tmp_path):
    w = load_workload("vgg16d")
    path = tmp_path / "net.workload"
    save_workload(w, path)
    assert load_workload(path) == w

    one = Workload("mini", (WorkloadLayer(LayerShape(2, 8, 6, 3, 4, 3), 1, "only"),))
    text = format_workload(one)
    assert parse_workload(text) == one


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="<string>: missing 'workload"):
        parse_workload("")
    with pytest.raises(ValueError, match=":2: expected 'layer"):
        parse_workload("workload x\nlayer 1 2 3\n")
    with pytest.raises(ValueError, match=":1: 'layer' before"):
        parse_workload("layer 1 8 8 1 1 3 1 g\n")
    with pytest.raises(ValueError, match=":2: non-integer"):
        parse_workload("workload x\nlayer 1 8 8 one 1 3 1 g\n")
    with pytest.raises(ValueError, match=":3: unknown record"):
        parse_workload("workload x\nlayer 1 8 8 1 1 3 1 g\nbogus\n")
    with pytest.raises(ValueError, match="duplicate 'workload'"):
        parse_workload("workload x\nworkload y\n")
    with pytest.raises(ValueError, match="not contiguous"):
        parse_workload(
            "workload x\n"
            "layer 1 8 8 1 1 3 1 a\n"
            "layer 1 8 8 1 1 3 1 b\n"
            "layer 1 8 8 1 1 3 1 a\n"
        )


def test_comments_and_blank_lines():
    w = parse_workload(
        "# a comment\n"
        "workload tiny  # trailing comment\n"
        "\n"
        "layer 1 8 8 2 4 3 1 g1\n"
    )
    assert w.name == "tiny" and len(w.layers) == 1


def test_unknown_builtin():
    with pytest.raises(ValueError, match="unknown workload"):
        load_workload("no_such_net")


def test_invalid_layer_fields():
    with pytest.raises(ValueError, match=":2: .*must be >= 1"):
        parse_workload("workload x\nlayer 0 8 8 1 1 3 1 g\n")
    with pytest.raises(ValueError, match="pad"):
        WorkloadLayer(LayerShape(1, 8, 8, 1, 1, 3), -1, "g")
