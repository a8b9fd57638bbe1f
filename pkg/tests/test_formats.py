import json
import struct

import numpy as np
import pytest

from segloss import (
    IoError,
    MalformedHeader,
    NotADirectory,
    RaggedRows,
    UnexpectedEof,
    UnsupportedMaxval,
    ValueOutOfRange,
    make_mask_field,
)
from segloss.evaluation import evaluate_files
from segloss.formats import (
    build_manifest,
    canonical_json,
    encode_pgm,
    encode_raw_grid,
    format_float,
    parse_csv_grid,
    parse_pgm,
    parse_raw_grid,
    read_float_grid,
    read_pgm,
    report_json,
    write_float_grid,
    write_pgm,
    write_report_json,
)
from segloss.losses import parse_loss_spec


def test_pgm_p5_threshold_rule():
    m = parse_pgm(b"P5\n2 2\n255\n" + bytes([255, 0, 0, 255]))
    assert m.flat() == [1, 0, 0, 1]
    assert parse_pgm(b"P5 3 1 255 " + bytes([127, 128, 200])).flat() == [0, 1, 1]


def test_pgm_p2_with_comments():
    data = b"P2\n# a comment\n3 2 # dims\n255\n0 128 255\n# row\n10 200 127\n"
    m = parse_pgm(data)
    assert m.values.tolist() == [[0, 1, 1], [0, 1, 0]]


def test_pgm_binary_raster_may_contain_hash_and_whitespace_bytes():
    raster = bytes([ord("#"), ord("\n"), 255, 32])
    assert parse_pgm(b"P5\n2 2\n255\n" + raster).flat() == [0, 0, 1, 0]


@pytest.mark.parametrize(
    "data, exc",
    [
        (b"P5\n2 2\n255\n" + bytes([255, 0, 0]), UnexpectedEof),
        (b"P5\n2 2\n255\n", UnexpectedEof),
        (b"P5\n2 2", UnexpectedEof),
        (b"", UnexpectedEof),
        (b"P6\n2 2\n255\n" + bytes(12), MalformedHeader),
        (b"GIF89a", MalformedHeader),
        (b"P5\n2 x\n255\n" + bytes(4), MalformedHeader),
        (b"P5\n0 2\n255\n", MalformedHeader),
        (b"P5\n2 2\n0\n" + bytes(4), MalformedHeader),
        (b"P5\n2 2\n65535\n" + bytes(8), UnsupportedMaxval),
        (b"P2\n2 2\n255\n1 2 3", UnexpectedEof),
        (b"P2\n2 1\n100\n1 101", ValueOutOfRange),
    ],
)
def test_pgm_errors(data, exc):
    with pytest.raises(exc):
        parse_pgm(data)


def test_pgm_writer_format():
    m = make_mask_field(1, 3, [1, 0, 1])
    assert encode_pgm(m) == b"P5\n3 1\n255\n" + bytes([255, 0, 255])


def test_pgm_roundtrip(tmp_path, rng):
    for i in range(100):
        h, w = rng.integers(1, 17, size=2)
        m = make_mask_field(h, w, (rng.random((h, w)) < 0.5).astype(float))
        path = tmp_path / f"m{i}.pgm"
        write_pgm(m, path)
        assert read_pgm(path) == m


def test_csv_grid():
    assert parse_csv_grid("0.5,0.5\n0.5,0.5").tolist() == [[0.5, 0.5], [0.5, 0.5]]
    with pytest.raises(RaggedRows):
        parse_csv_grid("0.1,0.2\n0.1,0.2,0.3\n")
    with pytest.raises(ValueOutOfRange):
        parse_csv_grid("0.1,abc\n")
    with pytest.raises(ValueOutOfRange):
        parse_csv_grid("0.1,nan\n")
    with pytest.raises(MalformedHeader):
        parse_csv_grid("\n\n")


def test_csv_prob_range(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("0.5,1.5\n")
    with pytest.raises(ValueOutOfRange):
        read_float_grid(path)
    assert read_float_grid(path, "distance").values.tolist() == [[0.5, 1.5]]


def test_csv_roundtrip_17_digits(tmp_path, rng):
    v = rng.random((5, 7))
    path = tmp_path / "g.csv"
    write_float_grid(v, path)
    assert np.array_equal(read_float_grid(path).values, v)


def test_csv_integer_formatting(tmp_path):
    path = tmp_path / "d.csv"
    write_float_grid(np.array([[0.0, 1.0, 2.0]]), path)
    assert path.read_text() == "0,1,2\n"


def test_raw_layout():
    data = encode_raw_grid(np.array([[0.5, 0.25]]))
    assert data[:8] == b"SEGLOSSF"
    assert struct.unpack("<II", data[8:16]) == (1, 2)
    assert struct.unpack("<2f", data[16:]) == (0.5, 0.25)


def test_raw_roundtrip_bit_exact(tmp_path, rng):
    for i in range(100):
        h, w = rng.integers(1, 17, size=2)
        v = rng.random((h, w)).astype(np.float32).astype(np.float64)
        path = tmp_path / f"g{i}.slf"
        write_float_grid(v, path)
        back = read_float_grid(path).values
        assert back.astype(np.float32).tobytes() == v.astype(np.float32).tobytes()
        assert path.read_bytes() == encode_raw_grid(back)


@pytest.mark.parametrize(
    "mutate, exc",
    [
        (lambda d: d[:-1], UnexpectedEof),
        (lambda d: d[:10], UnexpectedEof),
        (lambda d: d[:5], UnexpectedEof),
        (lambda d: b"SEGLOSSX" + d[8:], MalformedHeader),
        (lambda d: d + b"\x00", MalformedHeader),
        (lambda d: d[:8] + struct.pack("<II", 0, 2) + d[16:], MalformedHeader),
        (lambda d: d[:16] + struct.pack("<f", 2.0) + d[20:], ValueOutOfRange),
        (lambda d: d[:16] + struct.pack("<f", float("nan")) + d[20:], ValueOutOfRange),
    ],
)
def test_raw_mutations(tmp_path, mutate, exc):
    data = mutate(encode_raw_grid(np.array([[0.5, 0.25]])))
    path = tmp_path / "bad.slf"
    path.write_bytes(data)
    with pytest.raises(exc):
        read_float_grid(path)


def test_parse_raw_rejects_short_magic():
    with pytest.raises(MalformedHeader):
        parse_raw_grid(b"XY")


def test_unknown_grid_extension(tmp_path):
    with pytest.raises(IoError):
        write_float_grid(np.zeros((1, 1)), tmp_path / "g.txt")
    with pytest.raises(IoError):
        read_float_grid(tmp_path / "missing.csv")


def _touch(path):
    path.write_bytes(b"")


def test_manifest_pairs_by_stem(tmp_path):
    pred, truth = tmp_path / "pred", tmp_path / "truth"
    pred.mkdir(), truth.mkdir()
    for name in ("b.slf", "a.slf"):
        _touch(pred / name)
    for name in ("a.pgm", "b.pgm"):
        _touch(truth / name)
    m = build_manifest(pred, truth)
    assert [(p.split("/")[-1], t.split("/")[-1]) for p, t in m.pairs] == [("a.slf", "a.pgm"), ("b.slf", "b.pgm")]
    assert m.warnings == []


def test_manifest_unmatched_is_warning(tmp_path):
    pred, truth = tmp_path / "pred", tmp_path / "truth"
    pred.mkdir(), truth.mkdir()
    _touch(pred / "a.slf")
    _touch(truth / "a.pgm")
    _touch(truth / "c.pgm")
    m = build_manifest(pred, truth)
    assert len(m.pairs) == 1
    assert len(m.warnings) == 1 and "c.pgm" in m.warnings[0]


def test_manifest_empty_and_not_dir(tmp_path):
    (tmp_path / "a").mkdir(), (tmp_path / "b").mkdir()
    assert build_manifest(tmp_path / "a", tmp_path / "b").pairs == []
    _touch(tmp_path / "f")
    with pytest.raises(NotADirectory):
        build_manifest(tmp_path / "f", tmp_path / "b")


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1 / 3)) == 1 / 3
    with pytest.raises(ValueError):
        format_float(float("nan"))


def test_canonical_json_is_sorted_and_typed():
    text = canonical_json({"b": 1.0, "a": [None, True, 2, 1e-7]})
    assert text == '{\n  "a": [\n    null,\n    true,\n    2,\n    9.9999999999999995e-08\n  ],\n  "b": 1.0\n}'
    assert json.loads(text) == {"a": [None, True, 2, 1e-7], "b": 1.0}


def _single_pair(tmp_path, p, y):
    write_float_grid(np.asarray(p, dtype=float), tmp_path / "x.csv")
    write_pgm(make_mask_field(*np.shape(y), y), tmp_path / "x.pgm")
    return [(str(tmp_path / "x.csv"), str(tmp_path / "x.pgm"))]


def test_report_schema_and_determinism(tmp_path):
    pairs = _single_pair(tmp_path, [[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]])
    report = evaluate_files(pairs, [parse_loss_spec("dice"), parse_loss_spec("hausdorff_dt")])
    out = tmp_path / "r.json"
    write_report_json(report, out)
    text = out.read_text()
    assert text.endswith("}\n")
    data = json.loads(text)
    assert set(data) >= {"pairs", "aggregate", "config"}
    pair = data["pairs"][0]
    assert set(pair) == {"pred", "truth", "losses", "metrics", "flags"}
    assert pair["metrics"]["precision"] is None
    assert pair["metrics"]["specificity"] == 1.0
    assert "hausdorff_dt:empty_truth" in pair["flags"]
    assert data["aggregate"]["losses"] == pair["losses"]
    assert data["aggregate"]["metrics"]["dice"] == {"mean": None, "undefined_count": 1}
    assert data["config"]["losses"]["dice"] == {"name": "dice", "params": {"smooth": 1.0}}
    assert data["config"]["threshold"] == 0.5
    assert report_json(evaluate_files(pairs, [parse_loss_spec("dice"), parse_loss_spec("hausdorff_dt")])) == text
