import hashlib

import numpy as np
import pytest

from arnoldi_tikhonov.errors import MatrixFormatError
from arnoldi_tikhonov.mmio import load_matrix, load_vector, save_matrix
from arnoldi_tikhonov.problems import phillips_nystrom


def test_round_trip_random(tmp_path, rng):
    M = rng.standard_normal((10, 10)) * 10.0 ** rng.integers(-300, 300, (10, 10))
    save_matrix(tmp_path / "m.mtx", M)
    np.testing.assert_array_equal(load_matrix(tmp_path / "m.mtx"), M)


def test_round_trip_rectangular_and_vector(tmp_path, rng):
    M = rng.standard_normal((3, 7))
    save_matrix(tmp_path / "r.mtx", M)
    np.testing.assert_array_equal(load_matrix(tmp_path / "r.mtx"), M)
    v = rng.standard_normal(5)
    save_matrix(tmp_path / "v.mtx", v)
    np.testing.assert_array_equal(load_vector(tmp_path / "v.mtx"), v)
    with pytest.raises(MatrixFormatError):
        load_vector(tmp_path / "r.mtx")


def test_column_major_layout(tmp_path):
    save_matrix(tmp_path / "m.mtx", [[1.0, 2.0], [3.0, 4.0]])
    lines = (tmp_path / "m.mtx").read_text().splitlines()
    assert lines == ["%%MatrixMarket matrix array real general", "2 2", "1", "3", "2", "4"]


def test_comments_are_skipped(tmp_path):
    (tmp_path / "c.mtx").write_text("%%MatrixMarket matrix array real general\n% note\n2 1\n1.5\n-2\n")
    np.testing.assert_array_equal(load_matrix(tmp_path / "c.mtx"), [[1.5], [-2.0]])


@pytest.mark.parametrize(
    "text, line",
    [
        ("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2\n", 1),
        ("garbage\n1 1\n2\n", 1),
        ("", 1),
        ("%%MatrixMarket matrix array real general\n2 x\n", 2),
        ("%%MatrixMarket matrix array real general\n2 1\n1.0\nabc\n", 4),
        ("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n", 6),
    ],
)
def test_parse_errors_name_line(tmp_path, text, line):
    path = tmp_path / "bad.mtx"
    path.write_text(text)
    with pytest.raises(MatrixFormatError) as info:
        load_matrix(path)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_matrix(tmp_path / "nope.mtx")


def test_large_phillips_byte_stable(tmp_path):
    A = phillips_nystrom(4000).A
    digests = []
    for name in ("a.mtx", "b.mtx"):
        save_matrix(tmp_path / name, A)
        digests.append(hashlib.sha256((tmp_path / name).read_bytes()).hexdigest())
    assert digests[0] == digests[1]
    np.testing.assert_array_equal(load_matrix(tmp_path / "a.mtx"), A)
