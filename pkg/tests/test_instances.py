import json

import numpy as np
import pytest

from kreincalc import (
    NotNormalError,
    NotPsdError,
    ValidationError,
    build_bundle,
    generate,
    parse_instance,
)
from kreincalc.instances import matrix_from_json, matrix_to_json

from conftest import instance_matrix


class TestMatrixCodec:
    def test_round_trip(self):
        rng = np.random.default_rng(60)
        M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert np.array_equal(matrix_from_json(matrix_to_json(M), "M"), M)

    def test_rejects_malformed(self):
        with pytest.raises(ValidationError):
            matrix_from_json([[1.0, 2.0]], "M")


class TestParse:
    def test_w1_fixture(self, w1):
        assert w1.label == "W1"
        assert w1.pair.p.to_list() == [0.0, 1.0]
        assert w1.pair.q.to_list() == [3.0, -1.0]
        assert w1.searched == ()

    def test_accepts_inline_json(self, w1):
        text = json.dumps(w1.to_json())
        inst = parse_instance(text)
        assert np.allclose(inst.N, w1.N)

    def test_non_hermitian_gram(self):
        data = {
            "J": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]],
            "N": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
        }
        with pytest.raises(ValidationError):
            parse_instance(data)

    def test_non_normal_operator(self):
        data = {
            "J": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
            "N": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]],
        }
        with pytest.raises(NotNormalError):
            parse_instance(data)

    def test_non_definitizing_candidate(self, w1):
        data = w1.to_json()
        data["q"] = [-3.0, 1.0]
        with pytest.raises(NotPsdError):
            parse_instance(data)

    def test_missing_operator(self):
        with pytest.raises(ValidationError):
            parse_instance({"J": [[[1, 0]]]})

    def test_search_when_polynomials_missing(self, w1):
        data = w1.to_json()
        del data["p"]
        del data["q"]
        inst = parse_instance(data)
        assert set(inst.searched) == {"p", "q"}
        assert inst.pair.validate() is None

    def test_tol_overrides(self, w1):
        data = w1.to_json()
        data["tol"] = {"cluster": 1e-5}
        inst = parse_instance(data)
        assert inst.space.tol.cluster == 1e-5


class TestGenerate:
    def test_deterministic_files(self, tmp_path):
        a = generate(7, 5, "diagonal")
        b = generate(7, 5, "diagonal")
        fa, fb = tmp_path / "a.json", tmp_path / "b.json"
        a.save(fa)
        b.save(fb)
        assert fa.read_bytes() == fb.read_bytes()
        assert a.digest() == b.digest()

    def test_distinct_seeds_differ(self):
        assert generate(1, 5, "diagonal").digest() != generate(2, 5, "diagonal").digest()

    def test_jordan_n2_collapses_to_w2(self, w2):
        inst = generate(0, 2, "jordan")
        assert np.array_equal(inst.space.J, w2.space.J)
        assert np.allclose(inst.N, w2.N)
        assert inst.pair.p.to_list() == w2.pair.p.to_list()
        assert inst.pair.q.to_list() == w2.pair.q.to_list()

    def test_profiles_validate_and_embed(self):
        for seed, n, prof in instance_matrix(24):
            inst = generate(seed, n, prof)
            bundle = build_bundle(inst.pair)
            assert bundle.dim_v <= n

    def test_pontryagin_signature(self):
        inst = generate(3, 6, "pontryagin")
        assert inst.space.signature() == (5, 1)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValidationError):
            generate(0, 1, "diagonal")
        with pytest.raises(ValidationError):
            generate(0, 4, "unknown")

    def test_round_trips_through_files(self, tmp_path):
        inst = generate(11, 6, "jordan")
        path = tmp_path / "inst.json"
        inst.save(path)
        again = parse_instance(path)
        assert np.allclose(again.N, inst.N)
        assert again.digest() == inst.digest()
