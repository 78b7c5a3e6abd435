import json
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onebit_cdg.encoder import SignMeasurements, encode, pack, payload_size, sign_fn, unpack
from onebit_cdg.errors import FormatError, InvalidArgumentError
from onebit_cdg.transform import SensingEnsemble, build_ensemble
from oracles import sign_vector


def identity_ensemble(n, seed=0):
    eye = np.eye(n)
    return SensingEnsemble(n=n, m=n, seed=seed, phi=eye, psi=eye.copy(), a=eye.copy())


@pytest.mark.parametrize("y, expected", [(0.0, 1), (-0.0, 1), (-3.7, -1), (1e-300, 1), (5e-324, 1)])
def test_sign_fn(y, expected):
    assert sign_fn(y) == expected


@pytest.mark.parametrize("y", [float("nan"), float("inf"), float("-inf")])
def test_sign_fn_rejects_non_finite(y):
    with pytest.raises(InvalidArgumentError):
        sign_fn(y)


def test_encode_identity_hand_values():
    sm = encode(np.array([3.0, -4.0]), identity_ensemble(2))
    assert sm.b.tolist() == [1, -1]
    assert sm.norm_x == 5.0


def test_encode_zero_reading():
    sm = encode(np.zeros(10), build_ensemble(10, 6, 3))
    assert sm.b.tolist() == [1] * 6
    assert sm.norm_x == 0.0


def test_encode_matches_sign_oracle():
    ens = build_ensemble(30, 20, 8)
    x = np.random.default_rng(1).standard_normal(30)
    sm = encode(x, ens)
    assert np.array_equal(sm.b, sign_vector(ens.phi @ x))
    assert (sm.n, sm.m, sm.seed) == (30, 20, 8)


def test_encode_positive_scale_invariance():
    ens = build_ensemble(40, 30, 2)
    rng = np.random.default_rng(5)
    for _ in range(100):
        x = rng.standard_normal(40)
        alpha = float(rng.uniform(1e-3, 1e3))
        sm, sm2 = encode(x, ens), encode(alpha * x, ens)
        assert np.array_equal(sm.b, sm2.b)
        assert sm2.norm_x == pytest.approx(alpha * sm.norm_x, rel=1e-6)


def test_encode_scaling_by_two_doubles_norm():
    ens = build_ensemble(12, 7, 4)
    x = np.linspace(-1, 2, 12)
    sm, sm2 = encode(x, ens), encode(2 * x, ens)
    assert np.array_equal(sm.b, sm2.b)
    assert sm2.norm_x == 2 * sm.norm_x


def test_encode_errors():
    ens = build_ensemble(5, 3, 1)
    with pytest.raises(InvalidArgumentError):
        encode(np.ones(4), ens)
    with pytest.raises(InvalidArgumentError):
        encode(np.array([1.0, np.nan, 0, 0, 0]), ens)


def test_sign_measurements_invariants():
    with pytest.raises(InvalidArgumentError):
        SignMeasurements(b=np.array([1, 0, -1]), norm_x=1.0, n=3, m=3, seed=0)
    with pytest.raises(InvalidArgumentError):
        SignMeasurements(b=np.array([1, -1]), norm_x=1.0, n=3, m=3, seed=0)
    with pytest.raises(InvalidArgumentError):
        SignMeasurements(b=np.array([1]), norm_x=-1.0, n=3, m=1, seed=0)


def _sm(b, norm_x=1.5, n=10, seed=3, source_id=None):
    b = np.array(b, dtype=np.int8)
    return SignMeasurements(b=b, norm_x=norm_x, n=n, m=len(b), seed=seed, source_id=source_id)


def _payload(blob):
    return blob[blob.index(b"\n") + 1:]


def test_pack_all_ones_byte():
    assert _payload(pack(_sm([1] * 8))) == b"\xff"


def test_pack_hand_bits():
    assert _payload(pack(_sm([1, -1, 1]))) == b"\x05"


def test_pack_header_layout():
    blob = pack(_sm([1, -1, 1], norm_x=5.0, n=10, seed=7, source_id="node-1"))
    header = json.loads(blob[: blob.index(b"\n")])
    assert header == {"n": 10, "m": 3, "seed": 7, "norm_x": "40a00000", "source_id": "node-1"}
    assert struct.unpack(">f", bytes.fromhex(header["norm_x"]))[0] == 5.0


def test_payload_sizes_full_window():
    sm = encode(np.linspace(20, 21, 250), build_ensemble(250, 250, 1))
    blob = pack(sm)
    assert len(_payload(blob)) == payload_size(250) == 32
    assert len(blob) == blob.index(b"\n") + 1 + 32


@given(
    st.lists(st.sampled_from([1, -1]), min_size=1, max_size=70),
    st.floats(0, 1e30, allow_nan=False),
    st.integers(0, 2**64 - 1),
    st.one_of(st.none(), st.text(max_size=12)),
)
@settings(max_examples=200, deadline=None)
def test_pack_round_trip(b, norm_x, seed, source_id):
    sm = _sm(b, norm_x=norm_x, seed=seed, source_id=source_id)
    assert unpack(pack(sm)) == sm


def test_norm_is_single_precision():
    sm = _sm([1], norm_x=0.1)
    assert sm.norm_x == float(np.float32(0.1))


@pytest.mark.parametrize(
    "blob",
    [
        b'{"n":10,"m":3,"seed":3,"norm_x":"3fc00000","source_id":null}',  # no newline
        b'{"n":10,"m":3,"seed":3,"norm_x":"3fc00000"}\n\x05',  # missing key
        b'{"n":10,"m":3,"seed":3,"norm_x":"3fc00000","source_id":null,"x":1}\n\x05',
        b'{"n":10,"m":3,"seed":3,"norm_x":1.5,"source_id":null}\n\x05',
        b'{"n":10,"m":3,"seed":3,"norm_x":"zzzzzzzz","source_id":null}\n\x05',
        b'{"n":10,"m":3,"seed":-3,"norm_x":"3fc00000","source_id":null}\n\x05',
        b'{"n":10,"m":3,"seed":3,"norm_x":"7f800000","source_id":null}\n\x05',
        b'{"n":10,"m":3,"seed":3,"norm_x":"bf800000","source_id":null}\n\x05',
        b'{"n":10,"m":3,"seed":3,"norm_x":"3fc00000","source_id":null}\n',  # truncated
        b'{"n":10,"m":3,"seed":3,"norm_x":"3fc00000","source_id":null}\n\x0d',  # pad bit set
        b'{"n":10,"m":3,"seed":3,"norm_x":"3fc00000","source_id":null}\n\x05\x00',  # trailing
        b'not json\n\x05',
        b'[1,2]\n\x05',
    ],
)
def test_unpack_rejects_malformed(blob):
    with pytest.raises(FormatError):
        unpack(blob)


def test_unpack_valid_hand_record():
    sm = unpack(b'{"m":3,"n":10,"norm_x":"3fc00000","seed":3,"source_id":null}\n\x05')
    assert sm.b.tolist() == [1, -1, 1]
    assert sm.norm_x == 1.5
