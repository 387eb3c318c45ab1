import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from hoggsearch.hogg_search import run_search_density
from hoggsearch.nmr_sim import ALL_CONVENTIONS, Conventions
from hoggsearch.sat_core import parse_formula
from hoggsearch.tomography import (
    TomographyDataset,
    design_matrix,
    effective_pure,
    forward_signals,
    max_spurious,
    modulus_table,
    observability,
    readout_settings,
    reconstruct,
    simulate_dataset,
    table_csv,
)

from .conftest import random_hermitian

RHO_M2 = run_search_density(parse_formula("1, 2"))
RHO_M1 = run_search_density(parse_formula("2"))


def traceless(rho):
    return rho - np.trace(rho) / 4 * np.eye(4)


def test_settings_order():
    s = readout_settings()
    assert len(s) == 9 and len(set(s)) == 9
    assert s[0] == ("E", "E") and s[1] == ("E", "x") and s[3] == ("x", "E") and s[-1] == ("y", "y")


def test_diagonal_gives_no_lines():
    np.testing.assert_allclose(forward_signals(np.diag([1, 2, 3, 4]), ("E", "E")), 0)
    for s in readout_settings():
        np.testing.assert_allclose(forward_signals(np.eye(4), s), 0, atol=1e-15)


@pytest.mark.parametrize("sign, expected", [(-1, -0.5j), (1, 0.5j)])
def test_excited_spin_one_line(sign, expected):
    rho = np.diag([0, 0, 0, 1]).astype(complex)
    lines = forward_signals(rho, ("x", "E"), Conventions(sign, -1))
    np.testing.assert_allclose(lines, [0, expected, 0, 0], atol=1e-15)


def test_forward_rejects_shape():
    with pytest.raises(ValueError):
        forward_signals(np.eye(2), ("E", "E"))


@pytest.mark.parametrize("c", ALL_CONVENTIONS, ids=lambda c: c.label())
def test_rank_deficiency_is_only_the_trace(c):
    assert design_matrix(c).shape == (72, 16)
    obs = observability(c)
    assert obs.rank == 15
    assert obs.only_trace_unobserved
    np.testing.assert_allclose(np.abs(obs.null_space[0]), np.eye(4) / 2, atol=1e-9)


def test_roundtrip_random(rng):
    for _ in range(100):
        rho = random_hermitian(4, rng)
        data = simulate_dataset(rho, 0.0, 0)
        np.testing.assert_allclose(reconstruct(data), traceless(rho), atol=1e-10)
        assert np.linalg.norm(reconstruct(data, trace=np.trace(rho).real) - rho) <= 1e-8


def test_roundtrip_paper_states():
    for rho in (RHO_M2, RHO_M1):
        data = simulate_dataset(rho)
        assert np.linalg.norm(effective_pure(reconstruct(data)) - rho) <= 1e-8
        assert np.linalg.norm(reconstruct(data, trace=1.0) - rho) <= 1e-8


def test_zero_dataset():
    data = TomographyDataset(tuple(readout_settings()), np.zeros((9, 4), dtype=complex))
    np.testing.assert_array_equal(reconstruct(data), np.zeros((4, 4)))


def test_reconstruction_is_linear(rng):
    a, b = random_hermitian(4, rng), random_hermitian(4, rng)
    da, db = simulate_dataset(a), simulate_dataset(b)
    mixed = reconstruct(2.5 * da + (-0.75) * db)
    np.testing.assert_allclose(mixed, 2.5 * reconstruct(da) - 0.75 * reconstruct(db), atol=1e-12)


def test_output_hermitian_under_noise():
    rho = reconstruct(simulate_dataset(RHO_M1, 0.1, 7))
    np.testing.assert_array_equal(rho, rho.conj().T)


def test_noise_seeded():
    a, b = simulate_dataset(RHO_M1, 0.05, 11), simulate_dataset(RHO_M1, 0.05, 11)
    np.testing.assert_array_equal(a.lines, b.lines)
    assert not np.array_equal(a.lines, simulate_dataset(RHO_M1, 0.05, 12).lines)
    np.testing.assert_array_equal(simulate_dataset(RHO_M1, 0.0, 5).lines, simulate_dataset(RHO_M1).lines)


def test_noise_validation():
    with pytest.raises(ValueError):
        simulate_dataset(RHO_M1, -0.1, 0)
    with pytest.raises(ValueError):
        simulate_dataset(np.triu(np.ones((4, 4))), 0.0, 0)


def test_reconstruct_needs_full_dataset():
    data = simulate_dataset(RHO_M1)
    partial = TomographyDataset(data.settings[:8], data.lines[:8])
    with pytest.raises(ValueError):
        reconstruct(partial)


def test_noisy_error_bounded_and_monotone():
    medians = []
    for sigma in (0.01, 0.05, 0.1):
        errs = [np.linalg.norm(reconstruct(simulate_dataset(RHO_M1, sigma, s)) - traceless(RHO_M1)) for s in range(100)]
        # line scale is 1/2 here; error stays within a few noise widths
        assert np.median(errs) < 4 * sigma
        medians.append(np.median(errs))
    assert medians[0] < medians[1] < medians[2]


def test_modulus_tables():
    t2 = modulus_table(RHO_M2)
    mask = np.zeros((4, 4), dtype=bool)
    mask[3, 3] = True
    assert abs(t2[3, 3] - 1) < 1e-12 and np.all(t2[~mask] < 1e-12)
    t1 = modulus_table(RHO_M1)
    support = [(1, 1), (1, 3), (3, 1), (3, 3)]
    for i, j in support:
        assert abs(t1[i, j] - 0.5) < 1e-12
    t1[tuple(zip(*support))] = 0
    assert np.all(t1 < 1e-12)
    np.testing.assert_array_equal(modulus_table(np.zeros((4, 4))), 0)


def test_max_spurious_noiseless_is_zero():
    assert max_spurious(effective_pure(reconstruct(simulate_dataset(RHO_M1))), RHO_M1) < 1e-12


def test_dataset_serialization():
    data = simulate_dataset(RHO_M1, 0.05, 3)
    payload = json.loads(json.dumps(data.to_json()))
    schema = json.loads(resources.files("hoggsearch").joinpath("schemas/dataset.schema.json").read_text())
    jsonschema.validate(payload, schema)
    back = TomographyDataset.from_json(payload)
    np.testing.assert_array_equal(back.lines, data.lines)
    assert back.settings == data.settings and back.seed == 3
    rows = data.to_csv().splitlines()
    assert rows[0] == "setting_id,setting,line_id,line,re,im"
    assert len(rows) == 1 + 36
    assert rows[1].startswith("0,E1E2,0,spin1_partner0,")


def test_table_csv():
    rows = table_csv(modulus_table(RHO_M2)).splitlines()
    assert rows[0] == "index,0,1,2,3"
    last = rows[4].split(",")
    assert last[0] == "3" and abs(float(last[4]) - 1) < 1e-12
    assert all(float(x) < 1e-12 for x in rows[1].split(",")[1:])
