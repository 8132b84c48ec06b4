import json
from math import comb

import numpy as np
import pytest

from hcrb.errors import ConfigError, DomainError, HypothesisError
from hcrb.model import StatisticalModel, finite_difference_check, validate
from hcrb.models import ModelSpec
from hcrb.models.binomial import (
    BinomialScenario, binomial_builder, binomial_landscape, build_binomial, codewords, thermal_weights,
)
from hcrb.models.magnetometry import (
    MagnetometryScenario, build_magnetometry, collective_spin, depolarize, dicke, magnetometry_builder,
    probe_state, unitary_and_derivatives,
)
from hcrb.simple import simple_bounds
from hcrb.tight import optimize_u

# self-regression pins (theta = 0, g = 0.3), frozen from the first certified run
PINNED_TIGHT = {
    ("ghz", 3): 1.9281214923381593,
    ("ghz3d", 3): 1.974873351285619,
    ("gnu", 4): 2.5448253292478475,
    ("ghz3d", 5): 1.0271450702530978,
}


def test_fully_depolarised_single_qubit():
    for theta in [(0, 0, 0), (0.3, -1.1, 0.4)]:
        m = build_magnetometry(MagnetometryScenario("ghz", 1, 1.0, theta))
        assert np.allclose(m.rho, np.eye(2) / 2)
        # commutators with the identity vanish
        assert all(np.abs(d).max() < 1e-14 for d in m.drho)
        assert not validate(m).derivative_independence


def test_depolarising_is_full_rank_and_trace_preserving():
    for fam, n in [("ghz", 3), ("ghz3d", 2), ("gnu", 4)]:
        psi = probe_state(fam, n)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        rho = depolarize(np.outer(psi, psi.conj()), n, 0.1)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(rho)[0] > 0
    pure = np.outer(probe_state("ghz", 2), probe_state("ghz", 2).conj())
    assert np.linalg.eigvalsh(depolarize(pure, 2, 0.0))[0] == pytest.approx(0.0, abs=1e-15)


def test_single_qubit_depolarising_closed_form():
    rho = np.array([[0.8, 0.3 - 0.1j], [0.3 + 0.1j, 0.2]])
    g = 0.25
    assert np.allclose(depolarize(rho, 1, g), (1 - g) * rho + g * np.eye(2) / 2)


def test_spin_operators_and_dicke_states():
    j = collective_spin(2)
    # [J_x, J_y] = i J_z
    assert np.allclose(j[0] @ j[1] - j[1] @ j[0], 1j * j[2])
    assert np.allclose(np.linalg.eigvalsh(j[2]), [-1, 0, 0, 1])
    d = dicke(4, 2)
    assert np.count_nonzero(d) == comb(4, 2)
    assert np.linalg.norm(d) == pytest.approx(1.0)


def test_ghz3d_at_four_qubits_coincides_with_ghz():
    # the x and y components cancel when n = 4, leaving the ordinary GHZ vector
    assert np.allclose(np.abs(probe_state("ghz3d", 4)), np.abs(probe_state("ghz", 4)))


def test_unitary_derivative_against_finite_differences():
    spins = collective_spin(2)
    for theta in [(0.0, 0.0, 0.0), (0.3, -0.2, 0.5)]:
        u, du = unitary_and_derivatives(theta, spins)
        assert np.allclose(u @ u.conj().T, np.eye(4))
        h = 1e-6
        for a in range(3):
            tp, tm = np.array(theta, float), np.array(theta, float)
            tp[a] += h
            tm[a] -= h
            fd = (unitary_and_derivatives(tp, spins)[0] - unitary_and_derivatives(tm, spins)[0]) / (2 * h)
            assert np.allclose(du[a], fd, atol=1e-8)


@pytest.mark.parametrize("fam,n", [("ghz", 3), ("ghz3d", 3), ("gnu", 4), ("ghz3d", 5)])
def test_magnetometry_models_validate(fam, n):
    b = magnetometry_builder(fam, n, 0.3)
    for theta in ([0.0, 0.0], [0.1, -0.2]):
        m = b(theta)
        diag = validate(m)
        assert diag.full_rank and diag.derivative_independence
        assert finite_difference_check(b, theta, 1e-5) <= 1e-6
    assert optimize_u(b([0.0, 0.0])).lower == pytest.approx(PINNED_TIGHT[(fam, n)], rel=1e-8)


def test_three_field_model_fd():
    b = magnetometry_builder("ghz3d", 2, 0.3, estimate_all_three=True)
    assert b([0.0, 0.0, 0.0]).nparams == 3
    assert finite_difference_check(b, [0.05, 0.1, -0.1], 1e-5) <= 1e-6


def test_magnetometry_configuration_errors():
    with pytest.raises(ConfigError):
        MagnetometryScenario("gnu", 3, 0.1)
    with pytest.raises(ConfigError):
        MagnetometryScenario("ghz", 11, 0.1)
    with pytest.raises(ConfigError):
        MagnetometryScenario("ghz", 2, 1.5)
    with pytest.raises(ConfigError):
        MagnetometryScenario("w", 2, 0.1)


def test_pure_probe_refused_by_full_rank_solvers():
    m = build_magnetometry(MagnetometryScenario("ghz3d", 2, 0.0))
    assert not validate(m).full_rank
    with pytest.raises(HypothesisError):
        optimize_u(m)


def test_codeword_normalisation():
    for n in range(1, 9):
        c0, c1 = codewords(n)
        even = sum(2 ** (-(n - 1)) * comb(n, j) for j in range(0, n + 1, 2))
        assert even == pytest.approx(1.0)
        assert np.dot(c0, c0) == pytest.approx(1.0)
        assert np.dot(c1, c1) == pytest.approx(1.0)
        assert np.dot(c0, c1) == 0.0


def test_thermal_weights_sum_to_one():
    w = thermal_weights(np.arange(2000), 0.1)
    assert w.sum() == pytest.approx(1.0, rel=1e-12)
    assert w[0] == pytest.approx(1 - np.exp(-0.1))


def test_binomial_model_structure():
    s = BinomialScenario(3, 5, -0.8, 0.7, 0.2, 0.1)
    m = build_binomial(s)
    assert m.dim == 7  # n + 1 Fock levels plus the lumped thermal tail
    assert np.linalg.eigvalsh(m.rho)[0] > 0
    assert validate(m).derivative_independence
    # the tail entry carries the thermal weight outside the code support
    tail = s.lambda_th * (1 - thermal_weights(3 * np.arange(6), 0.1).sum())
    assert m.rho[-1, -1].real == pytest.approx(tail)


@pytest.mark.parametrize("lumped", [True, False])
def test_binomial_finite_differences(lumped):
    b = binomial_builder(3, 5, 0.2, 0.1, lumped)
    assert finite_difference_check(b, [-0.8, 0.7], 1e-5) <= 1e-6
    b = binomial_builder(1, 2, 0.01, 1.0, lumped)
    assert finite_difference_check(b, [0.76, 0.7], 1e-5) <= 1e-6


def test_binomial_pole_and_zero_thermalisation():
    with pytest.raises(DomainError):
        build_binomial(BinomialScenario(1, 2, 1.0, 0.3, 0.1, 1.0))
    m = build_binomial(BinomialScenario(1, 2, 0.5, 0.3, 0.0, 1.0))
    assert not validate(m).full_rank
    with pytest.raises(HypothesisError):
        optimize_u(m)


def test_binomial_near_pole_phase_information_vanishes():
    m = build_binomial(BinomialScenario(1, 2, 1 - 1e-10, 0.3, 0.1, 1.0))
    assert np.linalg.norm(m.drho[1]) < 1e-4


def test_binomial_configuration_errors():
    for bad in [dict(G=0), dict(n=0), dict(x=1.5), dict(lambda_th=1.0), dict(beta=0.0)]:
        args = dict(G=1, n=2, x=0.5, phi=0.0, lambda_th=0.1, beta=1.0) | bad
        with pytest.raises(ConfigError):
            BinomialScenario(**args)


def test_landscape_order_and_error_recording():
    pts = binomial_landscape([0.5, 1.0, 0.7], [1], [2], [0.05], [1.0])
    assert [p.scenario.x for p in pts] == [0.5, 1.0, 0.7]
    assert pts[1].error.startswith("DomainError") and pts[1].lower is None
    assert pts[0].certified and pts[2].certified


def test_landscape_argmin_insensitive_to_thermalisation():
    grid = np.round(np.arange(0.60, 0.92, 0.02), 2)
    argmins = []
    for lam in (0.01, 0.05, 0.1, 0.2):
        pts = binomial_landscape(grid, [1], [2], [lam], [0.01], phi=0.7)
        argmins.append(grid[int(np.argmin([p.lower for p in pts]))])
    assert max(argmins) - min(argmins) <= 0.02 + 1e-12


def test_model_spec_round_trip_and_descriptor(tmp_path):
    spec = ModelSpec("binomial", n=5, G=3, x=-0.8, phi=0.7, lambda_th=0.2, beta=0.1)
    assert spec.descriptor() == "binomial[G=3 n=5 x=-0.8 phi=0.7 lambda_th=0.2 beta=0.1]"
    assert ModelSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec
    m = spec.build()
    path = tmp_path / "m.json"
    path.write_text(json.dumps(m.to_dict()))
    back = ModelSpec("custom", path=str(path)).build()
    assert np.array_equal(back.rho, m.rho)
    ghz = ModelSpec("ghz3d", n=2, g=0.3)
    assert ghz.descriptor() == "ghz3d[n=2 g=0.3 theta=0.0/0.0/0.0]"


def test_model_spec_errors(tmp_path):
    with pytest.raises(ConfigError):
        ModelSpec("laser")
    with pytest.raises(ConfigError):
        ModelSpec("ghz", n=2).build()
    with pytest.raises(ConfigError):
        ModelSpec.from_dict({"scenario": "ghz", "colour": 1})
    with pytest.raises(ConfigError):
        ModelSpec("custom", path=str(tmp_path / "missing.json")).build()


def test_binomial_tightness_point_is_exact():
    m = build_binomial(BinomialScenario(3, 5, -0.8, 0.7, 0.2, 0.1))
    s = simple_bounds(m)
    assert s.lower == pytest.approx(s.upper, rel=1e-6)
