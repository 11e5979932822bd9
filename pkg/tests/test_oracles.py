import numpy as np
import pytest

from cweno import oracles
from cweno.mesh import Grid1D, Grid2D

SOD = ((1.0, 0.0, 2.5), (0.125, 0.0, 0.25))
LAX = ((0.445, 0.311, 8.928), (0.5, 0.0, 1.4275))
GAMMA = 1.4


def u0(x):
    return 1.0 + 0.5 * np.sin(np.pi * x)


def du0(x):
    return 0.5 * np.pi * np.cos(np.pi * x)


def test_advection_exact_examples():
    x = np.linspace(-1, 1, 11)
    def s(x):
        return np.sin(np.pi * x)

    np.testing.assert_allclose(oracles.advection_exact(s, 1.0, x, 2.0, (-1, 1)), s(x), atol=1e-14)
    np.testing.assert_allclose(oracles.advection_exact(s, 1.0, x, 0.5, (-1, 1)), s(x - 0.5), atol=1e-14)
    X, Y = np.meshgrid(np.linspace(0, 1, 5), np.linspace(0, 1, 5), indexing="ij")

    def f(x, y):
        return np.sin(np.pi * x) ** 2 * np.cos(2 * np.pi * y)

    got = oracles.advection_exact(f, (1.0, 1.0), (X, Y), 1.0, ((0, 1), (0, 1)))
    np.testing.assert_allclose(got, f(X, Y), atol=1e-14)


def test_breaking_time():
    assert oracles.burgers_breaking_time(du0, (-1, 1)) == pytest.approx(2 / np.pi, rel=1e-8)


def test_burgers_examples():
    x = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(oracles.burgers_exact_preshock(u0, du0, x, 0.0), u0(x), rtol=1e-15)
    one = oracles.burgers_exact_preshock(lambda x: 1.0 + 0 * x, lambda x: 0 * x, x, 0.3, np.inf)
    np.testing.assert_allclose(one, 1.0)


def test_burgers_root_against_bracketing_scan():
    t, x = 0.33, 0.5
    got = float(oracles.burgers_exact_preshock(u0, du0, np.array([x]), t)[0])

    def residual(u):
        return u - u0(x - u * t)

    assert abs(residual(got)) < 1e-13
    # independent oracle: scan [0.5, 1.5] for the sign change of the residual
    grid = np.linspace(0.5, 1.5, 1_000_001)
    r = residual(grid)
    crossings = np.nonzero(np.sign(r[:-1]) != np.sign(r[1:]))[0]
    assert len(crossings) == 1
    k = crossings[0]
    assert grid[k] - 1e-12 <= got <= grid[k + 1] + 1e-12


def test_burgers_implicit_relation_random_points():
    rng = np.random.default_rng(11)
    x = rng.uniform(-1, 1, 10_000)
    t_break = 2 / np.pi
    for t in rng.uniform(0, 0.99 * t_break, 5):
        u = oracles.burgers_exact_preshock(u0, du0, x, t)
        assert np.max(np.abs(u - u0(x - u * t))) < 1e-12


def test_burgers_rejects_post_shock():
    with pytest.raises(oracles.ValidityError):
        oracles.burgers_exact_preshock(u0, du0, np.array([0.0]), 0.7)


# ---------------------------------------------------------------- Riemann


def _primitive(q):
    rho, m, E = q[..., 0], q[..., 1], q[..., 2]
    u = m / rho
    return rho, u, (GAMMA - 1) * (E - 0.5 * rho * u * u)


def test_equal_states_constant():
    xi = np.linspace(-3, 3, 50)
    got = oracles.euler_riemann_exact(SOD[0], SOD[0], GAMMA, xi)
    np.testing.assert_allclose(got, np.tile(SOD[0], (50, 1)), atol=1e-12)


def test_sod_star_state():
    star = oracles.riemann_star_state(*SOD, GAMMA)
    # widely tabulated values for this configuration
    assert star.p == pytest.approx(0.30313, abs=1e-5)
    assert star.u == pytest.approx(0.92745, abs=1e-5)
    assert star.rho_left == pytest.approx(0.42632, abs=1e-5)
    assert star.rho_right == pytest.approx(0.26557, abs=1e-5)


@pytest.mark.parametrize("data", [SOD, LAX])
def test_star_pressure_self_consistent(data):
    """Substitute p* back into both wave relations."""
    star = oracles.riemann_star_state(*data, GAMMA)
    (rl, ul, pl), (rr, ur, pr) = (_primitive(np.array(s, float)) for s in data)

    def wave(p, rho, pk):
        if p > pk:
            a, b = 2 / ((GAMMA + 1) * rho), (GAMMA - 1) / (GAMMA + 1) * pk
            return (p - pk) * np.sqrt(a / (p + b))
        c = np.sqrt(GAMMA * pk / rho)
        return 2 * c / (GAMMA - 1) * ((p / pk) ** ((GAMMA - 1) / (2 * GAMMA)) - 1)

    assert abs(wave(star.p, rl, pl) + wave(star.p, rr, pr) + ur - ul) < 1e-12
    assert abs(star.u - (ul - wave(star.p, rl, pl))) < 1e-12


def _jump_conditions(q_left, q_right, speed):
    def flux(q):
        rho, u, p = _primitive(q)
        return np.array([rho * u, rho * u * u + p, u * (q[2] + p)])

    return np.abs(flux(q_right) - flux(q_left) - speed * (q_right - q_left)).max()


@pytest.mark.parametrize("data", [SOD, LAX])
def test_rankine_hugoniot_across_shock(data):
    star = oracles.riemann_star_state(*data, GAMMA)
    (rr, ur, pr) = _primitive(np.array(data[1], float))
    cr = np.sqrt(GAMMA * pr / rr)
    s = ur + cr * np.sqrt((GAMMA + 1) / (2 * GAMMA) * star.p / pr + (GAMMA - 1) / (2 * GAMMA))
    q = oracles.euler_riemann_exact(*data, GAMMA, np.array([s - 1e-9, s + 1e-9]))
    assert _jump_conditions(q[0], q[1], s) < 1e-10
    # the contact carries no mass flux relative to its own motion
    qc = oracles.euler_riemann_exact(*data, GAMMA, np.array([star.u - 1e-9, star.u + 1e-9]))
    assert _jump_conditions(qc[0], qc[1], star.u) < 1e-7


@pytest.mark.parametrize("data", [SOD, LAX])
def test_riemann_invariants_across_rarefaction(data):
    star = oracles.riemann_star_state(*data, GAMMA)
    rl, ul, pl = _primitive(np.array(data[0], float))
    cl = np.sqrt(GAMMA * pl / rl)
    cs = cl * (star.p / pl) ** ((GAMMA - 1) / (2 * GAMMA))
    xi = np.linspace(ul - cl, star.u - cs, 101)
    rho, u, p = _primitive(oracles.euler_riemann_exact(*data, GAMMA, xi))
    c = np.sqrt(GAMMA * p / rho)
    entropy = p / rho**GAMMA
    invariant = u + 2 * c / (GAMMA - 1)
    assert np.ptp(entropy) < 1e-10
    assert np.ptp(invariant) < 1e-10


def test_self_similarity():
    x = np.linspace(-0.4, 0.4, 101)
    a = oracles.euler_riemann_exact(*LAX, GAMMA, x / 0.1)
    b = oracles.euler_riemann_exact(*LAX, GAMMA, (2 * x) / 0.2)
    np.testing.assert_array_equal(a, b)


def test_lax_mass_balance():
    """Integral of each conserved quantity over [-L, L] changes by t times the boundary flux jump."""
    L, t = 1.0, 0.16
    star = oracles.riemann_star_state(*LAX, GAMMA)
    rl, ul, pl = _primitive(np.array(LAX[0], float))
    rr, ur, pr = _primitive(np.array(LAX[1], float))
    cl, cr = np.sqrt(GAMMA * pl / rl), np.sqrt(GAMMA * pr / rr)
    cs = cl * (star.p / pl) ** ((GAMMA - 1) / (2 * GAMMA))
    shock = ur + cr * np.sqrt((GAMMA + 1) / (2 * GAMMA) * star.p / pr + (GAMMA - 1) / (2 * GAMMA))
    breaks = sorted([-L, (ul - cl) * t, (star.u - cs) * t, star.u * t, shock * t, L])
    nodes, weights = np.polynomial.legendre.leggauss(20)
    total = np.zeros(3)
    for a, b in zip(breaks[:-1], breaks[1:]):
        x = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        total += 0.5 * (b - a) * weights @ oracles.euler_riemann_exact(*LAX, GAMMA, x / t)

    def flux(q):
        rho, u, p = _primitive(np.array(q, float))
        return np.array([rho * u, rho * u * u + p, u * (q[2] + p)])

    initial = L * (np.array(LAX[0]) + np.array(LAX[1]))
    expected = initial + t * (flux(LAX[0]) - flux(LAX[1]))
    np.testing.assert_allclose(total, expected, rtol=0, atol=1e-8)


def test_vacuum_detected():
    with pytest.raises(oracles.VacuumError):
        oracles.riemann_star_state((1.0, -10.0, 0.4 + 50.0), (1.0, 10.0, 0.4 + 50.0), GAMMA)


# ---------------------------------------------------------------- cell averages


def test_gauss_weights():
    nodes, weights = oracles.gauss_legendre(5, 3)
    assert weights.sum() == pytest.approx(1.0, abs=1e-15)
    assert nodes.min() > -0.5 and nodes.max() < 0.5


def test_exact_cell_averages_examples():
    grid = Grid1D(20, -1, 1)
    const = oracles.exact_cell_averages(lambda t, x: 3.0 + 0 * x, grid, 0.0)
    np.testing.assert_allclose(const.values, 3.0, rtol=1e-15)
    lin = oracles.exact_cell_averages(lambda t, x: 2 * x - 1, grid, 0.0)
    np.testing.assert_allclose(lin.values[:, 0], 2 * grid.centers() - 1, atol=1e-14)
    sin = oracles.exact_cell_averages(lambda t, x: np.sin(np.pi * x), grid, 0.0)
    np.testing.assert_allclose(sin.values[:, 0], oracles.sin_cell_averages(grid), atol=1e-12)


def test_exact_cell_averages_quadratic():
    grid = Grid2D(6, 4, (0, 1), (-1, 1))
    got = oracles.exact_cell_averages(lambda t, x, y: x * x + 3 * x * y - y * y, grid, 0.0)
    xc, yc = np.meshgrid(*grid.centers(), indexing="ij")
    expected = xc**2 + grid.hx**2 / 12 + 3 * xc * yc - (yc**2 + grid.hy**2 / 12)
    np.testing.assert_allclose(got.values[..., 0], expected, atol=1e-13)


def test_sin4_closed_form():
    grid = Grid1D(16, -1, 1)
    quad = oracles.exact_cell_averages(lambda t, x: np.sin(np.pi * x) ** 4, grid, 0.0, subdivisions=2)
    np.testing.assert_allclose(oracles.sin_cell_averages(grid, power=4), quad.values[:, 0], atol=1e-12)
    with pytest.raises(ValueError):
        oracles.sin_cell_averages(grid, power=2)


def test_validity_window():
    exact = oracles.ExactSolution(lambda t, x: x, valid_until=1.0)
    assert exact(0.5, 2.0) == 2.0
    with pytest.raises(oracles.ValidityError):
        exact(1.5, 2.0)
