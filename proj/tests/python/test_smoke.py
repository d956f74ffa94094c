"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import spinrep


@pytest.fixture(scope="module")
def dom():
    return spinrep.Domain(-1, 1, -1, 1, 0.05)


def grids(dom):
    x = np.linspace(dom.x_min, dom.x_max, dom.nx)
    y = np.linspace(dom.y_min, dom.y_max, dom.ny)
    X, Y = np.meshgrid(x, y)  # shape (ny, nx)
    return X + 1j * Y


def test_rot3_pinned_value():
    u0 = (0.5, 0.5, -0.5, 0.5)
    out = spinrep.rot3(u0, (0.0, 0.0, 1.0))
    assert np.allclose(out, (0.0, -1.0, 0.0), atol=1e-14)


def test_segre_null_identity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p1, p2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        z = np.array(spinrep.segre(p1, p2))
        assert abs((z * z).sum()) < 1e-12 * (1 + (abs(p1) ** 2 + abs(p2) ** 2) ** 2)


def test_plane_immersion(dom):
    z = grids(dom)
    psi1 = np.ones_like(z)
    psi2 = np.zeros_like(z)
    out = spinrep.immerse_r3(dom, psi1, psi2)
    pts = out["points"]
    assert pts.shape == (dom.ny, dom.nx, 3)
    X, Y = z.real, z.imag
    assert np.allclose(pts[..., 0], -Y / 2, atol=1e-12)
    assert np.allclose(pts[..., 1], -X / 2, atol=1e-12)
    assert np.allclose(pts[..., 2], 0, atol=1e-12)
    assert out["closedness"]["max"] < 1e-13


def test_enneper_minimal_and_roundtrip(dom):
    z = grids(dom)
    psi1, psi2 = spinrep.spinor_from_weierstrass(dom, z, np.ones_like(z))
    out = spinrep.immerse_r3(dom, psi1, psi2)
    H = spinrep.mean_curvature_r3(dom, out["points"])
    assert np.abs(H[2:-2, 2:-2]).max() < 5e-3

    # the points round trip through plain arrays, so extraction differentiates
    # the mesh itself; the recovery error is O(h^2) at this coarse spacing
    q1, q2 = spinrep.induced_spinor(dom, out["points"])
    sign = 1.0 if abs(q1[0, 0] - psi1[0, 0]) < abs(q1[0, 0] + psi1[0, 0]) else -1.0
    err = max(np.abs(sign * q1 - psi1)[1:-1, 1:-1].max(),
              np.abs(sign * q2 - psi2)[1:-1, 1:-1].max())
    assert err < 5e-3

    back = spinrep.immerse_r3(dom, q1, q2)
    assert spinrep.congruence_rms(dom, back["points"], out["points"]) < 5e-3


def test_potential_of_holomorphic_data(dom):
    z = grids(dom)
    out = spinrep.potential_from_spinor(dom, np.ones_like(z), np.conj(z))
    assert np.abs(out["U"]).max() < 1e-10


def test_nil3_generated_surface(dom):
    out = spinrep.generate_nil3(dom, tau=0.5)
    assert out["points"].shape == (dom.ny, dom.nx, 3)
    lam = out["lambda"]
    assert lam.max() - lam.min() > 0.05  # genuinely non-constant tilt


def test_dbar_manufactured(dom):
    z = grids(dom)
    rhs = 2 * np.conj(z)
    w = spinrep.dbar_solve(dom, rhs)
    # discrete d/dzbar of the solution reproduces the right-hand side
    wx = np.gradient(w, dom.h, axis=1)
    wy = np.gradient(w, dom.h, axis=0)
    res = 0.5 * (wx + 1j * wy) - rhs
    assert np.abs(res[2:-2, 2:-2]).max() < 5e-3


def test_kt_graph(dom):
    z = grids(dom)
    one = np.ones_like(z)
    zero = np.zeros_like(z)
    out = spinrep.kt_immerse(dom, one, zero, one, z)
    pts = out["points"]
    assert pts.shape == (dom.ny, dom.nx, 4)
    # the first complex slot is z - z(base), the second z^2/2 - const
    w = pts[..., 0] + 1j * pts[..., 1]
    target = z - z[dom.ny // 2, dom.nx // 2]
    assert np.abs(w - target).max() < 1e-10
    assert out["integrability"]["max"] < 1e-10


def test_builtins_and_job():
    names = spinrep.builtin_names()
    assert "enneper" in names and "clifford-torus" in names
    ds = spinrep.builtin("enneper", h=0.1)
    assert ds["ambient"] == "r3"
    assert ds["psi1"].shape == (ds["domain"].ny, ds["domain"].nx)

    code = spinrep.run_job_json(
        '{"job": "verify", "source": {"builtin": "vertical-plane"},'
        ' "domain": {"h": 0.1}, "out": {"report": "pyjob_report.json"}}'
    )
    assert code == 0
    import json, os
    rep = json.load(open("pyjob_report.json"))
    assert rep["pass"] is True
    os.remove("pyjob_report.json")
