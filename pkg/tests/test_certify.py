import numpy as np
import pytest

from primstab.certify import (
    Certificate, Inconclusive, ScanReport, certify_primitive_stability, check_irreducible, check_property_O,
    edge_geometry, primitive_displacement_probe, quasi_constants, random_primitive_words, scan_q,
    threshold_level, validate_certificate, verify_property_O,
)
from primstab.constructions import boost, hyperplane_normal, random_coxeter_triple, rotation
from primstab.farey import edge_from_gallery, root_edge
from primstab.freegroup import cyclic_reduce
from primstab.hexagon import EndpointOracle
from primstab.minkowski import Hyperplane, axis, dist_hyperplanes, ortho_hyperplane_at
from primstab.report import to_plain
from primstab.rep import RepF2


@pytest.fixture(scope="module")
def certificate(schottky):
    cert = certify_primitive_stability(schottky, 8, 4.0, seed=0)
    assert isinstance(cert, Certificate)
    return cert


def test_scan_schottky_has_nothing_below_lambda(schottky):
    rep = scan_q(schottky, 4.0, 6)
    assert rep.count_below_lambda == 0
    assert not rep.non_loxodromic
    assert rep.primsys_upper == pytest.approx(6.0, abs=1e-9)
    assert scan_q(schottky, 1e-9, 3).count_below_lambda == 0


def test_scan_reducible_subtraction_chain(reducible):
    rep = scan_q(reducible, 4.0, 6)
    assert any(abs(r.trans - 2.0) < 1e-8 for r in rep.rows)
    lengths = [t for _, t in rep.decreasing_chain]
    assert lengths[:3] == pytest.approx([5.0, 3.0, 2.0], abs=1e-8)
    assert all(a > b for a, b in zip(lengths, lengths[1:]))


def test_check_irreducible(schottky, reducible):
    assert check_irreducible(schottky).status == "irreducible"
    assert check_irreducible(reducible).status == "reducible"
    A, B = reducible.A, reducible.B
    R = rotation(3, 1e-7, 0, 2)
    near = RepF2(A, R @ B @ R.T)
    assert check_irreducible(near).status == "inconclusive"


def test_narrow_examples(schottky):
    g = edge_geometry(schottky, root_edge())
    assert g.narrow and abs(g.narrow_angle) < 1e-9
    # reversing a flips the axis: the angle becomes pi, which is not narrow
    g = edge_geometry(schottky, root_edge(-1))
    assert not g.narrow and abs(g.narrow_angle) == pytest.approx(np.pi)


def test_narrow_agrees_with_angle(rng):
    checked = 0
    while checked < 500:
        rep = RepF2.from_coxeter(*random_coxeter_triple(rng, int(rng.choice([3, 4]))))
        oracle = EndpointOracle(rep)
        for _ in range(25):
            lv = int(rng.integers(0, 7))
            e = edge_from_gallery("".join(rng.choice(["L", "R"], size=lv)), int(rng.choice([1, -1])))
            g = edge_geometry(rep, e, oracle)
            a = g.narrow_angle
            if np.isnan(a) or abs(abs(a) - np.pi / 2) < 1e-6:
                continue
            assert (g.narrow_endpoint > 0) == (abs(a) < np.pi / 2), e.address
            assert g.narrow == (abs(a) < np.pi / 2)
            checked += 1


def test_property_o_translates():
    X = boost(3, 2.0)
    H = Hyperplane(hyperplane_normal([0, 0, 1], 0.0))
    ok, margin, _ = verify_property_O(H, np.array([0, 0, 0, 1.0]), X, X)
    assert ok
    assert margin == pytest.approx(np.cosh(2.0) - 1.0)


def test_property_o_schottky_level_zero(schottky):
    po = check_property_O(edge_geometry(schottky, root_edge()))
    assert po.passed and po.witness is not None


def test_property_o_fails_for_reducible(reducible):
    ax = axis(reducible.A)
    for t in (-1.0, 0.0, 1.0):
        H = ortho_hyperplane_at(ax, t)
        ok, _, failed = verify_property_O(H, ax.point(t), reducible.A, reducible.B)
        assert not ok and failed


def test_quasi_constants_direct_distances(schottky):
    for e in (root_edge(), edge_from_gallery("L"), edge_from_gallery("RR")):
        g = edge_geometry(schottky, e)
        po = check_property_O(g)
        assert po.passed
        qc = quasi_constants(g, po.witness, po.point, schottky)
        direct = [dist_hyperplanes(po.witness, po.witness.moved(schottky.image(w))) for w in e.basis]
        assert qc.m_raw == pytest.approx(min(direct), abs=1e-9)
        assert qc.D == max(len(w) for w in e.basis)


def test_certificate_schottky(certificate, schottky):
    cert = certificate
    assert cert.threshold_level <= 8
    assert cert.m > 0 and np.isfinite(cert.c)
    assert {f.address[0] for f in cert.frontier} == {"+", "-"}
    assert len(cert.frontier) == 2 ** (cert.level + 1)
    assert all(s["narrow"] for s in cert.spot_checks)


def test_certify_reducible_cites_chain(reducible):
    out = certify_primitive_stability(reducible, 4, 4.0)
    assert isinstance(out, Inconclusive)
    assert "reducible" in out.reason and "decreasing" in out.reason
    assert out.details["decreasing_chain"]


def test_certify_level_zero_is_inconclusive(schottky):
    out = certify_primitive_stability(schottky, 0, 4.0)
    assert isinstance(out, Inconclusive)
    assert out.frontier == ["+", "-"]


def test_certify_independent_of_jobs(schottky, certificate):
    other = certify_primitive_stability(schottky, 8, 4.0, seed=0, jobs=4)
    assert to_plain(other) == to_plain(certificate)


def test_validate_certificate(certificate, schottky):
    rep = validate_certificate(certificate, schottky, n_words=200, max_word_length=30, seed=1)
    assert rep.violations == []
    assert rep.worst_margin >= 0


def test_validate_catches_corrupted_certificate(certificate, schottky):
    import dataclasses
    bad = dataclasses.replace(certificate, m=2 * certificate.m + 10.0)
    rep = validate_certificate(bad, schottky, n_words=50, max_word_length=20, seed=1)
    assert rep.violations


def test_random_primitive_words_are_primitive():
    from primstab.farey import christoffel, fraction_of_word

    for w in random_primitive_words(100, 40, seed=3):
        core, _ = cyclic_reduce(w)
        assert 1 <= len(core) <= 40
        c = christoffel(fraction_of_word(core))
        inv = core[::-1].swapcase()
        assert c in core + core or c in inv + inv or c.swapcase() in core + core


def test_random_primitive_words_deterministic():
    assert random_primitive_words(20, 15, 7) == random_primitive_words(20, 15, 7)


def test_threshold_level_rule():
    scan = ScanReport(4.0, 3, [], 0, 6.0, 6.0, [], [], [])
    N, rule = threshold_level(scan, 4.0, {0: 3.0, 1: 0.5, 2: 5.0})
    assert rule["N_geom"] == 2 and N == 2
    scan = ScanReport(4.0, 3, [], 0, 0.0, 0.0, [], [], [])
    assert threshold_level(scan, 4.0, {})[0] is None


def test_displacement_probe(schottky, reducible):
    fit = primitive_displacement_probe(schottky, 5)
    assert fit.K_hat > 0
    assert all(t >= fit.K_hat * n - fit.c_hat - 1e-9 for _, n, t in fit.table)
    assert primitive_displacement_probe(reducible, 5).K_hat < 0.5
    one = primitive_displacement_probe(schottky, 0)
    assert one.K_hat == pytest.approx(6.0, abs=1e-9) and one.c_hat == pytest.approx(0.0, abs=1e-9)
