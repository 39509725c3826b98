import numpy as np
import pytest

from spinring import (
    Coupling,
    DenseSymmetricMatrix,
    IndexOutOfRange,
    RingSpec,
    SpectralSource,
    build_single_excitation_hamiltonian,
    circulant_spectrum,
    jacobi_eigh,
    numerical_spectrum,
    projector_overlaps,
)


def test_circulant_spectrum_n3():
    dec = circulant_spectrum(RingSpec(3))
    assert np.allclose(dec.eigenvalues, [-2.0, 4.0], atol=1e-12)
    assert list(dec.multiplicities) == [2, 1]
    assert dec.source is SpectralSource.CLOSED_FORM


def test_circulant_spectrum_n4():
    dec = circulant_spectrum(RingSpec(4))
    assert np.allclose(dec.eigenvalues, [-4.0, 0.0, 4.0], atol=1e-12)
    assert list(dec.multiplicities) == [1, 2, 1]


def test_multiplicity_pattern():
    # Odd n: one simple mode (k=0); even n adds a second simple mode (k=n/2).
    for n, expected in ((5, [2, 2, 1]), (8, [1, 2, 2, 2, 1]), (9, [2, 2, 2, 2, 1])):
        dec = circulant_spectrum(RingSpec(n))
        assert list(dec.multiplicities) == expected, n
        assert int(dec.multiplicities.sum()) == n


def check_resolution(dec, matrix):
    n = dec.n
    total = np.zeros((n, n))
    recon = np.zeros((n, n))
    for lam, proj in zip(dec.eigenvalues, dec.projectors):
        assert np.abs(proj - proj.T).max() <= 1e-12
        assert np.abs(proj @ proj - proj).max() <= 1e-10
        total += proj
        recon += lam * proj
    assert np.abs(total - np.eye(n)).max() <= 1e-10
    assert np.abs(recon - matrix).max() <= 1e-10
    for a in range(len(dec.projectors)):
        trace = float(np.trace(dec.projectors[a]))
        assert abs(trace - dec.multiplicities[a]) <= 1e-10
        for b in range(a + 1, len(dec.projectors)):
            cross = dec.projectors[a] @ dec.projectors[b]
            assert np.abs(cross).max() <= 1e-10


def test_projector_invariants_closed_form():
    for n in range(3, 13):
        spec = RingSpec(n, Coupling.HEISENBERG)
        dec = circulant_spectrum(spec)
        check_resolution(dec, build_single_excitation_hamiltonian(spec).entries)


def test_projector_invariants_numerical():
    for n in (3, 4, 6, 9):
        spec = RingSpec(n)
        matrix = build_single_excitation_hamiltonian(spec)
        dec = numerical_spectrum(matrix)
        assert dec.source is SpectralSource.NUMERICAL_SOLVER
        check_resolution(dec, matrix.entries)


def test_closed_form_matches_numerical():
    for n in (5, 7, 8, 12):
        spec = RingSpec(n, Coupling.HEISENBERG)
        closed = circulant_spectrum(spec)
        numeric = numerical_spectrum(build_single_excitation_hamiltonian(spec))
        assert list(closed.multiplicities) == list(numeric.multiplicities)
        assert np.abs(closed.eigenvalues - numeric.eigenvalues).max() <= 1e-10
        for p_closed, p_numeric in zip(closed.projectors, numeric.projectors):
            assert np.abs(p_closed - p_numeric).max() <= 1e-8


def test_numerical_spectrum_identity():
    dec = numerical_spectrum(DenseSymmetricMatrix(3, np.eye(3)))
    assert len(dec.eigenvalues) == 1
    assert dec.eigenvalues[0] == pytest.approx(1.0)
    assert dec.multiplicities[0] == 3
    assert np.abs(dec.projectors[0] - np.eye(3)).max() <= 1e-12


def test_numerical_spectrum_distinct_diagonal():
    dec = numerical_spectrum(DenseSymmetricMatrix(3, np.diag([1.0, 2.0, 3.0])))
    assert np.allclose(dec.eigenvalues, [1.0, 2.0, 3.0], atol=1e-12)
    assert list(dec.multiplicities) == [1, 1, 1]
    for k, proj in enumerate(dec.projectors):
        expected = np.zeros((3, 3))
        expected[k, k] = 1.0
        assert np.abs(proj - expected).max() <= 1e-12


def test_jacobi_against_library_solver():
    rng = np.random.default_rng(7)
    for n in (5, 12, 30):
        base = rng.standard_normal((n, n))
        matrix = 0.5 * (base + base.T)
        w, v = jacobi_eigh(matrix)
        reference = np.linalg.eigvalsh(matrix)
        scale = max(1.0, float(np.abs(reference).max()))
        assert np.abs(w - reference).max() <= 1e-10 * scale
        assert np.abs(v.T @ v - np.eye(n)).max() <= 1e-12
        assert np.abs(v @ np.diag(w) @ v.T - matrix).max() <= 1e-11 * scale


def test_projector_overlaps_uniform_mode():
    # The k=0 projector is constant 1/n, and it carries the top eigenvalue.
    for n in (4, 5, 9):
        dec = circulant_spectrum(RingSpec(n))
        overlaps = projector_overlaps(dec, 1, 2)
        assert overlaps[-1] == pytest.approx(1.0 / n, abs=1e-14)


def test_projector_overlaps_n5():
    dec = circulant_spectrum(RingSpec(5))
    overlaps = projector_overlaps(dec, 1, 2)
    expected = sorted(
        (2.0 / 5.0) * abs(np.cos(2.0 * np.pi * k / 5.0)) for k in (1, 2)
    )
    # Ascending eigenvalue order puts k=2 first, then k=1, then k=0.
    assert overlaps[0] == pytest.approx(expected[1], abs=1e-14)
    assert overlaps[1] == pytest.approx(expected[0], abs=1e-14)
    assert overlaps[2] == pytest.approx(0.2, abs=1e-14)


def test_projector_overlaps_same_site_sum_to_one():
    for n in (3, 6, 11):
        dec = circulant_spectrum(RingSpec(n))
        for site in (1, n):
            assert float(projector_overlaps(dec, site, site).sum()) == pytest.approx(
                1.0, abs=1e-12
            )


def test_projector_overlaps_index_validation():
    dec = circulant_spectrum(RingSpec(5))
    with pytest.raises(IndexOutOfRange):
        projector_overlaps(dec, 0, 1)
    with pytest.raises(IndexOutOfRange):
        projector_overlaps(dec, 1, 6)
