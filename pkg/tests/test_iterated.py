import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parsym.iterated import (
    Alphabet,
    Letter,
    NCSeries3,
    check_commutator,
    check_composition,
    iterated_integral,
    project_A,
    project_B,
    transport,
)
from parsym.paths import CoordCircle, LogForm, PathWord, Segment, commutator, log_integral, torus_boundary

TWO_PI_I = 2j * math.pi
DZ_Z = LogForm.make([(0, 1)])
DX_X = LogForm.make([(0, 1)], [])
DY_Y = LogForm.make([], [(0, 1)])


def unit_circle(center=0, radius=1.0, start_angle=0.0, turns=1):
    return PathWord([CoordCircle(0, center, radius, turns, 0j, start_angle)])


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_single_letter_powers():
    S = transport(Alphabet.of_forms([DZ_Z]), unit_circle())
    assert rel(S.coeff([0]), TWO_PI_I) < 1e-8
    assert rel(S.coeff([0, 0]), TWO_PI_I**2 / 2) < 1e-8
    assert rel(S.coeff([0, 0, 0]), TWO_PI_I**3 / 6) < 1e-8


def test_empty_path_identity():
    al = Alphabet.of_forms([DZ_Z, DY_Y])
    S = transport(al, PathWord())
    assert S.max_diff(NCSeries3.identity(al)) == 0 and S.coeff([]) == 1


def test_torus_two_letters():
    # C0 = {x = 0}: x is the curve coordinate, y the transverse one
    loop = torus_boundary((0, 0), 1e-2, 1e-2, c0_axis=0)
    val = iterated_integral([DX_X, DY_Y], loop)
    assert rel(val, -TWO_PI_I**2) < 1e-6


def test_iterated_integral_examples():
    assert rel(iterated_integral([DZ_Z, DZ_Z], unit_circle()), TWO_PI_I**2 / 2) < 1e-8
    assert abs(iterated_integral([DZ_Z], unit_circle(3))) < 1e-12


def test_triple_on_torus_matches_commutator_formula():
    e = 1e-2
    base = (e, e)
    sigma = PathWord([CoordCircle(1, 0, e, 1, base[0], 0.0)])
    tau = PathWord([CoordCircle(0, 0, e, 1, base[1], 0.0)])
    res = check_commutator(DX_X, DY_Y, DY_Y, sigma, tau)
    assert res.max() < 1e-6
    direct = iterated_integral([DX_X, DY_Y, DY_Y], commutator(sigma, tau))
    assert abs(direct - res.rhs_c) < 1e-6


FORMS = [
    LogForm.make([(0.3 + 1.1j, 1), (-1 - 1j, -2)], [(2.5j, 3)]),
    LogForm.make([], [(3.2, 1), (-0.7 - 1.5j, -1)]),
    LogForm.make([(2 + 1j, 1)], [(-1.5j, 1)]),
]


def _pt(rng):
    return complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.5, 0.5))


def _path(rng, n):
    pts = [(_pt(rng), _pt(rng)) for _ in range(n + 1)]
    return PathWord([Segment(a, b) for a, b in zip(pts, pts[1:])])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_composition_and_shuffle(seed):
    rng = random.Random(seed)
    g = _path(rng, 4)
    cut = rng.randint(1, 3)
    g1, g2 = PathWord(g.pieces[:cut]), PathWord(g.pieces[cut:])
    assert check_composition(FORMS, g1, g2) < 1e-8
    S = transport(Alphabet.of_forms(FORMS), g)
    o = np.multiply.outer
    assert np.max(np.abs(o(S.s1, S.s1) - S.s2 - S.s2.T)) < 1e-8
    # degree 3: x * (yz) = xyz + yxz + yzx
    lhs = o(S.s1, S.s2)
    rhs = S.s3 + np.einsum("yxz->xyz", S.s3) + np.einsum("yzx->xyz", S.s3)
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_composition_trivial_and_associative():
    rng = random.Random(3)
    g = _path(rng, 3)
    assert check_composition(FORMS, g, PathWord()) < 1e-12
    a, b, c = (PathWord([p]) for p in g.pieces)
    al = Alphabet.of_forms(FORMS)
    whole = transport(al, a * b * c)
    assert whole.max_diff(transport(al, a) * transport(al, b) * transport(al, c)) < 1e-8
    assert (transport(al, a) * transport(al, a).inverse()).max_diff(NCSeries3.identity(al)) < 1e-12


def test_degree_one_exact():
    g = _path(random.Random(9), 3)
    S = transport(Alphabet.of_forms(FORMS), g)
    for i, w in enumerate(FORMS):
        assert abs(S.coeff([i]) - log_integral(w, g)) < 1e-12


def test_commutator_circle_pair():
    # loops based at 1/2 around 0 and around 1
    alpha = unit_circle(0, 0.5)
    beta = unit_circle(1, 0.5, math.pi)
    w0, w1 = LogForm.make([(0, 1)]), LogForm.make([(1, 1)])
    res = check_commutator(w0, w1, w0, alpha, beta)
    assert abs(res.rhs_b - TWO_PI_I**2) < 1e-8
    assert res.max() < 1e-6
    res = check_commutator(w0, w0, w1, alpha, beta)
    assert abs(res.lhs_b) < 1e-8 and res.max() < 1e-6
    res = check_commutator(w0, w1, w1, alpha, alpha)
    assert max(abs(res.lhs_b), abs(res.lhs_c), res.a) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_commutator_random_loops(seed):
    rng = random.Random(seed)
    base = (0.5 + 0j, 0.5j)
    alpha = PathWord([CoordCircle(0, 0, 0.5, rng.choice([1, -1]), base[1], 0.0)])
    beta = PathWord([CoordCircle(1, 0, 0.5, rng.choice([1, 2, -1]), base[0], math.pi / 2)])
    ws = [LogForm.make([(0, rng.randint(-2, 2))], [(0, rng.randint(-2, 2))]) for _ in range(3)]
    assert check_commutator(*ws, alpha, beta).max() < 1e-6


def test_richardson():
    g = PathWord([Segment((-2, 1), (1.5, -1)), Segment((1.5, -1), (0.5, 0.2))])
    al = Alphabet.of_forms(FORMS)
    ref = transport(al, g, resolution=4096)
    errs = [transport(al, g, resolution=r).max_diff(ref) for r in (16, 32, 64)]
    assert errs[0] >= 3 * errs[1] and errs[1] >= 3 * errs[2]


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_torus_residue(m, n):
    # f_k = y^m_k x^n_k around (0,0), C0 the x-axis
    forms = [LogForm.make([(0, n[k])], [(0, m[k])]) for k in range(2)]
    loop = torus_boundary((0, 0), 1e-2, 1e-2)
    want = -(m[0] * n[1] - m[1] * n[0]) * TWO_PI_I**2
    got = iterated_integral(forms, loop)
    assert abs(got - want) <= 1e-6 * max(abs(want), abs(TWO_PI_I) ** 2)


def _tagged(tags):
    form = LogForm.make([(0, 1)])
    return Alphabet([Letter(f"A{k},{i}", form, (k, i)) for k, i in tags])


def _series(al, entries):
    S = NCSeries3.identity(al)
    for word, c in entries.items():
        S.s3[tuple(al.index[w] for w in word)] = c
    return S


def test_project_A_examples():
    al = _tagged([(1, 0), (2, 0), (3, 1), (3, 2)])
    assert project_A(_series(al, {("A1,0", "A2,0", "A3,1"): 5})) == 5
    assert project_A(_series(al, {("A1,0", "A2,0", "A3,1"): 2, ("A1,0", "A2,0", "A3,2"): 3})) == 5
    assert project_A(_series(al, {("A2,0", "A1,0", "A3,1"): 7, ("A3,1", "A3,2", "A1,0"): 1})) == 0


def test_project_B_examples():
    al = _tagged([(1, 0), (2, 1), (3, 2)])
    # halved antisymmetrization: identity order gives c/2, a transposition -c/2
    assert project_B(_series(al, {("A1,0", "A2,1", "A3,2"): 4})) == 2
    assert project_B(_series(al, {("A2,1", "A1,0", "A3,2"): 4})) == -2
    assert project_B(_series(al, {("A1,0", "A1,0", "A3,2"): 4})) == 0


def test_projections_need_tags():
    S = NCSeries3.identity(Alphabet.of_forms([DZ_Z]))
    with pytest.raises(ValueError):
        project_A(S)
    with pytest.raises(ValueError):
        project_B(S)
