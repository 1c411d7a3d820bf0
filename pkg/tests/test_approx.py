import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibsynth.approx import (
    AngleSyntaxError,
    NotUnitary,
    TrialLimitExceeded,
    approx_real,
    compile_rz,
    compile_rzx,
    compile_unitary,
    decompose_general,
    decomposition_matrix,
    fibonacci,
    parse_angle,
    random_sample,
    sampling_region,
)
from fibsynth.circuit import (
    Matrix2,
    distance,
    evaluate_braid,
    evaluate_exact,
    f_matrix,
    rz,
    rzx,
)
from fibsynth.precision import context

PHI = (1 + 5**0.5) / 2
TAU = PHI - 1

# frozen from 5000 samples over eps in 1e-2 .. 1e-15 (observed maxima about 7.6 and 116)
COEFF_BOUND = 10
GAUSS_BOUND = 200


def verified(res, target, eps):
    """Recheck a compile independently at twice the precision."""
    bits = 2 * max(128, int(6 * math.log10(1 / float(eps)) + 50) * 4)
    ctx = context(bits)
    d = distance(evaluate_braid(res.braid, bits), target(bits))
    return d <= ctx.mpf(eps)


def haar(rng, bits):
    ctx = context(bits)
    g = [ctx.mpc(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(4)]
    M = Matrix2(*g, bits)
    n1 = ctx.sqrt(abs(M.a) ** 2 + abs(M.c) ** 2)
    a, c = M.a / n1, M.c / n1
    p = ctx.conj(a) * M.b + ctx.conj(c) * M.d
    b, d = M.b - p * a, M.d - p * c
    n2 = ctx.sqrt(abs(b) ** 2 + abs(d) ** 2)
    return Matrix2(a, b / n2, c, d / n2, bits)


# -- real approximation ---------------------------------------------------


def test_fibonacci():
    assert [fibonacci(n) for n in range(10)] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]
    with pytest.raises(ValueError):
        fibonacci(-1)


def test_fibonacci_bounds():
    ctx = context(400)
    tau = (ctx.sqrt(5) - 1) / 2
    phi = tau + 1
    for n in range(1, 81):
        f, f1 = fibonacci(n), fibonacci(n + 1)
        assert abs(tau - ctx.mpf(f) / f1) <= tau**n / f1
        assert f >= (phi**n - 1) / ctx.sqrt(5)


def test_approx_real_examples():
    assert approx_real(0, 9) == (0, 0)
    assert approx_real(0.5, 4) == (0, 1)
    a, b = approx_real(TAU, 30)
    assert abs(TAU - (a + b * TAU)) <= TAU**29 * (1 - TAU**30) + 1e-15


def test_approx_real_bounds_10k():
    rng = random.Random(99)
    ctx = context(300)
    tau = (ctx.sqrt(5) - 1) / 2
    for _ in range(10_000):
        x = ctx.mpf(rng.uniform(-10, 10))
        n = rng.randint(2, 60)
        a, b = approx_real(x, n)
        assert abs(x - (a + b * tau)) <= tau ** (n - 1) * (1 - tau**n)
        assert abs(b) <= (1 + tau) ** n


@given(st.floats(-10, 10), st.integers(2, 60))
def test_approx_real_property(x, n):
    ctx = context(300)
    tau = (ctx.sqrt(5) - 1) / 2
    a, b = approx_real(ctx.mpf(x), n)
    assert abs(ctx.mpf(x) - (a + b * tau)) <= tau ** (n - 1) * (1 - tau**n)


# -- sampling --------------------------------------------------------------


def in_target_segment(z, theta, eps, reg, bits=256):
    """Disk segment whose points give distance <= eps, tested without the corner formulas."""
    ctx = context(bits)
    scale = reg.r * ((1 + ctx.sqrt(5)) / 2) ** reg.m
    w = z.to_complex(bits) / scale
    # d^2 = 1 - Re(w e^{-i theta}), so d <= eps is Re >= 1 - eps^2
    return abs(w) <= 1 and ctx.re(w * ctx.expj(-ctx.mpf(theta))) >= 1 - ctx.mpf(eps) ** 2


def test_samples_inside_region(rng):
    reg = sampling_region(0.3, 1e-3, 1, 256)
    for _ in range(200):
        z = random_sample(0.3, 1e-3, 1, rng, bits=256)
        assert reg.contains(z)
        assert in_target_segment(z, 0.3, 1e-3, reg)


def test_literal_sign_misses_segment(rng):
    # with the unflipped corner sign the parallelogram leaves the segment entirely
    reg = sampling_region(0.3, 1e-3, 1, 256, x_max_sign=-1)
    hits = sum(in_target_segment(random_sample(0.3, 1e-3, 1, rng, bits=256, x_max_sign=-1), 0.3, 1e-3, reg) for _ in range(100))
    assert hits == 0


def test_sampling_deterministic():
    a = [random_sample(0.2, 1e-8, 1, random.Random(4)) for _ in range(3)]
    b = [random_sample(0.2, 1e-8, 1, random.Random(4)) for _ in range(3)]
    assert a == b


def test_sample_size_bounds(rng):
    for eps in (1e-2, 1e-4, 1e-8, 1e-12):
        for _ in range(250):
            u = random_sample(rng.uniform(0, math.pi / 5), eps, 1, rng)
            assert max(abs(c) for c in u.coords) <= COEFF_BOUND / eps
            assert u.gauss_complexity() <= GAUSS_BOUND / eps**2


# -- rotations -------------------------------------------------------------


def test_rz_trivial():
    res = compile_rz(0, 0.3, random.Random(1))
    assert res.achieved_distance <= 0.3
    assert res.exact.is_unitary()


def test_rz_pi_over_64(db12):
    ctx = context(256)
    angle = ctx.pi / 64
    res = compile_rz(angle, ctx.mpf("1e-10"), random.Random(64), db=db12)
    assert res.achieved_distance <= 1e-10
    assert verified(res, lambda bits: rz(context(bits).pi / 64, bits), "1e-10")
    assert 100 <= res.sigma_count <= 220
    assert res.exact.is_unitary()


def test_rz_reproducible():
    a = compile_rz(1.1, 1e-8, random.Random(5))
    b = compile_rz(1.1, 1e-8, random.Random(5))
    assert a.braid == b.braid and a.trials == b.trials


def test_rz_many_angles(rng):
    for _ in range(20):
        angle = rng.uniform(-7, 7)
        res = compile_rz(angle, 1e-6, rng)
        assert res.exact.is_unitary()
        assert verified(res, lambda bits: rz(context(bits).mpf(angle), bits), "1e-6")


def test_rzx_pauli_x():
    res = compile_rzx(0, 1e-10, random.Random(10))
    assert res.exact.is_unitary()
    assert verified(res, lambda bits: rzx(0, bits), "1e-10")


def test_trial_limit():
    raised = 0
    for seed in range(20):
        try:
            compile_rz(0.9, 1e-20, random.Random(seed), max_trials=1)
        except TrialLimitExceeded as exc:
            assert exc.trials == 1
            raised += 1
    assert raised > 0


# -- general unitaries -----------------------------------------------------


def test_decompose_examples():
    bits = 128
    F = f_matrix(bits)
    dec = decompose_general(F @ rz(0.2, bits) @ F)
    assert dec.kind == "three_rotation"
    assert abs(dec.angles[1] - 0.2) < 1e-30
    dec = decompose_general(rzx(0, bits))
    assert dec.kind == "rzx" and abs(dec.angles[0]) < 1e-30
    dec = decompose_general(rz(0.7, bits))
    assert dec.kind == "rz" and abs(dec.angles[0] - 0.7) < 1e-30


def test_decompose_reconstructs(rng):
    bits = 200
    kinds = set()
    for _ in range(100):
        U = haar(rng, bits)
        dec = decompose_general(U)
        kinds.add(dec.kind)
        assert distance(decomposition_matrix(dec, bits), U) < context(bits).mpf(2) ** -80
    assert "three_rotation" in kinds


def test_decompose_small_u_uses_fallback():
    bits = 200
    ctx = context(bits)
    c = ctx.mpf("0.1")
    s = ctx.sqrt(1 - c * c)
    U = Matrix2(ctx.mpc(c), ctx.mpc(0, s), ctx.mpc(0, s), ctx.mpc(c), bits)
    dec = decompose_general(U)
    assert dec.kind == "fallback"
    assert distance(decomposition_matrix(dec, bits), U) < ctx.mpf(2) ** -80


def test_compile_unitary_rz():
    res = compile_unitary(rz(0.3, 128), 1e-8, random.Random(3))
    assert res.kind == "rz"
    assert res.achieved_distance <= 1e-8


def test_compile_unitary_three_rotation(rng):
    for _ in range(3):
        U = haar(rng, 256)
        while abs(U.a) < 0.5:
            U = haar(rng, 256)
        res = compile_unitary(U, 1e-8, rng)
        assert res.kind == "three_rotation"
        assert res.exact.is_unitary()
        assert distance(evaluate_exact(res.exact, 256), U) <= 1e-8
        assert verified(res, lambda bits: U, "1e-8")


def test_compile_unitary_fallback(rng):
    for _ in range(2):
        U = haar(rng, 256)
        while not 0 < abs(U.a) < 0.2:
            U = haar(rng, 256)
        res = compile_unitary(U, 1e-8, rng)
        assert res.kind == "fallback"
        assert distance(evaluate_braid(res.braid, 256), U) <= 1e-8


def test_compile_unitary_rejects_non_unitary():
    ctx = context(128)
    M = Matrix2(ctx.mpc(1), ctx.mpc(1), ctx.mpc(0), ctx.mpc(1), 128)
    with pytest.raises(NotUnitary):
        compile_unitary(M, 1e-5, random.Random(0))


# -- angle syntax ----------------------------------------------------------


@pytest.mark.parametrize(
    "text,value",
    [
        ("pi/128", math.pi / 128),
        ("3pi/7", 3 * math.pi / 7),
        ("-2/3pi", -2 * math.pi / 3),
        ("pi", math.pi),
        ("0.45", 0.45),
        ("-1e-3", -1e-3),
        ("2*pi/5", 2 * math.pi / 5),
    ],
)
def test_parse_angle(text, value):
    assert abs(float(parse_angle(text)) - value) < 1e-15


@pytest.mark.parametrize("text", ["pi/0", "1/0pi", "pie", "", "3/pi"])
def test_parse_angle_errors(text):
    with pytest.raises(AngleSyntaxError):
        parse_angle(text)
