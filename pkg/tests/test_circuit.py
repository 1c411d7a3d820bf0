import json
import random

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibsynth.approx import compile_rz
from fibsynth.braid import BraidWord, parse_braid
from fibsynth.circuit import (
    RESULT_SCHEMA,
    Matrix2,
    distance,
    evaluate_braid,
    evaluate_exact,
    evaluate_ft,
    f_matrix,
    identity,
    peephole_optimize,
    rz,
    sigma_matrix,
    to_json,
)
from fibsynth.exact import FTWord, ft_to_braid, parse_ft
from fibsynth.precision import context


def close(A, B, tol):
    return all(abs(x - y) <= tol for x, y in zip(A.entries(), B.entries()))


def random_word(rng, n):
    return BraidWord(tuple((rng.choice((1, 2)), rng.choice((-1, 1)) * rng.randint(1, 5)) for _ in range(n)))


@pytest.mark.parametrize("bits", [64, 128, 300])
def test_sigma2_is_conjugate(bits):
    ctx = context(bits)
    F = f_matrix(bits)
    assert close(sigma_matrix(2, 1, bits), F @ sigma_matrix(1, 1, bits) @ F, 8 * ctx.eps)


def test_sigma1_order_ten():
    bits = 128
    acc = identity(bits)
    for _ in range(10):
        acc = acc @ sigma_matrix(1, 1, bits)
    assert close(acc, identity(bits), context(bits).mpf(2) ** -120)


def test_empty_word_is_identity():
    assert close(evaluate_braid(BraidWord(()), 128), identity(128), 0)


def test_f_entries():
    ctx = context(128)
    F = evaluate_ft(parse_ft("F"), 128)
    tau = (ctx.sqrt(5) - 1) / 2
    assert abs(F.a - tau) < ctx.mpf(2) ** -120
    assert abs(F.b - ctx.sqrt(tau)) < ctx.mpf(2) ** -120


def test_distance_examples():
    bits = 128
    ctx = context(bits)
    I = identity(bits)
    Z = Matrix2(ctx.mpc(1), ctx.mpc(0), ctx.mpc(0), ctx.mpc(-1), bits)
    assert distance(I, Z) == 1
    U = rz(0.4, bits) @ f_matrix(bits)
    assert distance(U, U) < ctx.mpf(2) ** -60


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_distance_phase_invariance(alpha, angle):
    bits = 128
    ctx = context(bits)
    U = rz(angle, bits) @ f_matrix(bits) @ rz(0.3, bits)
    V = U.scale(ctx.expj(alpha))
    assert distance(U, V) < ctx.mpf(2) ** -60


def test_distance_depends_only_on_u():
    # for U[u, v, 5] the distance to Rz is a function of u alone
    rng = random.Random(5)
    bits = 200
    ctx = context(bits)
    seen = 0
    for _ in range(400):
        U = FTWord.from_exponents([rng.randint(0, 9) for _ in range(rng.randint(1, 10))]).to_exact()
        if U.k != 5:
            continue
        angle = ctx.mpf(rng.uniform(-3, 3))
        d = distance(evaluate_exact(U, bits), rz(angle, bits))
        u = U.u.to_complex(bits)
        assert abs(d - ctx.sqrt(1 - abs(ctx.re(u * ctx.expj(angle / 2))))) < ctx.mpf(2) ** -80
        seen += 1
    assert seen > 20


def test_ft_to_braid_equivalence():
    rng = random.Random(11)
    bits = 128
    for _ in range(100):
        word = FTWord.from_exponents([rng.randint(0, 9) for _ in range(rng.randint(0, 30))], rng.randint(0, 9))
        d = distance(evaluate_braid(ft_to_braid(word), bits), evaluate_ft(word, bits))
        assert d <= context(bits).mpf(2) ** -(bits // 2)


def test_exact_and_ft_evaluation_agree():
    rng = random.Random(2)
    bits = 128
    for _ in range(50):
        word = FTWord.from_exponents([rng.randint(0, 9) for _ in range(rng.randint(0, 20))], rng.randint(0, 9))
        assert close(evaluate_exact(word.to_exact(), bits), evaluate_ft(word, bits), context(bits).mpf(2) ** -110)


def test_peephole_merges_runs():
    w = BraidWord(((1, 3), (1, 4)))
    assert peephole_optimize(w) == parse_braid("s1^-3")


def test_peephole_idempotent_on_db_words(db8):
    for depth, word in list(db8.entries.values())[:300]:
        assert peephole_optimize(word, db8) == word


def test_peephole_shortens_and_preserves(db8):
    rng = random.Random(4)
    bits = 128
    ctx = context(bits)
    shrunk = 0
    for _ in range(40):
        w = random_word(rng, 12)
        p = peephole_optimize(w, db8)
        assert p.sigma_count <= w.sigma_count
        shrunk += p.sigma_count < w.sigma_count
        assert distance(evaluate_braid(w, bits), evaluate_braid(p, bits)) < ctx.mpf(2) ** -50
    assert shrunk > 0


def test_peephole_keeps_distance_to_target(db8):
    res = compile_rz(0.7, 1e-6, random.Random(8))
    bits = 200
    target = rz(context(bits).mpf(0.7), bits)
    opt = peephole_optimize(res.braid, db8)
    assert opt.sigma_count <= res.braid.sigma_count
    d0 = distance(evaluate_braid(res.braid, bits), target)
    d1 = distance(evaluate_braid(opt, bits), target)
    assert abs(d0 - d1) < context(bits).mpf(2) ** -100


def test_result_json_schema():
    res = compile_rz(0.5, 1e-4, random.Random(1), seed=1, target="Rz(0.5)")
    doc = json.loads(to_json(res))
    jsonschema.validate(doc, RESULT_SCHEMA)
    assert doc["sigma_count"] == res.sigma_count
    assert float(doc["distance"]) <= 1e-4


def test_evaluation_is_unitary():
    bits = 256
    w = random_word(random.Random(6), 200)
    M = evaluate_braid(w, bits)
    assert M.unitarity_error() < context(bits).mpf(2) ** -240
