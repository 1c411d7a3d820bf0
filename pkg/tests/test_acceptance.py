"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL (or WARN) line that is printed in the
terminal summary.
"""

import itertools
import math
import random
import statistics

from fibsynth.approx import approx_real, compile_rz, compile_rzx
from fibsynth.circuit import distance, evaluate_braid, evaluate_ft, f_matrix, rz, rzx
from fibsynth.exact import (
    IDENTITY,
    FTWord,
    exact_mul,
    exact_synthesize,
    ft_to_braid,
    parse_ft,
    synthesis_trace,
)
from fibsynth.experiment import linear_fit
from fibsynth.numtheory import (
    binary_gcd,
    easy_factor,
    is_prime,
    solve_norm_equation,
    splitting_root,
    tonelli_shanks,
    unit_dlog,
)
from fibsynth.oracle import build_database
from fibsynth.precision import context, working_bits
from fibsynth.rings import TAU, ZOmega, ZTau


def verdict(ok):
    return "PASS" if ok else "FAIL"


def recheck(braid, target_fn, eps):
    """Distance at twice the working precision, evaluated from the braid alone."""
    bits = 2 * working_bits(eps)
    return distance(evaluate_braid(braid, bits), target_fn(bits))


def test_criterion_1_worked_norm_equation(record):
    rng = random.Random(1)
    xi = ZTau(760, -780)
    x = solve_norm_equation(xi, rng)
    checks = {
        "solution": x is not None and x.norm_i() == xi,
        "factors": easy_factor(xi) == [(ZTau(2), 2), (ZTau(5), 1), (ZTau(2, -1), 1), (ZTau(15, -8), 1)],
        "norm 281": ZTau(15, -8).norm() == 281 and is_prime(281),
        "root": splitting_root(ZTau(15, -8), rng) in (63, 218),
        "dlog": unit_dlog(ZTau(5, 3)) == (1, -4),
    }
    ok = all(checks.values())
    record(1, verdict(ok), f"x = {x}; " + ", ".join(f"{k}={'ok' if v else 'BAD'}" for k, v in checks.items()))
    assert ok, checks


def test_criterion_2_gauss_table(record):
    FT = parse_ft("F T").to_exact()
    acc, got = IDENTITY, []
    for _ in range(3):
        acc = exact_mul(acc, FT)
        got.append(acc.gauss())
    g1 = ZOmega(1).gauss_complexity()
    ok = got == [3, 13, 57] and g1 == 2
    record(2, verdict(ok), f"G((FT)^n) for n=1..3: {got}; G(1) = {g1} (an n=0 value of 1 would contradict G >= 2 for units)")
    assert ok


def test_criterion_3_census(record):
    db = build_database(8)
    want = [1, 4, 12, 25, 48, 94, 176, 330, 624]
    ok = db.census == want
    record(3, verdict(ok), f"census {db.census}")
    assert ok


def test_criterion_4_exact_roundtrip(record):
    rng = random.Random(4)
    failures = []
    worst_ratio = 0.0
    worst_steps = -math.inf
    for i in range(1000):
        n = rng.randint(0, 100)
        word = FTWord.from_exponents([rng.randint(0, 9) for _ in range(n + 1)], rng.randint(0, 9))
        U = word.to_exact()
        if exact_synthesize(U).to_exact() != U:
            failures.append((i, "roundtrip"))
        trace = synthesis_trace(U)
        if any(b >= a for a, b in zip(trace, trace[1:])):
            failures.append((i, "not decreasing"))
        worst_steps = max(worst_steps, (len(trace) - 1) - math.log(trace[0], 3))
        if len(trace) - 1 > math.log(trace[0], 3) + 5:
            failures.append((i, "too many steps"))
        for a, b in zip(trace, trace[1:]):
            if a >= 100:
                worst_ratio = max(worst_ratio, b / a)
    ok = not failures and worst_ratio < 0.35
    record(4, verdict(ok), f"1000 words, max step ratio {worst_ratio:.4f}, max steps - log3 G = {worst_steps:.2f}")
    assert ok, failures[:5]


def test_criterion_5_compile_quality(record, db12):
    rng = random.Random(5)
    eps = "1e-10"
    bits = working_bits(eps)
    ctx = context(bits)
    sigmas, trials, bad = [], [], 0
    for _ in range(100):
        angle = ctx.mpf(rng.uniform(0, 2 * math.pi))
        res = compile_rz(angle, ctx.mpf(eps), rng, db=db12)
        d = recheck(res.braid, lambda b: rz(context(b).mpf(angle), b), eps)
        bad += d > ctx.mpf(eps)
        sigmas.append(res.sigma_count)
        trials.append(res.trials)
    mean_s, mean_t = statistics.fmean(sigmas), statistics.fmean(trials)
    ok = bad == 0 and 120 <= mean_s <= 200 and mean_t <= 100
    record(5, verdict(ok), f"100 angles: {bad} over eps, mean sigma {mean_s:.1f} (band 120..200), mean trials {mean_t:.1f}")
    assert ok


def test_criterion_6_deep_precision(record, db12):
    eps = "1e-30"
    bits = working_bits(eps)
    ctx = context(bits)
    res = compile_rz(ctx.pi / 3, ctx.mpf(eps), random.Random(6), db=db12)
    d = recheck(res.braid, lambda b: rz(context(b).pi / 3, b), eps)
    ok = d <= ctx.mpf(eps) and 370 <= res.sigma_count <= 560
    record(6, verdict(ok), f"Rz(pi/3): d = {ctx.nstr(d, 5)}, sigma {res.sigma_count} (band 370..560)")
    assert ok


def test_criterion_7_pauli_x(record, db12):
    eps = "1e-10"
    ctx = context(working_bits(eps))
    res = compile_rzx(0, ctx.mpf(eps), random.Random(7), db=db12)
    d = recheck(res.braid, lambda b: rzx(0, b), eps)
    ok = d <= ctx.mpf(eps) and 100 <= res.sigma_count <= 230
    record(7, verdict(ok), f"X: d = {ctx.nstr(d, 5)}, sigma {res.sigma_count} (band 100..230)")
    assert ok


def test_criterion_8_property_suites(record):
    rng = random.Random(8)
    results = {}

    units = {ZOmega.omega_power(k) for k in range(10)}
    tri = True
    for c in itertools.product(range(-2, 3), repeat=4):
        x = ZOmega(*c)
        g = x.gauss_complexity()
        tri &= (g == 0) == (not x) and (g == 2) == (x in units) and (g in (0, 2) or g >= 3)
    results["trichotomy"] = tri

    ctx = context(300)
    tau = (ctx.sqrt(5) - 1) / 2
    ar = True
    for _ in range(10_000):
        x, n = ctx.mpf(rng.uniform(-10, 10)), rng.randint(2, 60)
        a, b = approx_real(x, n)
        ar &= abs(x - (a + b * tau)) <= tau ** (n - 1) * (1 - tau**n) and abs(b) <= (1 + tau) ** n
    results["approx_real"] = ar

    ts = True
    count = 0
    while count < 1000:
        p = rng.getrandbits(rng.choice((16, 32, 64))) | 1
        if not is_prime(p, rng=rng):
            continue
        n = pow(rng.randrange(1, p), 2, p)
        r = tonelli_shanks(n, p, rng)
        ts &= r * r % p == n
        count += 1
    results["tonelli"] = ts

    results["unit_dlog"] = all(
        unit_dlog(TAU**j * s) == (s, j) for j in range(-50, 51) for s in (1, -1)
    )

    gd = True
    for _ in range(1000):
        x = ZOmega(*(rng.randint(-30, 30) for _ in range(4)))
        y = ZOmega(*(rng.randint(-30, 30) for _ in range(4)))
        if x and y:
            g = binary_gcd(x, y)
            gd &= g.divides(x) and g.divides(y)
    results["gcd"] = gd

    bits = 128
    pc = context(bits)
    ph = True
    for _ in range(200):
        U = rz(rng.uniform(-4, 4), bits) @ f_matrix(bits) @ rz(rng.uniform(-4, 4), bits)
        ph &= distance(U, U.scale(pc.expj(rng.uniform(-10, 10)))) < pc.mpf(2) ** -60
    results["phase"] = ph

    fb = True
    for _ in range(200):
        w = FTWord.from_exponents([rng.randint(0, 9) for _ in range(rng.randint(0, 40))], rng.randint(0, 9))
        fb &= distance(evaluate_braid(ft_to_braid(w), bits), evaluate_ft(w, bits)) <= pc.mpf(2) ** -(bits // 2)
    results["ft_to_braid"] = fb

    ok = all(results.values())
    record(8, verdict(ok), ", ".join(f"{k}={'ok' if v else 'BAD'}" for k, v in results.items()))
    assert ok, results


def test_criterion_9_trial_growth(record):
    rng = random.Random(9)
    xs, ys, means = [], [], []
    for e in (5, 10, 15):
        eps = f"1e-{e}"
        ctx = context(working_bits(eps))
        t = []
        for _ in range(60):
            res = compile_rz(ctx.mpf(rng.uniform(0, 2 * math.pi)), ctx.mpf(eps), rng)
            t.append(res.trials)
        xs.extend([e] * len(t))
        ys.extend(t)
        means.append(statistics.fmean(t))
    slope, intercept = linear_fit(xs, ys)
    status = "PASS" if slope < 6 else ("WARN" if slope < 8 else "FAIL")
    record(9, status, f"mean trials {[round(m, 1) for m in means]} at eps 1e-5/1e-10/1e-15; fit {slope:.2f}x + {intercept:.2f}")
    assert slope < 8
