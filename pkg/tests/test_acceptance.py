"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""
import cmath
import json
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from sttf.cli import main as cli_main
from sttf.continuous import freq_response, sttf_from_pde
from sttf.discretization import GridSpacing, discrete_char_poly, discrete_sttf
from sttf.continuous import dispersion_roots
from sttf.oracles import convergence_orders, dft_gain_oracle, gaussian_data, leapfrog_error
from sttf.pde import PdeModel
from sttf.polynomial import MultiPoly, certified_roots
from sttf.stability import Verdict, clear_negative_exponents, huang_test, wave_q0

DATA = Path(__file__).resolve().parent.parent / "data"


def _timed(limit, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok, detail = False, f"{detail}; runtime {dt:.2f}s exceeds {limit}s"
    return ok, f"{detail} [{dt:.2f}s]"


# -- criterion bodies ---------------------------------------------------------------


def crit1_dispersion():
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        for w1 in np.linspace(-5, 5, 20):
            roots = dispersion_roots(PdeModel.wave(alpha), (0, float(w1)))
            expected = sorted([-alpha * w1, alpha * w1])
            if len(roots) != 2:
                return False, f"alpha={alpha}, w1={w1}: {len(roots)} roots"
            worst = max(worst, *(abs(r - e) for r, e in zip(roots, expected)))
    return worst <= 1e-9, f"max |root - (+-alpha w1)| = {worst:.3g} (tol 1e-9)"


def _wave_laurent(alpha, h, k):
    # (alpha^2/h^2)(z1 + 1/z1 - 2) - (1/k^2)(z2 + 1/z2 - 2), written out by hand
    sx, st = alpha**2 / h**2, 1 / k**2
    return MultiPoly(2, {(1, 0): sx, (-1, 0): sx, (0, 1): -st, (0, -1): -st,
                         (0, 0): -2 * sx + 2 * st})


def crit2_wave_poly():
    bad = []
    for alpha, h, k in ((1, 1, 1), (2, 0.5, 0.25)):
        got = discrete_char_poly(PdeModel.wave(alpha), GridSpacing(h, k))
        if dict(got.terms) != dict(_wave_laurent(alpha, h, k).terms):
            bad.append((alpha, h, k))
    return not bad, "exact term maps equal" if not bad else f"mismatch at {bad}"


def crit3_stability():
    notes = []
    ok = True
    for lam in (0.25, 0.5, 1.0):
        r = huang_test(clear_negative_exponents(wave_q0(lam)), 2048)
        err = max((abs(math.cos(cmath.phase(w.root)) - (1 - lam + lam * math.cos(w.theta1)))
                   for w in r.circle_witnesses), default=math.inf)
        good = r.verdict is Verdict.MARGINALLY_STABLE and err <= 1e-6
        ok &= good
        notes.append(f"lam={lam}: {r.verdict.value}, {len(r.circle_witnesses)} circle witnesses, "
                     f"max cos err {err:.2g}")
    r = huang_test(clear_negative_exponents(wave_q0(4.0)), 2048)
    # independent root: at z1 = -1 the cleared polynomial is z2^2 + (4 lam - 2) z2 + 1
    b = 4 * 4.0 - 2
    oracle = (-b + math.sqrt(b * b - 4)) / 2
    match = [w for w in r.inside_witnesses if abs(w.root - oracle) <= 1e-8]
    good = r.verdict is Verdict.UNSTABLE and bool(match)
    ok &= good
    notes.append(f"lam=4: {r.verdict.value}, inside witness {oracle:.12f} matched={bool(match)}")
    return ok, "; ".join(notes)


def _near(v, targets, step):
    return any(abs(v - t) <= step + 1e-9 for t in targets)


def crit4_spectrum():
    step = 0.05
    with tempfile.TemporaryDirectory() as d:
        out = Path(d) / "slice.csv"
        code = cli_main(["spectrum", "--pde", str(DATA / "poisson3d.json"), "--out", str(out),
                         "--grid", "w1=-4:4:0.05,w2=-4:4:0.05", "--fix", "w3=0.5",
                         "--input", "K=30,a=0.1,0.2,0.3,wp=1,2,3"])
        if code != 0:
            return False, f"cmd_spectrum exit code {code}"
        peaks = json.loads((Path(d) / "slice.peaks.json").read_text())
        rows = np.genfromtxt(out, delimiter=",", skip_header=2)
    notes, ok = [], True
    locs = [p["omega"][:2] for p in peaks["peaks"]]
    placed = all((_near(w1, [0], step) and _near(w2, [0], step))
                 or _near(w1, [-1, 1], step) or _near(w2, [-2, 2], step) for w1, w2 in locs)
    ok &= peaks["count"] == 7 and placed
    notes.append(f"{peaks['count']} peaks, all near carriers={placed}")

    phase = rows[rows[:, 7] == 0, 6]
    in_range = bool(np.all((phase > -math.pi) & (phase <= math.pi)))
    ok &= in_range
    notes.append(f"phase in (-pi, pi]={in_range}")

    for axis, other, carrier in ((0, 1, 1.0), (1, 0, 2.0)):
        sel = (rows[:, other] == 0) & (np.abs(rows[:, axis]) < carrier) & (rows[:, 7] == 0)
        ph = rows[sel][np.argsort(rows[sel, axis]), 6]
        # a zero crossing is a sign change with a small jump, not a +-pi wrap
        cross = np.any((np.sign(ph[:-1]) != np.sign(ph[1:])) & (np.abs(np.diff(ph)) < math.pi))
        ok &= bool(cross)
        notes.append(f"w{axis + 1} axis phase crosses zero={bool(cross)} "
                     f"(range {ph.min():.3f}..{ph.max():.3f})")
    return ok, "; ".join(notes)


def crit5_dft():
    pdes = {"wave": PdeModel.wave(1.0), "poisson2d": PdeModel.poisson(2),
            "ones": PdeModel.from_coefficients(1, 1, 1, 1, 1, 1)}
    worst = 0.0
    for pde in pdes.values():
        for mode in ("paper", "corrected"):
            worst = max(worst, dft_gain_oracle(discrete_sttf(pde, GridSpacing(1, 1), mode), 16, 16))
    return worst <= 1e-10, f"max deviation {worst:.3g} (tol 1e-10)"


def _symbol_ratios(pde, mode, w=(0.7, -1.3)):
    cont = 1 / freq_response(sttf_from_pde(pde), w)
    errs = []
    for h in (0.1, 0.05, 0.025, 0.0125):
        p = discrete_char_poly(pde, GridSpacing(h, h), mode)
        errs.append(abs(p(cmath.exp(1j * w[0] * h), cmath.exp(1j * w[1] * h)) - cont))
    return [errs[i] / errs[i + 1] for i in range(3)]


def crit6_convergence():
    cases = [
        ("wave", PdeModel.wave(1.0), "paper"), ("wave", PdeModel.wave(1.0), "corrected"),
        ("poisson2d", PdeModel.poisson(2), "paper"), ("poisson2d", PdeModel.poisson(2), "corrected"),
        ("b=0 full", PdeModel.from_coefficients(1, 0, 1, 1, 1, 1), "paper"),
        ("b=0 full", PdeModel.from_coefficients(1, 0, 1, 1, 1, 1), "corrected"),
        ("ones", PdeModel.from_coefficients(1, 1, 1, 1, 1, 1), "corrected"),
    ]
    ok, notes = True, []
    for name, pde, mode in cases:
        ratios = _symbol_ratios(pde, mode)
        good = all(3.5 <= r <= 4.5 for r in ratios)
        ok &= good
        if not good:
            notes.append(f"{name}/{mode} ratios {ratios}")
    notes.append(f"symbol ratios in [3.5, 4.5] for {len(cases)} cases" if ok else "")
    data = gaussian_data(1.0)
    errs = [leapfrog_error(data, h, h / 2, 4.0, 1.0) for h in (0.1, 0.05, 0.025, 0.0125)]
    orders = convergence_orders(errs)
    good = all(abs(p - 2) <= 0.3 for p in orders)
    ok &= good
    notes.append("leapfrog orders " + ", ".join(f"{p:.3f}" for p in orders))
    return ok, "; ".join(n for n in notes if n)


def _random_poly(rng, real=False, dim=2):
    n = rng.integers(0, 7)
    terms = {}
    for _ in range(n):
        e = tuple(int(v) for v in rng.integers(-2, 3, dim))
        c = rng.uniform(-10, 10)
        terms[e] = c if real else complex(c, rng.uniform(-10, 10))
    return MultiPoly(dim, terms)


def _random_point(rng, dim=2):
    return [cmath.rect(rng.uniform(0.25, 2), rng.uniform(0, 2 * math.pi)) for _ in range(dim)]


def crit7_properties():
    rng = np.random.default_rng(20240607)
    fails = {"conjugate": 0, "linearity": 0, "clearing": 0, "roots": 0}
    for _ in range(200):
        p, z = _random_poly(rng, real=True), _random_point(rng)
        lhs = p(*[v.conjugate() for v in z])
        if abs(lhs - p(*z).conjugate()) > 1e-12 * (1 + 64 * p.sum_abs_coeff()):
            fails["conjugate"] += 1
    for _ in range(200):
        p, q, z = _random_poly(rng), _random_poly(rng), _random_point(rng)
        scale = 1 + 64 * (p.sum_abs_coeff() + q.sum_abs_coeff())
        if abs((p + q)(*z) - (p(*z) + q(*z))) > 1e-12 * scale:
            fails["linearity"] += 1
    for _ in range(200):
        p, z = _random_poly(rng, real=True), _random_point(rng)
        c = clear_negative_exponents(p)
        rhs = p(*z) * z[0] ** c.clearing_expo[0] * z[1] ** c.clearing_expo[1]
        if c.poly.has_negative_exponents() or abs(c.poly(*z) - rhs) > 1e-12 * 64 * (1 + p.sum_abs_coeff()):
            fails["clearing"] += 1
    for _ in range(200):
        deg = int(rng.integers(1, 6))
        coeffs = rng.uniform(-10, 10, deg + 1) + 1j * rng.uniform(-10, 10, deg + 1)
        if abs(coeffs[0]) < 1:
            coeffs[0] += 1
        tol = 1e-8 * (1 + np.max(np.abs(coeffs)))
        roots = certified_roots(coeffs, tol)
        if len(roots) != deg or any(abs(np.polyval(coeffs, r)) > tol for r in roots):
            fails["roots"] += 1
    return not any(fails.values()), "200 cases each, failures " + json.dumps(fails)


CRITERIA = [
    (1, "dispersion roots +-alpha w1", 1.0, crit1_dispersion),
    (2, "discrete wave Laurent polynomial", None, crit2_wave_poly),
    (3, "wave stability verdicts and witnesses", 30.0, crit3_stability),
    (4, "Poisson spectrum: seven peaks and phase", 10.0, crit4_spectrum),
    (5, "DFT gain oracle", 5.0, crit5_dft),
    (6, "convergence of symbol and leapfrog", 60.0, crit6_convergence),
    (7, "randomized property suites", None, crit7_properties),
]


def _run(number, name, limit, fn):
    try:
        ok, detail = _timed(limit, fn)
    except Exception as exc:  # a crash is a failed criterion, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, f"criterion {number} {'PASS' if ok else 'FAIL'} - {name}: {detail}"


def _make_test(number, name, limit, fn):
    def test(acceptance_log):
        ok, line = _run(number, name, limit, fn)
        acceptance_log.append(line)
        print(line)
        assert ok, line
    test.__name__ = f"test_criterion_{number}"
    return test


for _c in CRITERIA:
    globals()[f"test_criterion_{_c[0]}"] = _make_test(*_c)


if __name__ == "__main__":
    results = [_run(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
