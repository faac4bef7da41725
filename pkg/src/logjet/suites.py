"""Seeded check suites, one per area, producing :class:`CheckReport` records.

Each suite is deterministic given its seed: per-trial generators are derived
from ``(seed, suite, trial)``, never from wall-clock state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .directed import (
    DirectedStructure,
    constraint_polynomials,
    integrate_germ,
    is_directed_jet,
    log_constraint_polynomials,
    pulled_back_constraint_value,
)
from .errors import ConfigurationError
from .jetcore import CurveJet, Jet1, Reparam, jet_compose, jet_exp, jet_log
from .jetdiff import (
    check_equivariance,
    d_operator,
    default_schedule,
    normalized_derivative_check,
    theta_sequence,
    wronskian_dependence,
    wronskian_polynomial,
)
from .linalg import scalar_det
from .logcoords import LogChart, g_polynomials, hat_from_log, log_from_hat, to_log_coords
from .polynomial import JetPolynomial
from .sampling import gaussian_int, random_curve, random_jet, random_reparam, trial_rng
from .scalars import magnitude
from .semple import change_chart, chart_coords, check_lift_invariance, lift_curve, project, projectivized_lift
from .theta import (
    LatticeVector,
    ThetaSeries,
    quasi_periodicity_check,
    sample_points,
    translation_invariance_check,
    wronskian_theta,
)

__all__ = ["CheckReport", "SUITES", "run_suite", "run_all"]

G_EXPECTED = ("0", "Z_1^2", "3*Z_1*Z_2+Z_1^3")
THETA_AT_ZERO = "1.0864348112133080145753161215102234570702057072452"


@dataclass
class CheckReport:
    check: str
    params: dict
    trials: int
    failures: int
    max_residual: float
    seed: object
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_record(self, timing: bool = False) -> dict:
        rec = {
            "check": self.check,
            "params": self.params,
            "trials": self.trials,
            "failures": self.failures,
            "max_residual": float(self.max_residual),
            "seed": self.seed,
        }
        if timing:
            rec["elapsed"] = round(self.elapsed, 6)
        if self.details:
            rec["details"] = self.details
        return rec


class _Tally:
    """Counts trials and failures for one named check."""

    def __init__(self, name: str, params: dict, seed):
        self.name, self.params, self.seed = name, params, seed
        self.trials = self.failures = 0
        self.worst = 0.0
        self.details: dict = {}
        self.start = time.perf_counter()

    def record(self, ok: bool, residual: float = 0.0, witness=None):
        self.trials += 1
        self.worst = max(self.worst, float(residual))
        if not ok:
            self.failures += 1
            if witness is not None and "first_failure" not in self.details:
                self.details["first_failure"] = witness

    def report(self) -> CheckReport:
        return CheckReport(self.name, self.params, self.trials, self.failures, self.worst,
                           self.seed, time.perf_counter() - self.start, self.details)


# --- 1: jets and the reparametrization group -----------------------------

def suite_jetcore(seed=42, trials: int = 500) -> list[CheckReport]:
    params = {"trials": trials, "max_order": 6}
    assoc = _Tally("jetcore.composition_associativity", params, seed)
    group = _Tally("jetcore.group_law", params, seed)
    closure = _Tally("jetcore.unipotent_closure", params, seed)
    logexp = _Tally("jetcore.log_exp_roundtrip", params, seed)
    for t in range(trials):
        rng = trial_rng(f"{seed}:jetcore", t)
        k = rng.randint(1, 6)
        g = random_jet(rng, k)
        phi, psi, chi = (random_reparam(rng, k) for _ in range(3))
        assoc.record(jet_compose(jet_compose(g, phi), psi) == jet_compose(g, phi.compose(psi))
                     and phi.compose(psi).compose(chi) == phi.compose(psi.compose(chi)))
        ident = Reparam.identity(k)
        inv = phi.inverse()
        group.record(phi.compose(inv) == ident and inv.compose(phi) == ident
                     and phi.compose(ident) == phi and ident.compose(phi) == phi)
        u, v = random_reparam(rng, k, unipotent=True), random_reparam(rng, k, unipotent=True)
        closure.record(u.compose(v).is_unipotent and u.inverse().is_unipotent)
        f = random_jet(rng, k, nonzero_value=True)
        h = Jet1((0,) + jet_log(f))
        logexp.record(jet_exp(h) * f.derivs[0] == f)
    return [assoc.report(), group.report(), closure.report(), logexp.report()]


# --- 2: logarithmic coordinates -------------------------------------------

def suite_logcoords(seed=42, trials: int = 300) -> list[CheckReport]:
    gcheck = _Tally("logcoords.g_polynomials", {"k": 3}, seed)
    texts = tuple(g.to_text("order") for g in g_polynomials(3))
    gcheck.record(texts == G_EXPECTED, witness={"got": list(texts)})
    # independent route: d^j exp(w) through jet arithmetic
    gfit = _Tally("logcoords.g_against_exp_jets", {"trials": 50, "k": 6}, seed)
    gs = g_polynomials(6)
    for t in range(50):
        rng = trial_rng(f"{seed}:gfit", t)
        w = random_jet(rng, 6).centered()
        e = jet_exp(w)
        ok = all(e.derivs[j] == w.derivs[j] + gs[j - 1].evaluate(lambda v: w.derivs[v[2]])
                 for j in range(1, 7))
        gfit.record(ok)
    params = {"trials": trials, "max_n": 4, "max_order": 6}
    rt = _Tally("logcoords.roundtrip", params, seed)
    for t in range(trials):
        rng = trial_rng(f"{seed}:logcoords", t)
        n, k = rng.randint(1, 4), rng.randint(1, 6)
        l = rng.randint(0, n)
        chart = LogChart(n, l)
        f = random_curve(rng, n, k, nonzero_values=chart.log_indices)
        Z = to_log_coords(f, chart)
        rt.record(hat_from_log(Z) == f and log_from_hat(f, chart) == Z)
    return [gcheck.report(), gfit.report(), rt.report()]


# --- 3: directed jets -------------------------------------------------------

def _random_poly(rng, n: int, degree: int) -> JetPolynomial:
    p = JetPolynomial()
    for _ in range(rng.randint(1, 3)):
        mono = JetPolynomial.constant(gaussian_int(rng, bound=3, nonzero=True, real=True))
        for _ in range(rng.randint(0, degree)):
            mono = mono * JetPolynomial.var(("z", rng.randint(1, n), 0))
        p = p + mono
    return p


def random_structure(rng, max_n: int = 3, max_r: int = 2, degree: int = 2) -> DirectedStructure:
    n = rng.randint(2, max_n)
    r = rng.randint(1, min(max_r, n - 1))
    A = tuple(sorted(rng.sample(range(1, n + 1), r)))
    B = [i for i in range(1, n + 1) if i not in A]
    a = {(i, m): _random_poly(rng, n, degree) for i in B for m in A if rng.random() < 0.8}
    return DirectedStructure(n, A, a)


def suite_directed(seed=42, structures: int = 100, points: int = 10) -> list[CheckReport]:
    params = {"structures": structures, "max_n": 3, "max_r": 2, "coefficient_degree": 2, "max_order": 4}
    integ = _Tally("directed.integrate_residuals", params, seed)
    psi = _Tally("directed.psi_factorization", dict(params, points=points), seed)
    for s in range(structures):
        rng = trial_rng(f"{seed}:directed", s)
        ds = random_structure(rng)
        k = rng.randint(1, 4)
        l = rng.randint(0, ds.n)
        chart = LogChart(ds.n, l)
        nonzero = set(chart.log_indices)
        # holomorphic constraints P
        free = [random_jet(rng, k) for _ in ds.A]
        base = [gaussian_int(rng) for _ in range(ds.n)]
        f = integrate_germ(ds, free, base)
        rep = is_directed_jet(to_log_coords(f, LogChart(ds.n, 0)), constraint_polynomials(ds, k))
        integ.record(rep.ok, rep.max_residual)
        # logarithmic constraints Q
        free = [random_jet(rng, k, nonzero_value=(m in nonzero)) for m in ds.A]
        base = [gaussian_int(rng, nonzero=(i in nonzero)) for i in range(1, ds.n + 1)]
        f = integrate_germ(ds, free, base, chart)
        cs = log_constraint_polynomials(ds, chart, k)
        rep = is_directed_jet(to_log_coords(f, chart), cs)
        integ.record(rep.ok, rep.max_residual)
        for _ in range(points):
            x = [gaussian_int(rng, nonzero=(i in nonzero)) for i in range(1, ds.n + 1)]
            W = [tuple(gaussian_int(rng) for _ in range(k)) for _ in range(ds.n)]
            vals = {("z", i, 0): x[i - 1] for i in range(1, ds.n + 1)}
            vals.update({("Z", i, j): W[i - 1][j - 1] for i in range(1, ds.n + 1) for j in range(1, k + 1)})
            worst = 0.0
            ok = True
            for (h, i), q in cs.polys.items():
                d = q.evaluate(vals) - pulled_back_constraint_value(ds, chart, h, i, x, W)
                if d != 0:
                    ok = False
                    worst = max(worst, magnitude(d))
            psi.record(ok, worst)
    return [integ.report(), psi.report()]


# --- 4: Semple tower --------------------------------------------------------

def _regular_curve(rng, n: int, k: int, chart: LogChart, need=()) -> CurveJet:
    """Random curve jet with ``Z^i_1 != 0`` for ``i`` in ``need`` (some i if empty)."""
    while True:
        f = random_curve(rng, n, k, nonzero_values=chart.log_indices)
        firsts = [to_log_coords(f, chart).entry(i, 1) for i in range(1, n + 1)]
        if all(firsts[i - 1] != 0 for i in need) and any(x != 0 for x in firsts):
            return f


def suite_semple(seed=42, germs: int = 100) -> list[CheckReport]:
    params = {"germs": germs, "max_order": 5}
    tower = _Tally("semple.projection_compatibility", params, seed)
    series = _Tally("semple.series_agreement", params, seed)
    inv = _Tally("semple.reparametrization_invariance", params, seed)
    overlap = _Tally("semple.chart_overlap", params, seed)
    for t in range(germs):
        rng = trial_rng(f"{seed}:semple", t)
        n, k = rng.randint(2, 3), rng.randint(1, 5)
        chart = LogChart(n, rng.randint(0, n))
        f = _regular_curve(rng, n, k, chart)
        top = lift_curve(f, k, chart=chart)
        tower.record(all(project(top, j) == lift_curve(f.truncate(j), j, chart=chart) for j in range(1, k + 1))
                     and project(top, 0).base == top.base)
        Z = to_log_coords(f, chart)
        levels = projectivized_lift(Z, k, top.rho)
        agree = all(lv.rho == top.rho and tuple(lv.values[i] for i in top.others) == top.blocks[j]
                    for j, lv in enumerate(levels))
        series.record(agree and len(levels) == k)
        for unip in (False, True):
            phi = random_reparam(rng, k, unipotent=unip)
            rep = check_lift_invariance(f, phi, chart=chart)
            inv.record(rep.ok, rep.line_residual,
                       witness={"scalar": str(rep.scalar), "expected": str(rep.expected)})
        g = _regular_curve(rng, n, k, chart, need=(1, 2))
        Zg = to_log_coords(g, chart)
        p1, p2 = chart_coords(Zg, 1), chart_coords(Zg, 2)
        q2 = change_chart(p1, 2)
        overlap.record(q2 == p2 and q2.line == p2.line and change_chart(p2, 1) == p1)
    return [tower.report(), series.report(), inv.report(), overlap.report()]


# --- 5: invariance of jet differentials ------------------------------------

def suite_equivariance(seed=42, trials: int = 200) -> list[CheckReport]:
    out = []
    for r in (1, 2, 3):
        start = time.perf_counter()
        W = wronskian_polynomial(r)
        m = r * (r + 1) // 2
        rep = check_equivariance(W, m, trials, seed=f"{seed}:wronskian{r}", k=r)
        details = {"expression": W.to_text(), "weight": W.weighted_degree()}
        if rep.witness:
            details["first_failure"] = rep.witness
        ok_weight = W.weighted_degree() == m
        out.append(CheckReport(f"equivariance.wronskian_r{r}", {"r": r, "m": m, "k": r, "trials": trials},
                               rep.trials, rep.failures + (0 if ok_weight else 1), rep.max_residual,
                               seed, time.perf_counter() - start, details))
    start = time.perf_counter()
    Q = JetPolynomial.var(("Z", 1, 2))
    rep = check_equivariance(Q, 2, 20, seed=f"{seed}:counterexample", k=2)
    detected = rep.failures > 0 and rep.witness is not None
    out.append(CheckReport("equivariance.counterexample_detected", {"expression": "Z[1,2]", "m": 2, "k": 2},
                           rep.trials, 0 if detected else 1, 0.0, seed, time.perf_counter() - start,
                           {"non_invariant_trials": rep.failures, "witness": rep.witness}))
    return out


# --- 6: d-operator and the normalized derivative identity ------------------

def _partitions(m: int, max_part: int):
    if m == 0:
        yield ()
        return
    for p in range(min(m, max_part), 0, -1):
        for rest in _partitions(m - p, p):
            yield (p,) + rest


def random_homogeneous(rng, m: int, n: int, k: int, with_base: bool = True) -> JetPolynomial:
    parts = list(_partitions(m, k))
    poly = JetPolynomial()
    for _ in range(rng.randint(1, 3)):
        mono = JetPolynomial.constant(gaussian_int(rng, bound=3, nonzero=True))
        for j in rng.choice(parts):
            mono = mono * JetPolynomial.var(("Z", rng.randint(1, n), j))
        if with_base and rng.random() < 0.3:
            mono = mono * JetPolynomial.var(("z", rng.randint(1, n), 0))
        poly = poly + mono
    if poly.is_zero():
        return JetPolynomial.var(("Z", 1, 1)) ** m
    return poly


def suite_main_lemma(seed=42, pairs: int = 50, germs: int = 50) -> list[CheckReport]:
    weight = _Tally("main_lemma.d_operator_weight", {"pairs": pairs}, seed)
    for t in range(pairs):
        rng = trial_rng(f"{seed}:dweight", t)
        m, n, k = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
        s, u = random_homogeneous(rng, m, n, k), random_homogeneous(rng, m, n, k)
        d = d_operator(s, u)
        weight.record(d.is_homogeneous(2 * m + 1) and (d.is_zero() or d.weighted_degree() == 2 * m + 1))
    norm = _Tally("main_lemma.normalized_derivative", {"germs": germs, "max_l": 3, "max_k": 3}, seed)
    for t in range(germs):
        rng = trial_rng(f"{seed}:normalized", t)
        n, k, l = rng.randint(2, 3), rng.randint(1, 3), rng.randint(0, 3)
        rest = [random_jet(rng, k + l) for _ in range(n - 1)]
        f = CurveJet([Jet1.variable(k + l)] + rest)
        N = random_homogeneous(rng, rng.randint(1, 3), n, k)
        e = rng.randint(0, 2)
        rep = normalized_derivative_check((N, e), f, k, l)
        norm.record(rep.ok, rep.max_residual)
    seq = _Tally("main_lemma.theta_sequence", {"L": 3}, seed)
    for theta, k in ((wronskian_polynomial(2), 2), (JetPolynomial.var(("Z", 2, 1)), 1),
                     (JetPolynomial.var(("Z", 2, 1)) * JetPolynomial.var(("Z", 1, 2)), 2)):
        m = theta.weighted_degree()
        sched = default_schedule(k, m, 3)
        thetas = theta_sequence(theta, schedule=sched, k=k)
        ok = all(th.is_homogeneous(sched[l]) and not th.is_zero() and th.max_order() <= k + l
                 for l, th in enumerate(thetas))
        seq.record(ok and len(thetas) == 4, witness={"schedule": sched})
    try:
        theta_sequence(wronskian_polynomial(2), schedule=[9, 15], k=2)
        seq.record(False, witness={"accepted_invalid_schedule": [9, 15]})
    except ConfigurationError:
        seq.record(True)
    return [weight.report(), norm.report(), seq.report()]


# --- 7: theta function ------------------------------------------------------

def suite_theta(seed=42, germs: int = 8, tau=None, N: int = 30, prec: int = 256,
                tol: float = 1e-10) -> list[CheckReport]:
    T = ThetaSeries(tau, N, prec, tol)
    T2 = ThetaSeries(tau, 2 * N, prec, tol)
    ctx = T.ctx
    params = {"tau": ctx.nstr(T.tau, 15), "N": N, "prec": prec, "tol": tol}
    per = _Tally("theta.periodicity", params, seed)
    pts = sample_points(T, 6, seed)
    for z in pts:
        r1 = float(abs(T(z + 1) - T(z)))
        r2 = float(abs(T(-z) - T(z)))
        per.record(r1 < 1e-12 and r2 < 1e-12, max(r1, r2))
    if tau is None:
        r0 = float(abs(T(0) - ctx.mpf(THETA_AT_ZERO)))
        per.record(r0 < 1e-12, r0)
    quasi = _Tally("theta.quasi_periodicity", params, seed)
    for gamma in (LatticeVector(1, 0), LatticeVector(0, 1), LatticeVector(1, 1), LatticeVector(0, 0)):
        q = quasi_periodicity_check(T, gamma, seed=seed)
        worst = max(q.alpha_error, q.beta_error, q.residual)
        quasi.record(worst < tol, worst, witness={"gamma": [gamma.p, gamma.q]})
    trans = _Tally("theta.translation_invariance", params, seed)
    scale = _Tally("theta.reparametrization_scaling", params, seed)
    stable = _Tally("theta.truncation_stability", params, seed)
    for t in range(germs):
        rng = trial_rng(f"{seed}:theta", t)
        while True:
            f = random_curve(rng, 1, 2, real=False)
            f0 = T.big(f.coords[0].derivs[0]) / 5
            jet = CurveJet([Jet1((f0,) + tuple(T.big(x) for x in f.coords[0].derivs[1:]))])
            if abs(T(f0)) > 1e-3 and abs(T(f0 + T.tau)) > 1e-3:
                break
        for gamma in (LatticeVector(1, 0), LatticeVector(0, 1)):
            rep = translation_invariance_check(jet, gamma, T)
            worst = max(rep.residual, rep.column_residual)
            trans.record(worst < tol, worst)
        phi = random_reparam(rng, 2)
        v = wronskian_theta(jet, T)
        w = wronskian_theta(jet.reparametrize(Reparam([T.big(x) for x in phi.derivs])), T)
        c = T.big(phi.first)
        res = float(abs(w - c ** 3 * v) / max(1, abs(c ** 3 * v)))
        scale.record(res < tol, res)
        v2 = wronskian_theta(jet, T2)
        res2 = float(abs(v2 - v))
        stable.record(res2 < tol, res2)
    for z in pts:
        res = float(abs(T2(z) - T(z)))
        stable.record(res < tol, res)
    return [per.report(), quasi.report(), trans.report(), scale.report(), stable.report()]


# --- 8: Wronskian dependence -----------------------------------------------

def _independent_family(rng, m: int, K: int) -> list[Jet1]:
    """m jets of order K, independent by construction (triangular, then mixed)."""
    fam = []
    for i in range(m):
        d = [0] * (K + 1)
        d[i] = gaussian_int(rng, nonzero=True)
        for j in range(i + 1, K + 1):
            d[j] = gaussian_int(rng)
        fam.append(Jet1(d))
    mixed = []
    for i in range(m):
        g = fam[i]
        for j in range(i + 1, m):
            g = g + fam[j] * gaussian_int(rng, bound=3)
        mixed.append(g)
    rng.shuffle(mixed)
    return mixed


def suite_dependence(seed=42, families: int = 100) -> list[CheckReport]:
    dep = _Tally("dependence.planted_relations", {"families": families}, seed)
    ind = _Tally("dependence.independent_families", {"families": families}, seed)
    for t in range(families):
        rng = trial_rng(f"{seed}:dependence", t)
        m = rng.randint(2, 4)
        K = m + rng.randint(0, 2)
        base = _independent_family(rng, m - 1, K)
        c = [gaussian_int(rng, nonzero=True) for _ in range(m - 1)]
        last = Jet1.zero(K)
        for ci, g in zip(c, base):
            last = last + g * ci
        fam = base + [last]
        res = wronskian_dependence(fam)
        planted = c + [-1]
        ok = res.dependent
        if ok:
            coeffs = res.coefficients
            lead = planted[0]
            ok = all(x * lead == y * coeffs[0] for x, y in zip(coeffs, planted))
            total = Jet1.zero(K)
            for ci, g in zip(coeffs, fam):
                total = total + g * ci
            ok = ok and total == Jet1.zero(K)
        dep.record(ok)
        m2 = rng.randint(1, 4)
        fam2 = _independent_family(rng, m2, m2 + rng.randint(0, 2))
        res2 = wronskian_dependence(fam2)
        ok2 = not res2.dependent and res2.minor_value != 0
        if ok2:
            rows = [[g.derivs[j] for g in fam2] for j in res2.minor_rows]
            ok2 = scalar_det(rows) == res2.minor_value
        ind.record(ok2)
    return [dep.report(), ind.report()]


SUITES = {
    "jetcore": suite_jetcore,
    "logcoords": suite_logcoords,
    "directed": suite_directed,
    "semple": suite_semple,
    "equivariance": suite_equivariance,
    "main_lemma": suite_main_lemma,
    "theta": suite_theta,
    "dependence": suite_dependence,
}


def run_suite(name: str, seed=42) -> list[CheckReport]:
    return SUITES[name](seed=seed)


def run_all(seed=42) -> list[CheckReport]:
    out = []
    for name in SUITES:
        out.extend(run_suite(name, seed))
    return out
