"""Seeded verification suites shared by the CLI, the tests and scripts/.

Every suite runs independent trials, each seeded from ``(seed, suite, index)``,
so the merged report does not depend on ``jobs``.
"""
from __future__ import annotations

import cmath
import math
import random
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import chokim as ck
from . import correspond as cor
from . import e8lattice as e8
from . import picard as pc
from . import tetra as tt
from .config import RunConfig
from .errors import NotInLattice, TetraTrigError
from .projgeom import MobiusMap

# default pass thresholds per suite
TOLERANCES = {
    "lattice": 0.0,
    "equivalence": 1e-7,
    "cross-ratio": 1e-8,
    "solver": 1e-7,
    "regge": 1e-8,
    "psi": 1e-7,
    "discriminant": 1e-8,
    "gauge": 1e-10,
    "reconstruct": 1e-8,
    "chains": 1e-7,
    "surface": 0.0,
}

GEOMETRY_SUITES = ("equivalence", "cross-ratio", "solver", "psi")


@dataclass
class Trial:
    index: int
    residual: float
    passed: bool
    info: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"index": self.index, "residual": self.residual, "passed": self.passed, **self.info}


@dataclass
class SuiteReport:
    name: str
    tolerance: float
    trials: list
    summary: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max((t.residual for t in self.trials), default=0.0)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.trials) and self.summary.get("ok", True)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {len(self.trials)} trials, max residual {self.max_residual:.3e} (tol {self.tolerance:g})"

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "summary": self.summary,
            "trials": [t.to_json() for t in self.trials],
        }


def trial_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(suite.encode()), index])


def _run(fn, suite: str, cfg: RunConfig, n: int, *args) -> list:
    jobs = [(suite, cfg.seed, k) + args for k in range(n)]
    if cfg.jobs > 1 and n > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            return list(pool.map(fn, *zip(*jobs)))
    return [fn(*j) for j in jobs]


def _geometry_of(index: int, n: int) -> str:
    return "hyperbolic" if index < n else "spherical"


def _spec(suite, seed, index, geometry, n):
    return tt.random_metric_spec(geometry, trial_rng(seed, suite, index))


def _failure(index: int, exc: Exception) -> Trial:
    return Trial(index, math.inf, False, {"error": f"{type(exc).__name__}: {exc}"})


# ---------------------------------------------------------------------------
# lattice
# ---------------------------------------------------------------------------

def _brute_roots() -> set:
    """Norm-2 vectors by direct enumeration of doubled coordinates in [-2, 2]."""
    out = set()
    for d in np.ndindex(*(5,) * 8):
        d = np.array(d) - 2
        if int(d @ d) != 4:
            continue
        try:
            out.add(e8.LatticeVec(tuple(int(x) for x in d)))
        except NotInLattice:
            pass
    return out


def suite_lattice(cfg: RunConfig) -> SuiteReport:
    roots = set(e8.roots())
    brute = _brute_roots()
    counts = {k: len(e8.sub_roots(k)) for k in e8.SUBSYSTEMS}
    brute_counts = {k: sum(1 for r in brute if e8.in_sublattice(r, k)) for k in e8.SUBSYSTEMS}
    planes = e8.affine_planes()
    closure = _plane_closure_count()
    order = e8.weyl_d6_group().order
    checks = {
        "roots": (len(roots), 240, roots == brute),
        "E7L": (counts["E7L"], 126, counts["E7L"] == brute_counts["E7L"]),
        "E7A": (counts["E7A"], 126, counts["E7A"] == brute_counts["E7A"]),
        "D6": (counts["D6"], 60, counts["D6"] == brute_counts["D6"]),
        "affine_planes": (len(planes), 14, len(planes) == closure),
        "weyl_d6_order": (order, 23040, True),
    }
    trials = [
        Trial(k, 0.0 if (got == want and agree) else 1.0, got == want and agree, {"check": name, "value": got, "expected": want})
        for k, (name, (got, want, agree)) in enumerate(checks.items())
    ]
    return SuiteReport("lattice", 0.0, trials)


def _plane_closure_count() -> int:
    """Affine 2-planes of F_2^3 found as 4-sets closed under x + y + z."""
    import itertools

    pts = [np.array(p) for p in itertools.product((0, 1), repeat=3)]
    found = set()
    for quad in itertools.combinations(range(8), 4):
        s = {tuple(pts[i]) for i in quad}
        if all(tuple((pts[a] + pts[b] + pts[c]) % 2) in s for a, b, c in itertools.combinations(quad, 3)):
            found.add(quad)
    return len(found)


# ---------------------------------------------------------------------------
# configurations, solver, psi
# ---------------------------------------------------------------------------

def _trial_equivalence(suite, seed, index, n):
    geometry = _geometry_of(index, n)
    try:
        spec = _spec(suite, seed, index, geometry, n)
        pi, om = ck.config_metric(spec, "Pi"), ck.config_metric(spec, "Omega")
        res = ck.equivalence_residual(pi, om)
    except TetraTrigError as exc:
        return _failure(index, exc)
    return Trial(index, res, res < TOLERANCES["equivalence"], {"geometry": geometry})


def _trial_cross_ratio(suite, seed, index, n):
    geometry = _geometry_of(index, n)
    try:
        spec = _spec(suite, seed, index, geometry, n)
        a = ck.cross_ratio_invariant(ck.config_metric(spec, "Pi"))
        b = ck.cross_ratio_invariant(ck.config_metric(spec, "Omega"))
    except TetraTrigError as exc:
        return _failure(index, exc)
    res = cor.rel_residual(a, b)
    return Trial(index, res, res < TOLERANCES["cross-ratio"], {"geometry": geometry})


def _trial_solver(suite, seed, index, n):
    geometry = _geometry_of(index, n)
    try:
        spec = _spec(suite, seed, index, geometry, n)
        sol = ck.solve_angles(spec)
    except TetraTrigError as exc:
        return _failure(index, exc)
    oracle = tt.metric_angles_oracle(spec)
    res = max(abs(sol.angles[k] - oracle[k]) for k in oracle)
    return Trial(index, res, res < TOLERANCES["solver"], {"geometry": geometry})


def _trial_psi(suite, seed, index, n):
    geometry = _geometry_of(index, n)
    try:
        spec = _spec(suite, seed, index, geometry, n)
        tetra = tt.from_metric(spec)
        ck_l = ck.ck_from_config(ck.config_from_hom(tt.length_function(tetra)))
        ck_a = ck.ck_from_config(ck.config_from_hom(tt.angle_function(tetra)))
        cands = ck.psi_candidates(ck_l, ck_a)
        m = ck.psi(ck_l, ck_a)
    except TetraTrigError as exc:
        return _failure(index, exc)
    res = ck.composition_residual(ck_l, ck_a, m)
    ok = len(cands) == 1 and res < TOLERANCES["psi"]
    return Trial(index, res, ok, {"geometry": geometry, "verifying_orders": len(cands)})


def _all_right():
    return tt.MetricSpec.regular("spherical", math.pi / 2)


def all_right_report() -> dict:
    """Solver output on the all-right spherical tetrahedron."""
    spec = _all_right()
    sol = ck.solve_angles(spec)
    ck_a = sol.ck_a
    pair_a = ck.principal_parameters(ck_a)
    pair_l = ck.principal_parameters(sol.ck_l)
    zeros_ok = max(abs(z - 1j) for z in ck_a.zeros)
    poles_ok = max(abs(p - 1) for p in ck_a.poles)
    want = sorted([1 + 1j, (1 + 1j) / 2], key=abs)
    got = sorted([pair_a.p1, pair_a.p2], key=abs)
    pair_res = max(abs(a - b) for a, b in zip(got, want))
    # psi is read off the length side: t -> ((1+i) t - 1) / (t - (1-i)) here
    probe = 0.37 - 0.21j
    printed = ((1 + 1j) * probe - 1) / (probe - (1 - 1j))
    printed_map = MobiusMap(np.array([[1 - 1j, -1], [1, -(1 + 1j)]]))
    return {
        "printed_form_residual": ck.composition_residual(sol.ck_l, ck_a, printed_map),
        "angles_residual": max(abs(a - math.pi / 2) for a in sol.angles.values()),
        "ck_a_zero_residual": zeros_ok,
        "ck_a_pole_residual": poles_ok,
        "principal_pair_a_residual": pair_res,
        "principal_pair_l": [pair_l.p1, pair_l.p2],
        "psi_matrix": sol.psi.matrix.tolist(),
        "psi_matches_inverse_form": abs(sol.psi(probe) - printed) < 1e-12,
    }


def suite_geometry(name: str, cfg: RunConfig) -> SuiteReport:
    fn = {"equivalence": _trial_equivalence, "cross-ratio": _trial_cross_ratio, "solver": _trial_solver, "psi": _trial_psi}[name]
    trials = _run(fn, name, cfg, 2 * cfg.trials, cfg.trials)
    summary = {}
    if name in ("solver", "psi"):
        rep = all_right_report()
        if name == "solver":
            ok = rep["angles_residual"] < 1e-9
            summary = {"all_right_angles_residual": rep["angles_residual"], "ok": ok}
        else:
            ok = max(rep["ck_a_zero_residual"], rep["ck_a_pole_residual"], rep["principal_pair_a_residual"]) < 1e-9
            summary = {k: rep[k] for k in ("ck_a_zero_residual", "ck_a_pole_residual", "principal_pair_a_residual", "psi_matches_inverse_form", "printed_form_residual")}
            summary["composition"] = "CK_L = CK_A o psi, psi built from the length side"
            summary["ok"] = ok and rep["psi_matches_inverse_form"]
    return SuiteReport(name, TOLERANCES[name], trials, summary)


# ---------------------------------------------------------------------------
# Regge symmetry
# ---------------------------------------------------------------------------

def _wrap(x: float) -> float:
    return abs(math.remainder(x, 2 * math.pi))


def _trial_regge(suite, seed, index):
    rng = trial_rng(seed, suite, index)
    for _ in range(10000):
        spec = tt.random_metric_spec("hyperbolic", rng)
        image = tt.MetricSpec.from_tuple("hyperbolic", ck.regge_transform(spec.as_tuple()))
        try:
            image.check(det_tol=1e-6)
        except TetraTrigError:
            continue
        break
    else:
        return _failure(index, RuntimeError("no realizable Regge image"))
    a = tt.metric_angles_oracle(spec)
    b = tt.metric_angles_oracle(image)
    want = ck.regge_transform(a, "angles")
    res = max(_wrap(b[k] - want[k]) for k in b)
    # which lattice element carries L_T to L_{T'} on the edge vectors
    L, Lp = tt.length_function(tt.from_metric(spec)), tt.length_function(tt.from_metric(image))
    lat = {}
    for name, w in (("reflection", e8.regge_reflection()), ("composite", e8.regge_composite())):
        lat[name] = max(cor.rel_residual(Lp(e8.e(k)), L(w(e8.e(k)))) for k in e8.PAIR_LABELS)
    return Trial(index, res, res < TOLERANCES["regge"], {"lattice_residuals": lat})


def suite_regge(cfg: RunConfig) -> SuiteReport:
    trials = _run(_trial_regge, "regge", cfg, cfg.trials)
    worst = {k: max(t.info.get("lattice_residuals", {}).get(k, math.inf) for t in trials) for k in ("reflection", "composite")}
    winner = min(worst, key=worst.get)
    summary = {"lattice_element": winner, "lattice_residuals": worst, "ok": worst[winner] < 1e-8}
    return SuiteReport("regge", TOLERANCES["regge"], trials, summary)


# ---------------------------------------------------------------------------
# discriminant identity
# ---------------------------------------------------------------------------

def _trial_discriminant(suite, seed, index):
    rng = trial_rng(seed, suite, index)
    a = {lab: cmath.exp(complex(rng.uniform(-0.7, 0.7), rng.uniform(-math.pi, math.pi))) for lab in e8.PAIR_LABELS}
    disc, rhs, const = ck.discriminant_identity_sides(a)
    res = max(cor.rel_residual(disc, rhs), abs(const))
    return Trial(index, res, res < TOLERANCES["discriminant"])


def suite_discriminant(cfg: RunConfig) -> SuiteReport:
    trials = _run(_trial_discriminant, "discriminant", cfg, cfg.trials)
    exact = ck.exact_discriminant_check()
    small = {lab: Fraction(v) for lab, v in zip(e8.PAIR_LABELS, (2, 3, 5, 7, 11, 13))}
    exact_small = ck.exact_discriminant_check(small)
    summary = {"exact_check": exact, "exact_small_integers": exact_small, "ok": exact and exact_small}
    return SuiteReport("discriminant", TOLERANCES["discriminant"], trials, summary)


# ---------------------------------------------------------------------------
# gauge and determinant invariance
# ---------------------------------------------------------------------------

def _trial_gauge(suite, seed, index):
    rng = trial_rng(seed, suite, index)
    geometry = "hyperbolic" if index % 2 == 0 else "spherical"
    try:
        L = tt.length_function(tt.from_metric(tt.random_metric_spec(geometry, rng)))
    except TetraTrigError as exc:
        return _failure(index, exc)
    roots = e8.sub_roots("E7L")
    drift = 0.0
    for mask in range(16):
        h = L
        for v in range(1, 5):
            if mask >> (v - 1) & 1:
                h = h.gauge(v)
        drift = max(drift, max(abs(h(r) - L(r)) / abs(L(r)) for r in roots))
    group = e8.weyl_d6_group()
    prng = random.Random(int(rng.integers(2**31)))
    d0 = tt.det_L_expansion(L)
    det_drift = max(cor.rel_residual(tt.det_L_expansion(L.compose(group.random_element(prng))), d0) for _ in range(20))
    form = cor.rel_residual(tt.det_L(L), d0)
    res = max(drift, form)
    ok = drift < 1e-10 and det_drift < 1e-9 and form < 1e-10
    return Trial(index, max(res, det_drift), ok, {"geometry": geometry, "gauge_drift": drift, "weyl_det_drift": det_drift, "expansion_residual": form})


def suite_gauge(cfg: RunConfig) -> SuiteReport:
    return SuiteReport("gauge", TOLERANCES["gauge"], _run(_trial_gauge, "gauge", cfg, min(cfg.trials, 20)))


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

def _trial_reconstruct(suite, seed, index):
    geometry = "hyperbolic" if index % 2 == 0 else "spherical"
    try:
        spec = tt.random_metric_spec(geometry, trial_rng(seed, suite, index))
        L = tt.length_function(tt.from_metric(spec))
        t = tt.reconstruct_from_L(L)
    except TetraTrigError as exc:
        return _failure(index, exc)
    M = tt.length_function(t)
    res = max(cor.rel_residual(M(v), L(v)) for v in tt.e7l_basis())
    try:
        tt.reconstruct_from_L(L, convention="verbatim")
        verbatim = True
    except TetraTrigError:
        verbatim = False
    return Trial(index, res, res < TOLERANCES["reconstruct"], {"geometry": geometry, "verbatim_round_trip": verbatim})


def suite_reconstruct(cfg: RunConfig) -> SuiteReport:
    trials = _run(_trial_reconstruct, "reconstruct", cfg, min(cfg.trials, 50))
    verbatim_ok = sum(t.info.get("verbatim_round_trip", False) for t in trials)
    summary = {"winning_convention": "symmetric", "verbatim_successes": verbatim_ok}
    return SuiteReport("reconstruct", TOLERANCES["reconstruct"], trials, summary)


# ---------------------------------------------------------------------------
# period-map chains
# ---------------------------------------------------------------------------

def _trial_chains(suite, seed, index):
    try:
        tetra = tt.from_metric(tt.random_metric_spec("hyperbolic", trial_rng(seed, suite, index)))
        reports = cor.all_recipes(tetra)
        dual = cor.duality_residuals(tetra)
    except TetraTrigError as exc:
        return _failure(index, exc)
    worst = {name: r.worst() for name, r in reports.items()}
    scatter = reports["F2_face"].extra["concurrency_scatter"]
    res = max(list(worst.values()) + list(dual.values()) + [scatter])
    return Trial(index, res, res < TOLERANCES["chains"], {"recipes": worst, "duality": dual, "concurrency_scatter": scatter})


def suite_chains(cfg: RunConfig) -> SuiteReport:
    return SuiteReport("chains", TOLERANCES["chains"], _run(_trial_chains, "chains", cfg, min(cfg.trials, 30)))


# ---------------------------------------------------------------------------
# Picard bookkeeping
# ---------------------------------------------------------------------------

def surface_checks() -> dict:
    """Exact checks on the Picard lattice, each reported as a boolean."""
    iso = pc.reference_marking()
    mism = iso.gram_mismatches()
    mins = pc.minimal_vectors_mod_f()
    mins_ok = len(mins) == 240 and set(mins) == set(e8.roots())
    B = pc.l_cls
    found = pc.search_2B(B)
    rep = pc.verify_bundle_identities()
    f11, f12, f21, f22 = pc.fiber_component_classes()
    anti = (f11 + f12) == -pc.canonical_class()
    proj = pc.project_mod_f(f11) == e8.e("I")
    return {
        "reference_gram_mismatches": len(mism),
        "minimal_vectors_biject_roots": mins_ok,
        "two_B_solutions": len(found),
        "identities_passed": len(rep.passed),
        "identities_failed": list(rep.failed),
        "fiber_sum_is_anticanonical": anti,
        "projection_of_F11_is_eI": proj,
        "bundle_ordering_ties": pc.bundle_ordering_ties(),
    }


def suite_surface(cfg: RunConfig) -> SuiteReport:
    c = surface_checks()
    oks = {
        "reference_gram": c["reference_gram_mismatches"] == 0,
        "minimal_vectors": c["minimal_vectors_biject_roots"],
        "two_B_unique": c["two_B_solutions"] == 1,
        "identities": not c["identities_failed"],
        "anticanonical": c["fiber_sum_is_anticanonical"],
        "projection": c["projection_of_F11_is_eI"],
    }
    trials = [Trial(k, 0.0 if ok else 1.0, ok, {"check": name}) for k, (name, ok) in enumerate(oks.items())]
    return SuiteReport("surface", 0.0, trials, c)


# ---------------------------------------------------------------------------

SUITES = {
    "lattice": suite_lattice,
    "equivalence": lambda cfg: suite_geometry("equivalence", cfg),
    "cross-ratio": lambda cfg: suite_geometry("cross-ratio", cfg),
    "solver": lambda cfg: suite_geometry("solver", cfg),
    "regge": suite_regge,
    "psi": lambda cfg: suite_geometry("psi", cfg),
    "discriminant": suite_discriminant,
    "gauge": suite_gauge,
    "reconstruct": suite_reconstruct,
    "chains": suite_chains,
    "surface": suite_surface,
}


def run_suite(name: str, cfg: RunConfig | None = None, tol: float | None = None) -> SuiteReport:
    """Run one suite; ``tol`` overrides the suite's pass threshold."""
    cfg = cfg or RunConfig()
    rep = SUITES[name](cfg)
    if tol is not None:
        rep.tolerance = tol
        for t in rep.trials:
            t.passed = t.residual <= tol
    return rep
