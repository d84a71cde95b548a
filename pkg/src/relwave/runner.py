"""Per-command verification suites and the aggregated run report."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import action as act
from . import dirac as dr
from . import evolve as ev
from . import maxwell as mx
from . import metric as mt
from . import planewave as pw
from .algebra import algebra_check
from .io import sha256, write_csv, write_json
from .kinematics import Conventions, energy_momentum, lorentz_factor
from .scenario import Scenario

PASS, FAIL, DISCREPANCY = "pass", "fail", "measured-discrepancy"


@dataclass
class Check:
    name: str
    verdict: str
    values: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "values": self.values}
        if self.note:
            out["note"] = self.note
        return out


def bound(name: str, value: float, tol: float, note: str = "", **extra) -> Check:
    """pass iff value <= tol."""
    return Check(name, PASS if value <= tol else FAIL, {"value": float(value), "tolerance": tol, **extra}, note)


def observed(name: str, differs: bool, note: str, **values) -> Check:
    """Measured discrepancy when ``differs``; pass when the two statements agree after all."""
    return Check(name, DISCREPANCY if differs else PASS, values, note)


# --- commands ----------------------------------------------------------------


def run_algebra(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    rep = algebra_check()
    checks = []
    for r in rep.identities:
        if r.source == "stated" and "j sigma" in r.name:
            checks.append(
                observed(
                    f"algebra/{r.name}",
                    not r.holds,
                    "cyclic product sign for the diagonal-sigma1 numbering",
                    residual=None if r.holds else r.residual.as_pairs(),
                )
            )
        else:
            checks.append(Check(f"algebra/{r.name}", PASS if r.holds else FAIL, {"source": r.source}))
    decomps = {}
    for label, idx, expect in (("sigma3,sigma1;sigma2", (3, 1, 2), True), ("sigma1,sigma2;sigma3", (1, 2, 3), True), ("sigma1,sigma1;sigma2", (1, 1, 2), False)):
        d = dr.decomposition_check(dr.DiracAssignment.from_indices(*idx))
        decomps[label] = d.to_dict()
        checks.append(Check(f"algebra/decomposition {label}", PASS if d.passed == expect else FAIL, {"passed": d.passed, "expected": expect}))
    write_json(out / "algebra.json", {**rep.to_dict(), "decompositions": decomps})
    return checks


def run_dispersion(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    table = pw.dispersion_scan(conv, prm["v"])
    table.to_csv(out / "dispersion.csv")
    summary = table.summary()
    checks = [
        bound("dispersion/on-shell residual", max(s["max_abs_dispersion_pair_residual"] for s in summary.values()), 1e-12),
        bound("dispersion/kinematic pair matches closed form", max(s["max_closed_form_mismatch"] for s in summary.values()), 1e-12),
    ]
    r = table.rows(1)
    moving = np.abs(r["v"]) > 0
    worst = float(np.max(np.abs(r["residual_kinematic_pair"][moving]))) if moving.any() else 0.0
    checks.append(
        observed(
            "dispersion/kinematic pair nulls the wave equation",
            worst > 1e-12,
            "E=c^2/w, p=v/w leaves R = c^2/w - c^2/w^2 != 0 for v != 0",
            v=r["v"].tolist(),
            residual=r["residual_kinematic_pair"].tolist(),
        )
    )
    vs = np.logspace(math.log10(prm["slope_v_min"]), math.log10(prm["slope_v_max"]), prm["slope_points"])
    w = lorentz_factor(vs, conv.c, conv.velocity_guard)
    res = np.array([pw.schrodinger_residual(pw.PlaneWave(conv.c ** 2 / wi, vi / wi, conv=conv)) for vi, wi in zip(vs, w)])
    half = np.array([pw.schrodinger_residual(pw.PlaneWave(conv.c ** 2 / wi, vi / wi, conv=conv), kinetic=0.5) for vi, wi in zip(vs, w)])
    slope = pw.loglog_slope(vs, res)
    slope_half = pw.loglog_slope(vs, half)
    checks.append(
        observed(
            "dispersion/small-v slope of kinematic-pair residual is 4",
            abs(slope - 4.0) > 0.1,
            "residual is -v^2/2 to leading order (slope 2); the halved kinetic term gives -v^4/8 (slope 4)",
            slope=slope,
            slope_halved_kinetic=slope_half,
        )
    )
    write_json(out / "dispersion.json", {"summary": summary, "slope": slope, "slope_halved_kinetic": slope_half})
    write_csv(out / "dispersion_slope.csv", {"v": vs, "residual": res, "residual_halved_kinetic": half})
    return checks


def run_dirac(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    vs = np.logspace(math.log10(prm["v_min"]), math.log10(prm["v_max"]), prm["points"])
    beta = prm["beta_s"]
    rows = {k: [] for k in ("v", "det_plus", "det_minus", "ratio_plus_im", "ratio_minus_im", "cross_plus", "cross_minus", "reciprocity", "reduced_magnitude_error")}
    for v in vs:
        kin = energy_momentum(v, conv)
        mp, mm = dr.dirac_matrix(kin, beta, 1, conv), dr.dirac_matrix(kin, beta, -1, conv)
        sp_, sm = dr.null_space(mp, beta, 1), dr.null_space(mm, beta, -1)
        rp, rm = sp_.ratio, sm.ratio
        rows["v"].append(v)
        rows["det_plus"].append(abs(complex(mp.det())))
        rows["det_minus"].append(abs(complex(mm.det())))
        rows["ratio_plus_im"].append(rp.imag)
        rows["ratio_minus_im"].append(rm.imag)
        rows["cross_plus"].append(abs(dr.cross_term_check(sp_)))
        rows["cross_minus"].append(abs(dr.cross_term_check(sm)))
        rows["reciprocity"].append(abs(abs(rp) * abs(rm) - 1.0))
        rows["reduced_magnitude_error"].append(abs(abs(rm) - dr.reduced_ratio_magnitude(v, conv.c)))
    write_csv(out / "dirac_onshell.csv", rows)
    checks = [
        bound("dirac/determinant on shell", max(rows["det_plus"] + rows["det_minus"]), 1e-12),
        bound("dirac/cross term", max(rows["cross_plus"] + rows["cross_minus"]), 1e-12),
        bound("dirac/reciprocal branch magnitudes", max(rows["reciprocity"]), 1e-12),
        bound("dirac/negative-branch magnitude v/(c(1+w))", max(rows["reduced_magnitude_error"]), 1e-12),
    ]
    s_plus = dr.spinor(0.6, beta, 1, conv)
    s_minus = dr.spinor(0.6, beta, -1, conv)
    checks.append(
        observed(
            "dirac/ratio magnitude independent of energy branch",
            abs(abs(s_plus.ratio) - abs(s_minus.ratio)) > 1e-12,
            "the stated magnitude v/(c(1+w)) holds only for E = -c^2/w; E = +c^2/w gives its reciprocal",
            v=0.6,
            ratio_plus=s_plus.ratio,
            ratio_minus=s_minus.ratio,
            reduced_magnitude=dr.reduced_ratio_magnitude(0.6, conv.c),
        )
    )
    coef = dr.elimination_coefficients(conv)
    checks.append(
        observed(
            "dirac/eliminated pair proportional to target equation",
            not coef["proportional"],
            "coefficients of (d/dt, d2/dx2, 1) after eliminating K differ from the target by a non-uniform j pattern",
            eliminated=coef["eliminated"].tolist(),
            time_normalized=coef["time_normalized"].tolist(),
            mass_normalized=coef["mass_normalized"].tolist(),
            target=coef["target"].tolist(),
            ratio_time_normalized=coef["ratio_time_normalized"].tolist(),
        )
    )
    # target equation on a grid plane wave with hbar w = hbar^2 k^2 + c^2
    n, L = 256, 2 * math.pi * 8
    dx = L / n
    x = dx * np.arange(n)
    k = 2 * math.pi * 2 / L
    om = conv.hbar_m * k ** 2 + conv.c ** 2 / conv.hbar_m
    psi = np.exp(1j * k * x)
    lim = dr.schrodinger_limit_residual(dr.GridField(0.0, dx, psi), conv, dpsi_dt=-1j * om * psi)
    checks.append(bound("dirac/target equation on its plane wave", float(np.max(np.abs(lim.second_order))), 10 * lim.fd_error + 1e-12))
    jit = dr.jitter_sigma(0.6, conv)
    write_json(
        out / "dirac.json",
        {
            "spinor_v0.6": {"plus": [s_plus.u1, s_plus.u2], "minus": [s_minus.u1, s_minus.u2]},
            "elimination": {k: v.tolist() if isinstance(v, np.ndarray) else v for k, v in coef.items()},
            "sigma_v0.6": jit,
            "decomposition": dr.decomposition_check(dr.REFERENCE_ASSIGNMENT).to_dict(),
        },
    )
    checks.append(Check("dirac/decomposition sigma3,sigma1;sigma2", PASS if dr.decomposition_check(dr.REFERENCE_ASSIGNMENT).passed else FAIL))
    return checks


def run_geodesic(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    steps = prm["steps"]
    v0 = prm["flat_v0"]
    tau = prm["flat_tau"]
    flat = mt.integrate(mt.Metric1D.flat(), 0.0, v0, tau, tau / steps, conv)
    w = lorentz_factor(v0, conv.c, conv.velocity_guard)
    end_err = max(abs(flat.x[-1] - v0 / w * tau), abs(flat.t[-1] - tau / w))
    flat.to_csv(out / "geodesic_flat.csv")
    metric = mt.Metric1D.from_expressions(prm["g_tt"], prm["g_xx"])
    curved = mt.integrate(metric, prm["x0"], prm["v0"], prm["dtau"] * steps, prm["dtau"], conv)
    curved.to_csv(out / "geodesic_curved.csv")
    c2 = conv.c ** 2
    checks = [
        bound("geodesic/flat endpoint", end_err, 1e-8, steps=steps),
        bound("geodesic/flat conserved kappa drift", float(np.max(flat.kappa_drift)), 1e-8),
        bound("geodesic/flat interval residual", float(np.max(np.abs(flat.interval_residual))) / c2, 1e-8),
        bound("geodesic/curved conserved kappa drift", float(np.max(curved.kappa_drift)), 1e-8, g_tt=prm["g_tt"], g_xx=prm["g_xx"]),
        bound("geodesic/curved interval residual", float(np.max(np.abs(curved.interval_residual))) / c2, 1e-8),
        bound("geodesic/curved ux matches closed form", float(np.max(curved.ux_mismatch)), 1e-8),
    ]
    write_json(
        out / "geodesic.json",
        {
            "flat": {"x_end": flat.x[-1], "t_end": flat.t[-1], "kappa0": flat.kappa0},
            "curved": {"x_end": curved.x[-1], "t_end": curved.t[-1], "kappa0": curved.kappa0, "max_kappa_drift": float(np.max(curved.kappa_drift))},
        },
    )
    return checks


def run_action(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    X, T = prm["X"], prm["T"]
    free = act.least_action_check(None, ((0.0, 0.0), (T, X)), prm["n_perturbations"], seed, prm["n_samples"], prm["n_modes"], conv=conv)
    free.to_csv(out / "action_free.csv")
    free.to_json(out / "action_free.json")
    g = prm["g"]
    pot = act.Potential1D(f"{g!r}*x")
    field_run = act.least_action_check(pot, ((0.0, 0.0), (T, X)), prm["n_perturbations"], seed, prm["n_samples"], prm["n_modes"], conv=conv)
    t = field_run.t
    parabola = X * t / T + 0.5 * g * t * (T - t)
    field_run.extras["max_parabola_deviation"] = float(np.max(np.abs(field_run.reference - parabola)))
    field_run.to_csv(out / "action_uniform_field.csv")
    field_run.to_json(out / "action_uniform_field.json")
    line = act.WorldLine.straight(0.0, 0.0, T, X, prm["n_samples"])
    plus, minus = act.pseudo_particle_pair(line, None, conv)
    mid = len(line.t) // 2
    a, b = act.phase_along(line.segment(0, mid), None, conv), act.phase_along(line.segment(mid, len(line.t) - 1), None, conv)
    w = lorentz_factor(X / T, conv.c, conv.velocity_guard)
    wave = pw.PlaneWave(conv.c ** 2 / w, (X / T) / w, conv=conv)
    write_json(out / "action_phase.json", {"plus": plus.__dict__, "minus": minus.__dict__})
    return [
        bound("action/free reference X^2/(2T)", abs(free.reference_action - X ** 2 / (2 * T)), 1e-6),
        Check("action/free perturbations strictly larger", PASS if free.all_larger else FAIL, {"min_excess": float(np.min(free.excess)), "seed": seed}),
        bound("action/uniform-field extremal matches parabola", field_run.extras["max_parabola_deviation"], 1e-6),
        Check("action/uniform-field perturbations strictly larger", PASS if field_run.all_larger else FAIL, {"min_excess": float(np.min(field_run.excess))}),
        bound("action/phase additivity", abs(a.phi_total + b.phi_total - plus.phi_total), 1e-12),
        bound("action/opposite spatial phases", abs(plus.phi_spatial + minus.phi_spatial), 1e-12),
        bound("action/free phase equals plane-wave phase", abs(plus.phi_total - float(wave.phase(X, T))), 1e-9),
    ]


def run_maxwell(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    n, L, nu = prm["n"], prm["length"], prm["courant"]
    c = conv.c
    dx = L / n
    dt = nu * dx / c
    sig = prm["width"] * L

    def pulse(x, t):
        s = np.mod(x - c * t - 0.5 * L, L) - 0.5 * L
        return np.exp(-(s ** 2) / (2 * sig ** 2))

    checks = [Check("maxwell/massless decomposition", PASS if mx.null_decomposition_check().passed else FAIL)]
    start = mx.EMFieldPair.from_functions(pulse, pulse, n, dx, c, dt)
    mx.snapshot_csv(out / "maxwell_t0.csv", start)
    crossing_steps = int(round(L / (c * dt)))
    crossing = mx.run(start, dt, crossing_steps)
    mx.snapshot_csv(out / "maxwell_crossing.csv", crossing.final)
    err = mx.shape_error(crossing.final, pulse, pulse)
    checks.append(bound("maxwell/one domain crossing L2 shape error", err, 1e-2, steps=crossing_steps))
    long = mx.run(start, dt, prm["steps"])
    long.to_json(out / "maxwell_energy.json")
    checks.append(bound("maxwell/discrete energy drift", long.energy_drift, 1e-6, steps=prm["steps"], naive_energy_drift=long.naive_energy_drift))

    errs, stated, hs = [], [], []
    for m in prm["refine"]:
        h = L / m
        x = h * np.arange(m)
        kk = 2 * math.pi / L
        f = lambda x, t: np.sin(kk * (x - c * t))  # noqa: E731
        ft = lambda x, t: -c * kk * np.cos(kk * (x - c * t))  # noqa: E731
        F = mx.EMFieldPair(f(x + h / 2, 0), f(x, 0), h, c)
        D = mx.EMFieldPair(ft(x + h / 2, 0), ft(x, 0), h, c)
        r = mx.maxwell_residual(F, D)
        errs.append(r.max_abs)
        stated.append(r.flipped_max_abs)
        hs.append(h)
    order = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    checks.append(Check("maxwell/residual convergence order", PASS if abs(order - 2.0) <= 0.1 else FAIL, {"order": order, "tolerance": 0.1, "h": hs, "max_residual": errs}))
    checks.append(
        observed(
            "maxwell/sign-flipped first equation holds on right movers",
            min(stated) > 1e-6,
            "with -(1/c)dPsi2/dt the residual on Psi1 = Psi2 = f(x - ct) is 2 f', not O(dx^2); the system is elliptic",
            max_residual=stated,
            expected_2_max_fprime=2 * 2 * math.pi / L,
        )
    )
    hist = mx.run(start, dt, 8, store_every=1).history
    wave = mx.wave_equation_check(hist)
    scale = float(np.max(np.abs(np.roll(start.psi2, -1) - 2 * start.psi2 + np.roll(start.psi2, 1)))) / dx ** 2 * c ** 2
    checks.append(bound("maxwell/second-order wave equation residual (relative)", wave.max_residual / scale, 1e-6))
    return checks


def run_evolve(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    n, dx, dt = prm["n"], prm["dx"], prm["dt"]
    x0 = -0.5 * n * dx
    spec = ev.PacketSpec(prm["x_center"], prm["width"], prm["v_center"], conv)
    packet = ev.build_packet(spec, n, dx, x0)
    checks = [
        bound("evolve/packet norm", abs(packet.norm - 1.0), 1e-12),
        bound("evolve/packet momentum centroid (relative)", abs(ev.momentum_centroid(packet, conv) - spec.p_center * conv.spatial_sign) / max(abs(spec.p_center), 1e-300), 1e-2)
        if spec.p_center != 0
        else bound("evolve/packet momentum centroid", abs(ev.momentum_centroid(packet, conv)), 1e-12),
    ]
    ev.snapshot_csv(out / "evolve_packet_t0.csv", packet)
    measured = {}
    for variant in ev.VARIANTS:
        r = ev.run_schrodinger(packet, dt, prm["steps"], conv, variant, prm["store_every"])
        h = ev.density_history(r)
        ev.history_csv(out / f"evolve_{variant}_history.csv", h)
        ev.snapshot_csv(out / f"evolve_{variant}_final.csv", r.final)
        r.to_json(out / f"evolve_{variant}.json")
        v_fit, r2 = ev.fit_velocity(h)
        target = ev.group_velocity(spec.p_center, variant, conv)
        measured[variant] = v_fit
        checks.append(bound(f"evolve/{variant} norm drift", float(np.max(np.abs(h["total"] - h["total"][0]))), 1e-10, steps=prm["steps"]))
        if target != 0:
            checks.append(bound(f"evolve/{variant} group velocity vs dE/dp (relative)", abs(v_fit - target) / abs(target), 2e-2, measured=v_fit, expected=target, r_squared=r2))
        else:
            checks.append(bound(f"evolve/{variant} rest packet centroid drift", float(np.max(np.abs(h["centroid"] - h["centroid"][0]))) / (n * dx), 1e-6))
    if spec.v_center != 0:
        v_phys = spec.v_center * conv.spatial_sign
        checks.append(
            observed(
                "evolve/packet moves at the particle velocity",
                abs(measured["unit_kinetic"] - v_phys) > 0.02 * abs(v_phys),
                "the full-coefficient equation transports the packet at 2p, not at v",
                measured_full_coefficient=measured["unit_kinetic"],
                measured_halved=measured["textbook_half"],
                particle_velocity=v_phys,
            )
        )

    # two-component run: packet envelope times the positive-branch spinor
    m = prm["dirac_n"]
    dspec = ev.PacketSpec(0.0, prm["width"], prm["v_center"], conv)
    env = ev.build_packet(dspec, m, dx, -0.5 * m * dx)
    u = dr.spinor(abs(prm["v_center"]), 1 if dspec.k_center >= 0 else -1, 1, conv.with_signs(energy_sign=1))
    two = ev.GridField(env.x0, dx, np.array([u.u1 * env.values, u.u2 * env.values]))
    rd = ev.run_dirac(two, dt, prm["dirac_steps"], conv, store_every=prm["store_every"])
    hd = ev.density_history(rd)
    ev.history_csv(out / "evolve_dirac_history.csv", hd)
    ev.snapshot_csv(out / "evolve_dirac_final.csv", rd.final)
    rd.to_json(out / "evolve_dirac.json")
    checks.append(bound("evolve/two-component density drift", float(np.max(np.abs(hd["total"] - hd["total"][0]))), 1e-8, steps=prm["dirac_steps"]))

    worst = 0.0
    rates = {}
    for branch in (1, -1):
        fw, E = ev.dirac_plane_wave(m, dx, prm["plane_mode"], branch, conv)
        T = prm["plane_steps"] * dt
        rp = ev.run_dirac(fw, dt, prm["plane_steps"], conv, store_every=prm["plane_steps"])
        for comp in (0, 1):
            a0, a1 = fw.values[comp], rp.final.values[comp]
            i = int(np.argmax(np.abs(a0)))
            rate = -np.angle(a1[i] / a0[i]) / T
            rates[f"branch{branch:+d}/psi{comp + 1}"] = float(rate)
            worst = max(worst, abs(rate - E / conv.hbar_m) / abs(E / conv.hbar_m))
    checks.append(bound("evolve/two-component plane-wave phase rate (relative)", worst, 1e-2, rates=rates))
    return checks


def run_jitter(prm: dict, conv: Conventions, out: Path, seed: int) -> list:
    rows = {"v": [], "sigma": [], "amplitude": [], "closed_form": []}
    worst = 0.0
    for v in prm["v"]:
        j = dr.jitter_amplitude(v, conv)
        w = math.sqrt(1.0 - (v / conv.c) ** 2)
        cf = 2 * conv.hbar_m / (conv.c * (w + 1.0))
        worst = max(worst, abs(j.amplitude - cf))
        rows["v"].append(v)
        rows["sigma"].append(j.sigma)
        rows["amplitude"].append(j.amplitude)
        rows["closed_form"].append(cf)
    write_csv(out / "jitter.csv", rows)
    rest = dr.jitter_amplitude(0.0, conv)
    checks = [
        bound("jitter/amplitude 2 hbar/(c(w+1))", worst, 1e-12),
        bound("jitter/rest limit hbar/c", abs(rest.amplitude - conv.hbar_m / conv.c), 1e-12),
    ]
    payload = {"per_unit_mass": rows}
    if prm["electron"]:
        e = dr.electron_jitter()
        reference = 3.8616e-13
        checks.append(bound("jitter/electron displacement vs 3.8616e-13 m (relative)", abs(e.amplitude - reference) / reference, 1e-3, displacement_m=e.amplitude))
        full_h = 2 * math.pi * e.amplitude
        checks.append(
            observed(
                "jitter/displacement written with h instead of hbar",
                True,
                "h/(m c) is 2 pi times the reduced Compton wavelength the derivation produces",
                hbar_over_mc=e.amplitude,
                h_over_mc=full_h,
            )
        )
        payload["electron"] = {"displacement_m": e.amplitude, "h_over_mc": full_h, "constants": {"hbar": dr.HBAR, "m_e": dr.ELECTRON_MASS, "c": dr.SPEED_OF_LIGHT}}
    write_json(out / "jitter.json", payload)
    return checks


SUITES = {
    "algebra": run_algebra,
    "dispersion": run_dispersion,
    "dirac": run_dirac,
    "geodesic": run_geodesic,
    "action": run_action,
    "maxwell": run_maxwell,
    "evolve": run_evolve,
    "jitter": run_jitter,
}


@dataclass
class RunReport:
    scenario: dict
    checks: list
    artifacts: dict
    version: str
    discrepancies_fatal: bool = False
    wall_clock: float | None = None  # stdout only; never serialized

    @property
    def failed(self) -> list:
        bad = {FAIL, DISCREPANCY} if self.discrepancies_fatal else {FAIL}
        return [c for c in self.checks if c.verdict in bad]

    @property
    def verdict(self) -> str:
        return FAIL if self.failed else PASS

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict == PASS else 1

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, DISCREPANCY: 0}
        for c in self.checks:
            out[c.verdict] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "scenario": self.scenario,
            "verdict": self.verdict,
            "counts": self.counts(),
            "checks": [c.to_dict() for c in self.checks],
            "artifacts": self.artifacts,
        }


class SuiteError(RuntimeError):
    """A module error raised inside a command, with the command name attached."""


def run(scenario: Scenario, output_dir) -> RunReport:
    """Run every command of the scenario, writing artifacts under ``output_dir``."""
    import time

    root = Path(output_dir)
    root.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    before = {p: p.stat().st_mtime_ns for p in root.rglob("*") if p.is_file()}
    checks = []
    for cmd in scenario.commands:
        sub = root / cmd if scenario.command == "all" else root
        sub.mkdir(parents=True, exist_ok=True)
        try:
            checks.extend(SUITES[cmd](scenario.params(cmd), scenario.conventions, sub, scenario.seed))
        except Exception as exc:  # noqa: BLE001 - re-raised with context
            raise SuiteError(f"{cmd}: {type(exc).__name__}: {exc}") from exc
    files = sorted(
        p for p in root.rglob("*") if p.is_file() and p != root / "report.json" and before.get(p) != p.stat().st_mtime_ns
    )
    manifest = {p.relative_to(root).as_posix(): sha256(p) for p in files}
    report = RunReport(scenario.echo(), checks, manifest, __version__, scenario.discrepancies_fatal, time.perf_counter() - t0)
    write_json(root / "report.json", report.to_dict())
    return report
