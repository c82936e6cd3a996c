#!/usr/bin/env python3
"""One-time calibration of the shipped material and capacity data.

Reference inputs are the published XLD1000s wiring-comparison figures:
per-flange load and steady-temperature values for the three wiring
configurations (all normal coax / optical feed with normal coax below
the still / optical feed with superconducting coax), plus the
4K-photodiode placement variant.  The procedure:

  1. Construct effective conductivity tables for the 0.86 mm coax
     assemblies (piecewise power laws) so that the per-line span
     integrals reproduce the load decomposition of the reference
     configurations at the reference temperatures.  The sub-250 mK
     region and the mixing-chamber static load come from a minimax
     balance of the three mixing-chamber rows.
  2. With the material tables frozen, evaluate configuration (1) loads
     at its reference temperatures and fit the capacity coefficients
     (pulse-tube map offsets, cold-plate scale, mixing-chamber scale)
     so configuration (1) solves to its reference temperatures exactly.
     Shapes (slopes, exponents, base offsets) are shipped data; only
     these anchoring coefficients are calibrated, then frozen.
  3. Emit the data files and re-run the full solver on all bundled
     scenarios, printing per-entry deviations for review.

Run from the repository root:  python tools/calibrate.py
"""

from __future__ import annotations

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cryoplan.materials import Geometry, MaterialLibrary  # noqa: E402
from cryoplan.thermal import Attenuator, CoaxSegment, RfPlan, TransmissionLine, rf_dissipation_profile  # noqa: E402

DATA_DIR = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", "src", "cryoplan", "data"))

# ---------------------------------------------------------------- reference
# Published wiring-study anchor values (loads in W, temperatures in K).
T_REF = {
    "all_coax":        {"RT": 295.0, "Flange50K": 36.038, "Flange4K": 3.590, "Still": 1.4, "CP": 0.245354, "MXC": 0.022735},
    "optical_normal":  {"RT": 295.0, "Flange50K": 35.349, "Flange4K": 2.998, "Still": 1.4, "CP": 0.155981, "MXC": 0.019409},
    "optical_sc":      {"RT": 295.0, "Flange50K": 35.349, "Flange4K": 2.988, "Still": 1.4, "CP": 0.121412, "MXC": 0.019143},
    "optical_sc_4k":   {"RT": 295.0, "Flange50K": 35.349, "Flange4K": 3.012, "Still": 1.4, "CP": 0.107272, "MXC": 0.018663},
}
L_REF = {
    "all_coax":       {"Flange50K": 10.188, "Flange4K": 0.897, "Still": 2.853e-3, "CP": 2502.807e-6, "MXC": 48.607e-6},
    "optical_normal": {"Flange50K": 4.985,  "Flange4K": 0.285, "Still": 13.949e-3, "CP": 777.158e-6, "MXC": 33.190e-6},
    "optical_sc":     {"Flange50K": 4.985,  "Flange4K": 0.285, "Still": 13.939e-3, "CP": 315.822e-6, "MXC": 32.060e-6},
}

N_CONTROL = 840
N_READOUT = 168
DUTY = 0.33
P_MXC_W = 1e-3 * 10 ** (-63.0 / 10.0)
MOLAR_FLOW = 2.2e-3           # mol/s
STILL_HEATER_TARGET_W = 0.080
OPTICAL_POWER_W = 50e-6

# coax assembly geometry (0.86 mm semi-rigid): outer tube, centre pin, PTFE
GEOM = Geometry(outer_m2=2.177e-7, inner_m2=3.243e-8, dielectric_m2=3.308e-7)
A_TOT = GEOM.total_m2
LENGTHS = {"rt_50k": 1.00, "50k_4k": 0.35, "4k_still": 0.25, "still_cp": 0.22, "cp_mxc": 0.22}

# cable signal losses used by the bundled scenarios (dB per segment)
LOSS_SCUNI_STILL_CP = 1.10
LOSS_SCUNI_CP_MXC = 0.32
LOSS_NBTI = 0.10

# shipped design values chosen up front (documented in the data headers)
NBTI_I_STILL_4K = 0.40        # W/m over (1.4, 3.590) K
NBTI_I_CP_STILL = 0.0379      # W/m over (0.121412, 1.4) K
NBTI_I_MXC_CP = 1.503e-4      # W/m over (0.019143, 0.121412) K
S_STILL = 100e-6              # static still load, W
SCUNI_LOW_EXPONENT = 1.7      # k ~ T^p below 245 mK (plating limited)
FIBER_COND_STILL_W = 0.05e-6  # per link at the still terminus
FIBER_COND_4K_W = 0.50e-6     # per link at a 4K terminus

CP_T_BASE = 0.0904239         # K, shipped cold-plate curve offset
CP_EXPONENT = 2.0
MXC_B = 2.34184               # W/(mol/s)/K^2, shipped
MXC_T_EX = 0.040              # K, shipped
PT_SLOPE_50K = 3.77576        # W/K per pulse tube near the operating point
PT_SLOPE_4K = 0.51689


def table_integral(ts, ks, a, b):
    """Trapezoid integral of the (ts, ks) table between a and b."""
    grid = np.asarray(ts)
    kk = np.asarray(ks)
    xs = np.unique(np.concatenate([grid[(grid > a) & (grid < b)], [a, b]]))
    vals = np.interp(xs, grid, kk)
    return float(np.trapezoid(vals, xs))


def log_grid(a, b, per_decade=48):
    n = max(int(np.ceil((np.log10(b) - np.log10(a)) * per_decade)), 8)
    return np.logspace(np.log10(a), np.log10(b), n, endpoint=False)


def powerlaw_region(t_lo, t_hi, k_at_lo, target_integral, per_decade=48):
    """Find p with k = a*T^p, a*t_lo^p = k_at_lo, trapezoid integral = target."""
    def integral(p):
        ts = np.append(log_grid(t_lo, t_hi, per_decade), t_hi)
        a = k_at_lo / t_lo ** p
        ks = a * ts ** p
        return table_integral(ts, ks, t_lo, t_hi), ts, ks

    lo, hi = -2.0, 6.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val, ts, ks = integral(mid)
        if val < target_integral:
            lo = mid
        else:
            hi = mid
    val, ts, ks = integral(0.5 * (lo + hi))
    return ts, ks, 0.5 * (lo + hi)


def build_nbti():
    """Superconducting coax table from its three span targets."""
    t_min, t_break1, t_break2, t_c = 0.005, 0.121412, 1.4, 9.2

    def span_ratio(p):
        ts = np.append(log_grid(t_min, t_break2, 64), t_break2)
        ks = ts ** p
        low = table_integral(ts, ks, 0.019143, t_break1)
        mid = table_integral(ts, ks, t_break1, t_break2)
        return mid / low

    ratio_target = NBTI_I_CP_STILL / NBTI_I_MXC_CP
    lo, hi = 0.2, 4.0
    for _ in range(200):
        p = 0.5 * (lo + hi)
        if span_ratio(p) > ratio_target:
            hi = p
        else:
            lo = p
    p_low = 0.5 * (lo + hi)
    ts1 = np.append(log_grid(t_min, t_break2, 64), t_break2)
    ks1 = ts1 ** p_low
    ks1 *= NBTI_I_MXC_CP / table_integral(ts1, ks1, 0.019143, t_break1)

    ts2, ks2, p_mid = powerlaw_region(t_break2, 3.590, ks1[-1], NBTI_I_STILL_4K, 64)
    a_mid = ks2[-1] / ts2[-1] ** p_mid
    ts3 = np.append(log_grid(3.590, t_c, 48), t_c)
    ks3 = a_mid * ts3 ** p_mid
    # normal state above Tc: resistivity-limited metal, modest rise to RT
    k_tc = ks3[-1]
    ts4 = np.array([10.0, 20.0, 77.0, 150.0, 300.0])
    ks4 = np.array([k_tc * 1.04, k_tc * 1.25, 2.2 * k_tc, 3.0 * k_tc, 4.3 * k_tc])
    ts = np.concatenate([ts1, ts2[1:], ts3[1:], ts4])
    ks = np.concatenate([ks1, ks2[1:], ks3[1:], ks4])
    order = np.argsort(ts)
    return ts[order], ks[order], {"p_low": p_low, "p_mid": p_mid}


def control_line(config):
    """Control-line group of one configuration, built with package types."""
    mk = lambda mat, a, b, L, loss: CoaxSegment(mat, L, a, b, rf_loss_db=loss, geometry=GEOM)
    if config == "all_coax":
        segments = (
            mk("SCuNi_086", "RT", "Flange50K", LENGTHS["rt_50k"], 0.0),
            mk("SCuNi_086", "Flange50K", "Flange4K", LENGTHS["50k_4k"], 0.0),
            mk("SCuNi_086", "Flange4K", "Still", LENGTHS["4k_still"], 0.0),
            mk("SCuNi_086", "Still", "CP", LENGTHS["still_cp"], LOSS_SCUNI_STILL_CP),
            mk("SCuNi_086", "CP", "MXC", LENGTHS["cp_mxc"], LOSS_SCUNI_CP_MXC),
        )
        attens = (Attenuator(20, "Flange4K"), Attenuator(20, "CP"), Attenuator(20, "MXC"))
    elif config == "optical_normal":
        segments = (
            mk("SCuNi_086", "Still", "CP", LENGTHS["still_cp"], LOSS_SCUNI_STILL_CP),
            mk("SCuNi_086", "CP", "MXC", LENGTHS["cp_mxc"], LOSS_SCUNI_CP_MXC),
        )
        attens = (Attenuator(10, "CP"), Attenuator(20, "MXC"))
    elif config == "optical_sc":
        segments = (
            mk("NbTi_086", "Still", "CP", LENGTHS["still_cp"], LOSS_NBTI),
            mk("NbTi_086", "CP", "MXC", LENGTHS["cp_mxc"], LOSS_NBTI),
        )
        attens = (Attenuator(10, "CP"), Attenuator(20, "MXC"))
    elif config == "optical_sc_4k":
        segments = (
            mk("NbTi_086", "Flange4K", "Still", LENGTHS["4k_still"], LOSS_NBTI),
            mk("NbTi_086", "Still", "CP", LENGTHS["still_cp"], LOSS_NBTI),
            mk("NbTi_086", "CP", "MXC", LENGTHS["cp_mxc"], LOSS_NBTI),
        )
        attens = (Attenuator(10, "Flange4K"), Attenuator(20, "MXC"))
    else:
        raise ValueError(config)
    return TransmissionLine(
        role="control", count=N_CONTROL, segments=segments, attenuators=attens,
        rf_plan=RfPlan(P_MXC_W, DUTY),
    )


def main():
    print("== building NbTi_086 table ==")
    nb_ts, nb_ks, nb_info = build_nbti()
    print(f"   low-region exponent {nb_info['p_low']:.4f}, mid {nb_info['p_mid']:.4f}")

    def nb_int(a, b):
        return table_integral(nb_ts, nb_ks, a, b)

    t1, t2, t3 = T_REF["all_coax"], T_REF["optical_normal"], T_REF["optical_sc"]
    rf1 = rf_dissipation_profile(control_line("all_coax"))
    rf2 = rf_dissipation_profile(control_line("optical_normal"))
    rf3 = rf_dissipation_profile(control_line("optical_sc"))
    for label, rf in (("rf1", rf1), ("rf2", rf2), ("rf3", rf3)):
        print(f"   {label}:", {k: f"{v:.6e}" for k, v in sorted(rf.items())})

    print("== SCuNi span targets from the load decomposition ==")
    q_rt50 = (L_REF["all_coax"]["Flange50K"] - L_REF["optical_normal"]["Flange50K"]) / N_CONTROL
    s50 = L_REF["optical_normal"]["Flange50K"] - N_READOUT * q_rt50
    q_50_4 = (L_REF["all_coax"]["Flange4K"] - L_REF["optical_normal"]["Flange4K"]
              - rf1.get("Flange4K", 0.0)) / N_CONTROL
    s4 = L_REF["optical_normal"]["Flange4K"] - N_READOUT * q_50_4

    qn_4k_still = nb_int(t1["Still"], t1["Flange4K"]) * A_TOT / LENGTHS["4k_still"]
    q_4_still = (L_REF["all_coax"]["Still"] - S_STILL - N_READOUT * qn_4k_still) / N_CONTROL

    qn_cp_3 = nb_int(t3["CP"], t3["Still"]) * A_TOT / LENGTHS["still_cp"]
    s_cp = L_REF["optical_sc"]["CP"] - (N_CONTROL + N_READOUT) * qn_cp_3 - rf3["CP"]
    qn_cp_1 = nb_int(t1["CP"], t1["Still"]) * A_TOT / LENGTHS["still_cp"]
    q_still_cp = (L_REF["all_coax"]["CP"] - s_cp - N_READOUT * qn_cp_1 - rf1["CP"]) / N_CONTROL

    print(f"   q(RT->50K) {q_rt50:.6e} W/line, S50 {s50:.4f} W")
    print(f"   q(50K->4K) {q_50_4:.6e} W/line, S4 {s4:.4f} W")
    print(f"   q(4K->Still) {q_4_still:.6e} W/line")
    print(f"   q(Still->CP) {q_still_cp:.6e} W/line, S_cp {s_cp * 1e6:.3f} uW")

    # MXC minimax: SCuNi low-T scale a1 and static S_mxc balance the three rows
    p1 = SCUNI_LOW_EXPONENT
    conv = A_TOT / LENGTHS["cp_mxc"]

    def j_int(p, lo, hi):
        ts = np.append(log_grid(0.005, 0.30, 64), 0.30)
        return table_integral(ts, ts ** p, lo, hi)

    j1 = j_int(p1, t1["MXC"], t1["CP"]) * conv * N_CONTROL
    j2 = j_int(p1, t2["MXC"], t2["CP"]) * conv * N_CONTROL
    rn1 = nb_int(t1["MXC"], t1["CP"]) * conv * N_READOUT
    rn2 = nb_int(t2["MXC"], t2["CP"]) * conv * N_READOUT
    rn3 = nb_int(t3["MXC"], t3["CP"]) * conv * (N_CONTROL + N_READOUT)
    m1, m2, m3 = (L_REF[k]["MXC"] for k in ("all_coax", "optical_normal", "optical_sc"))
    # unknowns (a1, s_mxc, e): rows land at (1-e), (1+e), (1-e) of their targets
    mat = np.array([
        [j1, 1.0, m1],
        [j2, 1.0, -m2],
        [0.0, 1.0, m3],
    ])
    rhs = np.array([
        m1 - rn1 - rf1["MXC"],
        m2 - rn2 - rf2["MXC"],
        m3 - rn3 - rf3["MXC"],
    ])
    a1, s_mxc, e = np.linalg.solve(mat, rhs)
    print(f"   SCuNi low-T scale {a1:.5f}, S_mxc {s_mxc * 1e6:.3f} uW, minimax error {e * 100:.2f}%")

    print("== assembling SCuNi_086 table ==")
    ts_low = np.append(log_grid(0.005, t1["CP"], 64), t1["CP"])
    ks_low = a1 * ts_low ** p1
    i2_target = q_still_cp * LENGTHS["still_cp"] / A_TOT
    ts_r2, ks_r2, p2 = powerlaw_region(t1["CP"], 1.4, ks_low[-1], i2_target, 64)
    i3_target = q_4_still * LENGTHS["4k_still"] / A_TOT
    ts_r3, ks_r3, p3 = powerlaw_region(1.4, t1["Flange4K"], ks_r2[-1], i3_target, 64)
    i4_target = q_50_4 * LENGTHS["50k_4k"] / A_TOT
    ts_r4, ks_r4, p4 = powerlaw_region(t1["Flange4K"], t1["Flange50K"], ks_r3[-1], i4_target, 48)
    i5_target = q_rt50 * LENGTHS["rt_50k"] / A_TOT
    ts_r5, ks_r5, p5 = powerlaw_region(t1["Flange50K"], 295.0, ks_r4[-1], i5_target, 48)
    ts_r6 = np.array([300.0])
    ks_r6 = np.array([ks_r5[-1] * (300.0 / 295.0) ** p5])
    sc_ts = np.concatenate([ts_low, ts_r2[1:], ts_r3[1:], ts_r4[1:], ts_r5[1:], ts_r6])
    sc_ks = np.concatenate([ks_low, ks_r2[1:], ks_r3[1:], ks_r4[1:], ks_r5[1:], ks_r6])
    order = np.argsort(sc_ts)
    sc_ts, sc_ks = sc_ts[order], sc_ks[order]
    print(f"   exponents: {p1} / {p2:.3f} / {p3:.3f} / {p4:.3f} / {p5:.3f}")

    if not np.all(np.interp(nb_ts, sc_ts, sc_ks) > nb_ks):
        raise SystemExit("NbTi table not strictly below SCuNi table")

    write_material(
        os.path.join(DATA_DIR, "materials", "scuni_086.dat"),
        "SCuNi_086", sc_ts, sc_ks, tc=None,
        comment=(
            "silver-plated cupronickel 0.86 mm semi-rigid coax, effective assembly conductivity\n"
            "values calibrated against published system-level per-line wiring loads of a fully\n"
            "loaded two-pulse-tube dilution refrigerator; not bare vendor material data"
        ),
    )
    write_material(
        os.path.join(DATA_DIR, "materials", "nbti_086.dat"),
        "NbTi_086", nb_ts, nb_ks, tc=9.2,
        comment=(
            "niobium-titanium 0.86 mm semi-rigid coax, effective assembly conductivity\n"
            "(phonon-dominated below Tc; table above Tc holds normal-state values)\n"
            "calibrated against published system-level per-line wiring loads"
        ),
    )

    print("== capacity calibration against configuration (1) ==")
    lib = MaterialLibrary.load(DATA_DIR)

    def span(mat, lo, hi):
        return lib.get(mat).integral(lo, hi)

    def loads_at(config, temps):
        ln = {s: 0.0 for s in ("Flange50K", "Flange4K", "Still", "CP", "MXC")}
        a = A_TOT
        ln["Flange50K"] += N_READOUT * a / LENGTHS["rt_50k"] * span("SCuNi_086", temps["Flange50K"], 295.0)
        ln["Flange4K"] += N_READOUT * a / LENGTHS["50k_4k"] * span("SCuNi_086", temps["Flange4K"], temps["Flange50K"])
        ln["Still"] += N_READOUT * a / LENGTHS["4k_still"] * span("NbTi_086", temps["Still"], temps["Flange4K"])
        ln["CP"] += N_READOUT * a / LENGTHS["still_cp"] * span("NbTi_086", temps["CP"], temps["Still"])
        ln["MXC"] += N_READOUT * a / LENGTHS["cp_mxc"] * span("NbTi_086", temps["MXC"], temps["CP"])
        rf = rf_dissipation_profile(control_line(config))
        if config == "all_coax":
            ln["Flange50K"] += N_CONTROL * a / LENGTHS["rt_50k"] * span("SCuNi_086", temps["Flange50K"], 295.0)
            ln["Flange4K"] += N_CONTROL * a / LENGTHS["50k_4k"] * span("SCuNi_086", temps["Flange4K"], temps["Flange50K"])
            ln["Still"] += N_CONTROL * a / LENGTHS["4k_still"] * span("SCuNi_086", temps["Still"], temps["Flange4K"])
            ln["CP"] += N_CONTROL * a / LENGTHS["still_cp"] * span("SCuNi_086", temps["CP"], temps["Still"])
            ln["MXC"] += N_CONTROL * a / LENGTHS["cp_mxc"] * span("SCuNi_086", temps["MXC"], temps["CP"])
        elif config == "optical_normal":
            ln["CP"] += N_CONTROL * a / LENGTHS["still_cp"] * span("SCuNi_086", temps["CP"], temps["Still"])
            ln["MXC"] += N_CONTROL * a / LENGTHS["cp_mxc"] * span("SCuNi_086", temps["MXC"], temps["CP"])
            ln["Still"] += N_CONTROL * (OPTICAL_POWER_W * DUTY + FIBER_COND_STILL_W)
        elif config == "optical_sc":
            ln["CP"] += N_CONTROL * a / LENGTHS["still_cp"] * span("NbTi_086", temps["CP"], temps["Still"])
            ln["MXC"] += N_CONTROL * a / LENGTHS["cp_mxc"] * span("NbTi_086", temps["MXC"], temps["CP"])
            ln["Still"] += N_CONTROL * (OPTICAL_POWER_W * DUTY + FIBER_COND_STILL_W)
        for stage, w in rf.items():
            ln[stage] += w
        ln["Flange50K"] += s50
        ln["Flange4K"] += s4
        ln["Still"] += S_STILL
        ln["CP"] += s_cp
        ln["MXC"] += s_mxc
        return ln

    mine1 = loads_at("all_coax", t1)
    print("   configuration (1) loads at anchor temperatures:")
    for stage, val in mine1.items():
        ref = L_REF["all_coax"][stage]
        print(f"     {stage:10s} {val:.6e} W  (reference {ref:.6e}, {100 * (val / ref - 1):+.3f}%)")

    t0_50 = t1["Flange50K"] - mine1["Flange50K"] / (2 * PT_SLOPE_50K)
    t0_4 = t1["Flange4K"] - mine1["Flange4K"] / (2 * PT_SLOPE_4K)
    g_cp = mine1["CP"] / MOLAR_FLOW / (t1["CP"] ** CP_EXPONENT - CP_T_BASE ** CP_EXPONENT)
    a_mxc = (mine1["MXC"] / MOLAR_FLOW + MXC_B * MXC_T_EX ** 2) / t1["MXC"] ** 2
    heat_evap = (STILL_HEATER_TARGET_W + mine1["Still"]) / MOLAR_FLOW
    print(f"   calibrated: T0_50 {t0_50:.5f} K, T0_4 {t0_4:.5f} K, g_cp {g_cp:.6f}, "
          f"a_mxc {a_mxc:.6f}, L_eff {heat_evap:.4f} J/mol")

    write_capacity(os.path.join(DATA_DIR, "capacity", "xld1000s.capacity"),
                   t0_50, t0_4, g_cp, a_mxc, heat_evap)
    write_scenarios(s50, s4, s_cp, s_mxc)
    print("   capacity + scenario files written")
    verify()


def write_material(path, name, ts, ks, tc, comment):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# material: {name}\n")
        for line in comment.splitlines():
            fh.write(f"# {line}\n")
        fh.write(f"# outer_area_m2: {GEOM.outer_m2:.6e}\n")
        fh.write(f"# inner_area_m2: {GEOM.inner_m2:.6e}\n")
        fh.write(f"# dielectric_area_m2: {GEOM.dielectric_m2:.6e}\n")
        if tc is not None:
            fh.write(f"# critical_temperature_k: {tc}\n")
        fh.write("# T[K]  k[W/m/K]\n")
        for t, k in zip(ts, ks):
            fh.write(f"{t:.8e}  {k:.8e}\n")


def write_capacity(path, t0_50, t0_4, g_cp, a_mxc, heat_evap):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    t50_grid = np.array([26.0, 30.0, 34.0, 38.0, 42.0, 48.0, 54.0, 60.0])
    t4_grid = np.array([2.2, 2.6, 3.0, 3.4, 3.8, 4.4, 5.2, 6.0, 7.0, 8.0])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# net flange cooling of a two-pulse-tube large-frame dilution refrigerator\n")
        fh.write("# upper-stage map: measured-map linearisation around the loaded operating point,\n")
        fh.write("# net of internal parasitics (shield radiation, supports); per pulse tube, W\n")
        fh.write("# anchoring offsets calibrated once against the all-coax reference configuration,\n")
        fh.write("# then frozen (tools/calibrate.py documents the procedure)\n")
        fh.write("[pulse_tube]\n")
        fh.write("multiplicity: 2\n")
        fh.write(f"t50_grid_k: {' '.join(f'{t:g}' for t in t50_grid)}\n")
        fh.write(f"t4_grid_k: {' '.join(f'{t:g}' for t in t4_grid)}\n")
        fh.write("q50_w:\n")
        for t50 in t50_grid:
            row = [PT_SLOPE_50K * (t50 - t0_50)] * len(t4_grid)
            fh.write("  " + " ".join(f"{v:.6f}" for v in row) + "\n")
        fh.write("q4_w:\n")
        for _t50 in t50_grid:
            row = [PT_SLOPE_4K * (t4 - t0_4) for t4 in t4_grid]
            fh.write("  " + " ".join(f"{v:.6f}" for v in row) + "\n")
        fh.write("\n[still]\n")
        fh.write(f"molar_flow_mol_s: {MOLAR_FLOW}\n")
        fh.write(f"heat_of_evaporation_j_mol: {heat_evap:.5f}\n")
        fh.write("temperature_k: 1.4\n")
        fh.write("\n[cp]\n")
        fh.write(f"g_w_per_molps_kp: {g_cp:.6f}\n")
        fh.write(f"exponent: {CP_EXPONENT}\n")
        fh.write(f"t_base_k: {CP_T_BASE}\n")
        fh.write("\n[mxc]\n")
        fh.write(f"a_w_per_molps_k2: {a_mxc:.6f}\n")
        fh.write(f"b_w_per_molps_k2: {MXC_B}\n")
        fh.write(f"t_ex_k: {MXC_T_EX}\n")


def scenario_text(name, title, s50, s4, s_cp, s_mxc, control_block, optical_block="",
                  noise_block=""):
    env = (
        "[environment]\n"
        f"Flange50K: {s50:.5f} W\n"
        f"Flange4K: {s4 * 1e3:.4f} mW\n"
        f"Still: {S_STILL * 1e6:.1f} uW\n"
        f"CP: {s_cp * 1e6:.3f} uW\n"
        f"MXC: {s_mxc * 1e6:.3f} uW\n"
    )
    readout = (
        f"[line readout]\n"
        f"count: {N_READOUT}\n"
        f"segment: SCuNi_086, RT -> Flange50K, {LENGTHS['rt_50k']} m\n"
        f"segment: SCuNi_086, Flange50K -> Flange4K, {LENGTHS['50k_4k']} m\n"
        f"segment: NbTi_086, Flange4K -> Still, {LENGTHS['4k_still']} m\n"
        f"segment: NbTi_086, Still -> CP, {LENGTHS['still_cp']} m\n"
        f"segment: NbTi_086, CP -> MXC, {LENGTHS['cp_mxc']} m\n"
    )
    parts = [
        f"scenario: {name}",
        f"title: {title}",
        "provenance: environment statics and cable data calibrated with tools/calibrate.py",
        "capacity: xld1000s.capacity",
        "",
        "[stage RT]",
        "boundary: fixed 295 K",
        "",
        "[stage Still]",
        "boundary: fixed 1.4 K",
        "",
        env,
        control_block,
        readout,
    ]
    if optical_block:
        parts.append(optical_block)
    if noise_block:
        parts.append(noise_block)
    return "\n".join(parts)


def write_scenarios(s50, s4, s_cp, s_mxc):
    sdir = os.path.join(DATA_DIR, "scenarios")
    os.makedirs(sdir, exist_ok=True)

    def rf_plan_line():
        return f"rf_plan: -63 dBm at MXC, duty {DUTY * 100:g} %\n"

    all_coax_control = (
        f"[line control]\n"
        f"count: {N_CONTROL}\n"
        + rf_plan_line() +
        f"segment: SCuNi_086, RT -> Flange50K, {LENGTHS['rt_50k']} m\n"
        f"segment: SCuNi_086, Flange50K -> Flange4K, {LENGTHS['50k_4k']} m\n"
        f"segment: SCuNi_086, Flange4K -> Still, {LENGTHS['4k_still']} m\n"
        f"segment: SCuNi_086, Still -> CP, {LENGTHS['still_cp']} m, loss {LOSS_SCUNI_STILL_CP} dB\n"
        f"segment: SCuNi_086, CP -> MXC, {LENGTHS['cp_mxc']} m, loss {LOSS_SCUNI_CP_MXC} dB\n"
        f"attenuator: 20 dB at Flange4K\n"
        f"attenuator: 20 dB at CP\n"
        f"attenuator: 20 dB at MXC\n"
    )
    optical_normal_control = (
        f"[line control]\n"
        f"count: {N_CONTROL}\n"
        + rf_plan_line() +
        f"segment: SCuNi_086, Still -> CP, {LENGTHS['still_cp']} m, loss {LOSS_SCUNI_STILL_CP} dB\n"
        f"segment: SCuNi_086, CP -> MXC, {LENGTHS['cp_mxc']} m, loss {LOSS_SCUNI_CP_MXC} dB\n"
        f"attenuator: 10 dB at CP\n"
        f"attenuator: 20 dB at MXC\n"
    )
    optical_sc_control = (
        f"[line control]\n"
        f"count: {N_CONTROL}\n"
        + rf_plan_line() +
        f"segment: NbTi_086, Still -> CP, {LENGTHS['still_cp']} m, loss {LOSS_NBTI} dB\n"
        f"segment: NbTi_086, CP -> MXC, {LENGTHS['cp_mxc']} m, loss {LOSS_NBTI} dB\n"
        f"attenuator: 10 dB at CP\n"
        f"attenuator: 20 dB at MXC\n"
    )
    optical_sc_4k_control = (
        f"[line control]\n"
        f"count: {N_CONTROL}\n"
        + rf_plan_line() +
        f"segment: NbTi_086, Flange4K -> Still, {LENGTHS['4k_still']} m, loss {LOSS_NBTI} dB\n"
        f"segment: NbTi_086, Still -> CP, {LENGTHS['still_cp']} m, loss {LOSS_NBTI} dB\n"
        f"segment: NbTi_086, CP -> MXC, {LENGTHS['cp_mxc']} m, loss {LOSS_NBTI} dB\n"
        f"attenuator: 10 dB at Flange4K\n"
        f"attenuator: 20 dB at MXC\n"
    )
    optical_still = (
        f"[optical feed]\n"
        f"count: {N_CONTROL}\n"
        f"fiber: RT -> Still\n"
        f"photodiode: Still\n"
        f"power: {OPTICAL_POWER_W * 1e6:g} uW\n"
        f"duty: {DUTY * 100:g} %\n"
        f"fiber_conduction: {FIBER_COND_STILL_W * 1e6:g} uW\n"
    )
    optical_4k = (
        f"[optical feed]\n"
        f"count: {N_CONTROL}\n"
        f"fiber: RT -> Flange4K\n"
        f"photodiode: Flange4K\n"
        f"power: {OPTICAL_POWER_W * 1e6:g} uW\n"
        f"duty: {DUTY * 100:g} %\n"
        f"fiber_conduction: {FIBER_COND_4K_W * 1e6:g} uW\n"
    )

    files = {
        "all_coax": scenario_text(
            "all_coax", "840 normal-coax control lines, RT to MXC",
            s50, s4, s_cp, s_mxc, all_coax_control),
        "optical_coax_normal": scenario_text(
            "optical_coax_normal", "optical feed to the still, normal coax below",
            s50, s4, s_cp, s_mxc, optical_normal_control, optical_still),
        "optical_coax_sc": scenario_text(
            "optical_coax_sc", "optical feed to the still, superconducting coax below",
            s50, s4, s_cp, s_mxc, optical_sc_control, optical_still),
        "optical_coax_sc_4k": scenario_text(
            "optical_coax_sc_4k", "optical feed to the 4K flange, superconducting coax below",
            s50, s4, s_cp, s_mxc, optical_sc_4k_control, optical_4k),
    }
    for name, text in files.items():
        with open(os.path.join(sdir, f"{name}.scenario"), "w", encoding="utf-8") as fh:
            fh.write(text)

    experiment = """scenario: experiment_ld400
title: single-qubit test wiring with a still-stage photodiode and a coupled coax drive line
provenance: noise chains mirror the test cooldown; thermal section is a stand-in (single lines)
capacity: xld1000s.capacity

[stage RT]
boundary: fixed 295 K

[stage Still]
boundary: fixed 1.4 K

[line control]
count: 1
rf_plan: -63 dBm at MXC, duty 33 %
segment: SCuNi_086, Still -> CP, 0.22 m
segment: SCuNi_086, CP -> MXC, 0.22 m
attenuator: 10 dB at CP
attenuator: 20 dB at MXC

[line readout]
count: 1
segment: SCuNi_086, RT -> Flange50K, 1.0 m
segment: SCuNi_086, Flange50K -> Flange4K, 0.35 m
segment: NbTi_086, Flange4K -> Still, 0.25 m
segment: NbTi_086, Still -> CP, 0.22 m
segment: NbTi_086, CP -> MXC, 0.22 m

[optical feed]
count: 1
fiber: RT -> Still
photodiode: Still
power: 50 uW
duty: 100 %
fiber_conduction: 0.05 uW

[noise_chain photodiode_drive]
frequency: 6 GHz
target: 100 mK
element: CP attenuator, 10 dB, 0.1 K
element: MXC attenuator, 20 dB, 0.01 K
element: IRF, 1 dB, 0.01 K, assumed
element: LPF, 1 dB, 0.01 K, assumed

[noise_chain earlier_cooldown]
frequency: 6 GHz
target: 500 mK
element: CP attenuator, 10 dB, 0.1 K
element: MXC attenuator, 10 dB, 0.01 K
element: IRF, 1 dB, 0.01 K, assumed
element: LPF, 1 dB, 0.01 K, assumed

[noise_chain coupler_arm]
frequency: 6 GHz
source_temperature: 295 K
element: 4K attenuator, 10 dB, 3.0 K
element: Still attenuator, 10 dB, 1.4 K
element: CP attenuator, 10 dB, 0.1 K
element: MXC attenuator, 20 dB, 0.01 K
element: coupler coupled port, 20 dB, 0.01 K
"""
    with open(os.path.join(sdir, "experiment_ld400.scenario"), "w", encoding="utf-8") as fh:
        fh.write(experiment)


def verify():
    print("== verification: full solve of the bundled scenarios ==")
    from cryoplan.data import DataContext
    from cryoplan.report import run_report

    data = DataContext.open(DATA_DIR)
    results = {}
    for name in ("all_coax", "optical_coax_normal", "optical_coax_sc", "optical_coax_sc_4k"):
        bundle = run_report(data.load_scenario(name), data)
        results[name] = bundle
        print(f"   {name}: {bundle.thermal.convergence.iterations} sweeps, "
              f"residual {bundle.thermal.convergence.residual_w:.2e} W, "
              f"heater {bundle.thermal.still_heater_required_w * 1e3:.2f} mW")

    key_map = {"all_coax": "all_coax", "optical_coax_normal": "optical_normal",
               "optical_coax_sc": "optical_sc"}
    worst_load = worst_temp = 0.0
    for name, refkey in key_map.items():
        rep = results[name].thermal
        for stage in ("Flange50K", "Flange4K", "Still", "CP", "MXC"):
            lv = rep.stages[stage].total_w
            lr = L_REF[refkey][stage]
            tv = rep.stages[stage].solved_temperature_k
            tr = T_REF[refkey][stage]
            el = lv / lr - 1
            et = tv / tr - 1
            worst_load = max(worst_load, abs(el))
            worst_temp = max(worst_temp, abs(et))
            print(f"   {name:22s} {stage:10s} load {lv:.5e} ({el * 100:+6.2f}%)  "
                  f"T {tv:.6g} ({et * 100:+6.2f}%)")
    rep = results["optical_coax_sc_4k"].thermal
    for stage in ("Flange4K", "CP", "MXC"):
        tv = rep.stages[stage].solved_temperature_k
        tr = T_REF["optical_sc_4k"][stage]
        print(f"   optical_coax_sc_4k     {stage:10s} T {tv:.6g} ({(tv / tr - 1) * 100:+6.2f}%)")
    print(f"   worst load error {worst_load * 100:.2f}%, worst temperature error {worst_temp * 100:.2f}%")


if __name__ == "__main__":
    main()
