import numpy as np
import pytest
from scipy.integrate import quad

from cryoplan.errors import MaterialError
from cryoplan.materials import Geometry, MaterialTable, conduction_load
from cryoplan.thermal import CoaxSegment


def quad_oracle(table, t_cold, t_hot):
    """Independent integral of the shipped table: adaptive quadrature of the
    linear interpolant, not the package's cumulative-trapezoid path."""
    ts, ks = table.temperatures_k, table.conductivity_w_mk
    val, _ = quad(lambda t: np.interp(t, ts, ks), t_cold, t_hot, limit=400,
                  points=list(ts[(ts > t_cold) & (ts < t_hot)])[:50])
    return val


def segment(material, length=1.0, frm="RT", to="Flange50K"):
    return CoaxSegment(material, length, frm, to)


def test_zero_gradient_is_zero(materials):
    seg = segment("SCuNi_086", frm="Flange4K", to="Still")
    assert conduction_load(seg, 4.0, 4.0, materials) == 0.0


def test_integral_matches_quadrature_oracle(materials):
    table = materials.get("SCuNi_086")
    for lo, hi in [(0.02, 0.25), (0.1, 1.4), (1.4, 3.6), (4.0, 36.0), (45.0, 295.0)]:
        assert table.integral(lo, hi) == pytest.approx(quad_oracle(table, lo, hi), rel=2e-3)


def test_rt_to_50k_metre_run_load(materials):
    # one metre of the 0.86 coax assembly from room temperature to a 45 K
    # intercept carries about 6.2 mW; 840 such lines about 5.2 W
    q = conduction_load(segment("SCuNi_086"), 295.0, 45.0, materials)
    assert q == pytest.approx(6.2e-3, rel=0.05)
    assert 840 * q == pytest.approx(5.203, rel=0.05)


def test_nbti_below_scuni_same_span(materials):
    sc = materials.get("SCuNi_086")
    nb = materials.get("NbTi_086")
    for lo, hi in [(0.02, 0.12), (0.13, 1.4), (1.4, 3.59), (0.019, 0.245)]:
        assert nb.integral(lo, hi) < sc.integral(lo, hi)
    # and pointwise on the NbTi grid inside the superconducting range
    mask = nb.temperatures_k <= nb.critical_temperature_k
    sc_on_nb = np.interp(nb.temperatures_k[mask], sc.temperatures_k, sc.conductivity_w_mk)
    assert np.all(nb.conductivity_w_mk[mask] < sc_on_nb)


def test_monotone_in_hot_temperature(materials):
    seg = segment("SCuNi_086", length=0.35, frm="Flange50K", to="Flange4K")
    hot = np.linspace(10.0, 60.0, 12)
    loads = [conduction_load(seg, h, 3.5, materials) for h in hot]
    assert np.all(np.diff(loads) > 0)


def test_scaling_with_area_and_length(materials):
    table = materials.get("SCuNi_086")
    g = table.default_geometry
    double_area = Geometry(2 * g.outer_m2, 2 * g.inner_m2, 2 * g.dielectric_m2)
    seg1 = CoaxSegment("SCuNi_086", 1.0, "RT", "Flange50K")
    seg2 = CoaxSegment("SCuNi_086", 2.0, "RT", "Flange50K", geometry=double_area)
    q1 = conduction_load(seg1, 295.0, 45.0, materials)
    q2 = conduction_load(seg2, 295.0, 45.0, materials)
    assert q2 == pytest.approx(q1, rel=1e-12)


def test_unknown_material_rejected(materials):
    with pytest.raises(MaterialError, match="unknown material"):
        conduction_load(segment("Copper_086"), 295.0, 45.0, materials)


def test_out_of_range_rejected_not_extrapolated(materials):
    with pytest.raises(MaterialError, match="outside tabulated range"):
        conduction_load(segment("SCuNi_086"), 400.0, 45.0, materials)
    with pytest.raises(MaterialError, match="outside tabulated range"):
        conduction_load(segment("SCuNi_086", frm="CP", to="MXC"), 0.1, 1e-3, materials)


def test_reversed_bounds_rejected(materials):
    with pytest.raises(MaterialError):
        conduction_load(segment("SCuNi_086"), 45.0, 295.0, materials)


def test_table_requires_increasing_grid():
    with pytest.raises(MaterialError):
        MaterialTable(
            name="bad",
            temperatures_k=np.array([1.0, 1.0, 2.0]),
            conductivity_w_mk=np.array([1.0, 1.0, 1.0]),
            default_geometry=Geometry(1e-7, 1e-8, 1e-7),
        )
