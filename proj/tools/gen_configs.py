#!/usr/bin/env python3
"""Writes the bundled scenario directories under configs/.

The load and weather series are synthetic but deterministic (fixed seeds);
costs and technical parameters follow the ATB 2020 / AEO 2021 assumptions
used for the reference systems. Re-running produces identical files.
"""

import argparse
import math
import random
from pathlib import Path

GAS = ("natural_gas", 3.89, 53.06)
GAS_CCS = ("natural_gas_ccs", 4.42, 0.0)
URANIUM = ("uranium", 0.73, 0.0)

# Fixed-ratio batteries carry their energy cost on the power side.
BATTERY_DURATION = 4.0
BATTERY_INV = 67069 + BATTERY_DURATION * 13922

RESOURCE_COLUMNS = [
    "id", "zone", "kind", "group", "unit_size_mw", "existing_cap_mw", "max_new_cap_mw",
    "inv_cost_usd_per_mw_yr", "fom_cost_usd_per_mw_yr", "vom_cost_usd_per_mwh",
    "heat_rate_mmbtu_per_mwh", "fuel", "start_cost_usd_per_start", "start_fuel_mmbtu_per_start",
    "min_stable_fraction", "ramp_up_fraction_per_hour", "ramp_down_fraction_per_hour",
    "min_up_hours", "min_down_hours", "charge_eff_fraction", "discharge_eff_fraction",
    "self_discharge_fraction_per_hour", "duration_hours", "qualifies_for",
]

TECH = {
    "ocgt": dict(kind="thermal_uc", group="firm_if_emitting", unit_size_mw=100,
                 inv_cost_usd_per_mw_yr=60243, fom_cost_usd_per_mw_yr=6960, vom_cost_usd_per_mwh=4.49,
                 heat_rate_mmbtu_per_mwh=9.90, fuel=GAS[0], start_cost_usd_per_start=13400,
                 start_fuel_mmbtu_per_start=350, min_stable_fraction=0.30, ramp_up_fraction_per_hour=1.0,
                 ramp_down_fraction_per_hour=1.0, min_up_hours=1, min_down_hours=1),
    "ccgt": dict(kind="thermal_uc", group="firm_if_emitting", unit_size_mw=500,
                 inv_cost_usd_per_mw_yr=77877, fom_cost_usd_per_mw_yr=12441, vom_cost_usd_per_mwh=1.61,
                 heat_rate_mmbtu_per_mwh=6.27, fuel=GAS[0], start_cost_usd_per_start=67000,
                 start_fuel_mmbtu_per_start=1000, min_stable_fraction=0.20, ramp_up_fraction_per_hour=0.64,
                 ramp_down_fraction_per_hour=0.64, min_up_hours=6, min_down_hours=6),
    "ccgt_ccs": dict(kind="thermal_uc", group="firm", unit_size_mw=500,
                     inv_cost_usd_per_mw_yr=183218, fom_cost_usd_per_mw_yr=37153, vom_cost_usd_per_mwh=6.26,
                     heat_rate_mmbtu_per_mwh=7.89, fuel=GAS_CCS[0], start_cost_usd_per_start=51500,
                     start_fuel_mmbtu_per_start=1000, min_stable_fraction=0.60, ramp_up_fraction_per_hour=0.64,
                     ramp_down_fraction_per_hour=0.64, min_up_hours=6, min_down_hours=6),
    "nuclear": dict(kind="thermal_uc", group="firm", unit_size_mw=500,
                    inv_cost_usd_per_mw_yr=428276, fom_cost_usd_per_mw_yr=121144, vom_cost_usd_per_mwh=2.36,
                    heat_rate_mmbtu_per_mwh=10.46, fuel=URANIUM[0], start_cost_usd_per_start=139000,
                    start_fuel_mmbtu_per_start=0, min_stable_fraction=0.50, ramp_up_fraction_per_hour=0.25,
                    ramp_down_fraction_per_hour=0.25, min_up_hours=24, min_down_hours=24),
    "solar": dict(kind="vre", group="solar", inv_cost_usd_per_mw_yr=66114, fom_cost_usd_per_mw_yr=8599),
    "wind": dict(kind="vre", group="wind", inv_cost_usd_per_mw_yr=138286, fom_cost_usd_per_mw_yr=35045),
    "offshore_wind": dict(kind="vre", group="wind", inv_cost_usd_per_mw_yr=728671, fom_cost_usd_per_mw_yr=59269),
    "battery": dict(kind="storage", group="battery", inv_cost_usd_per_mw_yr=BATTERY_INV,
                    fom_cost_usd_per_mw_yr=3380, charge_eff_fraction=0.92, discharge_eff_fraction=0.92,
                    duration_hours=BATTERY_DURATION),
}


def fmt(v):
    return repr(round(v, 6)) if isinstance(v, float) else str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for r in rows:
            f.write(",".join(fmt(x) for x in r) + "\n")


def write_manifest(path, items, comment=None):
    with open(path, "w", newline="\n") as f:
        if comment:
            f.write(f"# {comment}\n")
        for k, v in items:
            f.write(f"{k} = {v}\n")


def resource_rows(zone, techs, overrides=None):
    rows = []
    for tech in techs:
        spec = dict(TECH[tech])
        spec.update((overrides or {}).get(tech, {}))
        spec["id"] = f"{tech}_{zone}"
        spec["zone"] = zone
        rows.append([spec.get(c, "") for c in RESOURCE_COLUMNS])
    return rows


def load_shape(hours, rng, phase=0.0):
    out = []
    for t in range(hours):
        h = t % 24
        d = t // 24
        daily = 0.75 + 0.18 * math.sin(2 * math.pi * (h - 9 + phase) / 24) + 0.07 * math.sin(2 * math.pi * (h - 3) / 12)
        weekly = 1.0 - (0.08 if d % 7 in (5, 6) else 0.0)
        seasonal = 1.0 + 0.18 * math.cos(2 * math.pi * (d - 200) / 365)
        out.append(max(0.05, daily * weekly * seasonal * (1 + 0.03 * rng.gauss(0, 1))))
    return out


def solar_cf(hours, rng, day_offset=0):
    out = []
    cloud = 0.8
    for t in range(hours):
        h = t % 24
        d = t // 24 + day_offset
        if h == 0:
            cloud = min(1.0, max(0.25, 0.6 * cloud + 0.4 * rng.uniform(0.3, 1.0)))
        length = 12 + 3 * math.cos(2 * math.pi * (d - 172) / 365)
        x = (h + 0.5 - (12 - length / 2)) / length
        sun = math.sin(math.pi * x) if 0 < x < 1 else 0.0
        out.append(round(min(1.0, 0.85 * sun * cloud), 4))
    return out


def wind_cf(hours, rng, mean=0.38):
    out = []
    s = 0.0
    for t in range(hours):
        s = 0.93 * s + 0.37 * rng.gauss(0, 1)
        v = mean + 0.22 * s + 0.05 * math.sin(2 * math.pi * (t % 24 - 2) / 24)
        out.append(round(min(1.0, max(0.0, v)), 4))
    return out


def scale_to(shape, peak, total):
    """Affine map a + b*shape with max = peak and sum = total."""
    n = len(shape)
    smax = max(shape)
    ssum = sum(shape)
    b = (peak * n - total) / (smax * n - ssum)
    a = peak - b * smax
    return [round(a + b * s, 3) for s in shape]


def write_series(path, column, rows):
    write_csv(path, ["hour", column[0], column[1]], rows)


def fuels(path, items):
    write_csv(path, ["fuel", "price_usd_per_mmbtu", "co2_kg_per_mmbtu"], [list(f) for f in items])


def tiny(root):
    d = root / "tiny"
    d.mkdir(parents=True, exist_ok=True)
    rng = random.Random(11)
    hours = 24
    write_manifest(d / "scenario.txt", [
        ("name", "tiny"), ("zones", "Z1"), ("sub_periods", 1), ("hours_per_sub_period", 24),
        ("hour_weight_hours", 365), ("voll_usd_per_mwh", 50000), ("storage_sizing", "fixed_ratio"),
        ("sink_enabled", "true"), ("sink_capex_usd_per_kw", 800), ("sink_wacc_fraction", 0.071),
        ("sink_life_years", 20), ("sink_fom_fraction", 0.04), ("sink_zones", "Z1"),
        ("curve_anchor_price_usd_per_mwh", 50), ("curve_anchor_quantity_fraction", 0.2),
        ("curve_elasticity", -0.8), ("curve_segment_fraction", 0.01), ("curve_base_price_usd_per_mwh", 40),
    ], "one zone, one representative day")
    fuels(d / "fuels.csv", [GAS])
    base = load_shape(hours, rng)
    load = [round(1000 * x, 3) for x in base]
    write_series(d / "load.csv", ("zone", "load_mw"), [[t + 1, "Z1", load[t]] for t in range(hours)])
    write_csv(d / "resources.csv", RESOURCE_COLUMNS,
              resource_rows("Z1", ["solar", "wind", "battery", "ccgt", "ocgt"],
                            {"ccgt": {"unit_size_mw": 250}}))
    sol = solar_cf(hours, random.Random(12), 172)
    wnd = wind_cf(hours, random.Random(13))
    rows = [[t + 1, "solar_Z1", sol[t]] for t in range(hours)] + [[t + 1, "wind_Z1", wnd[t]] for t in range(hours)]
    write_series(d / "capacity_factors.csv", ("resource", "cap_factor"), rows)
    write_manifest(d / "sweep.txt", [
        ("capex_usd_per_kw", "200, 1400"), ("base_price_usd_per_mwh", "-15, 40, 100"),
    ], "2 x 3 grid")


def two_zone(root):
    d = root / "two_zone"
    d.mkdir(parents=True, exist_ok=True)
    hours = 336
    write_manifest(d / "scenario.txt", [
        ("name", "two_zone"), ("zones", "north, south"), ("sub_periods", 2), ("hours_per_sub_period", 168),
        ("hour_weight_hours", repr(8760 / 336)), ("voll_usd_per_mwh", 50000), ("storage_sizing", "fixed_ratio"),
        ("sink_enabled", "true"), ("sink_capex_usd_per_kw", 800), ("sink_zones", "north, south"),
        ("curve_base_price_usd_per_mwh", 60),
    ], "two zones, two representative weeks (winter, summer)")
    fuels(d / "fuels.csv", [GAS])
    rows_load, rows_cf, rows_res = [], [], []
    for zi, (zone, peak) in enumerate((("north", 1600.0), ("south", 1200.0))):
        rng = random.Random(100 + zi)
        # Week 1 sits in January, week 2 in July.
        shape = load_shape(168, rng, zi) + load_shape(168, rng, zi)
        winter = [s * 1.12 for s in shape[:168]]
        summer = shape[168:]
        lmax = max(winter + summer)
        load = [round(peak * s / lmax, 3) for s in winter + summer]
        rows_load += [[t + 1, zone, load[t]] for t in range(hours)]
        sol = solar_cf(168, random.Random(200 + zi), 8) + solar_cf(168, random.Random(300 + zi), 190)
        wnd = wind_cf(168, random.Random(400 + zi), 0.45) + wind_cf(168, random.Random(500 + zi), 0.30)
        rows_cf += [[t + 1, f"solar_{zone}", sol[t]] for t in range(hours)]
        rows_cf += [[t + 1, f"wind_{zone}", wnd[t]] for t in range(hours)]
        rows_res += resource_rows(zone, ["solar", "wind", "battery", "ccgt", "ocgt"],
                                  {"ccgt": {"unit_size_mw": 250}})
    write_series(d / "load.csv", ("zone", "load_mw"), rows_load)
    write_series(d / "capacity_factors.csv", ("resource", "cap_factor"), rows_cf)
    write_csv(d / "resources.csv", RESOURCE_COLUMNS, rows_res)
    write_csv(d / "lines.csv",
              ["id", "from_zone", "to_zone", "existing_cap_mw", "max_new_cap_mw", "inv_cost_usd_per_mw_yr"],
              [["north_south", "north", "south", 300, "", 20000]])
    write_manifest(d / "sweep.txt", [
        ("capex_usd_per_kw", "200, 800, 1400"), ("base_price_usd_per_mwh", "60"),
    ], "capex trend at a fixed base price")


def northern(root):
    d = root / "northern"
    d.mkdir(parents=True, exist_ok=True)
    hours = 8760
    write_manifest(d / "scenario.txt", [
        ("name", "northern"), ("zones", "north"), ("sub_periods", 365), ("hours_per_sub_period", 24),
        ("hour_weight_hours", 1), ("voll_usd_per_mwh", 50000), ("storage_sizing", "fixed_ratio"),
        ("sink_enabled", "true"), ("sink_capex_usd_per_kw", 800),
    ], "full-year single-zone northern reference system")
    fuels(d / "fuels.csv", [GAS, GAS_CCS, URANIUM])
    shape = load_shape(hours, random.Random(7))
    load = scale_to(shape, 54256.0, 234.0e6)
    write_series(d / "load.csv", ("zone", "load_mw"), [[t + 1, "north", load[t]] for t in range(hours)])
    sol = solar_cf(hours, random.Random(8))
    wnd = wind_cf(hours, random.Random(9), 0.33)
    off = wind_cf(hours, random.Random(10), 0.45)
    rows = [[t + 1, "solar_north", sol[t]] for t in range(hours)]
    rows += [[t + 1, "wind_north", wnd[t]] for t in range(hours)]
    rows += [[t + 1, "offshore_wind_north", off[t]] for t in range(hours)]
    write_series(d / "capacity_factors.csv", ("resource", "cap_factor"), rows)
    write_csv(d / "resources.csv", RESOURCE_COLUMNS,
              resource_rows("north", ["solar", "wind", "offshore_wind", "battery", "ocgt", "ccgt", "ccgt_ccs",
                                      "nuclear"]))
    write_csv(d / "policies.csv", ["id", "kind", "zone", "co2_rate_t_per_mwh", "std_fraction"],
              [["co2", "co2_cap_system", "north", 0.0, ""]])
    write_csv(d / "nse.csv", ["zone", "slope_fraction", "size_fraction"],
              [["north", 1.0, 1.0], ["north", 0.9, 0.04], ["north", 0.55, 0.024], ["north", 0.2, 0.003]])
    write_manifest(d / "sweep.txt", [
        ("capex_usd_per_kw", "200, 400, 600, 800, 1000, 1200, 1400"),
        ("base_price_usd_per_mwh", "-15, 0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 120, 140"),
    ], "full design-space grid")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "configs"))
    args = p.parse_args()
    root = Path(args.out)
    tiny(root)
    two_zone(root)
    northern(root)


if __name__ == "__main__":
    main()
