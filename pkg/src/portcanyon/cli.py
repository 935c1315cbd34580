"""Command-line surface: dataset generation, statistics, fits, reports.

Subcommands mirror the analysis pipeline: `synth` writes a synthetic
campaign CSV, `angular` / `spatial` / `vehicle` compute the statistics of a
dataset, `fit` runs the log-distance regressions, `coverage` evaluates the
link budget, and `geometry` evaluates the canyon model for one geometry.
Outputs are plot-ready CSV tables plus a plain-text summary on stdout; every
table carries a '#' provenance line (tool version, seed, input hash).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from collections import defaultdict

import numpy as np

from . import __version__, angular, dataio, spatialcorr, synth, vehicle
from .config import DEFAULT_INI, ToolConfig, load_config
from .errors import (
    ConfigError,
    DegenerateFitError,
    GridError,
    IngestError,
    ToolkitError,
)
from .geometry import (
    CanyonGeometry,
    acceptance_length,
    elevation_angles,
    poynting_fspl,
    projected_aperture_exact,
    received_power_approx,
    received_power_exact,
    vertical_fraction,
)
from .linkbudget import (
    coverage_range_m,
    dual_pol_throughput_bps,
    eirp_dbm,
    max_allowable_pathloss_db,
    noise_floor_dbm,
)
from .pathloss import GainSample, LogLinFit, fit_fixed_slope, fit_loglinear
from .stats import empirical_cdf

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_DOMAIN = 4

_DATA_CATEGORIES = {"ingest", "grid", "pairing", "data"}


def _tx_position(tx_id: str) -> tuple[float, float, float]:
    """Campaign TX position (x, y, z) from its identifier."""
    if tx_id == "TX2":
        return (synth.TX2_X_M, synth.TX2_Y_M, synth.TX2_Z_M)
    if tx_id.startswith("TX1_"):
        try:
            y = float(tx_id[4:])
        except ValueError:
            raise IngestError(f"malformed transmitter id {tx_id!r}")
        return (synth.TX1_X_M, y, synth.TX1_Z_M)
    raise IngestError(
        f"cannot derive a position for transmitter id {tx_id!r}; "
        "expected 'TX1_<y>' or 'TX2'"
    )


def _baseline(scans):
    return [s for s in scans if s.vehicle_state is angular.VehicleState.ABSENT]


# ----------------------------------------------------------------- synth ---

def _cmd_synth(args, cfg: ToolConfig) -> int:
    scfg = cfg.synth_config()
    layout = synth.build_layout(args.layout, rx_height_m=cfg.rx_height_m)
    scans = synth.generate_campaign(layout, scfg, vehicle_mode=args.vehicle_mode)
    dataio.write_scans(args.out, scans, seed=scfg.seed)
    rows = sum(s.angles.size for s in scans)
    print(f"synth: wrote {len(scans)} scans ({rows} rows) to {args.out}")
    print(f"synth: layout={args.layout} seed={scfg.seed} vehicle_mode={args.vehicle_mode}")
    return EXIT_OK


# --------------------------------------------------------------- angular ---

def _cmd_angular(args, cfg: ToolConfig) -> int:
    scans = _baseline(dataio.ingest(args.input))
    if not scans:
        raise IngestError("dataset has no baseline (vehicle absent) scans")
    input_hash = dataio.file_sha256(args.input)
    os.makedirs(args.out_dir, exist_ok=True)

    by_tx = defaultdict(list)
    for scan in scans:
        by_tx[scan.tx].append(scan)

    for tx_id, tx_scans in by_tx.items():
        stats = angular.ensemble_stats(tx_scans, db_bin_width=cfg.histogram_bin_db)
        mean_path = os.path.join(args.out_dir, f"angular_mean_{tx_id}.csv")
        dataio.write_table(
            mean_path,
            ("angle_deg", "mean_db"),
            zip(np.degrees(stats.angles), stats.mean_db),
            input_hash=input_hash,
        )
        hist_rows = []
        for i, angle in enumerate(np.degrees(stats.angles)):
            for j in range(stats.counts.shape[1]):
                hist_rows.append(
                    (angle, stats.bin_edges_db[j], stats.bin_edges_db[j + 1],
                     stats.counts[i, j])
                )
        dataio.write_table(
            os.path.join(args.out_dir, f"angular_hist_{tx_id}.csv"),
            ("angle_deg", "bin_lo_db", "bin_hi_db", "count"),
            hist_rows,
            input_hash=input_hash,
        )

    positions = {tx_id: _tx_position(tx_id)[:2] for tx_id in by_tx}
    cdf_all, cdf_tx = angular.gain_cdfs(scans, positions)
    dataio.write_table(
        os.path.join(args.out_dir, "gain_cdf_all_directions.csv"),
        ("normalized_gain_db", "probability"),
        zip(cdf_all.values, cdf_all.probs),
        input_hash=input_hash,
    )
    dataio.write_table(
        os.path.join(args.out_dir, "gain_cdf_tx_direction.csv"),
        ("normalized_gain_db", "probability"),
        zip(cdf_tx.values, cdf_tx.probs),
        input_hash=input_hash,
    )
    az_cdf = empirical_cdf([angular.azimuth_gain(s) for s in scans])
    dataio.write_table(
        os.path.join(args.out_dir, "azimuth_gain_cdf.csv"),
        ("azimuth_gain_db", "probability"),
        zip(az_cdf.values, az_cdf.probs),
        input_hash=input_hash,
    )
    print(f"angular: {len(scans)} scans, {len(by_tx)} transmitters -> {args.out_dir}")
    print(
        "angular: median azimuth gain "
        f"{az_cdf.median():.2f} dB over {az_cdf.n} scans"
    )
    return EXIT_OK


# --------------------------------------------------------------- spatial ---

def _cmd_spatial(args, cfg: ToolConfig) -> int:
    scans = _baseline(dataio.ingest(args.input))
    input_hash = dataio.file_sha256(args.input)
    wanted = [args.x_start + args.x_step * k for k in range(args.x_count)]

    by_line = defaultdict(dict)
    for scan in scans:
        for k, x in enumerate(wanted):
            if abs(scan.x - x) <= 1e-6:
                by_line[(scan.tx, scan.y, scan.stacking)][k] = scan
                break

    lines = []
    for key in sorted(by_line, key=str):
        slots = by_line[key]
        if len(slots) == len(wanted):
            lines.append(
                spatialcorr.DenseLine(
                    positions=np.array(wanted),
                    scans=tuple(slots[k] for k in range(len(wanted))),
                )
            )
    if not lines:
        raise IngestError(
            f"no complete dense line found (need x = {wanted[0]:g}..{wanted[-1]:g} "
            f"step {args.x_step:g})"
        )

    lag_m, corr = spatialcorr.averaged_correlation(lines)
    dataio.write_table(
        args.out,
        ("lag_m", "correlation"),
        zip((round(lag, 9) for lag in lag_m), corr),
        input_hash=input_hash,
    )
    print(f"spatial: averaged {len(lines)} dense lines -> {args.out}")
    print(f"spatial: correlation at first lag ({lag_m[1]:.1f} m) = {corr[1]:+.3f}")
    return EXIT_OK


# --------------------------------------------------------------- vehicle ---

def _cmd_vehicle(args, cfg: ToolConfig) -> int:
    scans = dataio.ingest(args.input)
    input_hash = dataio.file_sha256(args.input)
    os.makedirs(args.out_dir, exist_ok=True)

    base_by_key = {
        (s.tx, s.x, s.y, s.stacking): s
        for s in scans
        if s.vehicle_state is angular.VehicleState.ABSENT
    }
    params_rows = []
    for state in (angular.VehicleState.POSITION1, angular.VehicleState.POSITION2):
        deltas = []
        grid = None
        for scan in scans:
            if scan.vehicle_state is not state:
                continue
            key = (scan.tx, scan.x, scan.y, scan.stacking)
            if key not in base_by_key:
                raise IngestError(
                    f"no baseline scan for vehicle scan at {key}; cannot pair"
                )
            if grid is None:
                grid = scan.angles
            elif scan.angles.size != grid.size:
                raise GridError(
                    "vehicle scans must share one angle grid for pooled statistics"
                )
            deltas.append(vehicle.vehicle_delta(base_by_key[key], scan))
        if not deltas:
            continue
        matrix = np.stack(deltas)
        report = vehicle.delta_cdf_report(matrix.ravel())
        label = state.value
        dataio.write_table(
            os.path.join(args.out_dir, f"vehicle_delta_cdf_{label}.csv"),
            ("delta_db", "empirical_cdf", "gaussian_cdf"),
            zip(report.values_db, report.empirical, report.gaussian),
            input_hash=input_hash,
        )
        mean_db, edges, counts = vehicle.delta_angle_stats(
            matrix, db_bin_width=cfg.histogram_bin_db
        )
        angles_deg = np.degrees(grid)
        dataio.write_table(
            os.path.join(args.out_dir, f"vehicle_delta_mean_{label}.csv"),
            ("angle_deg", "mean_delta_db"),
            zip(angles_deg, mean_db),
            input_hash=input_hash,
        )
        hist_rows = [
            (angles_deg[i], edges[j], edges[j + 1], counts[i, j])
            for i in range(counts.shape[0])
            for j in range(counts.shape[1])
        ]
        dataio.write_table(
            os.path.join(args.out_dir, f"vehicle_delta_hist_{label}.csv"),
            ("angle_deg", "bin_lo_db", "bin_hi_db", "count"),
            hist_rows,
            input_hash=input_hash,
        )
        params_rows.append(
            (label, report.fit.mu_db, report.fit.sigma_db, report.fit.sample_count,
             report.sup_gap)
        )
        print(
            f"vehicle[{label}]: mu={report.fit.mu_db:+.2f} dB "
            f"sigma={report.fit.sigma_db:.2f} dB over {report.fit.sample_count} "
            f"deltas (CDF sup-gap {report.sup_gap:.4f})"
        )
    if not params_rows:
        raise IngestError("dataset has no vehicle scans")
    dataio.write_table(
        os.path.join(args.out_dir, "vehicle_fit_params.csv"),
        ("vehicle_position", "mu_db", "sigma_db", "sample_count", "cdf_sup_gap"),
        params_rows,
        input_hash=input_hash,
    )
    return EXIT_OK


# ------------------------------------------------------------------- fit ---

def _euclidean_distance(tx_id: str, scan, rx_height_m: float) -> float:
    tx_x, tx_y, tx_z = _tx_position(tx_id)
    return math.sqrt(
        (tx_x - scan.x) ** 2 + (tx_y - scan.y) ** 2 + (tx_z - rx_height_m) ** 2
    )


def _fit_group(samples, label: str, fixed_slope):
    try:
        if fixed_slope is None:
            return fit_loglinear(samples)
        return fit_fixed_slope(samples, fixed_slope)
    except DegenerateFitError as exc:
        raise DegenerateFitError(f"group {label!r}: {exc}") from exc


def _cmd_fit(args, cfg: ToolConfig) -> int:
    scans = _baseline(dataio.ingest(args.input))
    if not scans:
        raise IngestError("dataset has no baseline (vehicle absent) scans")
    input_hash = dataio.file_sha256(args.input)

    by_stacking = defaultdict(list)
    for scan in scans:
        sample = GainSample(
            distance_m=_euclidean_distance(scan.tx, scan, cfg.rx_height_m),
            gain_db=angular.circular_mean_gain(scan),
        )
        by_stacking[scan.stacking.value].append(sample)

    groups = [(label, by_stacking[label]) for label in sorted(by_stacking)]
    if len(groups) > 1:
        groups.append(("aggregated", [s for _, ss in groups for s in ss]))

    rows = []
    for label, samples in groups:
        fit = _fit_group(samples, label, args.fixed_slope)
        rows.append(
            (label, fit.n, fit.ci_n, fit.r0_db, fit.ci_r0, fit.rmse_db,
             fit.sample_count)
        )
        print(
            f"fit[{label}]: n = {fit.n:+.3f} +/- {fit.ci_n:.3f}, "
            f"R0 = {fit.r0_db:+.2f} +/- {fit.ci_r0:.2f} dB, "
            f"RMSE = {fit.rmse_db:.2f} dB ({fit.sample_count} samples)"
        )
    dataio.write_table(
        args.out,
        ("configuration", "n", "ci95_n", "r0_db", "ci95_r0_db", "rmse_db",
         "sample_count"),
        rows,
        input_hash=input_hash,
    )
    print(f"fit: wrote {args.out}")
    return EXIT_OK


# -------------------------------------------------------------- coverage ---

def _cmd_coverage(args, cfg: ToolConfig) -> int:
    lb = cfg.linkbudget_config()
    floor = noise_floor_dbm(lb)
    eirp = eirp_dbm(lb)
    mapl = max_allowable_pathloss_db(lb)
    fit = LogLinFit(
        n=args.fit_n, r0_db=args.fit_r0, ci_n=0.0, ci_r0=0.0, rmse_db=0.0,
        sample_count=0,
    )
    range_m = coverage_range_m(fit, mapl)
    throughput_gbps = dual_pol_throughput_bps(lb) / 1e9

    lines = [
        "coverage estimate",
        "-----------------",
        f"EIRP:                    {eirp:8.1f} dBm "
        f"({lb.tx_power_dbm_per_pol:g} dBm/pol + {lb.tx_antenna_gain_dbi:g} dBi)",
        f"noise floor:             {floor:8.1f} dBm "
        f"({lb.bandwidth_hz / 1e6:g} MHz, {lb.temperature_k:g} K, "
        f"NF {lb.noise_figure_db:g} dB)",
        f"required SNR:            {lb.required_snr_db:8.1f} dB",
        f"shadow-fading margin:    {lb.shadow_margin_db:8.1f} dB",
        f"max allowable path loss: {mapl:8.1f} dB",
        f"gain model:              gain = 10*({fit.n:g})*log10(D) + ({fit.r0_db:g}) dB",
        f"coverage range:          {range_m:8.1f} m",
        f"throughput note:         {2 * lb.spectral_efficiency_bps_hz:g} bit/s/Hz "
        f"dual-pol -> {throughput_gbps:.1f} Gbps in {lb.bandwidth_hz / 1e6:g} MHz",
    ]
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if args.out:
        dataio.write_table(
            args.out,
            ("quantity", "value", "unit"),
            [
                ("eirp", eirp, "dBm"),
                ("noise_floor", floor, "dBm"),
                ("required_snr", lb.required_snr_db, "dB"),
                ("shadow_margin", lb.shadow_margin_db, "dB"),
                ("max_allowable_pathloss", mapl, "dB"),
                ("fit_n", fit.n, ""),
                ("fit_r0", fit.r0_db, "dB"),
                ("coverage_range", range_m, "m"),
                ("dual_pol_throughput", throughput_gbps, "Gbps"),
            ],
        )
        print(f"coverage: wrote {args.out}")
    return EXIT_OK


# -------------------------------------------------------------- geometry ---

def _cmd_geometry(args, cfg: ToolConfig) -> int:
    geom = CanyonGeometry(
        h=args.height, d=args.width, D=args.distance,
        h_prime=args.rx_depth, psi=cfg.psi_rad if args.psi is None else args.psi,
    )
    phi1, phi2, theta = elevation_angles(geom)
    p_exact = received_power_exact(geom)
    p_approx = received_power_approx(geom)
    print("canyon model evaluation")
    print("-----------------------")
    print(f"phi1 / phi2 / theta:      {math.degrees(phi1):.3f} / "
          f"{math.degrees(phi2):.3f} / {math.degrees(theta):.4f} deg")
    print(f"free-space spreading:     {poynting_fspl(geom):.6e} (prop., 1/m^2)")
    print(f"projected aperture:       {projected_aperture_exact(geom):.4f} m")
    print(f"acceptance length:        {acceptance_length(geom):.4f} m")
    print(f"vertical fraction:        {vertical_fraction(geom):.6e} (prop.)")
    print(f"received power (exact):   {p_exact:.6e} (prop.) = "
          f"{10 * math.log10(p_exact):+.2f} dB + const")
    print(f"received power (approx):  {p_approx:.6e} (prop.) = "
          f"{10 * math.log10(p_approx):+.2f} dB + const")
    return EXIT_OK


# ------------------------------------------------------------ entry point --

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portcanyon",
        description="28 GHz container-canyon propagation toolkit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="INI configuration file")
    parser.add_argument(
        "--print-default-config", action="store_true",
        help="print the documented default configuration and exit",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("synth", help="generate a synthetic campaign dataset")
    p.add_argument("--layout", required=True, choices=("uniform", "nonuniform"))
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument(
        "--vehicle-mode", default="none", choices=("none", "dense", "all"),
        help="add vehicle variants: nowhere, on the dense grid, or everywhere",
    )
    p.add_argument("--n-angles", type=int, help="azimuth samples per rotation")
    p.add_argument("--hpbw-deg", type=float, help="horn half-power beamwidth (deg)")
    p.add_argument("--gain-offset-db", type=float, help="calibration offset (dB)")
    p.add_argument("--no-fading", action="store_true",
                   help="disable per-bin Rayleigh fading")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("angular", help="angular-spectrum statistics of a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--bin-db", type=float, help="histogram bin width override (dB)")
    p.set_defaults(func=_cmd_angular)

    p = sub.add_parser("spatial", help="spatial autocorrelation along dense lines")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--x-start", type=float, default=13.5)
    p.add_argument("--x-step", type=float, default=0.1)
    p.add_argument("--x-count", type=int, default=15)
    p.set_defaults(func=_cmd_spatial)

    p = sub.add_parser("vehicle", help="vehicle-impact delta statistics")
    p.add_argument("--input", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_vehicle)

    p = sub.add_parser("fit", help="log-distance regression of angle-averaged gains")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--fixed-slope", type=float, default=None,
        help="pin the slope (signed, e.g. -4) instead of fitting it",
    )
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("coverage", help="link-budget coverage report")
    p.add_argument("--fit-n", type=float, default=-4.09, help="gain model slope")
    p.add_argument("--fit-r0", type=float, default=-23.4, help="gain model intercept (dB)")
    p.add_argument("--out", help="also write the report as a CSV table")
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("geometry", help="evaluate the canyon model for one geometry")
    p.add_argument("--height", type=float, required=True, help="TX height above canyon top (m)")
    p.add_argument("--width", type=float, required=True, help="canyon internal width (m)")
    p.add_argument("--distance", type=float, required=True, help="TX to near edge (m)")
    p.add_argument("--rx-depth", type=float, required=True, help="RX depth below canyon top (m)")
    p.add_argument("--psi", type=float, help="acceptance angle override (rad)")
    p.set_defaults(func=_cmd_geometry)

    return parser


def _apply_overrides(args, cfg: ToolConfig) -> None:
    if getattr(args, "seed", None) is not None:
        if args.seed < 0:
            raise ConfigError("seed must be >= 0")
        cfg.seed = args.seed
    if getattr(args, "bin_db", None) is not None:
        if args.bin_db <= 0:
            raise ConfigError("histogram bin width must be > 0")
        cfg.histogram_bin_db = args.bin_db
    for flag in ("n_angles", "hpbw_deg", "gain_offset_db"):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, flag, value)
    if getattr(args, "no_fading", False):
        cfg.fading = False


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_default_config:
        print(DEFAULT_INI, end="")
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        _apply_overrides(args, cfg)
        return args.func(args, cfg)
    except ToolkitError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        if isinstance(exc, ConfigError):
            return EXIT_CONFIG
        if exc.category in _DATA_CATEGORIES:
            return EXIT_DATA
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
