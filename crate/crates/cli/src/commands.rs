use std::f64::consts::{FRAC_PI_2, PI};

use anyhow::Result;
use parity_metrology::interferometry::{
    resolution_metrics, signal_period, CurveKind, CurveMeta, SignalCurve,
};
use parity_metrology::polarization::{parity_signal_circular, parity_signal_linear};
use parity_metrology::states::tsb_coefficients;
use parity_metrology::validation::{self, CheckOutcome};
use parity_metrology::{
    optimal_sensitivity, parity_expectation, sensitivity, RotationConfig, SearchGrid, TsbParams,
};
use rayon::prelude::*;

use crate::args::{
    Axis, ConfigFile, FigureArgs, InputError, OracleCheckArgs, Output, SweepDefaults, SweepSpec,
    TmsnArgs, TmsnSpec, DEFAULT_EPS_TRUNC,
};
use crate::table::{Cell, Plot, Table};

/// A completed run whose numerical check did not pass; exit code 1.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Points per signal curve in the TMSN resolution table.
const TMSN_CURVE_POINTS: usize = 4097;

fn grid(r: &Axis, delta: &Axis) -> Vec<(f64, f64)> {
    let deltas = delta.values();
    r.values()
        .into_iter()
        .flat_map(|r| deltas.iter().map(move |&d| (r, d)))
        .collect()
}

pub fn signal_defaults() -> SweepDefaults {
    SweepDefaults {
        r: Axis::single(1.0),
        delta: Axis::single(0.0),
        phi: Some(Axis {
            min: 0.0,
            max: FRAC_PI_2,
            steps: crate::args::DEFAULT_PHI_STEPS,
        }),
    }
}

pub fn surface_defaults() -> SweepDefaults {
    SweepDefaults {
        r: Axis {
            min: 0.5,
            max: 1.0,
            steps: 11,
        },
        delta: Axis {
            min: 0.0,
            max: FRAC_PI_2,
            steps: 11,
        },
        phi: None,
    }
}

fn tsb_signal_table(points: &[(f64, f64)], ell: u32, phi: &Axis, eps: f64) -> Result<Table> {
    let phis = phi.values();
    let blocks: Vec<Vec<Vec<Cell>>> = points
        .par_iter()
        .map(|&(r, delta)| -> Result<_> {
            let state = tsb_coefficients(TsbParams::new(r, delta)?, eps)?;
            Ok(phis
                .iter()
                .map(|&p| {
                    let cfg = RotationConfig::new(ell, p);
                    vec![
                        Cell::Real(r),
                        Cell::Real(delta),
                        Cell::Int(ell.into()),
                        Cell::Real(p),
                        Cell::Real(parity_expectation(&state, &cfg)),
                        Cell::Real(sensitivity(&state, &cfg)),
                    ]
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(vec![
        "r",
        "delta_rad",
        "ell",
        "phi_rad",
        "parity",
        "delta_phi_rad",
    ]);
    blocks.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}

fn coherent_signal_table(nc: f64, ell: u32, phi: &Axis) -> Table {
    let rows: Vec<Vec<Cell>> = phi
        .values()
        .par_iter()
        .map(|&p| {
            let cfg = RotationConfig::new(ell, p);
            vec![
                Cell::Real(nc),
                Cell::Int(ell.into()),
                Cell::Real(p),
                Cell::Real(parity_signal_linear(nc, &cfg)),
                Cell::Real(parity_signal_circular(nc, &cfg)),
            ]
        })
        .collect();
    let mut table = Table::new(vec!["nc", "ell", "phi_rad", "parity_lp", "parity_cp"]);
    rows.into_iter().for_each(|row| table.push(row));
    table
}

pub fn signal(spec: &SweepSpec) -> Result<()> {
    match spec.nc {
        Some(nc) => coherent_signal_table(nc, spec.ell, &spec.phi).emit(
            &spec.output,
            &Plot {
                x: "phi_rad",
                y: vec!["parity_lp", "parity_cp"],
                title: format!("Parity signal, N_C = {nc}, l = {}", spec.ell),
            },
        ),
        None => {
            let points = grid(&spec.r, &spec.delta);
            tsb_signal_table(&points, spec.ell, &spec.phi, spec.eps_trunc)?.emit(
                &spec.output,
                &Plot {
                    x: "phi_rad",
                    y: vec!["parity"],
                    title: format!("Parity signal, l = {}", spec.ell),
                },
            )
        }
    }
}

fn surface_table(spec: &SweepSpec) -> Result<Table> {
    let ell = spec.ell;
    let search = SearchGrid::one_period(ell);
    let rows: Vec<Vec<Cell>> = grid(&spec.r, &spec.delta)
        .par_iter()
        .map(|&(r, delta)| -> Result<_> {
            let state = tsb_coefficients(TsbParams::new(r, delta)?, spec.eps_trunc)?;
            let rep = optimal_sensitivity(&state, ell, &search)?;
            Ok(vec![
                Cell::Real(r),
                Cell::Real(delta),
                Cell::Int(ell.into()),
                Cell::Real(state.mean_photon_number()),
                Cell::Real(rep.phi_opt),
                Cell::Real(rep.delta_phi_opt),
                Cell::Real(rep.heisenberg_limit),
                Cell::Real(rep.difference),
            ])
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(vec![
        "r",
        "delta_rad",
        "ell",
        "mean_photons",
        "phi_opt_rad",
        "delta_phi_opt_rad",
        "heisenberg_limit_rad",
        "hl_minus_delta_phi_rad",
    ]);
    rows.into_iter().for_each(|row| table.push(row));
    Ok(table)
}

pub fn sensitivity_surface(spec: &SweepSpec) -> Result<()> {
    surface_table(spec)?.emit(
        &spec.output,
        &Plot {
            x: "delta_rad",
            y: vec!["delta_phi_opt_rad", "hl_minus_delta_phi_rad"],
            title: format!("Optimal sensitivity, l = {}", spec.ell),
        },
    )
}

/// Visibility and FWHM of the central fringe, optimum and Heisenberg limit
/// of the squeezed number state.
fn tmsn_table(spec: &TmsnSpec) -> Result<Table> {
    let ell = spec.ell;
    let cfg = RotationConfig::new(ell, 0.0);
    let period = signal_period(&cfg);
    let rows: Vec<Vec<Cell>> = spec
        .r
        .values()
        .par_iter()
        .map(|&r| -> Result<_> {
            let state = tsb_coefficients(TsbParams::squeezed_number(r)?, spec.eps_trunc)?;
            let meta = CurveMeta {
                r: Some(r),
                delta: Some(FRAC_PI_2),
                ell,
                eps_trunc: Some(spec.eps_trunc),
                ..Default::default()
            };
            let curve = SignalCurve::sample(
                0.0,
                period,
                TMSN_CURVE_POINTS,
                CurveKind::Signal,
                meta,
                |p| parity_expectation(&state, &cfg.at(p)),
            )?;
            let m = resolution_metrics(&curve)?;
            let rep = optimal_sensitivity(&state, ell, &SearchGrid::one_period(ell))?;
            Ok(vec![
                Cell::Real(r),
                Cell::Int(ell.into()),
                Cell::Real(state.mean_photon_number()),
                Cell::Real(m.visibility),
                Cell::Real(m.fwhm),
                Cell::Real(rep.delta_phi_opt),
                Cell::Real(rep.heisenberg_limit),
                Cell::Real(rep.delta_phi_opt / rep.heisenberg_limit),
            ])
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(vec![
        "r",
        "ell",
        "mean_photons",
        "visibility",
        "fwhm_rad",
        "delta_phi_opt_rad",
        "heisenberg_limit_rad",
        "delta_phi_over_hl",
    ]);
    rows.into_iter().for_each(|row| table.push(row));
    Ok(table)
}

fn check_closeness(table: &Table, closeness: f64) -> Result<()> {
    let col = table.column("delta_phi_over_hl").expect("ratio column");
    let worst = table
        .rows
        .iter()
        .filter_map(|row| match row[col] {
            Cell::Real(v) => Some((v - 1.0).abs()),
            _ => None,
        })
        .fold(0.0f64, f64::max);
    if worst > closeness {
        return Err(CheckFailed(format!(
            "delta_phi_opt departs from the Heisenberg limit by {worst:.6} (closeness {closeness})"
        ))
        .into());
    }
    Ok(())
}

fn run_tmsn(spec: &TmsnSpec, plot: Plot) -> Result<()> {
    let table = tmsn_table(spec)?;
    table.emit(&spec.output, &plot)?;
    check_closeness(&table, spec.closeness)
}

pub fn tmsn(args: &TmsnArgs) -> Result<()> {
    let spec = TmsnSpec::resolve(args)?;
    run_tmsn(
        &spec,
        Plot {
            x: "r",
            y: vec!["visibility", "delta_phi_opt_rad", "heisenberg_limit_rad"],
            title: "Squeezed number state".into(),
        },
    )
}

pub fn oracle_check(args: &OracleCheckArgs) -> Result<()> {
    if !(args.tolerance > 0.0) {
        return Err(InputError::new(
            "tolerance",
            format!("must be positive, got {}", args.tolerance),
        )
        .into());
    }
    let report: Vec<CheckOutcome> = validation::oracle_equivalence()?;
    let mut failed = 0;
    for check in &report {
        let ok = check.passes(args.tolerance);
        failed += usize::from(!ok);
        println!(
            "{:<4} {:<30} max |deviation| = {:.3e}  ({} samples)",
            if ok { "ok" } else { "FAIL" },
            check.name,
            check.max_deviation,
            check.samples
        );
    }
    if failed > 0 {
        return Err(CheckFailed(format!(
            "{failed} of {} checks exceed tolerance {:e}",
            report.len(),
            args.tolerance
        ))
        .into());
    }
    Ok(())
}

/// Deltas for the sensitivity-vs-φ panels: four around π/10, then both endpoints.
pub const FIGURE_4_DELTAS: [f64; 6] = [
    PI / 20.0,
    PI / 10.0,
    3.0 * PI / 20.0,
    PI / 5.0,
    0.0,
    FRAC_PI_2,
];

fn figure_surface(output: Output, ell: u32, y: &'static str, title: &str) -> Result<()> {
    let spec = SweepSpec {
        r: Axis {
            min: 0.5,
            max: 1.0,
            steps: 21,
        },
        delta: Axis {
            min: 0.0,
            max: FRAC_PI_2,
            steps: 21,
        },
        ell,
        phi: Axis::single(0.0),
        nc: None,
        eps_trunc: DEFAULT_EPS_TRUNC,
        output,
    };
    surface_table(&spec)?.emit(
        &spec.output,
        &Plot {
            x: "delta_rad",
            y: vec![y],
            title: title.into(),
        },
    )
}

pub fn figure(args: &FigureArgs) -> Result<()> {
    let config = ConfigFile::load(args.output.config.as_deref())?;
    let output = Output::resolve(&args.output, &config)?;
    match args.id {
        2 => {
            let phi = Axis {
                min: 0.0,
                max: PI,
                steps: 2049,
            };
            coherent_signal_table(3.0, 1, &phi).emit(
                &output,
                &Plot {
                    x: "phi_rad",
                    y: vec!["parity_lp", "parity_cp"],
                    title: "Linear vs circular polarization, N_C = 3, l = 1".into(),
                },
            )
        }
        3 => figure_surface(output, 1, "delta_phi_opt_rad", "Optimal sensitivity, l = 1"),
        4 => {
            let points: Vec<(f64, f64)> = FIGURE_4_DELTAS.iter().map(|&d| (1.0, d)).collect();
            let phi = Axis {
                min: 0.0,
                max: FRAC_PI_2,
                steps: 1025,
            };
            tsb_signal_table(&points, 1, &phi, DEFAULT_EPS_TRUNC)?.emit(
                &output,
                &Plot {
                    x: "phi_rad",
                    y: vec!["delta_phi_rad"],
                    title: "Sensitivity against phi, r = 1, l = 1".into(),
                },
            )
        }
        5 => figure_surface(
            output,
            1,
            "hl_minus_delta_phi_rad",
            "Heisenberg-limit gap, l = 1",
        ),
        7 => figure_surface(
            output,
            3,
            "hl_minus_delta_phi_rad",
            "Heisenberg-limit gap, l = 3",
        ),
        8 | 9 => {
            let spec = TmsnSpec {
                r: Axis {
                    min: 0.5,
                    max: 1.5,
                    steps: 21,
                },
                ell: 1,
                eps_trunc: DEFAULT_EPS_TRUNC,
                closeness: crate::args::DEFAULT_CLOSENESS,
                output,
            };
            let plot = if args.id == 8 {
                Plot {
                    x: "r",
                    y: vec!["visibility"],
                    title: "Visibility of the squeezed number state".into(),
                }
            } else {
                Plot {
                    x: "r",
                    y: vec!["delta_phi_opt_rad", "heisenberg_limit_rad"],
                    title: "Sensitivity of the squeezed number state".into(),
                }
            };
            run_tmsn(&spec, plot)
        }
        other => Err(InputError::new(
            "figure",
            format!("no preset {other}; choose 2, 3, 4, 5, 7, 8 or 9"),
        )
        .into()),
    }
}
