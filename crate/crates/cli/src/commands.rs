use ptsusy::elliptic::{elliptic_pair, invariants_from, zero_mode_modulus};
use ptsusy::sl2c::{family_spectrum, partner_pair, potential_vm};
use ptsusy::spectral::{find_spectrum, Boundary, SpectralProblem};
use ptsusy::{Branch, Case, EllipticParams, Grid, Regime, Sl2cFamily};
use serde::Serialize;

use crate::args::{
    BoundaryArg, CaseArg, FamilyArgs, FamilyParams, Format, GridArgs, Preset, SignArg,
    SpectrumArgs, WeierstrassArgs,
};
use crate::output::{csv_table, emit, json_table};
use crate::CliError;

pub const FAMILY_HALF_WIDTH: f64 = 12.0;
pub const FAMILY_POINTS: usize = 2401;
pub const SPECTRUM_POINTS: usize = 4001;
pub const FIG1_POINTS: usize = 2001;
pub const FIG2_POINTS: usize = 2000;

pub fn family_from(p: &FamilyParams) -> Result<Sl2cFamily, CliError> {
    let case = match p.case {
        CaseArg::I => Case::I,
        CaseArg::II => Case::II,
        CaseArg::III => Case::III,
    };
    let branch = match p.sign {
        SignArg::Plus => Branch::Plus,
        SignArg::Minus => Branch::Minus,
    };
    let fam = Sl2cFamily::new(case, p.m, p.br, p.bi)?
        .shifted(p.c)?
        .with_gamma(p.gamma)?
        .with_branch(branch);
    Ok(fam)
}

fn family_grid(g: &GridArgs, c: f64, default_n: usize) -> Result<Grid, CliError> {
    let lo = g.xmin.unwrap_or(c - FAMILY_HALF_WIDTH);
    let hi = g.xmax.unwrap_or(c + FAMILY_HALF_WIDTH);
    Ok(Grid::new(lo, hi, g.n.unwrap_or(default_n))?)
}

fn render(format: Format, header: &[&str], rows: &[Vec<f64>]) -> String {
    match format {
        Format::Csv => csv_table(header, rows),
        Format::Json => json_table(header, rows),
    }
}

pub fn family(args: &FamilyArgs) -> Result<(), CliError> {
    let fam = family_from(&args.family)?;
    let grid = family_grid(&args.grid, fam.c, FAMILY_POINTS)?;
    let pair = partner_pair(&fam, &grid)?;
    let rows: Vec<Vec<f64>> = grid
        .points()
        .enumerate()
        .map(|(i, x)| {
            let (p, m) = (pair.v_plus[i], pair.v_minus[i]);
            vec![x, p.re, p.im, m.re, m.im]
        })
        .collect();
    let text = render(
        args.output.format,
        &["x", "ReV+", "ImV+", "ReV-", "ImV-"],
        &rows,
    );
    emit(args.output.out.as_deref(), &text)?;
    Ok(())
}

pub fn weierstrass(args: &WeierstrassArgs) -> Result<(), CliError> {
    let params = match (args.preset, args.er, args.a) {
        (Some(Preset::Fig1), _, _) => EllipticParams::lemniscatic(),
        (Some(Preset::Fig2), _, _) => EllipticParams::hyperbolic(),
        (None, Some(er), Some(a)) => EllipticParams::new(er, a)?,
        _ => {
            return Err(CliError::Usage(
                "either --preset or both --er and --a are required".into(),
            ))
        }
    };
    let data = invariants_from(&params)?;
    let grid = match data.regime {
        Regime::NondegeneratePositive => {
            Grid::open(0.0, data.domain_end()?, args.n.unwrap_or(FIG1_POINTS))?
        }
        Regime::Degenerate => {
            let zmax = args.zmax.unwrap_or(8.0 / params.energy_real.sqrt());
            let n = args.n.unwrap_or(FIG2_POINTS);
            if !(zmax > 0.0) || n < 2 {
                return Err(CliError::Usage(format!(
                    "need zmax > 0 and n >= 2, got {zmax}, {n}"
                )));
            }
            Grid::new(zmax / n as f64, zmax, n)?
        }
        Regime::NondegenerateNegative => {
            return Err(ptsusy::Error::UnsupportedRegime {
                discriminant: data.discriminant,
            }
            .into())
        }
    };
    let pair = elliptic_pair(&params, &data, &grid)?;
    let modulus = zero_mode_modulus(&params, &data, &grid)?;
    let rows: Vec<Vec<f64>> = grid
        .points()
        .enumerate()
        .map(|(i, z)| vec![z, pair.v_plus[i].re, pair.v_minus[i].im, modulus[i].re])
        .collect();
    let text = render(args.output.format, &["z", "V+R", "V-I", "|psi0|"], &rows);
    emit(args.output.out.as_deref(), &text)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub family: Sl2cFamily,
    pub boundary: Boundary,
    pub grid: Grid,
    pub window: (f64, f64),
    pub predicted: Vec<f64>,
    pub found: Vec<(f64, f64)>,
    /// Largest distance from a predicted level to the nearest level found,
    /// over the predicted levels that were found.
    pub max_abs_error: Option<f64>,
    /// Predicted levels with no level found within the tolerance.
    pub falsified: Vec<f64>,
    pub diagnostics: String,
}

pub const SPECTRUM_TOLERANCE: f64 = 1e-4;

pub fn spectrum_report(args: &SpectrumArgs) -> Result<SpectrumReport, CliError> {
    let fam = family_from(&args.family)?;
    if fam.gamma != 0.0 {
        return Err(CliError::Usage("spectrum requires --gamma 0".into()));
    }
    let grid = family_grid(&args.grid, fam.c, SPECTRUM_POINTS)?;
    let k = fam.m - 0.5;
    let window = (
        args.emin.unwrap_or(-(k * k) - 0.5),
        args.emax.unwrap_or(-1e-4),
    );
    let boundary = match args.boundary {
        BoundaryArg::DecayBoth => Boundary::DecayBoth,
        BoundaryArg::DirichletBoth => Boundary::DirichletBoth,
        BoundaryArg::DirichletLeftDecayRight => Boundary::DirichletLeftDecayRight,
    };
    let potential = potential_vm(&fam, &grid)?;
    let problem = SpectralProblem::new(potential, boundary, window, args.scan)?;
    let result = find_spectrum(&problem)?;
    let found: Vec<(f64, f64)> = result
        .eigenvalues
        .iter()
        .map(|e| (e.energy, e.mismatch))
        .collect();
    // the closed-form levels are only asserted for the sech family
    let predicted: Vec<f64> = match fam.case {
        Case::I => family_spectrum(fam.m)
            .energies()
            .into_iter()
            .filter(|&e| e >= window.0 && e <= window.1)
            .collect(),
        _ => Vec::new(),
    };
    let mut max_abs_error: Option<f64> = None;
    let mut falsified = Vec::new();
    for &e in &predicted {
        let nearest = found
            .iter()
            .map(|&(f, _)| (f - e).abs())
            .fold(f64::INFINITY, f64::min);
        if nearest < SPECTRUM_TOLERANCE {
            max_abs_error = Some(max_abs_error.map_or(nearest, |m| m.max(nearest)));
        } else {
            falsified.push(e);
        }
    }
    if predicted.is_empty() && found.is_empty() {
        max_abs_error = Some(0.0);
    }
    Ok(SpectrumReport {
        family: fam,
        boundary,
        grid,
        window,
        predicted,
        found,
        max_abs_error,
        falsified,
        diagnostics: result.diagnostics,
    })
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let report = spectrum_report(args)?;
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))?;
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    if !report.falsified.is_empty() {
        return Err(CliError::Verification(format!(
            "predicted levels not found: {:?}",
            report.falsified
        )));
    }
    Ok(())
}
