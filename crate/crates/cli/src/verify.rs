//! The verification suite behind `ptsusy verify`.
//!
//! Every check reports a measured value and the limit it is compared with.
//! Checks are grouped by the acceptance criterion they exercise.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use ptsusy::elliptic::{
    elliptic_pair, invariants_from, ode_residual, superpotential, wp, wp_prime, zero_mode,
    zero_mode_modulus,
};
use ptsusy::sl2c::{
    bridge_superpotential, constraint_residual_with_offset, partner_pair, potential_vm,
    shape_invariance_residual,
};
use ptsusy::spectral::{find_spectrum, operator_residual, Boundary, SpectralProblem};
use ptsusy::susy::{
    intertwining_residual, is_pt_symmetric, pt_symmetry_defect_about, PT_TOLERANCE,
};
use ptsusy::{Branch, Case, EllipticParams, Grid, SampledFunction, Sl2cFamily, SuperpotentialSpec};
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::args::VerifyArgs;
use crate::output::emit;
use crate::CliError;

type CheckResult = ptsusy::Result<Check>;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub id: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `value < limit`.
    fn below(criterion: u8, id: &str, value: f64, limit: f64) -> Self {
        Self {
            criterion,
            id: id.to_owned(),
            value,
            limit,
            passed: value < limit,
            detail: String::new(),
        }
    }

    fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn and(mut self, ok: bool, why: &str) -> Self {
        if !ok {
            self.passed = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(why);
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub total: usize,
    pub passed: usize,
    pub all_passed: bool,
    pub seconds: f64,
}

/// Runs every check. `perturb` is added to F before the constraint checks.
pub fn run_suite(perturb: f64) -> Report {
    let start = Instant::now();
    type Job = (u8, &'static str, Box<dyn Fn() -> Vec<CheckResult>>);
    let jobs: Vec<Job> = vec![
        (1, "fig1", Box::new(fig1_invariants)),
        (2, "fig1.potentials", Box::new(fig1_potentials)),
        (3, "asymptotics", Box::new(asymptotics)),
        (4, "constraints", Box::new(move || constraints(perturb))),
        (4, "elliptic.ode", Box::new(elliptic_odes)),
        (5, "shape", Box::new(shape_invariance)),
        (6, "spectrum", Box::new(spectra)),
        (7, "zero_mode", Box::new(zero_modes)),
        (8, "intertwining", Box::new(intertwining)),
        (9, "pt", Box::new(pt_classification)),
    ];
    let mut checks = Vec::new();
    for (criterion, group, job) in jobs {
        for r in job() {
            checks.push(r.unwrap_or_else(|e| Check {
                criterion,
                id: group.to_owned(),
                value: f64::NAN,
                limit: f64::NAN,
                passed: false,
                detail: format!("error: {e}"),
            }));
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    Report {
        total: checks.len(),
        passed,
        all_passed: passed == checks.len(),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn render_table(report: &Report) -> String {
    let mut out = format!(
        "{:<4} {:<32} {:>13} {:>10}  {}\n",
        "crit", "check", "value", "limit", "result"
    );
    for c in &report.checks {
        out.push_str(&format!(
            "{:<4} {:<32} {:>13.3e} {:>10.1e}  {}{}\n",
            c.criterion,
            c.id,
            c.value,
            c.limit,
            if c.passed { "PASS" } else { "FAIL" },
            if c.detail.is_empty() {
                String::new()
            } else {
                format!("  ({})", c.detail)
            }
        ));
    }
    out.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        report.total,
        report.passed,
        report.total - report.passed
    ));
    out
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let report = run_suite(args.perturb);
    let text = if args.json {
        let mut s =
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))?;
        s.push('\n');
        s
    } else {
        render_table(&report)
    };
    emit(None, &text)?;
    if report.all_passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} checks failed",
            report.total - report.passed,
            report.total
        )))
    }
}

fn fig1_invariants() -> Vec<CheckResult> {
    let start = Instant::now();
    let p = EllipticParams::lemniscatic();
    let d = match invariants_from(&p) {
        Ok(d) => d,
        Err(e) => return vec![Err(e)],
    };
    let elapsed = start.elapsed().as_secs_f64();
    let (e1, e2, e3) = d.roots.real();
    let omega_exact = PI.sqrt() * gamma(1.25) / gamma(0.75);
    let omega = d.omega.unwrap_or(f64::NAN);
    vec![
        Ok(Check::below(
            1,
            "fig1.invariants",
            (d.g2 - 4.0).abs().max(d.g3.abs()),
            1e-12,
        )),
        Ok(Check::below(
            1,
            "fig1.roots",
            (e1 - 1.0).abs().max(e2.abs()).max((e3 + 1.0).abs()),
            1e-10,
        )),
        Ok(
            Check::below(1, "fig1.half_period", (omega - omega_exact).abs(), 1e-6)
                .detail(format!("omega = {omega}")),
        ),
        Ok(Check::below(1, "fig1.runtime_seconds", elapsed, 1.0)),
    ]
}

fn fig1_potentials() -> Vec<CheckResult> {
    let inner = || -> ptsusy::Result<Vec<CheckResult>> {
        let p = EllipticParams::lemniscatic();
        let d = invariants_from(&p)?;
        let omega = d.omega.unwrap_or(f64::NAN);
        let grid = Grid::open(0.0, d.domain_end()?, 2001)?;
        let pair = elliptic_pair(&p, &d, &grid)?;
        let vr = pair.v_plus_r();
        let (imin, vmin) =
            vr.iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
                );
        let exact = 6.0 * (1.0 - 1.0 / 3f64.sqrt());
        let mid = (grid.len() - 1) / 2;
        Ok(vec![
            Ok(Check::below(
                2,
                "fig1.vplus_minimum",
                (vmin - exact).abs(),
                1e-6,
            )),
            Ok(Check::below(
                2,
                "fig1.vplus_argmin_spacings",
                (grid.x(imin) - omega).abs() / grid.spacing(),
                1.0 + 1e-9,
            )),
            Ok(Check::below(
                2,
                "fig1.vminus_at_omega",
                pair.v_minus[mid].im.abs(),
                1e-8,
            )),
        ])
    };
    inner().unwrap_or_else(|e| vec![Err(e)])
}

fn single_point(
    p: &EllipticParams,
    d: &ptsusy::WeierstrassData,
    z: f64,
) -> ptsusy::Result<(f64, f64)> {
    let g = Grid::new(z, z * 1.001, 5)?;
    let pair = elliptic_pair(p, d, &g)?;
    Ok((pair.v_plus[0].re, pair.v_minus[0].im))
}

fn asymptotics() -> Vec<CheckResult> {
    let small = || -> CheckResult {
        let p = EllipticParams::lemniscatic();
        let d = invariants_from(&p)?;
        let z = 1e-3 * d.omega.unwrap_or(f64::NAN);
        let q1 = single_point(&p, &d, z)?.0 * z * z;
        let q2 = single_point(&p, &d, z / 2.0)?.0 * z * z / 4.0;
        let extrapolated = (4.0 * q2 - q1) / 3.0;
        Ok(Check::below(
            3,
            "fig1.vplus_z2_limit",
            (extrapolated / 2.0 - 1.0).abs(),
            0.01,
        )
        .detail(format!("extrapolated V z^2 = {extrapolated}")))
    };
    let large = || -> CheckResult {
        let p = EllipticParams::hyperbolic();
        let d = invariants_from(&p)?;
        let s = p.energy_real.sqrt();
        let z = 6.0 / s;
        let v = single_point(&p, &d, z)?.0;
        let ratio = v / (24.0 * p.energy_real * (-2.0 * s * z).exp());
        Ok(Check::below(
            3,
            "fig2.vplus_exponential_tail",
            (ratio - 1.0).abs(),
            0.01,
        ))
    };
    vec![small(), large()]
}

fn constraints(perturb: f64) -> Vec<CheckResult> {
    let offset = Complex64::new(perturb, 0.0);
    let run =
        |id: &'static str, fams: Vec<ptsusy::Result<Sl2cFamily>>, grid: Grid| -> CheckResult {
            let mut worst: f64 = 0.0;
            for fam in fams {
                let (rf, rg) = constraint_residual_with_offset(&fam?, &grid, offset)?;
                worst = worst.max(rf).max(rg);
            }
            Ok(Check::below(4, id, worst, 1e-6))
        };
    let grid = |lo: f64, hi: f64| Grid::new(lo, hi, ((hi - lo) / 1e-3).round() as usize + 1);
    let inner = || -> ptsusy::Result<Vec<CheckResult>> {
        Ok(vec![
            run(
                "constraints.case_I",
                vec![
                    Sl2cFamily::new(Case::I, 2.0, 0.0, 0.5),
                    Sl2cFamily::new(Case::I, 1.7, 0.4, -0.9).and_then(|f| f.with_gamma(0.3)),
                    Sl2cFamily::new(Case::I, 3.0, 1.0, 1.0).and_then(|f| f.with_gamma(-0.7)),
                ],
                grid(-6.0, 6.0)?,
            ),
            run(
                "constraints.case_II",
                vec![
                    Sl2cFamily::new(Case::II, 2.0, 0.3, 0.2).and_then(|f| f.with_gamma(0.4)),
                    Sl2cFamily::new(Case::II, 1.2, -0.5, 0.8).and_then(|f| f.with_gamma(-0.6)),
                ],
                grid(-6.0, 6.0)?,
            ),
            run(
                "constraints.case_III",
                vec![
                    Sl2cFamily::new(Case::III, 2.0, 0.0, 0.5),
                    Sl2cFamily::new(Case::III, 2.0, 1.0, 1.0).map(|f| f.with_branch(Branch::Minus)),
                ],
                grid(-3.0, 3.0)?,
            ),
        ])
    };
    inner().unwrap_or_else(|e| vec![Err(e)])
}

fn elliptic_odes() -> Vec<CheckResult> {
    let one = |id: &'static str, p: EllipticParams| -> CheckResult {
        let d = invariants_from(&p)?;
        let end = d.domain_end()?.min(8.0 / p.energy_real.sqrt());
        let grid = Grid::open(0.0, end, 2001)?;
        Ok(Check::below(4, id, ode_residual(&p, &d, &grid)?, 1e-8))
    };
    let wp_check = || -> CheckResult {
        let mut worst: f64 = 0.0;
        for p in [EllipticParams::lemniscatic(), EllipticParams::hyperbolic()] {
            let d = invariants_from(&p)?;
            let end = d.domain_end()?.min(6.0);
            for k in 1..200 {
                let z = end * k as f64 / 200.0;
                let (w, dw) = (wp(z, &d)?, wp_prime(z, &d)?);
                let r = dw * dw - (4.0 * w.powi(3) - d.g2 * w - d.g3);
                worst = worst.max(r.abs() / w.abs().powi(3).max(1.0));
            }
        }
        Ok(Check::below(
            4,
            "elliptic.wp_differential_equation",
            worst,
            1e-9,
        ))
    };
    vec![
        one("elliptic.g_equation.fig1", EllipticParams::lemniscatic()),
        one("elliptic.g_equation.fig2", EllipticParams::hyperbolic()),
        wp_check(),
    ]
}

fn shape_invariance() -> Vec<CheckResult> {
    let run =
        |id: &'static str, fams: Vec<ptsusy::Result<Sl2cFamily>>, grid: Grid| -> CheckResult {
            let mut worst: f64 = 0.0;
            for fam in fams {
                worst = worst.max(shape_invariance_residual(&fam?, &grid)?);
            }
            Ok(Check::below(5, id, worst, 1e-10))
        };
    let inner = || -> ptsusy::Result<Vec<CheckResult>> {
        Ok(vec![
            run(
                "shape_invariance.case_I",
                vec![
                    Sl2cFamily::new(Case::I, 2.0, 0.0, 0.5),
                    Sl2cFamily::new(Case::I, 1.3, 0.7, -0.2).and_then(|f| f.with_gamma(0.25)),
                    Sl2cFamily::new(Case::I, 3.5, -1.0, 1.0).and_then(|f| f.shifted(0.5)),
                ],
                Grid::new(-8.0, 8.0, 1601)?,
            ),
            run(
                "shape_invariance.case_II",
                vec![
                    Sl2cFamily::new(Case::II, 2.0, 0.0, 0.5),
                    Sl2cFamily::new(Case::II, 1.5, 0.4, 0.4).and_then(|f| f.with_gamma(0.3)),
                    Sl2cFamily::new(Case::II, 2.5, 1.0, -0.5).and_then(|f| f.with_gamma(-0.5)),
                ],
                Grid::new(0.5, 8.0, 1501)?,
            ),
            run(
                "shape_invariance.case_III",
                vec![
                    Sl2cFamily::new(Case::III, 2.0, 0.0, 0.5),
                    Sl2cFamily::new(Case::III, 1.5, 0.3, 0.3),
                    Sl2cFamily::new(Case::III, 2.5, 0.5, -0.5)
                        .map(|f| f.with_branch(Branch::Minus)),
                ],
                Grid::new(-2.0, 2.0, 801)?,
            ),
        ])
    };
    inner().unwrap_or_else(|e| vec![Err(e)])
}

/// Largest distance between `found` and `expected`, or infinity when the
/// counts differ.
fn level_error(found: &[f64], expected: &[f64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    found
        .iter()
        .zip(expected)
        .map(|(f, e)| (f - e).abs())
        .fold(0.0, f64::max)
}

fn spectra() -> Vec<CheckResult> {
    let inner = || -> ptsusy::Result<Vec<CheckResult>> {
        let start = Instant::now();
        let fam = Sl2cFamily::new(Case::I, 2.0, 0.0, 0.5)?;
        let grid = Grid::new(-12.0, 12.0, 4001)?;
        let solve = |v: SampledFunction| -> ptsusy::Result<Vec<f64>> {
            let p = SpectralProblem::new(v, Boundary::DirichletBoth, (-3.0, -0.01), 300)?;
            Ok(find_spectrum(&p)?.energies())
        };
        let upper = solve(potential_vm(&fam, &grid)?)?;
        let lower = solve(partner_pair(&fam, &grid)?.v_minus)?;
        let elapsed = start.elapsed().as_secs_f64();
        Ok(vec![
            Ok(Check::below(
                6,
                "spectrum.scarf_m2",
                level_error(&upper, &[-2.25, -0.25]),
                1e-4,
            )
            .detail(format!("found {upper:?}"))),
            Ok(Check::below(
                6,
                "spectrum.partner_m1",
                level_error(&lower, &[-0.25]),
                1e-4,
            )
            .detail(format!("found {lower:?}"))),
            Ok(Check::below(6, "spectrum.runtime_seconds", elapsed, 30.0)),
        ])
    };
    inner().unwrap_or_else(|e| vec![Err(e)])
}

fn zero_modes() -> Vec<CheckResult> {
    let fig1 = || -> ptsusy::Result<Vec<CheckResult>> {
        let p = EllipticParams::lemniscatic();
        let d = invariants_from(&p)?;
        let grid = Grid::open(0.0, d.domain_end()?, 8000)?;
        let pair = elliptic_pair(&p, &d, &grid)?;
        let psi = zero_mode(&p, &d, &grid)?;
        let residual = operator_residual(&pair.v_minus, &psi, p.energy_real)?;
        let m = psi.modulus();
        let peak = m.iter().copied().fold(0.0, f64::max);
        let ends = m[0].max(m[m.len() - 1]) / peak;
        Ok(vec![
            Ok(Check::below(7, "zero_mode.fig1_residual", residual, 1e-3)),
            Ok(Check::below(7, "zero_mode.fig1_vanishing_ends", ends, 1e-3)),
        ])
    };
    let fig2 = || -> ptsusy::Result<Vec<CheckResult>> {
        let p = EllipticParams::hyperbolic();
        let d = invariants_from(&p)?;
        let grid = Grid::new(0.05, 25.0, 8000)?;
        let pair = elliptic_pair(&p, &d, &grid)?;
        let psi = zero_mode(&p, &d, &grid)?;
        let residual = operator_residual(&pair.v_minus, &psi, p.energy_real)?;
        let zp = 8.0 / p.energy_real.sqrt();
        let at = Grid::new(zp, zp * 1.001, 5)?;
        let plateau = zero_mode_modulus(&p, &d, &at)?[0].re;
        let exact = 0.5 * (1.5 * p.a.abs() / p.energy_real).sqrt();
        Ok(vec![
            Ok(Check::below(7, "zero_mode.fig2_residual", residual, 1e-3)),
            Ok(
                Check::below(7, "zero_mode.fig2_plateau", (plateau - exact).abs(), 1e-4)
                    .detail(format!("plateau {plateau}, expected {exact}")),
            ),
        ])
    };
    let mut out = fig1().unwrap_or_else(|e| vec![Err(e)]);
    out.extend(fig2().unwrap_or_else(|e| vec![Err(e)]));
    out
}

/// Smooth bump supported on `|x - center| < width`.
pub fn bump(grid: Grid, center: f64, width: f64) -> ptsusy::Result<SampledFunction> {
    SampledFunction::from_real_fn(grid, |x| {
        let t = (x - center) / width;
        if t.abs() < 1.0 {
            (-1.0 / (1.0 - t * t)).exp()
        } else {
            0.0
        }
    })
}

/// Worst relative intertwining residual over three bumps on `n` points, and
/// the smallest coarse/fine ratio under one refinement.
pub fn intertwining_profile(
    w: &SuperpotentialSpec,
    lo: f64,
    hi: f64,
    n: usize,
) -> ptsusy::Result<(f64, f64)> {
    let span = hi - lo;
    let coarse = Grid::new(lo, hi, n)?;
    let fine = coarse.refined();
    let mut worst: f64 = 0.0;
    let mut slowest = f64::INFINITY;
    for (c, r) in [(0.5, 0.3), (0.35, 0.2), (0.6, 0.35)] {
        let (c, r) = (lo + c * span, r * span);
        let a = intertwining_residual(w, &bump(coarse, c, r)?)?;
        let b = intertwining_residual(w, &bump(fine, c, r)?)?;
        worst = worst.max(a);
        slowest = slowest.min(a / b);
    }
    Ok((worst, slowest))
}

fn intertwining() -> Vec<CheckResult> {
    let one = |id: &'static str, w: ptsusy::Result<SuperpotentialSpec>, lo: f64, hi: f64| {
        let (worst, ratio) = intertwining_profile(&w?, lo, hi, 4001)?;
        Ok(Check::below(8, id, worst, 1e-3)
            .detail(format!("refinement ratio {ratio:.2}"))
            .and(ratio > 3.5, "not second order"))
    };
    let family = |case, m, br, bi, gamma| {
        Sl2cFamily::new(case, m, br, bi)
            .and_then(|f| f.with_gamma(gamma))
            .map(|f| bridge_superpotential(&f))
    };
    let elliptic = || {
        let p = EllipticParams::lemniscatic();
        invariants_from(&p).map(|d| superpotential(&p, &d))
    };
    vec![
        one(
            "intertwining.case_I",
            family(Case::I, 2.0, 0.0, 0.5, 0.0),
            -6.0,
            6.0,
        ),
        one(
            "intertwining.case_II",
            family(Case::II, 1.7, 0.3, 0.2, -0.4),
            -4.0,
            4.0,
        ),
        one(
            "intertwining.case_III",
            family(Case::III, 2.0, 0.0, 0.5, 0.0),
            -2.0,
            4.0,
        ),
        one("intertwining.elliptic_fig1", elliptic(), 0.3, 2.3),
    ]
}

fn pt_classification() -> Vec<CheckResult> {
    let grid = || Grid::new(-12.0, 12.0, 2400);
    let family_pt = |case| -> ptsusy::Result<bool> {
        let pair = partner_pair(&Sl2cFamily::new(case, 2.0, 0.0, 0.5)?, &grid()?)?;
        Ok(is_pt_symmetric(&pair.v_plus) && is_pt_symmetric(&pair.v_minus))
    };
    let flag = |id: &'static str, got: ptsusy::Result<bool>, expected: bool| -> CheckResult {
        let got = got?;
        Ok(Check {
            criterion: 9,
            id: id.to_owned(),
            value: if got { 1.0 } else { 0.0 },
            limit: if expected { 1.0 } else { 0.0 },
            passed: got == expected,
            detail: format!("PT symmetric: {got}, expected {expected}"),
        })
    };
    let fig1 = || -> ptsusy::Result<bool> {
        let p = EllipticParams::lemniscatic();
        let d = invariants_from(&p)?;
        let g = Grid::open(0.0, d.domain_end()?, 2001)?;
        // the grid midpoint is z = ω
        Ok(is_pt_symmetric(&elliptic_pair(&p, &d, &g)?.v_minus))
    };
    let fig2 = || -> ptsusy::Result<bool> {
        let p = EllipticParams::hyperbolic();
        let d = invariants_from(&p)?;
        let zmax = 8.0 / p.energy_real.sqrt();
        let g = Grid::new(zmax / 800.0, zmax, 800)?;
        let v = elliptic_pair(&p, &d, &g)?.v_minus;
        // symmetric about some mirror on the grid?
        Ok((0..2 * g.len() - 1)
            .any(|k| pt_symmetry_defect_about(&v, k as f64 / 2.0) < PT_TOLERANCE))
    };
    vec![
        flag("pt.case_I_partners", family_pt(Case::I), true),
        flag("pt.case_II_partners", family_pt(Case::II), false),
        flag("pt.case_III_partners", family_pt(Case::III), false),
        flag("pt.elliptic_fig1_about_omega", fig1(), true),
        flag("pt.elliptic_fig2_any_mirror", fig2(), false),
    ]
}
