//! The three sl(2,C) potential families.
//!
//! Each family is a pair `(F, G)` solving `F' = 1 - F²`, `G' = -F G`:
//!
//! | case | F                | G                  |
//! |------|------------------|--------------------|
//! | I    | `tanh(x-c-iγ)`   | `b sech(x-c-iγ)`   |
//! | II   | `coth(x-c-iγ)`   | `b cosech(x-c-iγ)` |
//! | III  | `±1`             | `b e^{∓x}`         |
//!
//! with complex `b = b_R + i b_I`. The potentials
//! `V_m = -(m-½)(m+½)(1-F²) - 2mFG + G²` share the levels
//! `E_n = -(m-n-½)²`, and the superpotential `W = (m-½)F - G` at
//! `E = -(m-½)²` has `V⁽⁺⁾ = V_m`, `V⁽⁻⁾ = V_{m-1}`.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{Grid, SampledFunction};
use crate::susy::{partner_potentials, PartnerPair, SuperpotentialSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
}

/// Sign choice of case III: `Plus` is `F = 1, G = b e^{-x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2cFamily {
    pub case: Case,
    pub m: f64,
    pub b_r: f64,
    pub b_i: f64,
    pub c: f64,
    pub gamma: f64,
    pub branch: Branch,
}

impl Sl2cFamily {
    /// Family with `c = 0`, `γ = 0` and the upper branch.
    pub fn new(case: Case, m: f64, b_r: f64, b_i: f64) -> Result<Self> {
        Self {
            case,
            m,
            b_r,
            b_i,
            c: 0.0,
            gamma: 0.0,
            branch: Branch::Plus,
        }
        .validated()
    }

    pub fn shifted(self, c: f64) -> Result<Self> {
        Self { c, ..self }.validated()
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self { gamma, ..self }.validated()
    }

    pub fn with_branch(self, branch: Branch) -> Self {
        Self { branch, ..self }
    }

    /// Same family at another `m`. No range check on `m`: the partner of
    /// `V_m` is `V_{m-1}` whatever the sign of `m - 3/2`.
    pub fn with_m(self, m: f64) -> Self {
        Self { m, ..self }
    }

    pub fn validated(self) -> Result<Self> {
        for (name, v) in [
            ("m", self.m),
            ("b_R", self.b_r),
            ("b_I", self.b_i),
            ("c", self.c),
            ("gamma", self.gamma),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if !(-FRAC_PI_4..FRAC_PI_4).contains(&self.gamma) {
            return Err(Error::InvalidArgument(format!(
                "gamma must lie in [-pi/4, pi/4), got {}",
                self.gamma
            )));
        }
        Ok(self)
    }

    pub fn b(&self) -> Complex64 {
        Complex64::new(self.b_r, self.b_i)
    }

    fn argument(&self, x: f64) -> Complex64 {
        Complex64::new(x - self.c, -self.gamma)
    }

    /// `(F(x), G(x))`
    pub fn eval_f_g(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let b = self.b();
        let (f, g) = match self.case {
            Case::I => {
                let z = self.argument(x);
                (tanh(z), b * sech(z))
            }
            Case::II => {
                let z = self.argument(x);
                if z.norm() == 0.0 {
                    return Err(Error::Singular(x));
                }
                (coth(z), b * cosech(z))
            }
            Case::III => {
                let s = self.branch.sign();
                (Complex64::new(s, 0.0), b * (-s * x).exp())
            }
        };
        if !(is_finite(f) && is_finite(g)) {
            return Err(Error::Singular(x));
        }
        Ok((f, g))
    }

    /// `V_m = -(m-½)(m+½)(1-F²) - 2mFG + G²`
    pub fn vm_at(&self, x: f64) -> Result<Complex64> {
        let (f, g) = self.eval_f_g(x)?;
        let m = self.m;
        Ok(-(m - 0.5) * (m + 0.5) * (1.0 - f * f) - 2.0 * m * f * g + g * g)
    }

    /// `V_m` from the explicit hyperbolic/exponential form of each case.
    pub fn vm_closed_form_at(&self, x: f64) -> Result<Complex64> {
        let b = self.b();
        let m = self.m;
        match self.case {
            Case::I => {
                let z = self.argument(x);
                let (s, t) = (sech(z), tanh(z));
                Ok((b * b - m * m + 0.25) * s * s - 2.0 * m * b * s * t)
            }
            Case::II => {
                let z = self.argument(x);
                if z.norm() == 0.0 {
                    return Err(Error::Singular(x));
                }
                let (s, t) = (cosech(z), coth(z));
                Ok((b * b + m * m - 0.25) * s * s - 2.0 * m * b * s * t)
            }
            Case::III => {
                let s = self.branch.sign();
                let e = (-s * x).exp();
                Ok(b * b * e * e - s * 2.0 * m * b * e)
            }
        }
    }
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

// Hyperbolic functions of complex argument. Past |Re z| = 20 the exponential
// forms avoid inf/inf in the library formulas.
const LARGE: f64 = 20.0;

fn tanh(z: Complex64) -> Complex64 {
    if z.re > LARGE {
        let e = (-2.0 * z).exp();
        (1.0 - e) / (1.0 + e)
    } else if z.re < -LARGE {
        -tanh(-z)
    } else {
        z.tanh()
    }
}

fn coth(z: Complex64) -> Complex64 {
    if z.re > LARGE {
        let e = (-2.0 * z).exp();
        (1.0 + e) / (1.0 - e)
    } else if z.re < -LARGE {
        -coth(-z)
    } else {
        z.cosh() / z.sinh()
    }
}

fn sech(z: Complex64) -> Complex64 {
    if z.re.abs() > LARGE {
        let w = if z.re > 0.0 { z } else { -z };
        let e = (-w).exp();
        2.0 * e / (1.0 + e * e)
    } else {
        1.0 / z.cosh()
    }
}

fn cosech(z: Complex64) -> Complex64 {
    if z.re > LARGE {
        let e = (-z).exp();
        2.0 * e / (1.0 - e * e)
    } else if z.re < -LARGE {
        -cosech(-z)
    } else {
        1.0 / z.sinh()
    }
}

fn sample(grid: &Grid, f: impl Fn(f64) -> Result<Complex64>) -> Result<SampledFunction> {
    SampledFunction::try_from_fn(*grid, f)
}

/// `(max |F' - (1-F²)|, max |G' + FG|)` with `F'`, `G'` from central differences.
pub fn constraint_residual(family: &Sl2cFamily, grid: &Grid) -> Result<(f64, f64)> {
    constraint_residual_with_offset(family, grid, Complex64::new(0.0, 0.0))
}

/// [`constraint_residual`] with `F` shifted by a constant, for checking that
/// the residuals detect functions that do not solve the constraints.
pub fn constraint_residual_with_offset(
    family: &Sl2cFamily,
    grid: &Grid,
    offset: Complex64,
) -> Result<(f64, f64)> {
    let f = sample(grid, |x| Ok(family.eval_f_g(x)?.0 + offset))?;
    let g = sample(grid, |x| Ok(family.eval_f_g(x)?.1))?;
    let df = fourth_order_derivative(&f)?;
    let dg = fourth_order_derivative(&g)?;
    let mut res_f: f64 = 0.0;
    let mut res_g: f64 = 0.0;
    for i in 0..grid.len() {
        res_f = res_f.max((df[i] - (1.0 - f[i] * f[i])).norm());
        res_g = res_g.max((dg[i] + f[i] * g[i]).norm());
    }
    Ok((res_f, res_g))
}

/// Five-point first derivative, one-sided at the two ends of the grid.
fn fourth_order_derivative(f: &SampledFunction) -> Result<Vec<Complex64>> {
    let v = f.values();
    let n = v.len();
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "five-point stencil needs at least 5 points, got {n}"
        )));
    }
    let inv = 1.0 / (12.0 * f.grid().spacing());
    let one_sided = |a: Complex64, b: Complex64, c: Complex64, d: Complex64, e: Complex64| {
        (-25.0 * a + 48.0 * b - 36.0 * c + 16.0 * d - 3.0 * e) * inv
    };
    let mut out = Vec::with_capacity(n);
    out.push(one_sided(v[0], v[1], v[2], v[3], v[4]));
    out.push((-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * inv);
    for i in 2..n - 2 {
        out.push((v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * inv);
    }
    out.push(
        -(-3.0 * v[n - 1] - 10.0 * v[n - 2] + 18.0 * v[n - 3] - 6.0 * v[n - 4] + v[n - 5]) * inv,
    );
    out.push(-one_sided(v[n - 1], v[n - 2], v[n - 3], v[n - 4], v[n - 5]));
    Ok(out)
}

pub fn potential_vm(family: &Sl2cFamily, grid: &Grid) -> Result<SampledFunction> {
    sample(grid, |x| family.vm_at(x))
}

pub fn potential_vm_closed_form(family: &Sl2cFamily, grid: &Grid) -> Result<SampledFunction> {
    sample(grid, |x| family.vm_closed_form_at(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpectrum {
    pub m: f64,
    pub levels: Vec<Level>,
}

impl FamilySpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// `E_n = -(m-n-½)²` for every `n ≥ 0` with `m - n - ½ > 0`.
pub fn family_spectrum(m: f64) -> FamilySpectrum {
    let levels = (0..)
        .map(|n| (n, m - n as f64 - 0.5))
        .take_while(|&(_, k)| k > 0.0)
        .map(|(n, k)| Level { n, energy: -k * k })
        .collect();
    FamilySpectrum { m, levels }
}

/// `W = (m-½)F - G` with `E_R = -(m-½)²` and closed-form
/// `W' = (m-½)(1-F²) + FG`.
///
/// Evaluating at a pole returns NaN, which [`partner_potentials`] reports as a
/// domain error.
pub fn bridge_superpotential(family: &Sl2cFamily) -> SuperpotentialSpec {
    let fam = *family;
    let k = fam.m - 0.5;
    let nan = Complex64::new(f64::NAN, f64::NAN);
    SuperpotentialSpec::from_complex(
        move |x| match fam.eval_f_g(x) {
            Ok((f, g)) => k * f - g,
            Err(_) => nan,
        },
        Some(move |x| match fam.eval_f_g(x) {
            Ok((f, g)) => k * (1.0 - f * f) + f * g,
            Err(_) => nan,
        }),
        -k * k,
    )
}

/// `V⁽±⁾` of the bridge superpotential.
pub fn partner_pair(family: &Sl2cFamily, grid: &Grid) -> Result<PartnerPair> {
    partner_potentials(&bridge_superpotential(family), grid)
}

/// `max |V⁽⁻⁾[W_m] - V_{m-1}|` over the grid.
pub fn shape_invariance_residual(family: &Sl2cFamily, grid: &Grid) -> Result<f64> {
    let pair = partner_pair(family, grid)?;
    let lower = potential_vm(&family.with_m(family.m - 1.0), grid)?;
    pair.v_minus.max_distance(&lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::susy::is_pt_symmetric;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn case_one_at_origin() {
        let fam = Sl2cFamily::new(Case::I, 1.0, 1.0, 0.0).unwrap();
        let (f, g) = fam.eval_f_g(0.0).unwrap();
        assert!(close(f, 0.0.into(), 1e-15));
        assert!(close(g, 1.0.into(), 1e-15));
    }

    #[test]
    fn case_three_upper_branch_at_origin() {
        let fam = Sl2cFamily::new(Case::III, 1.0, 0.0, 1.0).unwrap();
        let (f, g) = fam.eval_f_g(0.0).unwrap();
        assert_eq!(f, Complex64::new(1.0, 0.0));
        assert!(close(g, Complex64::i(), 1e-15));
    }

    #[test]
    fn case_one_imaginary_shift() {
        // tanh(-iγ) = -i tan γ
        let fam = Sl2cFamily::new(Case::I, 1.0, 1.0, 0.0)
            .unwrap()
            .with_gamma(PI / 8.0)
            .unwrap();
        let (f, _) = fam.eval_f_g(0.0).unwrap();
        assert!(close(f, Complex64::new(0.0, -(PI / 8.0).tan()), 1e-15));
    }

    #[test]
    fn gamma_range_is_half_open() {
        let fam = Sl2cFamily::new(Case::I, 1.0, 0.0, 1.0).unwrap();
        assert!(fam.with_gamma(-FRAC_PI_4).is_ok());
        assert!(fam.with_gamma(FRAC_PI_4).is_err());
        assert!(fam.with_gamma(0.2).is_ok());
    }

    #[test]
    fn case_two_pole_is_reported() {
        let fam = Sl2cFamily::new(Case::II, 2.0, 0.0, 0.5)
            .unwrap()
            .shifted(1.5)
            .unwrap();
        assert_eq!(fam.eval_f_g(1.5), Err(Error::Singular(1.5)));
        assert!(fam.with_gamma(0.1).unwrap().eval_f_g(1.5).is_ok());
    }

    #[test]
    fn far_tails_stay_finite() {
        for case in [Case::I, Case::II] {
            let fam = Sl2cFamily::new(case, 2.0, 0.3, 0.5)
                .unwrap()
                .with_gamma(0.3)
                .unwrap();
            for x in [-800.0, -30.0, 30.0, 800.0] {
                let (f, g) = fam.eval_f_g(x).unwrap();
                assert!((f.norm() - 1.0).abs() < 1e-12);
                assert!(g.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn constraints_hold_for_exact_solutions() {
        let g = Grid::new(-6.0, 6.0, 12_001).unwrap();
        let fam = Sl2cFamily::new(Case::I, 1.7, 0.4, -0.9)
            .unwrap()
            .with_gamma(0.3)
            .unwrap();
        let (rf, rg) = constraint_residual(&fam, &g).unwrap();
        assert!(rf < 1e-6 && rg < 1e-6, "{rf} {rg}");
        let fam = Sl2cFamily::new(Case::III, 2.0, 1.0, 1.0)
            .unwrap()
            .with_branch(Branch::Minus);
        let (rf, rg) = constraint_residual(&fam, &Grid::new(-3.0, 3.0, 6001).unwrap()).unwrap();
        assert!(rf < 1e-6 && rg < 1e-6, "{rf} {rg}");
    }

    #[test]
    fn shifted_tanh_is_detected() {
        let g = Grid::new(-6.0, 6.0, 12_001).unwrap();
        let fam = Sl2cFamily::new(Case::I, 1.0, 0.0, 0.0).unwrap();
        let eps = 0.01;
        let (rf, _) = constraint_residual_with_offset(&fam, &g, eps.into()).unwrap();
        // 1 - (tanh + ε)² = sech² - 2ε tanh - ε²
        let oracle = g
            .points()
            .map(|x| (2.0 * eps * x.tanh() + eps * eps).abs())
            .fold(0.0, f64::max);
        assert!((rf - oracle).abs() < 1e-6, "{rf} vs {oracle}");
    }

    #[test]
    fn scarf_value_at_origin() {
        let fam = Sl2cFamily::new(Case::I, 1.0, 0.0, 1.0).unwrap();
        assert!(close(fam.vm_at(0.0).unwrap(), (-1.75).into(), 1e-14));
    }

    #[test]
    fn vanishing_potential_at_m_half_b_zero() {
        let fam = Sl2cFamily::new(Case::I, 0.5, 0.0, 0.0).unwrap();
        let v = potential_vm(&fam, &Grid::new(-5.0, 5.0, 101).unwrap()).unwrap();
        assert!(v.max_abs() < 1e-15);
    }

    #[test]
    fn morse_value_at_origin() {
        let fam = Sl2cFamily::new(Case::III, 1.0, 1.0, 0.0).unwrap();
        assert!(close(fam.vm_at(0.0).unwrap(), (-1.0).into(), 1e-15));
        assert!(close(
            fam.vm_closed_form_at(0.0).unwrap(),
            (-1.0).into(),
            1e-15
        ));
    }

    #[test]
    fn spectra() {
        assert_eq!(family_spectrum(1.0).energies(), vec![-0.25]);
        assert_eq!(family_spectrum(2.0).energies(), vec![-2.25, -0.25]);
        assert!(family_spectrum(0.5).levels.is_empty());
        assert!(family_spectrum(0.4).levels.is_empty());
        let s = family_spectrum(0.6);
        assert_eq!(s.levels.len(), 1);
        assert!((s.levels[0].energy + 0.01).abs() < 1e-15);
    }

    #[test]
    fn bridge_splits_for_pure_imaginary_b() {
        let (m, bi, c) = (2.5, 0.8, 0.3);
        let w = bridge_superpotential(
            &Sl2cFamily::new(Case::I, m, 0.0, bi)
                .unwrap()
                .shifted(c)
                .unwrap(),
        );
        assert_eq!(w.energy_real(), -(m - 0.5) * (m - 0.5));
        for x in [-3.0, -0.2, 0.0, 1.1, 4.0] {
            assert!((w.f().eval(x) - (m - 0.5) * (x - c).tanh()).abs() < 1e-14);
            assert!((w.g().eval(x) + bi / (x - c).cosh()).abs() < 1e-14);
        }
        let w = bridge_superpotential(&Sl2cFamily::new(Case::III, m, 0.0, bi).unwrap());
        for x in [-1.0, 0.0, 2.0] {
            assert!((w.f().eval(x) - (m - 0.5)).abs() < 1e-15);
            assert!((w.g().eval(x) + bi * (-x).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn real_b_gives_real_superpotential() {
        let w = bridge_superpotential(&Sl2cFamily::new(Case::I, 2.0, 0.0, 0.0).unwrap());
        for x in [-2.0, 0.0, 2.0] {
            assert_eq!(w.g().eval(x), 0.0);
        }
    }

    #[test]
    fn shape_invariance_cases() {
        let g = Grid::new(-8.0, 8.0, 1601).unwrap();
        let fam = Sl2cFamily::new(Case::I, 2.0, 0.0, 1.0).unwrap();
        assert!(shape_invariance_residual(&fam, &g).unwrap() < 1e-10);
        let g2 = Grid::new(0.5, 10.0, 951).unwrap();
        let fam = Sl2cFamily::new(Case::II, 3.0, 0.0, 0.5).unwrap();
        assert!(shape_invariance_residual(&fam, &g2).unwrap() < 1e-10);
        let fam = Sl2cFamily::new(Case::III, 2.5, 0.0, 2.0).unwrap();
        assert!(
            shape_invariance_residual(&fam, &Grid::new(-2.0, 8.0, 1001).unwrap()).unwrap() < 1e-10
        );
    }

    #[test]
    fn singular_grid_is_a_domain_error() {
        let fam = Sl2cFamily::new(Case::II, 2.0, 0.0, 0.5).unwrap();
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        assert!(potential_vm(&fam, &g).is_err());
        assert!(partner_pair(&fam, &g).is_err());
    }

    #[test]
    fn pt_symmetry_by_case() {
        let g = Grid::new(-12.0, 12.0, 2400).unwrap();
        let pair = partner_pair(&Sl2cFamily::new(Case::I, 2.0, 0.0, 0.5).unwrap(), &g).unwrap();
        assert!(is_pt_symmetric(&pair.v_plus));
        assert!(is_pt_symmetric(&pair.v_minus));
        let pair = partner_pair(&Sl2cFamily::new(Case::II, 2.0, 0.0, 0.5).unwrap(), &g).unwrap();
        assert!(!is_pt_symmetric(&pair.v_plus));
        let pair = partner_pair(&Sl2cFamily::new(Case::III, 2.0, 0.0, 0.5).unwrap(), &g).unwrap();
        assert!(!is_pt_symmetric(&pair.v_plus));
    }
}
