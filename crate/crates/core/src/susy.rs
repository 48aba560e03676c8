//! Complex superpotential `W = f + i g` and its partner potentials
//! `V± = W² ∓ W' + E`, the factor operators `A = d/dx + W`,
//! `A† = -d/dx + W`, intertwining residuals and zero modes.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::numerics::{
    central_derivative, trapezoid_cumulative, Derivative, Grid, SampledFunction,
};
use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one variable with an optional closed-form derivative.
#[derive(Clone)]
pub struct RealMap {
    value: ScalarFn,
    derivative: Option<ScalarFn>,
}

impl RealMap {
    pub fn new(value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(value),
            derivative: None,
        }
    }

    pub fn with_derivative(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            derivative: Some(Arc::new(derivative)),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::with_derivative(move |_| c, |_| 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn derivative(&self, x: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(x))
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Drops the closed-form derivative, forcing finite differences.
    pub fn without_derivative(&self) -> Self {
        Self {
            value: self.value.clone(),
            derivative: None,
        }
    }

    pub fn negated(&self) -> Self {
        let v = self.value.clone();
        Self {
            value: Arc::new(move |x| -v(x)),
            derivative: self.derivative.clone().map(|d| {
                let d: ScalarFn = Arc::new(move |x| -d(x));
                d
            }),
        }
    }

    fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.points().map(|x| self.eval(x)).collect()
    }

    fn sample_derivative(&self, grid: &Grid) -> Result<Vec<f64>> {
        match &self.derivative {
            Some(d) => Ok(grid.points().map(|x| d(x)).collect()),
            None => {
                let f = SampledFunction::from_real_fn(*grid, |x| self.eval(x))?;
                Ok(central_derivative(&f, Derivative::First)?.re())
            }
        }
    }
}

impl fmt::Debug for RealMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealMap")
            .field("analytic_derivative", &self.has_derivative())
            .finish()
    }
}

/// Superpotential `W = f + i g` together with the factorization energy.
#[derive(Clone, Debug)]
pub struct SuperpotentialSpec {
    f: RealMap,
    g: RealMap,
    energy_real: f64,
    energy_imag: f64,
}

impl SuperpotentialSpec {
    pub fn new(f: RealMap, g: RealMap, energy_real: f64) -> Self {
        Self {
            f,
            g,
            energy_real,
            energy_imag: 0.0,
        }
    }

    /// Splits a complex `W` (and optionally `W'`) into its real and imaginary parts.
    pub fn from_complex<W, D>(w: W, w_prime: Option<D>, energy_real: f64) -> Self
    where
        W: Fn(f64) -> Complex64 + Send + Sync + 'static,
        D: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        let w = Arc::new(w);
        let (wr, wi) = (w.clone(), w);
        match w_prime {
            Some(d) => {
                let d = Arc::new(d);
                let (dr, di) = (d.clone(), d);
                Self::new(
                    RealMap::with_derivative(move |x| wr(x).re, move |x| dr(x).re),
                    RealMap::with_derivative(move |x| wi(x).im, move |x| di(x).im),
                    energy_real,
                )
            }
            None => Self::new(
                RealMap::new(move |x| wr(x).re),
                RealMap::new(move |x| wi(x).im),
                energy_real,
            ),
        }
    }

    pub fn with_imaginary_energy(mut self, energy_imag: f64) -> Self {
        self.energy_imag = energy_imag;
        self
    }

    pub fn f(&self) -> &RealMap {
        &self.f
    }

    pub fn g(&self) -> &RealMap {
        &self.g
    }

    pub fn energy_real(&self) -> f64 {
        self.energy_real
    }

    pub fn energy_imag(&self) -> f64 {
        self.energy_imag
    }

    pub fn energy(&self) -> Complex64 {
        Complex64::new(self.energy_real, self.energy_imag)
    }

    pub fn w(&self, x: f64) -> Complex64 {
        Complex64::new(self.f.eval(x), self.g.eval(x))
    }

    /// Closed-form `W'` when both parts carry one.
    pub fn w_prime(&self, x: f64) -> Option<Complex64> {
        Some(Complex64::new(self.f.derivative(x)?, self.g.derivative(x)?))
    }

    /// `f → -f`
    pub fn negate_real_part(&self) -> Self {
        Self {
            f: self.f.negated(),
            ..self.clone()
        }
    }

    /// `g → -g`
    pub fn negate_imaginary_part(&self) -> Self {
        Self {
            g: self.g.negated(),
            ..self.clone()
        }
    }

    /// Same `W` with finite-difference derivatives only.
    pub fn numerical_derivatives(&self) -> Self {
        Self {
            f: self.f.without_derivative(),
            g: self.g.without_derivative(),
            ..self.clone()
        }
    }

    pub fn sample(&self, grid: &Grid) -> Result<SampledFunction> {
        SampledFunction::from_fn(*grid, |x| self.w(x))
    }

    /// `W'` on the grid, closed form per component where available.
    pub fn sample_derivative(&self, grid: &Grid) -> Result<SampledFunction> {
        let df = self.f.sample_derivative(grid)?;
        let dg = self.g.sample_derivative(grid)?;
        SampledFunction::new(
            *grid,
            df.into_iter()
                .zip(dg)
                .map(|(a, b)| Complex64::new(a, b))
                .collect(),
        )
    }
}

/// `V⁽⁺⁾` and `V⁽⁻⁾` on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerPair {
    pub v_plus: SampledFunction,
    pub v_minus: SampledFunction,
}

impl PartnerPair {
    pub fn new(v_plus: SampledFunction, v_minus: SampledFunction) -> Result<Self> {
        v_plus.check_same_grid(&v_minus)?;
        Ok(Self { v_plus, v_minus })
    }

    pub fn grid(&self) -> &Grid {
        self.v_plus.grid()
    }

    pub fn v_plus_r(&self) -> Vec<f64> {
        self.v_plus.re()
    }

    pub fn v_plus_i(&self) -> Vec<f64> {
        self.v_plus.im()
    }

    pub fn v_minus_r(&self) -> Vec<f64> {
        self.v_minus.re()
    }

    pub fn v_minus_i(&self) -> Vec<f64> {
        self.v_minus.im()
    }
}

/// `V⁽±⁾_R = f² - g² ∓ f' + E_R`, `V⁽±⁾_I = 2fg ∓ g' + E_I`.
pub fn partner_potentials(w: &SuperpotentialSpec, grid: &Grid) -> Result<PartnerPair> {
    let f = w.f.sample(grid);
    let g = w.g.sample(grid);
    let df = w.f.sample_derivative(grid)?;
    let dg = w.g.sample_derivative(grid)?;
    let (er, ei) = (w.energy_real, w.energy_imag);
    let n = grid.len();
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for i in 0..n {
        let base_r = f[i] * f[i] - g[i] * g[i] + er;
        let base_i = 2.0 * f[i] * g[i] + ei;
        plus.push(Complex64::new(base_r - df[i], base_i - dg[i]));
        minus.push(Complex64::new(base_r + df[i], base_i + dg[i]));
    }
    PartnerPair::new(
        SampledFunction::new(*grid, plus)?,
        SampledFunction::new(*grid, minus)?,
    )
}

/// `(d/dx + W) ψ` with `W` already sampled on ψ's grid.
pub fn apply_a_sampled(w: &SampledFunction, psi: &SampledFunction) -> Result<SampledFunction> {
    let d = central_derivative(psi, Derivative::First)?;
    let wpsi = w.zip_with(psi, |a, b| a * b)?;
    d.zip_with(&wpsi, |a, b| a + b)
}

/// `(-d/dx + W) ψ` with `W` already sampled on ψ's grid.
pub fn apply_a_dagger_sampled(
    w: &SampledFunction,
    psi: &SampledFunction,
) -> Result<SampledFunction> {
    let d = central_derivative(psi, Derivative::First)?;
    let wpsi = w.zip_with(psi, |a, b| a * b)?;
    d.zip_with(&wpsi, |a, b| -a + b)
}

pub fn apply_a(w: &SuperpotentialSpec, psi: &SampledFunction) -> Result<SampledFunction> {
    apply_a_sampled(&w.sample(psi.grid())?, psi)
}

pub fn apply_a_dagger(w: &SuperpotentialSpec, psi: &SampledFunction) -> Result<SampledFunction> {
    apply_a_dagger_sampled(&w.sample(psi.grid())?, psi)
}

/// `(-d²/dx² + V - E) ψ`
fn apply_hamiltonian(
    v: &SampledFunction,
    energy: Complex64,
    psi: &SampledFunction,
) -> Result<SampledFunction> {
    let d2 = central_derivative(psi, Derivative::Second)?;
    let vpsi = v.zip_with(psi, |a, b| (a - energy) * b)?;
    d2.zip_with(&vpsi, |a, b| -a + b)
}

/// `‖(A H₊ - H₋ A) ψ‖ / ‖ψ‖` with `H± = -d²/dx² + V± - E`.
///
/// Vanishes identically in the continuum; on the grid it is O(h²) for
/// smooth ψ that vanish near both ends.
pub fn intertwining_residual(w: &SuperpotentialSpec, psi: &SampledFunction) -> Result<f64> {
    let grid = psi.grid();
    let pair = partner_potentials(w, grid)?;
    let w_s = w.sample(grid)?;
    let e = w.energy();
    let lhs = apply_a_sampled(&w_s, &apply_hamiltonian(&pair.v_plus, e, psi)?)?;
    let rhs = apply_hamiltonian(&pair.v_minus, e, &apply_a_sampled(&w_s, psi)?)?;
    let diff = lhs.zip_with(&rhs, |a, b| a - b)?;
    let norm = psi.norm_l2();
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "test function is identically zero".into(),
        ));
    }
    Ok(diff.norm_l2() / norm)
}

/// Which partner carries the zero-energy ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// `ψ⁽⁺⁾₀ ∝ exp(-∫W)`, annihilated by `A`.
    Plus,
    /// `ψ⁽⁻⁾₀ ∝ exp(+∫W)`, annihilated by `A†`.
    Minus,
}

/// Rise of `Re ∫W` above its interior minimum that both ends must show
/// before a sector is declared normalizable.
const MIN_RISE: f64 = 1.0;

/// Decides the normalizable sector on `grid` from the behaviour of `Re ∫ˣ W`
/// at the two ends.
///
/// `Plus` needs `Re W < 0` on the left end, `Re W > 0` on the right end and a
/// rise of `Re ∫W` of at least one unit toward each end; `Minus` is the mirror
/// case. Anything else returns `None`.
pub fn sector_selector(w: &SuperpotentialSpec, grid: &Grid) -> Result<Option<Sector>> {
    let ws = w.sample(grid)?;
    let integral = trapezoid_cumulative(&ws)?.re();
    let n = integral.len();
    let (left_w, right_w) = (ws[0].re, ws[n - 1].re);
    let rises = |values: &[f64]| {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        values[0] - min > MIN_RISE && values[values.len() - 1] - min > MIN_RISE
    };
    if left_w < 0.0 && right_w > 0.0 && rises(&integral) {
        return Ok(Some(Sector::Plus));
    }
    let flipped: Vec<f64> = integral.iter().map(|v| -v).collect();
    if left_w > 0.0 && right_w < 0.0 && rises(&flipped) {
        return Ok(Some(Sector::Minus));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMode {
    pub psi: SampledFunction,
    /// `false` when the mode grows toward an end and was scaled to unit
    /// maximum modulus instead of unit norm.
    pub normalizable: bool,
}

/// Zero-energy solution `exp(∓∫ˣ W)` of `H±`.
///
/// Normalized to unit L² norm when `sector` is the one picked by
/// [`sector_selector`], otherwise to unit maximum modulus. The phase makes
/// the sample at the grid midpoint real and positive.
pub fn zero_mode(w: &SuperpotentialSpec, grid: &Grid, sector: Sector) -> Result<ZeroMode> {
    let integral = trapezoid_cumulative(&w.sample(grid)?)?;
    let sign = match sector {
        Sector::Plus => -1.0,
        Sector::Minus => 1.0,
    };
    let exponent: Vec<Complex64> = integral.values().iter().map(|v| sign * v).collect();
    let peak = exponent
        .iter()
        .map(|e| e.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !peak.is_finite() {
        return Err(Error::Domain(
            "superpotential is not integrable on the grid".into(),
        ));
    }
    let psi = SampledFunction::new(*grid, exponent.iter().map(|e| (e - peak).exp()).collect())?;
    let normalizable = sector_selector(w, grid)? == Some(sector);
    let psi = if normalizable {
        normalize_l2(&psi)?
    } else {
        let m = psi.max_abs();
        psi.map(|v| v / m)?
    };
    Ok(ZeroMode {
        psi: fix_midpoint_phase(&psi)?,
        normalizable,
    })
}

pub(crate) fn normalize_l2(psi: &SampledFunction) -> Result<SampledFunction> {
    let norm = psi.norm_l2();
    if !(norm > 0.0) {
        return Err(Error::Domain(
            "cannot normalize a vanishing function".into(),
        ));
    }
    psi.map(|v| v / norm)
}

/// Rotates ψ so its sample at the grid midpoint is real and positive.
pub(crate) fn fix_midpoint_phase(psi: &SampledFunction) -> Result<SampledFunction> {
    let mid = psi[(psi.grid().len() - 1) / 2];
    if mid.norm() == 0.0 {
        return Ok(psi.clone());
    }
    let phase = mid.conj() / mid.norm();
    psi.map(|v| v * phase)
}

/// Relative PT defect of `v` about its grid midpoint,
/// `max |V(x₀+s) - conj V(x₀-s)| / max |V|`.
pub fn pt_symmetry_defect(v: &SampledFunction) -> f64 {
    let n = v.grid().len();
    pt_symmetry_defect_about(v, (n - 1) as f64 / 2.0)
}

/// PT defect about a mirror placed at fractional grid index `center`, using
/// every sample whose mirror image is also on the grid.
pub fn pt_symmetry_defect_about(v: &SampledFunction, center: f64) -> f64 {
    let n = v.grid().len();
    let scale = v.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let twice = (2.0 * center).round() as i64;
    let mut worst: f64 = 0.0;
    for i in 0..n as i64 {
        let j = twice - i;
        if j < 0 || j >= n as i64 {
            continue;
        }
        let d = (v[i as usize] - v[j as usize].conj()).norm();
        worst = worst.max(d);
    }
    worst / scale
}

/// Threshold on [`pt_symmetry_defect`].
pub const PT_TOLERANCE: f64 = 1e-9;

pub fn is_pt_symmetric(v: &SampledFunction) -> bool {
    pt_symmetry_defect(v) < PT_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> SuperpotentialSpec {
        SuperpotentialSpec::new(
            RealMap::with_derivative(|x| x, |_| 1.0),
            RealMap::constant(0.0),
            0.0,
        )
    }

    fn grid() -> Grid {
        Grid::new(-8.0, 8.0, 4001).unwrap()
    }

    #[test]
    fn harmonic_partners_at_origin() {
        let g = Grid::new(-1.0, 1.0, 21).unwrap();
        let pair = partner_potentials(&harmonic(), &g).unwrap();
        let i = g.nearest_index(0.0);
        assert_eq!(pair.v_plus[i], Complex64::new(-1.0, 0.0));
        assert_eq!(pair.v_minus[i], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn constant_imaginary_superpotential() {
        let b = 0.7;
        let w = SuperpotentialSpec::new(RealMap::constant(0.0), RealMap::constant(b), 0.3);
        let pair = partner_potentials(&w, &Grid::new(0.0, 1.0, 11).unwrap()).unwrap();
        for v in pair.v_plus.values().iter().chain(pair.v_minus.values()) {
            assert!((v.re - (-b * b + 0.3)).abs() < 1e-15);
            assert_eq!(v.im, 0.0);
        }
    }

    #[test]
    fn non_finite_potential_is_a_domain_error() {
        let w = SuperpotentialSpec::new(
            RealMap::with_derivative(|x| 1.0 / x, |x| -1.0 / (x * x)),
            RealMap::constant(0.0),
            0.0,
        );
        let g = Grid::new(-1.0, 1.0, 11).unwrap();
        assert!(matches!(partner_potentials(&w, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn gaussian_is_annihilated_by_a() {
        let g = grid();
        let psi = SampledFunction::from_real_fn(g, |x| (-x * x / 2.0).exp()).unwrap();
        let a = apply_a(&harmonic(), &psi).unwrap();
        assert!(a.norm_l2() / psi.norm_l2() < 1e-5);
        let h = apply_a_dagger(&harmonic(), &a).unwrap();
        assert!(h.norm_l2() / psi.norm_l2() < 1e-4);
    }

    #[test]
    fn zero_superpotential_a_is_derivative() {
        let g = Grid::new(0.0, 3.0, 301).unwrap();
        let w = SuperpotentialSpec::new(RealMap::constant(0.0), RealMap::constant(0.0), 0.0);
        let psi = SampledFunction::from_real_fn(g, f64::sin).unwrap();
        let a = apply_a(&w, &psi).unwrap();
        let d = central_derivative(&psi, Derivative::First).unwrap();
        assert_eq!(a, d);
    }

    #[test]
    fn sampled_operator_rejects_grid_mismatch() {
        let psi = SampledFunction::from_real_fn(Grid::new(0.0, 1.0, 11).unwrap(), |x| x).unwrap();
        let w = SampledFunction::from_real_fn(Grid::new(0.0, 1.0, 12).unwrap(), |x| x).unwrap();
        assert!(matches!(
            apply_a_sampled(&w, &psi),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            apply_a_dagger_sampled(&w, &psi),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn intertwining_for_harmonic_superpotential() {
        let g = grid();
        let psi = SampledFunction::from_real_fn(g, |x| x * (-x * x / 2.0).exp()).unwrap();
        assert!(intertwining_residual(&harmonic(), &psi).unwrap() < 1e-4);
    }

    #[test]
    fn intertwining_trivial_for_zero_superpotential() {
        let g = grid();
        let w = SuperpotentialSpec::new(RealMap::constant(0.0), RealMap::constant(0.0), 0.0);
        let psi = SampledFunction::from_real_fn(g, |x| (-x * x).exp()).unwrap();
        let r = intertwining_residual(&w, &psi).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn sectors_of_simple_superpotentials() {
        let g = grid();
        assert_eq!(
            sector_selector(&harmonic(), &g).unwrap(),
            Some(Sector::Plus)
        );
        let minus = SuperpotentialSpec::new(RealMap::new(|x| -x), RealMap::constant(0.0), 0.0);
        assert_eq!(sector_selector(&minus, &g).unwrap(), Some(Sector::Minus));
        let flat = SuperpotentialSpec::new(RealMap::constant(1.0), RealMap::constant(0.0), 0.0);
        assert_eq!(sector_selector(&flat, &g).unwrap(), None);
    }

    #[test]
    fn harmonic_zero_mode_is_normalized_gaussian() {
        let g = grid();
        let zm = zero_mode(&harmonic(), &g, Sector::Plus).unwrap();
        assert!(zm.normalizable);
        assert!((zm.psi.norm_l2() - 1.0).abs() < 1e-12);
        let k = std::f64::consts::PI.powf(-0.25);
        let exact = SampledFunction::from_real_fn(g, |x| k * (-x * x / 2.0).exp()).unwrap();
        assert!(zm.psi.max_distance(&exact).unwrap() < 1e-6);
    }

    #[test]
    fn wrong_sector_is_flagged_unnormalizable() {
        let zm = zero_mode(&harmonic(), &grid(), Sector::Minus).unwrap();
        assert!(!zm.normalizable);
        assert!((zm.psi.max_abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pt_defect_detects_symmetry() {
        let g = Grid::new(-3.0, 3.0, 61).unwrap();
        let sym = SampledFunction::from_fn(g, |x| Complex64::new(x * x, x.powi(3))).unwrap();
        assert!(is_pt_symmetric(&sym));
        let asym = SampledFunction::from_fn(g, |x| Complex64::new(x * x, x * x)).unwrap();
        assert!(!is_pt_symmetric(&asym));
        let shifted = SampledFunction::from_fn(g, |x| Complex64::new(0.0, x - 1.0)).unwrap();
        assert!(pt_symmetry_defect_about(&shifted, g.nearest_index(1.0) as f64) < 1e-12);
    }
}
