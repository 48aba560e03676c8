//! Weierstrass-℘ partner potentials.
//!
//! Requiring `V⁽⁺⁾_I = 0` and `V⁽⁻⁾_R = 0` forces `f = g'/(2g)` and
//! `g'² = g (4g³/3 - 4E_R g + a)`, solved by
//!
//! ```text
//! g(z) = (a/4) / (℘(z; g₂, g₃) + E_R/3),   g₂ = 4E_R²/3,   g₃ = 8E_R³/27 - a²/12
//! ```
//!
//! with `z = x + c`. The resulting `V⁽⁺⁾ = 2u - a²/(12u²)` (`u = ℘ + E_R/3`)
//! is real and `V⁽⁻⁾ = -i (a/2) ℘'/u²` is purely imaginary.
//!
//! For `D = g₂³ - 27g₃² > 0` the potentials live on `0 < z < 2ω`; ℘ is
//! evaluated as `e₃ + (e₁-e₃)/sn²(z√(e₁-e₃), k)`. At `D = 0` the real period
//! is infinite and `℘ = E_R (1/3 + cosech²(√E_R z))`. `D < 0` is detected
//! and rejected.

pub mod jacobi;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{
    solve_depressed_cubic, trapezoid_cumulative, CubicRoots, Grid, SampledFunction,
};
use crate::susy::{fix_midpoint_phase, normalize_l2, PartnerPair, RealMap, SuperpotentialSpec};
use crate::{Error, Result};

/// `|D| < DEGENERACY_BAND · max(1, g₂³)` counts as degenerate.
pub const DEGENERACY_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParams {
    pub energy_real: f64,
    /// Integration constant of the first-order equation for `g`.
    pub a: f64,
    /// Shift in `z = x + c`.
    pub c: f64,
}

impl EllipticParams {
    pub fn new(energy_real: f64, a: f64) -> Result<Self> {
        if !(energy_real.is_finite() && a.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "E_R and a must be finite, got ({energy_real}, {a})"
            )));
        }
        if a == 0.0 {
            return Err(Error::InvalidArgument("a must be non-zero".into()));
        }
        Ok(Self {
            energy_real,
            a,
            c: 0.0,
        })
    }

    pub fn shifted(self, c: f64) -> Self {
        Self { c, ..self }
    }

    /// `E_R = √3`, `a = 4√(2/√3)`: invariants `g₂ = 4`, `g₃ = 0`.
    pub fn lemniscatic() -> Self {
        Self {
            energy_real: 3f64.sqrt(),
            a: 4.0 * (2.0 / 3f64.sqrt()).sqrt(),
            c: 0.0,
        }
    }

    /// `E_R = √3`, `a = 8/3^{1/4}`: the degenerate case with `g₂ = 4`,
    /// `g₃ = -8/3^{3/2}`.
    pub fn hyperbolic() -> Self {
        Self {
            energy_real: 3f64.sqrt(),
            a: 8.0 / 3f64.powf(0.25),
            c: 0.0,
        }
    }

    /// `a = (8/3) E_R^{3/2}`, where `D` vanishes.
    pub fn degenerate_a(energy_real: f64) -> f64 {
        8.0 / 3.0 * energy_real.powf(1.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NondegeneratePositive,
    NondegenerateNegative,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassData {
    pub g2: f64,
    pub g3: f64,
    pub roots: CubicRoots,
    pub discriminant: f64,
    pub regime: Regime,
    /// Real half-period, `Some` only for `D > 0`.
    pub omega: Option<f64>,
    /// `E_R` of the hyperbolic form used when degenerate.
    hyperbolic_energy: f64,
}

fn classify(g2: f64, discriminant: f64) -> Regime {
    if discriminant.abs() < DEGENERACY_BAND * g2.powi(3).max(1.0) {
        Regime::Degenerate
    } else if discriminant > 0.0 {
        Regime::NondegeneratePositive
    } else {
        Regime::NondegenerateNegative
    }
}

/// Invariants, cubic roots, discriminant, regime and half-period for `params`.
pub fn invariants_from(params: &EllipticParams) -> Result<WeierstrassData> {
    let (e, a) = (params.energy_real, params.a);
    if a == 0.0 {
        return Err(Error::InvalidArgument("a must be non-zero".into()));
    }
    let g2 = 4.0 / 3.0 * e * e;
    let g3 = 8.0 / 27.0 * e.powi(3) - a * a / 12.0;
    // g₂³ - 27g₃² = (a²/48)(64E_R³ - 9a²)
    let discriminant = a * a / 48.0 * (64.0 * e.powi(3) - 9.0 * a * a);
    Ok(WeierstrassData::build(g2, g3, discriminant, e))
}

impl WeierstrassData {
    /// Data for arbitrary real invariants. The hyperbolic form, if needed,
    /// uses `E_R = √(3g₂/4)`.
    pub fn from_invariants(g2: f64, g3: f64) -> Self {
        Self::build(g2, g3, g2.powi(3) - 27.0 * g3 * g3, (0.75 * g2).sqrt())
    }

    fn build(g2: f64, g3: f64, discriminant: f64, hyperbolic_energy: f64) -> Self {
        let roots = solve_depressed_cubic(g2, g3);
        let regime = classify(g2, discriminant);
        let omega = match regime {
            Regime::NondegeneratePositive => {
                let (e1, e2, e3) = roots.real();
                let mc = ((e1 - e2) / (e1 - e3)).clamp(0.0, 1.0);
                Some(jacobi::complete_k(mc) / (e1 - e3).sqrt())
            }
            _ => None,
        };
        Self {
            g2,
            g3,
            roots,
            discriminant,
            regime,
            omega,
            hyperbolic_energy,
        }
    }

    /// Right end of the real domain: `2ω`, or infinity when degenerate.
    pub fn domain_end(&self) -> Result<f64> {
        match self.regime {
            Regime::NondegeneratePositive => Ok(2.0 * self.omega.expect("omega set for D > 0")),
            Regime::Degenerate => Ok(f64::INFINITY),
            Regime::NondegenerateNegative => Err(self.unsupported()),
        }
    }

    fn unsupported(&self) -> Error {
        Error::UnsupportedRegime {
            discriminant: self.discriminant,
        }
    }

    fn check_domain(&self, z: f64) -> Result<()> {
        let end = self.domain_end()?;
        if !(z > 0.0 && z < end) {
            return Err(Error::Domain(format!("z = {z} outside (0, {end})")));
        }
        if self.regime == Regime::Degenerate && !(self.hyperbolic_energy > 0.0) {
            return Err(Error::Domain(format!(
                "degenerate case needs E_R > 0, got {}",
                self.hyperbolic_energy
            )));
        }
        Ok(())
    }

    /// ℘ and ℘' from the Jacobi form, for real distinct roots. Ignores the
    /// regime so it can be compared against the hyperbolic form near `D = 0`.
    pub fn wp_jacobi(&self, z: f64) -> Result<(f64, f64)> {
        if !self.roots.all_real {
            return Err(self.unsupported());
        }
        let (e1, e2, e3) = self.roots.real();
        let span = e1 - e3;
        if !(span > 0.0) {
            return Err(Error::Domain("roots coincide".into()));
        }
        let mc = ((e1 - e2) / span).clamp(0.0, 1.0);
        let omega = jacobi::complete_k(mc) / span.sqrt();
        // ℘(2ω - z) = ℘(z)
        let reduced = if z > omega { 2.0 * omega - z } else { z };
        let (sn, cn, dn) = jacobi::sncndn(reduced * span.sqrt(), mc);
        let p = e3 + span / (sn * sn);
        // |℘'| = 2 sqrt((℘-e₁)(℘-e₂)(℘-e₃)), each factor written through cn, dn, sn
        let magnitude = 2.0 * span.powf(1.5) * (cn * dn).abs() / sn.abs().powi(3);
        let sign = if z < omega {
            -1.0
        } else if z > omega {
            1.0
        } else {
            0.0
        };
        Ok((p, sign * magnitude))
    }

    fn wp_hyperbolic(&self, z: f64) -> (f64, f64) {
        let e = self.hyperbolic_energy;
        let s = e.sqrt() * z;
        let cosech = 1.0 / s.sinh();
        let coth = 1.0 / s.tanh();
        let p = e * (1.0 / 3.0 + cosech * cosech);
        let dp = -2.0 * e.powf(1.5) * cosech * cosech * coth;
        (p, dp)
    }

    /// `(℘(z), ℘'(z))`
    pub fn wp_both(&self, z: f64) -> Result<(f64, f64)> {
        self.check_domain(z)?;
        match self.regime {
            Regime::NondegeneratePositive => self.wp_jacobi(z),
            Regime::Degenerate => Ok(self.wp_hyperbolic(z)),
            Regime::NondegenerateNegative => Err(self.unsupported()),
        }
    }

    pub fn hyperbolic_energy(&self) -> f64 {
        self.hyperbolic_energy
    }
}

pub fn wp(z: f64, data: &WeierstrassData) -> Result<f64> {
    Ok(data.wp_both(z)?.0)
}

/// ℘' with its sign fixed by the position of `z` relative to ω.
pub fn wp_prime(z: f64, data: &WeierstrassData) -> Result<f64> {
    Ok(data.wp_both(z)?.1)
}

/// Quantities needed by g, f and the potentials at one point.
struct Local {
    wp: f64,
    dwp: f64,
    /// ℘ + E_R/3
    u: f64,
}

fn local(z: f64, params: &EllipticParams, data: &WeierstrassData) -> Result<Local> {
    let (wp, dwp) = data.wp_both(z)?;
    let u = wp + params.energy_real / 3.0;
    if !(u.abs() > 1e-300) || !u.is_finite() {
        return Err(Error::Singular(z));
    }
    Ok(Local { wp, dwp, u })
}

/// `g = (a/4) / (℘ + E_R/3)`
pub fn g_of_z(z: f64, params: &EllipticParams, data: &WeierstrassData) -> Result<f64> {
    let l = local(z, params, data)?;
    Ok(params.a / (4.0 * l.u))
}

/// `dg/dz = -(a/4) ℘' / (℘ + E_R/3)²`
pub fn g_prime_of_z(z: f64, params: &EllipticParams, data: &WeierstrassData) -> Result<f64> {
    let l = local(z, params, data)?;
    Ok(-params.a / 4.0 * l.dwp / (l.u * l.u))
}

/// `f = g'/(2g) = -℘' / (2(℘ + E_R/3))`
pub fn f_of_z(z: f64, params: &EllipticParams, data: &WeierstrassData) -> Result<f64> {
    let l = local(z, params, data)?;
    Ok(-l.dwp / (2.0 * l.u))
}

/// `df/dz` using `℘'' = 6℘² - g₂/2`.
pub fn f_prime_of_z(z: f64, params: &EllipticParams, data: &WeierstrassData) -> Result<f64> {
    let l = local(z, params, data)?;
    let d2 = 6.0 * l.wp * l.wp - data.g2 / 2.0;
    Ok(-d2 / (2.0 * l.u) + l.dwp * l.dwp / (2.0 * l.u * l.u))
}

/// `W(x) = f(x + c) + i g(x + c)` with closed-form derivatives and the
/// factorization energy `E_R`.
pub fn superpotential(params: &EllipticParams, data: &WeierstrassData) -> SuperpotentialSpec {
    let (p, d) = (*params, *data);
    let or_nan = |r: Result<f64>| r.unwrap_or(f64::NAN);
    SuperpotentialSpec::new(
        RealMap::with_derivative(
            move |x| or_nan(f_of_z(x + p.c, &p, &d)),
            move |x| or_nan(f_prime_of_z(x + p.c, &p, &d)),
        ),
        RealMap::with_derivative(
            move |x| or_nan(g_of_z(x + p.c, &p, &d)),
            move |x| or_nan(g_prime_of_z(x + p.c, &p, &d)),
        ),
        params.energy_real,
    )
}

/// `max |g'² - g(4g³/3 - 4E_R g + a)|` with `g'` in closed form.
pub fn ode_residual(params: &EllipticParams, data: &WeierstrassData, grid: &Grid) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for z in grid.points() {
        let g = g_of_z(z, params, data)?;
        let dg = g_prime_of_z(z, params, data)?;
        worst = worst.max(ode_defect(params, g, dg).abs());
    }
    Ok(worst)
}

/// Same as [`ode_residual`] with `g'` from central differences of `g`.
pub fn ode_residual_fd(
    params: &EllipticParams,
    data: &WeierstrassData,
    grid: &Grid,
) -> Result<f64> {
    use crate::numerics::{central_derivative, Derivative};
    let g = SampledFunction::try_from_fn(*grid, |z| Ok(g_of_z(z, params, data)?.into()))?;
    let dg = central_derivative(&g, Derivative::First)?;
    Ok((0..grid.len())
        .map(|i| ode_defect(params, g[i].re, dg[i].re).abs())
        .fold(0.0, f64::max))
}

fn ode_defect(params: &EllipticParams, g: f64, dg: f64) -> f64 {
    dg * dg - g * (4.0 / 3.0 * g.powi(3) - 4.0 * params.energy_real * g + params.a)
}

/// Real `V⁽⁺⁾` and imaginary `V⁽⁻⁾` sampled on a grid in `z`.
///
/// The hyperbolic closed forms are used when degenerate; the sign of `V⁽⁻⁾_I`
/// then follows the sign of `a`.
pub fn elliptic_pair(
    params: &EllipticParams,
    data: &WeierstrassData,
    grid: &Grid,
) -> Result<PartnerPair> {
    let mut plus = Vec::with_capacity(grid.len());
    let mut minus = Vec::with_capacity(grid.len());
    for z in grid.points() {
        data.check_domain(z)?;
        let (vp, vm) = match data.regime {
            Regime::Degenerate => {
                let e = data.hyperbolic_energy;
                let s = e.sqrt() * z;
                let c2 = (1.0 / s.sinh()).powi(2);
                let q = 1.0 + 1.5 * c2;
                let vp = 4.0 / 3.0 * e * (q - 1.0 / (q * q));
                let vm = params.a.signum() * 6.0 * e * c2 / s.tanh() / (q * q);
                (vp, vm)
            }
            _ => {
                let l = local(z, params, data)?;
                let a = params.a;
                (
                    2.0 * l.u - a * a / (12.0 * l.u * l.u),
                    -a / 2.0 * l.dwp / (l.u * l.u),
                )
            }
        };
        plus.push(Complex64::new(vp, 0.0));
        minus.push(Complex64::new(0.0, vm));
    }
    PartnerPair::new(
        SampledFunction::new(*grid, plus)?,
        SampledFunction::new(*grid, minus)?,
    )
}

/// `V⁽⁻⁾` on the closed period `[0, 2ω]` with `n` points.
///
/// `V⁽⁻⁾_I ~ a z` near both poles of ℘, so the end samples take the limit
/// value zero and Dirichlet conditions can be imposed at the true ends.
pub fn lower_potential_closed(
    params: &EllipticParams,
    data: &WeierstrassData,
    n: usize,
) -> Result<SampledFunction> {
    if data.regime != Regime::NondegeneratePositive {
        return Err(data.unsupported());
    }
    let end = data.domain_end()?;
    let closed = Grid::new(0.0, end, n)?;
    let inner = Grid::open(0.0, end, n - 2)?;
    let pair = elliptic_pair(params, data, &inner)?;
    let mut values = Vec::with_capacity(n);
    values.push(Complex64::new(0.0, 0.0));
    values.extend_from_slice(pair.v_minus.values());
    values.push(Complex64::new(0.0, 0.0));
    SampledFunction::new(closed, values)
}

/// `|ψ⁽⁻⁾₀| = (|K| √|a| / 2) (℘ + E_R/3)^{-1/2}`.
///
/// Scaled to unit maximum in the nondegenerate case; `K = 1` when degenerate,
/// so the large-`z` plateau is `½ √(3|a| / (2E_R))`.
pub fn zero_mode_modulus(
    params: &EllipticParams,
    data: &WeierstrassData,
    grid: &Grid,
) -> Result<SampledFunction> {
    let raw = SampledFunction::try_from_fn(*grid, |z| {
        let l = local(z, params, data)?;
        Ok((params.a.abs().sqrt() / 2.0 / l.u.sqrt()).into())
    })?;
    match data.regime {
        Regime::Degenerate => Ok(raw),
        _ => {
            let m = raw.max_abs();
            raw.map(|v| v / m)
        }
    }
}

/// `ψ⁽⁻⁾₀ = K √g exp(i ∫ᶻ g)`, the zero mode of `H₋`.
///
/// `∫g` is a running trapezoid sum from the first grid point. Unit L² norm
/// in the nondegenerate case, `K = 1` in the degenerate one; the phase makes
/// the midpoint sample real and positive.
pub fn zero_mode(
    params: &EllipticParams,
    data: &WeierstrassData,
    grid: &Grid,
) -> Result<SampledFunction> {
    let g = SampledFunction::try_from_fn(*grid, |z| Ok(g_of_z(z, params, data)?.into()))?;
    let phase = trapezoid_cumulative(&g)?;
    let psi = g.zip_with(&phase, |gv, p| gv.sqrt() * (Complex64::i() * p).exp())?;
    let psi = match data.regime {
        Regime::Degenerate => psi,
        _ => normalize_l2(&psi)?,
    };
    fix_midpoint_phase(&psi)
}
