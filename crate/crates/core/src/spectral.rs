//! Shooting-method eigenvalues of `-ψ'' + V ψ = E ψ` for complex sampled `V`
//! and real `E`.
//!
//! `ψ` is integrated with RK4 from both ends of the grid to a matching point;
//! `V` at half steps comes from cubic interpolation of the samples. The
//! mismatch is the Wronskian `ψ_L ψ'_R - ψ_R ψ'_L` divided by the norms of
//! the two state vectors `(ψ, ψ')`, so it measures the sine of the angle
//! between them and stays bounded by one.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numerics::{golden_section_min, midpoint_interpolate, rk4_step, Grid, SampledFunction};
use crate::{Error, Result};

/// Eigenvalues are accepted when the polished `|W|` is below this.
pub const ACCEPT_MISMATCH: f64 = 1e-5;

const RENORM_EVERY: usize = 100;
const RENORM_ABOVE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `ψ = 0` at both ends.
    DirichletBoth,
    /// `ψ = 0` on the left, exponential decay `ψ' = -√(V-E) ψ` on the right.
    DirichletLeftDecayRight,
    /// Exponential decay `ψ' = ±√(V-E) ψ` at both ends.
    DecayBoth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProblem {
    potential: SampledFunction,
    boundary: Boundary,
    energy_window: (f64, f64),
    scan_points: usize,
    match_index: usize,
    half_steps: Vec<Complex64>,
}

impl SpectralProblem {
    /// Problem on the potential's own grid, matched at the grid midpoint.
    pub fn new(
        potential: SampledFunction,
        boundary: Boundary,
        energy_window: (f64, f64),
        scan_points: usize,
    ) -> Result<Self> {
        let (lo, hi) = energy_window;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "energy window needs E_lo < E_hi, got ({lo}, {hi})"
            )));
        }
        if scan_points < 10 {
            return Err(Error::InvalidArgument(format!(
                "at least 10 scan points required, got {scan_points}"
            )));
        }
        let n = potential.grid().len();
        if n < 5 {
            return Err(Error::InvalidArgument(format!(
                "grid too small: {n} points"
            )));
        }
        if let Some(i) = potential
            .values()
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Singular(potential.grid().x(i)));
        }
        let half_steps = midpoint_interpolate(&potential)?;
        Ok(Self {
            potential,
            boundary,
            energy_window,
            scan_points,
            match_index: (n - 1) / 2,
            half_steps,
        })
    }

    /// Moves the matching point to the grid point nearest `x`, keeping at
    /// least two intervals on each side.
    pub fn with_match_point(mut self, x: f64) -> Self {
        let n = self.grid().len();
        self.match_index = self.grid().nearest_index(x).clamp(2, n - 3);
        self
    }

    pub fn with_window(mut self, energy_window: (f64, f64), scan_points: usize) -> Result<Self> {
        let fresh = Self::new(
            self.potential.clone(),
            self.boundary,
            energy_window,
            scan_points,
        )?;
        self.energy_window = fresh.energy_window;
        self.scan_points = fresh.scan_points;
        Ok(self)
    }

    pub fn potential(&self) -> &SampledFunction {
        &self.potential
    }

    pub fn grid(&self) -> &Grid {
        self.potential.grid()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn energy_window(&self) -> (f64, f64) {
        self.energy_window
    }

    pub fn scan_points(&self) -> usize {
        self.scan_points
    }

    pub fn match_point(&self) -> f64 {
        self.grid().x(self.match_index)
    }

    fn start_states(&self, energy: f64) -> ([Complex64; 2], [Complex64; 2]) {
        let h = self.grid().spacing();
        let n = self.grid().len();
        let one = Complex64::new(1.0, 0.0);
        let decay = |v: Complex64| (v - energy).sqrt();
        let dirichlet_left = [Complex64::new(0.0, 0.0), Complex64::new(h, 0.0)];
        let dirichlet_right = [Complex64::new(0.0, 0.0), Complex64::new(-h, 0.0)];
        let decay_left = [one, decay(self.potential[0])];
        let decay_right = [one, -decay(self.potential[n - 1])];
        match self.boundary {
            Boundary::DirichletBoth => (dirichlet_left, dirichlet_right),
            Boundary::DirichletLeftDecayRight => (dirichlet_left, decay_right),
            Boundary::DecayBoth => (decay_left, decay_right),
        }
    }

    /// Integrates from grid index `from` to `to`, calling `visit` with every
    /// state and the factor the earlier states were divided by.
    fn integrate(
        &self,
        energy: f64,
        start: [Complex64; 2],
        from: usize,
        to: usize,
        mut visit: impl FnMut(usize, [Complex64; 2], f64),
    ) -> Result<[Complex64; 2]> {
        let grid = self.grid();
        let h = grid.spacing();
        let v = self.potential.values();
        let forward = to >= from;
        let step = if forward { h } else { -h };
        let mut y = start;
        visit(from, y, 1.0);
        let mut i = from;
        let mut taken = 0usize;
        while i != to {
            let j = if forward { i + 1 } else { i - 1 };
            let (v0, vm, v1) = (v[i], self.half_steps[i.min(j)], v[j]);
            // RK4 evaluates at offsets 0, h/2 and h from x_i
            let rhs = |t: f64, s: &[Complex64; 2]| {
                let frac = t / step;
                let pot = if frac < 0.25 {
                    v0
                } else if frac < 0.75 {
                    vm
                } else {
                    v1
                };
                [s[1], (pot - energy) * s[0]]
            };
            y = rk4_step(&rhs, 0.0, &y, step);
            i = j;
            taken += 1;
            let size = y[0].norm().max(y[1].norm());
            if !size.is_finite() {
                return Err(Error::Overflow { index: i });
            }
            let mut factor = 1.0;
            if size > RENORM_ABOVE || (taken.is_multiple_of(RENORM_EVERY) && size > 0.0) {
                factor = size;
                y = [y[0] / size, y[1] / size];
            }
            visit(i, y, factor);
        }
        Ok(y)
    }
}

/// Normalized matching mismatch at real energy `E`.
pub fn shoot(problem: &SpectralProblem, energy: f64) -> Result<Complex64> {
    let n = problem.grid().len();
    let (left, right) = problem.start_states(energy);
    let m = problem.match_index;
    let l = problem.integrate(energy, left, 0, m, |_, _, _| {})?;
    let r = problem.integrate(energy, right, n - 1, m, |_, _, _| {})?;
    Ok(normalized_wronskian(l, r))
}

fn normalized_wronskian(l: [Complex64; 2], r: [Complex64; 2]) -> Complex64 {
    let w = l[0] * r[1] - r[0] * l[1];
    let norm_l = (l[0].norm_sqr() + l[1].norm_sqr()).sqrt();
    let norm_r = (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    let scale = norm_l * norm_r;
    if scale == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    w / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub energy: f64,
    pub mismatch: f64,
    pub n_nodes_real_part: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Accepted levels, ascending.
    pub eigenvalues: Vec<Eigenvalue>,
    /// Minima of `|W|` that did not polish below the threshold, as
    /// `(E, |W|)`.
    pub rejected: Vec<(f64, f64)>,
    pub diagnostics: String,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.energy).collect()
    }
}

/// Scans the energy window, polishes every interior local minimum of `|W|`
/// and keeps those with `|W| < ACCEPT_MISMATCH`.
///
/// Scan energies are evaluated in parallel; results are gathered in energy
/// order so the outcome does not depend on scheduling.
pub fn find_spectrum(problem: &SpectralProblem) -> Result<SpectrumResult> {
    let (lo, hi) = problem.energy_window;
    let k = problem.scan_points;
    let energies: Vec<f64> = (0..k)
        .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
        .collect();
    let scan: Vec<f64> = energies
        .par_iter()
        .map(|&e| shoot(problem, e).map(|w| w.norm()))
        .collect::<Result<Vec<_>>>()?;

    let mut eigenvalues = Vec::new();
    let mut rejected = Vec::new();
    for i in 1..k - 1 {
        if !(scan[i] <= scan[i - 1] && scan[i] < scan[i + 1]) {
            continue;
        }
        let (a, b) = (energies[i - 1], energies[i + 1]);
        let (energy, mismatch) = polish(problem, a, b, (energies[i], scan[i]))?;
        if mismatch < ACCEPT_MISMATCH {
            let psi = eigenfunction(problem, energy)?;
            eigenvalues.push(Eigenvalue {
                energy,
                mismatch,
                n_nodes_real_part: count_nodes_real_part(&psi),
            });
        } else {
            rejected.push((energy, mismatch));
        }
    }
    let diagnostics = format!(
        "scanned {k} energies in [{lo}, {hi}]; {} minima, {} accepted (|W| < {ACCEPT_MISMATCH:e})",
        eigenvalues.len() + rejected.len(),
        eigenvalues.len()
    );
    Ok(SpectrumResult {
        eigenvalues,
        rejected,
        diagnostics,
    })
}

fn polish(
    problem: &SpectralProblem,
    a: f64,
    b: f64,
    bracket_min: (f64, f64),
) -> Result<(f64, f64)> {
    let mut failure = None;
    let mut sq = |e: f64| match shoot(problem, e) {
        Ok(w) => w.norm_sqr(),
        Err(err) => {
            failure.get_or_insert(err);
            f64::INFINITY
        }
    };
    let tol = 1e-13 * a.abs().max(b.abs()).max(1.0);
    let (x, fx) = golden_section_min(&mut sq, a, b, tol);
    let mut best = (x, fx);
    // one parabolic step through three nearby samples, kept only if it helps
    let d = ((b - a) * 1e-6).max(tol);
    let (fl, fr) = (sq(x - d), sq(x + d));
    let curvature = fl - 2.0 * fx + fr;
    if curvature > 0.0 {
        let xp = x - 0.5 * d * (fr - fl) / curvature;
        if xp > a && xp < b {
            let fp = sq(xp);
            if fp < best.1 {
                best = (xp, fp);
            }
        }
    }
    if let Some(err) = failure {
        return Err(err);
    }
    let polished = best.1.sqrt();
    if polished > bracket_min.1 {
        return Ok(bracket_min);
    }
    Ok((best.0, polished))
}

/// ψ at energy `E`, glued at the matching point and normalized to unit L²
/// norm with a real positive sample at the point of largest modulus.
pub fn eigenfunction(problem: &SpectralProblem, energy: f64) -> Result<SampledFunction> {
    let grid = *problem.grid();
    let n = grid.len();
    let m = problem.match_index;
    let (left, right) = problem.start_states(energy);
    let mut psi = vec![Complex64::new(0.0, 0.0); n];

    let l = problem.integrate(energy, left, 0, m, |i, y, factor| {
        if factor != 1.0 {
            psi[..i].iter_mut().for_each(|v| *v /= factor);
        }
        psi[i] = y[0];
    })?;
    let r = problem.integrate(energy, right, n - 1, m, |i, y, factor| {
        if factor != 1.0 {
            psi[i + 1..].iter_mut().for_each(|v| *v /= factor);
        }
        psi[i] = y[0];
    })?;
    // scale the right branch so ψ (or ψ' if ψ vanishes) is continuous
    let ratio = if r[0].norm() >= 1e-3 * r[1].norm() {
        l[0] / r[0]
    } else {
        l[1] / r[1]
    };
    psi[m] = l[0];
    psi[m + 1..].iter_mut().for_each(|v| *v *= ratio);
    let raw = SampledFunction::new(grid, psi)?;
    let norm = raw.norm_l2();
    if !(norm > 0.0) {
        return Err(Error::Solver("eigenfunction vanishes".into()));
    }
    let peak = raw
        .values()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = peak.conj() / peak.norm();
    raw.map(|v| v * phase / norm)
}

/// Sign changes of `Re ψ`, ignoring samples below `1e-8` of the peak.
pub fn count_nodes_real_part(psi: &SampledFunction) -> usize {
    let floor = 1e-8 * psi.max_abs();
    let mut last = 0.0f64;
    let mut nodes = 0;
    for v in psi.values() {
        if v.re.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.re.signum() != last {
            nodes += 1;
        }
        last = v.re.signum();
    }
    nodes
}

/// `‖(-D² + V - E) ψ‖₂ / ‖ψ‖₂` over interior points, with `D²` the
/// three-point second difference.
pub fn operator_residual(
    potential: &SampledFunction,
    psi: &SampledFunction,
    energy: f64,
) -> Result<f64> {
    potential.check_same_grid(psi)?;
    let n = psi.grid().len();
    if n < 3 {
        return Err(Error::InvalidArgument("need at least 3 points".into()));
    }
    let h2 = psi.grid().spacing().powi(2);
    let (p, v) = (psi.values(), potential.values());
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 1..n - 1 {
        let d2 = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / h2;
        num += (-d2 + (v[i] - energy) * p[i]).norm_sqr();
        den += p[i].norm_sqr();
    }
    if den == 0.0 {
        return Err(Error::Domain("ψ vanishes on the interior".into()));
    }
    Ok((num / den).sqrt())
}
