use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform one-dimensional grid `x_i = x_min + i h`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must be finite, got [{x_min}, {x_max}]"
            )));
        }
        if x_min >= x_max {
            return Err(Error::InvalidArgument(format!(
                "grid requires x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Grid strictly inside `(lo, hi)`, keeping one spacing clear of each end.
    ///
    /// Used for potentials with poles at the interval ends.
    pub fn open(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        Self::with_offset(lo, hi, n_points, 1.0)
    }

    /// Grid inside `(lo, hi)` whose first and last points sit `offset`
    /// spacings away from the ends.
    pub fn with_offset(lo: f64, hi: f64, n_points: usize, offset: f64) -> Result<Self> {
        if !(offset >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "interior offset must be non-negative, got {offset}"
            )));
        }
        if n_points < 3 || !(lo < hi) {
            return Self::new(lo, hi, n_points);
        }
        let h = (hi - lo) / ((n_points - 1) as f64 + 2.0 * offset);
        Self::new(lo + offset * h, hi - offset * h, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        // Scaling the span first keeps symmetric grids exactly symmetric.
        self.x_min + (i as f64) * (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.x_min) / self.spacing()).round();
        t.clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Same span with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_min + self.x_max)
    }
}

/// Complex-valued function tabulated on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
    singular_endpoints: bool,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        Self::build(grid, values, false)
    }

    /// Like [`SampledFunction::new`] but tolerates non-finite first and last
    /// samples.
    pub fn with_singular_endpoints(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        Self::build(grid, values, true)
    }

    fn build(grid: Grid, values: Vec<Complex64>, singular_endpoints: bool) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let n = values.len();
        for (i, v) in values.iter().enumerate() {
            let endpoint = i == 0 || i == n - 1;
            if !(v.re.is_finite() && v.im.is_finite()) && !(singular_endpoints && endpoint) {
                return Err(Error::Domain(format!(
                    "non-finite sample {v} at x = {}",
                    grid.x(i)
                )));
            }
        }
        Ok(Self {
            grid,
            values,
            singular_endpoints,
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            grid,
            grid.points().map(|x| Complex64::new(f(x), 0.0)).collect(),
        )
    }

    pub fn try_from_fn(grid: Grid, f: impl Fn(f64) -> Result<Complex64>) -> Result<Self> {
        let values = grid.points().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn has_singular_endpoints(&self) -> bool {
        self.singular_endpoints
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete L² norm `sqrt(h Σ |v_i|²)`.
    pub fn norm_l2(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::build(
            self.grid,
            self.values.iter().copied().map(f).collect(),
            self.singular_endpoints,
        )
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_same_grid(other)?;
        Self::build(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            self.singular_endpoints || other.singular_endpoints,
        )
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Largest pointwise distance to another function on the same grid.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl std::ops::Index<usize> for SampledFunction {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_bad_bounds() {
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(2.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 10).is_err());
    }

    #[test]
    fn grid_points_are_uniform_and_hit_the_ends() {
        let g = Grid::new(-12.0, 12.0, 2401).unwrap();
        assert_eq!(g.x(0), -12.0);
        assert_eq!(g.x(2400), 12.0);
        assert_eq!(g.x(1200), 0.0);
        assert!((g.spacing() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn open_grid_keeps_one_spacing_from_the_ends() {
        let g = Grid::open(0.0, 2.0, 9).unwrap();
        let h = g.spacing();
        assert!((h - 0.2).abs() < 1e-15);
        assert!((g.x_min() - h).abs() < 1e-15);
        assert!((2.0 - g.x_max() - h).abs() < 1e-15);
        assert!((g.x(4) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn refined_grid_halves_spacing() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        let r = g.refined();
        assert_eq!(r.len(), 21);
        assert!((r.spacing() - g.spacing() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sampled_function_validates_length_and_finiteness() {
        let g = Grid::new(0.0, 1.0, 5).unwrap();
        assert!(SampledFunction::new(g, vec![Complex64::new(0.0, 0.0); 4]).is_err());
        let mut v = vec![Complex64::new(1.0, 0.0); 5];
        v[0] = Complex64::new(f64::INFINITY, 0.0);
        assert!(SampledFunction::new(g, v.clone()).is_err());
        assert!(SampledFunction::with_singular_endpoints(g, v.clone()).is_ok());
        v[0] = Complex64::new(1.0, 0.0);
        v[2] = Complex64::new(f64::NAN, 0.0);
        assert!(SampledFunction::with_singular_endpoints(g, v).is_err());
    }

    #[test]
    fn zip_with_requires_same_grid() {
        let a = SampledFunction::from_real_fn(Grid::new(0.0, 1.0, 5).unwrap(), |x| x).unwrap();
        let b = SampledFunction::from_real_fn(Grid::new(0.0, 2.0, 5).unwrap(), |x| x).unwrap();
        assert!(matches!(
            a.zip_with(&b, |p, q| p + q),
            Err(Error::InvalidArgument(_))
        ));
    }
}
