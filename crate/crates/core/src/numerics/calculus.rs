use num_complex::Complex64;

use super::grid::SampledFunction;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    First,
    Second,
}

/// Second-order finite differences: central in the interior, one-sided
/// three/four-point stencils at the two ends.
pub fn central_derivative(f: &SampledFunction, order: Derivative) -> Result<SampledFunction> {
    let n = f.grid().len();
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "finite differences need at least 5 points, got {n}"
        )));
    }
    let h = f.grid().spacing();
    let v = f.values();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    match order {
        Derivative::First => {
            let inv = 1.0 / (2.0 * h);
            out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv;
            for i in 1..n - 1 {
                out[i] = (v[i + 1] - v[i - 1]) * inv;
            }
            out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv;
        }
        Derivative::Second => {
            let inv = 1.0 / (h * h);
            out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv;
            for i in 1..n - 1 {
                out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv;
            }
            out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) * inv;
        }
    }
    SampledFunction::new(*f.grid(), out)
}

/// Running trapezoid integral, zero at the first grid point.
pub fn trapezoid_cumulative(f: &SampledFunction) -> Result<SampledFunction> {
    let half_h = 0.5 * f.grid().spacing();
    let v = f.values();
    let mut out = Vec::with_capacity(v.len());
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for w in v.windows(2) {
        acc += (w[0] + w[1]) * half_h;
        out.push(acc);
    }
    SampledFunction::new(*f.grid(), out)
}

/// Cubic Lagrange estimate of `f` at each cell midpoint `x_i + h/2`,
/// `i = 0..n-1`. Fourth-order accurate, one-sided in the first and last cell.
pub fn midpoint_interpolate(f: &SampledFunction) -> Result<Vec<Complex64>> {
    let v = f.values();
    let n = v.len();
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "midpoint interpolation needs at least 4 points, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(n - 1);
    out.push((5.0 * v[0] + 15.0 * v[1] - 5.0 * v[2] + v[3]) / 16.0);
    for i in 1..n - 2 {
        out.push((-v[i - 1] + 9.0 * v[i] + 9.0 * v[i + 1] - v[i + 2]) / 16.0);
    }
    out.push((v[n - 4] - 5.0 * v[n - 3] + 15.0 * v[n - 2] + 5.0 * v[n - 1]) / 16.0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid;
    use std::f64::consts::PI;

    fn real(grid: Grid, f: impl Fn(f64) -> f64) -> SampledFunction {
        SampledFunction::from_real_fn(grid, f).unwrap()
    }

    #[test]
    fn derivative_is_exact_for_quadratics() {
        let g = Grid::new(0.0, 2.0, 21).unwrap();
        let d = central_derivative(&real(g, |x| x * x), Derivative::First).unwrap();
        let i = g.nearest_index(1.0);
        assert!((d[i].re - 2.0).abs() < 1e-12);
        // one-sided stencils are exact for quadratics too
        assert!((d[0].re - 0.0).abs() < 1e-12);
        assert!((d[20].re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn second_derivative_of_constant_vanishes() {
        let g = Grid::new(-1.0, 3.0, 17).unwrap();
        let d = central_derivative(&real(g, |_| 3.7), Derivative::Second).unwrap();
        assert!(d.max_abs() < 1e-10);
    }

    #[test]
    fn derivative_of_tanh_matches_sech_squared() {
        let g = Grid::new(-5.0, 5.0, 10_001).unwrap();
        let d = central_derivative(&real(g, f64::tanh), Derivative::First).unwrap();
        let exact = real(g, |x| 1.0 - x.tanh().powi(2));
        assert!(d.max_distance(&exact).unwrap() < 1e-6);
    }

    #[test]
    fn second_derivative_of_sine() {
        let g = Grid::new(0.0, PI, 2001).unwrap();
        let d = central_derivative(&real(g, f64::sin), Derivative::Second).unwrap();
        let exact = real(g, |x| -x.sin());
        assert!(d.max_distance(&exact).unwrap() < 1e-5);
    }

    #[test]
    fn derivative_needs_five_points() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        assert!(matches!(
            central_derivative(&real(g, |x| x), Derivative::First),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn trapezoid_of_sine_over_half_period() {
        let g = Grid::new(0.0, PI, 10_001).unwrap();
        let c = trapezoid_cumulative(&real(g, f64::sin)).unwrap();
        assert_eq!(c[0].re, 0.0);
        assert!((c[10_000].re - 2.0).abs() < 1e-6);
    }

    #[test]
    fn trapezoid_of_zero_is_zero() {
        let g = Grid::new(-1.0, 1.0, 11).unwrap();
        let c = trapezoid_cumulative(&real(g, |_| 0.0)).unwrap();
        assert_eq!(c.max_abs(), 0.0);
    }

    #[test]
    fn trapezoid_of_sech_matches_gudermannian() {
        // ∫ sech = 2 atan(tanh(x/2))
        let g = Grid::new(-10.0, 10.0, 20_001).unwrap();
        let c = trapezoid_cumulative(&real(g, |x| 1.0 / x.cosh())).unwrap();
        let anti = |x: f64| 2.0 * (x / 2.0).tanh().atan();
        for i in (0..g.len()).step_by(997) {
            let exact = anti(g.x(i)) - anti(-10.0);
            assert!((c[i].re - exact).abs() < 1e-6);
        }
        let total = anti(10.0) - anti(-10.0);
        assert!((c[g.len() - 1].re - total).abs() < 1e-6);
        assert!((total - PI).abs() < 1e-3);
    }

    #[test]
    fn trapezoid_is_complex_linear() {
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let a = real(g, |x| x.exp());
        let b = SampledFunction::from_fn(g, |x| Complex64::new(x.cos(), x)).unwrap();
        let alpha = Complex64::new(0.3, -1.2);
        let combo = a.zip_with(&b, |p, q| p + alpha * q).unwrap();
        let lhs = trapezoid_cumulative(&combo).unwrap();
        let ca = trapezoid_cumulative(&a).unwrap();
        let cb = trapezoid_cumulative(&b).unwrap();
        let rhs = ca.zip_with(&cb, |p, q| p + alpha * q).unwrap();
        assert!(lhs.max_distance(&rhs).unwrap() < 1e-14);
    }

    #[test]
    fn midpoints_are_fourth_order() {
        let err = |n: usize| {
            let g = Grid::new(0.0, 2.0, n).unwrap();
            let mid = midpoint_interpolate(&real(g, f64::exp)).unwrap();
            let h = g.spacing();
            mid.iter()
                .enumerate()
                .map(|(i, v)| (v.re - (g.x(i) + 0.5 * h).exp()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 12.0, "convergence ratio {ratio}");
    }
}
