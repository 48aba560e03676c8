use num_complex::Complex64;

use super::grid::Grid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// One classical RK4 step of size `h` (negative `h` steps backward).
pub fn rk4_step<const N: usize, F>(rhs: &F, x: f64, y: &[Complex64; N], h: f64) -> [Complex64; N]
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let axpy = |a: &[Complex64; N], s: f64, k: &[Complex64; N]| {
        let mut out = *a;
        for (o, kk) in out.iter_mut().zip(k) {
            *o += kk * s;
        }
        out
    };
    let k1 = rhs(x, y);
    let k2 = rhs(x + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = rhs(x + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = rhs(x + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
    }
    out
}

/// Fixed-step RK4 along every grid interval.
///
/// `y0` is the state at `x_min` (forward) or `x_max` (backward). The returned
/// trajectory is indexed by grid point in both directions.
pub fn rk4_integrate<const N: usize, F>(
    rhs: F,
    y0: [Complex64; N],
    grid: &Grid,
    direction: Direction,
) -> Result<Vec<[Complex64; N]>>
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let n = grid.len();
    let h = grid.spacing();
    let mut traj = vec![[Complex64::new(0.0, 0.0); N]; n];
    let finite = |y: &[Complex64; N]| y.iter().all(|c| c.re.is_finite() && c.im.is_finite());
    let (start, step): (usize, f64) = match direction {
        Direction::Forward => (0, h),
        Direction::Backward => (n - 1, -h),
    };
    if !finite(&y0) {
        return Err(Error::Overflow { index: start });
    }
    traj[start] = y0;
    let mut y = y0;
    for k in 1..n {
        let (from, to) = match direction {
            Direction::Forward => (k - 1, k),
            Direction::Backward => (n - k, n - k - 1),
        };
        y = rk4_step(&rhs, grid.x(from), &y, step);
        if !finite(&y) {
            return Err(Error::Overflow { index: to });
        }
        traj[to] = y;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn exponential_growth() {
        let g = Grid::new(0.0, 1.0, 1001).unwrap();
        let t = rk4_integrate(
            |_, y: &[Complex64; 1]| [y[0]],
            [c(1.0)],
            &g,
            Direction::Forward,
        )
        .unwrap();
        assert!((t[1000][0].re - E).abs() < 1e-8);
    }

    #[test]
    fn zero_field_is_constant() {
        let g = Grid::new(-1.0, 1.0, 11).unwrap();
        let y0 = [Complex64::new(0.5, -2.0), c(3.0)];
        let t = rk4_integrate(
            |_, _: &[Complex64; 2]| [c(0.0); 2],
            y0,
            &g,
            Direction::Backward,
        )
        .unwrap();
        assert!(t.iter().all(|y| *y == y0));
    }

    #[test]
    fn harmonic_oscillator_quarter_period() {
        // y'' = -y, y(0) = 1, y'(0) = 0  =>  y = cos x
        let g = Grid::new(0.0, FRAC_PI_2, 1001).unwrap();
        let t = rk4_integrate(
            |_, y: &[Complex64; 2]| [y[1], -y[0]],
            [c(1.0), c(0.0)],
            &g,
            Direction::Forward,
        )
        .unwrap();
        assert!(t[1000][0].norm() < 1e-8);
        assert!((t[1000][1].re + 1.0).abs() < 1e-8);
    }

    #[test]
    fn backward_integration_is_indexed_by_grid_point() {
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let t = rk4_integrate(
            |_, y: &[Complex64; 1]| [y[0]],
            [c(1.0)],
            &g,
            Direction::Backward,
        )
        .unwrap();
        assert_eq!(t[100][0], c(1.0));
        assert!((t[0][0].re - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn forward_then_backward_returns_to_start() {
        let g = Grid::new(0.0, 3.0, 601).unwrap();
        let rhs = |x: f64, y: &[Complex64; 2]| [y[1], -(1.0 + x * x) * y[0] * Complex64::i()];
        let y0 = [Complex64::new(1.0, 0.5), Complex64::new(-0.2, 0.0)];
        let fwd = rk4_integrate(rhs, y0, &g, Direction::Forward).unwrap();
        let back = rk4_integrate(rhs, fwd[600], &g, Direction::Backward).unwrap();
        for k in 0..2 {
            assert!((back[0][k] - y0[k]).norm() < 1e-7);
        }
    }

    #[test]
    fn overflow_reports_index() {
        let g = Grid::new(0.0, 10.0, 11).unwrap();
        let err = rk4_integrate(
            |_, y: &[Complex64; 1]| [y[0] * y[0] * 1e10],
            [c(1.0)],
            &g,
            Direction::Forward,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Overflow { index } if index > 0));
    }
}
