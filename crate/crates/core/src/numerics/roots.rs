use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Roots of `4σ³ - g₂σ - g₃`.
///
/// With three real roots they are ordered `e1 ≥ e2 ≥ e3`. Otherwise `e2` is
/// the real root and `e1 = conj(e3)` with `Im e1 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub e1: Complex64,
    pub e2: Complex64,
    pub e3: Complex64,
    pub all_real: bool,
}

impl CubicRoots {
    pub fn as_array(&self) -> [Complex64; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// Real parts `(e1, e2, e3)`; meaningful when `all_real`.
    pub fn real(&self) -> (f64, f64, f64) {
        (self.e1.re, self.e2.re, self.e3.re)
    }
}

fn cubic(g2: f64, g3: f64, s: Complex64) -> Complex64 {
    4.0 * s * s * s - g2 * s - g3
}

fn polish(g2: f64, g3: f64, s: Complex64) -> Complex64 {
    let d = 12.0 * s * s - g2;
    if d.norm() == 0.0 {
        return s;
    }
    let next = s - cubic(g2, g3, s) / d;
    if cubic(g2, g3, next).norm() < cubic(g2, g3, s).norm() {
        next
    } else {
        s
    }
}

/// Trigonometric solution when `D = g₂³ - 27g₃² ≥ 0` (up to rounding),
/// Cardano otherwise.
pub fn solve_depressed_cubic(g2: f64, g3: f64) -> CubicRoots {
    let zero = Complex64::new(0.0, 0.0);
    if g2 == 0.0 && g3 == 0.0 {
        return CubicRoots {
            e1: zero,
            e2: zero,
            e3: zero,
            all_real: true,
        };
    }
    let d = g2.powi(3) - 27.0 * g3 * g3;
    // a double root rounds to either sign of D; keep it on the real branch
    let near_double = g2 > 0.0 && d.abs() <= 1e-12 * g2.powi(3);
    if d >= 0.0 || near_double {
        // g2 > 0 here
        let r = (g2 / 3.0).sqrt();
        let cos3 = (3.0 * 3f64.sqrt() * g3 / g2.powf(1.5)).clamp(-1.0, 1.0);
        let phi = cos3.acos() / 3.0;
        let e1 = r * phi.cos();
        let e3 = r * (phi + 2.0 * PI / 3.0).cos();
        let e2 = r * (phi - 2.0 * PI / 3.0).cos();
        let p = |x: f64| polish(g2, g3, Complex64::new(x, 0.0)).re;
        let (e1, e2, e3) = (p(e1), p(e2), p(e3));
        CubicRoots {
            e1: e1.into(),
            e2: e2.into(),
            e3: e3.into(),
            all_real: true,
        }
    } else {
        // t³ + p t + q = 0 with p = -g2/4, q = -g3/4
        let p = -g2 / 4.0;
        let q = -g3 / 4.0;
        let delta = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        let s = delta.sqrt();
        let big = if q <= 0.0 { -q / 2.0 + s } else { -q / 2.0 - s };
        let u = big.cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        let t = u + v;
        let im = 0.5 * 3f64.sqrt() * (u - v).abs();
        let real = polish(g2, g3, Complex64::new(t, 0.0));
        let pair = polish(g2, g3, Complex64::new(-t / 2.0, im));
        CubicRoots {
            e1: pair,
            e2: Complex64::new(real.re, 0.0),
            e3: pair.conj(),
            all_real: false,
        }
    }
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
///
/// Returns the best abscissa seen and its value.
pub fn golden_section_min(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    x_tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Root of `f` in `bracket` by bisection with a final secant step, or, when
/// `f` keeps one sign, the interior minimizer of `|f|`.
///
/// Converges to a relative tolerance of 1e-12 of the bracket scale.
pub fn refine_root(mut f: impl FnMut(f64) -> f64, bracket: (f64, f64)) -> Result<f64> {
    let (mut a, mut b) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    if !(a.is_finite() && b.is_finite()) || a == b {
        return Err(Error::InvalidArgument(format!(
            "degenerate bracket [{a}, {b}]"
        )));
    }
    let tol = 1e-12 * a.abs().max(b.abs());
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() != fb.signum() {
        for _ in 0..400 {
            if b - a <= tol {
                break;
            }
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let best = if fa.abs() < fb.abs() { a } else { b };
        if secant > a && secant < b && f(secant).abs() <= fa.abs().min(fb.abs()) {
            return Ok(secant);
        }
        return Ok(best);
    }
    let (x, _) = golden_section_min(|x| f(x).abs(), a, b, tol);
    let margin = 1e-6 * (b - a);
    if x - a <= margin || b - x <= margin {
        return Err(Error::Bracket { lo: a, hi: b });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(g2: f64, g3: f64, r: &CubicRoots) -> f64 {
        r.as_array()
            .iter()
            .map(|&e| cubic(g2, g3, e).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn lemniscatic_invariants_give_one_zero_minus_one() {
        let r = solve_depressed_cubic(4.0, 0.0);
        assert!(r.all_real);
        let (e1, e2, e3) = r.real();
        assert!((e1 - 1.0).abs() < 1e-12);
        assert!(e2.abs() < 1e-12);
        assert!((e3 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_invariants_give_double_root() {
        let g3 = -8.0 / 3f64.powf(1.5);
        let r = solve_depressed_cubic(4.0, g3);
        assert!(r.all_real);
        let (e1, e2, e3) = r.real();
        let s = 1.0 / 3f64.sqrt();
        assert!((e1 - s).abs() < 1e-7, "{e1}");
        assert!((e2 - s).abs() < 1e-7, "{e2}");
        assert!((e3 + 2.0 * s).abs() < 1e-12);
        assert!(residual(4.0, g3, &r) < 1e-10 * 4.0);
    }

    #[test]
    fn origin_is_a_triple_root() {
        let r = solve_depressed_cubic(0.0, 0.0);
        assert!(r.all_real);
        assert_eq!(r.as_array(), [Complex64::new(0.0, 0.0); 3]);
    }

    #[test]
    fn negative_discriminant_gives_conjugate_pair() {
        let r = solve_depressed_cubic(4.0 / 3.0, 8.0 / 27.0 - 100.0 / 12.0);
        assert!(!r.all_real);
        assert_eq!(r.e1, r.e3.conj());
        assert!(r.e1.im > 0.0);
        assert_eq!(r.e2.im, 0.0);
        assert!(residual(4.0 / 3.0, 8.0 / 27.0 - 100.0 / 12.0, &r) < 1e-10 * 8.5);
    }

    #[test]
    fn refine_root_sqrt_two() {
        let r = refine_root(|x| x * x - 2.0, (1.0, 2.0)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn refine_root_at_origin() {
        assert_eq!(refine_root(|x| x, (-1.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn refine_root_falls_back_to_interior_minimum() {
        let r = refine_root(|x| (x - 0.3).powi(2) + 1e-3, (-1.0, 1.0)).unwrap();
        assert!((r - 0.3).abs() < 1e-6);
    }

    #[test]
    fn refine_root_rejects_monotone_one_signed() {
        assert!(matches!(
            refine_root(|x| x + 5.0, (-1.0, 1.0)),
            Err(Error::Bracket { .. })
        ));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = golden_section_min(|x| (x - 1.25).powi(2), 0.0, 3.0, 1e-10);
        assert!((x - 1.25).abs() < 1e-8);
        assert!(fx < 1e-15);
    }
}
