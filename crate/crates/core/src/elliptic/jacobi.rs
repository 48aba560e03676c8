//! Arithmetic-geometric mean, complete elliptic integral of the first kind
//! and Jacobi `sn`, `cn`, `dn` by descending Landen transformation.
//!
//! All routines take the complementary parameter `mc = 1 - k²`.

use std::f64::consts::FRAC_PI_2;

const MAX_STEPS: usize = 16;

/// AGM of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-15 * a.abs() {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `K = π / (2 AGM(1, √mc))`; infinite at `mc = 0`.
pub fn complete_k(mc: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&mc));
    if mc == 0.0 {
        return f64::INFINITY;
    }
    FRAC_PI_2 / agm(1.0, mc.sqrt())
}

/// `(sn, cn, dn)(u | 1 - mc)` for `0 ≤ mc ≤ 1`.
pub fn sncndn(u: f64, mc: f64) -> (f64, f64, f64) {
    debug_assert!((0.0..=1.0).contains(&mc));
    if mc == 0.0 {
        let sech = 1.0 / u.cosh();
        return (u.tanh(), sech, sech);
    }
    // Ascending AGM sequence, remembered for the descent.
    let mut em = [0.0; MAX_STEPS];
    let mut en = [0.0; MAX_STEPS];
    let mut a = 1.0;
    let mut emc = mc;
    let mut c = 1.0;
    let mut last = 0;
    for i in 0..MAX_STEPS {
        last = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= 1e-8 * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let arg = c * u;
    let mut sn = arg.sin();
    let mut cn = arg.cos();
    let mut dn = 1.0;
    if sn != 0.0 {
        let mut a = cn / sn;
        c *= a;
        for i in (0..=last).rev() {
            let b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        let r = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { r } else { -r };
        cn = c * sn;
    }
    (sn, cn, dn)
}
