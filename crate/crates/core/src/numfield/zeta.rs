//! Dedekind zeta values at integer arguments s >= 2: the Riemann zeta series
//! with Euler-Maclaurin tail correction, and for the quadratic fields the
//! factorization zeta_K(s) = zeta(s) * L(s, chi_D) with chi_D the Kronecker
//! character of the discriminant.

use crate::{Error, Result};
use super::NumberField;

/// Kronecker symbol (a|n), extended to all integers n.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // pull out factors of two from n
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a|2) = 1 if a = ±1 mod 8, -1 if a = ±3 mod 8
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol via reciprocity
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Riemann zeta at integer s >= 2 with relative error <= rel_tol, via the
/// truncated series plus the Euler-Maclaurin correction through the B_2 term.
fn riemann_zeta(s: u32, rel_tol: f64) -> f64 {
    let sf = s as f64;
    let mut n = 16u64;
    loop {
        let mut sum = 0.0;
        for k in 1..n {
            sum += (k as f64).powi(-(s as i32));
        }
        let nf = n as f64;
        let tail = nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf)
            + sf / 12.0 * nf.powf(-sf - 1.0);
        let value = sum + tail;
        // next Euler-Maclaurin term bounds the truncation error
        let err = sf * (sf + 1.0) * (sf + 2.0) / 720.0 * nf.powf(-sf - 3.0);
        if err <= rel_tol * value * 0.5 {
            return value;
        }
        n *= 2;
    }
}

/// Dirichlet L(s, chi_D) for the Kronecker character of discriminant disc,
/// summed until the Abel-summation tail bound drops below the tolerance.
/// The character sums to zero over each period, so partial character sums
/// are bounded by |disc|.
fn dirichlet_l(disc: i64, s: u32, rel_tol: f64) -> f64 {
    let period = disc.unsigned_abs() as usize;
    let chi: Vec<f64> = (0..period)
        .map(|r| kronecker(disc, r as i64) as f64)
        .collect();
    let sf = s as f64;
    let bound = period as f64;
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        sum += chi[(n as usize) % period] * (n as f64).powi(-(s as i32));
        let tail = bound * ((n + 1) as f64).powf(-sf);
        if tail <= rel_tol * sum.abs() * 0.5 && n as usize >= period {
            return sum;
        }
        n += 1;
    }
}

/// Dedekind zeta of the field at integer s >= 2, with relative error
/// at most rel_tol.
pub fn dedekind_zeta(field: NumberField, s: u32, rel_tol: f64) -> Result<f64> {
    if s <= 1 {
        return Err(Error::PoleOrDivergent);
    }
    let rel_tol = if rel_tol > 0.0 { rel_tol } else { DEFAULT_REL_TOL };
    match field.quad_d() {
        None => Ok(riemann_zeta(s, rel_tol)),
        Some(_) => {
            let disc = field.discriminant();
            Ok(riemann_zeta(s, rel_tol / 3.0) * dirichlet_l(disc, s, rel_tol / 3.0))
        }
    }
}

pub const DEFAULT_REL_TOL: f64 = 1e-8;
