//! Machine-integer arithmetic in the rings of integers of the supported
//! fields, used by the enumeration cores. Elements are stored in the
//! integral basis (1, omega) with omega = sqrt(d) for d = -1, -2 and
//! omega = (1+sqrt(d))/2 for d = -3, -7, -11; over Q the second coordinate
//! is always zero. All five quadratic fields are norm-Euclidean, so gcds
//! are computed by Euclidean division.

use crate::numfield::{factor, primes_above, FieldElement, NumberField, Rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;
use std::collections::HashMap;

/// An algebraic integer in integral-basis coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zk {
    pub a: i64,
    pub b: i64,
}

impl Zk {
    pub const ZERO: Zk = Zk { a: 0, b: 0 };
    pub const ONE: Zk = Zk { a: 1, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        Zk { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// Arithmetic context for one ring of integers.
#[derive(Debug, Clone)]
pub struct IntRing {
    field: NumberField,
    /// |d| for the quadratic fields, 0 for Q.
    ad: i64,
    /// true when the integral basis is (1, (1+sqrt d)/2).
    half: bool,
    /// (1 - d)/4 when `half`, else 0: omega^2 = omega - q there.
    q: i64,
    units: Vec<Zk>,
}

impl IntRing {
    pub fn new(field: NumberField) -> Self {
        let (ad, half, q) = match field.quad_d() {
            None => (0, false, 0),
            Some(d) => {
                let half = d.rem_euclid(4) == 1;
                (-d, half, if half { (1 - d) / 4 } else { 0 })
            }
        };
        let mut ring = IntRing { field, ad, half, q, units: Vec::new() };
        ring.units = field
            .units()
            .iter()
            .map(|u| ring.from_element(u).expect("units are small integers"))
            .collect();
        ring
    }

    pub fn field(&self) -> NumberField {
        self.field
    }

    pub fn units(&self) -> &[Zk] {
        &self.units
    }

    pub fn norm(&self, x: Zk) -> i128 {
        let a = x.a as i128;
        let b = x.b as i128;
        if self.ad == 0 {
            a
        } else if self.half {
            a * a + a * b + (self.q as i128) * b * b
        } else {
            a * a + (self.ad as i128) * b * b
        }
    }

    /// |norm|; the absolute value only matters over Q.
    pub fn abs_norm(&self, x: Zk) -> i128 {
        self.norm(x).abs()
    }

    /// Squared modulus of the complex embedding: x^2 over Q, the norm over
    /// an imaginary quadratic field. This is the metric the coordinate
    /// balls are measured in.
    pub fn embedding_norm(&self, x: Zk) -> i128 {
        if self.ad == 0 {
            (x.a as i128) * (x.a as i128)
        } else {
            self.norm(x)
        }
    }

    pub fn add(&self, x: Zk, y: Zk) -> Zk {
        Zk::new(x.a + y.a, x.b + y.b)
    }

    pub fn sub(&self, x: Zk, y: Zk) -> Zk {
        Zk::new(x.a - y.a, x.b - y.b)
    }

    pub fn neg(&self, x: Zk) -> Zk {
        Zk::new(-x.a, -x.b)
    }

    pub fn mul(&self, x: Zk, y: Zk) -> Zk {
        if self.ad == 0 {
            return Zk::new(
                i128_to_i64(x.a as i128 * y.a as i128),
                0,
            );
        }
        let (xa, xb, ya, yb) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
        if self.half {
            // omega^2 = omega - q
            let a = xa * ya - self.q as i128 * xb * yb;
            let b = xa * yb + xb * ya + xb * yb;
            Zk::new(i128_to_i64(a), i128_to_i64(b))
        } else {
            let a = xa * ya - self.ad as i128 * xb * yb;
            let b = xa * yb + xb * ya;
            Zk::new(i128_to_i64(a), i128_to_i64(b))
        }
    }

    pub fn conj(&self, x: Zk) -> Zk {
        if self.ad == 0 {
            x
        } else if self.half {
            // conj(a + b omega) = (a + b) - b omega
            Zk::new(x.a + x.b, -x.b)
        } else {
            Zk::new(x.a, -x.b)
        }
    }

    pub fn pow(&self, x: Zk, e: u32) -> Zk {
        let mut acc = Zk::ONE;
        for _ in 0..e {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Exact division, if the quotient lies in the ring.
    pub fn try_div(&self, x: Zk, y: Zk) -> Option<Zk> {
        assert!(!y.is_zero(), "division by zero");
        if self.ad == 0 {
            if x.a % y.a == 0 {
                return Some(Zk::new(x.a / y.a, 0));
            }
            return None;
        }
        let n = self.norm(y);
        let t = self.mul(x, self.conj(y));
        if (t.a as i128) % n == 0 && (t.b as i128) % n == 0 {
            Some(Zk::new(
                i128_to_i64(t.a as i128 / n),
                i128_to_i64(t.b as i128 / n),
            ))
        } else {
            None
        }
    }

    /// Euclidean gcd; the result is some generator of the ideal (x, y).
    pub fn gcd(&self, x: Zk, y: Zk) -> Zk {
        if self.ad == 0 {
            let mut a = x.a.unsigned_abs();
            let mut b = y.a.unsigned_abs();
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            return Zk::new(a as i64, 0);
        }
        let mut a = x;
        let mut b = y;
        while !b.is_zero() {
            let r = self.euclid_rem(a, b);
            a = b;
            b = r;
        }
        a
    }

    /// Remainder of norm strictly smaller than |N(b)|; exists because the
    /// supported quadratic fields are norm-Euclidean.
    fn euclid_rem(&self, a: Zk, b: Zk) -> Zk {
        let n = self.norm(b);
        let t = self.mul(a, self.conj(b));
        // rational coordinates of a/b are t / n; search the lattice points
        // around the floor for one within distance < 1 in the norm metric
        let fa = div_floor_i128(t.a as i128, n);
        let fb = div_floor_i128(t.b as i128, n);
        let mut best: Option<Zk> = None;
        for da in 0..=1i64 {
            for db in 0..=1i64 {
                let qcand = Zk::new(i128_to_i64(fa + da as i128), i128_to_i64(fb + db as i128));
                let r = self.sub(a, self.mul(qcand, b));
                match best {
                    Some(prev) if self.norm(r) >= self.norm(prev) => {}
                    _ => best = Some(r),
                }
            }
        }
        let r = best.unwrap();
        debug_assert!(self.norm(r) < n, "Euclidean step failed to decrease the norm");
        r
    }

    /// Whether x is a unit.
    pub fn is_unit(&self, x: Zk) -> bool {
        self.abs_norm(x) == 1
    }

    /// Order used for canonical orbit representatives; agrees with
    /// `FieldElement::key_cmp` on the sqrt(d) coordinates.
    pub fn key_cmp(&self, x: Zk, y: Zk) -> Ordering {
        // sqrt-d coordinates, scaled by 2 in the half-integral case
        let (xa, xb, ya, yb) = if self.half {
            (2 * x.a + x.b, x.b, 2 * y.a + y.b, y.b)
        } else {
            (x.a, x.b, y.a, y.b)
        };
        scalar_key(xa)
            .cmp(&scalar_key(ya))
            .then_with(|| scalar_key(xb).cmp(&scalar_key(yb)))
    }

    pub fn to_element(&self, x: Zk) -> FieldElement {
        if self.ad == 0 {
            return FieldElement::from_i64(self.field, x.a);
        }
        if self.half {
            // a + b omega = (a + b/2) + (b/2) sqrt(d)
            let two = BigInt::from(2);
            FieldElement::new(
                self.field,
                BigRational::new(BigInt::from(2 * x.a + x.b), two.clone()),
                BigRational::new(BigInt::from(x.b), two),
            )
            .unwrap()
        } else {
            FieldElement::new(
                self.field,
                BigRational::from(BigInt::from(x.a)),
                BigRational::from(BigInt::from(x.b)),
            )
            .unwrap()
        }
    }

    /// Integral-basis coordinates of an integral element, if they fit i64.
    pub fn from_element(&self, x: &FieldElement) -> Option<Zk> {
        if !x.is_integral() {
            return None;
        }
        if self.ad == 0 {
            return x.as_rat().unwrap().to_integer().try_into().ok().map(|a| Zk::new(a, 0));
        }
        let (u, v) = if self.half {
            let two = BigRational::from(BigInt::from(2));
            let v = (x.im() * &two).to_integer();
            let u = (x.re() - x.im()).to_integer();
            (u, v)
        } else {
            (x.re().to_integer(), x.im().to_integer())
        };
        Some(Zk::new(i64::try_from(u).ok()?, i64::try_from(v).ok()?))
    }

    /// All ring elements with `embedding_norm` at most `bound`, sorted by
    /// the key order.
    pub fn ball(&self, bound_sq_norm: i128) -> Vec<Zk> {
        let mut out = Vec::new();
        if bound_sq_norm < 0 {
            return out;
        }
        if self.ad == 0 {
            let m = factor::iroot_u128(bound_sq_norm as u128, 2) as i64;
            for a in -m..=m {
                out.push(Zk::new(a, 0));
            }
        } else if self.half {
            // a^2 + ab + q b^2 <= B: for fixed b, a ranges between the roots
            let b_lim = factor::iroot_u128(
                (4 * bound_sq_norm / (4 * self.q as i128 - 1)) as u128,
                2,
            ) as i64;
            for b in -b_lim..=b_lim {
                // a^2 + ab + (q b^2 - B) <= 0
                let disc = (b as i128) * (b as i128)
                    - 4 * ((self.q as i128) * (b as i128) * (b as i128) - bound_sq_norm);
                if disc < 0 {
                    continue;
                }
                let r = factor::iroot_u128(disc as u128, 2) as i64;
                let lo = ceil_div(-b - r, 2);
                let hi = floor_div(-b + r, 2);
                for a in lo..=hi {
                    let z = Zk::new(a, b);
                    if self.norm(z) <= bound_sq_norm {
                        out.push(z);
                    }
                }
            }
        } else {
            let b_lim = factor::iroot_u128((bound_sq_norm / self.ad as i128) as u128, 2) as i64;
            for b in -b_lim..=b_lim {
                let rest = bound_sq_norm - self.ad as i128 * (b as i128) * (b as i128);
                let a_lim = factor::iroot_u128(rest as u128, 2) as i64;
                for a in -a_lim..=a_lim {
                    out.push(Zk::new(a, b));
                }
            }
        }
        out.sort_by(|&x, &y| self.key_cmp(x, y));
        out
    }
}

fn scalar_key(x: i64) -> (u8, i64) {
    if x < 0 {
        (1, -x)
    } else {
        (0, x)
    }
}

fn i128_to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("enumeration coordinate overflowed i64")
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// A prime of the ring in machine representation.
#[derive(Debug, Clone, Copy)]
pub struct SmallPrime {
    pub generator: Zk,
    pub residue_degree: u8,
}

/// Shared context caching the rational-prime sieve and prime splittings for
/// one enumeration run.
pub struct SplitCache {
    ring: IntRing,
    primes: Vec<u64>,
    splittings: HashMap<u64, Vec<SmallPrime>>,
}

impl SplitCache {
    pub fn new(ring: IntRing, max_prime: u64) -> Self {
        SplitCache { ring, primes: factor::primes_upto(max_prime), splittings: HashMap::new() }
    }

    pub fn ring(&self) -> &IntRing {
        &self.ring
    }

    /// Rational primes p <= bound (extends the sieve if necessary).
    pub fn primes_upto(&mut self, bound: u64) -> &[u64] {
        if self.primes.last().copied().unwrap_or(0) < bound {
            self.primes = factor::primes_upto(bound.max(64));
        }
        let idx = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..idx]
    }

    pub fn primes_over(&mut self, p: u64) -> &[SmallPrime] {
        let ring = &self.ring;
        self.splittings.entry(p).or_insert_with(|| {
            primes_above(ring.field(), p)
                .into_iter()
                .map(|prime| SmallPrime {
                    generator: ring
                        .from_element(prime.generator())
                        .expect("prime generators at enumeration scale fit i64"),
                    residue_degree: prime.residue_degree(),
                })
                .collect()
        })
    }

    /// Valuation of a non-zero integral element at a small prime.
    pub fn valuation(&self, x: Zk, p: u64, prime: &SmallPrime) -> u32 {
        debug_assert!(!x.is_zero());
        if prime.residue_degree == 2 {
            // inert: minimum coordinate valuation
            let va = if x.a == 0 { u32::MAX } else { int_val(x.a.unsigned_abs(), p) };
            let vb = if x.b == 0 { u32::MAX } else { int_val(x.b.unsigned_abs(), p) };
            return va.min(vb);
        }
        let mut v = 0;
        let mut cur = x;
        while let Some(q) = self.ring.try_div(cur, prime.generator) {
            v += 1;
            cur = q;
        }
        v
    }
}

fn int_val(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Exact upper bound for candidate rational primes contributing to the
/// scaling ideal of an integral tuple: floor(min over non-zero coordinates
/// of |N(x_i)|^(1/w_i)).
pub fn scaling_prime_bound(ring: &IntRing, weights: &[u32], xs: &[Zk]) -> u64 {
    let mut bound = u64::MAX;
    for (x, &w) in xs.iter().zip(weights) {
        if x.is_zero() {
            continue;
        }
        let n = ring.abs_norm(*x) as u128;
        bound = bound.min(factor::iroot_u128(n, w) as u64);
    }
    if bound == u64::MAX {
        0
    } else {
        bound
    }
}

/// Whether the integral tuple has trivial scaling ideal: no prime ideal P
/// with v_P(x_i) >= w_i for every non-zero coordinate.
pub fn has_trivial_scaling_ideal(cache: &mut SplitCache, weights: &[u32], xs: &[Zk]) -> bool {
    // all-ones weights reduce to the gcd being a unit
    if weights.iter().all(|&w| w == 1) {
        let ring = cache.ring();
        let mut g = Zk::ZERO;
        for x in xs {
            g = ring.gcd(g, *x);
        }
        return ring.is_unit(g);
    }
    let bound = scaling_prime_bound(cache.ring(), weights, xs);
    if bound < 2 {
        return true;
    }
    let ps: Vec<u64> = cache.primes_upto(bound).to_vec();
    for p in ps {
        let over: Vec<SmallPrime> = cache.primes_over(p).to_vec();
        for prime in over {
            let mut all = true;
            for (x, &w) in xs.iter().zip(weights) {
                if x.is_zero() {
                    continue;
                }
                if cache.valuation(*x, p, &prime) < w {
                    all = false;
                    break;
                }
            }
            if all {
                return false;
            }
        }
    }
    true
}

/// Whether the tuple is the minimum of its unit orbit under the key order.
pub fn is_unit_orbit_minimum(ring: &IntRing, unit_pows: &[Vec<Zk>], xs: &[Zk]) -> bool {
    'unit: for pows in unit_pows {
        // compare u * xs with xs lexicographically
        for (i, x) in xs.iter().enumerate() {
            let moved = ring.mul(pows[i], *x);
            match ring.key_cmp(moved, *x) {
                Ordering::Less => return false,
                Ordering::Greater => continue 'unit,
                Ordering::Equal => {}
            }
        }
    }
    true
}

/// Precompute u^{w_i} for every non-trivial unit.
pub fn unit_power_table(ring: &IntRing, weights: &[u32]) -> Vec<Vec<Zk>> {
    ring.units()
        .iter()
        .filter(|u| **u != Zk::ONE)
        .map(|&u| weights.iter().map(|&w| ring.pow(u, w)).collect())
        .collect()
}

/// Scale a rational bound to the norm-ball bound for one coordinate:
/// |x|_v <= T^w means N(x) <= T^{2w} over Q and N(x) <= T^w over a
/// quadratic field. Returns floor of the bound as i128.
pub fn coord_norm_bound(field: NumberField, t: &Rat, w: u32) -> i128 {
    let e = if field.is_rationals() { 2 * w } else { w };
    let num = num_traits::Pow::pow(t.numer(), e);
    let den = num_traits::Pow::pow(t.denom(), e);
    let q = num / den;
    // the bound is a floor; q >= 0 for positive t
    let big: BigInt = q;
    i128::try_from(&big).unwrap_or_else(|_| panic!("norm bound too large: {big}"))
}
