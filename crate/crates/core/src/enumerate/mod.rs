//! Enumeration and counting of all points of P(w)(K) of size at most T, and
//! comparison of the counts against the leading asymptotic constant.
//!
//! A canonical representative with size <= T has every coordinate inside the
//! archimedean ball |x_i|_v <= T^{w_i}, so the enumeration scans the product
//! of integer balls, keeps the tuples that are canonical (trivial scaling
//! ideal and unit-orbit minimal), and re-checks the size bound exactly.

pub mod ring;

use crate::numfield::{arch_size_power, zeta, NumberField, Rat};
use crate::wpoint::{Weights, WeightedPoint};
use crate::{Error, Result};
use num_traits::{Pow, Signed, ToPrimitive};
use rayon::prelude::*;
use ring::{IntRing, SplitCache, Zk};
use serde::Serialize;

/// One row of a convergence report.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub field: String,
    pub weights: String,
    pub bound: f64,
    pub exact_count: u64,
    pub constant: f64,
    pub main_term: f64,
    pub rel_deviation: f64,
}

impl CountReport {
    pub const CSV_HEADER: &'static str =
        "field,weights,T,count,constant,main_term,rel_deviation";

    pub fn csv_row(&self) -> String {
        format!(
            "{},\"{}\",{},{},{},{},{}",
            self.field,
            self.weights,
            self.bound,
            self.exact_count,
            self.constant,
            self.main_term,
            self.rel_deviation
        )
    }
}

/// Iterator state for the canonical-tuple scan.
struct TupleScan {
    cache: SplitCache,
    weights: Vec<u32>,
    balls: Vec<Vec<Zk>>,
    unit_pows: Vec<Vec<Zk>>,
    /// odometer over the per-coordinate balls; None once exhausted
    idx: Option<Vec<usize>>,
    size_bound: Rat,
    lcm: u32,
}

impl TupleScan {
    fn new(field: NumberField, weights: &Weights, t: &Rat) -> Self {
        let ring = IntRing::new(field);
        let balls: Vec<Vec<Zk>> = weights
            .as_slice()
            .iter()
            .map(|&w| ring.ball(ring::coord_norm_bound(field, t, w)))
            .collect();
        let unit_pows = ring::unit_power_table(&ring, weights.as_slice());
        let idx = if balls.iter().any(|b| b.is_empty()) {
            None
        } else {
            Some(vec![0; balls.len()])
        };
        let lcm = weights.lcm();
        let size_bound = Pow::pow(t.clone(), lcm as i32);
        TupleScan {
            cache: SplitCache::new(ring, 64),
            weights: weights.as_slice().to_vec(),
            balls,
            unit_pows,
            idx,
            size_bound,
            lcm,
        }
    }

    fn advance(idx: &mut Vec<usize>, balls: &[Vec<Zk>]) -> bool {
        for i in (0..idx.len()).rev() {
            idx[i] += 1;
            if idx[i] < balls[i].len() {
                return true;
            }
            idx[i] = 0;
        }
        false
    }

    fn accept(&mut self, xs: &[Zk]) -> bool {
        if xs.iter().all(|x| x.is_zero()) {
            return false;
        }
        if !ring::is_unit_orbit_minimum(self.cache.ring(), &self.unit_pows, xs) {
            return false;
        }
        if !ring::has_trivial_scaling_ideal(&mut self.cache, &self.weights, xs) {
            return false;
        }
        // exact size filter (the ball bounds already imply it; kept as the
        // authoritative comparison)
        let fe: Vec<_> = xs.iter().map(|&z| self.cache.ring().to_element(z)).collect();
        let sp = arch_size_power(&self.weights, &fe, self.lcm).expect("non-zero tuple");
        sp <= self.size_bound
    }
}

impl Iterator for TupleScan {
    type Item = Vec<Zk>;

    fn next(&mut self) -> Option<Vec<Zk>> {
        loop {
            let idx = self.idx.as_ref()?;
            let xs: Vec<Zk> = idx.iter().zip(&self.balls).map(|(&i, b)| b[i]).collect();
            let more = Self::advance(self.idx.as_mut().unwrap(), &self.balls);
            if !more {
                self.idx = None;
            }
            if self.accept(&xs) {
                return Some(xs);
            }
            if self.idx.is_none() {
                return None;
            }
        }
    }
}

/// All points of P(w)(K) of size at most T, as canonical representatives,
/// in a deterministic order.
pub fn enumerate_points(
    field: NumberField,
    weights: &Weights,
    t: &Rat,
) -> Result<impl Iterator<Item = WeightedPoint>> {
    if !t.is_positive() {
        return Err(Error::Invariant("bound must be positive".into()));
    }
    let scan = TupleScan::new(field, weights, t);
    let weights = weights.clone();
    Ok(scan.map(move |xs| {
        let ring = IntRing::new(field);
        let coords: Vec<_> = xs.iter().map(|&z| ring.to_element(z)).collect();
        WeightedPoint::from_canonical_unchecked(field, weights.clone(), coords)
    }))
}

/// Number of points of size at most T. Parallelizes over the first
/// coordinate; the canonical tuples split disjointly by first coordinate,
/// so the total is order-independent.
pub fn count_points(field: NumberField, weights: &Weights, t: &Rat) -> Result<u64> {
    if !t.is_positive() {
        return Err(Error::Invariant("bound must be positive".into()));
    }
    let ring = IntRing::new(field);
    let balls: Vec<Vec<Zk>> = weights
        .as_slice()
        .iter()
        .map(|&w| ring.ball(ring::coord_norm_bound(field, t, w)))
        .collect();
    if balls.iter().any(|b| b.is_empty()) {
        return Ok(0);
    }
    let unit_pows = ring::unit_power_table(&ring, weights.as_slice());
    let w = weights.as_slice().to_vec();
    let first = balls[0].clone();
    let rest = balls[1..].to_vec();
    let count = first
        .par_iter()
        .map(|&x0| {
            let mut cache = SplitCache::new(ring.clone(), 64);
            let mut local = 0u64;
            let mut xs = vec![x0; w.len()];
            let mut idx = vec![0usize; rest.len()];
            loop {
                for (i, b) in rest.iter().enumerate() {
                    xs[i + 1] = b[idx[i]];
                }
                if !xs.iter().all(|x| x.is_zero())
                    && ring::is_unit_orbit_minimum(&ring, &unit_pows, &xs)
                    && ring::has_trivial_scaling_ideal(&mut cache, &w, &xs)
                {
                    local += 1;
                }
                // odometer over the remaining coordinates
                let mut done = true;
                for i in (0..idx.len()).rev() {
                    idx[i] += 1;
                    if idx[i] < rest[i].len() {
                        done = false;
                        break;
                    }
                    idx[i] = 0;
                }
                if done {
                    break;
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// The leading constant C for the asymptotic count ~ C * T^{|w|}:
///
///   C = h R / (mu^w zeta_K(|w|)) * (2^{r1} (2 pi)^{r2} / sqrt|d|)^{n+1}
///       * |w|^{r1 + r2 - 1},
///
/// where mu^w = mu / gcd(w_0, ..., w_n, mu).
pub fn leading_constant(field: NumberField, weights: &Weights, rel_tol: f64) -> Result<f64> {
    let total = weights.total();
    let zk = zeta::dedekind_zeta(field, total, rel_tol)?;
    let mu = field.roots_of_unity_count();
    let mu_w = mu / gcd_u32(weights.gcd(), mu);
    let h = field.class_number() as f64;
    let r = field.regulator();
    let n_plus_1 = weights.len() as i32;
    let local = 2f64.powi(field.r1() as i32)
        * (2.0 * std::f64::consts::PI).powi(field.r2() as i32)
        / (field.discriminant().unsigned_abs() as f64).sqrt();
    let c = h * r / (mu_w as f64 * zk)
        * local.powi(n_plus_1)
        * (total as f64).powi(field.r1() as i32 + field.r2() as i32 - 1);
    Ok(c)
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    let mut a = a;
    let mut b = b;
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Count at each bound and compare with the main term.
pub fn convergence_report(
    field: NumberField,
    weights: &Weights,
    bounds: &[Rat],
) -> Result<Vec<CountReport>> {
    let c = leading_constant(field, weights, zeta::DEFAULT_REL_TOL)?;
    let mut out = Vec::new();
    for t in bounds {
        let count = count_points(field, weights, t)?;
        let tf = t.to_f64().unwrap();
        let main = c * tf.powi(weights.total() as i32);
        out.push(CountReport {
            field: field.to_string(),
            weights: weights.to_string(),
            bound: tf,
            exact_count: count,
            constant: c,
            main_term: main,
            rel_deviation: count as f64 / main - 1.0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldElement;
    use crate::wpoint::normalize;
    use num_bigint::BigInt;
    use std::collections::BTreeSet;

    fn rat(n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }

    #[test]
    fn projective_line_small_bound() {
        let f = NumberField::rationals();
        let w = Weights::pair(1, 1);
        let pts: Vec<_> = enumerate_points(f, &w, &rat(2)).unwrap().collect();
        assert_eq!(pts.len(), 8);
        let mut printed: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        printed.sort();
        // the eight points: (0,1), (1,0), (1,±1), (1,±2), (2,±1)
        for needle in ["[0 : 1]", "[1 : 0]", "[1 : 1]", "[1 : -1]", "[1 : 2]", "[2 : -1]"] {
            assert!(printed.iter().any(|s| s == needle), "missing {needle}: {printed:?}");
        }
        assert_eq!(count_points(f, &w, &rat(2)).unwrap(), 8);
    }

    #[test]
    fn single_weight_two() {
        // squarefree classes of absolute value at most 4: ±1, ±2, ±3
        let f = NumberField::rationals();
        let w = Weights::new(vec![2]).unwrap();
        let pts: Vec<_> = enumerate_points(f, &w, &rat(2)).unwrap().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(count_points(f, &w, &rat(2)).unwrap(), 6);
    }

    #[test]
    fn p46_tiny_bound_contains_expected_points() {
        let f = NumberField::rationals();
        let w = Weights::pair(4, 6);
        let pts: BTreeSet<String> = enumerate_points(f, &w, &rat(1))
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        for needle in ["[1 : 1]", "[1 : 0]", "[0 : 1]", "[1 : -1]"] {
            assert!(pts.contains(needle), "missing {needle}: {pts:?}");
        }
        // every coordinate bounded by one in absolute value
        for p in enumerate_points(f, &w, &rat(1)).unwrap() {
            for x in p.canonical() {
                assert!(x.place_abs() <= rat(1));
            }
        }
    }

    /// Naive oracle: normalize every tuple of the search box with the slow
    /// path, dedup by canonical form, and keep those with size <= T.
    fn naive_count(field: NumberField, weights: &Weights, t: &Rat) -> u64 {
        let ring = IntRing::new(field);
        let balls: Vec<Vec<Zk>> = weights
            .as_slice()
            .iter()
            .map(|&w| ring.ball(ring::coord_norm_bound(field, t, w)))
            .collect();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut idx = vec![0usize; balls.len()];
        let lcm = weights.lcm();
        let bound = Pow::pow(t.clone(), lcm as i32);
        loop {
            let xs: Vec<FieldElement> = idx
                .iter()
                .zip(&balls)
                .map(|(&i, b)| ring.to_element(b[i]))
                .collect();
            if !xs.iter().all(|x| x.is_zero()) {
                let p = normalize(field, weights.clone(), xs).unwrap();
                if p.size_power_exact(lcm).unwrap() <= bound {
                    seen.insert(p.to_string());
                }
            }
            let mut done = true;
            for i in (0..idx.len()).rev() {
                idx[i] += 1;
                if idx[i] < balls[i].len() {
                    done = false;
                    break;
                }
                idx[i] = 0;
            }
            if done {
                break;
            }
        }
        seen.len() as u64
    }

    #[test]
    fn agrees_with_naive_oracle() {
        let cases = [
            (NumberField::rationals(), Weights::pair(1, 1), 4),
            (NumberField::rationals(), Weights::pair(1, 2), 3),
            (NumberField::rationals(), Weights::pair(2, 3), 2),
            (NumberField::rationals(), Weights::new(vec![2]).unwrap(), 5),
            (NumberField::rationals(), Weights::new(vec![1, 1, 1]).unwrap(), 2),
            (NumberField::imag_quadratic(-1).unwrap(), Weights::pair(1, 1), 3),
            (NumberField::imag_quadratic(-1).unwrap(), Weights::pair(1, 2), 2),
            (NumberField::imag_quadratic(-3).unwrap(), Weights::pair(1, 1), 2),
            (NumberField::imag_quadratic(-7).unwrap(), Weights::pair(1, 1), 2),
            (NumberField::imag_quadratic(-2).unwrap(), Weights::pair(2, 2), 2),
            (NumberField::imag_quadratic(-11).unwrap(), Weights::pair(1, 1), 2),
        ];
        for (field, w, t) in cases {
            let fast = count_points(field, &w, &rat(t)).unwrap();
            let slow = naive_count(field, &w, &rat(t));
            assert_eq!(fast, slow, "count mismatch over {field} weights {w} T={t}");
            // the streaming enumeration agrees with the parallel count
            let streamed = enumerate_points(field, &w, &rat(t)).unwrap().count() as u64;
            assert_eq!(streamed, fast);
        }
    }

    #[test]
    fn no_duplicates_and_monotone() {
        let f = NumberField::imag_quadratic(-1).unwrap();
        let w = Weights::pair(1, 1);
        let pts: Vec<String> = enumerate_points(f, &w, &rat(3))
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        let dedup: BTreeSet<&String> = pts.iter().collect();
        assert_eq!(dedup.len(), pts.len(), "duplicate canonical tuples emitted");
        let mut prev = 0;
        for t in 1..=4 {
            let c = count_points(f, &w, &rat(t)).unwrap();
            assert!(c >= prev, "count must be monotone in T");
            prev = c;
        }
    }

    #[test]
    fn leading_constant_examples() {
        let f = NumberField::rationals();
        let c = leading_constant(f, &Weights::pair(1, 1), 1e-10).unwrap();
        assert!((c - 1.215854).abs() < 1e-5, "C for P1(Q): {c}");
        let c = leading_constant(f, &Weights::pair(4, 6), 1e-10).unwrap();
        assert!((c - 3.99603).abs() < 1e-4, "C for P(4,6)(Q): {c}");
        let fi = NumberField::imag_quadratic(-1).unwrap();
        let c = leading_constant(fi, &Weights::pair(1, 1), 1e-10).unwrap();
        assert!((c - 1.6376).abs() < 1e-3, "C for P1(Q(i)): {c}");
    }

    #[test]
    fn count_approaches_main_term() {
        let f = NumberField::rationals();
        let w = Weights::pair(1, 1);
        let reports =
            convergence_report(f, &w, &[rat(10), rat(50), rat(100)]).unwrap();
        assert!(reports[2].rel_deviation.abs() < 0.02, "{:?}", reports[2]);
        assert!(
            reports[2].rel_deviation.abs() < reports[0].rel_deviation.abs() + 0.01,
            "deviation should shrink: {reports:?}"
        );
        // the T = 100 count is the classical coprime-pair count
        assert_eq!(reports[2].exact_count, 2 + 2 * 6087);
    }

    #[test]
    fn squarefree_count_at_100() {
        // classes of squarefree |x| <= 100: 61 squarefree values, two signs
        let f = NumberField::rationals();
        let w = Weights::new(vec![2]).unwrap();
        let r = convergence_report(f, &w, &[rat(10)]).unwrap();
        assert_eq!(r[0].exact_count, 122);
        assert!((r[0].main_term - 121.585).abs() < 0.01);
    }
}
