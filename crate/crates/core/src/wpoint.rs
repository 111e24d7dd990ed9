//! Points of a weighted projective space over a number field, stored by a
//! canonical orbit representative, and the size function on them.
//!
//! The canonical representative of a point has scaling ideal (1), integral
//! coordinates, and is the minimum of its unit orbit under the fixed total
//! order on coordinate tuples; two tuples define the same point exactly when
//! their canonical forms agree.

use crate::numfield::{
    arch_size, arch_size_power, scaling_ideal_of_tuple, FieldElement, FractionalIdeal,
    NumberField, Rat,
};
use crate::{Error, Result};
use num_integer::Integer;
use std::cmp::Ordering;
use std::fmt;

/// Weight vector (w_0, ..., w_n): positive integers, n >= 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weights(Vec<u32>);

impl Weights {
    pub fn new(w: Vec<u32>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Schema("empty weight vector".into()));
        }
        if w.iter().any(|&x| x == 0) {
            return Err(Error::Schema("weights must be positive".into()));
        }
        Ok(Weights(w))
    }

    pub fn pair(w0: u32, w1: u32) -> Self {
        Weights(vec![w0, w1])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// |w| = w_0 + ... + w_n.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn lcm(&self) -> u32 {
        self.0.iter().fold(1u32, |acc, &w| acc.lcm(&w))
    }

    pub fn gcd(&self) -> u32 {
        self.0.iter().fold(0u32, |acc, &w| acc.gcd(&w))
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A point of P(w)(K), held by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    field: NumberField,
    weights: Weights,
    canonical: Vec<FieldElement>,
}

impl WeightedPoint {
    pub fn field(&self) -> NumberField {
        self.field
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// The canonical representative.
    pub fn canonical(&self) -> &[FieldElement] {
        &self.canonical
    }

    /// Size of the point: on the canonical representative the ideal norm
    /// factor is 1, so the size is the archimedean size alone.
    pub fn size(&self) -> f64 {
        arch_size(self.weights.as_slice(), &self.canonical).expect("canonical tuple is non-zero")
    }

    /// Exact L-th power of the size for L a common multiple of the weights.
    pub fn size_power_exact(&self, l: u32) -> Result<Rat> {
        arch_size_power(self.weights.as_slice(), &self.canonical, l)
    }

    /// Construct from a tuple that is already known to be canonical (used by
    /// the enumeration core; debug builds re-check).
    pub(crate) fn from_canonical_unchecked(
        field: NumberField,
        weights: Weights,
        canonical: Vec<FieldElement>,
    ) -> Self {
        let p = WeightedPoint { field, weights, canonical };
        debug_assert!({
            let again = normalize(p.field, p.weights.clone(), p.canonical.clone()).unwrap();
            again.canonical == p.canonical
        });
        p
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.canonical.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// Compare coordinate tuples by the fixed total order used for orbit minima.
fn tuple_key_cmp(a: &[FieldElement], b: &[FieldElement]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.key_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Map a coordinate tuple to the point it represents: scale away the
/// generator of the scaling ideal (leaving integral coordinates with scaling
/// ideal (1)), then take the minimum of the unit orbit.
pub fn normalize(
    field: NumberField,
    weights: Weights,
    coords: Vec<FieldElement>,
) -> Result<WeightedPoint> {
    if coords.len() != weights.len() {
        return Err(Error::SpaceMismatch);
    }
    if coords.iter().all(|x| x.is_zero()) {
        return Err(Error::AllZeroTuple);
    }
    debug_assert!(coords.iter().all(|x| x.field() == field));
    let ideal = scaling_ideal_of_tuple(weights.as_slice(), &coords)?;
    let scaled = scale_by_ideal_generator(&ideal, weights.as_slice(), &coords);
    debug_assert!(scaled.iter().all(|x| x.is_integral()));
    let canonical = unit_orbit_minimum(field, weights.as_slice(), scaled);
    Ok(WeightedPoint { field, weights, canonical })
}

fn scale_by_ideal_generator(
    ideal: &FractionalIdeal,
    weights: &[u32],
    coords: &[FieldElement],
) -> Vec<FieldElement> {
    if ideal.is_unit_ideal() {
        return coords.to_vec();
    }
    let g = ideal.generator();
    coords
        .iter()
        .zip(weights)
        .map(|(x, &w)| x / &g.pow(w as i64))
        .collect()
}

fn unit_orbit_minimum(
    field: NumberField,
    weights: &[u32],
    tuple: Vec<FieldElement>,
) -> Vec<FieldElement> {
    let mut best = tuple.clone();
    for u in field.units() {
        if u.is_one() {
            continue;
        }
        let cand: Vec<FieldElement> = tuple
            .iter()
            .zip(weights)
            .map(|(x, &w)| &u.pow(w as i64) * x)
            .collect();
        if tuple_key_cmp(&cand, &best) == Ordering::Less {
            best = cand;
        }
    }
    best
}

/// Size of an arbitrary representative: Norm(I_w(x))^{-1} times the
/// archimedean size. Agrees with `WeightedPoint::size` after `normalize`.
pub fn size_of_tuple(weights: &Weights, coords: &[FieldElement]) -> Result<f64> {
    let ideal = scaling_ideal_of_tuple(weights.as_slice(), coords)?;
    let n = ideal.norm();
    use num_traits::ToPrimitive;
    Ok(arch_size(weights.as_slice(), coords)? / n.to_f64().unwrap())
}

/// Point equality with a space check (pointwise `==` also works once both
/// sides are normalized).
pub fn equal_points(p: &WeightedPoint, q: &WeightedPoint) -> Result<bool> {
    if p.field != q.field || p.weights != q.weights {
        return Err(Error::SpaceMismatch);
    }
    Ok(p.canonical == q.canonical)
}
