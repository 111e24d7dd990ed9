//! Exact arithmetic in the rationals and the imaginary-quadratic fields of
//! class number one: elements, prime ideals, factored fractional ideals,
//! valuations, scaling ideals, archimedean sizes and Dedekind zeta values.

pub mod factor;
pub mod zeta;

use crate::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub type Rat = BigRational;

/// The supported discriminant parameters d with Q(sqrt(d)) a PID and a
/// finite unit group: exactly the imaginary-quadratic fields of class
/// number one that are also norm-Euclidean.
pub const SUPPORTED_D: [i64; 5] = [-1, -2, -3, -7, -11];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Rationals,
    /// Q(sqrt(d)) for squarefree d in `SUPPORTED_D`.
    ImagQuadratic(i64),
}

/// Descriptor of the base field together with its classical invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumberField {
    kind: FieldKind,
}

impl NumberField {
    pub fn rationals() -> Self {
        NumberField { kind: FieldKind::Rationals }
    }

    pub fn imag_quadratic(d: i64) -> Result<Self> {
        if SUPPORTED_D.contains(&d) {
            Ok(NumberField { kind: FieldKind::ImagQuadratic(d) })
        } else {
            Err(Error::UnsupportedField(format!("Qsqrt{d}")))
        }
    }

    /// Parse a field spec: `Q`, `Qi`, or `Qsqrt-d` for supported d.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Q" => Ok(Self::rationals()),
            "Qi" | "Qsqrt-1" => Self::imag_quadratic(-1),
            _ => {
                if let Some(ds) = s.strip_prefix("Qsqrt") {
                    if let Ok(d) = ds.parse::<i64>() {
                        return Self::imag_quadratic(d);
                    }
                }
                Err(Error::UnsupportedField(s.to_string()))
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn is_rationals(&self) -> bool {
        self.kind == FieldKind::Rationals
    }

    /// d for the quadratic fields, None for Q.
    pub fn quad_d(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Rationals => None,
            FieldKind::ImagQuadratic(d) => Some(d),
        }
    }

    /// Degree over Q.
    pub fn degree(&self) -> u32 {
        match self.kind {
            FieldKind::Rationals => 1,
            FieldKind::ImagQuadratic(_) => 2,
        }
    }

    /// Number of real places.
    pub fn r1(&self) -> u32 {
        match self.kind {
            FieldKind::Rationals => 1,
            FieldKind::ImagQuadratic(_) => 0,
        }
    }

    /// Number of complex (non-real) places.
    pub fn r2(&self) -> u32 {
        match self.kind {
            FieldKind::Rationals => 0,
            FieldKind::ImagQuadratic(_) => 1,
        }
    }

    pub fn discriminant(&self) -> i64 {
        match self.kind {
            FieldKind::Rationals => 1,
            FieldKind::ImagQuadratic(d) => {
                if d.rem_euclid(4) == 1 {
                    d
                } else {
                    4 * d
                }
            }
        }
    }

    pub fn class_number(&self) -> u32 {
        1
    }

    pub fn regulator(&self) -> f64 {
        1.0
    }

    /// Order of the group of roots of unity.
    pub fn roots_of_unity_count(&self) -> u32 {
        match self.kind {
            FieldKind::Rationals => 2,
            FieldKind::ImagQuadratic(-1) => 4,
            FieldKind::ImagQuadratic(-3) => 6,
            FieldKind::ImagQuadratic(_) => 2,
        }
    }

    /// All roots of unity of the field, starting with 1 and generated by
    /// `unit_generator`.
    pub fn units(&self) -> Vec<FieldElement> {
        let zeta = self.unit_generator();
        let mut out = vec![FieldElement::one(*self)];
        let mut cur = zeta.clone();
        while !cur.is_one() {
            out.push(cur.clone());
            cur = &cur * &zeta;
        }
        debug_assert_eq!(out.len() as u32, self.roots_of_unity_count());
        out
    }

    /// A fixed generator of the cyclic group of roots of unity.
    pub fn unit_generator(&self) -> FieldElement {
        match self.kind {
            FieldKind::Rationals => FieldElement::from_i64(*self, -1),
            FieldKind::ImagQuadratic(-1) => {
                FieldElement::new(*self, Rat::zero(), Rat::one()).unwrap()
            }
            FieldKind::ImagQuadratic(-3) => FieldElement::new(
                *self,
                Rat::new(BigInt::one(), BigInt::from(2)),
                Rat::new(BigInt::one(), BigInt::from(2)),
            )
            .unwrap(),
            FieldKind::ImagQuadratic(_) => FieldElement::from_i64(*self, -1),
        }
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::ImagQuadratic(-1) => write!(f, "Qi"),
            FieldKind::ImagQuadratic(d) => write!(f, "Qsqrt{d}"),
        }
    }
}

/// An element a + b*sqrt(d) with exact rational coordinates; b = 0 over Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: NumberField,
    a: Rat,
    b: Rat,
}

impl FieldElement {
    pub fn new(field: NumberField, a: Rat, b: Rat) -> Result<Self> {
        if field.is_rationals() && !b.is_zero() {
            return Err(Error::UnsupportedField(
                "rational field has no quadratic part".into(),
            ));
        }
        Ok(FieldElement { field, a, b })
    }

    pub fn from_rat(field: NumberField, a: Rat) -> Self {
        FieldElement { field, a, b: Rat::zero() }
    }

    pub fn from_i64(field: NumberField, n: i64) -> Self {
        Self::from_rat(field, Rat::from(BigInt::from(n)))
    }

    pub fn zero(field: NumberField) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: NumberField) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn field(&self) -> NumberField {
        self.field
    }

    /// Rational part (coefficient of 1).
    pub fn re(&self) -> &Rat {
        &self.a
    }

    /// Coefficient of sqrt(d); zero over Q.
    pub fn im(&self) -> &Rat {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rat(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        FieldElement { field: self.field, a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm down to Q: the identity on Q, and a^2 - d b^2 on Q(sqrt d).
    pub fn norm(&self) -> Rat {
        match self.field.kind {
            FieldKind::Rationals => self.a.clone(),
            FieldKind::ImagQuadratic(d) => {
                &self.a * &self.a - Rat::from(BigInt::from(d)) * &self.b * &self.b
            }
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        match self.field.kind {
            FieldKind::Rationals => Self::from_rat(self.field, self.a.recip()),
            FieldKind::ImagQuadratic(_) => {
                let n = self.norm();
                let c = self.conj();
                FieldElement { field: self.field, a: c.a / &n, b: c.b / &n }
            }
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether the element lies in the ring of integers.
    pub fn is_integral(&self) -> bool {
        match self.field.kind {
            FieldKind::Rationals => self.a.is_integer(),
            FieldKind::ImagQuadratic(d) => {
                if d.rem_euclid(4) == 1 {
                    // Z[(1+sqrt d)/2]: need 2b integral and a - b integral
                    let two = Rat::from(BigInt::from(2));
                    (&self.b * &two).is_integer() && (&self.a - &self.b).is_integer()
                } else {
                    self.a.is_integer() && self.b.is_integer()
                }
            }
        }
    }

    /// Normalized absolute value at the (unique) archimedean place: the plain
    /// absolute value over Q, the squared modulus over a quadratic field.
    /// Exact as a rational in both cases.
    pub fn place_abs(&self) -> Rat {
        match self.field.kind {
            FieldKind::Rationals => self.a.abs(),
            FieldKind::ImagQuadratic(_) => self.norm(),
        }
    }

    /// Total order used to pick canonical orbit representatives: compare
    /// coordinates lexicographically, each by sign class (non-negative first)
    /// then magnitude.
    pub fn key_cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.field, other.field, "elements of different fields");
        rat_key_cmp(&self.a, &other.a).then_with(|| rat_key_cmp(&self.b, &other.b))
    }

    /// Exact string form: `p/q` over Q, `a,b` over a quadratic field.
    pub fn to_spec_string(&self) -> String {
        if self.field.is_rationals() {
            rat_to_string(&self.a)
        } else {
            format!("{},{}", rat_to_string(&self.a), rat_to_string(&self.b))
        }
    }

    /// Parse the exact string form produced by `to_spec_string`; over a
    /// quadratic field a plain rational is read as having no sqrt part.
    pub fn parse_in_field(field: NumberField, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        let parse_rat = |t: &str| -> Result<Rat> {
            let t = t.trim();
            let (num, den) = match t.split_once('/') {
                Some((n, d)) => (n, d),
                None => (t, "1"),
            };
            let n: BigInt = num
                .parse()
                .map_err(|_| Error::Schema(format!("bad rational: {t}")))?;
            let d: BigInt = den
                .parse()
                .map_err(|_| Error::Schema(format!("bad rational: {t}")))?;
            if d.is_zero() {
                return Err(Error::Schema(format!("zero denominator: {t}")));
            }
            Ok(Rat::new(n, d))
        };
        match parts.len() {
            1 => Ok(Self::from_rat(field, parse_rat(parts[0])?)),
            2 => Self::new(field, parse_rat(parts[0])?, parse_rat(parts[1])?),
            _ => Err(Error::Schema(format!("bad coefficient: {s}"))),
        }
    }

    /// Approximate complex embedding (real part, imaginary part).
    pub fn to_complex(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        match self.field.kind {
            FieldKind::Rationals => (a, 0.0),
            FieldKind::ImagQuadratic(d) => {
                let b = self.b.to_f64().unwrap_or(f64::NAN);
                (a, b * ((-d) as f64).sqrt())
            }
        }
    }
}

fn rat_key_cmp(x: &Rat, y: &Rat) -> Ordering {
    let sx = if x.is_negative() { 1 } else { 0 };
    let sy = if y.is_negative() { 1 } else { 0 };
    sx.cmp(&sy).then_with(|| x.abs().cmp(&y.abs()))
}

fn rat_to_string(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", rat_to_string(&self.a));
        }
        let d = self.field.quad_d().unwrap();
        if self.a.is_zero() {
            write!(f, "{}*sqrt({})", rat_to_string(&self.b), d)
        } else {
            write!(f, "{}+{}*sqrt({})", rat_to_string(&self.a), rat_to_string(&self.b), d)
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                assert_eq!(self.field, rhs.field, "elements of different fields");
                let $a = self;
                let $b = rhs;
                $body
            }
        }
    };
}

binop!(Add, add, |x, y| FieldElement {
    field: x.field,
    a: &x.a + &y.a,
    b: &x.b + &y.b,
});

binop!(Sub, sub, |x, y| FieldElement {
    field: x.field,
    a: &x.a - &y.a,
    b: &x.b - &y.b,
});

binop!(Mul, mul, |x, y| {
    match x.field.kind {
        FieldKind::Rationals => FieldElement::from_rat(x.field, &x.a * &y.a),
        FieldKind::ImagQuadratic(d) => {
            let d = Rat::from(BigInt::from(d));
            FieldElement {
                field: x.field,
                a: &x.a * &y.a + &d * &x.b * &y.b,
                b: &x.a * &y.b + &x.b * &y.a,
            }
        }
    }
});

binop!(Div, div, |x, y| x * &y.inv());

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field, a: -self.a.clone(), b: -self.b.clone() }
    }
}

/// A maximal ideal of the ring of integers, stored with its residue
/// characteristic, residue degree, and a canonical generator (the supported
/// fields are PIDs). The generator is the minimum of its unit orbit under
/// the fixed element order, so equal ideals compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    field: NumberField,
    p: u64,
    residue_degree: u8,
    generator: FieldElement,
}

impl PrimeIdeal {
    pub fn field(&self) -> NumberField {
        self.field
    }

    pub fn residue_char(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u8 {
        self.residue_degree
    }

    pub fn generator(&self) -> &FieldElement {
        &self.generator
    }

    /// Absolute norm p^f.
    pub fn absolute_norm(&self) -> u64 {
        self.p.pow(self.residue_degree as u32)
    }

    /// Ramification index over p.
    pub fn ramification(&self) -> u32 {
        if self.field.is_rationals() {
            return 1;
        }
        let disc = self.field.discriminant();
        if disc.unsigned_abs() % self.p == 0 {
            2
        } else {
            1
        }
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.residue_degree.cmp(&other.residue_degree))
            .then_with(|| self.generator.key_cmp(&other.generator))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generator)
    }
}

/// Replace x by the minimum of its unit orbit.
fn canonical_associate(x: &FieldElement) -> FieldElement {
    let mut best = x.clone();
    for u in x.field().units() {
        let cand = &u * x;
        if cand.key_cmp(&best) == Ordering::Less {
            best = cand;
        }
    }
    best
}

/// The prime ideals above a rational prime p, sorted.
pub fn primes_above(field: NumberField, p: u64) -> Vec<PrimeIdeal> {
    assert!(factor::is_prime_u64(p), "{p} is not prime");
    if field.is_rationals() {
        return vec![PrimeIdeal {
            field,
            p,
            residue_degree: 1,
            generator: FieldElement::from_i64(field, p as i64),
        }];
    }
    let disc = field.discriminant();
    let chi = zeta::kronecker(disc, p as i64);
    if chi == -1 {
        return vec![PrimeIdeal {
            field,
            p,
            residue_degree: 2,
            generator: FieldElement::from_i64(field, p as i64),
        }];
    }
    // split or ramified: find pi with |norm(pi)| = p by lattice search
    let d = field.quad_d().unwrap();
    let ad = (-d) as u64;
    let pi = find_norm_p(field, d, ad, p);
    let g1 = canonical_associate(&pi);
    let g2 = canonical_associate(&pi.conj());
    if g1 == g2 {
        debug_assert_eq!(chi, 0, "non-ramified prime with self-conjugate generator");
        vec![PrimeIdeal { field, p, residue_degree: 1, generator: g1 }]
    } else {
        let mut v = vec![
            PrimeIdeal { field, p, residue_degree: 1, generator: g1 },
            PrimeIdeal { field, p, residue_degree: 1, generator: g2 },
        ];
        v.sort();
        v
    }
}

fn find_norm_p(field: NumberField, d: i64, ad: u64, p: u64) -> FieldElement {
    if d.rem_euclid(4) == 1 {
        // norm(a + b sqrt d) with a, b half-integers: (2a)^2 + ad (2b)^2 = 4p,
        // with 2a and 2b of equal parity
        let target = 4 * p;
        let bmax = factor::iroot_u128((target / ad) as u128, 2) as u64;
        for tb in 0..=bmax {
            let rest = target - ad * tb * tb;
            let ta = factor::iroot_u128(rest as u128, 2) as u64;
            if ta * ta == rest && (ta % 2) == (tb % 2) {
                let half = Rat::new(BigInt::one(), BigInt::from(2));
                return FieldElement::new(
                    field,
                    Rat::from(BigInt::from(ta)) * &half,
                    Rat::from(BigInt::from(tb)) * &half,
                )
                .unwrap();
            }
        }
    } else {
        let bmax = factor::iroot_u128((p / ad) as u128, 2) as u64;
        for b in 0..=bmax {
            let rest = p - ad * b * b;
            let a = factor::iroot_u128(rest as u128, 2) as u64;
            if a * a == rest {
                return FieldElement::new(
                    field,
                    Rat::from(BigInt::from(a)),
                    Rat::from(BigInt::from(b)),
                )
                .unwrap();
            }
        }
    }
    unreachable!("no element of norm {p} in {field}; splitting data inconsistent")
}

/// Exact p-adic valuation of a non-zero element at a prime ideal.
pub fn valuation(x: &FieldElement, prime: &PrimeIdeal) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    assert_eq!(x.field(), prime.field, "element and prime of different fields");
    let p_big = BigInt::from(prime.p);
    if x.field().is_rationals() {
        let q = x.as_rat().unwrap();
        return Ok(bigint_val(q.numer(), &p_big) - bigint_val(q.denom(), &p_big));
    }
    // clear denominators: c x has integer sqrt-d coordinates, so lies in O_K
    let c = x.re().denom().lcm(x.im().denom());
    let c_rat = Rat::from(c.clone());
    let y = FieldElement::new(x.field(), x.re() * &c_rat, x.im() * &c_rat).unwrap();
    let v_c = bigint_val(&c, &p_big) * prime.ramification() as i64;
    let v_y = if prime.residue_degree == 2 {
        // inert: v = min of p-valuations of the integral-basis coordinates
        // (a zero coordinate imposes no bound; both cannot vanish)
        let (u, w) = integral_basis_coords(&y);
        match (u.is_zero(), w.is_zero()) {
            (false, false) => bigint_val(&u, &p_big).min(bigint_val(&w, &p_big)),
            (false, true) => bigint_val(&u, &p_big),
            (true, false) => bigint_val(&w, &p_big),
            (true, true) => unreachable!("zero element"),
        }
    } else {
        let mut v = 0i64;
        let mut cur = y;
        loop {
            let q = &cur / prime.generator();
            if q.is_integral() {
                v += 1;
                cur = q;
            } else {
                break;
            }
        }
        v
    };
    Ok(v_y - v_c)
}

/// Coordinates of an integral element in the integral basis (1, omega).
fn integral_basis_coords(x: &FieldElement) -> (BigInt, BigInt) {
    debug_assert!(x.is_integral());
    let d = x.field().quad_d().unwrap();
    if d.rem_euclid(4) == 1 {
        // a + b sqrt d = (a - b) + 2b * (1+sqrt d)/2
        let two = Rat::from(BigInt::from(2));
        let w = (x.im() * &two).to_integer();
        let u = (x.re() - x.im()).to_integer();
        (u, w)
    } else {
        (x.re().to_integer(), x.im().to_integer())
    }
}

fn bigint_val(n: &BigInt, p: &BigInt) -> i64 {
    assert!(!n.is_zero());
    let mut v = 0i64;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.div_rem(p);
        if r.is_zero() {
            v += 1;
            cur = q;
        } else {
            return v;
        }
    }
}

/// A non-zero fractional ideal in factored form; the empty factorization is
/// the unit ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalIdeal {
    field: NumberField,
    factors: BTreeMap<PrimeIdeal, i64>,
}

impl FractionalIdeal {
    pub fn unit(field: NumberField) -> Self {
        FractionalIdeal { field, factors: BTreeMap::new() }
    }

    pub fn from_factors(
        field: NumberField,
        factors: impl IntoIterator<Item = (PrimeIdeal, i64)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (p, e) in factors {
            assert_eq!(p.field, field);
            if e != 0 {
                *map.entry(p).or_insert(0) += e;
            }
        }
        map.retain(|_, e| *e != 0);
        FractionalIdeal { field, factors: map }
    }

    /// The principal ideal generated by a non-zero element.
    pub fn principal(x: &FieldElement) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let field = x.field();
        if field.is_rationals() {
            let q = x.as_rat().unwrap();
            let mut factors = BTreeMap::new();
            for (p, e) in factor::factor_biguint(q.numer().magnitude()) {
                factors.insert(primes_above(field, p).pop().unwrap(), e as i64);
            }
            for (p, e) in factor::factor_biguint(q.denom().magnitude()) {
                *factors.entry(primes_above(field, p).pop().unwrap()).or_insert(0) -= e as i64;
            }
            factors.retain(|_, e| *e != 0);
            return Ok(FractionalIdeal { field, factors });
        }
        // candidate rational primes: those dividing the cleared-denominator
        // constant or the norm of the integral part
        let c = x.re().denom().lcm(x.im().denom());
        let c_rat = Rat::from(c.clone());
        let y = FieldElement::new(field, x.re() * &c_rat, x.im() * &c_rat).unwrap();
        let mut candidates: Vec<u64> = factor::factor_biguint(&c.to_biguint().unwrap())
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let ny = y.norm();
        debug_assert!(ny.denom().is_one());
        for (p, _) in factor::factor_biguint(ny.numer().magnitude()) {
            if !candidates.contains(&p) {
                candidates.push(p);
            }
        }
        let mut factors = BTreeMap::new();
        for p in candidates {
            for prime in primes_above(field, p) {
                let v = valuation(x, &prime)?;
                if v != 0 {
                    factors.insert(prime, v);
                }
            }
        }
        Ok(FractionalIdeal { field, factors })
    }

    pub fn field(&self) -> NumberField {
        self.field
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &BTreeMap<PrimeIdeal, i64> {
        &self.factors
    }

    pub fn exponent(&self, p: &PrimeIdeal) -> i64 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += e;
        }
        factors.retain(|_, e| *e != 0);
        FractionalIdeal { field: self.field, factors }
    }

    pub fn inv(&self) -> Self {
        FractionalIdeal {
            field: self.field,
            factors: self.factors.iter().map(|(p, e)| (p.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::unit(self.field);
        }
        FractionalIdeal {
            field: self.field,
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    /// Absolute norm: multiplicative, with each prime contributing p^f.
    pub fn norm(&self) -> Rat {
        let mut n = Rat::one();
        for (p, e) in &self.factors {
            let base = Rat::from(BigInt::from(p.absolute_norm()));
            let mut pw = Rat::one();
            for _ in 0..e.unsigned_abs() {
                pw *= &base;
            }
            if *e >= 0 {
                n *= pw;
            } else {
                n /= pw;
            }
        }
        n
    }

    /// A generator (the fields in scope are PIDs).
    pub fn generator(&self) -> FieldElement {
        let mut g = FieldElement::one(self.field);
        for (p, e) in &self.factors {
            g = &g * &p.generator().pow(*e);
        }
        g
    }

    /// Ideal containment: other ⊆ self.
    pub fn contains(&self, other: &Self) -> bool {
        assert_eq!(self.field, other.field);
        let mut primes: Vec<&PrimeIdeal> = self.factors.keys().collect();
        for p in other.factors.keys() {
            if !self.factors.contains_key(p) {
                primes.push(p);
            }
        }
        primes.iter().all(|p| other.exponent(p) >= self.exponent(p))
    }

    /// Element membership x ∈ self; zero lies in every ideal.
    pub fn contains_element(&self, x: &FieldElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let px = Self::principal(x)?;
        Ok(self.contains(&px))
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "(1)");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    format!("{p}")
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// floor(min_i v_i / w_i) over the given (valuation, weight) pairs.
fn floor_min_ratio(pairs: &[(i64, u32)]) -> i64 {
    let (mut vn, mut wd) = (pairs[0].0, pairs[0].1 as i64);
    for &(v, w) in &pairs[1..] {
        let w = w as i64;
        // v/w < vn/wd  (positive denominators)
        if v * wd < vn * w {
            vn = v;
            wd = w;
        }
    }
    vn.div_euclid(wd)
}

/// The scaling ideal of a coordinate tuple: the smallest fractional ideal a
/// with x_i ∈ a^{w_i} for every i. Valuation-wise this is
/// floor(min over non-zero coordinates of v_P(x_i)/w_i). Zero coordinates
/// impose no condition.
pub fn scaling_ideal_of_tuple(weights: &[u32], xs: &[FieldElement]) -> Result<FractionalIdeal> {
    assert_eq!(weights.len(), xs.len(), "weights and coordinates differ in length");
    assert!(weights.iter().all(|w| *w >= 1), "weights must be positive");
    let nonzero: Vec<usize> = (0..xs.len()).filter(|&i| !xs[i].is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::AllZeroTuple);
    }
    let field = xs[nonzero[0]].field();
    // candidate primes: the union of the supports of the non-zero coordinates
    let mut candidates: Vec<PrimeIdeal> = Vec::new();
    for &i in &nonzero {
        for p in FractionalIdeal::principal(&xs[i])?.factors.into_keys() {
            if !candidates.contains(&p) {
                candidates.push(p);
            }
        }
    }
    let mut factors = BTreeMap::new();
    for prime in candidates {
        let pairs: Vec<(i64, u32)> = nonzero
            .iter()
            .map(|&i| Ok((valuation(&xs[i], &prime)?, weights[i])))
            .collect::<Result<_>>()?;
        let e = floor_min_ratio(&pairs);
        if e != 0 {
            factors.insert(prime, e);
        }
    }
    Ok(FractionalIdeal { field, factors })
}

/// The scaling ideal of a tuple of fractional-ideals-or-zero (`None` means
/// the zero ideal, which imposes no condition).
pub fn scaling_ideal_of_ideals(
    weights: &[u32],
    ideals: &[Option<FractionalIdeal>],
) -> Result<FractionalIdeal> {
    assert_eq!(weights.len(), ideals.len());
    let nonzero: Vec<usize> = (0..ideals.len()).filter(|&i| ideals[i].is_some()).collect();
    if nonzero.is_empty() {
        return Err(Error::AllZeroTuple);
    }
    let field = ideals[nonzero[0]].as_ref().unwrap().field;
    let mut candidates: Vec<PrimeIdeal> = Vec::new();
    for &i in &nonzero {
        for p in ideals[i].as_ref().unwrap().factors.keys() {
            if !candidates.contains(p) {
                candidates.push(p.clone());
            }
        }
    }
    let mut factors = BTreeMap::new();
    for prime in candidates {
        let pairs: Vec<(i64, u32)> = nonzero
            .iter()
            .map(|&i| (ideals[i].as_ref().unwrap().exponent(&prime), weights[i]))
            .collect();
        let e = floor_min_ratio(&pairs);
        if e != 0 {
            factors.insert(prime, e);
        }
    }
    Ok(FractionalIdeal { field, factors })
}

/// Archimedean size: the product over archimedean places of
/// max_i |x_i|_v^{1/w_i}. The supported fields have a single place.
pub fn arch_size(weights: &[u32], xs: &[FieldElement]) -> Result<f64> {
    assert_eq!(weights.len(), xs.len());
    if xs.iter().all(|x| x.is_zero()) {
        return Err(Error::AllZeroTuple);
    }
    let mut m: f64 = 0.0;
    for (x, &w) in xs.iter().zip(weights) {
        let av = x.place_abs().to_f64().unwrap_or(f64::INFINITY);
        m = m.max(av.powf(1.0 / w as f64));
    }
    Ok(m)
}

/// Exact L-th power of the archimedean size, for L a common multiple of the
/// weights: each |x_i|_v is an exact rational, so the whole product is.
pub fn arch_size_power(weights: &[u32], xs: &[FieldElement], l: u32) -> Result<Rat> {
    assert_eq!(weights.len(), xs.len());
    if xs.iter().all(|x| x.is_zero()) {
        return Err(Error::AllZeroTuple);
    }
    let mut m = Rat::zero();
    for (x, &w) in xs.iter().zip(weights) {
        if l % w != 0 {
            return Err(Error::NotCommonMultiple(l));
        }
        let e = (l / w) as i32;
        let v = num_traits::Pow::pow(x.place_abs(), e);
        if v > m {
            m = v;
        }
    }
    Ok(m)
}

/// Rational power of a positive rational when the result is exact, i.e. when
/// numerator and denominator are perfect k-th powers.
pub fn rat_nth_root(q: &Rat, k: u32) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let rn = nth_root_exact(q.numer().magnitude(), k)?;
    let rd = nth_root_exact(q.denom().magnitude(), k)?;
    Some(Rat::new(BigInt::from_biguint(Sign::Plus, rn), BigInt::from_biguint(Sign::Plus, rd)))
}

fn nth_root_exact(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    if num_traits::Pow::pow(&r, k) == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    fn qq() -> NumberField {
        NumberField::rationals()
    }

    fn qi() -> NumberField {
        NumberField::imag_quadratic(-1).unwrap()
    }

    #[test]
    fn field_invariants() {
        let f = qq();
        assert_eq!(
            (f.r1(), f.r2(), f.discriminant(), f.class_number(), f.roots_of_unity_count()),
            (1, 0, 1, 1, 2)
        );
        assert_eq!(f.regulator(), 1.0);
        let f = qi();
        assert_eq!((f.r1(), f.r2(), f.discriminant(), f.roots_of_unity_count()), (0, 1, -4, 4));
        let f = NumberField::imag_quadratic(-3).unwrap();
        assert_eq!((f.discriminant(), f.roots_of_unity_count()), (-3, 6));
        let f = NumberField::imag_quadratic(-2).unwrap();
        assert_eq!((f.discriminant(), f.roots_of_unity_count()), (-8, 2));
        let f = NumberField::imag_quadratic(-7).unwrap();
        assert_eq!((f.discriminant(), f.roots_of_unity_count()), (-7, 2));
        assert!(NumberField::imag_quadratic(-5).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["Q", "Qi", "Qsqrt-2", "Qsqrt-3", "Qsqrt-7", "Qsqrt-11"] {
            let f = NumberField::parse(s).unwrap();
            assert_eq!(NumberField::parse(&f.to_string()).unwrap(), f);
        }
        assert!(NumberField::parse("Qsqrt-6").is_err());
    }

    #[test]
    fn units_lists() {
        assert_eq!(qq().units().len(), 2);
        let u = qi().units();
        assert_eq!(u.len(), 4);
        assert!(u.iter().any(|x| x.re().is_zero() && x.im().is_one()));
        let u3 = NumberField::imag_quadratic(-3).unwrap().units();
        assert_eq!(u3.len(), 6);
        for x in &u3 {
            assert!(x.norm().is_one());
            assert!(x.is_integral());
        }
    }

    #[test]
    fn integrality_half_basis() {
        let f3 = NumberField::imag_quadratic(-3).unwrap();
        let omega = FieldElement::new(f3, q(1, 2), q(1, 2)).unwrap();
        assert!(omega.is_integral());
        let bad = FieldElement::new(f3, q(1, 2), q(1, 3)).unwrap();
        assert!(!bad.is_integral());
        let fi = qi();
        let half = FieldElement::new(fi, q(1, 2), q(1, 2)).unwrap();
        assert!(!half.is_integral());
    }

    #[test]
    fn valuation_examples() {
        let f = qq();
        let p2 = primes_above(f, 2).pop().unwrap();
        let p3 = primes_above(f, 3).pop().unwrap();
        assert_eq!(valuation(&FieldElement::from_i64(f, 12), &p2).unwrap(), 2);
        assert_eq!(
            valuation(&FieldElement::from_rat(f, q(2, 3)), &p3).unwrap(),
            -1
        );
        let fi = qi();
        let above2 = primes_above(fi, 2);
        assert_eq!(above2.len(), 1, "2 ramifies in Q(i)");
        let p = &above2[0];
        assert_eq!(p.absolute_norm(), 2);
        let one_plus_i = FieldElement::new(fi, q(1, 1), q(1, 1)).unwrap();
        assert_eq!(valuation(&one_plus_i, p).unwrap(), 1);
        assert_eq!(valuation(&FieldElement::from_i64(fi, 2), p).unwrap(), 2);
        assert!(valuation(&FieldElement::zero(f), &p2).is_err());
    }

    #[test]
    fn splitting_types() {
        let fi = qi();
        assert_eq!(primes_above(fi, 5).len(), 2, "5 splits in Q(i)");
        assert_eq!(primes_above(fi, 3).len(), 1, "3 is inert in Q(i)");
        assert_eq!(primes_above(fi, 3)[0].residue_degree(), 2);
        let f3 = NumberField::imag_quadratic(-3).unwrap();
        assert_eq!(primes_above(f3, 3).len(), 1);
        assert_eq!(primes_above(f3, 3)[0].residue_degree(), 1);
        assert_eq!(primes_above(f3, 7).len(), 2, "7 splits in Q(sqrt -3)");
        assert_eq!(primes_above(f3, 5).len(), 1, "5 inert in Q(sqrt -3)");
    }

    #[test]
    fn ideal_norm_examples() {
        let f = qq();
        let two = FractionalIdeal::principal(&FieldElement::from_i64(f, 2)).unwrap();
        assert_eq!(two.norm(), q(2, 1));
        let fi = qi();
        let opi = FieldElement::new(fi, q(1, 1), q(1, 1)).unwrap();
        let i1 = FractionalIdeal::principal(&opi).unwrap();
        assert_eq!(i1.norm(), q(2, 1));
        assert_eq!(FractionalIdeal::unit(f).norm(), q(1, 1));
    }

    #[test]
    fn norm_multiplicative() {
        let f = qq();
        let a = FractionalIdeal::principal(&FieldElement::from_rat(f, q(20, 9))).unwrap();
        let b = FractionalIdeal::principal(&FieldElement::from_rat(f, q(-14, 5))).unwrap();
        assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
        assert!(a.mul(&a.inv()).is_unit_ideal());
    }

    #[test]
    fn principal_ideal_with_norm_cancellation() {
        // pi / conj(pi) has norm of absolute value 1 but is not a unit
        let fi = qi();
        let pi = FieldElement::new(fi, q(2, 1), q(1, 1)).unwrap(); // norm 5
        let x = &pi / &pi.conj();
        let ideal = FractionalIdeal::principal(&x).unwrap();
        assert!(!ideal.is_unit_ideal());
        assert_eq!(ideal.norm(), q(1, 1));
    }

    #[test]
    fn scaling_ideal_examples() {
        let f = qq();
        // weights (4,6), x = (-48, 0) -> (2)
        let i = scaling_ideal_of_tuple(
            &[4, 6],
            &[FieldElement::from_i64(f, -48), FieldElement::zero(f)],
        )
        .unwrap();
        assert_eq!(i.generator(), FieldElement::from_i64(f, 2));
        assert_eq!(i.norm(), q(2, 1));
        // weights (1,1), x = (2/3, 4) -> (2/3)
        let i = scaling_ideal_of_tuple(
            &[1, 1],
            &[FieldElement::from_rat(f, q(2, 3)), FieldElement::from_i64(f, 4)],
        )
        .unwrap();
        assert_eq!(i.norm(), q(2, 3));
        // weights (2), x = (12) -> (2)
        let i = scaling_ideal_of_tuple(&[2], &[FieldElement::from_i64(f, 12)]).unwrap();
        assert_eq!(i.norm(), q(2, 1));
        assert!(scaling_ideal_of_tuple(&[1], &[FieldElement::zero(f)]).is_err());
    }

    #[test]
    fn scaling_ideal_of_ideals_examples() {
        let f = qq();
        let ideal = |n: i64| FractionalIdeal::principal(&FieldElement::from_i64(f, n)).unwrap();
        let r = scaling_ideal_of_ideals(&[1, 2], &[Some(ideal(1)), Some(ideal(4))]).unwrap();
        assert!(r.is_unit_ideal());
        let r = scaling_ideal_of_ideals(&[1, 2], &[Some(ideal(8)), Some(ideal(4))]).unwrap();
        assert_eq!(r.norm(), q(2, 1));
        let i23 = FractionalIdeal::principal(&FieldElement::from_rat(f, q(2, 3))).unwrap();
        let r = scaling_ideal_of_ideals(&[1], &[Some(i23.clone())]).unwrap();
        assert_eq!(r, i23);
        assert!(scaling_ideal_of_ideals(&[1, 1], &[None, None]).is_err());
    }

    #[test]
    fn membership_characterization() {
        // a ∈ I_w(x)^{-1} iff a^{w_i} x_i is integral for all i
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = qq();
        for _ in 0..200 {
            let w = [rng.gen_range(1..4u32), rng.gen_range(1..4u32)];
            let xs = [
                FieldElement::from_rat(f, q(rng.gen_range(-30..30), rng.gen_range(1..9))),
                FieldElement::from_rat(f, q(rng.gen_range(-30..30), rng.gen_range(1..9))),
            ];
            if xs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let ideal = scaling_ideal_of_tuple(&w, &xs).unwrap();
            let inv = ideal.inv();
            let a = FieldElement::from_rat(f, q(rng.gen_range(-20..20), rng.gen_range(1..7)));
            if a.is_zero() {
                continue;
            }
            let member = inv.contains_element(&a).unwrap();
            let oracle = (0..2).all(|i| {
                xs[i].is_zero() || (&a.pow(w[i] as i64) * &xs[i]).is_integral()
            });
            assert_eq!(member, oracle);
        }
    }

    #[test]
    fn scaling_ideal_homogeneity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let fi = qi();
        for _ in 0..50 {
            let w = [rng.gen_range(1..4u32), rng.gen_range(1..4u32)];
            let xs = [
                FieldElement::new(fi, q(rng.gen_range(-9..9), 1), q(rng.gen_range(-9..9), 1))
                    .unwrap(),
                FieldElement::new(fi, q(rng.gen_range(-9..9), 1), q(rng.gen_range(-9..9), 1))
                    .unwrap(),
            ];
            if xs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let lam =
                FieldElement::new(fi, q(rng.gen_range(-5..6), 1), q(rng.gen_range(-5..6), 1))
                    .unwrap();
            if lam.is_zero() {
                continue;
            }
            let scaled: Vec<FieldElement> = (0..2)
                .map(|i| &lam.pow(w[i] as i64) * &xs[i])
                .collect();
            let lhs = scaling_ideal_of_tuple(&w, &scaled).unwrap();
            let rhs = FractionalIdeal::principal(&lam)
                .unwrap()
                .mul(&scaling_ideal_of_tuple(&w, &xs).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn arch_size_examples() {
        let f = qq();
        let s = arch_size(
            &[4, 6],
            &[FieldElement::from_i64(f, -48), FieldElement::from_i64(f, -864)],
        )
        .unwrap();
        let expect = (864f64).powf(1.0 / 6.0).max((48f64).powf(0.25));
        assert!((s - expect).abs() < 1e-12);
        assert!((s - 3.08618).abs() < 1e-4);
        let fi = qi();
        let s = arch_size(
            &[1, 1],
            &[
                FieldElement::one(fi),
                FieldElement::new(fi, q(1, 1), q(-1, 1)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(s, 2.0);
        let s = arch_size(&[1], &[FieldElement::one(f)]).unwrap();
        assert_eq!(s, 1.0);
    }

    #[test]
    fn product_formula() {
        // product of archimedean absolute values equals the absolute norm
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for field in [qq(), qi(), NumberField::imag_quadratic(-3).unwrap()] {
            for _ in 0..40 {
                let x = if field.is_rationals() {
                    FieldElement::from_rat(field, q(rng.gen_range(-40..40), rng.gen_range(1..9)))
                } else {
                    FieldElement::new(
                        field,
                        q(rng.gen_range(-9..9), rng.gen_range(1..4)),
                        q(rng.gen_range(-9..9), rng.gen_range(1..4)),
                    )
                    .unwrap()
                };
                if x.is_zero() {
                    continue;
                }
                let lhs = x.place_abs();
                let rhs = FractionalIdeal::principal(&x).unwrap().norm();
                assert_eq!(lhs, rhs, "product formula fails for {x}");
            }
        }
    }

    #[test]
    fn monic_root_scaling_bound() {
        // z a root of monic x^d + c_1 x^{d-1} + ... + c_d with c_i ∈ b_i
        // implies z ∈ I_{(1..d)}(b_1,...,b_d)
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let f = qq();
        for _ in 0..100 {
            let z = q(rng.gen_range(-12..12), rng.gen_range(1..5));
            let deg = rng.gen_range(1..4usize);
            // h = (x - z) * g with g monic of degree deg with integer coefficients
            let mut g: Vec<Rat> = (0..deg).map(|_| q(rng.gen_range(-9..9), 1)).collect();
            g.push(Rat::one());
            // multiply by (x - z)
            let mut h = vec![Rat::zero(); g.len() + 1];
            for (i, c) in g.iter().enumerate() {
                h[i + 1] += c;
                h[i] -= &z * c;
            }
            let d = h.len() - 1;
            // c_i is the coefficient of x^{d-i}
            let mut ideals: Vec<Option<FractionalIdeal>> = Vec::new();
            let mut weights: Vec<u32> = Vec::new();
            for i in 1..=d {
                let ci = FieldElement::from_rat(f, h[d - i].clone());
                weights.push(i as u32);
                if ci.is_zero() {
                    ideals.push(None);
                } else {
                    ideals.push(Some(FractionalIdeal::principal(&ci).unwrap()));
                }
            }
            if ideals.iter().all(|i| i.is_none()) {
                continue;
            }
            let bound = scaling_ideal_of_ideals(&weights, &ideals).unwrap();
            assert!(
                bound
                    .contains_element(&FieldElement::from_rat(f, z.clone()))
                    .unwrap(),
                "root {z} escapes the scaling ideal of its coefficients"
            );
        }
    }

    #[test]
    fn key_order_prefers_nonnegative() {
        let f = qq();
        let one = FieldElement::one(f);
        let neg = FieldElement::from_i64(f, -1);
        let zero = FieldElement::zero(f);
        assert_eq!(zero.key_cmp(&one), Ordering::Less);
        assert_eq!(one.key_cmp(&neg), Ordering::Less);
        assert_eq!(neg.key_cmp(&FieldElement::from_i64(f, 2)), Ordering::Greater);
    }

    #[test]
    fn spec_string_roundtrip() {
        let fi = qi();
        let x = FieldElement::new(fi, q(-3, 2), q(5, 7)).unwrap();
        let s = x.to_spec_string();
        assert_eq!(FieldElement::parse_in_field(fi, &s).unwrap(), x);
        let f = qq();
        let y = FieldElement::from_rat(f, q(22, 7));
        assert_eq!(
            FieldElement::parse_in_field(f, &y.to_spec_string()).unwrap(),
            y
        );
    }
}
