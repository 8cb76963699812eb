//! Exact arithmetic over the ring Q·π^(m/2): rationals times half-integer
//! powers of π.
//!
//! Every constant appearing in the Crofton coefficient families — Gamma
//! values at half-integers, sphere surface areas ω_m, ball volumes κ_m,
//! binomials — lives in this ring, so coefficient identities can be tested
//! with exact equality. Half-integer arguments are always passed as doubled
//! integers (`two_a`), and Gamma ratios across poles are evaluated as
//! rising/falling factorial products so that no pole is ever hit.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// An exact value `coeff · π^(pi_half_exponent/2)`.
///
/// Canonical form: `coeff` in lowest terms (maintained by `BigRational`);
/// the zero value carries exponent 0. Addition is defined only between
/// values of equal exponent; mixed sums live in [`ExactPolyPi`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScalar {
    coeff: BigRational,
    pi_half_exponent: i64,
}

impl ExactScalar {
    pub fn new(coeff: BigRational, pi_half_exponent: i64) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Self { coeff, pi_half_exponent }
        }
    }

    pub fn zero() -> Self {
        Self { coeff: BigRational::zero(), pi_half_exponent: 0 }
    }

    pub fn one() -> Self {
        Self { coeff: BigRational::one(), pi_half_exponent: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(v)), 0)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(BigRational::from_integer(v), 0)
    }

    /// π^(m/2).
    pub fn pi_half_pow(m: i64) -> Self {
        Self { coeff: BigRational::one(), pi_half_exponent: m }
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn pi_half_exponent(&self) -> i64 {
        self.pi_half_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.coeff.clone(), self.pi_half_exponent)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.coeff * &other.coeff, self.pi_half_exponent + other.pi_half_exponent)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero ExactScalar");
        Self::new(&self.coeff / &other.coeff, self.pi_half_exponent - other.pi_half_exponent)
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        Self::new(&self.coeff * r, self.pi_half_exponent)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Addition; defined only for equal π-exponents (or when a side is zero).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_half_exponent != other.pi_half_exponent {
            return Err(Error::Shape(format!(
                "cannot add pi^({}/2) to pi^({}/2); use ExactPolyPi",
                self.pi_half_exponent, other.pi_half_exponent
            )));
        }
        Ok(Self::new(&self.coeff + &other.coeff, self.pi_half_exponent))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.coeff.to_f64().expect("rational out of f64 range");
        q * std::f64::consts::PI.powf(self.pi_half_exponent as f64 / 2.0)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.coeff.denom().is_one() {
            format!("{}", self.coeff.numer())
        } else {
            format!("{}/{}", self.coeff.numer(), self.coeff.denom())
        };
        if self.pi_half_exponent == 0 || self.is_zero() {
            write!(f, "{q}")
        } else {
            write!(f, "{q} * pi^({}/2)", self.pi_half_exponent)
        }
    }
}

/// A finite sum of [`ExactScalar`]s with distinct π-exponents.
///
/// Zero coefficients are never stored, so structural equality is term-wise
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactPolyPi {
    terms: BTreeMap<i64, BigRational>,
}

impl ExactPolyPi {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_scalar(s: &ExactScalar) -> Self {
        let mut out = Self::zero();
        out.add_scalar(s);
        out
    }

    pub fn add_scalar(&mut self, s: &ExactScalar) {
        if s.is_zero() {
            return;
        }
        let entry = self.terms.entry(s.pi_half_exponent).or_insert_with(BigRational::zero);
        *entry += s.coeff();
        if entry.is_zero() {
            self.terms.remove(&s.pi_half_exponent);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_scalar(&ExactScalar::new(c.clone(), *m));
        }
        out
    }

    pub fn mul_scalar(&self, s: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_scalar(&ExactScalar::new(c * s.coeff(), m + s.pi_half_exponent()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// If the sum has at most one term, return it as a scalar.
    pub fn as_single(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                Some(ExactScalar::new(c.clone(), *m))
            }
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| ExactScalar::new(c.clone(), *m).to_f64())
            .sum()
    }
}

/// n! as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=n as u64 {
        out *= i;
    }
    out
}

/// Binomial coefficient C(n, k); zero outside 0 ≤ k ≤ n.
pub fn binom(n: i64, k: i64) -> BigInt {
    debug_assert!(n >= 0, "binomial with negative upper index");
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Γ(a) for a = two_a/2 > 0.
///
/// Integer a gives (a−1)! with π-exponent 0; half-integer a = m + 1/2 gives
/// (2m)!/(4^m·m!) times √π.
pub fn gamma_half(two_a: i64) -> Result<ExactScalar> {
    if two_a <= 0 {
        return Err(Error::Domain(format!(
            "gamma_half requires a > 0, got a = {}/2 (poles are out of scope; use rising_factorial for ratios)",
            two_a
        )));
    }
    if two_a % 2 == 0 {
        let a = (two_a / 2) as u32;
        Ok(ExactScalar::from_bigint(factorial(a - 1)))
    } else {
        // a = m + 1/2, Γ(a) = (2m)! / (4^m m!) · √π
        let m = ((two_a - 1) / 2) as u32;
        let num = factorial(2 * m);
        let den = BigInt::from(4u32).pow(m) * factorial(m);
        Ok(ExactScalar::new(BigRational::new(num, den), 1))
    }
}

/// Γ(a) for a = two_a/2 at any non-pole argument; `None` at the poles
/// (non-positive integers).
///
/// Negative half-integers use Γ(1/2 − m) = (−4)^m m!/(2m)! · √π.
pub fn gamma_half_any(two_a: i64) -> Option<ExactScalar> {
    if two_a > 0 {
        return Some(gamma_half(two_a).expect("positive argument"));
    }
    if two_a % 2 == 0 {
        return None;
    }
    let m = ((1 - two_a) / 2) as u32;
    let num = BigInt::from(-4).pow(m) * factorial(m);
    Some(ExactScalar::new(BigRational::new(num, factorial(2 * m)), 1))
}

/// 1/Γ(a) with the convention Γ(pole)⁻¹ := 0.
pub fn inv_gamma_half(two_a: i64) -> ExactScalar {
    match gamma_half_any(two_a) {
        Some(g) => ExactScalar::one().div(&g),
        None => ExactScalar::zero(),
    }
}

/// Rising factorial ∏_{i=0}^{q−1} (a + i) for a = two_a/2 (any sign).
///
/// This is Γ(a+q)/Γ(a) whenever the ratio is pole-free, and the correct
/// finite product otherwise; q = 0 gives 1.
pub fn rising_factorial(two_a: i64, q: u32) -> ExactScalar {
    let mut out = BigRational::one();
    for i in 0..q as i64 {
        out *= BigRational::new(BigInt::from(two_a + 2 * i), BigInt::from(2));
    }
    ExactScalar::new(out, 0)
}

/// Surface area ω_m = 2π^(m/2)/Γ(m/2) of the unit sphere S^(m−1).
pub fn omega(m: u32) -> ExactScalar {
    assert!(m >= 1, "omega requires m >= 1");
    ExactScalar::from_int(2)
        .mul(&ExactScalar::pi_half_pow(m as i64))
        .div(&gamma_half(m as i64).expect("m >= 1"))
}

/// Volume κ_m = π^(m/2)/Γ(m/2+1) of the unit m-ball; κ_0 = 1.
pub fn kappa_ball(m: u32) -> ExactScalar {
    ExactScalar::pi_half_pow(m as i64).div(&gamma_half(m as i64 + 2).expect("m + 2 > 0"))
}

/// Alternating Gamma-ratio sum: both sides of
/// Σ_{y=0}^q (−1)^y C(q,y) Γ(a+y)/Γ(b+y) = Γ(a)/Γ(b+q) · (b−a)⋯(b−a+q−1).
///
/// Returns `(lhs, rhs)`, each exact; the rhs handles the pole case
/// a − b − q ∈ ℕ₀ through the rising-factorial product.
pub fn lemma61(q: u32, two_a: i64, two_b: i64) -> Result<(ExactScalar, ExactScalar)> {
    if two_a <= 0 || two_b <= 0 {
        return Err(Error::Domain("lemma61 requires a, b > 0".into()));
    }
    let mut lhs = ExactScalar::zero();
    for y in 0..=q {
        let term = ExactScalar::from_bigint(binom(q as i64, y as i64))
            .mul(&gamma_half(two_a + 2 * y as i64)?)
            .div(&gamma_half(two_b + 2 * y as i64)?);
        let term = if y % 2 == 0 { term } else { term.neg() };
        lhs = lhs.add(&term)?;
    }
    let rhs = gamma_half(two_a)?
        .div(&gamma_half(two_b + 2 * q as i64)?)
        .mul(&rising_factorial(two_b - two_a, q));
    Ok((lhs, rhs))
}

/// Alternating inverse-Gamma sum: both sides of
/// Σ_{q=0}^a (−1)^q/(Γ(a−q+1/2) q!) = (−1)^a/(√π (1−2a) a!).
pub fn lemma62(a: u32) -> (ExactScalar, ExactScalar) {
    let mut lhs = ExactScalar::zero();
    for q in 0..=a {
        let g = gamma_half(2 * (a - q) as i64 + 1).expect("argument >= 1/2");
        let term = ExactScalar::one()
            .div(&g)
            .div(&ExactScalar::from_bigint(factorial(q)));
        let term = if q % 2 == 0 { term } else { term.neg() };
        lhs = lhs.add(&term).expect("constant exponent -1");
    }
    let sign = if a % 2 == 0 { 1 } else { -1 };
    let rhs = ExactScalar::new(
        BigRational::new(BigInt::from(sign), BigInt::from(1 - 2 * a as i64)) / factorial(a),
        -1,
    );
    (lhs, rhs)
}

/// Alternating four-Gamma sum: both sides of
/// Σ_{j=0}^z (−1)^j C(z,j) Γ(a−j)Γ(b+z−j)/(Γ(c−j)Γ(a+b−c+1−j))
///   = (−1)^z Γ(a−z)Γ(b)/(Γ(a+b−c+1)Γ(c)) · Γ(a−c+1)/Γ(a−c+1−z) · Γ(c−b)/Γ(c−b−z),
/// with the last two ratios as falling products (pole-safe) and the
/// convention Γ(pole)⁻¹ = 0 for denominator Gammas.
pub fn lemma63(two_a: i64, two_b: i64, two_c: i64, z: u32) -> Result<(ExactScalar, ExactScalar)> {
    let zi = z as i64;
    if two_a <= 2 * zi || two_b <= 0 {
        return Err(Error::Domain("lemma63 requires a > z and b > 0".into()));
    }
    let mut lhs = ExactScalar::zero();
    for j in 0..=zi {
        let term = ExactScalar::from_bigint(binom(zi, j))
            .mul(&gamma_half(two_a - 2 * j)?)
            .mul(&gamma_half(two_b + 2 * zi - 2 * j)?)
            .mul(&inv_gamma_half(two_c - 2 * j))
            .mul(&inv_gamma_half(two_a + two_b - two_c + 2 - 2 * j));
        let term = if j % 2 == 0 { term } else { term.neg() };
        lhs = lhs.add(&term)?;
    }
    let sign = if z % 2 == 0 { ExactScalar::one() } else { ExactScalar::one().neg() };
    // Γ(a−c+1)/Γ(a−c+1−z) = (a−c+1−z)⋯(a−c)  and  Γ(c−b)/Γ(c−b−z) = (c−b−z)⋯(c−b−1).
    let rhs = sign
        .mul(&gamma_half(two_a - 2 * zi)?)
        .mul(&gamma_half(two_b)?)
        .mul(&inv_gamma_half(two_a + two_b - two_c + 2))
        .mul(&inv_gamma_half(two_c))
        .mul(&rising_factorial(two_a - two_c + 2 - 2 * zi, z))
        .mul(&rising_factorial(two_c - two_b - 2 * zi, z));
    Ok((lhs, rhs))
}

/// Alternating weighted Gamma-ratio sum: both sides of
/// Σ_{j=0}^t (−1)^j/(b+j) C(t,j) Γ(a+t+j)/Γ(a+1+j)
///   = Γ(a−b+t)Γ(b)Γ(t+1)/(Γ(a−b+1)Γ(b+t+1)),
/// with Γ(a−b+t)/Γ(a−b+1) as a rising product (b − a − t ∈ ℕ₀ safe).
pub fn lemma64(two_a: i64, two_b: i64, t: u32) -> Result<(ExactScalar, ExactScalar)> {
    if two_a <= 0 || two_b <= 0 || t < 1 {
        return Err(Error::Domain("lemma64 requires a, b > 0 and t >= 1".into()));
    }
    let mut lhs = ExactScalar::zero();
    for j in 0..=t as i64 {
        // Γ(a+t+j)/Γ(a+1+j) = (a+1+j)⋯(a+t+j−1), a rising product of length t−1.
        let ratio = rising_factorial(two_a + 2 + 2 * j, t - 1);
        let b_plus_j = BigRational::new(BigInt::from(two_b + 2 * j), BigInt::from(2));
        let term = ExactScalar::from_bigint(binom(t as i64, j))
            .mul(&ratio)
            .mul_rational(&b_plus_j.recip());
        let term = if j % 2 == 0 { term } else { term.neg() };
        lhs = lhs.add(&term)?;
    }
    let rhs = rising_factorial(two_a - two_b + 2, t - 1)
        .mul(&ExactScalar::from_bigint(factorial(t)))
        .div(&rising_factorial(two_b, t + 1));
    Ok((lhs, rhs))
}
