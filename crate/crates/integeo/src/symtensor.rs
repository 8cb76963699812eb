//! Symmetric tensors over R^n in monomial-coefficient form.
//!
//! A symmetric tensor T of rank p is stored through its restriction to the
//! diagonal: the polynomial t ↦ T(t,…,t) = Σ_{|α|=p} c_α t^α. In this
//! representation the symmetric tensor product is plain polynomial
//! multiplication and x^p is the expansion of (x·t)^p. The classical
//! component T_{i₁…i_p} for a multi-index α is recovered as c_α·α!/p!.
//!
//! Two backings are used: exact rationals (for coefficient algebra) and
//! 64-bit floats (for geometry and Monte Carlo).

use std::collections::BTreeMap;

use nalgebra::DVector;
use num::rational::BigRational;
use num::{FromPrimitive, One, ToPrimitive, Zero};
use serde_json::json;

use crate::{Error, Result};

/// Exponent vector α of length `dim` with |α| = rank.
pub type MultiIndex = Vec<u8>;

/// Coefficient ring required by the tensor algebra.
pub trait Coeff: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// A symmetric tensor of fixed dimension and rank; absent indices are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<S> {
    dim: usize,
    rank: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

/// Float-backed tensor (geometry, Monte Carlo).
pub type FloatTensor = SymTensor<f64>;
/// Exact-rational-backed tensor.
pub type ExactTensor = SymTensor<BigRational>;

impl<S: Coeff> SymTensor<S> {
    pub fn zero(dim: usize, rank: usize) -> Self {
        assert!(dim >= 1);
        Self { dim, rank, coeffs: BTreeMap::new() }
    }

    /// Rank-0 tensor with the given value.
    pub fn constant(dim: usize, value: S) -> Self {
        let mut t = Self::zero(dim, 0);
        t.add_term(vec![0; dim], value);
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Stored (nonzero) monomial coefficients, lexicographically sorted.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Monomial coefficient c_α (zero when absent).
    pub fn coeff(&self, alpha: &[u8]) -> S {
        self.coeffs.get(alpha).cloned().unwrap_or_else(S::zero)
    }

    /// Add `value` to the coefficient at α, dropping exact zeros.
    pub fn add_term(&mut self, alpha: MultiIndex, value: S) {
        debug_assert_eq!(alpha.len(), self.dim);
        debug_assert_eq!(alpha.iter().map(|&a| a as usize).sum::<usize>(), self.rank);
        if value.is_zero() {
            return;
        }
        match self.coeffs.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&value);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.rank != other.rank {
            return Err(Error::Shape(format!(
                "add: ({},{}) vs ({},{})",
                self.dim, self.rank, other.dim, other.rank
            )));
        }
        let mut out = self.clone();
        for (a, v) in other.entries() {
            out.add_term(a.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&S::one().neg()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim, self.rank);
        for (a, v) in self.entries() {
            out.add_term(a.clone(), v.mul(c));
        }
        out
    }

    /// Symmetric tensor product = polynomial product; rank adds.
    pub fn sym_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "sym_mul: dim {} vs {}",
                self.dim, other.dim
            )));
        }
        let mut out = Self::zero(self.dim, self.rank + other.rank);
        for (a, va) in self.entries() {
            for (b, vb) in other.entries() {
                let key: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(key, va.mul(vb));
            }
        }
        Ok(out)
    }

    /// e-fold symmetric power (rank multiplies).
    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(self.dim, S::one());
        for _ in 0..e {
            out = out.sym_mul(self).expect("same dim");
        }
        out
    }

    /// Classical component T_α = c_α · α!/p!.
    pub fn component(&self, alpha: &[u8]) -> S
    where
        S: MulRational,
    {
        let p: u32 = alpha.iter().map(|&a| a as u32).sum();
        let mut ratio = <BigRational as One>::one();
        for &a in alpha {
            ratio *= BigRational::from_integer(crate::exact_scalar::factorial(a as u32));
        }
        ratio /= BigRational::from_integer(crate::exact_scalar::factorial(p));
        self.coeff(alpha).mul_rational(&ratio)
    }
}

/// Scalar types that can absorb an exact rational factor.
pub trait MulRational {
    fn mul_rational(&self, r: &BigRational) -> Self;
}

impl MulRational for f64 {
    fn mul_rational(&self, r: &BigRational) -> Self {
        self * r.to_f64().expect("rational out of f64 range")
    }
}

impl MulRational for BigRational {
    fn mul_rational(&self, r: &BigRational) -> Self {
        self * r
    }
}

/// Rank-p tensor whose polynomial is (x·t)^p.
pub fn vec_pow<S: Coeff>(x: &[S], p: u32) -> SymTensor<S> {
    let dim = x.len();
    let mut lin = SymTensor::zero(dim, 1);
    for (i, xi) in x.iter().enumerate() {
        let mut alpha = vec![0u8; dim];
        alpha[i] = 1;
        lin.add_term(alpha, xi.clone());
    }
    lin.pow(p)
}

/// The metric tensor Q = Σ_i x_i² of R^dim.
pub fn q_metric<S: Coeff>(dim: usize) -> SymTensor<S> {
    let mut q = SymTensor::zero(dim, 2);
    for i in 0..dim {
        let mut alpha = vec![0u8; dim];
        alpha[i] = 2;
        q.add_term(alpha, S::one());
    }
    q
}

/// Q(E) = Σ_b (b·x)² for an orthonormal basis of a subspace E.
pub fn q_of_subspace(basis: &[DVector<f64>], dim: usize) -> Result<FloatTensor> {
    for (i, b) in basis.iter().enumerate() {
        if b.len() != dim {
            return Err(Error::Shape("basis vector of wrong dimension".into()));
        }
        if (b.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Domain("q_of_subspace: basis not normalized".into()));
        }
        for b2 in &basis[i + 1..] {
            if b.dot(b2).abs() > 1e-10 {
                return Err(Error::Domain("q_of_subspace: basis not orthogonal".into()));
            }
        }
    }
    let mut q = FloatTensor::zero(dim, 2);
    for b in basis {
        q = q.add(&vec_pow(b.as_slice(), 2))?;
    }
    Ok(q)
}

impl FloatTensor {
    /// Max-norm comparison over the full index set.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.rank == other.rank && self.max_diff(other) <= tol
    }

    /// Largest absolute coefficient difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut keys: std::collections::BTreeSet<&MultiIndex> = self.coeffs.keys().collect();
        keys.extend(other.coeffs.keys());
        keys.into_iter()
            .map(|k| (self.coeff(k) - other.coeff(k)).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// The rank-0 value; panics when rank > 0.
    pub fn scalar_value(&self) -> f64 {
        assert_eq!(self.rank, 0, "scalar_value on rank > 0 tensor");
        self.coeff(&vec![0; self.dim])
    }

    pub fn to_exact(&self) -> ExactTensor {
        let mut out = ExactTensor::zero(self.dim, self.rank);
        for (a, v) in self.entries() {
            out.add_term(a.clone(), BigRational::from_f64(*v).expect("finite float"));
        }
        out
    }

    /// JSON form {dim, rank, entries: [[α…], value]…}, entries sorted by α.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> =
            self.entries().map(|(a, v)| json!([a, v])).collect();
        json!({ "dim": self.dim, "rank": self.rank, "entries": entries })
    }
}

impl ExactTensor {
    pub fn to_float(&self) -> FloatTensor {
        let mut out = FloatTensor::zero(self.dim, self.rank);
        for (a, v) in self.entries() {
            out.add_term(a.clone(), v.to_f64().expect("rational out of f64 range"));
        }
        out
    }
}

/// All multi-indices of length `dim` with |α| = rank, lexicographic order.
pub fn multi_indices(dim: usize, rank: usize) -> Vec<MultiIndex> {
    fn rec(dim: usize, rank: usize, prefix: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if dim == 1 {
            let mut full = prefix.clone();
            full.push(rank as u8);
            out.push(full);
            return;
        }
        for a in 0..=rank {
            prefix.push(a as u8);
            rec(dim - 1, rank - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, rank, &mut Vec::new(), &mut out);
    out
}
