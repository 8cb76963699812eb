//! Exact Crofton coefficient families.
//!
//! Each formula expresses an integral of an intrinsic (or extrinsic)
//! tensorial curvature measure of slices `K ∩ E` over the affine
//! Grassmannian `A(n,k)` as a finite combination
//!
//! ```text
//! ∫ Q(E)^i φ̃_j^{r,s,0}(K∩E, β∩E) μ_k(dE) = Σ_z  c_z · Q^{q_z} φ_{o_z}^{r,s_z,ε_z}(K, β)
//! ```
//!
//! with coefficients `c_z` in the exact ring Q·π^(m/2). This module builds
//! the coefficient tables for every family, serializes them (CSV/JSON), and
//! assembles right-hand-side tensors for a concrete polytope.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::exact_scalar::{binom, factorial, gamma_half, omega, rising_factorial, ExactScalar};
use crate::polytope::{Halfspace, Polytope};
use crate::symtensor::{q_metric, FloatTensor};
use crate::tencm::{phi, psi_from_phi, Kind, MeasureSpec};
use crate::{Error, Result};

/// The supported Crofton formula families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormulaId {
    /// j = k: the slice-order measure integrates to the volume measure.
    ThmJEqK,
    /// Local formula for j < k < n, k > 1 (mixes plain and generalized measures).
    ThmLocalGeneral,
    /// Local formula for k = 1 (j = 0).
    ThmK1Local,
    /// Translation-invariant global formula for j < k < n, k > 1.
    ThmGlobal,
    /// Global formula without metric-tensor weight (i = 0).
    CorI0,
    /// Local formula for j = k − 1 without weight (i = 0).
    CorJKm1,
    /// Global formula for k = 1 (zero for odd s).
    CorK1Global,
    /// Extrinsic local formula for j = k − 1, k > 1.
    ThmExtJKm1,
    /// Extrinsic local formula for k = 1.
    ThmExtK1,
    /// Extrinsic formula in the Ψ-basis (single term).
    CorPsi,
    /// Weighted local formula for j = k − 1, general i, plain measures only.
    EqJKm1Weighted,
}

pub const ALL_FORMULAS: [FormulaId; 11] = [
    FormulaId::ThmJEqK,
    FormulaId::ThmLocalGeneral,
    FormulaId::ThmK1Local,
    FormulaId::ThmGlobal,
    FormulaId::CorI0,
    FormulaId::CorJKm1,
    FormulaId::CorK1Global,
    FormulaId::ThmExtJKm1,
    FormulaId::ThmExtK1,
    FormulaId::CorPsi,
    FormulaId::EqJKm1Weighted,
];

impl FormulaId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::ThmJEqK => "thm_j_eq_k",
            FormulaId::ThmLocalGeneral => "thm_local_general",
            FormulaId::ThmK1Local => "thm_k1_local",
            FormulaId::ThmGlobal => "thm_global",
            FormulaId::CorI0 => "cor_i0",
            FormulaId::CorJKm1 => "cor_j_km1",
            FormulaId::CorK1Global => "cor_k1_global",
            FormulaId::ThmExtJKm1 => "thm_ext_jkm1",
            FormulaId::ThmExtK1 => "thm_ext_k1",
            FormulaId::CorPsi => "cor_psi",
            FormulaId::EqJKm1Weighted => "eq_jkm1_weighted",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ALL_FORMULAS
            .iter()
            .find(|f| f.as_str() == s)
            .copied()
            .ok_or_else(|| Error::InvalidParams(format!("unknown formula id '{s}'")))
    }

    /// Whether both sides of the formula are stated in the Ψ-basis.
    pub fn uses_psi_basis(&self) -> bool {
        matches!(self, FormulaId::CorPsi)
    }

    /// Whether the formula integrates extrinsic measures of the slice
    /// (tensor components taken in ambient coordinates) rather than
    /// intrinsic ones.
    pub fn lhs_is_extrinsic(&self) -> bool {
        matches!(self, FormulaId::ThmExtJKm1 | FormulaId::ThmExtK1 | FormulaId::CorPsi)
    }

    /// Whether the left-hand side is a global (translation invariant)
    /// functional, i.e. β = R^n and r = 0 are forced.
    pub fn is_global(&self) -> bool {
        matches!(self, FormulaId::ThmGlobal | FormulaId::CorI0 | FormulaId::CorK1Global)
    }
}

impl std::fmt::Display for FormulaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters selecting a concrete instance of a formula. Fields not used
/// by a family (e.g. `j` for k = 1 formulas) are normalized by
/// [`coefficient_table`].
#[derive(Clone, Copy, Debug)]
pub struct FormulaParams {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub r: u32,
    pub s: u32,
    pub i: u32,
}

impl Default for FormulaParams {
    fn default() -> Self {
        Self { n: 3, k: 1, j: 0, r: 0, s: 0, i: 0 }
    }
}

/// The measure appearing on the right-hand side of a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    /// Order of the target measure.
    pub order: usize,
    /// Tensor exponent s of the target measure.
    pub s_exp: u32,
    /// 0 for plain measures, 1 for generalized ones.
    pub eps: u8,
}

/// One summand `coeff · Q^{q_power} φ_{target}` of a right-hand side.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub z: u32,
    pub q_power: u32,
    pub target: TargetSpec,
    pub coeff: ExactScalar,
}

/// A fully evaluated coefficient table for one formula instance.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub formula: FormulaId,
    pub params: FormulaParams,
    pub entries: Vec<TableEntry>,
}

pub const CSV_HEADER: &str =
    "formula,n,k,j,s,i,z,target_order,target_s,eps,q_power,coeff_rational,pi_half_exponent";

impl CoefficientTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let rat = format!("{}/{}", e.coeff.coeff().numer(), e.coeff.coeff().denom());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                self.formula,
                self.params.n,
                self.params.k,
                self.params.j,
                self.params.s,
                self.params.i,
                e.z,
                e.target.order,
                e.target.s_exp,
                e.target.eps,
                e.q_power,
                rat,
                e.coeff.pi_half_exponent(),
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "formula": self.formula.as_str(),
            "params": {
                "n": self.params.n, "k": self.params.k, "j": self.params.j,
                "r": self.params.r, "s": self.params.s, "i": self.params.i,
            },
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "z": e.z,
                "q_power": e.q_power,
                "target": {
                    "order": e.target.order,
                    "s": e.target.s_exp,
                    "eps": e.target.eps,
                },
                "coeff": {
                    "display": e.coeff.to_string(),
                    "rational": format!("{}/{}", e.coeff.coeff().numer(), e.coeff.coeff().denom()),
                    "pi_half_exponent": e.coeff.pi_half_exponent(),
                    "float": e.coeff.to_f64(),
                },
            })).collect::<Vec<_>>(),
        })
    }

    /// Look up the coefficient of `Q^{q_power} φ_{order}^{·,s_exp,eps}`.
    pub fn coeff_of(&self, q_power: u32, order: usize, s_exp: u32, eps: u8) -> ExactScalar {
        self.entries
            .iter()
            .find(|e| {
                e.q_power == q_power
                    && e.target.order == order
                    && e.target.s_exp == s_exp
                    && e.target.eps == eps
            })
            .map(|e| e.coeff.clone())
            .unwrap_or_else(ExactScalar::zero)
    }
}

fn g(two_a: i64) -> ExactScalar {
    gamma_half(two_a).expect("gamma argument must be positive here")
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn sum_scalars(terms: impl IntoIterator<Item = ExactScalar>) -> ExactScalar {
    terms
        .into_iter()
        .fold(ExactScalar::zero(), |acc, t| {
            acc.add(&t).expect("coefficient sum is homogeneous in pi")
        })
}

/// Common prefactor γ of the local/global mixed-measure formulas:
/// C(n−k+j−1, j) · Γ((n−k+1)/2) / (2π).
fn gamma_prefactor(n: i64, k: i64, j: i64) -> ExactScalar {
    ExactScalar::from_bigint(binom(n - k + j - 1, j))
        .mul(&g(n - k + 1))
        .div(&ExactScalar::new(rat(2, 1), 2))
}

/// Inner double sum λ^(ε) of the mixed-measure formulas, with the ε-specific
/// polynomial factor ϑ(p,q) supplied by the caller.
fn lambda_sum(
    n: i64,
    k: i64,
    j: i64,
    s: i64,
    i: i64,
    z: i64,
    eps: i64,
    theta: impl Fn(i64, i64) -> BigRational,
) -> ExactScalar {
    let mut terms = Vec::new();
    for p in 0..=i {
        let q_lo = (z - p + eps).max(0);
        let q_hi = s / 2 + i - p;
        for q in q_lo..=q_hi {
            let th = theta(p, q);
            if th.is_zero() {
                continue;
            }
            let sign = if (p + q - z).rem_euclid(2) == 0 { 1 } else { -1 };
            let comb = binom(i, p) * binom(s + 2 * i - 2 * p, 2 * q) * binom(p + q - eps, z);
            if comb.is_zero() {
                continue;
            }
            let t = ExactScalar::from_int(sign)
                .mul(&ExactScalar::from_bigint(comb))
                .mul(&g(2 * q + 1))
                .mul(&g(j + s + 2 * i - 2 * p - 2 * q + 2))
                .div(&g(n - k + j + s + 2 * i - 2 * p + 2))
                .mul(&g(k - 1 + 2 * p))
                .mul(&g(n - k + 2 * q))
                .div(&g(n + 1 + 2 * p + 2 * q))
                .mul_rational(&th);
            terms.push(t);
        }
    }
    sum_scalars(terms)
}

/// j = k: ∫ Q(E)^i φ̃_k^{r,0,0}(K∩E, β∩E) μ_k(dE) = c · Q^i φ_n^{r,0,0}(K, β),
/// with c = Γ(n/2)Γ(k/2+i) / (Γ(n/2+i)Γ(k/2)); zero integral for s ≠ 0.
pub fn coeff_thm_j_eq_k(n: usize, k: usize, i: u32, s: u32) -> Result<CoefficientTable> {
    if k >= n {
        return Err(Error::InvalidParams("requires k < n".into()));
    }
    let params = FormulaParams { n, k, j: k, r: 0, s, i };
    let mut entries = Vec::new();
    if s == 0 {
        // The Γ-ratio reduces to a ratio of rising factorials, which also
        // covers k = 0 (value 0 for i ≠ 0, and 1 for i = 0).
        let coeff =
            rising_factorial(k as i64, i).div(&rising_factorial(n as i64, i));
        entries.push(TableEntry {
            z: 0,
            q_power: i,
            target: TargetSpec { order: n, s_exp: 0, eps: 0 },
            coeff,
        });
    }
    Ok(CoefficientTable { formula: FormulaId::ThmJEqK, params, entries })
}

/// Local formula for j < k < n, k > 1: γ Σ_z Q^z (λ^(0)_z φ^{r,s+2i−2z,0}_{n−k+j}
/// + λ^(1)_z φ^{r,s+2i−2z−2,1}_{n−k+j}).
pub fn coeff_local_general(n: usize, k: usize, j: usize, s: u32, i: u32) -> Result<CoefficientTable> {
    if !(j < k && k < n && k > 1) {
        return Err(Error::InvalidParams("requires j < k < n and k > 1".into()));
    }
    let (ni, ki, ji, si, ii) = (n as i64, k as i64, j as i64, s as i64, i as i64);
    let gamma = gamma_prefactor(ni, ki, ji);
    let params = FormulaParams { n, k, j, r: 0, s, i };
    let mut entries = Vec::new();
    for z in 0..=(s / 2 + i) as i64 {
        let theta0 = |p: i64, _q: i64| rat((ni - ki + ji) * (ki - 1 + 2 * p), 2);
        let lam0 = lambda_sum(ni, ki, ji, si, ii, z, 0, theta0);
        entries.push(TableEntry {
            z: z as u32,
            q_power: z as u32,
            target: TargetSpec { order: n - k + j, s_exp: (si + 2 * ii - 2 * z) as u32, eps: 0 },
            coeff: gamma.mul(&lam0),
        });
        if si + 2 * ii - 2 * z - 2 >= 0 {
            let theta1 = |p: i64, q: i64| rat(p * (ni - ki) - q * (ki - 1), 1);
            let lam1 = lambda_sum(ni, ki, ji, si, ii, z, 1, theta1);
            entries.push(TableEntry {
                z: z as u32,
                q_power: z as u32,
                target: TargetSpec {
                    order: n - k + j,
                    s_exp: (si + 2 * ii - 2 * z - 2) as u32,
                    eps: 1,
                },
                coeff: gamma.mul(&lam1),
            });
        }
    }
    Ok(CoefficientTable { formula: FormulaId::ThmLocalGeneral, params, entries })
}

/// Local formula for k = 1 (so j = 0): for even s,
/// c Σ_z (−1)^z C(s/2+i, z) (1−2z)^{-1} Q^{s/2+i−z} φ^{r,2z,0}_{n−1} with
/// c = Γ(n/2)Γ((s+1)/2+i) / (π Γ((n+s+1)/2+i)); for odd s a single term.
pub fn coeff_k1_local(n: usize, s: u32, i: u32) -> Result<CoefficientTable> {
    if n < 2 {
        return Err(Error::InvalidParams("requires n >= 2".into()));
    }
    let (ni, si, ii) = (n as i64, s as i64, i as i64);
    let params = FormulaParams { n, k: 1, j: 0, r: 0, s, i };
    let mut entries = Vec::new();
    if s % 2 == 0 {
        let pref = g(ni)
            .mul(&g(si + 1 + 2 * ii))
            .div(&g(ni + si + 1 + 2 * ii))
            .mul(&ExactScalar::pi_half_pow(-2));
        for z in 0..=(si / 2 + ii) {
            let sign = if z % 2 == 0 { 1 } else { -1 };
            let coeff = pref
                .mul(&ExactScalar::from_bigint(binom(si / 2 + ii, z)))
                .mul_rational(&rat(sign, 1 - 2 * z));
            entries.push(TableEntry {
                z: z as u32,
                q_power: (si / 2 + ii - z) as u32,
                target: TargetSpec { order: n - 1, s_exp: 2 * z as u32, eps: 0 },
                coeff,
            });
        }
    } else {
        let coeff = g(ni)
            .mul(&g(si + 2 * ii + 2))
            .div(&g(ni + si + 1 + 2 * ii))
            .mul(&ExactScalar::pi_half_pow(-1));
        entries.push(TableEntry {
            z: 0,
            q_power: ((si - 1) / 2 + ii) as u32,
            target: TargetSpec { order: n - 1, s_exp: 1, eps: 0 },
            coeff,
        });
    }
    Ok(CoefficientTable { formula: FormulaId::ThmK1Local, params, entries })
}

/// Global formula for j < k < n, k > 1: plain measures only, via the merged
/// coefficient with the modified ϑ factor.
pub fn coeff_global(n: usize, k: usize, j: usize, s: u32, i: u32) -> Result<CoefficientTable> {
    if !(j < k && k < n && k > 1) {
        return Err(Error::InvalidParams("requires j < k < n and k > 1".into()));
    }
    let (ni, ki, ji, si, ii) = (n as i64, k as i64, j as i64, s as i64, i as i64);
    let gamma = gamma_prefactor(ni, ki, ji);
    let params = FormulaParams { n, k, j, r: 0, s, i };
    let mut entries = Vec::new();
    for z in 0..=(si / 2 + ii) {
        // For odd s the top coefficient multiplies the vanishing tensor
        // Φ^{0,1} and is defined as zero.
        let coeff = if si % 2 == 1 && z == si / 2 + ii {
            ExactScalar::zero()
        } else {
            let theta = |p: i64, q: i64| {
                let a = rat((ni - ki + ji) * (ki - 1 + 2 * p), 2);
                let b = rat(p * (ni - ki) - q * (ki - 1), 1);
                // z/(p+q) is interpreted as 1 when p = q = 0 (then z = 0 too).
                let one_minus = if p + q == 0 {
                    BigRational::zero()
                } else {
                    BigRational::one() - rat(z, p + q)
                };
                let corr =
                    BigRational::one() + rat(ki - ji - 1, si + 2 * ii - 2 * z - 1) * one_minus;
                a - b * corr
            };
            gamma.mul(&lambda_sum(ni, ki, ji, si, ii, z, 0, theta))
        };
        entries.push(TableEntry {
            z: z as u32,
            q_power: z as u32,
            target: TargetSpec { order: n - k + j, s_exp: (si + 2 * ii - 2 * z) as u32, eps: 0 },
            coeff,
        });
    }
    Ok(CoefficientTable { formula: FormulaId::ThmGlobal, params, entries })
}

/// Prefactor δ of the unweighted global and the j = k − 1 local formulas:
/// C(n−k+j−1, j) Γ((n−k+1)/2) Γ((k+1)/2) / (π Γ((n−k+j+s)/2 + 1)).
fn delta_prefactor(n: i64, k: i64, j: i64, s: i64) -> ExactScalar {
    ExactScalar::from_bigint(binom(n - k + j - 1, j))
        .mul(&g(n - k + 1))
        .mul(&g(k + 1))
        .div(&g(n - k + j + s + 2))
        .mul(&ExactScalar::pi_half_pow(-2))
}

/// Unweighted (i = 0) global formula for j < k < n:
/// δ Σ_z η_z Q^z Φ^{0,s−2z}_{n−k+j}.
pub fn coeff_i0(n: usize, k: usize, j: usize, s: u32) -> Result<CoefficientTable> {
    if !(j < k && k < n) {
        return Err(Error::InvalidParams("requires j < k < n".into()));
    }
    let (ni, ki, ji, si) = (n as i64, k as i64, j as i64, s as i64);
    let delta = delta_prefactor(ni, ki, ji, si);
    let params = FormulaParams { n, k, j, r: 0, s, i: 0 };
    let mut entries = Vec::new();
    for z in 0..=si / 2 {
        let coeff = if si % 2 == 1 && z == si / 2 {
            ExactScalar::zero()
        } else {
            let eta = sum_scalars((z..=si / 2).map(|q| {
                let sign = if (q - z) % 2 == 0 { 1 } else { -1 };
                let factor = rat(ni - ki + ji, 2)
                    + BigRational::from_integer(BigInt::from(q))
                    + rat((ki - ji - 1) * (q - z), si - 2 * z - 1);
                ExactScalar::from_int(sign)
                    .mul(&ExactScalar::from_bigint(binom(si, 2 * q) * binom(q, z)))
                    .mul(&g(2 * q + 1))
                    .mul(&g(ji + si - 2 * q + 2))
                    .mul(&g(ni - ki + 2 * q))
                    .div(&g(ni + 1 + 2 * q))
                    .mul_rational(&factor)
            }));
            delta.mul(&eta)
        };
        entries.push(TableEntry {
            z: z as u32,
            q_power: z as u32,
            target: TargetSpec { order: n - k + j, s_exp: (si - 2 * z) as u32, eps: 0 },
            coeff,
        });
    }
    Ok(CoefficientTable { formula: FormulaId::CorI0, params, entries })
}

/// Local formula for j = k − 1, i = 0: δ Σ_z ξ_z Q^z φ^{r,s−2z,0}_{n−1}.
///
/// Stated for 1 < k < n; the evaluation is also defined for k = 1, where it
/// formally agrees with the k = 1 local formula (used as a cross-check).
pub fn coeff_j_km1(n: usize, k: usize, s: u32) -> Result<CoefficientTable> {
    if !(k >= 1 && k < n) {
        return Err(Error::InvalidParams("requires 1 <= k < n".into()));
    }
    let (ni, ki, si) = (n as i64, k as i64, s as i64);
    let delta = delta_prefactor(ni, ki, ki - 1, si);
    let params = FormulaParams { n, k, j: k - 1, r: 0, s, i: 0 };
    let mut entries = Vec::new();
    for z in 0..=si / 2 {
        let xi = sum_scalars((z..=si / 2).map(|q| {
            let sign = if (q - z) % 2 == 0 { 1 } else { -1 };
            ExactScalar::from_int(sign)
                .mul(&ExactScalar::from_bigint(binom(si, 2 * q) * binom(q, z)))
                .mul(&g(2 * q + 1))
                .mul(&g(ki + si + 1 - 2 * q))
                .mul(&g(ni - ki + 2 * q))
                .div(&g(ni - 1 + 2 * q))
        }));
        entries.push(TableEntry {
            z: z as u32,
            q_power: z as u32,
            target: TargetSpec { order: n - 1, s_exp: (si - 2 * z) as u32, eps: 0 },
            coeff: delta.mul(&xi),
        });
    }
    Ok(CoefficientTable { formula: FormulaId::CorJKm1, params, entries })
}

/// Weighted local formula for j = k − 1 and general i, using plain measures
/// only: γ Σ_z λ_z Q^z φ^{r,s+2i−2z,0}_{n−1}, with
/// λ_z = (k−1) Σ_p Σ_q (−1)^{p+q−z} C(i,p) C(s+2i−2p,2q) C(p+q,z) Γ(q+1/2)
///       Γ((k+s+1)/2+i−p−q)/Γ((n+s+1)/2+i−p) · Γ((k−1)/2+p)Γ((n−k)/2+q)/Γ((n−1)/2+p+q).
pub fn eq_jkm1_weighted(n: usize, k: usize, s: u32, i: u32) -> Result<CoefficientTable> {
    if !(k > 1 && k < n) {
        return Err(Error::InvalidParams("requires 1 < k < n".into()));
    }
    let (ni, ki, si, ii) = (n as i64, k as i64, s as i64, i as i64);
    let gamma = gamma_prefactor(ni, ki, ki - 1);
    let params = FormulaParams { n, k, j: k - 1, r: 0, s, i };
    let mut entries = Vec::new();
    for z in 0..=(si / 2 + ii) {
        let mut terms = Vec::new();
        for p in 0..=ii {
            for q in (z - p).max(0)..=(si / 2 + ii - p) {
                let comb = binom(ii, p) * binom(si + 2 * ii - 2 * p, 2 * q) * binom(p + q, z);
                if comb.is_zero() {
                    continue;
                }
                let sign = if (p + q - z).rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push(
                    ExactScalar::from_int(sign * (ki - 1))
                        .mul(&ExactScalar::from_bigint(comb))
                        .mul(&g(2 * q + 1))
                        .mul(&g(ki + si + 1 + 2 * ii - 2 * p - 2 * q))
                        .div(&g(ni + si + 1 + 2 * ii - 2 * p))
                        .mul(&g(ki - 1 + 2 * p))
                        .mul(&g(ni - ki + 2 * q))
                        .div(&g(ni - 1 + 2 * p + 2 * q)),
                );
            }
        }
        entries.push(TableEntry {
            z: z as u32,
            q_power: z as u32,
            target: TargetSpec { order: n - 1, s_exp: (si + 2 * ii - 2 * z) as u32, eps: 0 },
            coeff: gamma.mul(&sum_scalars(terms)),
        });
    }
    Ok(CoefficientTable { formula: FormulaId::EqJKm1Weighted, params, entries })
}

/// Global formula for k = 1: for even s,
/// 2ω_{n+s+1}/(π ω_{s+1} ω_n) Σ_z (−1)^z (1−2z)^{-1} C(s/2,z) Q^{s/2−z} Φ^{0,2z}_{n−1};
/// the integral vanishes for odd s (empty table).
pub fn coeff_k1_global(n: usize, s: u32) -> Result<CoefficientTable> {
    if n < 2 {
        return Err(Error::InvalidParams("requires n >= 2".into()));
    }
    let si = s as i64;
    let params = FormulaParams { n, k: 1, j: 0, r: 0, s, i: 0 };
    let mut entries = Vec::new();
    if s % 2 == 0 {
        let pref = omega(n as u32 + s + 1)
            .mul(&ExactScalar::from_int(2))
            .div(&omega(s + 1))
            .div(&omega(n as u32))
            .mul(&ExactScalar::pi_half_pow(-2));
        for z in 0..=si / 2 {
            let sign = if z % 2 == 0 { 1 } else { -1 };
            let coeff = pref
                .mul(&ExactScalar::from_bigint(binom(si / 2, z)))
                .mul_rational(&rat(sign, 1 - 2 * z));
            entries.push(TableEntry {
                z: z as u32,
                q_power: (si / 2 - z) as u32,
                target: TargetSpec { order: n - 1, s_exp: 2 * z as u32, eps: 0 },
                coeff,
            });
        }
    }
    Ok(CoefficientTable { formula: FormulaId::CorK1Global, params, entries })
}

/// Extrinsic local formula for j = k − 1, k > 1:
/// Σ_z κ_z Q^z φ^{r,s−2z,0}_{n−1}, with a separately defined coefficient at
/// z = (s−1)/2 when s is odd.
pub fn coeff_extrinsic(n: usize, k: usize, s: u32) -> Result<CoefficientTable> {
    if !(k > 1 && k < n) {
        return Err(Error::InvalidParams("requires 1 < k < n".into()));
    }
    let (ni, ki, si) = (n as i64, k as i64, s as i64);
    let params = FormulaParams { n, k, j: k - 1, r: 0, s, i: 0 };
    let mut entries = Vec::new();
    for z in 0..=si / 2 {
        let coeff = if si % 2 == 1 && 2 * z == si - 1 {
            ExactScalar::pi_half_pow(ni - ki - 1)
                .mul_rational(&rat(2 * ki * (ni + si - 2), (ni - 1) * (ni - ki + si - 1)))
                .mul(&g(ni))
                .div(&g(ni - ki))
                .mul(&g(si + 2))
                .div(&g(ni + si + 1))
        } else {
            ExactScalar::pi_half_pow(ni - ki)
                .mul_rational(&rat(ki - 1, ni - 1))
                .mul(&g(ni))
                .div(&g(ki))
                .div(&g(ni - ki))
                .mul(&g(si + 1))
                .mul(&g(si + 2))
                .div(&g(ni - ki + si + 1))
                .div(&g(ni + si - 1))
                .mul(&g(ni - ki + 2 * z))
                .mul(&g(ki + si - 1 - 2 * z))
                .div(&g(si - 2 * z + 2))
                .div(&ExactScalar::from_bigint(factorial(z as u32)))
        };
        entries.push(TableEntry {
            z: z as u32,
            q_power: z as u32,
            target: TargetSpec { order: n - 1, s_exp: (si - 2 * z) as u32, eps: 0 },
            coeff,
        });
    }
    Ok(CoefficientTable { formula: FormulaId::ThmExtJKm1, params, entries })
}

/// Extrinsic local formula for k = 1: a single term
/// π^{(n−2)/2} Γ(n/2)/Γ((n+1)/2) · Γ(⌊(s+1)/2⌋+1/2)/Γ(n/2+⌊(s+1)/2⌋)
/// · Q^{⌊s/2⌋} φ^{r,s−2⌊s/2⌋,0}_{n−1}.
pub fn coeff_extrinsic_k1(n: usize, s: u32) -> Result<CoefficientTable> {
    if n < 2 {
        return Err(Error::InvalidParams("requires n >= 2".into()));
    }
    let (ni, si) = (n as i64, s as i64);
    let h = (si + 1) / 2; // ⌊(s+1)/2⌋
    let coeff = ExactScalar::pi_half_pow(ni - 2)
        .mul(&g(ni))
        .div(&g(ni + 1))
        .mul(&g(2 * h + 1))
        .div(&g(ni + 2 * h));
    let params = FormulaParams { n, k: 1, j: 0, r: 0, s, i: 0 };
    let entries = vec![TableEntry {
        z: 0,
        q_power: (si / 2) as u32,
        target: TargetSpec { order: n - 1, s_exp: (si % 2) as u32, eps: 0 },
        coeff,
    }];
    Ok(CoefficientTable { formula: FormulaId::ThmExtK1, params, entries })
}

/// Extrinsic formula in the Ψ-basis, 0 < k < n:
/// ∫ ψ^{r,s,0}_{k−1}(K∩E, β∩E) μ_k(dE) = c · ψ^{r,s,0}_{n−1}(K, β), with
/// c = π^{(n−k)/2} (k−1)/(n−1) Γ(n/2)Γ((k+s−1)/2)/(Γ(k/2)Γ((n+s−1)/2))
///     · Γ((s+1)/2)/Γ((n−k+s+1)/2).
///
/// At k = 1 the displayed coefficient degenerates (a factor k−1 against a
/// Γ-pole at s = 0) and the correct values are: the k = 1 extrinsic
/// coefficient for s ∈ {0,1} (where ψ = φ) and zero for s ≥ 2, where the
/// integral vanishes identically.
pub fn coeff_psi(n: usize, k: usize, s: u32) -> Result<CoefficientTable> {
    if !(k >= 1 && k < n) {
        return Err(Error::InvalidParams("requires 0 < k < n".into()));
    }
    if k == 1 {
        let coeff = if s <= 1 {
            coeff_extrinsic_k1(n, s)?.entries[0].coeff.clone()
        } else {
            ExactScalar::zero()
        };
        let params = FormulaParams { n, k, j: 0, r: 0, s, i: 0 };
        let entries = vec![TableEntry {
            z: 0,
            q_power: 0,
            target: TargetSpec { order: n - 1, s_exp: s, eps: 0 },
            coeff,
        }];
        return Ok(CoefficientTable { formula: FormulaId::CorPsi, params, entries });
    }
    if s == 1 {
        // ψ = φ at s = 1, so the coefficient is forced by the extrinsic
        // formula, whose separately defined z = 0 value applies here; the
        // closed form below is only derived for s ≠ 1.
        let coeff = coeff_extrinsic(n, k, 1)?.entries[0].coeff.clone();
        let params = FormulaParams { n, k, j: k - 1, r: 0, s, i: 0 };
        let entries = vec![TableEntry {
            z: 0,
            q_power: 0,
            target: TargetSpec { order: n - 1, s_exp: s, eps: 0 },
            coeff,
        }];
        return Ok(CoefficientTable { formula: FormulaId::CorPsi, params, entries });
    }
    let (ni, ki, si) = (n as i64, k as i64, s as i64);
    let base = ExactScalar::pi_half_pow(ni - ki)
        .mul_rational(&rat(1, ni - 1))
        .mul(&g(ni))
        .div(&g(ki))
        .div(&g(ni + si - 1))
        .mul(&g(si + 1))
        .div(&g(ni - ki + si + 1));
    let mut km1_gamma = g(ki + si + 1).mul(&ExactScalar::from_int(2));
    if si > 0 {
        km1_gamma = km1_gamma
            .sub(&g(ki + si - 1).mul(&ExactScalar::from_int(si)))
            .expect("same pi exponent");
    }
    let coeff = base.mul(&km1_gamma);
    let params = FormulaParams { n, k, j: k - 1, r: 0, s, i: 0 };
    let entries = vec![TableEntry {
        z: 0,
        q_power: 0,
        target: TargetSpec { order: n - 1, s_exp: s, eps: 0 },
        coeff,
    }];
    Ok(CoefficientTable { formula: FormulaId::CorPsi, params, entries })
}

/// Build the coefficient table for any formula, normalizing the parameters
/// that the family fixes (e.g. j = k − 1).
pub fn coefficient_table(formula: FormulaId, p: &FormulaParams) -> Result<CoefficientTable> {
    let mut table = match formula {
        FormulaId::ThmJEqK => coeff_thm_j_eq_k(p.n, p.k, p.i, p.s),
        FormulaId::ThmLocalGeneral => coeff_local_general(p.n, p.k, p.j, p.s, p.i),
        FormulaId::ThmK1Local => coeff_k1_local(p.n, p.s, p.i),
        FormulaId::ThmGlobal => coeff_global(p.n, p.k, p.j, p.s, p.i),
        FormulaId::CorI0 => coeff_i0(p.n, p.k, p.j, p.s),
        FormulaId::CorJKm1 => coeff_j_km1(p.n, p.k, p.s),
        FormulaId::CorK1Global => coeff_k1_global(p.n, p.s),
        FormulaId::ThmExtJKm1 => coeff_extrinsic(p.n, p.k, p.s),
        FormulaId::ThmExtK1 => coeff_extrinsic_k1(p.n, p.s),
        FormulaId::CorPsi => coeff_psi(p.n, p.k, p.s),
        FormulaId::EqJKm1Weighted => eq_jkm1_weighted(p.n, p.k, p.s, p.i),
    }?;
    table.params.r = p.r;
    Ok(table)
}

/// Evaluate the right-hand side of a formula for a concrete polytope and an
/// optional halfspace region (β): Σ_entries coeff · Q^{q_power} ⊗ φ_{target}.
///
/// For the Ψ-basis formula the target ψ^{r,s,0}_{n−1} is assembled from the
/// plain measures via the basis transform.
pub fn rhs_tensor(
    formula: FormulaId,
    params: &FormulaParams,
    poly: &Polytope,
    region: Option<&[Halfspace]>,
) -> Result<FloatTensor> {
    let table = coefficient_table(formula, params)?;
    let n = params.n;
    if poly.dim() != n {
        return Err(Error::Shape(format!(
            "polytope dim {} does not match n = {}",
            poly.dim(),
            n
        )));
    }
    let q = q_metric::<f64>(n);
    let rank =
        params.r as usize + params.s as usize + 2 * params.i as usize;
    let mut out = FloatTensor::zero(n, rank);
    if formula == FormulaId::CorPsi {
        let entry = &table.entries[0];
        let phis: Vec<FloatTensor> = (0..=params.s / 2)
            .map(|m| {
                let spec = MeasureSpec {
                    ambient_dim: n,
                    order: n - 1,
                    r: params.r,
                    s: params.s - 2 * m,
                    eps: 0,
                    kind: Kind::Extrinsic,
                };
                phi(poly, &spec, region).map(|v| v.value)
            })
            .collect::<Result<_>>()?;
        let psi = psi_from_phi(&phis, n, params.s)?;
        return out.add(&psi.scale(&entry.coeff.to_f64()));
    }
    for e in &table.entries {
        if e.coeff.is_zero() {
            continue;
        }
        let spec = MeasureSpec {
            ambient_dim: n,
            order: e.target.order,
            r: params.r,
            s: e.target.s_exp,
            eps: e.target.eps,
            kind: Kind::Extrinsic,
        };
        let v = phi(poly, &spec, region)?.value;
        let term = q.pow(e.q_power).sym_mul(&v)?.scale(&e.coeff.to_f64());
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::ExactPolyPi;
    use crate::tencm::{psi_def_coeff, psi_inv_coeff};

    fn assert_exact_eq(a: &ExactScalar, b: &ExactScalar, ctx: &str) {
        assert_eq!(a, b, "{ctx}: {a} != {b}");
    }

    #[test]
    fn j_eq_k_values() {
        // n=3, k=1, i=1: (1/2)/(3/2) = 1/3
        let t = coeff_thm_j_eq_k(3, 1, 1, 0).unwrap();
        assert_exact_eq(&t.entries[0].coeff, &ExactScalar::from_ratio(1, 3), "k=1");
        // k=0: 1 for i=0, 0 for i>0
        let t = coeff_thm_j_eq_k(3, 0, 0, 0).unwrap();
        assert_exact_eq(&t.entries[0].coeff, &ExactScalar::one(), "k=i=0");
        let t = coeff_thm_j_eq_k(3, 0, 2, 0).unwrap();
        assert!(t.entries[0].coeff.is_zero());
        // s != 0: empty (integral zero)
        assert!(coeff_thm_j_eq_k(3, 1, 0, 1).unwrap().entries.is_empty());
        assert!(coeff_thm_j_eq_k(3, 3, 0, 0).is_err());
    }

    #[test]
    fn k1_local_values() {
        // n=3, s=0, i=0: single coefficient 1/2
        let t = coeff_k1_local(3, 0, 0).unwrap();
        assert_exact_eq(&t.entries[0].coeff, &ExactScalar::from_ratio(1, 2), "s=0");
        // n=3, s=1, i=0: 1/3 (odd branch)
        let t = coeff_k1_local(3, 1, 0).unwrap();
        assert_exact_eq(&t.entries[0].coeff, &ExactScalar::from_ratio(1, 3), "s=1");
        assert_eq!(t.entries[0].target.s_exp, 1);
    }

    #[test]
    fn k1_global_values() {
        // n=3, s=2: prefactor 2ω_6/(π ω_3 ω_3) = 1/8; z=0 coeff 1/8, z=1 coeff 1/8
        let t = coeff_k1_global(3, 2).unwrap();
        assert_exact_eq(&t.entries[0].coeff, &ExactScalar::from_ratio(1, 8), "z=0");
        assert_exact_eq(&t.entries[1].coeff, &ExactScalar::from_ratio(1, 8), "z=1");
        assert_eq!(t.entries[1].q_power, 0);
        // odd s: empty table
        assert!(coeff_k1_global(3, 3).unwrap().entries.is_empty());
    }

    #[test]
    fn extrinsic_classical_crofton() {
        // n=3, k=2, s=0: the classical line-section coefficient π²/4
        let t = coeff_extrinsic(3, 2, 0).unwrap();
        let c = &t.entries[0].coeff;
        assert_eq!(c.pi_half_exponent(), 4);
        assert_exact_eq(c, &ExactScalar::new(rat(1, 4), 4), "pi^2/4");
        // n=2 extrinsic k=1, s=0: coefficient 2
        let t = coeff_extrinsic_k1(2, 0).unwrap();
        assert_exact_eq(&t.entries[0].coeff, &ExactScalar::from_int(2), "n=2");
    }

    #[test]
    fn global_at_i0_matches_unweighted() {
        for n in 3..=5usize {
            for k in 2..n {
                for j in 0..k {
                    for s in 0..=5u32 {
                        let a = coeff_global(n, k, j, s, 0).unwrap();
                        let b = coeff_i0(n, k, j, s).unwrap();
                        assert_eq!(a.entries.len(), b.entries.len());
                        for (ea, eb) in a.entries.iter().zip(&b.entries) {
                            assert_eq!(ea.target, eb.target);
                            assert_exact_eq(
                                &ea.coeff,
                                &eb.coeff,
                                &format!("n={n} k={k} j={j} s={s} z={}", ea.z),
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn global_merge_identity() {
        // The global coefficient equals the merged local ones:
        // c_z = λ^(0)_z + λ^(1)_{z−1} − (k−j+s+2i−2z−2)/(s+2i−2z−1) · λ^(1)_z.
        for (n, k, j, s, i) in
            [(4usize, 2usize, 0usize, 3u32, 1u32), (5, 3, 1, 4, 1), (4, 3, 1, 2, 2), (5, 2, 0, 5, 0)]
        {
            let local = coeff_local_general(n, k, j, s, i).unwrap();
            let global = coeff_global(n, k, j, s, i).unwrap();
            let o = n - k + j;
            for z in 0..=(s / 2 + i) {
                if s % 2 == 1 && z == s / 2 + i {
                    continue;
                }
                let t = s + 2 * i - 2 * z;
                let lam0 = local.coeff_of(z, o, t, 0);
                let lam1_prev =
                    if z > 0 { local.coeff_of(z - 1, o, t, 1) } else { ExactScalar::zero() };
                // λ^(1)_z multiplies φ^{s+2i−2z−2,1}; absent when that exponent < 0.
                let lam1 =
                    if t >= 2 { local.coeff_of(z, o, t - 2, 1) } else { ExactScalar::zero() };
                let ratio = rat(
                    (k - j) as i64 + s as i64 + 2 * i as i64 - 2 * z as i64 - 2,
                    s as i64 + 2 * i as i64 - 2 * z as i64 - 1,
                );
                let merged = lam0
                    .add(&lam1_prev)
                    .unwrap()
                    .sub(&lam1.mul_rational(&ratio))
                    .unwrap();
                assert_exact_eq(
                    &merged,
                    &global.coeff_of(z, o, t, 0),
                    &format!("n={n} k={k} j={j} s={s} i={i} z={z}"),
                );
            }
        }
    }

    #[test]
    fn jkm1_weighted_consistency() {
        // i = 0 recovers the unweighted j = k−1 table.
        for n in 3..=5usize {
            for k in 2..n {
                for s in 0..=5u32 {
                    let a = eq_jkm1_weighted(n, k, s, 0).unwrap();
                    let b = coeff_j_km1(n, k, s).unwrap();
                    for (ea, eb) in a.entries.iter().zip(&b.entries) {
                        assert_eq!(ea.target, eb.target);
                        assert_exact_eq(&ea.coeff, &eb.coeff, &format!("n={n} k={k} s={s} z={}", ea.z));
                    }
                }
            }
        }
        // For general i it matches merging the mixed-measure local table at j = k−1
        // through φ^{t,1}_{n−1} = Q φ^{t,0}_{n−1} − φ^{t+2,0}_{n−1}:
        // coefficient of Q^z φ^{s+2i−2z} is λ^(0)_z − λ^(1)_z + λ^(1)_{z−1}.
        for (n, k, s, i) in [(4usize, 2usize, 2u32, 1u32), (5, 3, 3, 1), (4, 3, 1, 2)] {
            let local = coeff_local_general(n, k, k - 1, s, i).unwrap();
            let weighted = eq_jkm1_weighted(n, k, s, i).unwrap();
            let o = n - 1;
            for z in 0..=(s / 2 + i) {
                let t = s + 2 * i - 2 * z;
                let lam0 = local.coeff_of(z, o, t, 0);
                let lam1 = if t >= 2 { local.coeff_of(z, o, t - 2, 1) } else { ExactScalar::zero() };
                let lam1_prev =
                    if z > 0 { local.coeff_of(z - 1, o, t, 1) } else { ExactScalar::zero() };
                let merged = lam0.sub(&lam1).unwrap().add(&lam1_prev).unwrap();
                assert_exact_eq(
                    &merged,
                    &weighted.coeff_of(z, o, t, 0),
                    &format!("n={n} k={k} s={s} i={i} z={z}"),
                );
            }
        }
    }

    #[test]
    fn s3_closed_forms() {
        // s=3, j=1, k=2: single surviving coefficient 1/C(n,2); z=1 coefficient 0.
        for n in 3..=6usize {
            let t = coeff_i0(n, 2, 1, 3).unwrap();
            let expect = ExactScalar::from_int(1)
                .div(&ExactScalar::from_bigint(binom(n as i64, 2)));
            assert_exact_eq(&t.entries[0].coeff, &expect, &format!("n={n}"));
            assert!(t.entries[1].coeff.is_zero());
        }
        // s=3 general (j,k): closed form (j+1)/(n−k+j+1) Γ((k+1)/2)Γ((n−k+j)/2)
        // /(Γ((n+1)/2)Γ(j/2)); zero for j=0.
        for n in 3..=6usize {
            for k in 1..n {
                for j in 0..k {
                    let t = coeff_i0(n, k, j, 3).unwrap();
                    let got = &t.entries[0].coeff;
                    let expect = if j == 0 {
                        ExactScalar::zero()
                    } else {
                        ExactScalar::new(
                            rat((j + 1) as i64, (n - k + j + 1) as i64),
                            0,
                        )
                        .mul(&g(k as i64 + 1))
                        .mul(&g((n - k + j) as i64))
                        .div(&g(n as i64 + 1))
                        .div(&g(j as i64))
                    };
                    assert_exact_eq(got, &expect, &format!("n={n} k={k} j={j}"));
                }
            }
        }
    }

    #[test]
    fn jkm1_formal_k1_matches_k1_local() {
        // Evaluating the j = k−1 table formally at k = 1 reproduces the k = 1
        // local formula at i = 0.
        for n in 2..=5usize {
            for s in 0..=6u32 {
                let a = coeff_j_km1(n, 1, s).unwrap();
                let b = coeff_k1_local(n, s, 0).unwrap();
                for z in 0..=s / 2 {
                    let t = s - 2 * z;
                    let got = a.coeff_of(z, n - 1, t, 0);
                    let want = b.coeff_of(z, n - 1, t, 0);
                    assert_exact_eq(&got, &want, &format!("n={n} s={s} z={z}"));
                }
            }
        }
    }

    #[test]
    fn psi_combination_matches_extrinsic() {
        // Pushing the extrinsic tables through the Ψ-basis transform must give
        // the single-term Ψ formula: expanding ψ_{k−1}^{s} into plain measures,
        // applying the extrinsic formula to each, and re-expressing the result
        // in the ψ_{n−1} basis yields the Ψ coefficient at t = 0 and zero at
        // every t ≥ 1. Sums mix π exponents, so they run in ExactPolyPi.
        for n in 2..=4usize {
            for k in 1..n {
                for s in 0..=4u32 {
                    // a_w: coefficient of Q^w φ^{s−2w}_{n−1} after slicing.
                    let half = s / 2;
                    let mut a = vec![ExactPolyPi::zero(); (half + 1) as usize];
                    for m in 0..=half {
                        let c_m = psi_def_coeff(n, s, m);
                        let table = if k == 1 {
                            coeff_extrinsic_k1(n, s - 2 * m).unwrap()
                        } else {
                            coeff_extrinsic(n, k, s - 2 * m).unwrap()
                        };
                        for e in &table.entries {
                            let w = m + e.q_power;
                            a[w as usize] = a[w as usize]
                                .add(&ExactPolyPi::from_scalar(&c_m.mul(&e.coeff)));
                        }
                    }
                    // b_t: ψ_{n−1}-basis coefficients of Σ_w a_w Q^w φ^{s−2w}.
                    let psi = coeff_psi(n, k, s).unwrap().entries[0].coeff.clone();
                    for t in 0..=half {
                        let mut b = ExactPolyPi::zero();
                        for w in 0..=t {
                            let d = psi_inv_coeff(n, s - 2 * w, t - w);
                            for (exp, c) in a[w as usize].terms() {
                                b = b.add(&ExactPolyPi::from_scalar(
                                    &ExactScalar::new(c.clone(), exp).mul(&d),
                                ));
                            }
                        }
                        let want = if t == 0 {
                            ExactPolyPi::from_scalar(&psi)
                        } else {
                            ExactPolyPi::zero()
                        };
                        assert_eq!(b, want, "n={n} k={k} s={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn psi_matches_extrinsic_at_small_s() {
        // ψ = φ for s ∈ {0,1}, so the Ψ coefficient must equal the extrinsic one.
        for n in 2..=5usize {
            for k in 1..n {
                for s in 0..=1u32 {
                    let p = coeff_psi(n, k, s).unwrap().entries[0].coeff.clone();
                    let e = if k == 1 {
                        coeff_extrinsic_k1(n, s).unwrap().entries[0].coeff.clone()
                    } else {
                        coeff_extrinsic(n, k, s).unwrap().entries[0].coeff.clone()
                    };
                    assert_exact_eq(&p, &e, &format!("n={n} k={k} s={s}"));
                }
            }
        }
        // k = 1: Ψ coefficient vanishes for s ≥ 2.
        for s in 2..=5u32 {
            assert!(coeff_psi(4, 1, s).unwrap().entries[0].coeff.is_zero(), "s={s}");
        }
    }

    #[test]
    fn extrinsic_odd_branch_ratio() {
        // At z = (s−1)/2 the separately defined coefficient differs from the
        // naive formula limit by the documented factor k(n+s−2)/((k−1)(n+s−1)).
        // Check consistency with the k = 1 extrinsic formula at s odd via the
        // Ψ tests above; here check the stated ratio for one case directly.
        let (n, k, s) = (5i64, 3i64, 3i64);
        let t = coeff_extrinsic(n as usize, k as usize, s as u32).unwrap();
        let special = t.entries[1].coeff.clone(); // z = 1 = (s−1)/2
        // The regular expression evaluated at z = (s−1)/2 (all Γ args positive here):
        let regular = ExactScalar::pi_half_pow(n - k)
            .mul_rational(&rat(k - 1, n - 1))
            .mul(&g(n))
            .div(&g(k))
            .div(&g(n - k))
            .mul(&g(s + 1))
            .mul(&g(s + 2))
            .div(&g(n - k + s + 1))
            .div(&g(n + s - 1))
            .mul(&g(n - k + s - 1))
            .mul(&g(k))
            .div(&g(3))
            .div(&ExactScalar::from_int(1));
        let ratio = special.div(&regular);
        assert_exact_eq(
            &ratio,
            &ExactScalar::new(rat(k * (n + s - 2), (k - 1) * (n + s - 1)), 0),
            "branch ratio",
        );
    }

    #[test]
    fn csv_and_json_shapes() {
        let t = coeff_k1_local(3, 2, 0).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + t.entries.len());
        let j = t.to_json();
        assert_eq!(j["formula"], "thm_k1_local");
        assert!(j["entries"].as_array().unwrap().len() == t.entries.len());
        assert!(FormulaId::parse("cor_i0").is_ok());
        assert!(FormulaId::parse("nope").is_err());
    }

    #[test]
    fn rhs_tensor_scalar_cases() {
        use crate::polytope::catalog;
        // Classical Crofton on the cube: rhs of the extrinsic k=2, s=0 formula
        // in R³ is π²/4 · φ_2^{0,0,0}(cube) = π²/4 · 6.
        let c = catalog("cube", 3).unwrap();
        let p = FormulaParams { n: 3, k: 2, j: 1, r: 0, s: 0, i: 0 };
        let v = rhs_tensor(FormulaId::ThmExtJKm1, &p, &c, None).unwrap();
        let expect = std::f64::consts::PI.powi(2) / 4.0 * 6.0;
        assert!((v.scalar_value() - expect).abs() < 1e-9);
        // j = k: rhs is Q^i ⊗ volume moment.
        let p = FormulaParams { n: 3, k: 2, j: 2, r: 0, s: 0, i: 1 };
        let v = rhs_tensor(FormulaId::ThmJEqK, &p, &c, None).unwrap();
        assert_eq!(v.rank(), 2);
        assert!((v.coeff(&[2, 0, 0]) - 2.0 / 3.0).abs() < 1e-12);
    }
}
