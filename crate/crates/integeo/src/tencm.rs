//! Tensorial curvature measures of polytopes.
//!
//! For a polytope P in R^d and a j-face F with normal cone N(P,F), the
//! (generalized) tensorial curvature measure is the face sum
//!
//! ```text
//! φ_j^{r,s,ε}(P,β) = Σ_{F ∈ F_j(P)} Q(F)^ε ∫_{F∩β} x^r dH^j · ∫_{N(P,F)∩S} u^s dH^{d−j−1},
//! ```
//!
//! with φ_d^{r,0,0}(P,β) = ∫_{P∩β} x^r (and zero for s ≠ 0 by convention).
//! The normalization keeps the ω_{d−j} factor folded into the face formula,
//! so the global scalar specializations read φ_j^{0,0,0}(P,R^d) = ω_{d−j}·V_j(P).
//!
//! Intrinsic measures of a slice K∩E inside a flat E use the same formula in
//! the flat's coordinates; evaluation can be pushed forward isometrically to
//! ambient coordinates through an [`Embedding`], which is how the Monte
//! Carlo harness consumes them.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_scalar::{self as xs, binom, factorial, gamma_half, rising_factorial, ExactScalar};
use crate::polytope::{moment_over_simplices, Embedding, Face, Halfspace, NormalCone, Polytope};
use crate::symtensor::{multi_indices, q_metric, q_of_subspace, vec_pow, FloatTensor};
use crate::{Error, Result};

/// Whether a measure lives in the ambient space or inside a flat.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Extrinsic,
    Intrinsic,
}

/// Index tuple of a tensorial curvature measure φ_j^{r,s,ε}.
#[derive(Clone, Copy, Debug)]
pub struct MeasureSpec {
    /// Dimension of the space the measure is computed in (n for extrinsic,
    /// k for intrinsic-in-flat).
    pub ambient_dim: usize,
    /// Order j, 0 ≤ j ≤ ambient_dim.
    pub order: usize,
    pub r: u32,
    pub s: u32,
    /// 0 for plain measures, 1 for generalized ones (extra Q(F) factor).
    pub eps: u8,
    pub kind: Kind,
}

impl MeasureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order > self.ambient_dim {
            return Err(Error::InvalidParams(format!(
                "order {} exceeds ambient dimension {}",
                self.order, self.ambient_dim
            )));
        }
        if self.eps > 1 {
            return Err(Error::InvalidParams("eps must be 0 or 1".into()));
        }
        if self.eps == 1 && (self.order == 0 || self.order >= self.ambient_dim) {
            return Err(Error::InvalidParams(
                "generalized measures (eps = 1) require 1 <= j <= d-1".into(),
            ));
        }
        Ok(())
    }

    /// Rank of the resulting tensor.
    pub fn rank(&self) -> usize {
        self.r as usize + self.s as usize + 2 * self.eps as usize
    }
}

/// A measure together with its evaluated tensor.
#[derive(Clone, Debug)]
pub struct TensorMeasureValue {
    pub spec: MeasureSpec,
    pub value: FloatTensor,
}

impl TensorMeasureValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": {
                "ambient_dim": self.spec.ambient_dim,
                "order": self.spec.order,
                "r": self.spec.r,
                "s": self.spec.s,
                "eps": self.spec.eps,
                "kind": match self.spec.kind { Kind::Extrinsic => "extrinsic", Kind::Intrinsic => "intrinsic" },
            },
            "tensor": self.value.to_json(),
        })
    }
}

/// Options for the Monte Carlo tier of [`cone_sphere_moment`].
#[derive(Clone, Copy, Debug)]
pub struct ConeMomentOpts {
    /// Target standard error per tensor component.
    pub target_stderr: f64,
    /// Hard cap on sphere samples.
    pub max_samples: u64,
    pub seed: u64,
}

impl Default for ConeMomentOpts {
    fn default() -> Self {
        Self { target_stderr: 1e-4, max_samples: 2_000_000, seed: 0x636f6e65 }
    }
}

fn map_dir(embed: Option<&Embedding>, v: &DVector<f64>) -> DVector<f64> {
    match embed {
        Some(e) => e.direction(v),
        None => v.clone(),
    }
}

/// ∫₀^α cos^m θ sin^l θ dθ by the standard reduction recurrences.
fn trig_moment(m: u32, l: u32, alpha: f64) -> f64 {
    if m == 0 && l == 0 {
        return alpha;
    }
    if m >= 1 {
        let boundary =
            alpha.cos().powi(m as i32 - 1) * alpha.sin().powi(l as i32 + 1) / (m + l) as f64;
        let rec = if m >= 2 {
            (m - 1) as f64 / (m + l) as f64 * trig_moment(m - 2, l, alpha)
        } else {
            0.0
        };
        boundary + rec
    } else {
        let at_zero = if l == 1 { 1.0 } else { 0.0 };
        let boundary = (at_zero - alpha.sin().powi(l as i32 - 1) * alpha.cos()) / l as f64;
        let rec = if l >= 2 {
            (l - 1) as f64 / l as f64 * trig_moment(0, l - 2, alpha)
        } else {
            0.0
        };
        boundary + rec
    }
}

/// Spherical moment ∫_{N(P,F)∩S} u^s dH^{d−j−1} of a normal cone.
///
/// Tiered evaluation: rays (cone dim 1) are exact; 2-dim wedges use the
/// exact trigonometric reduction of the arc integral; higher-dimensional
/// cones fall back to rejection Monte Carlo inside the cone's linear span.
/// Directions are pushed through `embed` when the polytope lives in a flat.
pub fn cone_sphere_moment(
    poly: &Polytope,
    face: &Face,
    cone: &NormalCone,
    s: u32,
    embed: Option<&Embedding>,
    opts: &ConeMomentOpts,
) -> FloatTensor {
    let out_dim = embed.map_or(poly.dim(), |e| e.ambient_dim());
    match cone.dim {
        0 => panic!("cone of dimension 0 (j = d) has no spherical moment"),
        1 => {
            let nu = map_dir(embed, &cone.generators[0]);
            vec_pow(nu.as_slice(), s)
        }
        2 => {
            let g1 = &cone.generators[0];
            let g2 = &cone.generators[1];
            let c = g1.dot(g2);
            let mut f = g2 - g1 * c;
            let fn_norm = f.norm();
            debug_assert!(fn_norm > 1e-12, "degenerate wedge");
            f /= fn_norm;
            let alpha = fn_norm.atan2(c);
            let e_amb = map_dir(embed, g1);
            let f_amb = map_dir(embed, &f);
            let mut out = FloatTensor::zero(out_dim, s as usize);
            for m in 0..=s {
                let w = binom(s as i64, m as i64).to_string().parse::<f64>().unwrap()
                    * trig_moment(m, s - m, alpha);
                let term = vec_pow(e_amb.as_slice(), m)
                    .sym_mul(&vec_pow(f_amb.as_slice(), s - m))
                    .unwrap();
                out = out.add(&term.scale(&w)).unwrap();
            }
            out
        }
        m_dim => {
            // Rejection MC on the unit sphere of the cone's linear span.
            let area = xs::omega(m_dim as u32).to_f64();
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let idx = multi_indices(out_dim, s as usize);
            let mut sum = vec![0.0f64; idx.len()];
            let mut sq = vec![0.0f64; idx.len()];
            let mut count: u64 = 0;
            let batch = 20_000u64;
            loop {
                for _ in 0..batch {
                    let mut u = DVector::zeros(poly.dim());
                    loop {
                        for b in &cone.span {
                            let g: f64 = {
                                // Box–Muller from two uniforms
                                let u1: f64 = rng.gen::<f64>().max(1e-300);
                                let u2: f64 = rng.gen();
                                (-2.0 * u1.ln()).sqrt()
                                    * (2.0 * std::f64::consts::PI * u2).cos()
                            };
                            u += b * g;
                        }
                        if u.norm() > 1e-8 {
                            break;
                        }
                    }
                    u /= u.norm();
                    count += 1;
                    if poly.cone_contains(face, &u) {
                        let t = vec_pow(map_dir(embed, &u).as_slice(), s);
                        for (i, a) in idx.iter().enumerate() {
                            let v = t.coeff(a);
                            sum[i] += v;
                            sq[i] += v * v;
                        }
                    }
                }
                let n = count as f64;
                let worst = idx
                    .iter()
                    .enumerate()
                    .map(|(i, _)| {
                        let mean = sum[i] / n;
                        ((sq[i] / n - mean * mean).max(0.0) / n).sqrt() * area
                    })
                    .fold(0.0, f64::max);
                if worst <= opts.target_stderr || count >= opts.max_samples {
                    break;
                }
            }
            let mut out = FloatTensor::zero(out_dim, s as usize);
            for (i, a) in idx.iter().enumerate() {
                out.add_term(a.clone(), area * sum[i] / count as f64);
            }
            out
        }
    }
}

/// ∫_{S^{m−1} in the subspace} w^q dH^{m−1}: zero for odd q, otherwise
/// 2·ω_{m+q}/ω_{q+1} · Q(subspace)^{q/2}.
pub fn full_sphere_moment(
    m: usize,
    q: u32,
    subspace_basis: &[DVector<f64>],
    dim: usize,
) -> Result<FloatTensor> {
    assert!(m >= 1);
    if q % 2 == 1 {
        return Ok(FloatTensor::zero(dim, q as usize));
    }
    let c = xs::omega(m as u32 + q)
        .mul(&ExactScalar::from_int(2))
        .div(&xs::omega(q + 1))
        .to_f64();
    let qe = q_of_subspace(subspace_basis, dim)?;
    Ok(qe.pow(q / 2).scale(&c))
}

/// Evaluate φ_j^{r,s,ε}(P, ·) over an optional halfspace region, pushing
/// coordinates forward through `embed` when P lives in an embedded flat.
pub fn phi_embedded(
    poly: &Polytope,
    embed: Option<&Embedding>,
    spec: &MeasureSpec,
    region: Option<&[Halfspace]>,
    opts: &ConeMomentOpts,
) -> Result<FloatTensor> {
    spec.validate()?;
    if spec.ambient_dim != poly.dim() {
        return Err(Error::Shape(format!(
            "measure ambient dim {} != polytope dim {}",
            spec.ambient_dim,
            poly.dim()
        )));
    }
    let d = poly.dim();
    let out_dim = embed.map_or(d, |e| e.ambient_dim());
    let j = spec.order;
    let rank = spec.rank();
    if j == d {
        // Top order: volume moment; extended by zero for s != 0.
        if spec.s != 0 {
            return Ok(FloatTensor::zero(out_dim, rank));
        }
        let body = &poly.faces(d)[0];
        let sims = embed_simplices(poly.clipped_face_simplices(body, region), embed);
        return moment_over_simplices(out_dim, &sims, spec.r)
            .add(&FloatTensor::zero(out_dim, rank));
    }
    let mut total = FloatTensor::zero(out_dim, rank);
    for face in poly.faces(j) {
        let sims = embed_simplices(poly.clipped_face_simplices(face, region), embed);
        if sims.is_empty() {
            continue;
        }
        let moment = moment_over_simplices(out_dim, &sims, spec.r);
        if moment.is_zero() {
            continue;
        }
        let cone = poly.normal_cone(face)?;
        let cone_moment = cone_sphere_moment(poly, face, &cone, spec.s, embed, opts);
        let mut term = moment.sym_mul(&cone_moment)?;
        if spec.eps == 1 {
            let (_, fbasis) = poly.face_frame(face);
            let fbasis_amb: Vec<DVector<f64>> =
                fbasis.iter().map(|b| map_dir(embed, b)).collect();
            term = term.sym_mul(&q_of_subspace(&fbasis_amb, out_dim)?)?;
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

fn embed_simplices(
    sims: Vec<Vec<DVector<f64>>>,
    embed: Option<&Embedding>,
) -> Vec<Vec<DVector<f64>>> {
    match embed {
        None => sims,
        Some(e) => sims
            .into_iter()
            .map(|s| {
                s.into_iter()
                    .map(|p| &e.offset + &e.basis * p)
                    .collect()
            })
            .collect(),
    }
}

/// φ_j^{r,s,ε}(P, β) for a full-dimensional polytope in its own space.
pub fn phi(
    poly: &Polytope,
    spec: &MeasureSpec,
    region: Option<&[Halfspace]>,
) -> Result<TensorMeasureValue> {
    let value = phi_embedded(poly, None, spec, region, &ConeMomentOpts::default())?;
    Ok(TensorMeasureValue { spec: *spec, value })
}

/// Minkowski tensor Φ_j^{r,s}(P) = φ_j^{r,s,0}(P, R^d).
pub fn minkowski_tensor(poly: &Polytope, j: usize, r: u32, s: u32) -> Result<FloatTensor> {
    let spec = MeasureSpec {
        ambient_dim: poly.dim(),
        order: j,
        r,
        s,
        eps: 0,
        kind: Kind::Extrinsic,
    };
    Ok(phi(poly, &spec, None)?.value)
}

/// Coefficient of Q^j φ^{r,s−2j,0} in the Ψ-basis definition
/// ψ^{r,s,0} = (1/√π) Σ_j (−1)^j C(s,2j) Γ(j+1/2) Γ(n/2+s−j−1)/Γ(n/2+s−1) Q^j φ^{r,s−2j,0}.
pub fn psi_def_coeff(n: usize, s: u32, j: u32) -> ExactScalar {
    let sign = if j % 2 == 0 { 1 } else { -1 };
    // (1/√π)·Γ(j+1/2) is rational; the Γ-ratio is a falling product.
    let base = ExactScalar::from_int(sign)
        .mul(&ExactScalar::from_bigint(binom(s as i64, 2 * j as i64)))
        .mul(&gamma_half(2 * j as i64 + 1).unwrap())
        .mul(&ExactScalar::pi_half_pow(-1));
    // Γ(n/2+s−j−1)/Γ(n/2+s−1) = 1/[(n/2+s−j−1)⋯(n/2+s−2)]
    let denom = rising_factorial(n as i64 + 2 * (s as i64 - j as i64) - 2, j);
    assert!(!denom.is_zero(), "psi basis ratio hit a pole");
    base.div(&denom)
}

/// Coefficient of Q^j ψ^{r,s−2j,0} in the inverse relation
/// φ^{r,s,0} = (1/√π) Σ_j C(s,2j) Γ(j+1/2) Γ(n/2+s−2j)/Γ(n/2+s−j) Q^j ψ^{r,s−2j,0}.
pub fn psi_inv_coeff(n: usize, s: u32, j: u32) -> ExactScalar {
    let base = ExactScalar::from_bigint(binom(s as i64, 2 * j as i64))
        .mul(&gamma_half(2 * j as i64 + 1).unwrap())
        .mul(&ExactScalar::pi_half_pow(-1));
    // Γ(n/2+s−2j)/Γ(n/2+s−j) = 1/[(n/2+s−2j)⋯(n/2+s−j−1)]
    let denom = rising_factorial(n as i64 + 2 * s as i64 - 4 * j as i64, j);
    assert!(!denom.is_zero(), "psi inverse ratio hit a pole");
    base.div(&denom)
}

fn psi_like_combination(
    values: &[FloatTensor],
    s: u32,
    coeff: impl Fn(u32) -> ExactScalar,
) -> Result<FloatTensor> {
    let need = (s / 2 + 1) as usize;
    if values.len() < need {
        return Err(Error::InvalidParams(format!(
            "need {} tensors (s, s-2, ..) got {}",
            need,
            values.len()
        )));
    }
    let dim = values[0].dim();
    let q = q_metric::<f64>(dim);
    let mut out = FloatTensor::zero(dim, values[0].rank());
    for j in 0..need as u32 {
        let term = q.pow(j).sym_mul(&values[j as usize])?.scale(&coeff(j).to_f64());
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Assemble ψ^{r,s,0} from the φ-list [φ^{r,s,0}, φ^{r,s−2,0}, …].
pub fn psi_from_phi(values: &[FloatTensor], n: usize, s: u32) -> Result<FloatTensor> {
    psi_like_combination(values, s, |j| psi_def_coeff(n, s, j))
}

/// Assemble φ^{r,s,0} from the ψ-list [ψ^{r,s,0}, ψ^{r,s−2,0}, …].
pub fn phi_from_psi(values: &[FloatTensor], n: usize, s: u32) -> Result<FloatTensor> {
    psi_like_combination(values, s, |j| psi_inv_coeff(n, s, j))
}

/// Convert intrinsic measures of a body inside a k-flat E into the extrinsic
/// measure φ_j^{r,s,0}(K, β) in R^n:
///
/// ```text
/// φ_j^{r,s,0} = π^{(n−k)/2} s!/Γ((n−j+s)/2) Σ_{m=0}^{⌊s/2⌋} Σ_{l=0}^{m} (−1)^{m−l} C(m,l)
///               · Γ((k−j+s)/2−m)/(4^m m! (s−2m)!) · Q^l Q(E)^{m−l} · φ̃_j^{r,s−2m,0}.
/// ```
///
/// `intrinsic_values[m]` must hold φ̃_j^{r,s−2m,0} already expressed as a
/// tensor over R^n (pushed forward through the flat's embedding), and
/// `e_basis` an orthonormal basis of L(E).
pub fn intrinsic_to_extrinsic(
    intrinsic_values: &[FloatTensor],
    e_basis: &[DVector<f64>],
    j: usize,
    k: usize,
    s: u32,
    n: usize,
) -> Result<FloatTensor> {
    if !(j < k && k < n) {
        return Err(Error::InvalidParams("conversion requires j < k < n".into()));
    }
    let need = (s / 2 + 1) as usize;
    if intrinsic_values.len() < need {
        return Err(Error::InvalidParams(format!(
            "need {} intrinsic tensors, got {}",
            need,
            intrinsic_values.len()
        )));
    }
    let q = q_metric::<f64>(n);
    let qe = q_of_subspace(e_basis, n)?;
    let prefactor = ExactScalar::pi_half_pow((n - k) as i64)
        .mul(&ExactScalar::from_bigint(factorial(s)))
        .div(&gamma_half((n - j) as i64 + s as i64)?);
    let mut out = FloatTensor::zero(n, intrinsic_values[0].rank());
    for m in 0..need as u32 {
        let gm = gamma_half((k - j) as i64 + s as i64 - 2 * m as i64)?;
        let base = prefactor
            .mul(&gm)
            .div(&ExactScalar::from_bigint(
                num::BigInt::from(4u32).pow(m) * factorial(m) * factorial(s - 2 * m),
            ));
        for l in 0..=m {
            let sign = if (m - l) % 2 == 0 { 1 } else { -1 };
            let c = base
                .mul(&ExactScalar::from_int(sign))
                .mul(&ExactScalar::from_bigint(binom(m as i64, l as i64)))
                .to_f64();
            let term = q
                .pow(l)
                .sym_mul(&qe.pow(m - l))?
                .sym_mul(&intrinsic_values[m as usize])?
                .scale(&c);
            out = out.add(&term)?;
        }
    }
    Ok(out)
}
