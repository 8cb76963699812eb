//! Monte Carlo verification of the Crofton formulae over affine flats.
//!
//! The affine Grassmannian A(n,k) carries the motion invariant measure
//! μ_k(·) = ∫_{G(n,k)} ∫_{L⊥} 1{L+t ∈ ·} H^{n−k}(dt) ν_k(dL), where ν_k is
//! the Haar probability measure on the linear Grassmannian. Flats are
//! sampled by drawing the direction space L Haar-uniformly and the
//! translation uniformly from a ball in L⊥ large enough to cover every flat
//! meeting the body; the ball volume is the importance weight.
//!
//! The module provides three layers:
//! * samplers for Haar frames, subspaces, and body-hitting flats,
//! * direct stochastic checks of the underlying Grassmannian integral
//!   identities (moments of Q(L), of the squared generalized sine, and of
//!   the projected-direction integrand),
//! * end-to-end verification of every supported Crofton formula: the
//!   left-hand side is integrated numerically over random flats and
//!   compared against the exact right-hand side, component by component,
//!   with a z-score criterion.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crofton::{
    coeff_k1_local, coeff_local_general, rhs_tensor, FormulaId, FormulaParams,
};
use crate::exact_scalar::{factorial, gamma_half, kappa_ball, rising_factorial, ExactScalar};
use crate::polytope::{pull_back_halfspaces, Halfspace, Polytope};
use crate::symtensor::{multi_indices, q_metric, q_of_subspace, vec_pow, FloatTensor, MultiIndex};
use crate::tencm::{
    intrinsic_to_extrinsic, phi_embedded, psi_from_phi, ConeMomentOpts, Kind, MeasureSpec,
};
use crate::{Error, Result};

/// Components with |estimate − exact| below `Z_THRESHOLD` standard errors
/// pass; the standard error is floored to avoid division by zero on
/// components that are constant across samples.
pub const Z_THRESHOLD: f64 = 4.0;
pub const STDERR_FLOOR: f64 = 1e-12;

// ---------------------------------------------------------------------------
// deterministic random streams
// ---------------------------------------------------------------------------

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent, reproducible stream for a (seed, stream index) pair.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}

/// One standard normal variate (Box–Muller).
fn gauss(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Number of worker threads: `INTEGEO_WORKERS` if set, else the number of
/// available cores.
pub fn worker_count() -> usize {
    std::env::var("INTEGEO_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

// ---------------------------------------------------------------------------
// Haar sampling on frames, Grassmannians and body-hitting flats
// ---------------------------------------------------------------------------

/// Haar-uniform orthonormal n×n frame (QR decomposition of a Gaussian
/// matrix). The span of any fixed set of columns is Haar on the
/// corresponding Grassmannian.
pub fn sample_frame(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| gauss(rng));
        let qr = g.qr();
        let r = qr.r();
        if (0..n).all(|d| r[(d, d)].abs() > 1e-12) {
            return qr.q();
        }
    }
}

/// Haar-uniform k-dimensional linear subspace, as an n×k matrix with
/// orthonormal columns (1 ≤ k ≤ n).
pub fn sample_grassmann(rng: &mut impl Rng, n: usize, k: usize) -> DMatrix<f64> {
    assert!(k >= 1 && k <= n);
    sample_frame(rng, n).columns(0, k).into_owned()
}

fn columns(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    (0..m.ncols()).map(|c| m.column(c).into_owned()).collect()
}

/// Generalized sine [F, L] of two linear subspaces, given by orthonormal
/// column bases: the volume of the parallelepiped spanned by a basis of
/// F∩L extended to bases of F and of L. Equals the product of the sines of
/// the non-trivially-zero principal angles; the cosines of the principal
/// angles are the singular values of Fᵀ·L, of which dim F + dim L − n are
/// forced to one by the generic intersection.
pub fn generalized_sine(f: &DMatrix<f64>, l: &DMatrix<f64>) -> f64 {
    let n = f.nrows();
    let (r, k) = (f.ncols(), l.ncols());
    if r == 0 || k == 0 || r == n || k == n {
        return 1.0;
    }
    let m = f.transpose() * l;
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let forced = (r + k).saturating_sub(n);
    sv.iter()
        .skip(forced)
        .map(|&c| (1.0 - (c.min(1.0)).powi(2)).max(0.0).sqrt())
        .product()
}

/// Importance sampler for flats E ∈ A(n,k) hitting a fixed polytope: the
/// direction space is Haar, the translation uniform in the ball in L⊥ of
/// radius slightly above the circumradius around the projected centroid.
/// Every flat meeting the body lies in the sampled region, so
/// E[weight · g(E)] = ∫ g dμ_k for integrands supported on hitting flats.
pub struct FlatSampler {
    n: usize,
    k: usize,
    center: DVector<f64>,
    radius: f64,
    /// H^{n−k} volume of the translation ball.
    pub weight: f64,
}

impl FlatSampler {
    pub fn new(poly: &Polytope, k: usize) -> Self {
        let n = poly.dim();
        assert!(k >= 1 && k < n, "flat sampling requires 1 <= k < n");
        let center = poly.centroid();
        let radius = poly.circumradius() * 1.05 + 1e-9;
        let m = (n - k) as u32;
        let weight = kappa_ball(m).to_f64() * radius.powi(m as i32);
        Self { n, k, center, radius, weight }
    }

    /// Draw a flat; returns (orthonormal direction basis L, a point on E).
    pub fn sample(&self, rng: &mut impl Rng) -> (DMatrix<f64>, DVector<f64>) {
        let frame = sample_frame(rng, self.n);
        let l = frame.columns(0, self.k).into_owned();
        let w = frame.columns(self.k, self.n - self.k).into_owned();
        let m = self.n - self.k;
        let dir = loop {
            let d = DVector::from_fn(m, |_, _| gauss(rng));
            let norm = d.norm();
            if norm > 1e-12 {
                break d / norm;
            }
        };
        let rad = self.radius * rng.gen::<f64>().powf(1.0 / m as f64);
        let y = w.transpose() * &self.center + dir * rad;
        (l, w * y)
    }
}

// ---------------------------------------------------------------------------
// streaming tensor statistics
// ---------------------------------------------------------------------------

/// Component-wise running mean and variance (Welford) of tensor samples,
/// mergeable across workers (Chan's parallel update).
#[derive(Clone, Debug)]
pub struct TensorAccumulator {
    dim: usize,
    rank: usize,
    indices: Vec<MultiIndex>,
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl TensorAccumulator {
    pub fn new(dim: usize, rank: usize) -> Self {
        let indices = multi_indices(dim, rank);
        let slots = indices.len();
        Self { dim, rank, indices, count: 0, mean: vec![0.0; slots], m2: vec![0.0; slots] }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, t: &FloatTensor) {
        debug_assert_eq!(t.dim(), self.dim);
        debug_assert_eq!(t.rank(), self.rank);
        self.count += 1;
        let n = self.count as f64;
        for (slot, alpha) in self.indices.iter().enumerate() {
            let x = t.coeff(alpha);
            let d = x - self.mean[slot];
            self.mean[slot] += d / n;
            self.m2[slot] += d * (x - self.mean[slot]);
        }
    }

    pub fn merge(&mut self, other: &TensorAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        for slot in 0..self.mean.len() {
            let d = other.mean[slot] - self.mean[slot];
            self.mean[slot] += d * nb / (na + nb);
            self.m2[slot] += other.m2[slot] + d * d * na * nb / (na + nb);
        }
        self.count += other.count;
    }

    pub fn mean_tensor(&self) -> FloatTensor {
        let mut t = FloatTensor::zero(self.dim, self.rank);
        for (slot, alpha) in self.indices.iter().enumerate() {
            t.add_term(alpha.clone(), self.mean[slot]);
        }
        t
    }

    /// Standard error of the mean, per component.
    pub fn stderr_tensor(&self) -> FloatTensor {
        let mut t = FloatTensor::zero(self.dim, self.rank);
        if self.count >= 2 {
            let n = self.count as f64;
            for (slot, alpha) in self.indices.iter().enumerate() {
                t.add_term(alpha.clone(), (self.m2[slot] / (n * (n - 1.0))).sqrt());
            }
        }
        t
    }

    /// Largest z-score of the mean against an exact tensor. Components whose
    /// deviation is negligible relative to the exact tensor's magnitude
    /// (pure floating-point noise on exactly-reproduced components) count
    /// as zero.
    pub fn compare(&self, expected: &FloatTensor) -> Comparison {
        let n = self.count.max(1) as f64;
        let scale = expected.max_abs().max(1.0);
        let mut z_max: f64 = 0.0;
        let mut max_abs_diff: f64 = 0.0;
        for (slot, alpha) in self.indices.iter().enumerate() {
            let diff = (self.mean[slot] - expected.coeff(alpha)).abs();
            max_abs_diff = max_abs_diff.max(diff);
            if diff <= 1e-9 * scale {
                continue;
            }
            let se = (self.m2[slot] / (n * (n - 1.0).max(1.0))).sqrt().max(STDERR_FLOOR);
            z_max = z_max.max(diff / se);
        }
        Comparison { z_max, max_abs_diff, pass: z_max <= Z_THRESHOLD }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Comparison {
    pub z_max: f64,
    pub max_abs_diff: f64,
    pub pass: bool,
}

// ---------------------------------------------------------------------------
// parallel driver
// ---------------------------------------------------------------------------

/// Average `samples` evaluations of `f` over deterministic worker streams.
/// Worker w consumes stream (seed, w); partial results are merged in worker
/// order, so a fixed (seed, worker count) reproduces the estimate exactly.
pub fn run_mc<F>(
    dim: usize,
    rank: usize,
    samples: u64,
    seed: u64,
    workers: usize,
    f: F,
) -> Result<TensorAccumulator>
where
    F: Fn(&mut ChaCha8Rng) -> Result<FloatTensor> + Sync,
{
    let workers = workers.max(1).min(samples.max(1) as usize);
    let base = samples / workers as u64;
    let extra = (samples % workers as u64) as usize;
    let results: Vec<Result<TensorAccumulator>> = std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let share = base + u64::from(w < extra);
                scope.spawn(move || -> Result<TensorAccumulator> {
                    let mut rng = stream_rng(seed, w as u64);
                    let mut acc = TensorAccumulator::new(dim, rank);
                    for _ in 0..share {
                        acc.push(&f(&mut rng)?);
                    }
                    Ok(acc)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total = TensorAccumulator::new(dim, rank);
    for r in results {
        total.merge(&r?);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// direct checks of the Grassmannian integral identities
// ---------------------------------------------------------------------------

/// Outcome of one stochastic identity check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub samples: u64,
    pub seed: u64,
    pub estimate: FloatTensor,
    pub stderr: FloatTensor,
    pub expected: FloatTensor,
    pub z_max: f64,
    pub max_abs_diff: f64,
    pub pass: bool,
}

impl CheckReport {
    fn from_parts(name: String, seed: u64, acc: &TensorAccumulator, expected: FloatTensor) -> Self {
        let cmp = acc.compare(&expected);
        Self {
            name,
            samples: acc.count(),
            seed,
            estimate: acc.mean_tensor(),
            stderr: acc.stderr_tensor(),
            expected,
            z_max: cmp.z_max,
            max_abs_diff: cmp.max_abs_diff,
            pass: cmp.pass,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "samples": self.samples,
            "seed": self.seed,
            "estimate": self.estimate.to_json(),
            "stderr": self.stderr.to_json(),
            "expected": self.expected.to_json(),
            "z_max": self.z_max,
            "max_abs_diff": self.max_abs_diff,
            "pass": self.pass,
        })
    }
}

/// ∫_{G(n,k)} Q(L)^i ν_k(dL) = [Γ(n/2)Γ(k/2+i)] / [Γ(n/2+i)Γ(k/2)] · Q^i,
/// read as 1 for k = i = 0 and 0 for k = 0, i ≠ 0.
pub fn check_q_power_integral(
    n: usize,
    k: usize,
    i: u32,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    if k > n {
        return Err(Error::InvalidParams("requires k <= n".into()));
    }
    let c = rising_factorial(k as i64, i).div(&rising_factorial(n as i64, i));
    let expected = q_metric::<f64>(n).pow(i).scale(&c.to_f64());
    let acc = run_mc(n, 2 * i as usize, samples, seed, worker_count(), |rng| {
        if k == 0 {
            return Ok(if i == 0 {
                FloatTensor::constant(n, 1.0)
            } else {
                FloatTensor::zero(n, 2 * i as usize)
            });
        }
        let l = sample_grassmann(rng, n, k);
        Ok(q_of_subspace(&columns(&l), n)?.pow(i))
    })?;
    Ok(CheckReport::from_parts(
        format!("subspace metric moment n={n} k={k} i={i}"),
        seed,
        &acc,
        expected,
    ))
}

/// ∫_{G(n,k)} [F,L]² Q(L)^i ν_k(dL) for fixed F ∈ G(n,r) with k + r ≥ n:
///
/// ```text
///   r!k!/(n!(k+r−n)!) · Γ(n/2+1)Γ(k/2+i)/(Γ(n/2+i+1)Γ(k/2+1))
///   · [ (k/2+i) Q^i + i(k−n)/r · Q^{i−1} Q(F) ],
/// ```
///
/// with the second summand read as 0 when i = 0 or r = 0.
pub fn check_sine_q_integral(
    n: usize,
    k: usize,
    r: usize,
    i: u32,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    if !(k >= 1 && k <= n && r <= n && k + r >= n) {
        return Err(Error::InvalidParams("requires 1 <= k <= n, r <= n, k + r >= n".into()));
    }
    let (ni, ki) = (n as i64, k as i64);
    let pref = ExactScalar::from_bigint(factorial(r as u32) * factorial(k as u32))
        .div(&ExactScalar::from_bigint(
            factorial(n as u32) * factorial((k + r - n) as u32),
        ))
        .mul(&gamma_half(ni + 2)?)
        .mul(&gamma_half(ki + 2 * i as i64)?)
        .div(&gamma_half(ni + 2 * i as i64 + 2)?)
        .div(&gamma_half(ki + 2)?);

    // Fixed generic subspace F, drawn once from a derived stream.
    let mut frng = stream_rng(seed ^ 0xf1a7_5eed, u64::MAX);
    let f_basis = if r == 0 {
        DMatrix::zeros(n, 0)
    } else {
        sample_frame(&mut frng, n).columns(0, r).into_owned()
    };

    let q = q_metric::<f64>(n);
    let c0 = pref.mul_rational(&num::BigRational::new((ki + 2 * i as i64).into(), 2.into()));
    let mut expected = q.pow(i).scale(&c0.to_f64());
    if i > 0 && r > 0 {
        let c1 = pref.mul_rational(&num::BigRational::new(
            (i as i64 * (ki - ni)).into(),
            (r as i64).into(),
        ));
        let qf = q_of_subspace(&columns(&f_basis), n)?;
        expected = expected.add(&q.pow(i - 1).sym_mul(&qf)?.scale(&c1.to_f64()))?;
    }

    let acc = run_mc(n, 2 * i as usize, samples, seed, worker_count(), |rng| {
        let l = sample_grassmann(rng, n, k);
        let sine2 = generalized_sine(&f_basis, &l).powi(2);
        Ok(if i == 0 {
            FloatTensor::constant(n, sine2)
        } else {
            q_of_subspace(&columns(&l), n)?.pow(i).scale(&sine2)
        })
    })?;
    Ok(CheckReport::from_parts(
        format!("squared-sine metric moment n={n} k={k} r={r} i={i}"),
        seed,
        &acc,
        expected,
    ))
}

/// ∫_{G(n,k)} Q(L)^i π_L(u)^s ‖p_L(u)‖^{j−k} [F,L]² ν_k(dL) for fixed
/// F ∈ G(n, n−k+j) and u ∈ F⊥ ∩ S, against the coefficient table of the
/// corresponding local Crofton formula: the entries pair Q^z with u^t
/// (plain targets) and with Q(F) u^t (generalized targets).
pub fn check_projection_integrand(
    n: usize,
    k: usize,
    j: usize,
    s: u32,
    i: u32,
    samples: u64,
    seed: u64,
) -> Result<CheckReport> {
    if !(j < k && k < n) {
        return Err(Error::InvalidParams("requires j < k < n".into()));
    }
    let fdim = n - k + j;
    let mut frng = stream_rng(seed ^ 0xf1a7_5eed, u64::MAX);
    let frame = sample_frame(&mut frng, n);
    let f_basis = frame.columns(0, fdim).into_owned();
    // A Haar direction in F⊥.
    let u = {
        let mut w = DVector::zeros(n);
        for c in fdim..n {
            w += frame.column(c) * gauss(&mut frng);
        }
        let norm = w.norm();
        w / norm
    };

    let table = if k > 1 { coeff_local_general(n, k, j, s, i)? } else { coeff_k1_local(n, s, i)? };
    let q = q_metric::<f64>(n);
    let qf = q_of_subspace(&columns(&f_basis), n)?;
    let rank = (s + 2 * i) as usize;
    let mut expected = FloatTensor::zero(n, rank);
    for e in &table.entries {
        if e.coeff.is_zero() {
            continue;
        }
        let mut term = q.pow(e.q_power).sym_mul(&vec_pow(u.as_slice(), e.target.s_exp))?;
        if e.target.eps == 1 {
            term = term.sym_mul(&qf)?;
        }
        expected = expected.add(&term.scale(&e.coeff.to_f64()))?;
    }

    let exponent = j as i32 - k as i32;
    let acc = run_mc(n, rank, samples, seed, worker_count(), |rng| {
        let (l, p_norm, pi_dir) = loop {
            let l = sample_grassmann(rng, n, k);
            let p = &l * (l.transpose() * &u);
            let norm = p.norm();
            if norm > 1e-12 {
                break (l, norm, p / norm);
            }
        };
        let scale = p_norm.powi(exponent) * generalized_sine(&f_basis, &l).powi(2);
        let mut val = vec_pow(pi_dir.as_slice(), s).scale(&scale);
        if i > 0 {
            val = val.sym_mul(&q_of_subspace(&columns(&l), n)?.pow(i))?;
        }
        Ok(val)
    })?;
    Ok(CheckReport::from_parts(
        format!("projected-direction integrand n={n} k={k} j={j} s={s} i={i}"),
        seed,
        &acc,
        expected,
    ))
}

// ---------------------------------------------------------------------------
// end-to-end Crofton verification
// ---------------------------------------------------------------------------

/// Monte Carlo options for [`verify`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOpts {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` uses [`worker_count`].
    pub workers: Option<usize>,
}

impl Default for VerifyOpts {
    fn default() -> Self {
        Self { samples: 100_000, seed: 0x6772_6173, workers: None }
    }
}

/// Result of one end-to-end formula verification.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub formula: FormulaId,
    pub params: FormulaParams,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub lhs: FloatTensor,
    pub lhs_stderr: FloatTensor,
    pub rhs: FloatTensor,
    pub z_max: f64,
    pub max_abs_diff: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "formula": self.formula.as_str(),
            "params": {
                "n": self.params.n, "k": self.params.k, "j": self.params.j,
                "r": self.params.r, "s": self.params.s, "i": self.params.i,
            },
            "samples": self.samples,
            "seed": self.seed,
            "workers": self.workers,
            "lhs": self.lhs.to_json(),
            "lhs_stderr": self.lhs_stderr.to_json(),
            "rhs": self.rhs.to_json(),
            "z_max": self.z_max,
            "max_abs_diff": self.max_abs_diff,
            "pass": self.pass,
        })
    }
}

/// Force the parameters a family does not vary (e.g. j for k = 1 formulas)
/// to their defining values.
pub fn normalize_params(formula: FormulaId, p: &FormulaParams) -> Result<FormulaParams> {
    let mut p = *p;
    match formula {
        FormulaId::ThmJEqK => p.j = p.k,
        FormulaId::ThmLocalGeneral => {}
        FormulaId::ThmK1Local => {
            p.k = 1;
            p.j = 0;
        }
        FormulaId::ThmGlobal => p.r = 0,
        FormulaId::CorI0 => {
            p.r = 0;
            p.i = 0;
        }
        FormulaId::CorJKm1 | FormulaId::ThmExtJKm1 | FormulaId::CorPsi => {
            if p.k == 0 {
                return Err(Error::InvalidParams("requires k >= 1".into()));
            }
            p.j = p.k - 1;
            p.i = 0;
        }
        FormulaId::CorK1Global => {
            p.k = 1;
            p.j = 0;
            p.r = 0;
            p.i = 0;
        }
        FormulaId::ThmExtK1 => {
            p.k = 1;
            p.j = 0;
            p.i = 0;
        }
        FormulaId::EqJKm1Weighted => {
            if p.k == 0 {
                return Err(Error::InvalidParams("requires k >= 1".into()));
            }
            p.j = p.k - 1;
        }
    }
    Ok(p)
}

fn lhs_rank(formula: FormulaId, p: &FormulaParams) -> usize {
    if formula.lhs_is_extrinsic() {
        (p.r + p.s) as usize
    } else {
        (p.r + p.s + 2 * p.i) as usize
    }
}

/// One importance-weighted sample of the left-hand side of a Crofton
/// formula: draw a flat, slice the body, evaluate the slice measure (in the
/// flat for intrinsic families, converted to ambient components for the
/// extrinsic ones), and apply the Q(E)^i weight.
fn lhs_sample(
    formula: FormulaId,
    p: &FormulaParams,
    poly: &Polytope,
    region: Option<&[Halfspace]>,
    sampler: &FlatSampler,
    rng: &mut ChaCha8Rng,
    cone_opts: &ConeMomentOpts,
) -> Result<FloatTensor> {
    let (n, k) = (p.n, p.k);
    let rank = lhs_rank(formula, p);
    let zero = FloatTensor::zero(n, rank);
    let (l, point) = sampler.sample(rng);
    let Some((slice, embed)) = poly.slice(&l, &point) else {
        return Ok(zero);
    };
    let pulled: Option<Vec<Halfspace>> = match region {
        None => None,
        Some(hs) => match pull_back_halfspaces(hs, &embed) {
            None => return Ok(zero),
            Some(v) => Some(v),
        },
    };
    let l_cols = columns(&l);
    let val = if formula.lhs_is_extrinsic() {
        // Ambient components of the slice measure, assembled from the
        // intrinsic ones of every lower tensor exponent.
        let j = k - 1;
        let phis: Vec<FloatTensor> = (0..=p.s / 2)
            .map(|m| {
                let spec = MeasureSpec {
                    ambient_dim: k,
                    order: j,
                    r: p.r,
                    s: p.s - 2 * m,
                    eps: 0,
                    kind: Kind::Intrinsic,
                };
                phi_embedded(&slice, Some(&embed), &spec, pulled.as_deref(), cone_opts)
            })
            .collect::<Result<_>>()?;
        if formula == FormulaId::CorPsi {
            let exts: Vec<FloatTensor> = (0..=p.s / 2)
                .map(|m| {
                    intrinsic_to_extrinsic(&phis[m as usize..], &l_cols, j, k, p.s - 2 * m, n)
                })
                .collect::<Result<_>>()?;
            psi_from_phi(&exts, n, p.s)?
        } else {
            intrinsic_to_extrinsic(&phis, &l_cols, j, k, p.s, n)?
        }
    } else {
        let spec = MeasureSpec {
            ambient_dim: k,
            order: p.j,
            r: p.r,
            s: p.s,
            eps: 0,
            kind: Kind::Intrinsic,
        };
        let base = phi_embedded(&slice, Some(&embed), &spec, pulled.as_deref(), cone_opts)?;
        if p.i > 0 {
            base.sym_mul(&q_of_subspace(&l_cols, n)?.pow(p.i))?
        } else {
            base
        }
    };
    Ok(val.scale(&sampler.weight))
}

/// Verify one Crofton formula instance on a polytope: Monte Carlo estimate
/// of the flat integral on the left against the exact combination of
/// curvature measures on the right. Global families ignore `region`.
pub fn verify(
    formula: FormulaId,
    params: &FormulaParams,
    poly: &Polytope,
    region: Option<&[Halfspace]>,
    opts: &VerifyOpts,
) -> Result<VerificationReport> {
    let p = normalize_params(formula, params)?;
    if poly.dim() != p.n {
        return Err(Error::Shape(format!(
            "polytope dim {} does not match n = {}",
            poly.dim(),
            p.n
        )));
    }
    if !(p.k >= 1 && p.k < p.n) {
        return Err(Error::InvalidParams(
            "flat verification requires 1 <= k < n".into(),
        ));
    }
    let region = if formula.is_global() { None } else { region };
    let rhs = rhs_tensor(formula, &p, poly, region)?;
    let sampler = FlatSampler::new(poly, p.k);
    let cone_opts = ConeMomentOpts::default();
    let workers = opts.workers.unwrap_or_else(worker_count);
    let rank = lhs_rank(formula, &p);
    let acc = run_mc(p.n, rank, opts.samples, opts.seed, workers, |rng| {
        lhs_sample(formula, &p, poly, region, &sampler, rng, &cone_opts)
    })?;
    let cmp = acc.compare(&rhs);
    Ok(VerificationReport {
        formula,
        params: p,
        samples: acc.count(),
        seed: opts.seed,
        workers,
        lhs: acc.mean_tensor(),
        lhs_stderr: acc.stderr_tensor(),
        rhs,
        z_max: cmp.z_max,
        max_abs_diff: cmp.max_abs_diff,
        pass: cmp.pass,
    })
}
