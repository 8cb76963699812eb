//! Command line front end: coefficient tables, tensor computations,
//! identity suites, and Monte Carlo Crofton verification.
//!
//! Every flag can also be supplied through a JSON config file
//! (`--config run.json`) whose keys mirror the flag names; explicit command
//! line flags take precedence over the config file. Exit code is 0 exactly
//! when every computed check passed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use serde::Deserialize;

use integeo::crofton::{
    coeff_extrinsic, coeff_extrinsic_k1, coeff_global, coeff_i0, coeff_j_km1, coeff_k1_local,
    coeff_psi, coefficient_table, FormulaId, FormulaParams,
};
use integeo::exact_scalar::{binom, lemma61, lemma62, lemma63, lemma64, ExactScalar};
use integeo::grassmann_mc::{
    check_projection_integrand, check_q_power_integral, check_sine_q_integral, verify, VerifyOpts,
};
use integeo::polytope::{catalog, AaBox, Halfspace, Polytope};
use integeo::symtensor::{q_metric, q_of_subspace, FloatTensor};
use integeo::tencm::{
    cone_sphere_moment, minkowski_tensor, phi, ConeMomentOpts, Kind, MeasureSpec,
};
use integeo::Result;

#[derive(Parser)]
#[command(
    name = "integeo",
    about = "Tensorial curvature measures, exact Crofton coefficients, and Monte Carlo verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the exact coefficient table of a Crofton formula.
    Coeffs(CoeffsArgs),
    /// Compute a tensorial curvature measure of a body.
    Tensor(TensorArgs),
    /// Run exact/stochastic identity suites.
    Identities(IdentitiesArgs),
    /// Verify a Crofton formula by Monte Carlo integration over flats.
    Verify(VerifyArgs),
    /// Show a catalog body (or list the available ones).
    Catalog(CatalogArgs),
}

/// Config-file fields; keys mirror the command line flags.
#[derive(Deserialize, Default)]
#[serde(default)]
struct FileConfig {
    formula: Option<String>,
    n: Option<usize>,
    k: Option<usize>,
    j: Option<usize>,
    r: Option<u32>,
    s: Option<u32>,
    i: Option<u32>,
    body: Option<String>,
    #[serde(rename = "box")]
    box_spec: Option<String>,
    eps: Option<u8>,
    suite: Option<String>,
    samples: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<String>,
    format: Option<String>,
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
    }
}

/// Flags shared by table/verification commands.
#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON config file mirroring the flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: json or csv.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Formula id (thm_j_eq_k, thm_local_general, thm_k1_local, thm_global,
    /// cor_i0, cor_s3, cor_j_km1, cor_k1_global, thm_ext_jkm1, thm_ext_k1,
    /// cor_psi, eq_jkm1_weighted).
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
}

#[derive(Args)]
struct TensorArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Body: catalog spec like cube:3 / simplex:3 / crosspolytope:3, or a
    /// JSON file {name, dim, vertices}.
    #[arg(long)]
    body: Option<String>,
    /// Measure order j.
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    /// 0 for plain measures, 1 for the generalized (Q(F)-weighted) ones.
    #[arg(long)]
    eps: Option<u8>,
    /// Restrict to an axis-aligned box: "all" or 2n comma-separated floats
    /// (n mins, then n maxs).
    #[arg(long, name = "box")]
    box_spec: Option<String>,
}

#[derive(Args)]
struct IdentitiesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Suite: gamma, coefficients, measures, grassmann, or all.
    #[arg(long)]
    suite: Option<String>,
    /// Samples per stochastic check.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    body: Option<String>,
    /// Restrict the measures to an axis-aligned box (local formulas only).
    #[arg(long, name = "box")]
    box_spec: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to INTEGEO_WORKERS or the core count).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Body spec like cube:3; omit to list the available names.
    #[arg(long)]
    body: Option<String>,
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

/// Resolve a formula name, translating the alias `cor_s3` to the unweighted
/// global family with s forced to 3.
fn resolve_formula(name: &str, s: &mut u32) -> Result<FormulaId> {
    if name == "cor_s3" {
        *s = 3;
        return Ok(FormulaId::CorI0);
    }
    FormulaId::parse(name)
}

fn load_body(spec: &str) -> Result<Polytope> {
    if let Some((name, nstr)) = spec.split_once(':') {
        let n: usize = nstr.parse().map_err(|_| {
            integeo::Error::InvalidParams(format!("bad catalog dimension in '{spec}'"))
        })?;
        return catalog(name, n);
    }
    #[derive(Deserialize)]
    struct BodyFile {
        #[allow(dead_code)]
        name: Option<String>,
        dim: usize,
        vertices: Vec<Vec<f64>>,
    }
    let bf: BodyFile = serde_json::from_str(&std::fs::read_to_string(spec)?)?;
    let pts: Vec<DVector<f64>> = bf
        .vertices
        .iter()
        .map(|v| {
            if v.len() != bf.dim {
                Err(integeo::Error::Shape(format!(
                    "vertex of length {} in a dim-{} body",
                    v.len(),
                    bf.dim
                )))
            } else {
                Ok(DVector::from_column_slice(v))
            }
        })
        .collect::<Result<_>>()?;
    Polytope::build(&pts)
}

/// Parse a box spec: "all" (or empty) means no restriction; otherwise 2n
/// comma-separated floats, n minima then n maxima.
fn parse_box(spec: &Option<String>, n: usize) -> Result<Option<Vec<Halfspace>>> {
    let Some(sp) = spec else { return Ok(None) };
    if sp == "all" {
        return Ok(None);
    }
    let vals: Vec<f64> = sp
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| integeo::Error::InvalidParams(format!("bad box spec '{sp}'")))?;
    if vals.len() != 2 * n {
        return Err(integeo::Error::InvalidParams(format!(
            "box spec needs 2n = {} floats (n minima then n maxima), got {}",
            2 * n,
            vals.len()
        )));
    }
    let bx = AaBox::new(vals[..n].to_vec(), vals[n..].to_vec());
    Ok(Some(bx.halfspaces()))
}

fn write_output(out: &Option<PathBuf>, contents: &str) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, contents)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn gather_params(
    n: Option<usize>,
    k: Option<usize>,
    j: Option<usize>,
    r: Option<u32>,
    s: Option<u32>,
    i: Option<u32>,
    cfg: &FileConfig,
) -> FormulaParams {
    let d = FormulaParams::default();
    FormulaParams {
        n: n.or(cfg.n).unwrap_or(d.n),
        k: k.or(cfg.k).unwrap_or(d.k),
        j: j.or(cfg.j).unwrap_or(d.j),
        r: r.or(cfg.r).unwrap_or(d.r),
        s: s.or(cfg.s).unwrap_or(d.s),
        i: i.or(cfg.i).unwrap_or(d.i),
    }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_coeffs(a: CoeffsArgs) -> Result<bool> {
    let cfg = load_config(&a.common.config)?;
    let mut params = gather_params(a.n, a.k, a.j, a.r, a.s, a.i, &cfg);
    let name = a
        .formula
        .or(cfg.formula)
        .ok_or_else(|| integeo::Error::InvalidParams("missing --formula".into()))?;
    let formula = resolve_formula(&name, &mut params.s)?;
    let table = coefficient_table(formula, &params)?;
    println!(
        "{} (n={} k={} j={} s={} i={}):",
        table.formula, table.params.n, table.params.k, table.params.j, table.params.s,
        table.params.i
    );
    if table.entries.is_empty() {
        println!("  (empty table: the integral is zero)");
    }
    for e in &table.entries {
        println!(
            "  z={} : Q^{} phi[order={}, s={}, eps={}]  coeff = {}",
            e.z, e.q_power, e.target.order, e.target.s_exp, e.target.eps, e.coeff
        );
    }
    let format = a.common.format.or(cfg.format).unwrap_or_else(|| "json".into());
    let serialized = match format.as_str() {
        "csv" => table.to_csv(),
        "json" => serde_json::to_string_pretty(&table.to_json())?,
        other => {
            return Err(integeo::Error::InvalidParams(format!(
                "unknown format '{other}' (expected json or csv)"
            )))
        }
    };
    write_output(&a.common.out.or(cfg.out.map(PathBuf::from)), &serialized)?;
    Ok(true)
}

fn cmd_tensor(a: TensorArgs) -> Result<bool> {
    let cfg = load_config(&a.common.config)?;
    let body = a
        .body
        .or(cfg.body.clone())
        .ok_or_else(|| integeo::Error::InvalidParams("missing --body".into()))?;
    let poly = load_body(&body)?;
    let n = poly.dim();
    let spec = MeasureSpec {
        ambient_dim: n,
        order: a.j.or(cfg.j).unwrap_or(n),
        r: a.r.or(cfg.r).unwrap_or(0),
        s: a.s.or(cfg.s).unwrap_or(0),
        eps: a.eps.or(cfg.eps).unwrap_or(0),
        kind: Kind::Extrinsic,
    };
    let region = parse_box(&a.box_spec.or(cfg.box_spec.clone()), n)?;
    let value = phi(&poly, &spec, region.as_deref())?;
    let json = serde_json::to_string_pretty(&value.to_json())?;
    println!("{json}");
    write_output(&a.common.out.or(cfg.out.map(PathBuf::from)), &json)?;
    Ok(true)
}

fn cmd_catalog(a: CatalogArgs) -> Result<bool> {
    let cfg = load_config(&a.common.config)?;
    let Some(spec) = a.body.or(cfg.body) else {
        println!("available catalog bodies: cube:n, simplex:n, crosspolytope:n  (n >= 1)");
        return Ok(true);
    };
    let poly = load_body(&spec)?;
    let json = serde_json::json!({
        "name": spec,
        "dim": poly.dim(),
        "vertices": poly.vertices().iter().map(|v| v.iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
        "face_counts": (0..=poly.dim()).map(|j| poly.faces(j).len()).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&json)?;
    println!("{text}");
    write_output(&a.common.out.or(cfg.out.map(PathBuf::from)), &text)?;
    Ok(true)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let cfg = load_config(&a.common.config)?;
    let mut params = gather_params(a.n, a.k, a.j, a.r, a.s, a.i, &cfg);
    let name = a
        .formula
        .or(cfg.formula)
        .ok_or_else(|| integeo::Error::InvalidParams("missing --formula".into()))?;
    let formula = resolve_formula(&name, &mut params.s)?;
    let body = a
        .body
        .or(cfg.body.clone())
        .ok_or_else(|| integeo::Error::InvalidParams("missing --body".into()))?;
    let poly = load_body(&body)?;
    params.n = poly.dim();
    let region = parse_box(&a.box_spec.or(cfg.box_spec.clone()), params.n)?;
    let defaults = VerifyOpts::default();
    let opts = VerifyOpts {
        samples: a.samples.or(cfg.samples).unwrap_or(defaults.samples),
        seed: a.seed.or(cfg.seed).unwrap_or(defaults.seed),
        workers: a.workers.or(cfg.workers),
    };
    let report = verify(formula, &params, &poly, region.as_deref(), &opts)?;
    println!(
        "{} n={} k={} j={} r={} s={} i={} samples={} seed={} workers={}",
        report.formula,
        report.params.n,
        report.params.k,
        report.params.j,
        report.params.r,
        report.params.s,
        report.params.i,
        report.samples,
        report.seed,
        report.workers
    );
    println!("  z_max = {:.3}  max|lhs-rhs| = {:.3e}", report.z_max, report.max_abs_diff);
    println!("  {}", if report.pass { "PASS" } else { "FAIL" });
    let format = a.common.format.or(cfg.format).unwrap_or_else(|| "json".into());
    let serialized = match format.as_str() {
        "json" => serde_json::to_string_pretty(&report.to_json())?,
        "csv" => {
            let mut out = String::from(
                "formula,n,k,j,r,s,i,samples,seed,workers,z_max,max_abs_diff,pass\n",
            );
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                report.formula,
                report.params.n,
                report.params.k,
                report.params.j,
                report.params.r,
                report.params.s,
                report.params.i,
                report.samples,
                report.seed,
                report.workers,
                report.z_max,
                report.max_abs_diff,
                report.pass
            ));
            out
        }
        other => {
            return Err(integeo::Error::InvalidParams(format!(
                "unknown format '{other}' (expected json or csv)"
            )))
        }
    };
    write_output(&a.common.out.or(cfg.out.map(PathBuf::from)), &serialized)?;
    Ok(report.pass)
}

// ---------------------------------------------------------------------------
// identity suites
// ---------------------------------------------------------------------------

struct Suite {
    all_pass: bool,
}

impl Suite {
    fn new() -> Self {
        Self { all_pass: true }
    }
    fn record(&mut self, name: &str, pass: bool) {
        println!("{} {}", if pass { "PASS" } else { "FAIL" }, name);
        self.all_pass &= pass;
    }
}

fn suite_gamma(suite: &mut Suite) {
    let mut ok = true;
    for q in 0..=10u32 {
        for ta in 1..=20i64 {
            for tb in 1..=20i64 {
                let (l, r) = lemma61(q, ta, tb).unwrap();
                ok &= l == r;
            }
        }
    }
    suite.record("gamma: alternating Gamma-ratio sum (q<=10, 2a,2b<=20)", ok);

    let mut ok = true;
    for a in 0..=20u32 {
        let (l, r) = lemma62(a);
        ok &= l == r;
    }
    suite.record("gamma: alternating inverse-Gamma sum (a<=20)", ok);

    let mut ok = true;
    let mut cases = 0u32;
    for ta in 1..=20i64 {
        for tb in 1..=20i64 {
            for tc in 1..=20i64 {
                for z in 0..=6u32 {
                    if let Ok((l, r)) = lemma63(ta, tb, tc, z) {
                        ok &= l == r;
                        cases += 1;
                    }
                }
            }
        }
    }
    suite.record(
        &format!("gamma: alternating four-Gamma sum ({cases} admissible cases, 2a,2b,2c<=20, z<=6)"),
        ok && cases > 0,
    );

    let mut ok = true;
    let mut cases = 0u32;
    for ta in 1..=20i64 {
        for tb in 1..=20i64 {
            for t in 0..=6u32 {
                if let Ok((l, r)) = lemma64(ta, tb, t) {
                    ok &= l == r;
                    cases += 1;
                }
            }
        }
    }
    suite.record(
        &format!("gamma: weighted Gamma-ratio sum ({cases} admissible cases, 2a,2b<=20, t<=6)"),
        ok && cases > 0,
    );
}

fn suite_coefficients(suite: &mut Suite) -> Result<()> {
    // Weighted global family at i=0 equals the unweighted one, exactly.
    let mut ok = true;
    for n in 3..=5usize {
        for k in 2..n {
            for j in 0..k {
                for s in 0..=5u32 {
                    let g = coeff_global(n, k, j, s, 0)?;
                    let c = coeff_i0(n, k, j, s)?;
                    for z in 0..=s / 2 {
                        ok &= g.coeff_of(z, n - k + j, s - 2 * z, 0)
                            == c.coeff_of(z, n - k + j, s - 2 * z, 0);
                    }
                }
            }
        }
    }
    suite.record("coefficients: weighted global at i=0 equals unweighted tables (n<=5, s<=5)", ok);

    // s=3, j=1, k=2 closed form 1/C(n,2).
    let mut ok = true;
    for n in 3..=6usize {
        let t = coeff_i0(n, 2, 1, 3)?;
        let expect = ExactScalar::one().div(&ExactScalar::from_bigint(binom(n as i64, 2)));
        let nonzero: Vec<_> = t.entries.iter().filter(|e| !e.coeff.is_zero()).collect();
        ok &= nonzero.len() == 1 && nonzero[0].coeff == expect && nonzero[0].q_power == 0;
    }
    suite.record("coefficients: s=3 unweighted table collapses to 1/C(n,2) (k=2, j=1)", ok);

    // The j=k-1 family, formally continued to k=1, matches the k=1 family.
    let mut ok = true;
    for n in 2..=5usize {
        for s in 0..=6u32 {
            let a = coeff_j_km1(n, 1, s)?;
            let b = coeff_k1_local(n, s, 0)?;
            for e in &a.entries {
                ok &= e.coeff == b.coeff_of(e.q_power, n - 1, e.target.s_exp, 0);
            }
            for e in &b.entries {
                ok &= e.coeff == a.coeff_of(e.q_power, n - 1, e.target.s_exp, 0);
            }
        }
    }
    suite.record("coefficients: j=k-1 family at formal k=1 equals the k=1 family (n<=5, s<=6)", ok);

    // The single-term basis-transformed family agrees with the extrinsic
    // families directly at s in {0,1}, where the transform is the identity.
    let mut ok = true;
    for n in 3..=5usize {
        for k in 1..n {
            for s in 0..=1u32 {
                let p = coeff_psi(n, k, s)?;
                let direct = if k == 1 {
                    coeff_extrinsic_k1(n, s)?
                } else {
                    coeff_extrinsic(n, k, s)?
                };
                ok &= p.entries[0].coeff == direct.entries[0].coeff;
            }
        }
    }
    suite.record("coefficients: basis-transformed family equals extrinsic families at s<=1", ok);
    Ok(())
}

fn suite_measures(suite: &mut Suite) -> Result<()> {
    // phi^{r,s,1}_{n-1} = Q phi^{r,s,0}_{n-1} - phi^{r,s+2,0}_{n-1}
    let mut ok = true;
    for (name, n) in [("cube", 2usize), ("cube", 3), ("simplex", 3)] {
        let p = catalog(name, n)?;
        let q = q_metric::<f64>(n);
        for r in 0..=2u32 {
            for s in 0..=3u32 {
                let mk = |s, eps| MeasureSpec {
                    ambient_dim: n,
                    order: n - 1,
                    r,
                    s,
                    eps,
                    kind: Kind::Extrinsic,
                };
                let gen1 = phi(&p, &mk(s, 1), None)?.value;
                let p0 = phi(&p, &mk(s, 0), None)?.value;
                let p2 = phi(&p, &mk(s + 2, 0), None)?.value;
                let rhs = q.sym_mul(&p0)?.sub(&p2)?;
                ok &= gen1.approx_eq(&rhs, 1e-8);
            }
        }
    }
    suite.record("measures: generalized-measure relation on catalog bodies (r<=2, s<=3)", ok);

    // ((n-j+s)/(s+1)) Phi_j^{0,s+2} = sum_F Q(F^perp) vol_j(F) * cone moment
    let mut ok = true;
    let opts = ConeMomentOpts::default();
    for (name, n) in [("cube", 2usize), ("cube", 3), ("simplex", 3)] {
        let p = catalog(name, n)?;
        let q = q_metric::<f64>(n);
        for j in [n - 1, n - 2] {
            for s in 0..=3u32 {
                let lhs = minkowski_tensor(&p, j, 0, s + 2)?
                    .scale(&(((n - j) as f64 + s as f64) / (s as f64 + 1.0)));
                let mut rhs = FloatTensor::zero(n, s as usize + 2);
                for f in p.faces(j) {
                    let cone = p.normal_cone(f)?;
                    let (_, fb) = p.face_frame(f);
                    let qperp = q.sub(&q_of_subspace(&fb, n)?)?;
                    let cm = cone_sphere_moment(&p, f, &cone, s, None, &opts);
                    rhs = rhs.add(&qperp.sym_mul(&cm)?.scale(&p.face_volume(f)))?;
                }
                ok &= lhs.approx_eq(&rhs, 1e-8);
            }
        }
    }
    suite.record("measures: face-sum relation for Minkowski tensors (cube2, cube3, simplex3)", ok);
    Ok(())
}

fn suite_grassmann(suite: &mut Suite, samples: u64, seed: u64) -> Result<()> {
    // Moments of Q(L): n <= 4, k < n, i <= 2.
    let mut ok = true;
    let mut z_worst: f64 = 0.0;
    for n in 2..=4usize {
        for k in 0..n {
            for i in 0..=2u32 {
                let rep = check_q_power_integral(n, k, i, samples, seed ^ ((n * 16 + k) as u64))?;
                z_worst = z_worst.max(rep.z_max);
                ok &= rep.pass;
            }
        }
    }
    suite.record(
        &format!("flats: subspace metric moments (n<=4, k<n, i<=2), worst z = {z_worst:.2}"),
        ok,
    );

    // Squared-sine moments: n=3, (k,r) in {(2,2),(2,3)}, i <= 1.
    let mut ok = true;
    let mut z_worst: f64 = 0.0;
    for (k, r) in [(2usize, 2usize), (2, 3)] {
        for i in 0..=1u32 {
            let rep = check_sine_q_integral(3, k, r, i, samples, seed ^ (0x40 + (r * 2) as u64 + i as u64))?;
            z_worst = z_worst.max(rep.z_max);
            ok &= rep.pass;
        }
    }
    suite.record(&format!("flats: squared-sine metric moments (n=3), worst z = {z_worst:.2}"), ok);

    // Projected-direction integrand, k > 1 branch: n=3, k=2, j=1, s<=2, i<=1.
    let mut ok = true;
    let mut z_worst: f64 = 0.0;
    for s in 0..=2u32 {
        for i in 0..=1u32 {
            let rep =
                check_projection_integrand(3, 2, 1, s, i, samples, seed ^ (0x80 + (s * 2 + i) as u64))?;
            z_worst = z_worst.max(rep.z_max);
            ok &= rep.pass;
        }
    }
    suite.record(
        &format!("flats: projected integrand, planes in R^3 (s<=2, i<=1), worst z = {z_worst:.2}"),
        ok,
    );

    // Projected-direction integrand, k = 1 branch: n=3, s<=3, i<=1.
    let mut ok = true;
    let mut z_worst: f64 = 0.0;
    for s in 0..=3u32 {
        for i in 0..=1u32 {
            let rep =
                check_projection_integrand(3, 1, 0, s, i, samples, seed ^ (0xc0 + (s * 2 + i) as u64))?;
            z_worst = z_worst.max(rep.z_max);
            ok &= rep.pass;
        }
    }
    suite.record(
        &format!("flats: projected integrand, lines in R^3 (s<=3, i<=1), worst z = {z_worst:.2}"),
        ok,
    );
    Ok(())
}

fn cmd_identities(a: IdentitiesArgs) -> Result<bool> {
    let cfg = load_config(&a.common.config)?;
    let which = a.suite.or(cfg.suite).unwrap_or_else(|| "all".into());
    let samples = a.samples.or(cfg.samples).unwrap_or(100_000);
    let seed = a.seed.or(cfg.seed).unwrap_or(VerifyOpts::default().seed);
    let mut suite = Suite::new();
    match which.as_str() {
        "gamma" => suite_gamma(&mut suite),
        "coefficients" => suite_coefficients(&mut suite)?,
        "measures" => suite_measures(&mut suite)?,
        "grassmann" => suite_grassmann(&mut suite, samples, seed)?,
        "all" => {
            suite_gamma(&mut suite);
            suite_coefficients(&mut suite)?;
            suite_measures(&mut suite)?;
            suite_grassmann(&mut suite, samples, seed)?;
        }
        other => {
            return Err(integeo::Error::InvalidParams(format!(
                "unknown suite '{other}' (gamma, coefficients, measures, grassmann, all)"
            )))
        }
    }
    println!("{}", if suite.all_pass { "ALL PASS" } else { "FAILURES PRESENT" });
    Ok(suite.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Tensor(a) => cmd_tensor(a),
        Command::Identities(a) => cmd_identities(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
