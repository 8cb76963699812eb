//! End-to-end acceptance suite. Each criterion prints a single PASS/FAIL
//! line; a FAIL panics so `cargo test` reports it. Criteria:
//!
//! 1. exact Gamma-function identities on full admissible grids;
//! 2. exact cross-family consistency of the flat-integral coefficient tables;
//! 3. float identities between curvature measures of concrete polytopes;
//! 4. Monte Carlo checks of the Grassmannian moment integrals;
//! 5. Monte Carlo verification of the flat-integral formulas end to end;
//! 6. the above together constitute the acceptance gate (the underlying
//!    theory is closed-form; there is no large-scale experiment to replay).

use std::time::{Duration, Instant};

use integeo::crofton::{
    coeff_extrinsic, coeff_extrinsic_k1, coeff_global, coeff_i0, coeff_j_km1, coeff_k1_local,
    coeff_psi, FormulaId, FormulaParams,
};
use integeo::exact_scalar::{
    binom, lemma61, lemma62, lemma63, lemma64, ExactPolyPi, ExactScalar,
};
use integeo::grassmann_mc::{
    check_projection_integrand, check_q_power_integral, check_sine_q_integral, verify, VerifyOpts,
};
use integeo::polytope::{catalog, AaBox, Halfspace, Polytope};
use integeo::symtensor::{q_metric, q_of_subspace, FloatTensor};
use integeo::tencm::{
    cone_sphere_moment, minkowski_tensor, phi, psi_def_coeff, psi_inv_coeff, ConeMomentOpts,
    Kind, MeasureSpec,
};

fn report(criterion: u32, what: &str, pass: bool, elapsed: Duration) {
    println!(
        "acceptance {criterion} ({what}): {} [{:.2}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(pass, "acceptance criterion {criterion} failed: {what}");
}

fn within(elapsed: Duration, budget_s: f64, what: &str) {
    assert!(
        elapsed.as_secs_f64() < budget_s,
        "{what} took {:.2}s, budget {budget_s}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_1_exact_gamma_identities() {
    let t0 = Instant::now();
    let mut ok = true;

    for q in 0..=10u32 {
        for ta in 1..=20i64 {
            for tb in 1..=20i64 {
                let (l, r) = lemma61(q, ta, tb).unwrap();
                ok &= l == r;
            }
        }
    }
    for a in 0..=20u32 {
        let (l, r) = lemma62(a);
        ok &= l == r;
    }
    let mut cases63 = 0u32;
    for ta in 1..=20i64 {
        for tb in 1..=20i64 {
            for tc in 1..=20i64 {
                for z in 0..=6u32 {
                    if let Ok((l, r)) = lemma63(ta, tb, tc, z) {
                        ok &= l == r;
                        cases63 += 1;
                    }
                }
            }
        }
    }
    let mut cases64 = 0u32;
    for ta in 1..=20i64 {
        for tb in 1..=20i64 {
            for t in 0..=6u32 {
                if let Ok((l, r)) = lemma64(ta, tb, t) {
                    ok &= l == r;
                    cases64 += 1;
                }
            }
        }
    }
    ok &= cases63 > 0 && cases64 > 0;

    let elapsed = t0.elapsed();
    within(elapsed, 5.0, "gamma identity grids");
    report(1, "exact gamma identities on full grids", ok, elapsed);
}

#[test]
fn criterion_2_coefficient_consistency() {
    let t0 = Instant::now();
    let mut ok = true;

    // (a) The weighted global family at i=0 reduces exactly to the
    // unweighted one.
    for n in 3..=5usize {
        for k in 2..n {
            for j in 0..k {
                for s in 0..=5u32 {
                    let g = coeff_global(n, k, j, s, 0).unwrap();
                    let c = coeff_i0(n, k, j, s).unwrap();
                    for z in 0..=s / 2 {
                        ok &= g.coeff_of(z, n - k + j, s - 2 * z, 0)
                            == c.coeff_of(z, n - k + j, s - 2 * z, 0);
                    }
                }
            }
        }
    }

    // (b) At s=3, j=1, k=2 the unweighted table collapses to the single
    // closed-form value 1/binom(n,2) — 1/3 in dimension three.
    for n in 3..=6usize {
        let t = coeff_i0(n, 2, 1, 3).unwrap();
        let expect = ExactScalar::one().div(&ExactScalar::from_bigint(binom(n as i64, 2)));
        let nonzero: Vec<_> = t.entries.iter().filter(|e| !e.coeff.is_zero()).collect();
        ok &= nonzero.len() == 1 && nonzero[0].coeff == expect && nonzero[0].q_power == 0;
    }

    // (c) The j=k-1 family, formally continued to k=1, coincides with the
    // dedicated k=1 family.
    for n in 2..=5usize {
        for s in 0..=6u32 {
            let a = coeff_j_km1(n, 1, s).unwrap();
            let b = coeff_k1_local(n, s, 0).unwrap();
            for e in &a.entries {
                ok &= e.coeff == b.coeff_of(e.q_power, n - 1, e.target.s_exp, 0);
            }
            for e in &b.entries {
                ok &= e.coeff == a.coeff_of(e.q_power, n - 1, e.target.s_exp, 0);
            }
        }
    }

    // (d) Pushing the extrinsic tables through the basis transform
    // reproduces the single-term transformed coefficient: expand the
    // transformed slice functional into plain measures, apply the extrinsic
    // tables, and re-express the result in the transformed basis of the
    // ambient space. Sums mix powers of pi, so they run in the
    // pi-polynomial ring.
    for n in 2..=4usize {
        for k in 1..n {
            for s in 0..=4u32 {
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
                        a[w as usize] =
                            a[w as usize].add(&ExactPolyPi::from_scalar(&c_m.mul(&e.coeff)));
                    }
                }
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
                    ok &= b == want;
                }
            }
        }
    }

    // (e) At s in {0,1} the basis transform is the identity, so the
    // transformed coefficient equals the extrinsic one directly.
    for n in 3..=5usize {
        for k in 1..n {
            for s in 0..=1u32 {
                let p = coeff_psi(n, k, s).unwrap();
                let direct = if k == 1 {
                    coeff_extrinsic_k1(n, s).unwrap()
                } else {
                    coeff_extrinsic(n, k, s).unwrap()
                };
                ok &= p.entries[0].coeff == direct.entries[0].coeff;
            }
        }
    }

    let elapsed = t0.elapsed();
    within(elapsed, 10.0, "coefficient consistency grids");
    report(2, "exact coefficient-table consistency", ok, elapsed);
}

#[test]
fn criterion_3_polytope_measure_identities() {
    let t0 = Instant::now();
    let mut ok = true;

    // Generalized measures decompose against the metric tensor:
    // phi^{r,s,1}_{n-1} = Q phi^{r,s,0}_{n-1} - phi^{r,s+2,0}_{n-1}.
    for (name, n) in [("cube", 2usize), ("cube", 3), ("simplex", 3)] {
        let p = catalog(name, n).unwrap();
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
                let gen1 = phi(&p, &mk(s, 1), None).unwrap().value;
                let p0 = phi(&p, &mk(s, 0), None).unwrap().value;
                let p2 = phi(&p, &mk(s + 2, 0), None).unwrap().value;
                let rhs = q.sym_mul(&p0).unwrap().sub(&p2).unwrap();
                ok &= gen1.approx_eq(&rhs, 1e-8);
            }
        }
    }

    // Face-sum identity: ((n-j+s)/(s+1)) Phi_j^{0,s+2} equals the sum over
    // j-faces of Q(F^perp), the face volume, and the normal-cone moment.
    let opts = ConeMomentOpts::default();
    for (name, n) in [("cube", 2usize), ("cube", 3), ("simplex", 3)] {
        let p = catalog(name, n).unwrap();
        let q = q_metric::<f64>(n);
        for j in [n - 1, n - 2] {
            for s in 0..=3u32 {
                let lhs = minkowski_tensor(&p, j, 0, s + 2)
                    .unwrap()
                    .scale(&(((n - j) as f64 + s as f64) / (s as f64 + 1.0)));
                let mut rhs = FloatTensor::zero(n, s as usize + 2);
                for f in p.faces(j) {
                    let cone = p.normal_cone(f).unwrap();
                    let (_, fb) = p.face_frame(f);
                    let qperp = q.sub(&q_of_subspace(&fb, n).unwrap()).unwrap();
                    let cm = cone_sphere_moment(&p, f, &cone, s, None, &opts);
                    rhs = rhs
                        .add(&qperp.sym_mul(&cm).unwrap().scale(&p.face_volume(f)))
                        .unwrap();
                }
                ok &= lhs.approx_eq(&rhs, 1e-8);
            }
        }
    }

    let elapsed = t0.elapsed();
    within(elapsed, 10.0, "polytope measure identities");
    report(3, "float curvature-measure identities on catalog bodies", ok, elapsed);
}

#[test]
fn criterion_4_grassmannian_moment_integrals() {
    const SAMPLES: u64 = 100_000;
    const SEED: u64 = 0xacce_17ed;
    let t0 = Instant::now();
    let mut ok = true;
    let mut run = |rep: integeo::grassmann_mc::CheckReport, t_run: Instant| {
        within(t_run.elapsed(), 30.0, &rep.name);
        ok &= rep.pass;
    };

    // Moments of the restricted metric tensor over random subspaces.
    for n in 2..=4usize {
        for k in 0..n {
            for i in 0..=2u32 {
                let t = Instant::now();
                run(
                    check_q_power_integral(n, k, i, SAMPLES, SEED ^ ((n * 16 + k) as u64)).unwrap(),
                    t,
                );
            }
        }
    }
    // Squared generalized sine against a fixed subspace, with metric powers.
    for (k, r) in [(2usize, 2usize), (2, 3)] {
        for i in 0..=1u32 {
            let t = Instant::now();
            run(
                check_sine_q_integral(3, k, r, i, SAMPLES, SEED ^ (0x40 + (r * 2) as u64 + i as u64))
                    .unwrap(),
                t,
            );
        }
    }
    // Projected-direction integrand, planes in R^3 (k > 1 branch).
    for s in 0..=2u32 {
        for i in 0..=1u32 {
            let t = Instant::now();
            run(
                check_projection_integrand(3, 2, 1, s, i, SAMPLES, SEED ^ (0x80 + (s * 2 + i) as u64))
                    .unwrap(),
                t,
            );
        }
    }
    // Projected-direction integrand, lines in R^3 (k = 1 branch).
    for s in 0..=3u32 {
        for i in 0..=1u32 {
            let t = Instant::now();
            run(
                check_projection_integrand(3, 1, 0, s, i, SAMPLES, SEED ^ (0xc0 + (s * 2 + i) as u64))
                    .unwrap(),
                t,
            );
        }
    }

    report(4, "Monte Carlo Grassmannian moment integrals", ok, t0.elapsed());
}

fn verify_pass(
    formula: FormulaId,
    params: FormulaParams,
    poly: &Polytope,
    region: Option<&[Halfspace]>,
    samples: u64,
    seed: u64,
) -> (bool, f64) {
    let t = Instant::now();
    let opts = VerifyOpts { samples, seed, workers: None };
    let rep = verify(formula, &params, poly, region, &opts).unwrap();
    within(t.elapsed(), 60.0, formula.as_str());
    (rep.pass, rep.rhs.max_abs())
}

#[test]
fn criterion_5_crofton_formulas_end_to_end() {
    const SAMPLES: u64 = 100_000;
    const SEED: u64 = 0x5eed_cafe;
    let t0 = Instant::now();
    let cube3 = catalog("cube", 3).unwrap();
    let simplex3 = catalog("simplex", 3).unwrap();
    let mut ok = true;

    // (a) Top-order slice moments over planes in R^3, including the claim
    // that every odd translation power integrates to zero.
    for i in 0..=1u32 {
        for r in 0..=1u32 {
            let p = FormulaParams { n: 3, k: 2, r, i, ..Default::default() };
            let (pass, _) = verify_pass(FormulaId::ThmJEqK, p, &cube3, None, SAMPLES, SEED ^ 0x0a);
            ok &= pass;
        }
    }
    let p = FormulaParams { n: 3, k: 2, s: 1, ..Default::default() };
    let (pass, rhs_mag) = verify_pass(FormulaId::ThmJEqK, p, &cube3, None, SAMPLES, SEED ^ 0x0b);
    ok &= pass && rhs_mag == 0.0;

    // (b) Line-slice formula, local against a clipping box and global.
    let boxr = AaBox::new(vec![-0.25; 3], vec![0.6; 3]).halfspaces();
    for s in 0..=2u32 {
        for i in 0..=1u32 {
            let p = FormulaParams { n: 3, k: 1, s, i, ..Default::default() };
            let (pass, _) = verify_pass(
                FormulaId::ThmK1Local,
                p,
                &cube3,
                Some(&boxr),
                SAMPLES,
                SEED ^ (0x10 + (s * 2 + i) as u64),
            );
            ok &= pass;
            let (pass, _) = verify_pass(
                FormulaId::ThmK1Local,
                p,
                &cube3,
                None,
                SAMPLES,
                SEED ^ (0x20 + (s * 2 + i) as u64),
            );
            ok &= pass;
        }
    }

    // (c) General local family and its unweighted corollary, planes in R^3.
    for (body, tag) in [(&cube3, 0u64), (&simplex3, 1)] {
        for s in 0..=2u32 {
            let p = FormulaParams { n: 3, k: 2, j: 1, s, ..Default::default() };
            let (pass, _) = verify_pass(
                FormulaId::ThmLocalGeneral,
                p,
                body,
                None,
                SAMPLES,
                SEED ^ (0x30 + tag * 8 + s as u64),
            );
            ok &= pass;
            let (pass, _) = verify_pass(
                FormulaId::CorJKm1,
                p,
                body,
                None,
                SAMPLES,
                SEED ^ (0x50 + tag * 8 + s as u64),
            );
            ok &= pass;
        }
    }

    // (d) Extrinsic slice measures, planes in R^3; s=1 exercises the
    // special odd-s coefficient branch. Run at 2e5 samples.
    for s in 0..=2u32 {
        let p = FormulaParams { n: 3, k: 2, s, ..Default::default() };
        let (pass, _) = verify_pass(
            FormulaId::ThmExtJKm1,
            p,
            &cube3,
            None,
            2 * SAMPLES,
            SEED ^ (0x60 + s as u64),
        );
        ok &= pass;
    }

    // (e) Extrinsic slice measures over lines in R^3.
    for s in 0..=3u32 {
        let p = FormulaParams { n: 3, k: 1, s, ..Default::default() };
        let (pass, _) = verify_pass(
            FormulaId::ThmExtK1,
            p,
            &cube3,
            None,
            SAMPLES,
            SEED ^ (0x70 + s as u64),
        );
        ok &= pass;
    }

    // (f) The global line formula vanishes at odd s while the local one
    // does not: the zero is a cancellation over the whole body, not a
    // pointwise one.
    let p = FormulaParams { n: 3, k: 1, s: 1, ..Default::default() };
    let (pass, rhs_mag) = verify_pass(FormulaId::CorK1Global, p, &cube3, None, SAMPLES, SEED ^ 0x80);
    ok &= pass && rhs_mag == 0.0;
    let (pass, rhs_mag) =
        verify_pass(FormulaId::ThmK1Local, p, &cube3, Some(&boxr), SAMPLES, SEED ^ 0x81);
    ok &= pass && rhs_mag > 0.0;

    report(5, "Monte Carlo flat-integral verification end to end", ok, t0.elapsed());
}

#[test]
fn criterion_6_summary() {
    // The underlying results are closed-form identities, not experiments:
    // there is no dataset or large-scale computation to reproduce.
    // Acceptance therefore rests on criteria 1-5 — exact identities plus
    // statistically controlled Monte Carlo equivalence — together with the
    // command-line entry points exercised below.
    let exe = env!("CARGO_BIN_EXE_integeo");
    let run = |args: &[&str]| {
        std::process::Command::new(exe)
            .args(args)
            .output()
            .expect("failed to launch CLI")
    };

    let out = run(&["coeffs", "--formula", "cor_s3", "--n", "3", "--k", "2", "--j", "1"]);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let mut ok = out.status.success() && text.contains("1/3");

    let out = run(&["coeffs", "--formula", "thm_j_eq_k", "--n", "3", "--k", "1", "--i", "1"]);
    ok &= out.status.success() && String::from_utf8_lossy(&out.stdout).contains("1/3");

    let out = run(&["tensor", "--body", "cube:3", "--j", "1", "--s", "0"]);
    ok &= out.status.success() && String::from_utf8_lossy(&out.stdout).contains("18.84955");

    let out = run(&["coeffs", "--formula", "thm_local_general", "--n", "3", "--k", "1", "--j", "0"]);
    ok &= !out.status.success();

    let out = run(&["catalog", "--body", "simplex:3"]);
    ok &= out.status.success() && String::from_utf8_lossy(&out.stdout).contains("face_counts");

    let out = run(&[
        "verify", "--formula", "thm_k1_local", "--body", "cube:3", "--s", "2", "--samples",
        "20000", "--seed", "7",
    ]);
    ok &= out.status.success() && String::from_utf8_lossy(&out.stdout).contains("PASS");

    report(6, "acceptance rests on criteria 1-5; CLI entry points respond", ok, Duration::ZERO);
}
