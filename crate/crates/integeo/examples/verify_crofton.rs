//! End-to-end Monte Carlo verification of a flat-integral formula: the
//! average of a slice measure over random affine flats hitting the body
//! must match an exact linear combination of curvature measures of the
//! body itself.

use integeo::crofton::{FormulaId, FormulaParams};
use integeo::grassmann_mc::{verify, VerifyOpts};
use integeo::polytope::{catalog, AaBox};

fn main() {
    let cube = catalog("cube", 3).unwrap();
    let opts = VerifyOpts { samples: 100_000, seed: 42, workers: None };

    // Lines in R^3 against the cube, quadratic normal moment (s = 2),
    // restricted to a clipping box.
    let region = AaBox::new(vec![-0.25; 3], vec![0.6; 3]).halfspaces();
    let params = FormulaParams { n: 3, k: 1, s: 2, ..Default::default() };
    let rep = verify(FormulaId::ThmK1Local, &params, &cube, Some(&region), &opts).unwrap();
    println!(
        "lines, s=2, local:  z_max = {:.2}, max |lhs-rhs| = {:.2e}  -> {}",
        rep.z_max,
        rep.max_abs_diff,
        if rep.pass { "PASS" } else { "FAIL" }
    );

    // Planes in R^3, order-1 target with an s-power and the generalized
    // face-metric terms on the right-hand side.
    let params = FormulaParams { n: 3, k: 2, j: 1, s: 2, ..Default::default() };
    let rep = verify(FormulaId::ThmLocalGeneral, &params, &cube, None, &opts).unwrap();
    println!(
        "planes, s=2, global: z_max = {:.2}, max |lhs-rhs| = {:.2e}  -> {}",
        rep.z_max,
        rep.max_abs_diff,
        if rep.pass { "PASS" } else { "FAIL" }
    );

    // The global line formula vanishes identically at odd s: the flat
    // average cancels over the whole body.
    let params = FormulaParams { n: 3, k: 1, s: 1, ..Default::default() };
    let rep = verify(FormulaId::CorK1Global, &params, &cube, None, &opts).unwrap();
    println!(
        "lines, s=1, global:  |lhs| <= {:.2e}, rhs = 0          -> {}",
        rep.lhs.max_abs(),
        if rep.pass { "PASS" } else { "FAIL" }
    );

    // Full machine-readable report of the last run.
    println!("\n{}", serde_json::to_string_pretty(&rep.to_json()).unwrap());
}
