//! The recombined tensor basis in which the flat-integral formula for
//! extrinsic slice measures has a single term: basis transform, its
//! inverse, and the single-term coefficient.

use integeo::crofton::{coeff_extrinsic, coeff_psi, FormulaParams};
use integeo::grassmann_mc::{verify, VerifyOpts};
use integeo::polytope::catalog;
use integeo::tencm::{minkowski_tensor, phi_from_psi, psi_from_phi};

fn main() {
    let n = 3usize;
    let s = 4u32;
    let cube = catalog("cube", n).unwrap();

    // The transform recombines phi^{0,s}, Q phi^{0,s-2}, Q^2 phi^{0,s-4}, ...
    // into a new rank-s tensor, and is exactly invertible.
    let phis: Vec<_> = (0..=s / 2)
        .map(|m| minkowski_tensor(&cube, n - 1, 0, s - 2 * m).unwrap())
        .collect();
    let psis: Vec<_> = (0..=s / 2)
        .map(|m| psi_from_phi(&phis[m as usize..], n, s - 2 * m).unwrap())
        .collect();
    // Rebuilding phi^{0,s} from the full transformed list must return the
    // original exactly.
    let back = phi_from_psi(&psis, n, s).unwrap();
    println!(
        "round trip max error = {:.2e}",
        back.max_diff(&phis[0])
    );

    // In this basis the slice formula is a single multiple, while the plain
    // extrinsic formula needs a full table of metric-power corrections.
    let single = coeff_psi(n, 2, s).unwrap();
    let table = coeff_extrinsic(n, 2, s).unwrap();
    println!(
        "transformed basis: 1 term (coeff = {}); plain basis: {} terms",
        single.entries[0].coeff,
        table.entries.len()
    );

    // Monte Carlo check of the single-term formula itself.
    let params = FormulaParams { n, k: 2, s, ..Default::default() };
    let opts = VerifyOpts { samples: 100_000, seed: 7, workers: None };
    let rep = verify(integeo::crofton::FormulaId::CorPsi, &params, &cube, None, &opts).unwrap();
    println!(
        "single-term formula, planes in R^3, s=4: z_max = {:.2} -> {}",
        rep.z_max,
        if rep.pass { "PASS" } else { "FAIL" }
    );
}
