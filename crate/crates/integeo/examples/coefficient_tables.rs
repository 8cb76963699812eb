//! Print exact coefficient tables for several flat-integral formula
//! families. Every value is a rational multiple of a power of sqrt(pi).

use integeo::crofton::{coefficient_table, FormulaId, FormulaParams};

fn show(formula: FormulaId, p: FormulaParams) {
    let table = coefficient_table(formula, &p).unwrap();
    println!(
        "{} (n={} k={} j={} s={} i={}):",
        formula.as_str(),
        table.params.n,
        table.params.k,
        table.params.j,
        table.params.s,
        table.params.i
    );
    for e in &table.entries {
        println!(
            "  Q^{} phi[order={}, s={}, eps={}]  coeff = {}",
            e.q_power, e.target.order, e.target.s_exp, e.target.eps, e.coeff
        );
    }
    println!();
}

fn main() {
    // Top-order slice moments over planes in R^3.
    show(FormulaId::ThmJEqK, FormulaParams { n: 3, k: 2, i: 1, ..Default::default() });

    // General local family: planes in R^3, order-1 target, s = 2.
    show(FormulaId::ThmLocalGeneral, FormulaParams { n: 3, k: 2, j: 1, s: 2, ..Default::default() });

    // Line-slice family with a metric power.
    show(FormulaId::ThmK1Local, FormulaParams { n: 3, k: 1, s: 2, i: 1, ..Default::default() });

    // Unweighted corollary at s=3: collapses to the single value 1/binom(n,2).
    show(FormulaId::CorI0, FormulaParams { n: 3, k: 2, j: 1, s: 3, ..Default::default() });

    // Extrinsic slice measures; s=1 takes a dedicated odd-s branch.
    show(FormulaId::ThmExtJKm1, FormulaParams { n: 3, k: 2, s: 1, ..Default::default() });

    // In the recombined tensor basis the formula has a single term.
    show(FormulaId::CorPsi, FormulaParams { n: 4, k: 2, s: 4, ..Default::default() });

    // Machine-readable form: CSV with exact "p/q * pi^(m/2)" cells.
    let table = coefficient_table(
        FormulaId::CorJKm1,
        &FormulaParams { n: 3, k: 2, s: 2, ..Default::default() },
    )
    .unwrap();
    println!("CSV form of {}:\n{}", table.formula.as_str(), table.to_csv());
}
