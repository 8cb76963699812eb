//! Exact half-integer Gamma arithmetic: evaluate the four alternating-sum
//! identities that power the coefficient tables, entirely in rational
//! multiples of powers of sqrt(pi).

use integeo::exact_scalar::{gamma_half, lemma61, lemma62, lemma63, lemma64};

fn main() {
    // Gamma at half-integers: Gamma(5/2) = 3/4 * sqrt(pi).
    println!("Gamma(5/2) = {}", gamma_half(5).unwrap());

    // Identity 1: an alternating sum of Gamma ratios telescopes.
    let (lhs, rhs) = lemma61(3, 5, 7).unwrap();
    println!("alternating Gamma-ratio sum   (q=3, a=5/2, b=7/2): {lhs} = {rhs}");

    // Identity 2: alternating inverse-Gamma sum.
    let (lhs, rhs) = lemma62(4);
    println!("alternating inverse-Gamma sum (a=4):               {lhs} = {rhs}");

    // Identity 3: four-Gamma alternating sum (admissible parameters only).
    let (lhs, rhs) = lemma63(9, 3, 5, 2).unwrap();
    println!("four-Gamma alternating sum    (a=9/2,b=3/2,c=5/2): {lhs} = {rhs}");

    // Identity 4: weighted Gamma-ratio sum.
    let (lhs, rhs) = lemma64(9, 3, 2).unwrap();
    println!("weighted Gamma-ratio sum      (a=9/2, b=3/2, t=2): {lhs} = {rhs}");

    // The identities hold with exact equality on the full admissible grid.
    let mut cases = 0u32;
    for ta in 1..=12i64 {
        for tb in 1..=12i64 {
            for tc in 1..=12i64 {
                for z in 0..=4u32 {
                    if let Ok((l, r)) = lemma63(ta, tb, tc, z) {
                        assert_eq!(l, r);
                        cases += 1;
                    }
                }
            }
        }
    }
    println!("checked {cases} admissible four-Gamma cases exactly: all equal");
}
