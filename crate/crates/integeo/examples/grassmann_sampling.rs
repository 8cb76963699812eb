//! Sampling random subspaces and affine flats: rotation invariance,
//! principal angles, and the classical line-hitting measure of a convex
//! body in the plane.

use integeo::grassmann_mc::{
    check_q_power_integral, generalized_sine, sample_grassmann, stream_rng, FlatSampler,
};
use integeo::polytope::catalog;

fn main() {
    let mut rng = stream_rng(12345, 0);

    // The generalized sine of two subspaces: product of sines of their
    // principal angles. Orthogonal line and plane in R^3 give 1, a line
    // inside the plane gives 0.
    let l = sample_grassmann(&mut rng, 3, 1);
    let p = sample_grassmann(&mut rng, 3, 2);
    println!("[line, plane] for random draws = {:.4}", generalized_sine(&l, &p));

    // Haar invariance in action: the moment E[Q(L)^i] over random k-planes
    // is an exact multiple of Q^i; the library checks this against its
    // closed form.
    let rep = check_q_power_integral(4, 2, 2, 200_000, 99).unwrap();
    println!(
        "E[Q(L)^2] over 2-planes in R^4: z_max = {:.2} at {} samples -> {}",
        rep.z_max,
        rep.samples,
        if rep.pass { "PASS" } else { "FAIL" }
    );

    // Affine flats: the sampler draws lines through a window around the
    // body and reports the window's measure as an importance weight, so
    // weight * P(hit) estimates the rigid-motion measure of hitting lines.
    // For a convex body in the plane that measure equals perimeter / pi:
    // 4/pi for the unit square.
    let square = catalog("cube", 2).unwrap();
    let sampler = FlatSampler::new(&square, 1);
    let samples = 200_000u64;
    let mut hits = 0u64;
    for _ in 0..samples {
        let (basis, point) = sampler.sample(&mut rng);
        if square.slice(&basis, &point).is_some() {
            hits += 1;
        }
    }
    let est = sampler.weight * hits as f64 / samples as f64;
    println!(
        "measure of lines hitting the unit square: {est:.4} (exact 4/pi = {:.4})",
        4.0 / std::f64::consts::PI
    );
}
