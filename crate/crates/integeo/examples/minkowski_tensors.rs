//! Minkowski tensors and localized curvature measures of catalog polytopes.
//!
//! The scalar specialization recovers the intrinsic volumes: with the
//! normalization used here, phi_j^{0,0,0}(P, R^n) = omega_{n-j} * V_j(P),
//! where omega_m is the surface area of the unit (m-1)-sphere.

use integeo::exact_scalar::omega;
use integeo::polytope::{catalog, AaBox};
use integeo::symtensor::FloatTensor;
use integeo::tencm::{minkowski_tensor, phi, Kind, MeasureSpec};

fn intrinsic_volume(t: &FloatTensor, n: usize, j: usize) -> f64 {
    if j == n {
        // Top order carries no spherical factor: it is the volume itself.
        t.scalar_value()
    } else {
        t.scalar_value() / omega((n - j) as u32).to_f64()
    }
}

fn main() {
    for (name, n) in [("cube", 3usize), ("simplex", 3), ("crosspolytope", 3)] {
        let p = catalog(name, n).unwrap();
        print!("{name}(3): intrinsic volumes V_0..V_3 = ");
        for j in 0..=n {
            let t = minkowski_tensor(&p, j, 0, 0).unwrap();
            print!("{:.3} ", intrinsic_volume(&t, n, j));
        }
        println!();
    }
    // Unit cube: V = (1, 3, 3, 1) — Euler characteristic, quarter of the
    // total edge length, half the surface area, volume. Vertex solid angles
    // of non-orthogonal cones come from a Monte Carlo tier, so V_0 carries
    // ~1e-3 noise.

    // A rank-2 tensor: the s=2 normal-direction moment of the unit cube at
    // order 1 (edges). Symmetry forces a multiple of the identity.
    let cube = catalog("cube", 3).unwrap();
    let t = minkowski_tensor(&cube, 1, 0, 2).unwrap();
    println!("\ncube(3) edge-normal second moment (diagonal entries):");
    println!(
        "  [200] = {:.6}, [020] = {:.6}, [002] = {:.6}, [110] = {:.6}",
        t.component(&[2, 0, 0]),
        t.component(&[0, 2, 0]),
        t.component(&[0, 0, 2]),
        t.component(&[1, 1, 0]),
    );

    // Localization: restrict the facet measure of the cube to a corner box.
    // The box keeps 3 of the 6 facets, each clipped to a quarter, so the
    // scalar value drops from 6 to 3/4.
    let corner = AaBox::new(vec![-1.0; 3], vec![0.5; 3]).halfspaces();
    let spec = MeasureSpec { ambient_dim: 3, order: 2, r: 0, s: 0, eps: 0, kind: Kind::Extrinsic };
    let total = phi(&cube, &spec, None).unwrap().value.scalar_value();
    let local = phi(&cube, &spec, Some(&corner)).unwrap().value.scalar_value();
    println!("\ncube(3) facet measure: total = {total:.6}, corner box = {local:.6}");

    // Position-weighted measure (r = 1): first moment of the volume.
    let m1 = minkowski_tensor(&cube, 3, 1, 0).unwrap();
    println!(
        "cube(3) volume first moment = ({:.4}, {:.4}, {:.4}) — the centroid",
        m1.component(&[1, 0, 0]),
        m1.component(&[0, 1, 0]),
        m1.component(&[0, 0, 1]),
    );
}
