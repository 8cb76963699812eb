//! Slice a polytope with an affine flat, compute the curvature measures of
//! the slice inside the flat, and convert them to measures in the ambient
//! space.

use nalgebra::{DMatrix, DVector};

use integeo::polytope::catalog;
use integeo::tencm::{intrinsic_to_extrinsic, phi_embedded, ConeMomentOpts, Kind, MeasureSpec};

fn main() {
    let cube = catalog("cube", 3).unwrap();

    // A plane through the centroid, tilted against the coordinate axes.
    let b1 = DVector::from_vec(vec![1.0, 1.0, 0.0]).normalize();
    let b2 = {
        let v = DVector::from_vec(vec![-1.0, 1.0, 1.0]);
        let v = &v - &b1 * b1.dot(&v);
        v.normalize()
    };
    let basis = DMatrix::from_columns(&[b1.clone(), b2.clone()]);
    let point = cube.centroid();

    let (slice, embed) = cube.slice(&basis, &point).expect("plane misses the cube");
    println!("cube(3) cut by a tilted plane: slice has {} vertices", slice.vertices().len());

    // Curvature measures of the slice, computed inside the flat (dimension 2)
    // but expressed in ambient coordinates through the embedding.
    let opts = ConeMomentOpts::default();
    let s = 2u32;
    let intrinsic: Vec<_> = (0..=s / 2)
        .map(|m| {
            let spec = MeasureSpec {
                ambient_dim: 2,
                order: 1,
                r: 0,
                s: s - 2 * m,
                eps: 0,
                kind: Kind::Intrinsic,
            };
            phi_embedded(&slice, Some(&embed), &spec, None, &opts).unwrap()
        })
        .collect();
    println!(
        "slice boundary measure (intrinsic, s=2): trace = {:.6}",
        intrinsic[0].component(&[2, 0, 0])
            + intrinsic[0].component(&[0, 2, 0])
            + intrinsic[0].component(&[0, 0, 2])
    );

    // Convert to the extrinsic measure of the slice as a subset of R^3.
    let flat_basis = [b1, b2];
    let extrinsic = intrinsic_to_extrinsic(&intrinsic, &flat_basis, 1, 2, s, 3).unwrap();
    println!(
        "slice boundary measure (extrinsic, s=2): trace = {:.6}",
        extrinsic.component(&[2, 0, 0])
            + extrinsic.component(&[0, 2, 0])
            + extrinsic.component(&[0, 0, 2])
    );

    // Scalar sanity check: the order-1 intrinsic measure at s=0 equals
    // omega_1 * V_1(slice) = perimeter of the slice polygon.
    let spec = MeasureSpec { ambient_dim: 2, order: 1, r: 0, s: 0, eps: 0, kind: Kind::Intrinsic };
    let perim = phi_embedded(&slice, Some(&embed), &spec, None, &opts).unwrap().scalar_value() / 2.0;
    println!("slice perimeter = {perim:.6}");
}
