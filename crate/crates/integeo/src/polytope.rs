//! Desk-scale convex polytope geometry.
//!
//! Polytopes are given by their vertices; facets are found by brute-force
//! supporting-hyperplane enumeration over n-subsets and the full face
//! lattice is assembled by closing the facet vertex sets under
//! intersection. This is O(C(V,n)·V) but auditable, and the configured
//! vertex cap keeps it comfortably fast at desk scale.
//!
//! Geometric tolerances: 1e−9 for on-hyperplane/containment tests,
//! coordinates snapped to a 1e−12 grid during canonicalization.

use nalgebra::{DMatrix, DVector};

use crate::symtensor::{multi_indices, vec_pow, FloatTensor};
use crate::{Error, Result};

/// On-hyperplane / containment tolerance.
pub const GEOM_TOL: f64 = 1e-9;
/// Coordinate snapping grid.
const SNAP: f64 = 1e-12;
/// Default vertex cap for `build`.
pub const DEFAULT_VERTEX_CAP: usize = 64;

/// Closed halfspace { x : normal·x ≤ offset }.
#[derive(Clone, Debug)]
pub struct Halfspace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

/// Axis-aligned box, the supported local (Borel) window β.
#[derive(Clone, Debug)]
pub struct AaBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl AaBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Self {
        assert_eq!(min.len(), max.len());
        Self { min, max }
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let n = self.min.len();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut up = DVector::zeros(n);
            up[i] = 1.0;
            out.push(Halfspace { normal: up.clone(), offset: self.max[i] });
            out.push(Halfspace { normal: -up, offset: -self.min[i] });
        }
        out
    }
}

/// Isometric affine embedding x = offset + basis·y of R^k into R^n.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// Point of R^n at y = 0.
    pub offset: DVector<f64>,
    /// n×k matrix with orthonormal columns.
    pub basis: DMatrix<f64>,
}

impl Embedding {
    pub fn identity(n: usize) -> Self {
        Self { offset: DVector::zeros(n), basis: DMatrix::identity(n, n) }
    }

    pub fn point(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.offset + &self.basis * y
    }

    pub fn direction(&self, w: &DVector<f64>) -> DVector<f64> {
        &self.basis * w
    }

    /// Ambient dimension n.
    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }
}

/// Pull halfspaces of the ambient space back through an embedding.
///
/// Returns `None` when a constraint excludes the whole flat (the pulled-back
/// region is empty); constraints that are inactive on the flat are dropped.
pub fn pull_back_halfspaces(hs: &[Halfspace], embed: &Embedding) -> Option<Vec<Halfspace>> {
    let mut out = Vec::with_capacity(hs.len());
    for h in hs {
        let g = embed.basis.transpose() * &h.normal;
        let c = h.offset - h.normal.dot(&embed.offset);
        if g.norm() < 1e-12 {
            if c < -GEOM_TOL {
                return None;
            }
        } else {
            out.push(Halfspace { normal: g, offset: c });
        }
    }
    Some(out)
}

/// A face of the lattice, identified by its (sorted) vertex id set.
#[derive(Clone, Debug)]
pub struct Face {
    pub dim: usize,
    pub vertex_ids: Vec<usize>,
    /// Indices into the facet list of all facets containing this face.
    pub containing_facets: Vec<usize>,
}

/// Normal cone N(P,F) of a j-face: the outer normals of P along F.
#[derive(Clone, Debug)]
pub struct NormalCone {
    /// Cone dimension n − j.
    pub dim: usize,
    /// Outward unit normals of all facets containing the face.
    pub generators: Vec<DVector<f64>>,
    /// Orthonormal basis of the cone's linear span (the face's orthogonal
    /// direction space).
    pub span: Vec<DVector<f64>>,
}

/// A full-dimensional convex polytope with its face lattice.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<DVector<f64>>,
    /// faces[j] for j = 0..=dim; faces[dim] is the single body face.
    faces: Vec<Vec<Face>>,
    facet_normals: Vec<DVector<f64>>,
    facet_offsets: Vec<f64>,
}

fn snap(x: f64) -> f64 {
    (x / SNAP).round() * SNAP
}

fn affine_rank(points: &[&DVector<f64>], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let n = points[0].len();
    let mut m = DMatrix::zeros(points.len() - 1, n);
    for (i, p) in points[1..].iter().enumerate() {
        m.set_row(i, &(*p - points[0]).transpose());
    }
    m.svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// Iterate over all k-subsets of 0..n, calling `f` with each index slice.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Polytope {
    /// Build a polytope from its (candidate) vertex set.
    pub fn build(points: &[DVector<f64>]) -> Result<Self> {
        Self::build_with_cap(points, DEFAULT_VERTEX_CAP)
    }

    pub fn build_with_cap(points: &[DVector<f64>], cap: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Degenerate("no input points".into()));
        }
        let n = points[0].len();
        if n == 0 {
            return Err(Error::Degenerate("zero-dimensional ambient space".into()));
        }
        // Canonicalize: snap coordinates, drop near-duplicates.
        let mut pts: Vec<DVector<f64>> = Vec::new();
        for p in points {
            if p.len() != n {
                return Err(Error::Shape("points of mixed dimension".into()));
            }
            let q = DVector::from_iterator(n, p.iter().map(|&x| snap(x)));
            if !pts.iter().any(|r| (r - &q).norm() <= GEOM_TOL) {
                pts.push(q);
            }
        }
        if pts.len() > cap {
            return Err(Error::Degenerate(format!(
                "vertex cap exceeded: {} > {}",
                pts.len(),
                cap
            )));
        }
        if pts.len() < n + 1 {
            return Err(Error::Degenerate("need at least n+1 affinely independent points".into()));
        }
        let refs: Vec<&DVector<f64>> = pts.iter().collect();
        if affine_rank(&refs, 1e-7) < n {
            return Err(Error::Degenerate("input not full-dimensional".into()));
        }

        let centroid: DVector<f64> =
            pts.iter().fold(DVector::zeros(n), |acc, p| acc + p) / pts.len() as f64;

        // Brute-force supporting-hyperplane enumeration over n-subsets.
        let mut facet_sets: Vec<Vec<usize>> = Vec::new();
        let mut facet_normals: Vec<DVector<f64>> = Vec::new();
        let mut facet_offsets: Vec<f64> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for_each_subset(pts.len(), n, |sub| {
            let normal = if n == 1 {
                DVector::from_element(1, 1.0)
            } else {
                // Pad with a zero row so the SVD exposes the 1-dim nullspace.
                let mut d = DMatrix::zeros(n, n);
                for (row, &i) in sub[1..].iter().enumerate() {
                    d.set_row(row, &(&pts[i] - &pts[sub[0]]).transpose());
                }
                let svd = d.svd(false, true);
                let sv = &svd.singular_values;
                if sv.iter().filter(|&&s| s > 1e-7).count() < n - 1 {
                    return; // degenerate subset; facet found via another subset
                }
                let vt = svd.v_t.as_ref().unwrap();
                vt.row(n - 1).transpose()
            };
            let offset = normal.dot(&pts[sub[0]]);
            let sides: Vec<f64> = pts.iter().map(|p| normal.dot(p) - offset).collect();
            let max = sides.iter().cloned().fold(f64::MIN, f64::max);
            let min = sides.iter().cloned().fold(f64::MAX, f64::min);
            let (normal, offset) = if max <= GEOM_TOL {
                (normal, offset)
            } else if min >= -GEOM_TOL {
                (-normal, -offset)
            } else {
                return; // not supporting
            };
            // orient outward (centroid strictly inside)
            debug_assert!(normal.dot(&centroid) < offset + GEOM_TOL);
            let on: Vec<usize> = sides
                .iter()
                .enumerate()
                .filter(|(_, &s)| s.abs() <= GEOM_TOL)
                .map(|(i, _)| i)
                .collect();
            if seen.insert(on.clone()) {
                facet_sets.push(on);
                facet_normals.push(normal);
                facet_offsets.push(offset);
            }
        });
        if facet_sets.len() < n + 1 {
            return Err(Error::Degenerate("facet enumeration found an unbounded shape".into()));
        }

        // Extreme points: vertices whose containing facet normals span R^n.
        let mut keep = Vec::new();
        for i in 0..pts.len() {
            let normals: Vec<&DVector<f64>> = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(&i))
                .map(|(f, _)| &facet_normals[f])
                .collect();
            if normals.len() < n {
                continue;
            }
            let mut m = DMatrix::zeros(normals.len(), n);
            for (r, v) in normals.iter().enumerate() {
                m.set_row(r, &v.transpose());
            }
            let rank = m.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-7).count();
            if rank == n {
                keep.push(i);
            }
        }
        let remap: std::collections::BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices: Vec<DVector<f64>> = keep.iter().map(|&i| pts[i].clone()).collect();
        let facet_sets: Vec<Vec<usize>> = facet_sets
            .iter()
            .map(|s| {
                let mut v: Vec<usize> = s.iter().filter_map(|i| remap.get(i).copied()).collect();
                v.sort_unstable();
                v
            })
            .collect();

        // Face lattice: close facet vertex sets under pairwise intersection.
        let mut sets: std::collections::BTreeSet<Vec<usize>> =
            facet_sets.iter().cloned().collect();
        loop {
            let snapshot: Vec<Vec<usize>> = sets.iter().cloned().collect();
            let before = sets.len();
            for i in 0..snapshot.len() {
                for j in i + 1..snapshot.len() {
                    let inter = intersect_sorted(&snapshot[i], &snapshot[j]);
                    if !inter.is_empty() {
                        sets.insert(inter);
                    }
                }
            }
            if sets.len() == before {
                break;
            }
        }

        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); n + 1];
        for vs in sets {
            let refs: Vec<&DVector<f64>> = vs.iter().map(|&i| &vertices[i]).collect();
            let dim = affine_rank(&refs, 1e-7);
            let containing: Vec<usize> = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, fs)| is_subset_sorted(&vs, fs))
                .map(|(f, _)| f)
                .collect();
            faces[dim].push(Face { dim, vertex_ids: vs, containing_facets: containing });
        }
        // Keep the facet order aligned with the normals: rebuild faces[n−1].
        faces[n - 1] = facet_sets
            .iter()
            .enumerate()
            .map(|(f, vs)| Face { dim: n - 1, vertex_ids: vs.clone(), containing_facets: vec![f] })
            .collect();
        faces[n] = vec![Face {
            dim: n,
            vertex_ids: (0..vertices.len()).collect(),
            containing_facets: Vec::new(),
        }];

        Ok(Self { dim: n, vertices, faces, facet_normals, facet_offsets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn faces(&self, j: usize) -> &[Face] {
        &self.faces[j]
    }

    pub fn facet_normal(&self, facet: usize) -> &DVector<f64> {
        &self.facet_normals[facet]
    }

    pub fn centroid(&self) -> DVector<f64> {
        self.vertices.iter().fold(DVector::zeros(self.dim), |acc, p| acc + p)
            / self.vertices.len() as f64
    }

    /// Radius of the smallest centroid-centered ball containing the body.
    pub fn circumradius(&self) -> f64 {
        let c = self.centroid();
        self.vertices.iter().map(|v| (v - &c).norm()).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.facet_normals
            .iter()
            .zip(&self.facet_offsets)
            .all(|(nrm, &off)| nrm.dot(x) <= off + tol)
    }

    /// A point in the relative interior of the face (the vertex mean).
    pub fn face_centroid(&self, face: &Face) -> DVector<f64> {
        face.vertex_ids
            .iter()
            .fold(DVector::zeros(self.dim), |acc, &i| acc + &self.vertices[i])
            / face.vertex_ids.len() as f64
    }

    /// Anchor point plus an orthonormal basis of the face's direction space.
    pub fn face_frame(&self, face: &Face) -> (DVector<f64>, Vec<DVector<f64>>) {
        let p0 = self.vertices[face.vertex_ids[0]].clone();
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for &i in &face.vertex_ids[1..] {
            let mut d = &self.vertices[i] - &p0;
            for b in &basis {
                let c = b.dot(&d);
                d -= b * c;
            }
            let norm = d.norm();
            if norm > 1e-9 {
                basis.push(d / norm);
            }
            if basis.len() == face.dim {
                break;
            }
        }
        debug_assert_eq!(basis.len(), face.dim);
        (p0, basis)
    }

    /// Triangulate a face into j-simplices, returned as vertex-id lists.
    pub fn triangulate_face(&self, face: &Face) -> Vec<Vec<usize>> {
        if face.dim == 0 {
            return vec![face.vertex_ids.clone()];
        }
        let apex = face.vertex_ids[0];
        let mut out = Vec::new();
        for sub in &self.faces[face.dim - 1] {
            if sub.vertex_ids.contains(&apex)
                || !is_subset_sorted(&sub.vertex_ids, &face.vertex_ids)
            {
                continue;
            }
            for mut simplex in self.triangulate_face(sub) {
                simplex.push(apex);
                out.push(simplex);
            }
        }
        out
    }

    /// j-dimensional Hausdorff measure of a face (1 for vertices).
    pub fn face_volume(&self, face: &Face) -> f64 {
        if face.dim == 0 {
            return 1.0;
        }
        self.triangulate_face(face)
            .iter()
            .map(|ids| {
                let pts: Vec<DVector<f64>> =
                    ids.iter().map(|&i| self.vertices[i].clone()).collect();
                simplex_volume(&pts)
            })
            .sum()
    }

    /// The face intersected with a halfspace region, triangulated.
    ///
    /// Each simplex is a list of `face.dim + 1` points in ambient
    /// coordinates; vertices (dim 0) come back as single-point "simplices"
    /// when they satisfy the region.
    pub fn clipped_face_simplices(
        &self,
        face: &Face,
        region: Option<&[Halfspace]>,
    ) -> Vec<Vec<DVector<f64>>> {
        let to_points = |sims: Vec<Vec<usize>>| -> Vec<Vec<DVector<f64>>> {
            sims.into_iter()
                .map(|ids| ids.into_iter().map(|i| self.vertices[i].clone()).collect())
                .collect()
        };
        let Some(hs) = region else {
            return to_points(self.triangulate_face(face));
        };
        if face.dim == 0 {
            let v = &self.vertices[face.vertex_ids[0]];
            if hs.iter().all(|h| h.normal.dot(v) <= h.offset + GEOM_TOL) {
                return vec![vec![v.clone()]];
            }
            return Vec::new();
        }
        // Work in face coordinates.
        let (p0, basis) = self.face_frame(face);
        let embed = Embedding {
            offset: p0,
            basis: DMatrix::from_columns(&basis),
        };
        let Some(local_hs) = pull_back_halfspaces(hs, &embed) else {
            return Vec::new();
        };
        let local_pts: Vec<DVector<f64>> = face
            .vertex_ids
            .iter()
            .map(|&i| embed.basis.transpose() * (&self.vertices[i] - &embed.offset))
            .collect();
        let sims = clip_and_triangulate(face.dim, &local_pts, &local_hs);
        sims.into_iter()
            .map(|s| s.into_iter().map(|y| embed.point(&y)).collect())
            .collect()
    }

    /// ∫_{F∩β} x^r dH^j as a rank-r tensor over the ambient space.
    pub fn face_moment_tensor(
        &self,
        face: &Face,
        r: u32,
        region: Option<&[Halfspace]>,
    ) -> FloatTensor {
        moment_over_simplices(self.dim, &self.clipped_face_simplices(face, region), r)
    }

    /// Normal cone of a proper face.
    pub fn normal_cone(&self, face: &Face) -> Result<NormalCone> {
        if face.dim == self.dim {
            return Err(Error::Domain("the body face has no normal cone".into()));
        }
        let generators: Vec<DVector<f64>> = face
            .containing_facets
            .iter()
            .map(|&f| self.facet_normals[f].clone())
            .collect();
        // Orthonormalize the generators to get the cone's linear span.
        let mut span: Vec<DVector<f64>> = Vec::new();
        for g in &generators {
            let mut d = g.clone();
            for b in &span {
                let c = b.dot(&d);
                d -= b * c;
            }
            if d.norm() > 1e-9 {
                span.push(d.normalize());
            }
        }
        let dim = self.dim - face.dim;
        if span.len() != dim {
            return Err(Error::Degenerate(format!(
                "normal cone span has dimension {} != {}",
                span.len(),
                dim
            )));
        }
        Ok(NormalCone { dim, generators, span })
    }

    /// Membership test u ∈ N(P,F) via the support function: u is an outer
    /// normal along F iff u·x is maximized over P at F.
    pub fn cone_contains(&self, face: &Face, u: &DVector<f64>) -> bool {
        let c = self.face_centroid(face);
        let s = u.dot(&c);
        let tol = GEOM_TOL * u.norm().max(1.0);
        self.vertices.iter().all(|v| u.dot(v) <= s + tol)
    }

    /// Intersect with the affine k-flat { point + basis·y }.
    ///
    /// Returns the intersection as a full-dimensional polytope in flat
    /// coordinates together with the embedding, or `None` when the
    /// intersection is empty or of dimension < k (degenerate/tangent flats
    /// are a μ_k-null set and contribute zero to all measures).
    pub fn slice(&self, basis: &DMatrix<f64>, point: &DVector<f64>) -> Option<(Polytope, Embedding)> {
        let n = self.dim;
        let k = basis.ncols();
        assert!(k >= 1 && k < n, "slice requires 1 <= k < n");
        let mut cuts: Vec<DVector<f64>> = Vec::new();
        for face in &self.faces[n - k] {
            let (g0, fbasis) = self.face_frame(face);
            // Solve (I − AAᵀ)(point + B y − g0) = 0 for y.
            let proj = |v: &DVector<f64>| -> DVector<f64> {
                let mut w = v.clone();
                for a in &fbasis {
                    let c = a.dot(v);
                    w -= a * c;
                }
                w
            };
            let mut m = DMatrix::zeros(n, k);
            for col in 0..k {
                m.set_column(col, &proj(&DVector::from(basis.column(col))));
            }
            let rhs = proj(&(&g0 - point));
            let svd = m.svd(true, true);
            if svd.singular_values.iter().filter(|&&s| s > 1e-8).count() < k {
                continue; // flat parallel to the face: measure-zero, skip
            }
            let y = svd.solve(&rhs, 1e-12).expect("svd solve");
            let x = point + basis * &y;
            if (proj(&(&x - &g0))).norm() > GEOM_TOL * 10.0 {
                continue; // no affine intersection
            }
            if self.contains(&x, GEOM_TOL) && !cuts.iter().any(|c| (c - &x).norm() <= GEOM_TOL) {
                cuts.push(x);
            }
        }
        if cuts.len() < k + 1 {
            return None;
        }
        let local: Vec<DVector<f64>> =
            cuts.iter().map(|x| basis.transpose() * (x - point)).collect();
        let poly = Polytope::build(&local).ok()?;
        let embed = Embedding { offset: point.clone(), basis: basis.clone() };
        Some((poly, embed))
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn is_subset_sorted(sub: &[usize], sup: &[usize]) -> bool {
    let mut j = 0;
    for &x in sub {
        while j < sup.len() && sup[j] < x {
            j += 1;
        }
        if j == sup.len() || sup[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// j-dimensional volume of a simplex given as j+1 points.
pub fn simplex_volume(pts: &[DVector<f64>]) -> f64 {
    let j = pts.len() - 1;
    if j == 0 {
        return 1.0;
    }
    let n = pts[0].len();
    let mut e = DMatrix::zeros(n, j);
    for col in 1..=j {
        e.set_column(col - 1, &(&pts[col] - &pts[0]));
    }
    let gram = e.transpose() * e;
    let det = gram.determinant().max(0.0);
    let jf: f64 = (1..=j as u64).product::<u64>() as f64;
    det.sqrt() / jf
}

/// ∫ x^r over a union of j-simplices, via the closed-form simplex moment
/// ∫_Δ (x·t)^r dx = j!·vol_j(Δ)·r!/(j+r)! · Σ_{|a|=r} Π_i (v_i·t)^{a_i}.
pub fn moment_over_simplices(
    dim: usize,
    simplices: &[Vec<DVector<f64>>],
    r: u32,
) -> FloatTensor {
    let mut out = FloatTensor::zero(dim, r as usize);
    for pts in simplices {
        let j = pts.len() - 1;
        let vol = if j == 0 { 1.0 } else { simplex_volume(pts) };
        if vol == 0.0 {
            continue;
        }
        let jf: f64 = (1..=j as u64).product::<u64>() as f64;
        let rf: f64 = (1..=r as u64).product::<u64>() as f64;
        let jrf: f64 = (1..=(j as u64 + r as u64)).product::<u64>() as f64;
        let factor = jf * vol * rf / jrf;
        let mut sum = FloatTensor::zero(dim, r as usize);
        for comp in multi_indices(j + 1, r as usize) {
            let mut term = FloatTensor::constant(dim, 1.0);
            for (i, &a) in comp.iter().enumerate() {
                if a > 0 {
                    term = term.sym_mul(&vec_pow(pts[i].as_slice(), a as u32)).unwrap();
                }
            }
            sum = sum.add(&term).unwrap();
        }
        out = out.add(&sum.scale(&factor)).unwrap();
    }
    out
}

/// Clip a full-dimensional polytope (given by vertices in R^j) by
/// halfspaces, then triangulate; returns simplices in the same coordinates.
fn clip_and_triangulate(
    j: usize,
    points: &[DVector<f64>],
    hs: &[Halfspace],
) -> Vec<Vec<DVector<f64>>> {
    if j == 1 {
        // Interval clipping.
        let mut lo = points.iter().map(|p| p[0]).fold(f64::MAX, f64::min);
        let mut hi = points.iter().map(|p| p[0]).fold(f64::MIN, f64::max);
        for h in hs {
            let g = h.normal[0];
            if g > 0.0 {
                hi = hi.min(h.offset / g);
            } else if g < 0.0 {
                lo = lo.max(h.offset / g);
            }
        }
        if hi - lo <= GEOM_TOL {
            return Vec::new();
        }
        return vec![vec![DVector::from_vec(vec![lo]), DVector::from_vec(vec![hi])]];
    }
    let mut current: Vec<DVector<f64>> = points.to_vec();
    let mut poly = match Polytope::build(&current) {
        Ok(p) => p,
        Err(_) => return Vec::new(),
    };
    for h in hs {
        let inside: Vec<bool> =
            poly.vertices().iter().map(|v| h.normal.dot(v) <= h.offset + GEOM_TOL).collect();
        if inside.iter().all(|&b| b) {
            continue;
        }
        if inside.iter().all(|&b| !b) {
            return Vec::new();
        }
        current = poly
            .vertices()
            .iter()
            .zip(&inside)
            .filter(|(_, &b)| b)
            .map(|(v, _)| v.clone())
            .collect();
        for edge in poly.faces(1) {
            let (a, b) = (edge.vertex_ids[0], edge.vertex_ids[1]);
            if inside[a] == inside[b] {
                continue;
            }
            let (va, vb) = (&poly.vertices()[a], &poly.vertices()[b]);
            let (fa, fb) = (h.normal.dot(va) - h.offset, h.normal.dot(vb) - h.offset);
            let t = fa / (fa - fb);
            current.push(va + (vb - va) * t);
        }
        poly = match Polytope::build(&current) {
            Ok(p) => p,
            Err(_) => return Vec::new(), // sliver of dimension < j: measure zero
        };
    }
    let body = poly.faces(j)[0].clone();
    poly.triangulate_face(&body)
        .into_iter()
        .map(|ids| ids.into_iter().map(|i| poly.vertices()[i].clone()).collect())
        .collect()
}

/// Standard bodies with exactly known intrinsic volumes.
pub fn catalog(name: &str, n: usize) -> Result<Polytope> {
    if n < 1 || n > 6 {
        return Err(Error::InvalidParams("catalog bodies support 1 <= n <= 6".into()));
    }
    let mut pts: Vec<DVector<f64>> = Vec::new();
    match name {
        "cube" => {
            for mask in 0..(1u32 << n) {
                pts.push(DVector::from_iterator(
                    n,
                    (0..n).map(|i| ((mask >> i) & 1) as f64),
                ));
            }
        }
        "simplex" => {
            pts.push(DVector::zeros(n));
            for i in 0..n {
                let mut e = DVector::zeros(n);
                e[i] = 1.0;
                pts.push(e);
            }
        }
        "crosspolytope" => {
            for i in 0..n {
                let mut e = DVector::zeros(n);
                e[i] = 1.0;
                pts.push(e.clone());
                pts.push(-e);
            }
        }
        other => {
            return Err(Error::InvalidParams(format!("unknown catalog body '{other}'")));
        }
    }
    Polytope::build(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(p: &Polytope) -> Vec<usize> {
        (0..p.dim()).map(|j| p.faces(j).len()).collect()
    }

    #[test]
    fn cube_combinatorics() {
        let c = catalog("cube", 3).unwrap();
        assert_eq!(counts(&c), vec![8, 12, 6]);
        let s = catalog("simplex", 3).unwrap();
        assert_eq!(counts(&s), vec![4, 6, 4]);
        let x = catalog("crosspolytope", 3).unwrap();
        assert_eq!(x.faces(2).len(), 8);
    }

    #[test]
    fn planar_input_rejected() {
        let square = vec![
            DVector::from_vec(vec![0.0, 0.0, 0.0]),
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
            DVector::from_vec(vec![1.0, 1.0, 0.0]),
        ];
        assert!(Polytope::build(&square).is_err());
    }

    #[test]
    fn euler_relation() {
        for (name, n) in [("cube", 2), ("cube", 3), ("cube", 4), ("simplex", 3), ("crosspolytope", 3)] {
            let p = catalog(name, n).unwrap();
            let sum: i64 = (0..n)
                .map(|j| (if j % 2 == 0 { 1 } else { -1 }) * p.faces(j).len() as i64)
                .sum();
            assert_eq!(sum, 1 - if n % 2 == 0 { 1 } else { -1 }, "{name}({n})");
        }
    }

    #[test]
    fn normal_balance() {
        for (name, n) in [("cube", 3), ("simplex", 3), ("crosspolytope", 3)] {
            let p = catalog(name, n).unwrap();
            let mut sum = DVector::zeros(n);
            for f in p.faces(n - 1) {
                sum += p.facet_normal(f.containing_facets[0]) * p.face_volume(f);
            }
            assert!(sum.norm() < 1e-10, "{name}: {sum}");
        }
    }

    #[test]
    fn face_volumes() {
        let c = catalog("cube", 3).unwrap();
        for e in c.faces(1) {
            assert!((c.face_volume(e) - 1.0).abs() < 1e-12);
        }
        for f in c.faces(2) {
            assert!((c.face_volume(f) - 1.0).abs() < 1e-12);
        }
        let s = catalog("simplex", 3).unwrap();
        let diag = s
            .faces(2)
            .iter()
            .find(|f| f.vertex_ids.iter().all(|&i| s.vertices()[i].sum() > 0.5))
            .unwrap();
        assert!((s.face_volume(diag) - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn normal_cones() {
        let c = catalog("cube", 3).unwrap();
        for j in 0..3 {
            for f in c.faces(j) {
                let cone = c.normal_cone(f).unwrap();
                assert_eq!(cone.dim, 3 - j);
                assert_eq!(cone.generators.len(), f.containing_facets.len());
                // generators orthogonal to face direction space
                let (_, fb) = c.face_frame(f);
                for g in &cone.generators {
                    for b in &fb {
                        assert!(g.dot(b).abs() < 1e-10);
                    }
                }
            }
        }
        // vertex (1,1,1): cone spanned by e1,e2,e3; membership test
        let v = c
            .faces(0)
            .iter()
            .find(|f| c.vertices()[f.vertex_ids[0]].sum() > 2.5)
            .unwrap();
        assert!(c.cone_contains(v, &DVector::from_vec(vec![1.0, 1.0, 1.0])));
        assert!(!c.cone_contains(v, &DVector::from_vec(vec![-1.0, 0.5, 0.5])));
    }

    #[test]
    fn face_moments() {
        let c = catalog("cube", 3).unwrap();
        // r = 0 equals face volume
        for f in c.faces(2) {
            let m = c.face_moment_tensor(f, 0, None);
            assert!((m.scalar_value() - c.face_volume(f)).abs() < 1e-12);
        }
        // facet {x3 = 1}: r=1 moment = centroid × area = (1/2, 1/2, 1)
        let top = c
            .faces(2)
            .iter()
            .find(|f| f.vertex_ids.iter().all(|&i| c.vertices()[i][2] > 0.5))
            .unwrap();
        let m = c.face_moment_tensor(top, 1, None);
        assert!((m.coeff(&[1, 0, 0]) - 0.5).abs() < 1e-12);
        assert!((m.coeff(&[0, 1, 0]) - 0.5).abs() < 1e-12);
        assert!((m.coeff(&[0, 0, 1]) - 1.0).abs() < 1e-12);
        // segment [0, e1]: r=2 gives ∫₀¹ t² = 1/3
        let seg = moment_over_simplices(
            1,
            &[vec![DVector::from_vec(vec![0.0]), DVector::from_vec(vec![1.0])]],
            2,
        );
        assert!((seg.coeff(&[2]) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn box_clipping() {
        let c = catalog("cube", 3).unwrap();
        let body = &c.faces(3)[0].clone();
        let half = AaBox::new(vec![-1.0, -1.0, -1.0], vec![0.5, 2.0, 2.0]);
        let m = moment_over_simplices(
            3,
            &c.clipped_face_simplices(body, Some(&half.halfspaces())),
            0,
        );
        assert!((m.scalar_value() - 0.5).abs() < 1e-10);
        // clipping a facet (2-face) by the same box halves its area
        let top = c
            .faces(2)
            .iter()
            .find(|f| f.vertex_ids.iter().all(|&i| c.vertices()[i][2] > 0.5))
            .unwrap();
        let m = c.face_moment_tensor(top, 0, Some(&half.halfspaces()));
        assert!((m.scalar_value() - 0.5).abs() < 1e-10);
        // a fully excluded face
        let m = c.face_moment_tensor(
            top,
            0,
            Some(&AaBox::new(vec![0.0; 3], vec![1.0, 1.0, 0.5]).halfspaces()),
        );
        assert!(m.scalar_value().abs() < 1e-12);
    }

    #[test]
    fn slices() {
        let c = catalog("cube", 3).unwrap();
        // horizontal plane at height 1/2 → unit square
        let basis = DMatrix::from_columns(&[
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
        ]);
        let point = DVector::from_vec(vec![0.0, 0.0, 0.5]);
        let (sq, _) = c.slice(&basis, &point).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        let body = sq.faces(2)[0].clone();
        assert!((sq.face_volume(&body) - 1.0).abs() < 1e-9);
        // plane at height 2 → empty
        assert!(c.slice(&basis, &DVector::from_vec(vec![0.0, 0.0, 2.0])).is_none());
        // diagonal plane through the center → regular hexagon of area 3√3/4
        let nrm = DVector::from_vec(vec![1.0, 1.0, 1.0]).normalize();
        let b1 = DVector::from_vec(vec![1.0, -1.0, 0.0]).normalize();
        let b2 = nrm.cross(&b1);
        let basis = DMatrix::from_columns(&[b1, b2]);
        let point = DVector::from_vec(vec![0.5, 0.5, 0.5]);
        let (hex, embed) = c.slice(&basis, &point).unwrap();
        assert_eq!(hex.vertices().len(), 6);
        let body = hex.faces(2)[0].clone();
        assert!((hex.face_volume(&body) - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-9);
        // embedded vertices lie on the cube boundary
        for v in hex.vertices() {
            let x = embed.point(v);
            assert!(c.contains(&x, 1e-8));
        }
    }

    #[test]
    fn axis_slices_have_unit_area() {
        let c = catalog("cube", 3).unwrap();
        let basis = DMatrix::from_columns(&[
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
        ]);
        for h in [0.1, 0.25, 0.5, 0.9] {
            let (sq, _) = c.slice(&basis, &DVector::from_vec(vec![0.0, 0.0, h])).unwrap();
            let body = sq.faces(2)[0].clone();
            assert!((sq.face_volume(&body) - 1.0).abs() < 1e-9, "h = {h}");
        }
    }

    #[test]
    fn segment_polytope() {
        // 1-dimensional build: a segment
        let pts = vec![DVector::from_vec(vec![0.0]), DVector::from_vec(vec![2.0]), DVector::from_vec(vec![1.0])];
        let p = Polytope::build(&pts).unwrap();
        assert_eq!(p.vertices().len(), 2); // midpoint dropped
        assert_eq!(p.faces(0).len(), 2);
        let body = p.faces(1)[0].clone();
        assert!((p.face_volume(&body) - 2.0).abs() < 1e-12);
    }
}
