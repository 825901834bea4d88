//! d-dimensional convex hulls (randomized incremental, d <= 6) and derived
//! functionals: f-vector, polar dual, inradius, T-functional, and
//! Monte-Carlo angle estimators.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

/// Relative tolerance for all hull predicates; inputs are continuous random
/// samples, so this guards round-off only.
pub const EPS_GEOM: f64 = 1e-9;

/// Default dimension cap for the incremental hull.
pub const DIM_CAP: usize = 6;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("origin is not strictly interior")]
    OriginNotInterior,
    #[error("face not found: {0:?}")]
    FaceNotFound(Vec<usize>),
    #[error("dimension {0} exceeds the hull cap {1}")]
    DimensionCap(usize, usize),
}

type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone)]
pub struct Facet {
    /// Unit outer normal.
    pub normal: DVector<f64>,
    /// Signed distance of the facet hyperplane from the origin.
    pub offset: f64,
    /// Sorted indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<DVector<f64>>,
    pub facets: Vec<Facet>,
}

#[derive(Clone)]
struct HFacet {
    vertices: Vec<usize>, // sorted, length = dim
    normal: DVector<f64>,
    offset: f64,
}

struct HullState {
    facets: Vec<HFacet>,
    interior: DVector<f64>,
}

/// Incremental convex hull that accepts points one at a time; used directly
/// by the perfect-simulation stopping rule.
pub struct IncrementalHull {
    dim: usize,
    points: Vec<DVector<f64>>,
    state: Option<HullState>,
}

/// Outer unit normal of the hyperplane through `pts` (length = dim >= 2),
/// by generalized cross product (cofactor expansion), oriented away from
/// `interior`. Returns the normal and offset.
fn hyperplane(
    pts: &[&DVector<f64>],
    interior: &DVector<f64>,
) -> Result<(DVector<f64>, f64)> {
    let d = pts[0].len();
    debug_assert_eq!(pts.len(), d);
    let mut m = DMatrix::zeros(d - 1, d);
    for (r, p) in pts.iter().skip(1).enumerate() {
        for c in 0..d {
            m[(r, c)] = p[c] - pts[0][c];
        }
    }
    let mut n = DVector::zeros(d);
    for i in 0..d {
        let minor = m.clone().remove_column(i);
        let det = minor.determinant();
        n[i] = if i % 2 == 0 { det } else { -det };
    }
    let norm = n.norm();
    if norm <= EPS_GEOM {
        return Err(GeomError::DegenerateInput(
            "affinely dependent facet vertices".into(),
        ));
    }
    n /= norm;
    let mut offset = n.dot(pts[0]);
    let side = n.dot(interior) - offset;
    if side > 0.0 {
        n = -n;
        offset = -offset;
    } else if side == 0.0 {
        return Err(GeomError::DegenerateInput(
            "interior point on facet hyperplane".into(),
        ));
    }
    Ok((n, offset))
}

impl IncrementalHull {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 1 || dim > DIM_CAP {
            return Err(GeomError::DimensionCap(dim, DIM_CAP));
        }
        Ok(Self {
            dim,
            points: Vec::new(),
            state: None,
        })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Feed the next point. Returns true once the hull is full-dimensional.
    pub fn push(&mut self, p: DVector<f64>) -> Result<bool> {
        assert_eq!(p.len(), self.dim, "point dimension mismatch");
        self.points.push(p);
        let idx = self.points.len() - 1;
        if self.state.is_some() {
            self.insert(idx);
            return Ok(true);
        }
        if self.try_init()? {
            return Ok(true);
        }
        Ok(false)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.state.is_some()
    }

    /// True when every facet has strictly positive offset.
    pub fn origin_interior(&self) -> bool {
        match &self.state {
            Some(s) => s.facets.iter().all(|f| f.offset > EPS_GEOM),
            None => false,
        }
    }

    /// Minimal facet offset (the inradius about the origin), if the origin
    /// is interior.
    pub fn inradius(&self) -> Option<f64> {
        if !self.origin_interior() {
            return None;
        }
        self.state
            .as_ref()
            .map(|s| s.facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min))
    }

    fn try_init(&mut self) -> Result<bool> {
        // greedy affinely independent subset of the buffered points
        let d = self.dim;
        if self.points.len() < d + 1 {
            return Ok(false);
        }
        let mut chosen: Vec<usize> = vec![0];
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for i in 1..self.points.len() {
            if chosen.len() == d + 1 {
                break;
            }
            let mut v = &self.points[i] - &self.points[chosen[0]];
            let scale = v.norm().max(1.0);
            for b in &basis {
                let c = v.dot(b);
                v -= b * c;
            }
            if v.norm() > EPS_GEOM * scale {
                basis.push(v.normalize());
                chosen.push(i);
            }
        }
        if chosen.len() < d + 1 {
            return Ok(false);
        }
        let mut interior = DVector::zeros(d);
        for &i in &chosen {
            interior += &self.points[i];
        }
        interior /= (d + 1) as f64;
        let mut facets = Vec::with_capacity(d + 1);
        for skip in 0..=d {
            let verts: Vec<usize> = chosen
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != skip)
                .map(|(_, &i)| i)
                .collect();
            facets.push(self.make_facet(verts, &interior)?);
        }
        self.state = Some(HullState { facets, interior });
        let pending: Vec<usize> = (0..self.points.len())
            .filter(|i| !chosen.contains(i))
            .collect();
        for i in pending {
            self.insert(i);
        }
        Ok(true)
    }

    fn make_facet(&self, mut verts: Vec<usize>, interior: &DVector<f64>) -> Result<HFacet> {
        verts.sort_unstable();
        if self.dim == 1 {
            let v = &self.points[verts[0]];
            let sign = if v[0] > interior[0] { 1.0 } else { -1.0 };
            return Ok(HFacet {
                vertices: verts,
                normal: DVector::from_vec(vec![sign]),
                offset: sign * v[0],
            });
        }
        let pts: Vec<&DVector<f64>> = verts.iter().map(|&i| &self.points[i]).collect();
        let (normal, offset) = hyperplane(&pts, interior)?;
        Ok(HFacet {
            vertices: verts,
            normal,
            offset,
        })
    }

    fn insert(&mut self, idx: usize) {
        let d = self.dim;
        let p = self.points[idx].clone();
        let tol = EPS_GEOM * (1.0 + p.norm());
        let state = self.state.as_mut().expect("insert before init");
        let mut visible = Vec::new();
        let mut kept = Vec::new();
        for f in state.facets.drain(..) {
            if f.normal.dot(&p) - f.offset > tol {
                visible.push(f);
            } else {
                kept.push(f);
            }
        }
        if visible.is_empty() {
            state.facets = kept;
            return; // interior point
        }
        // horizon ridges: (d-1)-subsets appearing in exactly one visible
        // facet (ordered map keeps facet order deterministic)
        let mut ridge_count: std::collections::BTreeMap<Vec<usize>, usize> =
            std::collections::BTreeMap::new();
        for f in &visible {
            for skip in 0..d {
                let ridge: Vec<usize> = f
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let interior = state.interior.clone();
        let mut new_facets = Vec::new();
        for (ridge, count) in ridge_count {
            if count != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(idx);
            match self.make_facet(verts, &interior) {
                Ok(f) => new_facets.push(f),
                Err(_) => {} // near-degenerate sliver; neighbours cover it
            }
        }
        let state = self.state.as_mut().unwrap();
        state.facets = kept;
        state.facets.extend(new_facets);
    }

    /// Finish and return the hull as a `Polytope` with compacted vertex
    /// indices.
    pub fn finish(self) -> Result<Polytope> {
        let state = self.state.ok_or_else(|| {
            GeomError::DegenerateInput("hull never became full-dimensional".into())
        })?;
        let mut used: Vec<usize> = state
            .facets
            .iter()
            .flat_map(|f| f.vertices.iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        used.sort_unstable();
        let remap: HashMap<usize, usize> =
            used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices: Vec<DVector<f64>> =
            used.iter().map(|&i| self.points[i].clone()).collect();
        let mut facets: Vec<Facet> = state
            .facets
            .into_iter()
            .map(|f| {
                let mut v: Vec<usize> = f.vertices.iter().map(|i| remap[i]).collect();
                v.sort_unstable();
                Facet {
                    normal: f.normal,
                    offset: f.offset,
                    vertices: v,
                }
            })
            .collect();
        facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        Ok(Polytope {
            dim: self.dim,
            vertices,
            facets,
        })
    }
}

/// Convex hull of a point set (randomized incremental; deterministic via a
/// fixed internal shuffle seed).
pub fn convex_hull(points: &[DVector<f64>]) -> Result<Polytope> {
    if points.is_empty() {
        return Err(GeomError::DegenerateInput("no points".into()));
    }
    let dim = points[0].len();
    let mut hull = IncrementalHull::new(dim)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    // deterministic shuffle decorrelates adversarial input orders
    let mut rng = ChaCha12Rng::seed_from_u64(0x9e3779b97f4a7c15);
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    for i in order {
        hull.push(points[i].clone())?;
    }
    hull.finish()
}

impl Polytope {
    pub fn is_simplicial(&self) -> bool {
        self.facets.iter().all(|f| f.vertices.len() == self.dim)
    }

    /// Membership test (up to EPS_GEOM slack on each facet inequality).
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.facets
            .iter()
            .all(|f| f.normal.dot(x) <= f.offset + EPS_GEOM * (1.0 + f.offset.abs()))
    }
}

fn subsets_of_size(set: &[usize], k: usize, out: &mut HashSet<Vec<usize>>) {
    // set is sorted; emit all k-subsets
    fn rec(set: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut HashSet<Vec<usize>>) {
        if cur.len() == k {
            out.insert(cur.clone());
            return;
        }
        for i in start..set.len() {
            cur.push(set[i]);
            rec(set, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(set, k, 0, &mut Vec::new(), out);
}

/// Affine rank of a vertex subset (dimension of the face it spans).
fn affine_rank(p: &Polytope, verts: &[usize]) -> usize {
    if verts.is_empty() {
        return 0;
    }
    let v0 = &p.vertices[verts[0]];
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for &i in &verts[1..] {
        let mut v = &p.vertices[i] - v0;
        let scale = v.norm().max(1.0);
        for b in &basis {
            let c = v.dot(b);
            v -= b * c;
        }
        if v.norm() > EPS_GEOM * scale {
            basis.push(v.normalize());
        }
    }
    basis.len()
}

/// f-vector (f_0, ..., f_{d-1}). Simplicial polytopes enumerate vertex
/// subsets of facets; otherwise the full face lattice is recovered as the
/// closure of facet vertex sets under intersection (every face is the
/// intersection of the facets containing it), with dimension by affine rank.
pub fn f_vector(p: &Polytope) -> Vec<usize> {
    let d = p.dim;
    let mut f = vec![0usize; d];
    if p.is_simplicial() {
        for k in 0..d {
            let mut faces = HashSet::new();
            for facet in &p.facets {
                subsets_of_size(&facet.vertices, k + 1, &mut faces);
            }
            f[k] = faces.len();
        }
        return f;
    }
    let mut closed: BTreeSet<Vec<usize>> = p
        .facets
        .iter()
        .map(|fc| fc.vertices.clone())
        .collect();
    loop {
        let snapshot: Vec<Vec<usize>> = closed.iter().cloned().collect();
        let mut added = false;
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                let a: HashSet<usize> = snapshot[i].iter().copied().collect();
                let mut inter: Vec<usize> = snapshot[j]
                    .iter()
                    .copied()
                    .filter(|v| a.contains(v))
                    .collect();
                inter.sort_unstable();
                if !inter.is_empty() && closed.insert(inter) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    for face in &closed {
        let r = affine_rank(p, face);
        if r < d {
            f[r] += 1;
        }
    }
    f
}

/// Orthonormal basis of the direction space of the facet, plus coordinates
/// of its vertices in that basis.
fn facet_coordinates(p: &Polytope, facet: &Facet) -> (usize, Vec<DVector<f64>>) {
    let v0 = &p.vertices[facet.vertices[0]];
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for &i in &facet.vertices[1..] {
        let mut v = &p.vertices[i] - v0;
        let scale = v.norm().max(1.0);
        for b in &basis {
            let c = v.dot(b);
            v -= b * c;
        }
        if v.norm() > EPS_GEOM * scale {
            basis.push(v.normalize());
        }
    }
    let r = basis.len();
    let coords = facet
        .vertices
        .iter()
        .map(|&i| {
            let diff = &p.vertices[i] - v0;
            DVector::from_iterator(r, basis.iter().map(|b| b.dot(&diff)))
        })
        .collect();
    (r, coords)
}

/// Volume of a full-dimensional point set in low dimension: interval length,
/// shoelace polygon (after angular sort), or recursive hull volume.
fn points_volume(dim: usize, pts: &[DVector<f64>]) -> Result<f64> {
    match dim {
        0 => Ok(1.0),
        1 => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for p in pts {
                lo = lo.min(p[0]);
                hi = hi.max(p[0]);
            }
            Ok(hi - lo)
        }
        2 => {
            let n = pts.len() as f64;
            let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
            let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
            let mut ordered: Vec<&DVector<f64>> = pts.iter().collect();
            ordered.sort_by(|a, b| {
                let ta = (a[1] - cy).atan2(a[0] - cx);
                let tb = (b[1] - cy).atan2(b[0] - cx);
                ta.total_cmp(&tb)
            });
            let mut area = 0.0;
            for i in 0..ordered.len() {
                let a = ordered[i];
                let b = ordered[(i + 1) % ordered.len()];
                area += a[0] * b[1] - b[0] * a[1];
            }
            Ok(area.abs() / 2.0)
        }
        _ => {
            let n = pts.len() as f64;
            let mut centroid = DVector::zeros(dim);
            for p in pts {
                centroid += p;
            }
            centroid /= n;
            let shifted: Vec<DVector<f64>> = pts.iter().map(|p| p - &centroid).collect();
            let hull = convex_hull(&shifted)?;
            t_functional(&hull, 1.0, 1.0).map(|t| t / dim as f64)
        }
    }
}

fn facet_volume(p: &Polytope, facet: &Facet) -> Result<f64> {
    let d = p.dim;
    if d == 1 {
        return Ok(1.0); // 0-dimensional facet
    }
    if facet.vertices.len() == d {
        // simplex facet: Gram determinant of the edge matrix
        let v0 = &p.vertices[facet.vertices[0]];
        let mut e = DMatrix::zeros(d, d - 1);
        for (c, &i) in facet.vertices[1..].iter().enumerate() {
            let diff = &p.vertices[i] - v0;
            for r in 0..d {
                e[(r, c)] = diff[r];
            }
        }
        let gram = e.transpose() * e;
        let det: f64 = gram.determinant().max(0.0);
        let mut fact = 1.0;
        for i in 2..d {
            fact *= i as f64;
        }
        return Ok(det.sqrt() / fact);
    }
    let (r, coords) = facet_coordinates(p, facet);
    if r != d - 1 {
        return Err(GeomError::DegenerateInput(format!(
            "facet has affine rank {r}, expected {}",
            d - 1
        )));
    }
    points_volume(d - 1, &coords)
}

/// T_{a,b}(P) = sum over facets of offset^a * ((d-1)-volume)^b; requires the
/// origin strictly interior.
pub fn t_functional(p: &Polytope, a: f64, b: f64) -> Result<f64> {
    let mut sum = 0.0;
    for facet in &p.facets {
        if facet.offset <= 0.0 {
            return Err(GeomError::OriginNotInterior);
        }
        let vol = if b == 0.0 { 1.0 } else { facet_volume(p, facet)? };
        sum += facet.offset.powf(a) * vol.powf(b);
    }
    Ok(sum)
}

/// Largest r with the centered r-ball inside P: the minimal facet offset.
pub fn inradius(p: &Polytope) -> Result<f64> {
    let mut r = f64::INFINITY;
    for facet in &p.facets {
        if facet.offset <= 0.0 {
            return Err(GeomError::OriginNotInterior);
        }
        r = r.min(facet.offset);
    }
    Ok(r)
}

/// Polar dual {x : <x,y> <= 1 for all y in P}: dual vertices are
/// normal/offset per facet; the dual facet at a primal vertex v collects the
/// primal facets containing v.
pub fn polar_dual(p: &Polytope) -> Result<Polytope> {
    let d = p.dim;
    let vertices: Vec<DVector<f64>> = p
        .facets
        .iter()
        .map(|f| {
            if f.offset <= EPS_GEOM {
                Err(GeomError::OriginNotInterior)
            } else {
                Ok(&f.normal / f.offset)
            }
        })
        .collect::<Result<_>>()?;
    let mut facets = Vec::with_capacity(p.vertices.len());
    for (j, v) in p.vertices.iter().enumerate() {
        let norm = v.norm();
        if norm <= EPS_GEOM {
            return Err(GeomError::DegenerateInput(
                "primal vertex at the origin".into(),
            ));
        }
        let mut incident: Vec<usize> = p
            .facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.vertices.contains(&j))
            .map(|(i, _)| i)
            .collect();
        incident.sort_unstable();
        facets.push(Facet {
            normal: v / norm,
            offset: 1.0 / norm,
            vertices: incident,
        });
    }
    Ok(Polytope {
        dim: d,
        vertices,
        facets,
    })
}

fn find_face(p: &Polytope, face: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = face.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let ok = p
        .facets
        .iter()
        .any(|f| sorted.iter().all(|v| f.vertices.contains(v)));
    if !ok || sorted.is_empty() || sorted.iter().any(|&v| v >= p.vertices.len()) {
        return Err(GeomError::FaceNotFound(sorted));
    }
    Ok(sorted)
}

/// Orthonormal basis of the orthogonal complement of span{v_i - v_0} for
/// the given face vertices.
fn face_normal_space(p: &Polytope, face: &[usize]) -> Vec<DVector<f64>> {
    let d = p.dim;
    let v0 = &p.vertices[face[0]];
    let mut dir_basis: Vec<DVector<f64>> = Vec::new();
    for &i in &face[1..] {
        let mut v = &p.vertices[i] - v0;
        for b in &dir_basis {
            let c = v.dot(b);
            v -= b * c;
        }
        if v.norm() > EPS_GEOM {
            dir_basis.push(v.normalize());
        }
    }
    let mut comp: Vec<DVector<f64>> = Vec::new();
    for i in 0..d {
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        for b in dir_basis.iter().chain(comp.iter()) {
            let c = v.dot(b);
            v -= b * c;
        }
        if v.norm() > EPS_GEOM {
            comp.push(v.normalize());
        }
    }
    comp
}

/// External angle of a face: the normalized solid angle of the normal cone.
/// Exact for 1- and 2-dimensional normal cones (facets and ridges);
/// otherwise the fraction of standard Gaussian directions g in the
/// complement of the face's direction space with <z - y, g> <= 0 for all
/// vertices z.
pub fn external_angle_mc(
    p: &Polytope,
    face: &[usize],
    n: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let face = find_face(p, face)?;
    let comp = face_normal_space(p, &face);
    let cone_dim = comp.len();
    if cone_dim == 0 {
        return Ok(1.0); // the whole polytope
    }
    if cone_dim == 1 {
        return Ok(0.5); // facet: the normal cone is a ray
    }
    if cone_dim == 2 {
        // ridge: angle between the normals of the two incident facets
        let incident: Vec<&Facet> = p
            .facets
            .iter()
            .filter(|f| face.iter().all(|v| f.vertices.contains(v)))
            .collect();
        if incident.len() == 2 {
            let c = incident[0].normal.dot(&incident[1].normal).clamp(-1.0, 1.0);
            return Ok(c.acos() / (2.0 * std::f64::consts::PI));
        }
        // fall through to MC for unexpected incidence
    }
    let d = p.dim;
    let mut y = DVector::zeros(d);
    for &i in &face {
        y += &p.vertices[i];
    }
    y /= face.len() as f64;
    let mut hits = 0usize;
    for _ in 0..n {
        let mut g = DVector::zeros(d);
        for b in &comp {
            let xi: f64 = rng.sample(StandardNormal);
            g += b * xi;
        }
        let inside = p.vertices.iter().all(|z| (z - &y).dot(&g) <= EPS_GEOM);
        if inside {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Is u (coordinates in an r-dim space) a nonnegative combination of the
/// generators? By Caratheodory for cones it suffices to scan r-subsets.
fn in_cone(u: &DVector<f64>, gens: &[DVector<f64>], r: usize) -> bool {
    let subsets = combinations(gens.len(), r);
    for s in &subsets {
        let mut w = DMatrix::zeros(r, r);
        for (c, &gi) in s.iter().enumerate() {
            for row in 0..r {
                w[(row, c)] = gens[gi][row];
            }
        }
        let lu = w.lu();
        if let Some(c) = lu.solve(u) {
            if c.iter().all(|&x| x >= -1e-9) {
                // verify (singular systems can "solve" garbage)
                let mut recon = DVector::zeros(r);
                for (ci, &gi) in s.iter().enumerate() {
                    recon += &gens[gi] * c[ci];
                }
                if (recon - u).norm() <= 1e-7 * u.norm().max(1.0) {
                    return true;
                }
            }
        }
    }
    false
}

/// Internal angle of a simplex at a face: fraction of uniform directions in
/// the simplex's affine hull lying in pos{v_i - centroid(face)}.
pub fn internal_angle_mc(
    simplex: &[DVector<f64>],
    face: &[usize],
    n: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let m = simplex.len();
    if m < 2 {
        return Err(GeomError::DegenerateInput("need at least 2 vertices".into()));
    }
    if face.is_empty() || face.iter().any(|&i| i >= m) {
        return Err(GeomError::FaceNotFound(face.to_vec()));
    }
    let d = simplex[0].len();
    // orthonormal basis of the affine hull direction space
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in &simplex[1..] {
        let mut w = v - &simplex[0];
        let scale = w.norm().max(1.0);
        for b in &basis {
            let c = w.dot(b);
            w -= b * c;
        }
        if w.norm() > EPS_GEOM * scale {
            basis.push(w.normalize());
        }
    }
    let r = basis.len();
    if r != m - 1 {
        return Err(GeomError::DegenerateInput(
            "vertices not affinely independent".into(),
        ));
    }
    let mut centroid = DVector::zeros(d);
    for &i in face {
        centroid += &simplex[i];
    }
    centroid /= face.len() as f64;
    let gens: Vec<DVector<f64>> = simplex
        .iter()
        .map(|v| {
            let diff = v - &centroid;
            DVector::from_iterator(r, basis.iter().map(|b| b.dot(&diff)))
        })
        .filter(|g| g.norm() > EPS_GEOM)
        .collect();
    if r == 1 {
        // exact: the cone contains +/- directions as the generators do
        let pos = gens.iter().any(|g| g[0] > 0.0);
        let neg = gens.iter().any(|g| g[0] < 0.0);
        return Ok((pos as u32 + neg as u32) as f64 / 2.0);
    }
    let mut hits = 0usize;
    for _ in 0..n {
        let u = DVector::from_iterator(r, (0..r).map(|_| rng.sample::<f64, _>(StandardNormal)));
        if in_cone(&u, &gens, r) {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

/// ASCII OFF dump: header, vertex rows, then facet rows as
/// "count i0 i1 ...".
pub fn to_off(p: &Polytope) -> String {
    let mut s = String::from("OFF\n");
    s.push_str(&format!("{} {} 0\n", p.vertices.len(), p.facets.len()));
    for v in &p.vertices {
        let coords: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        s.push_str(&coords.join(" "));
        s.push('\n');
    }
    for f in &p.facets {
        s.push_str(&format!("{}", f.vertices.len()));
        for i in &f.vertices {
            s.push_str(&format!(" {i}"));
        }
        s.push('\n');
    }
    s
}
