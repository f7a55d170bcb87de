//! Conforming graded triangulation of polygon domains.
//!
//! The polygon boundary is pre-split to the target size (with geometric
//! grading toward singular vertices), inserted into a constrained Delaunay
//! triangulation and refined with Ruppert/Chew quality refinement. Every
//! boundary edge of the result inherits the tag and `beta` of the polygon
//! edge it lies on.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use spade::{AngleLimit, ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

use crate::error::{Error, Result};
use crate::geometry::{EdgeTag, Point, PolygonDomain};

/// Geometric size decay toward singular vertices: ring `j` has size
/// `h_target * ratio^j`, for `j = 1..=depth`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grading {
    pub ratio: f64,
    pub depth: usize,
}

impl Default for Grading {
    fn default() -> Self {
        Grading {
            ratio: 0.6,
            depth: 0,
        }
    }
}

impl Grading {
    pub fn none() -> Self {
        Self::default()
    }

    /// Depth `ceil(log(h_tip / h_target) / log(ratio))` reaching `h_tip` at the vertex.
    pub fn to_tip_resolution(h_tip: f64, h_target: f64, ratio: f64) -> Self {
        let depth = if h_tip >= h_target {
            0
        } else {
            ((h_tip / h_target).ln() / ratio.ln()).ceil() as usize
        };
        Grading { ratio, depth }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshOptions {
    pub h_target: f64,
    pub grading: Grading,
    /// Quality floor in degrees; refinement targets `min_angle + 10`.
    pub min_angle: f64,
    pub max_elements: usize,
}

impl MeshOptions {
    pub fn new(h_target: f64) -> Self {
        MeshOptions {
            h_target,
            grading: Grading::none(),
            min_angle: 15.0,
            max_elements: 500_000,
        }
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    pub fn with_max_elements(mut self, max_elements: usize) -> Self {
        self.max_elements = max_elements;
        self
    }
}

/// Boundary edge oriented with the domain on its left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: EdgeTag,
    pub beta: f64,
    /// Index of the polygon edge this edge lies on.
    pub polygon_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub nodes: Vec<Point>,
    /// Counterclockwise node triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub grading_ratio: f64,
    pub singular_nodes: Vec<usize>,
    /// Radius of the first grading ring around singular nodes; triangles
    /// inside it may violate the angle floor.
    #[serde(default)]
    pub tip_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    /// Smallest interior angle in degrees.
    pub min_angle: f64,
    /// Smallest angle over triangles outside the first grading ring.
    pub min_angle_outside_tip: f64,
    /// Largest circumradius-to-twice-inradius ratio (1 for equilateral).
    pub max_aspect: f64,
    pub n_nodes: usize,
    pub n_tris: usize,
}

/// Triangulates `domain` with default quality settings.
pub fn triangulate(domain: &PolygonDomain, h_target: f64, grading: Grading) -> Result<Mesh> {
    triangulate_with(domain, &MeshOptions::new(h_target).with_grading(grading))
}

pub fn triangulate_with(domain: &PolygonDomain, opts: &MeshOptions) -> Result<Mesh> {
    let h = opts.h_target;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("h_target must be positive, got {h}")));
    }
    let q = opts.grading.ratio;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidInput(format!("grading ratio must lie in (0, 1), got {q}")));
    }

    let boundary = split_boundary(domain, opts);
    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut handles = Vec::with_capacity(boundary.len());
    for p in &boundary {
        let v = cdt
            .insert(Point2::new(p.x, p.y))
            .map_err(|e| Error::Meshing(format!("{e:?}")))?;
        handles.push(v);
    }
    for i in 0..handles.len() {
        let (a, b) = (handles[i], handles[(i + 1) % handles.len()]);
        if a == b || !cdt.can_add_constraint(a, b) {
            return Err(Error::Meshing(format!(
                "boundary segment {i} collides with another boundary segment"
            )));
        }
        cdt.add_constraint(a, b);
    }

    let max_area = 3f64.sqrt() / 4.0 * h * h;
    let mut params = RefinementParameters::<f64>::new()
        .exclude_outer_faces(true)
        .with_angle_limit(AngleLimit::from_deg(opts.min_angle + 10.0))
        .with_max_allowed_area(max_area)
        .with_max_additional_vertices(opts.max_elements / 2);
    if !domain.singular().is_empty() {
        let h_tip = h * q.powi(opts.grading.depth as i32);
        params = params.with_min_required_area(0.25 * 3f64.sqrt() / 4.0 * h_tip * h_tip);
    }
    let result = cdt.refine(params);
    if !result.refinement_complete {
        return Err(Error::MeshBudgetExceeded(opts.max_elements));
    }
    let excluded: HashSet<_> = result.excluded_faces.into_iter().collect();

    let mut index = HashMap::new();
    let mut nodes = Vec::new();
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        if excluded.contains(&face.fix()) {
            continue;
        }
        let mut tri = [0usize; 3];
        for (k, v) in face.vertices().iter().enumerate() {
            let key = v.fix().index();
            tri[k] = *index.entry(key).or_insert_with(|| {
                let p = v.position();
                nodes.push(Point::new(p.x, p.y));
                nodes.len() - 1
            });
        }
        triangles.push(tri);
    }
    if triangles.len() > opts.max_elements {
        return Err(Error::MeshBudgetExceeded(opts.max_elements));
    }

    let mut mesh = assemble_mesh(domain, nodes, triangles, q)?;
    if !mesh.singular_nodes.is_empty() {
        mesh.tip_radius = h * q;
    }
    mesh.check_invariants(domain)?;
    Ok(mesh)
}

/// Boundary points in counterclockwise order, polygon vertices included.
///
/// Each polygon edge is split into `2^k` equal pieces no longer than
/// `h_target`, so halving `h_target` doubles the count on every edge longer
/// than `h_target / 2`.
fn split_boundary(domain: &PolygonDomain, opts: &MeshOptions) -> Vec<Point> {
    let h = opts.h_target;
    let q = opts.grading.ratio;
    let depth = opts.grading.depth;
    let singular: HashSet<usize> = domain.singular().iter().copied().collect();
    let n = domain.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = domain.edge(i);
        let len = a.dist(b);
        let mut count = 1usize;
        while len / count as f64 > h {
            count *= 2;
        }
        let mut params: Vec<f64> = (1..count).map(|k| k as f64 / count as f64).collect();
        let first = 1.0 / count as f64;
        let graded = |j: usize| h * q.powi(j as i32) / len;
        if singular.contains(&i) {
            params.extend((1..=depth).map(graded).filter(|&s| s < first * 0.999));
        }
        if singular.contains(&((i + 1) % n)) {
            params.extend((1..=depth).map(graded).filter(|&s| s < first * 0.999).map(|s| 1.0 - s));
        }
        params.sort_by(f64::total_cmp);
        params.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
        out.push(a);
        out.extend(params.into_iter().map(|s| a.lerp(b, s)));
    }
    out
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let s = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    p.dist(a.lerp(b, s))
}

fn assemble_mesh(
    domain: &PolygonDomain,
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    grading_ratio: f64,
) -> Result<Mesh> {
    let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            count.entry(key).or_insert((0, [a, b])).0 += 1;
        }
    }
    let mut boundary_edges = Vec::new();
    for (_, (c, dir)) in count {
        match c {
            1 => {
                let mid = nodes[dir[0]].lerp(nodes[dir[1]], 0.5);
                let (polygon_edge, _) = (0..domain.len())
                    .map(|i| {
                        let (a, b) = domain.edge(i);
                        (i, segment_distance(mid, a, b))
                    })
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .expect("polygon has edges");
                let spec = domain.edges()[polygon_edge];
                boundary_edges.push(BoundaryEdge {
                    nodes: dir,
                    tag: spec.tag,
                    beta: spec.beta,
                    polygon_edge,
                });
            }
            2 => {}
            _ => return Err(Error::Meshing(format!("edge shared by {c} triangles"))),
        }
    }
    boundary_edges.sort_by_key(|e| (e.polygon_edge, e.nodes));
    let singular_nodes = domain
        .singular()
        .iter()
        .filter_map(|&s| {
            let p = domain.vertices()[s];
            nodes.iter().position(|&q| q == p)
        })
        .collect();
    Ok(Mesh {
        nodes,
        triangles,
        boundary_edges,
        grading_ratio,
        singular_nodes,
        tip_radius: 0.0,
    })
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * crate::geometry::orient(a, b, c)
    }

    pub fn area(&self) -> f64 {
        (0..self.n_triangles()).map(|t| self.triangle_area(t)).sum()
    }

    /// Gradients of the three barycentric basis functions on triangle `t`.
    pub fn basis_gradients(&self, t: usize) -> [Point; 3] {
        let [p0, p1, p2] = self.triangle_points(t);
        let two_a = crate::geometry::orient(p0, p1, p2);
        [
            Point::new(p1.y - p2.y, p2.x - p1.x) * (1.0 / two_a),
            Point::new(p2.y - p0.y, p0.x - p2.x) * (1.0 / two_a),
            Point::new(p0.y - p1.y, p1.x - p0.x) * (1.0 / two_a),
        ]
    }

    pub fn boundary_edge_length(&self, e: &BoundaryEdge) -> f64 {
        self.nodes[e.nodes[0]].dist(self.nodes[e.nodes[1]])
    }

    /// Total length of Robin-like boundary edges.
    pub fn robin_length(&self) -> f64 {
        self.boundary_edges
            .iter()
            .filter(|e| e.tag.is_robin_like())
            .map(|e| self.boundary_edge_length(e))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for p in &self.nodes {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        lo.dist(hi)
    }

    /// Sets `beta` on every Robin-like edge that currently has positive beta.
    pub fn set_robin_beta(&mut self, beta: f64) {
        for e in &mut self.boundary_edges {
            if e.tag.is_robin_like() && e.beta > 0.0 {
                e.beta = beta;
            }
        }
    }

    /// Triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        let tol = 1e-12;
        (0..self.n_triangles()).find_map(|t| {
            let [a, b, c] = self.triangle_points(t);
            let area = crate::geometry::orient(a, b, c);
            let l0 = crate::geometry::orient(p, b, c) / area;
            let l1 = crate::geometry::orient(a, p, c) / area;
            let l2 = 1.0 - l0 - l1;
            (l0 >= -tol && l1 >= -tol && l2 >= -tol).then_some((t, [l0, l1, l2]))
        })
    }

    fn check_invariants(&self, domain: &PolygonDomain) -> Result<()> {
        for t in 0..self.n_triangles() {
            if self.triangle_area(t) <= 0.0 {
                return Err(Error::Meshing(format!("triangle {t} has non-positive area")));
            }
        }
        let area = self.area();
        let expected = domain.area();
        if (area - expected).abs() > 1e-10 * expected {
            return Err(Error::Meshing(format!(
                "mesh area {area} differs from polygon area {expected}"
            )));
        }
        Ok(())
    }

    pub fn quality_report(&self) -> QualityReport {
        let tips: Vec<Point> = self.singular_nodes.iter().map(|&n| self.nodes[n]).collect();
        let near_tip = |p: Point| tips.iter().any(|&c| c.dist(p) < self.tip_radius);
        let mut min_angle = f64::INFINITY;
        let mut min_outside = f64::INFINITY;
        let mut max_aspect: f64 = 0.0;
        for (t, tri) in self.triangles.iter().enumerate() {
            let [a, b, c] = self.triangle_points(t);
            let (la, lb, lc) = (b.dist(c), c.dist(a), a.dist(b));
            let angle = |opp: f64, s1: f64, s2: f64| {
                ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2))
                    .clamp(-1.0, 1.0)
                    .acos()
                    .to_degrees()
            };
            let m = angle(la, lb, lc).min(angle(lb, lc, la)).min(angle(lc, la, lb));
            min_angle = min_angle.min(m);
            if !tri.iter().any(|&n| near_tip(self.nodes[n])) {
                min_outside = min_outside.min(m);
            }
            let area = self.triangle_area(t);
            let s = 0.5 * (la + lb + lc);
            let inradius = area / s;
            let circumradius = la * lb * lc / (4.0 * area);
            max_aspect = max_aspect.max(circumradius / (2.0 * inradius));
        }
        QualityReport {
            min_angle,
            min_angle_outside_tip: min_outside,
            max_aspect,
            n_nodes: self.n_nodes(),
            n_tris: self.n_triangles(),
        }
    }

    /// Plain-text export: header, node table, triangle table, tagged edge table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "robinlab-mesh 1 nodes {} triangles {} edges {}",
            self.n_nodes(),
            self.n_triangles(),
            self.boundary_edges.len()
        );
        for (i, p) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "{i} {:.17e} {:.17e}", p.x, p.y);
        }
        for (i, t) in self.triangles.iter().enumerate() {
            let _ = writeln!(s, "{i} {} {} {}", t[0], t[1], t[2]);
        }
        for (i, e) in self.boundary_edges.iter().enumerate() {
            let _ = writeln!(s, "{i} {} {} {} {}", e.nodes[0], e.nodes[1], e.tag.as_str(), e.beta);
        }
        s
    }

    pub fn write_text(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_text().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cusp_polygon, CuspEnd, Edge, ProfileFunction};

    fn single_triangle(p: [Point; 3]) -> Mesh {
        Mesh {
            nodes: p.to_vec(),
            triangles: vec![[0, 1, 2]],
            boundary_edges: vec![],
            grading_ratio: 0.6,
            singular_nodes: vec![],
            tip_radius: 0.0,
        }
    }

    #[test]
    fn quality_of_reference_triangles() {
        let eq = single_triangle([
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 3f64.sqrt() / 2.0),
        ]);
        let r = eq.quality_report();
        assert!((r.min_angle - 60.0).abs() < 1e-9);
        assert!((r.max_aspect - 1.0).abs() < 1e-9);
        let right = single_triangle([Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
        assert!((right.quality_report().min_angle - 45.0).abs() < 1e-9);
    }

    #[test]
    fn unit_square_mesh() {
        let sq = PolygonDomain::unit_square(1.0);
        let mesh = triangulate(&sq, 0.25, Grading::none()).unwrap();
        let r = mesh.quality_report();
        assert!((32..=64).contains(&r.n_tris), "{} triangles", r.n_tris);
        assert!(r.min_angle >= 15.0);
        assert!((mesh.area() - 1.0).abs() < 1e-12);
        assert!((mesh.robin_length() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_tags_partition_like_polygon() {
        let strip = PolygonDomain::strip(1.0, 0.1, 1.0).unwrap();
        let mesh = triangulate(&strip, 0.05, Grading::none()).unwrap();
        for (i, edge) in strip.edges().iter().enumerate() {
            let len: f64 = mesh
                .boundary_edges
                .iter()
                .filter(|e| e.polygon_edge == i)
                .inspect(|e| assert_eq!(e.beta, edge.beta))
                .map(|e| mesh.boundary_edge_length(e))
                .sum();
            assert!((len - strip.edge_length(i)).abs() < 1e-12);
        }
        // every boundary node lies on its edge's polygon segment
        for e in &mesh.boundary_edges {
            let (a, b) = strip.edge(e.polygon_edge);
            for &n in &e.nodes {
                assert!(segment_distance(mesh.nodes[n], a, b) < 1e-12);
            }
        }
    }

    #[test]
    fn halving_h_doubles_boundary_resolution() {
        // holds once h is below twice the shortest polygon edge (0.195 here)
        let disk = PolygonDomain::regular_polygon(32, 1.0, 1.0).unwrap();
        for h in [0.2, 0.1, 0.05] {
            let coarse = split_boundary(&disk, &MeshOptions::new(h)).len();
            let fine = split_boundary(&disk, &MeshOptions::new(0.5 * h)).len();
            assert!(fine >= 2 * coarse, "h={h}: {coarse} -> {fine}");
            let mesh = triangulate(&disk, h, Grading::none()).unwrap();
            assert!(mesh.boundary_edges.len() >= coarse);
            assert!(mesh.boundary_edges.iter().all(|e| mesh.boundary_edge_length(e) <= h * (1.0 + 1e-12)));
        }
    }

    #[test]
    fn graded_cusp_tip() {
        let h = ProfileFunction::power(1.5);
        let poly = build_cusp_polygon(&h, 0.0, 1.0, 64, CuspEnd::Dirichlet, 1.0).unwrap();
        let h_target = 0.1;
        let mesh = triangulate(&poly, h_target, Grading { ratio: 0.5, depth: 10 }).unwrap();
        assert_eq!(mesh.singular_nodes.len(), 1);
        let tip = mesh.singular_nodes[0];
        let smallest = mesh
            .boundary_edges
            .iter()
            .filter(|e| e.nodes.contains(&tip))
            .map(|e| mesh.boundary_edge_length(e))
            .fold(f64::INFINITY, f64::min);
        assert!(smallest <= 0.5f64.powi(10) * h_target * (1.0 + 1e-9), "{smallest}");
        assert!((mesh.area() - poly.area()).abs() < 1e-10 * poly.area());
        let r = mesh.quality_report();
        assert!(r.min_angle_outside_tip >= 15.0, "{r:?}");
    }

    #[test]
    fn truncated_thin_cusp_meshes() {
        let h = ProfileFunction::power(3.0);
        let poly = build_cusp_polygon(&h, 0.05, 1.0, 64, CuspEnd::Dirichlet, 1.0).unwrap();
        let mesh = triangulate(&poly, 0.05, Grading::none()).unwrap();
        let r = mesh.quality_report();
        assert!(r.min_angle >= 15.0, "{r:?}");
        assert!(mesh
            .boundary_edges
            .iter()
            .any(|e| e.tag == EdgeTag::Truncation));
    }

    #[test]
    fn budget_is_enforced() {
        let sq = PolygonDomain::unit_square(1.0);
        let opts = MeshOptions::new(0.01).with_max_elements(100);
        assert!(matches!(triangulate_with(&sq, &opts), Err(Error::MeshBudgetExceeded(100))));
    }

    #[test]
    fn degenerate_polygon_is_rejected_before_meshing() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        assert!(PolygonDomain::new(pts, vec![Edge::robin(1.0); 3], vec![]).is_err());
    }

    #[test]
    fn text_export_layout() {
        let mesh = triangulate(&PolygonDomain::unit_square(1.0), 0.5, Grading::none()).unwrap();
        let text = mesh.to_text();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("robinlab-mesh 1"));
        assert_eq!(
            text.lines().count(),
            1 + mesh.n_nodes() + mesh.n_triangles() + mesh.boundary_edges.len()
        );
        assert!(text.contains(" robin 1"));
    }
}
