use serde::{Deserialize, Serialize};

use super::{point_in_loop, segments_intersect, signed_area, Point};
use crate::error::{Error, Result};

/// Boundary condition class of a polygon edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTag {
    Robin,
    Dirichlet,
    /// Artificial cross-section of a truncated cusp, treated as Robin.
    Truncation,
}

impl EdgeTag {
    /// Edges that carry the Robin boundary term and count toward `P^e`.
    pub fn is_robin_like(self) -> bool {
        matches!(self, EdgeTag::Robin | EdgeTag::Truncation)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Robin => "robin",
            EdgeTag::Dirichlet => "dirichlet",
            EdgeTag::Truncation => "truncation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tag: EdgeTag,
    #[serde(default)]
    pub beta: f64,
}

impl Edge {
    pub fn robin(beta: f64) -> Self {
        Edge {
            tag: EdgeTag::Robin,
            beta,
        }
    }

    pub fn dirichlet() -> Self {
        Edge {
            tag: EdgeTag::Dirichlet,
            beta: 0.0,
        }
    }

    pub fn truncation(beta: f64) -> Self {
        Edge {
            tag: EdgeTag::Truncation,
            beta,
        }
    }
}

/// Simple counterclockwise polygon; edge `i` joins vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon", into = "RawPolygon")]
pub struct PolygonDomain {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    singular: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPolygon {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    #[serde(default)]
    singular: Vec<usize>,
}

impl TryFrom<RawPolygon> for PolygonDomain {
    type Error = Error;
    fn try_from(r: RawPolygon) -> Result<Self> {
        PolygonDomain::new(r.vertices, r.edges, r.singular)
    }
}

impl From<PolygonDomain> for RawPolygon {
    fn from(p: PolygonDomain) -> Self {
        RawPolygon {
            vertices: p.vertices,
            edges: p.edges,
            singular: p.singular,
        }
    }
}

impl PolygonDomain {
    pub fn new(vertices: Vec<Point>, edges: Vec<Edge>, singular: Vec<usize>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {n}")));
        }
        if edges.len() != n {
            return Err(Error::InvalidPolygon(format!(
                "{} edge specs for {n} vertices",
                edges.len()
            )));
        }
        if vertices.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::InvalidPolygon("non-finite vertex".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if !(e.beta.is_finite() && e.beta >= 0.0) {
                return Err(Error::InvalidPolygon(format!("edge {i}: beta must be finite and >= 0")));
            }
        }
        if let Some(&s) = singular.iter().find(|&&s| s >= n) {
            return Err(Error::InvalidPolygon(format!("singular vertex {s} out of range")));
        }
        let area = signed_area(&vertices);
        if area <= 0.0 {
            return Err(Error::InvalidPolygon(format!(
                "enclosed area {area:e} is not positive (clockwise or degenerate)"
            )));
        }
        let domain = PolygonDomain {
            vertices,
            edges,
            singular,
        };
        let diam = domain.diameter();
        for i in 0..n {
            let (a, b) = domain.edge(i);
            if a.dist(b) < 1e-12 * diam {
                return Err(Error::InvalidPolygon(format!("edge {i} is degenerate")));
            }
        }
        domain.check_simple()?;
        Ok(domain)
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = self.edge(j);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidPolygon(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(())
    }

    /// Axis-aligned rectangle `[0, w] x [0, h]` with the given edge specs
    /// (bottom, right, top, left).
    pub fn rectangle(width: f64, height: f64, edges: [Edge; 4]) -> Result<Self> {
        PolygonDomain::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(width, 0.0),
                Point::new(width, height),
                Point::new(0.0, height),
            ],
            edges.to_vec(),
            vec![],
        )
    }

    pub fn unit_square(beta: f64) -> Self {
        Self::rectangle(1.0, 1.0, [Edge::robin(beta); 4]).expect("unit square is valid")
    }

    /// Thin strip `[0, len] x [0, width]`: Robin ends with `beta`, long sides
    /// with `beta = 0` (natural condition), so the problem reduces to an ODE in x.
    pub fn strip(len: f64, width: f64, beta: f64) -> Result<Self> {
        Self::rectangle(
            len,
            width,
            [Edge::robin(0.0), Edge::robin(beta), Edge::robin(0.0), Edge::robin(beta)],
        )
    }

    /// Regular `n`-gon inscribed in the circle of given radius about the origin.
    pub fn regular_polygon(n: usize, radius: f64, beta: f64) -> Result<Self> {
        let vertices = (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point::new(radius * th.cos(), radius * th.sin())
            })
            .collect();
        PolygonDomain::new(vertices, vec![Edge::robin(beta); n], vec![])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn singular(&self) -> &[usize] {
        &self.singular
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        let (a, b) = self.edge(i);
        a.dist(b)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        (0..self.len()).map(|i| self.edge_length(i)).sum()
    }

    /// Total length of Robin and truncation edges.
    pub fn robin_length(&self) -> f64 {
        (0..self.len())
            .filter(|&i| self.edges[i].tag.is_robin_like())
            .map(|i| self.edge_length(i))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    pub fn contains(&self, p: Point) -> bool {
        point_in_loop(&self.vertices, p)
    }

    pub fn is_convex(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            super::orient(a, b, c) >= -1e-14 * self.diameter().powi(2)
        })
    }

    /// Sets `beta` on every Robin and truncation edge with nonzero beta.
    pub fn with_uniform_beta(mut self, beta: f64) -> Self {
        for e in &mut self.edges {
            if e.tag.is_robin_like() && e.beta > 0.0 {
                e.beta = beta;
            }
        }
        self
    }

    pub fn mark_singular(mut self, vertex: usize) -> Result<Self> {
        if vertex >= self.len() {
            return Err(Error::InvalidPolygon(format!("singular vertex {vertex} out of range")));
        }
        if !self.singular.contains(&vertex) {
            self.singular.push(vertex);
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_basics() {
        let sq = PolygonDomain::unit_square(1.0);
        assert_eq!(sq.area(), 1.0);
        assert_eq!(sq.perimeter(), 4.0);
        assert!(sq.is_convex());
        assert!(sq.contains(Point::new(0.5, 0.5)));
        assert!(!sq.contains(Point::new(1.5, 0.5)));
    }

    #[test]
    fn rejects_clockwise_and_collinear() {
        let cw = vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        assert!(PolygonDomain::new(cw, vec![Edge::robin(1.0); 3], vec![]).is_err());
        let collinear = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        assert!(PolygonDomain::new(collinear, vec![Edge::robin(1.0); 3], vec![]).is_err());
    }

    #[test]
    fn rejects_self_intersection() {
        // bow-tie with positive net area is impossible; use a crossed pentagon instead
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 3.0),
            Point::new(1.0, -1.0),
            Point::new(0.0, 3.0),
        ];
        assert!(PolygonDomain::new(v, vec![Edge::robin(1.0); 5], vec![]).is_err());
    }

    #[test]
    fn rejects_negative_beta() {
        assert!(PolygonDomain::rectangle(1.0, 1.0, [Edge::robin(-1.0); 4]).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let sq = PolygonDomain::strip(1.0, 0.02, 1.0).unwrap();
        let json = serde_json::to_string(&sq).unwrap();
        let back: PolygonDomain = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sq);
        let bad = r#"{"vertices":[[0,0],[0,1],[1,0]],"edges":[{"tag":"robin","beta":1},{"tag":"robin","beta":1},{"tag":"robin","beta":1}]}"#;
        assert!(serde_json::from_str::<PolygonDomain>(bad).is_err());
    }

    #[test]
    fn regular_polygon_area() {
        let n = 128;
        let disk = PolygonDomain::regular_polygon(n, 1.0, 1.0).unwrap();
        let exact = 0.5 * n as f64 * (2.0 * std::f64::consts::PI / n as f64).sin();
        assert!((disk.area() - exact).abs() < 1e-12);
    }
}
