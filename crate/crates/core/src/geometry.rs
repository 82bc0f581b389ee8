//! Analytic domain descriptions, triangular mesh generation and refinement,
//! and the mesh text format used by the FEM backend.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Analytic description of a model domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    /// Interval (0, length). Never meshed; served by the closed-form 1D backend.
    Interval { length: f64 },
    /// Rectangle (0, lx) x (0, ly).
    Rectangle { lx: f64, ly: f64 },
    /// Disk of radius r centered at the origin.
    Disk { r: f64 },
    /// Convex polygon, vertices in counterclockwise order.
    Polygon { vertices: Vec<[f64; 2]> },
}

impl DomainSpec {
    /// Validates positivity and, for polygons, simple convex CCW shape.
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Interval { length } => {
                if !(*length > 0.0) {
                    return Err(Error::InvalidDomain("interval length must be positive".into()));
                }
            }
            DomainSpec::Rectangle { lx, ly } => {
                if !(*lx > 0.0 && *ly > 0.0) {
                    return Err(Error::InvalidDomain("rectangle sides must be positive".into()));
                }
            }
            DomainSpec::Disk { r } => {
                if !(*r > 0.0) {
                    return Err(Error::InvalidDomain("disk radius must be positive".into()));
                }
            }
            DomainSpec::Polygon { vertices } => {
                validate_polygon(vertices)?;
            }
        }
        Ok(())
    }

    /// Area of the domain (length for intervals).
    pub fn area(&self) -> f64 {
        match self {
            DomainSpec::Interval { length } => *length,
            DomainSpec::Rectangle { lx, ly } => lx * ly,
            DomainSpec::Disk { r } => std::f64::consts::PI * r * r,
            DomainSpec::Polygon { vertices } => polygon_area(vertices),
        }
    }

    /// Length of the boundary (2 points for intervals, counted as 2 below).
    pub fn perimeter(&self) -> f64 {
        match self {
            // the 0-dimensional boundary measure of an interval is 2 points
            DomainSpec::Interval { .. } => 2.0,
            DomainSpec::Rectangle { lx, ly } => 2.0 * (lx + ly),
            DomainSpec::Disk { r } => 2.0 * std::f64::consts::PI * r,
            DomainSpec::Polygon { vertices } => {
                let k = vertices.len();
                (0..k)
                    .map(|i| dist(vertices[i], vertices[(i + 1) % k]))
                    .sum()
            }
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn polygon_area(v: &[[f64; 2]]) -> f64 {
    let k = v.len();
    0.5 * (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            v[i][0] * v[j][1] - v[j][0] * v[i][1]
        })
        .sum::<f64>()
}

fn validate_polygon(v: &[[f64; 2]]) -> Result<()> {
    if v.len() < 3 {
        return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
    }
    let area = polygon_area(v);
    if area <= 0.0 {
        return Err(Error::InvalidDomain(
            "polygon must be counterclockwise with positive area".into(),
        ));
    }
    let k = v.len();
    let scale = area.sqrt();
    for i in 0..k {
        let a = v[i];
        let b = v[(i + 1) % k];
        let c = v[(i + 2) % k];
        let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cross <= 1e-12 * scale * scale {
            return Err(Error::InvalidDomain(format!(
                "polygon must be strictly convex; corner at vertex {} has cross product {:.3e}",
                (i + 1) % k,
                cross
            )));
        }
    }
    Ok(())
}

/// Boundary edge with its side marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub marker: u32,
}

/// Origin of a mesh; disk meshes remember their radius so refinement can
/// project new boundary nodes back onto the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshOrigin {
    Generic,
    Disk { r: f64 },
}

/// Conforming P1 triangulation with marked boundary edges.
///
/// Invariants (checked by [`TriMesh::validate`]): strictly positive triangle
/// areas, boundary edges forming a single closed loop in traversal order,
/// each boundary edge belonging to exactly one triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Maximum edge length over all triangles.
    pub h: f64,
    pub origin: MeshOrigin,
}

/// Builds a conforming triangulation of a 2D domain with h <= 1.5 * h_target.
///
/// Rectangles get a structured grid split along a fixed diagonal. Disks are
/// approximated by an inscribed regular polygon with boundary segment length
/// <= h_target. Intervals are never meshed.
pub fn build_mesh(domain: &DomainSpec, h_target: f64) -> Result<TriMesh> {
    domain.validate()?;
    if !(h_target > 0.0) {
        return Err(Error::InvalidDomain("h_target must be positive".into()));
    }
    let mesh = match domain {
        DomainSpec::Interval { .. } => {
            return Err(Error::InvalidDomain(
                "interval domains are served by the 1D backend and are never meshed".into(),
            ))
        }
        DomainSpec::Rectangle { lx, ly } => structured_rectangle(*lx, *ly, h_target),
        DomainSpec::Disk { r } => {
            let max_sin = (h_target / (2.0 * r)).min(1.0);
            let nb = ((std::f64::consts::PI / max_sin.asin()).ceil() as usize).max(6);
            let vertices: Vec<[f64; 2]> = (0..nb)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * (i as f64) / (nb as f64);
                    [r * t.cos(), r * t.sin()]
                })
                .collect();
            let mut mesh = fan_mesh(&vertices, MeshOrigin::Disk { r: *r });
            refine_to_target(&mut mesh, h_target);
            mesh
        }
        DomainSpec::Polygon { vertices } => {
            let mut mesh = fan_mesh(vertices, MeshOrigin::Generic);
            refine_to_target(&mut mesh, h_target);
            mesh
        }
    };
    mesh.validate()?;
    debug_assert!(mesh.h <= 1.5 * h_target);
    Ok(mesh)
}

fn structured_rectangle(lx: f64, ly: f64, h_target: f64) -> TriMesh {
    let nx = (lx / h_target).ceil() as usize;
    let ny = (ly / h_target).ceil() as usize;
    let (nx, ny) = (nx.max(1), ny.max(1));
    let dx = lx / nx as f64;
    let dy = ly / ny as f64;
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([i as f64 * dx, j as f64 * dy]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            // fixed diagonal a-c in every cell
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge { nodes: [idx(i, 0), idx(i + 1, 0)], marker: 0 });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge { nodes: [idx(nx, j), idx(nx, j + 1)], marker: 1 });
    }
    for i in (1..=nx).rev() {
        boundary_edges.push(BoundaryEdge { nodes: [idx(i, ny), idx(i - 1, ny)], marker: 2 });
    }
    for j in (1..=ny).rev() {
        boundary_edges.push(BoundaryEdge { nodes: [idx(0, j), idx(0, j - 1)], marker: 3 });
    }
    let h = (dx * dx + dy * dy).sqrt();
    TriMesh { nodes, triangles, boundary_edges, h, origin: MeshOrigin::Generic }
}

/// Fan triangulation of a convex polygon from its vertex centroid.
/// Boundary edge i carries marker i (the polygon side it came from).
fn fan_mesh(vertices: &[[f64; 2]], origin: MeshOrigin) -> TriMesh {
    let k = vertices.len();
    let cx = vertices.iter().map(|p| p[0]).sum::<f64>() / k as f64;
    let cy = vertices.iter().map(|p| p[1]).sum::<f64>() / k as f64;
    let mut nodes = Vec::with_capacity(k + 1);
    nodes.push([cx, cy]);
    nodes.extend_from_slice(vertices);
    let triangles: Vec<[usize; 3]> =
        (0..k).map(|i| [0, 1 + i, 1 + (i + 1) % k]).collect();
    let boundary_edges: Vec<BoundaryEdge> = (0..k)
        .map(|i| BoundaryEdge { nodes: [1 + i, 1 + (i + 1) % k], marker: i as u32 })
        .collect();
    let h = max_edge_length(&nodes, &triangles);
    TriMesh { nodes, triangles, boundary_edges, h, origin }
}

fn refine_to_target(mesh: &mut TriMesh, h_target: f64) {
    let mut guard = 0;
    while mesh.h > 1.5 * h_target {
        *mesh = mesh.refine();
        guard += 1;
        assert!(guard < 32, "refinement loop did not reach target h");
    }
}

fn max_edge_length(nodes: &[[f64; 2]], triangles: &[[usize; 3]]) -> f64 {
    let mut h = 0.0f64;
    for t in triangles {
        for e in 0..3 {
            h = h.max(dist(nodes[t[e]], nodes[t[(e + 1) % 3]]));
        }
    }
    h
}

fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

impl TriMesh {
    /// Uniform red refinement: every triangle splits into four via edge
    /// midpoints. For disk meshes new boundary midpoints are projected onto
    /// the circle.
    pub fn refine(&self) -> TriMesh {
        let mut nodes = self.nodes.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let boundary_set: std::collections::HashSet<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|e| edge_key(e.nodes[0], e.nodes[1]))
            .collect();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>| -> usize {
            let key = edge_key(a, b);
            if let Some(&m) = midpoint.get(&key) {
                return m;
            }
            let mut p = [
                0.5 * (nodes[a][0] + nodes[b][0]),
                0.5 * (nodes[a][1] + nodes[b][1]),
            ];
            if let MeshOrigin::Disk { r } = self.origin {
                if boundary_set.contains(&key) {
                    let norm = (p[0] * p[0] + p[1] * p[1]).sqrt();
                    p = [p[0] * r / norm, p[1] * r / norm];
                }
            }
            nodes.push(p);
            let m = nodes.len() - 1;
            midpoint.insert(key, m);
            m
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for t in &self.triangles {
            let [a, b, c] = *t;
            let mab = mid(a, b, &mut nodes);
            let mbc = mid(b, c, &mut nodes);
            let mca = mid(c, a, &mut nodes);
            triangles.push([a, mab, mca]);
            triangles.push([mab, b, mbc]);
            triangles.push([mca, mbc, c]);
            triangles.push([mab, mbc, mca]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            let [a, b] = e.nodes;
            let m = mid(a, b, &mut nodes);
            boundary_edges.push(BoundaryEdge { nodes: [a, m], marker: e.marker });
            boundary_edges.push(BoundaryEdge { nodes: [m, b], marker: e.marker });
        }
        let h = max_edge_length(&nodes, &triangles);
        TriMesh { nodes, triangles, boundary_edges, h, origin: self.origin }
    }

    /// Sum of triangle areas.
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]))
            .sum()
    }

    /// Sum of boundary edge lengths.
    pub fn boundary_length(&self) -> f64 {
        self.boundary_edges
            .iter()
            .map(|e| dist(self.nodes[e.nodes[0]], self.nodes[e.nodes[1]]))
            .sum()
    }

    /// Boundary nodes in loop traversal order, starting from the first edge.
    pub fn boundary_loop(&self) -> Result<Vec<usize>> {
        if self.boundary_edges.is_empty() {
            return Err(Error::MeshInvalid("no boundary edges".into()));
        }
        let mut next: HashMap<usize, usize> = HashMap::new();
        for e in &self.boundary_edges {
            if next.insert(e.nodes[0], e.nodes[1]).is_some() {
                return Err(Error::MeshInvalid(format!(
                    "boundary node {} has two outgoing edges",
                    e.nodes[0]
                )));
            }
        }
        let start = self.boundary_edges[0].nodes[0];
        let mut loop_nodes = vec![start];
        let mut cur = start;
        loop {
            let nxt = *next
                .get(&cur)
                .ok_or_else(|| Error::MeshInvalid(format!("boundary loop breaks at node {cur}")))?;
            if nxt == start {
                break;
            }
            if loop_nodes.len() > self.boundary_edges.len() {
                return Err(Error::MeshInvalid("boundary loop does not close".into()));
            }
            loop_nodes.push(nxt);
            cur = nxt;
        }
        if loop_nodes.len() != self.boundary_edges.len() {
            return Err(Error::MeshInvalid(
                "boundary edges form more than one loop".into(),
            ));
        }
        Ok(loop_nodes)
    }

    /// Checks all structural invariants.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::MeshInvalid("no nodes".into()));
        }
        let n = self.nodes.len();
        for (i, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::MeshInvalid(format!("triangle {i} references node out of range")));
            }
            let area = signed_area(self.nodes[t[0]], self.nodes[t[1]], self.nodes[t[2]]);
            if area <= 0.0 {
                return Err(Error::MeshInvalid(format!(
                    "triangle {i} has non-positive signed area {area:.3e}"
                )));
            }
        }
        for (i, e) in self.boundary_edges.iter().enumerate() {
            if e.nodes.iter().any(|&v| v >= n) {
                return Err(Error::MeshInvalid(format!(
                    "boundary edge {i} references node out of range"
                )));
            }
        }
        // every triangle edge is shared by two triangles or is exactly one boundary edge
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                *edge_count.entry(edge_key(t[e], t[(e + 1) % 3])).or_insert(0) += 1;
            }
        }
        let mut seen = std::collections::HashSet::new();
        for e in &self.boundary_edges {
            let key = edge_key(e.nodes[0], e.nodes[1]);
            if !seen.insert(key) {
                return Err(Error::MeshInvalid(format!(
                    "duplicate boundary edge {:?}",
                    e.nodes
                )));
            }
            match edge_count.get(&key) {
                Some(1) => {}
                Some(c) => {
                    return Err(Error::MeshInvalid(format!(
                        "boundary edge {:?} belongs to {c} triangles, expected exactly 1",
                        e.nodes
                    )))
                }
                None => {
                    return Err(Error::MeshInvalid(format!(
                        "boundary edge {:?} is not an edge of any triangle",
                        e.nodes
                    )))
                }
            }
        }
        for (key, c) in &edge_count {
            if *c == 1 && !seen.contains(key) {
                return Err(Error::MeshInvalid(format!(
                    "triangle edge {key:?} lies on the boundary but is not marked"
                )));
            }
            if *c > 2 {
                return Err(Error::MeshInvalid(format!(
                    "edge {key:?} shared by {c} triangles"
                )));
            }
        }
        self.boundary_loop()?;
        Ok(())
    }

    /// Writes the mesh in the line-oriented text format.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        writeln!(out, "# robin-limit mesh: {} nodes, {} triangles", self.nodes.len(), self.triangles.len()).unwrap();
        if let MeshOrigin::Disk { r } = self.origin {
            writeln!(out, "# origin disk {:.16e}", r).unwrap();
        }
        for p in &self.nodes {
            writeln!(out, "v {:.16e} {:.16e}", p[0], p[1]).unwrap();
        }
        for t in &self.triangles {
            writeln!(out, "t {} {} {}", t[0], t[1], t[2]).unwrap();
        }
        for e in &self.boundary_edges {
            writeln!(out, "e {} {} {}", e.nodes[0], e.nodes[1], e.marker).unwrap();
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    /// Loads a mesh from the text format, validating topology.
    pub fn load(path: &Path) -> Result<TriMesh> {
        let text = std::fs::read_to_string(path)?;
        let mut nodes = Vec::new();
        let mut triangles: Vec<([usize; 3], usize)> = Vec::new();
        let mut edges: Vec<(BoundaryEdge, usize)> = Vec::new();
        let mut origin = MeshOrigin::Generic;
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() == 3 && fields[0] == "origin" && fields[1] == "disk" {
                    let r = fields[2].parse::<f64>().map_err(|e| Error::MeshParse {
                        line: lineno,
                        msg: format!("bad disk radius: {e}"),
                    })?;
                    origin = MeshOrigin::Disk { r };
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "v" => {
                    if fields.len() != 3 {
                        return Err(Error::MeshParse { line: lineno, msg: "v record needs 2 coordinates".into() });
                    }
                    let x = parse_f64(fields[1], lineno)?;
                    let y = parse_f64(fields[2], lineno)?;
                    nodes.push([x, y]);
                }
                "t" => {
                    if fields.len() != 4 {
                        return Err(Error::MeshParse { line: lineno, msg: "t record needs 3 indices".into() });
                    }
                    let t = [
                        parse_usize(fields[1], lineno)?,
                        parse_usize(fields[2], lineno)?,
                        parse_usize(fields[3], lineno)?,
                    ];
                    triangles.push((t, lineno));
                }
                "e" => {
                    if fields.len() != 4 {
                        return Err(Error::MeshParse { line: lineno, msg: "e record needs 2 indices and a marker".into() });
                    }
                    let a = parse_usize(fields[1], lineno)?;
                    let b = parse_usize(fields[2], lineno)?;
                    let marker = parse_usize(fields[3], lineno)? as u32;
                    edges.push((BoundaryEdge { nodes: [a, b], marker }, lineno));
                }
                other => {
                    return Err(Error::MeshParse {
                        line: lineno,
                        msg: format!("unknown record `{other}`"),
                    })
                }
            }
        }
        if nodes.is_empty() {
            return Err(Error::MeshInvalid("no nodes".into()));
        }
        let n = nodes.len();
        for (t, lineno) in &triangles {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::MeshParse {
                    line: *lineno,
                    msg: format!("triangle index out of range (node count {n})"),
                });
            }
        }
        for (e, lineno) in &edges {
            if e.nodes.iter().any(|&v| v >= n) {
                return Err(Error::MeshParse {
                    line: *lineno,
                    msg: format!("edge index out of range (node count {n})"),
                });
            }
        }
        let triangles: Vec<[usize; 3]> = triangles.into_iter().map(|(t, _)| t).collect();
        let boundary_edges: Vec<BoundaryEdge> = edges.into_iter().map(|(e, _)| e).collect();
        let h = max_edge_length(&nodes, &triangles);
        let mesh = TriMesh { nodes, triangles, boundary_edges, h, origin };
        mesh.validate()?;
        Ok(mesh)
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b { (a, b) } else { (b, a) }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::MeshParse { line, msg: format!("bad float `{s}`: {e}") })
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse::<usize>().map_err(|e| Error::MeshParse { line, msg: format!("bad index `{s}`: {e}") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_square_structured_counts() {
        // 2x2 structured grid: 9 nodes, 8 triangles, 8 boundary edges
        let mesh = build_mesh(&DomainSpec::Rectangle { lx: 1.0, ly: 1.0 }, 0.5).unwrap();
        assert_eq!(mesh.nodes.len(), 9);
        assert_eq!(mesh.triangles.len(), 8);
        assert_eq!(mesh.boundary_edges.len(), 8);
    }

    #[test]
    fn rectangle_area_is_conserved() {
        for h in [0.7, 0.3, 0.11] {
            let mesh = build_mesh(&DomainSpec::Rectangle { lx: 1.0, ly: 2.0 }, h).unwrap();
            assert_abs_diff_eq!(mesh.area(), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn disk_perimeter_inscribed() {
        let mesh = build_mesh(&DomainSpec::Disk { r: 1.0 }, 0.1).unwrap();
        let p = mesh.boundary_length();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!(p < two_pi, "inscribed perimeter {p} must stay below 2*pi");
        assert!(p > two_pi - 0.05, "perimeter {p} too short");
        // O(h^2)-consistent area
        let err = (mesh.area() - std::f64::consts::PI).abs();
        assert!(err < mesh.h * mesh.h * std::f64::consts::PI, "disk area error {err}");
    }

    #[test]
    fn refine_quadruples_triangles() {
        let mesh = build_mesh(&DomainSpec::Rectangle { lx: 1.0, ly: 1.0 }, 0.5).unwrap();
        let fine = mesh.refine();
        assert_eq!(fine.triangles.len(), 32);
        fine.validate().unwrap();
        // structured h ratio in [0.45, 0.55]
        let ratio = fine.h / mesh.h;
        assert!((0.45..=0.55).contains(&ratio), "h ratio {ratio}");
    }

    #[test]
    fn refine_keeps_boundary_loop_closed() {
        let mesh = build_mesh(&DomainSpec::Disk { r: 2.0 }, 0.8).unwrap();
        let fine = mesh.refine().refine();
        fine.validate().unwrap();
        let loop_nodes = fine.boundary_loop().unwrap();
        assert_eq!(loop_nodes.len(), fine.boundary_edges.len());
    }

    #[test]
    fn disk_refinement_grows_perimeter() {
        let mesh = build_mesh(&DomainSpec::Disk { r: 1.0 }, 0.5).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut prev = mesh.boundary_length();
        let mut m = mesh;
        for _ in 0..2 {
            m = m.refine();
            let p = m.boundary_length();
            assert!(p > prev, "perimeter should increase under projection");
            assert!(p < two_pi);
            prev = p;
        }
    }

    #[test]
    fn interval_is_never_meshed() {
        let err = build_mesh(&DomainSpec::Interval { length: 1.0 }, 0.1).unwrap_err();
        assert!(matches!(err, Error::InvalidDomain(_)));
    }

    #[test]
    fn reentrant_polygon_rejected() {
        let vertices = vec![
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 2.0],
            [1.0, 0.5], // re-entrant corner
            [0.0, 2.0],
        ];
        let err = build_mesh(&DomainSpec::Polygon { vertices }, 0.5).unwrap_err();
        assert!(matches!(err, Error::InvalidDomain(_)));
    }

    #[test]
    fn convex_polygon_mesh_area() {
        // right triangle with legs 1 and 1
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let mesh = build_mesh(&DomainSpec::Polygon { vertices }, 0.2).unwrap();
        assert_abs_diff_eq!(mesh.area(), 0.5, epsilon = 1e-10);
        assert!(mesh.h <= 1.5 * 0.2);
    }

    #[test]
    fn mesh_io_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for domain in [
            DomainSpec::Rectangle { lx: 1.0, ly: 2.0 },
            DomainSpec::Disk { r: 1.5 },
        ] {
            let mesh = build_mesh(&domain, 0.4).unwrap();
            let path = dir.path().join("mesh.txt");
            mesh.save(&path).unwrap();
            let loaded = TriMesh::load(&path).unwrap();
            assert_eq!(mesh, loaded);
        }
    }

    #[test]
    fn load_rejects_dangling_index_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "v 0 0\nv 1 0\nv 0 1\nt 0 1 7\ne 0 1 0\n").unwrap();
        let err = TriMesh::load(&path).unwrap_err();
        match err {
            Error::MeshParse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error with line, got {other}"),
        }
    }

    #[test]
    fn load_rejects_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.txt");
        std::fs::write(&path, "").unwrap();
        let err = TriMesh::load(&path).unwrap_err();
        assert!(err.to_string().contains("no nodes"), "got: {err}");
    }

    #[test]
    fn boundary_loop_visits_each_node_once() {
        let mesh = build_mesh(&DomainSpec::Rectangle { lx: 1.0, ly: 2.0 }, 0.3).unwrap();
        let loop_nodes = mesh.boundary_loop().unwrap();
        let unique: std::collections::HashSet<_> = loop_nodes.iter().collect();
        assert_eq!(unique.len(), loop_nodes.len());
    }
}
