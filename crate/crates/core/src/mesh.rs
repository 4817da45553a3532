//! Triangulations of the unit square and the L-shaped domain.
//!
//! Edges carry a global orientation: an edge is stored as `[a, b]` with
//! `a < b`, its tangent points from `a` to `b` and its normal is the tangent
//! rotated clockwise. Each cell records, per local edge, whether its outward
//! normal agrees with that global normal. Local edge `i` is the edge opposite
//! local vertex `i`, with endpoints listed in [`LOCAL_EDGES`].

use std::collections::HashMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Local endpoints of the three edges of a cell, ascending local index.
pub const LOCAL_EDGES: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];

/// Relative area below which a cell is considered degenerate.
const AREA_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Crossed,
    Right,
    NonUniform,
    LShapeUniform,
}

impl MeshKind {
    pub fn name(self) -> &'static str {
        match self {
            MeshKind::Crossed => "crossed",
            MeshKind::Right => "right",
            MeshKind::NonUniform => "nonunif",
            MeshKind::LShapeUniform => "lshape",
        }
    }

    /// Area of the meshed domain.
    pub fn domain_area(self) -> f64 {
        match self {
            MeshKind::LShapeUniform => 3.0,
            _ => 1.0,
        }
    }
}

impl std::str::FromStr for MeshKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "crossed" => Ok(MeshKind::Crossed),
            "right" => Ok(MeshKind::Right),
            "nonunif" | "nonuniform" => Ok(MeshKind::NonUniform),
            "lshape" | "l-shape" => Ok(MeshKind::LShapeUniform),
            other => Err(Error::InvalidArgument(format!("unknown mesh kind '{other}'"))),
        }
    }
}

/// A parametrized mesh sequence member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshFamily {
    pub kind: MeshKind,
    pub n: usize,
    /// Only used by [`MeshKind::NonUniform`].
    pub seed: u64,
    /// Maximum vertex displacement as a fraction of `h`; only used by
    /// [`MeshKind::NonUniform`].
    pub perturbation: f64,
}

impl MeshFamily {
    pub const DEFAULT_PERTURBATION: f64 = 0.2;

    pub fn new(kind: MeshKind, n: usize) -> Self {
        Self { kind, n, seed: 1, perturbation: Self::DEFAULT_PERTURBATION }
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    pub fn build(&self) -> Result<TriangleMesh> {
        match self.kind {
            MeshKind::Crossed | MeshKind::Right => unit_square_mesh(self.kind, self.n),
            MeshKind::NonUniform => {
                let base = unit_square_mesh(MeshKind::Right, self.n)?;
                perturbed_mesh(&base, self.seed, self.perturbation)
            }
            MeshKind::LShapeUniform => l_shape_mesh(self.n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point>,
    cells: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    cell_edges: Vec<[usize; 3]>,
    cell_edge_signs: Vec<[i8; 3]>,
    edge_cells: Vec<[Option<usize>; 2]>,
    boundary_vertex: Vec<bool>,
}

impl TriangleMesh {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Global edge indices of the local edges of `cell`.
    pub fn cell_edges(&self, cell: usize) -> [usize; 3] {
        self.cell_edges[cell]
    }

    /// `+1` where the outward normal of `cell` matches the global edge normal.
    pub fn cell_edge_signs(&self, cell: usize) -> [i8; 3] {
        self.cell_edge_signs[cell]
    }

    /// Whether the local parametrization of a cell edge (from the lower to
    /// the higher local vertex) runs against the global edge direction.
    pub fn edge_reversed(&self, cell: usize, local_edge: usize) -> bool {
        let [l0, l1] = LOCAL_EDGES[local_edge];
        let c = self.cells[cell];
        c[l0] > c[l1]
    }

    /// Cells adjacent to an edge; the second slot is `None` on the boundary.
    pub fn edge_cells(&self, edge: usize) -> [Option<usize>; 2] {
        self.edge_cells[edge]
    }

    pub fn is_boundary_edge(&self, edge: usize) -> bool {
        self.edge_cells[edge][1].is_none()
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.is_boundary_edge(e)).collect()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    pub fn cell_points(&self, cell: usize) -> [Point; 3] {
        let [a, b, c] = self.cells[cell];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn cell_area(&self, cell: usize) -> f64 {
        signed_area(&self.cell_points(cell))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_cells()).map(|c| self.cell_area(c)).sum()
    }

    pub fn edge_length(&self, edge: usize) -> f64 {
        let [a, b] = self.edges[edge];
        dist(self.vertices[a], self.vertices[b])
    }

    /// Unit normal of an edge in the global orientation convention.
    pub fn edge_normal(&self, edge: usize) -> Point {
        let [a, b] = self.edges[edge];
        let (pa, pb) = (self.vertices[a], self.vertices[b]);
        let t = [pb[0] - pa[0], pb[1] - pa[1]];
        let len = (t[0] * t[0] + t[1] * t[1]).sqrt();
        [t[1] / len, -t[0] / len]
    }

    pub fn max_edge_length(&self) -> f64 {
        (0..self.num_edges()).map(|e| self.edge_length(e)).fold(0.0, f64::max)
    }

    pub fn min_edge_length(&self) -> f64 {
        (0..self.num_edges()).map(|e| self.edge_length(e)).fold(f64::INFINITY, f64::min)
    }

    /// Writes one `x y` line per vertex followed by one `i j k` line per cell.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for p in &self.vertices {
            writeln!(w, "{:?} {:?}", p[0], p[1])?;
        }
        for c in &self.cells {
            writeln!(w, "{} {} {}", c[0], c[1], c[2])?;
        }
        Ok(())
    }

    /// Inverse of [`TriangleMesh::write_dump`]: two-field lines are vertices,
    /// three-field lines are cells.
    pub fn read_dump(text: &str) -> Result<TriangleMesh> {
        let mut vertices = Vec::new();
        let mut cells = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            match fields.len() {
                0 => continue,
                2 => {
                    let x = fields[0].parse().map_err(|_| bad("bad coordinate"))?;
                    let y = fields[1].parse().map_err(|_| bad("bad coordinate"))?;
                    vertices.push([x, y]);
                }
                3 => {
                    let mut c = [0usize; 3];
                    for (slot, f) in c.iter_mut().zip(&fields) {
                        *slot = f.parse().map_err(|_| bad("bad vertex index"))?;
                    }
                    cells.push(c);
                }
                _ => return Err(bad("expected 2 or 3 fields")),
            }
        }
        build_connectivity(vertices, cells)
    }
}

fn dist(a: Point, b: Point) -> f64 {
    ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
}

pub fn signed_area(p: &[Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

/// Builds edges, orientation signs and boundary flags from raw cells.
///
/// Clockwise cells are reordered to counterclockwise. Zero-area and
/// duplicate cells, out-of-range indices and edges shared by more than two
/// cells are rejected.
pub fn build_connectivity(vertices: Vec<Point>, cells: Vec<[usize; 3]>) -> Result<TriangleMesh> {
    let nv = vertices.len();
    let mut seen = HashMap::with_capacity(cells.len());
    let mut oriented = Vec::with_capacity(cells.len());
    for (ci, &c) in cells.iter().enumerate() {
        if c.iter().any(|&v| v >= nv) {
            return Err(Error::DegenerateMesh(format!("cell {ci} references a missing vertex")));
        }
        let mut key = c;
        key.sort_unstable();
        if key[0] == key[1] || key[1] == key[2] {
            return Err(Error::DegenerateMesh(format!("cell {ci} repeats a vertex")));
        }
        if let Some(prev) = seen.insert(key, ci) {
            return Err(Error::DegenerateMesh(format!("cells {prev} and {ci} coincide")));
        }
        let pts = [vertices[c[0]], vertices[c[1]], vertices[c[2]]];
        let area = signed_area(&pts);
        let scale = dist(pts[0], pts[1]).max(dist(pts[0], pts[2])).powi(2);
        if area.abs() <= AREA_TOL * scale {
            return Err(Error::DegenerateMesh(format!("cell {ci} has zero area")));
        }
        oriented.push(if area > 0.0 { c } else { [c[0], c[2], c[1]] });
    }

    let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_cells: Vec<[Option<usize>; 2]> = Vec::new();
    let mut cell_edges = Vec::with_capacity(oriented.len());
    for (ci, c) in oriented.iter().enumerate() {
        let mut ce = [0usize; 3];
        for (le, [l0, l1]) in LOCAL_EDGES.iter().enumerate() {
            let (a, b) = (c[*l0], c[*l1]);
            let key = if a < b { [a, b] } else { [b, a] };
            let e = *edge_index.entry(key).or_insert_with(|| {
                edges.push(key);
                edge_cells.push([None, None]);
                edges.len() - 1
            });
            match edge_cells[e] {
                [None, _] => edge_cells[e][0] = Some(ci),
                [Some(_), None] => edge_cells[e][1] = Some(ci),
                [Some(_), Some(_)] => {
                    return Err(Error::DegenerateMesh(format!("edge {key:?} shared by more than two cells")))
                }
            }
            ce[le] = e;
        }
        cell_edges.push(ce);
    }

    // Cells on the boundary keep a single neighbour in slot 0.
    let mut boundary_vertex = vec![false; nv];
    for (e, ec) in edge_cells.iter().enumerate() {
        if ec[1].is_none() {
            boundary_vertex[edges[e][0]] = true;
            boundary_vertex[edges[e][1]] = true;
        }
    }

    let mut mesh = TriangleMesh {
        vertices,
        cells: oriented,
        edges,
        cell_edges,
        cell_edge_signs: Vec::new(),
        edge_cells,
        boundary_vertex,
    };
    mesh.cell_edge_signs = (0..mesh.num_cells())
        .map(|c| {
            let mut s = [0i8; 3];
            for (le, sign) in s.iter_mut().enumerate() {
                let e = mesh.cell_edges[c][le];
                let n = mesh.edge_normal(e);
                let pa = mesh.vertices[mesh.edges[e][0]];
                let opp = mesh.vertices[mesh.cells[c][le]];
                let side = n[0] * (opp[0] - pa[0]) + n[1] * (opp[1] - pa[1]);
                *sign = if side < 0.0 { 1 } else { -1 };
            }
            s
        })
        .collect();
    Ok(mesh)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("number of subdivisions must be at least 1".into()));
    }
    Ok(())
}

/// Structured triangulation of `]0,1[^2` with `n` subdivisions per side.
pub fn unit_square_mesh(kind: MeshKind, n: usize) -> Result<TriangleMesh> {
    check_n(n)?;
    let h = 1.0 / n as f64;
    let grid = |i: usize, j: usize| j * (n + 1) + i;
    let mut vertices: Vec<Point> = Vec::with_capacity((n + 1) * (n + 1) + n * n);
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 * h, j as f64 * h]);
        }
    }
    let mut cells = Vec::new();
    match kind {
        MeshKind::Right => {
            for j in 0..n {
                for i in 0..n {
                    let (v00, v10, v01, v11) = (grid(i, j), grid(i + 1, j), grid(i, j + 1), grid(i + 1, j + 1));
                    cells.push([v00, v10, v11]);
                    cells.push([v00, v11, v01]);
                }
            }
        }
        MeshKind::Crossed => {
            for j in 0..n {
                for i in 0..n {
                    let m = vertices.len();
                    vertices.push([(i as f64 + 0.5) * h, (j as f64 + 0.5) * h]);
                    let (v00, v10, v01, v11) = (grid(i, j), grid(i + 1, j), grid(i, j + 1), grid(i + 1, j + 1));
                    cells.push([v00, v10, m]);
                    cells.push([v10, v11, m]);
                    cells.push([v11, v01, m]);
                    cells.push([v01, v00, m]);
                }
            }
        }
        other => {
            return Err(Error::InvalidArgument(format!("{} is not a structured unit-square pattern", other.name())))
        }
    }
    build_connectivity(vertices, cells)
}

/// Randomly displaces interior vertices by at most `perturbation * h` per
/// coordinate, `h` being the shortest edge of `base`.
///
/// A displacement that inverts an adjacent cell is retried at half length;
/// if that still inverts, the call fails.
pub fn perturbed_mesh(base: &TriangleMesh, seed: u64, perturbation: f64) -> Result<TriangleMesh> {
    if !(0.0..0.5).contains(&perturbation) {
        return Err(Error::InvalidArgument(format!("perturbation must lie in [0, 0.5), got {perturbation}")));
    }
    let h = base.min_edge_length();
    let mut vertex_cells = vec![Vec::new(); base.num_vertices()];
    for (c, cell) in base.cells().iter().enumerate() {
        for &v in cell {
            vertex_cells[v].push(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices = base.vertices().to_vec();
    for v in 0..vertices.len() {
        if base.is_boundary_vertex(v) {
            continue;
        }
        let d = [rng.gen_range(-1.0..=1.0) * perturbation * h, rng.gen_range(-1.0..=1.0) * perturbation * h];
        let origin = vertices[v];
        let mut placed = false;
        for scale in [1.0, 0.5] {
            vertices[v] = [origin[0] + scale * d[0], origin[1] + scale * d[1]];
            let ok = vertex_cells[v].iter().all(|&c| {
                let [a, b, cc] = base.cells()[c];
                signed_area(&[vertices[a], vertices[b], vertices[cc]]) > AREA_TOL * h * h
            });
            if ok {
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::DegenerateMesh(format!("perturbing vertex {v} inverts an adjacent cell")));
        }
    }
    build_connectivity(vertices, base.cells().to_vec())
}

/// Uniform mesh of `]-1,1[^2 \ [0,1]x[-1,0]` with `n` subdivisions of the
/// full side `[-1,1]` (so `h = 2/n`, `n` even). The diagonal of the
/// sub-square `(i, j)`, counted from `(-1,-1)`, runs from its lower-left to
/// its upper-right corner when `i + j` is even and the other way otherwise.
pub fn l_shape_mesh(n: usize) -> Result<TriangleMesh> {
    check_n(n)?;
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("L-shape needs an even number of subdivisions, got {n}")));
    }
    let half = n / 2;
    let h = 2.0 / n as f64;
    let removed = |i: usize, j: usize| i > half && j < half;
    let mut index = vec![usize::MAX; (n + 1) * (n + 1)];
    let mut vertices = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            if !removed(i, j) {
                index[j * (n + 1) + i] = vertices.len();
                vertices.push([-1.0 + i as f64 * h, -1.0 + j as f64 * h]);
            }
        }
    }
    let id = |i: usize, j: usize| index[j * (n + 1) + i];
    let mut cells = Vec::with_capacity(3 * half * half * 2);
    for j in 0..n {
        for i in 0..n {
            if i >= half && j < half {
                continue;
            }
            let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            if (i + j) % 2 == 0 {
                cells.push([v00, v10, v11]);
                cells.push([v00, v11, v01]);
            } else {
                cells.push([v00, v10, v01]);
                cells.push([v10, v11, v01]);
            }
        }
    }
    build_connectivity(vertices, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(mesh: &TriangleMesh) {
        for c in 0..mesh.num_cells() {
            assert!(mesh.cell_area(c) > 0.0, "cell {c} not counterclockwise");
        }
        for e in 0..mesh.num_edges() {
            let [a, b] = mesh.edges()[e];
            assert!(a < b);
            if let [Some(c0), Some(c1)] = mesh.edge_cells(e) {
                let s = |c: usize| {
                    let le = mesh.cell_edges(c).iter().position(|&x| x == e).unwrap();
                    mesh.cell_edge_signs(c)[le]
                };
                assert_eq!(s(c0), -s(c1), "edge {e}");
            }
        }
    }

    #[test]
    fn right_one() {
        let m = unit_square_mesh(MeshKind::Right, 1).unwrap();
        assert_eq!((m.num_cells(), m.num_vertices(), m.num_edges()), (2, 4, 5));
        check_invariants(&m);
    }

    #[test]
    fn crossed_counts() {
        let m = unit_square_mesh(MeshKind::Crossed, 1).unwrap();
        assert_eq!((m.num_cells(), m.num_vertices(), m.num_edges()), (4, 5, 8));
        // Enumerated independently: 4N^2 cells, (N+1)^2 + N^2 vertices.
        let m = unit_square_mesh(MeshKind::Crossed, 4).unwrap();
        assert_eq!((m.num_cells(), m.num_vertices()), (64, 41));
        check_invariants(&m);
    }

    #[test]
    fn euler_characteristic() {
        let m = unit_square_mesh(MeshKind::Crossed, 2).unwrap();
        let chi = m.num_vertices() as i64 - m.num_edges() as i64 + m.num_cells() as i64;
        assert_eq!(chi, 1);
    }

    #[test]
    fn zero_subdivisions_rejected() {
        assert!(matches!(unit_square_mesh(MeshKind::Right, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(l_shape_mesh(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn single_triangle() {
        let m = build_connectivity(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 1, 2]]).unwrap();
        assert_eq!(m.num_edges(), 3);
        assert_eq!(m.boundary_edges().len(), 3);
    }

    #[test]
    fn shared_edge_has_opposite_signs() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let m = build_connectivity(v, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let shared = (0..m.num_edges()).find(|&e| !m.is_boundary_edge(e)).unwrap();
        assert_eq!(m.edges()[shared], [0, 2]);
        let sign = |c: usize| {
            let le = m.cell_edges(c).iter().position(|&x| x == shared).unwrap();
            m.cell_edge_signs(c)[le]
        };
        assert_eq!(sign(0), -sign(1));
    }

    #[test]
    fn degenerate_cells_rejected() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0]];
        assert!(matches!(build_connectivity(v.clone(), vec![[0, 1, 2]]), Err(Error::DegenerateMesh(_))));
        assert!(matches!(build_connectivity(v, vec![[0, 1, 3], [3, 1, 0]]), Err(Error::DegenerateMesh(_))));
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let m = build_connectivity(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], vec![[0, 2, 1]]).unwrap();
        assert!(m.cell_area(0) > 0.0);
    }

    #[test]
    fn l_shape_counts_and_boundary() {
        let m = l_shape_mesh(2).unwrap();
        assert_eq!((m.num_cells(), m.num_vertices()), (6, 8));
        assert_eq!(l_shape_mesh(8).unwrap().num_cells(), 96);
        assert!(matches!(l_shape_mesh(3), Err(Error::InvalidArgument(_))));
        let m = l_shape_mesh(8).unwrap();
        check_invariants(&m);
        assert!((m.total_area() - 3.0).abs() < 1e-12);
        // Boundary polygon of the L: x = +-1, y = +-1, and the two re-entrant sides.
        let on_polygon = |p: Point| {
            let eq = |a: f64, b: f64| (a - b).abs() < 1e-12;
            eq(p[0].abs(), 1.0) && p[1] >= -1.0 && p[1] <= 1.0
                || eq(p[1].abs(), 1.0)
                || (eq(p[0], 0.0) && p[1] <= 0.0)
                || (eq(p[1], 0.0) && p[0] >= 0.0)
        };
        for e in m.boundary_edges() {
            let [a, b] = m.edges()[e];
            let (pa, pb) = (m.vertices()[a], m.vertices()[b]);
            let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
            assert!(on_polygon(pa) && on_polygon(pb) && on_polygon(mid), "edge {e}");
        }
    }

    #[test]
    fn areas_sum_to_domain() {
        for m in [
            unit_square_mesh(MeshKind::Crossed, 5).unwrap(),
            unit_square_mesh(MeshKind::Right, 7).unwrap(),
            MeshFamily::new(MeshKind::NonUniform, 6).build().unwrap(),
        ] {
            assert!((m.total_area() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let base = unit_square_mesh(MeshKind::Right, 4).unwrap();
        let p = perturbed_mesh(&base, 0, 0.0).unwrap();
        assert_eq!(p, base);
    }

    #[test]
    fn perturbation_keeps_topology_and_boundary() {
        let base = unit_square_mesh(MeshKind::Right, 4).unwrap();
        let p = perturbed_mesh(&base, 1, 0.2).unwrap();
        assert_eq!(p.cells(), base.cells());
        assert_eq!(p.edges(), base.edges());
        let mut moved = 0;
        for v in 0..base.num_vertices() {
            if base.is_boundary_vertex(v) {
                assert_eq!(p.vertices()[v], base.vertices()[v]);
            } else if p.vertices()[v] != base.vertices()[v] {
                moved += 1;
            }
        }
        assert!(moved > 0);
        let p10 = perturbed_mesh(&unit_square_mesh(MeshKind::Right, 10).unwrap(), 1, 0.2).unwrap();
        assert_eq!(p10.num_cells(), 200);
        check_invariants(&p10);
    }

    #[test]
    fn perturbation_bound_checked() {
        let base = unit_square_mesh(MeshKind::Right, 2).unwrap();
        assert!(perturbed_mesh(&base, 0, 0.5).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let a = MeshFamily::new(MeshKind::NonUniform, 5).build().unwrap();
        let b = MeshFamily::new(MeshKind::NonUniform, 5).build().unwrap();
        assert_eq!(a, b);
        assert_eq!(l_shape_mesh(6).unwrap(), l_shape_mesh(6).unwrap());
    }

    #[test]
    fn dump_round_trip() {
        let m = unit_square_mesh(MeshKind::Crossed, 2).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        let back = TriangleMesh::read_dump(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
