//! Reference elements on the triangle with vertices (0,0), (1,0), (0,1).
//!
//! Local numbering follows [`crate::mesh::LOCAL_EDGES`]. RT1 degrees of
//! freedom are ordered `[e0 q0, e0 q1, e1 q0, e1 q1, e2 q0, e2 q1, i_x, i_y]`
//! where `q0 = 1`, `q1 = 2s - 1` are Legendre polynomials in the edge
//! parameter `s` running from the lower to the higher local vertex, the edge
//! moments use the outward unit normal, and `i_x`, `i_y` are the cell means
//! of the two components.

use std::sync::OnceLock;

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use super::quadrature::{gauss_legendre_unit, QuadRule};
use crate::error::{Error, Result};
use crate::mesh::{Point, LOCAL_EDGES};

pub const RT1_DIM: usize = 8;
pub const P2_DIM: usize = 6;
pub const P1_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementFamily {
    Rt1,
    P2Lagrange,
    P1Discontinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceElement {
    pub family: ElementFamily,
    pub dofs_per_vertex: usize,
    pub dofs_per_edge: usize,
    pub dofs_per_cell_interior: usize,
}

impl ReferenceElement {
    pub fn new(family: ElementFamily) -> Self {
        let (v, e, i) = match family {
            ElementFamily::Rt1 => (0, 2, 2),
            ElementFamily::P2Lagrange => (1, 1, 0),
            ElementFamily::P1Discontinuous => (0, 0, 3),
        };
        Self { family, dofs_per_vertex: v, dofs_per_edge: e, dofs_per_cell_interior: i }
    }

    pub fn local_dim(&self) -> usize {
        3 * self.dofs_per_vertex + 3 * self.dofs_per_edge + self.dofs_per_cell_interior
    }
}

/// Outward unit normals and lengths of the reference edges.
const REF_NORMALS: [[f64; 2]; 3] =
    [[std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2], [-1.0, 0.0], [0.0, -1.0]];
const REF_VERTICES: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Spanning set of RT1: P1 vector fields plus `x * {x, y}`.
fn rt1_span(p: Point) -> ([[f64; 2]; RT1_DIM], [f64; RT1_DIM]) {
    let [x, y] = p;
    (
        [[1.0, 0.0], [x, 0.0], [y, 0.0], [0.0, 1.0], [0.0, x], [0.0, y], [x * x, x * y], [x * y, y * y]],
        [0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 3.0 * x, 3.0 * y],
    )
}

/// Applies the eight RT1 functionals to a vector field on the reference cell.
pub fn rt1_functionals(v: impl Fn(Point) -> [f64; 2], interior_rule: &QuadRule) -> [f64; RT1_DIM] {
    let mut out = [0.0; RT1_DIM];
    let gauss = gauss_legendre_unit(3);
    for (e, [a, b]) in LOCAL_EDGES.iter().enumerate() {
        let (pa, pb) = (REF_VERTICES[*a], REF_VERTICES[*b]);
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        let n = REF_NORMALS[e];
        for &(s, w) in &gauss {
            let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let vn = {
                let val = v(x);
                val[0] * n[0] + val[1] * n[1]
            };
            out[2 * e] += w * len * vn;
            out[2 * e + 1] += w * len * vn * (2.0 * s - 1.0);
        }
    }
    for (p, w) in interior_rule.iter() {
        let val = v(p);
        out[6] += w * val[0];
        out[7] += w * val[1];
    }
    out
}

/// `coeffs[j][k]`: coefficient of spanning function `j` in basis function `k`.
fn rt1_coefficients() -> &'static [[f64; RT1_DIM]; RT1_DIM] {
    static COEFFS: OnceLock<[[f64; RT1_DIM]; RT1_DIM]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let rule = super::quadrature::quadrature_rule(4).expect("degree 4 rule");
        // dof_matrix[i][j] = functional i applied to spanning function j
        let mut dof_matrix = Mat::<f64>::zeros(RT1_DIM, RT1_DIM);
        for j in 0..RT1_DIM {
            let col = rt1_functionals(|p| rt1_span(p).0[j], &rule);
            for (i, v) in col.iter().enumerate() {
                dof_matrix[(i, j)] = *v;
            }
        }
        let inv = dof_matrix.partial_piv_lu().inverse();
        let mut c = [[0.0; RT1_DIM]; RT1_DIM];
        for (j, row) in c.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = inv[(j, k)];
            }
        }
        c
    })
}

/// Values and divergences of the eight RT1 reference basis functions.
pub fn rt1_reference_basis(p: Point) -> ([[f64; 2]; RT1_DIM], [f64; RT1_DIM]) {
    let (span_val, span_div) = rt1_span(p);
    let c = rt1_coefficients();
    let mut val = [[0.0; 2]; RT1_DIM];
    let mut div = [0.0; RT1_DIM];
    for k in 0..RT1_DIM {
        for j in 0..RT1_DIM {
            val[k][0] += c[j][k] * span_val[j][0];
            val[k][1] += c[j][k] * span_val[j][1];
            div[k] += c[j][k] * span_div[j];
        }
    }
    (val, div)
}

fn barycentric(p: Point) -> [f64; 3] {
    [1.0 - p[0] - p[1], p[0], p[1]]
}

const BARY_GRADS: [[f64; 2]; 3] = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];

/// Continuous P2: vertex functions first, then edge-midpoint functions in
/// local edge order.
pub fn p2_reference_basis(p: Point) -> ([f64; P2_DIM], [[f64; 2]; P2_DIM]) {
    let l = barycentric(p);
    let g = BARY_GRADS;
    let mut val = [0.0; P2_DIM];
    let mut grad = [[0.0; 2]; P2_DIM];
    for i in 0..3 {
        val[i] = l[i] * (2.0 * l[i] - 1.0);
        let f = 4.0 * l[i] - 1.0;
        grad[i] = [f * g[i][0], f * g[i][1]];
    }
    for (e, [a, b]) in LOCAL_EDGES.iter().enumerate() {
        val[3 + e] = 4.0 * l[*a] * l[*b];
        grad[3 + e] = [4.0 * (l[*b] * g[*a][0] + l[*a] * g[*b][0]), 4.0 * (l[*b] * g[*a][1] + l[*a] * g[*b][1])];
    }
    (val, grad)
}

pub fn p1_reference_basis(p: Point) -> [f64; P1_DIM] {
    barycentric(p)
}

/// Affine map from the reference cell: `x = x0 + J xhat`.
#[derive(Debug, Clone, Copy)]
pub struct CellGeometry {
    pub origin: Point,
    pub jac: [[f64; 2]; 2],
    pub det: f64,
    pub jac_inv: [[f64; 2]; 2],
}

impl CellGeometry {
    pub fn new(points: &[Point; 3]) -> Self {
        let [p0, p1, p2] = *points;
        let jac = [[p1[0] - p0[0], p2[0] - p0[0]], [p1[1] - p0[1], p2[1] - p0[1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let jac_inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
        Self { origin: p0, jac, det, jac_inv }
    }

    pub fn checked(points: &[Point; 3], cell: usize) -> Result<Self> {
        let g = Self::new(points);
        if g.det > 0.0 {
            Ok(g)
        } else {
            Err(Error::DegenerateCell { cell, det: g.det })
        }
    }

    pub fn map(&self, xhat: Point) -> Point {
        [
            self.origin[0] + self.jac[0][0] * xhat[0] + self.jac[0][1] * xhat[1],
            self.origin[1] + self.jac[1][0] * xhat[0] + self.jac[1][1] * xhat[1],
        ]
    }

    /// Physical gradient from a reference gradient: `J^{-T} ghat`.
    pub fn push_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        let ji = self.jac_inv;
        [ji[0][0] * g[0] + ji[1][0] * g[1], ji[0][1] * g[0] + ji[1][1] * g[1]]
    }

    /// Inverse Piola: `vhat = det J * J^{-1} v`.
    pub fn pull_back_contravariant(&self, v: [f64; 2]) -> [f64; 2] {
        let ji = self.jac_inv;
        [self.det * (ji[0][0] * v[0] + ji[0][1] * v[1]), self.det * (ji[1][0] * v[0] + ji[1][1] * v[1])]
    }
}

/// Contravariant Piola transform of reference values and divergences.
pub fn piola_map<const N: usize>(
    geom: &CellGeometry,
    values: &[[f64; 2]; N],
    divergences: &[f64; N],
) -> Result<([[f64; 2]; N], [f64; N])> {
    if geom.det <= 0.0 {
        return Err(Error::DegenerateCell { cell: usize::MAX, det: geom.det });
    }
    let j = geom.jac;
    let inv_det = 1.0 / geom.det;
    let mut v = [[0.0; 2]; N];
    let mut d = [0.0; N];
    for k in 0..N {
        v[k] = [
            inv_det * (j[0][0] * values[k][0] + j[0][1] * values[k][1]),
            inv_det * (j[1][0] * values[k][0] + j[1][1] * values[k][1]),
        ];
        d[k] = inv_det * divergences[k];
    }
    Ok((v, d))
}

/// Basis tables at the points of a quadrature rule, shared by all cells.
#[derive(Debug, Clone)]
pub struct ElementTables {
    pub rule: QuadRule,
    pub rt_val: Vec<[[f64; 2]; RT1_DIM]>,
    pub rt_div: Vec<[f64; RT1_DIM]>,
    pub p2_val: Vec<[f64; P2_DIM]>,
    pub p2_grad: Vec<[[f64; 2]; P2_DIM]>,
    pub p1_val: Vec<[f64; P1_DIM]>,
}

impl ElementTables {
    pub fn new(rule: QuadRule) -> Self {
        let (rt_val, rt_div) = rule.points.iter().map(|&p| rt1_reference_basis(p)).unzip();
        let (p2_val, p2_grad) = rule.points.iter().map(|&p| p2_reference_basis(p)).unzip();
        let p1_val = rule.points.iter().map(|&p| p1_reference_basis(p)).collect();
        Self { rule, rt_val, rt_div, p2_val, p2_grad, p1_val }
    }
}
