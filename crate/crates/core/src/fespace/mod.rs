//! Discrete spaces: RT1 stress rows, continuous P2 displacement and
//! discontinuous P1 vorticity, plus interpolation and point evaluation.

mod dofmap;
mod element;
mod quadrature;

pub use dofmap::{build_dof_map, DofMap};
pub use element::{
    p1_reference_basis, p2_reference_basis, piola_map, rt1_functionals, rt1_reference_basis, CellGeometry,
    ElementFamily, ElementTables, ReferenceElement, P1_DIM, P2_DIM, RT1_DIM,
};
pub use quadrature::{gauss_legendre_unit, quadrature_rule, QuadRule};

use crate::error::Result;
use crate::mesh::{Point, TriangleMesh};

pub type Tensor = [[f64; 2]; 2];

/// Quadrature degree used throughout assembly.
pub const ASSEMBLY_QUAD_DEGREE: usize = 5;

/// Canonical interpolant of a tensor field into the stress space.
pub fn interpolate_stress(mesh: &TriangleMesh, map: &DofMap, f: impl Fn(Point) -> Tensor) -> Result<Vec<f64>> {
    let rule = quadrature_rule(ASSEMBLY_QUAD_DEGREE)?;
    let mut coeffs = vec![0.0; map.dim()];
    for c in 0..mesh.num_cells() {
        let geom = CellGeometry::checked(&mesh.cell_points(c), c)?;
        let dofs = map.cell_dofs(c);
        let signs = map.cell_signs(c);
        for row in 0..2 {
            let local = rt1_functionals(|xhat| geom.pull_back_contravariant(f(geom.map(xhat))[row]), &rule);
            for k in 0..RT1_DIM {
                let l = row * RT1_DIM + k;
                if let Some(g) = dofs[l] {
                    coeffs[g] = signs[l] * local[k];
                }
            }
        }
    }
    Ok(coeffs)
}

/// Stress value and row-wise divergence at reference point `xhat` of `cell`.
pub fn eval_stress(mesh: &TriangleMesh, map: &DofMap, coeffs: &[f64], cell: usize, xhat: Point) -> (Tensor, [f64; 2]) {
    let geom = CellGeometry::new(&mesh.cell_points(cell));
    let (v, d) = rt1_reference_basis(xhat);
    let (v, d) = piola_map(&geom, &v, &d).expect("positively oriented cell");
    let dofs = map.cell_dofs(cell);
    let signs = map.cell_signs(cell);
    let mut t = [[0.0; 2]; 2];
    let mut div = [0.0; 2];
    for row in 0..2 {
        for k in 0..RT1_DIM {
            let l = row * RT1_DIM + k;
            if let Some(g) = dofs[l] {
                let a = coeffs[g] * signs[l];
                t[row][0] += a * v[k][0];
                t[row][1] += a * v[k][1];
                div[row] += a * d[k];
            }
        }
    }
    (t, div)
}

/// Physical positions of the six P2 nodes of a cell, in local order.
pub fn p2_node_points(mesh: &TriangleMesh, cell: usize) -> [Point; P2_DIM] {
    let p = mesh.cell_points(cell);
    let mid = |a: usize, b: usize| [(p[a][0] + p[b][0]) / 2.0, (p[a][1] + p[b][1]) / 2.0];
    [p[0], p[1], p[2], mid(1, 2), mid(0, 2), mid(0, 1)]
}

/// Nodal interpolant of a vector field into the displacement space;
/// eliminated boundary dofs are skipped.
pub fn interpolate_displacement(mesh: &TriangleMesh, map: &DofMap, g: impl Fn(Point) -> [f64; 2]) -> Vec<f64> {
    let mut coeffs = vec![0.0; map.dim()];
    for c in 0..mesh.num_cells() {
        let nodes = p2_node_points(mesh, c);
        let dofs = map.cell_dofs(c);
        for comp in 0..2 {
            for k in 0..P2_DIM {
                if let Some(i) = dofs[comp * P2_DIM + k] {
                    coeffs[i] = g(nodes[k])[comp];
                }
            }
        }
    }
    coeffs
}

/// Displacement value and gradient (`grad[i][j] = d u_i / d x_j`).
pub fn eval_displacement(
    mesh: &TriangleMesh,
    map: &DofMap,
    coeffs: &[f64],
    cell: usize,
    xhat: Point,
) -> ([f64; 2], Tensor) {
    let geom = CellGeometry::new(&mesh.cell_points(cell));
    let (v, g) = p2_reference_basis(xhat);
    let dofs = map.cell_dofs(cell);
    let mut u = [0.0; 2];
    let mut grad = [[0.0; 2]; 2];
    for comp in 0..2 {
        for k in 0..P2_DIM {
            if let Some(i) = dofs[comp * P2_DIM + k] {
                let gk = geom.push_gradient(g[k]);
                u[comp] += coeffs[i] * v[k];
                grad[comp][0] += coeffs[i] * gk[0];
                grad[comp][1] += coeffs[i] * gk[1];
            }
        }
    }
    (u, grad)
}

pub fn eval_vorticity(map: &DofMap, coeffs: &[f64], cell: usize, xhat: Point) -> f64 {
    let v = p1_reference_basis(xhat);
    map.cell_dofs(cell).iter().zip(v).map(|(d, vk)| d.map_or(0.0, |i| coeffs[i] * vk)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{l_shape_mesh, unit_square_mesh, MeshFamily, MeshKind};

    fn meshes() -> Vec<TriangleMesh> {
        vec![
            unit_square_mesh(MeshKind::Crossed, 3).unwrap(),
            unit_square_mesh(MeshKind::Right, 4).unwrap(),
            MeshFamily { seed: 7, ..MeshFamily::new(MeshKind::NonUniform, 5) }.build().unwrap(),
            l_shape_mesh(2).unwrap(),
        ]
    }

    /// Reference coordinates of the point at parameter `s` along a global edge,
    /// seen from `cell`.
    fn edge_point_in_cell(mesh: &TriangleMesh, cell: usize, edge: usize, s: f64) -> Point {
        let [a, b] = mesh.edges()[edge];
        let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
        let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
        let g = CellGeometry::new(&mesh.cell_points(cell));
        let d = [x[0] - g.origin[0], x[1] - g.origin[1]];
        let ji = g.jac_inv;
        [ji[0][0] * d[0] + ji[0][1] * d[1], ji[1][0] * d[0] + ji[1][1] * d[1]]
    }

    #[test]
    fn stress_normal_traces_are_continuous() {
        for mesh in meshes() {
            let map = build_dof_map(ElementFamily::Rt1, &mesh, true);
            for basis in 0..map.dim() {
                let mut coeffs = vec![0.0; map.dim()];
                coeffs[basis] = 1.0;
                for e in 0..mesh.num_edges() {
                    let [Some(c0), Some(c1)] = mesh.edge_cells(e) else { continue };
                    let n = mesh.edge_normal(e);
                    for (s, _) in gauss_legendre_unit(2) {
                        let (t0, _) = eval_stress(&mesh, &map, &coeffs, c0, edge_point_in_cell(&mesh, c0, e, s));
                        let (t1, _) = eval_stress(&mesh, &map, &coeffs, c1, edge_point_in_cell(&mesh, c1, e, s));
                        for row in 0..2 {
                            let j0 = t0[row][0] * n[0] + t0[row][1] * n[1];
                            let j1 = t1[row][0] * n[0] + t1[row][1] * n[1];
                            assert!((j0 - j1).abs() < 1e-10, "basis {basis} edge {e}: {j0} vs {j1}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn displacement_is_continuous() {
        let mesh = MeshFamily::new(MeshKind::NonUniform, 3).build().unwrap();
        let map = build_dof_map(ElementFamily::P2Lagrange, &mesh, false);
        for basis in 0..map.dim() {
            let mut coeffs = vec![0.0; map.dim()];
            coeffs[basis] = 1.0;
            for e in 0..mesh.num_edges() {
                let [Some(c0), Some(c1)] = mesh.edge_cells(e) else { continue };
                for s in [0.0, 0.3, 0.5, 1.0] {
                    let (u0, _) = eval_displacement(&mesh, &map, &coeffs, c0, edge_point_in_cell(&mesh, c0, e, s));
                    let (u1, _) = eval_displacement(&mesh, &map, &coeffs, c1, edge_point_in_cell(&mesh, c1, e, s));
                    assert!((u0[0] - u1[0]).abs() < 1e-12 && (u0[1] - u1[1]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn constant_tensor_reproduced() {
        let c = [[1.5, -0.25], [2.0, 0.75]];
        for mesh in meshes() {
            let map = build_dof_map(ElementFamily::Rt1, &mesh, true);
            let coeffs = interpolate_stress(&mesh, &map, |_| c).unwrap();
            for cell in 0..mesh.num_cells() {
                for xhat in [[0.2, 0.2], [0.6, 0.1], [0.1, 0.7]] {
                    let (t, div) = eval_stress(&mesh, &map, &coeffs, cell, xhat);
                    for i in 0..2 {
                        assert!(div[i].abs() < 1e-10);
                        for j in 0..2 {
                            assert!((t[i][j] - c[i][j]).abs() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn linear_tensor_reproduced() {
        // RT1 rows contain all linear vector fields.
        let f = |p: Point| [[1.0 + p[0] - 2.0 * p[1], 0.5 * p[1]], [p[0] + p[1], 3.0 - p[0]]];
        let mesh = MeshFamily::new(MeshKind::NonUniform, 4).build().unwrap();
        let map = build_dof_map(ElementFamily::Rt1, &mesh, true);
        let coeffs = interpolate_stress(&mesh, &map, f).unwrap();
        for cell in 0..mesh.num_cells() {
            let xhat = [0.3, 0.4];
            let x = CellGeometry::new(&mesh.cell_points(cell)).map(xhat);
            let (t, _) = eval_stress(&mesh, &map, &coeffs, cell, xhat);
            let e = f(x);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((t[i][j] - e[i][j]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn linear_vector_field_reproduced() {
        let g = |p: Point| [2.0 * p[0] - p[1] + 0.5, p[0] + 3.0 * p[1]];
        let mesh = l_shape_mesh(2).unwrap();
        let map = build_dof_map(ElementFamily::P2Lagrange, &mesh, false);
        let coeffs = interpolate_displacement(&mesh, &map, g);
        for cell in 0..mesh.num_cells() {
            let xhat = [0.25, 0.5];
            let x = CellGeometry::new(&mesh.cell_points(cell)).map(xhat);
            let (u, grad) = eval_displacement(&mesh, &map, &coeffs, cell, xhat);
            let e = g(x);
            assert!((u[0] - e[0]).abs() < 1e-12 && (u[1] - e[1]).abs() < 1e-12);
            assert!((grad[0][0] - 2.0).abs() < 1e-11 && (grad[0][1] + 1.0).abs() < 1e-11);
            assert!((grad[1][0] - 1.0).abs() < 1e-11 && (grad[1][1] - 3.0).abs() < 1e-11);
        }
    }

    #[test]
    fn divergence_is_piecewise_linear() {
        // div of any stress basis function is linear on each cell: check the
        // value at the centroid against the mean of the vertex values.
        let mesh = MeshFamily::new(MeshKind::NonUniform, 3).build().unwrap();
        let map = build_dof_map(ElementFamily::Rt1, &mesh, true);
        let coeffs: Vec<f64> = (0..map.dim()).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        for cell in 0..mesh.num_cells() {
            let at = |p| eval_stress(&mesh, &map, &coeffs, cell, p).1;
            let (a, b, c, m) = (at([0.0, 0.0]), at([1.0, 0.0]), at([0.0, 1.0]), at([1.0 / 3.0, 1.0 / 3.0]));
            for r in 0..2 {
                let mean = (a[r] + b[r] + c[r]) / 3.0;
                assert!((mean - m[r]).abs() < 1e-10 * (1.0 + m[r].abs()));
            }
        }
    }
}
