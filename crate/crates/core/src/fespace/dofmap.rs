use super::element::{ElementFamily, P1_DIM, P2_DIM, RT1_DIM};
use crate::mesh::TriangleMesh;

/// Global numbering of one of the three discrete spaces.
///
/// * `Rt1` is the stress space: two independent RT1 rows, local index
///   `row * 8 + k`, global index `row * rt_dim + g(k)` where edge dofs come
///   first (`2 * edge + j`) followed by interior dofs (`2 * n_edges + 2 * cell + j`).
/// * `P2Lagrange` is the continuous vector displacement space, local index
///   `comp * 6 + k`, global index `comp * n_nodes + node`. Nodes are vertices
///   followed by edges; with Dirichlet elimination boundary nodes are dropped.
/// * `P1Discontinuous` is the scalar vorticity space, index `3 * cell + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    family: ElementFamily,
    dim: usize,
    local_dim: usize,
    cell_dofs: Vec<Option<usize>>,
    cell_signs: Vec<f64>,
    boundary_dofs: Vec<usize>,
    scalar_dim: usize,
}

impl DofMap {
    pub fn family(&self) -> ElementFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Dimension of one row (RT1) or one component (P2); equals `dim` for P1d.
    pub fn scalar_dim(&self) -> usize {
        self.scalar_dim
    }

    /// Global indices of the local dofs of `cell`; `None` marks an
    /// eliminated Dirichlet dof.
    pub fn cell_dofs(&self, cell: usize) -> &[Option<usize>] {
        &self.cell_dofs[cell * self.local_dim..(cell + 1) * self.local_dim]
    }

    /// Orientation signs of the local dofs (all `1.0` except for RT1 edge dofs).
    pub fn cell_signs(&self, cell: usize) -> &[f64] {
        &self.cell_signs[cell * self.local_dim..(cell + 1) * self.local_dim]
    }

    /// Dofs whose nodes lie on the boundary. Empty when they were eliminated.
    pub fn boundary_dofs(&self) -> &[usize] {
        &self.boundary_dofs
    }

    pub fn num_cells(&self) -> usize {
        self.cell_dofs.len() / self.local_dim
    }
}

pub fn build_dof_map(family: ElementFamily, mesh: &TriangleMesh, dirichlet: bool) -> DofMap {
    match family {
        ElementFamily::Rt1 => stress_map(mesh),
        ElementFamily::P2Lagrange => displacement_map(mesh, dirichlet),
        ElementFamily::P1Discontinuous => vorticity_map(mesh),
    }
}

fn stress_map(mesh: &TriangleMesh) -> DofMap {
    let ne = mesh.num_edges();
    let rt_dim = 2 * ne + 2 * mesh.num_cells();
    let local_dim = 2 * RT1_DIM;
    let mut cell_dofs = Vec::with_capacity(mesh.num_cells() * local_dim);
    let mut cell_signs = Vec::with_capacity(mesh.num_cells() * local_dim);
    for c in 0..mesh.num_cells() {
        let edges = mesh.cell_edges(c);
        let normal_signs = mesh.cell_edge_signs(c);
        let mut scalar = [0usize; RT1_DIM];
        let mut signs = [1.0; RT1_DIM];
        for le in 0..3 {
            let s_n = f64::from(normal_signs[le]);
            let s_p = if mesh.edge_reversed(c, le) { -1.0 } else { 1.0 };
            scalar[2 * le] = 2 * edges[le];
            scalar[2 * le + 1] = 2 * edges[le] + 1;
            signs[2 * le] = s_n;
            // the degree-1 Legendre moment also flips with the edge parameter
            signs[2 * le + 1] = s_n * s_p;
        }
        scalar[6] = 2 * ne + 2 * c;
        scalar[7] = 2 * ne + 2 * c + 1;
        for row in 0..2 {
            for k in 0..RT1_DIM {
                cell_dofs.push(Some(row * rt_dim + scalar[k]));
                cell_signs.push(signs[k]);
            }
        }
    }
    DofMap {
        family: ElementFamily::Rt1,
        dim: 2 * rt_dim,
        local_dim,
        cell_dofs,
        cell_signs,
        boundary_dofs: Vec::new(),
        scalar_dim: rt_dim,
    }
}

fn displacement_map(mesh: &TriangleMesh, dirichlet: bool) -> DofMap {
    let nv = mesh.num_vertices();
    let nodes = nv + mesh.num_edges();
    let on_boundary: Vec<bool> = (0..nv)
        .map(|v| mesh.is_boundary_vertex(v))
        .chain((0..mesh.num_edges()).map(|e| mesh.is_boundary_edge(e)))
        .collect();
    let mut numbering = vec![None; nodes];
    let mut next = 0;
    for (node, slot) in numbering.iter_mut().enumerate() {
        if !(dirichlet && on_boundary[node]) {
            *slot = Some(next);
            next += 1;
        }
    }
    let scalar_dim = next;
    let local_dim = 2 * P2_DIM;
    let mut cell_dofs = Vec::with_capacity(mesh.num_cells() * local_dim);
    for c in 0..mesh.num_cells() {
        let verts = mesh.cells()[c];
        let edges = mesh.cell_edges(c);
        let local_nodes = [verts[0], verts[1], verts[2], nv + edges[0], nv + edges[1], nv + edges[2]];
        for comp in 0..2 {
            for node in local_nodes {
                cell_dofs.push(numbering[node].map(|i| comp * scalar_dim + i));
            }
        }
    }
    let boundary_dofs = if dirichlet {
        Vec::new()
    } else {
        (0..2)
            .flat_map(|comp| {
                on_boundary.iter().enumerate().filter(|(_, &b)| b).map(move |(node, _)| comp * scalar_dim + node)
            })
            .collect()
    };
    DofMap {
        family: ElementFamily::P2Lagrange,
        dim: 2 * scalar_dim,
        local_dim,
        cell_signs: vec![1.0; cell_dofs.len()],
        cell_dofs,
        boundary_dofs,
        scalar_dim,
    }
}

fn vorticity_map(mesh: &TriangleMesh) -> DofMap {
    let dim = P1_DIM * mesh.num_cells();
    DofMap {
        family: ElementFamily::P1Discontinuous,
        dim,
        local_dim: P1_DIM,
        cell_dofs: (0..dim).map(Some).collect(),
        cell_signs: vec![1.0; dim],
        boundary_dofs: Vec::new(),
        scalar_dim: dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{unit_square_mesh, MeshKind};

    #[test]
    fn crossed_one_dimensions() {
        let mesh = unit_square_mesh(MeshKind::Crossed, 1).unwrap();
        let s = build_dof_map(ElementFamily::Rt1, &mesh, true);
        assert_eq!(s.scalar_dim(), 24);
        assert_eq!(s.dim(), 48);
        let u = build_dof_map(ElementFamily::P2Lagrange, &mesh, true);
        assert_eq!(u.dim(), 10);
        let psi = build_dof_map(ElementFamily::P1Discontinuous, &mesh, true);
        assert_eq!(psi.dim(), 12);
    }

    #[test]
    fn indices_in_range_and_all_referenced() {
        let mesh = unit_square_mesh(MeshKind::Right, 3).unwrap();
        for (family, dirichlet) in [
            (ElementFamily::Rt1, true),
            (ElementFamily::P2Lagrange, true),
            (ElementFamily::P2Lagrange, false),
            (ElementFamily::P1Discontinuous, true),
        ] {
            let map = build_dof_map(family, &mesh, dirichlet);
            let mut hit = vec![false; map.dim()];
            for c in 0..mesh.num_cells() {
                for &d in map.cell_dofs(c).iter().flatten() {
                    assert!(d < map.dim());
                    hit[d] = true;
                }
            }
            assert!(hit.iter().all(|&h| h), "{family:?}");
        }
    }

    #[test]
    fn p2_boundary_set_is_boundary_nodes() {
        let mesh = unit_square_mesh(MeshKind::Crossed, 2).unwrap();
        let full = build_dof_map(ElementFamily::P2Lagrange, &mesh, false);
        let reduced = build_dof_map(ElementFamily::P2Lagrange, &mesh, true);
        let boundary_nodes = mesh.boundary_edges().len() * 2; // vertices + midpoints on a closed polygon
        assert_eq!(full.boundary_dofs().len(), 2 * boundary_nodes);
        assert_eq!(full.dim() - reduced.dim(), 2 * boundary_nodes);
        assert!(reduced.boundary_dofs().is_empty());
    }
}
