//! Assembly of the least-squares pencils.
//!
//! Two-field, unknowns `(sigma, u)`:
//!
//! ```text
//! (A s, A t) + (div s, div t) - (A t, eps u)  = -omega (u, div t)
//! -(A s, eps v) + (eps u, eps v)              = 0
//! ```
//!
//! Three-field, unknowns `(sigma, u, psi)`, adds `(as s, as t)` to the stress
//! block and couples the vorticity through `chi psi`; see
//! [`ThreeFieldCoupling`] for the two variants of the displacement terms.
//!
//! Zero-mean conditions (`int tr(sigma) = 0`, `int psi = 0`) are imposed by
//! symmetric Lagrange-multiplier borders; Dirichlet displacement dofs are
//! removed from the numbering.

mod material;

use std::ops::Range;

pub use material::{chi, compliance_apply, inner, skew, symgrad, Material};

use crate::error::{Error, Result};
use crate::fespace::{
    build_dof_map, piola_map, quadrature_rule, CellGeometry, DofMap, ElementFamily, ElementTables, Tensor,
    ASSEMBLY_QUAD_DEGREE, P1_DIM, P2_DIM, RT1_DIM,
};
use crate::mesh::{Point, TriangleMesh};
use crate::sparse::CsrMatrix;

const NS: usize = 2 * RT1_DIM;
const NU: usize = 2 * P2_DIM;
const NP: usize = P1_DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    TwoField,
    ThreeField,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::TwoField => "two",
            Formulation::ThreeField => "three",
        }
    }
}

impl std::str::FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" | "2" | "two-field" => Ok(Formulation::TwoField),
            "three" | "3" | "three-field" => Ok(Formulation::ThreeField),
            _ => Err(Error::InvalidArgument(format!("unknown formulation '{s}'"))),
        }
    }
}

/// Displacement couplings of the three-field system.
///
/// `Functional` is the normal equation of
/// `||A t - grad v + chi phi||^2 + ||div t||^2 + ||as t||^2`: the stress and
/// displacement blocks couple through `(A t, grad u)` and `(grad u, grad v)`.
/// `SymmetricGradient` keeps the two-field couplings `(A t, eps u)` and
/// `(eps u, eps v)` and only adds the vorticity terms; it is not consistent
/// with the continuous eigenproblem and is kept for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThreeFieldCoupling {
    #[default]
    Functional,
    SymmetricGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyOptions {
    /// Border with the `int tr(sigma) = 0` multiplier.
    pub trace_constraint: bool,
    /// Border with the `int psi = 0` multiplier (three-field only).
    pub vorticity_constraint: bool,
    pub coupling: ThreeFieldCoupling,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self { trace_constraint: true, vorticity_constraint: true, coupling: ThreeFieldCoupling::default() }
    }
}

/// Index ranges of the unknown blocks, in the order
/// `sigma | u | psi | multipliers`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub sigma: Range<usize>,
    pub u: Range<usize>,
    pub psi: Option<Range<usize>>,
    pub multipliers: Range<usize>,
}

impl BlockLayout {
    pub fn dim(&self) -> usize {
        self.multipliers.end
    }

    pub fn n_constraints(&self) -> usize {
        self.multipliers.len()
    }

    /// Layout without field structure, for pencils built by hand: every
    /// unknown is treated as a displacement.
    pub fn displacement_only(n: usize) -> Self {
        Self { sigma: 0..0, u: 0..n, psi: None, multipliers: n..n }
    }
}

#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub formulation: Formulation,
    pub material: Material,
    /// Symmetric left-hand matrix.
    pub lhs: CsrMatrix,
    /// Right-hand matrix; nonzero only in the (stress rows, displacement columns) block.
    pub rhs: CsrMatrix,
    pub blocks: BlockLayout,
    pub stress: DofMap,
    pub displacement: DofMap,
    pub vorticity: Option<DofMap>,
}

impl BlockSystem {
    pub fn dim(&self) -> usize {
        self.blocks.dim()
    }

    /// The coupling block of the right-hand matrix (stress rows, displacement columns).
    pub fn coupling_block(&self) -> CsrMatrix {
        self.rhs.block(self.blocks.sigma.clone(), self.blocks.u.clone())
    }
}

/// Per-cell element matrices, in global orientation (RT1 signs applied).
#[derive(Debug, Clone)]
pub struct LocalKernelSet {
    pub stress_stress: [[f64; NS]; NS],
    pub stress_disp: [[f64; NU]; NS],
    pub disp_disp: [[f64; NU]; NU],
    pub stress_vort: [[f64; NP]; NS],
    pub disp_vort: [[f64; NP]; NU],
    pub vort_vort: [[f64; NP]; NP],
    /// `-(u, div t)`: stress rows, displacement columns.
    pub rhs_stress_disp: [[f64; NU]; NS],
}

impl LocalKernelSet {
    fn zero() -> Self {
        Self {
            stress_stress: [[0.0; NS]; NS],
            stress_disp: [[0.0; NU]; NS],
            disp_disp: [[0.0; NU]; NU],
            stress_vort: [[0.0; NP]; NS],
            disp_vort: [[0.0; NP]; NU],
            vort_vort: [[0.0; NP]; NP],
            rhs_stress_disp: [[0.0; NU]; NS],
        }
    }
}

fn unit_row_tensor(row: usize, v: [f64; 2]) -> Tensor {
    let mut t = [[0.0; 2]; 2];
    t[row] = v;
    t
}

/// Element matrices of one cell.
pub fn local_kernels(
    geom: &CellGeometry,
    stress_signs: &[f64],
    tables: &ElementTables,
    material: &Material,
    formulation: Formulation,
    coupling: ThreeFieldCoupling,
) -> LocalKernelSet {
    let mut k = LocalKernelSet::zero();
    let three = formulation == Formulation::ThreeField;
    let full_grad = three && coupling == ThreeFieldCoupling::Functional;
    for (q, (_, w)) in tables.rule.iter().enumerate() {
        let w = w * geom.det;
        let (rt_val, rt_div) = piola_map(geom, &tables.rt_val[q], &tables.rt_div[q]).expect("positive det");

        let mut tau = [[[0.0; 2]; 2]; NS];
        let mut a_tau = [[[0.0; 2]; 2]; NS];
        let mut div_tau = [[0.0; 2]; NS];
        for row in 0..2 {
            for kk in 0..RT1_DIM {
                let a = row * RT1_DIM + kk;
                let s = stress_signs[a];
                tau[a] = unit_row_tensor(row, [s * rt_val[kk][0], s * rt_val[kk][1]]);
                a_tau[a] = compliance_apply(&tau[a], material);
                div_tau[a][row] = s * rt_div[kk];
            }
        }

        let mut u_val = [[0.0; 2]; NU];
        let mut u_grad = [[[0.0; 2]; 2]; NU];
        let mut u_strain = [[[0.0; 2]; 2]; NU];
        for comp in 0..2 {
            for kk in 0..P2_DIM {
                let b = comp * P2_DIM + kk;
                u_val[b][comp] = tables.p2_val[q][kk];
                u_grad[b] = unit_row_tensor(comp, geom.push_gradient(tables.p2_grad[q][kk]));
                u_strain[b] = symgrad(&u_grad[b]);
            }
        }
        // displacement derivative entering the stress/displacement couplings
        let u_d = if full_grad { &u_grad } else { &u_strain };

        for a in 0..NS {
            for b in 0..NS {
                let mut v = inner(&a_tau[a], &a_tau[b]) + div_tau[a][0] * div_tau[b][0] + div_tau[a][1] * div_tau[b][1];
                if three {
                    v += inner(&skew(&tau[a]), &skew(&tau[b]));
                }
                k.stress_stress[a][b] += w * v;
            }
            for b in 0..NU {
                k.stress_disp[a][b] -= w * inner(&a_tau[a], &u_d[b]);
                k.rhs_stress_disp[a][b] -= w * (u_val[b][0] * div_tau[a][0] + u_val[b][1] * div_tau[a][1]);
            }
        }
        for a in 0..NU {
            for b in 0..NU {
                k.disp_disp[a][b] += w * inner(&u_d[a], &u_d[b]);
            }
        }
        if three {
            let psi: [Tensor; NP] = std::array::from_fn(|kk| chi(tables.p1_val[q][kk]));
            for c in 0..NP {
                for a in 0..NS {
                    k.stress_vort[a][c] += w * inner(&a_tau[a], &psi[c]);
                }
                for a in 0..NU {
                    k.disp_vort[a][c] -= w * inner(&psi[c], &u_grad[a]);
                }
                for d in 0..NP {
                    k.vort_vort[c][d] += w * inner(&psi[c], &psi[d]);
                }
            }
        }
    }
    k
}

/// Row `j -> int tr(phi_j)` over the stress basis.
pub fn trace_constraint_row(mesh: &TriangleMesh, stress: &DofMap) -> Result<Vec<f64>> {
    let tables = ElementTables::new(quadrature_rule(ASSEMBLY_QUAD_DEGREE)?);
    let mut row = vec![0.0; stress.dim()];
    for c in 0..mesh.num_cells() {
        let geom = CellGeometry::checked(&mesh.cell_points(c), c)?;
        let dofs = stress.cell_dofs(c);
        let signs = stress.cell_signs(c);
        for (q, (_, w)) in tables.rule.iter().enumerate() {
            let (val, _) = piola_map(&geom, &tables.rt_val[q], &tables.rt_div[q])?;
            for r in 0..2 {
                for kk in 0..RT1_DIM {
                    let l = r * RT1_DIM + kk;
                    if let Some(g) = dofs[l] {
                        // row r contributes its r-th component to the trace
                        row[g] += w * geom.det * signs[l] * val[kk][r];
                    }
                }
            }
        }
    }
    Ok(row)
}

/// Row `j -> int phi_j` over the vorticity basis.
pub fn vorticity_mean_row(mesh: &TriangleMesh, vorticity: &DofMap) -> Vec<f64> {
    let mut row = vec![0.0; vorticity.dim()];
    for c in 0..mesh.num_cells() {
        let area = mesh.cell_area(c);
        for d in vorticity.cell_dofs(c).iter().flatten() {
            row[*d] += area / 3.0;
        }
    }
    row
}

pub fn assemble_two_field(mesh: &TriangleMesh, material: &Material) -> Result<BlockSystem> {
    assemble(mesh, Formulation::TwoField, material, &AssemblyOptions::default())
}

pub fn assemble_three_field(mesh: &TriangleMesh, material: &Material) -> Result<BlockSystem> {
    assemble(mesh, Formulation::ThreeField, material, &AssemblyOptions::default())
}

pub fn assemble(
    mesh: &TriangleMesh,
    formulation: Formulation,
    material: &Material,
    options: &AssemblyOptions,
) -> Result<BlockSystem> {
    let three = formulation == Formulation::ThreeField;
    let stress = build_dof_map(ElementFamily::Rt1, mesh, true);
    let displacement = build_dof_map(ElementFamily::P2Lagrange, mesh, true);
    let vorticity = three.then(|| build_dof_map(ElementFamily::P1Discontinuous, mesh, true));
    for map in [Some(&stress), Some(&displacement), vorticity.as_ref()].into_iter().flatten() {
        if map.num_cells() != mesh.num_cells() {
            return Err(Error::Internal(format!("{:?} map does not match the mesh", map.family())));
        }
    }

    let sigma = 0..stress.dim();
    let u = sigma.end..sigma.end + displacement.dim();
    let psi = vorticity.as_ref().map(|v| u.end..u.end + v.dim());
    let fields_end = psi.as_ref().map_or(u.end, |p| p.end);
    let n_mult = usize::from(options.trace_constraint) + usize::from(three && options.vorticity_constraint);
    let blocks = BlockLayout { sigma, u, psi, multipliers: fields_end..fields_end + n_mult };
    let n = blocks.dim();

    let tables = ElementTables::new(quadrature_rule(ASSEMBLY_QUAD_DEGREE)?);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for c in 0..mesh.num_cells() {
        let geom = CellGeometry::checked(&mesh.cell_points(c), c)?;
        let k = local_kernels(&geom, stress.cell_signs(c), &tables, material, formulation, options.coupling);
        let sd: Vec<Option<usize>> = stress.cell_dofs(c).to_vec();
        let ud: Vec<Option<usize>> = displacement.cell_dofs(c).iter().map(|d| d.map(|i| blocks.u.start + i)).collect();
        for a in 0..NS {
            let Some(i) = sd[a] else { continue };
            for b in 0..NS {
                if let Some(j) = sd[b] {
                    lhs.push((i, j, k.stress_stress[a][b]));
                }
            }
            for b in 0..NU {
                if let Some(j) = ud[b] {
                    lhs.push((i, j, k.stress_disp[a][b]));
                    lhs.push((j, i, k.stress_disp[a][b]));
                    rhs.push((i, j, k.rhs_stress_disp[a][b]));
                }
            }
        }
        for a in 0..NU {
            let Some(i) = ud[a] else { continue };
            for b in 0..NU {
                if let Some(j) = ud[b] {
                    lhs.push((i, j, k.disp_disp[a][b]));
                }
            }
        }
        if let (Some(vmap), Some(prange)) = (&vorticity, &blocks.psi) {
            let pd: Vec<usize> =
                vmap.cell_dofs(c).iter().map(|d| prange.start + d.expect("no eliminated vorticity dofs")).collect();
            for cc in 0..NP {
                for a in 0..NS {
                    if let Some(i) = sd[a] {
                        lhs.push((i, pd[cc], k.stress_vort[a][cc]));
                        lhs.push((pd[cc], i, k.stress_vort[a][cc]));
                    }
                }
                for a in 0..NU {
                    if let Some(i) = ud[a] {
                        lhs.push((i, pd[cc], k.disp_vort[a][cc]));
                        lhs.push((pd[cc], i, k.disp_vort[a][cc]));
                    }
                }
                for d in 0..NP {
                    lhs.push((pd[cc], pd[d], k.vort_vort[cc][d]));
                }
            }
        }
    }

    let mut mult = blocks.multipliers.start;
    if options.trace_constraint {
        for (j, v) in trace_constraint_row(mesh, &stress)?.into_iter().enumerate() {
            if v != 0.0 {
                lhs.push((mult, j, v));
                lhs.push((j, mult, v));
            }
        }
        mult += 1;
    }
    if let (Some(vmap), Some(prange), true) = (&vorticity, &blocks.psi, options.vorticity_constraint) {
        for (j, v) in vorticity_mean_row(mesh, vmap).into_iter().enumerate() {
            lhs.push((mult, prange.start + j, v));
            lhs.push((prange.start + j, mult, v));
        }
    }

    Ok(BlockSystem {
        formulation,
        material: *material,
        lhs: CsrMatrix::from_triplets(n, n, &lhs),
        rhs: CsrMatrix::from_triplets(n, n, &rhs),
        blocks,
        stress,
        displacement,
        vorticity,
    })
}

/// Right-hand side `-(f, div t)` of the source problem.
pub fn source_rhs(mesh: &TriangleMesh, system: &BlockSystem, f: impl Fn(Point) -> [f64; 2]) -> Result<Vec<f64>> {
    let tables = ElementTables::new(quadrature_rule(ASSEMBLY_QUAD_DEGREE)?);
    let mut b = vec![0.0; system.dim()];
    for c in 0..mesh.num_cells() {
        let geom = CellGeometry::checked(&mesh.cell_points(c), c)?;
        let dofs = system.stress.cell_dofs(c);
        let signs = system.stress.cell_signs(c);
        for (q, (p, w)) in tables.rule.iter().enumerate() {
            let fx = f(geom.map(p));
            let (_, div) = piola_map(&geom, &tables.rt_val[q], &tables.rt_div[q])?;
            for r in 0..2 {
                for kk in 0..RT1_DIM {
                    let l = r * RT1_DIM + kk;
                    if let Some(g) = dofs[l] {
                        b[g] -= w * geom.det * signs[l] * div[kk] * fx[r];
                    }
                }
            }
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fespace::{interpolate_displacement, interpolate_stress};
    use crate::mesh::{l_shape_mesh, unit_square_mesh, MeshFamily, MeshKind};

    #[test]
    fn dimensions_on_crossed_one() {
        let mesh = unit_square_mesh(MeshKind::Crossed, 1).unwrap();
        let two = assemble_two_field(&mesh, &Material::StokesLimit).unwrap();
        assert_eq!(two.dim(), 59);
        let three = assemble_three_field(&mesh, &Material::StokesLimit).unwrap();
        assert_eq!(three.dim(), 72);
        assert_eq!(three.blocks.n_constraints(), 2);
    }

    #[test]
    fn lhs_is_symmetric() {
        for mesh in
            [unit_square_mesh(MeshKind::Right, 3).unwrap(), MeshFamily::new(MeshKind::NonUniform, 3).build().unwrap()]
        {
            for f in [Formulation::TwoField, Formulation::ThreeField] {
                for material in [Material::StokesLimit, Material::lame(1.0, 3.0).unwrap()] {
                    for coupling in [ThreeFieldCoupling::Functional, ThreeFieldCoupling::SymmetricGradient] {
                        let opts = AssemblyOptions { coupling, ..Default::default() };
                        let s = assemble(&mesh, f, &material, &opts).unwrap();
                        assert!(s.lhs.max_asymmetry() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn rhs_confined_to_stress_rows_and_displacement_columns() {
        let mesh = unit_square_mesh(MeshKind::Crossed, 2).unwrap();
        let s = assemble_three_field(&mesh, &Material::StokesLimit).unwrap();
        assert!(s.rhs.nnz() > 0);
        for (i, j, _) in s.rhs.iter() {
            assert!(s.blocks.sigma.contains(&i) && s.blocks.u.contains(&j));
        }
    }

    #[test]
    fn trace_row_on_identity() {
        let id = |_: Point| [[1.0, 0.0], [0.0, 1.0]];
        let sq = unit_square_mesh(MeshKind::Crossed, 2).unwrap();
        let map = build_dof_map(ElementFamily::Rt1, &sq, true);
        let row = trace_constraint_row(&sq, &map).unwrap();
        let x = interpolate_stress(&sq, &map, id).unwrap();
        let v: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((v - 2.0).abs() < 1e-12);

        let dev = interpolate_stress(&sq, &map, |_| [[1.0, 3.0], [-2.0, -1.0]]).unwrap();
        let v: f64 = row.iter().zip(&dev).map(|(a, b)| a * b).sum();
        assert!(v.abs() < 1e-12);

        let l = l_shape_mesh(2).unwrap();
        let map = build_dof_map(ElementFamily::Rt1, &l, true);
        let row = trace_constraint_row(&l, &map).unwrap();
        let x = interpolate_stress(&l, &map, id).unwrap();
        let v: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((v - 6.0).abs() < 1e-12);
    }

    #[test]
    fn identity_stress_in_kernel_for_stokes() {
        let mesh = unit_square_mesh(MeshKind::Crossed, 1).unwrap();
        let opts = AssemblyOptions { trace_constraint: false, ..Default::default() };
        let s = assemble(&mesh, Formulation::TwoField, &Material::StokesLimit, &opts).unwrap();
        let mut x = interpolate_stress(&mesh, &s.stress, |_| [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        x.resize(s.dim(), 0.0);
        let ax = s.lhs.matvec(&x);
        assert!(ax.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn skew_block_vanishes_on_symmetric_stress() {
        // only the (as s, as t) term differs between the two stress blocks
        let mesh = unit_square_mesh(MeshKind::Crossed, 1).unwrap();
        let opts = AssemblyOptions { trace_constraint: false, vorticity_constraint: false, ..Default::default() };
        let two = assemble(&mesh, Formulation::TwoField, &Material::StokesLimit, &opts).unwrap();
        let three = assemble(&mesh, Formulation::ThreeField, &Material::StokesLimit, &opts).unwrap();
        let ns = two.blocks.sigma.len();
        let diff: Vec<(usize, usize, f64)> =
            three.lhs.block(0..ns, 0..ns).iter().map(|(i, j, v)| (i, j, v - two.lhs.get(i, j))).collect();
        let skew_block = CsrMatrix::from_triplets(ns, ns, &diff);
        let x = interpolate_stress(&mesh, &two.stress, |p| [[p[0], 1.0 + p[1]], [1.0 + p[1], 2.0 - p[0]]]).unwrap();
        assert!(skew_block.matvec(&x).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn element_strain_matrix_is_positive_semidefinite() {
        let tables = ElementTables::new(quadrature_rule(5).unwrap());
        let geom = CellGeometry::new(&[[0.1, 0.0], [0.7, 0.2], [0.3, 0.9]]);
        let k = local_kernels(
            &geom,
            &[1.0; NS],
            &tables,
            &Material::StokesLimit,
            Formulation::TwoField,
            ThreeFieldCoupling::Functional,
        );
        let mut m = faer::Mat::<f64>::zeros(NU, NU);
        for i in 0..NU {
            for j in 0..NU {
                m[(i, j)] = k.disp_disp[i][j];
                assert!((k.disp_disp[i][j] - k.disp_disp[j][i]).abs() < 1e-14);
            }
        }
        let ev = m.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
        assert!(ev[0] > -1e-12);
    }

    #[test]
    fn assembly_independent_of_cell_order() {
        let mesh = MeshFamily::new(MeshKind::NonUniform, 3).build().unwrap();
        let mut cells = mesh.cells().to_vec();
        cells.reverse();
        let reordered = crate::mesh::build_connectivity(mesh.vertices().to_vec(), cells).unwrap();
        let a = assemble_two_field(&mesh, &Material::StokesLimit).unwrap();
        let b = assemble_two_field(&reordered, &Material::StokesLimit).unwrap();
        // dof numbering differs; compare invariants of the pencils
        let fro = |m: &CsrMatrix| m.iter().map(|(_, _, v)| v * v).sum::<f64>().sqrt();
        assert!((fro(&a.lhs) - fro(&b.lhs)).abs() < 1e-13 * fro(&a.lhs));
        assert!((fro(&a.rhs) - fro(&b.rhs)).abs() < 1e-13 * fro(&a.rhs));
        let tr = |m: &CsrMatrix| (0..m.nrows()).map(|i| m.get(i, i)).sum::<f64>();
        assert!((tr(&a.lhs) - tr(&b.lhs)).abs() < 1e-13 * tr(&a.lhs).abs());
    }

    #[test]
    fn displacement_interpolant_pairs_with_rhs() {
        // B x with x = (0, interpolant of u) equals -(u_h, div t)
        let mesh = unit_square_mesh(MeshKind::Right, 2).unwrap();
        let s = assemble_two_field(&mesh, &Material::StokesLimit).unwrap();
        let u = interpolate_displacement(&mesh, &s.displacement, |p| [p[0] * (1.0 - p[0]) * p[1] * (1.0 - p[1]), 0.0]);
        let mut x = vec![0.0; s.dim()];
        x[s.blocks.u.clone()].copy_from_slice(&u);
        let bx = s.rhs.matvec(&x);
        assert!(bx[s.blocks.sigma.clone()].iter().any(|v| v.abs() > 1e-6));
        assert!(bx[s.blocks.u.start..].iter().all(|&v| v == 0.0));
    }
}
