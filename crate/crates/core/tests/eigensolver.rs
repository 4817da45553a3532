//! Iterative solver against the dense oracle, count checks and pencil classes.

use lsq_elasticity::assembly::{assemble, AssemblyOptions, BlockSystem, Formulation, Material};
use lsq_elasticity::fespace::interpolate_stress;
use lsq_elasticity::gevp::{
    classify, classify_pencil, count_check, dense_full_solve, filter_u_nonvanishing, solve_pencil, solve_smallest,
    PencilCase, SolveOptions,
};
use lsq_elasticity::mesh::{perturbed_mesh, unit_square_mesh, MeshFamily, MeshKind, TriangleMesh};
use num_complex::Complex64;

fn system(mesh: &TriangleMesh, f: Formulation, material: Material) -> BlockSystem {
    assemble(mesh, f, &material, &AssemblyOptions::default()).unwrap()
}

fn square(kind: MeshKind, n: usize) -> TriangleMesh {
    MeshFamily::new(kind, n).build().unwrap()
}

fn assert_close_sets(a: &[Complex64], b: &[Complex64], rel: f64) {
    for x in a {
        let d = b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min);
        assert!(d <= rel * x.norm(), "{x} has no partner in {b:?} (distance {d:e})");
    }
}

#[test]
fn iterative_matches_dense_oracle() {
    let cases = [
        (square(MeshKind::Crossed, 2), Formulation::TwoField),
        (square(MeshKind::Crossed, 2), Formulation::ThreeField),
        (square(MeshKind::Right, 2), Formulation::TwoField),
        (square(MeshKind::NonUniform, 2), Formulation::ThreeField),
    ];
    for (mesh, f) in cases {
        let s = system(&mesh, f, Material::StokesLimit);
        assert!(s.dim() <= 500);
        let dense = dense_full_solve(&s).unwrap();
        let iter = solve_smallest(&s, 5, 1e-10).unwrap();
        let want: Vec<Complex64> = dense.omegas().into_iter().take(5).collect();
        let got: Vec<Complex64> = iter.omegas().into_iter().take(5).collect();
        assert_eq!(got.len(), 5);
        assert_close_sets(&got, &want, 1e-8);
        assert_close_sets(&want, &got, 1e-8);
    }
}

#[test]
fn shift_does_not_change_eigenvalues() {
    let s = system(&square(MeshKind::Right, 4), Formulation::TwoField, Material::StokesLimit);
    let base = solve_smallest(&s, 4, 1e-10).unwrap().omegas();
    for shift in [30.0, -10.0] {
        let opts = SolveOptions { shift, tol: 1e-10, ..SolveOptions::new(4) };
        let shifted = solve_pencil(&s.lhs, &s.rhs, &s.blocks, &opts).unwrap();
        assert_eq!(shifted.info.shift, shift);
        assert_close_sets(&base[..2], &shifted.omegas(), 1e-9);
    }
}

#[test]
fn complex_pairs_are_closed_and_resolved() {
    // a slightly perturbed crossed mesh splits the double second eigenvalue into a pair
    let mesh = perturbed_mesh(&unit_square_mesh(MeshKind::Crossed, 4).unwrap(), 2, 0.05).unwrap();
    let s = system(&mesh, Formulation::ThreeField, Material::StokesLimit);
    let spectrum = solve_smallest(&s, 5, 1e-9).unwrap();
    let o = spectrum.omegas();
    assert!(o.iter().any(|w| w.im.abs() > 1e-6 * w.norm()), "{o:?}");
    assert!(spectrum.is_conjugate_closed(1e-8));
    assert!(spectrum.worst_residual() <= 1e-9);
    let dense = dense_full_solve(&s).unwrap();
    assert_close_sets(&o, &dense.omegas(), 1e-8);
}

#[test]
fn residuals_and_reality_on_symmetric_meshes() {
    for f in [Formulation::TwoField, Formulation::ThreeField] {
        let s = system(&square(MeshKind::Crossed, 6), f, Material::StokesLimit);
        let spectrum = solve_smallest(&s, 6, 1e-9).unwrap();
        assert!(spectrum.worst_residual() <= 1e-9);
        assert!(spectrum.is_conjugate_closed(1e-8));
        assert!(spectrum.finite[0].is_real(1e-12));
        assert!(spectrum.finite[0].u_fraction > 0.1);
    }
}

#[test]
fn count_law_holds_for_compressible_material() {
    for n in [1, 2] {
        let s = system(&square(MeshKind::Crossed, n), Formulation::TwoField, Material::lame(1.0, 1.0).unwrap());
        let c = count_check(&s).unwrap();
        assert!(c.holds(), "{c:?}");
        assert_eq!(c.predicted.infinite, s.blocks.sigma.len() + c.predicted.dim_ker_d + c.predicted.n_multipliers);
    }
}

#[test]
fn stokes_limit_loses_two_finite_values_per_interior_vertex() {
    for n in [1, 2] {
        let mesh = square(MeshKind::Crossed, n);
        let interior = (0..mesh.num_vertices()).filter(|&v| !mesh.is_boundary_vertex(v)).count();
        let s = system(&mesh, Formulation::TwoField, Material::StokesLimit);
        let c = count_check(&s).unwrap();
        assert_eq!(c.predicted.rank_d, s.blocks.u.len());
        assert_eq!(c.finite, c.predicted.finite - 2 * interior);
        assert_eq!(c.finite + c.infinite, s.dim());
    }
}

#[test]
fn crossed_one_is_role_swap() {
    let s = system(&square(MeshKind::Crossed, 1), Formulation::TwoField, Material::StokesLimit);
    let c = classify(&s).unwrap();
    assert_eq!(c.class.case, PencilCase::RoleSwap);
    assert_eq!(c.class.dim_ker_a_cap_ker_b, 0);
    assert_eq!(c.class.rank_b, c.counts.unwrap().predicted.rank_d);
    let three = system(&square(MeshKind::Crossed, 1), Formulation::ThreeField, Material::StokesLimit);
    let c = classify(&three).unwrap();
    assert_eq!(c.class.case, PencilCase::RoleSwap);
    assert!(c.counts.is_none());
}

#[test]
fn missing_trace_constraint_is_degenerate() {
    let mesh = square(MeshKind::Crossed, 1);
    let opts = AssemblyOptions { trace_constraint: false, ..Default::default() };
    let s = assemble(&mesh, Formulation::TwoField, &Material::StokesLimit, &opts).unwrap();
    let class = classify_pencil(&s.lhs, &s.rhs).unwrap();
    assert_eq!(class.case, PencilCase::Degenerate);
    assert!(class.dim_ker_a_cap_ker_b >= 1);
    let mut x = interpolate_stress(&mesh, &s.stress, |_| [[1.0, 0.0], [0.0, 1.0]]).unwrap();
    x.resize(s.dim(), 0.0);
    assert!(s.lhs.matvec(&x).iter().all(|v| v.abs() < 1e-12));
    assert!(s.rhs.matvec(&x).iter().all(|v| v.abs() < 1e-12));
    assert!(solve_smallest(&s, 1, 1e-9).is_err());
}

#[test]
fn retained_pairs_bounded_by_displacement_dimension() {
    let s = system(&square(MeshKind::Crossed, 1), Formulation::TwoField, Material::StokesLimit);
    let dense = filter_u_nonvanishing(&dense_full_solve(&s).unwrap(), 1e-8);
    assert!(dense.finite.len() <= s.blocks.u.len());
    assert!(!dense.finite.is_empty());
}

#[test]
fn same_seed_same_spectrum() {
    let s = system(&square(MeshKind::NonUniform, 4), Formulation::TwoField, Material::StokesLimit);
    let a = solve_smallest(&s, 3, 1e-9).unwrap().omegas();
    let b = solve_smallest(&s, 3, 1e-9).unwrap().omegas();
    assert_eq!(a, b);
}
