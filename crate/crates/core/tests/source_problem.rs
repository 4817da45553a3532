//! Least-squares source problem with a manufactured solution.

use std::f64::consts::PI;

use lsq_elasticity::assembly::{assemble, source_rhs, AssemblyOptions, Formulation, Material};
use lsq_elasticity::fespace::{eval_displacement, eval_stress, quadrature_rule, CellGeometry};
use lsq_elasticity::mesh::{unit_square_mesh, MeshKind};
use lsq_elasticity::sparse::SparseLu;

fn s(p: [f64; 2]) -> f64 {
    (PI * p[0]).sin() * (PI * p[1]).sin()
}

fn c(p: [f64; 2]) -> f64 {
    (PI * p[0]).cos() * (PI * p[1]).cos()
}

// u = (s, s); with mu = 1, lambda = 0 the stress is 2 symgrad u
fn exact_u(p: [f64; 2]) -> [f64; 2] {
    [s(p), s(p)]
}

fn exact_sigma(p: [f64; 2]) -> [[f64; 2]; 2] {
    let sx = PI * (PI * p[0]).cos() * (PI * p[1]).sin();
    let sy = PI * (PI * p[0]).sin() * (PI * p[1]).cos();
    [[2.0 * sx, sx + sy], [sx + sy, 2.0 * sy]]
}

fn force(p: [f64; 2]) -> [f64; 2] {
    let v = PI * PI * (3.0 * s(p) - c(p));
    [v, v]
}

/// L2 errors of displacement and stress.
fn errors(n: usize, formulation: Formulation) -> (f64, f64) {
    let mesh = unit_square_mesh(MeshKind::Right, n).unwrap();
    let material = Material::lame(1.0, 0.0).unwrap();
    let system = assemble(&mesh, formulation, &material, &AssemblyOptions::default()).unwrap();
    let b = source_rhs(&mesh, &system, force).unwrap();
    let lu = SparseLu::with_border(&system.lhs, system.blocks.n_constraints()).unwrap();
    let x = lu.solve(&b);
    let sigma = &x[system.blocks.sigma.clone()];
    let u = &x[system.blocks.u.clone()];
    let rule = quadrature_rule(6).unwrap();
    let (mut eu, mut es) = (0.0, 0.0);
    for cell in 0..mesh.num_cells() {
        let geom = CellGeometry::new(&mesh.cell_points(cell));
        for (xhat, w) in rule.iter() {
            let p = geom.map(xhat);
            let (uh, _) = eval_displacement(&mesh, &system.displacement, u, cell, xhat);
            let (sh, _) = eval_stress(&mesh, &system.stress, sigma, cell, xhat);
            let ue = exact_u(p);
            let se = exact_sigma(p);
            eu += w * geom.det * ((uh[0] - ue[0]).powi(2) + (uh[1] - ue[1]).powi(2));
            for i in 0..2 {
                for j in 0..2 {
                    es += w * geom.det * (sh[i][j] - se[i][j]).powi(2);
                }
            }
        }
    }
    (eu.sqrt(), es.sqrt())
}

#[test]
fn two_field_source_problem_converges() {
    let e: Vec<(f64, f64)> = [2, 4, 8].iter().map(|&n| errors(n, Formulation::TwoField)).collect();
    for w in e.windows(2) {
        // cubic displacement and quadratic stress convergence, with margin
        assert!(w[1].0 < w[0].0 / 6.0, "{e:?}");
        assert!(w[1].1 < w[0].1 / 3.5, "{e:?}");
    }
    assert!(e[2].0 < 1e-2);
}

#[test]
fn three_field_source_problem_converges() {
    let e: Vec<(f64, f64)> = [2, 4, 8].iter().map(|&n| errors(n, Formulation::ThreeField)).collect();
    for w in e.windows(2) {
        assert!(w[1].0 < w[0].0 / 6.0, "{e:?}");
        assert!(w[1].1 < w[0].1 / 3.5, "{e:?}");
    }
}
