//! Least-squares source problem: residual of the discrete solve and the
//! displacement error at the vertices for a manufactured solution.

use std::f64::consts::PI;

use lsq_elasticity::assembly::{assemble, source_rhs, AssemblyOptions, Formulation, Material};
use lsq_elasticity::fespace::interpolate_displacement;
use lsq_elasticity::mesh::{unit_square_mesh, MeshKind};
use lsq_elasticity::sparse::SparseLu;

fn main() -> lsq_elasticity::Result<()> {
    let s = |p: [f64; 2]| (PI * p[0]).sin() * (PI * p[1]).sin();
    let c = |p: [f64; 2]| (PI * p[0]).cos() * (PI * p[1]).cos();
    let f = |p: [f64; 2]| {
        let v = PI * PI * (3.0 * s(p) - c(p));
        [v, v]
    };
    let material = Material::lame(1.0, 0.0)?;
    for n in [2, 4, 8, 16] {
        let mesh = unit_square_mesh(MeshKind::Crossed, n)?;
        let system = assemble(&mesh, Formulation::TwoField, &material, &AssemblyOptions::default())?;
        let b = source_rhs(&mesh, &system, f)?;
        let x = SparseLu::with_border(&system.lhs, system.blocks.n_constraints())?.solve(&b);
        let u = &x[system.blocks.u.clone()];
        let exact = interpolate_displacement(&mesh, &system.displacement, |p| [s(p), s(p)]);
        let err = u.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let res = system.lhs.matvec(&x).iter().zip(&b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("N = {n:>2}  dim {:>5}  max nodal error {err:.3e}  solve residual {res:.1e}", system.dim());
    }
    Ok(())
}
