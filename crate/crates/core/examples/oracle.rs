//! Shift-invert Arnoldi against the dense reduction on a small system.

use lsq_elasticity::assembly::{assemble, AssemblyOptions, Formulation, Material};
use lsq_elasticity::gevp::{dense_full_solve, solve_smallest};
use lsq_elasticity::mesh::{MeshFamily, MeshKind};

fn main() -> lsq_elasticity::Result<()> {
    let mesh = MeshFamily::new(MeshKind::NonUniform, 2).build()?;
    let system = assemble(&mesh, Formulation::ThreeField, &Material::StokesLimit, &AssemblyOptions::default())?;
    let dense = dense_full_solve(&system)?;
    let iter = solve_smallest(&system, 5, 1e-10)?;
    println!("dimension {}, {} finite and {} infinite eigenvalues", system.dim(), dense.finite.len(), dense.n_infinite);
    println!(
        "arnoldi: krylov dim {}, {} restarts, {} operator applications",
        iter.info.krylov_dim, iter.info.restarts, iter.info.operator_applications
    );
    for (a, d) in iter.finite.iter().zip(&dense.finite) {
        println!("  {:>22.12}  {:>22.12}  diff {:.1e}", a.omega, d.omega, (a.omega - d.omega).norm());
    }
    Ok(())
}
