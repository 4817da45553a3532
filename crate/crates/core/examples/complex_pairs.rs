//! Conjugate eigenvalue pairs on perturbed meshes.
//!
//! On a symmetric crossed mesh the second eigenvalue is double; small random
//! vertex moves either split it into two reals or into a conjugate pair.

use lsq_elasticity::assembly::{assemble, AssemblyOptions, Formulation, Material};
use lsq_elasticity::gevp::solve_smallest;
use lsq_elasticity::mesh::{perturbed_mesh, unit_square_mesh, MeshKind};
use lsq_elasticity::study::PAIR_THRESHOLD;

fn main() -> lsq_elasticity::Result<()> {
    let base = unit_square_mesh(MeshKind::Crossed, 10)?;
    for seed in 1..=4 {
        let mesh = perturbed_mesh(&base, seed, 0.05)?;
        let system = assemble(&mesh, Formulation::ThreeField, &Material::StokesLimit, &AssemblyOptions::default())?;
        let spectrum = solve_smallest(&system, 5, 1e-9)?;
        println!("seed {seed}");
        for (i, p) in spectrum.finite.iter().enumerate() {
            let tag = if p.is_real(PAIR_THRESHOLD) { "" } else { "  (pair)" };
            println!("  {}  {:.9} {:+.3e}i  residual {:.1e}{tag}", i + 1, p.omega.re, p.omega.im, p.residual);
        }
    }
    Ok(())
}
