//! Pencil classes and eigenvalue counts on the coarsest meshes.

use lsq_elasticity::assembly::{assemble, AssemblyOptions, Formulation, Material};
use lsq_elasticity::gevp::classify;
use lsq_elasticity::mesh::{unit_square_mesh, MeshKind};

fn main() -> lsq_elasticity::Result<()> {
    let mesh = unit_square_mesh(MeshKind::Crossed, 1)?;
    let materials = [("stokes", Material::StokesLimit), ("lame 1,1", Material::lame(1.0, 1.0)?)];
    for (label, material) in materials {
        for trace_constraint in [true, false] {
            let opts = AssemblyOptions { trace_constraint, ..Default::default() };
            let system = assemble(&mesh, Formulation::TwoField, &material, &opts)?;
            let c = classify(&system)?;
            print!(
                "{label:<9} trace constraint {trace_constraint:<5}  dim {:>3}  rank B {:>2}  ker A∩B {}  {}",
                c.class.dim, c.class.rank_b, c.class.dim_ker_a_cap_ker_b, c.class.case
            );
            if let Some(k) = c.counts {
                print!(
                    "  finite {} (rank D {})  infinite {} (law {})",
                    k.finite, k.predicted.rank_d, k.infinite, k.predicted.infinite
                );
            }
            println!();
        }
    }
    Ok(())
}
