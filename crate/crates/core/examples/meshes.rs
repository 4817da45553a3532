//! Builds each mesh family and prints its size and quality.

use lsq_elasticity::mesh::{MeshFamily, MeshKind};

fn main() -> lsq_elasticity::Result<()> {
    println!("{:<8} {:>3} {:>6} {:>9} {:>6} {:>9} {:>9}", "mesh", "N", "cells", "vertices", "edges", "h_max", "h_min");
    for kind in [MeshKind::Crossed, MeshKind::Right, MeshKind::NonUniform, MeshKind::LShapeUniform] {
        for n in [4, 8] {
            let mesh = MeshFamily::new(kind, n).build()?;
            println!(
                "{:<8} {n:>3} {:>6} {:>9} {:>6} {:>9.4} {:>9.4}",
                kind.name(),
                mesh.num_cells(),
                mesh.num_vertices(),
                mesh.num_edges(),
                mesh.max_edge_length(),
                mesh.min_edge_length()
            );
        }
    }

    // plain-text dump of the smallest non-uniform mesh
    let mesh = MeshFamily { seed: 3, ..MeshFamily::new(MeshKind::NonUniform, 2) }.build()?;
    mesh.write_dump(std::io::stdout().lock())?;
    Ok(())
}
