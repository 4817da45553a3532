//! Writes the pencil of a small system in Matrix Market format and reads it back.

use lsq_elasticity::assembly::{assemble, AssemblyOptions, Formulation, Material};
use lsq_elasticity::mesh::{unit_square_mesh, MeshKind};
use lsq_elasticity::sparse::CsrMatrix;

fn main() -> lsq_elasticity::Result<()> {
    let mesh = unit_square_mesh(MeshKind::Right, 2)?;
    let system = assemble(&mesh, Formulation::TwoField, &Material::StokesLimit, &AssemblyOptions::default())?;
    let dir = std::env::temp_dir().join("lsq-elasticity-export");
    std::fs::create_dir_all(&dir)?;
    for (name, m) in [("lhs.mtx", &system.lhs), ("rhs.mtx", &system.rhs)] {
        let path = dir.join(name);
        m.write_matrix_market(std::fs::File::create(&path)?)?;
        let back = CsrMatrix::read_matrix_market(&std::fs::read_to_string(&path)?)?;
        println!(
            "{} : {}x{}, {} nonzeros, round trip exact: {}",
            path.display(),
            back.nrows(),
            back.ncols(),
            back.nnz(),
            back == *m
        );
    }
    Ok(())
}
