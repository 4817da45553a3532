//! Reduced convergence on the L-shaped domain.

use lsq_elasticity::assembly::Formulation;
use lsq_elasticity::mesh::MeshKind;
use lsq_elasticity::study::{run_convergence, StudyConfig};

fn main() -> lsq_elasticity::Result<()> {
    for f in [Formulation::TwoField, Formulation::ThreeField] {
        let table = run_convergence(&StudyConfig::new(f, MeshKind::LShapeUniform), &[4, 8, 16, 32])?;
        println!("{}-field, reference {}", f.name(), table.reference.value);
        for (n, row) in table.values() {
            let rate = row.rate.map_or(String::from("-"), |r| format!("{r:.2}"));
            println!("  N = {n:>2}  omega = {:.6}  error = {:.3e}  rate = {rate}", row.omega.re, row.error);
        }
    }
    Ok(())
}
