//! First-eigenvalue convergence on the unit square, printed as Markdown.
//!
//! `cargo run --release --example convergence_table -- three`

use lsq_elasticity::assembly::Formulation;
use lsq_elasticity::mesh::MeshKind;
use lsq_elasticity::study::{run_convergence, StudyConfig};

fn main() -> lsq_elasticity::Result<()> {
    let formulation: Formulation = std::env::args().nth(1).as_deref().unwrap_or("two").parse()?;
    let ns = [4, 6, 8, 10, 12];
    for kind in [MeshKind::Crossed, MeshKind::Right] {
        let table = run_convergence(&StudyConfig::new(formulation, kind), &ns)?;
        table.write_markdown(std::io::stdout().lock())?;
        println!();
    }
    Ok(())
}
