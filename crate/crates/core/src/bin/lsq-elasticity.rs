use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lsq_elasticity::assembly::{assemble, AssemblyOptions, Formulation, Material, ThreeFieldCoupling};
use lsq_elasticity::gevp::{classify, Classification};
use lsq_elasticity::mesh::{MeshFamily, MeshKind};
use lsq_elasticity::study::{run_convergence, spectrum_report, write_report, StudyConfig};

#[derive(Parser)]
#[command(name = "lsq-elasticity", version, about = "Least-squares FEM eigenvalues of 2D linear elasticity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence table of the first eigenvalue over a mesh sequence.
    Run {
        #[command(flatten)]
        problem: Problem,
        /// Comma-separated, strictly increasing refinements.
        #[arg(long, value_parser = parse_n_list)]
        n_list: NList,
        /// Override the reference eigenvalue.
        #[arg(long)]
        reference: Option<f64>,
        /// Output file; `.md` writes Markdown, anything else CSV. Default: CSV on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with an error if any row failed.
        #[arg(long)]
        strict: bool,
    },
    /// Smallest eigenvalues of one mesh, with conjugate pairs flagged.
    Spectrum {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Dense rank analysis of the pencil (small N only).
    Classify {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        n: usize,
    },
    /// Write the assembled matrices to a directory.
    ExportMatrices {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Matrixmarket)]
        format: Format,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct Problem {
    #[arg(long, value_enum, default_value_t = FormulationArg::Two)]
    formulation: FormulationArg,
    #[arg(long, value_enum, default_value_t = MeshArg::Crossed)]
    mesh: MeshArg,
    /// `stokes` or `lame:MU,LAMBDA`.
    #[arg(long, default_value = "stokes", value_parser = parse_material)]
    material: Material,
    /// Seed of the non-uniform perturbation.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximal non-uniform vertex displacement as a fraction of h.
    #[arg(long, default_value_t = MeshFamily::DEFAULT_PERTURBATION)]
    perturbation: f64,
    /// Drop the zero-mean trace multiplier.
    #[arg(long)]
    no_trace_constraint: bool,
    #[arg(long, value_enum, default_value_t = CouplingArg::Functional)]
    coupling: CouplingArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationArg {
    Two,
    Three,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshArg {
    Crossed,
    Right,
    Nonunif,
    Lshape,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Functional,
    SymmetricGradient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Matrixmarket,
}

#[derive(Clone)]
struct NList(Vec<usize>);

fn parse_n_list(s: &str) -> Result<NList, String> {
    let ns = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("'{t}' is not a positive integer")))
        .collect::<Result<Vec<_>, _>>()?;
    if ns.is_empty() || ns.contains(&0) {
        return Err("expected a non-empty list of positive integers".into());
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err("refinements must be strictly increasing".into());
    }
    Ok(NList(ns))
}

fn parse_material(s: &str) -> Result<Material, String> {
    s.parse().map_err(|e: lsq_elasticity::Error| e.to_string())
}

impl Problem {
    fn config(&self) -> StudyConfig {
        let formulation = match self.formulation {
            FormulationArg::Two => Formulation::TwoField,
            FormulationArg::Three => Formulation::ThreeField,
        };
        let kind = match self.mesh {
            MeshArg::Crossed => MeshKind::Crossed,
            MeshArg::Right => MeshKind::Right,
            MeshArg::Nonunif => MeshKind::NonUniform,
            MeshArg::Lshape => MeshKind::LShapeUniform,
        };
        let mut config = StudyConfig::new(formulation, kind);
        config.family.seed = self.seed;
        config.family.perturbation = self.perturbation;
        config.material = self.material;
        config.assembly = AssemblyOptions {
            trace_constraint: !self.no_trace_constraint,
            coupling: match self.coupling {
                CouplingArg::Functional => ThreeFieldCoupling::Functional,
                CouplingArg::SymmetricGradient => ThreeFieldCoupling::SymmetricGradient,
            },
            ..AssemblyOptions::default()
        };
        config
    }
}

fn run(cli: Cli) -> lsq_elasticity::Result<ExitCode> {
    match cli.command {
        Command::Run { problem, n_list, reference, out, strict } => {
            let mut config = problem.config();
            config.reference = reference;
            let table = run_convergence(&config, &n_list.0)?;
            match &out {
                Some(path) if path.extension().is_some_and(|e| e == "md") => {
                    table.write_markdown(BufWriter::new(File::create(path)?))?
                }
                Some(path) => table.write_csv(BufWriter::new(File::create(path)?))?,
                None => table.write_csv(io::stdout().lock())?,
            }
            let mut failed = false;
            for (n, msg) in table.failed_rows() {
                eprintln!("N = {n} failed: {msg}");
                failed = true;
            }
            if failed && strict {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Spectrum { problem, n, k } => {
            let entries = spectrum_report(&problem.config(), n, k)?;
            write_report(&entries, io::stdout().lock())?;
        }
        Command::Classify { problem, n } => {
            let config = problem.config();
            let mesh = config.family.with_n(n).build()?;
            let system = assemble(&mesh, config.formulation, &config.material, &config.assembly)?;
            let Classification { class, counts } = classify(&system)?;
            let mut out = io::stdout().lock();
            writeln!(out, "dimension            {}", class.dim)?;
            writeln!(out, "rank A               {}", class.rank_a)?;
            writeln!(out, "rank B               {}", class.rank_b)?;
            writeln!(out, "dim ker A ∩ ker B    {}", class.dim_ker_a_cap_ker_b)?;
            if let Some(c) = counts {
                writeln!(out, "rank D               {}", c.predicted.rank_d)?;
                writeln!(out, "finite               {} (predicted {})", c.finite, c.predicted.finite)?;
                writeln!(out, "infinite             {} (predicted {})", c.infinite, c.predicted.infinite)?;
                writeln!(out, "count law            {}", if c.holds() { "holds" } else { "violated" })?;
            }
            writeln!(out, "case                 {}", class.case)?;
        }
        Command::ExportMatrices { problem, n, format: Format::Matrixmarket, out_dir } => {
            let config = problem.config();
            let mesh = config.family.with_n(n).build()?;
            let system = assemble(&mesh, config.formulation, &config.material, &config.assembly)?;
            std::fs::create_dir_all(&out_dir)?;
            let mut lhs = BufWriter::new(File::create(out_dir.join("lhs.mtx"))?);
            system.lhs.write_matrix_market(&mut lhs)?;
            lhs.flush()?;
            let mut rhs = BufWriter::new(File::create(out_dir.join("rhs.mtx"))?);
            system.rhs.write_matrix_market(&mut rhs)?;
            rhs.flush()?;
            let b = &system.blocks;
            let mut blocks = File::create(out_dir.join("blocks.txt"))?;
            writeln!(blocks, "sigma {} {}", b.sigma.start, b.sigma.end)?;
            writeln!(blocks, "u {} {}", b.u.start, b.u.end)?;
            if let Some(p) = &b.psi {
                writeln!(blocks, "psi {} {}", p.start, p.end)?;
            }
            writeln!(blocks, "multipliers {} {}", b.multipliers.start, b.multipliers.end)?;
            println!("wrote {} (dimension {})", out_dir.display(), system.dim());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // sequential kernels keep repeated runs bit-identical
    faer::set_global_parallelism(faer::Par::Seq);
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
