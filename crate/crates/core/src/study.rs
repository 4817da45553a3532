//! Convergence studies against reference eigenvalues.

use std::io::Write;

use num_complex::Complex64;

use crate::assembly::{assemble, AssemblyOptions, Formulation, Material};
use crate::error::{Error, Result};
use crate::gevp::{filter_u_nonvanishing, solve_pencil, Eigenpair, SolveOptions, DEFAULT_TOLERANCE};
use crate::mesh::{MeshFamily, MeshKind};

/// Relative size below which an imaginary part is treated as zero.
pub const PAIR_THRESHOLD: f64 = 1e-9;

/// Eigenpairs whose displacement block is below this fraction are dropped
/// before picking the first eigenvalue.
pub const U_FRACTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    UnitSquare,
    LShape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValue {
    pub domain: Domain,
    pub value: f64,
    pub source: &'static str,
}

impl ReferenceValue {
    /// First Stokes eigenvalue of the unit square.
    pub const UNIT_SQUARE: ReferenceValue = ReferenceValue {
        domain: Domain::UnitSquare,
        value: 52.344691168,
        source: "first Stokes eigenvalue on ]0,1[^2",
    };
    /// First Stokes eigenvalue of `]-1,1[^2 \ [0,1]x[-1,0]`.
    pub const L_SHAPE: ReferenceValue = ReferenceValue {
        domain: Domain::LShape,
        value: 32.13269464746,
        source: "first Stokes eigenvalue on the L-shaped domain",
    };

    pub fn for_mesh(kind: MeshKind) -> Self {
        match kind {
            MeshKind::LShapeUniform => Self::L_SHAPE,
            _ => Self::UNIT_SQUARE,
        }
    }
}

/// Observed order `ln(e_prev / e) / ln(n / n_prev)`; `None` unless both
/// errors are positive and `n > n_prev`.
pub fn rate(e_prev: f64, e: f64, n_prev: usize, n: usize) -> Option<f64> {
    if !(e_prev > 0.0 && e > 0.0) || n <= n_prev {
        return None;
    }
    Some((e_prev / e).ln() / (n as f64 / n_prev as f64).ln())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub dim: usize,
    /// `Err` holds the diagnostic of a failed row.
    pub outcome: std::result::Result<RowValues, String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues {
    pub omega: Complex64,
    pub error: f64,
    pub rate: Option<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub formulation: Formulation,
    pub mesh: MeshKind,
    pub material: Material,
    pub reference: ReferenceValue,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn failed_rows(&self) -> impl Iterator<Item = (usize, &str)> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().err().map(|e| (r.n, e.as_str())))
    }

    pub fn values(&self) -> impl Iterator<Item = (usize, &RowValues)> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().ok().map(|v| (r.n, v)))
    }

    /// `formulation,mesh,N,omega_re,omega_im,error,rate,residual`; failed
    /// rows leave the numeric fields empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "formulation,mesh,N,omega_re,omega_im,error,rate,residual")?;
        for row in &self.rows {
            let (f, m) = (self.formulation.name(), self.mesh.name());
            match &row.outcome {
                Ok(v) => {
                    let rate = v.rate.map(|r| format!("{r:.2}")).unwrap_or_default();
                    writeln!(
                        w,
                        "{f},{m},{},{:.9},{:.3e},{:.6e},{rate},{:.1e}",
                        row.n, v.omega.re, v.omega.im, v.error, v.residual
                    )?
                }
                Err(_) => writeln!(w, "{f},{m},{},,,,,", row.n)?,
            }
        }
        Ok(())
    }

    /// One-row table in the layout `Mesh | N=a | N=b (rate) | ...`.
    pub fn write_markdown<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header: Vec<String> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| if i == 0 { format!("N={}", r.n) } else { format!("N={} (rate)", r.n) })
            .collect();
        writeln!(w, "| Mesh | {} |", header.join(" | "))?;
        writeln!(w, "|---|{}", "---:|".repeat(self.rows.len()))?;
        let cells: Vec<String> = self
            .rows
            .iter()
            .map(|r| match &r.outcome {
                Ok(v) => match v.rate {
                    Some(rate) => format!("{:.6} ({rate:.1})", v.omega.re),
                    None => format!("{:.6}", v.omega.re),
                },
                Err(_) => "failed".into(),
            })
            .collect();
        writeln!(w, "| {} | {} |", self.mesh.name().to_uppercase(), cells.join(" | "))?;
        writeln!(w)?;
        writeln!(
            w,
            "{} formulation, material {}, reference {} ({}).",
            self.formulation.name(),
            self.material.label(),
            self.reference.value,
            self.reference.source
        )
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub formulation: Formulation,
    pub family: MeshFamily,
    pub material: Material,
    pub assembly: AssemblyOptions,
    pub reference: Option<f64>,
    pub tol: f64,
}

impl StudyConfig {
    pub fn new(formulation: Formulation, kind: MeshKind) -> Self {
        Self {
            formulation,
            family: MeshFamily::new(kind, 1),
            material: Material::StokesLimit,
            assembly: AssemblyOptions::default(),
            reference: None,
            tol: DEFAULT_TOLERANCE,
        }
    }

    fn reference(&self) -> ReferenceValue {
        let base = ReferenceValue::for_mesh(self.family.kind);
        match self.reference {
            Some(value) => ReferenceValue { value, source: "user override", ..base },
            None => base,
        }
    }
}

/// The `k` smallest finite eigenpairs of one member of a mesh family.
pub fn smallest_eigenpairs(config: &StudyConfig, n: usize, k: usize) -> Result<(usize, Vec<Eigenpair>)> {
    let mesh = config.family.with_n(n).build()?;
    let system = assemble(&mesh, config.formulation, &config.material, &config.assembly)?;
    let opts = SolveOptions { tol: config.tol, ..SolveOptions::new(k) };
    let spectrum = solve_pencil(&system.lhs, &system.rhs, &system.blocks, &opts)?;
    Ok((system.dim(), spectrum.finite))
}

/// First eigenvalue with a non-vanishing displacement: the smallest real
/// part among the retained pairs.
pub fn first_eigenpair(config: &StudyConfig, n: usize) -> Result<(usize, Eigenpair)> {
    let mesh = config.family.with_n(n).build()?;
    let system = assemble(&mesh, config.formulation, &config.material, &config.assembly)?;
    for k in [1, 6] {
        let opts = SolveOptions { tol: config.tol, ..SolveOptions::new(k) };
        let spectrum =
            filter_u_nonvanishing(&solve_pencil(&system.lhs, &system.rhs, &system.blocks, &opts)?, U_FRACTION_TOL);
        if let Some(p) = spectrum.finite.into_iter().min_by(|a, b| a.omega.re.total_cmp(&b.omega.re)) {
            return Ok((system.dim(), p));
        }
    }
    Err(Error::Internal(format!("no eigenpair with non-vanishing displacement at N = {n}")))
}

/// Runs the sequence `ns`. Failing rows are recorded and skipped.
pub fn run_convergence(config: &StudyConfig, ns: &[usize]) -> Result<RateTable> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("empty list of refinements".into()));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!("refinements must be strictly increasing, got {ns:?}")));
    }
    let reference = config.reference();
    let mut rows: Vec<RateRow> = Vec::with_capacity(ns.len());
    let mut prev: Option<(usize, f64)> = None;
    for &n in ns {
        let row = match first_eigenpair(config, n) {
            Ok((dim, p)) => {
                let error = (p.omega - reference.value).norm();
                let r = prev.and_then(|(np, ep)| rate(ep, error, np, n));
                if error > 0.0 {
                    prev = Some((n, error));
                }
                RateRow { n, dim, outcome: Ok(RowValues { omega: p.omega, error, rate: r, residual: p.residual }) }
            }
            Err(e) => RateRow { n, dim: 0, outcome: Err(e.to_string()) },
        };
        rows.push(row);
    }
    Ok(RateTable {
        formulation: config.formulation,
        mesh: config.family.kind,
        material: config.material,
        reference,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub index: usize,
    pub omega: Complex64,
    pub residual: f64,
    /// Member of a complex-conjugate pair (`|Im| > PAIR_THRESHOLD |omega|`).
    pub paired: bool,
}

/// The `k` smallest finite eigenvalues of one mesh, with pair flags. One
/// more value is returned when the `k`-th belongs to a pair.
pub fn spectrum_report(config: &StudyConfig, n: usize, k: usize) -> Result<Vec<ReportEntry>> {
    let (_, pairs) = smallest_eigenpairs(config, n, k)?;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, p)| ReportEntry {
            index: i + 1,
            omega: p.omega,
            residual: p.residual,
            paired: p.omega.im.abs() > PAIR_THRESHOLD * p.omega.norm(),
        })
        .collect())
}

pub fn write_report<W: Write>(entries: &[ReportEntry], mut w: W) -> std::io::Result<()> {
    for e in entries {
        let sign = if e.omega.im < 0.0 { '-' } else { '+' };
        let flag = if e.paired { "  pair" } else { "" };
        writeln!(
            w,
            "{:>4}  {:.15} {sign} {:.15}i  residual {:.1e}{flag}",
            e.index,
            e.omega.re,
            e.omega.im.abs(),
            e.residual
        )?;
    }
    Ok(())
}
