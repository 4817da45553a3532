//! Dense reference computations for small pencils.

use std::fmt;

use faer::Mat;
use num_complex::Complex64;

use super::{pencil_residual, sort_by_modulus, u_fraction, Eigenpair, SolverInfo, Spectrum, DEFAULT_GAMMA_CUTOFF};
use crate::assembly::{BlockLayout, BlockSystem, Formulation};
use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, SparseLu};

pub const DENSE_LIMIT: usize = 2000;

/// Relative singular value cutoff of [`numeric_rank`].
pub const RANK_CUTOFF: f64 = 1e-10;

fn guard(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { dim: n, limit: DENSE_LIMIT });
    }
    Ok(())
}

/// Number of singular values above `RANK_CUTOFF * sigma_max`.
pub fn numeric_rank(m: &Mat<f64>) -> Result<usize> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0);
    }
    let s = m.singular_values().map_err(|e| Error::Dense(format!("{e:?}")))?;
    let max = s.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&v| v > RANK_CUTOFF * max).count())
}

/// All eigenvalues of `A x = omega B x`.
///
/// With `C` the nonzero columns of `B`, the nonzero eigenvalues of `A^{-1} B`
/// are those of the compressed `|C| x |C|` matrix `(A^{-1} B)[C, C]`; the rest
/// of the pencil is infinite.
pub fn dense_pencil_solve(a: &CsrMatrix, b: &CsrMatrix, blocks: &BlockLayout, gamma_cutoff: f64) -> Result<Spectrum> {
    let n = a.nrows();
    guard(n)?;
    let lu = SparseLu::with_border(a, blocks.n_constraints())?;
    let bt = b.transpose();
    let support: Vec<usize> = (0..n).filter(|&j| bt.row(j).any(|(_, v)| v != 0.0)).collect();
    let c = support.len();
    let mut m = Mat::<f64>::zeros(n, c);
    for (k, &j) in support.iter().enumerate() {
        let mut rhs = vec![0.0; n];
        for (i, v) in bt.row(j) {
            rhs[i] = v;
        }
        for (i, v) in lu.solve(&rhs).into_iter().enumerate() {
            m[(i, k)] = v;
        }
    }
    let mut finite = Vec::new();
    if c > 0 {
        let s = Mat::<f64>::from_fn(c, c, |i, k| m[(support[i], k)]);
        let evd = s.eigen().map_err(|e| Error::Dense(format!("{e:?}")))?;
        let gammas: Vec<Complex64> = (0..c).map(|i| evd.S().column_vector()[i]).collect();
        let gmax = gammas.iter().map(|g| g.norm()).fold(0.0, f64::max);
        for (i, g) in gammas.iter().enumerate() {
            if gmax == 0.0 || g.norm() <= gamma_cutoff * gmax {
                continue;
            }
            let omega = Complex64::new(1.0, 0.0) / g;
            let mut x: Vec<Complex64> = (0..n).map(|r| (0..c).map(|k| evd.U()[(k, i)] * m[(r, k)]).sum()).collect();
            let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            x.iter_mut().for_each(|z| *z /= nx);
            finite.push(Eigenpair {
                omega,
                residual: pencil_residual(a, b, omega, &x),
                u_fraction: u_fraction(blocks, &x),
                vector: x,
            });
        }
    }
    sort_by_modulus(&mut finite);
    Ok(Spectrum {
        n_infinite: n - finite.len(),
        finite,
        n_degenerate: 0,
        info: SolverInfo { method: "dense", shift: 0.0, krylov_dim: c, restarts: 0, operator_applications: c },
    })
}

/// Brute-force spectrum of an assembled system (dimension at most [`DENSE_LIMIT`]).
pub fn dense_full_solve(system: &BlockSystem) -> Result<Spectrum> {
    dense_pencil_solve(&system.lhs, &system.rhs, &system.blocks, DEFAULT_GAMMA_CUTOFF)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PencilCase {
    /// `B` nonsingular: a standard eigenproblem for `B^{-1} A`.
    Regular,
    /// `ker A ∩ ker B` nontrivial: every `omega` is an eigenvalue.
    Degenerate,
    /// `B` and `A` singular without common kernel.
    InfinitePresent,
    /// `B` singular, `A` nonsingular: solved through `B x = gamma A x`.
    RoleSwap,
}

impl PencilCase {
    pub fn number(self) -> u8 {
        match self {
            PencilCase::Regular => 1,
            PencilCase::Degenerate => 2,
            PencilCase::InfinitePresent => 3,
            PencilCase::RoleSwap => 4,
        }
    }
}

impl fmt::Display for PencilCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self, self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilClass {
    pub dim: usize,
    pub rank_a: usize,
    pub rank_b: usize,
    pub dim_ker_a_cap_ker_b: usize,
    pub case: PencilCase,
}

/// Dense rank analysis of a pencil.
pub fn classify_pencil(a: &CsrMatrix, b: &CsrMatrix) -> Result<PencilClass> {
    let n = a.nrows();
    guard(n)?;
    let ad = a.to_dense();
    let bd = b.to_dense();
    let rank_a = numeric_rank(&ad)?;
    let rank_b = numeric_rank(&bd)?;
    let stacked = Mat::<f64>::from_fn(2 * n, n, |i, j| if i < n { ad[(i, j)] } else { bd[(i - n, j)] });
    let dim_ker_a_cap_ker_b = n - numeric_rank(&stacked)?;
    let case = if rank_b == n {
        PencilCase::Regular
    } else if dim_ker_a_cap_ker_b > 0 {
        PencilCase::Degenerate
    } else if rank_a < n {
        PencilCase::InfinitePresent
    } else {
        PencilCase::RoleSwap
    };
    Ok(PencilClass { dim: n, rank_a, rank_b, dim_ker_a_cap_ker_b, case })
}

/// Eigenvalue counts predicted from the coupling block `D` (stress rows,
/// displacement columns) of the right-hand matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountLaw {
    pub rank_d: usize,
    pub dim_ker_d: usize,
    pub n_multipliers: usize,
    /// `rank D`.
    pub finite: usize,
    /// Every non-displacement unknown plus `dim ker D`; for the two-field
    /// system this is `dim Sigma_h + dim ker D + n_multipliers`.
    pub infinite: usize,
}

pub fn count_law(system: &BlockSystem) -> Result<CountLaw> {
    guard(system.dim())?;
    let d = system.coupling_block().to_dense();
    let rank_d = numeric_rank(&d)?;
    let nu = system.blocks.u.len();
    let dim_ker_d = nu - rank_d;
    Ok(CountLaw {
        rank_d,
        dim_ker_d,
        n_multipliers: system.blocks.n_constraints(),
        finite: rank_d,
        infinite: system.dim() - nu + dim_ker_d,
    })
}

/// Dense finite/infinite counts next to the [`count_law`] prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountCheck {
    pub predicted: CountLaw,
    pub finite: usize,
    pub infinite: usize,
}

impl CountCheck {
    pub fn holds(&self) -> bool {
        self.finite == self.predicted.finite && self.infinite == self.predicted.infinite
    }
}

pub fn count_check(system: &BlockSystem) -> Result<CountCheck> {
    let predicted = count_law(system)?;
    let spectrum = dense_full_solve(system)?;
    Ok(CountCheck { predicted, finite: spectrum.finite.len(), infinite: spectrum.n_infinite })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: PencilClass,
    /// Present for two-field systems in the role-swap case.
    pub counts: Option<CountCheck>,
}

/// Classifies an assembled system; two-field role-swap pencils also get
/// their dense eigenvalue counts compared with [`count_law`].
pub fn classify(system: &BlockSystem) -> Result<Classification> {
    let class = classify_pencil(&system.lhs, &system.rhs)?;
    let counts = if system.formulation == Formulation::TwoField && class.case == PencilCase::RoleSwap {
        Some(count_check(system)?)
    } else {
        None
    };
    Ok(Classification { class, counts })
}
