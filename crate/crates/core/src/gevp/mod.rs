//! Generalized eigenproblem `A x = omega B x` with singular `B`.
//!
//! The production path swaps the roles of the matrices, solving
//! `B x = gamma (A - s B) x` with Arnoldi on `y -> (A - s B)^{-1} B y` and
//! recovering `omega = s + 1 / gamma`; `gamma = 0` encodes `omega = infinity`.
//! A dense oracle and a dense pencil classifier are provided for small systems.

mod arnoldi;
mod dense;

use std::io::Write;

use num_complex::Complex64;

pub use arnoldi::{arnoldi, ArnoldiOptions, ArnoldiState, RitzPair};
pub use dense::{
    classify, classify_pencil, count_check, count_law, dense_full_solve, dense_pencil_solve, numeric_rank,
    Classification, CountCheck, CountLaw, PencilCase, PencilClass, DENSE_LIMIT,
};

use crate::assembly::{BlockLayout, BlockSystem};
use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, SparseLu};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_GAMMA_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub omega: Complex64,
    /// Unit-norm eigenvector, laid out as the [`BlockLayout`] of the pencil.
    pub vector: Vec<Complex64>,
    /// `||A x - omega B x|| / (||A x|| + |omega| ||B x||)`.
    pub residual: f64,
    /// Norm of the displacement block relative to the whole vector.
    pub u_fraction: f64,
}

impl Eigenpair {
    pub fn is_real(&self, rel: f64) -> bool {
        self.omega.im.abs() <= rel * self.omega.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverInfo {
    pub method: &'static str,
    pub shift: f64,
    pub krylov_dim: usize,
    pub restarts: usize,
    pub operator_applications: usize,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Finite eigenpairs sorted by `|omega|`.
    pub finite: Vec<Eigenpair>,
    /// Eigenvalues classified as infinite (`|gamma|` below the cutoff). The
    /// iterative path only counts those among the final Ritz values.
    pub n_infinite: usize,
    /// Dimension of `ker A ∩ ker B`; always 0 for a solved pencil since
    /// degenerate pencils make `A - s B` singular and are rejected.
    pub n_degenerate: usize,
    pub info: SolverInfo,
}

impl Spectrum {
    pub fn omegas(&self) -> Vec<Complex64> {
        self.finite.iter().map(|p| p.omega).collect()
    }

    /// Writes `index,re_omega,im_omega,residual,u_fraction`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,re_omega,im_omega,residual,u_fraction")?;
        for (i, p) in self.finite.iter().enumerate() {
            writeln!(w, "{},{:.12},{:.12},{:.3e},{:.6}", i + 1, p.omega.re, p.omega.im, p.residual, p.u_fraction)?;
        }
        Ok(())
    }

    /// Largest residual among the finite pairs.
    pub fn worst_residual(&self) -> f64 {
        self.finite.iter().map(|p| p.residual).fold(0.0, f64::max)
    }

    /// Every non-real eigenvalue has its conjugate in the list.
    pub fn is_conjugate_closed(&self, rel: f64) -> bool {
        self.finite.iter().all(|a| {
            a.is_real(rel) || self.finite.iter().any(|b| (a.omega - b.omega.conj()).norm() < rel * a.omega.norm())
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub k: usize,
    pub tol: f64,
    pub shift: f64,
    /// Defaults to `max(4k, 40)`.
    pub krylov_dim: Option<usize>,
    pub max_restarts: usize,
    pub seed: u64,
    pub gamma_cutoff: f64,
}

impl SolveOptions {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            tol: DEFAULT_TOLERANCE,
            shift: 0.0,
            krylov_dim: None,
            max_restarts: 300,
            seed: 0x5eed,
            gamma_cutoff: DEFAULT_GAMMA_CUTOFF,
        }
    }
}

/// Real and imaginary parts of `M x` for a complex `x`.
fn apply_complex(m: &CsrMatrix, x: &[Complex64]) -> Vec<Complex64> {
    let re: Vec<f64> = x.iter().map(|c| c.re).collect();
    let im: Vec<f64> = x.iter().map(|c| c.im).collect();
    m.matvec(&re).into_iter().zip(m.matvec(&im)).map(|(r, i)| Complex64::new(r, i)).collect()
}

fn cnorm(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Scaled residual `||A x - omega B x|| / (||A x|| + |omega| ||B x||)`.
pub fn pencil_residual(a: &CsrMatrix, b: &CsrMatrix, omega: Complex64, x: &[Complex64]) -> f64 {
    let ax = apply_complex(a, x);
    let bx = apply_complex(b, x);
    let r: f64 = ax.iter().zip(&bx).map(|(p, q)| (p - omega * q).norm_sqr()).sum::<f64>().sqrt();
    let scale = cnorm(&ax) + omega.norm() * cnorm(&bx);
    if scale == 0.0 {
        0.0
    } else {
        r / scale
    }
}

/// Fraction of the norm of `x` carried by the displacement block.
pub fn u_fraction(blocks: &BlockLayout, x: &[Complex64]) -> f64 {
    let total = cnorm(x);
    if total == 0.0 {
        0.0
    } else {
        cnorm(&x[blocks.u.clone()]) / total
    }
}

fn sort_by_modulus(pairs: &mut [Eigenpair]) {
    pairs.sort_by(|a, b| {
        a.omega
            .norm()
            .total_cmp(&b.omega.norm())
            .then(a.omega.re.total_cmp(&b.omega.re))
            .then(b.omega.im.total_cmp(&a.omega.im))
    });
}

/// Shift-and-invert Arnoldi on the role-swapped pencil.
pub fn solve_pencil(a: &CsrMatrix, b: &CsrMatrix, blocks: &BlockLayout, opts: &SolveOptions) -> Result<Spectrum> {
    if opts.k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::InvalidArgument("pencil matrices must be square of equal size".into()));
    }
    let shifted = if opts.shift == 0.0 {
        a.clone()
    } else {
        let t: Vec<_> = a.iter().chain(b.iter().map(|(i, j, v)| (i, j, -opts.shift * v))).collect();
        CsrMatrix::from_triplets(n, n, &t)
    };
    let lu = SparseLu::with_border(&shifted, blocks.n_constraints()).map_err(|e| match e {
        Error::SingularLhs(msg) => Error::SingularLhs(format!(
            "{msg}; the pencil is degenerate (ker A ∩ ker B nontrivial) or has infinite eigenvalues with a singular A"
        )),
        other => other,
    })?;
    let aopts = ArnoldiOptions {
        nev: opts.k,
        krylov_dim: opts.krylov_dim.unwrap_or((4 * opts.k).max(40)),
        max_restarts: opts.max_restarts,
        seed: opts.seed,
        zero_cutoff: opts.gamma_cutoff,
    };
    let omega_of = |g: Complex64| Complex64::new(opts.shift, 0.0) + Complex64::new(1.0, 0.0) / g;
    let (pairs, state) = arnoldi(
        n,
        |x| lu.solve(&b.matvec(x)),
        &aopts,
        |pairs| {
            pairs.iter().map(|p| pencil_residual(a, b, omega_of(p.value), &p.vector) / opts.tol).fold(0.0, f64::max)
        },
    )?;
    let gmax = state.ritz_values.iter().map(|g| g.norm()).fold(0.0, f64::max);
    let n_infinite = state.ritz_values.iter().filter(|g| g.norm() <= opts.gamma_cutoff * gmax).count();
    let mut finite: Vec<Eigenpair> = pairs
        .into_iter()
        .map(|p| {
            let omega = omega_of(p.value);
            Eigenpair {
                omega,
                residual: pencil_residual(a, b, omega, &p.vector),
                u_fraction: u_fraction(blocks, &p.vector),
                vector: p.vector,
            }
        })
        .collect();
    sort_by_modulus(&mut finite);
    Ok(Spectrum {
        finite,
        n_infinite,
        n_degenerate: 0,
        info: SolverInfo {
            method: "shift-invert arnoldi",
            shift: opts.shift,
            krylov_dim: state.krylov_dim,
            restarts: state.restarts,
            operator_applications: state.applications,
        },
    })
}

/// The `k` finite eigenvalues of smallest modulus of an assembled system.
pub fn solve_smallest(system: &BlockSystem, k: usize, tol: f64) -> Result<Spectrum> {
    let opts = SolveOptions { tol, ..SolveOptions::new(k) };
    solve_pencil(&system.lhs, &system.rhs, &system.blocks, &opts)
}

/// Drops eigenpairs whose displacement block is negligible.
pub fn filter_u_nonvanishing(spectrum: &Spectrum, tol: f64) -> Spectrum {
    Spectrum { finite: spectrum.finite.iter().filter(|p| p.u_fraction >= tol).cloned().collect(), ..spectrum.clone() }
}
