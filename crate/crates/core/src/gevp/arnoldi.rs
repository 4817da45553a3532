//! Restarted Arnoldi iteration for a few eigenvalues of largest modulus of a
//! real linear operator.

use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ArnoldiOptions {
    /// Number of wanted eigenvalues (one more may be returned to complete a conjugate pair).
    pub nev: usize,
    /// Maximal Krylov dimension, capped at the operator dimension.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
    /// Ritz values below `zero_cutoff * max |theta|` are never wanted.
    pub zero_cutoff: f64,
}

#[derive(Debug, Clone)]
pub struct RitzPair {
    pub value: Complex64,
    /// Unit-norm Ritz vector.
    pub vector: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct ArnoldiState {
    /// All Ritz values of the final projected matrix.
    pub ritz_values: Vec<Complex64>,
    pub krylov_dim: usize,
    pub restarts: usize,
    pub applications: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthogonalizes `w` against `basis` (two passes of modified Gram-Schmidt);
/// returns the accumulated coefficients.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut h = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (v, hj) in basis.iter().zip(h.iter_mut()) {
            let c = dot(v, w);
            *hj += c;
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= c * vi;
            }
        }
    }
    h
}

fn random_unit_vector(rng: &mut ChaCha8Rng, basis: &[Vec<f64>], n: usize) -> Option<Vec<f64>> {
    for _ in 0..5 {
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        orthogonalize(basis, &mut w);
        let nw = norm(&w);
        if nw > 1e-8 {
            w.iter_mut().for_each(|x| *x /= nw);
            return Some(w);
        }
    }
    None
}

struct Ritz {
    values: Vec<Complex64>,
    vectors: Mat<Complex64>,
}

fn ritz(h: &Mat<f64>, m: usize) -> Result<Ritz> {
    let hm = Mat::<f64>::from_fn(m, m, |i, j| h[(i, j)]);
    let evd = hm.eigen().map_err(|e| Error::Dense(format!("projected eigenproblem: {e:?}")))?;
    let values = (0..m).map(|i| evd.S().column_vector()[i]).collect();
    Ok(Ritz { values, vectors: evd.U().to_owned() })
}

/// Indices of the `nev` Ritz values of largest modulus, extended so that no
/// conjugate pair is split.
fn select(values: &[Complex64], nev: usize, zero_cutoff: f64) -> Vec<usize> {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..values.len()).filter(|&i| values[i].norm() > zero_cutoff * max).collect();
    order.sort_by(|&a, &b| values[b].norm().total_cmp(&values[a].norm()).then(values[b].im.total_cmp(&values[a].im)));
    let mut take = nev.min(order.len());
    if take > 0 && take < order.len() {
        let last = values[order[take - 1]];
        let next = values[order[take]];
        if last.im.abs() > 1e-12 * last.norm() && (next - last.conj()).norm() <= 1e-8 * last.norm() {
            take += 1;
        }
    }
    order.truncate(take);
    order
}

/// Real orthonormal basis of the span of the selected Ritz vectors.
fn real_basis(vectors: &Mat<Complex64>, values: &[Complex64], selected: &[usize]) -> Vec<Vec<f64>> {
    let m = vectors.nrows();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for &i in selected {
        let re: Vec<f64> = (0..m).map(|r| vectors[(r, i)].re).collect();
        cols.push(re);
        if values[i].im.abs() > 1e-12 * values[i].norm() {
            cols.push((0..m).map(|r| vectors[(r, i)].im).collect());
        }
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut c in cols {
        let before = norm(&c);
        orthogonalize(&basis, &mut c);
        let nc = norm(&c);
        if nc > 1e-10 * before.max(1e-300) {
            c.iter_mut().for_each(|x| *x /= nc);
            basis.push(c);
        }
    }
    basis
}

/// Runs restarted Arnoldi on `op` (dimension `n`) until `converged` accepts
/// the wanted Ritz pairs. `converged` receives the candidate pairs and
/// returns the worst residual measure, which must drop to `<= 1`.
pub fn arnoldi(
    n: usize,
    mut op: impl FnMut(&[f64]) -> Vec<f64>,
    opts: &ArnoldiOptions,
    mut converged: impl FnMut(&[RitzPair]) -> f64,
) -> Result<(Vec<RitzPair>, ArnoldiState)> {
    if n == 0 {
        return Ok((Vec::new(), ArnoldiState { ritz_values: Vec::new(), krylov_dim: 0, restarts: 0, applications: 0 }));
    }
    let m = opts.krylov_dim.clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<f64>> = vec![random_unit_vector(&mut rng, &[], n).expect("nonzero random vector")];
    // (m + 1) x m projected matrix
    let mut h = Mat::<f64>::zeros(m + 1, m);
    let mut applications = 0;
    let mut worst = f64::INFINITY;

    for restart in 0..=opts.max_restarts {
        let mut residual_vec: Option<Vec<f64>> = None;
        let mut j = basis.len() - 1;
        loop {
            let mut w = op(&basis[j]);
            applications += 1;
            let wn = norm(&w);
            let coeffs = orthogonalize(&basis, &mut w);
            for (i, c) in coeffs.iter().enumerate() {
                h[(i, j)] = *c;
            }
            let beta = norm(&w);
            let breakdown = beta <= 1e-12 * wn.max(f64::MIN_POSITIVE) || wn == 0.0;
            if j + 1 == m {
                h[(m, j)] = if breakdown { 0.0 } else { beta };
                if !breakdown {
                    w.iter_mut().for_each(|x| *x /= beta);
                    residual_vec = Some(w);
                }
                break;
            }
            if breakdown {
                // invariant subspace found; continue in a fresh direction
                h[(j + 1, j)] = 0.0;
                match random_unit_vector(&mut rng, &basis, n) {
                    Some(v) => basis.push(v),
                    None => break,
                }
            } else {
                h[(j + 1, j)] = beta;
                w.iter_mut().for_each(|x| *x /= beta);
                basis.push(w);
            }
            j += 1;
        }
        let k = basis.len().min(m);
        let rz = ritz(&h, k)?;
        let selected = select(&rz.values, opts.nev, opts.zero_cutoff);
        let pairs: Vec<RitzPair> = selected
            .iter()
            .map(|&i| {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                for (r, v) in basis.iter().take(k).enumerate() {
                    let c = rz.vectors[(r, i)];
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi += c * vi;
                    }
                }
                let nx = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                x.iter_mut().for_each(|c| *c /= nx);
                RitzPair { value: rz.values[i], vector: x }
            })
            .collect();
        worst = converged(&pairs);
        let exhausted = residual_vec.is_none();
        if worst <= 1.0 || exhausted {
            let state = ArnoldiState { ritz_values: rz.values, krylov_dim: k, restarts: restart, applications };
            if worst <= 1.0 {
                return Ok((pairs, state));
            }
            return Err(Error::NoConvergence { restarts: restart, worst_residual: worst });
        }
        let f = residual_vec.expect("checked above");

        // thick restart on the wanted invariant subspace of H, padded up to
        // a fixed number of kept vectors
        let keep = ((m + 2 * opts.nev) / 3).max(opts.nev + 1).min(m.saturating_sub(2)).max(1);
        let extended = select(&rz.values, keep, 0.0);
        let q = real_basis(&rz.vectors, &rz.values, &extended);
        let p = q.len();
        let hm = Mat::<f64>::from_fn(m, m, |r, c| h[(r, c)]);
        let qm = Mat::<f64>::from_fn(m, p, |r, c| q[c][r]);
        let hq = &hm * &qm;
        let t = qm.transpose() * &hq;
        let defect = (&hq - &qm * &t).norm_max();
        if p == 0 || p >= m || defect > 1e-10 * hm.norm_max().max(f64::MIN_POSITIVE) {
            // explicit restart from the sum of the wanted Ritz vectors
            let mut v: Vec<f64> = vec![0.0; n];
            for pair in &pairs {
                for (vi, xi) in v.iter_mut().zip(&pair.vector) {
                    *vi += xi.re + xi.im;
                }
            }
            let nv = norm(&v);
            let v = if nv > 0.0 {
                v.into_iter().map(|x| x / nv).collect()
            } else {
                random_unit_vector(&mut rng, &[], n).expect("nonzero random vector")
            };
            basis = vec![v];
            h = Mat::zeros(m + 1, m);
            continue;
        }
        let beta = h[(m, m - 1)];
        let new_basis: Vec<Vec<f64>> = (0..p)
            .map(|c| {
                let mut v = vec![0.0; n];
                for (r, b) in basis.iter().take(m).enumerate() {
                    let s = q[c][r];
                    if s != 0.0 {
                        for (vi, bi) in v.iter_mut().zip(b) {
                            *vi += s * bi;
                        }
                    }
                }
                v
            })
            .collect();
        basis = new_basis;
        basis.push(f);
        h = Mat::zeros(m + 1, m);
        for r in 0..p {
            for c in 0..p {
                h[(r, c)] = t[(r, c)];
            }
        }
        for c in 0..p {
            h[(p, c)] = beta * q[c][m - 1];
        }
    }
    Err(Error::NoConvergence { restarts: opts.max_restarts, worst_residual: worst })
}
