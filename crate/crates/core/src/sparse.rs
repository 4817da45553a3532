//! Compressed sparse row matrices, MatrixMarket I/O and a sparse LU wrapper.

use std::io::Write;

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` entries; duplicates are
    /// summed, column indices are sorted within each row.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, j, _) in entries {
            assert!(i < nrows && j < ncols, "entry ({i}, {j}) outside {nrows}x{ncols}");
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut cols = vec![0usize; entries.len()];
        let mut vals = vec![0.0; entries.len()];
        for &(i, j, v) in entries {
            cols[fill[i]] = j;
            vals[fill[i]] = v;
            fill[i] += 1;
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for i in 0..nrows {
            scratch.clear();
            scratch.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            scratch.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < scratch.len() {
                let j = scratch[k].0;
                let mut sum = 0.0;
                while k < scratch.len() && scratch[k].0 == j {
                    sum += scratch[k].1;
                    k += 1;
                }
                col_idx.push(j);
                values.push(sum);
            }
            row_ptr.push(col_idx.len());
        }
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_triplets(nrows, ncols, &[])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let entries: Vec<_> = diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(diag.len(), diag.len(), &entries)
    }

    pub fn from_dense(m: &Mat<f64>) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), &entries)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let entries: Vec<_> = self.iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, &entries)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |a_ij - a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        self.iter().map(|(i, j, v)| (v - self.get(j, i)).abs()).fold(0.0, f64::max)
    }

    /// Restriction to a rectangular block of rows and columns.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let entries: Vec<_> = self
            .iter()
            .filter(|(i, j, _)| rows.contains(i) && cols.contains(j))
            .map(|(i, j, v)| (i - rows.start, j - cols.start, v))
            .collect();
        Self::from_triplets(rows.len(), cols.len(), &entries)
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let triplets: Vec<_> = self.iter().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &triplets)
            .map_err(|e| Error::Internal(format!("sparse conversion failed: {e:?}")))
    }

    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for (i, j, v) in self.iter() {
            writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v)?;
        }
        Ok(())
    }

    pub fn read_matrix_market(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let banner = lines.next().ok_or_else(|| Error::Parse("empty MatrixMarket input".into()))?;
        let banner_l = banner.to_ascii_lowercase();
        if !banner_l.starts_with("%%matrixmarket matrix coordinate real") {
            return Err(Error::Parse(format!("unsupported banner '{banner}'")));
        }
        let symmetric = banner_l.contains("symmetric");
        let mut lines = lines.filter(|l| !l.starts_with('%') && !l.trim().is_empty());
        let size = lines.next().ok_or_else(|| Error::Parse("missing size line".into()))?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad size line '{size}'"))))
            .collect::<Result<_>>()?;
        let [nrows, ncols, nnz] = dims[..] else {
            return Err(Error::Parse(format!("bad size line '{size}'")));
        };
        let mut entries = Vec::with_capacity(nnz);
        for line in lines.by_ref().take(nnz) {
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("bad entry line '{line}'"));
            if f.len() != 3 {
                return Err(bad());
            }
            let i: usize = f[0].parse().map_err(|_| bad())?;
            let j: usize = f[1].parse().map_err(|_| bad())?;
            let v: f64 = f[2].parse().map_err(|_| bad())?;
            if i == 0 || j == 0 || i > nrows || j > ncols {
                return Err(bad());
            }
            entries.push((i - 1, j - 1, v));
            if symmetric && i != j {
                entries.push((j - 1, i - 1, v));
            }
        }
        if entries.len() < nnz {
            return Err(Error::Parse(format!("expected {nnz} entries")));
        }
        Ok(Self::from_triplets(nrows, ncols, &entries))
    }
}

type FaerLu = faer::sparse::linalg::solvers::Lu<usize, f64>;

fn factor(a: &CsrMatrix) -> Result<FaerLu> {
    a.to_faer()?.sp_lu().map_err(|e| Error::SingularLhs(format!("{e:?}")))
}

fn faer_solve(lu: &FaerLu, b: &[f64]) -> Vec<f64> {
    let rhs = faer::Col::<f64>::from_fn(b.len(), |i| b[i]);
    let x = lu.solve(&rhs);
    (0..b.len()).map(|i| x[i]).collect()
}

fn dense_small_inverse(m: &Mat<f64>) -> Result<Mat<f64>> {
    if m.nrows() == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let s = m.singular_values().map_err(|e| Error::Dense(format!("{e:?}")))?;
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 1e-14 * max) {
        return Err(Error::SingularLhs("singular border complement".into()));
    }
    Ok(m.partial_piv_lu().inverse())
}

/// Factorization of `[K C; R E]` where the trailing `r` rows and columns
/// are dense. Only `K + P D P^T` is factored, `P` selecting a few pinned
/// diagonal entries that make it nonsingular; the border is handled by a
/// Schur complement and the pins are removed again by a Woodbury correction.
struct Bordered {
    n0: usize,
    lu: FaerLu,
    c: Vec<Vec<f64>>,
    rows: Vec<Vec<f64>>,
    /// `K^-1 C`, one vector per border column.
    z: Vec<Vec<f64>>,
    schur_inv: Mat<f64>,
    pins: Vec<usize>,
    /// `M_hat^-1 P`, full length.
    y: Vec<Vec<f64>>,
    capacitance_inv: Mat<f64>,
}

impl Bordered {
    fn new(a: &CsrMatrix, r: usize, pin: bool) -> Result<Self> {
        let n = a.nrows();
        let n0 = n - r;
        let mut c = vec![vec![0.0; n0]; r];
        let mut rows = vec![vec![0.0; n0]; r];
        let mut e = Mat::<f64>::zeros(r, r);
        let mut inner = Vec::with_capacity(a.nnz());
        for (i, j, v) in a.iter() {
            match (i < n0, j < n0) {
                (true, true) => inner.push((i, j, v)),
                (true, false) => c[j - n0][i] = v,
                (false, true) => rows[i - n0][j] = v,
                (false, false) => e[(i - n0, j - n0)] = v,
            }
        }
        let mut pins = Vec::new();
        if pin {
            let scale = (0..n0).map(|i| a.get(i, i).abs()).fold(0.0, f64::max).max(1.0);
            for col in &c {
                let p = (0..n0).filter(|p| !pins.contains(p)).max_by(|&i, &j| col[i].abs().total_cmp(&col[j].abs()));
                if let Some(p) = p {
                    pins.push(p);
                    inner.push((p, p, scale));
                }
            }
        }
        let k = CsrMatrix::from_triplets(n0, n0, &inner);
        let lu = factor(&k)?;
        let z: Vec<Vec<f64>> = c.iter().map(|col| faer_solve(&lu, col)).collect();
        let mut schur = Mat::<f64>::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                schur[(i, j)] = e[(i, j)] - rows[i].iter().zip(&z[j]).map(|(p, q)| p * q).sum::<f64>();
            }
        }
        let schur_inv = dense_small_inverse(&schur)?;
        let mut this =
            Self { n0, lu, c, rows, z, schur_inv, pins: Vec::new(), y: Vec::new(), capacitance_inv: Mat::zeros(0, 0) };
        if pin {
            let scale = (0..n0).map(|i| a.get(i, i).abs()).fold(0.0, f64::max).max(1.0);
            let y: Vec<Vec<f64>> = pins
                .iter()
                .map(|&p| {
                    let mut ep = vec![0.0; n];
                    ep[p] = 1.0;
                    this.solve_hat(&ep)
                })
                .collect();
            let m = pins.len();
            let cap = Mat::<f64>::from_fn(m, m, |i, j| f64::from(u8::from(i == j)) / scale - y[j][pins[i]]);
            this.capacitance_inv = dense_small_inverse(&cap)?;
            this.pins = pins;
            this.y = y;
        }
        Ok(this)
    }

    fn solve_hat(&self, b: &[f64]) -> Vec<f64> {
        let (f, g) = b.split_at(self.n0);
        let w = faer_solve(&self.lu, f);
        let r = self.c.len();
        let t: Vec<f64> = (0..r).map(|i| g[i] - self.rows[i].iter().zip(&w).map(|(p, q)| p * q).sum::<f64>()).collect();
        let yb: Vec<f64> = (0..r).map(|i| (0..r).map(|j| self.schur_inv[(i, j)] * t[j]).sum()).collect();
        let mut x = w;
        for (zj, yj) in self.z.iter().zip(&yb) {
            for (xi, zi) in x.iter_mut().zip(zj) {
                *xi -= yj * zi;
            }
        }
        x.extend(yb);
        x
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut s = self.solve_hat(b);
        let m = self.pins.len();
        if m > 0 {
            let ps: Vec<f64> = self.pins.iter().map(|&p| s[p]).collect();
            for i in 0..m {
                let coef: f64 = (0..m).map(|j| self.capacitance_inv[(i, j)] * ps[j]).sum();
                for (si, yi) in s.iter_mut().zip(&self.y[i]) {
                    *si += coef * yi;
                }
            }
        }
        s
    }
}

enum LuKind {
    Plain(Box<FaerLu>),
    Bordered(Box<Bordered>),
}

/// Sparse LU factorization with partial pivoting, computed once and reused.
pub struct SparseLu {
    n: usize,
    kind: LuKind,
    /// Kept for one step of iterative refinement in the bordered variant.
    matrix: Option<CsrMatrix>,
}

impl SparseLu {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        Self::with_border(a, 0)
    }

    /// Factorization of a matrix whose last `border` rows and columns are
    /// dense (Lagrange-multiplier borders). Falls back to a plain LU when the
    /// bordered elimination is not applicable.
    pub fn with_border(a: &CsrMatrix, border: usize) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::InvalidArgument("LU of a non-square matrix".into()));
        }
        let n = a.nrows();
        if border > 0 && border < n {
            for pin in [false, true] {
                if let Ok(b) = Bordered::new(a, border, pin) {
                    let this = Self { n, kind: LuKind::Bordered(Box::new(b)), matrix: Some(a.clone()) };
                    if this.check(a).is_ok() {
                        return Ok(this);
                    }
                }
            }
        }
        let this = Self { n, kind: LuKind::Plain(Box::new(factor(a)?)), matrix: None };
        this.check(a)?;
        Ok(this)
    }

    // faer reports structural failures only; catch numerical singularity
    // through the solution of a probe system.
    fn check(&self, a: &CsrMatrix) -> Result<()> {
        let probe: Vec<f64> = (0..self.n).map(|i| 1.0 + (i % 7) as f64).collect();
        let x = self.solve(&probe);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularLhs("factorization produced non-finite values".into()));
        }
        let r = a.matvec(&x);
        let res = r.iter().zip(&probe).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale = probe.iter().map(|v| v * v).sum::<f64>().sqrt();
        if res > 1e-6 * scale {
            return Err(Error::SingularLhs(format!("probe residual {res:e} relative to {scale:e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        match &self.kind {
            LuKind::Plain(lu) => faer_solve(lu, b),
            LuKind::Bordered(bd) => {
                let mut x = bd.solve(b);
                if let Some(a) = &self.matrix {
                    let ax = a.matvec(&x);
                    let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
                    for (xi, di) in x.iter_mut().zip(bd.solve(&r)) {
                        *xi += di;
                    }
                }
                x
            }
        }
    }
}
