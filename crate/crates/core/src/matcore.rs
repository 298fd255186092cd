//! Dense complex matrix primitives.
//!
//! Numerical rank, null-space bases, orthogonal complements, subspace
//! dimension arithmetic and the generalized singular value decomposition
//! (GSVD) of a pair of matrices sharing a row space.
//!
//! All routines are pure. Matrices with zero columns are valid inputs and
//! stand for the zero-dimensional subspace.

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Column-major dense complex matrix; columns are vectors.
pub type ComplexMatrix = DMatrix<Complex64>;

// f64 bits of a relative rank threshold; zero means "not set".
static RELATIVE_TOLERANCE: AtomicU64 = AtomicU64::new(0);

/// Overrides the default rank tolerance for the whole process.
///
/// With `Some(rel)`, a singular value counts towards the rank when it exceeds
/// `rel * sigma_max`. `None` restores `max(rows, cols) * eps * sigma_max`.
pub fn set_rank_tolerance(relative: Option<f64>) {
    let bits = match relative {
        Some(r) if r.is_finite() && r > 0.0 => r.to_bits(),
        _ => 0,
    };
    RELATIVE_TOLERANCE.store(bits, Ordering::Relaxed);
}

/// The process-wide relative rank tolerance, if one was set.
pub fn rank_tolerance_override() -> Option<f64> {
    match RELATIVE_TOLERANCE.load(Ordering::Relaxed) {
        0 => None,
        bits => Some(f64::from_bits(bits)),
    }
}

/// Absolute threshold used when no explicit tolerance is given.
pub fn default_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    match rank_tolerance_override() {
        Some(rel) => rel * sigma_max,
        None => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
    }
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Horizontal concatenation `[a b]`.
pub fn hcat(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.nrows(), b.nrows(), "hcat: row counts differ");
    let mut out = ComplexMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// Concatenates any number of blocks with equal row counts.
pub fn hcat_all(rows: usize, blocks: &[&ComplexMatrix]) -> ComplexMatrix {
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hcat_all: row counts differ");
        out.columns_mut(at, b.ncols()).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Vertical concatenation.
pub fn vcat(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.ncols(), b.ncols(), "vcat: column counts differ");
    let mut out = ComplexMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

/// Singular values in descending order plus a full `n x n` unitary matrix of
/// right singular vectors in matching order. Trailing columns beyond the
/// singular value count span (at least) the null space.
pub(crate) fn right_svd(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (m, n) = a.shape();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    if m == 0 {
        return (Vec::new(), ComplexMatrix::identity(n, n));
    }
    // nalgebra only returns a thin factorization; pad wide inputs to square so
    // that v_t is n x n.
    let work = if m >= n {
        a.clone()
    } else {
        let mut p = ComplexMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    };
    let svd = work.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let sigma = order.iter().take(m.min(n)).map(|&i| s[i]).collect();
    let v = ComplexMatrix::from_fn(n, n, |r, c| vt[(order[c], r)].conj());
    (sigma, v)
}

/// Thin SVD with descending singular values: `a = u * diag(sigma) * v^H`,
/// `u` is `m x q`, `v` is `n x q`, `q = min(m, n)`.
pub(crate) fn thin_svd(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let (m, n) = a.shape();
    let q = m.min(n);
    if q == 0 {
        return (
            ComplexMatrix::zeros(m, 0),
            Vec::new(),
            ComplexMatrix::zeros(n, 0),
        );
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let vt = svd.v_t.expect("right singular vectors requested");
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let sigma = order.iter().map(|&i| s[i]).collect();
    let u_sorted = ComplexMatrix::from_fn(m, q, |r, c| u[(r, order[c])]);
    let v_sorted = ComplexMatrix::from_fn(n, q, |r, c| vt[(order[c], r)].conj());
    (u_sorted, sigma, v_sorted)
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn count_above(sigma: &[f64], rows: usize, cols: usize, tol: Option<f64>) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let tol = tol.unwrap_or_else(|| default_tolerance(rows, cols, smax));
    sigma.iter().filter(|&&s| s > tol).count()
}

/// Numerical rank: the number of singular values above `tol`.
///
/// Without an explicit tolerance the threshold is
/// `max(rows, cols) * eps * sigma_max` (or the process-wide override).
pub fn rank_tol(a: &ComplexMatrix, tol: Option<f64>) -> usize {
    let (m, n) = a.shape();
    count_above(&singular_values(a), m, n, tol)
}

pub fn rank(a: &ComplexMatrix) -> usize {
    rank_tol(a, None)
}

/// [`dim_quotient`] with an absolute threshold shared by both ranks.
pub fn dim_quotient_tol(a: &ComplexMatrix, b: &ComplexMatrix, tol: Option<f64>) -> usize {
    assert_eq!(a.nrows(), b.nrows(), "dim_quotient: row counts differ");
    if b.ncols() == 0 {
        return rank_tol(a, tol);
    }
    rank_tol(&hcat(a, b), tol).saturating_sub(rank_tol(b, tol))
}

/// [`dim_intersection`] with an absolute threshold shared by all ranks.
pub fn dim_intersection_tol(a: &ComplexMatrix, b: &ComplexMatrix, tol: Option<f64>) -> usize {
    assert_eq!(a.nrows(), b.nrows(), "dim_intersection: row counts differ");
    if a.ncols() == 0 || b.ncols() == 0 {
        return 0;
    }
    (rank_tol(a, tol) + rank_tol(b, tol)).saturating_sub(rank_tol(&hcat(a, b), tol))
}

/// Orthonormal basis of `null(a)`; width `cols - rank(a)`.
pub fn null_basis(a: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = a.shape();
    let (sigma, v) = right_svd(a);
    let r = count_above(&sigma, m, n, None);
    v.columns(r, n - r).into_owned()
}

/// Orthonormal basis of `null(a)` with a prescribed width, taken from the
/// smallest right singular directions.
pub fn null_basis_exact(a: &ComplexMatrix, width: usize) -> ComplexMatrix {
    let n = a.ncols();
    assert!(width <= n, "null_basis_exact: width exceeds column count");
    let (_, v) = right_svd(a);
    v.columns(n - width, width).into_owned()
}

/// Orthonormal basis of `null(a^H)`, the orthogonal complement of `span(a)`;
/// width `rows - rank(a)`.
pub fn orth_complement(a: &ComplexMatrix) -> ComplexMatrix {
    null_basis(&a.adjoint())
}

pub fn orth_complement_exact(a: &ComplexMatrix, width: usize) -> ComplexMatrix {
    null_basis_exact(&a.adjoint(), width)
}

/// Orthonormal basis of `span(a)`.
pub fn orth_basis(a: &ComplexMatrix) -> ComplexMatrix {
    let (u, sigma, _) = thin_svd(a);
    let r = count_above(&sigma, a.nrows(), a.ncols(), None);
    u.columns(0, r).into_owned()
}

/// `dim{span(a) / span(b)} = rank([a b]) - rank(b)`.
pub fn dim_quotient(a: &ComplexMatrix, b: &ComplexMatrix) -> usize {
    assert_eq!(a.nrows(), b.nrows(), "dim_quotient: row counts differ");
    if b.ncols() == 0 {
        return rank(a);
    }
    rank(&hcat(a, b)).saturating_sub(rank(b))
}

/// `dim{span(a) ∩ span(b)} = rank(a) + rank(b) - rank([a b])`.
pub fn dim_intersection(a: &ComplexMatrix, b: &ComplexMatrix) -> usize {
    assert_eq!(a.nrows(), b.nrows(), "dim_intersection: row counts differ");
    if a.ncols() == 0 || b.ncols() == 0 {
        return 0;
    }
    (rank(a) + rank(b)).saturating_sub(rank(&hcat(a, b)))
}

/// Least-squares solution of `a * x = b` through the pseudo-inverse.
pub fn lstsq(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.nrows(), b.nrows(), "lstsq: row counts differ");
    let (u, sigma, v) = thin_svd(a);
    let r = count_above(&sigma, a.nrows(), a.ncols(), None);
    let mut coeffs = u.columns(0, r).adjoint() * b;
    for (i, mut row) in coeffs.row_iter_mut().enumerate() {
        row /= Complex64::new(sigma[i], 0.0);
    }
    v.columns(0, r) * coeffs
}

/// Result of `gsvd(a, b)` for `a: N x M`, `b: N x K`.
///
/// `a * psi1 = x * D1^H` and `b * psi2 = x * D2^H` with
/// `D1 = diag(I_r, lambda1, 0)` and `D2 = [0; diag(lambda2); I_p]`. Column
/// blocks of `psi1` are `[r | s | M-r-s]`, of `psi2` `[K-s-p | s | p]` and of
/// `x` `[r | s | p]`.
#[derive(Debug, Clone)]
pub struct Gsvd {
    pub psi1: ComplexMatrix,
    pub psi2: ComplexMatrix,
    /// Diagonal of the shared block on the `a` side, descending.
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
    pub x: ComplexMatrix,
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub p: usize,
}

impl Gsvd {
    pub fn psi11(&self) -> ComplexMatrix {
        self.psi1.columns(0, self.r).into_owned()
    }

    pub fn psi12(&self) -> ComplexMatrix {
        self.psi1.columns(self.r, self.s).into_owned()
    }

    pub fn psi13(&self) -> ComplexMatrix {
        let m = self.psi1.ncols();
        self.psi1
            .columns(self.r + self.s, m - self.r - self.s)
            .into_owned()
    }

    pub fn psi21(&self) -> ComplexMatrix {
        let k2 = self.psi2.ncols();
        self.psi2.columns(0, k2 - self.s - self.p).into_owned()
    }

    pub fn psi22(&self) -> ComplexMatrix {
        let k2 = self.psi2.ncols();
        self.psi2.columns(k2 - self.s - self.p, self.s).into_owned()
    }

    pub fn psi23(&self) -> ComplexMatrix {
        let k2 = self.psi2.ncols();
        self.psi2.columns(k2 - self.p, self.p).into_owned()
    }

    pub fn x1(&self) -> ComplexMatrix {
        self.x.columns(0, self.r).into_owned()
    }

    pub fn x2(&self) -> ComplexMatrix {
        self.x.columns(self.r, self.s).into_owned()
    }

    pub fn x3(&self) -> ComplexMatrix {
        self.x.columns(self.r + self.s, self.p).into_owned()
    }

    /// `psi12 * lambda1^{-1}`: maps shared coordinates to `a`-side vectors
    /// whose image under `a` is `x2 * y`.
    pub fn shared_a(&self) -> ComplexMatrix {
        scale_columns(&self.psi12(), self.lambda1.iter().map(|l| 1.0 / l))
    }

    /// `psi22 * lambda2^{-1}`.
    pub fn shared_b(&self) -> ComplexMatrix {
        scale_columns(&self.psi22(), self.lambda2.iter().map(|l| 1.0 / l))
    }
}

pub(crate) fn scale_columns<I>(a: &ComplexMatrix, factors: I) -> ComplexMatrix
where
    I: IntoIterator<Item = f64>,
{
    let mut out = a.clone();
    for (mut col, f) in out.column_iter_mut().zip(factors) {
        col *= Complex64::new(f, 0.0);
    }
    out
}

/// Generalized singular value decomposition of a full-rank pair sharing the
/// row count `N`.
///
/// Orthonormal factorization of the stacked pair `[a^H; b^H]` followed by a
/// cosine-sine split of its left factor. The private blocks come from the
/// null spaces of the two halves and the shared block from one SVD, so no
/// cosine close to one is ever used to recover a sine.
pub fn gsvd(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Gsvd> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "gsvd: {} rows vs {} rows",
            a.nrows(),
            b.nrows()
        )));
    }
    if !is_finite(a) || !is_finite(b) {
        return Err(Error::DegenerateInput("gsvd: non-finite entries".into()));
    }
    let (n, m, kk) = (a.nrows(), a.ncols(), b.ncols());
    let k = (m + kk).min(n);
    let p = k - m.min(n);
    let r = k - kk.min(n);
    let s = k - p - r;

    let (rank_a, rank_b, rank_ab) = (rank(a), rank(b), rank(&hcat(a, b)));
    if rank_a != m.min(n) || rank_b != kk.min(n) || rank_ab != k {
        return Err(Error::DegenerateInput(format!(
            "gsvd: ranks (a={rank_a}, b={rank_b}, [a b]={rank_ab}) inconsistent with \
             full-rank quadruple (k={k}, r={r}, s={s}, p={p})"
        )));
    }

    if k == 0 {
        return Ok(Gsvd {
            psi1: ComplexMatrix::identity(m, m),
            psi2: ComplexMatrix::identity(kk, kk),
            lambda1: Vec::new(),
            lambda2: Vec::new(),
            x: ComplexMatrix::zeros(n, 0),
            k,
            r,
            s,
            p,
        });
    }

    let stacked = vcat(&a.adjoint(), &b.adjoint());
    let (u, sigma, v) = thin_svd(&stacked);
    let uk = u.columns(0, k).into_owned();
    let u1 = uk.rows(0, m).into_owned();
    let u2 = uk.rows(m, kk).into_owned();

    // Z = [z_r z_s z_p]: z_r spans null(u2), z_p spans null(u1).
    let z_r = null_basis_exact(&u2, r);
    let z_p = null_basis_exact(&u1, p);
    let private = hcat(&z_r, &z_p);
    let y = orth_complement_exact(&private, s);

    let (psi12, lambda1, z_s) = if s > 0 {
        let (pu, c, q) = thin_svd(&(&u1 * &y));
        (pu, c, &y * q)
    } else {
        (
            ComplexMatrix::zeros(m, 0),
            Vec::new(),
            ComplexMatrix::zeros(k, 0),
        )
    };
    if !lambda1.iter().all(|&c| c > 0.0) {
        return Err(Error::DegenerateInput("gsvd: vanishing cosine".into()));
    }

    let t = &u2 * &z_s;
    let lambda2: Vec<f64> = t.column_iter().map(|c| c.norm()).collect();
    if !lambda2.iter().all(|&l| l > 0.0) {
        return Err(Error::DegenerateInput("gsvd: vanishing sine".into()));
    }
    let psi22 = scale_columns(&t, lambda2.iter().map(|l| 1.0 / l));

    let psi11 = &u1 * &z_r;
    let psi1_known = hcat(&psi11, &psi12);
    let psi13 = orth_complement_exact(&psi1_known, m - r - s);
    let psi1 = hcat(&psi1_known, &psi13);

    let psi23 = &u2 * &z_p;
    let psi2_known = hcat(&psi22, &psi23);
    let psi21 = orth_complement_exact(&psi2_known, kk - s - p);
    let psi2 = hcat(&psi21, &psi2_known);

    let z = hcat_all(k, &[&z_r, &z_s, &z_p]);
    let vs = scale_columns(&v.columns(0, k).into_owned(), sigma.iter().take(k).copied());
    let x = vs * z;

    Ok(Gsvd {
        psi1,
        psi2,
        lambda1,
        lambda2,
        x,
        k,
        r,
        s,
        p,
    })
}
