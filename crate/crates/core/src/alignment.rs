//! Pairs `(v, w)` whose images coincide, `A v = B w`.

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix};

/// Parametrisation of all solutions of `A v = B w`.
///
/// `v = phi1 * [y_s; y1]` and `w = phi2 * [y_s; y2]` for a shared coordinate
/// `y_s` of length `shared_width` and free coordinates `y1`, `y2` on the null
/// spaces of `A` and `B`.
#[derive(Debug, Clone)]
pub struct AlignedSpace {
    pub phi1: ComplexMatrix,
    pub phi2: ComplexMatrix,
    pub shared_width: usize,
    pub independent_count: usize,
}

impl AlignedSpace {
    pub fn null_width_a(&self) -> usize {
        self.phi1.ncols() - self.shared_width
    }

    pub fn null_width_b(&self) -> usize {
        self.phi2.ncols() - self.shared_width
    }

    /// Evaluates `(v, w)` at the given coordinates.
    pub fn pair(
        &self,
        shared: &ComplexMatrix,
        free_a: &ComplexMatrix,
        free_b: &ComplexMatrix,
    ) -> (ComplexMatrix, ComplexMatrix) {
        let v = &self.phi1 * matcore::vcat(shared, free_a);
        let w = &self.phi2 * matcore::vcat(shared, free_b);
        (v, w)
    }
}

pub fn aligned_space(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<AlignedSpace> {
    let g = matcore::gsvd(a, b)?;
    let null_a = matcore::null_basis(a);
    let null_b = matcore::null_basis(b);
    let independent_count = g.s + null_a.ncols();
    Ok(AlignedSpace {
        phi1: matcore::hcat(&g.shared_a(), &null_a),
        phi2: matcore::hcat(&g.shared_b(), &null_b),
        shared_width: g.s,
        independent_count,
    })
}

// Relative residual accepted when checking span(G1 V) against span(G2 W).
const ALIGN_RTOL: f64 = 1e-9;

/// Rewrites an aligned pair so that `G1 V = G2 W(:, 1:Kv)` column by column.
///
/// `V` is returned unchanged and `W` becomes `W [B, B_perp]` where
/// `G1 V = G2 W B`. The right factor has full row rank, so `span(W)` is kept.
pub fn canonicalize(
    v: &ComplexMatrix,
    w: &ComplexMatrix,
    g1: &ComplexMatrix,
    g2: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if g1.ncols() != v.nrows() || g2.ncols() != w.nrows() || g1.nrows() != g2.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "canonicalize: V {}x{}, W {}x{}, G1 {}x{}, G2 {}x{}",
            v.nrows(),
            v.ncols(),
            w.nrows(),
            w.ncols(),
            g1.nrows(),
            g1.ncols(),
            g2.nrows(),
            g2.ncols()
        )));
    }
    let ne = g1.nrows();
    let g1v = g1 * v;
    let g2w = g2 * w;

    let b = if w.ncols() >= ne {
        // G2 W = [U1 U0] diag(S1, 0) [T1 T0]^H; B = T1 (G2 W T1)^{-1} G1 V
        let (u, sigma, t) = matcore::thin_svd(&g2w);
        let r = matcore::rank(&g2w);
        let inv = matcore::scale_columns(
            &t.columns(0, r).into_owned(),
            sigma.iter().take(r).map(|s| 1.0 / s),
        );
        inv * u.columns(0, r).adjoint() * &g1v
    } else {
        // B = ((G2 W)^H G2 W)^{-1} (G2 W)^H G1 V
        matcore::lstsq(&g2w, &g1v)
    };

    let resid = (&g1v - &g2w * &b).norm();
    let scale = g1v.norm().max(f64::MIN_POSITIVE);
    if resid > ALIGN_RTOL * scale && resid > 0.0 {
        return Err(Error::NotAligned(format!(
            "span(G1 V) leaves span(G2 W): relative residual {:.3e}",
            resid / scale
        )));
    }

    let b_perp = matcore::orth_complement(&b);
    let w_star = w * matcore::hcat(&b, &b_perp);
    Ok((v.clone(), w_star))
}
