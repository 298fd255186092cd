//! Achieved secrecy degrees of freedom by subspace ranks, set membership,
//! finite-SNR secrecy rates and high-SNR slopes.

use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, ComplexMatrix};
use crate::precoder::{ChannelSet, PrecoderPair};
use crate::region::SdofPoint;

/// Relative rank threshold for subspace counts on products `H X` of a
/// channel and a computed precoder. Singular values below
/// `VERIFY_RTOL * |H|_F * |X|_F` count as zero.
pub const VERIFY_RTOL: f64 = 1e-9;

// A product H X together with the scale its roundoff is measured against.
struct Image {
    m: ComplexMatrix,
    scale: f64,
}

fn image(h: &ComplexMatrix, x: &ComplexMatrix) -> Image {
    Image {
        m: h * x,
        scale: h.norm() * x.norm(),
    }
}

fn tol_for(scale: f64) -> Option<f64> {
    let rel = matcore::rank_tolerance_override().unwrap_or(VERIFY_RTOL);
    Some(rel * scale)
}

fn rank_of(a: &Image) -> usize {
    matcore::rank_tol(&a.m, tol_for(a.scale))
}

fn quotient(a: &Image, b: &Image) -> usize {
    matcore::dim_quotient_tol(&a.m, &b.m, tol_for(a.scale.max(b.scale)))
}

fn intersection(a: &Image, b: &Image) -> usize {
    matcore::dim_intersection_tol(&a.m, &b.m, tol_for(a.scale.max(b.scale)))
}

fn check_shapes(ch: &ChannelSet, pair: &PrecoderPair) -> Result<()> {
    let cfg = ch.config()?;
    if pair.v.nrows() != cfg.ns1 || pair.w.nrows() != cfg.ns2 {
        return Err(Error::DimensionMismatch(format!(
            "precoders have {} and {} rows, channels expect {} and {}",
            pair.v.nrows(),
            pair.w.nrows(),
            cfg.ns1,
            cfg.ns2
        )));
    }
    if !matcore::is_finite(&pair.v) || !matcore::is_finite(&pair.w) {
        return Err(Error::DegenerateInput(
            "precoder has non-finite entries".into(),
        ));
    }
    Ok(())
}

/// Secrecy degrees of freedom achieved by the transmitted matrices of `pair`:
/// `d1 = rank(H11 V) - dim(G1 V / G2 W) - dim(H12 W ∩ H11 V)` and
/// `d2 = dim(H22 W / H21 V)`.
pub fn sdof_of(ch: &ChannelSet, pair: &PrecoderPair) -> Result<SdofPoint> {
    check_shapes(ch, pair)?;
    let (v, w) = (&pair.v_tx(), &pair.w_tx());
    let h11v = image(&ch.h11, v);
    let leak = quotient(&image(&ch.g1, v), &image(&ch.g2, w));
    let overlap = intersection(&image(&ch.h12, w), &h11v);
    let d1 = rank_of(&h11v).saturating_sub(leak + overlap);
    let d2 = quotient(&image(&ch.h22, w), &image(&ch.h21, v));
    Ok(SdofPoint::new(d1, d2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    /// Power constraint on the transmitted matrices.
    pub in_i: bool,
    /// No leakage beyond the second source's span at the eavesdropper and no
    /// overlap of the two signals at the first destination.
    pub in_ibar: bool,
    /// As `in_ibar`, with `G1 V = G2 W(:, 1:Kv)` column by column.
    pub in_ihat: bool,
}

const TRACE_RTOL: f64 = 1e-9;
const ELEMENTWISE_RTOL: f64 = 1e-9;

fn power_ok(m: &ComplexMatrix, power: f64) -> bool {
    let tr = m.norm_squared();
    tr == 0.0 || (tr - power).abs() <= TRACE_RTOL * power
}

pub fn membership(ch: &ChannelSet, pair: &PrecoderPair) -> Result<Membership> {
    check_shapes(ch, pair)?;
    let (vt, wt) = (&pair.v_tx(), &pair.w_tx());
    let in_i = power_ok(vt, pair.power) && power_ok(wt, pair.power);
    let in_ibar = quotient(&image(&ch.g1, vt), &image(&ch.g2, wt)) == 0
        && intersection(&image(&ch.h11, vt), &image(&ch.h12, wt)) == 0;

    let g1v = &ch.g1 * &pair.v;
    let g2w = &ch.g2 * &pair.w;
    let in_ihat = in_ibar && pair.kw() >= pair.kv() && {
        let lead = g2w.columns(0, pair.kv());
        let scale = ch.g1.norm() * pair.v.norm() + ch.g2.norm() * pair.w.norm();
        (&g1v - lead).norm() <= ELEMENTWISE_RTOL * scale
    };
    Ok(Membership {
        in_i,
        in_ibar,
        in_ihat,
    })
}

/// Rates in bits per channel use; noise covariance is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateTriple {
    pub rd1: f64,
    pub rd2: f64,
    pub re: f64,
}

impl RateTriple {
    pub fn rs1(&self) -> f64 {
        (self.rd1 - self.re).max(0.0)
    }

    pub fn rs2(&self) -> f64 {
        self.rd2
    }
}

/// `log2 det(m)` for Hermitian positive definite `m`.
pub fn log2det_hpd(m: &ComplexMatrix) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let chol = Cholesky::new(m.clone()).ok_or_else(|| {
        Error::NumericalBreakdown("log-det argument is not positive definite".into())
    })?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        let z = l[(i, i)];
        // complex square roots of negative pivots come back imaginary
        if !(z.re > 0.0 && z.re.is_finite() && z.im.abs() <= 1e-8 * z.re) {
            return Err(Error::NumericalBreakdown(format!(
                "non-positive Cholesky pivot {z}"
            )));
        }
        acc += z.re.log2();
    }
    Ok(2.0 * acc)
}

// I + sum of H Q H^H over the given (channel, transmitted precoder) terms
fn gram_plus_identity(rows: usize, terms: &[(&ComplexMatrix, &ComplexMatrix)]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(rows, rows);
    for (h, x) in terms {
        let hx = *h * *x;
        acc += &hx * hx.adjoint();
    }
    // symmetrize against roundoff
    (acc.adjoint() + &acc).unscale(2.0)
}

fn mutual_info(
    rows: usize,
    signal: (&ComplexMatrix, &ComplexMatrix),
    interference: (&ComplexMatrix, &ComplexMatrix),
) -> Result<f64> {
    let total = log2det_hpd(&gram_plus_identity(rows, &[signal, interference]))?;
    let noise = log2det_hpd(&gram_plus_identity(rows, &[interference]))?;
    Ok(total - noise)
}

pub fn rates(ch: &ChannelSet, pair: &PrecoderPair) -> Result<RateTriple> {
    check_shapes(ch, pair)?;
    let cfg = ch.config()?;
    let (v, w) = (pair.v_tx(), pair.w_tx());
    Ok(RateTriple {
        rd1: mutual_info(cfg.nd1, (&ch.h11, &v), (&ch.h12, &w))?,
        rd2: mutual_info(cfg.nd2, (&ch.h22, &w), (&ch.h21, &v))?,
        re: mutual_info(cfg.ne, (&ch.g1, &v), (&ch.g2, &w))?,
    })
}

/// High-SNR slopes of `(R_s^1, R_s^2)` against `log2 P` between the two
/// largest powers of `p_grid`.
pub fn slope_estimate(ch: &ChannelSet, pair: &PrecoderPair, p_grid: &[f64]) -> Result<(f64, f64)> {
    let mut grid: Vec<f64> = p_grid.to_vec();
    if grid.len() < 2 || grid.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::OutOfRange(
            "power grid needs at least two positive values".into(),
        ));
    }
    grid.sort_by(f64::total_cmp);
    let (lo, hi) = (grid[grid.len() - 2], grid[grid.len() - 1]);
    if hi <= lo {
        return Err(Error::OutOfRange(
            "power grid has no spread at the top".into(),
        ));
    }
    let r_lo = rates(ch, &pair.with_power(lo))?;
    let r_hi = rates(ch, &pair.with_power(hi))?;
    let dx = hi.log2() - lo.log2();
    Ok((
        (r_hi.rs1() - r_lo.rs1()) / dx,
        (r_hi.rs2() - r_lo.rs2()) / dx,
    ))
}
