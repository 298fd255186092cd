//! Per-subset precoding bases and assembly of precoder pairs for a target
//! secrecy degrees-of-freedom point.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jsonio;
use crate::matcore::{self, ComplexMatrix};
use crate::region::{self, AntennaConfig, SdofPoint, SubsetDims};
use crate::verifier;

/// The six channel matrices. `hij` maps source `j` to destination `i`;
/// `gj` maps source `j` to the eavesdropper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    #[serde(with = "jsonio::matrix")]
    pub h11: ComplexMatrix,
    #[serde(with = "jsonio::matrix")]
    pub h12: ComplexMatrix,
    #[serde(with = "jsonio::matrix")]
    pub h21: ComplexMatrix,
    #[serde(with = "jsonio::matrix")]
    pub h22: ComplexMatrix,
    #[serde(with = "jsonio::matrix")]
    pub g1: ComplexMatrix,
    #[serde(with = "jsonio::matrix")]
    pub g2: ComplexMatrix,
}

impl ChannelSet {
    fn all(&self) -> [(&'static str, &ComplexMatrix); 6] {
        [
            ("h11", &self.h11),
            ("h12", &self.h12),
            ("h21", &self.h21),
            ("h22", &self.h22),
            ("g1", &self.g1),
            ("g2", &self.g2),
        ]
    }

    /// Antenna counts implied by the matrix shapes.
    pub fn config(&self) -> Result<AntennaConfig> {
        let cfg = AntennaConfig {
            ns1: self.h11.ncols(),
            ns2: self.h22.ncols(),
            nd1: self.h11.nrows(),
            nd2: self.h22.nrows(),
            ne: self.g1.nrows(),
        };
        let expect = [
            ("h11", (cfg.nd1, cfg.ns1)),
            ("h12", (cfg.nd1, cfg.ns2)),
            ("h21", (cfg.nd2, cfg.ns1)),
            ("h22", (cfg.nd2, cfg.ns2)),
            ("g1", (cfg.ne, cfg.ns1)),
            ("g2", (cfg.ne, cfg.ns2)),
        ];
        for ((name, m), (_, shape)) in self.all().iter().zip(expect) {
            if m.shape() != shape {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    shape.0,
                    shape.1
                )));
            }
        }
        cfg.validate()
            .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
        for (name, m) in self.all() {
            if !matcore::is_finite(m) {
                return Err(Error::DegenerateInput(format!(
                    "{name} has non-finite entries"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn is_full_rank(&self) -> bool {
        self.all()
            .iter()
            .all(|(_, m)| matcore::rank(m) == m.nrows().min(m.ncols()))
    }

    /// Every matrix scaled to unit Frobenius norm.
    pub fn normalized(&self) -> ChannelSet {
        let unit = |m: &ComplexMatrix| {
            let n = m.norm();
            if n > 0.0 {
                m.unscale(n)
            } else {
                m.clone()
            }
        };
        ChannelSet {
            h11: unit(&self.h11),
            h12: unit(&self.h12),
            h21: unit(&self.h21),
            h22: unit(&self.h22),
            g1: unit(&self.g1),
            g2: unit(&self.g2),
        }
    }
}

/// Precoder directions `V`, `W` and the per-source power budget.
///
/// Columns of `v` and `w` are stream directions. Column `i < Kv` of `w` is
/// the partner of column `i` of `v` (zero when the stream needs no partner).
/// The transmitted matrices rescale every nonzero column to carry an equal
/// share of `power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecoderPair {
    #[serde(with = "jsonio::matrix")]
    pub v: ComplexMatrix,
    #[serde(with = "jsonio::matrix")]
    pub w: ComplexMatrix,
    pub power: f64,
}

fn equal_power(m: &ComplexMatrix, power: f64) -> ComplexMatrix {
    let norms: Vec<f64> = m.column_iter().map(|c| c.norm()).collect();
    let active = norms.iter().filter(|&&n| n > 0.0).count();
    if active == 0 {
        return m.clone();
    }
    let per = (power / active as f64).sqrt();
    matcore::scale_columns(
        m,
        norms.iter().map(|&n| if n > 0.0 { per / n } else { 0.0 }),
    )
}

impl PrecoderPair {
    pub fn new(v: ComplexMatrix, w: ComplexMatrix, power: f64) -> Self {
        PrecoderPair { v, w, power }
    }

    pub fn kv(&self) -> usize {
        self.v.ncols()
    }

    pub fn kw(&self) -> usize {
        self.w.ncols()
    }

    /// `V` as transmitted: `tr(V V^H) = power` unless the source is silent.
    pub fn v_tx(&self) -> ComplexMatrix {
        equal_power(&self.v, self.power)
    }

    pub fn w_tx(&self) -> ComplexMatrix {
        equal_power(&self.w, self.power)
    }

    pub fn with_power(&self, power: f64) -> PrecoderPair {
        PrecoderPair {
            power,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubsetId {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl SubsetId {
    pub const ALL: [SubsetId; 6] = [
        SubsetId::I,
        SubsetId::II,
        SubsetId::III,
        SubsetId::IV,
        SubsetId::V,
        SubsetId::VI,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn expected_width(self, d: &SubsetDims) -> usize {
        d.as_array()[self.index()]
    }
}

/// Linearly independent pairs of one subset; `w_basis` is `Ns2 x 0`-wide
/// only in spirit for subsets I and II, where it holds zero columns.
#[derive(Debug, Clone)]
pub struct SubsetBasis {
    pub id: SubsetId,
    pub v_basis: ComplexMatrix,
    pub w_basis: ComplexMatrix,
}

impl SubsetBasis {
    pub fn width(&self) -> usize {
        self.v_basis.ncols()
    }
}

/// All six subset bases, each checked against its expected width.
#[derive(Debug, Clone)]
pub struct SubsetBases {
    pub config: AntennaConfig,
    pub bases: [SubsetBasis; 6],
}

impl SubsetBases {
    pub fn get(&self, id: SubsetId) -> &SubsetBasis {
        &self.bases[id.index()]
    }
}

fn shared_coordinates_excluding(
    x2: &ComplexMatrix,
    taken_images: &ComplexMatrix,
    width: usize,
) -> ComplexMatrix {
    let s = x2.ncols();
    if taken_images.ncols() == 0 {
        return ComplexMatrix::identity(s, s);
    }
    let coords = matcore::lstsq(x2, taken_images);
    matcore::orth_complement_exact(&coords, width.min(s))
}

/// Builds the six subset bases from normalized copies of the channels.
pub fn subset_bases(ch: &ChannelSet) -> Result<SubsetBases> {
    let cfg = ch.config()?;
    let dims = region::subset_dims(&cfg);
    let n = ch.normalized();
    // paired w columns must satisfy G1 v = G2 w for the original channels
    let w_fix = Complex64::new(ch.g1.norm() / ch.g2.norm().max(f64::MIN_POSITIVE), 0.0);
    let zero_w = |k: usize| ComplexMatrix::zeros(cfg.ns2, k);

    let null_g1 = matcore::null_basis(&n.g1);
    let null_h21 = matcore::null_basis(&n.h21);
    let null_h12 = matcore::null_basis(&n.h12);

    // I and II split null(G1) by whether H21 v vanishes.
    let inner = matcore::null_basis(&(&n.h21 * &null_g1));
    let v1 = &null_g1 * &inner;
    let v2 = &null_g1 * matcore::orth_complement(&inner);

    // III: G1 Γ(H21) against G2 Γ(H12).
    let g3 = matcore::gsvd(&(&n.g1 * &null_h21), &(&n.g2 * &null_h12))?;
    let v3 = &null_h21 * g3.shared_a();
    let w3 = &null_h12 * g3.shared_b();
    let img3 = &n.g1 * &v3;

    // IV: G1 against G2 Γ(H12), images of III removed.
    let g4 = matcore::gsvd(&n.g1, &(&n.g2 * &null_h12))?;
    let y4 = shared_coordinates_excluding(&g4.x2(), &img3, g4.s.saturating_sub(img3.ncols()));
    let v4 = g4.shared_a() * &y4;
    let w4 = &null_h12 * g4.shared_b() * &y4;
    let img4 = &n.g1 * &v4;

    // V: G1 Γ(H21) against G2, images of III removed.
    let g5 = matcore::gsvd(&(&n.g1 * &null_h21), &n.g2)?;
    let y5 = shared_coordinates_excluding(&g5.x2(), &img3, g5.s.saturating_sub(img3.ncols()));
    let v5 = &null_h21 * g5.shared_a() * &y5;
    let w5 = g5.shared_b() * &y5;
    let img5 = &n.g1 * &v5;

    // VI: G1 against G2, images of III, IV and V removed.
    let g6 = matcore::gsvd(&n.g1, &n.g2)?;
    let taken = matcore::hcat_all(cfg.ne, &[&img3, &img4, &img5]);
    let taken_rank = matcore::rank(&taken);
    let y6 = shared_coordinates_excluding(&g6.x2(), &taken, g6.s.saturating_sub(taken_rank));
    let v6 = g6.shared_a() * &y6;
    let w6 = g6.shared_b() * &y6;

    let basis = |id, v: ComplexMatrix, w: ComplexMatrix| SubsetBasis {
        id,
        v_basis: v,
        w_basis: w * w_fix,
    };
    let bases = [
        basis(SubsetId::I, v1.clone(), zero_w(v1.ncols())),
        basis(SubsetId::II, v2.clone(), zero_w(v2.ncols())),
        basis(SubsetId::III, v3, w3),
        basis(SubsetId::IV, v4, w4),
        basis(SubsetId::V, v5, w5),
        basis(SubsetId::VI, v6, w6),
    ];
    for b in &bases {
        let want = b.id.expected_width(&dims);
        if b.width() != want {
            return Err(Error::ConstructionDeficit(format!(
                "subset {:?} offers {} pairs, expected {}",
                b.id,
                b.width(),
                want
            )));
        }
    }
    Ok(SubsetBases { config: cfg, bases })
}

/// The basis of a single subset.
pub fn subset_basis(ch: &ChannelSet, id: SubsetId) -> Result<SubsetBasis> {
    Ok(subset_bases(ch)?.bases[id.index()].clone())
}

/// Number of pairs taken from each subset for a target first coordinate.
pub fn selection_counts(cfg: &AntennaConfig, d1: usize) -> Result<[usize; 6]> {
    let d = region::subset_dims(cfg);
    let ym = region::y_max(cfg, d1);
    let u = d1.min(ym.min(d.d5) + d.d1 + d.d3);
    let mut counts = [0usize; 6];
    let mut take = |rem: &mut usize, id: SubsetId, cap: usize| {
        let n = (*rem).min(cap);
        counts[id.index()] = n;
        *rem -= n;
        n
    };
    let mut rem = u;
    take(&mut rem, SubsetId::I, d.d1);
    take(&mut rem, SubsetId::III, d.d3);
    let n5 = take(&mut rem, SubsetId::V, d.d5.min(ym));
    let mut rem_e = d1 - u + rem;
    take(&mut rem_e, SubsetId::II, d.d2);
    take(&mut rem_e, SubsetId::IV, d.d4);
    take(&mut rem_e, SubsetId::VI, d.d6.min(ym - n5));
    if rem_e > 0 {
        return Err(Error::ConstructionDeficit(format!(
            "subsets cannot supply {d1} streams for the first user"
        )));
    }
    Ok(counts)
}

/// Builds a precoder pair achieving `target` on the given channels.
pub fn construct(ch: &ChannelSet, target: SdofPoint, power: f64) -> Result<PrecoderPair> {
    let cfg = ch.config()?;
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::OutOfRange(format!(
            "power must be positive, got {power}"
        )));
    }
    let (x, y) = (target.d1, target.d2);
    let feasible = x <= region::su1(&cfg) && y <= region::d2_max(&cfg, x)?;
    if !feasible {
        return Err(Error::TargetInfeasible { d1: x, d2: y });
    }

    let pair = if x == 0 {
        let (_, r) = matcore::right_svd(&ch.h22);
        PrecoderPair::new(
            ComplexMatrix::zeros(cfg.ns1, 0),
            r.columns(0, y).into_owned(),
            power,
        )
    } else {
        assemble(ch, &cfg, x, y, power)?
    };

    let got = verifier::sdof_of(ch, &pair)?;
    if got.d1 != x || got.d2 < y {
        return Err(Error::ConstructionDeficit(format!(
            "assembled pair achieves ({}, {}), target ({x}, {y})",
            got.d1, got.d2
        )));
    }
    Ok(pair)
}

fn assemble(
    ch: &ChannelSet,
    cfg: &AntennaConfig,
    x: usize,
    y: usize,
    power: f64,
) -> Result<PrecoderPair> {
    let subsets = subset_bases(ch)?;
    let counts = selection_counts(cfg, x)?;
    let order = [
        SubsetId::I,
        SubsetId::III,
        SubsetId::V,
        SubsetId::II,
        SubsetId::IV,
        SubsetId::VI,
    ];
    let mut vs = Vec::new();
    let mut ws = Vec::new();
    for id in order {
        let b = subsets.get(id);
        let k = counts[id.index()];
        vs.push(b.v_basis.columns(0, k).into_owned());
        ws.push(b.w_basis.columns(0, k).into_owned());
    }
    let v = matcore::hcat_all(cfg.ns1, &vs.iter().collect::<Vec<_>>());
    let w1 = matcore::hcat_all(cfg.ns2, &ws.iter().collect::<Vec<_>>());

    let missing = y.saturating_sub(matcore::rank(&w1));
    let w = if missing == 0 {
        w1
    } else {
        // fill from null(H12) first, away from directions W1 already uses
        let null_h12 = matcore::null_basis(&ch.normalized().h12);
        let pos = |id| order.iter().position(|&o| o == id).expect("listed");
        let used = matcore::hcat(&ws[pos(SubsetId::III)], &ws[pos(SubsetId::IV)]);
        let used_coords = null_h12.adjoint() * &used;
        let q = matcore::rank(&used_coords);
        let free = null_h12.ncols().saturating_sub(q);
        let from_null = missing.min(free);
        let fresh = if used.ncols() == 0 {
            null_h12.clone()
        } else {
            &null_h12 * matcore::orth_complement_exact(&used_coords, free)
        };
        let (_, r) = matcore::right_svd(&ch.h22);
        let rest = missing - from_null;
        matcore::hcat_all(
            cfg.ns2,
            &[
                &w1,
                &fresh.columns(0, from_null).into_owned(),
                &r.columns(0, rest).into_owned(),
            ],
        )
    };
    Ok(PrecoderPair::new(v, w, power))
}

/// Largest condition number accepted for random right factors.
pub const MAX_CONDITION: f64 = 1e6;

/// Whether a square factor is invertible with condition number at most
/// [`MAX_CONDITION`].
pub fn acceptable_factor(m: &ComplexMatrix) -> bool {
    let k = m.nrows();
    if k != m.ncols() {
        return false;
    }
    if k == 0 {
        return true;
    }
    let s = matcore::singular_values(m);
    s[k - 1] > 0.0 && s[0] / s[k - 1] <= MAX_CONDITION
}

/// Standard complex Gaussian `k x k` factor, redrawn until acceptable.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, k: usize) -> ComplexMatrix {
    loop {
        let m = ComplexMatrix::from_fn(k, k, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        });
        if acceptable_factor(&m) {
            return m;
        }
    }
}

/// `(V A, W B)` for square invertible `A`, `B`.
pub fn right_multiply(
    pair: &PrecoderPair,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<PrecoderPair> {
    if a.shape() != (pair.kv(), pair.kv()) || b.shape() != (pair.kw(), pair.kw()) {
        return Err(Error::DimensionMismatch(format!(
            "right factors must be {0}x{0} and {1}x{1}",
            pair.kv(),
            pair.kw()
        )));
    }
    Ok(PrecoderPair::new(&pair.v * a, &pair.w * b, pair.power))
}

/// Right-multiplies `V` and `W` by random well-conditioned invertible
/// matrices; spans and the achieved pair are unchanged.
pub fn randomize<R: Rng + ?Sized>(pair: &PrecoderPair, rng: &mut R) -> PrecoderPair {
    let a = random_invertible(rng, pair.kv());
    let b = random_invertible(rng, pair.kw());
    right_multiply(pair, &a, &b).expect("factor shapes match")
}
