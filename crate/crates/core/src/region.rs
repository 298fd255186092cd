//! Integer arithmetic on antenna counts: subset dimensions, single-user
//! points, the strict boundary of the achievable region and its end points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Antenna counts at the two sources, the two destinations and the
/// eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub ns1: usize,
    pub ns2: usize,
    pub nd1: usize,
    pub nd2: usize,
    pub ne: usize,
}

impl AntennaConfig {
    pub fn new(ns1: usize, ns2: usize, nd1: usize, nd2: usize, ne: usize) -> Result<Self> {
        let cfg = AntennaConfig {
            ns1,
            ns2,
            nd1,
            nd2,
            ne,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.ns1, self.ns2, self.nd1, self.nd2, self.ne].contains(&0) {
            return Err(Error::OutOfRange(format!(
                "antenna counts must be positive, got {self:?}"
            )));
        }
        Ok(())
    }

    fn signed(&self) -> [i64; 5] {
        [self.ns1, self.ns2, self.nd1, self.nd2, self.ne].map(|v| v as i64)
    }
}

impl std::fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.ns1, self.ns2, self.nd1, self.nd2, self.ne
        )
    }
}

fn parse_counts<const N: usize>(s: &str) -> Result<[usize; N]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::OutOfRange(format!(
            "expected {N} comma-separated integers, got {s:?}"
        )));
    }
    let mut out = [0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .parse()
            .map_err(|_| Error::OutOfRange(format!("not a non-negative integer: {p:?}")))?;
    }
    Ok(out)
}

/// Parses `"ns1,ns2,nd1,nd2,ne"`.
impl std::str::FromStr for AntennaConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let [ns1, ns2, nd1, nd2, ne] = parse_counts::<5>(s)?;
        AntennaConfig::new(ns1, ns2, nd1, nd2, ne)
    }
}

/// Counts of linearly independent precoding pairs per subset.
///
/// Each subset carries a triplet `(a, b, c)`: `a` signal dimensions are
/// spent at the first destination, `b = rank(w)` at the second source and
/// `c = rank(H21 v)` is the dimension penalty at the second destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetDims {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub d4: usize,
    pub d5: usize,
    pub d6: usize,
}

impl SubsetDims {
    pub const TRIPLETS: [(u8, u8, u8); 6] = [
        (1, 0, 0),
        (1, 0, 1),
        (1, 1, 0),
        (1, 1, 1),
        (2, 1, 0),
        (2, 1, 1),
    ];

    pub fn as_array(&self) -> [usize; 6] {
        [self.d1, self.d2, self.d3, self.d4, self.d5, self.d6]
    }

    pub fn total(&self) -> usize {
        self.as_array().iter().sum()
    }
}

/// A secrecy degrees-of-freedom pair `(d1, d2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SdofPoint {
    pub d1: usize,
    pub d2: usize,
}

impl SdofPoint {
    pub const fn new(d1: usize, d2: usize) -> Self {
        SdofPoint { d1, d2 }
    }
}

/// Parses `"d1,d2"`.
impl std::str::FromStr for SdofPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let [d1, d2] = parse_counts::<2>(s)?;
        Ok(SdofPoint { d1, d2 })
    }
}

impl From<(usize, usize)> for SdofPoint {
    fn from((d1, d2): (usize, usize)) -> Self {
        SdofPoint { d1, d2 }
    }
}

/// Strict boundary points ordered by decreasing `d1`, plus the single-user
/// values and the two end points of the strict boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdofRegion {
    pub config: AntennaConfig,
    pub su1: usize,
    pub su2: usize,
    pub e1: SdofPoint,
    pub e2: SdofPoint,
    pub strict_boundary: Vec<SdofPoint>,
}

impl SdofRegion {
    /// Whether `pt` lies in the region: on or below the staircase spanned by
    /// the boundary points and the two single-user points.
    pub fn contains(&self, pt: SdofPoint) -> bool {
        if pt.d1 > self.su1 || pt.d2 > self.su2 {
            return false;
        }
        if pt.d1 == 0 {
            return true;
        }
        let cfg = self.config;
        d2_max(&cfg, pt.d1).map(|m| pt.d2 <= m).unwrap_or(false)
    }
}

#[inline]
fn pos(x: i64) -> i64 {
    x.max(0)
}

fn dims_i64(cfg: &AntennaConfig) -> [i64; 6] {
    let [ns1, ns2, nd1, nd2, ne] = cfg.signed();
    let d1 = pos(ns1 - ne - nd2);
    let d2 = nd2.min(pos(ns1 - ne));
    let a0 = pos(ns1 - nd2).min(ne);
    let a1 = ns1.min(ne);
    let b0 = pos(ns2 - nd1).min(ne);
    let b1 = ns2.min(ne);
    let d3 = pos(a0 + b0 - ne);
    let d4 = pos(a1 + b0 - ne) - d3;
    let d5 = pos(a0 + b1 - ne) - d3;
    let d6 = pos(a1 + b1 - ne) - (d3 + d4 + d5);
    [d1, d2, d3, d4, d5, d6]
}

pub fn subset_dims(cfg: &AntennaConfig) -> SubsetDims {
    let d = dims_i64(cfg).map(|v| v as usize);
    SubsetDims {
        d1: d[0],
        d2: d[1],
        d3: d[2],
        d4: d[3],
        d5: d[4],
        d6: d[5],
    }
}

/// Largest achievable secrecy degrees of freedom of the first user.
pub fn su1(cfg: &AntennaConfig) -> usize {
    let d = dims_i64(cfg);
    let nd1 = cfg.nd1 as i64;
    let da1 = d[0] + d[1] + d[2] + d[3];
    let da2 = (d[4] + d[5]).min(pos(nd1 - da1) / 2);
    (da1 + da2).min(nd1) as usize
}

pub fn su2(cfg: &AntennaConfig) -> usize {
    cfg.ns2.min(cfg.nd2)
}

/// Largest number of pairs drawn from the two `a = 2` subsets.
pub fn y_max(cfg: &AntennaConfig, d1: usize) -> usize {
    let d = subset_dims(cfg);
    cfg.nd1.saturating_sub(d1).min(d.d5 + d.d6).min(d1)
}

/// Fewest columns of `V` that must reach the second destination.
pub fn z_min(cfg: &AntennaConfig, d1: usize) -> usize {
    let d = subset_dims(cfg);
    let y = y_max(cfg, d1);
    d1.saturating_sub(y.min(d.d5) + d.d1 + d.d3)
}

pub fn d2_max(cfg: &AntennaConfig, d1: usize) -> Result<usize> {
    let top = su1(cfg);
    if d1 > top {
        return Err(Error::OutOfRange(format!(
            "d1 = {d1} exceeds the largest achievable value {top}"
        )));
    }
    let z = z_min(cfg, d1);
    let eta = cfg.ns2.max(cfg.nd1);
    Ok(cfg
        .ns2
        .min(eta.saturating_sub(d1))
        .min(cfg.nd2.saturating_sub(z)))
}

/// Strict boundary of the region, walking `d1` down from its maximum until
/// the second user reaches its single-user value.
pub fn boundary(cfg: &AntennaConfig) -> SdofRegion {
    let (s1, s2) = (su1(cfg), su2(cfg));
    let mut pts = Vec::new();
    if s1 > 0 {
        let mut x = s1;
        loop {
            let y = d2_max(cfg, x).expect("d1 within range");
            pts.push(SdofPoint::new(x, y));
            if y >= s2 || x == 0 {
                break;
            }
            x -= 1;
        }
    }
    let (first, last) = match (pts.first(), pts.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (SdofPoint::new(0, s2), SdofPoint::new(0, s2)),
    };
    SdofRegion {
        config: *cfg,
        su1: s1,
        su2: s2,
        e1: first,
        e2: last,
        strict_boundary: pts,
    }
}

/// First end point: the second user's best value while the first is at its
/// maximum.
pub fn e1(cfg: &AntennaConfig) -> SdofPoint {
    let s1 = su1(cfg);
    SdofPoint::new(s1, d2_max(cfg, s1).expect("su1 is in range"))
}

/// Second end point: the first user's best value while the second is at its
/// maximum, in closed form.
pub fn e2(cfg: &AntennaConfig) -> SdofPoint {
    let [_, ns2, nd1, nd2, _] = cfg.signed();
    let d = dims_i64(cfg);
    let eta = ns2.max(nd1);
    let low = if ns2 > nd2 {
        let beta = d[4].min(pos(nd1 - d[0] - d[2]) / 2);
        (d[0] + d[2] + beta).min(eta - nd2).min(nd1)
    } else {
        let d_hat = (nd2 - ns2).min(d[1]);
        let xi = d[5].min(pos(nd2 - ns2 - d[1])) + d[4];
        let xi_star = xi.min(pos(nd1 - d[0] - d_hat) / 2);
        (d[0] + d_hat + xi_star).min(eta - ns2)
    };
    SdofPoint::new(pos(low) as usize, su2(cfg))
}

/// Closed-form value of [`su1`] for the antenna regimes that admit one.
///
/// Returns `None` when no regime matches.
pub fn su1_closed_form(cfg: &AntennaConfig) -> Option<usize> {
    let [ns1, ns2, nd1, _, ne] = cfg.signed();
    let mid2 = nd1 < ns2 && ns2 < ne + nd1;
    let v = if ns1 >= ne + nd1
        || ns2 >= ne + nd1
        || (2 * nd1 + ne - ns2 <= ns1 && ns1 < ne + nd1 && mid2)
    {
        ns1.min(nd1)
    } else if nd1 + ne - ns2 < ns1 && ns1 < 2 * nd1 + ne - ns2 && mid2 {
        let s = (nd1 + ne - ns2).min(ne) + ns2.min(ne) - ne;
        ns1 + ns2 - (nd1 + ne) + s.min((2 * nd1 + ne - ns1 - ns2) / 2)
    } else if ne < ns1 && ns1 < ne + nd1 && ns2 <= nd1 {
        let s = ns2.min(ne);
        ns1 - ne + s.min((nd1 + ne - ns1) / 2)
    } else if (ns1 <= nd1 + ne - ns2 && mid2) || (ns1 <= ne && ns2 <= nd1) {
        let s = ns1.min(ne) + ns2.min(ne) - (ns1 + ns2).min(ne);
        s.min(nd1 / 2)
    } else {
        return None;
    };
    Some(v as usize)
}
