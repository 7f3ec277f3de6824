use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Every checkable statement, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Th1,
    Th2,
    TDelta,
    PsiIdentity,
    Th2_1,
    L3_1SCount,
    U0Count,
    L4_1,
    C4_1,
    L4_2,
    L4_3A,
    L4_3B,
    QuadLeg,
    C4_2A,
    C4_2B,
    ZhangK4,
    Eq1_1,
    GaussMag,
}

impl IdentityId {
    pub const ALL: [IdentityId; 18] = [
        IdentityId::Th1,
        IdentityId::Th2,
        IdentityId::TDelta,
        IdentityId::PsiIdentity,
        IdentityId::Th2_1,
        IdentityId::L3_1SCount,
        IdentityId::U0Count,
        IdentityId::L4_1,
        IdentityId::C4_1,
        IdentityId::L4_2,
        IdentityId::L4_3A,
        IdentityId::L4_3B,
        IdentityId::QuadLeg,
        IdentityId::C4_2A,
        IdentityId::C4_2B,
        IdentityId::ZhangK4,
        IdentityId::Eq1_1,
        IdentityId::GaussMag,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Th1 => "TH1",
            IdentityId::Th2 => "TH2",
            IdentityId::TDelta => "T_DELTA",
            IdentityId::PsiIdentity => "PSI_IDENTITY",
            IdentityId::Th2_1 => "TH2_1",
            IdentityId::L3_1SCount => "L3_1_SCOUNT",
            IdentityId::U0Count => "U0_COUNT",
            IdentityId::L4_1 => "L4_1",
            IdentityId::C4_1 => "C4_1",
            IdentityId::L4_2 => "L4_2",
            IdentityId::L4_3A => "L4_3A",
            IdentityId::L4_3B => "L4_3B",
            IdentityId::QuadLeg => "QUAD_LEG",
            IdentityId::C4_2A => "C4_2A",
            IdentityId::C4_2B => "C4_2B",
            IdentityId::ZhangK4 => "ZHANG_K4",
            IdentityId::Eq1_1 => "EQ1_1",
            IdentityId::GaussMag => "GAUSS_MAG",
        }
    }

    /// Whether the statement holds for every coprime `(n, k)`, so the
    /// vary-nk stress mode may re-run it with other pairs.
    pub fn depends_on_nk(&self) -> bool {
        matches!(
            self,
            IdentityId::Th1
                | IdentityId::Th2
                | IdentityId::Th2_1
                | IdentityId::L4_1
                | IdentityId::C4_1
                | IdentityId::L4_2
                | IdentityId::C4_2A
                | IdentityId::C4_2B
        )
    }

    /// Needs an `O(p^3)` exact integer route that the cubic guard may refuse.
    pub fn is_cubic_integer(&self) -> bool {
        matches!(self, IdentityId::TDelta | IdentityId::U0Count | IdentityId::L3_1SCount)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown identity id `{0}`")]
pub struct UnknownIdentity(pub String);

impl FromStr for IdentityId {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == wanted)
            .ok_or_else(|| UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

impl Status {
    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("pass"),
            Status::Fail => f.write_str("fail"),
            Status::Skipped(reason) => write!(f, "skipped({reason})"),
        }
    }
}

impl FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pass" => Ok(Status::Pass),
            "fail" => Ok(Status::Fail),
            _ => s
                .strip_prefix("skipped(")
                .and_then(|r| r.strip_suffix(')'))
                .map(|r| Status::Skipped(r.to_string()))
                .ok_or_else(|| format!("bad status `{s}`")),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Status {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `|lhs - rhs| <= max(abs_floor, rel * |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_floor: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_floor: 1e-6, rel: 1e-9 }
    }
}

impl Tolerance {
    pub fn bound(&self, rhs_magnitude: f64) -> f64 {
        self.abs_floor.max(self.rel * rhs_magnitude.abs())
    }

    pub fn accepts(&self, lhs: f64, rhs: f64) -> bool {
        (lhs - rhs).abs() <= self.bound(rhs)
    }
}

/// One identity family checked at one prime.
///
/// `lhs`/`rhs` are the real parts of the worst instance in the family
/// (named in `detail`); `abs_err` is the complex modulus of its difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub identity: IdentityId,
    pub prime: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub status: Status,
    pub elapsed_ms: f64,
    pub n: u32,
    pub k: u32,
    pub detail: String,
    pub cache_hit: bool,
}

impl VerificationRecord {
    pub fn skipped(identity: IdentityId, prime: u32, n: u32, k: u32, reason: impl Into<String>) -> Self {
        Self {
            identity,
            prime,
            lhs: 0.0,
            rhs: 0.0,
            abs_err: 0.0,
            rel_err: 0.0,
            status: Status::Skipped(reason.into()),
            elapsed_ms: 0.0,
            n,
            k,
            detail: String::new(),
            cache_hit: false,
        }
    }
}

/// A single `lhs` vs `rhs` comparison inside a family.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub label: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Exact integer comparison: only `abs_err = 0` passes.
    pub exact: bool,
    /// Multiplier on the tolerance bound (2 for route-vs-route checks).
    pub scale: f64,
}

impl Comparison {
    pub fn float(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::complex(label, Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0))
    }

    pub fn complex(label: impl Into<String>, lhs: Complex64, rhs: Complex64) -> Self {
        Self { label: label.into(), lhs, rhs, exact: false, scale: 1.0 }
    }

    pub fn exact(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self {
            label: label.into(),
            lhs: Complex64::new(lhs as f64, 0.0),
            rhs: Complex64::new(rhs as f64, 0.0),
            exact: true,
            scale: 1.0,
        }
    }

    /// Route-vs-route agreement, allowed twice the base tolerance.
    pub fn routes(label: impl Into<String>, a: Complex64, b: Complex64) -> Self {
        Self { scale: 2.0, ..Self::complex(label, a, b) }
    }

    pub fn abs_err(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn bound(&self, tol: &Tolerance) -> f64 {
        if self.exact {
            0.0
        } else {
            self.scale * tol.bound(self.rhs.norm())
        }
    }

    pub fn passes(&self, tol: &Tolerance) -> bool {
        self.abs_err() <= self.bound(tol)
    }

    fn severity(&self, tol: &Tolerance) -> f64 {
        let err = self.abs_err();
        let bound = self.bound(tol);
        if bound == 0.0 {
            if err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            err / bound
        }
    }
}

/// Collapses a family of comparisons into one record, reporting the instance
/// closest to (or furthest past) its tolerance bound.
pub fn summarize(
    identity: IdentityId,
    prime: u32,
    n: u32,
    k: u32,
    tol: &Tolerance,
    comparisons: &[Comparison],
) -> VerificationRecord {
    assert!(!comparisons.is_empty(), "{identity}: no comparisons");
    let worst = comparisons
        .iter()
        .max_by(|a, b| a.severity(tol).total_cmp(&b.severity(tol)))
        .expect("nonempty");
    let failures = comparisons.iter().filter(|c| !c.passes(tol)).count();
    let abs_err = worst.abs_err();
    let rhs_mag = worst.rhs.norm();
    let rel_err = if rhs_mag > 0.0 { abs_err / rhs_mag } else { abs_err };
    let mut detail = format!("{} checks; worst: {}", comparisons.len(), worst.label);
    if worst.lhs.im != 0.0 || worst.rhs.im != 0.0 {
        detail.push_str(&format!(" (im lhs {:e}, im rhs {:e})", worst.lhs.im, worst.rhs.im));
    }
    if failures > 0 {
        detail.push_str(&format!("; {failures} failed"));
    }
    VerificationRecord {
        identity,
        prime,
        lhs: worst.lhs.re,
        rhs: worst.rhs.re,
        abs_err,
        rel_err,
        status: if failures == 0 { Status::Pass } else { Status::Fail },
        elapsed_ms: 0.0,
        n,
        k,
        detail,
        cache_hit: false,
    }
}
