//! Curve description files.
//!
//! The input format is TOML with exact integers only: a backend tag, the
//! field size, and either factor coefficients (hyperelliptic) or per-degree
//! split/inert counts (synthetic).  Loading assembles the validated
//! [`PlaceTable`] and, for the geometric backend, keeps the cover so the
//! divisor and section machinery stays available downstream.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::arith::gf::{FieldError, GfField};
use crate::arith::poly::Poly;

use super::hyper::{HyperCover, ModelError};
use super::synthetic::{PlaceTable, TableError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("cannot parse curve file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("q = {0} is not a prime power")]
    BadFieldSize(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("hyperelliptic backend needs f1 and f2 coefficient lists")]
    MissingFactors,
    #[error("synthetic backend needs genus plus split and inert tables")]
    MissingTables,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Hyperelliptic,
    Synthetic,
}

/// Deserialized description, before any validation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub backend: Backend,
    pub q: u32,
    /// Factor coefficients, constant term first; reduced mod q, so negative
    /// integers are fine.
    pub f1: Option<Vec<i64>>,
    pub f2: Option<Vec<i64>>,
    pub genus: Option<u32>,
    /// Per-degree place counts, `split[d-1]` entries of degree d.
    pub split: Option<Vec<u64>>,
    pub inert: Option<Vec<u64>>,
    /// Seed for the randomized factorization splittings; a fixed default
    /// keeps reports byte-stable.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Requested place-table depth; never below the validation depth 4g-2.
    pub max_degree: Option<u32>,
}

fn default_seed() -> u64 {
    0x00c0ffee
}

/// A loaded curve: the place table every zeta-level computation consumes,
/// plus the explicit cover when one exists.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub table: PlaceTable,
    pub hyper: Option<HyperCover>,
}

pub fn curve_from_spec(spec: &CurveSpec) -> Result<CurveData, SpecError> {
    match spec.backend {
        Backend::Hyperelliptic => {
            let (Some(c1), Some(c2)) = (&spec.f1, &spec.f2) else {
                return Err(SpecError::MissingFactors);
            };
            let (p, k) = split_prime_power(spec.q).ok_or(SpecError::BadFieldSize(spec.q))?;
            let field = GfField::new(p, k)?;
            let f1 = Poly::from_ints(&field, c1);
            let f2 = Poly::from_ints(&field, c2);
            let cover = HyperCover::new(field, f1, f2, spec.seed)?;
            let floor = 4 * cover.genus() - 2;
            let depth = spec.max_degree.unwrap_or(floor).max(floor);
            let table = PlaceTable::from_hyper(&cover, depth)?;
            Ok(CurveData { table, hyper: Some(cover) })
        }
        Backend::Synthetic => {
            let (Some(genus), Some(s), Some(i)) = (spec.genus, &spec.split, &spec.inert) else {
                return Err(SpecError::MissingTables);
            };
            let table = PlaceTable::synthetic(spec.q, genus, s, i)?;
            Ok(CurveData { table, hyper: None })
        }
    }
}

pub fn load_curve(path: &Path) -> Result<CurveData, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError::Io(path.display().to_string(), e))?;
    let spec: CurveSpec = toml::from_str(&text)?;
    curve_from_spec(&spec)
}

fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut k = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}
