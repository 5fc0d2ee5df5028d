//! Checksummed big-integer polynomial fixture for the ATM chain.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::sturm::Bound;
use crate::poly::{eval_bigint, parse_bigint_lines, BigIntPoly, RootLocation, SturmChain};
use crate::rational::Rational;

pub const ATM_FIXTURE: &str = include_str!("../fixtures/atm_n8.txt");
pub const ATM_METADATA: &str = include_str!("../fixtures/atm_n8.json");
pub const ATM_SHA256: &str = "0fb04f38166dcb5dc36496804ce62dcde0e0d07c96c6d45bb8dd9fd632497cc5";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMetadata {
    pub name: String,
    pub family: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub variable: String,
    pub meaning: String,
    pub stated_degree_label: usize,
    pub actual_degree: usize,
    pub degree_note: String,
    pub expected_root: String,
    pub coefficient_order: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtmFixtureReport {
    pub sha256: String,
    pub degree: usize,
    pub stated_degree_label: usize,
    #[serde(serialize_with = "as_string")]
    pub root: BigInt,
    /// `p(root)`; zero iff the fixture vanishes there.
    #[serde(serialize_with = "as_string")]
    pub residual: BigInt,
    pub vanishes: bool,
    #[serde(serialize_with = "as_string")]
    pub constant_term: BigInt,
    /// Sturm count of distinct real roots on `(0, ∞)`.
    pub positive_real_roots: usize,
    pub positive_root_locations: Vec<RootLocation>,
}

fn as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn verify_checksum(text: &str, expected: &str) -> Result<()> {
    let got = sha256_hex(text);
    if got != expected {
        return Err(Error::Fixture(format!("checksum mismatch: expected {expected}, got {got}")));
    }
    Ok(())
}

pub fn metadata() -> Result<FixtureMetadata> {
    serde_json::from_str(ATM_METADATA).map_err(|e| Error::Fixture(e.to_string()))
}

/// The fixture polynomial after checksum verification.
pub fn load_atm_fixture() -> Result<BigIntPoly> {
    load_checked(ATM_FIXTURE, ATM_SHA256)
}

pub fn load_checked(text: &str, sha256: &str) -> Result<BigIntPoly> {
    verify_checksum(text, sha256)?;
    parse_bigint_lines(text).map_err(|e| Error::Fixture(e.to_string()))
}

pub fn verify_atm_fixture() -> Result<AtmFixtureReport> {
    verify_fixture_text(ATM_FIXTURE, ATM_SHA256)
}

/// Evaluates the fixture at its expected root and counts its positive real
/// roots; the count is reported, never assumed.
pub fn verify_fixture_text(text: &str, sha256: &str) -> Result<AtmFixtureReport> {
    let p = load_checked(text, sha256)?;
    let meta = metadata()?;
    let root: BigInt = meta.expected_root.parse().map_err(|_| Error::Fixture("bad expected root".into()))?;
    let residual = eval_bigint(&p, &root);
    let chain = SturmChain::new(&p);
    let positive_real_roots = chain.count(&Bound::At(Rational::zero()), &Bound::PosInf);
    let width = Rational::new(1.into(), 1_000_000.into());
    let positive_root_locations = chain
        .isolate(&width)
        .into_iter()
        .filter(|r| r.approx() > 0.0)
        .collect();
    Ok(AtmFixtureReport {
        sha256: sha256.to_string(),
        degree: p.degree().unwrap_or(0),
        stated_degree_label: meta.stated_degree_label,
        vanishes: residual.is_zero(),
        root,
        residual,
        constant_term: p.coeff(0),
        positive_real_roots,
        positive_root_locations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_and_shape() {
        let p = load_atm_fixture().unwrap();
        assert_eq!(p.degree(), Some(17));
        assert_eq!(p.leading().unwrap(), &BigInt::from(314432));
        let meta = metadata().unwrap();
        assert_eq!(meta.actual_degree, 17);
        assert_eq!(meta.stated_degree_label, 16);
    }

    #[test]
    fn constant_term_at_zero() {
        let p = load_atm_fixture().unwrap();
        let c: BigInt = "153712881941946532798614648361265167".parse().unwrap();
        assert_eq!(eval_bigint(&p, &BigInt::zero()), c);
    }

    #[test]
    fn residual_at_expected_root() {
        // Value cross-checked with a computer algebra system.
        let r = verify_atm_fixture().unwrap();
        let expected: BigInt = "2272108736836039967675945815680000000".parse().unwrap();
        assert_eq!(r.residual, expected);
        assert!(!r.vanishes);
    }

    #[test]
    fn positive_roots_are_counted() {
        let r = verify_atm_fixture().unwrap();
        assert_eq!(r.positive_real_roots, 4);
        let approx: Vec<f64> = r.positive_root_locations.iter().map(RootLocation::approx).collect();
        for (got, want) in approx.iter().zip([0.4193, 5.3542, 1354.68, 18028.17]) {
            assert!((got - want).abs() / want < 1e-3, "{approx:?}");
        }
    }

    #[test]
    fn corruption_is_detected() {
        let corrupted = ATM_FIXTURE.replacen("314432", "314433", 1);
        assert!(matches!(verify_fixture_text(&corrupted, ATM_SHA256), Err(Error::Fixture(_))));
        assert!(matches!(load_checked(ATM_FIXTURE, "00"), Err(Error::Fixture(_))));
    }
}
