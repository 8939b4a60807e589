//! JSON shape of certificates. Big integers travel as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use cyclicpair::family::{Certificate, Check};
use cyclicpair::ffield::{self, FieldElem};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Tool { name: "cyclicpair".into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// Defining polynomials of `F_{q²}` and `F_{q⁴}` over `F_q`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub quadratic: Vec<u64>,
    pub quartic: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionIDoc {
    pub holds: bool,
    /// `(L_m0 F_n0 - 2F_m0)·b mod p²`
    pub witness: u64,
    pub norm_gap_mod_p5: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionIIDoc {
    pub level: Option<u8>,
    /// Coefficient vector over `F_q`, constant term first; its length is the level.
    pub root: Option<Vec<u64>>,
    pub roots: Vec<Vec<u64>>,
    pub pth_power_check: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: String,
    pub tool: Tool,
    pub p: u64,
    pub t: String,
    pub b: String,
    pub q: u64,
    pub m0: i64,
    pub n0: i64,
    pub nq: u64,
    pub parity_check: bool,
    pub least_family_n: i64,
    /// Leading coefficient first.
    pub quartic_mod_q: [u64; 5],
    pub condition_i: ConditionIDoc,
    pub condition_ii: ConditionIIDoc,
    pub tower: Tower,
    pub passed: bool,
    pub failure: Option<String>,
}

fn check_from_name(name: &str) -> Option<Check> {
    [Check::Parity, Check::ConditionI, Check::ConditionII, Check::PthPower]
        .into_iter()
        .find(|c| c.name() == name)
}

fn parse_int(field: &str, s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("{field}: not an integer: {s:?}"))
}

impl CertificateDocument {
    pub fn from_certificate(c: &Certificate) -> Self {
        CertificateDocument {
            schema_version: SCHEMA_VERSION.into(),
            tool: Tool::current(),
            p: c.p,
            t: c.t.to_string(),
            b: c.b.to_string(),
            q: c.q,
            m0: c.m0,
            n0: c.n0,
            nq: c.nq,
            parity_check: c.parity_check,
            least_family_n: c.least_family_n,
            quartic_mod_q: c.quartic_mod_q,
            condition_i: ConditionIDoc {
                holds: c.condition_i,
                witness: c.condition_i_witness,
                norm_gap_mod_p5: c.norm_gap_mod_p5,
            },
            condition_ii: ConditionIIDoc {
                level: c.level,
                root: c.root.as_ref().map(|r| r.coeffs.clone()),
                roots: c.roots.iter().map(|r| r.coeffs.clone()).collect(),
                pth_power_check: c.pth_power_check,
            },
            tower: Tower { quadratic: c.quadratic_poly.clone(), quartic: c.quartic_poly.clone() },
            passed: c.passed(),
            failure: c.failure.map(|f| f.name().to_string()),
        }
    }

    /// Rebuilds the library certificate; fails on malformed fields only.
    pub fn to_certificate(&self) -> Result<Certificate, String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {:?}", self.schema_version));
        }
        let tower = ffield::make_tower(self.q).map_err(|e| e.to_string())?;
        let elem = |coeffs: &Vec<u64>| -> Result<FieldElem, String> {
            let level = u8::try_from(coeffs.len()).map_err(|_| "root too long".to_string())?;
            tower.element(level, coeffs).map_err(|e| e.to_string())
        };
        let failure = match &self.failure {
            None => None,
            Some(name) => Some(check_from_name(name).ok_or(format!("unknown check {name:?}"))?),
        };
        Ok(Certificate {
            p: self.p,
            t: parse_int("t", &self.t)?,
            b: parse_int("b", &self.b)?,
            q: self.q,
            m0: self.m0,
            n0: self.n0,
            nq: self.nq,
            quartic_mod_q: self.quartic_mod_q,
            condition_i_witness: self.condition_i.witness,
            condition_i: self.condition_i.holds,
            norm_gap_mod_p5: self.condition_i.norm_gap_mod_p5,
            level: self.condition_ii.level,
            root: self.condition_ii.root.as_ref().map(elem).transpose()?,
            roots: self.condition_ii.roots.iter().map(elem).collect::<Result<_, _>>()?,
            pth_power_check: self.condition_ii.pth_power_check,
            parity_check: self.parity_check,
            least_family_n: self.least_family_n,
            quadratic_poly: self.tower.quadratic.clone(),
            quartic_poly: self.tower.quartic.clone(),
            failure,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclicpair::family::certify;

    #[test]
    fn round_trip() {
        for (p, m0, n0, q) in [(13, 15, 55, 53), (5, 1, 97, 61), (5, 7, 33, 11)] {
            let cert = certify(p, m0, n0, q).unwrap();
            let doc = CertificateDocument::from_certificate(&cert);
            let text = serde_json::to_string(&doc).unwrap();
            let back: CertificateDocument = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_certificate().unwrap(), cert);
        }
    }

    #[test]
    fn rejects_unknown_schema() {
        let cert = certify(5, 1, 97, 61).unwrap();
        let mut doc = CertificateDocument::from_certificate(&cert);
        doc.schema_version = "2".into();
        assert!(doc.to_certificate().is_err());
    }
}
