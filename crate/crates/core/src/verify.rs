//! Reference-table checks over the catalog.

use std::fmt;

use crate::catalog::{CatalogEntry, Reference};
use crate::detlike::Statistics;
use crate::error::{Error, Result};
use crate::oracle::post_select_bruteforce;
use crate::slocc::{fidelity, post_select};

/// Formats with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.11}", 0.0);
    }
    // exponent after rounding, so 0.9999999999999 prints as 1.00000000000
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    let decimals = 11 - exp;
    if (0..=20).contains(&decimals) {
        format!("{x:.prec$}", prec = decimals as usize)
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub name: String,
    pub n: usize,
    pub stats: Statistics,
    pub expected_fidelity: f64,
    pub fidelity: f64,
    pub fidelity_tol: f64,
    pub expected_probability: f64,
    pub probability: f64,
    pub probability_tol: f64,
    /// Published values that were replaced by the oracle reference.
    pub published: Vec<f64>,
    pub note: Option<String>,
}

impl VerifyRow {
    pub fn passed(&self) -> bool {
        (self.fidelity - self.expected_fidelity).abs() <= self.fidelity_tol
            && (self.probability - self.expected_probability).abs() <= self.probability_tol
    }

    /// Oracle-adjudicated rows are flagged for the reader.
    pub fn is_info(&self) -> bool {
        self.note.is_some()
    }
}

impl fmt::Display for VerifyRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<15} n={:<2} {:<7}  F expected {:<14} computed {:<14}  P expected {:<14} computed {:<14}  {}",
            self.name,
            self.n,
            self.stats.as_str(),
            sig12(self.expected_fidelity),
            sig12(self.fidelity),
            sig12(self.expected_probability),
            sig12(self.probability),
            if self.passed() { "PASS" } else { "FAIL" },
        )?;
        if let Some(note) = &self.note {
            write!(f, "  INFO: {note}")?;
            if !self.published.is_empty() {
                let p: Vec<String> = self.published.iter().map(|x| x.to_string()).collect();
                write!(f, " [published: {}]", p.join(", "))?;
            }
        }
        Ok(())
    }
}

fn reference_value(r: &Reference, oracle_p: impl FnOnce() -> Result<f64>) -> Result<(f64, Vec<f64>)> {
    match r {
        Reference::Exact(x) | Reference::Rounded(x) => Ok((*x, Vec::new())),
        Reference::Oracle { published } => Ok((oracle_p()?, published.clone())),
    }
}

/// Computes one row; vanishing post-selection counts as `F = P = 0`.
pub fn check(entry: &CatalogEntry) -> Result<VerifyRow> {
    let expected = entry
        .expected
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig(format!("catalog entry `{}` has no reference values", entry.name)))?;
    let (f, p) = match post_select(&entry.scheme) {
        Ok(out) => (fidelity(&out, &expected.target)?, out.probability),
        Err(Error::VanishingState) => (0.0, 0.0),
        Err(e) => return Err(e),
    };
    let oracle_p = || -> Result<f64> {
        match post_select_bruteforce(&entry.scheme) {
            Ok(out) => Ok(out.probability),
            Err(Error::VanishingState) => Ok(0.0),
            Err(e) => Err(e),
        }
    };
    let (ef, _) = reference_value(&expected.fidelity, || {
        Err(Error::InvalidConfig("fidelity references must be numeric".into()))
    })?;
    let (ep, published) = reference_value(&expected.probability, oracle_p)?;
    Ok(VerifyRow {
        name: entry.name.clone(),
        n: entry.n,
        stats: entry.stats,
        expected_fidelity: ef,
        fidelity: f,
        fidelity_tol: expected.fidelity.tolerance(),
        expected_probability: ep,
        probability: p,
        probability_tol: expected.probability.tolerance(),
        published,
        note: expected.note.clone(),
    })
}

pub fn run(entries: &[CatalogEntry]) -> Result<Vec<VerifyRow>> {
    entries.iter().map(check).collect()
}
