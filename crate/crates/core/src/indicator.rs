//! Normalized Frobenius-Schur indicators and the real-element count.
//!
//! `ν(ψ) = m_ψ / (n ψ(b_0)) · Σ_i ψ(b_i²) / δ_i` with
//! `ψ(b_i²) = Σ_k λ_iik ψ(b_k)`, read from the structure constants and the
//! character row only.

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decomp::CharacterTable;
use crate::degree::DegreeMap;
use crate::error::{RbaError, Result};
use crate::rba::Rba;
use crate::scalar::{Rational, Scalar};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorPattern {
    AllPlus,
    HasZero,
    HasMinus,
}

impl IndicatorPattern {
    pub fn of(nu: &[i8]) -> Self {
        if nu.contains(&-1) {
            IndicatorPattern::HasMinus
        } else if nu.contains(&0) {
            IndicatorPattern::HasZero
        } else {
            IndicatorPattern::AllPlus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub nu: Vec<i8>,
    pub raw: Vec<f64>,
    pub degrees: Vec<usize>,
    /// `Σ_ψ ν(ψ) ψ(b_0)`.
    pub s_predicted: Scalar,
    /// Number of `i` with `i* = i`.
    pub s_actual: usize,
    pub rank: usize,
    pub pattern: IndicatorPattern,
}

impl IndicatorReport {
    /// Largest `|raw - ν|`.
    pub fn max_deviation(&self) -> f64 {
        self.raw
            .iter()
            .zip(&self.nu)
            .map(|(r, &n)| (r - n as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Copy the snapped indicators into the table.
    pub fn annotate(&self, table: &mut CharacterTable) {
        for (c, &n) in table.characters.iter_mut().zip(&self.nu) {
            c.nu = Some(n);
        }
    }
}

/// Raw (unsnapped) indicator of every character in `table`.
pub fn raw_indicators(table: &CharacterTable, rba: &Rba, dm: &DegreeMap) -> Vec<Complex64> {
    let r = rba.rank();
    let n = dm.order_f64();
    let delta = dm.as_f64();
    table
        .characters
        .iter()
        .map(|ch| {
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..r {
                let sq: Complex64 = (0..r).map(|k| ch.values[k] * rba.lambda(i, i, k)).sum();
                sum += sq / delta[i];
            }
            sum * ch.multiplicity_f64() / (ch.values[0] * n)
        })
        .collect()
}

pub fn fs_indicator(table: &CharacterTable, rba: &Rba, dm: &DegreeMap, tol: &ToleranceConfig) -> Result<IndicatorReport> {
    let raw_c = raw_indicators(table, rba, dm);
    let mut nu = Vec::with_capacity(raw_c.len());
    let mut raw = Vec::with_capacity(raw_c.len());
    for (index, v) in raw_c.iter().enumerate() {
        let snapped = v.re.round();
        if v.im.abs() > tol.eps_residual || (v.re - snapped).abs() > tol.eps_residual || snapped.abs() > 1.0 {
            return Err(RbaError::IndicatorOutOfRange { index, raw: v.re });
        }
        nu.push(snapped as i8);
        raw.push(v.re);
    }
    let degrees = table.degrees();
    let s: i64 = nu.iter().zip(&degrees).map(|(&v, &d)| v as i64 * d as i64).sum();
    let rank = rba.rank();
    Ok(IndicatorReport {
        pattern: IndicatorPattern::of(&nu),
        nu,
        raw,
        degrees,
        s_predicted: Scalar::Exact(Rational::from_integer(BigInt::from(s))),
        s_actual: (0..rank).filter(|&i| rba.star(i) == i).count(),
        rank,
    })
}

/// `s = Σ_ψ ν(ψ) ψ(b_0)`.
pub fn real_count_check(report: &IndicatorReport) -> bool {
    match report.s_predicted.as_rational() {
        Some(q) => *q == Rational::from_integer(BigInt::from(report.s_actual)),
        None => false,
    }
}

/// `Σ_ψ ψ(b_0)² - Σ_ψ ν(ψ) ψ(b_0) = r - s`.
pub fn gap_identity(report: &IndicatorReport) -> bool {
    let sq: i64 = report.degrees.iter().map(|&d| (d * d) as i64).sum();
    let nd: i64 = report.nu.iter().zip(&report.degrees).map(|(&v, &d)| v as i64 * d as i64).sum();
    sq - nd == report.rank as i64 - report.s_actual as i64
}

/// `ν(ψ) = 0` exactly for characters with a nonreal value.
pub fn reality_consistent(table: &CharacterTable, report: &IndicatorReport, eps: f64) -> bool {
    table
        .characters
        .iter()
        .zip(&report.nu)
        .all(|(c, &n)| (n == 0) != c.is_real_valued(eps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePairVerdict {
    /// Index in the character table of the unique degree-2 character.
    pub character: usize,
}

/// For a noncommutative algebra with exactly one nonreal pair: exactly one
/// character has degree above 1, its degree is 2, and every indicator is 1.
pub fn classify_one_pair(
    rba: &Rba,
    table: &CharacterTable,
    report: &IndicatorReport,
    tol: &ToleranceConfig,
) -> Result<OnePairVerdict> {
    let pairs = rba.nonreal_pairs().len();
    if pairs != 1 {
        return Err(RbaError::Precondition(format!(
            "expected exactly one nonreal pair, found {pairs}"
        )));
    }
    if rba.is_commutative(tol.eps_zero) {
        return Err(RbaError::Precondition("algebra is commutative".into()));
    }
    let big: Vec<usize> = (0..table.len()).filter(|&i| table.characters[i].degree > 1).collect();
    if big.len() != 1 {
        return Err(RbaError::LemmaViolation(format!(
            "{} characters of degree > 1",
            big.len()
        )));
    }
    let d = table.characters[big[0]].degree;
    if d != 2 {
        return Err(RbaError::LemmaViolation(format!("non-linear character has degree {d}")));
    }
    if let Some(i) = report.nu.iter().position(|&v| v != 1) {
        return Err(RbaError::LemmaViolation(format!(
            "character {i} has indicator {}",
            report.nu[i]
        )));
    }
    Ok(OnePairVerdict { character: big[0] })
}

/// Class of a noncommutative rank-7 algebra with degrees `(1,1,1,2)` by its
/// number of *-invariant basis elements, checked against the indicators:
/// 5 for `ν = (1,1,1,1)`, 3 for `(1,0,0,1)`, 1 for `(1,1,1,-1)`.
pub fn rank7_class(nu: &[i8], s_actual: usize) -> Result<u8> {
    let class = match nu {
        [1, 1, 1, 1] => 5,
        [1, 0, 0, 1] => 3,
        [1, 1, 1, -1] => 1,
        _ => {
            return Err(RbaError::Inconsistency(format!(
                "indicator pattern {nu:?} is not one of the rank-7 rows"
            )))
        }
    };
    if s_actual != class as usize {
        return Err(RbaError::Inconsistency(format!(
            "indicator pattern {nu:?} predicts {class} *-invariant elements, found {s_actual}"
        )));
    }
    Ok(class)
}

pub fn rank7_trichotomy(report: &IndicatorReport) -> Result<u8> {
    if report.rank != 7 || report.degrees != [1, 1, 1, 2] {
        return Err(RbaError::Precondition(format!(
            "needs rank 7 with degrees (1,1,1,2), got rank {} with degrees {:?}",
            report.rank, report.degrees
        )));
    }
    rank7_class(&report.nu, report.s_actual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns() {
        assert_eq!(IndicatorPattern::of(&[1, 1, 1]), IndicatorPattern::AllPlus);
        assert_eq!(IndicatorPattern::of(&[1, 0, 0, 1]), IndicatorPattern::HasZero);
        assert_eq!(IndicatorPattern::of(&[1, 1, 1, -1]), IndicatorPattern::HasMinus);
    }

    #[test]
    fn rank7_rows() {
        assert_eq!(rank7_class(&[1, 1, 1, 1], 5).unwrap(), 5);
        assert_eq!(rank7_class(&[1, 0, 0, 1], 3).unwrap(), 3);
        assert_eq!(rank7_class(&[1, 1, 1, -1], 1).unwrap(), 1);
        assert!(rank7_class(&[1, 1, 1, -1], 3).is_err());
        assert!(rank7_class(&[1, -1, 1, 1], 1).is_err());
    }
}
