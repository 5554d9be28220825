//! End-to-end analysis and its serializable report.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decomp::{self, CharacterTable, IdempotentResiduals};
use crate::degree::{self, DegreeMap};
use crate::error::{RbaError, Result};
use crate::indicator::{self, IndicatorReport};
use crate::integrality::{self, IntegralityReport, TwoAdicReport};
use crate::quaternion::{self, QuaternionSymbol, SplitVerdict};
use crate::rba::{FieldMode, Rba};
use crate::scalar::{snap_rational, Scalar, SNAP_MAX_DENOMINATOR};
use crate::tolerance::ToleranceConfig;
use crate::validate::{self, ValidationReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolMeta {
    pub name: String,
    pub version: String,
    pub tolerances: ToleranceConfig,
    pub mode: FieldMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbaSummary {
    pub rank: usize,
    /// Number of *-invariant basis elements.
    pub s: usize,
    pub nonreal_pairs: Vec<(usize, usize)>,
    pub order: Option<Scalar>,
    pub commutative: bool,
    pub labels: Vec<String>,
    /// The input basis was rescaled to the standard basis before analysis.
    pub standardized: bool,
}

/// A character value: a real scalar, or a complex number in float form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharValue {
    Real(Scalar),
    Complex { re: f64, im: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterEntry {
    pub degree: usize,
    pub values: Vec<CharValue>,
    pub multiplicity: Scalar,
    pub nu: Option<i8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Verdict { status: Status::Pass, detail: detail.into() }
    }
    fn fail(detail: impl Into<String>) -> Self {
        Verdict { status: Status::Fail, detail: detail.into() }
    }
    fn na(detail: impl Into<String>) -> Self {
        Verdict { status: Status::NotApplicable, detail: detail.into() }
    }
    fn from_bool(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Verdict::pass(detail)
        } else {
            Verdict::fail(detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub real_count: Verdict,
    pub gap_identity: Verdict,
    pub reality: Verdict,
    pub one_pair: Verdict,
    pub rank7: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuaternionSection {
    pub status: Status,
    pub detail: String,
    pub symbol: Option<QuaternionSymbol>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralitySection {
    pub integral: bool,
    /// First few offending entries.
    pub offending: Vec<(usize, usize, usize, Scalar)>,
    pub offending_count: usize,
    pub two_adic: Option<TwoAdicReport>,
}

/// Irreducible real *-representation of one non-linear character.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationSection {
    pub character: usize,
    pub real_dim: usize,
    /// The component is a matrix ring over ℍ; polynomials are reduced.
    pub quaternionic: bool,
    pub product_residual: f64,
    pub star_residual: f64,
    /// Per basis element, coefficients of `t^0 ..` (monic).
    pub charpolys: Vec<Vec<Scalar>>,
    pub all_rational: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub regular_rep: f64,
    pub idempotents: IdempotentResiduals,
    pub multiplicity_routes: f64,
    pub indicator_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: ToolMeta,
    pub summary: RbaSummary,
    pub validation: ValidationReport,
    pub degrees: Option<Vec<Scalar>>,
    pub characters: Vec<CharacterEntry>,
    pub representations: Vec<RepresentationSection>,
    pub indicators: Option<IndicatorReport>,
    pub classification: Option<Classification>,
    pub quaternion: Option<QuaternionSection>,
    pub integrality: Option<IntegralitySection>,
    pub residuals: Residuals,
    pub error: Option<ErrorInfo>,
    /// Every consistency check passed.
    pub passed: bool,
}

const OFFENDING_SHOWN: usize = 12;

impl AnalysisReport {
    /// JSON with keys sorted at every level.
    pub fn to_canonical_json(&self) -> String {
        // serde_json::Value keeps objects in a BTreeMap, so converting
        // through it sorts the keys.
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| RbaError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        let _ = writeln!(
            out,
            "rank {}  s = {}  nonreal pairs {:?}  order {}  ({:?} mode{})",
            s.rank,
            s.s,
            s.nonreal_pairs,
            s.order.as_ref().map(|o| o.to_string()).unwrap_or_else(|| "-".into()),
            self.tool.mode,
            if s.standardized { ", standardized" } else { "" }
        );
        let _ = writeln!(out, "axioms: {}", if self.validation.passed { "ok" } else { "FAILED" });
        for c in self.validation.failures() {
            let _ = writeln!(out, "  {}: {}", c.name, c.detail.as_deref().unwrap_or("failed"));
        }
        if let Some(d) = &self.degrees {
            let _ = writeln!(out, "degree map: ({})", join(d));
        }
        if !self.characters.is_empty() {
            let _ = writeln!(out, "characters:");
            for (i, c) in self.characters.iter().enumerate() {
                let vals: Vec<String> = c.values.iter().map(fmt_value).collect();
                let nu = c.nu.map(|v| v.to_string()).unwrap_or_else(|| "?".into());
                let _ = writeln!(
                    out,
                    "  [{i}] deg {}  m = {}  nu = {}  ({})",
                    c.degree,
                    c.multiplicity,
                    nu,
                    vals.join(", ")
                );
            }
        }
        for r in &self.representations {
            let _ = writeln!(
                out,
                "representation of [{}]: real dim {}{}, residual {:.1e}",
                r.character,
                r.real_dim,
                if r.quaternionic { " (quaternionic, reduced polynomials)" } else { "" },
                r.product_residual.max(r.star_residual)
            );
            for (i, cp) in r.charpolys.iter().enumerate() {
                let _ = writeln!(out, "  b{i}: {}", fmt_poly(cp));
            }
        }
        if let Some(cl) = &self.classification {
            for (name, v) in [
                ("real count", &cl.real_count),
                ("gap identity", &cl.gap_identity),
                ("reality", &cl.reality),
                ("one-pair lemma", &cl.one_pair),
                ("rank-7 class", &cl.rank7),
            ] {
                let _ = writeln!(out, "{name}: {:?} {}", v.status, v.detail);
            }
        }
        if let Some(q) = &self.quaternion {
            match &q.symbol {
                Some(sym) => {
                    let _ = writeln!(out, "quaternion symbol: (a, beta) = ({}, {})  {:?}", sym.a, sym.beta, sym.overall);
                }
                None => {
                    let _ = writeln!(out, "quaternion symbol: {:?} {}", q.status, q.detail);
                }
            }
        }
        if let Some(int) = &self.integrality {
            let _ = writeln!(
                out,
                "integral structure constants: {}{}",
                int.integral,
                if int.integral { String::new() } else { format!(" ({} offending entries)", int.offending_count) }
            );
            if let Some(t) = &int.two_adic {
                let _ = writeln!(out, "2-adic obstruction: {:?}", t.verdict);
            }
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error [{}]: {}", e.code, e.message);
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn join(v: &[Scalar]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

/// Monic polynomial from ascending coefficients.
fn fmt_poly(c: &[Scalar]) -> String {
    let d = c.len().saturating_sub(1);
    let mut parts = vec![if d == 1 { "t".to_string() } else { format!("t^{d}") }];
    for k in (0..d).rev() {
        if c[k].is_zero(0.0) {
            continue;
        }
        let v = c[k].to_string();
        let (sign, mag) = match v.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", v),
        };
        let term = match k {
            0 => mag,
            1 if mag == "1" => "t".into(),
            1 => format!("{mag} t"),
            _ if mag == "1" => format!("t^{k}"),
            _ => format!("{mag} t^{k}"),
        };
        parts.push(format!("{sign} {term}"));
    }
    parts.join(" ")
}

fn fmt_value(v: &CharValue) -> String {
    match v {
        CharValue::Real(s) => s.to_string(),
        CharValue::Complex { re, im } => format!("{re}{im:+}i"),
    }
}

fn char_value(v: &Complex64, exact: Option<&crate::scalar::Rational>, eps: f64) -> CharValue {
    match exact {
        Some(q) => CharValue::Real(Scalar::Exact(q.clone())),
        None if v.im.abs() <= eps * (1.0 + v.re.abs()) => CharValue::Real(Scalar::Float(v.re)),
        None => CharValue::Complex { re: v.re, im: v.im },
    }
}

fn summary(rba: &Rba, tol: &ToleranceConfig) -> RbaSummary {
    RbaSummary {
        rank: rba.rank(),
        s: rba.real_count(),
        nonreal_pairs: rba.nonreal_pairs(),
        order: None,
        commutative: rba.is_commutative(tol.eps_zero),
        labels: (0..rba.rank()).map(|i| rba.label(i)).collect(),
        standardized: false,
    }
}

/// Run every stage on `rba`. Errors from the stages are recorded in the
/// report; only input-level errors (bad tolerances) are returned.
pub fn analyze(rba: &Rba, tol: &ToleranceConfig) -> Result<AnalysisReport> {
    tol.validate()?;
    let validation = validate::validate(rba, tol);
    let mut report = AnalysisReport {
        tool: ToolMeta {
            name: "rba".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            tolerances: *tol,
            mode: rba.mode(),
        },
        summary: summary(rba, tol),
        passed: false,
        validation,
        degrees: None,
        characters: Vec::new(),
        representations: Vec::new(),
        indicators: None,
        classification: None,
        quaternion: None,
        integrality: None,
        residuals: Residuals::default(),
        error: None,
    };
    if !report.validation.passed {
        return Ok(report);
    }
    if let Err(e) = run_stages(rba, tol, &mut report) {
        report.error = Some(ErrorInfo {
            code: e.code().into(),
            message: e.to_string(),
        });
        report.passed = false;
    }
    Ok(report)
}

fn run_stages(input: &Rba, tol: &ToleranceConfig, report: &mut AnalysisReport) -> Result<()> {
    let dm0 = degree::degree_map(input, tol)?;
    let standard = degree::is_standard(input, &dm0, tol.eps_residual);
    let (rba, dm): (Rba, DegreeMap) = if standard {
        (input.clone(), dm0)
    } else {
        degree::standardize(input, &dm0)?
    };
    report.summary.standardized = !standard;
    report.summary.order = Some(dm.order.clone());
    report.degrees = Some(dm.values.clone());
    degree::gram_matrix(&rba, &dm, tol)?;

    report.residuals.regular_rep = decomp::regular_rep(&rba).product_residual(&rba);
    let idem = decomp::central_idempotents(&rba, tol)?;
    report.residuals.idempotents = decomp::idempotent_residuals(&rba, &idem);
    let mut table = decomp::character_table(&rba, &dm, &idem, tol)?;
    report.residuals.multiplicity_routes = table
        .characters
        .iter()
        .map(|c| (c.multiplicity_routes.0 - c.multiplicity_routes.1).abs())
        .fold(0.0, f64::max);

    let ind = indicator::fs_indicator(&table, &rba, &dm, tol)?;
    ind.annotate(&mut table);
    report.residuals.indicator_deviation = ind.max_deviation();
    report.characters = character_entries(&table, tol);

    let mut ok = true;
    for (index, ch) in table.characters.iter().enumerate() {
        if ch.degree < 2 || ch.nu == Some(0) {
            continue;
        }
        let sec = representation_section(&rba, &dm, &table, index, tol)?;
        ok &= sec.product_residual <= tol.eps_residual * rba.max_abs_lambda().max(1.0);
        report.representations.push(sec);
    }
    let real_count = Verdict::from_bool(
        indicator::real_count_check(&ind),
        format!("s = {} predicted {}", ind.s_actual, ind.s_predicted),
    );
    let gap = Verdict::from_bool(indicator::gap_identity(&ind), "Σψ(b0)² - Σνψ(b0) = r - s");
    let reality = Verdict::from_bool(
        indicator::reality_consistent(&table, &ind, tol.eps_residual),
        "ν = 0 exactly on non-real-valued characters",
    );
    ok &= real_count.status == Status::Pass && gap.status == Status::Pass && reality.status == Status::Pass;

    let one_pair_applicable = rba.nonreal_pairs().len() == 1 && !rba.is_commutative(tol.eps_zero);
    let (one_pair, chi) = if one_pair_applicable {
        match indicator::classify_one_pair(&rba, &table, &ind, tol) {
            Ok(v) => (Verdict::pass(format!("unique degree-2 character at index {}", v.character)), Some(v.character)),
            Err(e) => (Verdict::fail(e.to_string()), None),
        }
    } else {
        (Verdict::na("needs exactly one nonreal pair and a noncommutative algebra"), None)
    };
    ok &= one_pair.status != Status::Fail;

    let rank7 = if rba.rank() == 7 && ind.degrees == [1, 1, 1, 2] {
        match indicator::rank7_trichotomy(&ind) {
            Ok(c) => Verdict::pass(format!("class {c}")),
            Err(e) => Verdict::fail(e.to_string()),
        }
    } else {
        Verdict::na("needs rank 7 with degrees (1,1,1,2)")
    };
    ok &= rank7.status != Status::Fail;
    report.indicators = Some(ind.clone());
    report.classification = Some(Classification {
        real_count,
        gap_identity: gap,
        reality,
        one_pair,
        rank7,
    });

    report.quaternion = Some(match chi {
        Some(c) => match quaternion::symbol_from_parts(&rba, &dm, &table, c, tol) {
            Ok(sym) => {
                let status = if sym.overall == SplitVerdict::Division { Status::Fail } else { Status::Pass };
                ok &= status == Status::Pass;
                QuaternionSection {
                    status,
                    detail: format!("{:?}", sym.overall),
                    symbol: Some(sym),
                }
            }
            Err(e) => {
                ok = false;
                QuaternionSection {
                    status: Status::Fail,
                    detail: e.to_string(),
                    symbol: None,
                }
            }
        },
        None => QuaternionSection {
            status: Status::NotApplicable,
            detail: "no unique degree-2 component from a single nonreal pair".into(),
            symbol: None,
        },
    });

    let int: IntegralityReport = integrality::integral_check(&rba, tol);
    let two_adic = if rba.rank() == 7 && table.degrees() == [1, 1, 1, 2] && rba.real_count() == 1 {
        integrality::two_adic_obstruction(&rba, &table).ok()
    } else {
        None
    };
    report.integrality = Some(IntegralitySection {
        integral: int.integral,
        offending_count: int.offending.len(),
        offending: int
            .offending
            .into_iter()
            .take(OFFENDING_SHOWN)
            .map(|o| (o.i, o.j, o.k, o.value))
            .collect(),
        two_adic,
    });

    let scale = rba.max_abs_lambda().max(1.0);
    ok &= report.residuals.idempotents.max() <= tol.eps_residual
        && report.residuals.multiplicity_routes <= tol.eps_residual * scale
        && report.residuals.indicator_deviation <= tol.eps_residual;
    report.passed = ok;
    Ok(())
}

fn representation_section(
    rba: &Rba,
    dm: &DegreeMap,
    table: &CharacterTable,
    index: usize,
    tol: &ToleranceConfig,
) -> Result<RepresentationSection> {
    let rep = decomp::star_rep_extract(rba, dm, table, index, tol)?;
    let quaternionic = table.characters[index].nu == Some(-1);
    let snap = |c: f64| match snap_rational(c, tol.eps_zero * c.abs().max(1.0) * 10.0, SNAP_MAX_DENOMINATOR) {
        Some(q) => Scalar::Exact(q),
        None => Scalar::Float(c),
    };
    let charpolys: Vec<Vec<Scalar>> = if quaternionic && rep.dim == 4 {
        rep.mats
            .iter()
            .map(|m| quaternion::reduced_charpoly_from_matrix(m).iter().map(|&c| snap(c)).collect())
            .collect()
    } else {
        decomp::charpoly_check(&rep, rba, tol)?
            .entries
            .into_iter()
            .map(|e| match e.rational {
                Some(q) => q.into_iter().map(Scalar::Exact).collect(),
                None => e.coeffs.into_iter().map(Scalar::Float).collect(),
            })
            .collect()
    };
    Ok(RepresentationSection {
        character: index,
        real_dim: rep.dim,
        quaternionic,
        product_residual: rep.product_residual(rba),
        star_residual: rep.star_residual(rba),
        all_rational: charpolys.iter().flatten().all(Scalar::is_exact),
        charpolys,
    })
}

fn character_entries(table: &CharacterTable, tol: &ToleranceConfig) -> Vec<CharacterEntry> {
    table
        .characters
        .iter()
        .map(|c| CharacterEntry {
            degree: c.degree,
            values: c
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| char_value(v, c.rational_values.as_ref().map(|r| &r[i]), tol.eps_residual))
                .collect(),
            multiplicity: c.multiplicity.clone(),
            nu: c.nu,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_report_roundtrips() {
        let a = Rba::new(1, vec![0], vec![Scalar::from_int(1)]).unwrap();
        let r = analyze(&a, &ToleranceConfig::default()).unwrap();
        assert!(r.passed, "{}", r.render_text());
        let json = r.to_canonical_json();
        let back = AnalysisReport::from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_canonical_json(), json);
    }

    #[test]
    fn failed_axioms_stop_early() {
        let a = Rba::new(1, vec![0], vec![Scalar::from_int(2)]).unwrap();
        let r = analyze(&a, &ToleranceConfig::default()).unwrap();
        assert!(!r.passed);
        assert!(r.degrees.is_none());
        assert!(r.render_text().contains("FAILED"));
    }
}
