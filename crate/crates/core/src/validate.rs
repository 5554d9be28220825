//! Axiom validation for RBAs.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rba::Rba;
use crate::scalar::{rational_to_f64, Rational};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub exact: bool,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const STAR_INVOLUTION: &str = "star_involution";
pub const IDENTITY: &str = "identity";
pub const ANTI_AUTOMORPHISM: &str = "anti_automorphism";
pub const PSEUDO_INVERSE: &str = "pseudo_inverse";
pub const ASSOCIATIVITY: &str = "associativity";

/// Check every RBA axiom. Exact tensors are checked exactly; float tensors
/// against `eps_zero`/`eps_residual` scaled by the largest entry.
pub fn validate(rba: &Rba, tol: &ToleranceConfig) -> ValidationReport {
    let checks = vec![
        check_star(rba),
        check_identity(rba, tol),
        check_anti_automorphism(rba, tol),
        check_pseudo_inverse(rba, tol),
        check_associativity(rba, tol),
    ];
    let passed = checks.iter().all(|c| c.passed);
    ValidationReport {
        exact: rba.is_exact(),
        checks,
        passed,
    }
}

fn scale(rba: &Rba) -> f64 {
    rba.max_abs_lambda().max(1.0)
}

/// Signed difference of two entries, exact when possible.
fn diff(rba: &Rba, a: (usize, usize, usize), b: (usize, usize, usize)) -> f64 {
    match (rba.exact_lambda(a.0, a.1, a.2), rba.exact_lambda(b.0, b.1, b.2)) {
        (Some(x), Some(y)) => rational_to_f64(&(x - y)),
        _ => rba.lambda(a.0, a.1, a.2) - rba.lambda(b.0, b.1, b.2),
    }
}

fn is_zero_entry(rba: &Rba, i: usize, j: usize, k: usize, eps: f64) -> bool {
    match rba.exact_lambda(i, j, k) {
        Some(q) => q.is_zero(),
        None => rba.lambda(i, j, k).abs() <= eps,
    }
}

fn passes(rba: &Rba, residual: f64, eps: f64) -> bool {
    if rba.is_exact() {
        residual == 0.0
    } else {
        residual <= eps
    }
}

fn check_star(rba: &Rba) -> CheckResult {
    let r = rba.rank();
    let mut detail = None;
    if rba.star(0) != 0 {
        detail = Some(format!("0* = {} but b_0 must be *-fixed", rba.star(0)));
    } else if let Some(i) = (0..r).find(|&i| rba.star(rba.star(i)) != i) {
        detail = Some(format!("({i}*)* = {} ≠ {i}", rba.star(rba.star(i))));
    }
    CheckResult {
        name: STAR_INVOLUTION.into(),
        passed: detail.is_none(),
        max_residual: if detail.is_none() { 0.0 } else { 1.0 },
        detail,
    }
}

fn check_identity(rba: &Rba, tol: &ToleranceConfig) -> CheckResult {
    let r = rba.rank();
    let mut worst = 0.0f64;
    let mut detail = None;
    let one = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for j in 0..r {
        for k in 0..r {
            for (idx, expect) in [((0, j, k), one(j, k)), ((j, 0, k), one(j, k))] {
                let res = match rba.exact_lambda(idx.0, idx.1, idx.2) {
                    Some(q) => rational_to_f64(&(q - Rational::from_integer((expect as i64).into()))).abs(),
                    None => (rba.lambda(idx.0, idx.1, idx.2) - expect).abs(),
                };
                if res > worst {
                    worst = res;
                    detail = Some(format!("λ{idx:?} = {} (expected {expect})", rba.scalar(idx.0, idx.1, idx.2)));
                }
            }
        }
    }
    let passed = passes(rba, worst, tol.eps_residual * scale(rba));
    CheckResult {
        name: IDENTITY.into(),
        passed,
        max_residual: worst,
        detail: if passed { None } else { detail },
    }
}

fn check_anti_automorphism(rba: &Rba, tol: &ToleranceConfig) -> CheckResult {
    let r = rba.rank();
    let s = |i: usize| rba.star(i);
    let mut worst = 0.0f64;
    let mut detail = None;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let res = diff(rba, (i, j, k), (s(j), s(i), s(k))).abs();
                if res > worst {
                    worst = res;
                    detail = Some(format!("λ({i},{j},{k}) ≠ λ({},{},{})", s(j), s(i), s(k)));
                }
            }
        }
    }
    let passed = passes(rba, worst, tol.eps_residual * scale(rba));
    CheckResult {
        name: ANTI_AUTOMORPHISM.into(),
        passed,
        max_residual: worst,
        detail: if passed { None } else { detail },
    }
}

fn check_pseudo_inverse(rba: &Rba, tol: &ToleranceConfig) -> CheckResult {
    let r = rba.rank();
    let eps = tol.eps_zero * scale(rba);
    let mut worst = 0.0f64;
    let mut problems = Vec::new();
    for i in 0..r {
        let is = rba.star(i);
        for j in 0..r {
            if j == is {
                continue;
            }
            if !is_zero_entry(rba, i, j, 0, eps) {
                worst = worst.max(rba.lambda(i, j, 0).abs());
                problems.push(format!("λ({i},{j},0) = {} ≠ 0 with {j} ≠ {i}*", rba.scalar(i, j, 0)));
            }
        }
        let positive = match rba.exact_lambda(i, is, 0) {
            Some(q) => q.is_positive(),
            None => rba.lambda(i, is, 0) > eps,
        };
        if !positive {
            worst = worst.max(rba.lambda(i, is, 0).abs().max(1.0));
            problems.push(format!(
                "pair ({i},{i}*): λ({i},{is},0) = {} is not positive",
                rba.scalar(i, is, 0)
            ));
        }
        let sym = diff(rba, (i, is, 0), (is, i, 0)).abs();
        if !passes(rba, sym, tol.eps_residual * scale(rba)) {
            worst = worst.max(sym);
            problems.push(format!("pair ({i},{i}*): λ({i},{is},0) ≠ λ({is},{i},0)"));
        }
    }
    CheckResult {
        name: PSEUDO_INVERSE.into(),
        passed: problems.is_empty(),
        max_residual: worst,
        detail: if problems.is_empty() {
            None
        } else {
            Some(problems.join("; "))
        },
    }
}

fn check_associativity(rba: &Rba, tol: &ToleranceConfig) -> CheckResult {
    let r = rba.rank();
    let mut worst = 0.0f64;
    let mut detail = None;

    if let Some(exact) = rba.exact_slice() {
        let nz: Vec<Vec<(usize, &Rational)>> = (0..r * r)
            .map(|ij| {
                (0..r)
                    .filter_map(|k| {
                        let q = &exact[ij * r + k];
                        (!q.is_zero()).then_some((k, q))
                    })
                    .collect()
            })
            .collect();
        let mut acc = vec![Rational::zero(); r];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    acc.iter_mut().for_each(|a| a.set_zero());
                    for &(m, a) in &nz[i * r + j] {
                        for &(l, b) in &nz[m * r + k] {
                            acc[l] += a * b;
                        }
                    }
                    for &(m, a) in &nz[j * r + k] {
                        for &(l, b) in &nz[i * r + m] {
                            acc[l] -= a * b;
                        }
                    }
                    if let Some((l, q)) = acc.iter().enumerate().find(|(_, q)| !q.is_zero()) {
                        let res = rational_to_f64(q).abs();
                        if res > worst || detail.is_none() {
                            worst = worst.max(res);
                            detail = Some(format!("(b{i} b{j}) b{k} ≠ b{i} (b{j} b{k}) at coefficient {l}"));
                        }
                    }
                }
            }
        }
        return CheckResult {
            name: ASSOCIATIVITY.into(),
            passed: detail.is_none(),
            max_residual: worst,
            detail,
        };
    }

    let nz: Vec<Vec<(usize, f64)>> = (0..r * r)
        .map(|ij| {
            let (i, j) = (ij / r, ij % r);
            (0..r)
                .filter_map(|k| {
                    let v = rba.lambda(i, j, k);
                    (v != 0.0).then_some((k, v))
                })
                .collect()
        })
        .collect();
    let mut acc = vec![0.0; r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                acc.iter_mut().for_each(|a| *a = 0.0);
                for &(m, a) in &nz[i * r + j] {
                    for &(l, b) in &nz[m * r + k] {
                        acc[l] += a * b;
                    }
                }
                for &(m, a) in &nz[j * r + k] {
                    for &(l, b) in &nz[i * r + m] {
                        acc[l] -= a * b;
                    }
                }
                for (l, v) in acc.iter().enumerate() {
                    if v.abs() > worst {
                        worst = v.abs();
                        detail = Some(format!("(b{i} b{j}) b{k} ≠ b{i} (b{j} b{k}) at coefficient {l}"));
                    }
                }
            }
        }
    }
    let s = scale(rba);
    let passed = worst <= tol.eps_residual * s * s;
    CheckResult {
        name: ASSOCIATIVITY.into(),
        passed,
        max_residual: worst,
        detail: if passed { None } else { detail },
    }
}
