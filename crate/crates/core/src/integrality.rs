//! Integrality of structure constants, the 2-adic obstruction for rank-7
//! algebras with one *-invariant element, and the explicit rank-7 example
//! with a quaternionic component.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::decomp::CharacterTable;
use crate::error::{RbaError, Result};
use crate::quaternion::{homomorphism_defect, Quaternion};
use crate::rba::Rba;
use crate::scalar::{is_integer, p_adic_valuation, rat, rational_to_f64, Rational, Scalar};
use crate::tolerance::ToleranceConfig;

/// `a + b√5` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt5 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt5 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt5 { a, b: Rational::zero() }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QSqrt5::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 5b²`.
    pub fn field_norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(5))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 5f64.sqrt()
    }

    /// Sign of the real number, exactly.
    pub fn signum(&self) -> i8 {
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with 5b²
        let n = self.field_norm();
        if n.is_zero() {
            0
        } else if n.is_positive() {
            sa
        } else {
            sb
        }
    }
}

fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√5", self.b),
            _ => write!(f, "{} + {}√5", self.a, self.b),
        }
    }
}

impl Add for QSqrt5 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QSqrt5::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QSqrt5 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QSqrt5::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QSqrt5 {
    type Output = Self;
    fn neg(self) -> Self {
        QSqrt5::new(-self.a, -self.b)
    }
}

impl Mul for QSqrt5 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let five = Rational::from_integer(BigInt::from(5));
        QSqrt5::new(&self.a * &o.a + &self.b * &o.b * five, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Div for QSqrt5 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.field_norm();
        let num = self * o.conj();
        QSqrt5::new(num.a / &n, num.b / &n)
    }
}

impl Zero for QSqrt5 {
    fn zero() -> Self {
        QSqrt5::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt5 {
    fn one() -> Self {
        QSqrt5::rational(Rational::one())
    }
}

// ------------------------------------------------------------ integrality

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OffendingEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub integral: bool,
    pub offending: Vec<OffendingEntry>,
}

/// Every `λ_ijk` an integer (exactly in rational mode, within `eps_zero`
/// otherwise).
pub fn integral_check(rba: &Rba, tol: &ToleranceConfig) -> IntegralityReport {
    let r = rba.rank();
    let mut offending = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let ok = match rba.exact_lambda(i, j, k) {
                    Some(q) => is_integer(q),
                    None => {
                        let v = rba.lambda(i, j, k);
                        (v - v.round()).abs() <= tol.eps_zero
                    }
                };
                if !ok {
                    offending.push(OffendingEntry { i, j, k, value: rba.scalar(i, j, k) });
                }
            }
        }
    }
    IntegralityReport {
        integral: offending.is_empty(),
        offending,
    }
}

// --------------------------------------------------------- 2-adic

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoAdicVerdict {
    ObstructedNonIntegral,
    NoObstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoAdicRow {
    pub character: usize,
    /// Values on the three nonreal pairs.
    pub phi: [Scalar; 3],
    /// `1 + 2(φ₁ + φ₂ + φ₃) = 0`.
    pub relation_holds: bool,
    /// `-(1 + 2φ₁ + 2φ₂)/2`.
    pub phi3_formula_value: Scalar,
    /// 2-adic valuations of `φ₁, φ₂, φ₃`; `None` for zero.
    pub valuations: [Option<i64>; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoAdicReport {
    pub rows: Vec<TwoAdicRow>,
    pub verdict: TwoAdicVerdict,
}

/// `-(1 + 2φ₁ + 2φ₂)/2`.
pub fn phi3_formula(phi1: &Rational, phi2: &Rational) -> Rational {
    let two = Rational::from_integer(BigInt::from(2));
    -(Rational::one() + &two * phi1 + &two * phi2) / two
}

/// Whether `1 + 2(a + b + c) = 0` has the integer solution `(a, b, c)`.
/// It never does: the left side is odd.
pub fn integer_row_solves(a: i64, b: i64, c: i64) -> bool {
    1 + 2 * (a as i128 + b as i128 + c as i128) == 0
}

/// 2-adic check of the linear non-δ characters of a rank-7 algebra with
/// degrees `(1,1,1,2)` and one *-invariant element.
pub fn two_adic_obstruction(rba: &Rba, table: &CharacterTable) -> Result<TwoAdicReport> {
    let s = (0..rba.rank()).filter(|&i| rba.star(i) == i).count();
    if rba.rank() != 7 || table.degrees() != [1, 1, 1, 2] || s != 1 {
        return Err(RbaError::Precondition(format!(
            "needs rank 7, degrees (1,1,1,2) and one *-invariant element; got rank {}, degrees {:?}, s = {s}",
            rba.rank(),
            table.degrees()
        )));
    }
    let pairs = rba.nonreal_pairs();
    let mut rows = Vec::new();
    for character in 1..3 {
        let vals = table.characters[character]
            .rational_values
            .as_ref()
            .ok_or_else(|| RbaError::Precondition("obstruction check requires rational table".into()))?;
        for &(p, q) in &pairs {
            if vals[p] != vals[q] {
                return Err(RbaError::Inconsistency(format!(
                    "character {character} differs on b{p} and b{q}"
                )));
            }
        }
        let phi: Vec<Rational> = pairs.iter().map(|&(p, _)| vals[p].clone()).collect();
        let two = rat(2, 1);
        let relation_holds = (Rational::one() + &two * (&phi[0] + &phi[1] + &phi[2])).is_zero();
        let f3 = phi3_formula(&phi[0], &phi[1]);
        rows.push(TwoAdicRow {
            character,
            valuations: [0, 1, 2].map(|t| p_adic_valuation(&phi[t], 2)),
            phi: [0, 1, 2].map(|t| Scalar::Exact(phi[t].clone())),
            relation_holds,
            phi3_formula_value: Scalar::Exact(f3),
        });
    }
    if let Some(bad) = rows.iter().find(|r| !r.relation_holds) {
        return Err(RbaError::Inconsistency(format!(
            "row-sum relation fails for character {}",
            bad.character
        )));
    }
    let obstructed = rows.iter().any(|r| r.valuations.iter().any(|v| matches!(v, Some(e) if *e < 0)));
    Ok(TwoAdicReport {
        rows,
        verdict: if obstructed {
            TwoAdicVerdict::ObstructedNonIntegral
        } else {
            TwoAdicVerdict::NoObstruction
        },
    })
}

// ------------------------------------------------------- rank-7 example

/// Basis order `b0, b1, b1*, b2, b2*, b3, b3*`.
pub const RANK7_STAR: [usize; 7] = [0, 2, 1, 4, 3, 6, 5];
pub const RANK7_LABELS: [&str; 7] = ["b0", "b1", "b1*", "b2", "b2*", "b3", "b3*"];

#[derive(Clone, Debug)]
pub struct Rank7Example {
    /// Structure constants in ℚ(√5), index `(i r + j) r + k`.
    pub exact: Vec<QSqrt5>,
    /// The same tensor as a float-mode algebra.
    pub rba: Rba,
    /// `X(b_i)` in ℍ.
    pub images: Vec<Quaternion<QSqrt5>>,
    pub delta: Vec<Rational>,
    pub phi: Vec<Rational>,
    pub psi: Vec<Rational>,
    pub chi: Vec<Rational>,
    /// `(m_δ, m_φ, m_ψ, m_χ)`.
    pub multiplicities: [Rational; 4],
    pub order: Rational,
}

fn q5(a: Rational, b: Rational) -> QSqrt5 {
    QSqrt5::new(a, b)
}

/// Element of `ℝ × ℝ × ℝ × ℍ`.
#[derive(Clone, Debug, PartialEq)]
struct Tuple {
    d: QSqrt5,
    f: QSqrt5,
    s: QSqrt5,
    h: Quaternion<QSqrt5>,
}

impl Tuple {
    fn mul(&self, o: &Tuple) -> Tuple {
        Tuple {
            d: self.d.clone() * o.d.clone(),
            f: self.f.clone() * o.f.clone(),
            s: self.s.clone() * o.s.clone(),
            h: self.h.clone() * o.h.clone(),
        }
    }

    fn scale(&self, c: &QSqrt5) -> Tuple {
        Tuple {
            d: self.d.clone() * c.clone(),
            f: self.f.clone() * c.clone(),
            s: self.s.clone() * c.clone(),
            h: self.h.scale(c.clone()),
        }
    }

    fn add(&self, o: &Tuple) -> Tuple {
        Tuple {
            d: self.d.clone() + o.d.clone(),
            f: self.f.clone() + o.f.clone(),
            s: self.s.clone() + o.s.clone(),
            h: self.h.clone() + o.h.clone(),
        }
    }

    fn star(&self) -> Tuple {
        Tuple {
            d: self.d.clone(),
            f: self.f.clone(),
            s: self.s.clone(),
            h: self.h.conj(),
        }
    }
}

/// Reconstruct the rank-7 algebra from its character table and the images
/// of the basis in ℍ: each basis element becomes `(δ, φ, ψ, X)`, products
/// are taken componentwise, and coefficients are recovered through the
/// trace form `τ = δ + m_φ φ + m_ψ ψ + m_χ · 2t`, for which the basis is
/// orthogonal with `τ(b_k b_k*) = n δ_k`.
pub fn build_rank7_example() -> Result<Rank7Example> {
    let r = 7;
    let z = || Rational::zero();
    let delta: Vec<Rational> = [1, 2, 2, 2, 2, 2, 2].iter().map(|&v| rat(v, 1)).collect();
    let phi = vec![rat(1, 1), rat(-5, 2), rat(-5, 2), z(), z(), rat(2, 1), rat(2, 1)];
    let psi = vec![rat(1, 1), rat(2, 1), rat(2, 1), rat(-9, 2), rat(-9, 2), rat(2, 1), rat(2, 1)];
    let half5 = || q5(z(), rat(1, 2));
    let zero = QSqrt5::zero;
    let images: Vec<Quaternion<QSqrt5>> = vec![
        Quaternion::real(QSqrt5::one()),
        Quaternion::new(zero(), half5(), zero(), zero()),
        Quaternion::new(zero(), -half5(), zero(), zero()),
        Quaternion::new(zero(), zero(), half5(), zero()),
        Quaternion::new(zero(), zero(), -half5(), zero()),
        Quaternion::new(QSqrt5::rational(rat(-1, 2)), zero(), zero(), half5()),
        Quaternion::new(QSqrt5::rational(rat(-1, 2)), zero(), zero(), -half5()),
    ];
    let chi: Vec<Rational> = images
        .iter()
        .map(|q| {
            let t = q.trace();
            debug_assert!(t.is_rational());
            t.a
        })
        .collect();
    let multiplicities = [rat(1, 1), rat(52, 45), rat(4, 9), rat(26, 5)];
    let order: Rational = delta.iter().sum();

    let basis: Vec<Tuple> = (0..r)
        .map(|i| Tuple {
            d: QSqrt5::rational(delta[i].clone()),
            f: QSqrt5::rational(phi[i].clone()),
            s: QSqrt5::rational(psi[i].clone()),
            h: images[i].clone(),
        })
        .collect();
    let m = multiplicities.clone().map(QSqrt5::rational);
    let tau = |t: &Tuple| {
        t.d.clone() + m[1].clone() * t.f.clone() + m[2].clone() * t.s.clone() + m[3].clone() * t.h.trace()
    };
    // Gram form must be diagonal with entries n δ_k.
    for k in 0..r {
        for l in 0..r {
            let g = tau(&basis[k].mul(&basis[l].star()));
            let want = if k == l {
                QSqrt5::rational(&order * &delta[k])
            } else {
                QSqrt5::zero()
            };
            if g != want {
                return Err(RbaError::Inconsistency(format!(
                    "trace form not orthogonal at ({k},{l}): {g}"
                )));
            }
        }
    }
    let mut exact = vec![QSqrt5::zero(); r * r * r];
    for i in 0..r {
        for j in 0..r {
            let prod = basis[i].mul(&basis[j]);
            let mut recon = basis[0].scale(&QSqrt5::zero());
            for k in 0..r {
                let w = tau(&prod.mul(&basis[k].star()));
                let l = w / QSqrt5::rational(&order * &delta[k]);
                recon = recon.add(&basis[k].scale(&l));
                exact[(i * r + j) * r + k] = l;
            }
            if recon != prod {
                return Err(RbaError::Inconsistency(format!(
                    "b{i} b{j} is not in the span of the basis tuples"
                )));
            }
        }
    }
    let rba = Rba::from_f64(r, RANK7_STAR.to_vec(), exact.iter().map(QSqrt5::to_f64).collect())?
        .with_labels(RANK7_LABELS.iter().map(|s| s.to_string()).collect())?;
    Ok(Rank7Example {
        exact,
        rba,
        images,
        delta,
        phi,
        psi,
        chi,
        multiplicities,
        order,
    })
}

/// Exact axiom checks of the ℚ(√5) tensor; returns the names of failing
/// checks (empty when all pass).
pub fn verify_rank7_exact(ex: &Rank7Example) -> Vec<String> {
    let r = 7;
    let l = |i: usize, j: usize, k: usize| ex.exact[(i * r + j) * r + k].clone();
    let st = |i: usize| RANK7_STAR[i];
    let mut failures = Vec::new();
    let anti = (0..r).all(|i| (0..r).all(|j| (0..r).all(|k| l(i, j, k) == l(st(j), st(i), st(k)))));
    if !anti {
        failures.push("anti_automorphism".to_string());
    }
    let identity = (0..r).all(|i| {
        (0..r).all(|k| {
            let e = if i == k { QSqrt5::one() } else { QSqrt5::zero() };
            l(0, i, k) == e && l(i, 0, k) == e
        })
    });
    if !identity {
        failures.push("identity".to_string());
    }
    let pseudo = (0..r).all(|i| {
        (0..r).all(|j| {
            let v = l(i, j, 0);
            if j == st(i) {
                v.signum() > 0 && v == QSqrt5::rational(ex.delta[i].clone())
            } else {
                v.is_zero()
            }
        })
    });
    if !pseudo {
        failures.push("pseudo_inverse".to_string());
    }
    let mut assoc = true;
    'outer: for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for t in 0..r {
                    let mut lhs = QSqrt5::zero();
                    let mut rhs = QSqrt5::zero();
                    for m in 0..r {
                        lhs = lhs + l(i, j, m) * l(m, k, t);
                        rhs = rhs + l(j, k, m) * l(i, m, t);
                    }
                    if lhs != rhs {
                        assoc = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    if !assoc {
        failures.push("associativity".to_string());
    }
    if homomorphism_defect(r, l, &ex.images).is_some() {
        failures.push("quaternion_homomorphism".to_string());
    }
    failures
}

/// Whether every structure constant of the example lies in ℚ.
pub fn rank7_is_rational(ex: &Rank7Example) -> bool {
    ex.exact.iter().all(QSqrt5::is_rational)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qsqrt5_arithmetic() {
        let s = QSqrt5::new(rat(0, 1), rat(1, 1));
        assert_eq!(s.clone() * s.clone(), QSqrt5::rational(rat(5, 1)));
        let x = QSqrt5::new(rat(1, 2), rat(3, 4));
        assert_eq!((x.clone() / x.clone()), QSqrt5::one());
        assert_eq!(QSqrt5::new(rat(3, 1), rat(-1, 1)).signum(), 1);
        assert_eq!(QSqrt5::new(rat(2, 1), rat(-1, 1)).signum(), -1);
        assert!((x.to_f64() - (0.5 + 0.75 * 5f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn phi3_from_parity() {
        assert_eq!(phi3_formula(&rat(-5, 2), &rat(0, 1)), rat(2, 1));
        assert_eq!(phi3_formula(&rat(2, 1), &rat(-9, 2)), rat(2, 1));
        assert_eq!(p_adic_valuation(&phi3_formula(&rat(3, 1), &rat(-7, 1)), 2), Some(-1));
        assert!(!integer_row_solves(0, 0, 0));
    }
}
