//! Quaternion arithmetic, the `(a, β)` symbol of the degree-2 component of
//! an algebra with one nonreal pair, and Hilbert symbols over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decomp::{self, CharacterTable, StarRep};
use crate::degree::{self, DegreeMap};
use crate::error::{RbaError, Result};
use crate::indicator;
use crate::linalg;
use crate::rba::{FieldMode, Rba};
use crate::scalar::{snap_rational, Rational, Scalar, SNAP_MAX_DENOMINATOR};
use crate::tolerance::ToleranceConfig;

/// Field operations needed for quaternion arithmetic.
pub trait QuatField:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> QuatField for T where
    T: Clone + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// `t + x i + y j + z k` with `i² = j² = k² = -1`, `ij = k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion<T = f64> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: QuatField> Quaternion<T> {
    pub fn new(t: T, x: T, y: T, z: T) -> Self {
        Quaternion { t, x, y, z }
    }

    pub fn real(t: T) -> Self {
        Quaternion::new(t, T::zero(), T::zero(), T::zero())
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.t.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }

    /// `q q* = t² + x² + y² + z²`.
    pub fn norm(&self) -> T {
        self.t.clone() * self.t.clone()
            + self.x.clone() * self.x.clone()
            + self.y.clone() * self.y.clone()
            + self.z.clone() * self.z.clone()
    }

    /// Reduced trace `2t`.
    pub fn trace(&self) -> T {
        self.t.clone() + self.t.clone()
    }

    /// Reduced characteristic polynomial `u² - 2t u + N` as `[N, -2t, 1]`.
    pub fn reduced_charpoly(&self) -> [T; 3] {
        [self.norm(), -self.trace(), T::one()]
    }

    pub fn scale(&self, c: T) -> Self {
        Quaternion::new(
            self.t.clone() * c.clone(),
            self.x.clone() * c.clone(),
            self.y.clone() * c.clone(),
            self.z.clone() * c,
        )
    }

    pub fn coords(&self) -> [T; 4] {
        [self.t.clone(), self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

impl<T: QuatField> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: QuatField> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: QuatField> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Quaternion::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl<T: QuatField> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.t, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.t, o.x, o.y, o.z);
        Quaternion::new(
            a1.clone() * a2.clone() - b1.clone() * b2.clone() - c1.clone() * c2.clone() - d1.clone() * d2.clone(),
            a1.clone() * b2.clone() + b1.clone() * a2.clone() + c1.clone() * d2.clone() - d1.clone() * c2.clone(),
            a1.clone() * c2.clone() - b1.clone() * d2.clone() + c1.clone() * a2.clone() + d1.clone() * b2.clone(),
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl<T: fmt::Display> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.t, self.x, self.y, self.z)
    }
}

/// Unique nonreal pair `(p, p*)` with `c = b_p + b_p*` and `d = b_p - b_p*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairBasis {
    pub p: usize,
    pub p_star: usize,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

pub fn dc_change_of_basis(rba: &Rba) -> Result<PairBasis> {
    let pairs = rba.nonreal_pairs();
    if pairs.len() != 1 {
        return Err(RbaError::Precondition(format!("{} nonreal pairs, expected exactly 1", pairs.len())));
    }
    let (p, q) = pairs[0];
    let r = rba.rank();
    let mut c = vec![0.0; r];
    let mut d = vec![0.0; r];
    c[p] = 1.0;
    c[q] = 1.0;
    d[p] = 1.0;
    d[q] = -1.0;
    // coefficient-level check of c* = c, d* = -d
    let star = |v: &[f64]| (0..r).map(|i| v[rba.star(i)]).collect::<Vec<f64>>();
    let neg_d: Vec<f64> = d.iter().map(|x| -x).collect();
    if star(&c) != c || star(&d) != neg_d {
        return Err(RbaError::Inconsistency("c or d has the wrong *-parity".into()));
    }
    Ok(PairBasis { p, p_star: q, c, d })
}

#[derive(Clone, Debug)]
pub struct XGenerator {
    /// `m_χ X(d)`.
    pub x: DMatrix<f64>,
    /// `x² = a I`.
    pub a: f64,
    /// `-n δ_p m_χ`.
    pub a_expected: f64,
    /// `X(d)² = -(n δ_p / m_χ) I` entrywise residual.
    pub residual: f64,
}

/// `x = m_χ X(d)` with `x² = a I`, `a = -m_χ n δ_p < 0`.
pub fn x_generator(
    rep: &StarRep,
    pair: &PairBasis,
    dm: &DegreeMap,
    m_chi: f64,
    tol: &ToleranceConfig,
) -> Result<XGenerator> {
    if rep.dim != 2 {
        return Err(RbaError::Precondition(format!("need a 2-dimensional representation, got {}", rep.dim)));
    }
    let xd = rep.of(&pair.d);
    let scale = linalg::max_abs(&xd).max(1.0);
    let anti = linalg::max_abs(&(&xd + xd.transpose()));
    if anti > tol.eps_residual * scale {
        return Err(RbaError::Representation {
            what: "X(d) is not antisymmetric".into(),
            residual: anti,
        });
    }
    let n = dm.order_f64();
    let delta = dm.get(pair.p);
    // X(d) = (s - t) J, so m (s - t)² = n δ_p
    let st = xd[(0, 1)] - xd[(1, 0)];
    let gap = (m_chi * st * st / 4.0 - n * delta).abs();
    let x = &xd * m_chi;
    let x2 = &x * &x;
    let a = x2.trace() / 2.0;
    let residual = linalg::max_abs(&(&x2 - DMatrix::identity(2, 2) * a));
    let a_expected = -n * delta * m_chi;
    let rel = tol.eps_residual * a_expected.abs().max(1.0);
    if residual > rel || (a - a_expected).abs() > rel || gap > tol.eps_residual * (n * delta).max(1.0) {
        return Err(RbaError::Representation {
            what: format!("x² = {a} I does not match -n δ m = {a_expected}"),
            residual: residual.max((a - a_expected).abs()).max(gap),
        });
    }
    Ok(XGenerator {
        x,
        a,
        a_expected,
        residual,
    })
}

#[derive(Clone, Debug)]
pub struct YGenerator {
    pub y: DMatrix<f64>,
    pub beta: f64,
    /// Index of the basis element used, or `None` for `c`.
    pub ell: Option<usize>,
    pub anticommutator: f64,
}

/// `y = 2 X(d_ℓ) - tr X(d_ℓ) I` for the first *-invariant `d_ℓ` (real
/// basis elements in index order, then `c`) with non-scalar image.
pub fn y_generator(rep: &StarRep, rba: &Rba, pair: &PairBasis, x: &XGenerator, tol: &ToleranceConfig) -> Result<YGenerator> {
    let r = rba.rank();
    let mut candidates: Vec<(Option<usize>, DMatrix<f64>)> = (1..r)
        .filter(|&i| rba.star(i) == i)
        .map(|i| (Some(i), rep.mats[i].clone()))
        .collect();
    candidates.push((None, rep.of(&pair.c)));
    let id = DMatrix::<f64>::identity(2, 2);
    for (ell, m) in candidates {
        let tr = m.trace();
        let traceless = &m - &id * (tr / 2.0);
        if traceless.norm() <= tol.eps_residual * m.norm().max(1.0) {
            continue;
        }
        let y = &m * 2.0 - &id * tr;
        let y2 = &y * &y;
        let beta = y2.trace() / 2.0;
        let anti = &x.x * &y + &y * &x.x;
        let anticommutator = linalg::max_abs(&anti);
        let scale = linalg::max_abs(&x.x).max(1.0) * linalg::max_abs(&y).max(1.0);
        if anticommutator > tol.eps_residual * scale
            || linalg::max_abs(&(&y2 - &id * beta)) > tol.eps_residual * beta.abs().max(1.0)
            || linalg::max_abs(&(&y - y.transpose())) > tol.eps_residual * scale
        {
            return Err(RbaError::Representation {
                what: "y does not anticommute with x or y² is not scalar".into(),
                residual: anticommutator,
            });
        }
        return Ok(YGenerator {
            y,
            beta,
            ell,
            anticommutator,
        });
    }
    Err(RbaError::Inconsistency("component not 4-dimensional: every *-invariant image is scalar".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitVerdict {
    /// `M_2(ℚ)`.
    Split,
    /// Division algebra over ℚ.
    Division,
    /// Split over ℝ; no exact rational certificate.
    RealSplitOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceSymbol {
    pub place: Place,
    pub value: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuaternionSymbol {
    pub a: Scalar,
    pub beta: Scalar,
    pub field_mode: FieldMode,
    /// Hilbert symbols at the relevant places, when `(a, β)` is rational.
    pub verdicts: Vec<PlaceSymbol>,
    pub overall: SplitVerdict,
    pub pair: (usize, usize),
    pub ell: Option<usize>,
    pub anticommutator: f64,
    pub x_square_residual: f64,
}

/// Full construction for an algebra with one nonreal pair: standardize,
/// decompose, extract the degree-2 *-representation, build `x`, `y` and
/// decide splitting.
pub fn symbol(rba: &Rba, tol: &ToleranceConfig) -> Result<QuaternionSymbol> {
    dc_change_of_basis(rba)?;
    let dm = degree::degree_map(rba, tol)?;
    let (std_rba, std_dm) = degree::standardize(rba, &dm)?;
    let mut table = decomp::decompose(&std_rba, &std_dm, tol)?;
    let report = indicator::fs_indicator(&table, &std_rba, &std_dm, tol)?;
    report.annotate(&mut table);
    let verdict = indicator::classify_one_pair(&std_rba, &table, &report, tol)?;
    symbol_from_parts(&std_rba, &std_dm, &table, verdict.character, tol)
}

/// Symbol from an already decomposed standard-basis algebra.
pub fn symbol_from_parts(
    rba: &Rba,
    dm: &DegreeMap,
    table: &CharacterTable,
    chi: usize,
    tol: &ToleranceConfig,
) -> Result<QuaternionSymbol> {
    let pair = dc_change_of_basis(rba)?;
    let rep = decomp::star_rep_extract(rba, dm, table, chi, tol)?;
    let m_chi = table.characters[chi].multiplicity_f64();
    let xg = x_generator(&rep, &pair, dm, m_chi, tol)?;
    let yg = y_generator(&rep, rba, &pair, &xg, tol)?;
    if yg.beta <= 0.0 {
        return Err(RbaError::LemmaViolation(format!("β = {} is not positive", yg.beta)));
    }
    let exact = rba.is_exact();
    let snap = |v: f64| snap_rational(v, tol.eps_residual * v.abs().max(1.0), SNAP_MAX_DENOMINATOR);
    let (a, beta, field_mode, verdicts, overall) = match (exact, snap(xg.a), snap(yg.beta)) {
        (true, Some(a), Some(b)) => {
            let verdicts = hilbert_all_places(&a, &b)?;
            let overall = if verdicts.iter().all(|v| v.value == 1) {
                SplitVerdict::Split
            } else {
                SplitVerdict::Division
            };
            (Scalar::Exact(a), Scalar::Exact(b), FieldMode::Rational, verdicts, overall)
        }
        _ => (
            Scalar::Float(xg.a),
            Scalar::Float(yg.beta),
            FieldMode::Real,
            Vec::new(),
            SplitVerdict::RealSplitOnly,
        ),
    };
    Ok(QuaternionSymbol {
        a,
        beta,
        field_mode,
        verdicts,
        overall,
        pair: (pair.p, pair.p_star),
        ell: yg.ell,
        anticommutator: yg.anticommutator,
        x_square_residual: xg.residual,
    })
}

// ---------------------------------------------------------------- Hilbert

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = RbaError;
    fn from_str(s: &str) -> Result<Place> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞" | "oo") {
            return Ok(Place::Infinity);
        }
        let p: u64 = t.parse().map_err(|_| RbaError::Domain(format!("bad place '{t}'")))?;
        if !is_prime(p) {
            return Err(RbaError::Domain(format!("{p} is not prime")));
        }
        Ok(Place::Prime(p))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Integer in the square class of a nonzero rational: `p/q ↦ p q`.
fn square_class_integer(q: &Rational) -> Result<BigInt> {
    if q.is_zero() {
        return Err(RbaError::Domain("Hilbert symbol of zero".into()));
    }
    Ok(q.numer() * q.denom())
}

fn split_valuation(n: &BigInt, p: &BigInt) -> (u64, BigInt) {
    let mut v = 0;
    let mut u = n.clone();
    loop {
        let (d, r) = u.div_rem(p);
        if !r.is_zero() {
            return (v, u);
        }
        u = d;
        v += 1;
    }
}

fn legendre(u: &BigInt, p: &BigInt) -> i8 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Local Hilbert symbol `(a, b)_v` for nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    let a = square_class_integer(a)?;
    let b = square_class_integer(b)?;
    Ok(match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            if !is_prime(p) {
                return Err(RbaError::Domain(format!("{p} is not prime")));
            }
            let pb = BigInt::from(p);
            let (alpha, u) = split_valuation(&a, &pb);
            let (beta, v) = split_valuation(&b, &pb);
            if p == 2 {
                let m8 = |x: &BigInt| x.mod_floor(&BigInt::from(8)).to_u64().unwrap();
                let (u8_, v8) = (m8(&u), m8(&v));
                let eps = |x: u64| ((x - 1) / 2) % 2;
                let omega = |x: u64| ((x * x - 1) / 8) % 2;
                let e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
                if e % 2 == 0 {
                    1
                } else {
                    -1
                }
            } else {
                let eps_p = ((p - 1) / 2) % 2;
                let mut s: i8 = if (alpha * beta * eps_p) % 2 == 0 { 1 } else { -1 };
                if beta % 2 == 1 {
                    s *= legendre(&u, &pb);
                }
                if alpha % 2 == 1 {
                    s *= legendre(&v, &pb);
                }
                s
            }
        }
    })
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn prime_factors(n: &BigInt, out: &mut Vec<u64>) -> Result<()> {
    let mut m = n.abs();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > m {
            break;
        }
        if (&m % &bd).is_zero() {
            out.push(d);
            while (&m % &bd).is_zero() {
                m /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        let bound = BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT);
        match m.to_u64() {
            Some(q) if m < bound => out.push(q),
            _ => return Err(RbaError::Domain(format!("cannot factor {m} for Hilbert symbols"))),
        }
    }
    Ok(())
}

/// `∞`, 2, and every prime dividing a numerator or denominator.
pub fn relevant_places(a: &Rational, b: &Rational) -> Result<Vec<Place>> {
    let mut primes = vec![2u64];
    for q in [a, b] {
        prime_factors(q.numer(), &mut primes)?;
        prime_factors(q.denom(), &mut primes)?;
    }
    primes.sort_unstable();
    primes.dedup();
    let mut places: Vec<Place> = primes.into_iter().map(Place::Prime).collect();
    places.push(Place::Infinity);
    Ok(places)
}

pub fn hilbert_all_places(a: &Rational, b: &Rational) -> Result<Vec<PlaceSymbol>> {
    relevant_places(a, b)?
        .into_iter()
        .map(|place| Ok(PlaceSymbol { place, value: hilbert_symbol(a, b, place)? }))
        .collect()
}

/// `Π_v (a, b)_v`, which is 1 by the product formula.
pub fn hilbert_product(a: &Rational, b: &Rational) -> Result<i8> {
    Ok(hilbert_all_places(a, b)?.iter().map(|v| v.value).product())
}

// ------------------------------------------------------- explicit images

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuaternionCheck {
    pub homomorphism_residual: f64,
    pub star_residual: f64,
    pub trace_residual: f64,
    /// Images span ℍ as a real vector space.
    pub spans: bool,
    pub reduced_charpolys: Vec<[f64; 3]>,
}

/// Check that `images[i] = X(b_i)` is a *-homomorphism into ℍ whose
/// reduced trace matches `chi`.
pub fn quaternion_verify(
    rba: &Rba,
    images: &[Quaternion<f64>],
    chi: &[f64],
    tol: &ToleranceConfig,
) -> Result<QuaternionCheck> {
    let r = rba.rank();
    if images.len() != r || chi.len() != r {
        return Err(RbaError::Structural(format!("need {r} images and character values")));
    }
    let qmax = |q: &Quaternion<f64>| q.coords().iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let scale = images.iter().map(qmax).fold(1.0, f64::max);
    let mut hom = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            let mut diff = images[i].clone() * images[j].clone();
            for (k, img) in images.iter().enumerate() {
                let l = rba.lambda(i, j, k);
                if l != 0.0 {
                    diff = diff - img.scale(l);
                }
            }
            let d = qmax(&diff);
            if d >= tol.eps_residual * scale * scale.max(rba.max_abs_lambda()) {
                return Err(RbaError::Representation {
                    what: format!("X(b{i}) X(b{j}) differs from Σ_k λ_{i}{j}k X(b_k)"),
                    residual: d,
                });
            }
            hom = hom.max(d);
        }
    }
    let star = (0..r)
        .map(|i| qmax(&(images[rba.star(i)].clone() - images[i].conj())))
        .fold(0.0, f64::max);
    if star >= tol.eps_residual * scale {
        return Err(RbaError::Representation {
            what: "images do not respect the involution".into(),
            residual: star,
        });
    }
    let tr = images
        .iter()
        .zip(chi)
        .map(|(q, c)| (q.trace() - c).abs())
        .fold(0.0, f64::max);
    if tr >= tol.eps_residual * scale {
        return Err(RbaError::Representation {
            what: "reduced trace does not match the character".into(),
            residual: tr,
        });
    }
    let m = DMatrix::from_fn(4, r, |c, i| images[i].coords()[c]);
    Ok(QuaternionCheck {
        homomorphism_residual: hom,
        star_residual: star,
        trace_residual: tr,
        spans: linalg::rank(&m, tol.eps_cluster) == 4,
        reduced_charpolys: images.iter().map(|q| q.reduced_charpoly()).collect(),
    })
}

/// Exact homomorphism check over any field; returns the first failing
/// `(i, j)`.
pub fn homomorphism_defect<T: QuatField>(
    rank: usize,
    lambda: impl Fn(usize, usize, usize) -> T,
    images: &[Quaternion<T>],
) -> Option<(usize, usize)> {
    for i in 0..rank {
        for j in 0..rank {
            let mut acc = Quaternion::real(T::zero());
            for (k, img) in images.iter().enumerate() {
                let l = lambda(i, j, k);
                if !l.is_zero() {
                    acc = acc + img.scale(l);
                }
            }
            if images[i].clone() * images[j].clone() != acc {
                return Some((i, j));
            }
        }
    }
    None
}

/// Reduced characteristic polynomial `u² - T u + N` of a real matrix that
/// represents a quaternion by left multiplication (dimension 4 per copy):
/// `T = tr(M)/(d/2)`, `N = (T² - tr(M²)/(d/2)) / 2`. Returned as `[N, -T, 1]`.
pub fn reduced_charpoly_from_matrix(m: &DMatrix<f64>) -> [f64; 3] {
    let half = m.nrows() as f64 / 2.0;
    let t = m.trace() / half;
    let t2 = (m * m).trace() / half;
    [(t * t - t2) / 2.0, -t, 1.0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn unit_relations() {
        let one = 1.0;
        let i = Quaternion::new(0.0, one, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, one, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, one);
        assert_eq!(i.clone() * i.clone(), Quaternion::real(-1.0));
        assert_eq!(i.clone() * j.clone(), k.clone());
        assert_eq!(j.clone() * i.clone(), -k.clone());
        assert_eq!(k.clone() * k, Quaternion::real(-1.0));
    }

    #[test]
    fn hilbert_basics() {
        let m1 = rat(-1, 1);
        assert_eq!(hilbert_symbol(&m1, &m1, Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, Place::Prime(3)).unwrap(), 1);
        for p in [2, 3, 5, 7] {
            assert_eq!(hilbert_symbol(&rat(-3, 1), &rat(4, 1), Place::Prime(p)).unwrap(), 1);
            assert_eq!(hilbert_symbol(&rat(7, 5), &rat(1, 1), Place::Prime(p)).unwrap(), 1);
        }
        assert!(hilbert_symbol(&rat(0, 1), &m1, Place::Infinity).is_err());
        assert_eq!(hilbert_product(&rat(-3, 7), &rat(10, 9)).unwrap(), 1);
    }

    #[test]
    fn places_parse() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Prime(7));
        assert!("8".parse::<Place>().is_err());
    }

    #[test]
    fn reduced_charpoly_of_left_multiplication() {
        // left multiplication by 1 + 2i on ℍ ≅ ℝ⁴
        let q = Quaternion::new(1.0, 2.0, 0.0, 0.0);
        let basis = [
            Quaternion::new(1.0, 0.0, 0.0, 0.0),
            Quaternion::new(0.0, 1.0, 0.0, 0.0),
            Quaternion::new(0.0, 0.0, 1.0, 0.0),
            Quaternion::new(0.0, 0.0, 0.0, 1.0),
        ];
        let m = DMatrix::from_fn(4, 4, |r, c| (q.clone() * basis[c].clone()).coords()[r]);
        let cp = reduced_charpoly_from_matrix(&m);
        let expect = q.reduced_charpoly();
        for (a, b) in cp.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
