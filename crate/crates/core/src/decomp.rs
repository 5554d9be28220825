//! Decomposition of the semisimple algebra spanned by the basis into its
//! simple components.
//!
//! The pipeline is: left-regular matrices → center → central primitive
//! idempotents (Lagrange interpolation in a random central element) →
//! characters and multiplicities → real *-representations.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::degree::DegreeMap;
use crate::error::{RbaError, Result};
use crate::linalg;
use crate::rba::Rba;
use crate::rng;
use crate::scalar::{snap_rational, Rational, Scalar, SNAP_MAX_DENOMINATOR};
use crate::tolerance::ToleranceConfig;

const MAX_ATTEMPTS: u64 = 8;
// Separate random streams per stage so stages do not share samples.
const IDEMPOTENT_STREAM: u64 = 0x1de_0000;
const EXTRACT_STREAM: u64 = 0xe87_0000;

/// Left-regular matrices, `(L_i)_{kj} = λ_ijk`.
#[derive(Clone, Debug)]
pub struct RegularRep {
    pub mats: Vec<DMatrix<f64>>,
}

pub fn regular_rep(rba: &Rba) -> RegularRep {
    let r = rba.rank();
    let mats = (0..r)
        .map(|i| DMatrix::from_fn(r, r, |k, j| rba.lambda(i, j, k)))
        .collect();
    RegularRep { mats }
}

impl RegularRep {
    pub fn of(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let r = self.mats.len();
        let mut out = DMatrix::zeros(r, r);
        for (c, m) in coeffs.iter().zip(&self.mats) {
            if *c != 0.0 {
                out += m * *c;
            }
        }
        out
    }

    pub fn of_complex(&self, coeffs: &[Complex64]) -> DMatrix<Complex64> {
        let r = self.mats.len();
        let mut out = DMatrix::<Complex64>::zeros(r, r);
        for (c, m) in coeffs.iter().zip(&self.mats) {
            if !c.is_zero() {
                out += linalg::to_complex(m) * *c;
            }
        }
        out
    }

    /// Largest entry of `L_i L_j - Σ_k λ_ijk L_k`.
    pub fn product_residual(&self, rba: &Rba) -> f64 {
        product_residual(&self.mats, rba)
    }
}

fn product_residual(mats: &[DMatrix<f64>], rba: &Rba) -> f64 {
    let r = rba.rank();
    let mut worst = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            let mut diff = &mats[i] * &mats[j];
            for (k, m) in mats.iter().enumerate() {
                let l = rba.lambda(i, j, k);
                if l != 0.0 {
                    diff -= m * l;
                }
            }
            worst = worst.max(linalg::max_abs(&diff));
        }
    }
    worst
}

/// Orthonormal basis (coefficient vectors) of the center `Z(A)`.
pub fn center_basis(rba: &Rba, tol: &ToleranceConfig) -> Result<Vec<Vec<f64>>> {
    let r = rba.rank();
    // row (i, l): Σ_k c_k (λ_kil - λ_ikl) = 0
    let m = DMatrix::from_fn(r * r, r, |row, k| {
        let (i, l) = (row / r, row % r);
        rba.lambda(k, i, l) - rba.lambda(i, k, l)
    });
    let ns = linalg::null_space(&m, tol.eps_cluster);
    let smax = ns.singular_values.first().copied().unwrap_or(0.0);
    if smax > 0.0 {
        let lo = tol.eps_cluster * 1e-3 * smax;
        let hi = tol.eps_cluster * 1e2 * smax;
        if let Some(&s) = ns.singular_values.iter().find(|&&s| s > lo && s < hi) {
            return Err(RbaError::CenterRankAmbiguous {
                sigma: s,
                threshold: ns.threshold,
            });
        }
    }
    Ok((0..ns.basis.ncols())
        .map(|c| ns.basis.column(c).iter().copied().collect())
        .collect())
}

/// A central primitive idempotent `e = Σ c_i b_i` of the complexified algebra.
#[derive(Clone, Debug)]
pub struct CentralIdempotent {
    pub coeffs: Vec<Complex64>,
    /// `n_χ`, the degree of the matching irreducible character.
    pub block_dim: usize,
    /// Rank of the left-regular action of `e` (the component dimension).
    pub regular_rank: usize,
    /// False when `regular_rank` is not a perfect square.
    pub split: bool,
}

impl CentralIdempotent {
    pub fn is_real(&self, eps: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= eps)
    }

    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }
}

/// Residuals of the idempotent identities: `max(|e² - e|)`, `max(|e f|)`
/// for distinct pairs, and `|Σ e - b_0|`.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IdempotentResiduals {
    pub square: f64,
    pub orthogonality: f64,
    pub completeness: f64,
}

impl IdempotentResiduals {
    pub fn max(&self) -> f64 {
        self.square.max(self.orthogonality).max(self.completeness)
    }
}

pub fn idempotent_residuals(rba: &Rba, idem: &[CentralIdempotent]) -> IdempotentResiduals {
    let vmax = |v: &[Complex64]| v.iter().fold(0.0f64, |a, b| a.max(b.norm()));
    let mut res = IdempotentResiduals::default();
    let mut total = vec![Complex64::zero(); rba.rank()];
    for (a, e) in idem.iter().enumerate() {
        let sq = rba.mul_complex(&e.coeffs, &e.coeffs);
        let d: Vec<Complex64> = sq.iter().zip(&e.coeffs).map(|(x, y)| x - y).collect();
        res.square = res.square.max(vmax(&d));
        for f in idem.iter().skip(a + 1) {
            res.orthogonality = res.orthogonality.max(vmax(&rba.mul_complex(&e.coeffs, &f.coeffs)));
        }
        for (t, c) in total.iter_mut().zip(&e.coeffs) {
            *t += c;
        }
    }
    total[0] -= Complex64::new(1.0, 0.0);
    res.completeness = vmax(&total);
    res
}

/// Central primitive idempotents via a seeded random central element `z`:
/// its action on the center has one eigenvalue per component, and
/// `e_λ = Π_{μ≠λ} (z - μ)/(λ - μ)`.
pub fn central_idempotents(rba: &Rba, tol: &ToleranceConfig) -> Result<Vec<CentralIdempotent>> {
    tol.validate()?;
    let r = rba.rank();
    let zb = center_basis(rba, tol)?;
    let k = zb.len();
    let one: Vec<Complex64> = {
        let mut v = vec![Complex64::zero(); r];
        v[0] = Complex64::new(1.0, 0.0);
        v
    };
    if k == 1 {
        return Ok(vec![finish_idempotent(rba, one, tol)]);
    }
    let reg = regular_rep(rba);

    for attempt in 0..MAX_ATTEMPTS {
        let w = rng::symmetric_vec(&mut rng::seeded(tol.rng_seed, IDEMPOTENT_STREAM + attempt), k);
        let z: Vec<f64> = (0..r).map(|i| (0..k).map(|j| w[j] * zb[j][i]).sum()).collect();
        let action = DMatrix::from_fn(k, k, |a, b| {
            let prod = rba.mul(&z, &zb[b]);
            prod.iter().zip(&zb[a]).map(|(x, y)| x * y).sum::<f64>()
        });
        let eig: Vec<Complex64> = action.complex_eigenvalues().iter().copied().collect();
        let collision = eig.iter().enumerate().any(|(a, x)| {
            eig.iter()
                .skip(a + 1)
                .any(|y| (x - y).norm() < tol.eps_cluster * (1.0 + x.norm()))
        });
        if collision {
            continue;
        }
        let zc: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let lz = reg.of_complex(&zc);
        let mut idem = Vec::with_capacity(k);
        for (a, lam) in eig.iter().enumerate() {
            // e ← (z - μ) e / (λ - μ), acting by the regular matrix of z
            let mut e = nalgebra::DVector::from_vec(one.clone());
            for (b, mu) in eig.iter().enumerate() {
                if a == b {
                    continue;
                }
                e = (&lz * &e - &e * *mu) / (lam - mu);
            }
            idem.push(finish_idempotent(rba, e.iter().copied().collect(), tol));
        }
        let res = idempotent_residuals(rba, &idem);
        if res.max() > tol.eps_residual {
            continue;
        }
        return Ok(idem);
    }
    Err(RbaError::IdempotentSeparation(MAX_ATTEMPTS as usize))
}

fn finish_idempotent(rba: &Rba, mut coeffs: Vec<Complex64>, tol: &ToleranceConfig) -> CentralIdempotent {
    for c in coeffs.iter_mut() {
        if c.im.abs() <= tol.eps_zero {
            c.im = 0.0;
        }
    }
    let le = regular_rep(rba).of_complex(&coeffs);
    let regular_rank = linalg::rank(&le, tol.eps_cluster);
    let block_dim = (regular_rank as f64).sqrt().round() as usize;
    CentralIdempotent {
        coeffs,
        block_dim,
        regular_rank,
        split: block_dim * block_dim == regular_rank,
    }
}

/// An irreducible character with its multiplicity and (once computed) its
/// Frobenius-Schur indicator.
#[derive(Clone, Debug)]
pub struct Character {
    pub degree: usize,
    pub values: Vec<Complex64>,
    /// Values snapped to small-denominator rationals when all are close to one.
    pub rational_values: Option<Vec<Rational>>,
    pub multiplicity: Scalar,
    /// `m` from the idempotent expansion and from the trace decomposition.
    pub multiplicity_routes: (f64, f64),
    pub nu: Option<i8>,
}

impl Character {
    pub fn is_real_valued(&self, eps: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= eps * (1.0 + v.re.abs()))
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn multiplicity_f64(&self) -> f64 {
        self.multiplicity.to_f64()
    }
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    /// δ first, then by degree, then lexicographically by values.
    pub characters: Vec<Character>,
    /// Aligned with `characters`.
    pub idempotents: Vec<CentralIdempotent>,
    pub order: f64,
}

impl CharacterTable {
    pub fn degrees(&self) -> Vec<usize> {
        self.characters.iter().map(|c| c.degree).collect()
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn sum_squared_degrees(&self) -> usize {
        self.characters.iter().map(|c| c.degree * c.degree).sum()
    }

    /// `Σ_ψ m_ψ n_ψ`, which equals the order `n`.
    pub fn weighted_degree_sum(&self) -> Scalar {
        let exact: Option<Vec<&Rational>> = self.characters.iter().map(|c| c.multiplicity.as_rational()).collect();
        match exact {
            Some(ms) => Scalar::Exact(
                ms.into_iter()
                    .zip(&self.characters)
                    .fold(Rational::zero(), |acc, (m, c)| acc + m * Rational::from_integer(c.degree.into())),
            ),
            None => Scalar::Float(
                self.characters
                    .iter()
                    .map(|c| c.multiplicity_f64() * c.degree as f64)
                    .sum(),
            ),
        }
    }

    /// `Σ_i ψ(b_i)` per character.
    pub fn row_sums(&self) -> Vec<Complex64> {
        self.characters.iter().map(|c| c.values.iter().sum()).collect()
    }

    pub fn nu(&self) -> Option<Vec<i8>> {
        self.characters.iter().map(|c| c.nu).collect()
    }
}

/// Build the character table from the central idempotents.
///
/// `χ(b_i) = tr(L_i L(e_χ)) / n_χ`. Multiplicities come from two routes
/// that must agree: the `b_0` coefficient of `e_χ` (`m_χ = n c_0 / n_χ`)
/// and the linear system `Σ_ψ m_ψ ψ(b_i) = n [i = 0]`.
pub fn character_table(
    rba: &Rba,
    dm: &DegreeMap,
    idempotents: &[CentralIdempotent],
    tol: &ToleranceConfig,
) -> Result<CharacterTable> {
    let r = rba.rank();
    let n = dm.order_f64();
    let reg = regular_rep(rba);
    let regc: Vec<DMatrix<Complex64>> = reg.mats.iter().map(linalg::to_complex).collect();

    let mut rows: Vec<(Vec<Complex64>, usize, f64, CentralIdempotent)> = Vec::new();
    for e in idempotents {
        if !e.split || e.block_dim == 0 {
            return Err(RbaError::Extraction(format!(
                "non-split component detected (regular rank {})",
                e.regular_rank
            )));
        }
        let le = reg.of_complex(&e.coeffs);
        let deg = e.block_dim as f64;
        let values: Vec<Complex64> = regc
            .iter()
            .map(|li| {
                let mut t = Complex64::zero();
                for a in 0..r {
                    for b in 0..r {
                        t += li[(a, b)] * le[(b, a)];
                    }
                }
                t / deg
            })
            .collect();
        let m_a = n * e.coeffs[0].re / deg;
        rows.push((values, e.block_dim, m_a, e.clone()));
    }

    // Route (b): least squares for Σ_ψ m_ψ ψ(b_i) = n [i = 0].
    let k = rows.len();
    let psi = DMatrix::from_fn(r, k, |i, c| rows[c].0[i]);
    let mut rhs = nalgebra::DVector::<Complex64>::zeros(r);
    rhs[0] = Complex64::new(n, 0.0);
    let m_b = psi
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| RbaError::Inconsistency(format!("multiplicity solve failed: {e}")))?;

    let delta = dm.as_f64();
    let scale = delta.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    let mut characters: Vec<(Character, CentralIdempotent)> = Vec::with_capacity(k);
    for (idx, (values, degree, m_a, e)) in rows.into_iter().enumerate() {
        let mb = m_b[idx].re;
        if (m_a - mb).abs() > tol.eps_residual * m_a.abs().max(1.0) {
            return Err(RbaError::MultiplicityInconsistency {
                index: idx,
                via_idempotent: m_a,
                via_trace: mb,
            });
        }
        let rational_values = values
            .iter()
            .map(|v| {
                if v.im.abs() > tol.eps_zero * scale {
                    return None;
                }
                snap_rational(v.re, tol.eps_zero * scale.max(v.re.abs()), SNAP_MAX_DENOMINATOR)
            })
            .collect::<Option<Vec<_>>>();
        let multiplicity = match (rba.is_exact(), snap_rational(m_a, tol.eps_zero * m_a.abs().max(1.0), SNAP_MAX_DENOMINATOR)) {
            (true, Some(q)) => Scalar::Exact(q),
            _ => Scalar::Float(m_a),
        };
        characters.push((
            Character {
                degree,
                values,
                rational_values,
                multiplicity,
                multiplicity_routes: (m_a, mb),
                nu: None,
            },
            e,
        ));
    }

    // Find δ and order the rest.
    let is_delta = |c: &Character| {
        c.degree == 1
            && c.values
                .iter()
                .zip(&delta)
                .all(|(v, d)| (v - Complex64::new(*d, 0.0)).norm() <= tol.eps_residual * scale.max(1.0) * 1e2)
    };
    let di = characters
        .iter()
        .position(|(c, _)| is_delta(c))
        .ok_or_else(|| RbaError::Inconsistency("degree map is not among the irreducible characters".into()))?;
    let first = characters.remove(di);
    let eps = tol.eps_cluster;
    characters.sort_by(|(a, _), (b, _)| a.degree.cmp(&b.degree).then_with(|| lex_values(&a.values, &b.values, eps)));
    characters.insert(0, first);

    let (characters, idempotents): (Vec<_>, Vec<_>) = characters.into_iter().unzip();
    let table = CharacterTable {
        characters,
        idempotents,
        order: n,
    };
    let md = table.characters[0].multiplicity_f64();
    if (md - 1.0).abs() > tol.eps_residual {
        return Err(RbaError::Inconsistency(format!("multiplicity of δ is {md}, expected 1")));
    }
    Ok(table)
}

fn lex_values(a: &[Complex64], b: &[Complex64], eps: f64) -> Ordering {
    for (x, y) in a.iter().zip(b).skip(1) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > eps * (1.0 + p.abs()) {
                return p.total_cmp(&q);
            }
        }
    }
    Ordering::Equal
}

/// Degree map, idempotents and character table in one call.
pub fn decompose(rba: &Rba, dm: &DegreeMap, tol: &ToleranceConfig) -> Result<CharacterTable> {
    let idem = central_idempotents(rba, tol)?;
    character_table(rba, dm, &idem, tol)
}

/// A real matrix representation, one matrix per basis index.
#[derive(Clone, Debug)]
pub struct StarRep {
    pub dim: usize,
    pub mats: Vec<DMatrix<f64>>,
}

impl StarRep {
    pub fn new(mats: Vec<DMatrix<f64>>) -> Result<Self> {
        let dim = mats.first().map(|m| m.nrows()).unwrap_or(0);
        if mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(RbaError::Structural("representation matrices must be square of equal size".into()));
        }
        Ok(StarRep { dim, mats })
    }

    /// Largest entry of `X_i X_j - Σ_k λ_ijk X_k`, together with `|X_0 - I|`.
    pub fn product_residual(&self, rba: &Rba) -> f64 {
        let id = DMatrix::<f64>::identity(self.dim, self.dim);
        product_residual(&self.mats, rba).max(linalg::max_abs(&(&self.mats[0] - id)))
    }

    /// Largest entry of `X_{i*} - X_iᵀ`.
    pub fn star_residual(&self, rba: &Rba) -> f64 {
        (0..self.mats.len())
            .map(|i| linalg::max_abs(&(&self.mats[rba.star(i)] - self.mats[i].transpose())))
            .fold(0.0, f64::max)
    }

    pub fn traces(&self) -> Vec<f64> {
        self.mats.iter().map(|m| m.trace()).collect()
    }

    /// Image of a linear combination of basis elements.
    pub fn of(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (c, m) in coeffs.iter().zip(&self.mats) {
            if *c != 0.0 {
                out += m * *c;
            }
        }
        out
    }

    /// `M⁻¹ X_i M` for every `i`.
    pub fn conjugate(&self, m: &DMatrix<f64>) -> Result<StarRep> {
        let inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| RbaError::Domain("conjugating matrix is singular".into()))?;
        StarRep::new(self.mats.iter().map(|x| &inv * x * m).collect())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &StarRep) -> Result<StarRep> {
        if self.mats.len() != other.mats.len() {
            return Err(RbaError::Structural("direct sum of representations of different rank".into()));
        }
        let d = self.dim + other.dim;
        StarRep::new(
            self.mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| {
                    let mut m = DMatrix::zeros(d, d);
                    m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                    m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                    m
                })
                .collect(),
        )
    }
}

/// Left-regular matrices in the basis orthonormal for `τ(a b*)`:
/// `D L_i D⁻¹` with `D = diag(√(n δ_i))`. On a standard basis these
/// satisfy `L̃_{i*} = L̃_iᵀ`.
pub fn orthonormal_regular(rba: &Rba, dm: &DegreeMap) -> Vec<DMatrix<f64>> {
    let n = dm.order_f64();
    let d: Vec<f64> = dm.as_f64().iter().map(|x| (n * x).sqrt()).collect();
    regular_rep(rba)
        .mats
        .into_iter()
        .map(|m| DMatrix::from_fn(m.nrows(), m.ncols(), |a, b| d[a] * m[(a, b)] / d[b]))
        .collect()
}

/// Extract an irreducible real *-representation for the character at
/// `index` of `table`.
///
/// The orthonormalized regular representation is restricted to the
/// `e_χ`-isotypic subspace. A random symmetric element acts there with
/// eigenspaces of dimension `d`, the real dimension of the irreducible
/// module; a vector from one eigenspace generates an irreducible submodule,
/// which is orthonormalized and used to restrict every basis matrix.
///
/// `d = n_χ` unless the table records `ν(χ) = -1`, in which case the
/// component is a matrix ring over ℍ, `d = 2 n_χ`, and the traces of the
/// result are `2χ`.
pub fn star_rep_extract(
    rba: &Rba,
    dm: &DegreeMap,
    table: &CharacterTable,
    index: usize,
    tol: &ToleranceConfig,
) -> Result<StarRep> {
    let ch = table
        .characters
        .get(index)
        .ok_or_else(|| RbaError::Precondition(format!("no character at index {index}")))?;
    let r = rba.rank();
    if !ch.is_real_valued(tol.eps_residual) {
        return Err(RbaError::Precondition(format!(
            "character {index} is not real-valued; no real *-representation affords it"
        )));
    }
    let quaternionic = ch.nu == Some(-1);
    if ch.degree == 1 && !quaternionic {
        return StarRep::new(ch.values.iter().map(|v| DMatrix::from_element(1, 1, v.re)).collect());
    }
    if !crate::degree::is_standard(rba, dm, tol.eps_residual) {
        return Err(RbaError::Precondition("basis is not standard; call standardize first".into()));
    }

    let lt = orthonormal_regular(rba, dm);
    let e = table.idempotents[index].real_coeffs();
    let p = {
        let mut m = DMatrix::zeros(r, r);
        for (c, l) in e.iter().zip(&lt) {
            m += l * *c;
        }
        m
    };
    let u = linalg::column_span(&p, tol.eps_cluster);
    let nd = ch.degree;
    if u.ncols() != nd * nd {
        return Err(RbaError::Extraction(format!(
            "isotypic subspace has dimension {}, expected {}",
            u.ncols(),
            nd * nd
        )));
    }
    let dim = if quaternionic { 2 * nd } else { nd };
    let traces: Vec<f64> = ch.real_values().iter().map(|v| v * (dim / nd) as f64).collect();
    let mut last = String::new();

    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng::seeded(tol.rng_seed, EXTRACT_STREAM + attempt);
        let c = rng::symmetric_vec(&mut rng, r);
        let mut h = DMatrix::zeros(r, r);
        for i in 0..r {
            h += (&lt[i] + &lt[rba.star(i)]) * (0.5 * c[i]);
        }
        let hu = u.transpose() * &h * &u;
        let (ev, vecs) = linalg::symmetric_eigen(&hu);
        let spread = ev.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
        // first cluster of size nd
        let mut start = 0;
        let mut chosen = None;
        while start < ev.len() {
            let mut end = start + 1;
            while end < ev.len() && (ev[end] - ev[start]).abs() <= tol.eps_cluster * spread {
                end += 1;
            }
            if end - start == dim {
                chosen = Some((start, end));
                break;
            }
            start = end;
        }
        let Some((s0, s1)) = chosen else {
            last = format!("no eigenvalue of multiplicity {dim} for the symmetric probe (attempt {attempt})");
            continue;
        };
        let w = rng::symmetric_vec(&mut rng, s1 - s0);
        let mut v = nalgebra::DVector::zeros(u.ncols());
        for (t, col) in (s0..s1).enumerate() {
            v += vecs.column(col) * w[t];
        }
        let v = &u * v;
        let krylov = DMatrix::from_fn(r, r, |row, col| (&lt[col] * &v)[row]);
        let q = linalg::column_span(&krylov, tol.eps_cluster);
        if q.ncols() != dim {
            last = format!("cyclic subspace has dimension {}, expected {dim}", q.ncols());
            continue;
        }
        let rep = StarRep::new(lt.iter().map(|l| q.transpose() * l * &q).collect())?;
        let trace_res = rep
            .traces()
            .iter()
            .zip(&traces)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = rba.max_abs_lambda().max(1.0);
        if trace_res > tol.eps_residual * scale
            || rep.product_residual(rba) > tol.eps_residual * scale
            || rep.star_residual(rba) > tol.eps_residual * scale
        {
            last = format!("extracted representation failed residual checks (trace residual {trace_res:e})");
            continue;
        }
        return Ok(rep);
    }
    let hint = if ch.nu.is_none() { " (indicator unset; a quaternionic component needs ν = -1)" } else { "" };
    Err(RbaError::Extraction(format!("{last}; after {MAX_ATTEMPTS} attempts{hint}")))
}

/// Result of [`symmetrize`]: the *-representation and the matrices of the
/// intermediate steps.
#[derive(Clone, Debug)]
pub struct Symmetrized {
    pub rep: StarRep,
    /// `A = Σ_i Φ(b_i) Φ(b_i)ᵀ / δ_i`.
    pub a: DMatrix<f64>,
    pub a_eigenvalues: Vec<f64>,
    /// Symmetric square root of `A`.
    pub b: DMatrix<f64>,
}

/// Turn a real representation `Φ` into a real *-representation
/// `X = B⁻¹ Φ B`, where `B` is the symmetric square root of the positive
/// definite `A = Σ_i Φ(b_i) Φ(b_i)ᵀ / δ_i`.
pub fn symmetrize(rba: &Rba, dm: &DegreeMap, phi: &[DMatrix<f64>], tol: &ToleranceConfig) -> Result<Symmetrized> {
    if phi.len() != rba.rank() {
        return Err(RbaError::Structural(format!(
            "{} matrices for rank {}",
            phi.len(),
            rba.rank()
        )));
    }
    let rep_in = StarRep::new(phi.to_vec())?;
    let scale = phi.iter().map(linalg::max_abs).fold(1.0, f64::max);
    let res = rep_in.product_residual(rba);
    if res > tol.eps_residual * scale * scale {
        return Err(RbaError::Representation {
            what: "input is not a representation".into(),
            residual: res,
        });
    }
    let d = rep_in.dim;
    let mut a = DMatrix::zeros(d, d);
    for (i, m) in phi.iter().enumerate() {
        a += m * m.transpose() / dm.get(i);
    }
    let (b, ev) = linalg::symmetric_sqrt(&a);
    let amax = ev.iter().fold(0.0f64, |x, y| x.max(y.abs()));
    if let Some((idx, &bad)) = ev.iter().enumerate().find(|(_, &v)| v <= tol.eps_zero * amax) {
        return Err(RbaError::NotPositiveDefinite { index: idx, eigenvalue: bad });
    }
    let (evs, q) = linalg::symmetric_eigen(&a);
    let inv_sqrt = nalgebra::DVector::from_iterator(d, evs.iter().map(|v| 1.0 / v.sqrt()));
    let b_inv = &q * DMatrix::from_diagonal(&inv_sqrt) * q.transpose();
    let rep = StarRep::new(phi.iter().map(|m| &b_inv * m * &b).collect())?;
    Ok(Symmetrized {
        rep,
        a,
        a_eigenvalues: ev,
        b,
    })
}

#[derive(Clone, Debug)]
pub struct CharpolyEntry {
    pub index: usize,
    /// Coefficients of `t^0 .. t^d`, monic.
    pub coeffs: Vec<f64>,
    pub rational: Option<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct CharpolyReport {
    pub entries: Vec<CharpolyEntry>,
    pub all_rational: bool,
}

/// Characteristic polynomials of every `X_i`.
///
/// With rational structure constants the coefficients are rebuilt exactly:
/// the traces of the `X_j` are snapped once, the power sums
/// `tr(X_i^k) = Σ_j c_j tr(X_j)` follow from exact powers `b_i^k = Σ_j c_j b_j`,
/// and Newton's identities give the coefficients. Traces that do not snap are
/// reported as a [`RbaError::LemmaViolation`]. Otherwise every float
/// coefficient is snapped on its own.
pub fn charpoly_check(rep: &StarRep, rba: &Rba, tol: &ToleranceConfig) -> Result<CharpolyReport> {
    let float: Vec<Vec<f64>> = rep.mats.iter().map(linalg::charpoly).collect();
    let exact = if rba.is_exact() {
        let traces: Option<Vec<Rational>> = rep
            .traces()
            .iter()
            .map(|&t| snap_rational(t, tol.eps_residual * t.abs().max(1.0), SNAP_MAX_DENOMINATOR))
            .collect();
        let Some(traces) = traces else {
            return Err(RbaError::LemmaViolation(format!(
                "representation traces {:?} are not rational",
                rep.traces()
            )));
        };
        Some(exact_charpolys(rba, &traces, rep.dim))
    } else {
        None
    };
    let mut entries = Vec::with_capacity(float.len());
    for (index, coeffs) in float.into_iter().enumerate() {
        let rational = match &exact {
            Some(polys) => {
                let poly = &polys[index];
                let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
                let dev = coeffs
                    .iter()
                    .zip(poly)
                    .map(|(c, q)| (c - crate::scalar::rational_to_f64(q)).abs())
                    .fold(0.0, f64::max);
                if dev > tol.eps_residual * scale {
                    return Err(RbaError::Inconsistency(format!(
                        "characteristic polynomial of X(b{index}) deviates by {dev:.3e} from its exact value"
                    )));
                }
                Some(poly.clone())
            }
            None => coeffs
                .iter()
                .map(|&c| snap_rational(c, tol.eps_zero * c.abs().max(1.0) * 10.0, SNAP_MAX_DENOMINATOR))
                .collect(),
        };
        entries.push(CharpolyEntry { index, coeffs, rational });
    }
    let all_rational = entries.iter().all(|e| e.rational.is_some());
    Ok(CharpolyReport { entries, all_rational })
}

/// Exact characteristic polynomials of a `dim`-dimensional representation of
/// an exact algebra whose basis images have the given traces.
fn exact_charpolys(rba: &Rba, traces: &[Rational], dim: usize) -> Vec<Vec<Rational>> {
    let r = rba.rank();
    let lam = |i: usize, j: usize, k: usize| rba.exact_lambda(i, j, k).cloned().unwrap_or_else(Rational::zero);
    (0..r)
        .map(|i| {
            // power sums p_1 .. p_dim
            let mut power: Vec<Rational> = (0..r)
                .map(|j| if j == i { Rational::from_integer(1.into()) } else { Rational::zero() })
                .collect();
            let mut sums = Vec::with_capacity(dim);
            for k in 0..dim {
                if k > 0 {
                    power = (0..r)
                        .map(|m| {
                            (0..r)
                                .filter(|&j| !power[j].is_zero())
                                .map(|j| &power[j] * lam(j, i, m))
                                .fold(Rational::zero(), |a, b| a + b)
                        })
                        .collect();
                }
                sums.push(power.iter().zip(traces).map(|(c, t)| c * t).fold(Rational::zero(), |a, b| a + b));
            }
            // Newton: k e_k = Σ_{j=1..k} (-1)^{j-1} e_{k-j} p_j
            let mut e = vec![Rational::from_integer(1.into())];
            for k in 1..=dim {
                let mut acc = Rational::zero();
                for j in 1..=k {
                    let term = &e[k - j] * &sums[j - 1];
                    if j % 2 == 1 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                e.push(acc / Rational::from_integer((k as i64).into()));
            }
            // ascending coefficients: t^(dim-k) carries (-1)^k e_k
            (0..=dim)
                .map(|pow| {
                    let k = dim - pow;
                    if k % 2 == 0 { e[k].clone() } else { -e[k].clone() }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::degree_map;
    use crate::scalar::Scalar;

    #[test]
    fn rank_one_decomposition() {
        let a = Rba::new(1, vec![0], vec![Scalar::from_int(1)]).unwrap();
        let tol = ToleranceConfig::default();
        let reg = regular_rep(&a);
        assert_eq!(reg.mats[0], DMatrix::from_element(1, 1, 1.0));
        let idem = central_idempotents(&a, &tol).unwrap();
        assert_eq!(idem.len(), 1);
        assert_eq!(idem[0].coeffs, vec![Complex64::new(1.0, 0.0)]);
        let dm = degree_map(&a, &tol).unwrap();
        let t = character_table(&a, &dm, &idem, &tol).unwrap();
        assert_eq!(t.degrees(), vec![1]);
        assert_eq!(t.characters[0].multiplicity, Scalar::from_int(1));
    }

    #[test]
    fn charpoly_of_identity() {
        let a = Rba::new(1, vec![0], vec![Scalar::from_int(1)]).unwrap();
        let rep = StarRep::new(vec![DMatrix::identity(3, 3)]).unwrap();
        let rpt = charpoly_check(&rep, &a, &ToleranceConfig::default()).unwrap();
        assert_eq!(rpt.entries[0].coeffs, vec![-1.0, 3.0, -3.0, 1.0]);
        assert!(rpt.all_rational);
    }
}
