//! Degree map, standard basis, order, and the standard feasible trace.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{RbaError, Result};
use crate::linalg;
use crate::rba::Rba;
use crate::rng;
use crate::scalar::{snap_rational, Rational, Scalar, SNAP_MAX_DENOMINATOR};
use crate::tolerance::ToleranceConfig;

const MAX_ATTEMPTS: u64 = 8;

/// The positive degree map `δ` and the order `n = Σ δ_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeMap {
    pub values: Vec<Scalar>,
    pub order: Scalar,
}

impl DegreeMap {
    pub fn from_scalars(values: Vec<Scalar>) -> Self {
        let order = sum_scalars(&values);
        DegreeMap { values, order }
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64).collect()
    }

    pub fn order_f64(&self) -> f64 {
        self.order.to_f64()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i].to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Scalar::is_exact)
    }
}

fn sum_scalars(values: &[Scalar]) -> Scalar {
    let exact: Option<Vec<&Rational>> = values.iter().map(Scalar::as_rational).collect();
    match exact {
        Some(qs) => Scalar::Exact(qs.into_iter().fold(Rational::zero(), |a, b| a + b)),
        None => Scalar::Float(values.iter().map(Scalar::to_f64).sum()),
    }
}

/// `τ(Σ α_i b_i) = n α_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibleTrace {
    pub order: f64,
}

impl FeasibleTrace {
    pub fn new(dm: &DegreeMap) -> Self {
        FeasibleTrace { order: dm.order_f64() }
    }

    pub fn eval(&self, coeffs: &[f64]) -> f64 {
        self.order * coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn on_basis(&self, i: usize) -> f64 {
        if i == 0 {
            self.order
        } else {
            0.0
        }
    }
}

/// Residual of `δ_i δ_j = Σ_k λ_ijk δ_k` over all `i, j`.
pub fn homomorphism_residual(rba: &Rba, v: &[f64]) -> f64 {
    let r = rba.rank();
    let mut worst = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            let rhs: f64 = (0..r).map(|k| rba.lambda(i, j, k) * v[k]).sum();
            worst = worst.max((v[i] * v[j] - rhs).abs());
        }
    }
    worst
}

fn exact_homomorphism(rba: &Rba, v: &[Rational]) -> bool {
    let r = rba.rank();
    (0..r).all(|i| {
        (0..r).all(|j| {
            let rhs = (0..r).fold(Rational::zero(), |acc, k| {
                acc + rba.exact_lambda(i, j, k).expect("exact rba") * &v[k]
            });
            v[i].clone() * &v[j] == rhs
        })
    })
}

/// The unique one-dimensional representation with all-positive values.
///
/// One-dimensional representations are the common left eigenvectors of
/// the left-regular matrices, normalized so that `δ(b_0) = 1`. A seeded
/// random combination of the regular matrices is diagonalized and every
/// simple real eigenvalue is tested for the homomorphism property.
pub fn degree_map(rba: &Rba, tol: &ToleranceConfig) -> Result<DegreeMap> {
    tol.validate()?;
    let r = rba.rank();
    let scale = rba.max_abs_lambda().max(1.0);
    let mut candidates: Vec<Vec<f64>> = Vec::new();

    for attempt in 0..MAX_ATTEMPTS {
        let c = rng::symmetric_vec(&mut rng::seeded(tol.rng_seed, attempt), r);
        // M = Σ c_i L_iᵀ, (L_iᵀ)_{jk} = λ_ijk
        let m = DMatrix::from_fn(r, r, |j, k| (0..r).map(|i| c[i] * rba.lambda(i, j, k)).sum::<f64>());
        let eig = m.complex_eigenvalues();
        let mut reals: Vec<f64> = eig
            .iter()
            .filter(|z| z.im.abs() <= tol.eps_cluster * (1.0 + z.re.abs()))
            .map(|z| z.re)
            .collect();
        reals.sort_by(f64::total_cmp);
        let mut clusters: Vec<(f64, usize)> = Vec::new();
        for x in reals {
            match clusters.last_mut() {
                Some((mu, count)) if (x - *mu).abs() < tol.eps_cluster * (1.0 + mu.abs()) => *count += 1,
                _ => clusters.push((x, 1)),
            }
        }
        let mut collision = false;
        for (mu, count) in clusters {
            if count > 1 {
                collision = true;
                continue;
            }
            let shifted = &m - DMatrix::<f64>::identity(r, r) * mu;
            let ns = linalg::null_space(&shifted, tol.eps_cluster);
            if ns.basis.ncols() != 1 {
                collision |= ns.basis.ncols() > 1;
                continue;
            }
            let v0 = ns.basis[(0, 0)];
            if v0.abs() < tol.eps_zero {
                continue;
            }
            let v: Vec<f64> = ns.basis.column(0).iter().map(|x| x / v0).collect();
            let vmax = v.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            if homomorphism_residual(rba, &v) > tol.eps_residual * scale * vmax * vmax {
                continue;
            }
            if !candidates.iter().any(|w| same_vector(w, &v, tol.eps_cluster)) {
                candidates.push(v);
            }
        }
        if !collision {
            break;
        }
    }

    let positive: Vec<Vec<f64>> = candidates
        .into_iter()
        .filter(|v| {
            let vmax = v.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            v.iter().all(|&x| x > tol.eps_zero * vmax)
        })
        .collect();
    let delta = match positive.len() {
        0 => return Err(RbaError::NoPositiveDegreeMap),
        1 => positive.into_iter().next().unwrap(),
        k => return Err(RbaError::MultipleDegreeMaps(k)),
    };

    if rba.is_exact() {
        let snapped: Option<Vec<Rational>> = delta
            .iter()
            .map(|&x| snap_rational(x, tol.eps_zero * x.abs().max(1.0), SNAP_MAX_DENOMINATOR))
            .collect();
        if let Some(qs) = snapped {
            if exact_homomorphism(rba, &qs) {
                return Ok(DegreeMap::from_scalars(qs.into_iter().map(Scalar::Exact).collect()));
            }
        }
    }
    Ok(DegreeMap::from_scalars(delta.into_iter().map(Scalar::Float).collect()))
}

fn same_vector(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps * (1.0 + x.abs()))
}

/// Rescale `b_i ↦ t_i b_i` with `t_i = δ_i / λ(i, i*, 0)` so that the
/// coefficient of `b_0` in `b_i b_i*` equals the (new) degree.
///
/// Returns the rescaled algebra and its degree map `t_i δ_i`; on a basis
/// that is already standard every `t_i` is 1 and nothing changes.
pub fn standardize(rba: &Rba, dm: &DegreeMap) -> Result<(Rba, DegreeMap)> {
    let r = rba.rank();
    let mut labels = None;
    if let Some(l) = rba.labels() {
        labels = Some(l.to_vec());
    }

    let exact_inputs: Option<(Vec<Rational>, Vec<Rational>)> = match (rba.is_exact(), dm.is_exact()) {
        (true, true) => {
            let mut ts = Vec::with_capacity(r);
            let mut ds = Vec::with_capacity(r);
            for i in 0..r {
                let c = rba.exact_lambda(i, rba.star(i), 0).unwrap();
                if !c.is_positive() {
                    return Err(RbaError::Axiom(format!(
                        "λ({i},{},0) = {c} is not positive (pseudo-inverse violation)",
                        rba.star(i)
                    )));
                }
                let d = dm.values[i].as_rational().unwrap().clone();
                ts.push(&d / c);
                ds.push(d);
            }
            Some((ts, ds))
        }
        _ => None,
    };

    let out = if let Some((ts, ds)) = exact_inputs {
        let mut lambda = Vec::with_capacity(r * r * r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let l = rba.exact_lambda(i, j, k).unwrap();
                    lambda.push(if l.is_zero() {
                        Rational::zero()
                    } else {
                        l * &ts[i] * &ts[j] / &ts[k]
                    });
                }
            }
        }
        let values = ts.iter().zip(&ds).map(|(t, d)| Scalar::Exact(t * d)).collect();
        (Rba::from_rationals(r, rba.star_map().to_vec(), lambda)?, DegreeMap::from_scalars(values))
    } else {
        let mut ts = Vec::with_capacity(r);
        for i in 0..r {
            let c = rba.lambda(i, rba.star(i), 0);
            if c <= 0.0 {
                return Err(RbaError::Axiom(format!(
                    "λ({i},{},0) = {c} is not positive (pseudo-inverse violation)",
                    rba.star(i)
                )));
            }
            ts.push(dm.get(i) / c);
        }
        let mut lambda = Vec::with_capacity(r * r * r);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    lambda.push(rba.lambda(i, j, k) * ts[i] * ts[j] / ts[k]);
                }
            }
        }
        let values = (0..r).map(|i| Scalar::Float(ts[i] * dm.get(i))).collect();
        (Rba::from_f64(r, rba.star_map().to_vec(), lambda)?, DegreeMap::from_scalars(values))
    };
    let (mut a, d) = out;
    if let Some(l) = labels {
        a = a.with_labels(l)?;
    }
    Ok((a, d))
}

/// True when `λ(i, i*, 0) = δ_i` for every `i`.
pub fn is_standard(rba: &Rba, dm: &DegreeMap, eps: f64) -> bool {
    (0..rba.rank()).all(|i| {
        let is = rba.star(i);
        match (rba.exact_lambda(i, is, 0), dm.values[i].as_rational()) {
            (Some(l), Some(d)) => l == d,
            _ => (rba.lambda(i, is, 0) - dm.get(i)).abs() <= eps * dm.get(i).abs().max(1.0),
        }
    })
}

/// Gram matrix `G_ij = τ(b_i b_j*) = n λ(i, j*, 0)` of the feasible trace.
/// Fails if `G` is not symmetric positive definite.
pub fn gram_matrix(rba: &Rba, dm: &DegreeMap, tol: &ToleranceConfig) -> Result<DMatrix<f64>> {
    let r = rba.rank();
    let n = dm.order_f64();
    let g = DMatrix::from_fn(r, r, |i, j| n * rba.lambda(i, rba.star(j), 0));
    let asym = linalg::max_abs(&(&g - g.transpose()));
    if asym > tol.eps_residual * linalg::max_abs(&g).max(1.0) {
        return Err(RbaError::Axiom(format!("Gram matrix is not symmetric (residual {asym:e})")));
    }
    let (ev, _) = linalg::symmetric_eigen(&g);
    let min = ev.first().copied().unwrap_or(0.0);
    if min <= tol.eps_zero * linalg::max_abs(&g).max(1.0) {
        return Err(RbaError::Axiom(format!(
            "Gram matrix of the feasible trace is not positive definite (smallest eigenvalue {min:e})"
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_rank_one() {
        let a = Rba::new(1, vec![0], vec![Scalar::from_int(1)]).unwrap();
        let tol = ToleranceConfig::default();
        let dm = degree_map(&a, &tol).unwrap();
        assert_eq!(dm.values, vec![Scalar::from_int(1)]);
        assert_eq!(dm.order, Scalar::from_int(1));
        let g = gram_matrix(&a, &dm, &tol).unwrap();
        assert_eq!(g, DMatrix::from_element(1, 1, 1.0));
        assert_eq!(FeasibleTrace::new(&dm).eval(&[3.0]), 3.0);
    }

    #[test]
    fn rescaled_c2_degree_and_standardize() {
        // b_1' = 2 b_1 in C2: b_1'² = 4 b_0, degrees (1, 2)
        let lambda = [1, 0, 0, 1, 0, 1, 4, 0].iter().map(|&x| Scalar::from_int(x)).collect();
        let a = Rba::new(2, vec![0, 1], lambda).unwrap();
        let tol = ToleranceConfig::default();
        let dm = degree_map(&a, &tol).unwrap();
        assert_eq!(dm.values, vec![Scalar::from_int(1), Scalar::from_int(2)]);
        assert!(!is_standard(&a, &dm, 1e-12));
        let (s, sdm) = standardize(&a, &dm).unwrap();
        assert_eq!(s.exact_lambda(1, 1, 0).unwrap(), &crate::scalar::rat(1, 1));
        assert_eq!(sdm.values, vec![Scalar::from_int(1), Scalar::from_int(1)]);
        assert!(is_standard(&s, &sdm, 1e-12));
        let (s2, sdm2) = standardize(&s, &sdm).unwrap();
        assert_eq!((s2, sdm2), (s, sdm));
    }

    #[test]
    fn no_positive_degree_map() {
        // b_1² = -b_0 + 0 b_1 has 1-dim reps b_1 ↦ ±i only
        let lambda = [1, 0, 0, 1, 0, 1, -1, 0].iter().map(|&x| Scalar::from_int(x)).collect();
        let a = Rba::new(2, vec![0, 1], lambda).unwrap();
        assert_eq!(degree_map(&a, &ToleranceConfig::default()), Err(RbaError::NoPositiveDegreeMap));
    }
}
