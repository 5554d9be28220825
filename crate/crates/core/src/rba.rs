//! The RBA data model and the `.rba` text format.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{RbaError, Result};
use crate::scalar::{rational_to_f64, snap_rational, Rational, Scalar, SNAP_MAX_DENOMINATOR};

/// Whether every structure constant is a known rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    /// All structure constants rational: the field of definition is ℚ.
    Rational,
    /// Some constant was given as a decimal; treated numerically over ℝ.
    Real,
}

/// A reality-based algebra given by its structure constants.
///
/// `b_i b_j = Σ_k λ(i, j, k) b_k`, with `b_0` the identity and `star` the
/// involution on indices. Values are immutable after construction; the
/// axioms themselves are checked by [`crate::validate::validate`], so an
/// `Rba` may hold an invalid tensor (useful for negative tests).
#[derive(Clone, Debug, PartialEq)]
pub struct Rba {
    rank: usize,
    lambda: Vec<f64>,
    exact: Option<Vec<Rational>>,
    star: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Rba {
    /// Build from scalars; the algebra is exact iff every entry is exact.
    pub fn new(rank: usize, star: Vec<usize>, lambda: Vec<Scalar>) -> Result<Self> {
        check_shape(rank, &star, lambda.len())?;
        let floats = lambda.iter().map(Scalar::to_f64).collect();
        let exact = lambda
            .iter()
            .map(|s| s.as_rational().cloned())
            .collect::<Option<Vec<_>>>();
        Ok(Rba {
            rank,
            lambda: floats,
            exact,
            star,
            labels: None,
        })
    }

    pub fn from_rationals(rank: usize, star: Vec<usize>, lambda: Vec<Rational>) -> Result<Self> {
        check_shape(rank, &star, lambda.len())?;
        Ok(Rba {
            rank,
            lambda: lambda.iter().map(rational_to_f64).collect(),
            exact: Some(lambda),
            star,
            labels: None,
        })
    }

    pub fn from_f64(rank: usize, star: Vec<usize>, lambda: Vec<f64>) -> Result<Self> {
        check_shape(rank, &star, lambda.len())?;
        if let Some(x) = lambda.iter().find(|x| !x.is_finite()) {
            return Err(RbaError::Structural(format!("non-finite structure constant {x}")));
        }
        Ok(Rba {
            rank,
            lambda,
            exact: None,
            star,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(RbaError::Structural(format!(
                "{} labels for rank {}",
                labels.len(),
                self.rank
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Copy with one entry replaced. The mode degrades to float if a float
    /// enters an exact tensor.
    pub fn with_entry(&self, i: usize, j: usize, k: usize, value: Scalar) -> Result<Self> {
        let r = self.rank;
        if i >= r || j >= r || k >= r {
            return Err(RbaError::Structural(format!("index ({i},{j},{k}) out of range")));
        }
        let mut out = self.clone();
        let idx = out.index(i, j, k);
        out.lambda[idx] = value.to_f64();
        match (&mut out.exact, value) {
            (Some(ex), Scalar::Exact(q)) => ex[idx] = q,
            (ex, _) => *ex = None,
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn star(&self, i: usize) -> usize {
        self.star[i]
    }

    pub fn star_map(&self) -> &[usize] {
        &self.star
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("b{i}"),
        }
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.rank + j) * self.rank + k
    }

    #[inline]
    pub fn lambda(&self, i: usize, j: usize, k: usize) -> f64 {
        self.lambda[self.index(i, j, k)]
    }

    pub fn exact_lambda(&self, i: usize, j: usize, k: usize) -> Option<&Rational> {
        self.exact.as_ref().map(|ex| &ex[self.index(i, j, k)])
    }

    pub fn scalar(&self, i: usize, j: usize, k: usize) -> Scalar {
        match self.exact_lambda(i, j, k) {
            Some(q) => Scalar::Exact(q.clone()),
            None => Scalar::Float(self.lambda(i, j, k)),
        }
    }

    pub fn lambda_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn exact_slice(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn mode(&self) -> FieldMode {
        if self.exact.is_some() {
            FieldMode::Rational
        } else {
            FieldMode::Real
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// The same algebra with exact information dropped.
    pub fn to_float(&self) -> Rba {
        Rba {
            exact: None,
            ..self.clone()
        }
    }

    /// Snap every float entry to a small-denominator rational within
    /// `eps_zero`; fails if any entry is not close to one.
    pub fn to_exact(&self, eps_zero: f64) -> Result<Rba> {
        if self.exact.is_some() {
            return Ok(self.clone());
        }
        let mut exact = Vec::with_capacity(self.lambda.len());
        for (n, &x) in self.lambda.iter().enumerate() {
            match snap_rational(x, eps_zero, SNAP_MAX_DENOMINATOR) {
                Some(q) => exact.push(q),
                None => {
                    let r = self.rank;
                    return Err(RbaError::Domain(format!(
                        "structure constant λ({},{},{}) = {x} is not a recognizable rational",
                        n / (r * r),
                        (n / r) % r,
                        n % r
                    )));
                }
            }
        }
        Rba::from_rationals(self.rank, self.star.clone(), exact).map(|mut out| {
            out.labels = self.labels.clone();
            out
        })
    }

    /// Nonreal pairs `(i, i*)` with `i < i*`, ordered by `i`.
    pub fn nonreal_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.rank)
            .filter(|&i| self.star[i] > i)
            .map(|i| (i, self.star[i]))
            .collect()
    }

    /// Number of *-fixed basis elements.
    pub fn real_count(&self) -> usize {
        (0..self.rank).filter(|&i| self.star[i] == i).count()
    }

    pub fn is_commutative(&self, eps: f64) -> bool {
        let r = self.rank;
        (0..r).all(|i| {
            (0..r).all(|j| (0..r).all(|k| (self.lambda(i, j, k) - self.lambda(j, i, k)).abs() <= eps))
        })
    }

    pub fn max_abs_lambda(&self) -> f64 {
        self.lambda.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Product of two coefficient vectors in the basis.
    pub fn mul(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let r = self.rank;
        let mut out = vec![0.0; r];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                let base = self.index(i, j, 0);
                let c = xi * yj;
                for (o, l) in out.iter_mut().zip(&self.lambda[base..base + r]) {
                    *o += c * l;
                }
            }
        }
        out
    }

    pub fn mul_complex(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let r = self.rank;
        let mut out = vec![Complex64::zero(); r];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let base = self.index(i, j, 0);
                let c = xi * yj;
                for (o, &l) in out.iter_mut().zip(&self.lambda[base..base + r]) {
                    *o += c * l;
                }
            }
        }
        out
    }

    /// Coefficients of `x*` for `x = Σ c_i b_i` (skew-linear involution).
    pub fn star_coeffs(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.rank];
        for (i, c) in x.iter().enumerate() {
            out[self.star[i]] = c.conj();
        }
        out
    }

    /// Unit coefficient vector of `b_i`.
    pub fn basis_vector(&self, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.rank];
        v[i] = 1.0;
        v
    }

    /// Parse the line-oriented `.rba` format.
    pub fn parse(text: &str) -> Result<Rba> {
        let mut rank: Option<usize> = None;
        let mut star: Option<Vec<usize>> = None;
        let mut entries: Vec<Option<Scalar>> = Vec::new();

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| RbaError::Parse { line: line_no, msg };
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let rest: Vec<&str> = words.collect();
            match keyword {
                "rank" => {
                    if rank.is_some() {
                        return Err(perr("duplicate rank line".into()));
                    }
                    let [r] = rest[..] else {
                        return Err(perr("expected `rank <r>`".into()));
                    };
                    let r: usize = r.parse().map_err(|e| perr(format!("bad rank: {e}")))?;
                    if r == 0 {
                        return Err(perr("rank must be positive".into()));
                    }
                    rank = Some(r);
                    entries = vec![None; r * r * r];
                }
                "star" => {
                    let r = rank.ok_or_else(|| perr("`star` before `rank`".into()))?;
                    if star.is_some() {
                        return Err(perr("duplicate star line".into()));
                    }
                    if rest.len() != r {
                        return Err(perr(format!("star needs {r} entries, got {}", rest.len())));
                    }
                    let s = rest
                        .iter()
                        .map(|w| w.parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| perr(format!("bad star entry: {e}")))?;
                    star = Some(s);
                }
                "lambda" => {
                    let r = rank.ok_or_else(|| perr("`lambda` before `rank`".into()))?;
                    let [i, j, k, v] = rest[..] else {
                        return Err(perr("expected `lambda <i> <j> <k> <value>`".into()));
                    };
                    let idx = |w: &str| -> Result<usize> {
                        let x: usize = w.parse().map_err(|e| perr(format!("bad index {w:?}: {e}")))?;
                        if x >= r {
                            return Err(perr(format!("index {x} out of range for rank {r}")));
                        }
                        Ok(x)
                    };
                    let (i, j, k) = (idx(i)?, idx(j)?, idx(k)?);
                    let value: Scalar = v.parse().map_err(perr)?;
                    let slot = &mut entries[(i * r + j) * r + k];
                    if slot.is_some() {
                        return Err(perr(format!("duplicate entry for λ({i},{j},{k})")));
                    }
                    *slot = Some(value);
                }
                other => return Err(perr(format!("unknown keyword {other:?}"))),
            }
        }

        let rank = rank.ok_or(RbaError::Parse {
            line: 0,
            msg: "missing `rank` line".into(),
        })?;
        let star = star.ok_or(RbaError::Parse {
            line: 0,
            msg: "missing `star` line".into(),
        })?;
        let lambda = entries
            .into_iter()
            .map(|e| e.unwrap_or_else(|| Scalar::from_int(0)))
            .collect();
        Rba::new(rank, star, lambda)
    }

    /// Emit the `.rba` format; zero entries are omitted.
    pub fn to_rba_string(&self) -> String {
        let r = self.rank;
        let mut out = String::new();
        writeln!(out, "rank {r}").unwrap();
        let star: Vec<String> = self.star.iter().map(|s| s.to_string()).collect();
        writeln!(out, "star {}", star.join(" ")).unwrap();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    match self.exact_lambda(i, j, k) {
                        Some(q) if !q.is_zero() => writeln!(out, "lambda {i} {j} {k} {q}").unwrap(),
                        Some(_) => {}
                        None => {
                            let x = self.lambda(i, j, k);
                            if x != 0.0 {
                                writeln!(out, "lambda {i} {j} {k} {}", float_token(x)).unwrap();
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Shortest round-trip decimal that still reads back as a float.
fn float_token(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains('.') || s.contains('e') || s.contains("inf") || s.contains("NaN") {
        s
    } else {
        format!("{s}.0")
    }
}

fn check_shape(rank: usize, star: &[usize], len: usize) -> Result<()> {
    if rank == 0 {
        return Err(RbaError::Structural("rank must be positive".into()));
    }
    if len != rank * rank * rank {
        return Err(RbaError::Structural(format!(
            "structure tensor has {len} entries, expected {}",
            rank * rank * rank
        )));
    }
    if star.len() != rank {
        return Err(RbaError::Structural(format!(
            "star has {} entries, expected {rank}",
            star.len()
        )));
    }
    let mut seen = vec![false; rank];
    for &s in star {
        if s >= rank || std::mem::replace(&mut seen[s], true) {
            return Err(RbaError::Structural(format!("star {star:?} is not a permutation")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const C2: &str = "# cyclic group of order 2\nrank 2\nstar 0 1\nlambda 0 0 0 1\nlambda 0 1 1 1\nlambda 1 0 1 1\nlambda 1 1 0 1\n";

    #[test]
    fn parse_c2() {
        let a = Rba::parse(C2).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(a.is_exact());
        assert_eq!(a.lambda(1, 1, 0), 1.0);
        assert_eq!(a.lambda(1, 1, 1), 0.0);
        assert_eq!(a.real_count(), 2);
        assert!(a.nonreal_pairs().is_empty());
    }

    #[test]
    fn decimals_force_float_mode() {
        let text = C2.replace("lambda 1 1 0 1", "lambda 1 1 0 1.0");
        let a = Rba::parse(&text).unwrap();
        assert_eq!(a.mode(), FieldMode::Real);
        let back = Rba::parse(&a.to_rba_string()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.to_exact(1e-12).unwrap(), Rba::parse(C2).unwrap());
    }

    #[test]
    fn round_trip_text() {
        let a = Rba::parse(C2).unwrap();
        assert_eq!(Rba::parse(&a.to_rba_string()).unwrap(), a);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Rba::parse("star 0\n"), Err(RbaError::Parse { line: 1, .. })));
        assert!(Rba::parse("rank 2\nstar 0 1\nlambda 0 0 2 1\n").is_err());
        assert!(Rba::parse("rank 2\nstar 0 1\nlambda 0 0 0 1\nlambda 0 0 0 1\n").is_err());
        assert!(Rba::parse("rank 2\n").is_err());
        assert!(Rba::parse("rank 2\nstar 0 0\n").is_err());
        assert!(Rba::parse("rank 2\nstar 0 1\nfoo\n").is_err());
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            Rba::from_f64(2, vec![0, 1], vec![0.0; 7]),
            Err(RbaError::Structural(_))
        ));
        assert!(Rba::from_f64(2, vec![0, 2], vec![0.0; 8]).is_err());
    }
}
