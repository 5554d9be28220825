//! Building RBAs from finite groups and association schemes.
//!
//! Cayley-table files:
//!
//! ```text
//! order m
//! <m rows of m whitespace-separated 0-based indices>
//! ```
//!
//! Element 0 is the identity. Scheme files:
//!
//! ```text
//! points v classes r
//! <r blocks of v rows of v 0/1 entries>
//! ```
//!
//! Relation 0 must be the identity relation.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{RbaError, Result};
use crate::rba::Rba;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    pub order: usize,
    /// `table[i][j]` is the index of `g_i g_j`.
    pub table: Vec<Vec<usize>>,
}

impl CayleyTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order) {
            return Err(RbaError::Structural("Cayley table must be square and non-empty".into()));
        }
        if let Some(&x) = table.iter().flatten().find(|&&x| x >= order) {
            return Err(RbaError::Structural(format!("entry {x} out of range for order {order}")));
        }
        Ok(CayleyTable { order, table })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or(RbaError::Parse {
            line: 0,
            msg: "empty Cayley table file".into(),
        })?;
        let order = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["order", m] => m.parse::<usize>().map_err(|e| RbaError::Parse {
                line: ln,
                msg: format!("bad order: {e}"),
            })?,
            _ => {
                return Err(RbaError::Parse {
                    line: ln,
                    msg: "expected `order <m>`".into(),
                })
            }
        };
        let mut table = Vec::with_capacity(order);
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| RbaError::Parse {
                    line: ln,
                    msg: format!("bad entry: {e}"),
                })?;
            if row.len() != order {
                return Err(RbaError::Parse {
                    line: ln,
                    msg: format!("row has {} entries, expected {order}", row.len()),
                });
            }
            table.push(row);
        }
        if table.len() != order {
            return Err(RbaError::Parse {
                line: 0,
                msg: format!("expected {order} rows, got {}", table.len()),
            });
        }
        CayleyTable::new(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for row in &self.table {
            let words: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", words.join(" ")).unwrap();
        }
        out
    }

    /// Inverse of each element. Assumes a verified group table.
    pub fn inverses(&self) -> Vec<usize> {
        (0..self.order)
            .map(|i| (0..self.order).find(|&j| self.table[i][j] == 0).unwrap_or(i))
            .collect()
    }

    /// Check identity, Latin-square and associativity conditions.
    pub fn verify_group(&self) -> Result<()> {
        let m = self.order;
        let t = &self.table;
        for i in 0..m {
            if t[0][i] != i || t[i][0] != i {
                return Err(RbaError::NotAGroup(format!("element 0 is not an identity at {i}")));
            }
        }
        for i in 0..m {
            let mut row = vec![false; m];
            let mut col = vec![false; m];
            for j in 0..m {
                if std::mem::replace(&mut row[t[i][j]], true) {
                    return Err(RbaError::NotAGroup(format!("row {i} repeats {}", t[i][j])));
                }
                if std::mem::replace(&mut col[t[j][i]], true) {
                    return Err(RbaError::NotAGroup(format!("column {i} repeats {}", t[j][i])));
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Err(RbaError::NotAGroup(format!("(g{a} g{b}) g{c} ≠ g{a} (g{b} g{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Relation matrices of the regular (thin) scheme: `R_g[x][y] = [y = x g]`.
    pub fn thin_scheme(&self) -> Result<Scheme> {
        self.verify_group()?;
        let m = self.order;
        let relations = (0..m)
            .map(|g| {
                (0..m)
                    .map(|x| (0..m).map(|y| u8::from(self.table[x][g] == y)).collect())
                    .collect()
            })
            .collect();
        Scheme::new(m, relations)
    }
}

/// Group algebra of a finite group as an RBA: basis = group elements,
/// `λ_ijk = [g_i g_j = g_k]`, `*` = inversion.
pub fn from_group(cayley: &CayleyTable) -> Result<Rba> {
    cayley.verify_group()?;
    let m = cayley.order;
    let mut lambda = vec![Rational::from_integer(BigInt::from(0)); m * m * m];
    for i in 0..m {
        for j in 0..m {
            lambda[(i * m + j) * m + cayley.table[i][j]] = Rational::from_integer(BigInt::from(1));
        }
    }
    Rba::from_rationals(m, cayley.inverses(), lambda)?.with_labels((0..m).map(|i| format!("g{i}")).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub points: usize,
    /// `relations[i][x][y]` ∈ {0, 1}.
    pub relations: Vec<Vec<Vec<u8>>>,
}

impl Scheme {
    pub fn new(points: usize, relations: Vec<Vec<Vec<u8>>>) -> Result<Self> {
        if points == 0 || relations.is_empty() {
            return Err(RbaError::Structural("scheme needs points and relations".into()));
        }
        for (i, r) in relations.iter().enumerate() {
            if r.len() != points || r.iter().any(|row| row.len() != points) {
                return Err(RbaError::Structural(format!("relation {i} is not {points}×{points}")));
            }
            if r.iter().flatten().any(|&x| x > 1) {
                return Err(RbaError::NotAScheme(format!("relation {i} is not a 0/1 matrix")));
            }
        }
        Ok(Scheme { points, relations })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or(RbaError::Parse {
            line: 0,
            msg: "empty scheme file".into(),
        })?;
        let perr = |line: usize, msg: String| RbaError::Parse { line, msg };
        let (v, r) = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["points", v, "classes", r] => (
                v.parse::<usize>().map_err(|e| perr(ln, format!("bad point count: {e}")))?,
                r.parse::<usize>().map_err(|e| perr(ln, format!("bad class count: {e}")))?,
            ),
            _ => return Err(perr(ln, "expected `points <v> classes <r>`".into())),
        };
        let mut rows = Vec::with_capacity(v * r);
        for (ln, line) in lines {
            let row = line
                .split_whitespace()
                .map(|w| match w {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    other => Err(perr(ln, format!("entry {other:?} is not 0/1"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != v {
                return Err(perr(ln, format!("row has {} entries, expected {v}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != v * r {
            return Err(perr(0, format!("expected {} rows, got {}", v * r, rows.len())));
        }
        let relations = rows.chunks(v).map(|c| c.to_vec()).collect();
        Scheme::new(v, relations)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("points {} classes {}\n", self.points, self.relations.len());
        for rel in &self.relations {
            for row in rel {
                let words: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", words.join(" ")).unwrap();
            }
        }
        out
    }
}

/// Adjacency algebra of an association scheme with intersection numbers
/// `R_i R_j = Σ_k p^k_ij R_k` as structure constants and `*` the transpose
/// permutation. The basis of adjacency matrices is already standard: the
/// coefficient of `R_0` in `R_i R_i*` is the valency of `R_i`.
pub fn from_scheme(scheme: &Scheme) -> Result<Rba> {
    let v = scheme.points;
    let rels = &scheme.relations;
    let r = rels.len();

    for x in 0..v {
        for y in 0..v {
            if rels[0][x][y] != u8::from(x == y) {
                return Err(RbaError::NotAScheme("relation 0 is not the identity".into()));
            }
            let total: u32 = rels.iter().map(|m| m[x][y] as u32).sum();
            if total != 1 {
                return Err(RbaError::NotAScheme(format!(
                    "relations do not partition the pairs: ({x},{y}) covered {total} times"
                )));
            }
        }
    }
    let mut star = Vec::with_capacity(r);
    for (i, rel) in rels.iter().enumerate() {
        let t = (0..r).find(|&j| (0..v).all(|x| (0..v).all(|y| rel[x][y] == rels[j][y][x])));
        match t {
            Some(j) => star.push(j),
            None => return Err(RbaError::NotAScheme(format!("transpose of relation {i} is not a relation"))),
        }
    }
    // Representative pair for each relation
    let reps: Vec<(usize, usize)> = rels
        .iter()
        .enumerate()
        .map(|(k, m)| {
            (0..v)
                .flat_map(|x| (0..v).map(move |y| (x, y)))
                .find(|&(x, y)| m[x][y] == 1)
                .ok_or_else(|| RbaError::NotAScheme(format!("relation {k} is empty")))
        })
        .collect::<Result<_>>()?;

    let mut lambda = vec![Rational::from_integer(BigInt::from(0)); r * r * r];
    let mut product = vec![vec![0i64; v]; v];
    for i in 0..r {
        for j in 0..r {
            for (x, row) in product.iter_mut().enumerate() {
                for (y, cell) in row.iter_mut().enumerate() {
                    *cell = (0..v).map(|z| (rels[i][x][z] * rels[j][z][y]) as i64).sum();
                }
            }
            for (k, &(x, y)) in reps.iter().enumerate() {
                let p = product[x][y];
                for xx in 0..v {
                    for yy in 0..v {
                        if rels[k][xx][yy] == 1 && product[xx][yy] != p {
                            return Err(RbaError::NotAScheme(format!(
                                "R{i} R{j} is not in the span of the relations (class {k})"
                            )));
                        }
                    }
                }
                lambda[(i * r + j) * r + k] = Rational::from_integer(BigInt::from(p));
            }
        }
    }
    Rba::from_rationals(r, star, lambda)
}

/// Valencies `k_i` (row sums of `R_i`), the degrees of a scheme.
pub fn valencies(scheme: &Scheme) -> Vec<u64> {
    scheme
        .relations
        .iter()
        .map(|m| m[0].iter().map(|&x| x as u64).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::ToleranceConfig;
    use crate::validate::validate;

    #[test]
    fn c2_group() {
        let c2 = CayleyTable::parse("order 2\n0 1\n1 0\n").unwrap();
        let a = from_group(&c2).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(a.is_commutative(0.0));
        assert!(validate(&a, &ToleranceConfig::default()).passed);
    }

    #[test]
    fn rejects_non_groups() {
        let bad = CayleyTable::parse("order 2\n0 1\n1 1\n").unwrap();
        assert!(matches!(from_group(&bad), Err(RbaError::NotAGroup(_))));
        // Latin square with identity but not associative (order 5 loop)
        let loop5 = CayleyTable::parse(
            "order 5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n",
        )
        .unwrap();
        let err = from_group(&loop5).unwrap_err();
        assert!(matches!(err, RbaError::NotAGroup(ref m) if m.contains("≠")), "{err}");
    }

    #[test]
    fn k2_scheme() {
        let s = Scheme::parse("points 2 classes 2\n1 0\n0 1\n0 1\n1 0\n").unwrap();
        let a = from_scheme(&s).unwrap();
        assert_eq!(a.exact_lambda(1, 1, 0).unwrap(), &Rational::from_integer(1.into()));
        assert_eq!(valencies(&s), vec![1, 1]);
        assert!(validate(&a, &ToleranceConfig::default()).passed);
    }

    #[test]
    fn non_closed_relations_rejected() {
        // path on 3 points split into two non-symmetric "relations" that
        // are not closed under multiplication
        let s = Scheme::parse(
            "points 3 classes 3\n1 0 0\n0 1 0\n0 0 1\n0 1 0\n1 0 0\n0 0 0\n0 0 1\n0 0 1\n1 1 0\n",
        )
        .unwrap();
        assert!(matches!(from_scheme(&s), Err(RbaError::NotAScheme(_))));
    }
}
