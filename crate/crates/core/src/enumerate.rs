//! t-conorms on the finite chain `{0, 1/(n−1), …, 1}`, by backtracking.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_CHAIN: usize = 6;

const UNSET: u8 = u8::MAX;

/// Operation table on chain indices `0..n`; `get(i, j)` is the index of `S(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteTable {
    n: usize,
    cells: Vec<u8>,
}

impl FiniteTable {
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        FiniteTable { n, cells: rows.iter().flatten().copied().collect() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i * self.n + j] as usize
    }

    pub fn value(&self, i: usize) -> f64 {
        i as f64 / (self.n - 1) as f64
    }

    /// The table on chain values.
    pub fn to_values(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.value(self.get(i, j))).collect())
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.get(self.get(a, b), c) == self.get(a, self.get(b, c))))
        })
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (1..n).all(|j| self.get(i, j - 1) <= self.get(i, j)))
    }

    pub fn has_neutral_zero(&self) -> bool {
        (0..self.n).all(|i| self.get(0, i) == i)
    }

    /// `S(x, y) < S(x, z)` whenever `x > 0` and `y < z`.
    pub fn is_strictly_monotone(&self) -> bool {
        let n = self.n;
        (1..n).all(|x| (1..n).all(|z| self.get(x, z - 1) < self.get(x, z)))
    }

    /// `S(x, x) > x` on the interior of the chain.
    pub fn is_archimedean(&self) -> bool {
        (1..self.n - 1).all(|x| self.get(x, x) > x)
    }

    pub fn is_max(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == i.max(j)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub chain_size: usize,
    pub tables: usize,
    pub strictly_monotone: usize,
    pub archimedean: usize,
    pub idempotent: usize,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub tables: Vec<FiniteTable>,
    pub census: Census,
}

struct Search {
    n: usize,
    cells: Vec<u8>,
    order: Vec<(usize, usize)>,
    found: Vec<FiniteTable>,
}

impl Search {
    fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: u8) {
        self.cells[i * self.n + j] = v;
        self.cells[j * self.n + i] = v;
    }

    /// Associativity on every triple whose four lookups are already known.
    fn consistent(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                if ab == UNSET {
                    continue;
                }
                for c in 0..n {
                    let bc = self.get(b, c);
                    if bc == UNSET {
                        continue;
                    }
                    let left = self.get(ab as usize, c);
                    let right = self.get(a, bc as usize);
                    if left != UNSET && right != UNSET && left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if k == self.order.len() {
            self.found.push(FiniteTable { n: self.n, cells: self.cells.clone() });
            return;
        }
        let (i, j) = self.order[k];
        let mut lo = j as u8;
        for (a, b) in [(i - 1, j), (i, j - 1)] {
            let v = self.get(a, b);
            if v != UNSET {
                lo = lo.max(v);
            }
        }
        for v in lo..self.n as u8 {
            self.set(i, j, v);
            if self.consistent() {
                self.run(k + 1);
            }
        }
        self.set(i, j, UNSET);
    }
}

/// All commutative, associative, monotone tables with neutral element 0.
pub fn enumerate_finite_tconorms(n: usize) -> Result<Enumeration> {
    if n > MAX_CHAIN {
        return Err(Error::SizeLimit { size: n, limit: MAX_CHAIN });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain size must be at least 2, got {n}")));
    }
    let mut cells = vec![UNSET; n * n];
    for i in 0..n {
        cells[i] = i as u8;
        cells[i * n] = i as u8;
    }
    let order = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut search = Search { n, cells, order, found: Vec::new() };
    search.run(0);
    let tables = search.found;
    let census = Census {
        chain_size: n,
        tables: tables.len(),
        strictly_monotone: tables.iter().filter(|t| t.is_strictly_monotone()).count(),
        archimedean: tables.iter().filter(|t| t.is_archimedean()).count(),
        idempotent: tables.iter().filter(|t| t.is_max()).count(),
    };
    Ok(Enumeration { tables, census })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Every symmetric table with neutral 0, filtered by the axioms.
    fn brute_force(n: usize) -> HashSet<FiniteTable> {
        let free: Vec<(usize, usize)> = (1..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let total = n.pow(free.len() as u32);
        let mut out = HashSet::new();
        for mut code in 0..total {
            let mut rows = vec![vec![0u8; n]; n];
            for i in 0..n {
                rows[0][i] = i as u8;
                rows[i][0] = i as u8;
            }
            for &(i, j) in &free {
                let v = (code % n) as u8;
                code /= n;
                rows[i][j] = v;
                rows[j][i] = v;
            }
            let t = FiniteTable::from_rows(&rows);
            if t.is_monotone() && t.is_associative() {
                out.insert(t);
            }
        }
        out
    }

    #[test]
    fn small_chains() {
        let two = enumerate_finite_tconorms(2).unwrap();
        assert_eq!(two.tables.len(), 1);
        assert_eq!(two.tables[0].to_values(), vec![vec![0.0, 1.0], vec![1.0, 1.0]]);
        let three = enumerate_finite_tconorms(3).unwrap();
        let middles: Vec<f64> = three.tables.iter().map(|t| t.to_values()[1][1]).collect();
        assert_eq!(middles, vec![0.5, 1.0]);
    }

    #[test]
    fn matches_brute_force() {
        for n in 2..=4 {
            let fast: HashSet<FiniteTable> = enumerate_finite_tconorms(n).unwrap().tables.into_iter().collect();
            assert_eq!(fast, brute_force(n), "n = {n}");
        }
    }

    #[test]
    fn every_table_is_a_tconorm_and_none_is_strict() {
        for n in 2..=5 {
            let e = enumerate_finite_tconorms(n).unwrap();
            assert_eq!(e.census.strictly_monotone, 0);
            assert_eq!(e.census.idempotent, 1);
            for t in &e.tables {
                assert!(t.is_commutative() && t.is_associative() && t.is_monotone() && t.has_neutral_zero());
                assert!((0..n).all(|x| t.get(x, n - 1) == n - 1));
            }
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(enumerate_finite_tconorms(7), Err(Error::SizeLimit { size: 7, limit: 6 })));
        assert!(enumerate_finite_tconorms(1).is_err());
    }
}
