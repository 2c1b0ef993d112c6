//! Binary LDPC codes and syndrome decoding.
//!
//! Reconciliation works on arbitrary cosets of the code: Bob publishes the
//! syndrome `s = H b` of his bit string and Alice searches for the most
//! likely word with that syndrome. The decoder here is plain sum-product
//! belief propagation in which every check node whose syndrome bit is set
//! flips the sign of its outgoing messages.

mod decoder;
mod dvbs2;
mod dvbs2_table;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use decoder::{BpDecoder, DecodeOutcome, DEFAULT_MAX_ITERATIONS};

/// A sparse binary parity-check matrix, stored by rows with a column index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcCode {
    n: usize,
    check_ptr: Vec<usize>,
    check_vars: Vec<u32>,
    var_ptr: Vec<usize>,
    /// Edge ids (positions in `check_vars`) grouped by variable.
    var_edges: Vec<u32>,
}

/// Syndrome bits, one `u8` (0 or 1) per check.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome(pub Vec<u8>);

impl Syndrome {
    pub fn zeros(m: usize) -> Self {
        Self(alloc::vec![0; m])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Row and column degree histograms (`degree -> count`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub check_degrees: BTreeMap<usize, usize>,
    pub variable_degrees: BTreeMap<usize, usize>,
    pub edges: usize,
}

impl LdpcCode {
    /// Builds a code from the variable indices (0-based) of every check.
    ///
    /// Rejects out-of-range indices, repeated indices within a check, empty
    /// checks and variables that take part in no check.
    pub fn from_checks(n: usize, checks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || checks.is_empty() {
            return Err(Error::InvalidCode("empty code".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidCode("too many variables".into()));
        }
        let mut check_ptr = Vec::with_capacity(checks.len() + 1);
        let mut check_vars = Vec::new();
        let mut var_degree = alloc::vec![0usize; n];
        check_ptr.push(0);
        for (c, vars) in checks.iter().enumerate() {
            if vars.is_empty() {
                return Err(Error::InvalidCode(alloc::format!("check {c} is empty")));
            }
            let mut sorted = vars.clone();
            sorted.sort_unstable();
            if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidCode(alloc::format!(
                    "check {c} references variable {v}, code has {n}"
                )));
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidCode(alloc::format!("check {c} lists a variable twice")));
            }
            for &v in &sorted {
                var_degree[v] += 1;
                check_vars.push(v as u32);
            }
            check_ptr.push(check_vars.len());
        }
        if let Some(v) = var_degree.iter().position(|&d| d == 0) {
            return Err(Error::InvalidCode(alloc::format!(
                "variable {v} is not connected to any check"
            )));
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        var_ptr.push(0);
        for d in &var_degree {
            var_ptr.push(var_ptr[var_ptr.len() - 1] + d);
        }
        let mut fill = var_ptr[..n].to_vec();
        let mut var_edges = alloc::vec![0u32; check_vars.len()];
        for (e, &v) in check_vars.iter().enumerate() {
            var_edges[fill[v as usize]] = e as u32;
            fill[v as usize] += 1;
        }
        Ok(Self {
            n,
            check_ptr,
            check_vars,
            var_ptr,
            var_edges,
        })
    }

    /// The (7,4) Hamming code,
    ///
    /// ```text
    /// 1 1 1 0 1 0 0
    /// 1 1 0 1 0 1 0
    /// 1 0 1 1 0 0 1
    /// ```
    pub fn hamming74() -> Self {
        let checks = [
            alloc::vec![0, 1, 2, 4],
            alloc::vec![0, 1, 3, 5],
            alloc::vec![0, 2, 3, 6],
        ];
        Self::from_checks(7, &checks).expect("valid fixture")
    }

    /// DVB-S2 rate 1/2 normal-frame code, `n = 64800`, `m = 32400`, built
    /// from the standard's address table and the parity accumulator.
    pub fn dvbs2_rate_1_2() -> Self {
        let checks = dvbs2::rate_1_2_checks();
        Self::from_checks(dvbs2::NORMAL_FRAME, &checks).expect("valid DVB-S2 construction")
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of checks.
    pub fn m(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn edges(&self) -> usize {
        self.check_vars.len()
    }

    /// Variables taking part in check `c`.
    pub fn check(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.check_vars[self.check_ptr[c]..self.check_ptr[c + 1]]
            .iter()
            .map(|&v| v as usize)
    }

    /// Checks that variable `v` takes part in.
    pub fn variable(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]]
            .iter()
            .map(move |&e| {
                // Edge ids are positions in the row storage; find the owning row.
                self.check_ptr.partition_point(|&start| start <= e as usize) - 1
            })
    }

    /// `H b` over GF(2).
    pub fn syndrome(&self, bits: &[u8]) -> Result<Syndrome> {
        if bits.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: bits.len(),
            });
        }
        Ok(Syndrome(
            (0..self.m()).map(|c| self.check_parity(c, |v| bits[v])).collect(),
        ))
    }

    #[inline]
    fn check_parity<F: Fn(usize) -> u8>(&self, c: usize, bit: F) -> u8 {
        self.check_vars[self.check_ptr[c]..self.check_ptr[c + 1]]
            .iter()
            .fold(0u8, |acc, &v| acc ^ (bit(v as usize) & 1))
    }

    /// Whether `bits` lies in the coset identified by `target`.
    pub fn satisfies(&self, bits: &[u8], target: &Syndrome) -> bool {
        bits.len() == self.n
            && target.len() == self.m()
            && (0..self.m()).all(|c| self.check_parity(c, |v| bits[v]) == target.0[c])
    }

    /// Row and column degree histograms.
    pub fn degree_stats(&self) -> DegreeStats {
        let mut check_degrees = BTreeMap::new();
        for w in self.check_ptr.windows(2) {
            *check_degrees.entry(w[1] - w[0]).or_insert(0) += 1;
        }
        let mut variable_degrees = BTreeMap::new();
        for w in self.var_ptr.windows(2) {
            *variable_degrees.entry(w[1] - w[0]).or_insert(0) += 1;
        }
        DegreeStats {
            check_degrees,
            variable_degrees,
            edges: self.edges(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn hamming_fixture() {
        let code = LdpcCode::hamming74();
        assert_eq!((code.n(), code.m()), (7, 3));
        let stats = code.degree_stats();
        assert_eq!(stats.check_degrees.into_iter().collect::<Vec<_>>(), vec![(4, 3)]);
        assert_eq!(stats.edges, 12);
        assert_eq!(code.variable(0).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(code.variable(6).collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn single_error_syndrome_is_the_column() {
        let code = LdpcCode::hamming74();
        let h = [[1, 1, 1, 0, 1, 0, 0], [1, 1, 0, 1, 0, 1, 0], [1, 0, 1, 1, 0, 0, 1]];
        for i in 0..7 {
            let mut e = vec![0u8; 7];
            e[i] = 1;
            let s = code.syndrome(&e).unwrap();
            let column: Vec<u8> = h.iter().map(|row| row[i]).collect();
            assert_eq!(s.0, column);
        }
        assert_eq!(code.syndrome(&[0; 7]).unwrap(), Syndrome::zeros(3));
        assert!(code.syndrome(&[0; 6]).is_err());
    }

    #[test]
    fn validation() {
        assert!(LdpcCode::from_checks(3, &[vec![0, 3]]).is_err());
        assert!(LdpcCode::from_checks(3, &[vec![0, 1], vec![1, 1]]).is_err());
        assert!(LdpcCode::from_checks(3, &[vec![0, 1]]).is_err()); // variable 2 unused
        assert!(LdpcCode::from_checks(2, &[vec![]]).is_err());
        assert!(LdpcCode::from_checks(0, &[]).is_err());
    }

    #[test]
    fn dvbs2_structure() {
        let code = LdpcCode::dvbs2_rate_1_2();
        assert_eq!((code.n(), code.m()), (64_800, 32_400));
        let stats = code.degree_stats();
        let cols: Vec<_> = stats.variable_degrees.clone().into_iter().collect();
        assert_eq!(cols, vec![(1, 1), (2, 32_399), (3, 19_440), (8, 12_960)]);
        assert!(stats.variable_degrees.keys().all(|d| (1..=36).contains(d)));
        let rows: Vec<_> = stats.check_degrees.into_iter().collect();
        assert_eq!(rows, vec![(6, 1), (7, 32_399)]);
        assert_eq!(stats.edges, 226_799);
    }

    proptest! {
        #[test]
        fn syndrome_is_linear(a in proptest::collection::vec(0u8..2, 7), b in proptest::collection::vec(0u8..2, 7)) {
            let code = LdpcCode::hamming74();
            let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let sa = code.syndrome(&a).unwrap();
            let sb = code.syndrome(&b).unwrap();
            let expected: Vec<u8> = sa.0.iter().zip(&sb.0).map(|(x, y)| x ^ y).collect();
            prop_assert_eq!(code.syndrome(&sum).unwrap().0, expected);
            prop_assert!(code.satisfies(&a, &sa));
        }
    }
}
