use alloc::vec::Vec;

use super::{LdpcCode, Syndrome};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

/// Largest `|Π tanh(·/2)|` fed to `atanh`.
const TANH_LIMIT: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// Hard decisions on the last posterior LLRs.
    pub bits: Vec<u8>,
    /// Whether `bits` has the target syndrome.
    pub converged: bool,
    /// Flooding iterations run; 0 when the input already had the syndrome.
    pub iterations: usize,
}

/// Flooding sum-product decoder for a target syndrome.
///
/// Check node `c` enforces `⊕ b_v = s_c`; when `s_c = 1` its outgoing
/// messages change sign. Message buffers are owned by the decoder and reused
/// between calls, so keep one decoder per worker.
#[derive(Debug, Clone)]
pub struct BpDecoder<'a> {
    code: &'a LdpcCode,
    /// Variable-to-check messages in row (edge) order.
    to_check: Vec<f64>,
    /// Check-to-variable messages in row (edge) order.
    to_var: Vec<f64>,
    hard: Vec<u8>,
    prefix: Vec<f64>,
}

impl<'a> BpDecoder<'a> {
    pub fn new(code: &'a LdpcCode) -> Self {
        let max_row = code.check_ptr.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
        Self {
            code,
            to_check: alloc::vec![0.0; code.edges()],
            to_var: alloc::vec![0.0; code.edges()],
            hard: alloc::vec![0; code.n()],
            prefix: alloc::vec![0.0; max_row + 1],
        }
    }

    pub fn code(&self) -> &LdpcCode {
        self.code
    }

    /// Decodes `llrs` (positive favours bit 0) towards the coset `target`.
    pub fn decode(&mut self, llrs: &[f64], target: &Syndrome, max_iterations: usize) -> Result<DecodeOutcome> {
        let code = self.code;
        if llrs.len() != code.n() {
            return Err(Error::LengthMismatch {
                expected: code.n(),
                actual: llrs.len(),
            });
        }
        if target.len() != code.m() {
            return Err(Error::LengthMismatch {
                expected: code.m(),
                actual: target.len(),
            });
        }
        if max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
        }
        if let Some(bad) = llrs.iter().find(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("non-finite LLR {bad}")));
        }

        for (h, &l) in self.hard.iter_mut().zip(llrs) {
            *h = (l < 0.0) as u8;
        }
        if code.satisfies(&self.hard, target) {
            return Ok(self.outcome(true, 0));
        }

        for (e, &v) in code.check_vars.iter().enumerate() {
            self.to_check[e] = llrs[v as usize];
        }
        for iteration in 1..=max_iterations {
            self.update_checks(&target.0);
            self.update_variables(llrs);
            if code.satisfies(&self.hard, target) {
                return Ok(self.outcome(true, iteration));
            }
        }
        Ok(self.outcome(false, max_iterations))
    }

    fn outcome(&self, converged: bool, iterations: usize) -> DecodeOutcome {
        DecodeOutcome {
            bits: self.hard.clone(),
            converged,
            iterations,
        }
    }

    /// `r_cv = ±2 atanh(Π_{v' ≠ v} tanh(q_{v'c} / 2))`, the product over the
    /// other edges taken from prefix and suffix products so that zero
    /// messages need no special casing.
    fn update_checks(&mut self, syndrome: &[u8]) {
        let code = self.code;
        for (c, &s) in syndrome.iter().enumerate() {
            let (start, end) = (code.check_ptr[c], code.check_ptr[c + 1]);
            let degree = end - start;
            let sign = if s == 0 { 1.0 } else { -1.0 };
            self.prefix[0] = 1.0;
            for k in 0..degree {
                let t = libm::tanh(0.5 * self.to_check[start + k]);
                self.to_var[start + k] = t;
                self.prefix[k + 1] = self.prefix[k] * t;
            }
            let mut suffix = 1.0;
            for k in (0..degree).rev() {
                let t = self.to_var[start + k];
                let others = (self.prefix[k] * suffix).clamp(-TANH_LIMIT, TANH_LIMIT);
                self.to_var[start + k] = sign * 2.0 * libm::atanh(others);
                suffix *= t;
            }
        }
    }

    fn update_variables(&mut self, llrs: &[f64]) {
        let code = self.code;
        for (v, &l) in llrs.iter().enumerate() {
            let edges = &code.var_edges[code.var_ptr[v]..code.var_ptr[v + 1]];
            let total = l + edges.iter().map(|&e| self.to_var[e as usize]).sum::<f64>();
            for &e in edges {
                self.to_check[e as usize] = total - self.to_var[e as usize];
            }
            self.hard[v] = (total < 0.0) as u8;
        }
    }
}
