//! Enumeration of integer solutions of `M x = 0` with every coordinate drawn
//! from a finite sorted value list.
//!
//! The free columns `F` are the complement of the pivot columns of `rref(M)`,
//! which form the lexicographically first column basis `B`. Every solution is
//! determined by `x_F` through `x_B = N x_F / D`.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::system::LinearSystem;

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Node visits flushed to the shared counter at a time.
const FLUSH_EVERY: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("work budget of {budget} node visits exceeded")]
pub struct BudgetExceeded {
    pub budget: u64,
}

/// A shared node-visit budget. Cheap to clone by reference across tasks.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
    exhausted: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    fn charge(&self, nodes: u64) -> Result<(), BudgetExceeded> {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit || self.exhausted.load(Ordering::Relaxed) {
            self.exhausted.store(true, Ordering::Relaxed);
            return Err(BudgetExceeded { budget: self.limit });
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone)]
pub struct Parametrization {
    m: usize,
    basis: Vec<usize>,
    free: Vec<usize>,
    /// `r x d`; `x_B[i] = Σ_j numer[i][j] x_F[j] / denom`.
    numer: Vec<Vec<i128>>,
    denom: i128,
}

impl Parametrization {
    pub fn new(system: &LinearSystem) -> Self {
        let m = system.m();
        let (rref, basis) = system.matrix().rref_with_pivots();
        let free: Vec<usize> = (0..m).filter(|j| !basis.contains(j)).collect();
        let lcm = (0..rref.rows())
            .flat_map(|i| free.iter().map(move |&f| (i, f)))
            .fold(BigInt::one(), |acc, (i, f)| acc.lcm(rref.get(i, f).denom()));
        let as_i128 = |v: BigInt| v.to_i128().expect("coefficients of an i64 system fit i128");
        let numer = (0..rref.rows())
            .map(|i| {
                free.iter()
                    .map(|&f| {
                        let q = rref.get(i, f);
                        as_i128(-(q.numer() * (&lcm / q.denom())))
                    })
                    .collect()
            })
            .collect();
        Self {
            m,
            basis,
            free,
            numer,
            denom: as_i128(lcm),
        }
    }

    /// Pivot (bound) columns, increasing.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Free columns, increasing; the enumeration assigns them in this order.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Visits every solution whose free coordinates come from `values`
    /// (sorted, distinct) and whose bound coordinates satisfy `accept`, with
    /// the first free coordinate fixed to `values[first]`. With no free
    /// columns only `first == 0` visits (the zero vector, if accepted).
    /// Stops early when `visit` breaks; returns whether it did.
    pub fn enumerate_branch(
        &self,
        values: &[i64],
        accept: &(dyn Fn(i64) -> bool + Sync),
        first: usize,
        budget: &Budget,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, BudgetExceeded> {
        if values.is_empty() {
            return Ok(ControlFlow::Continue(()));
        }
        let (lo, hi) = (i128::from(values[0]), i128::from(values[values.len() - 1]));
        let d = self.free.len();
        let r = self.basis.len();
        // reach[t][i]: range of Σ_{j >= t} numer[i][j] x_F[j] over the box.
        let mut reach = vec![vec![(0i128, 0i128); r]; d + 1];
        for t in (0..d).rev() {
            for i in 0..r {
                let c = self.numer[i][t];
                let (a, b) = (c * lo, c * hi);
                reach[t][i] = (reach[t + 1][i].0 + a.min(b), reach[t + 1][i].1 + a.max(b));
            }
        }
        let mut walker = Walker {
            param: self,
            values,
            accept,
            reach,
            lo: lo * self.denom,
            hi: hi * self.denom,
            x: vec![0i64; self.m],
            partial: vec![vec![0i128; r]; d + 1],
            pending: 0,
            budget,
            visit,
        };
        if d == 0 {
            if first != 0 {
                return Ok(ControlFlow::Continue(()));
            }
            return walker.leaf();
        }
        let flow = walker.assign(0, Some(first))?;
        budget.charge(walker.pending)?;
        Ok(flow)
    }

    /// Calls `enumerate_branch` for every first value in order.
    pub fn enumerate(
        &self,
        values: &[i64],
        accept: &(dyn Fn(i64) -> bool + Sync),
        budget: &Budget,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, BudgetExceeded> {
        for first in 0..self.branch_count(values) {
            if self
                .enumerate_branch(values, accept, first, budget, visit)?
                .is_break()
            {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Number of independent branches `enumerate_branch` splits into.
    pub fn branch_count(&self, values: &[i64]) -> usize {
        if self.free.is_empty() {
            usize::from(!values.is_empty())
        } else {
            values.len()
        }
    }
}

struct Walker<'a> {
    param: &'a Parametrization,
    values: &'a [i64],
    accept: &'a (dyn Fn(i64) -> bool + Sync),
    reach: Vec<Vec<(i128, i128)>>,
    /// Box bounds scaled by the denominator.
    lo: i128,
    hi: i128,
    x: Vec<i64>,
    /// partial[t][i] = Σ_{j < t} numer[i][j] x_F[j]
    partial: Vec<Vec<i128>>,
    pending: u64,
    budget: &'a Budget,
    visit: &'a mut dyn FnMut(&[i64]) -> ControlFlow<()>,
}

impl Walker<'_> {
    fn assign(&mut self, t: usize, only: Option<usize>) -> Result<ControlFlow<()>, BudgetExceeded> {
        let d = self.param.free.len();
        if t == d {
            return self.leaf();
        }
        let range = match only {
            Some(i) => i..i + 1,
            None => 0..self.values.len(),
        };
        let column = self.param.free[t];
        for index in range {
            self.pending += 1;
            if self.pending >= FLUSH_EVERY {
                self.budget.charge(self.pending)?;
                self.pending = 0;
            }
            let v = self.values[index];
            self.x[column] = v;
            let (head, tail) = self.partial.split_at_mut(t + 1);
            let mut feasible = true;
            for (i, next) in tail[0].iter_mut().enumerate() {
                let s = head[t][i] + self.param.numer[i][t] * i128::from(v);
                *next = s;
                let (a, b) = self.reach[t + 1][i];
                if s + b < self.lo || s + a > self.hi {
                    feasible = false;
                }
            }
            if !feasible {
                continue;
            }
            if self.assign(t + 1, None)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn leaf(&mut self) -> Result<ControlFlow<()>, BudgetExceeded> {
        let d = self.param.free.len();
        let denom = self.param.denom;
        for (i, &b) in self.param.basis.iter().enumerate() {
            let s = self.partial[d][i];
            if s % denom != 0 {
                return Ok(ControlFlow::Continue(()));
            }
            let Ok(value) = i64::try_from(s / denom) else {
                return Ok(ControlFlow::Continue(()));
            };
            if !(self.accept)(value) {
                return Ok(ControlFlow::Continue(()));
            }
            self.x[b] = value;
        }
        Ok((self.visit)(&self.x))
    }
}
