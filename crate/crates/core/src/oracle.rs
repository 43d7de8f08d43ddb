//! Brute-force homology of small finite groups through the normalized bar
//! complex, used to cross-check the Hopf pipeline.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::fplinalg::{is_prime, Echelon};
use crate::hopf::{compute, BoundKind, HopfError};
use crate::presentation::Presentation;
use crate::rewrite::{complete, Budget, GroupSize, RewriteError, RewriteSystem};

/// Default largest group order handled by the oracle.
pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("rewriting system is not confluent")]
    NotConfluent,
    #[error("infinite group")]
    Infinite,
    #[error("group order {order} exceeds the oracle cap {cap}")]
    TooLarge { order: u128, cap: usize },
    #[error("multiplication is not associative")]
    NotAssociative,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bar complex is not a complex")]
    NotAComplex,
    #[error(transparent)]
    Pipeline(#[from] HopfError),
}

impl From<RewriteError> for OracleError {
    fn from(e: RewriteError) -> Self {
        match e {
            RewriteError::NotConfluent | RewriteError::StepLimit(_) => OracleError::NotConfluent,
            RewriteError::Overflow(n) => OracleError::TooLarge {
                order: n as u128,
                cap: n,
            },
        }
    }
}

/// Cayley table with elements in shortlex order of their normal forms, so
/// the identity is element 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    order: usize,
    product: Vec<usize>,
    inverse: Vec<usize>,
}

impl MultTable {
    pub fn from_system(rws: &RewriteSystem, cap: usize) -> Result<Self, OracleError> {
        match rws.size()? {
            GroupSize::Infinite => return Err(OracleError::Infinite),
            GroupSize::Finite(n) if n > cap as u128 => {
                return Err(OracleError::TooLarge { order: n, cap })
            }
            GroupSize::Finite(_) => {}
        }
        let elements = rws.enumerate_codes(cap.saturating_add(1))?;
        let index: HashMap<&[u32], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let n = elements.len();
        let mut product = vec![0; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let mut w = a.clone();
                w.extend_from_slice(b);
                let nf = rws.reduce_codes(&w)?;
                product[i * n + j] = *index.get(nf.as_slice()).ok_or(OracleError::NotConfluent)?;
            }
        }
        Self::from_products(n, product)
    }

    /// Validate a raw row-major product table whose identity is element 0.
    pub fn from_products(order: usize, product: Vec<usize>) -> Result<Self, OracleError> {
        let n = order;
        if product.len() != n * n || product.iter().any(|&x| x >= n) {
            return Err(OracleError::NotAssociative);
        }
        for i in 0..n {
            if product[i] != i || product[i * n] != i {
                return Err(OracleError::NotAssociative);
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            inverse[i] = (0..n)
                .find(|&j| product[i * n + j] == 0)
                .ok_or(OracleError::NotAssociative)?;
        }
        let t = MultTable {
            order: n,
            product,
            inverse,
        };
        if n <= DEFAULT_CAP {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)) {
                            return Err(OracleError::NotAssociative);
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    pub fn from_presentation(
        pres: &Presentation,
        b: &Budget,
        cap: usize,
    ) -> Result<Self, OracleError> {
        Self::from_system(&complete(pres, b), cap)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

pub fn multiplication_table(rws: &RewriteSystem, cap: usize) -> Result<MultTable, OracleError> {
    MultTable::from_system(rws, cap)
}

/// Ranks of `d2` and `d3` of the normalized bar complex with `F_p`
/// coefficients, plus the dimension of `C2`. The `d3` rank stops early once
/// it reaches `dim ker d2`.
fn bar_ranks(t: &MultTable, p: u64, want_d3: bool) -> Result<(usize, usize, usize), OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let n = t.order - 1;
    // Non-identity element g has column g - 1.
    let col = |g: usize| g - 1;
    let mut d2 = Echelon::new(p, n);
    let mut row = vec![0u64; n];
    let add = |row: &mut [u64], g: usize, c: i64| {
        if g != 0 {
            let v = &mut row[col(g)];
            *v = ((*v as i64 + c).rem_euclid(p as i64)) as u64;
        }
    };
    for g in 1..=n {
        for h in 1..=n {
            row.iter_mut().for_each(|x| *x = 0);
            add(&mut row, h, 1);
            add(&mut row, t.mul(g, h), -1);
            add(&mut row, g, 1);
            d2.insert(&row);
        }
    }
    let c2 = n * n;
    let r2 = d2.rank();
    if !want_d3 {
        return Ok((c2, r2, 0));
    }
    let kernel = c2 - r2;
    let pair = |g: usize, h: usize| (g - 1) * n + (h - 1);
    let mut d3 = Echelon::new(p, c2);
    let mut row = vec![0u64; c2];
    let add2 = |row: &mut [u64], g: usize, h: usize, c: i64| {
        if g != 0 && h != 0 {
            let v = &mut row[pair(g, h)];
            *v = ((*v as i64 + c).rem_euclid(p as i64)) as u64;
        }
    };
    'outer: for g in 1..=n {
        for h in 1..=n {
            for k in 1..=n {
                if d3.rank() == kernel {
                    break 'outer;
                }
                let (gh, hk) = (t.mul(g, h), t.mul(h, k));
                let terms = [(h, k, 1), (gh, k, -1), (g, hk, 1), (g, h, -1)];
                row.iter_mut().for_each(|x| *x = 0);
                for &(a, b, c) in &terms {
                    add2(&mut row, a, b, c);
                }
                // d2 of this chain must vanish.
                let mut image = vec![0i64; n + 1];
                for &(a, b, c) in &terms {
                    if a != 0 && b != 0 {
                        image[b] += c;
                        image[t.mul(a, b)] -= c;
                        image[a] += c;
                    }
                }
                if image[1..].iter().any(|&x| x.rem_euclid(p as i64) != 0) {
                    return Err(OracleError::NotAComplex);
                }
                d3.insert(&row);
            }
        }
    }
    Ok((c2, r2, d3.rank()))
}

/// `dim H1(G; F_p) = (|G| - 1) - rank d2`.
pub fn bar_h1(t: &MultTable, p: u64) -> Result<usize, OracleError> {
    let (_, r2, _) = bar_ranks(t, p, false)?;
    Ok(t.order - 1 - r2)
}

/// `dim H2(G; F_p) = dim C2 - rank d2 - rank d3`.
pub fn bar_h2(t: &MultTable, p: u64) -> Result<usize, OracleError> {
    let (c2, r2, r3) = bar_ranks(t, p, true)?;
    Ok(c2 - r2 - r3)
}

/// Both dimensions from one pass.
pub fn bar_homology(t: &MultTable, p: u64) -> Result<(usize, usize), OracleError> {
    let (c2, r2, r3) = bar_ranks(t, p, true)?;
    Ok((t.order - 1 - r2, c2 - r2 - r3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Pipeline against oracle for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRow {
    pub prime: u64,
    pub pipeline_h1: usize,
    pub pipeline_h2: usize,
    pub pipeline_kind: BoundKind,
    pub oracle_h1: usize,
    pub oracle_h2: usize,
    pub verdict: Verdict,
}

/// Compare the pipeline with the bar complex. An exact claim must match and
/// an upper bound must not undercut the oracle.
pub fn check(pres: &Presentation, p: u64, b: &Budget) -> Result<CheckRow, OracleError> {
    check_with_cap(pres, p, b, DEFAULT_CAP)
}

pub fn check_with_cap(
    pres: &Presentation,
    p: u64,
    b: &Budget,
    cap: usize,
) -> Result<CheckRow, OracleError> {
    let table = MultTable::from_presentation(pres, b, cap)?;
    check_table(pres, &table, p, b)
}

/// As [`check`] with a table already built.
pub fn check_table(
    pres: &Presentation,
    table: &MultTable,
    p: u64,
    b: &Budget,
) -> Result<CheckRow, OracleError> {
    let (oracle_h1, oracle_h2) = bar_homology(table, p)?;
    let r = compute(pres, p, b)?;
    let h2_ok = match r.h2_kind {
        BoundKind::Exact => r.h2_value == oracle_h2,
        BoundKind::UpperBound => r.h2_value >= oracle_h2,
    };
    let verdict = if h2_ok && r.h1_dim == oracle_h1 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckRow {
        prime: p,
        pipeline_h1: r.h1_dim,
        pipeline_h2: r.h2_value,
        pipeline_kind: r.h2_kind,
        oracle_h1,
        oracle_h2,
        verdict,
    })
}
