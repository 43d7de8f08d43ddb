//! Mod-p homology through Hopf's formula.
//!
//! For `G = F/R` and the p-cover `Q = F/R^p[F,R]`, the subgroup
//! `A = R/R^p[F,R]` is central, elementary abelian and spanned by the images
//! of the relators. The map `i: A -> F_p^n` sends a relator to its exponent
//! vector mod p, and `dim H2(G; F_p) = dim A - rank i`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::fplinalg::{is_prime, residue, Echelon, LinalgError, MatrixFp};
use crate::presentation::Presentation;
use crate::rewrite::{complete, complete_labelled, to_codes, Budget, BudgetReport, RewriteSystem, Rule};
use crate::words::{Letter, Word};

/// Largest group order enumerated by the order method.
pub const ORDER_CAP: usize = 10_000_000;
/// Largest span enumerated while searching for dependent spanning elements.
pub const SPAN_CAP: usize = 100_000;
/// Pair certificates are only searched when at most this many members remain.
pub const PAIR_SEARCH_LIMIT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("word uses generator {generator} but the arity is {arity}")]
    Arity { generator: usize, arity: usize },
    #[error("|Q| = {cover} is not |G| = {base} times a power of {p}")]
    Integrality { base: usize, cover: usize, p: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl From<LinalgError> for HopfError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotPrime(p) => HopfError::NotPrime(p),
            other => HopfError::Inconsistent(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    UpperBound,
}

impl BoundKind {
    pub fn symbol(self) -> &'static str {
        match self {
            BoundKind::Exact => "=",
            BoundKind::UpperBound => "≤",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Exact => "exact",
            BoundKind::UpperBound => "upper_bound",
        }
    }
}

fn check_prime(p: u64) -> Result<(), HopfError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(HopfError::NotPrime(p))
    }
}

/// `n - rank` of the relator exponent matrix mod p.
pub fn h1_dimension(pres: &Presentation, p: u64) -> Result<usize, HopfError> {
    check_prime(p)?;
    let m = MatrixFp::from_rows(p, pres.arity(), &pres.exponent_rows())?;
    Ok(pres.arity() - m.rank())
}

/// Presentation of `F / R^p [F,R]`: relators `r^p` and `[r, s]`, simplified.
pub fn build_p_cover(pres: &Presentation, p: u64) -> Result<Presentation, HopfError> {
    check_prime(p)?;
    let mut rels = Vec::new();
    for r in pres.relators() {
        rels.push(r.pow(p as i64));
    }
    for r in pres.relators() {
        for s in 0..pres.arity() {
            rels.push(r.commutator(&Word::generator(s)));
        }
    }
    Ok(Presentation::new(pres.generator_names().to_vec(), rels)
        .expect("same generators")
        .simplify())
}

fn shift(w: &Word, by: usize) -> Word {
    Word::new(
        w.letters()
            .iter()
            .map(|l| Letter::new(l.generator() + by, l.is_inverse())),
    )
}

fn fresh_prefix(names: &[String]) -> String {
    let mut prefix = String::from("c");
    while names
        .iter()
        .any(|n| n.starts_with(&prefix) && n[prefix.len()..].chars().all(|c| c.is_ascii_digit()))
    {
        prefix.push('c');
    }
    prefix
}

/// The p-cover with a central letter `c_i` per relator, named and ordered
/// before the original generators: relators `r_i c_i^-1`, `c_i^p`,
/// `[c_i, s]` and `[c_i, c_k]`. Tietze-equivalent to [`build_p_cover`].
pub fn extended_p_cover(pres: &Presentation, p: u64) -> Result<Presentation, HopfError> {
    check_prime(p)?;
    let m = pres.relators().len();
    let n = pres.arity();
    let prefix = fresh_prefix(pres.generator_names());
    let mut names: Vec<String> = (1..=m).map(|i| format!("{prefix}{i}")).collect();
    names.extend(pres.generator_names().iter().cloned());
    let mut rels = Vec::new();
    for (i, r) in pres.relators().iter().enumerate() {
        rels.push(shift(r, m).multiply(&Word::generator(i).inverse()));
    }
    for i in 0..m {
        rels.push(Word::generator(i).pow(p as i64));
    }
    for i in 0..m {
        for s in 0..n {
            rels.push(Word::generator(i).commutator(&Word::generator(m + s)));
        }
    }
    for i in 0..m {
        for k in i + 1..m {
            rels.push(Word::generator(i).commutator(&Word::generator(k)));
        }
    }
    Ok(Presentation::new(names, rels).expect("fresh names"))
}

fn has_nontrivial_relator(pres: &Presentation) -> bool {
    pres.relators().iter().any(|r| !r.is_identity())
}

fn order_method(
    pres: &Presentation,
    p: u64,
    base: &RewriteSystem,
    cover: &RewriteSystem,
) -> Result<Option<usize>, HopfError> {
    if !has_nontrivial_relator(pres) {
        return Ok(Some(0));
    }
    let Some(g) = base.group_order(ORDER_CAP) else {
        return Ok(None);
    };
    let m = pres.relators().len() as u32;
    let bound = (p as u128)
        .checked_pow(m)
        .and_then(|x| x.checked_mul(g as u128))
        .map_or(ORDER_CAP, |x| x.min(ORDER_CAP as u128) as usize);
    let Some(q) = cover.group_order(bound.saturating_add(1)) else {
        return Ok(None);
    };
    if q % g != 0 {
        return Err(HopfError::Integrality { base: g, cover: q, p });
    }
    let mut ratio = q / g;
    let mut d = 0;
    while ratio > 1 {
        if ratio % p as usize != 0 {
            return Err(HopfError::Integrality { base: g, cover: q, p });
        }
        ratio /= p as usize;
        d += 1;
    }
    Ok(Some(d))
}

/// `log_p(|Q| / |G|)` when both groups complete and enumerate within the caps.
pub fn dim_a_exact_finite(
    pres: &Presentation,
    p: u64,
    b: &Budget,
) -> Result<Option<usize>, HopfError> {
    check_prime(p)?;
    if !has_nontrivial_relator(pres) {
        return Ok(Some(0));
    }
    let base = complete(pres, b);
    let cover = complete(&extended_p_cover(pres, p)?, b);
    order_method(pres, p, &base, &cover)
}

/// An equation among the central letters observed in the p-cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Relator `member` is the empty word, so `c_member = 1`.
    Trivial { member: usize },
    /// Relator `member` is conjugate to relator `of` (or to its inverse).
    Conjugate {
        member: usize,
        of: usize,
        inverse: bool,
    },
    /// A rotation of relator `member` reduces to the central word `value`.
    Rotation {
        member: usize,
        rotation: usize,
        value: Word,
    },
    /// Two central words with equal normal forms, over the extended alphabet.
    Equal { lhs: Word, rhs: Word },
    /// A relation `prod c_i^v_i = 1` met as a critical pair of the labelled
    /// completion of the base presentation.
    Identity { vector: Vec<u64> },
}

/// Why a relator was dropped from the spanning set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Trivial {
        member: usize,
    },
    Conjugate {
        member: usize,
        of: usize,
    },
    /// `NF(c_member^-1 * prod c_k^e) = 1` in the p-cover.
    Normalizes {
        member: usize,
        coeffs: Vec<(usize, u64)>,
    },
    /// `e_member - sum e * e_k` lies in the span of the witness equations.
    Linear {
        member: usize,
        coeffs: Vec<(usize, u64)>,
    },
}

impl Certificate {
    pub fn member(&self) -> usize {
        match self {
            Certificate::Trivial { member }
            | Certificate::Conjugate { member, .. }
            | Certificate::Normalizes { member, .. }
            | Certificate::Linear { member, .. } => *member,
        }
    }
}

/// Output of [`find_basis`].
#[derive(Debug, Clone)]
pub struct Basis {
    pub p: u64,
    /// Indices into the relator list of the surviving members.
    pub members: Vec<usize>,
    pub spanning_set: Vec<Word>,
    pub certificates: Vec<Certificate>,
    pub witnesses: Vec<Witness>,
    pub kind: BoundKind,
    pub dim_a_exact: Option<usize>,
    pub confluent_base: bool,
    pub confluent_cover: bool,
    pub base_report: BudgetReport,
    pub cover_report: BudgetReport,
    cover: RewriteSystem,
    cover_names: Vec<String>,
    budget: Budget,
    presentation: Presentation,
    relators: Vec<Word>,
    arity: usize,
}

struct Context<'a> {
    pres: &'a Presentation,
    p: u64,
    m: usize,
    base: RewriteSystem,
    cover: RewriteSystem,
    cover_names: Vec<String>,
    identities: Vec<Vec<u64>>,
    budget: Budget,
    dim_a_exact: Option<usize>,
}

fn c_power(i: usize, e: u64) -> Vec<u32> {
    vec![2 * i as u32; e as usize]
}

fn c_vector(codes: &[u32], m: usize, p: u64) -> Option<Vec<u64>> {
    let mut v = vec![0i64; m];
    for &x in codes {
        let g = (x / 2) as usize;
        if g >= m {
            return None;
        }
        v[g] += if x & 1 == 1 { -1 } else { 1 };
    }
    Some(v.into_iter().map(|x| residue(x, p)).collect())
}

fn rotations(r: &Word) -> (Word, usize) {
    let (core, _) = r.cyclic_reduce();
    let n = core.len();
    (core, n)
}

/// Does some rotation of `a`'s core equal some rotation of `b`'s core?
fn same_rotation_class(a: &Word, b: &Word) -> bool {
    let (ca, na) = rotations(a);
    let (cb, _) = rotations(b);
    (0..na.max(1)).any(|k| ca.rotate(k) == cb)
}

impl<'a> Context<'a> {
    fn new(pres: &'a Presentation, p: u64, b: &Budget) -> Result<Self, HopfError> {
        check_prime(p)?;
        let (base, identities) = complete_labelled(pres, p, b);
        let ext = extended_p_cover(pres, p)?;
        let cover = complete(&ext, b);
        let dim_a_exact = order_method(pres, p, &base, &cover)?;
        Ok(Context {
            pres,
            p,
            m: pres.relators().len(),
            base,
            cover,
            cover_names: ext.generator_names().to_vec(),
            identities,
            budget: *b,
            dim_a_exact,
        })
    }

    fn nf(&self, codes: &[u32]) -> Option<Vec<u32>> {
        self.cover.reduce_codes(codes).ok()
    }

    fn rotation_word(&self, member: usize, k: usize) -> Word {
        let (core, _) = self.pres.relators()[member].cyclic_reduce();
        shift(&core.rotate(k), self.m)
    }

    fn find_basis(self) -> Basis {
        let m = self.m;
        let p = self.p;
        let rels = self.pres.relators();
        let mut alive = vec![true; m];
        let mut certificates = Vec::new();
        let mut witnesses = Vec::new();

        for (i, r) in rels.iter().enumerate() {
            if r.is_identity() {
                alive[i] = false;
                certificates.push(Certificate::Trivial { member: i });
                witnesses.push(Witness::Trivial { member: i });
            }
        }
        let keys: Vec<Word> = rels.iter().map(Word::cyclic_key).collect();
        for i in 0..m {
            if !alive[i] {
                continue;
            }
            if let Some(j) = (0..i).find(|&j| alive[j] && keys[j] == keys[i]) {
                alive[i] = false;
                certificates.push(Certificate::Conjugate { member: i, of: j });
                witnesses.push(Witness::Conjugate {
                    member: i,
                    of: j,
                    inverse: !same_rotation_class(&rels[i], &rels[j]),
                });
            }
        }

        // Equations among the central letters.
        for v in &self.identities {
            witnesses.push(Witness::Identity { vector: v.clone() });
        }
        for rule in self.cover.rules() {
            let (l, r) = (to_codes(&rule.lhs), to_codes(&rule.rhs));
            if let (Some(a), Some(b)) = (c_vector(&l, m, p), c_vector(&r, m, p)) {
                if a != b {
                    witnesses.push(Witness::Equal {
                        lhs: rule.lhs,
                        rhs: rule.rhs,
                    });
                }
            }
        }
        for i in 0..m {
            if !alive[i] {
                continue;
            }
            let (_, n) = rotations(&rels[i]);
            for k in 0..n {
                let w = self.rotation_word(i, k);
                let Some(nf) = self.nf(&to_codes(&w)) else {
                    continue;
                };
                let Some(v) = c_vector(&nf, m, p) else {
                    continue;
                };
                let mut unit = vec![0u64; m];
                unit[i] = 1;
                if v != unit {
                    witnesses.push(Witness::Rotation {
                        member: i,
                        rotation: k,
                        value: crate::rewrite::from_codes(&nf),
                    });
                }
            }
        }
        self.linear_elimination(&mut alive, &witnesses, &mut certificates);

        let span_complete = self.span_search(&mut alive, &mut certificates);
        if !(span_complete && self.cover.is_confluent()) {
            self.pair_search(&mut alive, &mut certificates);
        }

        let members: Vec<usize> = (0..m).filter(|&i| alive[i]).collect();
        let spanning_set: Vec<Word> = members.iter().map(|&i| rels[i].clone()).collect();
        let single_relator = members.len() == 1 && {
            let v = rels[members[0]].exponent_vector(self.pres.arity()).unwrap();
            v.iter().all(|&x| residue(x, p) == 0)
        };
        let kind = match self.dim_a_exact {
            Some(d) if d == members.len() => BoundKind::Exact,
            _ if single_relator => BoundKind::Exact,
            _ => BoundKind::UpperBound,
        };
        Basis {
            p,
            members,
            spanning_set,
            certificates,
            witnesses,
            kind,
            dim_a_exact: self.dim_a_exact,
            confluent_base: self.base.is_confluent(),
            confluent_cover: self.cover.is_confluent(),
            base_report: self.base.report().clone(),
            cover_report: self.cover.report().clone(),
            cover: self.cover,
            cover_names: self.cover_names,
            budget: self.budget,
            presentation: self.pres.clone(),
            relators: rels.to_vec(),
            arity: self.pres.arity(),
        }
    }

    /// Row-reduce the witness equations so that the latest members are
    /// eliminated first; drop every alive member that becomes a pivot.
    fn linear_elimination(
        &self,
        alive: &mut [bool],
        witnesses: &[Witness],
        certificates: &mut Vec<Certificate>,
    ) {
        let m = self.m;
        let vectors: Vec<Vec<u64>> = witnesses
            .iter()
            .filter_map(|w| witness_vector(w, self.pres.relators(), m, self.p))
            .collect();
        if vectors.is_empty() {
            return;
        }
        // Column order: removed members first, then alive ones from last to first.
        let mut order: Vec<usize> = (0..m).filter(|&i| !alive[i]).collect();
        order.extend((0..m).rev().filter(|&i| alive[i]));
        let rows: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| order.iter().map(|&i| v[i] as i64).collect())
            .collect();
        let mat = MatrixFp::from_rows(self.p, m, &rows).expect("prime checked");
        let (red, rank, pivots) = mat.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; m];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        for r in 0..rank {
            let member = order[pivots[r]];
            if !alive[member] {
                continue;
            }
            let mut coeffs = Vec::new();
            for (c, &idx) in order.iter().enumerate() {
                let x = red.get(r, c);
                if x != 0 && !pivot_set[c] {
                    debug_assert!(alive[idx]);
                    coeffs.push((idx, (self.p - x) % self.p));
                }
            }
            coeffs.sort();
            alive[member] = false;
            certificates.push(Certificate::Linear { member, coeffs });
        }
    }

    /// Grow the span of the alive central letters in input order, dropping
    /// members already inside it. Returns false if the cap stopped the search.
    fn span_search(&self, alive: &mut [bool], certificates: &mut Vec<Certificate>) -> bool {
        let p = self.p;
        let mut span: HashMap<Vec<u32>, Vec<(usize, u64)>> = HashMap::new();
        span.insert(Vec::new(), Vec::new());
        for i in 0..self.m {
            if !alive[i] {
                continue;
            }
            let Some(nf) = self.nf(&c_power(i, 1)) else {
                return false;
            };
            if let Some(coeffs) = span.get(&nf) {
                let coeffs = coeffs.clone();
                if self.normalizes(i, &coeffs) {
                    alive[i] = false;
                    certificates.push(Certificate::Normalizes { member: i, coeffs });
                    continue;
                }
            }
            if span.len().saturating_mul(p as usize) > SPAN_CAP {
                return false;
            }
            let mut next = HashMap::with_capacity(span.len() * p as usize);
            for (w, coeffs) in &span {
                let mut cur = w.clone();
                for e in 0..p {
                    let mut c = coeffs.clone();
                    if e > 0 {
                        c.push((i, e));
                    }
                    next.entry(cur.clone()).or_insert(c);
                    cur.push(2 * i as u32);
                    match self.nf(&cur) {
                        Some(x) => cur = x,
                        None => return false,
                    }
                }
            }
            span = next;
        }
        true
    }

    fn normalizes(&self, member: usize, coeffs: &[(usize, u64)]) -> bool {
        let w = normalizes_word(member, coeffs);
        matches!(self.nf(&w), Some(x) if x.is_empty())
    }

    /// Try `c_rho = c_l^e` and `c_rho = c_l^e c_k^f` among alive members.
    fn pair_search(&self, alive: &mut [bool], certificates: &mut Vec<Certificate>) {
        let p = self.p;
        if alive.iter().filter(|&&a| a).count() > PAIR_SEARCH_LIMIT {
            return;
        }
        for rho in 0..self.m {
            if !alive[rho] {
                continue;
            }
            let others: Vec<usize> = (0..self.m).filter(|&i| alive[i] && i != rho).collect();
            let mut found = None;
            'single: for &l in &others {
                for e in 1..p {
                    let c = vec![(l, e)];
                    if self.normalizes(rho, &c) {
                        found = Some(c);
                        break 'single;
                    }
                }
            }
            if found.is_none() {
                'pair: for (a, &l) in others.iter().enumerate() {
                    for &k in &others[a + 1..] {
                        for e in 1..p {
                            for f in 1..p {
                                let c = vec![(l, e), (k, f)];
                                if self.normalizes(rho, &c) {
                                    found = Some(c);
                                    break 'pair;
                                }
                            }
                        }
                    }
                }
            }
            if let Some(coeffs) = found {
                alive[rho] = false;
                certificates.push(Certificate::Normalizes { member: rho, coeffs });
            }
        }
    }
}

fn normalizes_word(member: usize, coeffs: &[(usize, u64)]) -> Vec<u32> {
    let mut w = vec![2 * member as u32 + 1];
    for &(k, e) in coeffs {
        w.extend(c_power(k, e));
    }
    w
}

fn witness_vector(w: &Witness, rels: &[Word], m: usize, p: u64) -> Option<Vec<u64>> {
    let mut v = vec![0u64; m];
    match w {
        Witness::Trivial { member } => {
            v[*member] = 1;
        }
        Witness::Conjugate {
            member,
            of,
            inverse,
        } => {
            v[*member] = 1;
            v[*of] = if *inverse { 1 } else { p - 1 };
        }
        Witness::Rotation { member, value, .. } => {
            let x = c_vector(&to_codes(value), m, p)?;
            for (a, b) in v.iter_mut().zip(&x) {
                *a = (p - b) % p;
            }
            v[*member] = (v[*member] + 1) % p;
        }
        Witness::Identity { vector } => {
            v.clone_from(vector);
        }
        Witness::Equal { lhs, rhs } => {
            let a = c_vector(&to_codes(lhs), m, p)?;
            let b = c_vector(&to_codes(rhs), m, p)?;
            for i in 0..m {
                v[i] = (a[i] + p - b[i]) % p;
            }
        }
    }
    let _ = rels;
    Some(v)
}

impl Basis {
    /// Completed rewriting system of the extended p-cover.
    pub fn cover_system(&self) -> &RewriteSystem {
        &self.cover
    }

    /// Generator names of the extended p-cover: central letters first.
    pub fn cover_names(&self) -> &[String] {
        &self.cover_names
    }

    /// Replay every witness and certificate against the p-cover system.
    pub fn verify(&self) -> Result<(), String> {
        let m = self.relators.len();
        let p = self.p;
        let nf = |c: &[u32]| self.cover.reduce_codes(c).map_err(|e| e.to_string());
        let mut span = Echelon::new(p, m);
        let rules: HashSet<Rule> = self.cover.rules().into_iter().collect();
        let mut identities = None;
        for (idx, w) in self.witnesses.iter().enumerate() {
            let ok = match w {
                Witness::Trivial { member } => self.relators[*member].is_identity(),
                Witness::Conjugate {
                    member,
                    of,
                    inverse,
                } => {
                    let a = &self.relators[*member];
                    let b = &self.relators[*of];
                    if *inverse {
                        same_rotation_class(a, &b.inverse())
                    } else {
                        same_rotation_class(a, b)
                    }
                }
                Witness::Rotation {
                    member,
                    rotation,
                    value,
                } => {
                    let (core, _) = self.relators[*member].cyclic_reduce();
                    let w = shift(&core.rotate(*rotation), m);
                    nf(&to_codes(&w))? == nf(&to_codes(value))?
                }
                Witness::Equal { lhs, rhs } => {
                    let rule = Rule {
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                    };
                    rules.contains(&rule) || nf(&to_codes(lhs))? == nf(&to_codes(rhs))?
                }
                Witness::Identity { vector } => {
                    let found = identities.get_or_insert_with(|| {
                        let (_, found) = complete_labelled(&self.presentation, p, &self.budget);
                        let mut e = Echelon::new(p, m);
                        for v in &found {
                            e.insert(v);
                        }
                        e
                    });
                    found.contains(vector)
                }
            };
            if !ok {
                return Err(format!("witness {idx} does not replay"));
            }
            let v = witness_vector(w, &self.relators, m, p)
                .ok_or_else(|| format!("witness {idx} is not central"))?;
            span.insert(&v);
        }
        let mut alive = vec![true; m];
        for c in &self.certificates {
            let member = c.member();
            if !alive[member] {
                return Err(format!("member {member} removed twice"));
            }
            let uses: Vec<usize> = match c {
                Certificate::Trivial { .. } => {
                    if !self.relators[member].is_identity() {
                        return Err(format!("member {member} is not trivial"));
                    }
                    vec![]
                }
                Certificate::Conjugate { of, .. } => {
                    if self.relators[member].cyclic_key() != self.relators[*of].cyclic_key() {
                        return Err(format!("member {member} is not conjugate to {of}"));
                    }
                    vec![*of]
                }
                Certificate::Normalizes { coeffs, .. } => {
                    if !nf(&normalizes_word(member, coeffs))?.is_empty() {
                        return Err(format!("member {member} does not normalize"));
                    }
                    coeffs.iter().map(|c| c.0).collect()
                }
                Certificate::Linear { coeffs, .. } => {
                    let mut v = vec![0u64; m];
                    v[member] = 1;
                    for &(k, e) in coeffs {
                        v[k] = (v[k] + p - e % p) % p;
                    }
                    if !span.contains(&v) {
                        return Err(format!("member {member} is not in the witness span"));
                    }
                    coeffs.iter().map(|c| c.0).collect()
                }
            };
            if uses.iter().any(|&k| !alive[k] || k == member) {
                return Err(format!("certificate for {member} uses a removed member"));
            }
            alive[member] = false;
        }
        let survivors: Vec<usize> = (0..m).filter(|&i| alive[i]).collect();
        if survivors != self.members {
            return Err("survivors do not match the spanning set".into());
        }
        Ok(())
    }

    /// Exponent vectors mod p of the spanning set.
    pub fn image_matrix(&self) -> MatrixFp {
        image_matrix(&self.spanning_set, self.arity, self.p).expect("validated words")
    }
}

/// Reduce the relator list to a smaller spanning set of `A`, each removal
/// carrying a replayable certificate.
pub fn find_basis(pres: &Presentation, p: u64, b: &Budget) -> Result<Basis, HopfError> {
    Ok(Context::new(pres, p, b)?.find_basis())
}

/// Row `k` is the exponent vector of `s_k[k]` mod p.
pub fn image_matrix(s_k: &[Word], n: usize, p: u64) -> Result<MatrixFp, HopfError> {
    check_prime(p)?;
    let rows = s_k
        .iter()
        .map(|w| {
            w.exponent_vector(n).map_err(|e| match e {
                crate::words::WordError::ArityMismatch { generator, arity } => {
                    HopfError::Arity { generator, arity }
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixFp::from_rows(p, n, &rows)?)
}

pub fn h2_dimension(pres: &Presentation, p: u64, b: &Budget) -> Result<(usize, BoundKind), HopfError> {
    let r = compute(pres, p, b)?;
    Ok((r.h2_value, r.h2_kind))
}

pub fn h2_generator_candidates(
    pres: &Presentation,
    p: u64,
    b: &Budget,
) -> Result<Vec<Candidate>, HopfError> {
    let basis = find_basis(pres, p, b)?;
    Ok(candidates(&basis))
}

/// A left-kernel vector of the image matrix and the word it names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub coeffs: Vec<u64>,
    pub word: Word,
}

fn candidates(basis: &Basis) -> Vec<Candidate> {
    let m = basis.image_matrix();
    m.left_kernel_basis()
        .into_iter()
        .map(|c| {
            let mut w = Word::identity();
            for (lambda, &e) in basis.spanning_set.iter().zip(&c) {
                if e != 0 {
                    w = w.multiply(&lambda.pow(e as i64));
                }
            }
            Candidate { coeffs: c, word: w }
        })
        .collect()
}

/// Full pipeline output for one presentation and prime.
#[derive(Debug, Clone)]
pub struct HopfResult {
    pub prime: u64,
    pub n_generators: usize,
    pub h1_dim: usize,
    pub dim_a: usize,
    pub dim_a_kind: BoundKind,
    pub rank_image: usize,
    pub h2_value: usize,
    pub h2_kind: BoundKind,
    pub spanning_set: Vec<Word>,
    pub candidates: Vec<Candidate>,
    pub basis: Basis,
    pub image: MatrixFp,
}

impl HopfResult {
    pub fn confluent_base(&self) -> bool {
        self.basis.confluent_base
    }

    pub fn confluent_cover(&self) -> bool {
        self.basis.confluent_cover
    }

    /// The documented JSON record.
    pub fn to_json(&self, group: &str, names: &[String]) -> serde_json::Value {
        #[derive(Serialize)]
        struct Cand {
            coeffs: Vec<u64>,
            word: String,
        }
        #[derive(Serialize)]
        struct Counters<'a> {
            base: &'a BudgetReport,
            cover: &'a BudgetReport,
            relators: usize,
            removed: usize,
        }
        #[derive(Serialize)]
        struct Record<'a> {
            group: &'a str,
            prime: u64,
            n_generators: usize,
            h1_dim: usize,
            #[serde(rename = "dim_A")]
            dim_a: usize,
            #[serde(rename = "dim_A_kind")]
            dim_a_kind: BoundKind,
            rank_image: usize,
            h2_value: usize,
            h2_kind: BoundKind,
            confluent_base: bool,
            confluent_cover: bool,
            spanning_set: Vec<String>,
            candidates: Vec<Cand>,
            budget: Counters<'a>,
        }
        let show = |w: &Word| w.display(names).to_string();
        let rec = Record {
            group,
            prime: self.prime,
            n_generators: self.n_generators,
            h1_dim: self.h1_dim,
            dim_a: self.dim_a,
            dim_a_kind: self.dim_a_kind,
            rank_image: self.rank_image,
            h2_value: self.h2_value,
            h2_kind: self.h2_kind,
            confluent_base: self.confluent_base(),
            confluent_cover: self.confluent_cover(),
            spanning_set: self.spanning_set.iter().map(show).collect(),
            candidates: self
                .candidates
                .iter()
                .map(|c| Cand {
                    coeffs: c.coeffs.clone(),
                    word: show(&c.word),
                })
                .collect(),
            budget: Counters {
                base: &self.basis.base_report,
                cover: &self.basis.cover_report,
                relators: self.basis.relators.len(),
                removed: self.basis.certificates.len(),
            },
        };
        serde_json::to_value(rec).expect("plain data")
    }
}

/// Run the whole pipeline once.
pub fn compute(pres: &Presentation, p: u64, b: &Budget) -> Result<HopfResult, HopfError> {
    let h1 = h1_dimension(pres, p)?;
    let basis = find_basis(pres, p, b)?;
    let image = basis.image_matrix();
    let rank = image.rank();
    let s = basis.spanning_set.len();
    let h2 = s - rank;
    let n = pres.arity();
    if rank != n - h1 {
        return Err(HopfError::Inconsistent(format!(
            "image rank {rank} differs from relator rank {}",
            n - h1
        )));
    }
    if let (BoundKind::Exact, Some(d)) = (basis.kind, basis.dim_a_exact) {
        if d != h2 + n - h1 {
            return Err(HopfError::Inconsistent(format!(
                "dim A = {d} but h2 + n - h1 = {}",
                h2 + n - h1
            )));
        }
    }
    let cands = candidates(&basis);
    debug_assert_eq!(cands.len(), h2);
    Ok(HopfResult {
        prime: p,
        n_generators: n,
        h1_dim: h1,
        dim_a: s,
        dim_a_kind: basis.kind,
        rank_image: rank,
        h2_value: h2,
        h2_kind: basis.kind,
        spanning_set: basis.spanning_set.clone(),
        candidates: cands,
        basis,
        image,
    })
}
