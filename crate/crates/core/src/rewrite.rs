//! Shortlex string rewriting for group presentations and Knuth–Bendix completion.
//!
//! The alphabet is `g0 < g0^-1 < g1 < g1^-1 < ...`, which is exactly the order
//! of [`Letter::code`]. Internally words are plain code vectors.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::fplinalg::Echelon;
use crate::presentation::Presentation;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("normal form step limit of {0} exceeded")]
    StepLimit(u64),
    #[error("rewriting system is not confluent")]
    NotConfluent,
    #[error("more than {0} irreducible words")]
    Overflow(usize),
}

/// Effort limits for completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_rules: usize,
    pub max_rule_length: usize,
    pub max_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_rules: 20_000,
            max_rule_length: 64,
            max_steps: 50_000_000,
        }
    }
}

/// What a completion run spent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub rules: usize,
    pub rules_created: usize,
    pub longest_lhs: usize,
    pub steps: u64,
    pub overlaps: u64,
    pub dropped_long_rules: usize,
    pub hit_rule_limit: bool,
    pub hit_step_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

type Codes = Vec<u32>;

/// Shortlex comparison on letter codes.
pub(crate) fn shortlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub(crate) fn to_codes(w: &Word) -> Codes {
    w.letters().iter().map(|l| l.code()).collect()
}

pub(crate) fn from_codes(c: &[u32]) -> Word {
    Word::new(c.iter().map(|&x| Letter::from_code(x)))
}

fn inverse_codes(c: &[u32]) -> Codes {
    c.iter().rev().map(|&x| x ^ 1).collect()
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Default)]
struct Node {
    edges: Vec<(u32, u32)>,
    rule: u32,
}

/// Letter trie; terminals carry a rule index.
#[derive(Debug, Clone)]
struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            nodes: vec![Node {
                edges: Vec::new(),
                rule: NONE,
            }],
        }
    }

    #[inline]
    fn child(&self, node: u32, letter: u32) -> Option<u32> {
        self.nodes[node as usize]
            .edges
            .iter()
            .find(|e| e.0 == letter)
            .map(|e| e.1)
    }

    /// Insert; returns false if the key already carries a live rule.
    fn insert<I: Iterator<Item = u32>>(&mut self, key: I, rule: u32) -> bool {
        let mut node = 0u32;
        for x in key {
            node = match self.child(node, x) {
                Some(c) => c,
                None => {
                    let id = self.nodes.len() as u32;
                    self.nodes.push(Node {
                        edges: Vec::new(),
                        rule: NONE,
                    });
                    self.nodes[node as usize].edges.push((x, id));
                    id
                }
            };
        }
        let slot = &mut self.nodes[node as usize].rule;
        if *slot != NONE {
            return false;
        }
        *slot = rule;
        true
    }

    fn remove<I: Iterator<Item = u32>>(&mut self, key: I, rule: u32) {
        let mut node = 0u32;
        for x in key {
            match self.child(node, x) {
                Some(c) => node = c,
                None => return,
            }
        }
        let slot = &mut self.nodes[node as usize].rule;
        if *slot == rule {
            *slot = NONE;
        }
    }

    /// Rules whose key ends exactly at the end of `word` (the trie holds
    /// reversed keys); returns the shortest.
    #[inline]
    fn match_suffix(&self, word: &[u32]) -> Option<u32> {
        let mut node = 0u32;
        for &x in word.iter().rev() {
            node = self.child(node, x)?;
            let r = self.nodes[node as usize].rule;
            if r != NONE {
                return Some(r);
            }
        }
        None
    }

    fn collect_subtree(&self, node: u32, out: &mut Vec<u32>) {
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            let nd = &self.nodes[n as usize];
            if n != node && nd.rule != NONE {
                out.push(nd.rule);
            }
            stack.extend(nd.edges.iter().map(|e| e.1));
        }
    }
}

/// Number of elements of a group given by a confluent system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSize {
    Finite(u128),
    Infinite,
}

/// A shortlex rewriting system over the group alphabet of `arity` generators.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    arity: usize,
    rules: Vec<(Codes, Codes)>,
    confluent: bool,
    report: BudgetReport,
    step_limit: u64,
    rev: Trie,
}

impl RewriteSystem {
    fn from_rules(
        arity: usize,
        rules: Vec<(Codes, Codes)>,
        confluent: bool,
        report: BudgetReport,
        step_limit: u64,
    ) -> Self {
        let mut rev = Trie::new();
        for (i, (l, _)) in rules.iter().enumerate() {
            rev.insert(l.iter().rev().copied(), i as u32);
        }
        RewriteSystem {
            arity,
            rules,
            confluent,
            report,
            step_limit,
            rev,
        }
    }

    /// Free-group inverse rules plus one rule per nontrivial relator.
    pub fn initial_rules(p: &Presentation) -> Self {
        let arity = p.arity();
        let mut rules = Vec::new();
        for g in 0..arity as u32 {
            rules.push((vec![2 * g, 2 * g + 1], vec![]));
            rules.push((vec![2 * g + 1, 2 * g], vec![]));
        }
        for r in p.relators() {
            if let Some(rule) = orient_relator(&to_codes(r)) {
                rules.push(rule);
            }
        }
        let confluent = p.relators().iter().all(Word::is_identity);
        let report = BudgetReport {
            rules: rules.len(),
            rules_created: rules.len(),
            longest_lhs: rules.iter().map(|r| r.0.len()).max().unwrap_or(0),
            ..BudgetReport::default()
        };
        Self::from_rules(arity, rules, confluent, report, Budget::default().max_steps)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn report(&self) -> &BudgetReport {
        &self.report
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.rules
            .iter()
            .map(|(l, r)| Rule {
                lhs: from_codes(l),
                rhs: from_codes(r),
            })
            .collect()
    }

    /// Cap on rewriting steps for a single normal-form computation.
    pub fn set_step_limit(&mut self, limit: u64) {
        self.step_limit = limit;
    }

    pub(crate) fn reduce_codes(&self, input: &[u32]) -> Result<Codes, RewriteError> {
        let mut steps = 0u64;
        reduce_with(&self.rev, &self.rules, input, &mut steps, self.step_limit)
    }

    /// Irreducible form of `w`. Canonical when the system is confluent.
    pub fn normal_form(&self, w: &Word) -> Result<Word, RewriteError> {
        Ok(from_codes(&self.reduce_codes(&to_codes(w))?))
    }

    pub fn is_irreducible(&self, w: &Word) -> bool {
        let c = to_codes(w);
        (1..=c.len()).all(|e| self.rev.match_suffix(&c[..e]).is_none())
    }

    /// Run completion within `budget`.
    pub fn knuth_bendix(&self, budget: &Budget) -> RewriteSystem {
        Completion::run(self, budget)
    }

    /// All irreducible words in shortlex order, or `Overflow` past `cap`.
    pub fn enumerate_elements(&self, cap: usize) -> Result<Vec<Word>, RewriteError> {
        Ok(self
            .enumerate_codes(cap)?
            .iter()
            .map(|c| from_codes(c))
            .collect())
    }

    pub(crate) fn enumerate_codes(&self, cap: usize) -> Result<Vec<Codes>, RewriteError> {
        if !self.confluent {
            return Err(RewriteError::NotConfluent);
        }
        let letters = 2 * self.arity as u32;
        let mut all: Vec<Codes> = vec![vec![]];
        let mut layer_start = 0;
        loop {
            let layer_end = all.len();
            if layer_start == layer_end {
                break;
            }
            for i in layer_start..layer_end {
                for x in 0..letters {
                    let mut w = all[i].clone();
                    w.push(x);
                    if self.rev.match_suffix(&w).is_none() {
                        if all.len() >= cap {
                            return Err(RewriteError::Overflow(cap));
                        }
                        all.push(w);
                    }
                }
            }
            layer_start = layer_end;
        }
        Ok(all)
    }

    /// Number of elements if the system is confluent and the group has at
    /// most `cap` elements.
    pub fn group_order(&self, cap: usize) -> Option<usize> {
        match self.size() {
            Ok(GroupSize::Finite(n)) if n <= cap as u128 => Some(n as usize),
            _ => None,
        }
    }

    /// Count irreducible words with an automaton over the left-hand sides:
    /// the group is infinite iff the automaton of irreducible words has a
    /// reachable cycle.
    pub fn size(&self) -> Result<GroupSize, RewriteError> {
        if !self.confluent {
            return Err(RewriteError::NotConfluent);
        }
        let letters = 2 * self.arity;
        let nodes: usize = self.rules.iter().map(|r| r.0.len()).sum::<usize>() + 1;
        if nodes.saturating_mul(letters.max(1)) > 50_000_000 {
            return Err(RewriteError::Overflow(nodes));
        }
        const NO: u32 = u32::MAX;
        let mut next: Vec<u32> = vec![NO; letters];
        let mut dead: Vec<bool> = vec![false];
        for (l, _) in &self.rules {
            let mut v = 0usize;
            for &x in l {
                let slot = v * letters + x as usize;
                if next[slot] == NO {
                    next[slot] = dead.len() as u32;
                    dead.push(false);
                    next.extend(std::iter::repeat_n(NO, letters));
                }
                v = next[slot] as usize;
            }
            dead[v] = true;
        }
        // Breadth-first failure links turn the trie into a full automaton.
        let n = dead.len();
        let mut fail = vec![0u32; n];
        let mut queue = std::collections::VecDeque::new();
        for x in 0..letters {
            let t = next[x];
            if t == NO {
                next[x] = 0;
            } else {
                fail[t as usize] = 0;
                queue.push_back(t as usize);
            }
        }
        while let Some(v) = queue.pop_front() {
            dead[v] = dead[v] || dead[fail[v] as usize];
            for x in 0..letters {
                let t = next[v * letters + x];
                let f = next[fail[v] as usize * letters + x];
                if t == NO {
                    next[v * letters + x] = f;
                } else {
                    fail[t as usize] = f;
                    queue.push_back(t as usize);
                }
            }
        }
        // Iterative depth-first search: colour 1 on stack, 2 finished.
        let mut colour = vec![0u8; n];
        let mut count = vec![0u128; n];
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        colour[0] = 1;
        while let Some(top) = stack.last_mut() {
            let (v, x) = *top;
            if x < letters {
                top.1 += 1;
                let t = next[v * letters + x] as usize;
                if dead[t] {
                    continue;
                }
                match colour[t] {
                    0 => {
                        colour[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return Ok(GroupSize::Infinite),
                    _ => {}
                }
            } else {
                let total = (0..letters)
                    .map(|x| next[v * letters + x] as usize)
                    .filter(|&t| !dead[t])
                    .fold(1u128, |acc, t| acc.saturating_add(count[t]));
                count[v] = total;
                colour[v] = 2;
                stack.pop();
            }
        }
        Ok(GroupSize::Finite(count[0]))
    }

    /// Text dump: a confluence header then `lhs -> rhs` lines.
    pub fn dump<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = format!("# confluent: {}\n", self.confluent);
        for (l, r) in &self.rules {
            let _ = writeln!(
                out,
                "{} -> {}",
                from_codes(l).display(names),
                from_codes(r).display(names)
            );
        }
        out
    }
}

pub fn initial_rules(p: &Presentation) -> RewriteSystem {
    RewriteSystem::initial_rules(p)
}

pub fn knuth_bendix(rws: &RewriteSystem, b: &Budget) -> RewriteSystem {
    rws.knuth_bendix(b)
}

pub fn normal_form(rws: &RewriteSystem, w: &Word) -> Result<Word, RewriteError> {
    rws.normal_form(w)
}

pub fn enumerate_elements(rws: &RewriteSystem, cap: usize) -> Result<Vec<Word>, RewriteError> {
    rws.enumerate_elements(cap)
}

pub fn group_order(rws: &RewriteSystem, cap: usize) -> Option<usize> {
    rws.group_order(cap)
}

/// Complete the presentation's initial rules.
pub fn complete(p: &Presentation, b: &Budget) -> RewriteSystem {
    RewriteSystem::initial_rules(p).knuth_bendix(b)
}

/// Completion in which every rule remembers, mod `prime`, the relators it
/// was derived from. Also returns independent vectors `v` with
/// `prod c_i^v_i = 1`, where `c_i` is the image of relator `i` in the central
/// quotient `F / R^prime [F,R]`. Sound whether or not completion finishes.
pub fn complete_labelled(
    p: &Presentation,
    prime: u64,
    b: &Budget,
) -> (RewriteSystem, Vec<Vec<u64>>) {
    Completion::run_labelled(p, prime, b)
}

/// Split relator `w = xy` with `|x| = ceil(|w|/2)` into the rule `x -> y^-1`,
/// swapped if the right side is larger.
fn orient_relator(w: &[u32]) -> Option<(Codes, Codes)> {
    if w.is_empty() {
        return None;
    }
    let cut = w.len().div_ceil(2);
    let x = w[..cut].to_vec();
    let y = inverse_codes(&w[cut..]);
    orient(x, y)
}

fn orient(a: Codes, b: Codes) -> Option<(Codes, Codes)> {
    match shortlex(&a, &b) {
        Ordering::Greater => Some((a, b)),
        Ordering::Less => Some((b, a)),
        Ordering::Equal => None,
    }
}

fn reduce_with(
    rev: &Trie,
    rules: &[(Codes, Codes)],
    input: &[u32],
    steps: &mut u64,
    limit: u64,
) -> Result<Codes, RewriteError> {
    reduce_tracking(rev, rules, input, steps, limit, |_| {})
}

fn reduce_tracking<F: FnMut(usize)>(
    rev: &Trie,
    rules: &[(Codes, Codes)],
    input: &[u32],
    steps: &mut u64,
    limit: u64,
    mut applied: F,
) -> Result<Codes, RewriteError> {
    let mut out: Codes = Vec::with_capacity(input.len());
    let mut pending: Codes = input.iter().rev().copied().collect();
    let start = *steps;
    while let Some(x) = pending.pop() {
        out.push(x);
        if let Some(r) = rev.match_suffix(&out) {
            let (l, rhs) = &rules[r as usize];
            out.truncate(out.len() - l.len());
            pending.extend(rhs.iter().rev());
            applied(r as usize);
            *steps += 1;
            if *steps - start > limit {
                return Err(RewriteError::StepLimit(limit));
            }
        }
    }
    Ok(out)
}

/// Central labels: rule `l -> r` with vector `v` means `l = r * prod c_i^v_i`
/// where `c_i` is the image of relator `i` in `F / R^p [F,R]`.
struct Labels {
    p: u64,
    vecs: Vec<Vec<u64>>,
    relations: Echelon,
    found: Vec<Vec<u64>>,
}

impl Labels {
    fn add(&self, a: &mut [u64], b: &[u64]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x + y) % self.p;
        }
    }

    fn sub(&self, a: &mut [u64], b: &[u64]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x + self.p - y) % self.p;
        }
    }

    fn neg(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            *x = (self.p - *x) % self.p;
        }
    }
}

struct Slot {
    lhs: Codes,
    rhs: Codes,
    alive: bool,
}

struct Completion<'b> {
    arity: usize,
    slots: Vec<Slot>,
    // flat copy of (lhs, rhs) indexed like `slots`, used by `reduce_with`
    flat: Vec<(Codes, Codes)>,
    rev: Trie,
    fwd: Trie,
    alive: usize,
    budget: &'b Budget,
    report: BudgetReport,
    protected: usize,
    stopped: bool,
    created_since_interreduce: usize,
    labels: Option<Labels>,
    processed: Vec<bool>,
    queue: BinaryHeap<Reverse<(usize, usize)>>,
}

impl<'b> Completion<'b> {
    fn new(arity: usize, budget: &'b Budget, labels: Option<Labels>) -> Self {
        Completion {
            arity,
            slots: Vec::new(),
            flat: Vec::new(),
            rev: Trie::new(),
            fwd: Trie::new(),
            alive: 0,
            budget,
            report: BudgetReport::default(),
            protected: 0,
            stopped: false,
            created_since_interreduce: 0,
            labels,
            processed: Vec::new(),
            queue: BinaryHeap::new(),
        }
    }

    fn run(start: &RewriteSystem, budget: &'b Budget) -> RewriteSystem {
        let mut kb = Completion::new(start.arity, budget, None);
        // Starting rules are kept whatever their length.
        kb.protected = usize::MAX;
        for (l, r) in &start.rules {
            kb.add_equation(l, r, &[]);
        }
        kb.protected = 0;
        kb.main_loop()
    }

    fn run_labelled(p: &Presentation, prime: u64, budget: &'b Budget) -> (RewriteSystem, Vec<Vec<u64>>) {
        let m = p.relators().len();
        let labels = Labels {
            p: prime,
            vecs: Vec::new(),
            relations: Echelon::new(prime, m),
            found: Vec::new(),
        };
        let mut kb = Completion::new(p.arity(), budget, Some(labels));
        kb.protected = usize::MAX;
        for g in 0..p.arity() as u32 {
            kb.add_equation(&[2 * g, 2 * g + 1], &[], &vec![0; m]);
            kb.add_equation(&[2 * g + 1, 2 * g], &[], &vec![0; m]);
        }
        for (i, r) in p.relators().iter().enumerate() {
            let w = to_codes(r);
            let cut = w.len().div_ceil(2);
            let mut e = vec![0; m];
            e[i] = 1;
            // x y = r_i = c_i, so x = y^-1 c_i
            kb.add_equation(&w[..cut], &inverse_codes(&w[cut..]), &e);
        }
        kb.protected = 0;
        let system = kb.main_loop();
        let found = kb.labels.map(|l| l.found).unwrap_or_default();
        (system, found)
    }

    fn main_loop(&mut self) -> RewriteSystem {
        let kb = self;
        kb.interreduce();

        loop {
            // Given-rule loop: shortest unprocessed rule first.
            while let Some(Reverse((_, i))) = kb.queue.pop() {
                if kb.stopped {
                    break;
                }
                kb.process(i, false);
                let threshold = 64.max(kb.alive / 2);
                if kb.created_since_interreduce > threshold {
                    kb.interreduce();
                }
            }
            if kb.stopped {
                break;
            }
            kb.interreduce();
            if kb.stopped {
                break;
            }
            // Final check: every critical pair of the surviving rules.
            let before = kb.slots.len();
            for i in 0..before {
                if kb.stopped {
                    break;
                }
                kb.process(i, true);
            }
            if kb.stopped || kb.slots.len() == before {
                break;
            }
        }
        kb.interreduce();
        let confluent =
            !kb.stopped && kb.report.dropped_long_rules == 0 && kb.verify_interreduced();
        let budget = kb.budget;
        let mut rules: Vec<(Codes, Codes)> = std::mem::take(&mut kb.slots)
            .into_iter()
            .filter(|s| s.alive)
            .map(|s| (s.lhs, s.rhs))
            .collect();
        rules.sort_by(|a, b| shortlex(&a.0, &b.0));
        let mut report = kb.report.clone();
        report.rules = rules.len();
        report.longest_lhs = rules.iter().map(|r| r.0.len()).max().unwrap_or(0);
        RewriteSystem::from_rules(kb.arity, rules, confluent, report, budget.max_steps)
    }

    /// Reduce `w`, adding the labels of the applied rules to `acc`.
    fn reduce(&mut self, w: &[u32], acc: &mut [u64]) -> Option<Codes> {
        let limit = self.budget.max_steps.saturating_sub(self.report.steps);
        let labels = &self.labels;
        let result = reduce_tracking(
            &self.rev,
            &self.flat,
            w,
            &mut self.report.steps,
            limit,
            |r| {
                if let Some(l) = labels {
                    l.add(acc, &l.vecs[r]);
                }
            },
        );
        match result {
            Ok(c) => Some(c),
            Err(_) => {
                self.report.hit_step_limit = true;
                self.stopped = true;
                None
            }
        }
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.labels.as_ref().map_or(0, |l| l.relations.cols())]
    }

    /// Record `a = b * c^v`.
    fn add_equation(&mut self, a: &[u32], b: &[u32], v: &[u64]) {
        let mut alpha = self.zero();
        let mut w = self.zero();
        let Some(a) = self.reduce(a, &mut alpha) else { return };
        let Some(b) = self.reduce(b, &mut w) else { return };
        // a = A c^alpha and b = B c^beta, so A = B c^(beta + v - alpha).
        if let Some(l) = &self.labels {
            l.add(&mut w, v);
            l.sub(&mut w, &alpha);
        }
        let swapped = shortlex(&a, &b) == Ordering::Less;
        let Some((lhs, rhs)) = orient(a, b) else {
            if let Some(l) = &mut self.labels {
                if w.iter().any(|&x| x != 0) && l.relations.insert(&w) {
                    l.found.push(w);
                }
            }
            return;
        };
        if swapped {
            if let Some(l) = &self.labels {
                l.neg(&mut w);
            }
        }
        if lhs.len() > self.budget.max_rule_length && self.protected == 0 {
            self.report.dropped_long_rules += 1;
            return;
        }
        let id = self.slots.len() as u32;
        self.rev.insert(lhs.iter().rev().copied(), id);
        self.fwd.insert(lhs.iter().copied(), id);
        self.flat.push((lhs.clone(), rhs.clone()));
        if let Some(l) = &mut self.labels {
            l.vecs.push(w);
        }
        self.processed.push(false);
        self.queue.push(Reverse((0, id as usize)));
        self.slots.push(Slot {
            lhs,
            rhs,
            alive: true,
        });
        self.alive += 1;
        self.report.rules_created += 1;
        self.created_since_interreduce += 1;
        if self.alive > self.budget.max_rules {
            self.report.hit_rule_limit = true;
            self.stopped = true;
        }
    }

    fn label(&self, i: usize) -> Vec<u64> {
        self.labels.as_ref().map_or_else(Vec::new, |l| l.vecs[i].clone())
    }

    fn kill(&mut self, i: usize) {
        let s = &mut self.slots[i];
        if !s.alive {
            return;
        }
        s.alive = false;
        self.rev.remove(s.lhs.iter().rev().copied(), i as u32);
        self.fwd.remove(s.lhs.iter().copied(), i as u32);
        self.alive -= 1;
    }

    /// Does some other live rule's lhs occur inside rule `i`'s lhs?
    fn lhs_reducible(&self, i: usize) -> bool {
        let l = &self.slots[i].lhs;
        for e in 1..=l.len() {
            let mut node = 0u32;
            for (depth, &x) in l[..e].iter().rev().enumerate() {
                match self.rev.child(node, x) {
                    Some(c) => node = c,
                    None => break,
                }
                let r = self.rev.nodes[node as usize].rule;
                if r != NONE && !(r as usize == i && depth + 1 == l.len()) {
                    return true;
                }
            }
        }
        false
    }

    fn interreduce(&mut self) {
        self.created_since_interreduce = 0;
        loop {
            let mut pending = Vec::new();
            for i in 0..self.slots.len() {
                if self.slots[i].alive && self.lhs_reducible(i) {
                    self.kill(i);
                    pending.push(i);
                }
            }
            for i in 0..self.slots.len() {
                if !self.slots[i].alive {
                    continue;
                }
                let rhs = self.slots[i].rhs.clone();
                let mut acc = self.zero();
                let Some(r) = self.reduce(&rhs, &mut acc) else { return };
                if let Some(l) = &mut self.labels {
                    let mut v = std::mem::take(&mut l.vecs[i]);
                    l.add(&mut v, &acc);
                    l.vecs[i] = v;
                }
                self.flat[i].1 = r.clone();
                self.slots[i].rhs = r;
            }
            if pending.is_empty() {
                return;
            }
            for i in pending {
                let (l, r) = (self.slots[i].lhs.clone(), self.slots[i].rhs.clone());
                let v = self.label(i);
                self.add_equation(&l, &r, &v);
                if self.stopped {
                    return;
                }
            }
        }
    }

    fn verify_interreduced(&self) -> bool {
        (0..self.slots.len()).all(|i| !self.slots[i].alive || !self.lhs_reducible(i))
    }

    /// Resolve every overlap between rule `i` and the live rules already
    /// processed, or every live rule `j <= i` when `all` is set.
    fn process(&mut self, i: usize, all: bool) {
        if !self.slots[i].alive {
            return;
        }
        self.processed[i] = true;
        if self.lhs_reducible(i) {
            self.kill(i);
            let (l, r) = (self.slots[i].lhs.clone(), self.slots[i].rhs.clone());
            let v = self.label(i);
            self.add_equation(&l, &r, &v);
            return;
        }
        let lhs = self.slots[i].lhs.clone();
        let n = lhs.len();
        let mut pairs: Vec<(usize, usize, usize)> = Vec::new(); // (left, right, overlap)
        let mut found = Vec::new();
        // i on the left: a suffix of lhs_i is a prefix of lhs_j
        for s in 1..n {
            let mut node = 0u32;
            let mut ok = true;
            for &x in &lhs[s..] {
                match self.fwd.child(node, x) {
                    Some(c) => node = c,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            found.clear();
            self.fwd.collect_subtree(node, &mut found);
            for &j in &found {
                let j = j as usize;
                if j == i || (if all { j < i } else { self.processed[j] }) {
                    pairs.push((i, j, n - s));
                }
            }
        }
        // i on the right: a prefix of lhs_i is a suffix of lhs_j, j < i
        for k in 1..n {
            let mut node = 0u32;
            let mut ok = true;
            for &x in lhs[..k].iter().rev() {
                match self.rev.child(node, x) {
                    Some(c) => node = c,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            found.clear();
            self.rev.collect_subtree(node, &mut found);
            for &j in &found {
                let j = j as usize;
                if j != i && (if all { j < i } else { self.processed[j] }) {
                    pairs.push((j, i, k));
                }
            }
        }
        pairs.sort_by_key(|&(a, b, k)| (k, a, b));
        for (a, b, k) in pairs {
            if self.stopped {
                return;
            }
            if !self.slots[a].alive || !self.slots[b].alive {
                continue;
            }
            self.report.overlaps += 1;
            let la = &self.slots[a].lhs;
            let lb = &self.slots[b].lhs;
            // la = u v, lb = v w, |v| = k
            let u = &la[..la.len() - k];
            let w = &lb[k..];
            let mut left = self.slots[a].rhs.clone();
            left.extend_from_slice(w);
            let mut right = u.to_vec();
            right.extend_from_slice(&self.slots[b].rhs);
            // u v w = ra w c^va = u rb c^vb
            let mut v = self.label(b);
            if let Some(l) = &self.labels {
                l.sub(&mut v, &l.vecs[a]);
            }
            self.add_equation(&left, &right, &v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn w(p: &Presentation, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    #[test]
    fn free_group_initial_rules() {
        let p = pres("gens: a");
        let rws = initial_rules(&p);
        assert_eq!(rws.len(), 2);
        assert!(rws.is_confluent());
        let kb = rws.knuth_bendix(&Budget::default());
        assert!(kb.is_confluent());
        assert_eq!(kb.len(), 2);
    }

    #[test]
    fn cube_orientation() {
        let p = pres("gens: a\nrel: a^3");
        let rules = initial_rules(&p).rules();
        assert!(rules.contains(&Rule {
            lhs: w(&p, "a^2"),
            rhs: w(&p, "a^-1")
        }));
    }

    #[test]
    fn commutator_completes_to_ab() {
        let p = pres("gens: a b\nrel: [a,b]");
        let kb = complete(&p, &Budget::default());
        assert!(kb.is_confluent());
        assert!(kb.rules().contains(&Rule {
            lhs: w(&p, "b*a"),
            rhs: w(&p, "a*b")
        }));
        assert_eq!(kb.normal_form(&w(&p, "b*a*b*a")).unwrap(), w(&p, "a^2*b^2"));
    }

    #[test]
    fn order_two() {
        let p = pres("gens: a\nrel: a^2");
        let kb = complete(&p, &Budget::default());
        assert!(kb.is_confluent());
        assert_eq!(kb.normal_form(&w(&p, "a^3")).unwrap(), w(&p, "a"));
        assert_eq!(
            kb.enumerate_elements(10).unwrap(),
            vec![Word::identity(), w(&p, "a")]
        );
    }

    #[test]
    fn cyclic_five() {
        let p = pres("gens: a\nrel: a^5");
        let kb = complete(&p, &Budget::default());
        let e = kb.enumerate_elements(100).unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(kb.group_order(100), Some(5));
        assert_eq!(complete(&pres("gens: a\nrel: a^7"), &Budget::default()).group_order(100), Some(7));
    }

    #[test]
    fn s3_and_sl2f3() {
        let s3 = complete(&pres("gens: a b\nrel: a^2\nrel: b^3\nrel: (a*b)^2"), &Budget::default());
        assert!(s3.is_confluent());
        assert_eq!(s3.enumerate_elements(100).unwrap().len(), 6);
        let p = crate::presentation::corpus("SL2_F3").unwrap();
        assert_eq!(complete(&p, &Budget::default()).group_order(1000), Some(24));
    }

    #[test]
    fn free_group_overflows() {
        let kb = complete(&pres("gens: a b"), &Budget::default());
        assert_eq!(kb.enumerate_elements(10), Err(RewriteError::Overflow(10)));
        assert_eq!(kb.group_order(10), None);
    }

    #[test]
    fn infinite_order_unknown() {
        let p = crate::presentation::corpus("SL2_Z").unwrap();
        let kb = complete(&p, &Budget::default());
        assert_eq!(kb.group_order(5000), None);
        assert_eq!(kb.size(), Ok(GroupSize::Infinite));
    }

    #[test]
    fn sizes_by_counting() {
        let f3 = complete(&crate::presentation::corpus("SL2_F3").unwrap(), &Budget::default());
        assert_eq!(f3.size(), Ok(GroupSize::Finite(24)));
        assert_eq!(f3.size(), Ok(GroupSize::Finite(f3.enumerate_elements(100).unwrap().len() as u128)));
        let trivial = complete(&pres("gens:"), &Budget::default());
        assert_eq!(trivial.size(), Ok(GroupSize::Finite(1)));
        let free = complete(&pres("gens: a"), &Budget::default());
        assert_eq!(free.size(), Ok(GroupSize::Infinite));
    }

    #[test]
    fn non_confluent_enumeration_rejected() {
        let p = pres("gens: a b\nrel: [a,b]");
        let rws = initial_rules(&p);
        assert!(!rws.is_confluent());
        assert_eq!(rws.enumerate_elements(10), Err(RewriteError::NotConfluent));
    }

    #[test]
    fn dump_has_header() {
        let p = pres("gens: a\nrel: a^2");
        let kb = complete(&p, &Budget::default());
        let d = kb.dump(p.generator_names());
        assert!(d.starts_with("# confluent: true\n"));
        assert!(d.contains("a^-1 -> a"));
    }

    #[test]
    fn tiny_budget_stops() {
        let p = crate::presentation::corpus("SL2_F3").unwrap();
        let kb = complete(
            &p,
            &Budget {
                max_rules: 3,
                max_rule_length: 64,
                max_steps: 1000,
            },
        );
        assert!(!kb.is_confluent());
        assert!(kb.report().hit_rule_limit);
        for r in p.relators() {
            // a partial system still proves relators trivial or leaves them reduced
            let _ = kb.normal_form(r).unwrap();
        }
    }
}
