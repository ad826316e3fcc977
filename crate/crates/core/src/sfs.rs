//! Subsets of `Z_n` free of nontrivial solutions to translation-invariant equations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

/// Default node budget for a single search.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Largest modulus accepted.
pub const MAX_MODULUS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SfsError {
    #[error("invalid equation {0:?}: coefficients must be nonzero in number and sum to 0")]
    BadEquation(Vec<i64>),
    #[error("modulus {0} is outside 1..={max}", max = MAX_MODULUS)]
    BadModulus(usize),
    #[error("no equations given")]
    NoEquations,
    #[error("node budget exhausted; best size found is {lower_bound}")]
    BudgetExceeded { lower_bound: usize, witness: Vec<usize> },
}

/// `Σ c_i x_i = 0`, with the coefficients summing to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LinearEquation {
    coefficients: Vec<i64>,
}

impl LinearEquation {
    pub fn new(coefficients: Vec<i64>) -> Result<Self, SfsError> {
        if coefficients.len() < 2 || coefficients.iter().sum::<i64>() != 0 {
            return Err(SfsError::BadEquation(coefficients));
        }
        Ok(LinearEquation { coefficients })
    }

    /// `a + b = 2c`.
    pub fn ap3() -> Self {
        LinearEquation { coefficients: vec![1, 1, -2] }
    }

    /// `a + 2b = 3c`.
    pub fn weighted() -> Self {
        LinearEquation { coefficients: vec![1, 2, -3] }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    fn holds(&self, xs: &[usize], n: usize) -> bool {
        let n = n as i64;
        self.coefficients.iter().zip(xs).map(|(&c, &x)| c * x as i64).sum::<i64>().rem_euclid(n) == 0
    }
}

impl TryFrom<Vec<i64>> for LinearEquation {
    type Error = SfsError;
    fn try_from(v: Vec<i64>) -> Result<Self, SfsError> {
        LinearEquation::new(v)
    }
}

impl From<LinearEquation> for Vec<i64> {
    fn from(e: LinearEquation) -> Self {
        e.coefficients
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for LinearEquation {
    type Err = SfsError;
    fn from_str(s: &str) -> Result<Self, SfsError> {
        let coeffs: Result<Vec<i64>, _> = s.split(',').map(|p| p.trim().parse::<i64>()).collect();
        LinearEquation::new(coeffs.map_err(|_| SfsError::BadEquation(Vec::new()))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SfsInstance {
    pub modulus: usize,
    pub equations: Vec<LinearEquation>,
}

impl SfsInstance {
    pub fn new(modulus: usize, equations: Vec<LinearEquation>) -> Result<Self, SfsError> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(SfsError::BadModulus(modulus));
        }
        if equations.is_empty() {
            return Err(SfsError::NoEquations);
        }
        Ok(SfsInstance { modulus, equations })
    }

    /// Both default equations.
    pub fn standard(modulus: usize) -> Result<Self, SfsError> {
        Self::new(modulus, vec![LinearEquation::ap3(), LinearEquation::weighted()])
    }
}

/// First nontrivial solution with all values in `set`, scanning tuples lexicographically.
pub fn find_nontrivial_solution(set: &[usize], n: usize, eq: &LinearEquation) -> Option<Vec<usize>> {
    let k = eq.arity();
    if set.is_empty() {
        return None;
    }
    let mut idx = vec![0usize; k];
    loop {
        let xs: Vec<usize> = idx.iter().map(|&i| set[i] % n).collect();
        if xs.iter().any(|&x| x != xs[0]) && eq.holds(&xs, n) {
            return Some(idx.iter().map(|&i| set[i]).collect());
        }
        let mut p = k;
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < set.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

pub fn is_solution_free(set: &[usize], n: usize, eqs: &[LinearEquation]) -> bool {
    eqs.iter().all(|e| find_nontrivial_solution(set, n, e).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn and_not(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= !b;
        }
    }
    fn and(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= b;
        }
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                (x != 0).then(|| {
                    let t = x.trailing_zeros() as usize;
                    x &= x - 1;
                    w * 64 + t
                })
            })
        })
    }
    /// Count of set bits at positions `>= i`.
    fn count_from(&self, i: usize) -> usize {
        let w = i / 64;
        let head = (self.0[w] >> (i % 64)).count_ones() as usize;
        head + self.0[w + 1..].iter().map(|x| x.count_ones() as usize).sum::<usize>()
    }
}

/// Conflict tables in rank space.
struct Conflicts {
    n: usize,
    /// `rank -> element`.
    elem: Vec<usize>,
    eqs: Vec<LinearEquation>,
    /// Present when every equation has at most three variables.
    tables: Option<(Vec<Bits>, Vec<Bits>)>,
    after: Vec<Bits>,
}

impl Conflicts {
    fn new(inst: &SfsInstance, order: &[usize]) -> Self {
        let n = inst.modulus;
        let mut rank = vec![0; n];
        for (r, &e) in order.iter().enumerate() {
            rank[e] = r;
        }
        let after = (0..n)
            .map(|r| {
                let mut b = Bits::empty(n);
                (r + 1..n).for_each(|s| b.set(s));
                b
            })
            .collect();
        let tables = inst.equations.iter().all(|e| e.arity() <= 3).then(|| {
            let mut pair = vec![Bits::empty(n); n];
            let mut triple = vec![Bits::empty(n); n * n];
            for eq in &inst.equations {
                let k = eq.arity();
                let mut xs = vec![0usize; k];
                loop {
                    if xs.iter().any(|&x| x != xs[0]) && eq.holds(&xs, n) {
                        let mut v: Vec<usize> = xs.iter().map(|&x| rank[x]).collect();
                        v.sort_unstable();
                        v.dedup();
                        match v[..] {
                            [a, b] => {
                                pair[a].set(b);
                                pair[b].set(a);
                            }
                            [a, b, c] => {
                                for (p, q, r) in [(a, b, c), (a, c, b), (b, c, a)] {
                                    triple[p * n + q].set(r);
                                    triple[q * n + p].set(r);
                                }
                            }
                            _ => unreachable!("arity at most 3"),
                        }
                    }
                    let mut p = k;
                    let done = loop {
                        if p == 0 {
                            break true;
                        }
                        p -= 1;
                        xs[p] += 1;
                        if xs[p] < n {
                            break false;
                        }
                        xs[p] = 0;
                    };
                    if done {
                        break;
                    }
                }
            }
            (pair, triple)
        });
        Conflicts { n, elem: order.to_vec(), eqs: inst.equations.clone(), tables, after }
    }

    /// Candidates remaining after adding rank `c` to the ranks in `a`.
    fn narrow(&self, a: &[usize], cand: &Bits, c: usize) -> Bits {
        let mut next = cand.clone();
        next.and(&self.after[c]);
        match &self.tables {
            Some((pair, triple)) => {
                next.and_not(&pair[c]);
                for &x in a {
                    next.and_not(&triple[x * self.n + c]);
                }
            }
            None => {
                let mut vals: Vec<usize> = a.iter().chain([&c]).map(|&r| self.elem[r]).collect();
                for d in next.clone().ones() {
                    vals.push(self.elem[d]);
                    if !is_solution_free(&vals, self.n, &self.eqs) {
                        next.clear(d);
                    }
                    vals.pop();
                }
            }
        }
        next
    }

    fn root(&self, r0: usize) -> Bits {
        // no rank restriction at the root: every other element may join
        let mut c = Bits::empty(self.n);
        (0..self.n).filter(|&r| r != r0).for_each(|r| c.set(r));
        match &self.tables {
            Some((pair, _)) => c.and_not(&pair[r0]),
            None => {
                for d in c.clone().ones() {
                    if !is_solution_free(&[self.elem[r0], self.elem[d]], self.n, &self.eqs) {
                        c.clear(d);
                    }
                }
            }
        }
        c
    }

    fn to_elements(&self, ranks: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = ranks.iter().map(|&r| self.elem[r]).collect();
        v.sort_unstable();
        v
    }
}

struct Branch<'a> {
    cf: &'a Conflicts,
    best: usize,
    best_set: Vec<usize>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Branch<'_> {
    fn maximize(&mut self, a: &mut Vec<usize>, cand: &Bits) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if a.len() > self.best {
            self.best = a.len();
            self.best_set = a.clone();
        }
        if a.len() + cand.count() <= self.best {
            return;
        }
        for c in cand.ones() {
            if self.aborted || a.len() + cand.count_from(c) <= self.best {
                return;
            }
            let next = self.cf.narrow(a, cand, c);
            a.push(c);
            self.maximize(a, &next);
            a.pop();
        }
    }

    fn collect(&mut self, a: &mut Vec<usize>, cand: &Bits, size: usize, out: &mut Vec<Vec<usize>>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if a.len() == size {
            out.push(self.cf.to_elements(a));
            return;
        }
        for c in cand.ones() {
            if self.aborted || a.len() + cand.count_from(c) < size {
                return;
            }
            let next = self.cf.narrow(a, cand, c);
            a.push(c);
            self.collect(a, &next, size, out);
            a.pop();
        }
    }
}

/// Least image of a 0-containing set under multiplication by units.
pub fn canonical_form(set: &[usize], n: usize) -> Vec<usize> {
    (1..=n.max(1))
        .filter(|&u| num_integer::gcd(u, n) == 1)
        .map(|u| {
            let mut v: Vec<usize> = set.iter().map(|&x| x * u % n).collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap_or_default()
}

#[derive(Clone, Debug, Serialize)]
pub struct SfsResult {
    pub modulus: usize,
    pub equations: Vec<LinearEquation>,
    pub t: usize,
    pub tau: Rational,
    pub witness: Vec<usize>,
    /// Canonical representatives of all maximum sets containing 0.
    pub extremal_sets: Vec<Vec<usize>>,
    pub nodes: u64,
}

fn ascending(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Greedy lower bound: add elements in rank order whenever allowed.
fn greedy(cf: &Conflicts, r0: usize) -> Vec<usize> {
    let mut a = vec![r0];
    let mut cand = cf.root(r0);
    loop {
        let Some(c) = cand.ones().next() else { break };
        cand = cf.narrow(&a, &cand, c);
        a.push(c);
    }
    a
}

/// Maximum size of a solution-free set, searching ranks in the given element order.
pub fn max_free_subset_ordered(inst: &SfsInstance, budget: u64, order: &[usize]) -> Result<(usize, Vec<usize>, u64), SfsError> {
    let cf = Conflicts::new(inst, order);
    let r0 = order.iter().position(|&e| e == 0).expect("order is a permutation");
    let seed = greedy(&cf, r0);
    let root = cf.root(r0);
    let children: Vec<usize> = root.ones().collect();
    let results: Vec<(usize, Vec<usize>, u64, bool)> = children
        .par_iter()
        .map(|&c| {
            let mut b = Branch { cf: &cf, best: seed.len(), best_set: Vec::new(), nodes: 0, budget, aborted: false };
            let mut a = vec![r0, c];
            let cand = cf.narrow(&[r0], &root, c);
            b.maximize(&mut a, &cand);
            (b.best, b.best_set, b.nodes, b.aborted)
        })
        .collect();
    let mut best = seed.len();
    let mut best_set = seed;
    let mut nodes = 1;
    let mut aborted = false;
    for (k, set, m, ab) in results {
        nodes += m;
        aborted |= ab;
        if k > best {
            best = k;
            best_set = set;
        }
    }
    let witness = cf.to_elements(&best_set);
    if aborted {
        return Err(SfsError::BudgetExceeded { lower_bound: best, witness });
    }
    Ok((best, witness, nodes))
}

/// All solution-free sets of the given size containing 0, sorted.
pub fn enumerate_raw(inst: &SfsInstance, size: usize, budget: u64) -> Result<Vec<Vec<usize>>, SfsError> {
    let n = inst.modulus;
    if size == 0 {
        return Ok(vec![Vec::new()]);
    }
    let cf = Conflicts::new(inst, &ascending(n));
    let root = cf.root(0);
    if size == 1 {
        return Ok(vec![vec![0]]);
    }
    let children: Vec<usize> = root.ones().collect();
    let results: Vec<(Vec<Vec<usize>>, bool)> = children
        .par_iter()
        .map(|&c| {
            let mut b = Branch { cf: &cf, best: 0, best_set: Vec::new(), nodes: 0, budget, aborted: false };
            let mut out = Vec::new();
            let cand = cf.narrow(&[0], &root, c);
            b.collect(&mut vec![0, c], &cand, size, &mut out);
            (out, b.aborted)
        })
        .collect();
    let mut all = Vec::new();
    for (sets, aborted) in results {
        if aborted {
            return Err(SfsError::BudgetExceeded { lower_bound: 0, witness: Vec::new() });
        }
        all.extend(sets);
    }
    all.sort();
    Ok(all)
}

#[derive(Clone, Debug, Serialize)]
pub struct Extremal {
    pub raw: Vec<Vec<usize>>,
    pub canonical: Vec<Vec<usize>>,
}

pub fn enumerate_extremal(inst: &SfsInstance, size: usize, budget: u64) -> Result<Extremal, SfsError> {
    let raw = enumerate_raw(inst, size, budget)?;
    let mut canonical: Vec<Vec<usize>> = raw.iter().map(|s| canonical_form(s, inst.modulus)).collect();
    canonical.sort();
    canonical.dedup();
    Ok(Extremal { raw, canonical })
}

pub fn max_free_subset(inst: &SfsInstance, budget: u64) -> Result<SfsResult, SfsError> {
    let (t, witness, nodes) = max_free_subset_ordered(inst, budget, &ascending(inst.modulus))?;
    let extremal = enumerate_extremal(inst, t, budget)?;
    Ok(SfsResult {
        modulus: inst.modulus,
        equations: inst.equations.clone(),
        t,
        tau: Rational::from_counts(t, inst.modulus),
        witness,
        extremal_sets: extremal.canonical,
        nodes,
    })
}

/// `T(n)` for the two default equations.
pub fn t_of(n: usize, budget: u64) -> Result<usize, SfsError> {
    Ok(max_free_subset_ordered(&SfsInstance::standard(n)?, budget, &ascending(n))?.0)
}

pub fn tau(n: usize) -> Result<Rational, SfsError> {
    Ok(Rational::from_counts(t_of(n, DEFAULT_BUDGET)?, n))
}

#[derive(Clone, Debug, Serialize)]
pub struct TauRow {
    pub n: usize,
    pub t: usize,
    pub tau: Rational,
    pub pass: bool,
}

/// `τ_n` for `lo..=hi` checked against a strict upper bound.
pub fn verify_tau_bound(lo: usize, hi: usize, bound: Rational, budget: u64) -> Result<Vec<TauRow>, SfsError> {
    (lo..=hi)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let t = t_of(n, budget)?;
            let tau = Rational::from_counts(t, n);
            Ok(TauRow { n, t, tau, pass: tau < bound })
        })
        .collect()
}

/// `(n, T(n))` as tabulated in the literature for the two default equations.
pub const REFERENCE_TABLE: [(usize, usize); 11] =
    [(2, 1), (4, 2), (5, 2), (7, 2), (8, 2), (10, 2), (11, 2), (13, 3), (14, 3), (16, 4), (17, 4)];

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub t: usize,
    pub tau: Rational,
    pub expected_t: usize,
    pub expected_tau: Rational,
    pub matches: bool,
}

pub fn reproduce_table(budget: u64) -> Result<Vec<TableRow>, SfsError> {
    REFERENCE_TABLE
        .par_iter()
        .map(|&(n, expected_t)| {
            let t = t_of(n, budget)?;
            Ok(TableRow {
                n,
                t,
                tau: Rational::from_counts(t, n),
                expected_t,
                expected_tau: Rational::from_counts(expected_t, n),
                matches: t == expected_t,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solution_examples() {
        let ap = LinearEquation::ap3();
        let w = LinearEquation::weighted();
        assert_eq!(find_nontrivial_solution(&[0, 1], 2, &ap), Some(vec![0, 0, 1]));
        assert_eq!(find_nontrivial_solution(&[0, 1], 3, &w), Some(vec![0, 0, 1]));
        assert_eq!(find_nontrivial_solution(&[0], 7, &ap), None);
    }

    #[test]
    fn equation_parsing() {
        assert_eq!("1,1,-2".parse::<LinearEquation>().unwrap(), LinearEquation::ap3());
        assert!("1,1,1".parse::<LinearEquation>().is_err());
        assert!("x".parse::<LinearEquation>().is_err());
        assert_eq!(LinearEquation::weighted().to_string(), "1,2,-3");
    }

    #[test]
    fn small_values() {
        assert_eq!(t_of(1, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(t_of(3, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(t_of(8, DEFAULT_BUDGET).unwrap(), 2);
        assert_eq!(t_of(13, DEFAULT_BUDGET).unwrap(), 3);
        assert_eq!(t_of(17, DEFAULT_BUDGET).unwrap(), 4);
        assert_eq!(tau(14).unwrap(), Rational::new(3, 14));
        assert_eq!(tau(5).unwrap(), Rational::new(2, 5));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_form(&[0, 1, 4, 13], 16), canonical_form(&[0, 1, 4, 5], 16));
        let e = enumerate_extremal(&SfsInstance::standard(2).unwrap(), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.canonical, vec![vec![0]]);
    }

    #[test]
    fn budget_is_reported() {
        let inst = SfsInstance::standard(40).unwrap();
        assert!(matches!(max_free_subset(&inst, 3), Err(SfsError::BudgetExceeded { .. })));
    }

    #[test]
    fn wide_equation_uses_generic_path() {
        // a + b + c = 3d has the same forbidden 2-sets as a+b=2c plus more
        let inst = SfsInstance::new(11, vec![LinearEquation::new(vec![1, 1, 1, -3]).unwrap()]).unwrap();
        let r = max_free_subset(&inst, DEFAULT_BUDGET).unwrap();
        assert!(is_solution_free(&r.witness, 11, &inst.equations));
        for s in &r.extremal_sets {
            assert!(is_solution_free(s, 11, &inst.equations));
        }
    }
}
