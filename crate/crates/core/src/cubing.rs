//! Sets of the form `{g : α(g) = g^n}` and their densities.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::automorphism::{automorphism_failure, is_automorphism, power_map, AutomorphismGroup, GroupMap, MapError, MapFailure};
use crate::group::{FiniteGroup, Subgroup};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("not an automorphism: {0}")]
    NotAutomorphism(MapFailure),
    #[error("precondition violated: {condition} (witness {witness:?})")]
    PreconditionViolated { condition: String, witness: Vec<usize> },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeReport {
    pub power: i64,
    pub order: usize,
    pub members: Vec<usize>,
    pub ratio: Rational,
    pub automorphism: GroupMap,
}

/// Members of `T_{n,α}` without validating `α`.
pub fn cube_members(g: &FiniteGroup, alpha: &GroupMap, power: i64) -> Vec<usize> {
    g.elements().filter(|&x| alpha.apply(x) == g.pow(x, power)).collect()
}

/// `|T_{n,α}|` given a precomputed power table.
pub fn cube_count(alpha: &GroupMap, powers: &[usize]) -> usize {
    powers.iter().enumerate().filter(|&(x, &p)| alpha.apply(x) == p).count()
}

pub fn cube_set(g: &FiniteGroup, alpha: &GroupMap, power: i64) -> Result<CubeReport, CubeError> {
    if let Some(f) = automorphism_failure(g, alpha) {
        return Err(CubeError::NotAutomorphism(f));
    }
    let members = cube_members(g, alpha, power);
    Ok(CubeReport {
        power,
        order: g.order(),
        ratio: Rational::from_counts(members.len(), g.order()),
        members,
        automorphism: alpha.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxMethod {
    /// Every automorphism was scanned.
    Exhaustive { automorphisms: usize },
    /// `x -> x^n` is itself an automorphism, so it is the unique map of ratio 1.
    PowerMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxCube {
    pub ratio: Rational,
    pub witness: GroupMap,
    pub method: MaxMethod,
}

/// Maximum ratio over the given automorphisms; ties go to the least image array.
pub fn max_cube_ratio_over(g: &FiniteGroup, aut: &AutomorphismGroup, power: i64) -> MaxCube {
    let powers: Vec<usize> = g.elements().map(|x| g.pow(x, power)).collect();
    let counts: Vec<usize> = aut.members.par_iter().map(|m| cube_count(m, &powers)).collect();
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    MaxCube {
        ratio: Rational::from_counts(counts[best], g.order()),
        witness: aut.members[best].clone(),
        method: MaxMethod::Exhaustive { automorphisms: aut.order() },
    }
}

/// The power-map shortcut, when it applies.
pub fn power_map_maximum(g: &FiniteGroup, power: i64) -> Option<MaxCube> {
    let p = power_map(g, power);
    is_automorphism(g, &p).then(|| MaxCube { ratio: Rational::new(1, 1), witness: p, method: MaxMethod::PowerMap })
}

/// Maximum over all of `Aut(G)`, enumerating it through `aut`.
pub fn max_cube_ratio_with(
    g: &FiniteGroup,
    power: i64,
    aut: impl FnOnce() -> Result<AutomorphismGroup, MapError>,
) -> Result<MaxCube, MapError> {
    if let Some(m) = power_map_maximum(g, power) {
        return Ok(m);
    }
    Ok(max_cube_ratio_over(g, &aut()?, power))
}

pub fn max_cube_ratio(g: &FiniteGroup, power: i64) -> Result<MaxCube, MapError> {
    max_cube_ratio_with(g, power, || crate::automorphism::enumerate_automorphisms(g, None))
}

/// The trace of `T` on `Hx`, as a subset of `H / C_H(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct CosetTrace {
    pub x: usize,
    pub subgroup: Vec<usize>,
    pub centralizer: Vec<usize>,
    pub quotient_order: usize,
    /// Elements of `H` whose cosets form a basis of the quotient.
    pub basis: Vec<usize>,
    pub basis_orders: Vec<usize>,
    /// Coordinates of the trace cosets, sorted.
    pub trace: Vec<Vec<usize>>,
    /// `|Hx ∩ T|`.
    pub hits: usize,
}

impl CosetTrace {
    pub fn is_cyclic(&self) -> bool {
        self.basis.len() <= 1
    }

    /// Residues modulo the quotient order when the quotient is cyclic.
    pub fn residues(&self) -> Option<Vec<usize>> {
        self.is_cyclic().then(|| self.trace.iter().map(|v| v.first().copied().unwrap_or(0)).collect())
    }

    /// `t(H, x)`.
    pub fn density(&self) -> Rational {
        Rational::from_counts(self.trace.len(), self.quotient_order)
    }
}

fn violated(condition: &str, witness: Vec<usize>) -> CubeError {
    CubeError::PreconditionViolated { condition: condition.into(), witness }
}

/// Computes the trace of `T_{3,α}` on the coset `Hx`.
pub fn coset_trace(g: &FiniteGroup, alpha: &GroupMap, h: &Subgroup, x: usize) -> Result<CosetTrace, CubeError> {
    if let Some(f) = automorphism_failure(g, alpha) {
        return Err(CubeError::NotAutomorphism(f));
    }
    let in_t = |y: usize| alpha.apply(y) == g.pow(y, 3);
    for &a in h.elements() {
        if let Some(&b) = h.elements().iter().find(|&&b| !g.commute(a, b)) {
            return Err(violated("H abelian", vec![a, b]));
        }
        if !in_t(a) {
            return Err(violated("H inside T", vec![a]));
        }
    }
    if !in_t(x) {
        return Err(violated("x in T", vec![x]));
    }
    Ok(coset_trace_unchecked(g, h, x, in_t))
}

/// As [`coset_trace`], for callers that already know the preconditions hold.
pub fn coset_trace_unchecked(
    g: &FiniteGroup,
    h: &Subgroup,
    x: usize,
    in_t: impl Fn(usize) -> bool,
) -> CosetTrace {
    let hel = h.elements();
    let cent: Vec<usize> = hel.iter().copied().filter(|&a| g.commute(a, x)).collect();
    let m = hel.len() / cent.len();
    let cmask = {
        let mut v = vec![false; g.order()];
        for &c in &cent {
            v[c] = true;
        }
        v
    };
    // coset label of each element of H: least element of aC
    let label = |a: usize| cent.iter().map(|&c| g.mul(a, c)).min().expect("nonempty");
    let (basis, basis_orders) = abelian_basis(g, hel, &cmask, m);
    // coordinates of every coset
    let mut coords: Vec<(usize, Vec<usize>)> = Vec::with_capacity(m);
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((e, v)) = stack.pop() {
        if v.len() == basis.len() {
            coords.push((label(e), v));
            continue;
        }
        let i = v.len();
        let mut y = e;
        for c in 0..basis_orders[i] {
            let mut w = v.clone();
            w.push(c);
            stack.push((y, w));
            y = g.mul(y, basis[i]);
        }
    }
    coords.sort();
    let mut trace = Vec::new();
    let mut hits = 0;
    for (lab, v) in &coords {
        let k = cent.iter().filter(|&&c| in_t(g.mul(g.mul(*lab, c), x))).count();
        hits += k;
        if k > 0 {
            trace.push(v.clone());
        }
    }
    trace.sort();
    CosetTrace {
        x,
        subgroup: hel.to_vec(),
        centralizer: cent,
        quotient_order: m,
        basis,
        basis_orders,
        trace,
        hits,
    }
}

/// Basis of the abelian group `H/C`, given `C` as a mask of elements.
fn abelian_basis(g: &FiniteGroup, hel: &[usize], cmask: &[bool], m: usize) -> (Vec<usize>, Vec<usize>) {
    let order_mod = |a: usize| {
        let mut y = a;
        let mut k = 1;
        while !cmask[y] {
            y = g.mul(y, a);
            k += 1;
        }
        k
    };
    // span of a basis prefix as a set of elements of H
    let span = |basis: &[usize]| -> Vec<bool> {
        let mut mask = cmask.to_vec();
        let mut list: Vec<usize> = (0..g.order()).filter(|&y| cmask[y]).collect();
        let mut i = 0;
        while i < list.len() {
            for &b in basis {
                let y = g.mul(list[i], b);
                if !mask[y] {
                    mask[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        mask
    };
    let valid = |basis: &[usize], orders: &[usize]| orders.iter().product::<usize>() == m && span(basis).iter().filter(|&&b| b).count() == m * cmask.iter().filter(|&&b| b).count();
    let mut cands: Vec<(usize, usize)> = hel.iter().map(|&a| (order_mod(a), a)).filter(|&(o, _)| o > 1).collect();
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    // greedy: largest order whose cyclic group meets the span trivially
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    let mut size = 1;
    for &(o, a) in &cands {
        if size == m {
            break;
        }
        let s = span(&basis);
        let mut y = a;
        let mut meets = false;
        for _ in 1..o {
            if s[y] {
                meets = true;
                break;
            }
            y = g.mul(y, a);
        }
        if !meets {
            basis.push(a);
            orders.push(o);
            size *= o;
        }
    }
    if valid(&basis, &orders) {
        return (basis, orders);
    }
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    assert!(backtrack(g, &cands, &span, m, &mut basis, &mut orders, 1), "finite abelian groups have bases");
    (basis, orders)
}

fn backtrack(
    g: &FiniteGroup,
    cands: &[(usize, usize)],
    span: &dyn Fn(&[usize]) -> Vec<bool>,
    m: usize,
    basis: &mut Vec<usize>,
    orders: &mut Vec<usize>,
    size: usize,
) -> bool {
    if size == m {
        return true;
    }
    let s = span(basis);
    for &(o, a) in cands {
        if !m.is_multiple_of(size * o) || orders.last().is_some_and(|&p| o > p) {
            continue;
        }
        let mut y = a;
        let mut meets = false;
        for _ in 1..o {
            if s[y] {
                meets = true;
                break;
            }
            y = g.mul(y, a);
        }
        if meets {
            continue;
        }
        basis.push(a);
        orders.push(o);
        if backtrack(g, cands, span, m, basis, orders, size * o) {
            return true;
        }
        basis.pop();
        orders.pop();
    }
    false
}
