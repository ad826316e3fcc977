//! Exhaustive checks of the structural facts about `T = T_{3,α}` on a single `(G, α)`.
//!
//! Every counterexample carries enough data to be re-checked from the raw
//! Cayley table by [`Counterexample::revalidate`].

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::automorphism::GroupMap;
use crate::cubing::coset_trace_unchecked;
use crate::group::{FiniteGroup, Subgroup};
use crate::sfs::{find_nontrivial_solution, LinearEquation};
use crate::structure::Quotient;

/// Node budget for the largest-subgroup-inside-`T` search.
pub const SUBGROUP_SEARCH_BUDGET: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    /// `r₃(G,α) ≤ r₃(G/N,α^N)` for α-invariant normal `N`.
    QuotientInequality,
    /// `C(x) = C(x³)` for `x ∈ T`.
    CentralizerCube,
    /// `3 ∤ (H : C_H(x))` for `H ⊆ T`, `x ∈ T`.
    CentralizerIndex,
    /// `hx ∈ T ⟺ [h,x] = 1` when `H/C_H(x²)` is elementary abelian of exponent 2.
    EltwoAb,
    Abba,
    Ap,
    Ap2,
    A2b,
    A3b,
    /// Traces of `T` on cosets avoid both three-variable equations.
    TraceAvoidance,
    /// `|Hx ∩ T| ≤ |H|/2` for a largest `H ⊆ T` and `x ∈ T \ H`.
    CosetBound,
    /// Every right coset of a largest `H ⊆ T` meets `T`.
    CosetsMeetT,
}

impl LemmaId {
    pub const ALL: [LemmaId; 12] = [
        LemmaId::QuotientInequality,
        LemmaId::CentralizerCube,
        LemmaId::CentralizerIndex,
        LemmaId::EltwoAb,
        LemmaId::Abba,
        LemmaId::Ap,
        LemmaId::Ap2,
        LemmaId::A2b,
        LemmaId::A3b,
        LemmaId::TraceAvoidance,
        LemmaId::CosetBound,
        LemmaId::CosetsMeetT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::QuotientInequality => "quotient_inequality",
            LemmaId::CentralizerCube => "centralizer_cube",
            LemmaId::CentralizerIndex => "centralizer_index",
            LemmaId::EltwoAb => "eltwoab",
            LemmaId::Abba => "abba",
            LemmaId::Ap => "ap",
            LemmaId::Ap2 => "ap2",
            LemmaId::A2b => "a2b",
            LemmaId::A3b => "a3b",
            LemmaId::TraceAvoidance => "trace_avoidance",
            LemmaId::CosetBound => "coset_bound",
            LemmaId::CosetsMeetT => "cosets_meet_t",
        }
    }

    fn index(self) -> usize {
        LemmaId::ALL.iter().position(|&l| l == self).expect("listed")
    }

    /// The four-element patterns `{a, b, ab, w}` forcing `[a,b] = 1`, with `w = a^k b`.
    pub fn pattern_power(self) -> Option<i64> {
        match self {
            LemmaId::Ap => Some(-1),
            LemmaId::Ap2 => Some(-2),
            LemmaId::A2b => Some(2),
            LemmaId::A3b => Some(3),
            _ => None,
        }
    }
}

/// A violation of one of the checked statements.
///
/// `elements` holds the lemma-specific witnesses: `[x]`, `[a, b]`,
/// `[h, x]`, or `[h, x, s₁, …]` with trace residues for trace failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub lemma: LemmaId,
    pub alpha: Vec<usize>,
    pub subgroup: Vec<usize>,
    pub elements: Vec<usize>,
    pub detail: String,
}

/// Naive arithmetic straight from table rows.
struct Raw<'a> {
    t: &'a [Vec<usize>],
}

impl Raw<'_> {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.t[a][b]
    }
    fn inv(&self, a: usize) -> usize {
        self.t[a].iter().position(|&v| v == 0).expect("Latin row")
    }
    fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }
    fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

impl Counterexample {
    /// Recomputes the violation from the raw table, independently of the checker.
    pub fn revalidate(&self, table: &[Vec<usize>]) -> bool {
        let n = table.len();
        if self.alpha.len() != n || self.elements.iter().chain(&self.subgroup).any(|&e| e >= n) {
            return false;
        }
        let r = Raw { t: table };
        let al = &self.alpha;
        let in_t = |x: usize| al[x] == r.pow(x, 3);
        let e = &self.elements;
        let hs = &self.subgroup;
        let closed = !hs.is_empty() && hs.iter().all(|&a| hs.iter().all(|&b| hs.contains(&r.mul(a, b))));
        let count_t = (0..n).filter(|&x| in_t(x)).count();
        match self.lemma {
            LemmaId::QuotientInequality => {
                let normal = closed && (0..n).all(|g| hs.iter().all(|&k| hs.contains(&r.mul(r.mul(r.inv(g), k), g))));
                if !normal || !hs.iter().all(|&k| hs.contains(&al[k])) {
                    return false;
                }
                let coset = |g: usize| hs.iter().map(|&k| r.mul(k, g)).min().expect("nonempty");
                let reps: BTreeSet<usize> = (0..n).map(coset).collect();
                let tq = reps.iter().filter(|&&c| coset(al[c]) == coset(r.pow(c, 3))).count();
                count_t * reps.len() > tq * n
            }
            LemmaId::CentralizerCube => {
                let [x] = e[..] else { return false };
                let x3 = r.pow(x, 3);
                in_t(x) && (0..n).any(|y| r.commute(y, x) != r.commute(y, x3))
            }
            LemmaId::CentralizerIndex => {
                let [x] = e[..] else { return false };
                let c = hs.iter().filter(|&&h| r.commute(h, x)).count();
                closed && hs.iter().all(|&h| in_t(h)) && in_t(x) && (hs.len() / c).is_multiple_of(3)
            }
            LemmaId::EltwoAb => {
                let [h, x] = e[..] else { return false };
                let x2 = r.pow(x, 2);
                closed
                    && hs.contains(&h)
                    && hs.iter().all(|&k| in_t(k) && r.commute(r.pow(k, 2), x2))
                    && in_t(x)
                    && in_t(r.mul(h, x)) != r.commute(h, x)
            }
            LemmaId::Abba | LemmaId::Ap | LemmaId::Ap2 | LemmaId::A2b | LemmaId::A3b => {
                let [a, b] = e[..] else { return false };
                let w = match self.lemma.pattern_power() {
                    Some(k) => r.mul(r.pow(a, k), b),
                    None => r.mul(b, a),
                };
                [a, b, r.mul(a, b), w].iter().all(|&y| in_t(y)) && !r.commute(a, b)
            }
            LemmaId::TraceAvoidance => {
                let Ok(eq) = self.detail.parse::<LinearEquation>() else { return false };
                if e.len() != 2 + eq.arity() {
                    return false;
                }
                let (h, x) = (e[0], e[1]);
                let mut powers = vec![0];
                while r.mul(*powers.last().expect("nonempty"), h) != 0 {
                    powers.push(r.mul(*powers.last().expect("nonempty"), h));
                }
                let c = powers.iter().filter(|&&p| r.commute(p, x)).count();
                let m = powers.len() / c;
                let trace: BTreeSet<usize> =
                    (0..powers.len()).filter(|&i| in_t(r.mul(powers[i], x))).map(|i| i % m).collect();
                let sol = &e[2..];
                let total: i64 = eq.coefficients().iter().zip(sol).map(|(&a, &s)| a * s as i64).sum();
                // The checker's coordinates may use another generator of the quotient.
                let some_unit = (1..=m).filter(|&u| num_integer::gcd(u, m) == 1).any(|u| sol.iter().all(|s| trace.contains(&(u * s % m))));
                powers.iter().all(|&p| in_t(p))
                    && in_t(x)
                    && some_unit
                    && total.rem_euclid(m as i64) == 0
                    && sol.iter().any(|&s| s != sol[0])
            }
            LemmaId::CosetBound => {
                let [x] = e[..] else { return false };
                let hits = hs.iter().filter(|&&h| in_t(r.mul(h, x))).count();
                2 * count_t > n
                    && closed
                    && hs.iter().all(|&h| in_t(h))
                    && in_t(x)
                    && !hs.contains(&x)
                    && 2 * hits > hs.len()
            }
            LemmaId::CosetsMeetT => {
                let [y] = e[..] else { return false };
                2 * count_t > n && closed && hs.iter().all(|&h| in_t(h)) && hs.iter().all(|&h| !in_t(r.mul(h, y)))
            }
        }
    }
}

/// Per-group data shared by every automorphism.
pub struct GroupContext {
    pub group: FiniteGroup,
    pub label: String,
    cubes: Vec<usize>,
    inverses: Vec<usize>,
    quotients: Vec<(Subgroup, Quotient, Vec<usize>)>,
}

impl GroupContext {
    pub fn new(group: FiniteGroup) -> Self {
        let label = super::catalog::label(&group);
        let cubes = group.elements().map(|x| group.pow(x, 3)).collect();
        let inverses = group.elements().map(|x| group.inverse(x)).collect();
        let quotients = group
            .normal_subgroups()
            .into_iter()
            .map(|n| {
                let q = group.quotient(&n).expect("normal");
                let qc = q.group.elements().map(|c| q.group.pow(c, 3)).collect();
                (n, q, qc)
            })
            .collect();
        GroupContext { group, label, cubes, inverses, quotients }
    }

    pub fn cube_mask(&self, alpha: &GroupMap) -> Vec<bool> {
        self.group.elements().map(|x| alpha.apply(x) == self.cubes[x]).collect()
    }
}

/// Status of the largest-subgroup search behind the coset checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetStatus {
    /// `r₃ ≤ 1/2`: the hypothesis does not hold.
    Skipped,
    Exact,
    /// The search budget ran out; the subgroup may not be of maximum order.
    BestEffort,
}

/// Results of every check on one `(G, α)`.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    /// Number of hypothesis-satisfying configurations examined, indexed like [`LemmaId::ALL`].
    pub checked: [u64; 12],
    pub failures: Vec<Counterexample>,
    pub coset_status: CosetStatus,
    pub t_size: usize,
}

struct Checker<'a> {
    ctx: &'a GroupContext,
    alpha: &'a GroupMap,
    mask: Vec<bool>,
    t: Vec<usize>,
    out: InstanceOutcome,
}

impl Checker<'_> {
    fn g(&self) -> &FiniteGroup {
        &self.ctx.group
    }

    fn fail(&mut self, lemma: LemmaId, subgroup: &[usize], elements: Vec<usize>, detail: String) {
        self.out.failures.push(Counterexample {
            lemma,
            alpha: self.alpha.images().to_vec(),
            subgroup: subgroup.to_vec(),
            elements,
            detail,
        });
    }

    fn tick(&mut self, lemma: LemmaId) {
        self.out.checked[lemma.index()] += 1;
    }

    fn quotient_inequality(&mut self) {
        let ctx = self.ctx;
        let n = self.g().order();
        for (sub, q, qcubes) in &ctx.quotients {
            if !self.alpha.preserves(sub) {
                continue;
            }
            self.tick(LemmaId::QuotientInequality);
            let tq = q
                .representatives
                .iter()
                .enumerate()
                .filter(|&(c, &r)| q.projection[self.alpha.apply(r)] == qcubes[c])
                .count();
            if self.t.len() * q.group.order() > tq * n {
                let detail = format!("|T| = {}, |T_Q| = {tq}, |G/N| = {}", self.t.len(), q.group.order());
                self.fail(LemmaId::QuotientInequality, sub.elements(), vec![], detail);
            }
        }
    }

    fn centralizer_cube(&mut self) {
        let t = self.t.clone();
        for x in t {
            self.tick(LemmaId::CentralizerCube);
            let x3 = self.ctx.cubes[x];
            if self.g().elements().any(|y| self.g().commute(y, x) != self.g().commute(y, x3)) {
                self.fail(LemmaId::CentralizerCube, &[], vec![x], String::new());
            }
        }
    }

    fn patterns(&mut self) {
        let g = &self.ctx.group;
        let inv = &self.ctx.inverses;
        let t = self.t.clone();
        for &a in &t {
            let a2 = g.mul(a, a);
            let powers = [(LemmaId::Ap, inv[a]), (LemmaId::Ap2, inv[a2]), (LemmaId::A2b, a2), (LemmaId::A3b, self.ctx.cubes[a])];
            for &b in &t {
                if !self.mask[g.mul(a, b)] {
                    continue;
                }
                let commute = g.commute(a, b);
                let mut hits = [(LemmaId::Abba, g.mul(b, a)); 5];
                for (i, &(l, p)) in powers.iter().enumerate() {
                    hits[i + 1] = (l, g.mul(p, b));
                }
                for (lemma, w) in hits {
                    if self.mask[w] {
                        self.tick(lemma);
                        if !commute {
                            self.fail(lemma, &[], vec![a, b], String::new());
                        }
                    }
                }
            }
        }
    }

    /// Cyclic subgroups contained in `T`, each listed once.
    fn cyclic_subgroups(&self) -> Vec<(usize, Subgroup)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &h in &self.t {
            let sub = self.g().subgroup_generated(&[h]);
            if sub.elements().iter().all(|&e| self.mask[e]) && seen.insert(sub.clone()) {
                out.push((h, sub));
            }
        }
        out
    }

    fn subgroup_family(&mut self, family: &[Subgroup]) {
        let g = &self.ctx.group;
        let t = self.t.clone();
        for h in family {
            for &x in &t {
                let cent = h.elements().iter().filter(|&&k| g.commute(k, x)).count();
                self.tick(LemmaId::CentralizerIndex);
                if (h.order() / cent) % 3 == 0 {
                    self.fail(LemmaId::CentralizerIndex, h.elements(), vec![x], String::new());
                }
                let x2 = g.mul(x, x);
                if !h.elements().iter().all(|&k| g.commute(g.mul(k, k), x2)) {
                    continue;
                }
                self.tick(LemmaId::EltwoAb);
                for &k in h.elements() {
                    if self.mask[g.mul(k, x)] != g.commute(k, x) {
                        self.fail(LemmaId::EltwoAb, h.elements(), vec![k, x], String::new());
                    }
                }
            }
        }
    }

    fn trace_avoidance(&mut self, cyclic: &[(usize, Subgroup)]) {
        let eqs = [LinearEquation::ap3(), LinearEquation::weighted()];
        let t = self.t.clone();
        for (h, sub) in cyclic {
            for &x in &t {
                let trace = coset_trace_unchecked(self.g(), sub, x, |y| self.mask[y]);
                self.tick(LemmaId::TraceAvoidance);
                let Some(res) = trace.residues() else {
                    self.fail(LemmaId::TraceAvoidance, sub.elements(), vec![*h, x], "non-cyclic trace".into());
                    continue;
                };
                for eq in &eqs {
                    if let Some(sol) = find_nontrivial_solution(&res, trace.quotient_order, eq) {
                        let mut elems = vec![*h, x];
                        elems.extend(sol);
                        self.fail(LemmaId::TraceAvoidance, sub.elements(), elems, eq.to_string());
                    }
                }
            }
        }
    }

    fn cosets(&mut self, h: &Subgroup) {
        let g = &self.ctx.group;
        let t = self.t.clone();
        for x in t.into_iter().filter(|&x| !h.contains(x)) {
            self.tick(LemmaId::CosetBound);
            let hits = h.elements().iter().filter(|&&k| self.mask[g.mul(k, x)]).count();
            if 2 * hits > h.order() {
                self.fail(LemmaId::CosetBound, h.elements(), vec![x], format!("|Hx ∩ T| = {hits}"));
            }
        }
        for c in g.right_cosets(h) {
            self.tick(LemmaId::CosetsMeetT);
            if !c.elements.iter().any(|&y| self.mask[y]) {
                self.fail(LemmaId::CosetsMeetT, h.elements(), vec![c.representative], String::new());
            }
        }
    }
}

/// A subgroup of largest order among those contained in the masked set.
///
/// Returns the subgroup and whether the search finished within `budget` nodes.
/// Among subgroups of equal order the lexicographically least element list wins.
pub fn max_subgroup_inside(g: &FiniteGroup, mask: &[bool], budget: usize) -> (Subgroup, bool) {
    let members: Vec<usize> = g.elements().filter(|&x| mask[x]).collect();
    let mut best = g.trivial_subgroup();
    if !mask[0] {
        return (best, true);
    }
    let mut seen: HashSet<Subgroup> = HashSet::from([best.clone()]);
    let mut stack = vec![best.clone()];
    while let Some(s) = stack.pop() {
        for &y in &members {
            if s.contains(y) {
                continue;
            }
            let j = g.join(&s, &[y]);
            if !j.elements().iter().all(|&e| mask[e]) || seen.contains(&j) {
                continue;
            }
            if seen.len() >= budget {
                return (best, false);
            }
            seen.insert(j.clone());
            if (j.order(), std::cmp::Reverse(j.elements())) > (best.order(), std::cmp::Reverse(best.elements())) {
                best = j.clone();
            }
            stack.push(j);
        }
    }
    (best, true)
}

/// Runs every check on `(G, α)`. `α` is assumed to be an automorphism.
pub fn check_instance(ctx: &GroupContext, alpha: &GroupMap) -> InstanceOutcome {
    let mask = ctx.cube_mask(alpha);
    let t: Vec<usize> = ctx.group.elements().filter(|&x| mask[x]).collect();
    let t_size = t.len();
    let mut c = Checker {
        ctx,
        alpha,
        mask,
        t,
        out: InstanceOutcome { checked: [0; 12], failures: Vec::new(), coset_status: CosetStatus::Skipped, t_size },
    };
    c.quotient_inequality();
    c.centralizer_cube();
    c.patterns();
    let cyclic = c.cyclic_subgroups();
    let mut family: Vec<Subgroup> = cyclic.iter().map(|(_, s)| s.clone()).collect();
    if 2 * t_size > ctx.group.order() {
        let (h, exact) = max_subgroup_inside(&ctx.group, &c.mask, SUBGROUP_SEARCH_BUDGET);
        c.out.coset_status = if exact { CosetStatus::Exact } else { CosetStatus::BestEffort };
        c.cosets(&h);
        if !family.contains(&h) {
            family.push(h);
        }
    }
    c.subgroup_family(&family);
    c.trace_avoidance(&cyclic);
    c.out
}

/// Checks for a single statement, as reported by the per-lemma entry points.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub skipped: bool,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Runs one statement's check on `(G, α)`.
pub fn check_lemma(ctx: &GroupContext, alpha: &GroupMap, lemma: LemmaId) -> LemmaReport {
    let out = check_instance(ctx, alpha);
    let skipped = matches!(lemma, LemmaId::CosetBound | LemmaId::CosetsMeetT) && out.coset_status == CosetStatus::Skipped;
    LemmaReport {
        lemma,
        checked: out.checked[lemma.index()],
        counterexamples: out.failures.into_iter().filter(|f| f.lemma == lemma).collect(),
        skipped,
    }
}

/// The quotient inequality for one α-invariant normal subgroup.
pub fn check_quotient_inequality(
    g: &FiniteGroup,
    alpha: &GroupMap,
    n: &Subgroup,
) -> Result<(crate::Rational, crate::Rational), crate::automorphism::MapError> {
    let (q, induced) = crate::automorphism::induced_on_quotient(g, alpha, n)?;
    let lhs = crate::Rational::from_counts(crate::cubing::cube_members(g, alpha, 3).len(), g.order());
    let rhs = crate::Rational::from_counts(crate::cubing::cube_members(&q.group, &induced, 3).len(), q.group.order());
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{enumerate_automorphisms, inner_automorphism};
    use crate::builders;
    use crate::classify::classify_theorem31;

    #[test]
    fn s3_type_two_passes_everything() {
        let g = builders::symmetric(3).unwrap();
        let alpha = classify_theorem31(&g).constructed_alpha.unwrap();
        let ctx = GroupContext::new(g);
        let out = check_instance(&ctx, &alpha);
        assert!(out.failures.is_empty(), "{:?}", out.failures);
        assert_eq!(out.t_size, 4);
        assert_eq!(out.coset_status, CosetStatus::Exact);
        assert!(out.checked[LemmaId::CosetBound.index()] > 0);
    }

    #[test]
    fn every_automorphism_of_small_groups() {
        for g in [builders::dihedral(4).unwrap(), builders::alternating(4).unwrap(), builders::quaternion8()] {
            let aut = enumerate_automorphisms(&g, None).unwrap();
            let ctx = GroupContext::new(g);
            for a in &aut.members {
                let out = check_instance(&ctx, a);
                assert!(out.failures.is_empty(), "{} {:?}", ctx.label, out.failures);
            }
        }
    }

    #[test]
    fn a4_coset_checks_are_skipped() {
        let g = builders::alternating(4).unwrap();
        let aut = enumerate_automorphisms(&g, None).unwrap();
        let ctx = GroupContext::new(g);
        assert!(aut.members.iter().all(|a| check_instance(&ctx, a).coset_status == CosetStatus::Skipped));
    }

    #[test]
    fn a5_identity_pairs() {
        let g = builders::alternating(5).unwrap();
        let ctx = GroupContext::new(g.clone());
        let id = GroupMap::identity(60);
        let out = check_instance(&ctx, &id);
        assert!(out.failures.is_empty());
        assert_eq!(out.t_size, 16);
        assert!(out.checked[LemmaId::Abba.index()] > 0);
        let r = check_lemma(&ctx, &inner_automorphism(&g, 5), LemmaId::Ap);
        assert!(r.passed() && !r.skipped);
    }

    #[test]
    fn quotient_examples() {
        let g = builders::symmetric(3).unwrap();
        let alpha = classify_theorem31(&g).constructed_alpha.unwrap();
        let (l, r) = check_quotient_inequality(&g, &alpha, &g.sylow(3)).unwrap();
        assert_eq!((l, r), (crate::Rational::new(2, 3), crate::Rational::new(1, 1)));
        let (l, r) = check_quotient_inequality(&g, &alpha, &g.whole()).unwrap();
        assert!(l <= r);
    }

    #[test]
    fn non_automorphism_violations_revalidate() {
        // An arbitrary permutation makes the pattern checks fail; the
        // counterexamples must survive the independent recomputation.
        let g = builders::symmetric(3).unwrap();
        let ctx = GroupContext::new(g.clone());
        let bogus = GroupMap::new(g.elements().map(|x| g.pow(x, 3)).collect());
        let out = check_instance(&ctx, &bogus);
        assert!(!out.failures.is_empty());
        let table = g.table_rows();
        assert!(out.failures.iter().all(|f| f.revalidate(&table)), "{:?}", out.failures);
    }

    #[test]
    fn fabricated_counterexample_is_rejected() {
        let g = builders::dihedral(4).unwrap();
        let table = g.table_rows();
        let fake = Counterexample {
            lemma: LemmaId::Abba,
            alpha: (0..8).collect(),
            subgroup: vec![],
            elements: vec![0, 1],
            detail: String::new(),
        };
        assert!(!fake.revalidate(&table));
    }

    #[test]
    fn largest_subgroup_inside_t() {
        let g = builders::dihedral(4).unwrap();
        let all = vec![true; 8];
        let (h, exact) = max_subgroup_inside(&g, &all, 1000);
        assert!(exact);
        assert_eq!(h.order(), 8);
    }
}
