//! Subgroups, quotients and structural invariants.

use std::collections::HashSet;

use crate::group::{Coset, FiniteGroup, GroupError, Subgroup};

/// `G/N` together with the projection map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[g]` is the coset of `g`.
    pub projection: Vec<usize>,
    /// Least element of each coset.
    pub representatives: Vec<usize>,
}

/// Outcome of the abelian-subgroup search.
#[derive(Clone, Debug)]
pub struct MaxAbelian {
    pub order: usize,
    pub witness: Subgroup,
    /// False when the node budget ran out before the search finished.
    pub exact: bool,
    pub nodes: u64,
}

impl FiniteGroup {
    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(vec![0])
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.elements().collect())
    }

    /// Extends `list` to its closure under right multiplication by `gens`.
    fn close(&self, mask: &mut [bool], list: &mut Vec<usize>, gens: &[usize]) {
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut list = vec![0];
        let mut used: Vec<usize> = Vec::new();
        for &g in gens {
            if mask[g] {
                continue;
            }
            used.push(g);
            self.close(&mut mask, &mut list, &used);
        }
        list.sort_unstable();
        Subgroup::from_sorted(list)
    }

    /// `<H, extra>`.
    pub fn join(&self, h: &Subgroup, extra: &[usize]) -> Subgroup {
        let mut gens = self.generators_of(h);
        gens.extend_from_slice(extra);
        self.subgroup_generated(&gens)
    }

    /// A generating set of `h` chosen greedily in element order.
    pub fn generators_of(&self, h: &Subgroup) -> Vec<usize> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut list = vec![0];
        let mut used = Vec::new();
        for &g in h.elements() {
            if !mask[g] {
                used.push(g);
                self.close(&mut mask, &mut list, &used);
            }
        }
        used
    }

    /// Checks closure of an arbitrary element set.
    pub fn subgroup_from_elements(&self, elems: &[usize]) -> Result<Subgroup, GroupError> {
        let mut v = elems.to_vec();
        for &x in &v {
            self.check_element(x)?;
        }
        v.sort_unstable();
        v.dedup();
        if v.first() != Some(&0) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        let mut mask = vec![false; self.order()];
        for &x in &v {
            mask[x] = true;
        }
        for &a in &v {
            for &b in &v {
                if !mask[self.mul(a, b)] {
                    return Err(GroupError::NotASubgroup(format!("{a}*{b} escapes")));
                }
            }
        }
        Ok(Subgroup::from_sorted(v))
    }

    pub fn centralizer(&self, x: usize) -> Subgroup {
        Subgroup::from_sorted(self.elements().filter(|&g| self.commute(g, x)).collect())
    }

    pub fn centralizer_order(&self, x: usize) -> usize {
        self.elements().filter(|&g| self.commute(g, x)).count()
    }

    pub fn centralizer_of(&self, elems: &[usize]) -> Subgroup {
        Subgroup::from_sorted(
            self.elements().filter(|&g| elems.iter().all(|&x| self.commute(g, x))).collect(),
        )
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.small_generating_set();
        self.centralizer_of(&gens)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let gens = self.generators_of(h);
        Subgroup::from_sorted(
            self.elements()
                .filter(|&g| gens.iter().all(|&x| h.contains(self.conjugate(x, g))))
                .collect(),
        )
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let hg = self.generators_of(h);
        let gg = self.small_generating_set();
        hg.iter().all(|&x| gg.iter().all(|&g| h.contains(self.conjugate(x, g))))
    }

    /// Right cosets `Hg` in order of their least elements.
    pub fn right_cosets(&self, h: &Subgroup) -> Vec<Coset> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut elements: Vec<usize> = h.elements().iter().map(|&x| self.mul(x, g)).collect();
            for &y in &elements {
                seen[y] = true;
            }
            elements.sort_unstable();
            out.push(Coset { representative: g, elements });
        }
        out
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = Vec::new();
            for x in self.elements() {
                let c = self.conjugate(g, x);
                if !seen[c] {
                    seen[c] = true;
                    class.push(c);
                }
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }

    pub fn normal_closure(&self, elems: &[usize]) -> Subgroup {
        let gg = self.small_generating_set();
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut list = vec![0];
        let mut used: Vec<usize> = Vec::new();
        let mut queue: Vec<usize> = elems.to_vec();
        while let Some(x) = queue.pop() {
            if mask[x] {
                continue;
            }
            used.push(x);
            self.close(&mut mask, &mut list, &used);
            for &g in &gg {
                let c = self.conjugate(x, g);
                if !mask[c] {
                    queue.push(c);
                }
            }
            // conjugates of earlier generators by the group are already queued
        }
        list.sort_unstable();
        Subgroup::from_sorted(list)
    }

    /// All normal subgroups, sorted by order then elements.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let classes = self.conjugacy_classes();
        let minimal: Vec<Subgroup> = {
            let mut v: Vec<Subgroup> =
                classes.iter().map(|c| self.normal_closure(&c[..1])).collect();
            v.sort();
            v.dedup();
            v
        };
        let mut found: HashSet<Subgroup> = HashSet::new();
        let mut frontier = vec![self.trivial_subgroup()];
        found.insert(self.trivial_subgroup());
        while let Some(h) = frontier.pop() {
            for m in &minimal {
                if m.is_subset_of(&h) {
                    continue;
                }
                let j = self.join(&h, &self.generators_of(m));
                if found.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        out
    }

    /// `[A, B]`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut mask = vec![false; self.order()];
        let mut gens = Vec::new();
        for &x in a.elements() {
            for &y in b.elements() {
                let c = self.commutator(x, y);
                if !mask[c] {
                    mask[c] = true;
                    gens.push(c);
                }
            }
        }
        self.subgroup_generated(&gens)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.commutator_subgroup(last, last);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(Subgroup::is_trivial)
    }

    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let last = series.last().expect("nonempty");
            let next = self.commutator_subgroup(last, &g);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    /// Nilpotency class, or `None` if the group is not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let s = self.lower_central_series();
        s.last().expect("nonempty").is_trivial().then(|| s.len() - 1)
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient, GroupError> {
        if !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        let cosets = self.right_cosets(n);
        let m = cosets.len();
        let mut projection = vec![0usize; self.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in &c.elements {
                projection[x] = i;
            }
        }
        let representatives: Vec<usize> = cosets.iter().map(|c| c.representative).collect();
        let mut flat = Vec::with_capacity(m * m);
        for &a in &representatives {
            for &b in &representatives {
                flat.push(projection[self.mul(a, b)] as u16);
            }
        }
        let group = FiniteGroup::from_flat(m, flat)?;
        Ok(Quotient { group, projection, representatives })
    }

    /// A subgroup as a group in its own right; `embedding[i]` is the ambient element.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let emb = h.elements().to_vec();
        let mut index = vec![usize::MAX; self.order()];
        for (i, &x) in emb.iter().enumerate() {
            index[x] = i;
        }
        let m = emb.len();
        let mut flat = Vec::with_capacity(m * m);
        for &a in &emb {
            for &b in &emb {
                flat.push(index[self.mul(a, b)] as u16);
            }
        }
        let g = FiniteGroup::from_flat(m, flat).expect("subgroup table is a group");
        (g, emb)
    }

    /// A Sylow `p`-subgroup, grown by normalizer ascent.
    pub fn sylow(&self, p: usize) -> Subgroup {
        let n = self.order();
        let mut target = 1;
        let mut r = n;
        while r.is_multiple_of(p) {
            target *= p;
            r /= p;
        }
        let mut s = self.trivial_subgroup();
        while s.order() < target {
            let norm = self.normalizer(&s);
            let mut grown = false;
            for &g in norm.elements() {
                if s.contains(g) {
                    continue;
                }
                let mut k = 1;
                let mut x = g;
                while !s.contains(x) {
                    x = self.mul(x, g);
                    k += 1;
                }
                if k % p == 0 {
                    let y = self.pow(g, (k / p) as i64);
                    s = self.join(&s, &[y]);
                    grown = true;
                    break;
                }
            }
            assert!(grown, "Sylow ascent stalls only on a broken table");
        }
        s
    }

    pub fn is_simple(&self) -> bool {
        self.order() > 1 && self.normal_subgroups().len() == 2
    }

    /// Greedy generating set: each step adds the element that enlarges the span most.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let n = self.order();
        let mut gens: Vec<usize> = Vec::new();
        let mut current = self.trivial_subgroup();
        while current.order() < n {
            let mask = current.mask(n);
            let mut best: Option<(usize, Subgroup)> = None;
            let mut tried = vec![false; n];
            for x in self.elements() {
                if mask[x] || tried[x] {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push(x);
                let s = self.subgroup_generated(&trial);
                // generators of <x> give the same span
                let ox = self.element_order(x);
                for k in 1..ox {
                    if num_integer::gcd(k, ox) == 1 {
                        tried[self.pow(x, k as i64)] = true;
                    }
                }
                if best.as_ref().is_none_or(|(_, b)| s.order() > b.order()) {
                    let full = s.order() == n;
                    best = Some((x, s));
                    if full {
                        break;
                    }
                }
            }
            let (x, s) = best.expect("proper subgroup has an outside element");
            gens.push(x);
            current = s;
        }
        gens
    }

    /// Largest abelian subgroup by branch and bound on centralizer sizes.
    pub fn max_abelian_subgroup(&self, budget: u64) -> MaxAbelian {
        let n = self.order();
        if self.is_abelian() {
            return MaxAbelian { order: n, witness: self.whole(), exact: true, nodes: 0 };
        }
        let cent: Vec<Subgroup> = self.elements().map(|x| self.centralizer(x)).collect();
        let mut order: Vec<usize> = (1..n).collect();
        order.sort_by(|&a, &b| cent[b].order().cmp(&cent[a].order()).then(a.cmp(&b)));
        let mut state = AbelianSearch {
            g: self,
            cent: &cent,
            order: &order,
            best: self.center(),
            visited: HashSet::new(),
            nodes: 0,
            budget,
            exhausted: false,
        };
        let root = self.trivial_subgroup();
        state.explore(&root, &self.whole());
        MaxAbelian {
            order: state.best.order(),
            witness: state.best,
            exact: !state.exhausted,
            nodes: state.nodes,
        }
    }
}

struct AbelianSearch<'a> {
    g: &'a FiniteGroup,
    cent: &'a [Subgroup],
    order: &'a [usize],
    best: Subgroup,
    visited: HashSet<Subgroup>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl AbelianSearch<'_> {
    fn explore(&mut self, a: &Subgroup, c: &Subgroup) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if a.order() > self.best.order() {
            self.best = a.clone();
        }
        if c.order() <= self.best.order() {
            return;
        }
        for &x in self.order {
            if self.exhausted {
                return;
            }
            if a.contains(x) || !c.contains(x) {
                continue;
            }
            let cb = c.intersection(&self.cent[x]);
            if cb.order() <= self.best.order() {
                continue;
            }
            let b = self.g.join(a, &[x]);
            if !self.visited.insert(b.clone()) {
                continue;
            }
            self.explore(&b, &cb);
        }
    }
}
