//! Group maps and automorphism enumeration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, Subgroup};
use crate::structure::Quotient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("more than {cap} automorphisms")]
    CapExceeded { cap: usize },
    #[error("subgroup is not invariant under the map")]
    NotInvariant,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("map has {len} images but the group has order {order}")]
    SizeMismatch { len: usize, order: usize },
    #[error("not an automorphism: {0}")]
    NotAutomorphism(MapFailure),
}

/// Why a map failed to be a homomorphism or a bijection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapFailure {
    /// `m(a b) != m(a) m(b)`.
    Product { a: usize, b: usize },
    /// Two elements share the image `image`.
    NotInjective { image: usize },
    /// An image lies outside the target.
    OutOfRange { element: usize },
}

impl std::fmt::Display for MapFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapFailure::Product { a, b } => write!(f, "m({a}*{b}) != m({a})*m({b})"),
            MapFailure::NotInjective { image } => write!(f, "image {image} is hit twice"),
            MapFailure::OutOfRange { element } => write!(f, "image of {element} is out of range"),
        }
    }
}

/// A map between finite groups as a flat image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupMap {
    images: Vec<usize>,
}

impl GroupMap {
    pub fn new(images: Vec<usize>) -> Self {
        GroupMap { images }
    }

    pub fn identity(n: usize) -> Self {
        GroupMap { images: (0..n).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn into_images(self) -> Vec<usize> {
        self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `x -> other(self(x))`, matching the right-action convention `x(αβ) = (xα)β`.
    pub fn then(&self, other: &GroupMap) -> GroupMap {
        GroupMap { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> GroupMap {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        GroupMap { images: inv }
    }

    /// Whether `m(H) = H`.
    pub fn preserves(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&x| h.contains(self.images[x]))
    }
}

pub fn compose(m1: &GroupMap, m2: &GroupMap) -> GroupMap {
    m1.then(m2)
}

pub fn invert(m: &GroupMap) -> GroupMap {
    m.inverse()
}

/// Exhaustive pair check; returns the first failing pair.
pub fn homomorphism_failure(src: &FiniteGroup, tgt: &FiniteGroup, m: &GroupMap) -> Option<MapFailure> {
    if m.len() != src.order() {
        return Some(MapFailure::OutOfRange { element: m.len().min(src.order()) });
    }
    if let Some(element) = (0..m.len()).find(|&x| m.apply(x) >= tgt.order()) {
        return Some(MapFailure::OutOfRange { element });
    }
    for a in src.elements() {
        let ma = m.apply(a);
        for b in src.elements() {
            if m.apply(src.mul(a, b)) != tgt.mul(ma, m.apply(b)) {
                return Some(MapFailure::Product { a, b });
            }
        }
    }
    None
}

pub fn is_homomorphism(src: &FiniteGroup, tgt: &FiniteGroup, m: &GroupMap) -> bool {
    homomorphism_failure(src, tgt, m).is_none()
}

pub fn automorphism_failure(g: &FiniteGroup, m: &GroupMap) -> Option<MapFailure> {
    if let Some(f) = homomorphism_failure(g, g, m) {
        return Some(f);
    }
    let mut seen = vec![false; g.order()];
    for &y in m.images() {
        if seen[y] {
            return Some(MapFailure::NotInjective { image: y });
        }
        seen[y] = true;
    }
    None
}

pub fn is_automorphism(g: &FiniteGroup, m: &GroupMap) -> bool {
    automorphism_failure(g, m).is_none()
}

/// Automorphism test using only the Cayley edges `x -> x g` for `g` in `gens`.
pub fn is_automorphism_on_generators(g: &FiniteGroup, gens: &[usize], m: &GroupMap) -> bool {
    let n = g.order();
    if m.len() != n || m.images().iter().any(|&y| y >= n) {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in m.images() {
        if seen[y] {
            return false;
        }
        seen[y] = true;
    }
    gens.iter().all(|&s| {
        let ms = m.apply(s);
        g.elements().all(|x| m.apply(g.mul(x, s)) == g.mul(m.apply(x), ms))
    })
}

/// `g -> x^-1 g x`.
pub fn inner_automorphism(g: &FiniteGroup, x: usize) -> GroupMap {
    GroupMap::new(g.elements().map(|e| g.conjugate(e, x)).collect())
}

/// `x -> x^k`.
pub fn power_map(g: &FiniteGroup, k: i64) -> GroupMap {
    GroupMap::new(g.elements().map(|x| g.pow(x, k)).collect())
}

pub fn is_n_abelian(g: &FiniteGroup, k: i64) -> bool {
    is_homomorphism(g, g, &power_map(g, k))
}

/// `α_N` on `N` viewed as a group (indices follow the sorted elements of `N`).
pub fn restrict(g: &FiniteGroup, m: &GroupMap, n: &Subgroup) -> Result<(FiniteGroup, GroupMap), MapError> {
    if !m.preserves(n) {
        return Err(MapError::NotInvariant);
    }
    let (sub, emb) = g.subgroup_as_group(n);
    let images = emb
        .iter()
        .map(|&x| n.elements().binary_search(&m.apply(x)).expect("invariant"))
        .collect();
    Ok((sub, GroupMap::new(images)))
}

/// `α^N` on `G/N`.
pub fn induced_on_quotient(
    g: &FiniteGroup,
    m: &GroupMap,
    n: &Subgroup,
) -> Result<(Quotient, GroupMap), MapError> {
    if !g.is_normal(n) {
        return Err(MapError::NotNormal);
    }
    if !m.preserves(n) {
        return Err(MapError::NotInvariant);
    }
    let q = g.quotient(n).map_err(|_| MapError::NotNormal)?;
    let images = q.representatives.iter().map(|&r| q.projection[m.apply(r)]).collect();
    Ok((q, GroupMap::new(images)))
}

/// `Aut(G)` as a sorted list of image arrays.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub members: Vec<GroupMap>,
    /// Generating set whose images were searched.
    pub generators: Vec<usize>,
    /// Search nodes visited; `None` when loaded from a cache.
    pub nodes: Option<u64>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }
}

/// Fingerprint used to pair generators with candidate images.
fn fingerprints(g: &FiniteGroup) -> Vec<(usize, usize, usize, usize)> {
    let cent: Vec<usize> = g.elements().map(|x| g.centralizer_order(x)).collect();
    g.elements()
        .map(|x| (g.element_order(x), cent[x], cent[g.pow(x, 2)], cent[g.pow(x, 3)]))
        .collect()
}

const NONE: usize = usize::MAX;

struct Search<'a> {
    g: &'a FiniteGroup,
    gens: &'a [usize],
    cands: &'a [Vec<usize>],
    cap: usize,
    found: Vec<GroupMap>,
    nodes: u64,
    overflow: bool,
}

impl Search<'_> {
    /// Extends `img` (defined on `<gens[..level]>`) by `gens[level] -> c`.
    fn extend(&self, img: &[usize], level: usize, c: usize) -> Option<Vec<usize>> {
        let g = self.g;
        let s = self.gens[level];
        if img[s] != NONE {
            return (img[s] == c).then(|| img.to_vec());
        }
        let mut img = img.to_vec();
        let mut used = vec![false; g.order()];
        for &y in &img {
            if y != NONE {
                used[y] = true;
            }
        }
        if used[c] {
            return None;
        }
        let gens = &self.gens[..=level];
        let mut gimg: Vec<usize> = gens[..level].iter().map(|&s| img[s]).collect();
        gimg.push(c);
        let mut list = vec![0usize];
        let mut inlist = vec![false; g.order()];
        inlist[0] = true;
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            let mx = img[x];
            for (j, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let expected = g.mul(mx, gimg[j]);
                if img[y] == NONE {
                    if used[expected] {
                        return None;
                    }
                    used[expected] = true;
                    img[y] = expected;
                } else if img[y] != expected {
                    return None;
                }
                if !inlist[y] {
                    inlist[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        Some(img)
    }

    fn run(&mut self, img: &[usize], level: usize) {
        self.nodes += 1;
        if level == self.gens.len() {
            if self.found.len() >= self.cap {
                self.overflow = true;
                return;
            }
            self.found.push(GroupMap::new(img.to_vec()));
            return;
        }
        for &c in &self.cands[level] {
            if self.overflow {
                return;
            }
            if let Some(next) = self.extend(img, level, c) {
                self.run(&next, level + 1);
            }
        }
    }
}

/// All automorphisms, sorted lexicographically by image array.
pub fn enumerate_automorphisms(g: &FiniteGroup, cap: Option<usize>) -> Result<AutomorphismGroup, MapError> {
    let cap = cap.unwrap_or(usize::MAX);
    let n = g.order();
    let fp = fingerprints(g);
    let mut gens = g.small_generating_set();
    let cand_of = |s: usize| -> Vec<usize> { g.elements().filter(|&y| fp[y] == fp[s]).collect() };
    gens.sort_by_key(|&s| (cand_of(s).len(), s));
    let cands: Vec<Vec<usize>> = gens.iter().map(|&s| cand_of(s)).collect();
    let mut root = vec![NONE; n];
    root[0] = 0;
    if gens.is_empty() {
        return Ok(AutomorphismGroup {
            members: vec![GroupMap::identity(n)],
            generators: gens,
            nodes: Some(1),
        });
    }
    let branches: Vec<(Vec<GroupMap>, u64, bool)> = cands[0]
        .par_iter()
        .map(|&c| {
            let mut s = Search { g, gens: &gens, cands: &cands, cap, found: Vec::new(), nodes: 0, overflow: false };
            if let Some(next) = s.extend(&root, 0, c) {
                s.run(&next, 1);
            }
            (s.found, s.nodes, s.overflow)
        })
        .collect();
    let mut members = Vec::new();
    let mut nodes = 1;
    for (found, k, overflow) in branches {
        if overflow {
            return Err(MapError::CapExceeded { cap });
        }
        members.extend(found);
        nodes += k;
    }
    if members.len() > cap {
        return Err(MapError::CapExceeded { cap });
    }
    members.sort();
    Ok(AutomorphismGroup { members, generators: gens, nodes: Some(nodes) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::*;

    #[test]
    fn small_aut_orders() {
        assert_eq!(enumerate_automorphisms(&cyclic(8).unwrap(), None).unwrap().order(), 4);
        assert_eq!(enumerate_automorphisms(&cyclic(2).unwrap(), None).unwrap().order(), 1);
        assert_eq!(enumerate_automorphisms(&cyclic(1).unwrap(), None).unwrap().order(), 1);
        let s3 = symmetric(3).unwrap();
        let aut = enumerate_automorphisms(&s3, None).unwrap();
        assert_eq!(aut.order(), 6);
        for x in s3.elements() {
            assert!(aut.members.contains(&inner_automorphism(&s3, x)));
        }
        assert!(aut.members[0].is_identity());
    }

    #[test]
    fn cap_is_enforced() {
        let g = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap()).unwrap();
        assert_eq!(enumerate_automorphisms(&g, Some(5)).unwrap_err(), MapError::CapExceeded { cap: 5 });
        assert_eq!(enumerate_automorphisms(&g, Some(6)).unwrap().order(), 6);
    }

    #[test]
    fn power_maps() {
        let c5 = cyclic(5).unwrap();
        assert!(is_automorphism(&c5, &power_map(&c5, 3)));
        let c9 = cyclic(9).unwrap();
        assert!(is_homomorphism(&c9, &c9, &power_map(&c9, 3)));
        assert!(!is_automorphism(&c9, &power_map(&c9, 3)));
        assert!(!is_n_abelian(&symmetric(3).unwrap(), 2));
        let h = heisenberg(3).unwrap();
        assert!(is_n_abelian(&h, 3));
        assert!(power_map(&h, 3).images().iter().all(|&x| x == 0));
    }

    #[test]
    fn inner_transposition_has_order_two() {
        let s3 = symmetric(3).unwrap();
        let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let m = inner_automorphism(&s3, t);
        assert!(!m.is_identity());
        assert!(m.then(&m).is_identity());
    }

    #[test]
    fn restrict_and_quotient() {
        let g = type3_group_i(1).unwrap();
        let z = g.center();
        let cube = power_map(&g, 3);
        assert!(!is_automorphism(&g, &cube));
        for x in g.elements() {
            let (_, r) = restrict(&g, &inner_automorphism(&g, x), &z).unwrap();
            assert!(r.is_identity());
        }
        let (q, m) = induced_on_quotient(&g, &inner_automorphism(&g, 3), &g.whole()).unwrap();
        assert_eq!(q.group.order(), 1);
        assert!(m.is_identity());
        let s3 = symmetric(3).unwrap();
        let t = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let h = s3.subgroup_generated(&[t]);
        assert_eq!(
            restrict(&s3, &inner_automorphism(&s3, (1..6).find(|&x| s3.element_order(x) == 3).unwrap()), &h)
                .unwrap_err(),
            MapError::NotInvariant
        );
    }
}
