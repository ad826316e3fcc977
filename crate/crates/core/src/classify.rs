//! Automorphisms with large cube sets and the structural classification.

use serde::Serialize;
use thiserror::Error;

use crate::automorphism::{automorphism_failure, is_homomorphism, power_map, GroupMap};
use crate::cubing::cube_members;
use crate::group::{FiniteGroup, GroupError, Subgroup};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("group is not abelian")]
    NotAbelian,
    #[error("3 divides the group order")]
    OrderDivisibleBy3,
    #[error("K has index {index}, not 2")]
    BadIndex { index: usize },
    #[error("K is not abelian")]
    KNotAbelian,
    #[error("Sylow 3-subgroup condition fails: {0}")]
    SylowCondition(String),
    #[error("x lies in K")]
    XInK,
    #[error("group is not nilpotent of class 2")]
    NotClass2,
    #[error("3 divides the group order")]
    Order3,
    #[error("bad decomposition: {0}")]
    BadDecomposition(String),
    #[error("constructed map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("measured ratio {measured} differs from predicted {predicted}")]
    RatioMismatch { predicted: Rational, measured: Rational },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A constructed automorphism with its predicted and measured ratio.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub alpha: GroupMap,
    pub predicted: Rational,
    pub measured: Rational,
}

fn finish(g: &FiniteGroup, alpha: GroupMap, predicted: Rational) -> Result<Construction, ConstructionError> {
    if let Some(f) = automorphism_failure(g, &alpha) {
        return Err(ConstructionError::NotAutomorphism(f.to_string()));
    }
    let measured = Rational::from_counts(cube_members(g, &alpha, 3).len(), g.order());
    if measured != predicted {
        return Err(ConstructionError::RatioMismatch { predicted, measured });
    }
    Ok(Construction { alpha, predicted, measured })
}

/// `g -> g^3` on an abelian group of order prime to 3.
pub fn build_type_i(g: &FiniteGroup) -> Result<Construction, ConstructionError> {
    if !g.is_abelian() {
        return Err(ConstructionError::NotAbelian);
    }
    if g.order().is_multiple_of(3) {
        return Err(ConstructionError::OrderDivisibleBy3);
    }
    finish(g, power_map(g, 3), Rational::new(1, 1))
}

/// Checks that the Sylow 3-subgroup is normal, inside `k`, and meets the centre trivially.
fn sylow3_condition(g: &FiniteGroup, k: &Subgroup) -> Result<Subgroup, ConstructionError> {
    let s = g.sylow(3);
    if s.is_trivial() {
        return Ok(s);
    }
    if !g.is_normal(&s) {
        return Err(ConstructionError::SylowCondition("S is not normal".into()));
    }
    if !s.is_subset_of(k) {
        return Err(ConstructionError::SylowCondition("S is not inside K".into()));
    }
    if !s.intersection(&g.center()).is_trivial() {
        return Err(ConstructionError::SylowCondition("S meets the centre".into()));
    }
    Ok(s)
}

/// `k -> k^2 x^-1 k x` on `K`, `x -> x^3`, extended multiplicatively.
pub fn build_type_ii(g: &FiniteGroup, k: &Subgroup, x: usize) -> Result<Construction, ConstructionError> {
    g.check_element(x)?;
    let k = g.subgroup_from_elements(k.elements())?;
    if k.order() * 2 != g.order() {
        return Err(ConstructionError::BadIndex { index: g.order() / k.order() });
    }
    let ke = k.elements();
    if ke.iter().any(|&a| ke.iter().any(|&b| !g.commute(a, b))) {
        return Err(ConstructionError::KNotAbelian);
    }
    if k.contains(x) {
        return Err(ConstructionError::XInK);
    }
    sylow3_condition(g, &k)?;
    let x3 = g.pow(x, 3);
    let xinv = g.inverse(x);
    let mut images = vec![0; g.order()];
    for &a in ke {
        images[a] = g.mul(g.pow(a, 2), g.conjugate(a, x));
    }
    for e in g.elements() {
        if !k.contains(e) {
            let a = g.mul(e, xinv);
            images[e] = g.mul(images[a], x3);
        }
    }
    let ck = ke.iter().filter(|&&a| g.commute(a, x)).count();
    let n = (k.order() / ck) as i64;
    finish(g, GroupMap::new(images), Rational::new(n + 1, 2 * n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Type3Shape {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type3Decomposition {
    pub shape: Type3Shape,
    pub center: Vec<usize>,
    pub a_gens: Vec<usize>,
    pub x_gens: Vec<usize>,
    /// Generators of the derived subgroup: `[a_i, x_i]`.
    pub z: Vec<usize>,
}

impl Type3Decomposition {
    pub fn k(&self) -> usize {
        self.x_gens.len()
    }
}

/// Ratio of the type III map for a given shape and rank.
///
/// For shape (ii) a coset `A x^e` meets `T` in the elements `a` with
/// `[x^e, a] = 1`; the two commutators are independent, giving
/// `(1 + 1/2 + 1/2 + 1/4) / 4`.
pub fn type3_ratio(shape: Type3Shape, k: usize) -> Rational {
    match shape {
        Type3Shape::I => Rational::new((1 << k) + 1, 1 << (k + 1)),
        Type3Shape::II => Rational::new(9, 16),
    }
}

/// `a x_1^e_1 ... x_k^e_k -> a^3 x_1^3e_1 ... x_k^3e_k` with `A = <Z(G), a_1..a_k>`.
pub fn build_type_iii(
    g: &FiniteGroup,
    a_gens: &[usize],
    x_gens: &[usize],
    shape: Type3Shape,
) -> Result<Construction, ConstructionError> {
    for &e in a_gens.iter().chain(x_gens) {
        g.check_element(e)?;
    }
    if g.nilpotency_class() != Some(2) {
        return Err(ConstructionError::NotClass2);
    }
    if g.order().is_multiple_of(3) {
        return Err(ConstructionError::Order3);
    }
    let k = x_gens.len();
    if a_gens.len() != k || k == 0 {
        return Err(ConstructionError::BadDecomposition("need k >= 1 a- and x-generators".into()));
    }
    let a = g.join(&g.center(), a_gens);
    let ae = a.elements();
    if ae.iter().any(|&p| ae.iter().any(|&q| !g.commute(p, q))) {
        return Err(ConstructionError::BadDecomposition("A is not abelian".into()));
    }
    if a.order() << k != g.order() {
        return Err(ConstructionError::BadDecomposition(format!(
            "|A| * 2^{k} = {} but |G| = {}",
            a.order() << k,
            g.order()
        )));
    }
    let mut images = vec![usize::MAX; g.order()];
    for eps in 0..(1usize << k) {
        let (mut xe, mut ye) = (0, 0);
        for (i, &xi) in x_gens.iter().enumerate() {
            if eps >> i & 1 == 1 {
                xe = g.mul(xe, xi);
                ye = g.mul(ye, g.pow(xi, 3));
            }
        }
        for &p in ae {
            let e = g.mul(p, xe);
            if images[e] != usize::MAX {
                return Err(ConstructionError::BadDecomposition(format!("element {e} has two normal forms")));
            }
            images[e] = g.mul(g.pow(p, 3), ye);
        }
    }
    finish(g, GroupMap::new(images), type3_ratio(shape, k))
}

/// Elements of `G/Z` chosen greedily: least element outside the current span.
fn greedy_basis(g: &FiniteGroup, z: &Subgroup) -> Vec<usize> {
    let mut span = z.clone();
    let mut basis = Vec::new();
    for e in g.elements() {
        if !span.contains(e) {
            basis.push(e);
            span = g.join(&span, &[e]);
        }
    }
    basis
}

/// Finds generators in the form required by the type III construction.
pub fn find_type3_decomposition(g: &FiniteGroup) -> Result<Type3Decomposition, String> {
    if g.is_abelian() {
        return Err("abelian".into());
    }
    if g.nilpotency_class() != Some(2) {
        return Err("not nilpotent of class 2".into());
    }
    if g.order().is_multiple_of(3) {
        return Err("3 divides the order".into());
    }
    let mut odd = g.order();
    while odd.is_multiple_of(2) {
        odd /= 2;
    }
    for p in (3..=odd).step_by(2) {
        if odd.is_multiple_of(p) && (2..p).all(|d| p % d != 0) {
            let s = g.sylow(p);
            let se = s.elements();
            if se.iter().any(|&a| se.iter().any(|&b| !g.commute(a, b))) {
                return Err(format!("Sylow {p}-subgroup is not abelian"));
            }
        }
    }
    let z = g.center();
    if g.elements().any(|e| !z.contains(g.pow(e, 2))) {
        return Err("G/Z is not elementary abelian".into());
    }
    let d = g.derived_subgroup();
    let center = z.elements().to_vec();
    match d.order() {
        2 => {
            let zgen = d.elements()[1];
            let pairs = symplectic_pairs(g, greedy_basis(g, &z)).ok_or("commutator form is degenerate")?;
            Ok(Type3Decomposition {
                shape: Type3Shape::I,
                center,
                a_gens: pairs.iter().map(|p| p.0).collect(),
                x_gens: pairs.iter().map(|p| p.1).collect(),
                z: vec![zgen; pairs.len()],
            })
        }
        4 if d.elements().iter().all(|&e| g.pow(e, 2) == 0) && g.order() / z.order() == 16 => {
            split_planes(g, &z).map(|(a, x, zs)| Type3Decomposition {
                shape: Type3Shape::II,
                center,
                a_gens: a,
                x_gens: x,
                z: zs,
            })
            .ok_or_else(|| "no basis splits the commutator form into two planes".into())
        }
        o => Err(format!("derived subgroup of order {o} fits neither shape")),
    }
}

/// Symplectic Gram-Schmidt on the commutator form of `G/Z` with values in a group of order 2.
fn symplectic_pairs(g: &FiniteGroup, basis: Vec<usize>) -> Option<Vec<(usize, usize)>> {
    let b = |u: usize, v: usize| usize::from(!g.commute(u, v));
    let mut rest = basis;
    let mut pairs = Vec::new();
    while let Some(&e) = rest.first() {
        let j = rest.iter().position(|&f| b(e, f) == 1)?;
        let f = rest[j];
        rest = rest
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != j)
            .map(|(_, &v)| {
                let mut w = v;
                if b(v, f) == 1 {
                    w = g.mul(w, e);
                }
                if b(v, e) == 1 {
                    w = g.mul(w, f);
                }
                w
            })
            .collect();
        pairs.push((e, f));
    }
    Some(pairs)
}

/// Searches coset representatives for `a_1, x_1, a_2, x_2` with the shape (ii) relations.
fn split_planes(g: &FiniteGroup, z: &Subgroup) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let reps: Vec<usize> = g.right_cosets(z).iter().skip(1).map(|c| c.representative).collect();
    let c = |u, v| g.commutator(u, v);
    for &a1 in &reps {
        for &x1 in &reps {
            let z1 = c(a1, x1);
            if z1 == 0 {
                continue;
            }
            for &a2 in &reps {
                if c(a1, a2) != 0 || c(x1, a2) != 0 {
                    continue;
                }
                for &x2 in &reps {
                    let z2 = c(a2, x2);
                    if z2 == 0 || z2 == z1 || c(a1, x2) != 0 || c(x1, x2) != 0 {
                        continue;
                    }
                    if g.join(z, &[a1, x1, a2, x2]).order() == g.order() {
                        return Some((vec![a1, a2], vec![x1, x2], vec![z1, z2]));
                    }
                }
            }
        }
    }
    None
}

/// Index-2 subgroups, as kernels of the nonzero homomorphisms onto `C_2`.
pub fn index_two_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let gens = g.small_generating_set();
    let mut out = Vec::new();
    for mask in 1..(1usize << gens.len()) {
        let mut val = vec![u8::MAX; g.order()];
        val[0] = 0;
        let mut list = vec![0];
        let mut ok = true;
        let mut i = 0;
        'bfs: while i < list.len() {
            let x = list[i];
            for (j, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let v = val[x] ^ (mask >> j & 1) as u8;
                if val[y] == u8::MAX {
                    val[y] = v;
                    list.push(y);
                } else if val[y] != v {
                    ok = false;
                    break 'bfs;
                }
            }
            i += 1;
        }
        if ok {
            out.push(Subgroup::from_sorted(g.elements().filter(|&e| val[e] == 0).collect()));
        }
    }
    debug_assert!(out.iter().all(|k| {
        let chi = GroupMap::new(g.elements().map(|e| usize::from(!k.contains(e))).collect());
        is_homomorphism(g, &crate::builders::cyclic(2).expect("C2"), &chi)
    }));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    TypeI,
    TypeII,
    TypeIIIi,
    TypeIIIii,
    None,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::TypeI => "I",
            VerdictKind::TypeII => "II",
            VerdictKind::TypeIIIi => "III(i)",
            VerdictKind::TypeIIIii => "III(ii)",
            VerdictKind::None => "none",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    None,
    TypeI,
    TypeII { k: Vec<usize>, sylow3: Vec<usize>, x: usize },
    TypeIII(Type3Decomposition),
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationVerdict {
    pub kind: VerdictKind,
    pub witness: Witness,
    pub constructed_alpha: Option<GroupMap>,
    pub predicted_ratio: Option<Rational>,
    pub notes: Vec<String>,
}

/// Decides which of the three structures applies and builds the matching map.
///
/// When several apply, the construction with the largest ratio is kept;
/// ties favour type III.
pub fn classify_theorem31(g: &FiniteGroup) -> ClassificationVerdict {
    let mut notes = Vec::new();
    if g.is_abelian() {
        return match build_type_i(g) {
            Ok(c) => ClassificationVerdict {
                kind: VerdictKind::TypeI,
                witness: Witness::TypeI,
                constructed_alpha: Some(c.alpha),
                predicted_ratio: Some(c.predicted),
                notes,
            },
            Err(e) => ClassificationVerdict {
                kind: VerdictKind::None,
                witness: Witness::None,
                constructed_alpha: None,
                predicted_ratio: None,
                notes: vec![format!("type I: {e}")],
            },
        };
    }
    let mut best: Option<(VerdictKind, Witness, Construction)> = None;
    let offer = |kind, witness, c: Construction, best: &mut Option<(VerdictKind, Witness, Construction)>| {
        if best.as_ref().is_none_or(|b| c.predicted > b.2.predicted) {
            *best = Some((kind, witness, c));
        }
    };
    match find_type3_decomposition(g) {
        Ok(dec) => match build_type_iii(g, &dec.a_gens, &dec.x_gens, dec.shape) {
            Ok(c) => {
                let kind = match dec.shape {
                    Type3Shape::I => VerdictKind::TypeIIIi,
                    Type3Shape::II => VerdictKind::TypeIIIii,
                };
                offer(kind, Witness::TypeIII(dec), c, &mut best);
            }
            Err(e) => notes.push(format!("type III: {e}")),
        },
        Err(reason) => notes.push(format!("type III: {reason}")),
    }
    let mut any_abelian = false;
    for k in index_two_subgroups(g) {
        let ke = k.elements();
        if ke.iter().any(|&a| ke.iter().any(|&b| !g.commute(a, b))) {
            continue;
        }
        any_abelian = true;
        let x = g.elements().find(|&e| !k.contains(e)).expect("index 2");
        match build_type_ii(g, &k, x) {
            Ok(c) => {
                let s = g.sylow(3).elements().to_vec();
                offer(VerdictKind::TypeII, Witness::TypeII { k: ke.to_vec(), sylow3: s, x }, c, &mut best);
            }
            Err(e) => notes.push(format!("type II: {e}")),
        }
    }
    if !any_abelian {
        notes.push("type II: no abelian subgroup of index 2".into());
    }
    match best {
        Some((kind, witness, c)) => ClassificationVerdict {
            kind,
            witness,
            constructed_alpha: Some(c.alpha),
            predicted_ratio: Some(c.predicted),
            notes,
        },
        None => ClassificationVerdict {
            kind: VerdictKind::None,
            witness: Witness::None,
            constructed_alpha: None,
            predicted_ratio: None,
            notes,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::*;

    #[test]
    fn type_i_examples() {
        assert_eq!(build_type_i(&cyclic(5).unwrap()).unwrap().measured, Rational::new(1, 1));
        assert_eq!(build_type_i(&cyclic(6).unwrap()).unwrap_err(), ConstructionError::OrderDivisibleBy3);
        assert_eq!(build_type_i(&cyclic(1).unwrap()).unwrap().measured, Rational::new(1, 1));
        assert_eq!(build_type_i(&symmetric(3).unwrap()).unwrap_err(), ConstructionError::NotAbelian);
    }

    #[test]
    fn type_ii_examples() {
        let s3 = symmetric(3).unwrap();
        let r = (1..6).find(|&e| s3.element_order(e) == 3).unwrap();
        let t = (1..6).find(|&e| s3.element_order(e) == 2).unwrap();
        let k = s3.subgroup_generated(&[r]);
        let c = build_type_ii(&s3, &k, t).unwrap();
        assert_eq!(c.measured, Rational::new(2, 3));
        // T = Kx ⊔ C_K(x)
        let mut expect: Vec<usize> = k.elements().iter().map(|&a| s3.mul(a, t)).collect();
        expect.push(0);
        expect.sort();
        assert_eq!(cube_members(&s3, &c.alpha, 3), expect);
        assert_eq!(build_type_ii(&s3, &k, r).unwrap_err(), ConstructionError::XInK);
        assert!(matches!(build_type_ii(&s3, &s3.subgroup_generated(&[t]), r), Err(ConstructionError::BadIndex { index: 3 })));

        let d5 = dihedral(5).unwrap();
        let rot = d5.subgroup_generated(&[1]);
        assert_eq!(build_type_ii(&d5, &rot, 5).unwrap().measured, Rational::new(3, 5));

        let d6 = dihedral(6).unwrap();
        let rot6 = d6.subgroup_generated(&[1]);
        assert!(build_type_ii(&d6, &rot6, 6).is_ok());
        let nonab = index_two_subgroups(&dihedral(8).unwrap())
            .into_iter()
            .find(|k| !k.elements().iter().all(|&a| k.elements().iter().all(|&b| dihedral(8).unwrap().commute(a, b))))
            .unwrap();
        assert_eq!(build_type_ii(&dihedral(8).unwrap(), &nonab, 1).unwrap_err(), ConstructionError::KNotAbelian);
    }

    #[test]
    fn sylow_condition_rejects() {
        // C3 x S3: the Sylow 3-subgroup meets the centre
        let g = direct_product(&cyclic(3).unwrap(), &symmetric(3).unwrap()).unwrap();
        let abelian_k = index_two_subgroups(&g).into_iter().next().unwrap();
        let x = g.elements().find(|&e| !abelian_k.contains(e)).unwrap();
        assert!(matches!(build_type_ii(&g, &abelian_k, x), Err(ConstructionError::SylowCondition(_))));
    }

    #[test]
    fn type_iii_examples() {
        for (g, ratio) in [
            (type3_group_i(1).unwrap(), Rational::new(3, 4)),
            (type3_group_i(2).unwrap(), Rational::new(5, 8)),
            (quaternion8(), Rational::new(3, 4)),
            (dihedral(4).unwrap(), Rational::new(3, 4)),
        ] {
            let d = find_type3_decomposition(&g).unwrap();
            assert_eq!(d.shape, Type3Shape::I);
            let c = build_type_iii(&g, &d.a_gens, &d.x_gens, d.shape).unwrap();
            assert_eq!(c.measured, ratio, "{:?}", g.name());
        }
        assert_eq!(find_type3_decomposition(&type3_group_i(2).unwrap()).unwrap().k(), 2);
        let t2 = type3_group_ii();
        let d = find_type3_decomposition(&t2).unwrap();
        assert_eq!(d.shape, Type3Shape::II);
        assert_eq!(build_type_iii(&t2, &d.a_gens, &d.x_gens, d.shape).unwrap().measured, Rational::new(9, 16));
        let e8 = direct_product(&cyclic(2).unwrap(), &direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap()).unwrap()).unwrap();
        assert!(find_type3_decomposition(&e8).is_err());
        assert_eq!(build_type_iii(&symmetric(3).unwrap(), &[1], &[2], Type3Shape::I).unwrap_err(), ConstructionError::NotClass2);
    }

    #[test]
    fn verdicts() {
        assert_eq!(classify_theorem31(&cyclic(5).unwrap()).kind, VerdictKind::TypeI);
        let s3 = classify_theorem31(&symmetric(3).unwrap());
        assert_eq!(s3.kind, VerdictKind::TypeII);
        assert_eq!(s3.predicted_ratio, Some(Rational::new(2, 3)));
        assert_eq!(classify_theorem31(&dihedral(4).unwrap()).kind, VerdictKind::TypeIIIi);
        assert_eq!(classify_theorem31(&quaternion8()).kind, VerdictKind::TypeIIIi);
        assert_eq!(classify_theorem31(&alternating(4).unwrap()).kind, VerdictKind::None);
        assert_eq!(classify_theorem31(&cyclic(6).unwrap()).kind, VerdictKind::None);
    }
}
