//! Constructors for standard families.

use crate::field::FiniteField;
use crate::group::{FiniteGroup, GroupError, MAX_ORDER};
use crate::perm::{from_permutation_generators, PermutationGenSet};

fn unsupported(msg: impl Into<String>) -> GroupError {
    GroupError::UnsupportedParameter(msg.into())
}

fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > MAX_ORDER {
        return Err(unsupported(format!("order {n}")));
    }
    let mut flat = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            flat.push(f(a, b) as u16);
        }
    }
    FiniteGroup::from_flat(n, flat)
}

pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    Ok(from_fn(n, |a, b| (a + b) % n)?.with_name(format!("c{n}")))
}

/// Dihedral group of order `2n`; element `i + n*j` is `r^i s^j`.
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 3 {
        return Err(unsupported(format!("dihedral({n}) needs n >= 3")));
    }
    let g = from_fn(2 * n, |a, b| {
        let (i, j) = (a % n, a / n);
        let (k, l) = (b % n, b / n);
        // r^i s^j r^k s^l = r^(i +- k) s^(j+l)
        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        rot + n * ((j + l) % 2)
    })?;
    Ok(g.with_name(format!("d{n}")))
}

/// Dicyclic group of order `4n`: `<a, x | a^2n, x^2 = a^n, x^-1 a x = a^-1>`.
pub fn dicyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n < 2 {
        return Err(unsupported(format!("dicyclic({n}) needs n >= 2")));
    }
    let m = 2 * n;
    let g = from_fn(2 * m, |a, b| {
        let (i, j) = (a % m, a / m);
        let (k, l) = (b % m, b / m);
        let k = if j == 1 { (m - k) % m } else { k };
        if j == 1 && l == 1 {
            (i + k + n) % m
        } else {
            (i + k) % m + m * (j + l)
        }
    })?;
    Ok(g.with_name(if n == 2 { "q8".to_string() } else { format!("dic{n}") }))
}

pub fn quaternion8() -> FiniteGroup {
    dicyclic(2).expect("Q8 is valid")
}

pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 7 {
        return Err(unsupported(format!("symmetric({n}) is outside 1..=7")));
    }
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    let g = from_permutation_generators(&PermutationGenSet::new(n, gens)?, MAX_ORDER)?;
    Ok(g.with_name(format!("s{n}")))
}

pub fn alternating(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || n > 7 {
        return Err(unsupported(format!("alternating({n}) is outside 1..=7")));
    }
    let gens: Vec<Vec<usize>> = (2..n.max(2))
        .map(|i| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = i;
            p[i] = 0;
            p
        })
        .collect();
    let g = from_permutation_generators(&PermutationGenSet::new(n, gens)?, MAX_ORDER)?;
    Ok(g.with_name(format!("a{n}")))
}

/// `G x H` with element `g * |H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    let m = h.order();
    let prod = from_fn(g.order() * m, |a, b| {
        g.mul(a / m, b / m) * m + h.mul(a % m, b % m)
    })?;
    Ok(match (g.name(), h.name()) {
        (Some(x), Some(y)) => prod.with_name(format!("{x}x{y}")),
        _ => prod,
    })
}

/// `N ⋊ H` with element `n * |H| + h` and `(n1,h1)(n2,h2) = (n1 φ_h1(n2), h1 h2)`.
///
/// `action[h][x]` is `φ_h(x)`; it must be a homomorphism `H -> Aut(N)`.
pub fn semidirect_product(
    n: &FiniteGroup,
    h: &FiniteGroup,
    action: &[Vec<usize>],
) -> Result<FiniteGroup, GroupError> {
    let (nn, nh) = (n.order(), h.order());
    if action.len() != nh || action.iter().any(|a| a.len() != nn) {
        return Err(unsupported("action has the wrong shape"));
    }
    for (k, phi) in action.iter().enumerate() {
        let mut seen = vec![false; nn];
        for &y in phi {
            if y >= nn || seen[y] {
                return Err(unsupported(format!("action of {k} is not a bijection")));
            }
            seen[y] = true;
        }
        for a in 0..nn {
            for b in 0..nn {
                if phi[n.mul(a, b)] != n.mul(phi[a], phi[b]) {
                    return Err(unsupported(format!("action of {k} is not an automorphism")));
                }
            }
        }
    }
    if (0..nn).any(|x| action[0][x] != x) {
        return Err(unsupported("identity must act trivially"));
    }
    for h1 in 0..nh {
        for h2 in 0..nh {
            let p = h.mul(h1, h2);
            if (0..nn).any(|x| action[p][x] != action[h1][action[h2][x]]) {
                return Err(unsupported("action is not a homomorphism"));
            }
        }
    }
    from_fn(nn * nh, |a, b| {
        let (n1, h1) = (a / nh, a % nh);
        let (n2, h2) = (b / nh, b % nh);
        n.mul(n1, action[h1][n2]) * nh + h.mul(h1, h2)
    })
}

/// `C_n ⋊ C_m` where the generator of `C_m` acts as multiplication by `r`.
pub fn cyclic_semidirect(n: usize, m: usize, r: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 || m == 0 || num_integer::gcd(r, n) != 1 {
        return Err(unsupported(format!("c{n}:c{m}:{r} needs r a unit mod n")));
    }
    let mut pw = 1 % n;
    let mut action = Vec::with_capacity(m);
    for _ in 0..m {
        action.push((0..n).map(|x| x * pw % n).collect::<Vec<_>>());
        pw = pw * r % n;
    }
    if pw != 1 % n {
        return Err(unsupported(format!("{r}^{m} is not 1 mod {n}")));
    }
    let g = semidirect_product(&cyclic(n)?, &cyclic(m)?, &action)?;
    Ok(g.with_name(format!("c{n}:c{m}:{r}")))
}

/// Heisenberg group of order `p^3` as `(C_p x C_p) ⋊ C_p`.
pub fn heisenberg(p: usize) -> Result<FiniteGroup, GroupError> {
    if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
        return Err(unsupported(format!("heisenberg({p}) needs a prime")));
    }
    let base = direct_product(&cyclic(p)?, &cyclic(p)?)?;
    let action: Vec<Vec<usize>> = (0..p)
        .map(|k| (0..p * p).map(|e| ((e / p + k * (e % p)) % p) * p + e % p).collect())
        .collect();
    let g = semidirect_product(&base, &cyclic(p)?, &action)?;
    Ok(g.with_name(format!("heis{p}")))
}

fn projective_action(f: &FiniteField, m: [usize; 4]) -> Vec<usize> {
    let q = f.size();
    let [a, b, c, d] = m;
    (0..=q)
        .map(|x| {
            if x == q {
                if c == 0 { q } else { f.mul(a, f.inv(c)) }
            } else {
                let num = f.add(f.mul(a, x), b);
                let den = f.add(f.mul(c, x), d);
                if den == 0 { q } else { f.mul(num, f.inv(den)) }
            }
        })
        .collect()
}

fn check_q(q: usize) -> Result<FiniteField, GroupError> {
    if q > 13 {
        return Err(unsupported(format!("q = {q} exceeds 13")));
    }
    FiniteField::new(q)
}

/// `PSL(2, q)` acting on the `q + 1` points of the projective line.
pub fn psl2(q: usize) -> Result<FiniteGroup, GroupError> {
    let f = check_q(q)?;
    let l = f.primitive();
    let gens = vec![
        projective_action(&f, [1, 1, 0, 1]),
        projective_action(&f, [f.mul(l, l), 0, 0, 1]),
        projective_action(&f, [0, f.neg(1), 1, 0]),
    ];
    let g = from_permutation_generators(&PermutationGenSet::new(q + 1, gens)?, MAX_ORDER)?;
    Ok(g.with_name(format!("psl2_{q}")))
}

/// `PGL(2, q)` acting on the `q + 1` points of the projective line.
pub fn pgl2(q: usize) -> Result<FiniteGroup, GroupError> {
    let f = check_q(q)?;
    let gens = vec![
        projective_action(&f, [1, 1, 0, 1]),
        projective_action(&f, [f.primitive(), 0, 0, 1]),
        projective_action(&f, [0, 1, 1, 0]),
    ];
    let g = from_permutation_generators(&PermutationGenSet::new(q + 1, gens)?, MAX_ORDER)?;
    Ok(g.with_name(format!("pgl2_{q}")))
}

/// `SL(2, p)` for a prime `p`, acting on the nonzero vectors of `F_p^2`.
pub fn sl2(p: usize) -> Result<FiniteGroup, GroupError> {
    if !(2..=13).contains(&p) || (2..p).any(|d| p.is_multiple_of(d)) {
        return Err(unsupported(format!("sl2({p}) needs a prime up to 13")));
    }
    let idx = |x: usize, y: usize| x * p + y - 1;
    let act = |m: [usize; 4]| -> Vec<usize> {
        (1..p * p)
            .map(|v| {
                let (x, y) = (v / p, v % p);
                idx((m[0] * x + m[1] * y) % p, (m[2] * x + m[3] * y) % p)
            })
            .collect()
    };
    let gens = vec![act([1, 1, 0, 1]), act([1, 0, 1, 1])];
    let g = from_permutation_generators(&PermutationGenSet::new(p * p - 1, gens)?, MAX_ORDER)?;
    Ok(g.with_name(format!("sl2_{p}")))
}

fn dot(a: usize, b: usize) -> usize {
    (a & b).count_ones() as usize % 2
}

/// Order `2^(2k+1)`: triples `(v, w, z)` with `(v,w,z)(v',w',z') = (v+v', w+w', z + w.v')`.
///
/// Element index is `z + 2 (w + 2^k v)`.
pub fn type3_group_i(k: usize) -> Result<FiniteGroup, GroupError> {
    if k == 0 || 2 * k + 1 > 12 {
        return Err(unsupported(format!("type3_group_i({k}) needs 1 <= k <= 5")));
    }
    let s = 1usize << k;
    let split = |e: usize| (e / 2 / s, (e / 2) % s, e % 2);
    let g = from_fn(2 * s * s, |a, b| {
        let (v, w, z) = split(a);
        let (v2, w2, z2) = split(b);
        (z ^ z2 ^ dot(w, v2)) + 2 * ((w ^ w2) + s * (v ^ v2))
    })?;
    Ok(g.with_name(format!("t3i_{k}")))
}

/// Order 64: `(v, w, z)` in `F_2^2 x F_2^2 x F_2^2` with the split pairing `(w_1 v'_1, w_2 v'_2)`.
///
/// Element index is `z + 4 (w + 4 v)`.
pub fn type3_group_ii() -> FiniteGroup {
    let split = |e: usize| (e / 16, (e / 4) % 4, e % 4);
    from_fn(64, |a, b| {
        let (v, w, z) = split(a);
        let (v2, w2, z2) = split(b);
        (z ^ z2 ^ (w & v2)) + 4 * ((w ^ w2) + 4 * (v ^ v2))
    })
    .expect("valid construction")
    .with_name("t3ii")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_orders() {
        assert_eq!(cyclic(1).unwrap().order(), 1);
        assert_eq!(dihedral(5).unwrap().order(), 10);
        assert_eq!(dicyclic(3).unwrap().order(), 12);
        assert_eq!(symmetric(5).unwrap().order(), 120);
        assert_eq!(alternating(6).unwrap().order(), 360);
        assert_eq!(alternating(2).unwrap().order(), 1);
        assert_eq!(sl2(3).unwrap().order(), 24);
        assert_eq!(heisenberg(3).unwrap().order(), 27);
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13] {
            let d = if q % 2 == 1 { 2 } else { 1 };
            assert_eq!(psl2(q).unwrap().order(), q * (q * q - 1) / d, "psl2({q})");
            assert_eq!(pgl2(q).unwrap().order(), q * (q * q - 1), "pgl2({q})");
        }
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(matches!(symmetric(8), Err(GroupError::UnsupportedParameter(_))));
        assert!(dihedral(2).is_err());
        assert!(psl2(6).is_err());
        assert!(psl2(16).is_err());
        assert!(cyclic(0).is_err());
        assert!(cyclic_semidirect(7, 3, 3).is_err());
        assert!(type3_group_i(0).is_err());
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion8();
        assert_eq!((1..8).filter(|&x| q.element_order(x) == 2).count(), 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn dihedral_relations() {
        let d = dihedral(7).unwrap();
        let (r, s) = (1, 7);
        assert_eq!(d.element_order(r), 7);
        assert_eq!(d.element_order(s), 2);
        assert_eq!(d.conjugate(r, s), d.inverse(r));
    }
}
