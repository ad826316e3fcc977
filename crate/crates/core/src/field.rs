//! Small finite fields.

use crate::group::GroupError;

/// `GF(q)` with elements `0..q` encoded as base-`p` coefficient vectors.
#[derive(Clone, Debug)]
pub struct FiniteField {
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    neg: Vec<usize>,
    primitive: usize,
}

fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut k = 0;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn digits(x: usize, p: usize, k: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(k);
    let mut x = x;
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(v: &[usize], p: usize) -> usize {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, GroupError> {
        let (p, k) = prime_power(q)
            .filter(|&(_, k)| k <= 3)
            .ok_or_else(|| GroupError::UnsupportedParameter(format!("{q} is not a small prime power")))?;
        // monic modulus x^k + c(x) with no root, irreducible for k <= 3
        let modulus: Vec<usize> = if k == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(k as u32))
                .map(|c| {
                    let mut m = digits(c, p, k);
                    m.push(1);
                    m
                })
                .find(|m| {
                    (0..p).all(|x| m.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) != 0)
                })
                .expect("an irreducible polynomial exists")
        };
        let polymul = |a: &[usize], b: &[usize]| -> Vec<usize> {
            let mut prod = vec![0usize; 2 * k];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for d in (k..2 * k).rev() {
                let c = prod[d];
                if c != 0 {
                    for (i, &m) in modulus.iter().enumerate() {
                        prod[d - k + i] = (prod[d - k + i] + (p - c) * m) % p;
                    }
                }
            }
            prod.truncate(k);
            prod
        };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p);
                mul[a * q + b] = undigits(&polymul(&da, &db), p);
            }
        }
        let inv: Vec<usize> = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[a * q + b] == 1).expect("field") })
            .collect();
        let neg: Vec<usize> = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("field")).collect();
        let primitive = (1..q)
            .find(|&g| {
                let mut x = g;
                let mut ord = 1;
                while x != 1 {
                    x = mul[x * q + g];
                    ord += 1;
                }
                ord == q - 1
            })
            .expect("multiplicative group is cyclic");
        Ok(FiniteField { q, add, mul, inv, neg, primitive })
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn primitive(&self) -> usize {
        self.primitive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 25, 27, 125] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn non_prime_powers_are_rejected() {
        for q in [0, 1, 6, 10, 12, 16] {
            assert!(FiniteField::new(q).is_err());
        }
    }
}
