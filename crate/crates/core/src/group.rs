//! Finite groups stored as validated Cayley tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Largest order any table in this crate may have.
pub const MAX_ORDER: usize = 5040;

/// Tables up to this order get an exhaustive associativity check by default.
pub const EXACT_ASSOC_LIMIT: usize = 200;

/// Triples sampled for the associativity check above [`EXACT_ASSOC_LIMIT`].
pub const ASSOC_SAMPLES: usize = 100_000;

const ASSOC_SEED: u64 = 0x5eed_a550c;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("NotClosed at ({row}, {col}): {detail}")]
    NotClosed { row: usize, col: usize, detail: String },
    #[error("no identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("order {order} exceeds the supported maximum {max}", max = MAX_ORDER)]
    TooLarge { order: usize },
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("invalid permutation generator {index}: {detail}")]
    InvalidPermutation { index: usize, detail: String },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("element {0} out of range")]
    OutOfRange(usize),
}

/// How much of the associativity law to check when importing a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AssocCheck {
    /// Exhaustive up to [`EXACT_ASSOC_LIMIT`], sampled above it.
    #[default]
    Auto,
    Full,
    Sampled(usize),
}

/// A finite group with identity `0`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u16>,
    inv: Vec<u16>,
    name: Option<String>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

/// Result of importing a raw table.
#[derive(Clone, Debug)]
pub struct TableImport {
    pub group: FiniteGroup,
    /// `relabeling[old] = new`, present when the identity was not at index 0.
    pub relabeling: Option<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates a table and relabels so that the identity is element 0.
    pub fn from_cayley_table(table: Vec<Vec<usize>>) -> Result<TableImport, GroupError> {
        Self::from_cayley_table_with(table, AssocCheck::Auto)
    }

    pub fn from_cayley_table_with(
        table: Vec<Vec<usize>>,
        check: AssocCheck,
    ) -> Result<TableImport, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge { order: n });
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, r) in table.iter().enumerate() {
            for (col, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::NotClosed {
                        row,
                        col,
                        detail: format!("entry {v} is not an element"),
                    });
                }
                flat.push(v as u16);
            }
        }
        Self::validate_flat(n, flat, check)
    }

    /// Builds a group from a flat row-major table, with full validation.
    pub(crate) fn from_flat(n: usize, flat: Vec<u16>) -> Result<FiniteGroup, GroupError> {
        let imported = Self::validate_flat(n, flat, AssocCheck::Auto)?;
        debug_assert!(imported.relabeling.is_none());
        Ok(imported.group)
    }

    fn validate_flat(n: usize, flat: Vec<u16>, check: AssocCheck) -> Result<TableImport, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge { order: n });
        }
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        let mut seen = vec![usize::MAX; n];
        for row in 0..n {
            for col in 0..n {
                let v = at(row, col);
                if seen[v] == row {
                    return Err(GroupError::NotClosed {
                        row,
                        col,
                        detail: format!("entry {v} repeats in row {row}"),
                    });
                }
                seen[v] = row;
            }
        }
        seen.fill(usize::MAX);
        for col in 0..n {
            for row in 0..n {
                let v = at(row, col);
                if seen[v] == col {
                    return Err(GroupError::NotClosed {
                        row,
                        col,
                        detail: format!("entry {v} repeats in column {col}"),
                    });
                }
                seen[v] = col;
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            let b = (0..n).find(|&b| at(a, b) == e).expect("latin row");
            if at(b, a) != e {
                return Err(GroupError::NoInverse { element: a });
            }
        }
        let (flat, relabeling) = if e == 0 {
            (flat, None)
        } else {
            let sigma: Vec<usize> = (0..n)
                .map(|x| if x == 0 { e } else if x == e { 0 } else { x })
                .collect();
            let mut out = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    out[sigma[a] * n + sigma[b]] = sigma[at(a, b)] as u16;
                }
            }
            (out, Some(sigma))
        };
        let mut inv = vec![0u16; n];
        for a in 0..n {
            let b = (0..n).find(|&b| flat[a * n + b] == 0).expect("inverse exists");
            inv[a] = b as u16;
        }
        let group = FiniteGroup { n, table: flat, inv, name: None };
        let samples = match check {
            AssocCheck::Full => None,
            AssocCheck::Auto if n <= EXACT_ASSOC_LIMIT => None,
            AssocCheck::Auto => Some(ASSOC_SAMPLES),
            AssocCheck::Sampled(s) => Some(s),
        };
        if let Some((a, b, c)) = group.associativity_failure(samples) {
            let back = |x: usize| relabeling.as_ref().map_or(x, |s| s[x]);
            return Err(GroupError::NotAssociative { a: back(a), b: back(b), c: back(c) });
        }
        Ok(TableImport { group, relabeling })
    }

    fn associativity_failure(&self, samples: Option<usize>) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let bad = |a, b, c| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        match samples {
            None => {
                for a in 1..n {
                    for b in 1..n {
                        let ab = self.mul(a, b);
                        for c in 1..n {
                            if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                                return Some((a, b, c));
                            }
                        }
                    }
                }
                None
            }
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(ASSOC_SEED);
                (0..s)
                    .map(|_| (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)))
                    .find(|&(a, b, c)| bad(a, b, c))
            }
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let mut base = if k < 0 { self.inverse(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inverse(ba), ab)
    }

    /// `x^-1 g x`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(self.inverse(x), g), x)
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.commute(a, b)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, a| num_integer::lcm(acc, self.element_order(a)))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn row(&self, a: usize) -> &[u16] {
        &self.table[a * self.n..(a + 1) * self.n]
    }

    /// SHA-256 of the row-major table, each entry as a little-endian u32.
    pub fn table_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u32).to_le_bytes());
        for &v in &self.table {
            h.update((v as u32).to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    pub(crate) fn check_element(&self, x: usize) -> Result<(), GroupError> {
        if x < self.n {
            Ok(())
        } else {
            Err(GroupError::OutOfRange(x))
        }
    }
}

/// A subgroup as a sorted list of elements of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.elements {
            m[x] = true;
        }
        m
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(self.elements.iter().copied().filter(|&x| other.contains(x)).collect())
    }
}

/// A right coset `Hg`, named by its least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub representative: usize,
    pub elements: Vec<usize>,
}
