//! Groups generated by permutations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, GroupError, MAX_ORDER};

/// Permutations of `0..degree` in image form; products apply left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationGenSet {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl PermutationGenSet {
    pub fn new(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let set = PermutationGenSet { degree, generators };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if self.degree == 0 {
            return Err(GroupError::UnsupportedParameter("degree 0".into()));
        }
        for (index, g) in self.generators.iter().enumerate() {
            if g.len() != self.degree {
                return Err(GroupError::InvalidPermutation {
                    index,
                    detail: format!("length {} but degree {}", g.len(), self.degree),
                });
            }
            let mut seen = vec![false; self.degree];
            for &p in g {
                if p >= self.degree || seen[p] {
                    return Err(GroupError::InvalidPermutation {
                        index,
                        detail: format!("point {p} is out of range or repeated"),
                    });
                }
                seen[p] = true;
            }
        }
        Ok(())
    }
}

/// Builds the Cayley table of `<gens>`, failing once more than `cap` elements appear.
pub fn from_permutation_generators(
    gens: &PermutationGenSet,
    cap: usize,
) -> Result<FiniteGroup, GroupError> {
    gens.validate()?;
    let cap = cap.min(MAX_ORDER);
    let d = gens.degree;
    let id: Vec<u32> = (0..d as u32).collect();
    let gs: Vec<Vec<u32>> =
        gens.generators.iter().map(|g| g.iter().map(|&p| p as u32).collect()).collect();
    let mut elements: Vec<Vec<u32>> = vec![id.clone()];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(id, 0)]);
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut rmul: Vec<Vec<usize>> = vec![Vec::new(); gs.len()];
    let mut i = 0;
    while i < elements.len() {
        for (gi, g) in gs.iter().enumerate() {
            let y: Vec<u32> = elements[i].iter().map(|&p| g[p as usize]).collect();
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    if j >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    index.insert(y.clone(), j);
                    elements.push(y);
                    parent.push((i, gi));
                    j
                }
            };
            rmul[gi].push(j);
        }
        i += 1;
    }
    let n = elements.len();
    let mut flat = vec![0u16; n * n];
    for a in 0..n {
        let row = &mut flat[a * n..(a + 1) * n];
        row[0] = a as u16;
        for b in 1..n {
            let (p, gi) = parent[b];
            row[b] = rmul[gi][row[p] as usize] as u16;
        }
    }
    FiniteGroup::from_flat(n, flat)
}
