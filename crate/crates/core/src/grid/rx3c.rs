//! Exact covers of 3-regular 3-uniform set systems as Holant instances.
//!
//! Element vertices sit on the LHS and carry `f`; set vertices sit on the
//! RHS and carry `=3`. An edge of value 1 means the set is chosen, so with
//! `f = [0,1,0,0]` every element lies in exactly one chosen set.

use std::collections::BTreeMap;

use super::{GridError, SignatureGrid};
use crate::arith::Rat;
use crate::grid::gadgets::equality_tensor;
use crate::sig::SymSig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    pub ground: Vec<i64>,
    pub sets: Vec<[i64; 3]>,
}

impl SetSystem {
    pub fn new(ground: Vec<i64>, sets: Vec<[i64; 3]>) -> Self {
        Self { ground, sets }
    }

    /// Position of each element in `ground`.
    fn index(&self) -> BTreeMap<i64, usize> {
        self.ground.iter().enumerate().map(|(i, &x)| (x, i)).collect()
    }

    /// Checks that sets are 3-element subsets of the ground set and every
    /// element occurs in exactly three sets.
    pub fn validate(&self) -> Result<(), GridError> {
        self.validate_incidence(true)
    }

    /// As [`validate`](Self::validate), optionally allowing an element to
    /// occur more than once inside a set (hyperedge multi-incidence).
    pub fn validate_incidence(&self, distinct: bool) -> Result<(), GridError> {
        let idx = self.index();
        if idx.len() != self.ground.len() {
            return Err(GridError::InvalidSet { index: usize::MAX });
        }
        let mut count = vec![0usize; self.ground.len()];
        for (i, s) in self.sets.iter().enumerate() {
            if distinct && (s[0] == s[1] || s[1] == s[2] || s[0] == s[2]) {
                return Err(GridError::InvalidSet { index: i });
            }
            for x in s {
                let &j = idx.get(x).ok_or(GridError::InvalidSet { index: i })?;
                count[j] += 1;
            }
        }
        if let Some(j) = count.iter().position(|&c| c != 3) {
            return Err(GridError::NotThreeRegular {
                element: self.ground[j],
                count: count[j],
            });
        }
        Ok(())
    }

    /// Incidence grid: vertex `i < |ground|` is element `ground[i]` (LHS,
    /// signature `f`), vertex `|ground| + j` is set `j` (RHS, `=3`). Set
    /// `j`'s slot `p` is wired to its `p`-th member.
    pub fn to_grid(&self, f: &SymSig) -> Result<SignatureGrid, GridError> {
        self.to_grid_with(f, true)
    }

    pub(crate) fn to_grid_with(&self, f: &SymSig, distinct: bool) -> Result<SignatureGrid, GridError> {
        self.validate_incidence(distinct)?;
        let idx = self.index();
        let mut g = SignatureGrid::new();
        for _ in &self.ground {
            g.add_left(f.to_tensor());
        }
        let mut fill = vec![0usize; self.ground.len()];
        for s in &self.sets {
            let v = g.add_right(equality_tensor(3));
            for (p, x) in s.iter().enumerate() {
                let u = idx[x];
                g.link(u, fill[u], v, p);
                fill[u] += 1;
            }
        }
        Ok(g)
    }
}

/// Incidence grid with `f` on elements and `=3` on sets.
pub fn rx3c_to_grid(system: &SetSystem, f: &SymSig) -> Result<SignatureGrid, GridError> {
    system.to_grid(f)
}

/// Number of exact covers, as the Holant value with `f = [0,1,0,0]`.
pub fn count_exact_covers(system: &SetSystem) -> Result<Rat, GridError> {
    rx3c_to_grid(system, &SymSig::from_ints(&[0, 1, 0, 0]))?.holant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exact covers by direct subset enumeration.
    fn brute_covers(s: &SetSystem) -> u64 {
        let mut n = 0;
        for mask in 0u32..1 << s.sets.len() {
            let mut hits: BTreeMap<i64, usize> = BTreeMap::new();
            for (j, set) in s.sets.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    for x in set {
                        *hits.entry(*x).or_default() += 1;
                    }
                }
            }
            if s.ground.iter().all(|x| hits.get(x) == Some(&1)) {
                n += 1;
            }
        }
        n
    }

    fn random_system(rng: &mut ChaCha8Rng, n: usize) -> SetSystem {
        // n elements, each in 3 sets, n sets of size 3; retry until the
        // shuffled point list splits into sets with distinct members
        loop {
            let mut pts: Vec<i64> = (0..n as i64).flat_map(|x| [x, x, x]).collect();
            pts.shuffle(rng);
            let sets: Vec<[i64; 3]> = pts.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
            let s = SetSystem::new((0..n as i64).collect(), sets);
            if s.validate().is_ok() {
                return s;
            }
        }
    }

    #[test]
    fn triple_copy_of_one_set() {
        let s = SetSystem::new(vec![1, 2, 3], vec![[1, 2, 3]; 3]);
        assert_eq!(count_exact_covers(&s).unwrap(), int(3));
    }

    #[test]
    fn two_blocks_in_triplicate() {
        let s = SetSystem::new(
            (1..=6).collect(),
            vec![[1, 2, 3], [4, 5, 6], [1, 2, 3], [4, 5, 6], [1, 2, 3], [4, 5, 6]],
        );
        assert_eq!(count_exact_covers(&s).unwrap(), int(9));
    }

    #[test]
    fn rejects_irregular_systems() {
        let s = SetSystem::new(vec![1, 2, 3, 4], vec![[1, 2, 3], [1, 2, 4], [1, 3, 4]]);
        assert!(matches!(
            count_exact_covers(&s),
            Err(GridError::NotThreeRegular { .. })
        ));
        let bad = SetSystem::new(vec![1, 2, 3], vec![[1, 2, 9]; 3]);
        assert!(matches!(bad.validate(), Err(GridError::InvalidSet { index: 0 })));
    }

    #[test]
    fn matches_enumeration_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 6, 6, 6] {
            for _ in 0..5 {
                let s = random_system(&mut rng, n);
                assert_eq!(
                    count_exact_covers(&s).unwrap(),
                    int(brute_covers(&s) as i64),
                    "{s:?}"
                );
            }
        }
    }

    #[test]
    fn opposite_orientation_counts_something_else() {
        // f on sets and =3 on elements would count sets-with-one-chosen-member
        // configurations; find a system where that differs from the covers.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = SymSig::from_ints(&[0, 1, 0, 0]);
        let differs = (0..20).any(|_| {
            let s = random_system(&mut rng, 6);
            let mut g = SignatureGrid::new();
            let idx = s.index();
            for _ in &s.sets {
                g.add_left(f.to_tensor());
            }
            let eqs: Vec<usize> = s.ground.iter().map(|_| g.add_right(equality_tensor(3))).collect();
            let mut fill = vec![0usize; s.ground.len()];
            for (j, set) in s.sets.iter().enumerate() {
                for (p, x) in set.iter().enumerate() {
                    let e = idx[x];
                    g.link(j, p, eqs[e], fill[e]);
                    fill[e] += 1;
                }
            }
            g.holant().unwrap() != int(brute_covers(&s) as i64)
        });
        assert!(differs);
    }
}
