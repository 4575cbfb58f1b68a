//! Permutations of state-variable positions.
//!
//! The puzzle and cube simulators store, for every piece, the position it
//! currently occupies. A move is a permutation `p` of positions and acts on a
//! state by `next[i] = p[state[i]]`, so a whole move sequence collapses into
//! one permutation that the simulator applies in a single step.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::state::Value;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation(Box<[Value]>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 256, "permutations are over at most 256 positions");
        Permutation((0..n).map(|i| i as Value).collect())
    }

    /// Builds a permutation from its image list, checking it is a bijection.
    pub fn from_images(images: Vec<Value>) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::Config(alloc::format!(
                    "image list is not a permutation of 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation(images.into_boxed_slice()))
    }

    /// Swaps positions `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[Value] {
        &self.0
    }

    #[inline]
    pub fn image(&self, position: usize) -> usize {
        self.0[position] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.len(), other.len());
        Permutation(self.0.iter().map(|&p| other.0[p as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0; self.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as Value;
        }
        Permutation(inv.into_boxed_slice())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// Number of positions not fixed by the permutation.
    pub fn moved_points(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i != p as usize)
            .count()
    }

    /// Moves every piece of `state` to its new position.
    #[inline]
    pub fn apply_into(&self, state: &[Value], next: &mut [Value]) {
        for (n, &s) in next.iter_mut().zip(state) {
            *n = self.0[s as usize];
        }
    }

    /// Composes a sequence left to right. `None` when the sequence is empty.
    pub fn compose<'a, I>(seq: I) -> Option<Permutation>
    where
        I: IntoIterator<Item = &'a Permutation>,
    {
        let mut it = seq.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, p| acc.then(p)))
    }

    /// Parity of the permutation (`true` when odd).
    pub fn is_odd(&self) -> bool {
        let mut seen = alloc::vec![false; self.len()];
        let mut transpositions = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cur = start;
            let mut cycle = 0;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.0[cur] as usize;
                cycle += 1;
            }
            transpositions += cycle - 1;
        }
        transpositions % 2 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u8).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(alloc::vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(alloc::vec![0, 3, 1]).is_err());
    }

    #[test]
    fn transposition_moves_two_points() {
        let t = Permutation::transposition(16, 3, 7);
        assert_eq!(t.moved_points(), 2);
        assert!(t.then(&t).is_identity());
        assert!(t.is_odd());
    }

    proptest! {
        #[test]
        fn composition_is_associative(a in perm_strategy(12), b in perm_strategy(12), c in perm_strategy(12)) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        }

        #[test]
        fn inverse_cancels(a in perm_strategy(20)) {
            prop_assert!(a.then(&a.inverse()).is_identity());
            prop_assert!(a.inverse().then(&a).is_identity());
            prop_assert_eq!(a.moved_points(), a.inverse().moved_points());
        }

        #[test]
        fn composed_application_matches_stepwise(
            a in perm_strategy(10), b in perm_strategy(10), s in perm_strategy(10),
        ) {
            let mut mid = alloc::vec![0; 10];
            let mut end = alloc::vec![0; 10];
            a.apply_into(s.images(), &mut mid);
            b.apply_into(&mid, &mut end);
            let mut once = alloc::vec![0; 10];
            Permutation::compose([&a, &b]).unwrap().apply_into(s.images(), &mut once);
            prop_assert_eq!(end, once);
        }
    }
}
