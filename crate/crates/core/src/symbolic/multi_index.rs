use smallvec::SmallVec;
use std::cmp::Ordering;

/// Symmetric multi-index: a non-decreasing sequence of base indices.
///
/// Two multi-indices are equal iff their sorted sequences coincide, so
/// `z_{21}` and `z_{12}` name the same coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(SmallVec<[u8; 4]>);

impl MultiIndex {
    pub fn new(entries: impl IntoIterator<Item = u8>) -> Self {
        let mut v: SmallVec<[u8; 4]> = entries.into_iter().collect();
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn empty() -> Self {
        MultiIndex(SmallVec::new())
    }

    pub fn single(i: u8) -> Self {
        let mut v = SmallVec::new();
        v.push(i);
        MultiIndex(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// `I ∪ {i}` as a multiset.
    pub fn with(&self, i: u8) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&e| e <= i);
        v.insert(pos, i);
        MultiIndex(v)
    }

    /// `I \ {i}`, removing a single occurrence.
    pub fn without(&self, i: u8) -> Option<Self> {
        let pos = self.0.iter().position(|&e| e == i)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    pub fn count(&self, i: u8) -> usize {
        self.0.iter().filter(|&&e| e == i).count()
    }

    pub fn max_entry(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `I ∪ J` as multisets.
    pub fn union(&self, other: &MultiIndex) -> Self {
        MultiIndex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// All non-decreasing sequences of length `k` over `1..=n`.
    pub fn all_of_order(n: u8, k: usize) -> Vec<MultiIndex> {
        fn rec(n: u8, k: usize, start: u8, cur: &mut SmallVec<[u8; 4]>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..=n {
                cur.push(i);
                rec(n, k, i, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 && k > 0 {
            return out;
        }
        rec(n, k, 1, &mut SmallVec::new(), &mut out);
        out
    }

    /// All multi-indices of order `0..=k`, by increasing order.
    pub fn up_to_order(n: u8, k: usize) -> Vec<MultiIndex> {
        (0..=k).flat_map(|j| Self::all_of_order(n, j)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<u8> for MultiIndex {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        MultiIndex::new(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_resorts() {
        let a = MultiIndex::new([2]).with(1);
        assert_eq!(a.entries(), &[1, 2]);
        assert_eq!(a, MultiIndex::new([2, 1]));
    }

    #[test]
    fn without_removes_one_occurrence() {
        let a = MultiIndex::new([1, 1, 2]);
        assert_eq!(a.without(1).unwrap().entries(), &[1, 2]);
        assert!(a.without(3).is_none());
    }

    #[test]
    fn enumeration_counts() {
        // C(n + k - 1, k)
        assert_eq!(MultiIndex::all_of_order(2, 2).len(), 3);
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_order(3, 3).len(), 10);
        assert_eq!(MultiIndex::all_of_order(3, 0), vec![MultiIndex::empty()]);
        assert_eq!(MultiIndex::up_to_order(2, 2).len(), 6);
    }

    #[test]
    fn ordering_groups_by_length() {
        assert!(MultiIndex::new([2]) < MultiIndex::new([1, 1]));
        assert!(MultiIndex::empty() < MultiIndex::new([1]));
    }
}
