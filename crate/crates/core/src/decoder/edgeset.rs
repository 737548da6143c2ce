use fixedbitset::FixedBitSet;

/// Subset of a graph's edges, indexed by canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    bits: FixedBitSet,
}

impl EdgeSet {
    pub fn empty(edge_count: usize) -> Self {
        EdgeSet {
            bits: FixedBitSet::with_capacity(edge_count),
        }
    }

    pub fn full(edge_count: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(edge_count);
        bits.insert_range(..);
        EdgeSet { bits }
    }

    /// Panics if an index is out of range.
    pub fn from_indices(edge_count: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(edge_count);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Set whose bit `i` is bit `i` of `mask`; requires `edge_count <= 64`.
    pub fn from_mask(edge_count: usize, mask: u64) -> Self {
        assert!(edge_count <= 64);
        Self::from_indices(edge_count, (0..edge_count).filter(|i| mask >> i & 1 == 1))
    }

    /// Number of edges in the host graph.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    /// Cardinality.
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.bits.len(), "edge {i} out of range");
        self.bits.insert(i);
    }

    pub fn toggle(&mut self, i: usize) {
        self.bits.toggle(i);
    }

    pub fn xor_with(&mut self, other: &EdgeSet) {
        self.bits.symmetric_difference_with(&other.bits);
    }

    pub fn intersection_len(&self, other: &EdgeSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn symmetric_difference_len(&self, other: &EdgeSet) -> usize {
        self.bits.symmetric_difference_count(&other.bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }
}
