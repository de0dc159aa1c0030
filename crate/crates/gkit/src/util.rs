//! Small shared utilities: union-find and canonical partitions.

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, x: usize, y: usize) {
        let mut xr = self.find(x);
        let mut yr = self.find(y);
        if xr == yr {
            return;
        }
        if self.size[xr] < self.size[yr] {
            std::mem::swap(&mut xr, &mut yr);
        }
        self.parent[yr] = xr;
        self.size[xr] += self.size[yr];
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Partition::from_block_ids(&roots)
    }
}

/// A partition of `0..n` into blocks, stored canonically: blocks are ordered
/// by their minimal element and each block lists its members in increasing
/// order. The representative of a block is its minimal element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds a partition from an arbitrary block-id assignment (two indices
    /// belong to the same block iff their ids are equal).
    pub fn from_block_ids(ids: &[usize]) -> Partition {
        let n = ids.len();
        let mut first_seen: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let bid = *first_seen.entry(ids[i]).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            block_of[i] = bid;
            blocks[bid].push(i);
        }
        Partition { blocks, block_of }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition::from_block_ids(&(0..n).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    /// Minimal element of each block, in block order.
    pub fn representatives(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b[0]).collect()
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of[i] == self.block_of[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_blocks() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 2);
        uf.union(2, 4);
        uf.union(1, 5);
        let p = uf.into_partition();
        assert_eq!(p.blocks(), &[vec![0, 2, 4], vec![1, 5], vec![3]]);
        assert_eq!(p.representatives(), vec![0, 1, 3]);
        assert!(p.same_block(0, 4));
        assert!(!p.same_block(0, 1));
    }

    #[test]
    fn partition_is_canonical_regardless_of_id_values() {
        let a = Partition::from_block_ids(&[7, 7, 3, 3, 9]);
        let b = Partition::from_block_ids(&[0, 0, 1, 1, 2]);
        assert_eq!(a, b);
    }

    #[test]
    fn empty_partition() {
        let p = Partition::from_block_ids(&[]);
        assert!(p.is_empty());
        assert_eq!(p.representatives(), Vec::<usize>::new());
    }
}
