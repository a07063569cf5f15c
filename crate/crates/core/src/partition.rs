//! Node partitions with named blocks.

use std::collections::{BTreeSet, HashMap};

use crate::graph::NodeId;

/// Assignment of every node to exactly one labelled block.
///
/// Blocks are numbered densely in order of first appearance, so two
/// partitions compare equal iff they assign the same label to every node.
/// Labels are strings: detectors produce `"0"`, `"1"`, ... while package
/// partitions carry package names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    names: Vec<String>,
}

impl Partition {
    /// Builds a partition from one label per node.
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut names = Vec::new();
        let block_of = labels
            .into_iter()
            .map(|label| {
                let label = label.as_ref();
                if let Some(&b) = index.get(label) {
                    return b;
                }
                let b = names.len();
                names.push(label.to_owned());
                index.insert(label.to_owned(), b);
                b
            })
            .collect();
        Partition { block_of, names }
    }

    /// Builds a partition from arbitrary integer block ids; blocks are
    /// renumbered densely and named by their new index.
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let block_of: Vec<usize> = assignment
            .iter()
            .map(|&a| {
                let next = remap.len();
                *remap.entry(a).or_insert(next)
            })
            .collect();
        let names = (0..remap.len()).map(|b| b.to_string()).collect();
        Partition { block_of, names }
    }

    /// Builds a partition from block ids and a name per id. Unused names are
    /// dropped and blocks renumbered by first appearance.
    ///
    /// Panics if a block id has no name or two used names coincide.
    pub(crate) fn from_named_assignment(assignment: &[usize], names: &[String]) -> Self {
        let mut remap: Vec<Option<usize>> = vec![None; names.len()];
        let mut used = Vec::new();
        let block_of = assignment
            .iter()
            .map(|&a| {
                *remap[a].get_or_insert_with(|| {
                    used.push(names[a].clone());
                    used.len() - 1
                })
            })
            .collect();
        let distinct: BTreeSet<&String> = used.iter().collect();
        assert_eq!(distinct.len(), used.len(), "duplicate block names");
        Partition { block_of, names: used }
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_assignment(&(0..n).collect::<Vec<_>>())
    }

    pub fn single_block(n: usize) -> Self {
        Partition::from_assignment(&vec![0; n])
    }

    /// Number of nodes covered.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.names.len()
    }

    /// Dense block index of `node`.
    pub fn block_of(&self, node: NodeId) -> usize {
        self.block_of[node]
    }

    /// Dense block index of every node.
    pub fn assignment(&self) -> &[usize] {
        &self.block_of
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.names[self.block_of[node]]
    }

    pub fn block_label(&self, block: usize) -> &str {
        &self.names[block]
    }

    /// Block labels in block order.
    pub fn block_labels(&self) -> &[String] {
        &self.names
    }

    /// Label of every node, in node order.
    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.block_of.iter().map(move |&b| self.names[b].as_str())
    }

    pub fn label_set(&self) -> BTreeSet<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    /// Node ids of each block, ascending within a block.
    pub fn blocks(&self) -> Vec<Vec<NodeId>> {
        let mut blocks = vec![Vec::new(); self.names.len()];
        for (node, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(node);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.names.len()];
        for &b in &self.block_of {
            sizes[b] += 1;
        }
        sizes
    }

    /// True when both partitions group the nodes identically, whatever the
    /// labels.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        // Dense first-appearance numbering makes the assignment canonical.
        self.block_of == other.block_of
    }

    /// Same grouping with blocks renamed `"0"`, `"1"`, ...
    pub fn relabeled(&self) -> Partition {
        Partition::from_assignment(&self.block_of)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_numbered_by_first_appearance() {
        let p = Partition::from_labels(["b", "a", "b", "c"]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.block_count(), 3);
        assert_eq!(p.label(2), "b");
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn relabeling_keeps_grouping() {
        let a = Partition::from_labels(["x", "y", "x"]);
        let b = Partition::from_assignment(&[7, 3, 7]);
        assert!(a.same_grouping(&b));
        assert_ne!(a, b);
        assert_eq!(a.relabeled(), b);
    }

    #[test]
    fn named_assignment_drops_unused_names() {
        let names: Vec<String> = ["p", "q", "r"].iter().map(|s| s.to_string()).collect();
        let p = Partition::from_named_assignment(&[2, 2, 0], &names);
        assert_eq!(p.labels().collect::<Vec<_>>(), vec!["r", "r", "p"]);
        assert_eq!(p.block_count(), 2);
    }

    #[test]
    fn empty_partition() {
        let p = Partition::singletons(0);
        assert!(p.is_empty());
        assert_eq!(p.block_count(), 0);
    }
}
