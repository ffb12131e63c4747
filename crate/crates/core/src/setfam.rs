//! Families of fixed-width bitmasks stored as binary tries, and the downward
//! closure enumeration used to turn KL conditions into Muller conditions.
//!
//! The branch taken at depth `d` is bit `d` of the mask (least significant bit
//! first). Every root-to-leaf path has length `width`; a mask is a member iff
//! its path exists. Interior nodes always lead to at least one leaf.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::mask::MASK_BITS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrieError {
    #[error("width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("mask {mask:#b} does not fit in {width} bits")]
    MaskTooWide { mask: u32, width: usize },
    #[error("bit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
}

type Link = u32;
const EMPTY: Link = u32::MAX;
const LEAF: Link = u32::MAX - 1;

#[derive(Clone)]
pub struct BitTrie {
    width: usize,
    root: Link,
    nodes: Vec<[Link; 2]>,
    len: usize,
}

impl BitTrie {
    pub fn new(width: usize) -> BitTrie {
        assert!(width <= MASK_BITS, "trie width {width} exceeds {MASK_BITS}");
        BitTrie {
            width,
            root: EMPTY,
            nodes: Vec::new(),
            len: 0,
        }
    }

    pub fn from_masks<I: IntoIterator<Item = u32>>(width: usize, masks: I) -> Result<BitTrie, TrieError> {
        let mut t = BitTrie::new(width);
        for m in masks {
            t.insert(m)?;
        }
        Ok(t)
    }

    /// All `2^width` masks.
    pub fn full(width: usize) -> BitTrie {
        let mut t = BitTrie::new(width);
        t.root = t.build_full(0);
        t.len = 1usize << width;
        t
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of interior nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn check(&self, mask: u32) -> Result<(), TrieError> {
        if self.width < MASK_BITS && mask >> self.width != 0 {
            Err(TrieError::MaskTooWide {
                mask,
                width: self.width,
            })
        } else {
            Ok(())
        }
    }

    fn check_width(&self, other: &BitTrie) -> Result<(), TrieError> {
        if self.width != other.width {
            Err(TrieError::WidthMismatch {
                expected: self.width,
                got: other.width,
            })
        } else {
            Ok(())
        }
    }

    fn push(&mut self, children: [Link; 2]) -> Link {
        let id = self.nodes.len() as Link;
        debug_assert!(id < LEAF);
        self.nodes.push(children);
        id
    }

    /// Adds `mask`; returns whether it was new.
    pub fn insert(&mut self, mask: u32) -> Result<bool, TrieError> {
        self.check(mask)?;
        if self.width == 0 {
            let fresh = self.root == EMPTY;
            self.root = LEAF;
            self.len += fresh as usize;
            return Ok(fresh);
        }
        if self.root == EMPTY {
            self.root = self.push([EMPTY, EMPTY]);
        }
        let mut node = self.root as usize;
        for d in 0..self.width {
            let b = (mask >> d & 1) as usize;
            let child = self.nodes[node][b];
            if d + 1 == self.width {
                if child == LEAF {
                    return Ok(false);
                }
                self.nodes[node][b] = LEAF;
                self.len += 1;
                return Ok(true);
            }
            node = if child == EMPTY {
                let c = self.push([EMPTY, EMPTY]);
                self.nodes[node][b] = c;
                c as usize
            } else {
                child as usize
            };
        }
        unreachable!()
    }

    #[inline]
    pub fn contains(&self, mask: u32) -> bool {
        if self.width < MASK_BITS && mask >> self.width != 0 {
            return false;
        }
        let mut link = self.root;
        for d in 0..self.width {
            if link == EMPTY {
                return false;
            }
            link = self.nodes[link as usize][(mask >> d & 1) as usize];
        }
        link == LEAF
    }

    /// Members in strictly increasing order.
    pub fn to_vec(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = vec![(self.root, 0usize, 0u32)];
        while let Some((link, depth, prefix)) = stack.pop() {
            if link == EMPTY {
                continue;
            }
            if depth == self.width {
                out.push(prefix);
                continue;
            }
            let [c0, c1] = self.nodes[link as usize];
            stack.push((c1, depth + 1, prefix | 1 << depth));
            stack.push((c0, depth + 1, prefix));
        }
        out.sort_unstable();
        out
    }

    pub fn iter(&self) -> std::vec::IntoIter<u32> {
        self.to_vec().into_iter()
    }

    pub fn union(&self, other: &BitTrie) -> Result<BitTrie, TrieError> {
        self.check_width(other)?;
        let mut out = BitTrie::new(self.width);
        out.root = out.merge(self, self.root, other, other.root, 0);
        out.len = out.count(out.root, 0);
        Ok(out)
    }

    /// Complement with respect to all `2^width` masks.
    pub fn complement(&self) -> BitTrie {
        let mut out = BitTrie::new(self.width);
        out.root = out.invert(self, self.root, 0);
        out.len = (1usize << self.width) - self.len;
        out
    }

    /// Keeps the members whose bit `index` is set.
    pub fn filter_bit_set(&self, index: usize) -> Result<BitTrie, TrieError> {
        if index >= self.width {
            return Err(TrieError::IndexOutOfRange {
                index,
                width: self.width,
            });
        }
        let mut out = BitTrie::new(self.width);
        out.root = out.filter(self, self.root, 0, index);
        out.len = out.count(out.root, 0);
        Ok(out)
    }

    fn count(&self, link: Link, depth: usize) -> usize {
        if link == EMPTY {
            0
        } else if depth == self.width {
            1
        } else {
            let [c0, c1] = self.nodes[link as usize];
            self.count(c0, depth + 1) + self.count(c1, depth + 1)
        }
    }

    fn build_full(&mut self, depth: usize) -> Link {
        if depth == self.width {
            return LEAF;
        }
        let c0 = self.build_full(depth + 1);
        let c1 = self.build_full(depth + 1);
        self.push([c0, c1])
    }

    fn copy_from(&mut self, src: &BitTrie, link: Link, depth: usize) -> Link {
        if link == EMPTY || depth == src.width {
            return link;
        }
        let [c0, c1] = src.nodes[link as usize];
        let c0 = self.copy_from(src, c0, depth + 1);
        let c1 = self.copy_from(src, c1, depth + 1);
        self.push([c0, c1])
    }

    fn merge(&mut self, a: &BitTrie, la: Link, b: &BitTrie, lb: Link, depth: usize) -> Link {
        if la == EMPTY {
            return self.copy_from(b, lb, depth);
        }
        if lb == EMPTY {
            return self.copy_from(a, la, depth);
        }
        if depth == self.width {
            return LEAF;
        }
        let [a0, a1] = a.nodes[la as usize];
        let [b0, b1] = b.nodes[lb as usize];
        let c0 = self.merge(a, a0, b, b0, depth + 1);
        let c1 = self.merge(a, a1, b, b1, depth + 1);
        self.push([c0, c1])
    }

    fn invert(&mut self, src: &BitTrie, link: Link, depth: usize) -> Link {
        if depth == self.width {
            return if link == LEAF { EMPTY } else { LEAF };
        }
        if link == EMPTY {
            return self.build_full(depth);
        }
        let [s0, s1] = src.nodes[link as usize];
        let c0 = self.invert(src, s0, depth + 1);
        let c1 = self.invert(src, s1, depth + 1);
        if c0 == EMPTY && c1 == EMPTY {
            EMPTY
        } else {
            self.push([c0, c1])
        }
    }

    fn filter(&mut self, src: &BitTrie, link: Link, depth: usize, index: usize) -> Link {
        if link == EMPTY || depth == self.width {
            return link;
        }
        let [s0, s1] = src.nodes[link as usize];
        let c0 = if depth == index {
            EMPTY
        } else {
            self.filter(src, s0, depth + 1, index)
        };
        let c1 = self.filter(src, s1, depth + 1, index);
        if c0 == EMPTY && c1 == EMPTY {
            EMPTY
        } else {
            self.push([c0, c1])
        }
    }
}

impl PartialEq for BitTrie {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.len == other.len && self.to_vec() == other.to_vec()
    }
}

impl Eq for BitTrie {}

impl fmt::Debug for BitTrie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.width;
        f.debug_set()
            .entries(self.to_vec().into_iter().map(|m| format!("{m:0w$b}")))
            .finish()
    }
}

/// Hash-consed trie nodes used while enumerating downward closures.
///
/// A node is identified by its two children; since no node has two empty
/// children, the remaining depth is implied by the structure, so equal keys
/// always denote equal sets.
struct SharedNodes {
    nodes: Vec<[Link; 2]>,
    index: HashMap<[Link; 2], Link>,
    unions: HashMap<(Link, Link), Link>,
    closures: HashMap<Link, Link>,
    visits: u64,
}

impl SharedNodes {
    fn new() -> Self {
        SharedNodes {
            nodes: Vec::new(),
            index: HashMap::new(),
            unions: HashMap::new(),
            closures: HashMap::new(),
            visits: 0,
        }
    }

    fn make(&mut self, children: [Link; 2]) -> Link {
        if children == [EMPTY, EMPTY] {
            return EMPTY;
        }
        if let Some(&id) = self.index.get(&children) {
            return id;
        }
        let id = self.nodes.len() as Link;
        self.nodes.push(children);
        self.index.insert(children, id);
        id
    }

    fn import(&mut self, t: &BitTrie, link: Link, depth: usize) -> Link {
        self.visits += 1;
        if link == EMPTY || depth == t.width {
            return link;
        }
        let [c0, c1] = t.nodes[link as usize];
        let c0 = self.import(t, c0, depth + 1);
        let c1 = self.import(t, c1, depth + 1);
        self.make([c0, c1])
    }

    fn export(&self, out: &mut BitTrie, link: Link, depth: usize, visits: &mut u64) -> Link {
        *visits += 1;
        if link == EMPTY || depth == out.width {
            return link;
        }
        let [c0, c1] = self.nodes[link as usize];
        let c0 = self.export(out, c0, depth + 1, visits);
        let c1 = self.export(out, c1, depth + 1, visits);
        out.push([c0, c1])
    }

    fn union(&mut self, a: Link, b: Link) -> Link {
        self.visits += 1;
        if a == EMPTY || a == b {
            return b;
        }
        if b == EMPTY {
            return a;
        }
        if a == LEAF || b == LEAF {
            debug_assert!(a == LEAF && b == LEAF);
            return LEAF;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&r) = self.unions.get(&key) {
            return r;
        }
        let [a0, a1] = self.nodes[a as usize];
        let [b0, b1] = self.nodes[b as usize];
        let c0 = self.union(a0, b0);
        let c1 = self.union(a1, b1);
        let r = self.make([c0, c1]);
        self.unions.insert(key, r);
        r
    }

    /// Downward closure of the family rooted at `link`: split on the lowest
    /// bit, members with the bit cleared come from every member (bit dropped),
    /// members with the bit set only from the members that had it set.
    fn closure(&mut self, link: Link) -> Link {
        self.visits += 1;
        if link == EMPTY || link == LEAF {
            return link;
        }
        if let Some(&r) = self.closures.get(&link) {
            return r;
        }
        let [s0, s1] = self.nodes[link as usize];
        let merged = self.union(s0, s1);
        let x0 = self.closure(merged);
        let x1 = self.closure(s1);
        let r = self.make([x0, x1]);
        self.closures.insert(link, r);
        r
    }
}

/// `{x : ∃ b ∈ family, x & b == x}`, together with the number of node visits
/// performed.
pub fn enumerate_downsets_counted(family: &BitTrie) -> (BitTrie, u64) {
    let mut shared = SharedNodes::new();
    let root = shared.import(family, family.root, 0);
    let closed = shared.closure(root);
    let mut out = BitTrie::new(family.width);
    let mut visits = shared.visits;
    out.root = shared.export(&mut out, closed, 0, &mut visits);
    out.len = out.count(out.root, 0);
    (out, visits)
}

/// `{x : ∃ b ∈ family, x & b == x}` over the family's width.
pub fn enumerate_downsets(family: &BitTrie) -> BitTrie {
    enumerate_downsets_counted(family).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_downsets(width: usize, family: &[u32]) -> Vec<u32> {
        (0..1u32 << width)
            .filter(|&x| family.iter().any(|&b| x & b == x))
            .collect()
    }

    #[test]
    fn insert_and_member() {
        let mut t = BitTrie::new(3);
        assert!(!t.contains(0b101));
        assert!(t.insert(0b101).unwrap());
        assert!(!t.insert(0b101).unwrap());
        assert!(t.contains(0b101));
        assert!(!t.contains(0b100));
        assert_eq!(t.len(), 1);
        assert_eq!(
            t.insert(0b1000),
            Err(TrieError::MaskTooWide {
                mask: 0b1000,
                width: 3
            })
        );
    }

    #[test]
    fn count_all_width_two() {
        let t = BitTrie::from_masks(2, [0b00, 0b01, 0b10, 0b11]).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t, BitTrie::full(2));
    }

    #[test]
    fn width_zero() {
        let mut t = BitTrie::new(0);
        assert!(!t.contains(0));
        t.insert(0).unwrap();
        assert!(t.contains(0));
        assert_eq!(t.to_vec(), vec![0]);
        assert!(t.complement().is_empty());
        assert_eq!(BitTrie::new(0).complement().to_vec(), vec![0]);
    }

    #[test]
    fn union_and_complement_laws() {
        let x = BitTrie::from_masks(3, [1, 4, 6]).unwrap();
        let e = BitTrie::new(3);
        assert_eq!(x.union(&e).unwrap(), x);
        assert_eq!(x.complement().complement(), x);
        let c = BitTrie::from_masks(2, [0b00, 0b11]).unwrap().complement();
        assert_eq!(c.to_vec(), vec![0b01, 0b10]);
        let u = BitTrie::from_masks(2, [0b01])
            .unwrap()
            .union(&BitTrie::from_masks(2, [0b10]).unwrap())
            .unwrap();
        assert_eq!(u.to_vec(), vec![0b01, 0b10]);
        assert!(matches!(
            x.union(&BitTrie::new(2)),
            Err(TrieError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn filter_examples() {
        let t = BitTrie::from_masks(2, [0b01, 0b10]).unwrap();
        assert_eq!(t.filter_bit_set(0).unwrap().to_vec(), vec![0b01]);
        assert_eq!(
            BitTrie::full(2).filter_bit_set(1).unwrap().to_vec(),
            vec![0b10, 0b11]
        );
        assert!(BitTrie::new(2).filter_bit_set(1).unwrap().is_empty());
        assert!(matches!(
            t.filter_bit_set(2),
            Err(TrieError::IndexOutOfRange { index: 2, width: 2 })
        ));
    }

    #[test]
    fn filter_prunes_dead_branches() {
        let t = BitTrie::from_masks(3, [0b000, 0b010]).unwrap();
        let f = t.filter_bit_set(0).unwrap();
        assert!(f.is_empty());
        assert_eq!(f.node_count(), 0);
    }

    #[test]
    fn downsets_base_cases() {
        assert!(enumerate_downsets(&BitTrie::new(4)).is_empty());
        let zero = BitTrie::from_masks(0, [0]).unwrap();
        assert_eq!(enumerate_downsets(&zero).to_vec(), vec![0]);
    }

    #[test]
    fn downsets_small_examples() {
        let s = BitTrie::from_masks(3, [0b101]).unwrap();
        let expected = brute_downsets(3, &[0b101]);
        assert_eq!(expected, vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(enumerate_downsets(&s).to_vec(), expected);

        let s = BitTrie::from_masks(3, [0b011, 0b100]).unwrap();
        let expected = brute_downsets(3, &[0b011, 0b100]);
        assert_eq!(expected, vec![0, 1, 2, 3, 4]);
        assert_eq!(enumerate_downsets(&s).to_vec(), expected);
    }

    #[test]
    fn downsets_of_full_family_is_full() {
        for w in 0..6 {
            assert_eq!(enumerate_downsets(&BitTrie::full(w)), BitTrie::full(w));
        }
    }
}
