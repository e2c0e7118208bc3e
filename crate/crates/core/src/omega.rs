//! Direct enumeration of the omega set: all half sums of non-compact
//! positive roots, one per positive system containing the compact one.
//!
//! An element `(k_1,...,k_p | r_1,...,r_q)` is determined by its head: the
//! tail counts `r_j = #{i : q - k_i >= j}`, equivalently it is the
//! concatenation of constant blocks `p-j+1` of length `k_{j-1} - k_j` (with
//! the conventions `k_0 = q`, `k_{p+1} = 0`). Elements are indexed in
//! descending lexicographic order, so index 0 is `(q,...,q | 0,...,0)` and
//! the last index is `(0,...,0 | p,...,p)`. The table for a shape is built
//! once and cached; spin-norm scans iterate it wholesale.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::weights::{BlockVector, GroupShape};
use crate::{Error, Result};

/// One element of the omega set together with its lexicographic index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaElement {
    index: usize,
    vector: BlockVector,
}

impl OmegaElement {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn shape(&self) -> GroupShape {
        self.vector.shape()
    }

    pub fn vector(&self) -> &BlockVector {
        &self.vector
    }

    pub fn head(&self) -> &[i64] {
        self.vector.head()
    }

    pub fn tail(&self) -> &[i64] {
        self.vector.tail()
    }

    /// Head coordinate with the boundary conventions `k_0 = q` and
    /// `k_{p+1} = 0`; j is 1-based.
    pub fn k(&self, j: usize) -> i64 {
        let p = self.shape().p();
        if j == 0 {
            self.shape().q() as i64
        } else if j <= p {
            self.head()[j - 1]
        } else {
            0
        }
    }
}

impl fmt::Display for OmegaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.index, self.vector)
    }
}

fn check_head(shape: GroupShape, head: &[i64]) -> Result<()> {
    if head.len() != shape.p() {
        return Err(Error::BadOmegaHead(format!(
            "expected {} entries, got {}",
            shape.p(),
            head.len()
        )));
    }
    if !head.windows(2).all(|w| w[0] >= w[1]) {
        return Err(Error::BadOmegaHead(format!(
            "{head:?} is not weakly decreasing"
        )));
    }
    if head.iter().any(|&x| x < 0 || x > shape.q() as i64) {
        return Err(Error::BadOmegaHead(format!(
            "{head:?} has entries outside 0..={}",
            shape.q()
        )));
    }
    Ok(())
}

/// The unique tail completing a head to an omega element, by the counting
/// formula; the block-concatenation construction is cross-checked in debug
/// builds.
pub fn tail_from_head(shape: GroupShape, head: &[i64]) -> Result<Vec<i64>> {
    check_head(shape, head)?;
    let q = shape.q() as i64;
    let mut tail = vec![0i64; shape.q()];
    for (j, t) in tail.iter_mut().enumerate() {
        let j = (j + 1) as i64;
        *t = head.iter().filter(|&&k| q - k >= j).count() as i64;
    }
    debug_assert_eq!(tail, tail_by_blocks(shape, head));
    Ok(tail)
}

/// Tail as the concatenation of constant blocks `p-j+1` of length
/// `k_{j-1} - k_j`.
fn tail_by_blocks(shape: GroupShape, head: &[i64]) -> Vec<i64> {
    let p = shape.p() as i64;
    let mut tail = Vec::with_capacity(shape.q());
    let k = |j: usize| -> i64 {
        if j == 0 {
            shape.q() as i64
        } else if j <= shape.p() {
            head[j - 1]
        } else {
            0
        }
    };
    for j in 1..=(shape.p() + 1) {
        let len = k(j - 1) - k(j);
        for _ in 0..len {
            tail.push(p - j as i64 + 1);
        }
    }
    tail
}

/// The head recovered from a tail, via partition conjugation:
/// `k_i = q - #{j : r_j >= p + 1 - i}`.
pub fn head_from_tail(shape: GroupShape, tail: &[i64]) -> Result<Vec<i64>> {
    if tail.len() != shape.q() {
        return Err(Error::BadOmegaHead(format!(
            "expected {} tail entries, got {}",
            shape.q(),
            tail.len()
        )));
    }
    let (p, q) = (shape.p() as i64, shape.q() as i64);
    let mut head = vec![0i64; shape.p()];
    for (i, h) in head.iter_mut().enumerate() {
        let level = p - i as i64; // p + 1 - (i+1)
        *h = q - tail.iter().filter(|&&r| r >= level).count() as i64;
    }
    Ok(head)
}

/// The complete omega table for one shape, in descending lexicographic
/// order.
#[derive(Debug, PartialEq, Eq)]
pub struct OmegaTable {
    shape: GroupShape,
    elements: Vec<OmegaElement>,
}

impl OmegaTable {
    fn build(shape: GroupShape) -> OmegaTable {
        let mut heads = Vec::new();
        let mut prefix = Vec::with_capacity(shape.p());
        gen_heads(shape.q() as i64, shape.p(), &mut prefix, &mut heads);
        let elements = heads
            .into_iter()
            .enumerate()
            .map(|(index, head)| {
                let tail = tail_from_head(shape, &head).expect("generated head is valid");
                let vector = BlockVector::from_flat_unchecked(shape, [head, tail].concat());
                OmegaElement { index, vector }
            })
            .collect();
        OmegaTable { shape, elements }
    }

    pub fn shape(&self) -> GroupShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<&OmegaElement> {
        self.elements.get(index).ok_or(Error::IndexOutOfRange {
            index,
            size: self.elements.len(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &OmegaElement> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &[OmegaElement] {
        &self.elements
    }

    /// Index of the element with the given head, if it is one. Binary search
    /// over the (descending) table.
    pub fn index_of(&self, head: &[i64]) -> Option<usize> {
        if check_head(self.shape, head).is_err() {
            return None;
        }
        // The table is descending, so probe comparisons are reversed.
        self.elements
            .binary_search_by(|e| head.cmp(e.head()))
            .ok()
    }

    /// Element with the given tail, if any, via conjugation back to a head.
    pub fn index_of_tail(&self, tail: &[i64]) -> Option<usize> {
        let head = head_from_tail(self.shape, tail).ok()?;
        let index = self.index_of(&head)?;
        if self.elements[index].tail() == tail {
            Some(index)
        } else {
            None
        }
    }

    /// The move lowering head coordinate j (1-based) by one and raising the
    /// tail at position `q - k_j + 1` by one; lands on a lexicographically
    /// later element. Requires a strict drop `k_j > k_{j+1}`.
    pub fn descent(&self, elem: &OmegaElement, j: usize) -> Result<OmegaElement> {
        assert_eq!(elem.shape(), self.shape, "element from another table");
        assert!(j >= 1 && j <= self.shape.p(), "head position out of range");
        let kj = elem.k(j);
        if kj <= elem.k(j + 1) {
            return Err(Error::DescentBlocked { j });
        }
        let mut head = elem.head().to_vec();
        head[j - 1] -= 1;
        let mut tail = elem.tail().to_vec();
        let t = (self.shape.q() as i64 - kj) as usize; // 0-based q - k_j + 1
        tail[t] += 1;
        let index = self
            .index_of(&head)
            .expect("descent target stays in the table");
        let target = &self.elements[index];
        assert_eq!(target.tail(), tail, "descent tail must match the table");
        assert!(index > elem.index(), "descent moves lexicographically later");
        Ok(target.clone())
    }
}

fn gen_heads(max: i64, remaining: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    for v in (0..=max).rev() {
        prefix.push(v);
        gen_heads(v, remaining - 1, prefix, out);
        prefix.pop();
    }
}

static TABLE_CACHE: OnceLock<Mutex<HashMap<GroupShape, Arc<OmegaTable>>>> = OnceLock::new();

/// The cached table for a shape; built on first request, immutable after.
pub fn omega_table(shape: GroupShape) -> Arc<OmegaTable> {
    let cache = TABLE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(shape)
        .or_insert_with(|| Arc::new(OmegaTable::build(shape)))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: usize, q: usize) -> GroupShape {
        GroupShape::new(p, q).unwrap()
    }

    #[test]
    fn tail_examples() {
        assert_eq!(
            tail_from_head(shape(4, 6), &[5, 2, 2, 1]).unwrap(),
            vec![4, 3, 3, 3, 1, 0]
        );
        assert_eq!(
            tail_from_head(shape(3, 5), &[5, 5, 5]).unwrap(),
            vec![0, 0, 0, 0, 0]
        );
        assert_eq!(
            tail_from_head(shape(3, 5), &[4, 0, 0]).unwrap(),
            vec![3, 2, 2, 2, 2]
        );
    }

    #[test]
    fn tail_rejects_bad_heads() {
        assert!(tail_from_head(shape(2, 3), &[1, 2]).is_err());
        assert!(tail_from_head(shape(2, 3), &[4, 0]).is_err());
        assert!(tail_from_head(shape(2, 3), &[2, -1]).is_err());
        assert!(tail_from_head(shape(2, 3), &[2]).is_err());
    }

    #[test]
    fn head_tail_conjugation_roundtrip() {
        let table = omega_table(shape(3, 4));
        for e in table.iter() {
            assert_eq!(head_from_tail(shape(3, 4), e.tail()).unwrap(), e.head());
        }
    }

    #[test]
    fn enumeration_anchors() {
        let table = omega_table(shape(1, 1));
        assert_eq!(table.len(), 2);
        assert_eq!(table.get(0).unwrap().vector().flat(), &[1, 0]);
        assert_eq!(table.get(1).unwrap().vector().flat(), &[0, 1]);

        let table = omega_table(shape(3, 5));
        assert_eq!(table.len(), 56);
        assert_eq!(table.get(0).unwrap().head(), &[5, 5, 5]);
        assert_eq!(table.get(0).unwrap().tail(), &[0; 5]);
        assert_eq!(table.get(35).unwrap().head(), &[4, 0, 0]);
        assert_eq!(table.get(35).unwrap().tail(), &[3, 2, 2, 2, 2]);
        assert_eq!(table.get(55).unwrap().head(), &[0, 0, 0]);
        assert_eq!(table.get(55).unwrap().tail(), &[3; 5]);
        assert!(table.get(56).is_err());
    }

    #[test]
    fn index_lookup() {
        let table = omega_table(shape(3, 5));
        assert_eq!(table.index_of(&[4, 0, 0]), Some(35));
        assert_eq!(table.index_of(&[5, 5, 5]), Some(0));
        let table = omega_table(shape(2, 2));
        assert_eq!(table.index_of(&[0, 1]), None); // not weakly decreasing
        assert_eq!(table.index_of(&[3, 0]), None); // out of range
        for e in table.iter() {
            assert_eq!(table.index_of(e.head()), Some(e.index()));
        }
    }

    #[test]
    fn descent_examples() {
        let table = omega_table(shape(4, 6));
        let idx = table.index_of(&[5, 2, 2, 1]).unwrap();
        let e = table.get(idx).unwrap();
        let down = table.descent(e, 1).unwrap();
        assert_eq!(down.head(), &[4, 2, 2, 1]);
        assert_eq!(down.tail(), &[4, 4, 3, 3, 1, 0]);
        assert!(down.index() > e.index());

        let table = omega_table(shape(1, 1));
        let top = table.get(0).unwrap();
        let down = table.descent(top, 1).unwrap();
        assert_eq!(down.vector().flat(), &[0, 1]);

        let table = omega_table(shape(3, 5));
        let e = table.get(35).unwrap();
        let down = table.descent(e, 1).unwrap();
        assert_eq!(down.head(), &[3, 0, 0]);
        assert_eq!(
            down.tail(),
            tail_from_head(shape(3, 5), &[3, 0, 0]).unwrap().as_slice()
        );
    }

    #[test]
    fn descent_requires_strict_drop() {
        let table = omega_table(shape(2, 2));
        let e = table.get(0).unwrap(); // head (2,2)
        assert_eq!(
            table.descent(e, 1),
            Err(Error::DescentBlocked { j: 1 })
        );
        assert!(table.descent(e, 2).is_ok());
    }

    #[test]
    fn structural_invariants_small_shapes() {
        for (p, q) in [(1, 1), (1, 4), (2, 2), (2, 4), (3, 3), (3, 5)] {
            let s = shape(p, q);
            let table = omega_table(s);
            let pq = (p * q) as i64;
            let mut count = 0usize;
            for e in table.iter() {
                count += 1;
                assert!(e.head().iter().all(|&x| x >= 0 && x <= q as i64));
                assert!(e.tail().iter().all(|&x| x >= 0 && x <= p as i64));
                assert!(e.vector().is_k_dominant());
                assert_eq!(e.vector().coordinate_sum(), pq);
                assert_eq!(tail_from_head(s, e.head()).unwrap(), e.tail());
            }
            assert_eq!(count, binomial(p + q, p));
            for pair in table.elements().windows(2) {
                assert!(pair[0].vector().flat() > pair[1].vector().flat());
            }
        }
    }

    fn binomial(n: usize, k: usize) -> usize {
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }
}
