//! Blockwise integer vectors and the exact norm arithmetic built on them.
//!
//! A weight for Sp(p,q) splits into a head of p coordinates and a tail of q
//! coordinates. The compact Weyl group acts by permutations and sign changes
//! within each block, so the decreasing rearrangement `{.}` is taken per
//! block, and k-dominance means each block is weakly decreasing on its own.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, MAX_DIM, MAX_ENTRY};

/// The pair (p, q) with 1 <= p <= q, plus the derived n = p + q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupShape {
    p: usize,
    q: usize,
}

impl GroupShape {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p < 1 || p > q || p + q > MAX_DIM {
            return Err(Error::InvalidShape { p, q });
        }
        Ok(GroupShape { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

/// A signed integer vector split into a p-block and a q-block.
///
/// Stored flat (head followed by tail). Construction checks block lengths and
/// the entry magnitude guard; after that every operation is total.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVector {
    shape: GroupShape,
    entries: Vec<i64>,
}

fn check_entries(entries: &[i64]) -> Result<()> {
    for &e in entries {
        if e.unsigned_abs() > MAX_ENTRY as u64 {
            return Err(Error::EntryTooLarge { value: e });
        }
    }
    Ok(())
}

impl BlockVector {
    pub fn from_blocks(shape: GroupShape, head: &[i64], tail: &[i64]) -> Result<Self> {
        if head.len() != shape.p() {
            return Err(Error::BlockLength {
                expected: shape.p(),
                got: head.len(),
            });
        }
        if tail.len() != shape.q() {
            return Err(Error::BlockLength {
                expected: shape.q(),
                got: tail.len(),
            });
        }
        check_entries(head)?;
        check_entries(tail)?;
        let mut entries = Vec::with_capacity(shape.n());
        entries.extend_from_slice(head);
        entries.extend_from_slice(tail);
        Ok(BlockVector { shape, entries })
    }

    pub fn from_flat(shape: GroupShape, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != shape.n() {
            return Err(Error::BlockLength {
                expected: shape.n(),
                got: entries.len(),
            });
        }
        check_entries(&entries)?;
        Ok(BlockVector { shape, entries })
    }

    /// Internal constructor for values derived from already-validated input
    /// (residuals, shifts). Entries may exceed `MAX_ENTRY` by small offsets.
    pub(crate) fn from_flat_unchecked(shape: GroupShape, entries: Vec<i64>) -> Self {
        debug_assert_eq!(entries.len(), shape.n());
        debug_assert!(entries
            .iter()
            .all(|e| e.unsigned_abs() <= 2 * MAX_ENTRY as u64));
        BlockVector { shape, entries }
    }

    pub fn zero(shape: GroupShape) -> Self {
        BlockVector {
            shape,
            entries: vec![0; shape.n()],
        }
    }

    pub fn shape(&self) -> GroupShape {
        self.shape
    }

    pub fn head(&self) -> &[i64] {
        &self.entries[..self.shape.p()]
    }

    pub fn tail(&self) -> &[i64] {
        &self.entries[self.shape.p()..]
    }

    pub fn flat(&self) -> &[i64] {
        &self.entries
    }

    /// True iff head and tail are each weakly decreasing. Signs are not
    /// inspected: residuals are checked for ordering only.
    pub fn is_k_dominant(&self) -> bool {
        is_weakly_decreasing(self.head()) && is_weakly_decreasing(self.tail())
    }

    /// k-dominant with nonnegative entries: a genuine K-type highest weight.
    pub fn is_k_weight(&self) -> bool {
        self.is_k_dominant() && self.entries.iter().all(|&x| x >= 0)
    }

    /// Coordinatewise difference. Panics on shape mismatch; operands always
    /// come from a single table/shape in library code.
    pub fn subtract(&self, other: &BlockVector) -> BlockVector {
        assert_eq!(
            self.shape, other.shape,
            "shape mismatch: {} vs {}",
            self.shape, other.shape
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        BlockVector::from_flat_unchecked(self.shape, entries)
    }

    /// The blockwise decreasing rearrangement of absolute values `{v}`.
    pub fn normalize(&self) -> BlockVector {
        let mut entries = self.entries.clone();
        let p = self.shape.p();
        sort_abs_desc(&mut entries[..p]);
        sort_abs_desc(&mut entries[p..]);
        BlockVector {
            shape: self.shape,
            entries,
        }
    }

    /// Squared k-value: the squared Euclidean norm of `{v} + rho_c`.
    pub fn k_value_sq(&self) -> u64 {
        let mut entries = self.entries.clone();
        let p = self.shape.p();
        let (head, tail) = entries.split_at_mut(p);
        k_value_sq_buf(head, tail)
    }

    /// Coordinatewise >= with at least one strict inequality.
    pub fn dominates(&self, other: &BlockVector) -> bool {
        assert_eq!(
            self.shape, other.shape,
            "shape mismatch: {} vs {}",
            self.shape, other.shape
        );
        let mut strict = false;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if a < b {
                return false;
            }
            if a > b {
                strict = true;
            }
        }
        strict
    }

    pub fn coordinate_sum(&self) -> i64 {
        self.entries.iter().sum()
    }
}

fn is_weakly_decreasing(xs: &[i64]) -> bool {
    xs.windows(2).all(|w| w[0] >= w[1])
}

fn sort_abs_desc(xs: &mut [i64]) {
    for x in xs.iter_mut() {
        *x = x.abs();
    }
    xs.sort_unstable_by(|a, b| b.cmp(a));
}

/// In-place k-value kernel: replaces both buffers by their decreasing
/// absolute rearrangement and returns `||{v} + rho_c||^2`.
pub(crate) fn k_value_sq_buf(head: &mut [i64], tail: &mut [i64]) -> u64 {
    sort_abs_desc(head);
    sort_abs_desc(tail);
    staircase_norm_sq(head) + staircase_norm_sq(tail)
}

/// `sum_t (z_t + (len + 1 - t))^2` for 1-based positions t; the staircase is
/// the corresponding block of rho_c.
fn staircase_norm_sq(sorted_abs: &[i64]) -> u64 {
    let len = sorted_abs.len() as i64;
    sorted_abs
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let t = (z + (len - i as i64)) as u64;
            t * t
        })
        .sum()
}

/// A k-dominant weight with nonnegative entries: a genuine K-type highest
/// weight `(a_1,...,a_p | b_1,...,b_q)` with both blocks weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KWeight {
    vector: BlockVector,
}

impl KWeight {
    pub fn new(vector: BlockVector) -> Result<Self> {
        if let Some(&e) = vector.flat().iter().find(|e| **e < 0) {
            return Err(Error::NegativeEntry { value: e });
        }
        if !is_weakly_decreasing(vector.head()) {
            return Err(Error::NotDecreasing { block: "head" });
        }
        if !is_weakly_decreasing(vector.tail()) {
            return Err(Error::NotDecreasing { block: "tail" });
        }
        Ok(KWeight { vector })
    }

    pub fn from_blocks(shape: GroupShape, head: &[i64], tail: &[i64]) -> Result<Self> {
        KWeight::new(BlockVector::from_blocks(shape, head, tail)?)
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

    /// First head entry a_1.
    pub fn a1(&self) -> i64 {
        self.head()[0]
    }

    /// First tail entry b_1.
    pub fn b1(&self) -> i64 {
        self.tail()[0]
    }

    /// The pencil member `mu + m*beta`.
    pub fn pencil_up(&self, m: u64) -> Result<KWeight> {
        let mut entries = self.vector.entries.clone();
        let m = i64::try_from(m).map_err(|_| Error::PencilOverflow { m: u64::MAX })?;
        entries[0] += m;
        entries[self.shape().p()] += m;
        if entries[0] > MAX_ENTRY || entries[self.shape().p()] > MAX_ENTRY {
            return Err(Error::PencilOverflow { m: m as u64 });
        }
        KWeight::new(BlockVector::from_flat_unchecked(self.shape(), entries))
    }

    /// `mu - beta` when that is still a K-type highest weight.
    pub fn pencil_down(&self) -> Option<KWeight> {
        let mut entries = self.vector.entries.clone();
        entries[0] -= 1;
        entries[self.shape().p()] -= 1;
        KWeight::new(BlockVector::from_flat_unchecked(self.shape(), entries)).ok()
    }
}

impl fmt::Display for BlockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[i64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}|{}", join(self.head()), join(self.tail()))
    }
}

impl fmt::Display for KWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.vector.fmt(f)
    }
}

/// Parses the weight literal format `a1,...,ap|b1,...,bq`.
///
/// Whitespace is ignored everywhere; the shape is inferred from the block
/// lengths.
impl FromStr for KWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<KWeight> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (head_s, tail_s) = cleaned
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("missing '|' separator in {s:?}")))?;
        let parse_block = |block: &str| -> Result<Vec<i64>> {
            if block.is_empty() {
                return Err(Error::Parse(format!("empty block in {s:?}")));
            }
            block
                .split(',')
                .map(|tok| {
                    tok.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad integer {tok:?} in {s:?}")))
                })
                .collect()
        };
        let head = parse_block(head_s)?;
        let tail = parse_block(tail_s)?;
        let shape = GroupShape::new(head.len(), tail.len())?;
        KWeight::from_blocks(shape, &head, &tail)
    }
}

/// The four distinguished vectors attached to a shape.
///
/// `rho` is the half sum of all positive roots, `rho_c` of the compact ones,
/// `rho_n0` of the non-compact ones in the initial positive system, and
/// `beta` is the highest weight of the adjoint action on the -1 eigenspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoConstants {
    pub rho: BlockVector,
    pub rho_c: BlockVector,
    pub rho_n0: BlockVector,
    pub beta: BlockVector,
}

impl RhoConstants {
    pub fn for_shape(shape: GroupShape) -> RhoConstants {
        let (p, q, n) = (shape.p() as i64, shape.q() as i64, shape.n() as i64);
        // rho = (n, n-1, ..., q+1 | q, q-1, ..., 1): flat it is n, n-1, ..., 1.
        let rho = BlockVector::from_flat_unchecked(shape, (1..=n).rev().collect());
        let rho_c_entries: Vec<i64> = (1..=p).rev().chain((1..=q).rev()).collect();
        let rho_c = BlockVector::from_flat_unchecked(shape, rho_c_entries);
        let rho_n0 = rho.subtract(&rho_c);
        debug_assert!(rho_n0.head().iter().all(|&x| x == q));
        debug_assert!(rho_n0.tail().iter().all(|&x| x == 0));
        let mut beta_entries = vec![0; shape.n()];
        beta_entries[0] = 1;
        beta_entries[shape.p()] = 1;
        let beta = BlockVector::from_flat_unchecked(shape, beta_entries);
        RhoConstants {
            rho,
            rho_c,
            rho_n0,
            beta,
        }
    }
}
