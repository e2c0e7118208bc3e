//! The coset representatives carrying the g-dominant chamber into the
//! k-dominant one, realized as explicit coordinate permutations.
//!
//! Each representative is the word `s_{p,i_p} s_{p-1,i_{p-1}} ... s_{1,i_1}`
//! attached to a p-subset `1 <= i_1 < ... < i_p <= n`, where `s_{i,j}` is the
//! product of the simple transpositions moving coordinate j up to slot i.
//! Words are evaluated right to left (`s_{1,i_1}` acts first). This module is
//! the oracle route to the omega set: applying each word to rho and
//! subtracting rho_c must reproduce the direct enumeration.
//!
//! Empirically the subsets in ascending lexicographic order map to the omega
//! elements in their own (descending) lexicographic order, but nothing relies
//! on that: `omega_via_weyl` sorts its output.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::weights::{BlockVector, GroupShape, RhoConstants};

/// One element of the coset, as the defining subset plus its materialized
/// permutation. `perm` is the 0-based image map: applying the word moves the
/// content of slot t to slot `perm[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylWord {
    shape: GroupShape,
    subset: Vec<usize>,
    perm: Vec<usize>,
}

impl WeylWord {
    /// Builds the word for a strictly increasing 1-based subset of {1..n}.
    fn from_subset(shape: GroupShape, subset: Vec<usize>) -> WeylWord {
        let n = shape.n();
        debug_assert_eq!(subset.len(), shape.p());
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(subset.iter().enumerate().all(|(k0, &ik)| {
            // i_{k-1}+1 <= i_k <= q+k holds for every increasing subset.
            ik > k0 && ik <= shape.q() + k0 + 1
        }));
        let mut perm: Vec<usize> = (0..n).collect();
        for (k0, &ik) in subset.iter().enumerate() {
            // Compose with s_{k, i_k} (1-based k = k0+1): content of slot
            // i_k moves to slot k, slots k..i_k-1 shift one to the right.
            let k = k0 + 1;
            let factor = move |slot: usize| -> usize {
                let s = slot + 1; // 1-based
                if s == ik {
                    k - 1
                } else if s >= k && s < ik {
                    s // 1-based s+1, 0-based s
                } else {
                    slot
                }
            };
            for image in perm.iter_mut() {
                *image = factor(*image);
            }
        }
        WeylWord {
            shape,
            subset,
            perm,
        }
    }

    pub fn shape(&self) -> GroupShape {
        self.shape
    }

    /// The defining subset, 1-based and strictly increasing.
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// The image map on 0-based slots.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Applies the word to a coordinate vector: `out[perm[t]] = v[t]`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.shape.n(), "vector length mismatch");
        let mut out = vec![0; v.len()];
        for (t, &image) in self.perm.iter().enumerate() {
            out[image] = v[t];
        }
        out
    }

    /// The half sum of non-compact positive roots for this word's positive
    /// system: `w(rho) - rho_c`, split into blocks.
    pub fn rho_n(&self) -> BlockVector {
        let rc = RhoConstants::for_shape(self.shape);
        let moved = BlockVector::from_flat_unchecked(self.shape, self.apply(rc.rho.flat()));
        moved.subtract(&rc.rho_c)
    }
}

/// All `C(n, p)` words, ordered by subset in ascending lexicographic order.
pub fn generate_w1(shape: GroupShape) -> Vec<WeylWord> {
    let mut words = Vec::new();
    let mut subset = Vec::with_capacity(shape.p());
    gen_subsets(shape, 1, &mut subset, &mut words);
    words
}

fn gen_subsets(
    shape: GroupShape,
    from: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<WeylWord>,
) {
    if subset.len() == shape.p() {
        out.push(WeylWord::from_subset(shape, subset.clone()));
        return;
    }
    let remaining = shape.p() - subset.len();
    for i in from..=(shape.n() - remaining + 1) {
        subset.push(i);
        gen_subsets(shape, i + 1, subset, out);
        subset.pop();
    }
}

/// The j-th fundamental weight for the ambient system: first j entries 1.
pub fn fundamental_weight(shape: GroupShape, j: usize) -> Vec<i64> {
    assert!(j >= 1 && j <= shape.n(), "fundamental weight index");
    let mut v = vec![0; shape.n()];
    for e in v.iter_mut().take(j) {
        *e = 1;
    }
    v
}

/// The omega set derived through the words, sorted into descending
/// lexicographic order (largest first).
pub fn omega_via_weyl(shape: GroupShape) -> Vec<BlockVector> {
    let mut vs: Vec<BlockVector> = generate_w1(shape).iter().map(WeylWord::rho_n).collect();
    vs.sort_unstable_by(|a, b| b.flat().cmp(a.flat()));
    vs
}

static WORD_CACHE: OnceLock<Mutex<HashMap<GroupShape, Arc<Vec<WeylWord>>>>> = OnceLock::new();

/// Cached words per shape; built once, then shared read-only.
pub fn weyl_words(shape: GroupShape) -> Arc<Vec<WeylWord>> {
    let cache = WORD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(shape)
        .or_insert_with(|| Arc::new(generate_w1(shape)))
        .clone()
}
