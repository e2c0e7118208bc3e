//! Exhaustive verification sweeps over finite grids of K-type weights.
//!
//! A sweep enumerates every k-dominant weight with entries up to a cap, in a
//! canonical order (coordinate sum ascending, then lexicographic), and runs a
//! fixed list of named claims against each one. Violations are collected as
//! counterexamples, never raised. Work is partitioned into contiguous batches
//! across a configurable worker pool; batch results are merged in canonical
//! order, so the report does not depend on the worker count. After each batch
//! an optional checkpoint file is written atomically (write then rename), and
//! a later run can resume from it.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::hull::{self, padded_weight};
use crate::omega::{omega_table, tail_from_head, OmegaTable};
use crate::spin::{
    classify_region, deficiency_delta_formula, deficiency_profile, deficient_indices, spin_norm,
    RegionClass,
};
use crate::weights::{BlockVector, GroupShape, KWeight, RhoConstants};
use crate::weyl::omega_via_weyl;
use crate::{Error, Result};

/// Checkpoint cadence, in weights.
const CHECKPOINT_BATCH: usize = 100_000;

/// The finite domain of one sweep: every K-type weight of the shape with all
/// entries at most `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepGrid {
    pub shape: GroupShape,
    pub cap: i64,
    /// Restrict claims that assume `mu - beta` is dominant to weights where
    /// it is.
    pub require_mu_minus_beta_dominant: bool,
}

impl SweepGrid {
    /// Default cap 2q + 2: past 2q every region threshold has stabilized, so
    /// this covers all of them with margin.
    pub fn new(shape: GroupShape) -> SweepGrid {
        SweepGrid {
            shape,
            cap: 2 * shape.q() as i64 + 2,
            require_mu_minus_beta_dominant: true,
        }
    }

    pub fn with_cap(shape: GroupShape, cap: i64) -> SweepGrid {
        assert!(cap >= 1, "cap must be at least 1");
        SweepGrid {
            shape,
            cap,
            require_mu_minus_beta_dominant: true,
        }
    }
}

impl fmt::Display for SweepGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} q={} cap={} require_dominant={}",
            self.shape.p(),
            self.shape.q(),
            self.cap,
            self.require_mu_minus_beta_dominant
        )
    }
}

/// One violation of one claim, with enough detail to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The weight under test; absent for table-level claims.
    pub weight: Option<KWeight>,
    pub claim: String,
    pub details: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.weight {
            Some(w) => write!(f, "[{}] {}: {}", self.claim, w, self.details),
            None => write!(f, "[{}] {}", self.claim, self.details),
        }
    }
}

/// Outcome of one sweep.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub grid: SweepGrid,
    pub claims_checked: Vec<String>,
    pub weights_scanned: u64,
    pub counterexamples: Vec<Counterexample>,
    pub wall_time: Duration,
    /// Resume token when the run stopped before covering the grid.
    pub checkpoint: Option<String>,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Equality up to wall time.
    pub fn same_outcome(&self, other: &VerificationReport) -> bool {
        self.grid == other.grid
            && self.claims_checked == other.claims_checked
            && self.weights_scanned == other.weights_scanned
            && self.counterexamples == other.counterexamples
            && self.checkpoint == other.checkpoint
    }
}

/// Operational knobs for a sweep; the defaults run serially in-process with
/// no checkpointing.
#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker pool size; `None` means one worker per available core.
    pub jobs: Option<usize>,
    /// Checkpoint file, written after every batch.
    pub checkpoint: Option<PathBuf>,
    /// Resume from the checkpoint file if it exists.
    pub resume: bool,
    /// Print counterexamples to stderr as they are found.
    pub stream: bool,
    /// Stop after this many weights in this invocation (the checkpoint keeps
    /// the run resumable); mainly for quota-limited runs.
    pub max_weights: Option<u64>,
}

pub(crate) struct SweepCtx {
    grid: SweepGrid,
    omega: Arc<OmegaTable>,
    rho: RhoConstants,
    k_floor: u64,
}

impl SweepCtx {
    fn new(grid: SweepGrid) -> SweepCtx {
        SweepCtx {
            grid,
            omega: omega_table(grid.shape),
            rho: RhoConstants::for_shape(grid.shape),
            k_floor: BlockVector::zero(grid.shape).k_value_sq(),
        }
    }
}

struct WeightClaim {
    name: &'static str,
    applies: fn(&SweepGrid) -> bool,
    check: fn(&KWeight, &SweepCtx, &mut Vec<Counterexample>),
}

struct ShapeClaim {
    name: &'static str,
    applies: fn(&SweepGrid) -> bool,
    check: fn(&SweepCtx, &mut Vec<Counterexample>),
}

fn always(_: &SweepGrid) -> bool {
    true
}

fn cx(weight: &KWeight, claim: &'static str, details: String) -> Counterexample {
    Counterexample {
        weight: Some(weight.clone()),
        claim: claim.to_string(),
        details,
    }
}

fn table_cx(claim: &'static str, details: String) -> Counterexample {
    Counterexample {
        weight: None,
        claim: claim.to_string(),
        details,
    }
}

// ---------------------------------------------------------------------------
// Weight-level claims
// ---------------------------------------------------------------------------

/// The pencil monotonicity statement: for u-large mu with mu - beta
/// dominant, the squared spin norm strictly drops from mu to mu - beta.
fn check_pencil_spin_increase(mu: &KWeight, _ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let Some(prev) = mu.pencil_down() else {
        return;
    };
    if hull::is_u_small(mu) {
        return;
    }
    let cur = spin_norm(mu);
    let before = spin_norm(&prev);
    if cur.spin_norm_sq <= before.spin_norm_sq {
        out.push(cx(
            mu,
            "pencil_spin_increase",
            format!(
                "spin_sq={} not > spin_sq(mu-beta)={} (argmin {}, {})",
                cur.spin_norm_sq, before.spin_norm_sq, cur.first_argmin, before.first_argmin
            ),
        ));
    }
}

fn boundary_region(mu: &KWeight) -> Option<RegionClass> {
    match classify_region(mu) {
        r @ (RegionClass::BoundaryR | RegionClass::BoundaryL) => Some(r),
        _ => None,
    }
}

/// Boundary weights never attain their spin norm at a deficient index.
fn check_deficient_argmin_disjoint(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    if ctx.grid.require_mu_minus_beta_dominant && mu.pencil_down().is_none() {
        return;
    }
    if boundary_region(mu).is_none() {
        return;
    }
    let spin = spin_norm(mu);
    for ell in deficient_indices(mu) {
        let profile = deficiency_profile(mu, ell).expect("index from the same table");
        if profile.k_value_sq <= spin.spin_norm_sq {
            out.push(cx(
                mu,
                "deficient_argmin_disjoint",
                format!(
                    "ell={} k_value_sq={} not > spin_sq={}",
                    ell, profile.k_value_sq, spin.spin_norm_sq
                ),
            ));
        }
    }
}

/// Boundary descent: whenever the leading head (resp. tail) coordinate of an
/// omega element strictly exceeds a_1 (resp. b_1), the element with head
/// `(a_1, a_1-1, ..., a_1-1, k_{h+1}, ...)` (resp. the mirrored tail) exists
/// and its residual is dominated by the original one after normalization.
fn check_descent_witness(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    if ctx.grid.require_mu_minus_beta_dominant && mu.pencil_down().is_none() {
        return;
    }
    let Some(region) = boundary_region(mu) else {
        return;
    };
    let p = mu.shape().p();
    let q = mu.shape().q();
    match region {
        RegionClass::BoundaryR => {
            let a1 = mu.a1();
            for elem in ctx.omega.iter() {
                if elem.k(1) <= a1 {
                    continue;
                }
                let h = (1..=p)
                    .rev()
                    .find(|&j| elem.k(j) >= a1)
                    .expect("k_1 >= a_1 guarantees a largest index");
                let mut head = Vec::with_capacity(p);
                head.push(a1);
                head.resize(h, a1 - 1);
                head.extend_from_slice(&elem.head()[h..]);
                let Some(idx) = ctx.omega.index_of(&head) else {
                    out.push(cx(
                        mu,
                        "descent_witness",
                        format!("ell={} witness head {head:?} not in table", elem.index()),
                    ));
                    continue;
                };
                let down = ctx.omega.get(idx).expect("index from index_of");
                let from = mu.vector().subtract(elem.vector()).normalize();
                let to = mu.vector().subtract(down.vector()).normalize();
                if !from.dominates(&to) {
                    out.push(cx(
                        mu,
                        "descent_witness",
                        format!(
                            "ell={} down={} residual {} does not dominate {}",
                            elem.index(),
                            idx,
                            from,
                            to
                        ),
                    ));
                }
            }
        }
        RegionClass::BoundaryL => {
            let b1 = mu.b1();
            for elem in ctx.omega.iter() {
                if elem.tail()[0] <= b1 {
                    continue;
                }
                let h = (1..=q)
                    .rev()
                    .find(|&j| elem.tail()[j - 1] >= b1)
                    .expect("r_1 >= b_1 guarantees a largest index");
                let mut tail = Vec::with_capacity(q);
                tail.push(b1);
                tail.resize(h, b1 - 1);
                tail.extend_from_slice(&elem.tail()[h..]);
                let Some(idx) = ctx.omega.index_of_tail(&tail) else {
                    out.push(cx(
                        mu,
                        "descent_witness",
                        format!("ell={} witness tail {tail:?} not in table", elem.index()),
                    ));
                    continue;
                };
                let down = ctx.omega.get(idx).expect("index from index_of_tail");
                let from = mu.vector().subtract(elem.vector()).normalize();
                let to = mu.vector().subtract(down.vector()).normalize();
                if !from.dominates(&to) {
                    out.push(cx(
                        mu,
                        "descent_witness",
                        format!(
                            "ell={} down={} residual {} does not dominate {}",
                            elem.index(),
                            idx,
                            from,
                            to
                        ),
                    ));
                }
            }
        }
        _ => unreachable!(),
    }
}

/// Every u-large weight has a_1 >= q+1 or b_1 >= p+1.
fn check_u_large_first_coordinate(mu: &KWeight, _ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    if let Some(witness) = hull::u_large_witness(mu) {
        let (p, q) = (mu.shape().p() as i64, mu.shape().q() as i64);
        if mu.a1() < q + 1 && mu.b1() < p + 1 {
            out.push(cx(
                mu,
                "u_large_first_coordinate",
                format!(
                    "u-large with witness (f={}, g={}) but a1={} <= q and b1={} <= p",
                    witness.f,
                    witness.g,
                    mu.a1(),
                    mu.b1()
                ),
            ));
        }
    }
}

/// The prefix-sum route and the literal pairing oracle must agree.
fn check_hull_oracle_agreement(mu: &KWeight, _ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let fast = hull::is_u_small(mu);
    let oracle = hull::is_u_small_oracle(mu);
    if fast != oracle {
        out.push(cx(
            mu,
            "hull_oracle_agreement",
            format!("prefix route u_small={fast}, pairing oracle u_small={oracle}"),
        ));
    }
}

/// u-small iff every padded weight has coordinate sum at most 2pq.
fn check_padded_sum_characterization(mu: &KWeight, _ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let (p, q) = (mu.shape().p(), mu.shape().q());
    let bound = 2 * p as i64 * q as i64;
    let all_small = (0..=p).all(|f| {
        (0..=q).all(|g| padded_weight(mu, f, g).vector.coordinate_sum() <= bound)
    });
    if all_small != hull::is_u_small(mu) {
        out.push(cx(
            mu,
            "padded_sum_characterization",
            format!(
                "padded sums all <= {bound}: {all_small}, but is_u_small={}",
                hull::is_u_small(mu)
            ),
        ));
    }
}

/// Where a closed-form delta applies, it equals the direct difference of
/// squared k-values.
fn check_residual_delta_identity(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    for ell in 0..ctx.omega.len() {
        let profile = deficiency_profile(mu, ell).expect("index in range");
        if let Some(formula) = deficiency_delta_formula(&profile, mu.shape()) {
            let direct = profile.k_value_sq_shifted as i64 - profile.k_value_sq as i64;
            if formula != direct {
                out.push(cx(
                    mu,
                    "residual_delta_identity",
                    format!(
                        "ell={} residual={} formula={} direct={}",
                        ell, profile.residual, formula, direct
                    ),
                ));
            }
        }
    }
}

/// For u-large mu no residual has both leading coordinates nonpositive.
fn check_residual_sign_exclusion(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    if hull::is_u_small(mu) {
        return;
    }
    for elem in ctx.omega.iter() {
        let m1 = mu.head()[0] - elem.head()[0];
        let n1 = mu.tail()[0] - elem.tail()[0];
        if m1 <= 0 && n1 <= 0 {
            out.push(cx(
                mu,
                "residual_sign_exclusion",
                format!("ell={} m1={m1} n1={n1}", elem.index()),
            ));
        }
    }
}

/// With a_1 >= q+1 and b_1 >= p+1 every normalized residual dominates its
/// beta shift, and the spin norm strictly drops to mu - beta.
fn check_basic_domination(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let (p, q) = (mu.shape().p() as i64, mu.shape().q() as i64);
    if mu.a1() < q + 1 || mu.b1() < p + 1 {
        return;
    }
    for elem in ctx.omega.iter() {
        let residual = mu.vector().subtract(elem.vector());
        let shifted = residual.subtract(&ctx.rho.beta);
        if !residual.normalize().dominates(&shifted.normalize()) {
            out.push(cx(
                mu,
                "basic_domination",
                format!("ell={} residual {} misses domination", elem.index(), residual),
            ));
        }
    }
    if let Some(prev) = mu.pencil_down() {
        let cur = spin_norm(mu).spin_norm_sq;
        let before = spin_norm(&prev).spin_norm_sq;
        if cur <= before {
            out.push(cx(
                mu,
                "basic_domination",
                format!("spin_sq={cur} not > spin_sq(mu-beta)={before}"),
            ));
        }
    }
}

/// R-weights with a_1+b_1 >= 2p+q and L-weights with a_1+b_1 >= p+2q have no
/// deficient index at all.
fn check_big_region_no_deficiency(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    if ctx.grid.require_mu_minus_beta_dominant && mu.pencil_down().is_none() {
        return;
    }
    if hull::is_u_small(mu) {
        return;
    }
    let (p, q) = (mu.shape().p() as i64, mu.shape().q() as i64);
    let (a1, b1) = (mu.a1(), mu.b1());
    let r_big = a1 <= q && b1 > p && a1 + b1 >= 2 * p + q;
    let l_big = a1 > q && b1 <= p && a1 + b1 >= p + 2 * q;
    if !(r_big || l_big) {
        return;
    }
    let deficient = deficient_indices(mu);
    if !deficient.is_empty() {
        out.push(cx(
            mu,
            "big_region_no_deficiency",
            format!(
                "{}-weight with a1+b1={} has deficient indices {:?}",
                if r_big { "R" } else { "L" },
                a1 + b1,
                deficient
            ),
        ));
    }
}

/// Once u-large, the next pencil member is u-large too.
fn check_pencil_u_large_monotone(mu: &KWeight, _ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    if hull::is_u_small(mu) {
        return;
    }
    let next = mu.pencil_up(1).expect("one step stays in range");
    if hull::is_u_small(&next) {
        out.push(cx(
            mu,
            "pencil_u_large_monotone",
            "mu is u-large but mu+beta is u-small".to_string(),
        ));
    }
}

/// The squared spin norm never drops below the squared norm of rho_c, with
/// equality exactly on omega elements.
fn check_spin_floor(mu: &KWeight, ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let spin = spin_norm(mu);
    let member = ctx
        .omega
        .index_of(mu.head())
        .map(|i| ctx.omega.get(i).expect("valid index").tail() == mu.tail())
        .unwrap_or(false);
    let at_floor = spin.spin_norm_sq == ctx.k_floor;
    if spin.spin_norm_sq < ctx.k_floor || (at_floor != member) {
        out.push(cx(
            mu,
            "spin_floor",
            format!(
                "spin_sq={} floor={} table_member={member}",
                spin.spin_norm_sq, ctx.k_floor
            ),
        ));
    }
}

// ---------------------------------------------------------------------------
// Table-level claims (run once per sweep)
// ---------------------------------------------------------------------------

fn binomial(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i as u64 + 1);
    }
    r
}

fn applies_omega(grid: &SweepGrid) -> bool {
    grid.shape.n() <= 12
}

fn applies_weyl(grid: &SweepGrid) -> bool {
    grid.shape.n() <= 10
}

fn applies_small_blocks(grid: &SweepGrid) -> bool {
    grid.shape.p() <= 3 && grid.shape.q() <= 3
}

fn applies_hull_oracle(grid: &SweepGrid) -> bool {
    grid.shape.n() <= 7
}

/// Structural table checks: cardinality, bounds, total sum, the counting
/// formula, lexicographic order, and coherence of every descent move.
fn check_omega_structure(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let shape = ctx.grid.shape;
    let (p, q) = (shape.p(), shape.q());
    let expected = binomial(shape.n(), p);
    if ctx.omega.len() as u64 != expected {
        out.push(table_cx(
            "omega_structure",
            format!("table has {} elements, expected {expected}", ctx.omega.len()),
        ));
    }
    let pq = (p * q) as i64;
    for elem in ctx.omega.iter() {
        let head_ok = elem.head().windows(2).all(|w| w[0] >= w[1])
            && elem.head().iter().all(|&x| (0..=q as i64).contains(&x));
        let tail_ok = elem.tail().windows(2).all(|w| w[0] >= w[1])
            && elem.tail().iter().all(|&x| (0..=p as i64).contains(&x));
        if !head_ok || !tail_ok {
            out.push(table_cx(
                "omega_structure",
                format!("index={} blocks out of range: {}", elem.index(), elem.vector()),
            ));
            continue;
        }
        if elem.vector().coordinate_sum() != pq {
            out.push(table_cx(
                "omega_structure",
                format!("index={} coordinate sum != pq: {}", elem.index(), elem.vector()),
            ));
        }
        match tail_from_head(shape, elem.head()) {
            Ok(tail) if tail == elem.tail() => {}
            _ => out.push(table_cx(
                "omega_structure",
                format!("index={} tail disagrees with counting formula", elem.index()),
            )),
        }
        // Descent coherence at every position with a strict drop.
        for j in 1..=p {
            if elem.k(j) <= elem.k(j + 1) {
                continue;
            }
            let mut head = elem.head().to_vec();
            head[j - 1] -= 1;
            let mut tail = elem.tail().to_vec();
            tail[(q as i64 - elem.k(j)) as usize] += 1;
            match ctx.omega.index_of(&head) {
                Some(idx) if idx > elem.index() => {
                    let down = ctx.omega.get(idx).expect("valid index");
                    if down.tail() != tail {
                        out.push(table_cx(
                            "omega_structure",
                            format!("descent index={} j={j} tail mismatch", elem.index()),
                        ));
                    }
                }
                other => out.push(table_cx(
                    "omega_structure",
                    format!(
                        "descent index={} j={j} lands at {:?}, not later in the table",
                        elem.index(),
                        other
                    ),
                )),
            }
        }
    }
    for pair in ctx.omega.elements().windows(2) {
        if pair[0].vector().flat() <= pair[1].vector().flat() {
            out.push(table_cx(
                "omega_structure",
                format!("indices {} and {} out of lexicographic order", pair[0].index(), pair[1].index()),
            ));
        }
    }
}

/// Prefix bound: head and tail prefixes of a table element never exceed
/// `fq + (p-f)g`.
fn check_omega_prefix_bound(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let (p, q) = (ctx.grid.shape.p(), ctx.grid.shape.q());
    for elem in ctx.omega.iter() {
        let mut head_sum = 0i64;
        for f in 1..=p {
            head_sum += elem.head()[f - 1];
            let mut tail_sum = 0i64;
            for g in 1..=q {
                tail_sum += elem.tail()[g - 1];
                let bound = (f * q + (p - f) * g) as i64;
                if head_sum + tail_sum > bound {
                    out.push(table_cx(
                        "omega_prefix_bound",
                        format!(
                            "index={} f={f} g={g}: {} > {bound}",
                            elem.index(),
                            head_sum + tail_sum
                        ),
                    ));
                }
            }
        }
    }
}

/// Bounds on k_1 + r_1: always between p and p+q-1, and at least q whenever
/// k_1 = q or k_1 >= q - p. (The lower bound q does not hold for every
/// element once p < q: a head starting below q - p forces r_1 = p and the
/// sum k_1 + p can stay below q.)
fn check_omega_first_coordinate_sum(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let (p, q) = (ctx.grid.shape.p() as i64, ctx.grid.shape.q() as i64);
    for elem in ctx.omega.iter() {
        let k1 = elem.head()[0];
        let r1 = elem.tail()[0];
        let sum = k1 + r1;
        let lower_q_applies = k1 >= q - p;
        if sum < p || sum > p + q - 1 || (lower_q_applies && sum < q) {
            out.push(table_cx(
                "omega_first_coordinate_sum",
                format!("index={} k1={k1} r1={r1}", elem.index()),
            ));
        }
    }
}

/// The word route and the direct enumeration agree element for element.
fn check_omega_weyl_agreement(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let via_weyl = omega_via_weyl(ctx.grid.shape);
    if via_weyl.len() != ctx.omega.len() {
        out.push(table_cx(
            "omega_weyl_agreement",
            format!("{} words vs {} table entries", via_weyl.len(), ctx.omega.len()),
        ));
        return;
    }
    for (elem, from_words) in ctx.omega.iter().zip(&via_weyl) {
        if elem.vector() != from_words {
            out.push(table_cx(
                "omega_weyl_agreement",
                format!(
                    "index={} table {} vs words {}",
                    elem.index(),
                    elem.vector(),
                    from_words
                ),
            ));
        }
    }
}

/// All signed vectors with entries in [-3, 3] for the sweep's shape.
fn small_signed_vectors(shape: GroupShape) -> Vec<BlockVector> {
    let n = shape.n();
    let mut out = Vec::new();
    let mut current = vec![-3i64; n];
    loop {
        out.push(BlockVector::from_flat_unchecked(shape, current.clone()));
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if current[i] < 3 {
                current[i] += 1;
                break;
            }
            current[i] = -3;
            i += 1;
        }
    }
}

/// normalize(normalize(v)) = normalize(v), and the k-value floor is attained
/// exactly at vectors normalizing to zero.
fn check_normalize_idempotent(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    for v in small_signed_vectors(ctx.grid.shape) {
        let n1 = v.normalize();
        if n1.normalize() != n1 {
            out.push(table_cx(
                "normalize_idempotent",
                format!("v={v} normalizes unstably"),
            ));
        }
        let k = v.k_value_sq();
        let is_zero = n1.flat().iter().all(|&x| x == 0);
        if k < ctx.k_floor || ((k == ctx.k_floor) != is_zero) {
            out.push(table_cx(
                "normalize_idempotent",
                format!("v={v} k_value_sq={k} floor={}", ctx.k_floor),
            ));
        }
    }
}

/// Shifting any coordinate away from zero strictly raises the normalized
/// vector in the domination order.
fn check_blockwise_shift_domination(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let n = ctx.grid.shape.n();
    for v in small_signed_vectors(ctx.grid.shape) {
        let base = v.normalize();
        for s in 0..n {
            let entry = v.flat()[s];
            let mut shifted = v.flat().to_vec();
            if entry >= 0 {
                shifted[s] += 1;
            } else {
                shifted[s] -= 1;
            }
            let shifted = BlockVector::from_flat_unchecked(ctx.grid.shape, shifted);
            if !shifted.normalize().dominates(&base) {
                out.push(table_cx(
                    "blockwise_shift_domination",
                    format!("v={v} position {s}"),
                ));
            }
        }
    }
}

/// Domination of normalized vectors forces a strictly larger k-value.
/// Normalized pairs cover all pairs, since k-values and domination only see
/// the normal forms.
fn check_domination_k_value(ctx: &SweepCtx, out: &mut Vec<Counterexample>) {
    let normalized: Vec<BlockVector> = {
        let mut seen: Vec<BlockVector> = small_signed_vectors(ctx.grid.shape)
            .into_iter()
            .map(|v| v.normalize())
            .collect();
        seen.sort_unstable_by(|a, b| a.flat().cmp(b.flat()));
        seen.dedup();
        seen
    };
    for u in &normalized {
        let ku = u.k_value_sq();
        for v in &normalized {
            if u.dominates(v) && ku <= v.k_value_sq() {
                out.push(table_cx(
                    "domination_k_value",
                    format!("u={u} dominates v={v} but k {ku} <= {}", v.k_value_sq()),
                ));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Registries
// ---------------------------------------------------------------------------

static THEOREM_CLAIM: WeightClaim = WeightClaim {
    name: "pencil_spin_increase",
    applies: always,
    check: check_pencil_spin_increase,
};

static BOUNDARY_CLAIM: WeightClaim = WeightClaim {
    name: "deficient_argmin_disjoint",
    applies: always,
    check: check_deficient_argmin_disjoint,
};

static LEMMA_DOWN_CLAIM: WeightClaim = WeightClaim {
    name: "descent_witness",
    applies: always,
    check: check_descent_witness,
};

static PROPERTY_SHAPE_CLAIMS: &[ShapeClaim] = &[
    ShapeClaim {
        name: "omega_structure",
        applies: applies_omega,
        check: check_omega_structure,
    },
    ShapeClaim {
        name: "omega_prefix_bound",
        applies: applies_omega,
        check: check_omega_prefix_bound,
    },
    ShapeClaim {
        name: "omega_first_coordinate_sum",
        applies: applies_omega,
        check: check_omega_first_coordinate_sum,
    },
    ShapeClaim {
        name: "omega_weyl_agreement",
        applies: applies_weyl,
        check: check_omega_weyl_agreement,
    },
    ShapeClaim {
        name: "normalize_idempotent",
        applies: applies_small_blocks,
        check: check_normalize_idempotent,
    },
    ShapeClaim {
        name: "blockwise_shift_domination",
        applies: applies_small_blocks,
        check: check_blockwise_shift_domination,
    },
    ShapeClaim {
        name: "domination_k_value",
        applies: applies_small_blocks,
        check: check_domination_k_value,
    },
];

static PROPERTY_WEIGHT_CLAIMS: &[WeightClaim] = &[
    WeightClaim {
        name: "u_large_first_coordinate",
        applies: always,
        check: check_u_large_first_coordinate,
    },
    WeightClaim {
        name: "hull_oracle_agreement",
        applies: applies_hull_oracle,
        check: check_hull_oracle_agreement,
    },
    WeightClaim {
        name: "padded_sum_characterization",
        applies: always,
        check: check_padded_sum_characterization,
    },
    WeightClaim {
        name: "residual_delta_identity",
        applies: always,
        check: check_residual_delta_identity,
    },
    WeightClaim {
        name: "residual_sign_exclusion",
        applies: always,
        check: check_residual_sign_exclusion,
    },
    WeightClaim {
        name: "basic_domination",
        applies: always,
        check: check_basic_domination,
    },
    WeightClaim {
        name: "big_region_no_deficiency",
        applies: always,
        check: check_big_region_no_deficiency,
    },
    WeightClaim {
        name: "pencil_u_large_monotone",
        applies: always,
        check: check_pencil_u_large_monotone,
    },
    WeightClaim {
        name: "spin_floor",
        applies: always,
        check: check_spin_floor,
    },
];

// ---------------------------------------------------------------------------
// Grid enumeration and the sweep engine
// ---------------------------------------------------------------------------

fn decreasing_blocks(len: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(len);
    fn rec(max: i64, remaining: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=max).rev() {
            prefix.push(v);
            rec(v, remaining - 1, prefix, out);
            prefix.pop();
        }
    }
    rec(cap, len, &mut prefix, &mut out);
    out
}

/// Every K-type weight of the grid, in canonical order: coordinate sum
/// ascending, then lexicographic on the flat vector. Checkpoint tokens are
/// indices into this order.
pub fn enumerate_grid(grid: &SweepGrid) -> Vec<KWeight> {
    let shape = grid.shape;
    let heads = decreasing_blocks(shape.p(), grid.cap);
    let tails = decreasing_blocks(shape.q(), grid.cap);
    let mut out = Vec::with_capacity(heads.len() * tails.len());
    for head in &heads {
        for tail in &tails {
            out.push(KWeight::from_blocks(shape, head, tail).expect("generated weight is valid"));
        }
    }
    out.sort_unstable_by(|a, b| {
        let ka = (a.vector().coordinate_sum(), a.vector().flat());
        let kb = (b.vector().coordinate_sum(), b.vector().flat());
        ka.cmp(&kb)
    });
    out
}

struct CheckpointState {
    completed: u64,
    counterexamples: Vec<Counterexample>,
}

fn checkpoint_header(grid: &SweepGrid, claims_id: &str, total: u64) -> String {
    format!(
        "spinpq checkpoint v1\np: {}\nq: {}\ncap: {}\nrequire_dominant: {}\nclaims: {}\ntotal: {}\n",
        grid.shape.p(),
        grid.shape.q(),
        grid.cap,
        grid.require_mu_minus_beta_dominant,
        claims_id,
        total
    )
}

fn write_checkpoint(
    path: &Path,
    grid: &SweepGrid,
    claims_id: &str,
    total: u64,
    completed: u64,
    counterexamples: &[Counterexample],
) -> Result<()> {
    let mut text = checkpoint_header(grid, claims_id, total);
    text.push_str(&format!("completed: {completed}\n"));
    for c in counterexamples {
        let weight = c
            .weight
            .as_ref()
            .map(|w| w.to_string())
            .unwrap_or_else(|| "-".to_string());
        text.push_str(&format!("cx: {}\t{}\t{}\n", c.claim, weight, c.details));
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_checkpoint(
    path: &Path,
    grid: &SweepGrid,
    claims_id: &str,
    total: u64,
) -> Result<CheckpointState> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let expected_header = checkpoint_header(grid, claims_id, total);
    for expected in expected_header.lines() {
        let got = lines
            .next()
            .ok_or_else(|| Error::CheckpointFormat("truncated header".to_string()))?;
        if got != expected {
            return Err(Error::CheckpointMismatch(format!(
                "expected {expected:?}, found {got:?}"
            )));
        }
    }
    let completed_line = lines
        .next()
        .ok_or_else(|| Error::CheckpointFormat("missing completed line".to_string()))?;
    let completed: u64 = completed_line
        .strip_prefix("completed: ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::CheckpointFormat(format!("bad completed line {completed_line:?}")))?;
    if completed > total {
        return Err(Error::CheckpointFormat(format!(
            "completed {completed} exceeds total {total}"
        )));
    }
    let mut counterexamples = Vec::new();
    for line in lines {
        let body = line
            .strip_prefix("cx: ")
            .ok_or_else(|| Error::CheckpointFormat(format!("unexpected line {line:?}")))?;
        let mut parts = body.splitn(3, '\t');
        let (claim, weight, details) = match (parts.next(), parts.next(), parts.next()) {
            (Some(c), Some(w), Some(d)) => (c, w, d),
            _ => return Err(Error::CheckpointFormat(format!("bad cx line {line:?}"))),
        };
        let weight = if weight == "-" {
            None
        } else {
            Some(
                weight
                    .parse::<KWeight>()
                    .map_err(|e| Error::CheckpointFormat(e.to_string()))?,
            )
        };
        counterexamples.push(Counterexample {
            weight,
            claim: claim.to_string(),
            details: details.to_string(),
        });
    }
    Ok(CheckpointState {
        completed,
        counterexamples,
    })
}

fn run_sweep(
    grid: &SweepGrid,
    shape_claims: &[&ShapeClaim],
    weight_claims: &[&WeightClaim],
    opts: &SweepOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    assert!(grid.cap >= 1, "cap must be at least 1");
    let ctx = SweepCtx::new(*grid);
    let shape_claims: Vec<&ShapeClaim> = shape_claims
        .iter()
        .copied()
        .filter(|c| (c.applies)(grid))
        .collect();
    let weight_claims: Vec<&WeightClaim> = weight_claims
        .iter()
        .copied()
        .filter(|c| (c.applies)(grid))
        .collect();
    let claims_checked: Vec<String> = shape_claims
        .iter()
        .map(|c| c.name.to_string())
        .chain(weight_claims.iter().map(|c| c.name.to_string()))
        .collect();
    let claims_id = claims_checked.join(",");

    let weights = enumerate_grid(grid);
    let total = weights.len() as u64;

    let (mut completed, mut weight_cx) = match &opts.checkpoint {
        Some(path) if opts.resume && path.exists() => {
            let state = read_checkpoint(path, grid, &claims_id, total)?;
            (state.completed, state.counterexamples)
        }
        _ => (0, Vec::new()),
    };

    let mut counterexamples = Vec::new();
    for claim in &shape_claims {
        (claim.check)(&ctx, &mut counterexamples);
    }
    if opts.stream {
        for c in &counterexamples {
            eprintln!("counterexample: {c}");
        }
    }

    let threads = opts.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;

    let stop_at = match opts.max_weights {
        Some(m) => (completed + m).min(total),
        None => total,
    };
    while completed < stop_at {
        let end = (completed as usize + CHECKPOINT_BATCH).min(stop_at as usize);
        let batch = &weights[completed as usize..end];
        let found: Vec<Vec<Counterexample>> = pool.install(|| {
            batch
                .par_iter()
                .map(|mu| {
                    let mut found = Vec::new();
                    for claim in &weight_claims {
                        (claim.check)(mu, &ctx, &mut found);
                    }
                    found
                })
                .collect()
        });
        for per_weight in found {
            for c in per_weight {
                if opts.stream {
                    eprintln!("counterexample: {c}");
                }
                weight_cx.push(c);
            }
        }
        completed = end as u64;
        if let Some(path) = &opts.checkpoint {
            write_checkpoint(path, grid, &claims_id, total, completed, &weight_cx)?;
        }
    }

    counterexamples.extend(weight_cx);
    let checkpoint = if completed >= total {
        None
    } else {
        Some(format!("{completed}/{total}"))
    };
    Ok(VerificationReport {
        grid: *grid,
        claims_checked,
        weights_scanned: completed,
        counterexamples,
        wall_time: start.elapsed(),
        checkpoint,
    })
}

/// Sweeps the pencil monotonicity statement: every u-large weight with a
/// dominant predecessor has strictly larger squared spin norm than it.
pub fn verify_theorem(grid: &SweepGrid, opts: &SweepOptions) -> Result<VerificationReport> {
    run_sweep(grid, &[], &[&THEOREM_CLAIM], opts)
}

/// Sweeps the boundary statement: deficient indices of boundary weights
/// never attain the spin norm.
pub fn verify_prop_boundary(grid: &SweepGrid, opts: &SweepOptions) -> Result<VerificationReport> {
    run_sweep(grid, &[], &[&BOUNDARY_CLAIM], opts)
}

/// Sweeps the boundary descent-witness statement.
pub fn verify_lemma_down(grid: &SweepGrid, opts: &SweepOptions) -> Result<VerificationReport> {
    run_sweep(grid, &[], &[&LEMMA_DOWN_CLAIM], opts)
}

/// Runs every module-level property suite that applies to the grid's shape.
pub fn verify_all_properties(grid: &SweepGrid, opts: &SweepOptions) -> Result<VerificationReport> {
    let shape_claims: Vec<&ShapeClaim> = PROPERTY_SHAPE_CLAIMS.iter().collect();
    let weight_claims: Vec<&WeightClaim> = PROPERTY_WEIGHT_CLAIMS.iter().collect();
    run_sweep(grid, &shape_claims, &weight_claims, opts)
}
