//! Label-cover instances, labelings, coverage and cost semantics, and the
//! exhaustive searches used as ground truth by every other module.
//!
//! A label-cover instance is a bipartite constraint graph: arcs run from
//! left vertices to right vertices and each arc carries a total projection
//! from the left label set onto the right label set. A single labeling
//! covers an arc when the projection maps the left label to the right
//! label; a multi-labeling covers an arc when some chosen pair does.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::num::{q, q_int, q_one, q_zero, Q};
use crate::rng;

/// Label sets are stored as 64-bit masks.
pub const MAX_LABELS: usize = 64;

/// Default bound on the number of candidates an exhaustive search may visit.
/// Refusal is an explicit error, never silent truncation.
pub const DEFAULT_ENUM_CAP: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub left: usize,
    pub right: usize,
    /// `image[a]` is the right label the projection assigns to left label `a`.
    pub image: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelCosts {
    pub left: Q,
    pub right: Q,
}

#[derive(Clone, Debug)]
pub struct LabelCoverInstance {
    pub left_count: usize,
    pub right_count: usize,
    pub left_labels: usize,
    pub right_labels: usize,
    pub arcs: Vec<Arc>,
    pub costs: Option<LabelCosts>,
    /// Parallel arcs only appear after transformation passes explicitly
    /// create copies; the validator rejects them unless this is set.
    pub allow_parallel: bool,
    /// Recorded plant of a generated instance, for test use.
    pub planted: Option<Labeling>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Labeling {
    pub fn to_multi(&self) -> MultiLabeling {
        MultiLabeling {
            left: self.left.iter().map(|&a| LabelSet::singleton(a)).collect(),
            right: self.right.iter().map(|&b| LabelSet::singleton(b)).collect(),
        }
    }
}

/// A label subset as a bitmask. Empty sets are representable (and infeasible
/// on any vertex with incident arcs).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LabelSet(pub u64);

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet(0)
    }

    pub fn singleton(label: usize) -> Self {
        LabelSet(1u64 << label)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            LabelSet(u64::MAX)
        } else {
            LabelSet((1u64 << n) - 1)
        }
    }

    pub fn from_labels(labels: &[usize]) -> Self {
        let mut s = LabelSet(0);
        for &l in labels {
            s.insert(l);
        }
        s
    }

    pub fn contains(self, label: usize) -> bool {
        label < 64 && self.0 >> label & 1 == 1
    }

    pub fn insert(&mut self, label: usize) {
        self.0 |= 1u64 << label;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Lexicographic order over the sorted label lists, so `{0} < {0,1} < {1}`.
    pub fn cmp_set_lex(self, other: LabelSet) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let p = (self.0 ^ other.0).trailing_zeros();
        let self_has_p = self.0 >> p & 1 == 1;
        let (without, _with) = if self_has_p { (other, self) } else { (self, other) };
        // Sets agree below bit p. The set holding p is smaller exactly when
        // the other set still has elements above p.
        let with_is_less = without.0 >> p != 0;
        match (self_has_p, with_is_less) {
            (true, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiLabeling {
    pub left: Vec<LabelSet>,
    pub right: Vec<LabelSet>,
}

impl MultiLabeling {
    pub fn empty(instance: &LabelCoverInstance) -> Self {
        MultiLabeling {
            left: vec![LabelSet::empty(); instance.left_count],
            right: vec![LabelSet::empty(); instance.right_count],
        }
    }

    pub fn all_labels(instance: &LabelCoverInstance) -> Self {
        MultiLabeling {
            left: vec![LabelSet::full(instance.left_labels); instance.left_count],
            right: vec![LabelSet::full(instance.right_labels); instance.right_count],
        }
    }

    fn cmp_lex(&self, other: &MultiLabeling) -> Ordering {
        for (a, b) in self.left.iter().zip(&other.left) {
            match a.cmp_set_lex(*b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        for (a, b) in self.right.iter().zip(&other.right) {
            match a.cmp_set_lex(*b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// Exact degree statistics, counting parallel arcs with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub max_left: usize,
    pub min_left: usize,
    pub avg_left: Q,
    pub max_right: usize,
    pub min_right: usize,
    pub avg_right: Q,
    pub max_degree: usize,
    /// max_left / avg_left (1 when there are no arcs).
    pub left_ratio: Q,
    /// max_right / avg_right (1 when there are no arcs).
    pub right_ratio: Q,
}

impl DegreeProfile {
    pub fn is_left_regular(&self) -> bool {
        self.max_left == self.min_left
    }

    pub fn is_right_regular(&self) -> bool {
        self.max_right == self.min_right
    }

    pub fn is_biregular(&self) -> bool {
        self.is_left_regular() && self.is_right_regular()
    }

    pub fn is_regular(&self) -> bool {
        self.is_biregular() && self.max_left == self.max_right
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("left vertex set is empty")]
    EmptyLeft,
    #[error("right vertex set is empty")]
    EmptyRight,
    #[error("left label set is empty")]
    EmptyLeftLabels,
    #[error("right label set is empty")]
    EmptyRightLabels,
    #[error("label set size exceeds {MAX_LABELS}")]
    LabelSetTooLarge,
    #[error("arc {arc} endpoint ({left},{right}) out of range")]
    ArcEndpointOutOfRange { arc: usize, left: usize, right: usize },
    #[error("arc {arc} projection defined on {got} labels, expected {want}")]
    ProjectionNotTotal { arc: usize, got: usize, want: usize },
    #[error("arc {arc} maps label {label} to out-of-range image {image}")]
    ProjectionImageOutOfRange { arc: usize, label: usize, image: usize },
    #[error("arc {arc} duplicates arc {earlier} and parallel arcs are not allowed")]
    ParallelArc { arc: usize, earlier: usize },
    #[error("label cost {0} is negative")]
    NegativeCost(String),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("labeling shape does not match instance")]
    LabelingShape,
    #[error("label {label} out of range on the {side} side")]
    LabelOutOfRange { side: &'static str, label: usize },
    #[error("instance has no label costs")]
    MissingCosts,
    #[error("enumeration space of {estimate} candidates exceeds cap {cap}")]
    EnumerationCapExceeded { estimate: u128, cap: u128 },
    #[error("infeasible generation profile: {0}")]
    InfeasibleProfile(String),
}

/// Profile for seeded generation of left-regular instances with a planted
/// labeling covering at least a `1 - epsilon` fraction of the arcs.
#[derive(Clone, Debug)]
pub struct RandomProfile {
    pub left: usize,
    pub right: usize,
    pub left_labels: usize,
    pub right_labels: usize,
    pub degree: usize,
    pub epsilon: Q,
}

impl LabelCoverInstance {
    /// Checks every structural invariant; an empty list means the instance
    /// is well formed. Violations are data, not errors.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.left_count == 0 {
            out.push(Violation::EmptyLeft);
        }
        if self.right_count == 0 {
            out.push(Violation::EmptyRight);
        }
        if self.left_labels == 0 {
            out.push(Violation::EmptyLeftLabels);
        }
        if self.right_labels == 0 {
            out.push(Violation::EmptyRightLabels);
        }
        if self.left_labels > MAX_LABELS || self.right_labels > MAX_LABELS {
            out.push(Violation::LabelSetTooLarge);
        }
        if let Some(c) = &self.costs {
            if c.left < q_zero() {
                out.push(Violation::NegativeCost(crate::num::format_q(c.left)));
            }
            if c.right < q_zero() {
                out.push(Violation::NegativeCost(crate::num::format_q(c.right)));
            }
        }
        let mut seen: std::collections::BTreeMap<(usize, usize), usize> =
            std::collections::BTreeMap::new();
        for (idx, arc) in self.arcs.iter().enumerate() {
            if arc.left >= self.left_count || arc.right >= self.right_count {
                out.push(Violation::ArcEndpointOutOfRange {
                    arc: idx,
                    left: arc.left,
                    right: arc.right,
                });
                continue;
            }
            if arc.image.len() != self.left_labels {
                out.push(Violation::ProjectionNotTotal {
                    arc: idx,
                    got: arc.image.len(),
                    want: self.left_labels,
                });
            }
            for (label, &image) in arc.image.iter().enumerate() {
                if image >= self.right_labels {
                    out.push(Violation::ProjectionImageOutOfRange { arc: idx, label, image });
                }
            }
            if !self.allow_parallel {
                if let Some(&earlier) = seen.get(&(arc.left, arc.right)) {
                    out.push(Violation::ParallelArc { arc: idx, earlier });
                } else {
                    seen.insert((arc.left, arc.right), idx);
                }
            }
        }
        out
    }

    fn check_labeling(&self, labeling: &Labeling) -> Result<(), ModelError> {
        if labeling.left.len() != self.left_count || labeling.right.len() != self.right_count {
            return Err(ModelError::LabelingShape);
        }
        for &a in &labeling.left {
            if a >= self.left_labels {
                return Err(ModelError::LabelOutOfRange { side: "left", label: a });
            }
        }
        for &b in &labeling.right {
            if b >= self.right_labels {
                return Err(ModelError::LabelOutOfRange { side: "right", label: b });
            }
        }
        Ok(())
    }

    fn check_multi(&self, m: &MultiLabeling) -> Result<(), ModelError> {
        if m.left.len() != self.left_count || m.right.len() != self.right_count {
            return Err(ModelError::LabelingShape);
        }
        let lf = LabelSet::full(self.left_labels);
        let rf = LabelSet::full(self.right_labels);
        for s in &m.left {
            if s.0 & !lf.0 != 0 {
                let label = (s.0 & !lf.0).trailing_zeros() as usize;
                return Err(ModelError::LabelOutOfRange { side: "left", label });
            }
        }
        for s in &m.right {
            if s.0 & !rf.0 != 0 {
                let label = (s.0 & !rf.0).trailing_zeros() as usize;
                return Err(ModelError::LabelOutOfRange { side: "right", label });
            }
        }
        Ok(())
    }

    /// Number of arcs covered by a labeling, counting parallel arcs with
    /// multiplicity.
    pub fn covered_count(&self, labeling: &Labeling) -> Result<usize, ModelError> {
        self.check_labeling(labeling)?;
        Ok(self
            .arcs
            .iter()
            .filter(|arc| arc.image[labeling.left[arc.left]] == labeling.right[arc.right])
            .count())
    }

    /// Covered fraction in [0,1]. An instance without arcs counts as fully
    /// covered.
    pub fn coverage_fraction(&self, labeling: &Labeling) -> Result<Q, ModelError> {
        let covered = self.covered_count(labeling)?;
        if self.arcs.is_empty() {
            return Ok(q_one());
        }
        Ok(q(covered as i128, self.arcs.len() as i128))
    }

    /// Total cost of a multi-labeling under the instance costs.
    pub fn multi_cost(&self, m: &MultiLabeling) -> Result<Q, ModelError> {
        let costs = self.costs.as_ref().ok_or(ModelError::MissingCosts)?;
        self.check_multi(m)?;
        let left: usize = m.left.iter().map(|s| s.len()).sum();
        let right: usize = m.right.iter().map(|s| s.len()).sum();
        Ok(costs.left * q_int(left as i128) + costs.right * q_int(right as i128))
    }

    /// True when every arc has a chosen pair related by its projection.
    pub fn is_feasible(&self, m: &MultiLabeling) -> Result<bool, ModelError> {
        self.check_multi(m)?;
        Ok(self.arcs.iter().all(|arc| {
            m.left[arc.left]
                .iter()
                .any(|a| m.right[arc.right].contains(arc.image[a]))
        }))
    }

    /// Exact maximum coverage by exhaustive search over single labelings.
    ///
    /// The candidate space is |L1|^|U| * |L2|^|W|; if it exceeds `cap` the
    /// search refuses with the size estimate. Ties break lexicographically
    /// over (left assignment, right assignment) in vertex order, making the
    /// witness reproducible. The search walks left assignments in
    /// lexicographic order and picks, per right vertex, the smallest label
    /// maximizing the covered count, which realizes that order exactly.
    pub fn brute_force_max(&self, cap: u128) -> Result<(Labeling, Q), ModelError> {
        let estimate = enumeration_size(self.left_labels, self.left_count)
            .and_then(|l| enumeration_size(self.right_labels, self.right_count).map(|r| (l, r)))
            .and_then(|(l, r)| l.checked_mul(r));
        match estimate {
            Some(e) if e <= cap => {}
            _ => {
                return Err(ModelError::EnumerationCapExceeded {
                    estimate: estimate.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }

        let zero = Labeling {
            left: vec![0; self.left_count],
            right: vec![0; self.right_count],
        };
        if self.arcs.is_empty() {
            return Ok((zero, q_one()));
        }

        let mut arcs_by_right: Vec<Vec<usize>> = vec![Vec::new(); self.right_count];
        for (idx, arc) in self.arcs.iter().enumerate() {
            arcs_by_right[arc.right].push(idx);
        }

        let mut left = vec![0usize; self.left_count];
        let mut best: Option<(usize, Labeling)> = None;
        let mut counts = vec![0usize; self.right_labels];
        loop {
            let mut total = 0usize;
            let mut right = vec![0usize; self.right_count];
            for (w, incident) in arcs_by_right.iter().enumerate() {
                if incident.is_empty() {
                    continue;
                }
                counts.iter_mut().for_each(|c| *c = 0);
                for &idx in incident {
                    let arc = &self.arcs[idx];
                    counts[arc.image[left[arc.left]]] += 1;
                }
                let (b, cnt) = counts
                    .iter()
                    .enumerate()
                    .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
                    .unwrap();
                total += cnt;
                right[w] = b;
            }
            if best.as_ref().map_or(true, |(c, _)| total > *c) {
                best = Some((total, Labeling { left: left.clone(), right }));
            }
            if !increment(&mut left, self.left_labels) {
                break;
            }
        }

        let (covered, labeling) = best.unwrap();
        Ok((labeling, q(covered as i128, self.arcs.len() as i128)))
    }

    /// Exact minimum feasible cost by exhaustive search over multi-labelings.
    ///
    /// The candidate space is 2^(|L1||U| + |L2||W|); refuses beyond `cap`.
    /// A feasible assignment always exists because projections are total and
    /// the label sets are nonempty.
    pub fn brute_force_min_cost(&self, cap: u128) -> Result<(MultiLabeling, Q), ModelError> {
        let costs = self.costs.as_ref().ok_or(ModelError::MissingCosts)?;
        let bits = self
            .left_labels
            .checked_mul(self.left_count)
            .and_then(|l| self.right_labels.checked_mul(self.right_count).map(|r| l + r));
        match bits {
            Some(b) if b < 128 && 1u128 << b <= cap => {}
            _ => {
                return Err(ModelError::EnumerationCapExceeded {
                    estimate: bits.map_or(u128::MAX, |b| {
                        if b >= 128 {
                            u128::MAX
                        } else {
                            1u128 << b
                        }
                    }),
                    cap,
                })
            }
        }

        let lf = LabelSet::full(self.left_labels).0;
        let rf = LabelSet::full(self.right_labels).0;
        let vertex_count = self.left_count + self.right_count;
        let mut masks = vec![0u64; vertex_count];
        let mut best: Option<(Q, MultiLabeling)> = None;
        loop {
            let candidate = MultiLabeling {
                left: masks[..self.left_count].iter().map(|&m| LabelSet(m)).collect(),
                right: masks[self.left_count..].iter().map(|&m| LabelSet(m)).collect(),
            };
            let feasible = self.arcs.iter().all(|arc| {
                candidate.left[arc.left]
                    .iter()
                    .any(|a| candidate.right[arc.right].contains(arc.image[a]))
            });
            if feasible {
                let left: usize = candidate.left.iter().map(|s| s.len()).sum();
                let right: usize = candidate.right.iter().map(|s| s.len()).sum();
                let cost =
                    costs.left * q_int(left as i128) + costs.right * q_int(right as i128);
                let better = match &best {
                    None => true,
                    Some((bc, bw)) => {
                        cost < *bc
                            || (cost == *bc && candidate.cmp_lex(bw) == Ordering::Less)
                    }
                };
                if better {
                    best = Some((cost, candidate));
                }
            }
            if !increment_masks(&mut masks, self.left_count, lf, rf) {
                break;
            }
        }

        let (cost, witness) =
            best.expect("total projections over nonempty labels always admit a cover");
        Ok((witness, cost))
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut left = vec![0usize; self.left_count];
        let mut right = vec![0usize; self.right_count];
        for arc in &self.arcs {
            left[arc.left] += 1;
            right[arc.right] += 1;
        }
        let avg = |total: usize, n: usize| {
            if n == 0 {
                q_zero()
            } else {
                q(total as i128, n as i128)
            }
        };
        let ratio = |max: usize, avg: Q| {
            if avg == q_zero() {
                q_one()
            } else {
                q_int(max as i128) / avg
            }
        };
        let e = self.arcs.len();
        let max_left = left.iter().copied().max().unwrap_or(0);
        let min_left = left.iter().copied().min().unwrap_or(0);
        let max_right = right.iter().copied().max().unwrap_or(0);
        let min_right = right.iter().copied().min().unwrap_or(0);
        let avg_left = avg(e, self.left_count);
        let avg_right = avg(e, self.right_count);
        DegreeProfile {
            max_left,
            min_left,
            avg_left,
            max_right,
            min_right,
            avg_right,
            max_degree: max_left.max(max_right),
            left_ratio: ratio(max_left, avg_left),
            right_ratio: ratio(max_right, avg_right),
        }
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.left_count];
        for arc in &self.arcs {
            d[arc.left] += 1;
        }
        d
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.right_count];
        for arc in &self.arcs {
            d[arc.right] += 1;
        }
        d
    }

    /// Seeded left-regular instance with a planted labeling covering at
    /// least a `1 - epsilon` fraction of the arcs: exactly
    /// `ceil((1-eps)|E|)` arc projections are made consistent with the
    /// plant, the rest are uniform (and may cover by accident).
    pub fn random_instance(profile: &RandomProfile, seed: u64) -> Result<Self, ModelError> {
        Self::generate(profile, seed, true)
    }

    /// Seeded instance with uniformly random projections and no plant, used
    /// as the no-side of gap experiments.
    pub fn random_no_instance(profile: &RandomProfile, seed: u64) -> Result<Self, ModelError> {
        Self::generate(profile, seed, false)
    }

    fn generate(profile: &RandomProfile, seed: u64, plant: bool) -> Result<Self, ModelError> {
        if profile.left == 0 || profile.right == 0 {
            return Err(ModelError::InfeasibleProfile("empty vertex side".into()));
        }
        if profile.left_labels == 0
            || profile.right_labels == 0
            || profile.left_labels > MAX_LABELS
            || profile.right_labels > MAX_LABELS
        {
            return Err(ModelError::InfeasibleProfile("bad label set size".into()));
        }
        if profile.degree == 0 || profile.degree > profile.right {
            return Err(ModelError::InfeasibleProfile(format!(
                "left degree {} not in 1..={}",
                profile.degree, profile.right
            )));
        }
        if profile.epsilon < q_zero() || profile.epsilon >= q_one() {
            return Err(ModelError::InfeasibleProfile("epsilon not in [0,1)".into()));
        }

        let mut rng = rng::stream(seed, "gen");
        let mut arcs = Vec::with_capacity(profile.left * profile.degree);
        let mut pool: Vec<usize> = (0..profile.right).collect();
        for u in 0..profile.left {
            // degree distinct right neighbors per left vertex
            for i in 0..profile.degree {
                let j = rng.random_range(i..pool.len());
                pool.swap(i, j);
            }
            let mut chosen: Vec<usize> = pool[..profile.degree].to_vec();
            chosen.sort_unstable();
            for w in chosen {
                arcs.push(Arc { left: u, right: w, image: vec![0; profile.left_labels] });
            }
        }

        let planted = Labeling {
            left: (0..profile.left)
                .map(|_| rng.random_range(0..profile.left_labels))
                .collect(),
            right: (0..profile.right)
                .map(|_| rng.random_range(0..profile.right_labels))
                .collect(),
        };

        let total = arcs.len();
        let consistent: BTreeSet<usize> = if plant {
            // ceil((1-eps)|E|) arcs agree with the plant
            let keep = q_one() - profile.epsilon;
            let m = (keep * q_int(total as i128)).ceil().to_integer() as usize;
            let mut order: Vec<usize> = (0..total).collect();
            order.shuffle(&mut rng);
            order.into_iter().take(m).collect()
        } else {
            BTreeSet::new()
        };

        for (idx, arc) in arcs.iter_mut().enumerate() {
            for a in 0..profile.left_labels {
                arc.image[a] = rng.random_range(0..profile.right_labels);
            }
            if consistent.contains(&idx) {
                arc.image[planted.left[arc.left]] = planted.right[arc.right];
            }
        }

        Ok(LabelCoverInstance {
            left_count: profile.left,
            right_count: profile.right,
            left_labels: profile.left_labels,
            right_labels: profile.right_labels,
            arcs,
            costs: None,
            allow_parallel: false,
            planted: plant.then_some(planted),
        })
    }
}

fn enumeration_size(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(u32::try_from(exp).ok()?)
}

/// Advances a mixed-radix counter with the last digit fastest; false on wrap.
fn increment(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn increment_masks(masks: &mut [u64], left_count: usize, left_full: u64, right_full: u64) -> bool {
    let n = masks.len();
    for i in (0..n).rev() {
        let full = if i < left_count { left_full } else { right_full };
        if masks[i] < full {
            masks[i] += 1;
            return true;
        }
        masks[i] = 0;
    }
    false
}
