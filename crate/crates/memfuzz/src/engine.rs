//! Operational semantics: triggering, grade-distribution choices,
//! maximal-parallel transition enumeration and bounded exploration.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::fuzzy::{ExtNat, Grade};
use crate::ids::{MembraneId, ReactiveId, RegionId};
use crate::model::{Configuration, PSystem, Rule};

/// A multiset of rule instances, counted per `(membrane, rule index)` slot.
pub type Family = BTreeMap<(MembraneId, usize), u64>;

/// The per-grade split chosen for one application of one rule: how many
/// copies of each moved reactive enter or exit at each grade.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distribution {
    pub enter: BTreeMap<ReactiveId, BTreeMap<Grade, u64>>,
    pub exit: BTreeMap<ReactiveId, BTreeMap<Grade, u64>>,
}

impl Distribution {
    pub fn enter_count(&self, v: &ReactiveId, t: Grade) -> u64 {
        self.enter
            .get(v)
            .and_then(|m| m.get(&t))
            .copied()
            .unwrap_or(0)
    }

    pub fn exit_count(&self, v: &ReactiveId, t: Grade) -> u64 {
        self.exit
            .get(v)
            .and_then(|m| m.get(&t))
            .copied()
            .unwrap_or(0)
    }
}

/// One rule application within a transition, with its chosen distribution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleInstance {
    pub membrane: MembraneId,
    pub rule_index: usize,
    pub distribution: Distribution,
}

/// A maximal family of rule instances together with every per-instance
/// distribution; fully determines the result of one transition.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionChoice {
    pub instances: Vec<RuleInstance>,
}

impl TransitionChoice {
    /// The underlying multiset of `(membrane, rule index)` slots.
    pub fn family(&self) -> Family {
        let mut f = Family::new();
        for inst in &self.instances {
            *f.entry((inst.membrane, inst.rule_index)).or_insert(0) += 1;
        }
        f
    }
}

impl fmt::Display for TransitionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for inst in &self.instances {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", inst.membrane, inst.rule_index)?;
            first = false;
        }
        Ok(())
    }
}

/// Knobs for [`enumerate_transitions`].
#[derive(Debug, Clone)]
pub struct TransitionOptions {
    /// Collapse transitions that produce the same configuration, keeping
    /// the first choice in canonical enumeration order. The generated fuzzy
    /// set only depends on reachable halting configurations, so this is on
    /// by default.
    pub dedup_by_result: bool,
    /// Cap on enumeration work: attempted candidate placements plus
    /// completed assignments, before deduplication.
    pub max_transitions: usize,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        TransitionOptions {
            dedup_by_result: true,
            max_transitions: 10_000,
        }
    }
}

/// Transitions out of one configuration. `truncated` reports that the raw
/// enumeration cap was hit, so the list may be incomplete.
#[derive(Debug, Clone, Default)]
pub struct TransitionSet {
    pub transitions: Vec<(TransitionChoice, Configuration)>,
    pub truncated: bool,
}

/// Exploration bounds; the defaults are desk-scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreBounds {
    pub max_depth: usize,
    pub max_configs: usize,
    pub max_transitions_per_config: usize,
}

impl Default for ExploreBounds {
    fn default() -> Self {
        ExploreBounds {
            max_depth: 64,
            max_configs: 100_000,
            max_transitions_per_config: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationReason {
    DepthLimit,
    ConfigLimit,
    TransitionLimit,
}

impl fmt::Display for TruncationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationReason::DepthLimit => write!(f, "depth-limit"),
            TruncationReason::ConfigLimit => write!(f, "config-limit"),
            TruncationReason::TransitionLimit => write!(f, "transition-limit"),
        }
    }
}

/// One explored transition between discovered configurations.
#[derive(Debug, Clone)]
pub struct Edge {
    pub from: usize,
    pub choice: TransitionChoice,
    pub to: usize,
}

/// Outcome of a bounded breadth-first exploration. Configurations are keyed
/// by discovery order, which is deterministic.
#[derive(Debug, Clone)]
pub struct ExplorationResult {
    pub configs: Vec<Configuration>,
    pub depths: Vec<usize>,
    pub edges: Vec<Edge>,
    pub halting_ids: BTreeSet<usize>,
    /// True iff the reachable state space was covered completely within the
    /// bounds; every halting configuration is then present.
    pub exhausted: bool,
    pub visited_count: usize,
    pub depth_reached: usize,
    pub truncation_reason: Option<TruncationReason>,
}

impl ExplorationResult {
    pub fn halting_configurations(&self) -> impl Iterator<Item = &Configuration> {
        self.halting_ids.iter().map(|&i| &self.configs[i])
    }

    pub fn initial(&self) -> &Configuration {
        &self.configs[0]
    }
}

/// The two draws an instance makes: the incoming word comes from the parent
/// region, the outgoing word from the membrane itself.
fn rule_sides<'a>(
    sys: &'a PSystem,
    m: MembraneId,
    rule: &'a Rule,
) -> [(
    RegionId,
    &'a crate::model::RuleWord,
    &'a crate::model::ThresholdMap,
); 2] {
    let parent = sys
        .structure
        .parent(m)
        .expect("rule on membrane outside the structure");
    [
        (parent, &rule.incoming, &rule.tau_in),
        (RegionId::Membrane(m), &rule.outgoing, &rule.tau_out),
    ]
}

/// True iff the rule's aggregate level-sum inequalities hold: enough copies
/// of every incoming reactive in the parent region and of every outgoing
/// reactive in the membrane, within the thresholds.
pub fn can_trigger(sys: &PSystem, cfg: &Configuration, m: MembraneId, r: usize) -> bool {
    let rule = sys
        .rule(m, r)
        .unwrap_or_else(|| panic!("unknown rule {m}:{r}"));
    rule_sides(sys, m, rule).iter().all(|(region, word, tau)| {
        word.iter().all(|(v, n)| {
            let t = tau.get(v).copied().unwrap_or(Grade::zero());
            let t = if t.is_zero() {
                // Guarded by validation; a zero threshold on a moved letter
                // would make the level sum ill-defined.
                sys.grades.min_positive()
            } else {
                t
            };
            cfg.region(*region).level_sum(v, t) >= ExtNat::fin(n)
        })
    })
}

/// Demand summary of a family: per `(region, reactive)`, the thresholded
/// amounts drawn from that region.
fn demand_map(
    sys: &PSystem,
    family: &Family,
) -> BTreeMap<(RegionId, ReactiveId), Vec<(Grade, u64)>> {
    let mut demands: BTreeMap<(RegionId, ReactiveId), Vec<(Grade, u64)>> = BTreeMap::new();
    for (&(m, r), &mult) in family {
        if mult == 0 {
            continue;
        }
        let rule = sys
            .rule(m, r)
            .unwrap_or_else(|| panic!("unknown rule {m}:{r}"));
        for (region, word, tau) in rule_sides(sys, m, rule) {
            for (v, n) in word.iter() {
                let t = tau.get(v).copied().unwrap_or(Grade::zero());
                demands
                    .entry((region, v.clone()))
                    .or_default()
                    .push((t, n * mult));
            }
        }
    }
    demands
}

/// The aggregate feasibility condition for simultaneous application: at every
/// positive grade, the demand requiring at least that grade stays within the
/// level sum of the supplying region.
pub fn family_feasible(sys: &PSystem, cfg: &Configuration, family: &Family) -> bool {
    for ((region, v), items) in demand_map(sys, family) {
        for &t in sys.grades.positive() {
            let need: u64 = items
                .iter()
                .filter(|&&(tau, _)| tau >= t)
                .map(|&(_, n)| n)
                .sum();
            if need == 0 {
                continue;
            }
            if cfg.region(region).level_sum(&v, t) < ExtNat::fin(need) {
                return false;
            }
        }
    }
    true
}

/// True iff no single further instance can be added to `family` while
/// keeping the aggregate condition satisfied.
///
/// Panics when `family` itself violates the aggregate condition.
pub fn is_maximal(sys: &PSystem, cfg: &Configuration, family: &Family) -> bool {
    assert!(
        family_feasible(sys, cfg, family),
        "maximality asked of an infeasible family"
    );
    for (m, rules) in &sys.rules {
        for r in 0..rules.len() {
            let mut extended = family.clone();
            *extended.entry((*m, r)).or_insert(0) += 1;
            if family_feasible(sys, cfg, &extended) {
                return false;
            }
        }
    }
    true
}

/// Largest number of instances of one slot that is feasible on its own.
/// Finite for every rule of a validated system.
fn slot_bound(sys: &PSystem, cfg: &Configuration, m: MembraneId, r: usize) -> u64 {
    let rule = sys.rule(m, r).expect("slot_bound of unknown rule");
    let mut bound: Option<u64> = None;
    for (region, word, tau) in rule_sides(sys, m, rule) {
        for (v, n) in word.iter() {
            let t = tau.get(v).copied().unwrap_or(Grade::zero());
            let t = if t.is_zero() {
                sys.grades.min_positive()
            } else {
                t
            };
            match cfg.region(region).level_sum(v, t) {
                ExtNat::Fin(supply) => {
                    let k = supply / n;
                    bound = Some(bound.map_or(k, |b| b.min(k)));
                }
                ExtNat::Inf => {}
            }
        }
    }
    bound.unwrap_or_else(|| {
        panic!("rule {m}:{r} admits unboundedly many instances; system not validated")
    })
}

/// Incremental tracker of the aggregate condition: per constrained
/// `(region, reactive, grade)` it keeps the remaining slack of the level-sum
/// inequality. Pushing an instance decrements every constraint its demands
/// touch; unconstrained (infinite-supply) entries are simply absent.
struct SlackCursor {
    /// Remaining slack per constraint key; indices into `keys`.
    slack: Vec<i64>,
    /// Per slot, the touched constraints with the per-instance amount.
    slot_touches: Vec<Vec<(usize, u64)>>,
}

impl SlackCursor {
    fn new(sys: &PSystem, cfg: &Configuration, slots: &[(MembraneId, usize)]) -> SlackCursor {
        let mut key_index: BTreeMap<(RegionId, ReactiveId, Grade), usize> = BTreeMap::new();
        let mut slack: Vec<i64> = Vec::new();
        let mut slot_touches = Vec::with_capacity(slots.len());
        for &(m, r) in slots {
            let rule = sys.rule(m, r).expect("slot of unknown rule");
            let mut touches: Vec<(usize, u64)> = Vec::new();
            for (region, word, tau) in rule_sides(sys, m, rule) {
                for (v, n) in word.iter() {
                    let threshold = tau.get(v).copied().unwrap_or(Grade::zero());
                    // A demand thresholded at tau counts against the
                    // constraint at every grade up to tau.
                    for &t in sys.grades.positive() {
                        if t > threshold {
                            break;
                        }
                        match cfg.region(region).level_sum(v, t) {
                            ExtNat::Inf => {}
                            ExtNat::Fin(supply) => {
                                let key = (region, v.clone(), t);
                                let idx = *key_index.entry(key).or_insert_with(|| {
                                    slack.push(supply.min(i64::MAX as u64) as i64);
                                    slack.len() - 1
                                });
                                touches.push((idx, n));
                            }
                        }
                    }
                }
            }
            slot_touches.push(touches);
        }
        SlackCursor {
            slack,
            slot_touches,
        }
    }

    fn can_push(&self, slot: usize) -> bool {
        self.slot_touches[slot]
            .iter()
            .all(|&(idx, n)| self.slack[idx] >= n as i64)
    }

    fn push(&mut self, slot: usize) -> bool {
        if !self.can_push(slot) {
            return false;
        }
        for &(idx, n) in &self.slot_touches[slot] {
            self.slack[idx] -= n as i64;
        }
        true
    }

    fn pop(&mut self, slot: usize) {
        for &(idx, n) in &self.slot_touches[slot] {
            self.slack[idx] += n as i64;
        }
    }

    /// True iff no slot admits one more instance.
    fn saturated(&self) -> bool {
        (0..self.slot_touches.len()).all(|s| !self.can_push(s))
    }
}

/// All maximal families, in canonical slot order.
pub fn maximal_families(sys: &PSystem, cfg: &Configuration) -> Vec<Family> {
    let slots: Vec<(MembraneId, usize)> = sys
        .rules
        .iter()
        .flat_map(|(&m, rules)| (0..rules.len()).map(move |r| (m, r)))
        .collect();
    let bounds: Vec<u64> = slots
        .iter()
        .map(|&(m, r)| slot_bound(sys, cfg, m, r))
        .collect();
    let mut cursor = SlackCursor::new(sys, cfg, &slots);

    let mut found = Vec::new();
    let mut counts: Vec<u64> = vec![0; slots.len()];
    fn recurse(
        slots: &[(MembraneId, usize)],
        bounds: &[u64],
        idx: usize,
        cursor: &mut SlackCursor,
        counts: &mut Vec<u64>,
        found: &mut Vec<Family>,
    ) {
        if idx == slots.len() {
            if counts.iter().any(|&k| k > 0) && cursor.saturated() {
                found.push(
                    counts
                        .iter()
                        .enumerate()
                        .filter(|(_, &k)| k > 0)
                        .map(|(i, &k)| (slots[i], k))
                        .collect(),
                );
            }
            return;
        }
        let mut pushed = 0u64;
        loop {
            counts[idx] = pushed;
            recurse(slots, bounds, idx + 1, cursor, counts, found);
            if pushed >= bounds[idx] || !cursor.push(idx) {
                break;
            }
            pushed += 1;
        }
        counts[idx] = 0;
        for _ in 0..pushed {
            cursor.pop(idx);
        }
    }
    recurse(&slots, &bounds, 0, &mut cursor, &mut counts, &mut found);
    found
}

/// All per-grade splits of `need` copies over the grades of `caps`, each
/// bounded by its cap, in ascending grade order.
fn grade_vectors(need: u64, caps: &[(Grade, ExtNat)]) -> Vec<BTreeMap<Grade, u64>> {
    let mut out = Vec::new();
    let mut acc: BTreeMap<Grade, u64> = BTreeMap::new();
    fn recurse(
        need: u64,
        caps: &[(Grade, ExtNat)],
        acc: &mut BTreeMap<Grade, u64>,
        out: &mut Vec<BTreeMap<Grade, u64>>,
    ) {
        if caps.is_empty() {
            if need == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let (t, cap) = caps[0];
        let most = match cap {
            ExtNat::Fin(c) => c.min(need),
            ExtNat::Inf => need,
        };
        for take in 0..=most {
            if take > 0 {
                acc.insert(t, take);
            }
            recurse(need - take, &caps[1..], acc, out);
            acc.remove(&t);
        }
    }
    recurse(need, caps, &mut acc, &mut out);
    out
}

/// All distributions for a single instance of rule `(m, r)`, each bounded
/// per grade by the current region counts. Duplicate-free and canonically
/// ordered.
///
/// Panics unless the rule can trigger.
pub fn enumerate_applications(
    sys: &PSystem,
    cfg: &Configuration,
    m: MembraneId,
    r: usize,
) -> Vec<Distribution> {
    assert!(
        can_trigger(sys, cfg, m, r),
        "enumerate_applications of a rule that cannot trigger"
    );
    let rule = sys.rule(m, r).unwrap();
    let mut dists = vec![Distribution::default()];
    for (side_idx, (region, word, tau)) in rule_sides(sys, m, rule).into_iter().enumerate() {
        for (v, n) in word.iter() {
            let threshold = tau.get(v).copied().unwrap_or(Grade::zero());
            let caps: Vec<(Grade, ExtNat)> = sys
                .grades
                .positive()
                .iter()
                .filter(|&&t| t >= threshold && !threshold.is_zero())
                .map(|&t| (t, cfg.region(region).get(v, t)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let vectors = grade_vectors(n, &caps);
            let mut next = Vec::with_capacity(dists.len() * vectors.len());
            for d in &dists {
                for vec in &vectors {
                    let mut d = d.clone();
                    let side = if side_idx == 0 {
                        &mut d.enter
                    } else {
                        &mut d.exit
                    };
                    side.insert(v.clone(), vec.clone());
                    next.push(d);
                }
            }
            dists = next;
        }
    }
    dists.sort();
    dists
}

/// Applies a single rule instance, returning the resulting configuration.
/// Every region other than the membrane and its parent is untouched;
/// infinite environment entries stay infinite.
pub fn apply_one(sys: &PSystem, cfg: &Configuration, instance: &RuleInstance) -> Configuration {
    apply_instances(sys, cfg, std::slice::from_ref(instance))
}

/// Simultaneous application: all removals happen against the original
/// supplies, then all additions land. An underflow here means the caller
/// bypassed the feasibility conditions.
fn apply_instances(
    sys: &PSystem,
    cfg: &Configuration,
    instances: &[RuleInstance],
) -> Configuration {
    let mut next = cfg.clone();
    for inst in instances {
        let parent = sys
            .structure
            .parent(inst.membrane)
            .expect("instance on membrane outside the structure");
        let own = RegionId::Membrane(inst.membrane);
        for (v, per_grade) in &inst.distribution.enter {
            for (&t, &c) in per_grade {
                next.region_mut(parent).remove(v.clone(), t, ExtNat::fin(c));
            }
        }
        for (v, per_grade) in &inst.distribution.exit {
            for (&t, &c) in per_grade {
                next.region_mut(own).remove(v.clone(), t, ExtNat::fin(c));
            }
        }
    }
    for inst in instances {
        let parent = sys.structure.parent(inst.membrane).unwrap();
        let own = RegionId::Membrane(inst.membrane);
        for (v, per_grade) in &inst.distribution.enter {
            for (&t, &c) in per_grade {
                next.region_mut(own).add(v.clone(), t, ExtNat::fin(c));
            }
        }
        for (v, per_grade) in &inst.distribution.exit {
            for (&t, &c) in per_grade {
                next.region_mut(parent).add(v.clone(), t, ExtNat::fin(c));
            }
        }
    }
    next
}

/// Net movement of one assignment, per `(region, reactive, grade)`.
type Delta = Vec<((RegionId, ReactiveId, Grade), i64)>;

fn delta_of(sys: &PSystem, instances: &[RuleInstance]) -> Delta {
    let mut acc: BTreeMap<(RegionId, ReactiveId, Grade), i64> = BTreeMap::new();
    for inst in instances {
        let parent = sys.structure.parent(inst.membrane).unwrap();
        let own = RegionId::Membrane(inst.membrane);
        for (v, per_grade) in &inst.distribution.enter {
            for (&t, &c) in per_grade {
                *acc.entry((parent, v.clone(), t)).or_insert(0) -= c as i64;
                *acc.entry((own, v.clone(), t)).or_insert(0) += c as i64;
            }
        }
        for (v, per_grade) in &inst.distribution.exit {
            for (&t, &c) in per_grade {
                *acc.entry((own, v.clone(), t)).or_insert(0) -= c as i64;
                *acc.entry((parent, v.clone(), t)).or_insert(0) += c as i64;
            }
        }
    }
    acc.retain(|_, n| *n != 0);
    acc.into_iter().collect()
}

struct JointEnumerator<'a> {
    sys: &'a PSystem,
    cfg: &'a Configuration,
    budget: usize,
    raw_count: usize,
    truncated: bool,
    dedup_by_result: bool,
    seen_deltas: BTreeSet<Delta>,
    out: Vec<(TransitionChoice, Configuration)>,
}

impl JointEnumerator<'_> {
    /// Enumerates every joint distribution assignment for `family`,
    /// respecting per-grade capacities shared across instances. Instances of
    /// the same slot are kept in non-decreasing distribution order so each
    /// multiset of instances appears exactly once.
    ///
    /// Capacities are tracked as a flat slack vector over the finite-supply
    /// entries each candidate touches; infinite pools never constrain.
    fn run(
        &mut self,
        family: &Family,
        cache: &mut BTreeMap<(MembraneId, usize), Vec<Distribution>>,
    ) {
        let slots: Vec<((MembraneId, usize), u64)> = family.iter().map(|(&s, &k)| (s, k)).collect();
        for &(slot, _) in &slots {
            cache
                .entry(slot)
                .or_insert_with(|| enumerate_applications(self.sys, self.cfg, slot.0, slot.1));
        }
        let candidates: Vec<&[Distribution]> = slots
            .iter()
            .map(|(slot, _)| cache[slot].as_slice())
            .collect();

        let mut key_index: BTreeMap<(RegionId, ReactiveId, Grade), usize> = BTreeMap::new();
        let mut caps: Vec<i64> = Vec::new();
        let mut footprints: Vec<Vec<Vec<(usize, i64)>>> = Vec::with_capacity(slots.len());
        for (i, &((m, _), _)) in slots.iter().enumerate() {
            let parent = self.sys.structure.parent(m).unwrap();
            let own = RegionId::Membrane(m);
            let mut per_candidate = Vec::with_capacity(candidates[i].len());
            for dist in candidates[i] {
                let mut flat: Vec<(usize, i64)> = Vec::new();
                for (region, side) in [(parent, &dist.enter), (own, &dist.exit)] {
                    for (v, per_grade) in side {
                        for (&t, &c) in per_grade {
                            match self.cfg.region(region).get(v, t) {
                                ExtNat::Inf => {}
                                ExtNat::Fin(supply) => {
                                    let idx = *key_index
                                        .entry((region, v.clone(), t))
                                        .or_insert_with(|| {
                                            caps.push(supply.min(i64::MAX as u64) as i64);
                                            caps.len() - 1
                                        });
                                    flat.push((idx, c as i64));
                                }
                            }
                        }
                    }
                }
                per_candidate.push(flat);
            }
            footprints.push(per_candidate);
        }

        let mut chosen: Vec<RuleInstance> = Vec::new();
        self.assign_slot(
            &slots,
            &candidates,
            &footprints,
            0,
            0,
            0,
            &mut caps,
            &mut chosen,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_slot(
        &mut self,
        slots: &[((MembraneId, usize), u64)],
        candidates: &[&[Distribution]],
        footprints: &[Vec<Vec<(usize, i64)>>],
        slot_idx: usize,
        copy_idx: u64,
        min_candidate: usize,
        caps: &mut Vec<i64>,
        chosen: &mut Vec<RuleInstance>,
    ) {
        if self.truncated {
            return;
        }
        if slot_idx == slots.len() {
            self.raw_count += 1;
            if self.raw_count > self.budget {
                self.truncated = true;
                return;
            }
            if self.dedup_by_result {
                // Same net movement means same result; skip materializing.
                let delta = delta_of(self.sys, chosen);
                if !self.seen_deltas.insert(delta) {
                    return;
                }
            }
            let mut instances = chosen.clone();
            instances.sort();
            let choice = TransitionChoice { instances };
            let result = apply_instances(self.sys, self.cfg, &choice.instances);
            self.out.push((choice, result));
            return;
        }
        let ((m, r), mult) = slots[slot_idx];
        if copy_idx == mult {
            self.assign_slot(
                slots,
                candidates,
                footprints,
                slot_idx + 1,
                0,
                0,
                caps,
                chosen,
            );
            return;
        }
        for ci in min_candidate..candidates[slot_idx].len() {
            // Every attempted candidate counts against the budget, so a
            // search that keeps failing the shared capacities still
            // terminates as a reported truncation.
            self.raw_count += 1;
            if self.raw_count > self.budget {
                self.truncated = true;
                return;
            }
            let footprint = &footprints[slot_idx][ci];
            if !footprint.iter().all(|&(k, n)| caps[k] >= n) {
                continue;
            }
            for &(k, n) in footprint {
                caps[k] -= n;
            }
            chosen.push(RuleInstance {
                membrane: m,
                rule_index: r,
                distribution: candidates[slot_idx][ci].clone(),
            });
            self.assign_slot(
                slots,
                candidates,
                footprints,
                slot_idx,
                copy_idx + 1,
                ci,
                caps,
                chosen,
            );
            chosen.pop();
            for &(k, n) in footprint {
                caps[k] += n;
            }
            if self.truncated {
                return;
            }
        }
    }
}

/// Enumerates every transition out of `cfg`: all maximal families together
/// with all distribution assignments. Empty exactly when `cfg` is halting.
pub fn enumerate_transitions(
    sys: &PSystem,
    cfg: &Configuration,
    opts: &TransitionOptions,
) -> TransitionSet {
    let families = maximal_families(sys, cfg);
    let mut en = JointEnumerator {
        sys,
        cfg,
        budget: opts.max_transitions,
        raw_count: 0,
        truncated: false,
        dedup_by_result: opts.dedup_by_result,
        seen_deltas: BTreeSet::new(),
        out: Vec::new(),
    };
    let mut candidate_cache = BTreeMap::new();
    for family in &families {
        en.run(family, &mut candidate_cache);
        if en.truncated {
            break;
        }
    }
    let transitions = if opts.dedup_by_result {
        // Each kept choice is the first in canonical enumeration order for
        // its resulting configuration; order the list by result.
        let mut by_result: BTreeMap<Configuration, TransitionChoice> = en
            .out
            .into_iter()
            .map(|(choice, result)| (result, choice))
            .collect();
        let mut transitions = Vec::with_capacity(by_result.len());
        while let Some((result, choice)) = by_result.pop_first() {
            transitions.push((choice, result));
        }
        transitions
    } else {
        let set: BTreeSet<(TransitionChoice, Configuration)> = en.out.into_iter().collect();
        set.into_iter().collect()
    };
    TransitionSet {
        transitions,
        truncated: en.truncated,
    }
}

/// Checks bookkeeping across one transition: infinite entries are exactly
/// preserved, membranes stay finite, and per `(reactive, grade)` the total
/// over finite regions changes only by the flow exchanged with infinite
/// environment entries.
pub fn verify_edge(
    sys: &PSystem,
    before: &Configuration,
    after: &Configuration,
    choice: &TransitionChoice,
) -> Result<(), String> {
    let mut keys: BTreeSet<(ReactiveId, Grade)> = BTreeSet::new();
    for cfg in [before, after] {
        for (_, content) in cfg.regions() {
            for (v, t, _) in content.iter() {
                keys.insert((v.clone(), t));
            }
        }
    }

    for (v, t) in keys {
        let mut total_before = 0u64;
        let mut total_after = 0u64;
        let mut env_infinite = false;
        for region in sys.structure.regions() {
            let b = before.region(region).get(&v, t);
            let a = after.region(region).get(&v, t);
            if b.is_infinite() != a.is_infinite() {
                return Err(format!("infinity of ({v}, {t}) in {region} not preserved"));
            }
            if a.is_infinite() {
                if !region.is_env() {
                    return Err(format!("membrane {region} holds infinite ({v}, {t})"));
                }
                env_infinite = true;
                continue;
            }
            total_before += b.as_finite().unwrap();
            total_after += a.as_finite().unwrap();
        }
        // Flow exchanged with the unbounded environment pool through the
        // skin; zero when the pool is finite at this entry.
        let mut net_from_env: i128 = 0;
        if env_infinite {
            for inst in &choice.instances {
                if inst.membrane == MembraneId::SKIN {
                    net_from_env += inst.distribution.enter_count(&v, t) as i128;
                    net_from_env -= inst.distribution.exit_count(&v, t) as i128;
                }
            }
        }
        if total_after as i128 - total_before as i128 != net_from_env {
            return Err(format!(
                "({v}, {t}) total over finite regions changed from {total_before} to \
                 {total_after} with net environment flow {net_from_env}"
            ));
        }
    }
    Ok(())
}

/// Breadth-first exploration from the initial configuration with
/// configuration-level memoization: each configuration is expanded once, so
/// cycles close instead of diverging.
pub fn explore(sys: &PSystem, bounds: &ExploreBounds) -> ExplorationResult {
    let opts = TransitionOptions {
        dedup_by_result: true,
        max_transitions: bounds.max_transitions_per_config,
    };

    let mut configs: Vec<Configuration> = vec![sys.initial.clone()];
    let mut depths: Vec<usize> = vec![0];
    let mut ids: HashMap<Configuration, usize> = HashMap::new();
    ids.insert(sys.initial.clone(), 0);

    let mut edges = Vec::new();
    let mut halting_ids = BTreeSet::new();
    let mut truncation: Option<TruncationReason> = None;
    let mut depth_reached = 0;

    let mut frontier = VecDeque::new();
    frontier.push_back(0usize);

    while let Some(id) = frontier.pop_front() {
        let depth = depths[id];
        depth_reached = depth_reached.max(depth);
        let set = enumerate_transitions(sys, &configs[id], &opts);
        if set.truncated {
            truncation.get_or_insert(TruncationReason::TransitionLimit);
        }
        if set.transitions.is_empty() && !set.truncated {
            halting_ids.insert(id);
            continue;
        }
        for (choice, result) in set.transitions {
            if let Err(msg) = verify_edge(sys, &configs[id], &result, &choice) {
                panic!("conservation violated from configuration {id}: {msg}");
            }
            let to = match ids.get(&result) {
                Some(&to) => to,
                None => {
                    if configs.len() >= bounds.max_configs {
                        truncation.get_or_insert(TruncationReason::ConfigLimit);
                        continue;
                    }
                    let to = configs.len();
                    ids.insert(result.clone(), to);
                    configs.push(result);
                    depths.push(depth + 1);
                    if depth + 1 > bounds.max_depth {
                        truncation.get_or_insert(TruncationReason::DepthLimit);
                    } else {
                        frontier.push_back(to);
                    }
                    to
                }
            };
            edges.push(Edge {
                from: id,
                choice,
                to,
            });
        }
    }

    ExplorationResult {
        visited_count: configs.len(),
        exhausted: truncation.is_none(),
        depth_reached,
        truncation_reason: truncation,
        configs,
        depths,
        edges,
        halting_ids,
    }
}
