//! Shared test infrastructure: corpus loading, a standalone crisp reference
//! enumerator, brute-force oracles for the transition semantics, and a
//! random system generator.
//!
//! The oracles deliberately re-derive everything from the definitions with
//! plain loops; they share only data types with the engine, never logic.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;

use memfuzz::crisp::CrispPSystem;
use memfuzz::engine::Family;
use memfuzz::fuzzy::{ExtNat, Grade, GradeSet};
use memfuzz::ids::{MembraneId, ReactiveId, RegionId};
use memfuzz::model::{Configuration, MembraneStructure, PSystem, Rule};
use memfuzz::textio::{parse, SystemDocument};

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(name)
}

pub fn load_corpus(name: &str) -> SystemDocument {
    let text = std::fs::read_to_string(corpus_path(name))
        .unwrap_or_else(|e| panic!("cannot read corpus file {name}: {e}"));
    match parse(&text) {
        Ok(doc) => doc,
        Err(errors) => panic!(
            "corpus file {name} does not parse:\n{}",
            memfuzz::textio::format_errors(&errors)
        ),
    }
}

pub fn all_corpus_names() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".psys"))
        .collect();
    names.sort();
    names
}

// ---------------------------------------------------------------------------
// Standalone crisp reference enumerator.
//
// Implements the grade-free semantics directly: a rule application needs
// enough copies in the two touched regions, a transition is a maximal
// simultaneous family, outputs are totals in the output membrane at halting.
// ---------------------------------------------------------------------------

pub type CrispConfig = BTreeMap<RegionId, BTreeMap<ReactiveId, ExtNat>>;

#[derive(Debug, Clone, PartialEq)]
pub struct CrispExploration {
    pub gen: BTreeSet<u64>,
    pub exhausted: bool,
    pub visited: usize,
    pub halting: BTreeSet<CrispConfig>,
}

fn crisp_count(cfg: &CrispConfig, region: RegionId, v: &ReactiveId) -> ExtNat {
    cfg.get(&region)
        .and_then(|c| c.get(v))
        .copied()
        .unwrap_or(ExtNat::ZERO)
}

fn crisp_initial(sys: &CrispPSystem) -> CrispConfig {
    let mut cfg = CrispConfig::new();
    for region in sys.structure.regions() {
        let content = sys
            .initial
            .get(&region)
            .cloned()
            .unwrap_or_default()
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        cfg.insert(region, content);
    }
    cfg
}

/// The demand one family places on each region, summed per reactive.
fn crisp_demands(sys: &CrispPSystem, family: &Family) -> BTreeMap<(RegionId, ReactiveId), u64> {
    let mut demand: BTreeMap<(RegionId, ReactiveId), u64> = BTreeMap::new();
    for (&(m, r), &mult) in family {
        let rule = &sys.rules_of(m)[r];
        let parent = sys.structure.parent(m).unwrap();
        for (v, n) in rule.incoming.iter() {
            *demand.entry((parent, v.clone())).or_insert(0) += n * mult;
        }
        for (v, n) in rule.outgoing.iter() {
            *demand
                .entry((RegionId::Membrane(m), v.clone()))
                .or_insert(0) += n * mult;
        }
    }
    demand
}

fn crisp_feasible(sys: &CrispPSystem, cfg: &CrispConfig, family: &Family) -> bool {
    crisp_demands(sys, family)
        .into_iter()
        .all(|((region, v), need)| ExtNat::fin(need) <= crisp_count(cfg, region, &v))
}

fn crisp_slots(sys: &CrispPSystem) -> Vec<(MembraneId, usize)> {
    sys.rules
        .iter()
        .flat_map(|(&m, rules)| (0..rules.len()).map(move |r| (m, r)))
        .collect()
}

fn crisp_slot_bound(sys: &CrispPSystem, cfg: &CrispConfig, slot: (MembraneId, usize)) -> u64 {
    let mut k = 0;
    loop {
        let family: Family = [(slot, k + 1)].into_iter().collect();
        if !crisp_feasible(sys, cfg, &family) {
            return k;
        }
        k += 1;
        assert!(k < 1_000_000, "crisp oracle: unbounded rule {slot:?}");
    }
}

/// All maximal feasible families, by exhaustive enumeration over the box of
/// per-slot counts.
pub fn crisp_maximal_families(sys: &CrispPSystem, cfg: &CrispConfig) -> BTreeSet<Family> {
    let slots = crisp_slots(sys);
    let bounds: Vec<u64> = slots
        .iter()
        .map(|&slot| crisp_slot_bound(sys, cfg, slot))
        .collect();
    let mut all: Vec<Family> = vec![Family::new()];
    for (i, &slot) in slots.iter().enumerate() {
        let mut next = Vec::new();
        for base in &all {
            for k in 0..=bounds[i] {
                let mut f = base.clone();
                if k > 0 {
                    f.insert(slot, k);
                }
                next.push(f);
            }
        }
        all = next;
    }
    let feasible: Vec<Family> = all
        .into_iter()
        .filter(|f| crisp_feasible(sys, cfg, f))
        .collect();
    feasible
        .iter()
        .filter(|f| {
            slots.iter().all(|&slot| {
                let mut g = (*f).clone();
                *g.entry(slot).or_insert(0) += 1;
                !crisp_feasible(sys, cfg, &g)
            })
        })
        .filter(|f| !f.is_empty())
        .cloned()
        .collect()
}

fn crisp_apply(sys: &CrispPSystem, cfg: &CrispConfig, family: &Family) -> CrispConfig {
    let mut next = cfg.clone();
    let mut adjust = |region: RegionId, v: &ReactiveId, delta: i64| {
        let entry = next
            .get_mut(&region)
            .unwrap()
            .entry(v.clone())
            .or_insert(ExtNat::ZERO);
        *entry = match *entry {
            ExtNat::Inf => ExtNat::Inf,
            ExtNat::Fin(n) => {
                let new = n as i64 + delta;
                assert!(new >= 0, "crisp oracle: negative count");
                ExtNat::Fin(new as u64)
            }
        };
    };
    for (&(m, r), &mult) in family {
        let rule = &sys.rules_of(m)[r];
        let parent = sys.structure.parent(m).unwrap();
        for (v, n) in rule.incoming.iter() {
            adjust(parent, v, -((n * mult) as i64));
            adjust(RegionId::Membrane(m), v, (n * mult) as i64);
        }
        for (v, n) in rule.outgoing.iter() {
            adjust(RegionId::Membrane(m), v, -((n * mult) as i64));
            adjust(parent, v, (n * mult) as i64);
        }
    }
    for content in next.values_mut() {
        content.retain(|_, c| !c.is_zero());
    }
    next
}

/// Breadth-first crisp exploration with memoization; collects the set of
/// output totals over halting configurations.
pub fn crisp_explore(sys: &CrispPSystem, max_configs: usize) -> CrispExploration {
    let initial = crisp_initial(sys);
    let mut seen: BTreeSet<CrispConfig> = [initial.clone()].into_iter().collect();
    let mut frontier = VecDeque::from([initial]);
    let mut halting = BTreeSet::new();
    let mut exhausted = true;
    while let Some(cfg) = frontier.pop_front() {
        let families = crisp_maximal_families(sys, &cfg);
        if families.is_empty() {
            halting.insert(cfg);
            continue;
        }
        for family in families {
            let next = crisp_apply(sys, &cfg, &family);
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= max_configs {
                exhausted = false;
                continue;
            }
            seen.insert(next.clone());
            frontier.push_back(next);
        }
    }
    let gen = halting
        .iter()
        .map(|cfg| {
            sys.output_reactives
                .iter()
                .map(|v| {
                    crisp_count(cfg, RegionId::Membrane(sys.output_membrane), v)
                        .as_finite()
                        .expect("crisp oracle: infinite output membrane")
                })
                .sum()
        })
        .collect();
    CrispExploration {
        gen,
        exhausted,
        visited: seen.len(),
        halting,
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracles for the fuzzy transition semantics.
// ---------------------------------------------------------------------------

/// One thresholded draw a family makes from a region.
#[derive(Debug, Clone)]
struct DemandItem {
    threshold: Grade,
    need: u64,
}

/// The aggregate feasibility condition, written directly from its
/// definition: at every positive grade, demand at or above it fits within
/// the level sum.
pub fn oracle_condition(sys: &PSystem, cfg: &Configuration, family: &Family) -> bool {
    for ((region, v), items) in oracle_demands(sys, family) {
        for &t in sys.grades.positive() {
            let need: u64 = items
                .iter()
                .filter(|i| i.threshold >= t)
                .map(|i| i.need)
                .sum();
            let supply: ExtNat = sys
                .grades
                .positive()
                .iter()
                .filter(|&&t2| t2 >= t)
                .map(|&t2| cfg.region(region).get(&v, t2))
                .sum();
            if ExtNat::fin(need) > supply {
                return false;
            }
        }
    }
    true
}

fn oracle_demands(
    sys: &PSystem,
    family: &Family,
) -> BTreeMap<(RegionId, ReactiveId), Vec<DemandItem>> {
    let mut out: BTreeMap<(RegionId, ReactiveId), Vec<DemandItem>> = BTreeMap::new();
    for (&(m, r), &mult) in family {
        let rule = &sys.rules_of(m)[r];
        let parent = sys.structure.parent(m).unwrap();
        for _ in 0..mult {
            for (v, n) in rule.incoming.iter() {
                out.entry((parent, v.clone()))
                    .or_default()
                    .push(DemandItem {
                        threshold: rule.tau_in(v),
                        need: n,
                    });
            }
            for (v, n) in rule.outgoing.iter() {
                out.entry((RegionId::Membrane(m), v.clone()))
                    .or_default()
                    .push(DemandItem {
                        threshold: rule.tau_out(v),
                        need: n,
                    });
            }
        }
    }
    out
}

fn oracle_slot_bound(sys: &PSystem, cfg: &Configuration, slot: (MembraneId, usize)) -> u64 {
    let mut k = 0;
    loop {
        let family: Family = [(slot, k + 1)].into_iter().collect();
        if !oracle_condition(sys, cfg, &family) {
            return k;
        }
        k += 1;
        assert!(k < 1_000_000, "oracle: unbounded rule {slot:?}");
    }
}

/// Every family in the per-slot count box, feasible or not.
pub fn oracle_all_families(sys: &PSystem, cfg: &Configuration) -> Vec<Family> {
    let slots: Vec<(MembraneId, usize)> = sys
        .rules
        .iter()
        .flat_map(|(&m, rules)| (0..rules.len()).map(move |r| (m, r)))
        .collect();
    let bounds: Vec<u64> = slots
        .iter()
        .map(|&slot| oracle_slot_bound(sys, cfg, slot))
        .collect();
    let mut all: Vec<Family> = vec![Family::new()];
    for (i, &slot) in slots.iter().enumerate() {
        let mut next = Vec::new();
        for base in &all {
            // One beyond the single-slot bound, so condition checks also see
            // infeasible candidates.
            for k in 0..=bounds[i] + 1 {
                let mut f = base.clone();
                if k > 0 {
                    f.insert(slot, k);
                }
                next.push(f);
            }
        }
        all = next;
    }
    all
}

/// The maximal feasible families by exhaustive search.
pub fn oracle_maximal_families(sys: &PSystem, cfg: &Configuration) -> BTreeSet<Family> {
    let slots: Vec<(MembraneId, usize)> = sys
        .rules
        .iter()
        .flat_map(|(&m, rules)| (0..rules.len()).map(move |r| (m, r)))
        .collect();
    oracle_all_families(sys, cfg)
        .into_iter()
        .filter(|f| !f.is_empty())
        .filter(|f| oracle_condition(sys, cfg, f))
        .filter(|f| {
            slots.iter().all(|&slot| {
                let mut g = f.clone();
                *g.entry(slot).or_insert(0) += 1;
                !oracle_condition(sys, cfg, &g)
            })
        })
        .collect()
}

/// Exhaustive search for a per-grade allocation of every demand item within
/// the region supplies.
pub fn allocation_exists(sys: &PSystem, cfg: &Configuration, family: &Family) -> bool {
    // Pools are independent per (region, reactive): solve each separately.
    for ((region, v), items) in oracle_demands(sys, family) {
        let mut supply: BTreeMap<Grade, ExtNat> = sys
            .grades
            .positive()
            .iter()
            .map(|&t| (t, cfg.region(region).get(&v, t)))
            .collect();
        if !allocate_items(&items, 0, &mut supply, sys.grades.positive()) {
            return false;
        }
    }
    true
}

fn allocate_items(
    items: &[DemandItem],
    idx: usize,
    supply: &mut BTreeMap<Grade, ExtNat>,
    grades: &[Grade],
) -> bool {
    if idx == items.len() {
        return true;
    }
    let item = &items[idx];
    fn split(
        need: u64,
        grades: &[Grade],
        threshold: Grade,
        supply: &mut BTreeMap<Grade, ExtNat>,
        items: &[DemandItem],
        idx: usize,
        all_grades: &[Grade],
    ) -> bool {
        if need == 0 {
            return allocate_items(items, idx + 1, supply, all_grades);
        }
        let Some((&t, rest)) = grades.split_first() else {
            return false;
        };
        if t < threshold {
            return split(need, rest, threshold, supply, items, idx, all_grades);
        }
        let available = supply[&t];
        let most = match available {
            ExtNat::Fin(n) => n.min(need),
            ExtNat::Inf => need,
        };
        for take in 0..=most {
            supply.insert(t, available.checked_sub(ExtNat::fin(take)).unwrap());
            if split(need - take, rest, threshold, supply, items, idx, all_grades) {
                supply.insert(t, available);
                return true;
            }
            supply.insert(t, available);
        }
        false
    }
    split(
        item.need,
        grades,
        item.threshold,
        supply,
        items,
        idx,
        grades,
    )
}

/// Greedy allocator: serve the most demanding thresholds first, always from
/// the highest grades down. Succeeds exactly when some allocation exists,
/// because the admissible grade sets are nested.
pub fn greedy_allocates(sys: &PSystem, cfg: &Configuration, family: &Family) -> bool {
    for ((region, v), mut items) in oracle_demands(sys, family) {
        let mut supply: BTreeMap<Grade, ExtNat> = sys
            .grades
            .positive()
            .iter()
            .map(|&t| (t, cfg.region(region).get(&v, t)))
            .collect();
        items.sort_by_key(|item| std::cmp::Reverse(item.threshold));
        for item in items {
            let mut need = item.need;
            for &t in sys.grades.positive().iter().rev() {
                if t < item.threshold || need == 0 {
                    break;
                }
                let available = supply[&t];
                let take = match available {
                    ExtNat::Fin(n) => n.min(need),
                    ExtNat::Inf => need,
                };
                supply.insert(t, available.checked_sub(ExtNat::fin(take)).unwrap());
                need -= take;
            }
            if need > 0 {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Independent conservation check over explored edges.
// ---------------------------------------------------------------------------

/// Re-checks one explored edge: infinite entries exactly preserved, all
/// membranes finite, and totals over finite regions conserved whenever no
/// unbounded pool is involved for that entry.
pub fn check_conservation(
    sys: &PSystem,
    before: &Configuration,
    after: &Configuration,
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
        let mut any_infinite = false;
        let mut sum_before = 0u64;
        let mut sum_after = 0u64;
        for region in sys.structure.regions() {
            let b = before.region(region).get(&v, t);
            let a = after.region(region).get(&v, t);
            if b.is_infinite() != a.is_infinite() {
                return Err(format!("infinity of ({v}, {t}) changed in {region}"));
            }
            if !region.is_env() && (a.is_infinite() || b.is_infinite()) {
                return Err(format!("membrane {region} holds infinite ({v}, {t})"));
            }
            match (b, a) {
                (ExtNat::Fin(nb), ExtNat::Fin(na)) => {
                    sum_before += nb;
                    sum_after += na;
                }
                _ => any_infinite = true,
            }
        }
        if !any_infinite && sum_before != sum_after {
            return Err(format!(
                "({v}, {t}) total changed from {sum_before} to {sum_after}"
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Random small systems for differential testing.
// ---------------------------------------------------------------------------

/// Draws a small valid system: at most 3 membranes, 4 rules, 3 positive
/// grades and per-entry counts up to 4. Rejection-samples until validation
/// passes.
pub fn random_system(rng: &mut StdRng) -> PSystem {
    loop {
        let sys = random_attempt(rng);
        if sys.validate().is_valid() {
            return sys;
        }
    }
}

fn random_attempt(rng: &mut StdRng) -> PSystem {
    let g = |n: i64, d: i64| Grade::new(n, d).unwrap();
    let grade_sets = [
        vec![Grade::zero(), Grade::one()],
        vec![Grade::zero(), g(1, 2), Grade::one()],
        vec![Grade::zero(), g(1, 3), g(2, 3), Grade::one()],
        vec![Grade::zero(), g(1, 4), g(1, 2), Grade::one()],
    ];
    let grades = GradeSet::new(grade_sets[rng.gen_range(0..grade_sets.len())].clone()).unwrap();

    let structure = match rng.gen_range(0..4) {
        0 => MembraneStructure::linear(1),
        1 => MembraneStructure::linear(2),
        2 => MembraneStructure::linear(3),
        _ => MembraneStructure::new([
            (MembraneId(1), RegionId::Env),
            (MembraneId(2), RegionId::Membrane(MembraneId(1))),
            (MembraneId(3), RegionId::Membrane(MembraneId(1))),
        ]),
    };
    let membranes: Vec<MembraneId> = structure.membranes().collect();

    let n_reactives = rng.gen_range(2..=3);
    let reactives: Vec<ReactiveId> = ["a", "b", "c"][..n_reactives]
        .iter()
        .map(|s| ReactiveId::new(*s))
        .collect();

    let mut initial = Configuration::empty(&structure);
    for v in &reactives {
        if rng.gen_bool(0.5) {
            for &t in grades.positive() {
                initial
                    .region_mut(RegionId::Env)
                    .add(v.clone(), t, ExtNat::Inf);
            }
        }
    }
    // Bias initial grades upward so thresholds are often met.
    let pick_content_grade = |rng: &mut StdRng, grades: &GradeSet| {
        if rng.gen_bool(0.6) {
            Grade::one()
        } else {
            grades.positive()[rng.gen_range(0..grades.positive().len())]
        }
    };
    for &m in &membranes {
        let mut budget = 4u64;
        for v in &reactives {
            if budget == 0 || !rng.gen_bool(0.8) {
                continue;
            }
            let t = pick_content_grade(rng, &grades);
            let count = rng.gen_range(1..=budget.min(3));
            budget -= count;
            initial
                .region_mut(RegionId::Membrane(m))
                .add(v.clone(), t, ExtNat::fin(count));
        }
    }

    let mut rules: BTreeMap<MembraneId, Vec<Rule>> = BTreeMap::new();
    let n_rules = rng.gen_range(1..=4);
    for _ in 0..n_rules {
        let m = membranes[rng.gen_range(0..membranes.len())];
        let word = |rng: &mut StdRng| -> Vec<(ReactiveId, u64)> {
            let n = rng.gen_range(1..=2);
            let mut w = Vec::new();
            for _ in 0..n {
                let v = reactives[rng.gen_range(0..reactives.len())].clone();
                let count = if rng.gen_bool(0.7) { 1 } else { 2 };
                w.push((v, count));
            }
            w
        };
        // Low thresholds trigger often; keep some high ones in the mix.
        let pick_grade = |rng: &mut StdRng| {
            if rng.gen_bool(0.6) {
                grades.min_positive()
            } else {
                grades.positive()[rng.gen_range(0..grades.positive().len())]
            }
        };
        let rule = match rng.gen_range(0..3) {
            0 => Rule::symport_in(word(rng), pick_grade(rng)),
            1 => Rule::symport_out(word(rng), pick_grade(rng)),
            _ => {
                let tin = pick_grade(rng);
                let tout = pick_grade(rng);
                Rule::antiport(word(rng), tin, word(rng), tout)
            }
        };
        rules.entry(m).or_default().push(rule);
    }

    let mut output_reactives = BTreeSet::new();
    for v in &reactives {
        if rng.gen_bool(0.5) {
            output_reactives.insert(v.clone());
        }
    }
    if output_reactives.is_empty() {
        output_reactives.insert(reactives[0].clone());
    }

    PSystem {
        reactives: reactives.into_iter().collect(),
        output_reactives,
        output_membrane: membranes[rng.gen_range(0..membranes.len())],
        structure,
        grades,
        initial,
        rules,
        roles: BTreeMap::new(),
    }
}
