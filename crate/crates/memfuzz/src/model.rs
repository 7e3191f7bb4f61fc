//! Static description and validation of fuzzy symport/antiport membrane
//! systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::fuzzy::{ExtNat, FuzzyMultiset, Grade, GradeSet};
use crate::ids::{MembraneId, ReactiveId, RegionId};

/// Rooted tree of membranes. The skin membrane (label 1) hangs directly under
/// the environment; every other membrane's parent is again a membrane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembraneStructure {
    parent: BTreeMap<MembraneId, RegionId>,
}

impl MembraneStructure {
    /// Builds a structure from `(membrane, parent)` pairs. Well-formedness is
    /// reported by [`PSystem::validate`], not enforced here.
    pub fn new(parents: impl IntoIterator<Item = (MembraneId, RegionId)>) -> Self {
        MembraneStructure {
            parent: parents.into_iter().collect(),
        }
    }

    /// A single skin membrane and a chain of nested children below it:
    /// `linear(3)` gives 1 ⊃ 2 ⊃ 3.
    pub fn linear(depth: u32) -> Self {
        let mut parent = BTreeMap::new();
        parent.insert(MembraneId(1), RegionId::Env);
        for m in 2..=depth {
            parent.insert(MembraneId(m), RegionId::Membrane(MembraneId(m - 1)));
        }
        MembraneStructure { parent }
    }

    pub fn membranes(&self) -> impl Iterator<Item = MembraneId> + '_ {
        self.parent.keys().copied()
    }

    pub fn contains(&self, m: MembraneId) -> bool {
        self.parent.contains_key(&m)
    }

    pub fn parent(&self, m: MembraneId) -> Option<RegionId> {
        self.parent.get(&m).copied()
    }

    pub fn children(&self, region: RegionId) -> Vec<MembraneId> {
        self.parent
            .iter()
            .filter(|(_, &p)| p == region)
            .map(|(&m, _)| m)
            .collect()
    }

    pub fn is_elementary(&self, m: MembraneId) -> bool {
        self.children(RegionId::Membrane(m)).is_empty()
    }

    /// Every region of the extended tree: the membranes, then `env`.
    pub fn regions(&self) -> impl Iterator<Item = RegionId> + '_ {
        self.membranes()
            .map(RegionId::Membrane)
            .chain(std::iter::once(RegionId::Env))
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// True iff every membrane reaches `env` by following parents, with the
    /// skin as the only child of `env`.
    fn is_tree(&self) -> bool {
        if self.parent.get(&MembraneId::SKIN) != Some(&RegionId::Env) {
            return false;
        }
        for (&m, &p) in &self.parent {
            match p {
                RegionId::Env => {
                    if m != MembraneId::SKIN {
                        return false;
                    }
                }
                RegionId::Membrane(q) => {
                    if !self.parent.contains_key(&q) {
                        return false;
                    }
                }
            }
            // Walk to the root, guarding against cycles.
            let mut cur = m;
            for _ in 0..=self.parent.len() {
                match self.parent.get(&cur) {
                    Some(RegionId::Env) => break,
                    Some(RegionId::Membrane(q)) => cur = *q,
                    None => return false,
                }
            }
            if self.parent.get(&cur) != Some(&RegionId::Env) {
                return false;
            }
        }
        true
    }
}

/// A word over the reactive alphabet, kept as occurrence counts. The
/// semantics only ever consumes `|w|_v`, never letter order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleWord {
    counts: BTreeMap<ReactiveId, u64>,
}

impl RuleWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, v: &ReactiveId) -> u64 {
        self.counts.get(v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: ReactiveId, count: u64) {
        if count == 0 {
            self.counts.remove(&v);
        } else {
            self.counts.insert(v, count);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReactiveId, u64)> {
        self.counts.iter().map(|(v, &c)| (v, c))
    }

    pub fn letters(&self) -> impl Iterator<Item = &ReactiveId> {
        self.counts.keys()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

impl FromIterator<(ReactiveId, u64)> for RuleWord {
    fn from_iter<T: IntoIterator<Item = (ReactiveId, u64)>>(iter: T) -> Self {
        let mut w = RuleWord::new();
        for (v, c) in iter {
            let total = w.count(&v) + c;
            w.set(v, total);
        }
        w
    }
}

impl fmt::Display for RuleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (v, c) in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, " {v} : {c}")?;
            first = false;
        }
        if !first {
            write!(f, " ")?;
        }
        write!(f, "}}")
    }
}

/// Per-rule minimum grades. Absent entries mean threshold 0, i.e. the
/// reactive takes no part in the corresponding side of the rule.
pub type ThresholdMap = BTreeMap<ReactiveId, Grade>;

/// A symport/antiport rule with threshold functions: `incoming` enters the
/// owning membrane from its parent region, `outgoing` leaves it.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub incoming: RuleWord,
    pub outgoing: RuleWord,
    pub tau_in: ThresholdMap,
    pub tau_out: ThresholdMap,
}

impl Rule {
    /// A symport rule pulling `incoming` into the membrane, with a uniform
    /// threshold on every letter.
    pub fn symport_in(word: impl IntoIterator<Item = (ReactiveId, u64)>, tau: Grade) -> Self {
        let incoming: RuleWord = word.into_iter().collect();
        let tau_in = incoming.letters().cloned().map(|v| (v, tau)).collect();
        Rule {
            incoming,
            outgoing: RuleWord::new(),
            tau_in,
            tau_out: ThresholdMap::new(),
        }
    }

    /// A symport rule expelling `outgoing` from the membrane.
    pub fn symport_out(word: impl IntoIterator<Item = (ReactiveId, u64)>, tau: Grade) -> Self {
        let outgoing: RuleWord = word.into_iter().collect();
        let tau_out = outgoing.letters().cloned().map(|v| (v, tau)).collect();
        Rule {
            incoming: RuleWord::new(),
            outgoing,
            tau_in: ThresholdMap::new(),
            tau_out,
        }
    }

    pub fn antiport(
        incoming: impl IntoIterator<Item = (ReactiveId, u64)>,
        tau_in: Grade,
        outgoing: impl IntoIterator<Item = (ReactiveId, u64)>,
        tau_out: Grade,
    ) -> Self {
        let incoming: RuleWord = incoming.into_iter().collect();
        let outgoing: RuleWord = outgoing.into_iter().collect();
        let tin = incoming.letters().cloned().map(|v| (v, tau_in)).collect();
        let tout = outgoing.letters().cloned().map(|v| (v, tau_out)).collect();
        Rule {
            incoming,
            outgoing,
            tau_in: tin,
            tau_out: tout,
        }
    }

    pub fn with_tau_in(mut self, tau: ThresholdMap) -> Self {
        self.tau_in = tau;
        self
    }

    pub fn with_tau_out(mut self, tau: ThresholdMap) -> Self {
        self.tau_out = tau;
        self
    }

    pub fn tau_in(&self, v: &ReactiveId) -> Grade {
        self.tau_in.get(v).copied().unwrap_or(Grade::zero())
    }

    pub fn tau_out(&self, v: &ReactiveId) -> Grade {
        self.tau_out.get(v).copied().unwrap_or(Grade::zero())
    }

    pub fn is_symport(&self) -> bool {
        self.incoming.is_empty() || self.outgoing.is_empty()
    }
}

/// The content of every region at one instant.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    contents: BTreeMap<RegionId, FuzzyMultiset>,
}

impl Configuration {
    /// An empty content for every region of `structure`.
    pub fn empty(structure: &MembraneStructure) -> Self {
        Configuration {
            contents: structure
                .regions()
                .map(|r| (r, FuzzyMultiset::new()))
                .collect(),
        }
    }

    pub fn region(&self, r: RegionId) -> &FuzzyMultiset {
        static EMPTY: std::sync::OnceLock<FuzzyMultiset> = std::sync::OnceLock::new();
        self.contents
            .get(&r)
            .unwrap_or_else(|| EMPTY.get_or_init(FuzzyMultiset::new))
    }

    pub fn region_mut(&mut self, r: RegionId) -> &mut FuzzyMultiset {
        self.contents.entry(r).or_default()
    }

    pub fn regions(&self) -> impl Iterator<Item = (RegionId, &FuzzyMultiset)> {
        self.contents.iter().map(|(&r, ms)| (r, ms))
    }

    pub fn set_region(&mut self, r: RegionId, content: FuzzyMultiset) {
        self.contents.insert(r, content);
    }
}

/// Marker roles a reactive may carry, used when assembling systems from
/// two-membrane generator components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    /// The reactive collected in the output membrane.
    Alpha,
    /// The trap reactive whose presence keeps a computation alive forever.
    Hash,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Alpha => write!(f, "alpha"),
            Role::Hash => write!(f, "hash"),
        }
    }
}

/// A fuzzy symport/antiport membrane system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSystem {
    pub reactives: BTreeSet<ReactiveId>,
    pub output_reactives: BTreeSet<ReactiveId>,
    pub structure: MembraneStructure,
    pub output_membrane: MembraneId,
    pub grades: GradeSet,
    pub initial: Configuration,
    pub rules: BTreeMap<MembraneId, Vec<Rule>>,
    /// Optional marker annotations; empty for plain systems.
    pub roles: BTreeMap<ReactiveId, Role>,
}

/// One way a system fails its invariants. Violations are data: collecting
/// them all beats stopping at the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationCode {
    Structure,
    UnknownReactive,
    UnknownMembrane,
    GradeOutsideSet,
    ThresholdPositivity,
    EmptyRule,
    EnvSupply,
    MembraneFiniteness,
    SkinInfinitePull,
    OutputMembrane,
    Roles,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.code, self.detail)
    }
}

/// Outcome of [`PSystem::validate`]; empty means the system is well-formed
/// and safe to simulate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, code: ViolationCode, detail: impl Into<String>) {
        self.violations.push(Violation {
            code,
            detail: detail.into(),
        });
    }

    pub fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "ok")
        } else {
            for v in &self.violations {
                writeln!(f, "violation: {v}")?;
            }
            Ok(())
        }
    }
}

impl PSystem {
    pub fn rules_of(&self, m: MembraneId) -> &[Rule] {
        self.rules.get(&m).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rule(&self, m: MembraneId, index: usize) -> Option<&Rule> {
        self.rules_of(m).get(index)
    }

    /// True iff the environment holds an unbounded supply of `v` in the
    /// initial configuration.
    pub fn env_supply_infinite(&self, v: &ReactiveId) -> bool {
        self.initial
            .region(RegionId::Env)
            .grades_of(v)
            .any(|(_, c)| c.is_infinite())
    }

    /// Checks every structural and semantic invariant, returning all
    /// violations found. An empty report means simulation is well-defined.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        if self.structure.is_empty() {
            report.push(ViolationCode::Structure, "no membranes declared");
        } else if !self.structure.is_tree() {
            report.push(
                ViolationCode::Structure,
                "membranes must form a rooted tree with the skin (1) under env",
            );
        }

        if !self.structure.contains(self.output_membrane) {
            report.push(
                ViolationCode::OutputMembrane,
                format!("output membrane {} is not declared", self.output_membrane),
            );
        }

        for v in &self.output_reactives {
            if !self.reactives.contains(v) {
                report.push(
                    ViolationCode::UnknownReactive,
                    format!("output reactive {v} is not declared"),
                );
            }
        }

        self.validate_initial(&mut report);
        self.validate_rules(&mut report);

        for (v, role) in &self.roles {
            if !self.reactives.contains(v) {
                report.push(
                    ViolationCode::Roles,
                    format!("role {role} names undeclared reactive {v}"),
                );
            }
        }
        for role in [Role::Alpha, Role::Hash] {
            let n = self.roles.values().filter(|&&r| r == role).count();
            if n > 1 {
                report.push(
                    ViolationCode::Roles,
                    format!("role {role} assigned to {n} reactives"),
                );
            }
        }

        report
    }

    fn validate_initial(&self, report: &mut ValidationReport) {
        for (region, content) in self.initial.regions() {
            if region
                .membrane()
                .map(|m| !self.structure.contains(m))
                .unwrap_or(false)
            {
                report.push(
                    ViolationCode::UnknownMembrane,
                    format!("initial content given for unknown membrane {region}"),
                );
            }
            for (v, t, c) in content.iter() {
                if !self.reactives.contains(v) {
                    report.push(
                        ViolationCode::UnknownReactive,
                        format!("initial content of {region} uses undeclared reactive {v}"),
                    );
                }
                if !self.grades.contains_positive(t) {
                    report.push(
                        ViolationCode::GradeOutsideSet,
                        format!("initial grade {t} of {v} in {region} is not in the grade set"),
                    );
                }
                if !region.is_env() && c.is_infinite() {
                    report.push(
                        ViolationCode::MembraneFiniteness,
                        format!("membrane {region} holds infinitely many copies of {v}"),
                    );
                }
            }
        }

        // Environment supply must be homogeneous per reactive: infinite at
        // every positive grade, or absent entirely.
        let env = self.initial.region(RegionId::Env);
        let env_reactives: BTreeSet<&ReactiveId> = env.reactives().collect();
        for v in env_reactives {
            let per_grade: Vec<(Grade, ExtNat)> = env.grades_of(v).collect();
            let all_infinite_everywhere = self
                .grades
                .positive()
                .iter()
                .all(|&t| env.get(v, t).is_infinite());
            let any_finite = per_grade.iter().any(|(_, c)| !c.is_infinite());
            if any_finite || !all_infinite_everywhere {
                report.push(
                    ViolationCode::EnvSupply,
                    format!(
                        "environment supply of {v} must be infinite at every positive grade \
                         or absent"
                    ),
                );
            }
        }
    }

    fn validate_rules(&self, report: &mut ValidationReport) {
        for (&m, rules) in &self.rules {
            if !self.structure.contains(m) {
                report.push(
                    ViolationCode::UnknownMembrane,
                    format!("rules declared for unknown membrane {m}"),
                );
            }
            for (i, rule) in rules.iter().enumerate() {
                let tag = format!("rule {i} of membrane {m}");
                if rule.incoming.is_empty() && rule.outgoing.is_empty() {
                    report.push(ViolationCode::EmptyRule, format!("{tag} moves nothing"));
                }
                for v in rule.incoming.letters().chain(rule.outgoing.letters()) {
                    if !self.reactives.contains(v) {
                        report.push(
                            ViolationCode::UnknownReactive,
                            format!("{tag} uses undeclared reactive {v}"),
                        );
                    }
                }
                Self::validate_thresholds(
                    &tag,
                    "incoming",
                    &rule.incoming,
                    &rule.tau_in,
                    &self.grades,
                    report,
                );
                Self::validate_thresholds(
                    &tag,
                    "outgoing",
                    &rule.outgoing,
                    &rule.tau_out,
                    &self.grades,
                    report,
                );

                // A pure pull on the skin whose every letter has unbounded
                // environment supply could fire forever within one step.
                if m == MembraneId::SKIN
                    && rule.outgoing.is_empty()
                    && !rule.incoming.is_empty()
                    && rule.incoming.letters().all(|v| self.env_supply_infinite(v))
                {
                    report.push(
                        ViolationCode::SkinInfinitePull,
                        format!("{tag} pulls only reactives with unbounded environment supply"),
                    );
                }
            }
        }
    }

    fn validate_thresholds(
        tag: &str,
        side: &str,
        word: &RuleWord,
        tau: &ThresholdMap,
        grades: &GradeSet,
        report: &mut ValidationReport,
    ) {
        for v in word.letters() {
            let t = tau.get(v).copied().unwrap_or(Grade::zero());
            if t.is_zero() {
                report.push(
                    ViolationCode::ThresholdPositivity,
                    format!("{tag}: {side} reactive {v} needs a positive threshold"),
                );
            }
        }
        for (v, &t) in tau {
            if t.is_zero() {
                continue;
            }
            if word.count(v) == 0 {
                report.push(
                    ViolationCode::ThresholdPositivity,
                    format!("{tag}: threshold on {v} without {side} occurrences"),
                );
            }
            if !grades.contains(t) {
                report.push(
                    ViolationCode::GradeOutsideSet,
                    format!("{tag}: threshold {t} on {v} is not in the grade set"),
                );
            }
        }
    }

    /// Over-approximates, per reactive, the grades at which it can ever occur
    /// inside a membrane: grades present in the initial membrane contents,
    /// plus every grade reachable by pulling an unboundedly supplied reactive
    /// through the skin. Deeper pulls and re-entries of expelled objects only
    /// filter existing grades, so they add nothing.
    pub fn reachable_reactive_grades(&self) -> BTreeMap<ReactiveId, BTreeSet<Grade>> {
        let mut out: BTreeMap<ReactiveId, BTreeSet<Grade>> = BTreeMap::new();
        for (region, content) in self.initial.regions() {
            if region.is_env() {
                continue;
            }
            for (v, t, _) in content.iter() {
                out.entry(v.clone()).or_default().insert(t);
            }
        }
        for rule in self.rules_of(MembraneId::SKIN) {
            for v in rule.incoming.letters() {
                if !self.env_supply_infinite(v) {
                    continue;
                }
                let tau = rule.tau_in(v);
                let entry = out.entry(v.clone()).or_default();
                for &t in self.grades.positive() {
                    if t >= tau {
                        entry.insert(t);
                    }
                }
            }
        }
        out.retain(|_, grades| !grades.is_empty());
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn rid(s: &str) -> ReactiveId {
        ReactiveId::new(s)
    }

    fn g(n: i64, d: i64) -> Grade {
        Grade::new(n, d).unwrap()
    }

    fn two_membranes() -> MembraneStructure {
        MembraneStructure::linear(2)
    }

    /// Single antiport rule on the skin swapping v in for w out, with two
    /// exact copies of w initially inside and unbounded v in the environment.
    pub(crate) fn toy_antiport() -> PSystem {
        let grades = GradeSet::new(vec![Grade::zero(), g(1, 2), Grade::one()]).unwrap();
        let structure = MembraneStructure::linear(1);
        let mut initial = Configuration::empty(&structure);
        initial.region_mut(RegionId::Membrane(MembraneId(1))).add(
            rid("w"),
            Grade::one(),
            ExtNat::fin(2),
        );
        for t in [g(1, 2), Grade::one()] {
            initial
                .region_mut(RegionId::Env)
                .add(rid("v"), t, ExtNat::Inf);
        }
        let rule = Rule::antiport([(rid("v"), 1)], g(1, 2), [(rid("w"), 1)], Grade::one());
        PSystem {
            reactives: [rid("v"), rid("w")].into_iter().collect(),
            output_reactives: [rid("v")].into_iter().collect(),
            structure,
            output_membrane: MembraneId(1),
            grades,
            initial,
            rules: [(MembraneId(1), vec![rule])].into_iter().collect(),
            roles: BTreeMap::new(),
        }
    }

    #[test]
    fn toy_system_is_valid() {
        let report = toy_antiport().validate();
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn missing_threshold_is_flagged() {
        let mut sys = toy_antiport();
        let rule = Rule {
            incoming: [(rid("v"), 2)].into_iter().collect(),
            outgoing: RuleWord::new(),
            tau_in: ThresholdMap::new(),
            tau_out: ThresholdMap::new(),
        };
        sys.rules.get_mut(&MembraneId(1)).unwrap().push(rule);
        let report = sys.validate();
        assert!(report.has(ViolationCode::ThresholdPositivity), "{report}");
    }

    #[test]
    fn heterogeneous_env_supply_is_flagged() {
        let mut sys = toy_antiport();
        // Wipe the grade-1 supply of v, leaving infinity only at 1/2.
        sys.initial
            .region_mut(RegionId::Env)
            .set(rid("v"), Grade::one(), ExtNat::ZERO);
        let report = sys.validate();
        assert!(report.has(ViolationCode::EnvSupply), "{report}");
    }

    #[test]
    fn finite_env_supply_is_flagged() {
        let mut sys = toy_antiport();
        sys.initial
            .region_mut(RegionId::Env)
            .add(rid("w"), Grade::one(), ExtNat::fin(5));
        let report = sys.validate();
        assert!(report.has(ViolationCode::EnvSupply), "{report}");
    }

    #[test]
    fn skin_pull_of_unbounded_supply_is_flagged() {
        let mut sys = toy_antiport();
        sys.rules
            .get_mut(&MembraneId(1))
            .unwrap()
            .push(Rule::symport_in([(rid("v"), 1)], Grade::one()));
        let report = sys.validate();
        assert!(report.has(ViolationCode::SkinInfinitePull), "{report}");
    }

    #[test]
    fn infinite_membrane_content_is_flagged() {
        let mut sys = toy_antiport();
        sys.initial
            .region_mut(RegionId::Membrane(MembraneId(1)))
            .add(rid("w"), g(1, 2), ExtNat::Inf);
        let report = sys.validate();
        assert!(report.has(ViolationCode::MembraneFiniteness), "{report}");
    }

    #[test]
    fn broken_tree_is_flagged() {
        let structure = MembraneStructure::new([
            (MembraneId(1), RegionId::Env),
            (MembraneId(2), RegionId::Membrane(MembraneId(3))),
        ]);
        let mut sys = toy_antiport();
        sys.structure = structure;
        let report = sys.validate();
        assert!(report.has(ViolationCode::Structure), "{report}");
    }

    #[test]
    fn validate_is_idempotent() {
        let sys = toy_antiport();
        assert_eq!(sys.validate(), sys.validate());
    }

    #[test]
    fn reachable_grades_of_absent_reactive_is_empty() {
        let sys = toy_antiport();
        let reach = sys.reachable_reactive_grades();
        assert!(!reach.contains_key(&rid("missing")));
    }

    #[test]
    fn reachable_grades_follow_thresholds() {
        let sys = toy_antiport();
        let reach = sys.reachable_reactive_grades();
        // v is pulled through the skin with threshold 1/2 from an unbounded
        // supply, so both positive grades are reachable.
        let v: BTreeSet<Grade> = [g(1, 2), Grade::one()].into_iter().collect();
        assert_eq!(reach.get(&rid("v")), Some(&v));
        // w only ever occurs at its initial grade.
        let w: BTreeSet<Grade> = [Grade::one()].into_iter().collect();
        assert_eq!(reach.get(&rid("w")), Some(&w));
    }

    #[test]
    fn two_membrane_structure_queries() {
        let s = two_membranes();
        assert!(s.is_elementary(MembraneId(2)));
        assert!(!s.is_elementary(MembraneId(1)));
        assert_eq!(
            s.children(RegionId::Membrane(MembraneId(1))),
            vec![MembraneId(2)]
        );
        assert_eq!(s.parent(MembraneId(1)), Some(RegionId::Env));
    }
}
