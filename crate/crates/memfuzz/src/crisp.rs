//! Crisp symport/antiport systems: the grade-free special case.
//!
//! A crisp system is exactly a fuzzy system over `{0, 1}` in which every
//! annotation sits at grade 1, so the fuzzy engine simulates it through
//! [`crate::constructions::embed`]. This module keeps the grade-free
//! description itself, plus the shape check for two-membrane generator
//! components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::fuzzy::{ExtNat, Grade};
use crate::ids::{MembraneId, ReactiveId, RegionId};
use crate::model::{MembraneStructure, PSystem, Role, RuleWord};

/// A symport/antiport rule without thresholds.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrispRule {
    pub incoming: RuleWord,
    pub outgoing: RuleWord,
}

impl CrispRule {
    pub fn symport_in(word: impl IntoIterator<Item = (ReactiveId, u64)>) -> Self {
        CrispRule {
            incoming: word.into_iter().collect(),
            outgoing: RuleWord::new(),
        }
    }

    pub fn symport_out(word: impl IntoIterator<Item = (ReactiveId, u64)>) -> Self {
        CrispRule {
            incoming: RuleWord::new(),
            outgoing: word.into_iter().collect(),
        }
    }

    pub fn antiport(
        incoming: impl IntoIterator<Item = (ReactiveId, u64)>,
        outgoing: impl IntoIterator<Item = (ReactiveId, u64)>,
    ) -> Self {
        CrispRule {
            incoming: incoming.into_iter().collect(),
            outgoing: outgoing.into_iter().collect(),
        }
    }

    pub fn is_symport(&self) -> bool {
        self.incoming.is_empty() || self.outgoing.is_empty()
    }
}

/// Crisp multiset: counts per reactive, without grades.
pub type CrispContent = BTreeMap<ReactiveId, ExtNat>;

/// A crisp symport/antiport membrane system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrispPSystem {
    pub reactives: BTreeSet<ReactiveId>,
    pub output_reactives: BTreeSet<ReactiveId>,
    pub structure: MembraneStructure,
    pub output_membrane: MembraneId,
    pub initial: BTreeMap<RegionId, CrispContent>,
    pub rules: BTreeMap<MembraneId, Vec<CrispRule>>,
    pub roles: BTreeMap<ReactiveId, Role>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrispError {
    #[error("grade set must be {{0, 1}}, found {0}")]
    GradeSetNotBoolean(String),
    #[error("{0} carries grade {1}, expected 1")]
    GradeAnnotation(String, Grade),
}

impl CrispPSystem {
    pub fn rules_of(&self, m: MembraneId) -> &[CrispRule] {
        self.rules.get(&m).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn initial_content(&self, r: RegionId) -> Option<&CrispContent> {
        self.initial.get(&r)
    }

    pub fn role_of(&self, role: Role) -> Option<&ReactiveId> {
        self.roles.iter().find(|(_, &r)| r == role).map(|(v, _)| v)
    }

    /// Reinterprets a fuzzy system over `{0, 1}` with every grade annotation
    /// at 1 as a crisp system. Errors on any other grade set or annotation.
    pub fn from_psystem(sys: &PSystem) -> Result<CrispPSystem, CrispError> {
        if !sys.grades.is_boolean() {
            return Err(CrispError::GradeSetNotBoolean(sys.grades.to_string()));
        }
        let mut initial = BTreeMap::new();
        for (region, content) in sys.initial.regions() {
            let mut crisp = CrispContent::new();
            for (v, t, c) in content.iter() {
                if !t.is_one() {
                    return Err(CrispError::GradeAnnotation(
                        format!("initial content of {region} for {v}"),
                        t,
                    ));
                }
                crisp.insert(v.clone(), c);
            }
            initial.insert(region, crisp);
        }
        let mut rules = BTreeMap::new();
        for (&m, list) in &sys.rules {
            let mut out = Vec::with_capacity(list.len());
            for rule in list {
                for (side, tau) in [("incoming", &rule.tau_in), ("outgoing", &rule.tau_out)] {
                    for (v, &t) in tau {
                        if !t.is_zero() && !t.is_one() {
                            return Err(CrispError::GradeAnnotation(
                                format!("{side} threshold of {v} in membrane {m}"),
                                t,
                            ));
                        }
                    }
                }
                out.push(CrispRule {
                    incoming: rule.incoming.clone(),
                    outgoing: rule.outgoing.clone(),
                });
            }
            rules.insert(m, out);
        }
        Ok(CrispPSystem {
            reactives: sys.reactives.clone(),
            output_reactives: sys.output_reactives.clone(),
            structure: sys.structure.clone(),
            output_membrane: sys.output_membrane,
            initial,
            rules,
            roles: sys.roles.clone(),
        })
    }
}

/// Result of checking the two-membrane generator shape.
///
/// The shape asks for: exactly two membranes with the elementary one as
/// output; symport rules only; every reactive an output reactive; the output
/// membrane's rules exactly a collector pull plus a trap in/out pair; and no
/// initial collector copies in either membrane. Whether the collector really
/// is the only reactive entering the output membrane in halting computations
/// is a semantic property of all computations; it is recorded as assumed, not
/// decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeReport {
    pub conforms: bool,
    pub violations: Vec<String>,
    pub alpha: Option<ReactiveId>,
    pub hash: Option<ReactiveId>,
    /// Always true when `conforms`: the sole-entrant clause is taken on faith.
    pub sole_entrant_assumed: bool,
}

impl fmt::Display for ShapeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "conforms {}", self.conforms)?;
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        if let Some(a) = &self.alpha {
            writeln!(f, "alpha {a}")?;
        }
        if let Some(h) = &self.hash {
            writeln!(f, "hash {h}")?;
        }
        if self.conforms {
            writeln!(f, "sole-entrant assumed")?;
        }
        Ok(())
    }
}

/// Checks the syntactic generator shape. Role annotations, when present,
/// pin down which reactives play the collector and trap parts; otherwise the
/// output membrane's rule pattern identifies them.
pub fn check_generator_shape(sys: &CrispPSystem) -> ShapeReport {
    let mut violations = Vec::new();

    if sys.structure.len() != 2 {
        violations.push(format!(
            "expected exactly 2 membranes, found {}",
            sys.structure.len()
        ));
    }
    let elementary: Vec<MembraneId> = sys
        .structure
        .membranes()
        .filter(|&m| m != MembraneId::SKIN && sys.structure.is_elementary(m))
        .collect();
    let out = sys.output_membrane;
    if out == MembraneId::SKIN || !sys.structure.is_elementary(out) {
        violations.push(format!("output membrane {out} must be the elementary one"));
    } else if elementary != vec![out] {
        violations.push("output membrane must be the only non-skin membrane".to_string());
    }

    for (&m, rules) in &sys.rules {
        for (i, rule) in rules.iter().enumerate() {
            if !rule.is_symport() {
                violations.push(format!("rule {i} of membrane {m} is an antiport rule"));
            }
        }
    }

    if sys.output_reactives != sys.reactives {
        violations.push("every reactive must be an output reactive".to_string());
    }

    let (alpha, hash, mut rule_violations) = identify_markers(sys);
    violations.append(&mut rule_violations);

    if let Some(alpha) = &alpha {
        for m in [MembraneId::SKIN, out] {
            let has_alpha = sys
                .initial_content(RegionId::Membrane(m))
                .map(|c| c.get(alpha).copied().unwrap_or(ExtNat::ZERO) != ExtNat::ZERO)
                .unwrap_or(false);
            if has_alpha {
                violations.push(format!(
                    "membrane {m} initially contains collector reactive {alpha}"
                ));
            }
        }
    }

    let conforms = violations.is_empty();
    ShapeReport {
        conforms,
        violations,
        alpha,
        hash,
        sole_entrant_assumed: conforms,
    }
}

/// Finds the collector/trap pair from the output membrane's rules: they must
/// be exactly `(alpha, in)`, `(hash, in)` and `(hash, out)` with single
/// letters.
fn identify_markers(sys: &CrispPSystem) -> (Option<ReactiveId>, Option<ReactiveId>, Vec<String>) {
    let mut violations = Vec::new();
    let out_rules = sys.rules_of(sys.output_membrane);

    let single_letter = |w: &RuleWord| -> Option<ReactiveId> {
        let mut it = w.iter();
        match (it.next(), it.next()) {
            (Some((v, 1)), None) => Some(v.clone()),
            _ => None,
        }
    };

    let mut pulls: Vec<ReactiveId> = Vec::new();
    let mut expels: Vec<ReactiveId> = Vec::new();
    let mut ok = true;
    for rule in out_rules {
        if !rule.is_symport() {
            ok = false;
            continue;
        }
        if rule.outgoing.is_empty() {
            match single_letter(&rule.incoming) {
                Some(v) => pulls.push(v),
                None => ok = false,
            }
        } else {
            match single_letter(&rule.outgoing) {
                Some(v) => expels.push(v),
                None => ok = false,
            }
        }
    }
    pulls.sort();
    expels.sort();

    // Pattern: pulls = {alpha, hash}, expels = {hash}.
    let inferred = if ok && pulls.len() == 2 && expels.len() == 1 {
        let hash = expels[0].clone();
        let alpha = pulls.iter().find(|v| **v != hash).cloned();
        match alpha {
            Some(alpha) if pulls.contains(&hash) && alpha != hash => Some((alpha, hash)),
            _ => None,
        }
    } else {
        None
    };

    if inferred.is_none() {
        violations.push(
            "output membrane rules must be exactly a single-letter collector pull and a \
             trap in/out pair"
                .to_string(),
        );
    }

    let annotated_alpha = sys.role_of(Role::Alpha).cloned();
    let annotated_hash = sys.role_of(Role::Hash).cloned();
    if let (Some((ia, ih)), Some(aa)) = (&inferred, &annotated_alpha) {
        if aa != ia {
            violations.push(format!(
                "role annotation names {aa} as collector but rules identify {ia}"
            ));
        }
        if let Some(ah) = &annotated_hash {
            if ah != ih {
                violations.push(format!(
                    "role annotation names {ah} as trap but rules identify {ih}"
                ));
            }
        }
    }

    let (alpha, hash) = match (&inferred, annotated_alpha, annotated_hash) {
        (Some((ia, ih)), _, _) => (Some(ia.clone()), Some(ih.clone())),
        (None, a, h) => (a, h),
    };
    (alpha, hash, violations)
}
