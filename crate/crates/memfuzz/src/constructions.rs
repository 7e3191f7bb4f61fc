//! System-to-system transformations: embedding crisp systems into the fuzzy
//! model, slicing a fuzzy system into one crisp system per grade, and
//! composing a family of two-membrane generator components into one fuzzy
//! system.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::crisp::{check_generator_shape, CrispPSystem, CrispRule};
use crate::fuzzy::{Grade, GradeSet};
use crate::ids::{MembraneId, ReactiveId, RegionId};
use crate::model::{Configuration, MembraneStructure, PSystem, Role, Rule, RuleWord, ThresholdMap};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("rule {rule} of membrane {membrane} expands into more than {cap} rules")]
    ExpansionCap {
        membrane: MembraneId,
        rule: usize,
        cap: usize,
    },
    #[error("component for grade {0} failed the generator shape check:\n{1}")]
    Shape(Grade, String),
    #[error("component for grade {0} lacks an {1} role annotation")]
    MissingRole(Grade, Role),
    #[error("components must cover exactly the positive grades; {0}")]
    GradeCoverage(String),
    #[error("invalid input system:\n{0}")]
    InvalidInput(String),
}

/// Lifts a crisp system into the fuzzy model over `grades`: every membrane
/// content and threshold sits at grade 1, while an unbounded environment
/// supply is replicated across all positive grades.
///
/// Over `{0, 1}` this is the plain identification of crisp systems with
/// two-valued fuzzy ones; larger grade sets leave the behaviour unchanged
/// because the all-1 thresholds filter every pull down to exact copies.
pub fn embed(sys: &CrispPSystem, grades: &GradeSet) -> PSystem {
    let mut initial = Configuration::empty(&sys.structure);
    for (&region, content) in &sys.initial {
        for (v, &count) in content {
            match region {
                RegionId::Env => {
                    for &t in grades.positive() {
                        initial.region_mut(region).add(v.clone(), t, count);
                    }
                }
                RegionId::Membrane(_) => {
                    initial
                        .region_mut(region)
                        .add(v.clone(), Grade::one(), count);
                }
            }
        }
    }
    let rules = sys
        .rules
        .iter()
        .map(|(&m, list)| {
            let lifted = list
                .iter()
                .map(|r| {
                    let tau_of = |w: &RuleWord| -> ThresholdMap {
                        w.letters().cloned().map(|v| (v, Grade::one())).collect()
                    };
                    Rule {
                        incoming: r.incoming.clone(),
                        outgoing: r.outgoing.clone(),
                        tau_in: tau_of(&r.incoming),
                        tau_out: tau_of(&r.outgoing),
                    }
                })
                .collect();
            (m, lifted)
        })
        .collect();
    PSystem {
        reactives: sys.reactives.clone(),
        output_reactives: sys.output_reactives.clone(),
        structure: sys.structure.clone(),
        output_membrane: sys.output_membrane,
        grades: grades.clone(),
        initial,
        rules,
        roles: sys.roles.clone(),
    }
}

/// The crisp systems a fuzzy system slices into: one per positive grade,
/// all over the product alphabet `reactive@grade`, differing only in their
/// output reactives.
#[derive(Debug, Clone)]
pub struct SliceFamily {
    pub slices: BTreeMap<Grade, CrispPSystem>,
}

impl SliceFamily {
    pub fn slice(&self, t: Grade) -> Option<&CrispPSystem> {
        self.slices.get(&t)
    }
}

/// Expands one rule over the product alphabet: every letter picks a grade at
/// or above its threshold, producing one crisp rule per combination of
/// per-letter grade multisets. Identical expansions collapse.
fn expand_rule(
    rule: &Rule,
    grades: &GradeSet,
    cap: usize,
    at: (MembraneId, usize),
) -> Result<Vec<CrispRule>, ConstructionError> {
    // Per letter, the multisets of grade picks of the right size.
    fn letter_choices(
        word: &RuleWord,
        tau: impl Fn(&ReactiveId) -> Grade,
        grades: &GradeSet,
    ) -> Vec<Vec<RuleWord>> {
        word.iter()
            .map(|(v, n)| {
                let allowed: Vec<Grade> = grades
                    .positive()
                    .iter()
                    .copied()
                    .filter(|&t| t >= tau(v))
                    .collect();
                multisets_of(n, &allowed)
                    .into_iter()
                    .map(|picks| {
                        picks
                            .into_iter()
                            .map(|(t, c)| (v.tagged(t), c))
                            .collect::<RuleWord>()
                    })
                    .collect()
            })
            .collect()
    }

    let in_choices = letter_choices(&rule.incoming, |v| rule.tau_in(v), grades);
    let out_choices = letter_choices(&rule.outgoing, |v| rule.tau_out(v), grades);

    let mut expanded = vec![CrispRule::default()];
    for (side, choices) in [(0usize, in_choices), (1, out_choices)] {
        for per_letter in choices {
            let mut next = Vec::with_capacity(expanded.len() * per_letter.len());
            for base in &expanded {
                for pick in &per_letter {
                    let mut r = base.clone();
                    let target = if side == 0 {
                        &mut r.incoming
                    } else {
                        &mut r.outgoing
                    };
                    for (v, c) in pick.iter() {
                        target.set(v.clone(), target.count(v) + c);
                    }
                    next.push(r);
                    if next.len() > cap {
                        return Err(ConstructionError::ExpansionCap {
                            membrane: at.0,
                            rule: at.1,
                            cap,
                        });
                    }
                }
            }
            expanded = next;
        }
    }
    expanded.sort();
    expanded.dedup();
    Ok(expanded)
}

/// All multisets of `n` picks from `allowed`, as grade counts.
fn multisets_of(n: u64, allowed: &[Grade]) -> Vec<Vec<(Grade, u64)>> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    fn recurse(
        n: u64,
        allowed: &[Grade],
        acc: &mut Vec<(Grade, u64)>,
        out: &mut Vec<Vec<(Grade, u64)>>,
    ) {
        if allowed.is_empty() {
            if n == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for take in 0..=n {
            if take > 0 {
                acc.push((allowed[0], take));
            }
            recurse(n - take, &allowed[1..], acc, out);
            if take > 0 {
                acc.pop();
            }
        }
    }
    recurse(n, allowed, &mut acc, &mut out);
    out
}

/// Default cap on the number of crisp rules one fuzzy rule may expand into.
pub const DEFAULT_EXPANSION_CAP: usize = 4096;

/// Slices a fuzzy system into its per-grade crisp systems over the alphabet
/// `reactive@grade`. All slices share structure, initial content and rules;
/// only the output reactives differ.
pub fn slice(sys: &PSystem, cap: usize) -> Result<SliceFamily, ConstructionError> {
    let report = sys.validate();
    if !report.is_valid() {
        return Err(ConstructionError::InvalidInput(report.to_string()));
    }

    let mut reactives = std::collections::BTreeSet::new();
    for v in &sys.reactives {
        for &t in sys.grades.positive() {
            reactives.insert(v.tagged(t));
        }
    }

    let mut initial: BTreeMap<RegionId, crate::crisp::CrispContent> = BTreeMap::new();
    for (region, content) in sys.initial.regions() {
        let crisp = content.iter().map(|(v, t, c)| (v.tagged(t), c)).collect();
        initial.insert(region, crisp);
    }

    let mut rules: BTreeMap<MembraneId, Vec<CrispRule>> = BTreeMap::new();
    for (&m, list) in &sys.rules {
        let mut expanded_all = Vec::new();
        for (i, rule) in list.iter().enumerate() {
            expanded_all.extend(expand_rule(rule, &sys.grades, cap, (m, i))?);
        }
        expanded_all.sort();
        expanded_all.dedup();
        rules.insert(m, expanded_all);
    }

    let slices = sys
        .grades
        .positive()
        .iter()
        .map(|&t| {
            let outputs = sys.output_reactives.iter().map(|v| v.tagged(t)).collect();
            let crisp = CrispPSystem {
                reactives: reactives.clone(),
                output_reactives: outputs,
                structure: sys.structure.clone(),
                output_membrane: sys.output_membrane,
                initial: initial.clone(),
                rules: rules.clone(),
                roles: BTreeMap::new(),
            };
            (t, crisp)
        })
        .collect();
    Ok(SliceFamily { slices })
}

/// Builds one fuzzy system from a family of two-membrane generator
/// components, one per positive grade: component reactives are tagged with
/// their grade label (keeping the union disjoint), a third membrane is added
/// below the output membrane, and each component's collector moves with
/// threshold equal to its grade while everything else demands exact copies.
/// Copies of a collector that arrive above their grade are pulled out of the
/// output membrane into the third membrane by dedicated rules thresholded at
/// the successor grade.
pub fn compose(
    components: &BTreeMap<Grade, CrispPSystem>,
    grades: &GradeSet,
) -> Result<PSystem, ConstructionError> {
    let expected: Vec<Grade> = grades.positive().to_vec();
    let got: Vec<Grade> = components.keys().copied().collect();
    if expected != got {
        return Err(ConstructionError::GradeCoverage(format!(
            "expected components for {:?}, got {:?}",
            expected.iter().map(Grade::to_string).collect::<Vec<_>>(),
            got.iter().map(Grade::to_string).collect::<Vec<_>>(),
        )));
    }

    let mut alphas: BTreeMap<Grade, ReactiveId> = BTreeMap::new();
    for (&t, comp) in components {
        let report = check_generator_shape(comp);
        if !report.conforms {
            return Err(ConstructionError::Shape(t, report.to_string()));
        }
        let alpha = comp
            .role_of(Role::Alpha)
            .ok_or(ConstructionError::MissingRole(t, Role::Alpha))?;
        comp.role_of(Role::Hash)
            .ok_or(ConstructionError::MissingRole(t, Role::Hash))?;
        alphas.insert(t, alpha.tagged(t));
    }

    let structure = MembraneStructure::linear(3);
    let output_membrane = MembraneId(2);

    let mut reactives = std::collections::BTreeSet::new();
    let mut initial = Configuration::empty(&structure);
    let mut rules: BTreeMap<MembraneId, Vec<Rule>> = BTreeMap::new();

    for (&t, comp) in components {
        for v in &comp.reactives {
            reactives.insert(v.tagged(t));
        }
        for (&region, content) in &comp.initial {
            for (v, &count) in content {
                let tagged = v.tagged(t);
                match region {
                    RegionId::Env => {
                        for &t2 in grades.positive() {
                            initial.region_mut(region).add(tagged.clone(), t2, count);
                        }
                    }
                    RegionId::Membrane(_) => {
                        initial.region_mut(region).add(tagged, Grade::one(), count);
                    }
                }
            }
        }
        let alpha = &alphas[&t];
        for (&m, list) in &comp.rules {
            let target = rules.entry(m).or_default();
            for r in list {
                let tag_word = |w: &RuleWord| -> RuleWord {
                    w.iter().map(|(v, c)| (v.tagged(t), c)).collect()
                };
                let tau_of = |w: &RuleWord| -> ThresholdMap {
                    w.letters()
                        .map(|v| {
                            let tagged = v.tagged(t);
                            let tau = if &tagged == alpha { t } else { Grade::one() };
                            (tagged, tau)
                        })
                        .collect()
                };
                target.push(Rule {
                    incoming: tag_word(&r.incoming),
                    outgoing: tag_word(&r.outgoing),
                    tau_in: tau_of(&r.incoming),
                    tau_out: tau_of(&r.outgoing),
                });
            }
        }
    }

    // Burial rules: for every non-top grade, pull over-graded collector
    // copies out of the output membrane, thresholded at the successor grade.
    let burial = rules.entry(MembraneId(3)).or_default();
    for &t in grades.positive() {
        if t.is_one() {
            continue;
        }
        let succ = grades
            .successor(t)
            .expect("every non-top grade has a successor");
        burial.push(Rule::symport_in([(alphas[&t].clone(), 1)], succ));
    }

    for list in rules.values_mut() {
        list.sort();
    }

    Ok(PSystem {
        output_reactives: reactives.clone(),
        reactives,
        structure,
        output_membrane,
        grades: grades.clone(),
        initial,
        rules,
        roles: BTreeMap::new(),
    })
}
