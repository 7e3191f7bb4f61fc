//! Output extraction: histograms of the output membrane, the fuzzy set a
//! halting computation denotes, and the set generated by a whole system.

use std::fmt;

use crate::engine::{explore, ExplorationResult, ExploreBounds};
use crate::fuzzy::{FuzzyNatSet, Grade, GradeSet};
use crate::ids::RegionId;
use crate::model::{Configuration, PSystem};

/// Counts of output-reactive copies in the output membrane, per positive
/// grade. Dense over the grade set: zero counts are meaningful here, they
/// witness that "zero objects at this exactitude" was observed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OutputHistogram {
    entries: Vec<(Grade, u64)>,
}

impl OutputHistogram {
    /// Builds a histogram from explicit per-grade counts, e.g. when reading
    /// a serialized trace. Entries are sorted by grade.
    pub fn from_entries(mut entries: Vec<(Grade, u64)>) -> Self {
        entries.sort();
        OutputHistogram { entries }
    }

    pub fn get(&self, t: Grade) -> Option<u64> {
        self.entries.iter().find(|&&(g, _)| g == t).map(|&(_, n)| n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Grade, u64)> + '_ {
        self.entries.iter().copied()
    }
}

impl fmt::Display for OutputHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (t, n) in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, " {t} : {n}")?;
            first = false;
        }
        if !first {
            write!(f, " ")?;
        }
        write!(f, "}}")
    }
}

/// For each positive grade, the number of output-reactive copies held at
/// that grade in the output membrane of `halt`.
///
/// Panics on an infinite count there: membranes of valid systems are always
/// finite, so this signals an engine bug.
pub fn histogram(sys: &PSystem, halt: &Configuration) -> OutputHistogram {
    let region = halt.region(RegionId::Membrane(sys.output_membrane));
    let entries = sys
        .grades
        .positive()
        .iter()
        .map(|&t| {
            let total: u64 = sys
                .output_reactives
                .iter()
                .map(|v| {
                    region.get(v, t).as_finite().unwrap_or_else(|| {
                        panic!("output membrane holds infinitely many copies of {v}")
                    })
                })
                .sum();
            (t, total)
        })
        .collect();
    OutputHistogram { entries }
}

/// The fuzzy subset of naturals denoted by one halting histogram: `n` gets
/// the greatest grade at which exactly `n` copies were observed, zero grade
/// when no grade attains `n`. The count 0 takes part like any other, so
/// grades with an empty showing contribute to the value at 0.
pub fn output_fuzzy_set(h: &OutputHistogram) -> FuzzyNatSet {
    let mut out = FuzzyNatSet::new();
    for (t, n) in h.iter() {
        out.join_at(n, t);
    }
    out
}

/// The generated fuzzy set of a bounded exploration, with enough detail to
/// answer level queries afterwards.
#[derive(Debug, Clone)]
pub struct GenReport {
    pub gen: FuzzyNatSet,
    /// False means `gen` is only a pointwise lower bound of the true value.
    pub exhausted: bool,
    /// Histogram of every collected halting configuration, keyed by its
    /// discovery id in the exploration.
    pub histograms: Vec<(usize, OutputHistogram)>,
    pub grades: GradeSet,
}

impl GenReport {
    /// True iff some collected halting histogram attains exactly `n` copies
    /// at a grade of at least `t0`. On an exhausted exploration this is
    /// equivalent to `gen(n) >= t0`.
    ///
    /// `t0` must be a positive member of the report's grade set.
    pub fn gen_level_query(&self, n: u64, t0: Grade) -> bool {
        assert!(
            self.grades.contains_positive(t0),
            "level query at {t0}, which is not a positive grade of the system"
        );
        self.histograms
            .iter()
            .any(|(_, h)| h.iter().any(|(t, count)| t >= t0 && count == n))
    }
}

/// Explores the system and joins the outputs of all collected halting
/// computations.
pub fn gen(sys: &PSystem, bounds: &ExploreBounds) -> GenReport {
    let exploration = explore(sys, bounds);
    gen_from_exploration(sys, &exploration)
}

/// Output extraction over an existing exploration.
pub fn gen_from_exploration(sys: &PSystem, exploration: &ExplorationResult) -> GenReport {
    let mut histograms = Vec::new();
    let mut generated = FuzzyNatSet::new();
    for &id in &exploration.halting_ids {
        let h = histogram(sys, &exploration.configs[id]);
        let out = output_fuzzy_set(&h);
        generated = generated.join(&out);
        histograms.push((id, h));
    }
    GenReport {
        gen: generated,
        exhausted: exploration.exhausted,
        histograms,
        grades: sys.grades.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::ExtNat;
    use crate::ids::{MembraneId, ReactiveId};
    use crate::model::tests::toy_antiport;

    fn rid(s: &str) -> ReactiveId {
        ReactiveId::new(s)
    }

    fn g(n: i64, d: i64) -> Grade {
        Grade::new(n, d).unwrap()
    }

    fn hist(entries: &[((i64, i64), u64)]) -> OutputHistogram {
        OutputHistogram {
            entries: entries.iter().map(|&((n, d), c)| (g(n, d), c)).collect(),
        }
    }

    #[test]
    fn histogram_counts_output_reactives_per_grade() {
        let mut sys = toy_antiport();
        sys.reactives.insert(rid("u"));
        let mut halt = sys.initial.clone();
        let m_out = RegionId::Membrane(MembraneId(1));
        halt.set_region(m_out, Default::default());
        halt.region_mut(m_out)
            .add(rid("v"), Grade::one(), ExtNat::fin(2));
        halt.region_mut(m_out)
            .add(rid("v"), g(1, 2), ExtNat::fin(1));
        halt.region_mut(m_out)
            .add(rid("u"), Grade::one(), ExtNat::fin(4));
        let h = histogram(&sys, &halt);
        assert_eq!(h.get(g(1, 2)), Some(1));
        assert_eq!(h.get(Grade::one()), Some(2));

        // With every reactive counted, the grade-1 bucket holds both.
        sys.output_reactives = sys.reactives.clone();
        let h = histogram(&sys, &halt);
        assert_eq!(h.get(Grade::one()), Some(6));
    }

    #[test]
    fn histogram_of_empty_output_membrane_is_all_zero() {
        let sys = toy_antiport();
        let mut halt = sys.initial.clone();
        halt.set_region(RegionId::Membrane(MembraneId(1)), Default::default());
        let h = histogram(&sys, &halt);
        assert!(h.iter().all(|(_, n)| n == 0));
    }

    #[test]
    fn output_set_takes_the_greatest_attaining_grade() {
        // Both grades attain 1; nothing attains 0.
        let out = output_fuzzy_set(&hist(&[((1, 2), 1), ((1, 1), 1)]));
        let expect: FuzzyNatSet = [(1, Grade::one())].into_iter().collect();
        assert_eq!(out, expect);

        let out = output_fuzzy_set(&hist(&[((1, 2), 2), ((1, 1), 0)]));
        let expect: FuzzyNatSet = [(2, g(1, 2)), (0, Grade::one())].into_iter().collect();
        assert_eq!(out, expect);

        // All-zero histogram: only 0 is attained, at the top grade.
        let out = output_fuzzy_set(&hist(&[((1, 2), 0), ((1, 1), 0)]));
        let expect: FuzzyNatSet = [(0, Grade::one())].into_iter().collect();
        assert_eq!(out, expect);
    }

    #[test]
    fn gen_of_immediately_halting_system_with_empty_output() {
        let mut sys = toy_antiport();
        sys.rules.clear();
        sys.initial
            .set_region(RegionId::Membrane(MembraneId(1)), Default::default());
        let report = gen(&sys, &ExploreBounds::default());
        assert!(report.exhausted);
        let expect: FuzzyNatSet = [(0, Grade::one())].into_iter().collect();
        assert_eq!(report.gen, expect);
    }

    #[test]
    fn gen_of_toy_antiport() {
        let sys = toy_antiport();
        let report = gen(&sys, &ExploreBounds::default());
        assert!(report.exhausted);
        assert_eq!(report.histograms.len(), 3);
        let expect: FuzzyNatSet = [(0, Grade::one()), (1, Grade::one()), (2, Grade::one())]
            .into_iter()
            .collect();
        assert_eq!(report.gen, expect);
    }

    #[test]
    fn level_queries_match_the_toy_histograms() {
        let sys = toy_antiport();
        let report = gen(&sys, &ExploreBounds::default());
        assert!(report.gen_level_query(2, g(1, 2)));
        assert!(!report.gen_level_query(3, g(1, 2)));
    }

    #[test]
    #[should_panic(expected = "not a positive grade")]
    fn level_query_outside_the_grade_set_panics() {
        let sys = toy_antiport();
        let report = gen(&sys, &ExploreBounds::default());
        report.gen_level_query(1, g(1, 3));
    }

    #[test]
    fn query_agrees_with_gen_levels_when_exhausted() {
        let sys = toy_antiport();
        let report = gen(&sys, &ExploreBounds::default());
        assert!(report.exhausted);
        for n in 0..6 {
            for &t0 in sys.grades.positive() {
                assert_eq!(
                    report.gen_level_query(n, t0),
                    report.gen.get(n) >= t0,
                    "disagreement at n={n}, t0={t0}"
                );
            }
        }
    }
}
