//! Structured text serialization of explorations and generation reports.
//!
//! The format is a schema-versioned key-value document chosen for diffability:
//! canonical ordering makes equal results byte-identical, and parsing a
//! rendered document reproduces it exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::engine::{
    Distribution, Edge, ExplorationResult, ExploreBounds, RuleInstance, TransitionChoice,
    TruncationReason,
};
use crate::fuzzy::{FuzzyMultiset, FuzzyNatSet, Grade, GradeSet};
use crate::ids::{ReactiveId, RegionId};
use crate::model::Configuration;
use crate::outputs::{output_fuzzy_set, GenReport, OutputHistogram};
use crate::textio::{
    parse_count, parse_grade_tok, parse_membrane_tok, tokenize, Cursor, ParseError, Tok,
};

pub const TRACE_FORMAT_VERSION: u32 = 1;

/// A serialized exploration: configurations keyed by discovery id, the
/// transition edges with their full instance choices, per-halting-state
/// histograms and the generated fuzzy set.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceDocument {
    pub tool: String,
    pub system: String,
    pub grades: GradeSet,
    pub bounds: ExploreBounds,
    pub exhausted: bool,
    pub truncation: Option<TruncationReason>,
    pub depth_reached: usize,
    pub configs: Vec<TraceConfig>,
    pub edges: Vec<TraceEdge>,
    pub histograms: Vec<(usize, OutputHistogram)>,
    pub gen: FuzzyNatSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub halting: bool,
    pub configuration: Configuration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEdge {
    pub from: usize,
    pub to: usize,
    pub choice: TransitionChoice,
}

impl TraceDocument {
    pub fn from_run(
        system: &str,
        exploration: &ExplorationResult,
        report: &GenReport,
        bounds: &ExploreBounds,
    ) -> TraceDocument {
        let configs = exploration
            .configs
            .iter()
            .enumerate()
            .map(|(id, configuration)| TraceConfig {
                halting: exploration.halting_ids.contains(&id),
                configuration: configuration.clone(),
            })
            .collect();
        let edges = exploration
            .edges
            .iter()
            .map(|Edge { from, choice, to }| TraceEdge {
                from: *from,
                to: *to,
                choice: choice.clone(),
            })
            .collect();
        TraceDocument {
            tool: format!("memfuzz {}", env!("CARGO_PKG_VERSION")),
            system: system.to_string(),
            grades: report.grades.clone(),
            bounds: bounds.clone(),
            exhausted: exploration.exhausted,
            truncation: exploration.truncation_reason,
            depth_reached: exploration.depth_reached,
            configs,
            edges,
            histograms: report.histograms.clone(),
            gen: report.gen.clone(),
        }
    }

    /// Recomputes the generated fuzzy set from the stored histograms alone.
    /// Matches the stored one for any document produced by `from_run`.
    pub fn resummarize(&self) -> FuzzyNatSet {
        let mut gen = FuzzyNatSet::new();
        for (_, h) in &self.histograms {
            gen = gen.join(&output_fuzzy_set(h));
        }
        gen
    }
}

pub fn render_trace(doc: &TraceDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "memfuzz-trace {TRACE_FORMAT_VERSION}");
    let _ = writeln!(out, "tool {}", doc.tool);
    let _ = writeln!(out, "system {}", doc.system);
    let _ = writeln!(out, "grades {}", doc.grades);
    let _ = writeln!(
        out,
        "bounds max-depth {} max-configs {} max-trans {}",
        doc.bounds.max_depth, doc.bounds.max_configs, doc.bounds.max_transitions_per_config
    );
    let _ = writeln!(out, "exhausted {}", doc.exhausted);
    let _ = writeln!(
        out,
        "truncation {}",
        doc.truncation
            .map(|t| t.to_string())
            .unwrap_or_else(|| "none".to_string())
    );
    let _ = writeln!(out, "depth-reached {}", doc.depth_reached);
    for (id, cfg) in doc.configs.iter().enumerate() {
        let mut flags = String::new();
        if id == 0 {
            flags.push_str(" initial");
        }
        if cfg.halting {
            flags.push_str(" halting");
        }
        let _ = writeln!(out, "config c{id}{flags}");
        for (region, content) in cfg.configuration.regions() {
            let _ = writeln!(out, "  region {region} {}", render_multiset(content));
        }
    }
    for edge in &doc.edges {
        let _ = writeln!(out, "edge c{} c{}", edge.from, edge.to);
        for inst in &edge.choice.instances {
            let _ = writeln!(out, "  apply {} {}", inst.membrane, inst.rule_index);
            for (v, per_grade) in &inst.distribution.enter {
                let _ = writeln!(out, "    enter {v} {}", render_grade_map(per_grade));
            }
            for (v, per_grade) in &inst.distribution.exit {
                let _ = writeln!(out, "    exit {v} {}", render_grade_map(per_grade));
            }
        }
    }
    for (id, h) in &doc.histograms {
        let entries: Vec<String> = h.iter().map(|(t, n)| format!("{t} : {n}")).collect();
        let _ = writeln!(out, "histogram c{id} {{ {} }}", entries.join(", "));
    }
    let entries: Vec<String> = doc.gen.iter().map(|(n, g)| format!("{n} : {g}")).collect();
    if entries.is_empty() {
        let _ = writeln!(out, "gen {{}}");
    } else {
        let _ = writeln!(out, "gen {{ {} }}", entries.join(", "));
    }
    let _ = writeln!(out, "end");
    out
}

fn render_multiset(ms: &FuzzyMultiset) -> String {
    if ms.is_empty() {
        return "{}".to_string();
    }
    let entries: Vec<String> = ms
        .iter()
        .map(|(v, t, c)| format!("{v}@{t} : {c}"))
        .collect();
    format!("{{ {} }}", entries.join(", "))
}

fn render_grade_map(m: &BTreeMap<Grade, u64>) -> String {
    let entries: Vec<String> = m.iter().map(|(t, c)| format!("{t} : {c}")).collect();
    format!("{{ {} }}", entries.join(", "))
}

fn config_ref(tok: &Tok) -> Result<usize, ParseError> {
    tok.text
        .strip_prefix('c')
        .and_then(|rest| rest.parse::<usize>().ok())
        .ok_or_else(|| tok.err(format!("expected a configuration id, found `{}`", tok.text)))
}

/// Splits `reactive@grade`, where the reactive name may itself contain `@`.
fn split_graded(tok: &Tok) -> Result<(ReactiveId, Grade), ParseError> {
    let (id, grade) = tok
        .text
        .rsplit_once('@')
        .ok_or_else(|| tok.err(format!("expected reactive@grade, found `{}`", tok.text)))?;
    let g: Grade = grade
        .parse()
        .map_err(|_| tok.err(format!("`{grade}` is not a grade")))?;
    Ok((ReactiveId::new(id), g))
}

pub fn parse_trace(text: &str) -> Result<TraceDocument, Vec<ParseError>> {
    let lines = tokenize(text);
    let mut errors: Vec<ParseError> = Vec::new();

    let mut tool = String::new();
    let mut system = String::new();
    let mut grades: Option<GradeSet> = None;
    let mut bounds = ExploreBounds::default();
    let mut exhausted = false;
    let mut truncation = None;
    let mut depth_reached = 0usize;
    let mut configs: Vec<TraceConfig> = Vec::new();
    let mut edges: Vec<TraceEdge> = Vec::new();
    let mut histograms: Vec<(usize, OutputHistogram)> = Vec::new();
    let mut gen = FuzzyNatSet::new();
    let mut saw_header = false;
    let mut saw_end = false;

    // Context for nested lines.
    enum Ctx {
        None,
        Config(usize),
        Edge,
    }
    let mut ctx = Ctx::None;

    for toks in &lines {
        let mut cur = Cursor::new(toks);
        let head = cur.next().unwrap();
        let result: Result<(), ParseError> = (|| {
            match head.text.as_str() {
                "memfuzz-trace" => {
                    let v = cur.expect("a format version")?;
                    if v.text != TRACE_FORMAT_VERSION.to_string() {
                        return Err(v.err(format!("unsupported trace format `{}`", v.text)));
                    }
                    saw_header = true;
                }
                "tool" => {
                    let mut parts = Vec::new();
                    while let Some(t) = cur.next() {
                        parts.push(t.text.clone());
                    }
                    tool = parts.join(" ");
                }
                "system" => {
                    system = cur.expect("a system name")?.text.clone();
                }
                "grades" => {
                    let mut list = Vec::new();
                    while let Some(t) = cur.next() {
                        list.push(parse_grade_tok(t)?);
                    }
                    grades = Some(GradeSet::new(list).map_err(|e| head.err(e.to_string()))?);
                }
                "bounds" => {
                    cur.expect_exact("max-depth")?;
                    bounds.max_depth = parse_usize(cur.expect("a number")?)?;
                    cur.expect_exact("max-configs")?;
                    bounds.max_configs = parse_usize(cur.expect("a number")?)?;
                    cur.expect_exact("max-trans")?;
                    bounds.max_transitions_per_config = parse_usize(cur.expect("a number")?)?;
                }
                "exhausted" => {
                    exhausted = parse_bool(cur.expect("true or false")?)?;
                }
                "truncation" => {
                    let t = cur.expect("a truncation reason or none")?;
                    truncation = match t.text.as_str() {
                        "none" => None,
                        "depth-limit" => Some(TruncationReason::DepthLimit),
                        "config-limit" => Some(TruncationReason::ConfigLimit),
                        "transition-limit" => Some(TruncationReason::TransitionLimit),
                        other => return Err(t.err(format!("unknown truncation reason `{other}`"))),
                    };
                }
                "depth-reached" => {
                    depth_reached = parse_usize(cur.expect("a number")?)?;
                }
                "config" => {
                    let id = config_ref(cur.expect("a configuration id")?)?;
                    if id != configs.len() {
                        return Err(head.err(format!(
                            "configuration ids must be sequential; expected c{}",
                            configs.len()
                        )));
                    }
                    let mut halting = false;
                    while let Some(flag) = cur.next() {
                        match flag.text.as_str() {
                            "initial" => {}
                            "halting" => halting = true,
                            other => return Err(flag.err(format!("unknown config flag `{other}`"))),
                        }
                    }
                    configs.push(TraceConfig {
                        halting,
                        configuration: Configuration::default(),
                    });
                    ctx = Ctx::Config(id);
                }
                "region" => {
                    let Ctx::Config(id) = ctx else {
                        return Err(head.err("region line outside a config block"));
                    };
                    let region_tok = cur.expect("a region")?;
                    let region = if region_tok.text == "env" {
                        RegionId::Env
                    } else {
                        RegionId::Membrane(parse_membrane_tok(region_tok)?)
                    };
                    let mut ms = FuzzyMultiset::new();
                    for (key, value) in cur.brace_map()? {
                        let (v, t) = split_graded(key)?;
                        ms.add(v, t, parse_count(value)?);
                    }
                    configs[id].configuration.set_region(region, ms);
                }
                "edge" => {
                    let from = config_ref(cur.expect("a configuration id")?)?;
                    let to = config_ref(cur.expect("a configuration id")?)?;
                    edges.push(TraceEdge {
                        from,
                        to,
                        choice: TransitionChoice::default(),
                    });
                    ctx = Ctx::Edge;
                }
                "apply" => {
                    let Ctx::Edge = ctx else {
                        return Err(head.err("apply line outside an edge block"));
                    };
                    let membrane = parse_membrane_tok(cur.expect("a membrane label")?)?;
                    let rule_index = parse_usize(cur.expect("a rule index")?)?;
                    edges
                        .last_mut()
                        .unwrap()
                        .choice
                        .instances
                        .push(RuleInstance {
                            membrane,
                            rule_index,
                            distribution: Distribution::default(),
                        });
                }
                "enter" | "exit" => {
                    let Ctx::Edge = ctx else {
                        return Err(head.err("distribution line outside an edge block"));
                    };
                    let v = ReactiveId::new(&cur.expect("a reactive")?.text);
                    let mut per_grade = BTreeMap::new();
                    for (key, value) in cur.brace_map()? {
                        let t = parse_grade_tok(key)?;
                        let c = parse_usize(value)? as u64;
                        per_grade.insert(t, c);
                    }
                    let inst = edges
                        .last_mut()
                        .and_then(|e| e.choice.instances.last_mut())
                        .ok_or_else(|| head.err("distribution line outside an apply block"))?;
                    let side = if head.text == "enter" {
                        &mut inst.distribution.enter
                    } else {
                        &mut inst.distribution.exit
                    };
                    side.insert(v, per_grade);
                }
                "histogram" => {
                    let id = config_ref(cur.expect("a configuration id")?)?;
                    let mut entries = Vec::new();
                    for (key, value) in cur.brace_map()? {
                        entries.push((parse_grade_tok(key)?, parse_usize(value)? as u64));
                    }
                    histograms.push((id, OutputHistogram::from_entries(entries)));
                }
                "gen" => {
                    for (key, value) in cur.brace_map()? {
                        let n = parse_usize(key)? as u64;
                        gen.join_at(n, parse_grade_tok(value)?);
                    }
                    ctx = Ctx::None;
                }
                "end" => {
                    saw_end = true;
                    ctx = Ctx::None;
                }
                other => return Err(head.err(format!("unknown trace line `{other}`"))),
            }
            Ok(())
        })();
        if let Err(e) = result {
            errors.push(e);
        }
    }

    if !saw_header {
        errors.push(ParseError {
            line: 1,
            col: 1,
            message: "missing trace header".to_string(),
        });
    }
    if !saw_end {
        errors.push(ParseError {
            line: lines.len().max(1),
            col: 1,
            message: "missing end marker".to_string(),
        });
    }
    let Some(grades) = grades else {
        errors.push(ParseError {
            line: 1,
            col: 1,
            message: "missing grades line".to_string(),
        });
        return Err(errors);
    };
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(TraceDocument {
        tool,
        system,
        grades,
        bounds,
        exhausted,
        truncation,
        depth_reached,
        configs,
        edges,
        histograms,
        gen,
    })
}

fn parse_usize(tok: &Tok) -> Result<usize, ParseError> {
    tok.text
        .parse::<usize>()
        .map_err(|_| tok.err(format!("expected a number, found `{}`", tok.text)))
}

fn parse_bool(tok: &Tok) -> Result<bool, ParseError> {
    match tok.text.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(tok.err(format!("expected true or false, found `{other}`"))),
    }
}
