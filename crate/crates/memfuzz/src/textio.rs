//! Line-oriented text format for system definitions.
//!
//! One file describes one system. `#` starts a comment, statements are one
//! line each and token-based, so spacing around `{`, `}`, `:` and `,` is
//! free. Grades are exact rationals written as `p/q` or integers.
//!
//! ```text
//! system NAME
//! grades 0 1/2 1            # the admissible grades, ascending, with 0 and 1
//! reactives v w a:role=alpha h:role=hash
//! outputs v                 # reactives counted in the output membrane
//! membrane 1 parent env
//! membrane 2 parent 1 output
//! init 1 { w@1 : 2 }        # reactive@grade : count
//! init env { v : inf }      # homogeneous supply, grade omitted
//! rule 1 antiport in { v : 1 } out { w : 1 } tin { v : 1/2 } tout { w : 1 }
//! rule 2 symport-in in { a : 1 } tin { a : 1/2 }
//! ```
//!
//! Parsing normalizes rule order per membrane to the canonical ordering, so
//! rendering any parsed document is byte-stable and `parse(render(d)) == d`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::fuzzy::{ExtNat, Grade, GradeSet};
use crate::ids::{MembraneId, ReactiveId, RegionId};
use crate::model::{Configuration, MembraneStructure, PSystem, Role, Rule, RuleWord};

/// A positioned syntax or declaration error. Lines and columns are 1-based.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// Parsed form of one definition file.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDocument {
    pub name: String,
    pub system: PSystem,
}

#[derive(Debug, Clone)]
pub(crate) struct Tok {
    pub(crate) text: String,
    pub(crate) line: usize,
    pub(crate) col: usize,
}

impl Tok {
    pub(crate) fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Vec<Vec<Tok>> {
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let mut toks = Vec::new();
        let mut word_start: Option<usize> = None;
        let line = raw.trim_end_matches('\r');
        let push_word = |toks: &mut Vec<Tok>, start: usize, end: usize| {
            toks.push(Tok {
                text: line[start..end].to_string(),
                line: ln + 1,
                col: start + 1,
            });
        };
        let mut iter = line.char_indices().peekable();
        while let Some((i, ch)) = iter.next() {
            match ch {
                '#' => {
                    if let Some(s) = word_start.take() {
                        push_word(&mut toks, s, i);
                    }
                    break;
                }
                c if c.is_whitespace() => {
                    if let Some(s) = word_start.take() {
                        push_word(&mut toks, s, i);
                    }
                }
                '{' | '}' | ':' | ',' => {
                    if let Some(s) = word_start.take() {
                        push_word(&mut toks, s, i);
                    }
                    toks.push(Tok {
                        text: ch.to_string(),
                        line: ln + 1,
                        col: i + 1,
                    });
                }
                _ => {
                    if word_start.is_none() {
                        word_start = Some(i);
                    }
                }
            }
            if iter.peek().is_none() {
                if let Some(s) = word_start.take() {
                    push_word(&mut toks, s, line.len());
                }
            }
        }
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    lines
}

/// Cursor over one statement line.
pub(crate) struct Cursor<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(toks: &'a [Tok]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    pub(crate) fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    pub(crate) fn last(&self) -> &'a Tok {
        &self.toks[self.toks.len() - 1]
    }

    pub(crate) fn expect(&mut self, what: &str) -> Result<&'a Tok, ParseError> {
        self.next().ok_or_else(|| {
            let t = self.last();
            ParseError {
                line: t.line,
                col: t.col + t.text.len(),
                message: format!("expected {what}"),
            }
        })
    }

    pub(crate) fn expect_exact(&mut self, text: &str) -> Result<&'a Tok, ParseError> {
        let t = self.expect(&format!("`{text}`"))?;
        if t.text != text {
            return Err(t.err(format!("expected `{text}`, found `{}`", t.text)));
        }
        Ok(t)
    }

    /// `{ key : value, ... }` as raw token pairs.
    pub(crate) fn brace_map(&mut self) -> Result<Vec<(&'a Tok, &'a Tok)>, ParseError> {
        self.expect_exact("{")?;
        let mut entries = Vec::new();
        loop {
            let t = self.expect("`}` or an entry")?;
            if t.text == "}" {
                break;
            }
            let key = t;
            self.expect_exact(":")?;
            let value = self.expect("a value")?;
            entries.push((key, value));
            let sep = self.expect("`,` or `}`")?;
            match sep.text.as_str() {
                "," => continue,
                "}" => break,
                _ => return Err(sep.err(format!("expected `,` or `}}`, found `{}`", sep.text))),
            }
        }
        Ok(entries)
    }
}

pub(crate) fn parse_count(tok: &Tok) -> Result<ExtNat, ParseError> {
    if tok.text == "inf" {
        return Ok(ExtNat::Inf);
    }
    tok.text
        .parse::<u64>()
        .map(ExtNat::fin)
        .map_err(|_| tok.err(format!("expected a count or `inf`, found `{}`", tok.text)))
}

pub(crate) fn parse_grade_tok(tok: &Tok) -> Result<Grade, ParseError> {
    tok.text
        .parse::<Grade>()
        .map_err(|e| tok.err(e.to_string()))
}

pub(crate) fn parse_membrane_tok(tok: &Tok) -> Result<MembraneId, ParseError> {
    tok.text
        .parse::<u32>()
        .map(MembraneId)
        .map_err(|_| tok.err(format!("expected a membrane label, found `{}`", tok.text)))
}

#[derive(Debug, Default)]
struct Draft<'a> {
    name: Option<&'a Tok>,
    grades: Option<(Vec<Grade>, &'a Tok)>,
    reactives: Vec<(&'a Tok, Option<Role>)>,
    outputs: Vec<&'a Tok>,
    membranes: Vec<(MembraneId, &'a Tok, &'a Tok, bool)>,
    inits: Vec<(&'a Tok, Vec<(&'a Tok, &'a Tok)>)>,
    rules: Vec<RuleDraft<'a>>,
}

#[derive(Debug)]
struct RuleDraft<'a> {
    membrane_tok: &'a Tok,
    membrane: MembraneId,
    sections: Vec<(&'a Tok, Vec<(&'a Tok, &'a Tok)>)>,
}

/// Parses one definition file into a document, or a list of positioned
/// errors. Reference and grade-membership problems are reported here;
/// semantic invariants are [`PSystem::validate`]'s business.
pub fn parse(text: &str) -> Result<SystemDocument, Vec<ParseError>> {
    let lines = tokenize(text);
    let mut errors = Vec::new();
    let mut draft = Draft::default();

    if lines.is_empty() {
        return Err(vec![ParseError {
            line: 1,
            col: 1,
            message: "missing system header".to_string(),
        }]);
    }

    for toks in &lines {
        let mut cur = Cursor::new(toks);
        let head = cur.next().unwrap();
        let result = match head.text.as_str() {
            "system" => parse_system_line(&mut cur, &mut draft),
            "grades" => parse_grades_line(&mut cur, head, &mut draft),
            "reactives" => parse_reactives_line(&mut cur, &mut draft),
            "outputs" => parse_outputs_line(&mut cur, &mut draft),
            "membrane" => parse_membrane_line(&mut cur, &mut draft),
            "init" => parse_init_line(&mut cur, &mut draft),
            "rule" => parse_rule_line(&mut cur, &mut draft),
            other => Err(head.err(format!("unknown statement `{other}`"))),
        };
        if let Err(e) = result {
            errors.push(e);
            continue;
        }
        if let Some(extra) = cur.peek() {
            errors.push(extra.err(format!("unexpected trailing `{}`", extra.text)));
        }
    }

    if draft.name.is_none() {
        errors.insert(
            0,
            ParseError {
                line: 1,
                col: 1,
                message: "missing system header".to_string(),
            },
        );
    }

    match assemble(&draft, &mut errors) {
        Some(doc) if errors.is_empty() => Ok(doc),
        _ => Err(errors),
    }
}

fn parse_system_line<'a>(cur: &mut Cursor<'a>, draft: &mut Draft<'a>) -> Result<(), ParseError> {
    let name = cur.expect("a system name")?;
    if draft.name.is_some() {
        return Err(name.err("duplicate system header"));
    }
    draft.name = Some(name);
    Ok(())
}

fn parse_grades_line<'a>(
    cur: &mut Cursor<'a>,
    head: &'a Tok,
    draft: &mut Draft<'a>,
) -> Result<(), ParseError> {
    if draft.grades.is_some() {
        return Err(head.err("duplicate grades declaration"));
    }
    let mut grades = Vec::new();
    while let Some(tok) = cur.next() {
        let g = parse_grade_tok(tok)?;
        if let Some(&last) = grades.last() {
            if g <= last {
                return Err(tok.err("grades must be listed in strictly ascending order"));
            }
        }
        grades.push(g);
    }
    if grades.is_empty() {
        return Err(head.err("grades declaration lists no grades"));
    }
    draft.grades = Some((grades, head));
    Ok(())
}

fn parse_reactives_line<'a>(cur: &mut Cursor<'a>, draft: &mut Draft<'a>) -> Result<(), ParseError> {
    while let Some(tok) = cur.next() {
        if tok.text == "env" || tok.text == "inf" {
            return Err(tok.err(format!(
                "`{}` is reserved and cannot name a reactive",
                tok.text
            )));
        }
        let mut role = None;
        if cur.peek().map(|t| t.text.as_str()) == Some(":") {
            cur.next();
            let ann = cur.expect("a role annotation")?;
            role = match ann.text.as_str() {
                "role=alpha" => Some(Role::Alpha),
                "role=hash" => Some(Role::Hash),
                other => return Err(ann.err(format!("unknown annotation `{other}`"))),
            };
        }
        draft.reactives.push((tok, role));
    }
    Ok(())
}

fn parse_outputs_line<'a>(cur: &mut Cursor<'a>, draft: &mut Draft<'a>) -> Result<(), ParseError> {
    while let Some(tok) = cur.next() {
        draft.outputs.push(tok);
    }
    Ok(())
}

fn parse_membrane_line<'a>(cur: &mut Cursor<'a>, draft: &mut Draft<'a>) -> Result<(), ParseError> {
    let id_tok = cur.expect("a membrane label")?;
    let id = parse_membrane_tok(id_tok)?;
    cur.expect_exact("parent")?;
    let parent = cur.expect("a parent region")?;
    let mut output = false;
    if let Some(tok) = cur.next() {
        if tok.text == "output" {
            output = true;
        } else {
            return Err(tok.err(format!("expected `output`, found `{}`", tok.text)));
        }
    }
    draft.membranes.push((id, id_tok, parent, output));
    Ok(())
}

fn parse_init_line<'a>(cur: &mut Cursor<'a>, draft: &mut Draft<'a>) -> Result<(), ParseError> {
    let region = cur.expect("a region (membrane label or `env`)")?;
    let entries = cur.brace_map()?;
    draft.inits.push((region, entries));
    Ok(())
}

fn parse_rule_line<'a>(cur: &mut Cursor<'a>, draft: &mut Draft<'a>) -> Result<(), ParseError> {
    let membrane_tok = cur.expect("a membrane label")?;
    let membrane = parse_membrane_tok(membrane_tok)?;
    let kind = cur.expect("a rule kind")?;
    let allowed: &[&str] = match kind.text.as_str() {
        "antiport" => &["in", "out", "tin", "tout"],
        "symport-in" => &["in", "tin"],
        "symport-out" => &["out", "tout"],
        other => return Err(kind.err(format!("unknown rule kind `{other}`"))),
    };
    let mut sections = Vec::new();
    let mut seen = BTreeSet::new();
    while let Some(tok) = cur.next() {
        if !allowed.contains(&tok.text.as_str()) {
            return Err(tok.err(format!(
                "unexpected section `{}` for a {} rule",
                tok.text, kind.text
            )));
        }
        if !seen.insert(tok.text.clone()) {
            return Err(tok.err(format!("duplicate section `{}`", tok.text)));
        }
        let entries = cur.brace_map()?;
        sections.push((tok, entries));
    }
    for required in allowed.iter().filter(|s| !s.starts_with('t')) {
        if !seen.contains(*required) {
            return Err(kind.err(format!(
                "{} rule is missing its `{required}` section",
                kind.text
            )));
        }
    }
    draft.rules.push(RuleDraft {
        membrane_tok,
        membrane,
        sections,
    });
    Ok(())
}

fn assemble(draft: &Draft<'_>, errors: &mut Vec<ParseError>) -> Option<SystemDocument> {
    let name = draft.name?.text.clone();

    let grades = match &draft.grades {
        Some((list, head)) => match GradeSet::new(list.clone()) {
            Ok(set) => Some(set),
            Err(e) => {
                errors.push(head.err(e.to_string()));
                None
            }
        },
        None => {
            errors.push(ParseError {
                line: 1,
                col: 1,
                message: "missing grades declaration".to_string(),
            });
            None
        }
    };

    let mut reactives: BTreeSet<ReactiveId> = BTreeSet::new();
    let mut roles: BTreeMap<ReactiveId, Role> = BTreeMap::new();
    for (tok, role) in &draft.reactives {
        let id = ReactiveId::new(&tok.text);
        if !reactives.insert(id.clone()) {
            errors.push(tok.err(format!("duplicate reactive `{id}`")));
        }
        if let Some(role) = role {
            if roles.values().any(|r| r == role) {
                errors.push(tok.err(format!("role {role} is already assigned")));
            }
            roles.insert(id, *role);
        }
    }

    let mut output_reactives: BTreeSet<ReactiveId> = BTreeSet::new();
    for tok in &draft.outputs {
        let id = ReactiveId::new(&tok.text);
        if !reactives.contains(&id) {
            errors.push(tok.err(format!("undeclared reactive `{id}`")));
        }
        if !output_reactives.insert(id) {
            errors.push(tok.err(format!("duplicate output reactive `{}`", tok.text)));
        }
    }

    let mut parents: BTreeMap<MembraneId, RegionId> = BTreeMap::new();
    let mut output_membrane: Option<(MembraneId, &Tok)> = None;
    let declared: BTreeSet<MembraneId> = draft.membranes.iter().map(|&(id, ..)| id).collect();
    for (id, id_tok, parent_tok, is_output) in &draft.membranes {
        let parent = if parent_tok.text == "env" {
            RegionId::Env
        } else {
            match parse_membrane_tok(parent_tok) {
                Ok(p) => {
                    if !declared.contains(&p) {
                        errors.push(parent_tok.err(format!("undeclared parent membrane `{p}`")));
                    }
                    RegionId::Membrane(p)
                }
                Err(e) => {
                    errors.push(e);
                    continue;
                }
            }
        };
        if parents.insert(*id, parent).is_some() {
            errors.push(id_tok.err(format!("duplicate membrane `{id}`")));
        }
        if *is_output {
            if output_membrane.is_some() {
                errors.push(id_tok.err("a second membrane is marked `output`"));
            } else {
                output_membrane = Some((*id, id_tok));
            }
        }
    }
    if output_membrane.is_none() && !draft.membranes.is_empty() {
        let tok = draft.membranes[0].1;
        errors.push(tok.err("no membrane is marked `output`"));
    }
    if draft.membranes.is_empty() {
        errors.push(ParseError {
            line: 1,
            col: 1,
            message: "no membranes declared".to_string(),
        });
    }

    let structure = MembraneStructure::new(parents);
    let mut initial = Configuration::empty(&structure);
    let mut seen_regions: BTreeSet<RegionId> = BTreeSet::new();

    for (region_tok, entries) in &draft.inits {
        let region = if region_tok.text == "env" {
            RegionId::Env
        } else {
            match parse_membrane_tok(region_tok) {
                Ok(m) => {
                    if !declared.contains(&m) {
                        errors.push(region_tok.err(format!("undeclared membrane `{m}`")));
                        continue;
                    }
                    RegionId::Membrane(m)
                }
                Err(e) => {
                    errors.push(e);
                    continue;
                }
            }
        };
        if !seen_regions.insert(region) {
            errors.push(region_tok.err(format!("duplicate init for region `{region}`")));
            continue;
        }
        for (key, value) in entries {
            let count = match parse_count(value) {
                Ok(c) => c,
                Err(e) => {
                    errors.push(e);
                    continue;
                }
            };
            match region {
                RegionId::Env => {
                    let id = ReactiveId::new(&key.text);
                    if !reactives.contains(&id) {
                        errors.push(key.err(format!("undeclared reactive `{id}`")));
                        continue;
                    }
                    if let Some(grades) = &grades {
                        let target = initial.region_mut(region);
                        for &t in grades.positive() {
                            if !target.get(&id, t).is_zero() {
                                errors.push(key.err(format!("duplicate entry for `{id}`")));
                                break;
                            }
                            target.set(id.clone(), t, count);
                        }
                    }
                }
                RegionId::Membrane(_) => {
                    let Some((id_part, grade_part)) = key.text.rsplit_once('@') else {
                        errors.push(key.err(format!(
                            "membrane entry `{}` needs the form reactive@grade",
                            key.text
                        )));
                        continue;
                    };
                    let id = ReactiveId::new(id_part);
                    if !reactives.contains(&id) {
                        errors.push(key.err(format!("undeclared reactive `{id}`")));
                        continue;
                    }
                    let t = match grade_part.parse::<Grade>() {
                        Ok(t) => t,
                        Err(e) => {
                            errors.push(key.err(e.to_string()));
                            continue;
                        }
                    };
                    if let Some(grades) = &grades {
                        if !grades.contains_positive(t) {
                            errors.push(key.err(format!(
                                "grade {t} is not a positive member of the declared grades"
                            )));
                            continue;
                        }
                    }
                    let target = initial.region_mut(region);
                    if !target.get(&id, t).is_zero() {
                        errors.push(key.err(format!("duplicate entry for `{}`", key.text)));
                        continue;
                    }
                    target.set(id, t, count);
                }
            }
        }
    }

    let mut rules: BTreeMap<MembraneId, Vec<Rule>> = BTreeMap::new();
    for rd in &draft.rules {
        if !declared.contains(&rd.membrane) {
            errors.push(
                rd.membrane_tok
                    .err(format!("undeclared membrane `{}`", rd.membrane)),
            );
            continue;
        }
        let mut rule = Rule::default();
        for (section, entries) in &rd.sections {
            match section.text.as_str() {
                "in" | "out" => {
                    let mut word = RuleWord::new();
                    for (key, value) in entries {
                        let id = ReactiveId::new(&key.text);
                        if !reactives.contains(&id) {
                            errors.push(key.err(format!("undeclared reactive `{id}`")));
                            continue;
                        }
                        let count = match value.text.parse::<u64>() {
                            Ok(0) => {
                                errors.push(value.err("word counts must be positive"));
                                continue;
                            }
                            Ok(c) => c,
                            Err(_) => {
                                errors.push(value.err(format!(
                                    "expected a positive count, found `{}`",
                                    value.text
                                )));
                                continue;
                            }
                        };
                        if word.count(&id) > 0 {
                            errors.push(key.err(format!("duplicate word letter `{id}`")));
                            continue;
                        }
                        word.set(id, count);
                    }
                    if word.is_empty() {
                        errors.push(section.err("empty word"));
                    }
                    if section.text == "in" {
                        rule.incoming = word;
                    } else {
                        rule.outgoing = word;
                    }
                }
                "tin" | "tout" => {
                    let mut tau = BTreeMap::new();
                    for (key, value) in entries {
                        let id = ReactiveId::new(&key.text);
                        if !reactives.contains(&id) {
                            errors.push(key.err(format!("undeclared reactive `{id}`")));
                            continue;
                        }
                        let t = match parse_grade_tok(value) {
                            Ok(t) => t,
                            Err(e) => {
                                errors.push(e);
                                continue;
                            }
                        };
                        if let Some(grades) = &grades {
                            if !grades.contains(t) {
                                errors.push(value.err(format!(
                                    "grade {t} is not a member of the declared grades"
                                )));
                                continue;
                            }
                        }
                        if tau.insert(id.clone(), t).is_some() {
                            errors.push(key.err(format!("duplicate threshold for `{id}`")));
                        }
                    }
                    if section.text == "tin" {
                        rule.tau_in = tau;
                    } else {
                        rule.tau_out = tau;
                    }
                }
                _ => unreachable!("section names are checked while parsing"),
            }
        }
        rules.entry(rd.membrane).or_default().push(rule);
    }
    // Canonical rule order; indices in traces refer to this ordering.
    for list in rules.values_mut() {
        list.sort();
    }

    let (grades, output_membrane) = match (grades, output_membrane) {
        (Some(g), Some((m, _))) => (g, m),
        _ => return None,
    };

    Some(SystemDocument {
        name,
        system: PSystem {
            reactives,
            output_reactives,
            structure,
            output_membrane,
            grades,
            initial,
            rules,
            roles,
        },
    })
}

/// Canonical rendering; parsing it back yields a structurally equal
/// document, and equal documents render byte-identically.
pub fn render(doc: &SystemDocument) -> String {
    let sys = &doc.system;
    let mut out = String::new();
    let _ = writeln!(out, "system {}", doc.name);
    let _ = writeln!(out, "grades {}", sys.grades);

    let reactive_list: Vec<String> = sys
        .reactives
        .iter()
        .map(|v| match sys.roles.get(v) {
            Some(role) => format!("{v}:role={role}"),
            None => v.to_string(),
        })
        .collect();
    let _ = writeln!(out, "reactives {}", reactive_list.join(" "));

    if !sys.output_reactives.is_empty() {
        let outputs: Vec<String> = sys.output_reactives.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "outputs {}", outputs.join(" "));
    }

    for m in sys.structure.membranes() {
        let parent = sys.structure.parent(m).expect("declared membrane");
        let marker = if m == sys.output_membrane {
            " output"
        } else {
            ""
        };
        let _ = writeln!(out, "membrane {m} parent {parent}{marker}");
    }

    for (region, content) in sys.initial.regions() {
        if content.is_empty() || region.is_env() {
            continue;
        }
        let entries: Vec<String> = content
            .iter()
            .map(|(v, t, c)| format!("{v}@{t} : {c}"))
            .collect();
        let _ = writeln!(out, "init {region} {{ {} }}", entries.join(", "));
    }
    let env = sys.initial.region(RegionId::Env);
    if !env.is_empty() {
        let mut per_reactive: BTreeMap<&ReactiveId, ExtNat> = BTreeMap::new();
        for (v, _, c) in env.iter() {
            per_reactive.entry(v).or_insert(c);
        }
        let entries: Vec<String> = per_reactive
            .iter()
            .map(|(v, c)| format!("{v} : {c}"))
            .collect();
        let _ = writeln!(out, "init env {{ {} }}", entries.join(", "));
    }

    for (&m, list) in &sys.rules {
        for rule in list {
            let _ = writeln!(out, "rule {m} {}", render_rule(rule));
        }
    }
    out
}

fn render_rule(rule: &Rule) -> String {
    let word = |w: &RuleWord| -> String {
        let entries: Vec<String> = w.iter().map(|(v, c)| format!("{v} : {c}")).collect();
        format!("{{ {} }}", entries.join(", "))
    };
    let tau = |t: &BTreeMap<ReactiveId, Grade>| -> String {
        let entries: Vec<String> = t.iter().map(|(v, g)| format!("{v} : {g}")).collect();
        format!("{{ {} }}", entries.join(", "))
    };
    let mut parts = Vec::new();
    let kind = match (rule.incoming.is_empty(), rule.outgoing.is_empty()) {
        (false, false) => "antiport",
        (false, true) => "symport-in",
        (true, false) => "symport-out",
        (true, true) => "antiport",
    };
    parts.push(kind.to_string());
    if !rule.incoming.is_empty() {
        parts.push(format!("in {}", word(&rule.incoming)));
    }
    if !rule.outgoing.is_empty() {
        parts.push(format!("out {}", word(&rule.outgoing)));
    }
    if !rule.tau_in.is_empty() {
        parts.push(format!("tin {}", tau(&rule.tau_in)));
    }
    if !rule.tau_out.is_empty() {
        parts.push(format!("tout {}", tau(&rule.tau_out)));
    }
    parts.join(" ")
}

/// Parses a comma-separated grade list such as `0,1/2,1` into a grade set.
pub fn parse_grade_list(text: &str) -> Result<GradeSet, String> {
    let mut grades = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        grades.push(part.parse::<Grade>().map_err(|e| e.to_string())?);
    }
    GradeSet::new(grades).map_err(|e| e.to_string())
}

/// Display helper joining parse errors one per line.
pub fn format_errors(errors: &[ParseError]) -> String {
    let mut out = String::new();
    for e in errors {
        let _ = writeln!(out, "error: {e}");
    }
    out
}

impl fmt::Display for SystemDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self))
    }
}
