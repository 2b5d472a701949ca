//! CPLEX-LP export of the 0-1 covering program, and a reader for the files
//! this module writes.
//!
//! Variables are `x_<label>` and coverage rows `e_<label>`, so a file can be
//! mapped back to the instance it came from. Instance metadata travels in
//! `\` comment lines, which LP solvers ignore.

use std::fmt::Write as _;
use std::io::Write;

use super::{Candidate, Label, Origin, SetCoverInstance, SymmetryHint};
use crate::board::BoardVariant;
use crate::error::{Error, Result};

const TERMS_PER_LINE: usize = 12;

fn origin_line(origin: Origin) -> String {
    match origin {
        Origin::Board { n, variant } => format!("board {n} {}", variant.name()),
        Origin::WindRose { q } => format!("windrose {q}"),
        Origin::Custom => "custom".to_string(),
    }
}

fn push_terms(out: &mut String, names: impl Iterator<Item = String>) {
    for (i, name) in names.enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        out.push_str(" + ");
        out.push_str(&name);
    }
}

pub fn write_lp_string(inst: &SetCoverInstance) -> String {
    let var = |c: &Candidate| format!("x_{}", c.label);
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); inst.universe_size()];
    for (ci, c) in inst.candidates().iter().enumerate() {
        for &e in &c.elements {
            covering[e].push(ci);
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "\\ minimum set cover as a 0-1 program");
    let _ = writeln!(out, "\\ origin: {}", origin_line(inst.origin()));
    let _ = writeln!(out, "\\ elements: {}", inst.universe_size());
    let _ = writeln!(out, "\\ candidates: {}", inst.candidates().len());
    if let Some(h) = inst.symmetry() {
        let ids: Vec<String> = h.candidates.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "\\ symmetry: {}", ids.join(" "));
        let _ = writeln!(out, "\\ symmetry-reason: {}", h.reason);
    }
    out.push_str("Minimize\n obj:");
    push_terms(&mut out, inst.candidates().iter().map(var));
    out.push_str("\nSubject To\n");
    for (e, label) in inst.element_labels().iter().enumerate() {
        let _ = write!(out, " e_{label}:");
        if covering[e].is_empty() {
            out.push_str(" 0 x_none");
        } else {
            push_terms(
                &mut out,
                covering[e].iter().map(|&c| var(&inst.candidates()[c])),
            );
        }
        out.push_str(" >= 1\n");
    }
    out.push_str("Binary\n");
    for chunk in inst.candidates().chunks(TERMS_PER_LINE) {
        let names: Vec<String> = chunk.iter().map(var).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("End\n");
    out
}

pub fn write_lp(inst: &SetCoverInstance, dest: &mut dyn Write) -> Result<()> {
    dest.write_all(write_lp_string(inst).as_bytes())?;
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    Head,
    Objective,
    Constraints,
    Binary,
    Done,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_origin(s: &str, line: usize) -> Result<Origin> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let num = |t: &str| {
        t.parse::<u32>()
            .map_err(|_| parse_err(line, format!("bad number {t:?}")))
    };
    match parts.as_slice() {
        ["board", n, v] => Ok(Origin::Board {
            n: num(n)?,
            variant: v
                .parse::<BoardVariant>()
                .map_err(|_| parse_err(line, format!("bad variant {v:?}")))?,
        }),
        ["windrose", q] => Ok(Origin::WindRose { q: num(q)? }),
        ["custom"] => Ok(Origin::Custom),
        _ => Err(parse_err(line, format!("unrecognized origin {s:?}"))),
    }
}

fn label_of(name: &str, prefix: &str, line: usize) -> Result<Label> {
    name.strip_prefix(prefix)
        .and_then(Label::from_suffix)
        .ok_or_else(|| parse_err(line, format!("unrecognized name {name:?}")))
}

/// Reads a file produced by [`write_lp`] back into the instance it encodes.
pub fn read_lp(text: &str) -> Result<SetCoverInstance> {
    let mut origin = Origin::Custom;
    let mut sym_ids: Option<Vec<usize>> = None;
    let mut sym_reason = String::new();
    let mut section = Section::Head;
    let mut vars: Vec<Label> = Vec::new();
    let mut var_index = std::collections::HashMap::new();
    let mut rows: Vec<(Label, Vec<usize>)> = Vec::new();
    let mut binaries = 0usize;
    // Tokens of the row being read; rows may continue over several lines.
    let mut pending: Vec<String> = Vec::new();
    let mut pending_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('\\') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("origin:") {
                origin = parse_origin(v.trim(), ln)?;
            } else if let Some(v) = comment.strip_prefix("symmetry-reason:") {
                sym_reason = v.trim().to_string();
            } else if let Some(v) = comment.strip_prefix("symmetry:") {
                let ids: std::result::Result<Vec<usize>, _> =
                    v.split_whitespace().map(str::parse).collect();
                sym_ids = Some(ids.map_err(|_| parse_err(ln, "bad symmetry list"))?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        match line.to_ascii_lowercase().as_str() {
            "minimize" | "minimise" | "min" => {
                section = Section::Objective;
                continue;
            }
            "subject to" | "st" | "s.t." => {
                section = Section::Constraints;
                continue;
            }
            "binary" | "binaries" | "bin" => {
                section = Section::Binary;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Head | Section::Done => {
                return Err(parse_err(ln, format!("unexpected line {line:?}")));
            }
            Section::Objective => {
                for tok in line.split_whitespace() {
                    if tok == "obj:" || tok == "+" {
                        continue;
                    }
                    let label = label_of(tok, "x_", ln)?;
                    if var_index.insert(tok.to_string(), vars.len()).is_some() {
                        return Err(parse_err(ln, format!("duplicate variable {tok}")));
                    }
                    vars.push(label);
                }
            }
            Section::Constraints => {
                if pending.is_empty() {
                    pending_line = ln;
                }
                pending.extend(line.split_whitespace().map(String::from));
                if pending.len() >= 2 && pending[pending.len() - 2] == ">=" {
                    rows.push(parse_row(&pending, &var_index, pending_line)?);
                    pending.clear();
                }
            }
            Section::Binary => {
                for tok in line.split_whitespace() {
                    if !var_index.contains_key(tok) {
                        return Err(parse_err(
                            ln,
                            format!("binary {tok} is not in the objective"),
                        ));
                    }
                    binaries += 1;
                }
            }
        }
    }
    if !pending.is_empty() {
        return Err(parse_err(pending_line, "unterminated constraint"));
    }
    if section != Section::Done {
        return Err(parse_err(text.lines().count(), "missing End"));
    }
    if binaries != vars.len() {
        return Err(parse_err(
            0,
            format!("{binaries} binaries for {} variables", vars.len()),
        ));
    }

    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    let mut elements = Vec::with_capacity(rows.len());
    for (e, (label, covering)) in rows.into_iter().enumerate() {
        elements.push(label);
        for c in covering {
            sets[c].push(e);
        }
    }
    let candidates = vars
        .into_iter()
        .zip(sets)
        .map(|(label, elements)| Candidate { label, elements })
        .collect();
    let inst = SetCoverInstance::new(elements, candidates, origin)?;
    match sym_ids {
        Some(candidates) => inst.with_symmetry(SymmetryHint {
            candidates,
            reason: sym_reason,
        }),
        None => Ok(inst),
    }
}

fn parse_row(
    tokens: &[String],
    vars: &std::collections::HashMap<String, usize>,
    ln: usize,
) -> Result<(Label, Vec<usize>)> {
    let name = tokens[0]
        .strip_suffix(':')
        .ok_or_else(|| parse_err(ln, "constraint without a name"))?;
    let label = label_of(name, "e_", ln)?;
    if tokens[tokens.len() - 1] != "1" {
        return Err(parse_err(ln, "right-hand side must be 1"));
    }
    let mut covering = Vec::new();
    let mut body = tokens[1..tokens.len() - 2].iter();
    while let Some(tok) = body.next() {
        match tok.as_str() {
            "+" => {}
            "0" => {
                body.next();
            }
            v => covering.push(
                *vars
                    .get(v)
                    .ok_or_else(|| parse_err(ln, format!("unknown variable {v}")))?,
            ),
        }
    }
    Ok((label, covering))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcover::{build_board_instance, build_windrose_instance};

    fn count_rows(text: &str) -> usize {
        text.lines().filter(|l| l.contains(">= 1")).count()
    }

    fn count_binaries(text: &str) -> usize {
        let start = text.lines().position(|l| l == "Binary").unwrap();
        text.lines()
            .skip(start + 1)
            .take_while(|l| *l != "End")
            .map(|l| l.split_whitespace().count())
            .sum()
    }

    #[test]
    fn counts() {
        let text = write_lp_string(&build_board_instance(3, BoardVariant::Full).unwrap());
        assert_eq!((count_rows(&text), count_binaries(&text)), (9, 9));
        assert!(text.contains(" e_0_0: + x_0_0"));
        let text = write_lp_string(&build_windrose_instance(2).unwrap());
        assert_eq!((count_rows(&text), count_binaries(&text)), (7, 7));
    }

    #[test]
    fn round_trip() {
        for inst in [
            build_board_instance(1, BoardVariant::Punctured).unwrap(),
            build_board_instance(9, BoardVariant::Punctured).unwrap(),
            build_board_instance(4, BoardVariant::Full).unwrap(),
            build_windrose_instance(4).unwrap(),
        ] {
            let text = write_lp_string(&inst);
            assert_eq!(read_lp(&text).unwrap(), inst);
        }
    }

    #[test]
    fn uncoverable_rows_survive() {
        let inst = SetCoverInstance::new(
            vec![Label::Index(0), Label::Index(1)],
            vec![Candidate {
                label: Label::Index(0),
                elements: vec![0],
            }],
            Origin::Custom,
        )
        .unwrap();
        assert_eq!(read_lp(&write_lp_string(&inst)).unwrap(), inst);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_lp("hello").is_err());
        let text = write_lp_string(&build_board_instance(3, BoardVariant::Full).unwrap());
        assert!(read_lp(&text.replace("End\n", "")).is_err());
        assert!(read_lp(&text.replace("x_1_1", "x_q")).is_err());
    }
}
