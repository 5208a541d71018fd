//! Text format for models.
//!
//! ```text
//! pca v1
//! circle 10        # or: circle pig
//! arc 0 3
//! ```

use crate::error::{Error, Result};
use crate::model::{Circle, Coord, PcaModel};

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

fn int(tok: &str, line: usize, col: usize) -> Result<Coord> {
    tok.parse::<Coord>().map_err(|_| syntax(line, col, format!("expected an integer, found `{tok}`")))
}

pub fn parse_model(text: &str) -> Result<PcaModel> {
    let mut header = false;
    let mut circle = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut col = 0;
        for part in body.split_inclusive(char::is_whitespace) {
            let tok = part.trim_end();
            if !tok.is_empty() {
                toks.push((tok, col + 1));
            }
            col += part.len();
        }
        let Some(&(head, hcol)) = toks.first() else { continue };
        if !header {
            if toks.iter().map(|t| t.0).collect::<Vec<_>>() != ["pca", "v1"] {
                return Err(syntax(line, hcol, "expected header `pca v1`"));
            }
            header = true;
            continue;
        }
        match head {
            "circle" => {
                if circle.is_some() {
                    return Err(syntax(line, hcol, "duplicate circle directive"));
                }
                let &(v, vcol) = toks.get(1).ok_or_else(|| syntax(line, hcol, "circle needs a value"))?;
                if toks.len() > 2 {
                    return Err(syntax(line, toks[2].1, "trailing input"));
                }
                circle = Some(if v == "pig" { Circle::Pig } else { Circle::Finite(int(v, line, vcol)?) });
            }
            "arc" => {
                if toks.len() != 3 {
                    return Err(syntax(line, hcol, "arc needs exactly two integers"));
                }
                arcs.push((int(toks[1].0, line, toks[1].1)?, int(toks[2].0, line, toks[2].1)?));
            }
            other => return Err(syntax(line, hcol, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(syntax(1, 1, "missing header `pca v1`"));
    }
    let circle = circle.ok_or_else(|| syntax(text.lines().count().max(1), 1, "missing circle directive"))?;
    PcaModel::new(circle, arcs)
}

pub fn serialize_model(m: &PcaModel) -> String {
    let mut out = String::from("pca v1\n");
    match m.circle_kind() {
        Circle::Pig => out.push_str("circle pig\n"),
        Circle::Finite(c) => out.push_str(&format!("circle {c}\n")),
    }
    for a in m.arcs() {
        out.push_str(&format!("arc {} {}\n", a.s, a.t));
    }
    out
}
