//! Text formats: presentations, representations, structure-constant algebras
//! and canonical dumps.
//!
//! Presentation files look like
//!
//! ```text
//! field Q
//! vertices 1 2
//! arrow a : 1 -> 2 deg 1
//! mode graded cap 8
//! rel 1*a.b + -1*c.d
//! ```
//!
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use asreg_core::algebra::{Algebra, Block};
use asreg_core::field::{Field, Scalar};
use asreg_core::groebner::NormalFormTable;
use asreg_core::linalg::{Mat, SVec};
use asreg_core::presentation::{Mode, Presentation};
use asreg_core::quiver::{elem_normalize, Elem, Path, Quiver};
use asreg_core::repr::Representation;
use asreg_core::sca::Sca;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

/// A line split into whitespace-separated words with their 1-based columns.
struct Line<'a> {
    no: usize,
    text: &'a str,
    words: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn word(&self, i: usize) -> Result<(usize, &'a str), ParseError> {
        match self.words.get(i) {
            Some(w) => Ok(*w),
            None => err(self.no, self.text.chars().count() + 1, format!("expected more after `{}`", self.text.trim())),
        }
    }

    fn end(&self, i: usize) -> Result<(), ParseError> {
        match self.words.get(i) {
            Some((c, w)) => err(self.no, *c, format!("unexpected `{w}`")),
            None => Ok(()),
        }
    }

    /// Everything from word `i` on, with its column.
    fn rest(&self, i: usize) -> Result<(usize, &'a str), ParseError> {
        let (c, _) = self.word(i)?;
        let byte = self.text.char_indices().nth(c - 1).map(|t| t.0).unwrap_or(self.text.len());
        Ok((c, &self.text[byte..]))
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let text = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut words = Vec::new();
        let mut start: Option<usize> = None;
        let mut byte_start = 0;
        for (ci, (bi, ch)) in text.char_indices().enumerate() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    words.push((s, &text[byte_start..bi]));
                }
            } else if start.is_none() {
                start = Some(ci + 1);
                byte_start = bi;
            }
        }
        if let Some(s) = start {
            words.push((s, &text[byte_start..]));
        }
        (!words.is_empty()).then_some(Line { no: i + 1, text, words })
    })
}

fn parse_usize(l: &Line, i: usize, what: &str) -> Result<usize, ParseError> {
    let (c, w) = l.word(i)?;
    w.parse().or_else(|_| err(l.no, c, format!("expected {what}, found `{w}`")))
}

fn parse_i32(l: &Line, i: usize, what: &str) -> Result<i32, ParseError> {
    let (c, w) = l.word(i)?;
    w.parse().or_else(|_| err(l.no, c, format!("expected {what}, found `{w}`")))
}

fn expect(l: &Line, i: usize, kw: &str) -> Result<(), ParseError> {
    let (c, w) = l.word(i)?;
    if w == kw {
        Ok(())
    } else {
        err(l.no, c, format!("expected `{kw}`, found `{w}`"))
    }
}

fn parse_field(l: &Line) -> Result<Field, ParseError> {
    let (c, w) = l.word(1)?;
    let f = match w {
        "Q" => {
            l.end(2)?;
            Field::Rationals
        }
        "F" => {
            let (pc, _) = l.word(2)?;
            let p = parse_usize(l, 2, "a prime")? as u64;
            l.end(3)?;
            Field::prime(p).or_else(|e| err(l.no, pc, e.to_string()))?
        }
        _ => return err(l.no, c, format!("expected `Q` or `F <p>`, found `{w}`")),
    };
    Ok(f)
}

/// Parses a scalar written as an integer or `p/q`.
pub fn parse_scalar(k: &Field, s: &str) -> Option<Scalar> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<i64>().ok()?, d.parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    k.from_frac(n, d)
}

/// Parses `c1*p1 + c2*p2 - p3 …`, where a path is `a.b.c` or `e(v)`.
pub fn parse_elem(q: &Quiver, k: &Field, text: &str, line: usize, col0: usize) -> Result<Elem, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let col = |p: usize| col0 + p;
    let skip = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut terms: Vec<(Path, Scalar)> = Vec::new();
    let mut first = true;
    loop {
        skip(&mut pos);
        if pos >= chars.len() {
            if first {
                return err(line, col(pos), "empty relation");
            }
            break;
        }
        let mut sign = k.one();
        if !first {
            match chars[pos] {
                '+' => pos += 1,
                '-' => {
                    sign = k.neg(&sign);
                    pos += 1
                }
                c => return err(line, col(pos), format!("expected `+` or `-`, found `{c}`")),
            }
            skip(&mut pos);
        } else if chars[pos] == '-' {
            sign = k.neg(&sign);
            pos += 1;
            skip(&mut pos);
        }
        first = false;
        let start = pos;
        while pos < chars.len() && !chars[pos].is_whitespace() && !(pos > start && (chars[pos] == '+' || chars[pos] == '-')) {
            pos += 1;
        }
        let tok: String = chars[start..pos].iter().collect();
        let (coef, path_txt, path_col) = match tok.split_once('*') {
            Some((c, p)) => {
                let v = parse_scalar(k, c).ok_or_else(|| ParseError {
                    line,
                    column: col(start),
                    message: format!("bad coefficient `{c}`"),
                })?;
                (v, p.to_string(), col(start + c.chars().count() + 1))
            }
            None => (k.one(), tok.clone(), col(start)),
        };
        let path = parse_path(q, &path_txt, line, path_col)?;
        terms.push((path, k.mul(&sign, &coef)));
    }
    Ok(elem_normalize(k, terms))
}

fn parse_path(q: &Quiver, s: &str, line: usize, column: usize) -> Result<Path, ParseError> {
    if s.is_empty() {
        return err(line, column, "expected a path");
    }
    if let Some(v) = s.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
        let v = q.vertex(v).or_else(|_| err(line, column, format!("unknown vertex `{v}`")))?;
        return Ok(Path::trivial(v));
    }
    let mut word = Vec::new();
    let mut c = column;
    for name in s.split('.') {
        let a = q.arrow_index(name).or_else(|_| err(line, c, format!("unknown arrow `{name}`")))?;
        word.push(a);
        c += name.chars().count() + 1;
    }
    q.path(&word).or_else(|_| err(line, column, format!("path `{s}` is not composable")))
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut field: Option<Field> = None;
    let mut q = Quiver::new();
    let mut mode = Mode::Finite;
    let mut rels: Vec<(usize, Elem)> = Vec::new();
    let mut last_line = 1;
    for l in lines(text) {
        last_line = l.no;
        let (c, kw) = l.word(0)?;
        if field.is_none() && kw != "field" {
            return err(l.no, c, "the first line must be `field Q` or `field F <p>`");
        }
        match kw {
            "field" => {
                if field.is_some() {
                    return err(l.no, c, "field declared twice");
                }
                field = Some(parse_field(&l)?);
            }
            "vertices" => {
                for &(vc, v) in &l.words[1..] {
                    q.add_vertex(v).or_else(|e| err(l.no, vc, e.to_string()))?;
                }
            }
            "arrow" => {
                let (nc, name) = l.word(1)?;
                expect(&l, 2, ":")?;
                let (sc, src) = l.word(3)?;
                expect(&l, 4, "->")?;
                let (tc, tgt) = l.word(5)?;
                let deg = if l.words.len() > 6 {
                    expect(&l, 6, "deg")?;
                    let d = parse_usize(&l, 7, "a degree")?;
                    l.end(8)?;
                    d as u32
                } else {
                    1
                };
                let s = q.vertex(src).or_else(|_| err(l.no, sc, format!("unknown vertex `{src}`")))?;
                let t = q.vertex(tgt).or_else(|_| err(l.no, tc, format!("unknown vertex `{tgt}`")))?;
                if deg == 0 {
                    return err(l.no, nc, "arrow degrees must be positive");
                }
                q.add_arrow_idx(name, s, t, deg).or_else(|e| err(l.no, nc, e.to_string()))?;
            }
            "mode" => {
                let (mc, m) = l.word(1)?;
                mode = match m {
                    "finite" => {
                        l.end(2)?;
                        Mode::Finite
                    }
                    "graded" => {
                        let cap = if l.words.len() > 2 {
                            expect(&l, 2, "cap")?;
                            let cap = parse_usize(&l, 3, "a cap")?;
                            l.end(4)?;
                            cap as u32
                        } else {
                            12
                        };
                        Mode::Graded { cap }
                    }
                    _ => return err(l.no, mc, format!("expected `finite` or `graded`, found `{m}`")),
                };
            }
            "rel" => {
                let (rc, rest) = l.rest(1)?;
                let k = field.expect("checked above");
                rels.push((l.no, parse_elem(&q, &k, rest, l.no, rc)?));
            }
            _ => return err(l.no, c, format!("unknown directive `{kw}`")),
        }
    }
    let Some(field) = field else {
        return err(last_line, 1, "missing `field` line");
    };
    let lines_of: Vec<usize> = rels.iter().map(|r| r.0).collect();
    Presentation::new(field, q, rels.into_iter().map(|r| r.1).collect(), mode).map_err(|e| {
        let line = match &e {
            asreg_core::Error::NonParallel { index } | asreg_core::Error::NonHomogeneous { index } => lines_of[*index],
            _ => last_line,
        };
        ParseError { line, column: 1, message: e.to_string() }
    })
}

pub fn write_presentation(p: &Presentation) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field {}", field_word(&p.field));
    let _ = writeln!(s, "vertices {}", p.quiver.vertices().join(" "));
    for a in p.quiver.arrows() {
        let _ = writeln!(
            s,
            "arrow {} : {} -> {} deg {}",
            a.name,
            p.quiver.vertex_name(a.source),
            p.quiver.vertex_name(a.target),
            a.degree
        );
    }
    match p.mode {
        Mode::Finite => s.push_str("mode finite\n"),
        Mode::Graded { cap } => {
            let _ = writeln!(s, "mode graded cap {cap}");
        }
    }
    for r in &p.relations {
        let _ = writeln!(s, "rel {}", p.quiver.elem_string(r, &p.field));
    }
    s
}

fn field_word(k: &Field) -> String {
    match k {
        Field::Rationals => "Q".into(),
        Field::Prime(p) => format!("F {p}"),
    }
}

/// Rewriting rules sorted by leading path, one per line.
pub fn dump_normal_forms(t: &NormalFormTable) -> String {
    let q = t.quiver();
    let mut rules: Vec<_> = t.rules().iter().collect();
    rules.sort_by(|a, b| a.lead.cmp(&b.lead));
    let mut s = String::new();
    let _ = writeln!(s, "field {}", field_word(t.field()));
    match t.cap() {
        Some(c) => {
            let _ = writeln!(s, "cap {c}");
        }
        None => s.push_str("cap none\n"),
    }
    let _ = writeln!(s, "complete {}", t.gb_complete());
    let _ = writeln!(s, "finite {}", t.finite_dimensional().as_str());
    for r in rules {
        let _ = writeln!(s, "{} -> {}", q.path_name(&r.lead), q.elem_string(&r.tail, t.field()));
    }
    s
}

/// Representation text: `dim <vertex> [deg <d>] <n>` lines followed by
/// `map <arrow> [deg <d>] : <row> ; <row> …` lines, where `deg` is the
/// degree of the source space.
pub fn parse_representation(alg: &Algebra, text: &str) -> Result<Representation, ParseError> {
    let q = alg.quiver();
    let k = *alg.field();
    let mut dims: BTreeMap<Block, usize> = BTreeMap::new();
    let mut act: BTreeMap<(u32, i32), Mat> = BTreeMap::new();
    let mut seen_header = false;
    let mut last = 1;
    let degree_and_next = |l: &Line, i: usize| -> Result<(i32, usize), ParseError> {
        if l.words.get(i).map(|w| w.1) == Some("deg") {
            Ok((parse_i32(l, i + 1, "a degree")?, i + 2))
        } else {
            Ok((0, i))
        }
    };
    for l in lines(text) {
        last = l.no;
        let (c, kw) = l.word(0)?;
        match kw {
            "rep" if !seen_header => seen_header = true,
            "dim" => {
                let (vc, v) = l.word(1)?;
                let v = q.vertex(v).or_else(|_| err(l.no, vc, format!("unknown vertex `{v}`")))?;
                let (d, i) = degree_and_next(&l, 2)?;
                let n = parse_usize(&l, i, "a dimension")?;
                l.end(i + 1)?;
                if n > 0 {
                    dims.insert((v, d), n);
                }
            }
            "map" => {
                let (ac, a) = l.word(1)?;
                let a = q.arrow_index(a).or_else(|_| err(l.no, ac, format!("unknown arrow `{a}`")))?;
                let (d, i) = degree_and_next(&l, 2)?;
                expect(&l, i, ":")?;
                let ar = q.arrow(a);
                let shift = alg.arrow_shift(a);
                let src = dims.get(&(ar.source, d)).copied().unwrap_or(0);
                let tgt = dims.get(&(ar.target, d + shift)).copied().unwrap_or(0);
                let mut rows: Vec<Vec<Scalar>> = vec![Vec::new()];
                for &(wc, w) in &l.words[i + 1..] {
                    if w == ";" {
                        rows.push(Vec::new());
                        continue;
                    }
                    let x = parse_scalar(&k, w).ok_or_else(|| ParseError {
                        line: l.no,
                        column: wc,
                        message: format!("bad entry `{w}`"),
                    })?;
                    rows.last_mut().unwrap().push(x);
                }
                if rows.len() != tgt || rows.iter().any(|r| r.len() != src) {
                    return err(l.no, ac, format!("matrix must be {tgt}x{src}"));
                }
                let m = Mat::from_rows(tgt, src, &rows);
                if !m.is_zero() {
                    act.insert((a, d), m);
                }
            }
            _ => return err(l.no, c, format!("unknown directive `{kw}`")),
        }
    }
    Representation::new(alg, dims, act, None).map_err(|e| ParseError { line: last, column: 1, message: e.to_string() })
}

pub fn write_representation(m: &Representation) -> String {
    let alg = m.algebra();
    let q = alg.quiver();
    let k = m.field();
    let graded = alg.is_graded();
    let mut s = String::from("rep\n");
    for (&(v, d), n) in m.dims() {
        if graded {
            let _ = writeln!(s, "dim {} deg {d} {n}", q.vertex_name(v));
        } else {
            let _ = writeln!(s, "dim {} {n}", q.vertex_name(v));
        }
    }
    for (&(a, d), mat) in m.actions() {
        let rows: Vec<String> = mat
            .to_dense()
            .iter()
            .map(|r| r.iter().map(|x| k.signed_repr(x).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        let name = &q.arrow(a).name;
        if graded {
            let _ = writeln!(s, "map {name} deg {d} : {}", rows.join(" ; "));
        } else {
            let _ = writeln!(s, "map {name} : {}", rows.join(" ; "));
        }
    }
    s
}

/// Structure-constant dump: `basis`, `idempotent` and `mul i j k c` lines.
pub fn write_sca(a: &Sca) -> String {
    let k = a.field();
    let mut s = String::from("sca\n");
    let _ = writeln!(s, "field {}", field_word(k));
    for (i, l) in a.labels().iter().enumerate() {
        match a.degrees() {
            Some(d) => {
                let _ = writeln!(s, "basis {i} deg {} {l}", d[i]);
            }
            None => {
                let _ = writeln!(s, "basis {i} {l}");
            }
        }
    }
    for (e, name) in a.idempotents().iter().zip(a.vertex_names()) {
        let terms: Vec<String> = e.iter().map(|(i, c)| format!("{}*{i}", k.signed_repr(c))).collect();
        let _ = writeln!(s, "idempotent {name} {}", terms.join(" "));
    }
    for (&(i, j), v) in a.table() {
        for (t, c) in v {
            let _ = writeln!(s, "mul {i} {j} {t} {}", k.signed_repr(c));
        }
    }
    s
}

pub fn parse_sca(text: &str) -> Result<Sca, ParseError> {
    let mut field: Option<Field> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut degrees: Vec<Option<i32>> = Vec::new();
    let mut idem: Vec<SVec> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut mult: BTreeMap<(u32, u32), BTreeMap<u32, Scalar>> = BTreeMap::new();
    let mut last = 1;
    for l in lines(text) {
        last = l.no;
        let (c, kw) = l.word(0)?;
        match kw {
            "sca" => {}
            "field" => field = Some(parse_field(&l)?),
            "basis" => {
                let i = parse_usize(&l, 1, "a basis index")?;
                if i != labels.len() {
                    return err(l.no, l.word(1)?.0, format!("expected basis index {}", labels.len()));
                }
                let (d, at) = if l.words.get(2).map(|w| w.1) == Some("deg") {
                    (Some(parse_i32(&l, 3, "a degree")?), 4)
                } else {
                    (None, 2)
                };
                let (_, rest) = l.rest(at)?;
                labels.push(rest.trim().to_string());
                degrees.push(d);
            }
            "idempotent" => {
                let k = field.ok_or_else(|| ParseError { line: l.no, column: c, message: "field must come first".into() })?;
                let (_, name) = l.word(1)?;
                let mut v: BTreeMap<u32, Scalar> = BTreeMap::new();
                for &(wc, w) in &l.words[2..] {
                    let parsed = w.split_once('*').and_then(|(c, i)| Some((parse_scalar(&k, c)?, i.parse::<u32>().ok()?)));
                    let Some((x, i)) = parsed else { return err(l.no, wc, format!("expected `c*i`, found `{w}`")) };
                    v.insert(i, x);
                }
                idem.push(v.into_iter().filter(|t| !t.1.is_zero()).collect());
                names.push(name.to_string());
            }
            "mul" => {
                let k = field.ok_or_else(|| ParseError { line: l.no, column: c, message: "field must come first".into() })?;
                let i = parse_usize(&l, 1, "an index")? as u32;
                let j = parse_usize(&l, 2, "an index")? as u32;
                let t = parse_usize(&l, 3, "an index")? as u32;
                let (cc, cw) = l.word(4)?;
                let x = parse_scalar(&k, cw).ok_or_else(|| ParseError { line: l.no, column: cc, message: format!("bad coefficient `{cw}`") })?;
                l.end(5)?;
                mult.entry((i, j)).or_default().insert(t, x);
            }
            _ => return err(l.no, c, format!("unknown directive `{kw}`")),
        }
    }
    let Some(k) = field else { return err(last, 1, "missing `field` line") };
    let degrees = if degrees.iter().all(|d| d.is_some()) && !degrees.is_empty() {
        Some(degrees.into_iter().map(|d| d.unwrap()).collect())
    } else if degrees.iter().all(|d| d.is_none()) {
        None
    } else {
        return err(last, 1, "either every basis element has a degree or none has");
    };
    let mult = mult.into_iter().map(|(key, v)| (key, v.into_iter().filter(|t| !t.1.is_zero()).collect())).collect();
    Sca::new(k, labels, degrees, mult, idem, names).map_err(|e| ParseError { line: last, column: 1, message: e.to_string() })
}
