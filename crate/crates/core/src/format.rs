//! Plain-text instance files and their JSON rendering.
//!
//! Rationals are written as `p/q` or as integers. Blank lines and lines
//! starting with `#` are ignored by the parsers.
//!
//! Quartic instance:
//!
//! ```text
//! quartic <n> <k> <r or ->
//! e <u> <v>            one line per edge, 1-based, u < v
//! m <row entries>      n lines, the rows of M = kA + kI - J
//! ```
//!
//! Quadratic program `min xᵀQx + cᵀx`:
//!
//! ```text
//! qp <n> <m>
//! note <free text>     optional provenance line
//! q <row entries>      n lines
//! c <entries>
//! <a entries> <= <b>   m constraint rows, sense `<=` or `=`
//! ```

use serde_json::{json, Value};

use crate::algebra::{parse_rat, parse_ratvec, rats_to_strings, Rat, RatVec, SymMat};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::polyopt::{Polytope, QpInstance};
use crate::quartic::QuarticInstance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Quartic(QuarticInstance),
    Qp(QpInstance),
}

fn join(v: &[Rat]) -> String {
    rats_to_strings(v).join(" ")
}

pub fn write_quartic(inst: &QuarticInstance) -> String {
    let mut out = String::new();
    let r = inst.r().map_or("-".to_string(), |r| r.to_string());
    out.push_str(&format!("quartic {} {} {r}\n", inst.n(), inst.k()));
    for (u, v) in inst.graph().edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    for row in inst.matrix().rows() {
        out.push_str(&format!("m {}\n", join(&row)));
    }
    out
}

pub fn write_qp(qp: &QpInstance) -> String {
    let f = &qp.feasible;
    let m = f.inequalities().len() + f.equalities().len();
    let mut out = format!("qp {} {m}\n", qp.dim());
    if !qp.provenance.is_empty() {
        out.push_str(&format!("note {}\n", qp.provenance));
    }
    for row in qp.q.rows() {
        out.push_str(&format!("q {}\n", join(&row)));
    }
    out.push_str(&format!("c {}\n", join(&qp.c)));
    for (a, b) in f.inequalities() {
        out.push_str(&format!("{} <= {b}\n", join(a)));
    }
    for (a, b) in f.equalities() {
        out.push_str(&format!("{} = {b}\n", join(a)));
    }
    out
}

pub fn write_instance(inst: &Instance) -> String {
    match inst {
        Instance::Quartic(q) => write_quartic(q),
        Instance::Qp(q) => write_qp(q),
    }
}

/// Content lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn perr(lineno: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {lineno}: {msg}"))
}

fn parse_count(lineno: usize, s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(lineno, format!("bad {what} {s:?}")))
}

fn parse_row(lineno: usize, s: &str, n: usize) -> Result<Vec<Rat>> {
    let v = parse_ratvec(s).map_err(|e| perr(lineno, e))?;
    if v.dim() != n {
        return Err(perr(lineno, format!("expected {n} entries, found {}", v.dim())));
    }
    Ok(v.0)
}

/// Parses either instance kind, dispatching on the header keyword.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let (lineno, header) = content_lines(text).next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    match header.split_whitespace().next() {
        Some("quartic") => parse_quartic(text).map(Instance::Quartic),
        Some("qp") => parse_qp(text).map(Instance::Qp),
        _ => Err(perr(lineno, "expected `quartic` or `qp` header")),
    }
}

pub fn parse_quartic(text: &str) -> Result<QuarticInstance> {
    let mut lines = content_lines(text);
    let (lineno, header) = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "quartic" {
        return Err(perr(lineno, "expected `quartic <n> <k> <r or ->`"));
    }
    let n = parse_count(lineno, fields[1], "dimension")?;
    let k = parse_rat(fields[2]).map_err(|e| perr(lineno, e))?;
    let r = match fields[3] {
        "-" => None,
        s => Some(parse_count(lineno, s, "r")?),
    };
    let mut graph = Graph::empty(n).map_err(|e| perr(lineno, e))?;
    let mut rows = Vec::with_capacity(n);
    for (lineno, line) in lines {
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match tag {
            "e" if rows.is_empty() => {
                let uv: Vec<&str> = rest.split_whitespace().collect();
                if uv.len() != 2 {
                    return Err(perr(lineno, "expected `e <u> <v>`"));
                }
                let u = parse_count(lineno, uv[0], "vertex")?;
                let v = parse_count(lineno, uv[1], "vertex")?;
                if u == 0 || v == 0 {
                    return Err(perr(lineno, "vertices are 1-based"));
                }
                graph.add_edge(u - 1, v - 1).map_err(|e| perr(lineno, e))?;
            }
            "m" if rows.len() < n => rows.push(parse_row(lineno, rest, n)?),
            _ => return Err(perr(lineno, format!("unexpected line {line:?}"))),
        }
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} matrix rows, found {}", rows.len())));
    }
    let matrix = SymMat::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))?;
    QuarticInstance::from_parts(matrix, k, graph, r)
}

pub fn parse_qp(text: &str) -> Result<QpInstance> {
    let mut lines = content_lines(text).peekable();
    let (lineno, header) = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != "qp" {
        return Err(perr(lineno, "expected `qp <n> <m>`"));
    }
    let n = parse_count(lineno, fields[1], "dimension")?;
    let m = parse_count(lineno, fields[2], "constraint count")?;
    if n == 0 {
        return Err(perr(lineno, "dimension must be positive"));
    }

    let mut provenance = String::new();
    if let Some((_, line)) = lines.peek() {
        if let Some(rest) = line.strip_prefix("note") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                provenance = rest.trim().to_string();
                lines.next();
            }
        }
    }

    let mut tagged = |tag: &str| -> Result<Vec<Rat>> {
        let (lineno, line) = lines.next().ok_or_else(|| Error::Parse(format!("missing `{tag}` line")))?;
        let rest = line
            .strip_prefix(tag)
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| perr(lineno, format!("expected `{tag} ...`")))?;
        parse_row(lineno, rest, n)
    };
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        rows.push(tagged("q")?);
    }
    let c = RatVec(tagged("c")?);
    let q = SymMat::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))?;

    let mut feasible = Polytope::free(n);
    let mut count = 0;
    for (lineno, line) in lines {
        let (lhs, rhs, ineq) = if let Some((l, r)) = line.split_once("<=") {
            (l, r, true)
        } else if let Some((l, r)) = line.split_once('=') {
            (l, r, false)
        } else {
            return Err(perr(lineno, "constraint needs `<=` or `=`"));
        };
        let a = RatVec(parse_row(lineno, lhs, n)?);
        let b = parse_rat(rhs.trim()).map_err(|e| perr(lineno, e))?;
        if ineq {
            feasible.push_inequality(a, b);
        } else {
            feasible.push_equality(a, b);
        }
        count += 1;
    }
    if count != m {
        return Err(Error::Parse(format!("header promises {m} constraints, found {count}")));
    }
    QpInstance::new(q, c, feasible, provenance)
}

fn rows_json(m: &SymMat) -> Value {
    Value::from(m.rows().iter().map(|r| rats_to_strings(r)).collect::<Vec<_>>())
}

pub fn instance_json(inst: &Instance) -> Value {
    match inst {
        Instance::Quartic(q) => json!({
            "kind": "quartic",
            "n": q.n(),
            "k": q.k().to_string(),
            "r": q.r(),
            "graph": q.graph(),
            "matrix": rows_json(q.matrix()),
        }),
        Instance::Qp(q) => {
            let f = &q.feasible;
            let cons = |v: &[(RatVec, Rat)], sense: &str| -> Vec<Value> {
                v.iter().map(|(a, b)| json!({"a": a, "sense": sense, "b": b.to_string()})).collect()
            };
            let mut constraints = cons(f.inequalities(), "<=");
            constraints.extend(cons(f.equalities(), "="));
            json!({
                "kind": "qp",
                "n": q.dim(),
                "provenance": q.provenance,
                "q": rows_json(&q.q),
                "c": q.c,
                "constraints": constraints,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use crate::localmin::bounded_qp;

    #[test]
    fn quartic_example_file() {
        let inst = QuarticInstance::for_stable_set(&Graph::complete(2).unwrap(), 2).unwrap();
        let text = write_quartic(&inst);
        assert_eq!(text, "quartic 2 3/2 2\ne 1 2\nm 1/2 1/2\nm 1/2 1/2\n");
        assert_eq!(parse_quartic(&text).unwrap(), inst);
    }

    #[test]
    fn bounded_qp_example_file() {
        let qp = bounded_qp(&Graph::empty(2).unwrap(), 1, rat(1)).unwrap();
        let text = write_qp(&qp);
        assert!(text.contains("-1 0 <= 0\n0 -1 <= 0\n1 1 <= 1\n"), "{text}");
        assert_eq!(parse_qp(&text).unwrap(), qp);
        assert_eq!(parse_instance(&text).unwrap(), Instance::Qp(qp));
    }

    #[test]
    fn equality_rows_and_comments() {
        let text = "# indefinite\nqp 2 1\n\nq 0 1\nq 1 -2\nc 0 0\n1/2 1/2 = 1\n";
        let qp = parse_qp(text).unwrap();
        assert_eq!(qp.feasible.equalities().len(), 1);
        assert_eq!(qp.feasible.equalities()[0].0[0], ratio(1, 2));
        assert_eq!(qp.provenance, "");
        assert_eq!(parse_qp(&write_qp(&qp)).unwrap(), qp);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_qp("qp 2 0\nq 0 1\nq 2 0\nc 0 0\n").is_err());
        assert!(parse_qp("qp 2 1\nq 1 0\nq 0 1\nc 0 0\n").is_err());
        assert!(parse_qp("qp 2 1\nq 1 0\nq 0 1\nc 0 0\n1 0 >= 3\n").is_err());
        assert!(parse_qp("qp 1 0\nq 1/0\nc 0\n").is_err());
        assert!(parse_quartic("quartic 2 3/2 2\nm 1/2 1/2\nm 1/2 1/2\n").is_err());
        assert!(parse_quartic("quartic 2 1 -\nm 0 -1\nm -1 0\ne 1 2\n").is_err());
        assert!(parse_instance("graph 2\n").is_err());
    }
}
