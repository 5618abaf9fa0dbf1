use std::fmt::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::invariants::{euler_characteristic, homology};
use crate::kernel::{Complex, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Latex,
    Topaz,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "latex" | "tex" => Ok(ExportFormat::Latex),
            "topaz" | "polymake" => Ok(ExportFormat::Topaz),
            other => Err(Error::InvalidArgument(format!("unknown export format `{other}`"))),
        }
    }
}

pub fn export(c: &Complex, format: ExportFormat) -> String {
    match format {
        ExportFormat::Latex => latex(c),
        ExportFormat::Topaz => topaz(c),
    }
}

fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '#' | '$' | '%' | '&' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(ch),
        }
    }
    out
}

/// A `tabular` with one facet per row (in vertex labels), followed by an
/// itemized summary of the basic invariants.
fn latex(c: &Complex) -> String {
    let mut s = String::new();
    let title = c.name().unwrap_or("unnamed complex");
    writeln!(s, "% {}", title.replace('\n', " ")).unwrap();
    writeln!(s, "\\begin{{tabular}}{{rl}}").unwrap();
    writeln!(s, "\\multicolumn{{2}}{{l}}{{\\textbf{{{}}}}} \\\\", latex_escape(title)).unwrap();
    for (i, f) in c.facets().iter().enumerate() {
        let names: Vec<String> = f.iter().map(|&v| latex_escape(&c.label(v).to_string())).collect();
        writeln!(s, "{} & $\\{{{}\\}}$ \\\\", i + 1, names.join(", ")).unwrap();
    }
    writeln!(s, "\\end{{tabular}}").unwrap();
    let f: Vec<String> = c.f_vector().iter().map(u64::to_string).collect();
    writeln!(s, "\\begin{{itemize}}").unwrap();
    writeln!(s, "\\item dimension: ${}$", c.dim()).unwrap();
    writeln!(s, "\\item $f$-vector: $({})$", f.join(", ")).unwrap();
    writeln!(s, "\\item Euler characteristic: ${}$", euler_characteristic(c)).unwrap();
    let h: Vec<String> = homology(c)
        .entries
        .iter()
        .map(|e| {
            let mut parts = Vec::new();
            if e.betti > 0 {
                parts.push(if e.betti == 1 { "\\mathbb{Z}".to_string() } else { format!("\\mathbb{{Z}}^{{{}}}", e.betti) });
            }
            parts.extend(e.torsion.iter().map(|t| format!("\\mathbb{{Z}}_{{{t}}}")));
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" \\oplus ")
            }
        })
        .collect();
    writeln!(s, "\\item reduced homology: ${}$", h.join(",\\ ")).unwrap();
    writeln!(s, "\\end{{itemize}}").unwrap();
    s
}

/// polymake/TOPAZ style text: 0-based `FACETS` block, then `VERTEX_LABELS`.
fn topaz(c: &Complex) -> String {
    let mut s = String::from("_application topaz\n_type SimplicialComplex\n\n");
    if let Some(name) = c.name() {
        writeln!(s, "DESCRIPTION\n{}\n", name.replace('\n', " ")).unwrap();
    }
    s.push_str("FACETS\n");
    for f in c.facets() {
        let idx: Vec<String> = f.iter().map(|&v| (v - 1).to_string()).collect();
        writeln!(s, "{{{}}}", idx.join(" ")).unwrap();
    }
    s.push_str("\nVERTEX_LABELS\n");
    let labels: Vec<String> = c.labels().iter().map(|l| l.to_string().replace(' ', "_")).collect();
    writeln!(s, "{}", labels.join(" ")).unwrap();
    s
}

/// Reads the `FACETS` block (and `VERTEX_LABELS`, `DESCRIPTION` if present)
/// of TOPAZ-style text.
pub fn import_topaz(text: &str) -> Result<Complex> {
    let mut section = "";
    let mut facets: Vec<Vec<i64>> = Vec::new();
    let mut labels: Option<Vec<Label>> = None;
    let mut name: Option<String> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            section = "";
            continue;
        }
        if line.starts_with('_') || line.starts_with('#') {
            continue;
        }
        if line.chars().all(|ch| ch.is_ascii_uppercase() || ch == '_') {
            section = match line {
                "FACETS" | "MAXIMAL_FACES" | "INPUT_FACES" => "facets",
                "VERTEX_LABELS" => "labels",
                "DESCRIPTION" => "description",
                _ => "other",
            };
            continue;
        }
        match section {
            "facets" => {
                let body = line
                    .strip_prefix('{')
                    .and_then(|l| l.strip_suffix('}'))
                    .ok_or_else(|| Error::Malformed(format!("line {}: expected `{{...}}`", lineno + 1)))?;
                let f = body
                    .split_whitespace()
                    .map(|x| x.parse::<i64>().map(|v| v + 1))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Malformed(format!("line {}: {e}", lineno + 1)))?;
                facets.push(f);
            }
            "labels" => {
                labels = Some(
                    line.split_whitespace()
                        .map(|t| t.parse::<i64>().map(Label::Int).unwrap_or_else(|_| Label::Text(t.to_string())))
                        .collect(),
                );
            }
            "description" => name = Some(line.to_string()),
            _ => {}
        }
    }
    if facets.is_empty() {
        return Err(Error::Malformed("no FACETS section".into()));
    }
    let c = Complex::from_facets(&facets, labels)?;
    Ok(match name {
        Some(n) => c.with_name(n),
        None => c,
    })
}
