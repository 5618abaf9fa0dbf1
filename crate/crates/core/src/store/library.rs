use std::path::{Path, PathBuf};

use serde_json::Value;

use super::{load_document, verify_cache};
use crate::error::{Error, Result};
use crate::invariants::{euler_characteristic, homology, is_orientable};
use crate::kernel::Complex;

/// `SIMPLICIA_LIB` if set, otherwise the library shipped with the crate.
pub fn library_dir() -> PathBuf {
    match std::env::var_os("SIMPLICIA_LIB") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("library"),
    }
}

#[derive(Clone, Debug)]
pub struct LibraryEntry {
    pub name: String,
    pub file: PathBuf,
    pub complex: Complex,
    pub provenance: Option<String>,
}

impl LibraryEntry {
    /// Free-form type description stored with the fixture, e.g. `"RP^3"`.
    pub fn topological_type(&self) -> Option<String> {
        self.complex
            .cache()
            .get("topological_type")
            .and_then(|v| v.as_str().map(str::to_string))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Library {
    pub entries: Vec<LibraryEntry>,
}

impl Library {
    /// Reads every `*.json` document in `dir`, ordered by file name.
    pub fn load(dir: impl AsRef<Path>) -> Result<Library> {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir.as_ref())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut entries = Vec::with_capacity(files.len());
        for file in files {
            let doc = load_document(&file)?;
            let complex = doc.to_complex()?;
            let name = doc
                .name
                .clone()
                .unwrap_or_else(|| file.file_stem().unwrap_or_default().to_string_lossy().into_owned());
            entries.push(LibraryEntry {
                name,
                file,
                complex,
                provenance: doc.provenance,
            });
        }
        Ok(Library { entries })
    }

    pub fn open_default() -> Result<Library> {
        Library::load(library_dir())
    }

    /// Recomputes the cached properties of every entry.
    pub fn verify(&self) -> Result<()> {
        self.entries.iter().try_for_each(|e| verify_cache(&e.complex))
    }

    pub fn get(&self, name: &str) -> Option<&LibraryEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn search_by_name(&self, needle: &str) -> Vec<&LibraryEntry> {
        let needle = needle.to_lowercase();
        self.entries
            .iter()
            .filter(|e| e.name.to_lowercase().contains(&needle))
            .collect()
    }

    pub fn search_by_predicate(&self, p: &Predicate) -> Vec<&LibraryEntry> {
        self.entries.iter().filter(|e| p.matches(&e.complex)).collect()
    }

    pub fn search(&self, query: &str) -> Result<Vec<&LibraryEntry>> {
        Ok(match Query::parse(query)? {
            Query::Name(n) => self.search_by_name(&n),
            Query::Predicate(p) => self.search_by_predicate(&p),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Name(String),
    Predicate(Predicate),
}

impl Query {
    /// Text starting with a property name and containing a comparison is
    /// a predicate; anything else is a name fragment.
    pub fn parse(s: &str) -> Result<Query> {
        let head: String = s
            .trim_start()
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '[')
            .collect();
        let head = head.split('[').next().unwrap_or_default();
        let known = matches!(
            head,
            "dim" | "chi" | "n" | "betti" | "pure" | "closed" | "connected" | "orientable" | "name" | "homology"
        ) || (head.len() == 2 && head.starts_with('f') && head.as_bytes()[1].is_ascii_digit());
        let has_op = ["==", "!=", "<", ">", "torsion"].iter().any(|op| s.contains(op));
        if known && has_op {
            Ok(Query::Predicate(Predicate::parse(s)?))
        } else {
            Ok(Query::Name(s.trim().to_string()))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Op {
    fn holds<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            Op::Eq => a == b,
            Op::Ne => a != b,
            Op::Lt => a < b,
            Op::Le => a <= b,
            Op::Gt => a > b,
            Op::Ge => a >= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Property {
    Dim,
    Chi,
    F(usize),
    N,
    Betti(usize),
    Pure,
    Closed,
    Connected,
    Orientable,
    Name,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    Compare(Property, Op, Value),
    Torsion { degree: usize, nonempty: bool },
}

/// Conjunction of conditions over stored properties.
#[derive(Clone, Debug, PartialEq)]
pub struct Predicate {
    pub conditions: Vec<Condition>,
}

impl Predicate {
    pub fn parse(query: &str) -> Result<Predicate> {
        let fail = |reason: String| Error::Predicate {
            query: query.to_string(),
            reason,
        };
        let mut conditions = Vec::new();
        for part in split_and(query) {
            let part = part.trim();
            if part.is_empty() {
                return Err(fail("empty condition".into()));
            }
            if let Some(rest) = part.strip_prefix("homology[") {
                let (k, rest) = rest.split_once(']').ok_or_else(|| fail("missing `]`".into()))?;
                let degree = k.trim().parse().map_err(|_| fail(format!("bad degree `{k}`")))?;
                let rest = rest
                    .trim_start()
                    .strip_prefix(".torsion")
                    .ok_or_else(|| fail("expected `.torsion`".into()))?;
                let nonempty = match rest.trim() {
                    "empty" => false,
                    "nonempty" => true,
                    other => return Err(fail(format!("expected `empty` or `nonempty`, got `{other}`"))),
                };
                conditions.push(Condition::Torsion { degree, nonempty });
                continue;
            }
            let (at, op, len) = [("==", Op::Eq), ("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)]
                .iter()
                .filter_map(|(tok, op)| part.find(tok).map(|i| (i, *op, tok.len())))
                .min_by_key(|&(i, _, len)| (i, std::cmp::Reverse(len)))
                .ok_or_else(|| fail(format!("no comparison in `{part}`")))?;
            let lhs = part[..at].trim();
            let rhs = part[at + len..].trim();
            let prop = parse_property(lhs).ok_or_else(|| fail(format!("unknown property `{lhs}`")))?;
            let value = parse_value(&prop, rhs).ok_or_else(|| fail(format!("bad value `{rhs}` for `{lhs}`")))?;
            if matches!(value, Value::Bool(_) | Value::String(_)) && !matches!(op, Op::Eq | Op::Ne) {
                return Err(fail(format!("`{lhs}` only supports == and !=")));
            }
            conditions.push(Condition::Compare(prop, op, value));
        }
        Ok(Predicate { conditions })
    }

    pub fn matches(&self, c: &Complex) -> bool {
        self.conditions.iter().all(|cond| match cond {
            Condition::Torsion { degree, nonempty } => homology(c)
                .get(*degree)
                .is_some_and(|h| h.torsion.is_empty() != *nonempty),
            Condition::Compare(prop, op, value) => match (evaluate(c, prop), value) {
                (Some(Value::Number(a)), Value::Number(b)) => op.holds(a.as_i64(), b.as_i64()),
                (Some(Value::Bool(a)), Value::Bool(b)) => op.holds(a, *b),
                (Some(Value::String(a)), Value::String(b)) => op.holds(&a, b),
                _ => false,
            },
        })
    }
}

fn split_and(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut rest = s;
    while let Some(i) = rest.to_ascii_lowercase().find(" and ") {
        parts.push(&rest[..i]);
        rest = &rest[i + 5..];
    }
    parts.push(rest);
    parts
}

fn parse_property(s: &str) -> Option<Property> {
    let index = |t: &str| -> Option<usize> { t.strip_prefix('[')?.strip_suffix(']')?.trim().parse().ok() };
    Some(match s {
        "dim" => Property::Dim,
        "chi" => Property::Chi,
        "n" => Property::N,
        "pure" => Property::Pure,
        "closed" => Property::Closed,
        "connected" => Property::Connected,
        "orientable" => Property::Orientable,
        "name" => Property::Name,
        _ if s.starts_with("betti") => Property::Betti(index(&s[5..])?),
        _ if s.len() == 2 && s.starts_with('f') => Property::F(s[1..].parse().ok()?),
        _ => return None,
    })
}

fn parse_value(prop: &Property, s: &str) -> Option<Value> {
    match prop {
        Property::Pure | Property::Closed | Property::Connected | Property::Orientable => {
            s.parse::<bool>().ok().map(Value::Bool)
        }
        Property::Name => Some(Value::String(s.trim_matches('"').to_string())),
        _ => s.parse::<i64>().ok().map(Value::from),
    }
}

fn evaluate(c: &Complex, prop: &Property) -> Option<Value> {
    let flags = || c.structural_flags();
    Some(match prop {
        Property::Dim => Value::from(c.dim() as i64),
        Property::Chi => Value::from(euler_characteristic(c)),
        Property::F(k) => Value::from(*c.f_vector().get(*k)? as i64),
        Property::N => Value::from(c.n_vertices() as i64),
        Property::Betti(k) => Value::from(homology(c).get(*k)?.betti as i64),
        Property::Pure => Value::Bool(flags().is_pure),
        Property::Closed => Value::Bool(flags().is_closed_pseudomanifold()),
        Property::Connected => Value::Bool(flags().is_connected),
        Property::Orientable => Value::Bool(is_orientable(c).ok()?),
        Property::Name => Value::String(c.name()?.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{boundary_simplex, cyclic_polytope_boundary};

    #[test]
    fn parses_conditions() {
        let p = Predicate::parse("dim == 3 and chi == 0").unwrap();
        assert_eq!(p.conditions.len(), 2);
        assert!(p.matches(&cyclic_polytope_boundary(4, 10).unwrap()));
        assert!(!p.matches(&boundary_simplex(3).unwrap()));
        let t = Predicate::parse("homology[1].torsion empty and betti[2]>=0").unwrap();
        assert!(t.matches(&boundary_simplex(3).unwrap()));
        assert!(Predicate::parse("f1 >= 45").unwrap().matches(&cyclic_polytope_boundary(4, 10).unwrap()));
        assert!(Predicate::parse("closed == true").unwrap().matches(&boundary_simplex(3).unwrap()));
    }

    #[test]
    fn rejects_garbage() {
        for q in ["dim = 3", "colour == red", "dim == x", "orientable < true", "homology[2].torsion maybe", "dim == 3 and "] {
            let err = Predicate::parse(q).unwrap_err().to_string();
            assert!(err.contains("grammar"), "{q}: {err}");
        }
    }

    #[test]
    fn query_dispatch() {
        assert_eq!(Query::parse("RP^3").unwrap(), Query::Name("RP^3".into()));
        assert_eq!(Query::parse("Kummer").unwrap(), Query::Name("Kummer".into()));
        assert!(matches!(Query::parse("chi == 8").unwrap(), Query::Predicate(_)));
        assert!(matches!(Query::parse("homology[2].torsion nonempty").unwrap(), Query::Predicate(_)));
        assert!(Query::parse("dim === 3").is_err());
        assert!(Query::parse("dim ~~ 3 <").is_err());
    }
}
