//! The three line-oriented text formats and their loaders.
//!
//! Lattices:
//! ```text
//! [lattice]
//! elements = ⊥ a b ⊤
//! leq = ⊥<=a ⊥<=b
//! leq = a<=⊤ b<=⊤
//! ```
//! Reflexive/transitive closure is applied on load.
//!
//! Presheaves (omitted carriers are empty; omitted restrictions are derived
//! by composition where possible):
//! ```text
//! [presheaf]
//! lattice = B4
//! carrier ⊤ = x y
//! restrict ⊤->a : x=m y=m
//! ```
//!
//! Pre-transformations on one carrier (`M:` rows give the matrix of an
//! infima-preserving family, missing entries default to ⊥; `fiber:` rows
//! give order-preserving fibers, missing entries default to ∅):
//! ```text
//! [reltrans]
//! lattice = B4
//! carrier = x y
//! M: x y = a
//! ```
//!
//! Blank lines and `#` comments are allowed everywhere. `lattice =` values
//! name a built-in fixture (`H2`, `C3`, `B4`, `N5`, `D(C3)`) or a path
//! relative to the referencing file.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use relsheaf_core::heyting::{build_algebra, Elem, ElemSet, HeytingAlgebra};
use relsheaf_core::presheaf::{level_carrier, Presheaf, PresheafError};
use relsheaf_core::pretrans::{FiberMatrix, PreTransformation};
use relsheaf_core::rel::{FiniteSet, SetRef};
use relsheaf_core::LatticeError;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid lattice: {0}")]
    Lattice(#[from] LatticeError),
    #[error("invalid presheaf: {0}")]
    Presheaf(#[from] PresheafError),
    #[error("invalid pre-transformation: {0}")]
    PreTrans(String),
}

fn parse_err(path: &str, line: usize, reason: impl Into<String>) -> LoadError {
    LoadError::Parse {
        path: path.to_owned(),
        line,
        reason: reason.into(),
    }
}

/// Any of the three loadable objects.
#[derive(Debug, Clone)]
pub enum Loaded {
    Lattice(Arc<HeytingAlgebra>),
    Presheaf(Presheaf),
    PreTrans(PreTransformation),
}

/// Built-in fixture texts, usable as `lattice =` targets and for the
/// `--fixtures` suites.
pub fn fixture_text(name: &str) -> Option<&'static str> {
    match name {
        "H2" => Some(include_str!("../fixtures/h2.lat")),
        "C3" => Some(include_str!("../fixtures/c3.lat")),
        "B4" => Some(include_str!("../fixtures/b4.lat")),
        "N5" => Some(include_str!("../fixtures/n5.lat")),
        "D(C3)" => Some(include_str!("../fixtures/d_c3.lat")),
        "SEP" => Some(include_str!("../fixtures/SEP.psh")),
        "NSH" => Some(include_str!("../fixtures/NSH.psh")),
        "MIS" => Some(include_str!("../fixtures/MIS.psh")),
        "PER" => Some(include_str!("../fixtures/PER.rt")),
        _ => None,
    }
}

/// Numbered non-comment lines with the header validated and stripped.
fn body_lines<'t>(
    path: &str,
    text: &'t str,
    header: &str,
) -> Result<Vec<(usize, &'t str)>, LoadError> {
    let mut lines = Vec::new();
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != header {
                return Err(parse_err(
                    path,
                    i + 1,
                    format!("expected section header `{header}`"),
                ));
            }
            saw_header = true;
            continue;
        }
        lines.push((i + 1, line));
    }
    if !saw_header {
        return Err(parse_err(path, 1, format!("missing `{header}` header")));
    }
    Ok(lines)
}

fn section_of(text: &str) -> Option<&str> {
    text.lines()
        .map(|raw| raw.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
}

/// The raw `lattice =` reference of a presheaf or reltrans file, for
/// carrying through to printed output.
pub fn lattice_ref(text: &str) -> Option<String> {
    text.lines()
        .map(|raw| raw.split('#').next().unwrap_or("").trim())
        .find_map(|line| {
            line.strip_prefix("lattice")?
                .trim()
                .strip_prefix('=')
                .map(|s| s.trim().to_owned())
        })
}

/// Loads any of the three formats, dispatching on the section header.
pub fn load(path: &Path) -> Result<Loaded, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_str(&path.display().to_string(), &text, path.parent())
}

pub fn load_str(path: &str, text: &str, dir: Option<&Path>) -> Result<Loaded, LoadError> {
    match section_of(text) {
        Some("[lattice]") => Ok(Loaded::Lattice(Arc::new(parse_lattice(path, text)?))),
        Some("[presheaf]") => Ok(Loaded::Presheaf(parse_presheaf(path, text, dir)?)),
        Some("[reltrans]") => Ok(Loaded::PreTrans(parse_reltrans(path, text, dir)?)),
        Some(other) => Err(parse_err(
            path,
            1,
            format!("unknown section header `{other}`"),
        )),
        None => Err(parse_err(path, 1, "empty file")),
    }
}

pub fn parse_lattice(path: &str, text: &str) -> Result<HeytingAlgebra, LoadError> {
    let mut elements: Option<Vec<String>> = None;
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, line) in body_lines(path, text, "[lattice]")? {
        if let Some(rest) = line.strip_prefix("elements") {
            let rest = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `elements = e1 e2 ...`"))?;
            if elements.is_some() {
                return Err(parse_err(path, lineno, "duplicate `elements` line"));
            }
            elements = Some(rest.split_whitespace().map(String::from).collect());
        } else if let Some(rest) = line.strip_prefix("leq") {
            let rest = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `leq = x<=y ...`"))?;
            for token in rest.split_whitespace() {
                let (x, y) = token.split_once("<=").ok_or_else(|| {
                    parse_err(path, lineno, format!("`{token}` is not of the form x<=y"))
                })?;
                pairs.push((x.to_owned(), y.to_owned()));
            }
        } else {
            return Err(parse_err(path, lineno, format!("unexpected line `{line}`")));
        }
    }
    let elements = elements.ok_or_else(|| parse_err(path, 1, "missing `elements` line"))?;
    Ok(build_algebra(&elements, &pairs)?)
}

/// Resolves a `lattice = <name>` reference: fixture names first, then a
/// path relative to the referencing file.
fn resolve_lattice(
    path: &str,
    lineno: usize,
    name: &str,
    dir: Option<&Path>,
) -> Result<Arc<HeytingAlgebra>, LoadError> {
    if let Some(text) = fixture_text(name) {
        return Ok(Arc::new(parse_lattice(name, text)?));
    }
    let candidate: PathBuf = match dir {
        Some(d) => d.join(name),
        None => PathBuf::from(name),
    };
    if candidate.is_file() {
        let text = std::fs::read_to_string(&candidate).map_err(|source| LoadError::Io {
            path: candidate.display().to_string(),
            source,
        })?;
        return Ok(Arc::new(parse_lattice(
            &candidate.display().to_string(),
            &text,
        )?));
    }
    Err(parse_err(
        path,
        lineno,
        format!("unknown lattice `{name}` (not a fixture, no such file)"),
    ))
}

fn parse_elem(
    path: &str,
    lineno: usize,
    alg: &HeytingAlgebra,
    name: &str,
) -> Result<Elem, LoadError> {
    alg.index_of(name)
        .ok_or_else(|| parse_err(path, lineno, format!("unknown lattice element `{name}`")))
}

pub fn parse_presheaf(path: &str, text: &str, dir: Option<&Path>) -> Result<Presheaf, LoadError> {
    let mut algebra: Option<Arc<HeytingAlgebra>> = None;
    let mut carriers: HashMap<Elem, Vec<String>> = HashMap::new();
    // (h, k) -> (lineno, member-name assignments)
    let mut raw_res: HashMap<(Elem, Elem), Vec<(String, String)>> = HashMap::new();

    for (lineno, line) in body_lines(path, text, "[presheaf]")? {
        if let Some(rest) = line.strip_prefix("lattice") {
            let name = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `lattice = <name>`"))?;
            algebra = Some(resolve_lattice(path, lineno, name.trim(), dir)?);
        } else if let Some(rest) = line.strip_prefix("carrier") {
            let alg = algebra
                .as_ref()
                .ok_or_else(|| parse_err(path, lineno, "`lattice =` must come first"))?;
            let (level, members) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `carrier h = members...`"))?;
            let h = parse_elem(path, lineno, alg, level.trim())?;
            if carriers
                .insert(h, members.split_whitespace().map(String::from).collect())
                .is_some()
            {
                return Err(parse_err(path, lineno, "duplicate carrier line"));
            }
        } else if let Some(rest) = line.strip_prefix("restrict") {
            let alg = algebra
                .as_ref()
                .ok_or_else(|| parse_err(path, lineno, "`lattice =` must come first"))?;
            let (pair, assigns) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(path, lineno, "expected `restrict h->k : x=p ...`"))?;
            let (from, to) = pair
                .trim()
                .split_once("->")
                .ok_or_else(|| parse_err(path, lineno, "expected `h->k` before `:`"))?;
            let h = parse_elem(path, lineno, alg, from.trim())?;
            let k = parse_elem(path, lineno, alg, to.trim())?;
            if h == k || !alg.leq(k, h) {
                return Err(parse_err(
                    path,
                    lineno,
                    format!(
                        "{} -> {} is not a strict order pair",
                        from.trim(),
                        to.trim()
                    ),
                ));
            }
            let mut assignments = Vec::new();
            for token in assigns.split_whitespace() {
                let (x, v) = token.split_once('=').ok_or_else(|| {
                    parse_err(path, lineno, format!("`{token}` is not of the form x=p"))
                })?;
                assignments.push((x.to_owned(), v.to_owned()));
            }
            if raw_res.insert((h, k), assignments).is_some() {
                return Err(parse_err(path, lineno, "duplicate restrict line"));
            }
        } else {
            return Err(parse_err(path, lineno, format!("unexpected line `{line}`")));
        }
    }

    let algebra = algebra.ok_or_else(|| parse_err(path, 1, "missing `lattice =` line"))?;
    let label = Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "F".to_owned());
    build_presheaf(path, &label, algebra, carriers, raw_res)
}

/// Completes partially specified restriction maps by composition (empty
/// sources and singleton targets are forced) and validates the result.
fn build_presheaf(
    path: &str,
    label: &str,
    algebra: Arc<HeytingAlgebra>,
    carriers: HashMap<Elem, Vec<String>>,
    raw_res: HashMap<(Elem, Elem), Vec<(String, String)>>,
) -> Result<Presheaf, LoadError> {
    let n = algebra.len();
    let sets: Vec<SetRef> = (0..n)
        .map(|h| {
            level_carrier(
                label,
                algebra.name(h),
                carriers.get(&h).cloned().unwrap_or_default(),
            )
        })
        .collect();

    let mut res: HashMap<(Elem, Elem), Vec<usize>> = HashMap::new();
    for (&(h, k), assigns) in &raw_res {
        let mut map: Vec<Option<usize>> = vec![None; sets[h].len()];
        for (x, v) in assigns {
            let xi = sets[h].index_of(x).ok_or_else(|| {
                parse_err(
                    path,
                    0,
                    format!("`{x}` is not in carrier {}", algebra.name(h)),
                )
            })?;
            let vi = sets[k].index_of(v).ok_or_else(|| {
                parse_err(
                    path,
                    0,
                    format!("`{v}` is not in carrier {}", algebra.name(k)),
                )
            })?;
            map[xi] = Some(vi);
        }
        let complete: Option<Vec<usize>> = map.into_iter().collect();
        let map = complete.ok_or_else(|| {
            parse_err(
                path,
                0,
                format!(
                    "restrict {}->{} leaves members unassigned",
                    algebra.name(h),
                    algebra.name(k)
                ),
            )
        })?;
        res.insert((h, k), map);
    }

    // derive missing maps to a fixpoint
    loop {
        let mut progressed = false;
        for h in 0..n {
            for k in 0..n {
                if h == k || !algebra.leq(k, h) || res.contains_key(&(h, k)) {
                    continue;
                }
                let derived: Option<Vec<usize>> = if sets[h].is_empty() {
                    Some(Vec::new())
                } else if sets[k].len() == 1 {
                    Some(vec![0; sets[h].len()])
                } else {
                    (0..n)
                        .filter(|&l| l != h && l != k && algebra.leq(k, l) && algebra.leq(l, h))
                        .find_map(|l| {
                            let first = res.get(&(h, l))?;
                            let second = res.get(&(l, k))?;
                            Some(first.iter().map(|&x| second[x]).collect())
                        })
                };
                if let Some(map) = derived {
                    res.insert((h, k), map);
                    progressed = true;
                }
            }
        }
        if !progressed {
            break;
        }
    }

    Ok(Presheaf::new(label, algebra, sets, res)?)
}

pub fn parse_reltrans(
    path: &str,
    text: &str,
    dir: Option<&Path>,
) -> Result<PreTransformation, LoadError> {
    let mut algebra: Option<Arc<HeytingAlgebra>> = None;
    let mut carrier: Option<SetRef> = None;
    let mut matrix_rows: Vec<(usize, usize, usize, Elem)> = Vec::new();
    let mut fiber_rows: Vec<(usize, usize, usize, ElemSet)> = Vec::new();

    for (lineno, line) in body_lines(path, text, "[reltrans]")? {
        if let Some(rest) = line.strip_prefix("lattice") {
            let name = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `lattice = <name>`"))?;
            algebra = Some(resolve_lattice(path, lineno, name.trim(), dir)?);
        } else if let Some(rest) = line.strip_prefix("carrier") {
            let members = rest
                .trim()
                .strip_prefix('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `carrier = members...`"))?;
            let label = Path::new(path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "A".to_owned());
            carrier = Some(Arc::new(FiniteSet::new(
                label,
                members.split_whitespace().map(String::from).collect(),
            )));
        } else if let Some(rest) = line.strip_prefix("M:") {
            let (alg, car) = match (&algebra, &carrier) {
                (Some(a), Some(c)) => (a, c),
                _ => {
                    return Err(parse_err(
                        path,
                        lineno,
                        "`lattice =` and `carrier =` must come before entries",
                    ))
                }
            };
            let (pair, value) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `M: b a = h`"))?;
            let names: Vec<&str> = pair.split_whitespace().collect();
            if names.len() != 2 {
                return Err(parse_err(path, lineno, "expected two carrier members"));
            }
            let b = car.index_of(names[0]).ok_or_else(|| {
                parse_err(
                    path,
                    lineno,
                    format!("unknown carrier member `{}`", names[0]),
                )
            })?;
            let a = car.index_of(names[1]).ok_or_else(|| {
                parse_err(
                    path,
                    lineno,
                    format!("unknown carrier member `{}`", names[1]),
                )
            })?;
            let v = parse_elem(path, lineno, alg, value.trim())?;
            matrix_rows.push((lineno, b, a, v));
        } else if let Some(rest) = line.strip_prefix("fiber:") {
            let (alg, car) = match (&algebra, &carrier) {
                (Some(a), Some(c)) => (a, c),
                _ => {
                    return Err(parse_err(
                        path,
                        lineno,
                        "`lattice =` and `carrier =` must come before entries",
                    ))
                }
            };
            let (pair, values) = rest
                .split_once('=')
                .ok_or_else(|| parse_err(path, lineno, "expected `fiber: b a = h1 h2 ...`"))?;
            let names: Vec<&str> = pair.split_whitespace().collect();
            if names.len() != 2 {
                return Err(parse_err(path, lineno, "expected two carrier members"));
            }
            let b = car.index_of(names[0]).ok_or_else(|| {
                parse_err(
                    path,
                    lineno,
                    format!("unknown carrier member `{}`", names[0]),
                )
            })?;
            let a = car.index_of(names[1]).ok_or_else(|| {
                parse_err(
                    path,
                    lineno,
                    format!("unknown carrier member `{}`", names[1]),
                )
            })?;
            let mut fiber = ElemSet::EMPTY;
            for v in values.split_whitespace() {
                fiber.insert(parse_elem(path, lineno, alg, v)?);
            }
            fiber_rows.push((lineno, b, a, fiber));
        } else {
            return Err(parse_err(path, lineno, format!("unexpected line `{line}`")));
        }
    }

    let algebra = algebra.ok_or_else(|| parse_err(path, 1, "missing `lattice =` line"))?;
    let carrier = carrier.ok_or_else(|| parse_err(path, 1, "missing `carrier =` line"))?;
    if !matrix_rows.is_empty() && !fiber_rows.is_empty() {
        return Err(parse_err(
            path,
            matrix_rows[0].0,
            "cannot mix `M:` and `fiber:` rows in one file",
        ));
    }

    if !fiber_rows.is_empty() {
        let mut pt = PreTransformation::empty(algebra.clone(), carrier.clone(), carrier.clone());
        for (lineno, b, a, fiber) in fiber_rows {
            if !algebra.is_down_closed(fiber) {
                return Err(parse_err(path, lineno, "fiber is not down-closed"));
            }
            pt.set_fiber(b, a, fiber);
        }
        Ok(pt)
    } else {
        let mut m = FiberMatrix::constant(
            algebra.clone(),
            carrier.clone(),
            carrier.clone(),
            algebra.bottom(),
        );
        for (_, b, a, v) in matrix_rows {
            m.set_entry(b, a, v);
        }
        Ok(m.to_pretrans())
    }
}

// ---------------------------------------------------------------------------
// canonical printers
// ---------------------------------------------------------------------------

/// Covering pairs (the Hasse diagram) of an algebra, in index order.
fn covering_pairs(alg: &HeytingAlgebra) -> Vec<(Elem, Elem)> {
    let mut out = Vec::new();
    for x in alg.elements() {
        for y in alg.elements() {
            if x != y && alg.leq(x, y) {
                let direct = alg
                    .elements()
                    .all(|z| z == x || z == y || !(alg.leq(x, z) && alg.leq(z, y)));
                if direct {
                    out.push((x, y));
                }
            }
        }
    }
    out
}

pub fn print_lattice(alg: &HeytingAlgebra) -> String {
    let mut out = String::from("[lattice]\n");
    let names: Vec<&str> = alg.elements().map(|e| alg.name(e)).collect();
    out.push_str(&format!("elements = {}\n", names.join(" ")));
    for (x, y) in covering_pairs(alg) {
        out.push_str(&format!("leq = {}<={}\n", alg.name(x), alg.name(y)));
    }
    out
}

pub fn print_presheaf(f: &Presheaf, lattice_name: &str) -> String {
    let alg = f.algebra();
    let mut out = String::from("[presheaf]\n");
    out.push_str(&format!("lattice = {lattice_name}\n"));
    for h in alg.elements() {
        out.push_str(&format!(
            "carrier {} = {}\n",
            alg.name(h),
            f.carrier(h).members().join(" ")
        ));
    }
    for (k, h) in covering_pairs(alg) {
        if f.carrier(h).is_empty() {
            continue;
        }
        let assigns: Vec<String> = (0..f.carrier(h).len())
            .map(|x| {
                format!(
                    "{}={}",
                    f.carrier(h).member(x),
                    f.carrier(k).member(f.restrict(h, k, x))
                )
            })
            .collect();
        out.push_str(&format!(
            "restrict {}->{} : {}\n",
            alg.name(h),
            alg.name(k),
            assigns.join(" ")
        ));
    }
    out
}

pub fn print_reltrans(pt: &PreTransformation, lattice_name: &str) -> String {
    let alg = pt.algebra();
    let mut out = String::from("[reltrans]\n");
    out.push_str(&format!("lattice = {lattice_name}\n"));
    out.push_str(&format!("carrier = {}\n", pt.source().members().join(" ")));
    let inf = pt.classify().infima_preserving;
    for b in 0..pt.target().len() {
        for a in 0..pt.source().len() {
            let fiber = pt.fiber(b, a);
            if inf {
                let v = alg.sup(fiber);
                if v != alg.bottom() {
                    out.push_str(&format!(
                        "M: {} {} = {}\n",
                        pt.target().member(b),
                        pt.source().member(a),
                        alg.name(v)
                    ));
                }
            } else if !fiber.is_empty() {
                let vals: Vec<&str> = fiber.iter().map(|e| alg.name(e)).collect();
                out.push_str(&format!(
                    "fiber: {} {} = {}\n",
                    pt.target().member(b),
                    pt.source().member(a),
                    vals.join(" ")
                ));
            }
        }
    }
    out
}

/// Human summary of a loaded object (the `validate` subcommand's output).
pub fn describe(loaded: &Loaded) -> String {
    match loaded {
        Loaded::Lattice(alg) => format!(
            "valid Heyting algebra: {} elements, bottom {}, top {}",
            alg.len(),
            alg.name(alg.bottom()),
            alg.name(alg.top())
        ),
        Loaded::Presheaf(f) => {
            let sizes: Vec<String> = f
                .algebra()
                .elements()
                .map(|h| format!("{}:{}", f.algebra().name(h), f.carrier(h).len()))
                .collect();
            format!("valid presheaf: carriers {}", sizes.join(" "))
        }
        Loaded::PreTrans(pt) => {
            let flavor = pt.classify();
            let kind = match (flavor.order_preserving, flavor.infima_preserving) {
                (_, true) => "infima-preserving",
                (true, false) => "order-preserving",
                (false, false) => "unclassified",
            };
            format!(
                "valid pre-transformation on {} members ({kind})",
                pt.source().len()
            )
        }
    }
}
