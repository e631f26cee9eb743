//! The `qlab/1` instance format: one JSON object per line.
//!
//! The first line is a header `{"format":"qlab/1","id":...}`. Each following
//! line is a block tagged by `"block"`: `lattice`, `quantale`,
//! `inverse-semigroup`, `groupoid` or `map`. Tables refer to elements by
//! label. Blank lines and lines starting with `#` are ignored.
//!
//! A quantale block is either symbolic (`{"block":"quantale","tag":"rel:2"}`)
//! or a table over the elements of the preceding lattice block.

use std::collections::HashMap;
use std::fmt;

use qlab_core::groupoid::{FiniteGroupoid, OpensQuantale};
use qlab_core::pseudogroup::InverseSemigroup;
use qlab_core::quantale::{AnyQuantale, Quantale};
use qlab_core::{Config, FiniteLattice, Lattice, RelQuantale, TableQuantale};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "qlab/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrow {
    pub label: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "block", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Block {
    Lattice {
        elements: Vec<String>,
        /// Covering pairs `[lower, upper]`.
        covers: Vec<[String; 2]>,
    },
    Quantale {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tag: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mult: Option<Vec<Vec<String>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        involution: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<String>,
    },
    InverseSemigroup {
        elements: Vec<String>,
        mult: Vec<Vec<String>>,
        inverse: Vec<String>,
    },
    Groupoid {
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        inverse: Vec<String>,
        /// Every composable pair as `[g, h, g∘h]`.
        compose: Vec<[String; 3]>,
    },
    /// `p*` of a map from the file's quantale to `O` of its groupoid, listing
    /// the source element for each open set in bitmask order.
    Map { star: Vec<String> },
}

impl Block {
    pub fn name(&self) -> &'static str {
        match self {
            Block::Lattice { .. } => "lattice",
            Block::Quantale { .. } => "quantale",
            Block::InverseSemigroup { .. } => "inverse-semigroup",
            Block::Groupoid { .. } => "groupoid",
            Block::Map { .. } => "map",
        }
    }
}

/// A parse or reference error, located by line and block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub block: Option<String>,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.block {
            Some(b) => write!(f, "line {} ({b}): {}", self.line, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

impl std::error::Error for FormatError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub id: String,
    pub blocks: Vec<Block>,
    /// Source line of each block, for diagnostics.
    lines: Vec<usize>,
}

impl InstanceFile {
    pub fn new(id: impl Into<String>, blocks: Vec<Block>) -> Self {
        let lines = (0..blocks.len()).map(|i| i + 2).collect();
        InstanceFile {
            id: id.into(),
            blocks,
            lines,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut header = None;
        let mut blocks = Vec::new();
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let err = |block: Option<String>, message: String| FormatError { line, block, message };
            if header.is_none() {
                let h: Header = serde_json::from_str(t).map_err(|e| err(None, format!("bad header: {e}")))?;
                if h.format != FORMAT {
                    return Err(err(None, format!("unsupported format {:?}, expected {FORMAT:?}", h.format)));
                }
                header = Some(h);
                continue;
            }
            let tag = serde_json::from_str::<serde_json::Value>(t)
                .ok()
                .and_then(|v| v.get("block").and_then(|b| b.as_str()).map(str::to_string));
            let b: Block = serde_json::from_str(t).map_err(|e| err(tag, e.to_string()))?;
            blocks.push(b);
            lines.push(line);
        }
        let header = header.ok_or(FormatError {
            line: 1,
            block: None,
            message: "empty instance file".into(),
        })?;
        let file = InstanceFile {
            id: header.id,
            blocks,
            lines,
        };
        file.resolve()?;
        Ok(file)
    }

    /// Canonical text: the header and one compact JSON line per block.
    pub fn to_text(&self) -> String {
        let header = Header {
            format: FORMAT.into(),
            id: self.id.clone(),
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for b in &self.blocks {
            out.push_str(&serde_json::to_string(b).expect("block serializes"));
            out.push('\n');
        }
        out
    }

    fn error(&self, i: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.lines[i],
            block: Some(self.blocks[i].name().to_string()),
            message: message.into(),
        }
    }

    /// Builds the structures the blocks describe, checking every reference.
    pub fn resolve(&self) -> Result<Resolved, FormatError> {
        let mut lattice: Option<(FiniteLattice, Vec<String>)> = None;
        let mut out = Resolved::default();
        for (i, b) in self.blocks.iter().enumerate() {
            let dup = |present: bool| {
                if present {
                    Err(self.error(i, format!("more than one {} block", b.name())))
                } else {
                    Ok(())
                }
            };
            match b {
                Block::Lattice { elements, covers } => {
                    dup(lattice.is_some())?;
                    let idx = index(elements).map_err(|m| self.error(i, m))?;
                    let pairs = covers
                        .iter()
                        .map(|[a, b]| Ok((lookup(&idx, a)?, lookup(&idx, b)?)))
                        .collect::<Result<Vec<_>, String>>()
                        .map_err(|m| self.error(i, m))?;
                    let l = FiniteLattice::from_covers(elements.len(), &pairs).map_err(|e| self.error(i, e.to_string()))?;
                    lattice = Some((l, elements.clone()));
                }
                Block::Quantale {
                    tag,
                    mult,
                    involution,
                    unit,
                } => {
                    dup(out.quantale.is_some())?;
                    out.quantale = Some(self.quantale(i, lattice.as_ref(), tag, mult, involution, unit)?);
                }
                Block::InverseSemigroup {
                    elements,
                    mult,
                    inverse,
                } => {
                    dup(out.semigroup.is_some())?;
                    let idx = index(elements).map_err(|m| self.error(i, m))?;
                    let mult = table(&idx, mult, elements.len()).map_err(|m| self.error(i, m))?;
                    let inv = row(&idx, inverse, elements.len(), "inverse").map_err(|m| self.error(i, m))?;
                    let s = InverseSemigroup::new(mult, inv, Some(elements.clone()))
                        .map_err(|e| self.error(i, e.to_string()))?;
                    out.semigroup = Some(s);
                }
                Block::Groupoid {
                    objects,
                    arrows,
                    inverse,
                    compose,
                } => {
                    dup(out.groupoid.is_some())?;
                    let g = self.groupoid(objects, arrows, inverse, compose).map_err(|m| self.error(i, m))?;
                    out.groupoid = Some(g);
                }
                Block::Map { star } => {
                    dup(out.map.is_some())?;
                    let (Some(q), Some(g)) = (&out.quantale, &out.groupoid) else {
                        return Err(self.error(i, "a map needs a quantale and a groupoid block before it"));
                    };
                    let m = g.arrows();
                    if m >= usize::BITS as usize || star.len() != 1usize << m {
                        return Err(self.error(i, format!("star needs one entry per open set, {} for {m} arrows", 1u128 << m)));
                    }
                    let labels: HashMap<String, usize> = q.elements().map(|a| (q.label(a), a)).collect();
                    let star = star
                        .iter()
                        .map(|s| labels.get(s).copied().ok_or_else(|| format!("unknown element {s:?}")))
                        .collect::<Result<Vec<_>, String>>()
                        .map_err(|m| self.error(i, m))?;
                    out.map = Some(star);
                }
            }
        }
        out.id = self.id.clone();
        Ok(out)
    }

    fn quantale(
        &self,
        i: usize,
        lattice: Option<&(FiniteLattice, Vec<String>)>,
        tag: &Option<String>,
        mult: &Option<Vec<Vec<String>>>,
        involution: &Option<Vec<String>>,
        unit: &Option<String>,
    ) -> Result<AnyQuantale, FormatError> {
        if let Some(tag) = tag {
            if mult.is_some() || involution.is_some() || unit.is_some() {
                return Err(self.error(i, "a symbolic quantale takes no tables"));
            }
            let n = tag
                .strip_prefix("rel:")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| self.error(i, format!("unknown symbolic tag {tag:?}, expected rel:<n>")))?;
            let q = RelQuantale::new(n).map_err(|e| self.error(i, e.to_string()))?;
            return Ok(AnyQuantale::Rel(q));
        }
        let (Some(mult), Some(involution)) = (mult, involution) else {
            return Err(self.error(i, "a table quantale needs mult and involution"));
        };
        let Some((l, elements)) = lattice else {
            return Err(self.error(i, "a table quantale needs a lattice block before it"));
        };
        if elements.is_empty() {
            return Err(self.error(i, "empty quantale"));
        }
        let idx = index(elements).map_err(|m| self.error(i, m))?;
        let n = elements.len();
        let mult = table(&idx, mult, n).map_err(|m| self.error(i, m))?;
        let inv = row(&idx, involution, n, "involution").map_err(|m| self.error(i, m))?;
        let unit = unit
            .as_ref()
            .map(|u| lookup(&idx, u))
            .transpose()
            .map_err(|m| self.error(i, m))?;
        let q = TableQuantale::new(l.clone(), mult, inv, unit).map_err(|e| self.error(i, e.to_string()))?;
        Ok(AnyQuantale::Table(q.with_labels(elements.clone())))
    }

    fn groupoid(
        &self,
        objects: &[String],
        arrows: &[Arrow],
        inverse: &[String],
        compose: &[[String; 3]],
    ) -> Result<FiniteGroupoid, String> {
        let objs = index(objects)?;
        let labels: Vec<String> = arrows.iter().map(|a| a.label.clone()).collect();
        let idx = index(&labels)?;
        let dom = arrows.iter().map(|a| lookup(&objs, &a.dom)).collect::<Result<Vec<_>, _>>()?;
        let cod = arrows.iter().map(|a| lookup(&objs, &a.cod)).collect::<Result<Vec<_>, _>>()?;
        let inv = row(&idx, inverse, arrows.len(), "inverse")?;
        let comp = compose
            .iter()
            .map(|[g, h, gh]| Ok((lookup(&idx, g)?, lookup(&idx, h)?, lookup(&idx, gh)?)))
            .collect::<Result<Vec<_>, String>>()?;
        FiniteGroupoid::new(objects.len(), dom, cod, &comp, inv, Some(labels)).map_err(|e| e.to_string())
    }
}

fn index(labels: &[String]) -> Result<HashMap<String, usize>, String> {
    let mut idx = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if idx.insert(l.clone(), i).is_some() {
            return Err(format!("duplicate label {l:?}"));
        }
    }
    Ok(idx)
}

fn lookup(idx: &HashMap<String, usize>, label: &str) -> Result<usize, String> {
    idx.get(label).copied().ok_or_else(|| format!("unknown element {label:?}"))
}

fn row(idx: &HashMap<String, usize>, r: &[String], n: usize, what: &str) -> Result<Vec<usize>, String> {
    if r.len() != n {
        return Err(format!("{what} has {} entries, expected {n}", r.len()));
    }
    r.iter().map(|l| lookup(idx, l)).collect()
}

fn table(idx: &HashMap<String, usize>, t: &[Vec<String>], n: usize) -> Result<Vec<Vec<usize>>, String> {
    if t.len() != n {
        return Err(format!("mult has {} rows, expected {n}", t.len()));
    }
    t.iter()
        .enumerate()
        .map(|(i, r)| row(idx, r, n, &format!("mult row {i}")))
        .collect()
}

/// The structures of an instance file.
#[derive(Debug, Clone, Default)]
pub struct Resolved {
    pub id: String,
    pub quantale: Option<AnyQuantale>,
    pub semigroup: Option<InverseSemigroup>,
    pub groupoid: Option<FiniteGroupoid>,
    /// `p*` from `O(groupoid)` into `quantale`.
    pub map: Option<Vec<usize>>,
}

impl Resolved {
    /// The quantale to analyze: the quantale block, else `O` of the groupoid,
    /// else the completion of the inverse semigroup.
    pub fn subject(&self, cfg: &Config) -> qlab_core::Result<Option<AnyQuantale>> {
        if let Some(q) = &self.quantale {
            return Ok(Some(q.clone()));
        }
        if let Some(g) = &self.groupoid {
            return Ok(Some(AnyQuantale::Opens(OpensQuantale::new(g.clone(), cfg)?)));
        }
        if let Some(s) = &self.semigroup {
            let c = qlab_core::pseudogroup::compatible_ideals(s, cfg)?;
            return Ok(Some(AnyQuantale::Table(c.quantale().clone())));
        }
        Ok(None)
    }
}

fn labels_of<L: Lattice>(l: &L) -> Vec<String> {
    l.elements().map(|a| l.label(a)).collect()
}

/// Blocks describing a quantale.
pub fn quantale_blocks(q: &AnyQuantale) -> Vec<Block> {
    if let AnyQuantale::Rel(r) = q {
        return vec![Block::Quantale {
            tag: Some(format!("rel:{}", r.points())),
            mult: None,
            involution: None,
            unit: None,
        }];
    }
    let labels = labels_of(q);
    let n = q.len();
    let lattice = FiniteLattice::from_leq(n, |a, b| q.leq(a, b)).expect("a quantale is a lattice");
    let covers = lattice
        .covers()
        .into_iter()
        .map(|(a, b)| [labels[a].clone(), labels[b].clone()])
        .collect();
    vec![
        Block::Lattice {
            elements: labels.clone(),
            covers,
        },
        Block::Quantale {
            tag: None,
            mult: Some((0..n).map(|a| (0..n).map(|b| labels[q.mul(a, b)].clone()).collect()).collect()),
            involution: Some((0..n).map(|a| labels[q.star(a)].clone()).collect()),
            unit: q.unit().map(|e| labels[e].clone()),
        },
    ]
}

pub fn semigroup_block(s: &InverseSemigroup) -> Block {
    let labels = s.labels().to_vec();
    let n = s.len();
    Block::InverseSemigroup {
        mult: (0..n).map(|a| (0..n).map(|b| labels[s.mul(a, b)].clone()).collect()).collect(),
        inverse: (0..n).map(|a| labels[s.inverse(a)].clone()).collect(),
        elements: labels,
    }
}

pub fn groupoid_block(g: &FiniteGroupoid) -> Block {
    let objects: Vec<String> = (0..g.objects()).map(|x| format!("x{x}")).collect();
    let label = |a: usize| g.arrow_label(a).to_string();
    Block::Groupoid {
        arrows: (0..g.arrows())
            .map(|a| Arrow {
                label: label(a),
                dom: objects[g.dom(a)].clone(),
                cod: objects[g.cod(a)].clone(),
            })
            .collect(),
        inverse: (0..g.arrows()).map(|a| label(g.inverse(a))).collect(),
        compose: g
            .composition_triples()
            .into_iter()
            .map(|(a, b, c)| [label(a), label(b), label(c)])
            .collect(),
        objects,
    }
}

pub fn map_block<Q: Quantale>(q: &Q, star: &[usize]) -> Block {
    Block::Map {
        star: star.iter().map(|&a| q.label(a)).collect(),
    }
}
