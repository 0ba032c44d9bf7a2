//! The barycentric subdivision X₁ of a cell complex and the piecewise
//! linear function f on it.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::complex::{build_complex, CellComplex, CellId, RawCell};
use crate::error::{Error, Result};
use crate::morse::MorseFunction;
use crate::Rational;

/// A simplex of X₁: a chain of base cells in increasing dimension. Its
/// vertices are the barycenters of those cells.
pub type Flag = Vec<CellId>;

pub fn flag_name(cx: &CellComplex, flag: &[CellId]) -> String {
    flag.iter().map(|c| cx.name(*c)).collect::<Vec<_>>().join("<")
}

pub fn parse_flag(cx: &CellComplex, name: &str) -> Result<Flag> {
    let flag = name
        .split('<')
        .map(|n| cx.id_of(n.trim()))
        .collect::<Result<Flag>>()?;
    if flag.windows(2).all(|w| cx.is_face(w[0], w[1]) && w[0] != w[1]) {
        Ok(flag)
    } else {
        Err(Error::Parse(format!("`{name}` is not a chain of faces")))
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision<'a> {
    base: &'a CellComplex,
    simplices: Vec<Flag>,
    index: HashMap<Flag, usize>,
    f: Vec<Rational>,
}

impl<'a> Subdivision<'a> {
    pub fn base(&self) -> &'a CellComplex {
        self.base
    }

    /// All simplices, sorted by dimension then lexicographically.
    pub fn simplices(&self) -> &[Flag] {
        &self.simplices
    }

    pub fn simplices_of_dim(&self, k: usize) -> impl Iterator<Item = &Flag> + '_ {
        self.simplices.iter().filter(move |s| s.len() == k + 1)
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.simplices_of_dim(k).count()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn contains(&self, flag: &[CellId]) -> bool {
        self.index.contains_key(flag)
    }

    pub fn position(&self, flag: &[CellId]) -> Option<usize> {
        self.index.get(flag).copied()
    }

    /// f at the barycenter of `c`.
    pub fn f(&self, c: CellId) -> &Rational {
        &self.f[c.0]
    }

    pub fn f_values(&self) -> &[Rational] {
        &self.f
    }

    /// Dimension of the base cell a vertex of X₁ comes from.
    pub fn vertex_dim(&self, c: CellId) -> usize {
        self.base.cell_dim(c)
    }

    /// Maximal simplices of X₁.
    pub fn maximal_simplices(&self) -> Vec<&Flag> {
        self.simplices
            .iter()
            .filter(|s| {
                let last = *s.last().unwrap();
                let first = s[0];
                self.base.cofacets(last).is_empty()
                    && self.base.cell_dim(first) == 0
                    && s.windows(2)
                        .all(|w| self.base.cell_dim(w[1]) == self.base.cell_dim(w[0]) + 1)
            })
            .collect()
    }

    /// Simplices of X₁ having `flag` as a face, including `flag`.
    pub fn star(&self, flag: &[CellId]) -> Vec<&Flag> {
        self.simplices
            .iter()
            .filter(|s| is_subchain(flag, s))
            .collect()
    }

    /// Same simplices with f replaced by `-f`.
    pub fn negated(&self) -> Subdivision<'a> {
        Subdivision {
            f: self.f.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    /// The rib X₁^(i): chains whose cells all have dimension at most `i`.
    pub fn rib(&self, i: usize) -> Result<FlagSet> {
        if i > self.dim() {
            return Err(Error::BadDegree {
                degree: i,
                max: self.dim(),
            });
        }
        Ok(FlagSet::new(
            self.simplices
                .iter()
                .filter(|s| self.base.cell_dim(*s.last().unwrap()) <= i)
                .cloned(),
        ))
    }

    pub fn all(&self) -> FlagSet {
        FlagSet::new(self.simplices.iter().cloned())
    }

    pub fn to_complex(&self) -> CellComplex {
        self.all().to_complex(self.base)
    }

    /// Graphviz graph of the 1-skeleton; vertices labelled with f.
    pub fn to_dot(&self) -> String {
        let cx = self.base;
        let mut s = String::from("graph subdivision {\n");
        for c in cx.ids() {
            let _ = writeln!(
                s,
                "  \"{}\" [label=\"{} ({}) f={}\"];",
                cx.name(c),
                cx.name(c),
                cx.cell_dim(c),
                self.f(c)
            );
        }
        for e in self.simplices_of_dim(1) {
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", cx.name(e[0]), cx.name(e[1]));
        }
        s.push_str("}\n");
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let counts: Vec<usize> = (0..=self.dim()).map(|k| self.count_of_dim(k)).collect();
        let ribs: Vec<Vec<usize>> = (0..=self.dim())
            .map(|i| self.rib(i).expect("in range").counts())
            .collect();
        serde_json::json!({ "simplex_counts": counts, "rib_counts": ribs })
    }
}

/// `a` is a sub-chain of `b`; both sorted by dimension.
pub fn is_subchain(a: &[CellId], b: &[CellId]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

pub fn barycentric_subdivide<'a>(cx: &'a CellComplex, f: &MorseFunction) -> Subdivision<'a> {
    let simplices = cx.flags();
    let index = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    Subdivision {
        base: cx,
        simplices,
        index,
        f: f.values().to_vec(),
    }
}

/// A set of X₁-simplices, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlagSet {
    flags: Vec<Flag>,
}

impl FlagSet {
    pub fn new(flags: impl IntoIterator<Item = Flag>) -> Self {
        let mut flags: Vec<Flag> = flags.into_iter().collect();
        flags.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        flags.dedup();
        FlagSet { flags }
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn contains(&self, flag: &[CellId]) -> bool {
        self.flags
            .binary_search_by(|f| f.len().cmp(&flag.len()).then_with(|| f.as_slice().cmp(flag)))
            .is_ok()
    }

    /// Number of simplices per dimension.
    pub fn counts(&self) -> Vec<usize> {
        let top = self.flags.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![0; top];
        for f in &self.flags {
            out[f.len() - 1] += 1;
        }
        out
    }

    pub fn vertices(&self) -> Vec<CellId> {
        self.flags
            .iter()
            .filter(|f| f.len() == 1)
            .map(|f| f[0])
            .collect()
    }

    /// Every face of every member is a member.
    pub fn is_closed(&self) -> bool {
        self.flags.iter().all(|f| {
            (0..f.len()).all(|l| {
                f.len() == 1 || {
                    let mut g = f.clone();
                    g.remove(l);
                    self.contains(&g)
                }
            })
        })
    }

    pub fn is_subset(&self, other: &FlagSet) -> bool {
        self.flags.iter().all(|f| other.contains(f))
    }

    /// The simplicial complex on these flags; a facet of `c_0<...<c_k` is
    /// obtained by deleting position `l`, with sign `(-1)^l`.
    pub fn to_complex(&self, cx: &CellComplex) -> CellComplex {
        let raw = self
            .flags
            .iter()
            .map(|f| {
                let facets: Vec<(String, i64)> = if f.len() == 1 {
                    Vec::new()
                } else {
                    (0..f.len())
                        .map(|l| {
                            let mut g = f.clone();
                            g.remove(l);
                            (flag_name(cx, &g), if l % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                };
                RawCell {
                    id: flag_name(cx, f),
                    dim: f.len() - 1,
                    facets,
                    label: None,
                }
            })
            .collect();
        build_complex(raw).expect("a face-closed set of flags is a simplicial complex")
    }

    pub fn names(&self, cx: &CellComplex) -> Vec<String> {
        self.flags.iter().map(|f| flag_name(cx, f)).collect()
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let mut by_dim: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for f in &self.flags {
            by_dim.entry(f.len() - 1).or_default().push(flag_name(cx, f));
        }
        serde_json::json!({ "counts": self.counts(), "simplices": by_dim })
    }
}
