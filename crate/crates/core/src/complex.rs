//! Finite regular cell complexes given as graded face posets with signed
//! facet incidence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::IntegerChainComplex;
use crate::matrix::IntMatrix;

/// Index of a cell inside its [`CellComplex`].
///
/// Cells are stored sorted by name, so comparing ids compares names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub usize);

impl CellId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub dim: usize,
    /// Facets with their incidence sign (+1 or -1).
    pub facets: Vec<(CellId, i32)>,
    pub label: Option<String>,
}

/// A cell as it appears in the input file, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCell {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub facets: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl RawCell {
    pub fn new(id: impl Into<String>, dim: usize, facets: &[(&str, i64)]) -> Self {
        RawCell {
            id: id.into(),
            dim,
            facets: facets.iter().map(|(f, s)| (f.to_string(), *s)).collect(),
            label: None,
        }
    }
}

/// Parsed complex input: either explicit cells or a list of simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexInput {
    Cells(Vec<RawCell>),
    Simplices(Vec<Vec<u64>>),
}

impl ComplexInput {
    /// Parses `{"cells":[...]}` or `{"simplices":[...]}`. Exactly one key must be present.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            cells: Option<Vec<RawCell>>,
            simplices: Option<Vec<Vec<u64>>>,
        }
        let doc: Doc = serde_json::from_str(text)?;
        match (doc.cells, doc.simplices) {
            (Some(cells), None) => Ok(ComplexInput::Cells(cells)),
            (None, Some(simplices)) => Ok(ComplexInput::Simplices(simplices)),
            _ => Err(Error::Parse(
                "expected exactly one of `cells` or `simplices`".into(),
            )),
        }
    }

    pub fn build(self) -> Result<CellComplex> {
        match self {
            ComplexInput::Cells(cells) => build_complex(cells),
            ComplexInput::Simplices(s) => simplicial_from_vertex_lists(&s),
        }
    }
}

/// An immutable, validated cell complex.
#[derive(Clone, Debug)]
pub struct CellComplex {
    cells: Vec<Cell>,
    index: HashMap<String, CellId>,
    by_dim: Vec<Vec<CellId>>,
    cofacets: Vec<Vec<(CellId, i32)>>,
    // strict faces / cofaces, sorted by id
    faces: Vec<Vec<CellId>>,
    cofaces: Vec<Vec<CellId>>,
}

/// Validates raw cell descriptions and builds the face poset.
pub fn build_complex(raw: Vec<RawCell>) -> Result<CellComplex> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut raw = raw;
    raw.sort_by(|a, b| a.id.cmp(&b.id));
    for w in raw.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::DuplicateCell(w[0].id.clone()));
        }
    }
    let index: HashMap<String, CellId> = raw
        .iter()
        .enumerate()
        .map(|(i, c)| (c.id.clone(), CellId(i)))
        .collect();

    let mut cells = Vec::with_capacity(raw.len());
    for rc in &raw {
        let mut facets = Vec::with_capacity(rc.facets.len());
        let mut seen = BTreeSet::new();
        for (fname, sign) in &rc.facets {
            let fid = *index.get(fname).ok_or_else(|| Error::DanglingFacet {
                cell: rc.id.clone(),
                facet: fname.clone(),
            })?;
            let fdim = raw[fid.0].dim;
            if rc.dim == 0 || fdim + 1 != rc.dim {
                return Err(Error::DimensionMismatch {
                    cell: rc.id.clone(),
                    dim: rc.dim,
                    facet: fname.clone(),
                    facet_dim: fdim,
                });
            }
            if !seen.insert(fid) {
                return Err(Error::DuplicateFacet {
                    cell: rc.id.clone(),
                    facet: fname.clone(),
                });
            }
            if *sign != 1 && *sign != -1 {
                return Err(Error::BadSign {
                    cell: rc.id.clone(),
                    facet: fname.clone(),
                    sign: *sign,
                });
            }
            facets.push((fid, *sign as i32));
        }
        facets.sort();
        cells.push(Cell {
            name: rc.id.clone(),
            dim: rc.dim,
            facets,
            label: rc.label.clone(),
        });
    }
    CellComplex::from_cells(cells, index)
}

impl CellComplex {
    fn from_cells(cells: Vec<Cell>, index: HashMap<String, CellId>) -> Result<Self> {
        let n = cells.len();
        let top = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        let mut cofacets = vec![Vec::new(); n];
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(CellId(i));
            for &(f, s) in &c.facets {
                cofacets[f.0].push((CellId(i), s));
            }
        }

        let mut faces: Vec<Vec<CellId>> = vec![Vec::new(); n];
        for d in 1..=top {
            for &c in &by_dim[d] {
                let mut acc = BTreeSet::new();
                for &(f, _) in &cells[c.0].facets {
                    acc.insert(f);
                    acc.extend(faces[f.0].iter().copied());
                }
                faces[c.0] = acc.into_iter().collect();
            }
        }
        let mut cofaces: Vec<Vec<CellId>> = vec![Vec::new(); n];
        for (i, fs) in faces.iter().enumerate() {
            for f in fs {
                cofaces[f.0].push(CellId(i));
            }
        }

        let complex = CellComplex {
            cells,
            index,
            by_dim,
            cofacets,
            faces,
            cofaces,
        };
        complex.check_square_zero()?;
        Ok(complex)
    }

    fn check_square_zero(&self) -> Result<()> {
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.dim < 2 {
                continue;
            }
            let mut acc: BTreeMap<CellId, i64> = BTreeMap::new();
            for &(f, s) in &cell.facets {
                for &(g, t) in &self.cells[f.0].facets {
                    *acc.entry(g).or_default() += (s * t) as i64;
                }
            }
            if let Some((g, _)) = acc.iter().find(|(_, v)| **v != 0) {
                return Err(Error::NonSquareZeroBoundary {
                    cell: self.cells[i].name.clone(),
                    face: self.cells[g.0].name.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Maximal cell dimension.
    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn name(&self, id: CellId) -> &str {
        &self.cells[id.0].name
    }

    pub fn cell_dim(&self, id: CellId) -> usize {
        self.cells[id.0].dim
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).map(CellId)
    }

    pub fn id_of(&self, name: &str) -> Result<CellId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }

    /// Cells of dimension `d`, sorted by name. Empty above the top dimension.
    pub fn cells_of_dim(&self, d: usize) -> &[CellId] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count_of_dim(&self, d: usize) -> usize {
        self.cells_of_dim(d).len()
    }

    pub fn facets(&self, id: CellId) -> &[(CellId, i32)] {
        &self.cells[id.0].facets
    }

    pub fn cofacets(&self, id: CellId) -> &[(CellId, i32)] {
        &self.cofacets[id.0]
    }

    /// All strict faces (any codimension).
    pub fn faces(&self, id: CellId) -> &[CellId] {
        &self.faces[id.0]
    }

    /// All strict cofaces (any codimension).
    pub fn cofaces(&self, id: CellId) -> &[CellId] {
        &self.cofaces[id.0]
    }

    /// `a <= b` in the face order.
    pub fn is_face(&self, a: CellId, b: CellId) -> bool {
        a == b || self.faces[b.0].binary_search(&a).is_ok()
    }

    pub fn comparable(&self, a: CellId, b: CellId) -> bool {
        self.is_face(a, b) || self.is_face(b, a)
    }

    /// `<∂β, α>`; zero when α is not a facet of β.
    pub fn incidence(&self, beta: CellId, alpha: CellId) -> i32 {
        self.cells[beta.0]
            .facets
            .iter()
            .find(|(f, _)| *f == alpha)
            .map_or(0, |(_, s)| *s)
    }

    /// The cell together with all of its faces.
    pub fn closure(&self, id: CellId) -> impl Iterator<Item = CellId> + '_ {
        std::iter::once(id).chain(self.faces[id.0].iter().copied())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, cs)| if d % 2 == 0 { cs.len() as i64 } else { -(cs.len() as i64) })
            .sum()
    }

    pub fn boundary(&self, chain: &ChainVector) -> ChainVector {
        let mut out = ChainVector::zero(chain.degree.saturating_sub(1));
        if chain.degree == 0 {
            return out;
        }
        for (&c, &k) in &chain.coefficients {
            for &(f, s) in self.facets(c) {
                out.add(f, k * s as i64);
            }
        }
        out
    }

    /// Matrix of `∂: C_degree -> C_{degree-1}`; rows are (degree-1)-cells.
    pub fn incidence_matrix(&self, degree: usize) -> IncidenceMatrix {
        let cols = self.cells_of_dim(degree).to_vec();
        let rows = if degree == 0 {
            Vec::new()
        } else {
            self.cells_of_dim(degree - 1).to_vec()
        };
        let row_pos: HashMap<CellId, usize> =
            rows.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for &(f, s) in self.facets(c) {
                m.set(row_pos[&f], j, s as i64);
            }
        }
        IncidenceMatrix {
            degree,
            rows,
            cols,
            entries: m,
        }
    }

    /// The cellular chain complex with bases sorted by cell name.
    pub fn chain_complex(&self) -> IntegerChainComplex {
        let labels = (0..=self.dim())
            .map(|d| {
                self.cells_of_dim(d)
                    .iter()
                    .map(|c| self.name(*c).to_string())
                    .collect()
            })
            .collect();
        let diffs = (1..=self.dim())
            .map(|d| self.incidence_matrix(d).entries)
            .collect();
        IntegerChainComplex::new(labels, diffs).expect("validated complex has d∘d = 0")
    }

    /// All chains `c_0 < c_1 < ... < c_k` of the face poset, each listed in
    /// increasing dimension. These are the simplices of the barycentric
    /// subdivision. Output is sorted by length, then lexicographically.
    pub fn flags(&self) -> Vec<Vec<CellId>> {
        let mut out = Vec::new();
        let mut stack: Vec<CellId> = Vec::new();
        fn extend(cx: &CellComplex, stack: &mut Vec<CellId>, out: &mut Vec<Vec<CellId>>) {
            out.push(stack.clone());
            let last = *stack.last().unwrap();
            for &up in cx.cofaces(last) {
                stack.push(up);
                extend(cx, stack, out);
                stack.pop();
            }
        }
        for c in self.ids() {
            stack.push(c);
            extend(self, &mut stack, &mut out);
            stack.pop();
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// The sub-complex of cells of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> CellComplex {
        let raw = self.to_raw().into_iter().filter(|c| c.dim <= d).collect();
        build_complex(raw).expect("skeleton of a valid complex is valid")
    }

    pub fn to_raw(&self) -> Vec<RawCell> {
        self.cells
            .iter()
            .map(|c| RawCell {
                id: c.name.clone(),
                dim: c.dim,
                facets: c
                    .facets
                    .iter()
                    .map(|(f, s)| (self.name(*f).to_string(), *s as i64))
                    .collect(),
                label: c.label.clone(),
            })
            .collect()
    }
}

/// Integer chain of a fixed degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainVector {
    pub degree: usize,
    pub coefficients: BTreeMap<CellId, i64>,
}

impl ChainVector {
    pub fn zero(degree: usize) -> Self {
        ChainVector {
            degree,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn cell(cx: &CellComplex, c: CellId) -> Self {
        let mut v = Self::zero(cx.cell_dim(c));
        v.add(c, 1);
        v
    }

    /// Checks every referenced cell against the degree.
    pub fn validate(&self, cx: &CellComplex) -> Result<()> {
        for &c in self.coefficients.keys() {
            if cx.cell_dim(c) != self.degree {
                return Err(Error::ChainDegree {
                    cell: cx.name(c).to_string(),
                    dim: cx.cell_dim(c),
                    degree: self.degree,
                });
            }
        }
        Ok(())
    }

    pub fn add(&mut self, c: CellId, k: i64) {
        if k == 0 {
            return;
        }
        let e = self.coefficients.entry(c).or_default();
        *e += k;
        if *e == 0 {
            self.coefficients.remove(&c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `<self, c>` under the inner product making cells orthonormal.
    pub fn coefficient(&self, c: CellId) -> i64 {
        self.coefficients.get(&c).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub degree: usize,
    pub rows: Vec<CellId>,
    pub cols: Vec<CellId>,
    pub entries: IntMatrix,
}

/// Builds the closure of the given simplices, orienting each simplex by
/// sorted vertex order.
///
/// Cell names are `v3`, `e01`, `t012`, `s3_0123`, ...; vertex labels are
/// joined with `_` when any label has more than one digit.
pub fn simplicial_from_vertex_lists(simplices: &[Vec<u64>]) -> Result<CellComplex> {
    if simplices.is_empty() || simplices.iter().any(Vec::is_empty) {
        return Err(Error::EmptyInput);
    }
    let mut all: BTreeSet<Vec<u64>> = BTreeSet::new();
    for s in simplices {
        let mut s = s.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(s));
        }
        // every nonempty subset
        let k = s.len();
        for mask in 1u64..(1u64 << k) {
            let sub: Vec<u64> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
            all.insert(sub);
        }
    }
    let compact = all.iter().flatten().all(|v| *v < 10);
    let raw = all
        .iter()
        .map(|s| {
            let facets = if s.len() == 1 {
                Vec::new()
            } else {
                (0..s.len())
                    .map(|l| {
                        let mut f = s.clone();
                        f.remove(l);
                        (simplex_name(&f, compact), if l % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            };
            RawCell {
                id: simplex_name(s, compact),
                dim: s.len() - 1,
                facets,
                label: None,
            }
        })
        .collect();
    build_complex(raw)
}

fn simplex_name(vertices: &[u64], compact: bool) -> String {
    let prefix = match vertices.len() {
        1 => "v".to_string(),
        2 => "e".to_string(),
        3 => "t".to_string(),
        n => format!("s{}_", n - 1),
    };
    let body: Vec<String> = vertices.iter().map(u64::to_string).collect();
    let sep = if compact { "" } else { "_" };
    format!("{prefix}{}", body.join(sep))
}

impl fmt::Display for CellComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = (0..=self.dim())
            .map(|d| self.count_of_dim(d).to_string())
            .collect();
        write!(f, "cell complex of dim {} with counts ({})", self.dim(), counts.join(", "))
    }
}
