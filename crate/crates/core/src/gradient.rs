//! Discrete gradient field, gradient paths and the Morse complex.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::json;

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::homology::IntegerChainComplex;
use crate::matrix::IntMatrix;
use crate::morse::{critical_cells, CriticalReport, MorseFunction};

/// `V(α) = −⟨∂β, α⟩ β` for the exceptional coface β of α, zero otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientField {
    arrows: Vec<Option<(CellId, i32)>>,
}

impl GradientField {
    /// The cell and sign of `V(c)`, or `None` when `V(c) = 0`.
    pub fn get(&self, c: CellId) -> Option<(CellId, i32)> {
        self.arrows[c.0]
    }

    pub fn arrows(&self) -> impl Iterator<Item = (CellId, CellId, i32)> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter_map(|(a, v)| v.map(|(b, s)| (CellId(a), b, s)))
    }

    pub fn is_zero(&self) -> bool {
        self.arrows.iter().all(Option::is_none)
    }

    /// Graphviz digraph with one arrow `α -> β` per nonzero `V(α)`.
    pub fn to_dot(&self, cx: &CellComplex) -> String {
        let mut s = String::from("digraph gradient {\n");
        for c in cx.ids() {
            let _ = writeln!(s, "  \"{}\" [label=\"{} ({})\"];", cx.name(c), cx.name(c), cx.cell_dim(c));
        }
        for (a, b, sign) in self.arrows() {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                cx.name(a),
                cx.name(b),
                if sign > 0 { "+" } else { "-" }
            );
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let arrows: Vec<_> = self
            .arrows()
            .map(|(a, b, s)| json!({ "from": cx.name(a), "to": cx.name(b), "sign": s }))
            .collect();
        json!({ "arrows": arrows })
    }
}

pub fn gradient_field(cx: &CellComplex, f: &MorseFunction) -> Result<GradientField> {
    let report = critical_cells(cx, f)?;
    Ok(field_from_report(cx, &report))
}

pub fn field_from_report(cx: &CellComplex, report: &CriticalReport) -> GradientField {
    let arrows = cx
        .ids()
        .map(|a| report.up_partner(cx, a).map(|b| (b, -cx.incidence(b, a))))
        .collect();
    GradientField { arrows }
}

/// A gradient path `α_0, α_1, ..., α_r` of i-cells. `betas[l]` is the
/// (i+1)-cell crossed between `α_l` and `α_{l+1}`, or `None` on a
/// stabilized step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientPath {
    pub dim: usize,
    pub cells: Vec<CellId>,
    pub betas: Vec<Option<CellId>>,
    pub sign: i32,
}

impl GradientPath {
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// The cells up to the first stabilized step.
    pub fn moving_part(&self) -> &[CellId] {
        let k = self.betas.iter().take_while(|b| b.is_some()).count();
        &self.cells[..=k]
    }

    pub fn describe(&self, cx: &CellComplex) -> String {
        let names: Vec<&str> = self.moving_part().iter().map(|c| cx.name(*c)).collect();
        format!("{} ({:+})", names.join(" -> "), self.sign)
    }
}

/// The orientation factor picked up by `α_l -> α_{l+1}`: the induced
/// orientation on `next` makes `⟨∂β, cur⟩⟨∂β, next⟩ = −1`.
fn step_factor(cx: &CellComplex, beta: CellId, cur: CellId, next: CellId) -> i32 {
    -cx.incidence(beta, cur) * cx.incidence(beta, next)
}

/// Propagates `+α_0` along the path and compares with the fixed
/// orientation of the last cell.
pub fn path_sign(cx: &CellComplex, path: &GradientPath) -> i32 {
    let mut sign = 1;
    for (l, beta) in path.betas.iter().enumerate() {
        if let Some(b) = beta {
            sign *= step_factor(cx, *b, path.cells[l], path.cells[l + 1]);
        }
    }
    sign
}

/// All gradient paths of length `max_len` from `from` to `to`.
pub fn enumerate_paths(
    cx: &CellComplex,
    field: &GradientField,
    from: CellId,
    to: CellId,
    max_len: usize,
) -> Vec<GradientPath> {
    let dim = cx.cell_dim(from);
    if cx.cell_dim(to) != dim {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cells = vec![from];
    let mut betas = Vec::new();
    walk(cx, field, to, max_len, &mut cells, &mut betas, &mut out);
    for p in &mut out {
        p.sign = path_sign(cx, p);
    }
    out
}

fn walk(
    cx: &CellComplex,
    field: &GradientField,
    to: CellId,
    max_len: usize,
    cells: &mut Vec<CellId>,
    betas: &mut Vec<Option<CellId>>,
    out: &mut Vec<GradientPath>,
) {
    let cur = *cells.last().unwrap();
    if betas.len() == max_len {
        if cur == to {
            out.push(GradientPath {
                dim: cx.cell_dim(cur),
                cells: cells.clone(),
                betas: betas.clone(),
                sign: 0,
            });
        }
        return;
    }
    match field.get(cur) {
        None => {
            // stabilized: the rest of the path is constant
            if cur == to {
                let rest = max_len - betas.len();
                let mut cells = cells.clone();
                let mut betas = betas.clone();
                cells.extend(std::iter::repeat_n(cur, rest));
                betas.extend(std::iter::repeat_n(None, rest));
                out.push(GradientPath {
                    dim: cx.cell_dim(cur),
                    cells,
                    betas,
                    sign: 0,
                });
            }
        }
        Some((beta, _)) => {
            for &(next, _) in cx.facets(beta) {
                if next == cur {
                    continue;
                }
                cells.push(next);
                betas.push(Some(beta));
                walk(cx, field, to, max_len, cells, betas, out);
                cells.pop();
                betas.pop();
            }
        }
    }
}

/// `(#i-cells) + 1`, long enough for every path to stabilize.
pub fn stable_length(cx: &CellComplex, dim: usize) -> usize {
    cx.count_of_dim(dim) + 1
}

/// The Morse complex: critical cells and the differential `∂̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseComplexData {
    /// `basis[i]` lists the critical i-cells, sorted by id.
    pub basis: Vec<Vec<CellId>>,
    /// `differentials[i - 1]` is `∂̃_i`, rows indexed by `basis[i - 1]`.
    pub differentials: Vec<IntMatrix>,
}

impl MorseComplexData {
    pub fn differential(&self, degree: usize) -> Option<&IntMatrix> {
        degree.checked_sub(1).and_then(|k| self.differentials.get(k))
    }

    pub fn chain_complex(&self, cx: &CellComplex) -> IntegerChainComplex {
        let labels = self
            .basis
            .iter()
            .map(|b| b.iter().map(|c| cx.name(*c).to_string()).collect())
            .collect();
        IntegerChainComplex::new(labels, self.differentials.clone())
            .expect("differential squares to zero")
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let names = |v: &[CellId]| v.iter().map(|c| cx.name(*c).to_string()).collect::<Vec<_>>();
        let basis: Vec<_> = self
            .basis
            .iter()
            .enumerate()
            .map(|(d, b)| json!({ "degree": d, "cells": names(b) }))
            .collect();
        let diffs: Vec<_> = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, m)| {
                json!({
                    "degree": k + 1,
                    "rows": names(&self.basis[k]),
                    "cols": names(&self.basis[k + 1]),
                    "matrix": m.to_rows(),
                })
            })
            .collect();
        json!({ "basis": basis, "differentials": diffs })
    }
}

/// Signed path counts from every i-cell to each critical i-cell, computed
/// by memoized recursion over the acyclic step relation.
struct PathSums<'a> {
    cx: &'a CellComplex,
    field: &'a GradientField,
    memo: HashMap<(CellId, CellId), i64>,
}

impl PathSums<'_> {
    /// `Σ_{γ ∈ Γ(from, to)} m(γ)`.
    fn get(&mut self, from: CellId, to: CellId) -> Result<i64> {
        if let Some(v) = self.memo.get(&(from, to)) {
            return Ok(*v);
        }
        let v = match self.field.get(from) {
            None => i64::from(from == to),
            Some((beta, _)) => {
                let mut total: i64 = 0;
                for &(next, _) in self.cx.facets(beta) {
                    if next == from {
                        continue;
                    }
                    let w = self.get(next, to)?;
                    let term = w * i64::from(step_factor(self.cx, beta, from, next));
                    total = total.checked_add(term).ok_or(Error::Overflow)?;
                }
                total
            }
        };
        self.memo.insert((from, to), v);
        Ok(v)
    }
}

/// Assembles `∂̃` and checks `∂̃ ∘ ∂̃ = 0`.
pub fn morse_differential(cx: &CellComplex, f: &MorseFunction) -> Result<MorseComplexData> {
    let report = critical_cells(cx, f)?;
    let field = field_from_report(cx, &report);
    morse_differential_from(cx, &report, &field)
}

pub fn morse_differential_from(
    cx: &CellComplex,
    report: &CriticalReport,
    field: &GradientField,
) -> Result<MorseComplexData> {
    let basis = report.critical.clone();
    let mut sums = PathSums {
        cx,
        field,
        memo: HashMap::new(),
    };
    let mut differentials = Vec::new();
    for i in 1..basis.len() {
        let rows = &basis[i - 1];
        let cols = &basis[i];
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (c, &beta) in cols.iter().enumerate() {
            for (r, &alpha) in rows.iter().enumerate() {
                let mut entry: i64 = 0;
                for &(abar, s) in cx.facets(beta) {
                    let w = sums.get(abar, alpha)?;
                    entry = entry.checked_add(i64::from(s) * w).ok_or(Error::Overflow)?;
                }
                m.set(r, c, entry);
            }
        }
        differentials.push(m);
    }
    for i in 1..differentials.len() {
        let prod = differentials[i - 1].mul(&differentials[i])?;
        if !prod.is_zero() {
            return Err(Error::DifferentialNotSquareZero { degree: i + 1 });
        }
    }
    Ok(MorseComplexData {
        basis,
        differentials,
    })
}

/// Same matrix as [`morse_differential`], by explicit path enumeration.
pub fn morse_differential_by_enumeration(
    cx: &CellComplex,
    f: &MorseFunction,
) -> Result<MorseComplexData> {
    let report = critical_cells(cx, f)?;
    let field = field_from_report(cx, &report);
    let basis = report.critical.clone();
    let mut differentials = Vec::new();
    for i in 1..basis.len() {
        let n = stable_length(cx, i - 1);
        let mut m = IntMatrix::zeros(basis[i - 1].len(), basis[i].len());
        for (c, &beta) in basis[i].iter().enumerate() {
            for (r, &alpha) in basis[i - 1].iter().enumerate() {
                let entry: i64 = cx
                    .facets(beta)
                    .iter()
                    .map(|&(abar, s)| {
                        let paths = enumerate_paths(cx, &field, abar, alpha, n);
                        i64::from(s) * paths.iter().map(|p| i64::from(p.sign)).sum::<i64>()
                    })
                    .sum();
                m.set(r, c, entry);
            }
        }
        differentials.push(m);
    }
    Ok(MorseComplexData {
        basis,
        differentials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;

    fn interval() -> (CellComplex, MorseFunction) {
        let cx = Builtin::Interval.build();
        let f = MorseFunction::from_pairs(&cx, &[("a", "0"), ("b", "1"), ("e", "1/2")]).unwrap();
        (cx, f)
    }

    #[test]
    fn interval_field() {
        let (cx, f) = interval();
        let v = gradient_field(&cx, &f).unwrap();
        let id = |n: &str| cx.id_of(n).unwrap();
        assert_eq!(v.get(id("b")), Some((id("e"), -1)));
        assert_eq!(v.get(id("a")), None);
        assert_eq!(v.get(id("e")), None);
    }

    #[test]
    fn trivial_function_has_zero_field() {
        let cx = Builtin::Torus7.build();
        assert!(gradient_field(&cx, &MorseFunction::trivial(&cx)).unwrap().is_zero());
    }

    #[test]
    fn interval_paths() {
        let (cx, f) = interval();
        let v = gradient_field(&cx, &f).unwrap();
        let a = cx.id_of("a").unwrap();
        let b = cx.id_of("b").unwrap();
        let n = stable_length(&cx, 0);
        let aa = enumerate_paths(&cx, &v, a, a, n);
        assert_eq!(aa.len(), 1);
        assert_eq!(aa[0].sign, 1);
        assert_eq!(aa[0].moving_part(), &[a]);
        let ba = enumerate_paths(&cx, &v, b, a, n);
        assert_eq!(ba.len(), 1);
        assert_eq!(ba[0].moving_part(), &[b, a]);
        assert_eq!(ba[0].sign, 1);
        assert_eq!(ba[0].cells.len(), n + 1);
        assert!(enumerate_paths(&cx, &v, a, b, n).is_empty());
    }

    #[test]
    fn interval_morse_complex() {
        let (cx, f) = interval();
        let m = morse_differential(&cx, &f).unwrap();
        assert_eq!(m.basis, vec![vec![cx.id_of("a").unwrap()], vec![]]);
        assert_eq!(m.differentials[0].rows(), 1);
        assert_eq!(m.differentials[0].cols(), 0);
    }

    #[test]
    fn trivial_function_recovers_boundary() {
        for b in Builtin::BATTERY {
            let cx = b.build();
            let m = morse_differential(&cx, &MorseFunction::trivial(&cx)).unwrap();
            for d in 1..=cx.dim() {
                assert_eq!(m.differential(d).unwrap(), &cx.incidence_matrix(d).entries, "{b} d{d}");
            }
        }
    }

    #[test]
    fn dot_lists_arrows() {
        let (cx, f) = interval();
        let dot = gradient_field(&cx, &f).unwrap().to_dot(&cx);
        assert!(dot.contains("\"b\" -> \"e\" [label=\"-\"]"));
    }
}
