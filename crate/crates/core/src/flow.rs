//! The PL gradient flow of f on X₁: critical vertices, trajectories
//! between them, the PL Morse complex, the reversed flow and
//! stable/unstable complexes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde_json::json;

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::gradient::MorseComplexData;
use crate::homology::IntegerChainComplex;
use crate::matrix::IntMatrix;
use crate::metric::{solve, Metric};
use crate::morse::{critical_cells, validate_tame, CriticalReport, MorseFunction};
use crate::subdivision::{flag_name, Flag, FlagSet, Subdivision};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Descent of f.
    Forward,
    /// Descent of −f, with vertex dimensions replaced by `dim X − dim`.
    Reversed,
}

/// A flow on X₁ together with the combinatorics it is read through. In the
/// reversed context facets and cofacets swap roles and incidence is
/// transposed.
#[derive(Clone, Debug)]
pub struct FlowContext<'a> {
    sd: &'a Subdivision<'a>,
    metric: Metric,
    report: CriticalReport,
    direction: Direction,
}

impl<'a> FlowContext<'a> {
    pub fn forward(sd: &'a Subdivision<'a>, metric: &Metric) -> Result<Self> {
        let cx = sd.base();
        let f = MorseFunction::from_values(sd.f_values().to_vec());
        let report = critical_cells(cx, &f)?;
        Ok(FlowContext {
            sd,
            metric: metric.clone(),
            report,
            direction: Direction::Forward,
        })
    }

    /// The same data driven by −f.
    pub fn reversed(&self) -> Self {
        FlowContext {
            direction: match self.direction {
                Direction::Forward => Direction::Reversed,
                Direction::Reversed => Direction::Forward,
            },
            ..self.clone()
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn subdivision(&self) -> &'a Subdivision<'a> {
        self.sd
    }

    pub fn base(&self) -> &'a CellComplex {
        self.sd.base()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn report(&self) -> &CriticalReport {
        &self.report
    }

    fn is_reversed(&self) -> bool {
        self.direction == Direction::Reversed
    }

    /// The value driving the flow at the vertex of `c`.
    pub fn value(&self, c: CellId) -> Rational {
        if self.is_reversed() {
            -self.sd.f(c)
        } else {
            self.sd.f(c).clone()
        }
    }

    /// Dimension of the vertex of `c` in this context.
    pub fn dim(&self, c: CellId) -> usize {
        let d = self.base().cell_dim(c);
        if self.is_reversed() {
            self.base().dim() - d
        } else {
            d
        }
    }

    pub fn top_dim(&self) -> usize {
        self.base().dim()
    }

    pub fn facets(&self, c: CellId) -> &'a [(CellId, i32)] {
        if self.is_reversed() {
            self.base().cofacets(c)
        } else {
            self.base().facets(c)
        }
    }

    pub fn cofacets(&self, c: CellId) -> &'a [(CellId, i32)] {
        if self.is_reversed() {
            self.base().facets(c)
        } else {
            self.base().cofacets(c)
        }
    }

    /// `⟨∂β, α⟩` in this context.
    pub fn incidence(&self, beta: CellId, alpha: CellId) -> i32 {
        if self.is_reversed() {
            self.base().incidence(alpha, beta)
        } else {
            self.base().incidence(beta, alpha)
        }
    }

    /// `c` together with all its faces in this context.
    pub fn closure(&self, c: CellId) -> Vec<CellId> {
        let cx = self.base();
        let mut out = vec![c];
        if self.is_reversed() {
            out.extend_from_slice(cx.cofaces(c));
        } else {
            out.extend_from_slice(cx.faces(c));
        }
        out
    }

    /// Critical vertices graded by dimension in this context.
    pub fn critical_vertices(&self) -> Vec<Vec<CellId>> {
        let mut out = vec![Vec::new(); self.top_dim() + 1];
        for c in self.report.all_critical() {
            out[self.dim(c)].push(c);
        }
        for v in &mut out {
            v.sort();
        }
        out
    }

    fn require_tame(&self) -> Result<()> {
        let cx = self.base();
        let f = MorseFunction::from_values(self.sd.f_values().to_vec());
        let bad = validate_tame(cx, &f);
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::NotTame(bad.len()))
        }
    }

    /// The unique adjacent higher-dimensional vertex below `s`, if any.
    fn lower_cofacet(&self, s: CellId) -> Option<CellId> {
        let vs = self.value(s);
        self.cofacets(s)
            .iter()
            .map(|(r, _)| *r)
            .find(|r| self.value(*r) < vs)
    }
}

/// Critical vertices of the forward flow, graded by dimension.
pub fn critical_vertices(sd: &Subdivision) -> Result<Vec<Vec<CellId>>> {
    let f = MorseFunction::from_values(sd.f_values().to_vec());
    let report = critical_cells(sd.base(), &f)?;
    let mut out = vec![Vec::new(); sd.dim() + 1];
    for c in report.all_critical() {
        out[sd.base().cell_dim(c)].push(c);
    }
    Ok(out)
}

pub fn reversed_flow<'a>(sd: &'a Subdivision<'a>, metric: &Metric) -> Result<FlowContext<'a>> {
    Ok(FlowContext::forward(sd, metric)?.reversed())
}

/// A PL trajectory between critical vertices, in canonical form
/// `p_0 -> q_0 -> p_1 -> q_1 -> ... -> p_r -> q_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLTrajectory {
    /// Dimension of the `q` vertices in the flow context.
    pub dim: usize,
    pub vertices: Vec<CellId>,
    pub sign: i32,
}

impl PLTrajectory {
    pub fn start(&self) -> CellId {
        self.vertices[0]
    }

    pub fn end(&self) -> CellId {
        *self.vertices.last().unwrap()
    }

    pub fn edges(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// `q_0, q_1, ..., q_r`: the cells of the matching discrete path.
    pub fn low_vertices(&self) -> Vec<CellId> {
        self.vertices.iter().skip(1).step_by(2).copied().collect()
    }

    /// `p_1, ..., p_r`: the cells crossed by the matching discrete path.
    pub fn high_vertices(&self) -> Vec<CellId> {
        self.vertices.iter().skip(2).step_by(2).copied().collect()
    }

    pub fn describe(&self, cx: &CellComplex) -> String {
        let names: Vec<&str> = self.vertices.iter().map(|c| cx.name(*c)).collect();
        format!("{} ({:+})", names.join(" -> "), self.sign)
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let names: Vec<&str> = self.vertices.iter().map(|c| cx.name(*c)).collect();
        json!({ "vertices": names, "sign": self.sign })
    }
}

/// Walks down from `p` along edges to adjacent vertices one dimension
/// lower, then to the unique lower adjacent vertex one dimension higher,
/// with f strictly decreasing. Returns the walks that stop at `q`.
pub fn pl_trajectories(ctx: &FlowContext, p: CellId, q: CellId) -> Result<Vec<PLTrajectory>> {
    ctx.require_tame()?;
    let cx = ctx.base();
    for c in [p, q] {
        if !ctx.report.is_critical(c) {
            return Err(Error::NotCritical(cx.name(c).to_string()));
        }
    }
    if ctx.dim(p) != ctx.dim(q) + 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut path = vec![p];
    descend(ctx, q, &mut path, &mut out);
    for t in &mut out {
        t.sign = pl_sign(ctx, t);
    }
    Ok(out)
}

fn descend(ctx: &FlowContext, q: CellId, path: &mut Vec<CellId>, out: &mut Vec<PLTrajectory>) {
    let r = *path.last().unwrap();
    let vr = ctx.value(r);
    for &(s, _) in ctx.facets(r) {
        if ctx.value(s) >= vr {
            continue;
        }
        path.push(s);
        match ctx.lower_cofacet(s) {
            Some(next) => {
                path.push(next);
                descend(ctx, q, path, out);
                path.pop();
            }
            None if s == q => out.push(PLTrajectory {
                dim: ctx.dim(q),
                vertices: path.clone(),
                sign: 0,
            }),
            None => {}
        }
        path.pop();
    }
}

/// Orientation propagated from `+p`: across `p -> q` the boundary
/// orientation `⟨∂p, q⟩`, across `q -> p'` the orientation of `p'` making
/// `⟨∂p', q⟩ = −1`.
pub fn pl_sign(ctx: &FlowContext, t: &PLTrajectory) -> i32 {
    propagate(t, |b, a| ctx.incidence(b, a))
}

fn propagate(t: &PLTrajectory, incidence: impl Fn(CellId, CellId) -> i32) -> i32 {
    let v = &t.vertices;
    let mut eps = 1;
    for l in (1..v.len()).step_by(2) {
        let (p, s) = (v[l - 1], v[l]);
        if l > 1 {
            eps = -eps * incidence(p, v[l - 2]);
        }
        eps *= incidence(p, s);
    }
    eps
}

/// The standard full flag `w_0 < ... < w_k = c`, choosing the smallest
/// facet at each step.
pub fn standard_flag(cx: &CellComplex, c: CellId) -> Flag {
    let mut flag = vec![c];
    let mut cur = c;
    while let Some(&(next, _)) = cx.facets(cur).iter().min_by_key(|(a, _)| *a) {
        flag.push(next);
        cur = next;
    }
    flag.reverse();
    flag
}

/// Coefficient of the full flag `w_0 < ... < w_k` in the barycentric
/// subdivision chain of `w_k`, with simplices oriented by increasing
/// dimension.
pub fn flag_coefficient(cx: &CellComplex, flag: &[CellId]) -> i32 {
    (1..flag.len())
        .map(|j| {
            let s = cx.incidence(flag[j], flag[j - 1]);
            if j % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .product()
}

fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut d = Rational::from_integer(1.into());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(k, p);
            d = -d;
        }
        d *= a[k][k].clone();
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let x = &factor * &a[k][j];
                a[i][j] -= x;
            }
        }
    }
    d
}

/// `⟨∂β, α⟩` recovered from the metric: the interior product of the
/// outward normal of `β`'s subdivision at `α` with the orientation of `β`,
/// compared against the orientation of `α`.
pub fn geometric_incidence(sd: &Subdivision, metric: &Metric, beta: CellId, alpha: CellId) -> Result<i32> {
    let cx = sd.base();
    let tau = standard_flag(cx, alpha);
    let mut sigma = tau.clone();
    sigma.push(beta);
    let k = tau.len() - 1;
    let g = metric.gram(&sigma);
    // outward normal n = −(e_top − projection onto the facet)
    let rhs: Vec<Rational> = (0..k).map(|j| g[j][k].clone()).collect();
    let sub: Vec<Vec<Rational>> = (0..k).map(|i| g[i][..k].to_vec()).collect();
    let proj = if k == 0 { Vec::new() } else { solve(&sub, &rhs)? };
    let mut n: Vec<Rational> = proj.clone();
    n.push(Rational::from_integer((-1).into()));
    let inner = |u: &[Rational], w: &[Rational]| -> Rational {
        let mut s = Rational::zero();
        for i in 0..u.len() {
            for j in 0..w.len() {
                s += &u[i] * &g[i][j] * &w[j];
            }
        }
        s
    };
    let e_top: Vec<Rational> = (0..=k).map(|j| Rational::from_integer(i64::from(j == k).into())).collect();
    if !inner(&n, &e_top).is_negative() {
        return Err(Error::Metric("normal does not point out of the simplex".into()));
    }
    // columns: n, then the facet's edge vectors
    let mut m = vec![vec![Rational::zero(); k + 1]; k + 1];
    for row in 0..=k {
        m[row][0] = n[row].clone();
        for col in 1..=k {
            m[row][col] = Rational::from_integer(i64::from(row == col - 1).into());
        }
    }
    let s_geom = if det(m).is_positive() { 1 } else { -1 };
    Ok(s_geom * flag_coefficient(cx, &sigma) * flag_coefficient(cx, &tau))
}

/// [`pl_sign`] with every incidence recomputed geometrically. Forward flow
/// only.
pub fn pl_sign_geometric(ctx: &FlowContext, t: &PLTrajectory) -> Result<i32> {
    if ctx.is_reversed() {
        return Err(Error::Metric("geometric signs are computed for the forward flow".into()));
    }
    let mut cache = HashMap::new();
    let v = &t.vertices;
    for l in 1..v.len() {
        let (hi, lo) = if l % 2 == 1 { (v[l - 1], v[l]) } else { (v[l], v[l - 1]) };
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry((hi, lo)) {
            e.insert(geometric_incidence(ctx.sd, &ctx.metric, hi, lo)?);
        }
    }
    Ok(propagate(t, |b, a| cache[&(b, a)]))
}

/// The PL Morse complex: critical vertices graded in the flow context and
/// `d_PL` assembled from signed trajectory counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMorseComplexData {
    pub direction: Direction,
    pub basis: Vec<Vec<CellId>>,
    /// `differentials[i - 1]` maps degree i to degree i − 1.
    pub differentials: Vec<IntMatrix>,
    pub trajectory_count: usize,
}

impl PLMorseComplexData {
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

    /// Entry-wise comparison with `∂̃` under the identification of critical
    /// vertices with critical cells.
    pub fn check_against(&self, cx: &CellComplex, morse: &MorseComplexData) -> Result<()> {
        if self.basis != morse.basis {
            return Err(Error::Shape("critical vertices differ from critical cells".into()));
        }
        for (k, (a, b)) in self.differentials.iter().zip(&morse.differentials).enumerate() {
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    if a.get(r, c) != b.get(r, c) {
                        return Err(Error::MatrixMismatch {
                            degree: k + 1,
                            row: cx.name(self.basis[k][r]).to_string(),
                            col: cx.name(self.basis[k + 1][c]).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let names = |v: &[CellId]| v.iter().map(|c| cx.name(*c).to_string()).collect::<Vec<_>>();
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
        json!({
            "direction": format!("{:?}", self.direction).to_lowercase(),
            "basis": self.basis.iter().map(|b| names(b)).collect::<Vec<_>>(),
            "differentials": diffs,
            "trajectories": self.trajectory_count,
        })
    }
}

pub fn pl_differential(ctx: &FlowContext) -> Result<PLMorseComplexData> {
    ctx.require_tame()?;
    let basis = ctx.critical_vertices();
    let mut differentials = Vec::new();
    let mut count = 0;
    for i in 1..basis.len() {
        let mut m = IntMatrix::zeros(basis[i - 1].len(), basis[i].len());
        for (c, &p) in basis[i].iter().enumerate() {
            for (r, &q) in basis[i - 1].iter().enumerate() {
                let ts = pl_trajectories(ctx, p, q)?;
                count += ts.len();
                m.set(r, c, ts.iter().map(|t| i64::from(t.sign)).sum());
            }
        }
        differentials.push(m);
    }
    for i in 1..differentials.len() {
        if !differentials[i - 1].mul(&differentials[i])?.is_zero() {
            return Err(Error::DifferentialNotSquareZero { degree: i + 1 });
        }
    }
    Ok(PLMorseComplexData {
        direction: ctx.direction(),
        basis,
        differentials,
        trajectory_count: count,
    })
}

/// Graphviz overlay of trajectories on the 1-skeleton of X₁.
pub fn trajectories_to_dot(sd: &Subdivision, ts: &[PLTrajectory]) -> String {
    let cx = sd.base();
    let used: BTreeSet<(CellId, CellId)> = ts
        .iter()
        .flat_map(|t| t.edges().map(|(a, b)| if a < b { (a, b) } else { (b, a) }))
        .collect();
    let mut s = String::from("graph trajectories {\n");
    for e in sd.simplices_of_dim(1) {
        let key = if e[0] < e[1] { (e[0], e[1]) } else { (e[1], e[0]) };
        let style = if used.contains(&key) { " [color=red, penwidth=2]" } else { " [color=gray]" };
        let _ = writeln!(s, "  \"{}\" -- \"{}\"{};", cx.name(e[0]), cx.name(e[1]), style);
    }
    s.push_str("}\n");
    s
}

/// Cells swept by the flow out of a critical vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweptComplex {
    pub origin: CellId,
    pub direction: Direction,
    /// Cells of X whose closures (in the flow context) make up the set.
    pub cells: Vec<CellId>,
    /// The same set as simplices of X₁.
    pub subdivision: FlagSet,
    /// Vertices of X₁ reachable from the origin along strictly descending
    /// edges: an outer bound for the swept set.
    pub reachable: Vec<CellId>,
}

impl SweptComplex {
    /// Reachable vertices outside the recursion's output.
    pub fn reach_excess(&self) -> Vec<CellId> {
        let cells: BTreeSet<CellId> = self.cells.iter().copied().collect();
        self.reachable.iter().copied().filter(|c| !cells.contains(c)).collect()
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let names = |v: &[CellId]| v.iter().map(|c| cx.name(*c).to_string()).collect::<Vec<_>>();
        json!({
            "origin": cx.name(self.origin),
            "direction": format!("{:?}", self.direction).to_lowercase(),
            "method": "proof-closure",
            "cells": names(&self.cells),
            "subdivision_counts": self.subdivision.counts(),
            "reachable": names(&self.reachable),
            "reach_excess": names(&self.reach_excess()),
        })
    }
}

struct Sweep<'c, 'a> {
    ctx: &'c FlowContext<'a>,
    memo: HashMap<CellId, BTreeSet<CellId>>,
}

impl Sweep<'_, '_> {
    fn traj(&mut self, b: CellId) -> BTreeSet<CellId> {
        if let Some(s) = self.memo.get(&b) {
            return s.clone();
        }
        let ctx = self.ctx;
        let fb = ctx.value(b);
        let mut out: BTreeSet<CellId> = BTreeSet::new();
        let high_facet = ctx.facets(b).iter().map(|(c, _)| *c).find(|c| ctx.value(*c) > fb);
        if let Some(c) = high_facet {
            // b is swept along with its exceptional facet
            out = self.traj(c);
        } else if let Some(d) = ctx.lower_cofacet(b) {
            out.extend(ctx.closure(b));
            out.extend(ctx.closure(d));
            for &(e, _) in ctx.facets(d) {
                if e != b {
                    assert!(ctx.value(e) < ctx.value(d), "sweep recursion must descend");
                    out.extend(self.traj(e));
                }
            }
        } else {
            out.extend(ctx.closure(b));
            for &(a, _) in ctx.facets(b) {
                out.extend(self.traj(a));
            }
        }
        self.memo.insert(b, out.clone());
        out
    }
}

fn descending_reach(ctx: &FlowContext, p: CellId) -> Vec<CellId> {
    let cx = ctx.base();
    let mut seen = BTreeSet::from([p]);
    let mut stack = vec![p];
    while let Some(u) = stack.pop() {
        let vu = ctx.value(u);
        for &w in cx.faces(u).iter().chain(cx.cofaces(u)) {
            if ctx.value(w) < vu && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.into_iter().collect()
}

/// The union of trajectories leaving the critical vertex `p`, computed by
/// recursion over the cells of X.
pub fn unstable_complex(ctx: &FlowContext, p: CellId) -> Result<SweptComplex> {
    ctx.require_tame()?;
    let cx = ctx.base();
    if !ctx.report.is_critical(p) {
        return Err(Error::NotCritical(cx.name(p).to_string()));
    }
    let mut sweep = Sweep {
        ctx,
        memo: HashMap::new(),
    };
    let cells = sweep.traj(p);
    let subdivision = FlagSet::new(
        ctx.sd
            .simplices()
            .iter()
            .filter(|s| s.iter().all(|c| cells.contains(c)))
            .cloned(),
    );
    Ok(SweptComplex {
        origin: p,
        direction: ctx.direction(),
        cells: cells.into_iter().collect(),
        subdivision,
        reachable: descending_reach(ctx, p),
    })
}

/// The unstable complex of `p` for the reversed flow.
pub fn stable_complex(ctx: &FlowContext, p: CellId) -> Result<SweptComplex> {
    unstable_complex(&ctx.reversed(), p)
}

/// Trajectory counts per critical pair, for reports.
pub fn trajectory_table(ctx: &FlowContext) -> Result<BTreeMap<(CellId, CellId), Vec<PLTrajectory>>> {
    let basis = ctx.critical_vertices();
    let mut out = BTreeMap::new();
    for i in 1..basis.len() {
        for &p in &basis[i] {
            for &q in &basis[i - 1] {
                out.insert((p, q), pl_trajectories(ctx, p, q)?);
            }
        }
    }
    Ok(out)
}

pub fn swept_name(cx: &CellComplex, s: &SweptComplex) -> String {
    format!(
        "{} of {}",
        match s.direction {
            Direction::Forward => "unstable complex",
            Direction::Reversed => "stable complex",
        },
        cx.name(s.origin)
    )
}

pub fn flags_to_names(cx: &CellComplex, flags: &FlagSet) -> Vec<String> {
    flags.flags().iter().map(|f| flag_name(cx, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;
    use crate::complex::simplicial_from_vertex_lists;
    use crate::subdivision::barycentric_subdivide;

    fn circle() -> (CellComplex, MorseFunction) {
        let cx = Builtin::Circle3.build();
        let f = MorseFunction::from_pairs(
            &cx,
            &[("v0", "0"), ("v1", "2"), ("v2", "4"), ("e01", "1"), ("e12", "3"), ("e02", "5")],
        )
        .unwrap();
        (cx, f)
    }

    #[test]
    fn circle_trajectories() {
        let (cx, f) = circle();
        let sd = barycentric_subdivide(&cx, &f);
        let ctx = FlowContext::forward(&sd, &Metric::equilateral()).unwrap();
        let id = |n: &str| cx.id_of(n).unwrap();
        assert_eq!(ctx.critical_vertices(), vec![vec![id("v0")], vec![id("e02")]]);
        let ts = pl_trajectories(&ctx, id("e02"), id("v0")).unwrap();
        assert_eq!(ts.len(), 2);
        let mut signs: Vec<i32> = ts.iter().map(|t| t.sign).collect();
        signs.sort();
        assert_eq!(signs, vec![-1, 1]);
        let long = ts.iter().find(|t| t.vertices.len() > 2).unwrap();
        assert_eq!(
            long.vertices,
            vec![id("e02"), id("v2"), id("e12"), id("v1"), id("e01"), id("v0")]
        );
        for t in &ts {
            assert_eq!(pl_sign_geometric(&ctx, t).unwrap(), t.sign);
        }
        let d = pl_differential(&ctx).unwrap();
        assert_eq!(d.differentials[0].to_rows(), vec![vec![0]]);
    }

    #[test]
    fn interval_trivial_function_one_trajectory() {
        let cx = Builtin::Interval.build();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let ctx = FlowContext::forward(&sd, &Metric::equilateral()).unwrap();
        let id = |n: &str| cx.id_of(n).unwrap();
        let ts = pl_trajectories(&ctx, id("e"), id("a")).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].vertices, vec![id("e"), id("a")]);
        assert_eq!(ts[0].sign, -1);
        assert_eq!(pl_sign_geometric(&ctx, &ts[0]).unwrap(), -1);
    }

    #[test]
    fn non_critical_endpoint_rejected() {
        let cx = Builtin::Interval.build();
        let f = MorseFunction::from_pairs(&cx, &[("a", "0"), ("b", "1"), ("e", "1/2")]).unwrap();
        let sd = barycentric_subdivide(&cx, &f);
        let ctx = FlowContext::forward(&sd, &Metric::equilateral()).unwrap();
        let (a, e) = (cx.id_of("a").unwrap(), cx.id_of("e").unwrap());
        assert!(matches!(pl_trajectories(&ctx, e, a), Err(Error::NotCritical(_))));
        let swept = unstable_complex(&ctx, a).unwrap();
        assert_eq!(swept.cells, vec![a]);
        let stable = stable_complex(&ctx, a).unwrap();
        assert_eq!(stable.subdivision, sd.all());
    }

    #[test]
    fn non_tame_refused() {
        let cx = simplicial_from_vertex_lists(&[vec![0, 1, 2]]).unwrap();
        let f = MorseFunction::from_pairs(
            &cx,
            &[
                ("v0", "5"),
                ("v1", "1/5"),
                ("v2", "2/5"),
                ("e01", "3/5"),
                ("e02", "6"),
                ("e12", "4/5"),
                ("t012", "1"),
            ],
        )
        .unwrap();
        let sd = barycentric_subdivide(&cx, &f);
        let ctx = FlowContext::forward(&sd, &Metric::equilateral()).unwrap();
        assert!(matches!(pl_differential(&ctx), Err(Error::NotTame(1))));
    }

    #[test]
    fn solid_triangle_unstable_complex() {
        let cx = simplicial_from_vertex_lists(&[vec![0, 1, 2]]).unwrap();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let ctx = FlowContext::forward(&sd, &Metric::equilateral()).unwrap();
        let t = cx.id_of("t012").unwrap();
        let swept = unstable_complex(&ctx, t).unwrap();
        assert_eq!(swept.cells.len(), cx.len());
        assert_eq!(swept.subdivision, sd.all());
    }

    #[test]
    fn circle_unstable_complex_is_whole_circle() {
        let (cx, f) = circle();
        let sd = barycentric_subdivide(&cx, &f);
        let ctx = FlowContext::forward(&sd, &Metric::equilateral()).unwrap();
        let swept = unstable_complex(&ctx, cx.id_of("e02").unwrap()).unwrap();
        assert_eq!(swept.cells.len(), 6);
        assert!(swept.reach_excess().is_empty());
    }

    #[test]
    fn flag_coefficients_give_a_chain_map() {
        let cx = Builtin::Interval.build();
        let id = |n: &str| cx.id_of(n).unwrap();
        assert_eq!(flag_coefficient(&cx, &[id("a"), id("e")]), 1);
        assert_eq!(flag_coefficient(&cx, &[id("b"), id("e")]), -1);
    }
}
