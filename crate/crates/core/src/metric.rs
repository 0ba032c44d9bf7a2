//! Piecewise affine metrics on X₁, exact gradients of f, and the in/out
//! flow classification of facets.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::morse::parse_rational;
use crate::subdivision::{flag_name, parse_flag, Flag, Subdivision};
use crate::Rational;

pub type RatMatrix = Vec<Vec<Rational>>;

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// An affine metric on X₁, stored as squared edge lengths between
/// barycenters. Unlisted edges have length 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metric {
    lengths: HashMap<(CellId, CellId), Rational>,
}

impl Metric {
    /// Unit edges everywhere: every simplex is regular.
    pub fn equilateral() -> Self {
        Metric::default()
    }

    pub fn is_equilateral(&self) -> bool {
        self.lengths.values().all(|l| *l == rat(1))
    }

    /// Squared length of the edge between the barycenters of `a` and `b`.
    pub fn length2(&self, a: CellId, b: CellId) -> Rational {
        let key = if a < b { (a, b) } else { (b, a) };
        self.lengths.get(&key).cloned().unwrap_or_else(|| rat(1))
    }

    /// Gram matrix of `e_i = v_i - v_0` on the simplex `flag`.
    pub fn gram(&self, flag: &[CellId]) -> RatMatrix {
        let k = flag.len() - 1;
        let mut g = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let a = self.length2(flag[0], flag[i + 1]);
                let b = self.length2(flag[0], flag[j + 1]);
                let c = if i == j {
                    Rational::zero()
                } else {
                    self.length2(flag[i + 1], flag[j + 1])
                };
                g[i][j] = (a + b - c) / rat(2);
            }
        }
        g
    }

    /// Builds a metric from Gram matrices on maximal simplices. Edge lengths
    /// shared between simplices must agree, and every maximal simplex must
    /// end up positive definite.
    pub fn from_grams(sd: &Subdivision, grams: &BTreeMap<Flag, RatMatrix>) -> Result<Self> {
        let cx = sd.base();
        let maximal: Vec<&Flag> = sd.maximal_simplices();
        let mut lengths: HashMap<(CellId, CellId), Rational> = HashMap::new();
        for (flag, g) in grams {
            if !maximal.contains(&flag) {
                return Err(Error::Metric(format!(
                    "`{}` is not a maximal simplex",
                    flag_name(cx, flag)
                )));
            }
            let k = flag.len() - 1;
            if g.len() != k || g.iter().any(|r| r.len() != k) {
                return Err(Error::Metric(format!(
                    "Gram matrix for `{}` must be {k}x{k}",
                    flag_name(cx, flag)
                )));
            }
            for i in 0..k {
                for j in 0..k {
                    if g[i][j] != g[j][i] {
                        return Err(Error::Metric(format!(
                            "Gram matrix for `{}` is not symmetric",
                            flag_name(cx, flag)
                        )));
                    }
                }
            }
            if !positive_definite(g) {
                return Err(Error::NotPositiveDefinite);
            }
            let mut put = |a: CellId, b: CellId, l: Rational| -> Result<()> {
                let key = if a < b { (a, b) } else { (b, a) };
                match lengths.get(&key) {
                    Some(old) if *old != l => Err(Error::Metric(format!(
                        "edge {}-{} has squared lengths {old} and {l}",
                        cx.name(a),
                        cx.name(b)
                    ))),
                    _ => {
                        lengths.insert(key, l);
                        Ok(())
                    }
                }
            };
            for i in 0..k {
                put(flag[0], flag[i + 1], g[i][i].clone())?;
                for j in i + 1..k {
                    let l = &g[i][i] + &g[j][j] - &g[i][j] * rat(2);
                    put(flag[i + 1], flag[j + 1], l)?;
                }
            }
        }
        let metric = Metric { lengths };
        for flag in maximal {
            if flag.len() > 1 && !positive_definite(&metric.gram(flag)) {
                return Err(Error::Metric(format!(
                    "induced Gram matrix on `{}` is not positive definite",
                    flag_name(cx, flag)
                )));
            }
        }
        Ok(metric)
    }

    /// Parses `{"default":"equilateral"}` or `{"grams":{"a<e":[["1"]]}}`.
    pub fn from_json(sd: &Subdivision, text: &str) -> Result<Self> {
        let file: MetricFile = serde_json::from_str(text)?;
        match (file.default.as_deref(), file.grams) {
            (Some("equilateral"), None) => Ok(Metric::equilateral()),
            (None, Some(grams)) => {
                let cx = sd.base();
                let parsed = grams
                    .into_iter()
                    .map(|(k, rows)| {
                        let g = rows
                            .iter()
                            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
                            .collect::<Result<RatMatrix>>()?;
                        Ok((parse_flag(cx, &k)?, g))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Metric::from_grams(sd, &parsed)
            }
            _ => Err(Error::Metric(
                "expected {\"default\":\"equilateral\"} or {\"grams\":{...}}".into(),
            )),
        }
    }

    pub fn metric_simplex(&self, sd: &Subdivision, flag: &[CellId]) -> MetricSimplex {
        let f0 = sd.f(flag[0]);
        MetricSimplex {
            simplex: flag.to_vec(),
            gram: self.gram(flag),
            f_diffs: flag[1..].iter().map(|c| sd.f(*c) - f0).collect(),
        }
    }
}

#[derive(Deserialize)]
struct MetricFile {
    default: Option<String>,
    grams: Option<BTreeMap<String, Vec<Vec<String>>>>,
}

/// One simplex `v_0 < ... < v_k` of X₁ with its metric and the values of
/// f relative to `v_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSimplex {
    pub simplex: Flag,
    pub gram: RatMatrix,
    pub f_diffs: Vec<Rational>,
}

impl MetricSimplex {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// `<u, w>` for edge-coordinate vectors.
    pub fn inner(&self, u: &[Rational], w: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..u.len() {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..w.len() {
                s += &u[i] * &self.gram[i][j] * &w[j];
            }
        }
        s
    }
}

/// Sylvester-style test by exact elimination without pivoting.
pub fn positive_definite(g: &RatMatrix) -> bool {
    let n = g.len();
    let mut a = g.clone();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let factor = &a[i][k] / &a[k][k];
            for j in k..n {
                let d = &factor * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    true
}

/// Solves `g x = b` exactly.
pub fn solve(g: &RatMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = g.len();
    let mut a: Vec<Vec<Rational>> = g
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::SingularGram)?;
        a.swap(k, p);
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &a[k][k];
            for j in k..=n {
                let d = &factor * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    Ok((0..n).map(|i| &a[i][n] / &a[i][i]).collect())
}

/// Steepest descent direction `d = −G⁻¹ f_diffs` in edge coordinates.
pub fn simplex_gradient(ms: &MetricSimplex) -> Result<Vec<Rational>> {
    let neg: Vec<Rational> = ms.f_diffs.iter().map(|x| -x).collect();
    solve(&ms.gram, &neg)
}

/// Rates of change of the barycentric coordinates of `v_0, ..., v_k` when
/// moving along `d`.
pub fn barycentric_velocity(d: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(d.len() + 1);
    out.push(-d.iter().sum::<Rational>());
    out.extend(d.iter().cloned());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowTag {
    InFlow,
    OutFlow,
}

impl FlowTag {
    pub fn flip(self) -> Self {
        match self {
            FlowTag::InFlow => FlowTag::OutFlow,
            FlowTag::OutFlow => FlowTag::InFlow,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexFlow {
    pub simplex: Flag,
    /// `tags[k]` classifies the facet opposite `simplex[k]`.
    pub tags: Vec<FlowTag>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowClassification {
    pub entries: Vec<SimplexFlow>,
}

impl FlowClassification {
    pub fn facet_pairs(&self) -> impl Iterator<Item = (&Flag, usize, FlowTag)> + '_ {
        self.entries
            .iter()
            .flat_map(|e| e.tags.iter().enumerate().map(move |(k, t)| (&e.simplex, k, *t)))
    }

    pub fn count(&self, tag: FlowTag) -> usize {
        self.facet_pairs().filter(|(_, _, t)| *t == tag).count()
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let entries: Vec<_> = self
            .facet_pairs()
            .map(|(s, k, t)| {
                let mut facet = s.clone();
                facet.remove(k);
                serde_json::json!({
                    "simplex": flag_name(cx, s),
                    "facet": flag_name(cx, &facet),
                    "tag": t,
                })
            })
            .collect();
        serde_json::json!({
            "in_flow": self.count(FlowTag::InFlow),
            "out_flow": self.count(FlowTag::OutFlow),
            "facets": entries,
        })
    }

    /// Arrows from each out-flow facet into its simplex.
    pub fn to_dot(&self, cx: &CellComplex) -> String {
        let mut s = String::from("digraph flows {\n");
        for (simplex, k, t) in self.facet_pairs() {
            if t == FlowTag::OutFlow {
                let mut facet = simplex.clone();
                facet.remove(k);
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\";",
                    flag_name(cx, &facet),
                    flag_name(cx, simplex)
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Tags the facet opposite `v_k` as out-flow when the descent direction
/// increases the barycentric coordinate of `v_k`.
pub fn classify_simplex(sd: &Subdivision, metric: &Metric, flag: &[CellId]) -> Result<SimplexFlow> {
    let d = simplex_gradient(&metric.metric_simplex(sd, flag))?;
    let vel = barycentric_velocity(&d);
    let tags = vel
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if v.is_positive() {
                Ok(FlowTag::OutFlow)
            } else if v.is_negative() {
                Ok(FlowTag::InFlow)
            } else {
                Err(Error::DegenerateDirection {
                    simplex: flag_name(sd.base(), flag),
                    vertex: sd.base().name(flag[k]).to_string(),
                })
            }
        })
        .collect::<Result<_>>()?;
    Ok(SimplexFlow {
        simplex: flag.to_vec(),
        tags,
    })
}

/// Classifies every (simplex, facet) pair of X₁ in dimension at least 1.
pub fn classify_flows(sd: &Subdivision, metric: &Metric) -> Result<FlowClassification> {
    let entries = sd
        .simplices()
        .iter()
        .filter(|s| s.len() > 1)
        .map(|s| classify_simplex(sd, metric, s))
        .collect::<Result<_>>()?;
    Ok(FlowClassification { entries })
}

/// A point of X₁: its carrier simplex and positive barycentric coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub carrier: Flag,
    pub coords: Vec<Rational>,
}

impl Point {
    pub fn vertex(c: CellId) -> Self {
        Point {
            carrier: vec![c],
            coords: vec![rat(1)],
        }
    }

    pub fn barycenter(flag: &[CellId]) -> Self {
        let n = rat(flag.len() as i64);
        Point {
            carrier: flag.to_vec(),
            coords: vec![rat(1) / n; flag.len()],
        }
    }

    pub fn validate(&self, sd: &Subdivision) -> Result<()> {
        if !sd.contains(&self.carrier) {
            return Err(Error::BadPoint("carrier is not a simplex of X₁".into()));
        }
        if self.coords.len() != self.carrier.len() {
            return Err(Error::BadPoint("one coordinate per carrier vertex".into()));
        }
        if self.coords.iter().any(|c| !c.is_positive()) {
            return Err(Error::BadPoint("coordinates must be positive".into()));
        }
        if self.coords.iter().sum::<Rational>() != rat(1) {
            return Err(Error::BadPoint("coordinates must sum to 1".into()));
        }
        Ok(())
    }
}

/// The descent direction in one simplex of the star of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarDirection {
    pub simplex: Flag,
    pub direction: Vec<Rational>,
    /// The same direction as barycentric rates, keyed by vertex.
    pub velocity: BTreeMap<CellId, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientVectorSet {
    pub point: Point,
    pub directions: Vec<StarDirection>,
}

impl GradientVectorSet {
    /// Directions are distinct as tangent vectors: two directions from
    /// nested simplices agree only if their barycentric rates agree.
    pub fn all_distinct(&self) -> bool {
        let vs: Vec<_> = self.directions.iter().map(|d| &d.velocity).collect();
        (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| vs[i] != vs[j]))
    }
}

/// One descent direction per simplex of X₁ containing the carrier of `x`.
pub fn gradient_vector_set(
    sd: &Subdivision,
    metric: &Metric,
    x: &Point,
) -> Result<GradientVectorSet> {
    x.validate(sd)?;
    let mut directions = Vec::new();
    for s in sd.star(&x.carrier) {
        if s.len() == 1 {
            // a vertex has no tangent directions of its own
            continue;
        }
        let d = simplex_gradient(&metric.metric_simplex(sd, s))?;
        let velocity = s
            .iter()
            .copied()
            .zip(barycentric_velocity(&d))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        directions.push(StarDirection {
            simplex: s.clone(),
            direction: d,
            velocity,
        });
    }
    Ok(GradientVectorSet {
        point: x.clone(),
        directions,
    })
}

/// Which 2-plane sections the sharpness audit samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionFamily {
    /// Apex `a` a vertex; `b` and `c` on the faces spanned by a random split
    /// of the vertices opposite `a`.
    SplitFaces,
    /// Apex `a` a vertex; `b` and `c` arbitrary points of the opposite face.
    Chords,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessFailure {
    pub simplex: Flag,
    pub apex: usize,
    /// Barycentric coordinates of the section's other two corners.
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    /// Corner (0 = a, 1 = b, 2 = c) where the angle is not acute.
    pub corner: usize,
    pub dot: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessReport {
    pub family: SectionFamily,
    pub simplices: usize,
    pub sections: usize,
    pub failures: Vec<SharpnessFailure>,
}

impl SharpnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let failures: Vec<_> = self
            .failures
            .iter()
            .map(|f| {
                serde_json::json!({
                    "simplex": flag_name(cx, &f.simplex),
                    "apex": f.apex,
                    "b": f.b.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "c": f.c.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "corner": f.corner,
                    "dot": f.dot.to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "family": self.family,
            "simplices": self.simplices,
            "sections": self.sections,
            "passed": self.passed(),
            "failures": failures,
        })
    }
}

fn random_weights(rng: &mut ChaCha8Rng, support: &[usize], n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = support.iter().map(|_| rng.gen_range(1..=100)).collect();
    let total: i64 = raw.iter().sum();
    let mut out = vec![Rational::zero(); n];
    for (k, w) in support.iter().zip(raw) {
        out[*k] = Rational::new(w.into(), total.into());
    }
    out
}

// Edge-coordinate vector from barycentric point p to q.
fn displacement(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    (1..p.len()).map(|i| &q[i] - &p[i]).collect()
}

/// Samples `samples` triangular 2-plane sections, each through a random
/// vertex of a random simplex of dimension at least 2, and checks that all
/// three angles are acute.
pub fn audit_sharpness(
    simplices: &[MetricSimplex],
    samples: usize,
    seed: u64,
    family: SectionFamily,
) -> SharpnessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eligible: Vec<&MetricSimplex> = simplices.iter().filter(|m| m.dim() >= 2).collect();
    let mut sections = 0;
    let mut failures = Vec::new();
    if eligible.is_empty() {
        return SharpnessReport {
            family,
            simplices: 0,
            sections,
            failures,
        };
    }
    while sections < samples {
        let ms = eligible[rng.gen_range(0..eligible.len())];
        let n = ms.dim() + 1;
        let apex = rng.gen_range(0..n);
        let others: Vec<usize> = (0..n).filter(|v| *v != apex).collect();
        let (b, c) = match family {
            SectionFamily::SplitFaces => {
                let mut shuffled = others.clone();
                shuffled.shuffle(&mut rng);
                let cut = rng.gen_range(1..shuffled.len());
                (
                    random_weights(&mut rng, &shuffled[..cut], n),
                    random_weights(&mut rng, &shuffled[cut..], n),
                )
            }
            SectionFamily::Chords => (
                random_weights(&mut rng, &others, n),
                random_weights(&mut rng, &others, n),
            ),
        };
        if b == c {
            continue;
        }
        sections += 1;
        let mut a = vec![Rational::zero(); n];
        a[apex] = rat(1);
        let corners = [&a, &b, &c];
        for corner in 0..3 {
            let p = corners[corner];
            let u = displacement(p, corners[(corner + 1) % 3]);
            let w = displacement(p, corners[(corner + 2) % 3]);
            let dot = ms.inner(&u, &w);
            if !dot.is_positive() {
                failures.push(SharpnessFailure {
                    simplex: ms.simplex.clone(),
                    apex,
                    b: b.clone(),
                    c: c.clone(),
                    corner,
                    dot,
                });
                break;
            }
        }
    }
    SharpnessReport {
        family,
        simplices: eligible.len(),
        sections,
        failures,
    }
}

/// Audits every maximal simplex of X₁ under `metric`.
pub fn audit_metric(
    sd: &Subdivision,
    metric: &Metric,
    samples: usize,
    seed: u64,
    family: SectionFamily,
) -> SharpnessReport {
    let simplices: Vec<MetricSimplex> = sd
        .maximal_simplices()
        .into_iter()
        .map(|s| metric.metric_simplex(sd, s))
        .collect();
    audit_sharpness(&simplices, samples, seed, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::Builtin;
    use crate::morse::MorseFunction;
    use crate::subdivision::barycentric_subdivide;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn ms(gram: &[&[&str]], f_diffs: &[&str]) -> MetricSimplex {
        MetricSimplex {
            simplex: (0..=gram.len()).map(CellId).collect(),
            gram: gram.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect(),
            f_diffs: f_diffs.iter().map(|s| q(s)).collect(),
        }
    }

    #[test]
    fn gradients_by_hand() {
        assert_eq!(simplex_gradient(&ms(&[&["1"]], &["1"])).unwrap(), vec![q("-1")]);
        let tri = ms(&[&["1", "1/2"], &["1/2", "1"]], &["1", "1"]);
        assert_eq!(simplex_gradient(&tri).unwrap(), vec![q("-2/3"), q("-2/3")]);
        let flat = ms(&[&["1", "1/2"], &["1/2", "1"]], &["0", "0"]);
        assert_eq!(simplex_gradient(&flat).unwrap(), vec![q("0"), q("0")]);
        assert!(matches!(
            simplex_gradient(&ms(&[&["1", "1"], &["1", "1"]], &["1", "0"])),
            Err(Error::SingularGram)
        ));
    }

    #[test]
    fn equilateral_gram() {
        let g = Metric::equilateral().gram(&[CellId(0), CellId(1), CellId(2), CellId(3)]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g[i][j], if i == j { q("1") } else { q("1/2") });
            }
        }
        assert!(positive_definite(&g));
        assert!(!positive_definite(&vec![vec![q("1"), q("2")], vec![q("2"), q("1")]]));
    }

    #[test]
    fn interval_edge_classification() {
        let cx = Builtin::Interval.build();
        let f = MorseFunction::from_pairs(&cx, &[("a", "0"), ("b", "1"), ("e", "1/2")]).unwrap();
        let sd = barycentric_subdivide(&cx, &f);
        let a = cx.id_of("a").unwrap();
        let e = cx.id_of("e").unwrap();
        let flow = classify_simplex(&sd, &Metric::equilateral(), &[a, e]).unwrap();
        // facet {e} is opposite a, facet {a} is opposite e
        assert_eq!(flow.tags, vec![FlowTag::OutFlow, FlowTag::InFlow]);
    }

    #[test]
    fn stretched_triangle_fails_audit() {
        let stretched = ms(&[&["1", "0"], &["0", "100"]], &["1", "2"]);
        let report = audit_sharpness(&[stretched], 30, 0, SectionFamily::SplitFaces);
        assert!(!report.passed());
        // every section is the whole triangle, right-angled at v_0
        assert_eq!(report.failures.len(), report.sections);
        assert!(report.failures.iter().all(|f| f.dot == q("0")));
    }

    #[test]
    fn low_dimensional_simplices_pass_vacuously() {
        let edge = ms(&[&["1"]], &["1"]);
        let report = audit_sharpness(&[edge], 10, 0, SectionFamily::Chords);
        assert_eq!(report.simplices, 0);
        assert_eq!(report.sections, 0);
        assert!(report.passed());
    }

    #[test]
    fn custom_metric_round_trip() {
        let cx = Builtin::Interval.build();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let m = Metric::from_json(&sd, r#"{"grams":{"a<e":[["4"]],"b<e":[["9/4"]]}}"#).unwrap();
        let (a, b, e) = (cx.id_of("a").unwrap(), cx.id_of("b").unwrap(), cx.id_of("e").unwrap());
        assert_eq!(m.length2(e, a), q("4"));
        assert_eq!(m.length2(b, e), q("9/4"));
        assert!(Metric::from_json(&sd, r#"{"grams":{"a<e":[["-1"]]}}"#).is_err());
        assert!(Metric::from_json(&sd, r#"{"grams":{"a":[]}}"#).is_err());
        assert_eq!(
            Metric::from_json(&sd, r#"{"default":"equilateral"}"#).unwrap(),
            Metric::equilateral()
        );
    }

    #[test]
    fn incompatible_grams_rejected() {
        let cx = crate::complex::simplicial_from_vertex_lists(&[vec![0, 1, 2]]).unwrap();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        // both maximal simplices share the edge v0 - t012
        let text = r#"{"grams":{
            "v0<e01<t012":[["1","1/2"],["1/2","1"]],
            "v0<e02<t012":[["1","1/2"],["1/2","2"]]}}"#;
        assert!(matches!(Metric::from_json(&sd, text), Err(Error::Metric(_))));
    }

    #[test]
    fn point_validation() {
        let cx = Builtin::Interval.build();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let a = cx.id_of("a").unwrap();
        let b = cx.id_of("b").unwrap();
        assert!(Point::vertex(a).validate(&sd).is_ok());
        assert!(Point::barycenter(&[a, b]).validate(&sd).is_err());
        let bad = Point {
            carrier: vec![a],
            coords: vec![q("1/2")],
        };
        assert!(bad.validate(&sd).is_err());
    }
}
