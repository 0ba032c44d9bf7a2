//! Discrete Morse functions: validation, critical cells, tame-ification and
//! random generation.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, CellId};
use crate::error::{Error, Result};
use crate::Rational;

/// Exact rational values on the cells of a complex, indexed by [`CellId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseFunction {
    values: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MorseFlags {
    pub is_morse: bool,
    pub is_generic: bool,
    pub is_tame: bool,
}

#[derive(Serialize, Deserialize)]
struct MorseFile {
    values: BTreeMap<String, RationalText>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Int(i64),
}

impl MorseFunction {
    /// Takes one value per cell. Missing or unknown cells are errors.
    pub fn from_named(cx: &CellComplex, values: &BTreeMap<String, Rational>) -> Result<Self> {
        for name in values.keys() {
            cx.id_of(name).map_err(|_| Error::ExtraValue(name.clone()))?;
        }
        let values = cx
            .ids()
            .map(|c| {
                values
                    .get(cx.name(c))
                    .cloned()
                    .ok_or_else(|| Error::MissingValue(cx.name(c).to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(MorseFunction { values })
    }

    /// Convenience for tests and examples: `(name, "p/q")` pairs.
    pub fn from_pairs(cx: &CellComplex, pairs: &[(&str, &str)]) -> Result<Self> {
        let map = pairs
            .iter()
            .map(|(n, v)| Ok((n.to_string(), parse_rational(v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::from_named(cx, &map)
    }

    pub fn from_values(values: Vec<Rational>) -> Self {
        MorseFunction { values }
    }

    /// `F(α) = dim α`.
    pub fn trivial(cx: &CellComplex) -> Self {
        MorseFunction {
            values: cx.ids().map(|c| Rational::from_integer(cx.cell_dim(c).into())).collect(),
        }
    }

    /// Parses `{"values":{"cell":"3/2", ...}}`.
    pub fn from_json(cx: &CellComplex, text: &str) -> Result<Self> {
        let file: MorseFile = serde_json::from_str(text)?;
        let map = file
            .values
            .into_iter()
            .map(|(k, v)| {
                let r = match v {
                    RationalText::Text(s) => parse_rational(&s)?,
                    RationalText::Int(i) => Rational::from_integer(i.into()),
                };
                Ok((k, r))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::from_named(cx, &map)
    }

    pub fn to_json(&self, cx: &CellComplex) -> serde_json::Value {
        let values: BTreeMap<String, String> = cx
            .ids()
            .map(|c| (cx.name(c).to_string(), self.value(c).to_string()))
            .collect();
        serde_json::json!({ "values": values })
    }

    pub fn value(&self, c: CellId) -> &Rational {
        &self.values[c.0]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn set(&mut self, c: CellId, v: Rational) {
        self.values[c.0] = v;
    }

    pub fn negated(&self) -> Self {
        MorseFunction {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn flags(&self, cx: &CellComplex) -> MorseFlags {
        let is_morse = validate_morse(cx, self).is_ok_and(|r| r.ok());
        let is_generic = validate_generic(cx, self).is_empty();
        MorseFlags {
            is_morse,
            is_generic,
            is_tame: validate_tame(cx, self).is_empty(),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("rational `{s}`: {e}")))
}

/// A cell breaking one of the two counting inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseViolation {
    pub cell: CellId,
    /// Cofacets β with `F(β) <= F(α)`.
    pub low_cofacets: Vec<CellId>,
    /// Facets γ with `F(γ) >= F(α)`.
    pub high_facets: Vec<CellId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseCheck {
    pub violations: Vec<MorseViolation>,
}

impl MorseCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn low_cofacets(cx: &CellComplex, f: &MorseFunction, c: CellId) -> Vec<CellId> {
    cx.cofacets(c)
        .iter()
        .map(|(b, _)| *b)
        .filter(|b| f.value(*b) <= f.value(c))
        .collect()
}

fn high_facets(cx: &CellComplex, f: &MorseFunction, c: CellId) -> Vec<CellId> {
    cx.facets(c)
        .iter()
        .map(|(g, _)| *g)
        .filter(|g| f.value(*g) >= f.value(c))
        .collect()
}

fn check_total(cx: &CellComplex, f: &MorseFunction) -> Result<()> {
    if f.values.len() != cx.len() {
        let missing = cx
            .ids()
            .nth(f.values.len())
            .map_or_else(String::new, |c| cx.name(c).to_string());
        return Err(Error::MissingValue(missing));
    }
    Ok(())
}

/// Checks that every cell has at most one cofacet with a lower-or-equal
/// value and at most one facet with a higher-or-equal value.
pub fn validate_morse(cx: &CellComplex, f: &MorseFunction) -> Result<MorseCheck> {
    check_total(cx, f)?;
    let violations = cx
        .ids()
        .filter_map(|c| {
            let low = low_cofacets(cx, f, c);
            let high = high_facets(cx, f, c);
            (low.len() > 1 || high.len() > 1).then_some(MorseViolation {
                cell: c,
                low_cofacets: low,
                high_facets: high,
            })
        })
        .collect();
    Ok(MorseCheck { violations })
}

/// Comparable pairs `(α, β)`, `α < β`, with `F(α) = F(β)`.
pub fn validate_generic(cx: &CellComplex, f: &MorseFunction) -> Vec<(CellId, CellId)> {
    let mut out = Vec::new();
    for b in cx.ids() {
        for &a in cx.faces(b) {
            if f.value(a) == f.value(b) {
                out.push((a, b));
            }
        }
    }
    out.sort();
    out
}

/// Pairs `α^(i) < β^(j)` with `j >= i + 2` and `F(β) <= F(α)`.
pub fn validate_tame(cx: &CellComplex, f: &MorseFunction) -> Vec<(CellId, CellId)> {
    let mut out = Vec::new();
    for b in cx.ids() {
        let jb = cx.cell_dim(b);
        for &a in cx.faces(b) {
            if cx.cell_dim(a) + 2 <= jb && f.value(b) <= f.value(a) {
                out.push((a, b));
            }
        }
    }
    out.sort();
    out
}

/// Flags of the face poset on which some member's value equals the mean
/// of the flag's values. On such a flag the piecewise-linear gradient for
/// the equilateral metric is parallel to a facet.
pub fn degenerate_flags(cx: &CellComplex, f: &MorseFunction) -> Vec<Vec<CellId>> {
    cx.flags()
        .into_iter()
        .filter(|flag| flag_is_degenerate(f, flag))
        .collect()
}

fn flag_is_degenerate(f: &MorseFunction, flag: &[CellId]) -> bool {
    if flag.len() < 2 {
        return false;
    }
    let n = Rational::from_integer((flag.len() as i64).into());
    let sum: Rational = flag.iter().map(|c| f.value(*c)).sum();
    flag.iter().any(|c| f.value(*c) * &n == sum)
}

/// Partition of the cells into critical cells and exceptional pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalReport {
    /// `critical[i]` lists the critical i-cells, sorted by id.
    pub critical: Vec<Vec<CellId>>,
    /// Exceptional pairs `(α^(i), β^(i+1))` with `F(β) <= F(α)`, sorted.
    pub pairs: Vec<(CellId, CellId)>,
    partner: Vec<Option<CellId>>,
}

impl CriticalReport {
    pub fn partner(&self, c: CellId) -> Option<CellId> {
        self.partner[c.0]
    }

    pub fn is_critical(&self, c: CellId) -> bool {
        self.partner[c.0].is_none()
    }

    /// The exceptional coface of `c`, if `c` is the lower member of a pair.
    pub fn up_partner(&self, cx: &CellComplex, c: CellId) -> Option<CellId> {
        self.partner[c.0].filter(|p| cx.cell_dim(*p) > cx.cell_dim(c))
    }

    /// The exceptional face of `c`, if `c` is the upper member of a pair.
    pub fn down_partner(&self, cx: &CellComplex, c: CellId) -> Option<CellId> {
        self.partner[c.0].filter(|p| cx.cell_dim(*p) < cx.cell_dim(c))
    }

    pub fn critical_counts(&self) -> Vec<usize> {
        self.critical.iter().map(Vec::len).collect()
    }

    pub fn all_critical(&self) -> impl Iterator<Item = CellId> + '_ {
        self.critical.iter().flatten().copied()
    }
}

/// Applies the definition of a critical cell.
pub fn critical_cells(cx: &CellComplex, f: &MorseFunction) -> Result<CriticalReport> {
    let check = validate_morse(cx, f)?;
    if !check.ok() {
        return Err(Error::NotMorse(check.violations.len()));
    }
    let mut partner = vec![None; cx.len()];
    let mut pairs = Vec::new();
    for a in cx.ids() {
        if let Some(&b) = low_cofacets(cx, f, a).first() {
            if partner[a.0].is_some() || partner[b.0].is_some() {
                // a cell with both an exceptional face and coface
                return Err(Error::NotMorse(1));
            }
            partner[a.0] = Some(b);
            partner[b.0] = Some(a);
            pairs.push((a, b));
        }
    }
    // exceptional facets must be the same relation seen from above
    for b in cx.ids() {
        for g in high_facets(cx, f, b) {
            if partner[b.0] != Some(g) {
                return Err(Error::NotMorse(1));
            }
        }
    }
    pairs.sort();
    let mut critical = vec![Vec::new(); cx.dim() + 1];
    for c in cx.ids() {
        if partner[c.0].is_none() {
            critical[cx.cell_dim(c)].push(c);
        }
    }
    Ok(CriticalReport {
        critical,
        pairs,
        partner,
    })
}

/// One modification made by [`tameify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameStep {
    pub alpha: CellId,
    pub beta: CellId,
    /// The (j-1)-face of β found by the descending face chain.
    pub epsilon: CellId,
    pub old_value: Rational,
    pub new_value: Rational,
    pub violations_before: usize,
    pub violations_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tameified {
    pub function: MorseFunction,
    pub steps: Vec<TameStep>,
}

/// Turns a generic discrete Morse function into a tame one without
/// changing its critical cells or exceptional pairs.
///
/// Repeatedly picks a violating pair `(α, β)` with `dim β` maximal (ties by
/// cell id), walks a chain `α < γ < δ < ... < ε < β` of increasing values
/// and moves `F(β)` into `(F(α), F(ε))`.
pub fn tameify(cx: &CellComplex, f: &MorseFunction) -> Result<Tameified> {
    let check = validate_morse(cx, f)?;
    if !check.ok() {
        return Err(Error::NotMorse(check.violations.len()));
    }
    let non_generic = validate_generic(cx, f);
    if !non_generic.is_empty() {
        return Err(Error::NotGeneric(non_generic.len()));
    }

    let mut g = f.clone();
    let mut steps = Vec::new();
    loop {
        let violating = validate_tame(cx, &g);
        if violating.is_empty() {
            break;
        }
        let (alpha, beta) = *violating
            .iter()
            .min_by(|(a1, b1), (a2, b2)| {
                cx.cell_dim(*b2)
                    .cmp(&cx.cell_dim(*b1))
                    .then(b1.cmp(b2))
                    .then(a1.cmp(a2))
            })
            .expect("nonempty");
        let epsilon = face_chain_top(cx, &g, alpha, beta);
        let new_value = choose_value(cx, &g, alpha, beta, epsilon);
        let old_value = g.value(beta).clone();
        g.set(beta, new_value.clone());
        let after = validate_tame(cx, &g).len();
        assert!(
            after < violating.len(),
            "tameify step on ({}, {}) did not reduce violations",
            cx.name(alpha),
            cx.name(beta)
        );
        steps.push(TameStep {
            alpha,
            beta,
            epsilon,
            old_value,
            new_value,
            violations_before: violating.len(),
            violations_after: after,
        });
    }
    Ok(Tameified { function: g, steps })
}

// γ^(i+1), δ^(i+2), ..., ε^(j-1): at each step the face of β above the
// current cell with the largest value exceeding the current value.
fn face_chain_top(cx: &CellComplex, f: &MorseFunction, alpha: CellId, beta: CellId) -> CellId {
    let top = cx.cell_dim(beta);
    let mut cur = alpha;
    while cx.cell_dim(cur) + 1 < top {
        let next = cx
            .cofacets(cur)
            .iter()
            .map(|(c, _)| *c)
            .filter(|c| cx.is_face(*c, beta) && f.value(*c) > f.value(cur))
            .max_by(|x, y| f.value(*x).cmp(f.value(*y)).then(y.cmp(x)))
            .expect("a Morse function admits an increasing face chain");
        cur = next;
    }
    cur
}

// Strict chains leaving `start` along `step`, without `start` itself; the
// empty chain included.
fn chains_from<'a>(start: CellId, step: impl Fn(CellId) -> &'a [(CellId, i32)] + Copy) -> Vec<Vec<CellId>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<CellId>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chain in &frontier {
            let last = chain.last().copied().unwrap_or(start);
            // any cell strictly beyond `last`, reached by one or more steps
            let mut reach: BTreeSet<CellId> = BTreeSet::new();
            let mut todo: Vec<CellId> = step(last).iter().map(|(c, _)| *c).collect();
            while let Some(c) = todo.pop() {
                if reach.insert(c) {
                    todo.extend(step(c).iter().map(|(d, _)| *d));
                }
            }
            for c in reach {
                let mut longer = chain.clone();
                longer.push(c);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

// Fractions of the interval (lo, hi), by increasing denominator.
fn interval_points() -> impl Iterator<Item = Rational> {
    (2i64..).flat_map(|q| {
        (1..q)
            .filter(move |p| num_integer::gcd(*p, q) == 1)
            .map(move |p| Rational::new(p.into(), q.into()))
    })
}

fn choose_value(
    cx: &CellComplex,
    f: &MorseFunction,
    alpha: CellId,
    beta: CellId,
    epsilon: CellId,
) -> Rational {
    let lo = f.value(alpha).clone();
    let hi = f.value(epsilon).clone();
    let comparable: BTreeSet<&Rational> = cx
        .faces(beta)
        .iter()
        .chain(cx.cofaces(beta))
        .map(|c| f.value(*c))
        .collect();
    // A flag through β is degenerate exactly when F(β) hits one of the
    // values below. Values are scaled to integers by `scale` so the chain
    // sums avoid rational normalization.
    let below = chains_from(beta, |c| cx.facets(c));
    let above = chains_from(beta, |c| cx.cofacets(c));
    let mut scale = (1..=cx.dim() as i64 + 1).fold(BigInt::one(), |m, k| m.lcm(&BigInt::from(k)));
    for c in below.iter().chain(&above).flatten() {
        scale = scale.lcm(f.value(*c).denom());
    }
    let scaled_values: BTreeMap<CellId, BigInt> = below
        .iter()
        .chain(&above)
        .flatten()
        .map(|c| (*c, (f.value(*c) * &scale).to_integer()))
        .collect();
    let mut forbidden: BTreeSet<BigInt> = BTreeSet::new();
    for lo_chain in &below {
        for hi_chain in &above {
            let n = lo_chain.len() + hi_chain.len() + 1;
            if n < 2 {
                continue;
            }
            let members = || lo_chain.iter().chain(hi_chain);
            let rest: BigInt = members().map(|c| &scaled_values[c]).sum();
            // scale is a multiple of n - 1, so exactness is kept after
            // multiplying every key by it
            let m = BigInt::from(n as i64 - 1);
            forbidden.insert(&rest * &scale / &m);
            for c in members() {
                forbidden.insert((&scaled_values[c] * BigInt::from(n as i64) - &rest) * &scale);
            }
        }
    }
    let key = |v: &Rational| {
        let k = v * &scale * &scale;
        k.is_integer().then(|| k.to_integer())
    };
    for t in interval_points() {
        let v = &lo + (&hi - &lo) * t;
        if comparable.contains(&v) || key(&v).is_some_and(|k| forbidden.contains(&k)) {
            continue;
        }
        return v;
    }
    unreachable!("infinitely many candidates, finitely many excluded values")
}

/// A generic discrete Morse function built from a random acyclic matching
/// on the Hasse diagram. Deterministic per seed.
pub fn random_generic_morse(cx: &CellComplex, seed: u64) -> MorseFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(CellId, CellId)> = cx
        .ids()
        .flat_map(|b| cx.facets(b).iter().map(move |(a, _)| (*a, b)))
        .collect();
    edges.shuffle(&mut rng);

    let mut matched: Vec<Option<CellId>> = vec![None; cx.len()];
    for (a, b) in edges {
        if matched[a.0].is_some() || matched[b.0].is_some() || !rng.gen_bool(0.8) {
            continue;
        }
        matched[a.0] = Some(b);
        matched[b.0] = Some(a);
        if !matching_is_acyclic(cx, &matched) {
            matched[a.0] = None;
            matched[b.0] = None;
        }
    }

    let order = random_linear_extension(cx, &matched, &mut rng);
    let mut position = vec![0i64; cx.len()];
    for (k, c) in order.iter().enumerate() {
        position[c.0] = k as i64;
    }
    // Offsets below 1 keep the order; resample on flag-mean coincidences.
    let flags = cx.flags();
    let mut denom = 1000i64;
    loop {
        let scaled: Vec<i64> = position
            .iter()
            .map(|p| p * denom + rng.gen_range(1..denom))
            .collect();
        let degenerate = flags.iter().any(|fl| {
            let n = fl.len() as i64;
            let sum: i64 = fl.iter().map(|c| scaled[c.0]).sum();
            n > 1 && fl.iter().any(|c| n * scaled[c.0] == sum)
        });
        if !degenerate {
            let d = Rational::from_integer(denom.into());
            let values = scaled
                .into_iter()
                .map(|v| Rational::from_integer(v.into()) / &d)
                .collect();
            return MorseFunction { values };
        }
        denom *= 2;
    }
}

// The modified Hasse digraph: x -> y means F(x) < F(y).
fn successors(cx: &CellComplex, matched: &[Option<CellId>], c: CellId) -> Vec<CellId> {
    let mut out = Vec::new();
    for (b, _) in cx.cofacets(c) {
        if matched[c.0] != Some(*b) {
            out.push(*b);
        }
    }
    for (a, _) in cx.facets(c) {
        if matched[c.0] == Some(*a) {
            out.push(*a);
        }
    }
    out
}

fn matching_is_acyclic(cx: &CellComplex, matched: &[Option<CellId>]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; cx.len()];
    for start in cx.ids() {
        if state[start.0] != 0 {
            continue;
        }
        let mut stack = vec![(start, successors(cx, matched, start), 0usize)];
        state[start.0] = 1;
        while let Some((node, succ, idx)) = stack.last_mut() {
            if *idx < succ.len() {
                let next = succ[*idx];
                *idx += 1;
                match state[next.0] {
                    1 => return false,
                    0 => {
                        state[next.0] = 1;
                        let s = successors(cx, matched, next);
                        stack.push((next, s, 0));
                    }
                    _ => {}
                }
            } else {
                state[node.0] = 2;
                stack.pop();
            }
        }
    }
    true
}

fn random_linear_extension(
    cx: &CellComplex,
    matched: &[Option<CellId>],
    rng: &mut ChaCha8Rng,
) -> Vec<CellId> {
    let mut indeg = vec![0usize; cx.len()];
    for c in cx.ids() {
        for s in successors(cx, matched, c) {
            indeg[s.0] += 1;
        }
    }
    let mut ready: Vec<CellId> = cx.ids().filter(|c| indeg[c.0] == 0).collect();
    let mut order = Vec::with_capacity(cx.len());
    while !ready.is_empty() {
        let k = rng.gen_range(0..ready.len());
        let c = ready.swap_remove(k);
        order.push(c);
        for s in successors(cx, matched, c) {
            indeg[s.0] -= 1;
            if indeg[s.0] == 0 {
                ready.push(s);
            }
        }
    }
    debug_assert_eq!(order.len(), cx.len());
    order
}
