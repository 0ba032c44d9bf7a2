//! Integer homology of finite free chain complexes via Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Invariant factors `d1 | d2 | ... | dr` (all positive) and the rank `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Diagonalizes `m` by unimodular row and column operations.
///
/// Pivots on the entry of least absolute value, which keeps coefficient
/// growth small on the dense matrices met here.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| m.row(r).iter().map(|&x| BigInt::from(x)).collect())
        .collect();

    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                return finish(factors);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let pivot = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the remaining block
            let bad_row = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero())
            });
            match bad_row {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].abs());
    }
    finish(factors)
}

fn finish(factors: Vec<BigInt>) -> SmithForm {
    SmithForm {
        rank: factors.len(),
        factors,
    }
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// A bounded chain complex of finitely generated free abelian groups
/// `0 -> C_top -> ... -> C_0 -> 0` with labeled bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerChainComplex {
    labels: Vec<Vec<String>>,
    // differentials[i - 1] is d_i : C_i -> C_{i-1}
    differentials: Vec<IntMatrix>,
}

impl IntegerChainComplex {
    /// `labels[i]` is the basis of `C_i`; `differentials[i-1]` is `d_i`.
    pub fn new(labels: Vec<Vec<String>>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if labels.is_empty() || differentials.len() + 1 != labels.len() {
            return Err(Error::Shape(format!(
                "{} bases need {} differentials, got {}",
                labels.len(),
                labels.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            let i = k + 1;
            if d.rows() != labels[i - 1].len() || d.cols() != labels[i].len() {
                return Err(Error::Shape(format!(
                    "d{i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    labels[i - 1].len(),
                    labels[i].len()
                )));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k - 1].mul(&differentials[k])?.is_zero() {
                return Err(Error::NotAComplex {
                    degree: k,
                    next: k + 1,
                });
            }
        }
        Ok(IntegerChainComplex {
            labels,
            differentials,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.labels.get(degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: usize) -> &[String] {
        self.labels.get(degree).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `d_degree`, or `None` for degree 0 and above the top.
    pub fn differential(&self, degree: usize) -> Option<&IntMatrix> {
        if degree == 0 {
            None
        } else {
            self.differentials.get(degree - 1)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.top_degree())
            .map(|d| {
                let r = self.rank(d) as i64;
                if d % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            b => parts.push(format!("ℤ^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        write!(f, "{}", parts.join("⊕"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    #[serde(rename = "H")]
    pub groups: Vec<HomologyGroup>,
}

impl HomologySummary {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// The group in `degree`; zero above the top degree.
    pub fn group(&self, degree: usize) -> HomologyGroup {
        self.groups.get(degree).cloned().unwrap_or(HomologyGroup {
            degree,
            betti: 0,
            torsion: Vec::new(),
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.degree % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
            .sum()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Computes `H_i = ker d_i / im d_{i+1}` for every degree.
pub fn homology(c: &IntegerChainComplex) -> HomologySummary {
    let top = c.top_degree();
    let snf: Vec<Option<SmithForm>> = (0..=top + 1)
        .map(|d| c.differential(d).map(smith_normal_form))
        .collect();
    let rank_of = |d: usize| snf[d].as_ref().map_or(0, |s| s.rank);
    let groups = (0..=top)
        .map(|i| {
            let cycles = c.rank(i) - rank_of(i);
            let betti = cycles - rank_of(i + 1);
            let torsion = snf[i + 1]
                .as_ref()
                .map(|s| {
                    s.factors
                        .iter()
                        .filter(|x| **x > BigInt::from(1))
                        .map(|x| x.to_u64().expect("torsion coefficient fits in u64"))
                        .collect()
                })
                .unwrap_or_default();
            HomologyGroup {
                degree: i,
                betti,
                torsion,
            }
        })
        .collect();
    HomologySummary { groups }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub left: HomologyGroup,
    pub right: HomologyGroup,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyComparison {
    pub isomorphic: bool,
    pub degrees: Vec<DegreeComparison>,
}

impl HomologyComparison {
    pub fn first_mismatch(&self) -> Option<usize> {
        self.degrees.iter().find(|d| !d.equal).map(|d| d.degree)
    }
}

/// Compares betti numbers and torsion factors degree by degree; missing
/// degrees count as zero groups.
pub fn complexes_isomorphic_in_homology(
    a: &IntegerChainComplex,
    b: &IntegerChainComplex,
) -> HomologyComparison {
    compare_summaries(&homology(a), &homology(b))
}

pub fn compare_summaries(ha: &HomologySummary, hb: &HomologySummary) -> HomologyComparison {
    let top = ha.groups.len().max(hb.groups.len());
    let degrees: Vec<DegreeComparison> = (0..top)
        .map(|d| {
            let left = ha.group(d);
            let right = hb.group(d);
            let equal = left.betti == right.betti && left.torsion == right.torsion;
            DegreeComparison {
                degree: d,
                left,
                right,
                equal,
            }
        })
        .collect();
    HomologyComparison {
        isomorphic: degrees.iter().all(|d| d.equal),
        degrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &[Vec<i64>]) -> (Vec<i64>, usize) {
        let s = smith_normal_form(&IntMatrix::from_rows(m));
        (s.factors.iter().map(|x| x.to_i64().unwrap()).collect(), s.rank)
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), (vec![1, 6], 2));
        assert_eq!(factors(&[vec![0; 3], vec![0; 3], vec![0; 3]]), (vec![], 0));
        assert_eq!(factors(&[vec![1]]), (vec![1], 1));
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), (vec![2, 6, 12], 3));
        let empty = smith_normal_form(&IntMatrix::zeros(0, 4));
        assert_eq!(empty.rank, 0);
    }

    #[test]
    fn homology_of_point_and_mismatch() {
        let point = IntegerChainComplex::new(vec![vec!["p".into()]], vec![]).unwrap();
        let h = homology(&point);
        assert_eq!(h.betti(), vec![1]);
        // circle with one vertex and one loop edge
        let loop_ = IntegerChainComplex::new(
            vec![vec!["v".into()], vec!["e".into()]],
            vec![IntMatrix::zeros(1, 1)],
        )
        .unwrap();
        let cmp = complexes_isomorphic_in_homology(&loop_, &point);
        assert!(!cmp.isomorphic);
        assert_eq!(cmp.first_mismatch(), Some(1));
    }

    #[test]
    fn not_a_complex_rejected() {
        let d1 = IntMatrix::from_rows(&[vec![1]]);
        let d2 = IntMatrix::from_rows(&[vec![1]]);
        let r = IntegerChainComplex::new(
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            vec![d1, d2],
        );
        assert!(matches!(r, Err(Error::NotAComplex { .. })));
    }

    #[test]
    fn summary_json_shape() {
        let s = HomologySummary {
            groups: vec![HomologyGroup {
                degree: 0,
                betti: 1,
                torsion: vec![],
            }],
        };
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"H":[{"degree":0,"betti":1,"torsion":[]}]}"#
        );
        let g = HomologyGroup {
            degree: 1,
            betti: 1,
            torsion: vec![2],
        };
        assert_eq!(g.to_string(), "ℤ⊕ℤ/2");
    }
}
