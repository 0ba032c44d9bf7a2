//! Named test complexes.

use std::fmt;
use std::str::FromStr;

use crate::complex::{build_complex, simplicial_from_vertex_lists, CellComplex, RawCell};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// One vertex.
    Point,
    /// Vertices `a`, `b` and edge `e` with `∂e = b − a`.
    Interval,
    /// Hollow triangle: 3 vertices, 3 edges.
    Circle3,
    /// Boundary of the (d+1)-simplex, `d <= 4`.
    Sphere(usize),
    /// Möbius–Császár torus: 7 vertices, 21 edges, 14 triangles.
    Torus7,
    /// 3x3 grid with a twisted gluing: 9 vertices, 27 edges, 18 triangles.
    KleinBottle,
    /// Minimal projective plane: 6 vertices, 15 edges, 10 triangles.
    Rp2_6,
}

impl Builtin {
    /// The battery used by the property and acceptance tests.
    pub const BATTERY: [Builtin; 10] = [
        Builtin::Point,
        Builtin::Interval,
        Builtin::Circle3,
        Builtin::Sphere(1),
        Builtin::Sphere(2),
        Builtin::Sphere(3),
        Builtin::Sphere(4),
        Builtin::Torus7,
        Builtin::KleinBottle,
        Builtin::Rp2_6,
    ];

    pub fn build(self) -> CellComplex {
        match self {
            Builtin::Point => simplicial_from_vertex_lists(&[vec![0]]),
            Builtin::Interval => build_complex(vec![
                RawCell::new("a", 0, &[]),
                RawCell::new("b", 0, &[]),
                RawCell::new("e", 1, &[("b", 1), ("a", -1)]),
            ]),
            Builtin::Circle3 => simplicial_from_vertex_lists(&[vec![0, 1], vec![1, 2], vec![0, 2]]),
            Builtin::Sphere(d) => {
                let n = d as u64 + 2;
                let facets: Vec<Vec<u64>> = (0..n)
                    .map(|skip| (0..n).filter(|v| *v != skip).collect())
                    .collect();
                simplicial_from_vertex_lists(&facets)
            }
            Builtin::Torus7 => simplicial_from_vertex_lists(&torus7()),
            Builtin::KleinBottle => simplicial_from_vertex_lists(&klein_grid()),
            Builtin::Rp2_6 => simplicial_from_vertex_lists(&RP2_6.map(|t| t.to_vec())),
        }
        .expect("builtin complexes are valid")
    }
}

fn torus7() -> Vec<Vec<u64>> {
    (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect()
}

const RP2_6: [[u64; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 1, 5],
    [1, 2, 4],
    [2, 3, 5],
    [1, 3, 4],
    [2, 4, 5],
    [1, 3, 5],
];

// Grid coordinates (i, j) mod 3, with the top edge glued to the bottom
// after reflecting i.
fn klein_grid() -> Vec<Vec<u64>> {
    let vertex = |i: u64, j: u64| -> u64 {
        let (i, j) = if j == 3 { ((3 - i % 3) % 3, 0) } else { (i % 3, j) };
        j * 3 + i
    };
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b, c, d) = (vertex(i, j), vertex(i + 1, j), vertex(i, j + 1), vertex(i + 1, j + 1));
            out.push(vec![a, b, d]);
            out.push(vec![a, c, d]);
        }
    }
    out
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point" => Ok(Builtin::Point),
            "interval" => Ok(Builtin::Interval),
            "circle_3" => Ok(Builtin::Circle3),
            "torus_7" => Ok(Builtin::Torus7),
            "klein_bottle" => Ok(Builtin::KleinBottle),
            "rp2_6" => Ok(Builtin::Rp2_6),
            _ => s
                .strip_prefix("sphere_")
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|d| (1..=4).contains(d))
                .map(Builtin::Sphere)
                .ok_or_else(|| Error::UnknownName(s.to_string())),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Point => write!(f, "point"),
            Builtin::Interval => write!(f, "interval"),
            Builtin::Circle3 => write!(f, "circle_3"),
            Builtin::Sphere(d) => write!(f, "sphere_{d}"),
            Builtin::Torus7 => write!(f, "torus_7"),
            Builtin::KleinBottle => write!(f, "klein_bottle"),
            Builtin::Rp2_6 => write!(f, "rp2_6"),
        }
    }
}

/// Builds a builtin by name.
pub fn builtin(name: &str) -> Result<CellComplex> {
    Ok(name.parse::<Builtin>()?.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn counts(cx: &CellComplex) -> Vec<usize> {
        (0..=cx.dim()).map(|d| cx.count_of_dim(d)).collect()
    }

    #[test]
    fn documented_counts() {
        assert_eq!(counts(&Builtin::Point.build()), vec![1]);
        assert_eq!(counts(&Builtin::Interval.build()), vec![2, 1]);
        assert_eq!(counts(&Builtin::Circle3.build()), vec![3, 3]);
        assert_eq!(counts(&Builtin::Sphere(2).build()), vec![4, 6, 4]);
        assert_eq!(counts(&Builtin::Sphere(4).build()), vec![6, 15, 20, 15, 6]);
        assert_eq!(counts(&Builtin::Torus7.build()), vec![7, 21, 14]);
        assert_eq!(counts(&Builtin::KleinBottle.build()), vec![9, 27, 18]);
        assert_eq!(counts(&Builtin::Rp2_6.build()), vec![6, 15, 10]);
    }

    #[test]
    fn surfaces_are_closed_pseudomanifolds() {
        for b in [Builtin::Torus7, Builtin::KleinBottle, Builtin::Rp2_6, Builtin::Sphere(2)] {
            let cx = b.build();
            for &e in cx.cells_of_dim(1) {
                assert_eq!(cx.cofacets(e).len(), 2, "{b}: edge {}", cx.name(e));
            }
            // vertex links are single cycles: #link edges == #link vertices
            for &v in cx.cells_of_dim(0) {
                let tris = cx.cofaces(v).iter().filter(|c| cx.cell_dim(**c) == 2).count();
                let edges = cx.cofacets(v).len();
                assert_eq!(tris, edges, "{b}: vertex {}", cx.name(v));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        let mut seen = HashMap::new();
        for b in Builtin::BATTERY {
            let s = b.to_string();
            assert_eq!(s.parse::<Builtin>().unwrap(), b);
            seen.insert(s, b);
        }
        assert_eq!(seen.len(), Builtin::BATTERY.len());
        assert!(matches!("sphere_9".parse::<Builtin>(), Err(Error::UnknownName(_))));
        assert!(matches!(builtin("mobius"), Err(Error::UnknownName(_))));
    }
}
