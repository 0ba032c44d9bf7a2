use plmorse_core::builtin::Builtin;
use plmorse_core::complex::{simplicial_from_vertex_lists, ChainVector};
use plmorse_core::homology::{complexes_isomorphic_in_homology, homology, smith_normal_form};
use plmorse_core::matrix::IntMatrix;
use proptest::prelude::*;

#[test]
fn boundary_squares_to_zero_on_battery() {
    for b in Builtin::BATTERY {
        let cx = b.build();
        for d in 2..=cx.dim() {
            let prod = cx
                .incidence_matrix(d - 1)
                .entries
                .mul(&cx.incidence_matrix(d).entries)
                .unwrap();
            assert!(prod.is_zero(), "{b}: d{} d{d} != 0", d - 1);
        }
        for c in cx.ids() {
            let dd = cx.boundary(&cx.boundary(&ChainVector::cell(&cx, c)));
            assert!(dd.is_zero());
        }
    }
}

#[test]
fn boundary_of_tetrahedron_surface() {
    let cx = Builtin::Sphere(2).build();
    let d1 = cx.incidence_matrix(1).entries;
    let d2 = cx.incidence_matrix(2).entries;
    // oracle: direct multiplication, entry by entry
    for r in 0..d1.rows() {
        for c in 0..d2.cols() {
            let s: i64 = (0..d1.cols()).map(|k| d1.get(r, k) * d2.get(k, c)).sum();
            assert_eq!(s, 0);
        }
    }
}

#[test]
fn simplicial_signs_alternate_by_position() {
    let cx = Builtin::Sphere(3).build();
    for d in 1..=cx.dim() {
        for &s in cx.cells_of_dim(d) {
            // vertices of s, sorted
            let mut verts: Vec<String> = cx
                .faces(s)
                .iter()
                .filter(|f| cx.cell_dim(**f) == 0)
                .map(|f| cx.name(*f)[1..].to_string())
                .collect();
            verts.sort();
            for (l, _) in verts.iter().enumerate() {
                let mut rest = verts.clone();
                rest.remove(l);
                let facet = cx
                    .facets(s)
                    .iter()
                    .find(|(f, _)| {
                        let mut fv: Vec<String> = cx
                            .closure(*f)
                            .filter(|g| cx.cell_dim(*g) == 0)
                            .map(|g| cx.name(g)[1..].to_string())
                            .collect();
                        fv.sort();
                        fv == rest
                    })
                    .unwrap();
                assert_eq!(facet.1, if l % 2 == 0 { 1 } else { -1 });
            }
        }
    }
}

#[test]
fn torus_counts_and_euler() {
    let cx = Builtin::Torus7.build();
    assert_eq!(cx.len(), 7 + 21 + 14);
    assert_eq!(cx.euler_characteristic(), 0);
}

#[test]
fn rp2_closure_count() {
    // oracle: count distinct subsets of the standard facet list
    let facets: [[u64; 3]; 10] = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
    ];
    let mut edges = std::collections::BTreeSet::new();
    for f in facets {
        edges.insert((f[0], f[1]));
        edges.insert((f[0], f[2]));
        edges.insert((f[1], f[2]));
    }
    let cx = Builtin::Rp2_6.build();
    assert_eq!(edges.len(), 15);
    assert_eq!(cx.count_of_dim(1), edges.len());
    assert_eq!(cx.count_of_dim(2), 10);
}

#[test]
fn battery_homology() {
    let expect: &[(Builtin, &str)] = &[
        (Builtin::Point, "ℤ"),
        (Builtin::Interval, "ℤ, 0"),
        (Builtin::Circle3, "ℤ, ℤ"),
        (Builtin::Sphere(1), "ℤ, ℤ"),
        (Builtin::Sphere(2), "ℤ, 0, ℤ"),
        (Builtin::Sphere(3), "ℤ, 0, 0, ℤ"),
        (Builtin::Sphere(4), "ℤ, 0, 0, 0, ℤ"),
        (Builtin::Torus7, "ℤ, ℤ^2, ℤ"),
        (Builtin::KleinBottle, "ℤ, ℤ⊕ℤ/2, 0"),
        (Builtin::Rp2_6, "ℤ, ℤ/2, 0"),
    ];
    for (b, s) in expect {
        let cx = b.build();
        let h = homology(&cx.chain_complex());
        assert_eq!(h.to_string(), *s, "{b}");
        assert_eq!(h.euler_characteristic(), cx.euler_characteristic(), "{b}");
    }
}

#[test]
fn comparison_reports_degree() {
    let circle = Builtin::Circle3.build().chain_complex();
    let point = Builtin::Point.build().chain_complex();
    let cmp = complexes_isomorphic_in_homology(&circle, &point);
    assert!(!cmp.isomorphic);
    assert_eq!(cmp.first_mismatch(), Some(1));
    let s1 = Builtin::Sphere(1).build().chain_complex();
    assert!(complexes_isomorphic_in_homology(&circle, &s1).isomorphic);
}

#[test]
fn two_disjoint_edges_have_two_components() {
    let cx = simplicial_from_vertex_lists(&[vec![0, 1], vec![2, 3]]).unwrap();
    assert_eq!(homology(&cx.chain_complex()).betti(), vec![2, 0]);
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, 1);
    }
    for &(a, b, k) in ops {
        let (a, b) = (a % n, b % n);
        if a == b {
            continue;
        }
        // row_a += k * row_b
        for c in 0..n {
            let v = m.get(a, c) + k * m.get(b, c);
            m.set(a, c, v);
        }
    }
    m
}

proptest! {
    #[test]
    fn snf_invariant_under_unimodular_change(
        rows in prop::collection::vec(prop::collection::vec(-4i64..5, 4), 3),
        left in prop::collection::vec((0usize..3, 0usize..3, -2i64..3), 0..6),
        right in prop::collection::vec((0usize..4, 0usize..4, -2i64..3), 0..6),
    ) {
        let m = IntMatrix::from_rows(&rows);
        let p = unimodular(3, &left);
        let q = unimodular(4, &right);
        let changed = p.mul(&m).unwrap().mul(&q).unwrap();
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&changed);
        prop_assert_eq!(&a, &b);
        for w in a.factors.windows(2) {
            prop_assert!((&w[1] % &w[0]) == num_bigint::BigInt::from(0));
        }
    }
}
