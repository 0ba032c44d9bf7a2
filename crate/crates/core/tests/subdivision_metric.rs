use std::collections::HashMap;

use num_traits::{Signed, Zero};
use plmorse_core::builtin::Builtin;
use plmorse_core::complex::{simplicial_from_vertex_lists, CellComplex, CellId};
use plmorse_core::homology::homology;
use plmorse_core::metric::{
    audit_metric, audit_sharpness, barycentric_velocity, classify_flows, gradient_vector_set,
    simplex_gradient, FlowTag, Metric, MetricSimplex, Point, SectionFamily,
};
use plmorse_core::morse::random_generic_morse;
use plmorse_core::subdivision::barycentric_subdivide;
use plmorse_core::{MorseFunction, Rational};
use proptest::prelude::*;

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

// Chains ending at c with k+1 elements, by recursion on facets of the
// poset rather than enumeration.
fn chain_counts(cx: &CellComplex) -> Vec<usize> {
    let mut ending: HashMap<(CellId, usize), usize> = HashMap::new();
    let mut order: Vec<CellId> = cx.ids().collect();
    order.sort_by_key(|c| cx.cell_dim(*c));
    let top = cx.dim() + 1;
    for &c in &order {
        ending.insert((c, 0), 1);
        for k in 1..top {
            let n: usize = cx.faces(c).iter().map(|a| ending.get(&(*a, k - 1)).copied().unwrap_or(0)).sum();
            ending.insert((c, k), n);
        }
    }
    (0..top)
        .map(|k| cx.ids().map(|c| ending[&(c, k)]).sum())
        .collect()
}

#[test]
fn simplex_counts_match_chain_counts() {
    for b in Builtin::BATTERY {
        let cx = b.build();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let counts: Vec<usize> = (0..=cx.dim()).map(|k| sd.count_of_dim(k)).collect();
        assert_eq!(counts, chain_counts(&cx), "{b}");
    }
}

#[test]
fn vertex_values_are_cell_values() {
    for b in Builtin::BATTERY {
        let cx = b.build();
        let f = random_generic_morse(&cx, 1);
        let sd = barycentric_subdivide(&cx, &f);
        for c in cx.ids() {
            assert_eq!(sd.f(c), f.value(c));
            assert_eq!(sd.vertex_dim(c), cx.cell_dim(c));
        }
    }
}

#[test]
fn subdivision_preserves_homology() {
    for b in [Builtin::Circle3, Builtin::Sphere(2), Builtin::Torus7, Builtin::Rp2_6] {
        let cx = b.build();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let x1 = sd.to_complex();
        assert_eq!(homology(&x1.chain_complex()), homology(&cx.chain_complex()), "{b}");
        for i in 0..=cx.dim() {
            let rib = sd.rib(i).unwrap();
            assert!(rib.is_closed());
            let h = homology(&rib.to_complex(&cx).chain_complex());
            assert_eq!(h, homology(&cx.skeleton(i).chain_complex()), "{b} rib {i}");
        }
    }
}

#[test]
fn rib_is_not_skeleton() {
    // the 1-skeleton of X₁ contains edges to barycenters of 2-cells
    let cx = simplicial_from_vertex_lists(&[vec![0, 1, 2]]).unwrap();
    let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
    let rib = sd.rib(1).unwrap();
    assert_eq!(rib.counts(), vec![6, 6]);
    assert_eq!(sd.count_of_dim(1), 12);
    let t = cx.id_of("t012").unwrap();
    assert!(!rib.vertices().contains(&t));
}

fn flow_battery() -> Vec<Builtin> {
    vec![
        Builtin::Interval,
        Builtin::Circle3,
        Builtin::Sphere(2),
        Builtin::Sphere(3),
        Builtin::Torus7,
        Builtin::KleinBottle,
        Builtin::Rp2_6,
    ]
}

#[test]
fn flow_facets_contain_extreme_vertices() {
    for b in flow_battery() {
        let cx = b.build();
        for seed in 0..4 {
            let f = random_generic_morse(&cx, seed);
            let sd = barycentric_subdivide(&cx, &f);
            let flows = classify_flows(&sd, &Metric::equilateral()).unwrap();
            for (s, k, tag) in flows.facet_pairs() {
                let lo = s.iter().min_by_key(|c| sd.f(**c)).unwrap();
                let hi = s.iter().max_by_key(|c| sd.f(**c)).unwrap();
                let opposite = s[k];
                match tag {
                    FlowTag::InFlow => assert_ne!(opposite, *lo, "{b} seed {seed}"),
                    FlowTag::OutFlow => assert_ne!(opposite, *hi, "{b} seed {seed}"),
                }
            }
        }
    }
}

#[test]
fn equilateral_velocity_closed_form() {
    // regular simplex: the descent rate of vertex v is -2 (f(v) - mean f)
    let cx = Builtin::Sphere(3).build();
    let f = random_generic_morse(&cx, 9);
    let sd = barycentric_subdivide(&cx, &f);
    let m = Metric::equilateral();
    for s in sd.simplices().iter().filter(|s| s.len() > 1) {
        let d = simplex_gradient(&m.metric_simplex(&sd, s)).unwrap();
        let vel = barycentric_velocity(&d);
        let mean: Rational = s.iter().map(|c| sd.f(*c)).sum::<Rational>() / rat(s.len() as i64);
        for (k, c) in s.iter().enumerate() {
            assert_eq!(vel[k], (sd.f(*c) - &mean) * rat(-2));
        }
    }
}

#[test]
fn negating_f_swaps_tags() {
    let cx = Builtin::Torus7.build();
    let f = random_generic_morse(&cx, 4);
    let sd = barycentric_subdivide(&cx, &f);
    let m = Metric::equilateral();
    let fwd = classify_flows(&sd, &m).unwrap();
    let rev = classify_flows(&sd.negated(), &m).unwrap();
    for (a, b) in fwd.facet_pairs().zip(rev.facet_pairs()) {
        assert_eq!(a.0, b.0);
        assert_eq!(a.2.flip(), b.2);
    }
}

#[test]
fn degenerate_flag_is_reported() {
    // values 0, 1, 2 along v < e < t: the middle one is the mean
    let cx = simplicial_from_vertex_lists(&[vec![0, 1, 2]]).unwrap();
    let f = MorseFunction::trivial(&cx);
    let sd = barycentric_subdivide(&cx, &f);
    assert!(classify_flows(&sd, &Metric::equilateral()).is_err());
}

#[test]
fn fan_of_three_triangles() {
    let cx = simplicial_from_vertex_lists(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
    let f = random_generic_morse(&cx, 2);
    let sd = barycentric_subdivide(&cx, &f);
    let m = Metric::equilateral();
    let v0 = cx.id_of("v0").unwrap();
    let e01 = cx.id_of("e01").unwrap();
    let x = Point {
        carrier: vec![v0, e01],
        coords: vec![Rational::new(1.into(), 3.into()), Rational::new(2.into(), 3.into())],
    };
    let set = gradient_vector_set(&sd, &m, &x).unwrap();
    assert_eq!(set.directions.len(), 4);
    assert!(set.all_distinct());
    assert!(set.directions.iter().all(|d| d.direction.iter().any(|c| !c.is_zero())));

    let dual = gradient_vector_set(&sd.negated(), &m, &x).unwrap();
    for (a, b) in set.directions.iter().zip(&dual.directions) {
        assert_eq!(a.simplex, b.simplex);
        let neg: Vec<Rational> = a.direction.iter().map(|c| -c).collect();
        assert_eq!(b.direction, neg);
    }

    // a vertex sees every simplex around it
    let at_vertex = gradient_vector_set(&sd, &m, &Point::vertex(v0)).unwrap();
    assert_eq!(at_vertex.directions.len(), sd.star(&[v0]).len() - 1);
}

#[test]
fn equilateral_audit_passes_split_sections() {
    for b in [Builtin::Sphere(2), Builtin::Sphere(3), Builtin::Sphere(4)] {
        let cx = b.build();
        let sd = barycentric_subdivide(&cx, &MorseFunction::trivial(&cx));
        let r = audit_metric(&sd, &Metric::equilateral(), 1000, 7, SectionFamily::SplitFaces);
        assert!(r.passed(), "{b}: {:?}", r.failures.first());
        assert_eq!(r.sections, 1000);
    }
}

#[test]
fn equilateral_tetrahedron_has_obtuse_chords() {
    // general chord sections of a regular 3-simplex can be obtuse
    let g: Vec<Vec<Rational>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { rat(1) } else { Rational::new(1.into(), 2.into()) }).collect())
        .collect();
    let ms = MetricSimplex {
        simplex: (0..4).map(CellId).collect(),
        gram: g,
        f_diffs: vec![rat(1), rat(2), rat(3)],
    };
    let chords = audit_sharpness(std::slice::from_ref(&ms), 400, 3, SectionFamily::Chords);
    assert!(!chords.passed());
    let split = audit_sharpness(&[ms], 400, 3, SectionFamily::SplitFaces);
    assert!(split.passed());
}

fn spd(entries: &[i64], k: usize) -> Vec<Vec<Rational>> {
    // A^T A + I is positive definite
    let a: Vec<Vec<i64>> = (0..k).map(|i| entries[i * k..(i + 1) * k].to_vec()).collect();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let s: i64 = (0..k).map(|r| a[r][i] * a[r][j]).sum();
                    rat(s + i64::from(i == j))
                })
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn gradient_solves_gram_system(
        k in 1usize..5,
        entries in prop::collection::vec(-3i64..4, 16),
        diffs in prop::collection::vec(-20i64..21, 4),
    ) {
        let gram = spd(&entries, k);
        let ms = MetricSimplex {
            simplex: (0..=k).map(CellId).collect(),
            gram: gram.clone(),
            f_diffs: diffs[..k].iter().map(|d| rat(*d)).collect(),
        };
        let d = simplex_gradient(&ms).unwrap();
        for i in 0..k {
            let lhs: Rational = (0..k).map(|j| &gram[i][j] * &d[j]).sum();
            prop_assert_eq!(lhs, -&ms.f_diffs[i]);
        }
        // descent: f decreases along d unless f is constant
        let df: Rational = (0..k).map(|i| &ms.f_diffs[i] * &d[i]).sum();
        prop_assert!(!df.is_positive());
    }
}
