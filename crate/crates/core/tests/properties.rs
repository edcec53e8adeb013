//! Structural invariants checked over randomized inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;

use sphere_turan::{
    boundary_cross_polytope, boundary_simplex, canonical_form, cycle, flip_sequence, replay_trace,
    sample_lm, tree_of_simplices, two_lc_generate, verify_sphere, Coloring, Complex, Effort, Face,
    LMParams, LcMode, SplitMix64, Vertex,
};

/// Random pure d-complex on at most `n` vertices with `m` facet draws.
fn random_complex(d: usize, n: u32, m: usize, seed: u64) -> Complex {
    let mut rng = SplitMix64::new(seed);
    let mut facets = Vec::new();
    for _ in 0..m {
        let mut verts: Vec<Vertex> = (0..n).collect();
        rng.shuffle(&mut verts);
        facets.push(verts[..=d].to_vec());
    }
    Complex::new(d, facets).expect("shuffled prefixes are distinct")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_characteristic_is_alternating_face_sum(
        d in 1usize..=3,
        extra in 0u32..5,
        m in 1usize..=10,
        seed in any::<u64>(),
    ) {
        let n = d as u32 + 2 + extra;
        let x = random_complex(d, n, m, seed);
        let mut alternating = 0i64;
        for k in 0..=d as isize {
            let c = x.faces(k).unwrap().len() as i64;
            alternating += if k % 2 == 0 { c } else { -c };
        }
        prop_assert_eq!(x.euler_characteristic(), alternating);
        let fv = x.f_vector();
        prop_assert_eq!(fv.f(-1), 1);
        prop_assert_eq!(fv.f(d as isize), x.facet_count());
    }

    #[test]
    fn link_degree_duality(
        d in 1usize..=3,
        extra in 0u32..4,
        m in 1usize..=10,
        seed in any::<u64>(),
    ) {
        let n = d as u32 + 2 + extra;
        let x = random_complex(d, n, m, seed);
        for ridge in x.faces(d as isize - 1).unwrap() {
            let degree = x.degree(&ridge).unwrap();
            let link = x.link(&ridge).unwrap();
            prop_assert_eq!(degree as u64, link.facet_count());
        }
    }

    #[test]
    fn double_counting_identity(
        d in 2usize..=3,
        extra in 0u32..4,
        m in 1usize..=12,
        seed in any::<u64>(),
    ) {
        let n = d as u32 + 2 + extra;
        let x = random_complex(d, n, m, seed);
        let verts: Vec<Vertex> = x.vertices().iter().copied().collect();
        let mut pair_sum = 0u64;
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                pair_sum += x.common_link_count(verts[i], verts[j]).unwrap() as u64;
            }
        }
        let mut ridge_sum = 0u64;
        for ridge in x.faces(d as isize - 1).unwrap() {
            let deg = x.degree(&ridge).unwrap() as u64;
            ridge_sum += deg * (deg - 1) / 2;
        }
        prop_assert_eq!(pair_sum, ridge_sum);
    }

    #[test]
    fn suspension_doubles_facets_and_flips_euler(
        d in 1usize..=3,
        extra in 0u32..4,
        m in 1usize..=8,
        seed in any::<u64>(),
    ) {
        let n = d as u32 + 2 + extra;
        let x = random_complex(d, n, m, seed);
        let s = x.suspension();
        prop_assert_eq!(s.dim(), x.dim() + 1);
        prop_assert_eq!(s.facet_count(), 2 * x.facet_count());
        prop_assert_eq!(s.euler_characteristic(), 2 - x.euler_characteristic());
    }

    #[test]
    fn connected_sum_facet_count(seed in any::<u64>(), pick in 0usize..4) {
        let spheres = [
            boundary_simplex(2).unwrap(),
            boundary_cross_polytope(2).unwrap(),
            cycle(5).unwrap().suspension(),
            cycle(6).unwrap().suspension(),
        ];
        let mut rng = SplitMix64::new(seed);
        let x = &spheres[pick];
        let y = &spheres[rng.below(spheres.len() as u64) as usize];
        let fx: Vec<Face> = x.facets().iter().cloned().collect();
        let fy: Vec<Face> = y.facets().iter().cloned().collect();
        let sx = rng.choose(&fx).clone();
        let sy = rng.choose(&fy).clone();
        let mut targets = sy.vertices().to_vec();
        rng.shuffle(&mut targets);
        let matching: Vec<(Vertex, Vertex)> =
            sx.vertices().iter().copied().zip(targets).collect();
        let sum = x.connected_sum(y, &sx, &sy, &matching).unwrap();
        prop_assert_eq!(sum.facet_count(), x.facet_count() + y.facet_count() - 2);
        prop_assert_eq!(sum.euler_characteristic(), 2);
    }

    #[test]
    fn balanced_colorings_are_proper(
        d in 1usize..=2,
        extra in 0u32..4,
        m in 1usize..=8,
        seed in any::<u64>(),
    ) {
        let n = d as u32 + 2 + extra;
        let x = random_complex(d, n, m, seed);
        if let Some(c) = x.is_balanced() {
            prop_assert!(c.is_proper_on(&x));
        }
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(
        d in 1usize..=2,
        extra in 0u32..4,
        m in 1usize..=8,
        seed in any::<u64>(),
    ) {
        let n = d as u32 + 2 + extra;
        let x = random_complex(d, n, m, seed);
        let canon = canonical_form(&x);
        let mut rng = SplitMix64::new(seed ^ 0xABCD);
        let verts: Vec<Vertex> = x.vertices().iter().copied().collect();
        let mut images: Vec<Vertex> = (50..50 + verts.len() as u32).collect();
        rng.shuffle(&mut images);
        let map: BTreeMap<Vertex, Vertex> =
            verts.iter().copied().zip(images).collect();
        let relabeled = Complex::new(
            x.dim(),
            x.facets()
                .iter()
                .map(|f| f.vertices().iter().map(|v| map[v]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(canonical_form(&relabeled), canon);
    }

    #[test]
    fn sampling_is_deterministic_and_coupled(seed in any::<u64>()) {
        let base = LMParams { n: 12, d: 2, p: 0.2, seed };
        let a = sample_lm(&base).unwrap();
        let b = sample_lm(&base).unwrap();
        prop_assert_eq!(&a, &b);
        let denser = sample_lm(&LMParams { p: 0.6, ..base }).unwrap();
        prop_assert!(a.facets().is_subset(denser.facets()));
    }

    #[test]
    fn traces_replay_exactly(seed in any::<u64>(), flips in 1u64..20, m in 1u64..10) {
        let x0 = boundary_cross_polytope(2).unwrap();
        let (x, trace) = flip_sequence(&x0, flips, seed).unwrap();
        prop_assert_eq!(replay_trace(&trace).unwrap(), x);

        let (t, trace) = tree_of_simplices(2, m, seed).unwrap();
        prop_assert_eq!(replay_trace(&trace).unwrap(), t);
    }

    #[test]
    fn two_lc_replay_and_verdicts(seed in any::<u64>()) {
        if let Some((x, trace)) = two_lc_generate(2, 6, seed, 4, LcMode::TwoLc).unwrap() {
            prop_assert_eq!(&replay_trace(&trace).unwrap(), &x);
            prop_assert!(verify_sphere(&x, Effort::default()).is_yes());
        }
    }

    #[test]
    fn verdict_invariant_under_relabeling(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let sphere = cycle(4 + (seed % 3) as u32).unwrap().suspension();
        let verts: Vec<Vertex> = sphere.vertices().iter().copied().collect();
        let mut images: Vec<Vertex> = (30..30 + verts.len() as u32).collect();
        rng.shuffle(&mut images);
        let map: BTreeMap<Vertex, Vertex> = verts.iter().copied().zip(images).collect();
        let relabeled = Complex::new(
            2,
            sphere
                .facets()
                .iter()
                .map(|f| f.vertices().iter().map(|v| map[v]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert_eq!(
            verify_sphere(&sphere, Effort::default()).status,
            verify_sphere(&relabeled, Effort::default()).status
        );
    }
}

/// Uniformly random colorings keep about `(d+1)!/(d+1)^{d+1}` of the facets.
#[test]
fn rainbow_fraction_matches_expectation() {
    let x = boundary_cross_polytope(2).unwrap().suspension().suspension();
    let d = x.dim();
    let colors = d as u64 + 1;
    let expected = {
        let mut fact = 1.0f64;
        for i in 2..=colors {
            fact *= i as f64;
        }
        fact / (colors as f64).powi(colors as i32)
    };
    let runs = 1500;
    let mut rng = SplitMix64::new(2024);
    let mut fractions = Vec::with_capacity(runs);
    for _ in 0..runs {
        let coloring = Coloring::new(
            x.vertices().iter().map(|&v| (v, rng.below(colors) as u8)).collect(),
        );
        let kept = x.rainbow_subcomplex(&coloring).unwrap().facet_count();
        fractions.push(kept as f64 / x.facet_count() as f64);
    }
    let mean = fractions.iter().sum::<f64>() / runs as f64;
    let var = fractions.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (runs - 1) as f64;
    let se = (var / runs as f64).sqrt();
    assert!(
        (mean - expected).abs() <= 3.0 * se,
        "mean {mean:.5} vs expected {expected:.5} (3se = {:.5})",
        3.0 * se
    );
}
