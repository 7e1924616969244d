//! Reduction vs brute-force rank oracle, distance metric properties, and
//! stability under perturbation.

mod common;

use common::{
    brute_force_diagram, diagram_triples, exhaustive_bottleneck, exhaustive_wasserstein,
    finite_pairs,
};
use fibrilgeom::ph::{
    bottleneck, compare_structures, compute_persistence, vr_filtration, wasserstein, DiagramPoint,
    PersistenceDiagram,
};
use fibrilgeom::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cloud(rng: &mut ChaCha8Rng, n: usize, extent: f64) -> Vec<Vec3> {
    (0..n)
        .map(|_| {
            Vec3::new(
                rng.random_range(-extent..extent),
                rng.random_range(-extent..extent),
                rng.random_range(-extent..extent),
            )
        })
        .collect()
}

#[test]
fn reduction_matches_rank_oracle_on_small_clouds() {
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    for round in 0..60 {
        let n = 3 + (round % 6);
        let cloud = random_cloud(&mut rng, n, 2.0);
        let max_eps = if round % 3 == 0 { 1.5 } else { 10.0 };
        let complex = vr_filtration(&cloud, 2, max_eps).unwrap();
        let reduced = diagram_triples(&compute_persistence(&complex));
        let brute = brute_force_diagram(&complex);
        assert_eq!(reduced, brute, "cloud {round} with {n} points");
    }
}

#[test]
fn betti_counts_alive_at_critical_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..10 {
        let cloud = random_cloud(&mut rng, 7, 1.5);
        let complex = vr_filtration(&cloud, 2, 10.0).unwrap();
        let diagram = compute_persistence(&complex);
        let brute = brute_force_diagram(&complex);
        // Alive-class counts agree at every critical value.
        let mut values: Vec<f64> = complex.simplices().iter().map(|s| s.value).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for &t in &values {
            for dim in 0..2u8 {
                let alive_reduced = diagram
                    .in_dim(dim)
                    .filter(|p| p.birth <= t && p.death > t)
                    .count();
                let alive_brute = brute
                    .iter()
                    .filter(|(d, b, dth)| *d == dim && *b <= t && *dth > t)
                    .count();
                assert_eq!(alive_reduced, alive_brute);
            }
        }
    }
}

fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize) -> Vec<(f64, f64)> {
    let n = rng.random_range(0..=max_points);
    (0..n)
        .map(|_| {
            let birth: f64 = rng.random_range(0.0..3.0);
            let death = birth + rng.random_range(0.01..2.5);
            (birth, death)
        })
        .collect()
}

fn as_diagram(pairs: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram {
        points: pairs
            .iter()
            .map(|&(birth, death)| DiagramPoint {
                dim: 0,
                birth,
                death,
            })
            .collect(),
    }
}

#[test]
fn distances_match_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..40 {
        let d1 = random_diagram(&mut rng, 4);
        let d2 = random_diagram(&mut rng, 4);
        let p1 = as_diagram(&d1);
        let p2 = as_diagram(&d2);

        let b = bottleneck(&p1, &p2, 0).unwrap().value;
        assert_eq!(
            b,
            exhaustive_bottleneck(&d1, &d2),
            "bottleneck {d1:?} vs {d2:?}"
        );

        for q in [1.0, 2.0] {
            let w = wasserstein(&p1, &p2, 0, q).unwrap().value;
            let expected = exhaustive_wasserstein(&d1, &d2, q);
            assert!(
                (w - expected).abs() <= 1e-12 * expected.max(1.0),
                "wasserstein q={q}: {w} vs {expected}"
            );
        }
    }
}

#[test]
fn metric_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for _ in 0..15 {
        let diagrams: Vec<PersistenceDiagram> = (0..3)
            .map(|_| as_diagram(&random_diagram(&mut rng, 4)))
            .collect();
        for q in [1.0, 2.0] {
            let dist = |a: &PersistenceDiagram, b: &PersistenceDiagram| {
                (
                    bottleneck(a, b, 0).unwrap().value,
                    wasserstein(a, b, 0, q).unwrap().value,
                )
            };
            let (b01, w01) = dist(&diagrams[0], &diagrams[1]);
            let (b10, w10) = dist(&diagrams[1], &diagrams[0]);
            assert!((b01 - b10).abs() < 1e-9);
            assert!((w01 - w10).abs() < 1e-9);
            let (b12, w12) = dist(&diagrams[1], &diagrams[2]);
            let (b02, w02) = dist(&diagrams[0], &diagrams[2]);
            assert!(b02 <= b01 + b12 + 1e-9);
            assert!(w02 <= w01 + w12 + 1e-9);
            // Bottleneck bounds Wasserstein from below.
            assert!(b01 <= w01 + 1e-9);
        }
        let self_b = bottleneck(&diagrams[0], &diagrams[0], 0).unwrap().value;
        assert_eq!(self_b, 0.0);
    }
}

#[test]
fn rigid_motion_gives_zero_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(74);
    let cloud = random_cloud(&mut rng, 12, 3.0);
    let axis = nalgebra::Unit::new_normalize(Vec3::new(0.2, -0.9, 0.5));
    let rot = nalgebra::Rotation3::from_axis_angle(&axis, 0.77);
    let moved: Vec<Vec3> = cloud
        .iter()
        .map(|p| rot * p + Vec3::new(4.0, 1.0, -2.0))
        .collect();
    let report = compare_structures(&cloud, &moved, 5.0, 1.0).unwrap();
    assert!(report.dim0.bottleneck < 1e-9);
    assert!(report.dim0.wasserstein < 1e-9);
    assert!(report.dim1.bottleneck < 1e-9);
    assert!(report.dim1.wasserstein < 1e-9);
}

#[test]
fn perturbation_stays_within_stability_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(75);
    let cloud = random_cloud(&mut rng, 10, 2.0);
    let delta = 0.01;
    let mut perturbed = cloud.clone();
    perturbed[3] += Vec3::new(delta, 0.0, 0.0);
    let report = compare_structures(&cloud, &perturbed, 4.0, 1.0).unwrap();
    // Hausdorff distance of the clouds is delta/..; VR filtration values move
    // by at most delta/2 under the radius convention, so bottleneck too.
    assert!(report.dim0.bottleneck <= delta / 2.0 + 1e-12);
    assert!(report.dim1.bottleneck <= delta / 2.0 + 1e-12);

    // Exactness cross-check against the brute-force diagrams.
    let c1 = vr_filtration(&cloud, 2, 4.0).unwrap();
    let c2 = vr_filtration(&perturbed, 2, 4.0).unwrap();
    assert_eq!(
        diagram_triples(&compute_persistence(&c1)),
        brute_force_diagram(&c1)
    );
    assert_eq!(
        diagram_triples(&compute_persistence(&c2)),
        brute_force_diagram(&c2)
    );
}

#[test]
fn wasserstein_dominates_bottleneck_on_clouds() {
    let mut rng = ChaCha8Rng::seed_from_u64(76);
    for _ in 0..5 {
        let c1 = random_cloud(&mut rng, 9, 2.0);
        let c2 = random_cloud(&mut rng, 9, 2.0);
        let d1 = compute_persistence(&vr_filtration(&c1, 2, 6.0).unwrap()).replace_infinite(6.0);
        let d2 = compute_persistence(&vr_filtration(&c2, 2, 6.0).unwrap()).replace_infinite(6.0);
        for dim in 0..2u8 {
            let b = bottleneck(&d1, &d2, dim).unwrap().value;
            for q in [1.0, 2.0, 3.0] {
                let w = wasserstein(&d1, &d2, dim, q).unwrap().value;
                assert!(b <= w + 1e-9, "dim {dim} q {q}: {b} > {w}");
            }
        }
    }
}

#[test]
fn matching_achieves_reported_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let d1 = random_diagram(&mut rng, 4);
        let d2 = random_diagram(&mut rng, 4);
        let p1 = as_diagram(&d1);
        let p2 = as_diagram(&d2);
        let pairs1 = finite_pairs(&p1, 0);
        let pairs2 = finite_pairs(&p2, 0);
        let pairing_cost = |pairing: &fibrilgeom::ph::Pairing| -> f64 {
            match *pairing {
                fibrilgeom::ph::Pairing::Points { first, second } => {
                    let a = pairs1[first];
                    let b = pairs2[second];
                    (a.0 - b.0).abs().max((a.1 - b.1).abs())
                }
                fibrilgeom::ph::Pairing::FirstToDiagonal { first } => {
                    (pairs1[first].1 - pairs1[first].0) / 2.0
                }
                fibrilgeom::ph::Pairing::SecondToDiagonal { second } => {
                    (pairs2[second].1 - pairs2[second].0) / 2.0
                }
            }
        };

        let result = bottleneck(&p1, &p2, 0).unwrap();
        let worst = result
            .matching
            .iter()
            .map(pairing_cost)
            .fold(0.0f64, f64::max);
        assert!(
            (worst - result.value).abs() <= 1e-12,
            "{worst} vs {}",
            result.value
        );

        for q in [1.0, 2.0] {
            let result = wasserstein(&p1, &p2, 0, q).unwrap();
            let total: f64 = result
                .matching
                .iter()
                .map(|p| pairing_cost(p).powf(q))
                .sum();
            let achieved = (total + 0.0).powf(1.0 / q);
            assert!(
                (achieved - result.value).abs() <= 1e-12 * result.value.max(1.0),
                "q={q}: {achieved} vs {}",
                result.value
            );
        }
    }
}
