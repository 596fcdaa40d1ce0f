mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_cubic, random_f_qso, random_point, random_skew, random_v1};
use qso::analysis::{count_first_row, priority_bounds, total_pairs};
use qso::cli::OperatorDocument;
use qso::operators::{
    ganikhodzhaev_lambda, ganikhodzhaev_v0, ganikhodzhaev_v1, skew_from_cubic, volterra_from_skew,
    Preset,
};
use qso::{classify, validate_stochastic, SimplexPoint};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn apply_stays_on_simplex(seed: u64, n in 2usize..8) {
        let mut r = rng(seed);
        let p = random_cubic(n, &mut r);
        let mut x = random_point(n, &mut r);
        for _ in 0..5 {
            x = p.apply(&x).unwrap();
            prop_assert!(x.coords().iter().all(|&c| c >= 0.0));
            prop_assert!((x.coords().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn volterra_round_trip(seed: u64, m in 2usize..7) {
        let mut r = rng(seed);
        let skew = random_skew(m, &mut r);
        let p = skew.to_cubic().unwrap();
        prop_assert!(validate_stochastic(p.raw()).ok);
        prop_assert_eq!(&skew_from_cubic(&p).unwrap(), &skew);
        let op = volterra_from_skew(skew);
        for _ in 0..20 {
            let x = random_point(m, &mut r);
            let a = op.apply(&x).unwrap();
            let b = p.apply(&x).unwrap();
            prop_assert!(a.max_distance(&b) <= 1e-14);
        }
    }

    #[test]
    fn lambda_blend_is_linear(lambda in 0.0f64..=1.0, seed: u64) {
        let x = random_point(3, &mut rng(seed));
        let blend = ganikhodzhaev_lambda(lambda).unwrap().eval(x.coords()).unwrap();
        let v0 = ganikhodzhaev_v0().eval(x.coords()).unwrap();
        let v1 = ganikhodzhaev_v1().eval(x.coords()).unwrap();
        for k in 0..3 {
            let mixed = (1.0 - lambda) * v0[k] + lambda * v1[k];
            prop_assert!((blend[k] - mixed).abs() <= 1e-15, "k = {k}: {} vs {mixed}", blend[k]);
        }
    }

    #[test]
    fn classes_are_exclusive(seed: u64, family in 0usize..4, m in 2usize..6) {
        let mut r = rng(seed);
        let p = match family {
            0 => random_skew(m, &mut r).to_cubic().unwrap(),
            1 => random_f_qso(m, &mut r).0,
            2 => random_v1(m, &mut r).0,
            _ => random_cubic(m, &mut r),
        };
        let c = classify(&p);
        let count = [c.is_volterra, c.is_strictly_non_volterra, c.is_f_qso()]
            .iter()
            .filter(|&&b| b)
            .count();
        prop_assert!(count <= 1);
        if family < 3 {
            prop_assert_eq!(count, 1);
        }
    }

    #[test]
    fn sampled_f_qso_respects_counting_bounds(seed: u64, m in 2usize..9) {
        let (p, females) = random_f_qso(m, &mut rng(seed));
        let c = count_first_row(&p);
        let (lower, upper) = priority_bounds(m, females.len());
        prop_assert_eq!(c.n1 + c.n1_tilde, total_pairs(m + 1));
        prop_assert!(c.n1 >= lower);
        prop_assert!(c.n1_tilde <= upper);
        prop_assert!(c.n1 > c.n1_tilde);
    }

    #[test]
    fn matrix_document_round_trip(seed: u64, n in 2usize..6) {
        let p = random_cubic(n, &mut rng(seed));
        let doc = OperatorDocument::from_matrix(&p);
        let text = doc.to_canonical_json().unwrap();
        let back = OperatorDocument::from_json(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_canonical_json().unwrap(), text);
        prop_assert_eq!(back.matrix().unwrap(), p);
    }
}

#[test]
fn pair_count_identity() {
    for m in 1..=20 {
        assert_eq!(total_pairs(m + 1), m * (m + 3) / 2 + 1);
    }
}

#[test]
fn counting_bounds_on_ten_thousand_samples() {
    let mut r = rng(42);
    for _ in 0..10_000 {
        let m = 2 + (rand::Rng::random_range(&mut r, 0..7));
        let (p, females) = random_f_qso(m, &mut r);
        let c = count_first_row(&p);
        let (lower, upper) = priority_bounds(m, females.len());
        assert!(
            c.n1 >= lower && c.n1_tilde <= upper,
            "m = {m}, F = {females:?}"
        );
    }
}

#[test]
fn preset_documents_round_trip() {
    let presets = [
        Preset::GanikhodzhaevV0,
        Preset::GanikhodzhaevV1,
        Preset::from_name("ganikhodzhaev_lambda", &[0.25]).unwrap(),
        Preset::from_name("fqso_v0_m2", &[0.2, 0.3, 0.5]).unwrap(),
        Preset::from_name("fqso_v1", &[2.0, 0.2, 0.3, 0.5]).unwrap(),
        Preset::ConstantM1,
    ];
    for preset in presets {
        let expected = preset.matrix().unwrap();
        let doc = OperatorDocument::from_preset(preset).unwrap();
        let back = OperatorDocument::from_json(&doc.to_canonical_json().unwrap()).unwrap();
        assert_eq!(back.matrix().unwrap(), expected);
    }
}

#[test]
fn vertex_is_fixed_for_every_sampled_f_qso() {
    let mut r = rng(3);
    for _ in 0..200 {
        let (p, _) = random_f_qso(2 + (rand::Rng::random_range(&mut r, 0..5)), &mut r);
        let e0 = SimplexPoint::vertex(p.n(), 0).unwrap();
        assert_eq!(p.apply(&e0).unwrap(), e0);
    }
}
