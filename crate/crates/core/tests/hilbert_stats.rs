use mubqkd::gf::Field;
use mubqkd::hilbert::{
    born_probabilities, born_sample, inner, swap_test, tensor, StateVec, SwapOutcome, ALGEBRAIC_TOL,
};
use mubqkd::mub::{mub_basis, mub_state, BasisId, MubLabel};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// ‖(I - SWAP)/2 (u ⊗ v)‖², built entry by entry.
fn antisymmetric_projector_probability(u: &StateVec, v: &StateVec) -> f64 {
    let d = u.dim();
    let uv = tensor(u, v);
    let mut projected = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            projected[i * d + j] = (uv.amps()[i * d + j] - uv.amps()[j * d + i]) * 0.5;
        }
    }
    projected.iter().map(|a| a.norm_sqr()).sum()
}

fn swap_frequency(u: &StateVec, v: &StateVec, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anti = (0..trials)
        .filter(|_| swap_test(u.clone(), v.clone(), &mut rng).unwrap() == SwapOutcome::Antisymmetric)
        .count();
    anti as f64 / trials as f64
}

#[test]
fn born_frequencies_uniform_for_mub_state() {
    let f = Field::new(3, 1).unwrap();
    let state = mub_state(&f, &MubLabel::quadratic(f.one(), f.zero()));
    let basis = mub_basis(&f, &BasisId::Computational);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let draws = 10_000;
    let mut counts = [0usize; 3];
    for _ in 0..draws {
        let (k, post) = born_sample(&state, &basis, &mut rng).unwrap();
        assert_eq!(post, basis[k]);
        counts[k] += 1;
    }
    let tol = 3.0 * sigma(1.0 / 3.0, draws);
    for c in counts {
        assert!((c as f64 / draws as f64 - 1.0 / 3.0).abs() < tol, "{counts:?}");
    }
}

#[test]
fn born_frequencies_match_analytic_probabilities() {
    let f = Field::new(5, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let state = StateVec::new(
        (0..5)
            .map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>() - 0.5))
            .collect(),
    )
    .normalized();
    let basis = mub_basis(&f, &BasisId::Quadratic(f.scalar(2)));
    let probs = born_probabilities(&state, &basis).unwrap();
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    let draws = 10_000;
    let mut counts = [0usize; 5];
    for _ in 0..draws {
        counts[born_sample(&state, &basis, &mut rng).unwrap().0] += 1;
    }
    for (c, p) in counts.iter().zip(&probs) {
        let tol = 3.0 * sigma(*p, draws) + 1e-12;
        assert!((*c as f64 / draws as f64 - p).abs() < tol, "{counts:?} vs {probs:?}");
    }
}

#[test]
fn probabilities_sum_to_one_in_every_basis() {
    let f = Field::new(3, 2).unwrap();
    let state = mub_state(&f, &MubLabel::quadratic(f.from_index(5).unwrap(), f.from_index(7).unwrap()));
    for id in mubqkd::mub::all_bases(&f) {
        let probs = born_probabilities(&state, &mub_basis(&f, &id)).unwrap();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn swap_oracle_agrees_with_overlap_formula() {
    let f = Field::new(3, 1).unwrap();
    let u = mub_state(&f, &MubLabel::quadratic(f.zero(), f.zero()));
    let v = mub_state(&f, &MubLabel::quadratic(f.one(), f.zero()));
    let oracle = antisymmetric_projector_probability(&u, &v);
    assert!((oracle - 1.0 / 3.0).abs() < ALGEBRAIC_TOL);
    let e0 = StateVec::basis_vector(3, 0);
    let e1 = StateVec::basis_vector(3, 1);
    assert!((antisymmetric_projector_probability(&e0, &e1) - 0.5).abs() < ALGEBRAIC_TOL);
    assert!(antisymmetric_projector_probability(&u, &u).abs() < ALGEBRAIC_TOL);
    assert!((inner(&u, &v).unwrap().norm() - 1.0 / 3f64.sqrt()).abs() < ALGEBRAIC_TOL);
}

#[test]
fn swap_test_orthogonal_states() {
    let e0 = StateVec::basis_vector(3, 0);
    let e1 = StateVec::basis_vector(3, 1);
    let expected = antisymmetric_projector_probability(&e0, &e1);
    let freq = swap_frequency(&e0, &e1, 10_000, 23);
    assert!((freq - expected).abs() < 0.015, "{freq}");
}

#[test]
fn swap_test_mub_cross_pair() {
    let f = Field::new(3, 1).unwrap();
    let u = mub_state(&f, &MubLabel::quadratic(f.zero(), f.zero()));
    let v = mub_state(&f, &MubLabel::quadratic(f.one(), f.zero()));
    let expected = antisymmetric_projector_probability(&u, &v);
    let trials = 10_000;
    let freq = swap_frequency(&u, &v, trials, 24);
    assert!((freq - expected).abs() < 3.0 * sigma(expected, trials), "{freq}");
}
