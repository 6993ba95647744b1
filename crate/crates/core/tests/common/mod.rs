//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use halftwist::construction::ConstructionSpec;
use halftwist::engine::{transition_matrix, TrackFamily};
use halftwist::{catalog, IntMatrix};
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The word in the oracle's plain `(puncture, power)` form.
pub fn oracle_word(spec: &ConstructionSpec) -> Vec<Vec<(usize, u32)>> {
    spec.word()
        .iter()
        .map(|s| s.twists().map(|(p, l)| (p.index(), l)).collect())
        .collect()
}

pub fn q(n: u32, d: u32) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rand_pos(rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.gen_range(1..=500), rng.gen_range(1..=20))
}

/// Splits `total > 0` into three positive parts.
fn split3(rng: &mut ChaCha8Rng, total: &BigRational) -> [BigRational; 3] {
    let (x, y, z) = (rand_pos(rng), rand_pos(rng), rand_pos(rng));
    let s = &x + &y + &z;
    [total * &x / &s, total * &y / &s, total * &z / &s]
}

/// Three positive values satisfying the triangle inequalities.
fn triangle(rng: &mut ChaCha8Rng) -> [BigRational; 3] {
    let (x, y) = (rand_pos(rng), rand_pos(rng));
    let lo = (&x - &y).abs();
    let hi = &x + &y;
    let t = q(rng.gen_range(1..=99), 100);
    let z = &lo + (&hi - &lo) * t;
    [x, y, z]
}

pub fn sample_admissible(family: TrackFamily, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let mut r = || rand_pos(rng);
    match family {
        TrackFamily::A => {
            let (a, b, f) = (r(), r(), r());
            let [c, d, e] = split3(rng, &(&a + &b + &f));
            vec![a, b, c, d, e, f]
        }
        TrackFamily::B => {
            let (a, c, e) = (r(), r(), r());
            let [x, y, z] = triangle(rng);
            vec![a.clone(), a + x, c.clone(), c + y, e.clone(), e + z]
        }
        TrackFamily::C => {
            let (a, b, c, g) = (r(), r(), r(), r());
            let [d, e, f] = split3(rng, &(&a + &b + &c + &g));
            vec![a, b, c, d, e, f, g]
        }
        TrackFamily::D => {
            let (a, b, d, f) = (r(), r(), r(), r());
            let [x, y, z] = triangle(rng);
            vec![a.clone(), b.clone(), a + b + x, d.clone(), d + y, f.clone(), f + z]
        }
    }
}

pub fn track_matrix(family: TrackFamily) -> IntMatrix {
    let spec = match family {
        TrackFamily::A => catalog::phi(),
        TrackFamily::B => catalog::phi_bar(),
        TrackFamily::C => catalog::phi_prime(),
        TrackFamily::D => catalog::phi_bar_prime(),
    };
    transition_matrix(&spec).unwrap().into_matrix()
}

