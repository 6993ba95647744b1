use halftwist_oracle::{brute_force_factors, numeric_roots, power_iteration};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn numeric_roots_have_full_count_and_small_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let d = rng.gen_range(1..=8);
        let mut c: Vec<f64> = (0..=d).map(|_| f64::from(rng.gen_range(-20i32..=20))).collect();
        c[d] = f64::from(rng.gen_range(1..=20));
        let r = numeric_roots(&c, 1e-9).unwrap();
        assert_eq!(r.roots.len(), d);
        assert!(r.residuals.iter().all(|&x| x < 1e-9));
        let sum: Complex64 = r.roots.iter().sum();
        assert!((sum + c[d - 1] / c[d]).norm() < 1e-6 * (1.0 + sum.norm()), "{c:?}");
        for z in &r.roots {
            let scale: f64 = c.iter().enumerate().map(|(i, a)| a.abs() * z.norm().max(1.0).powi(i as i32)).sum();
            assert!(eval(&c, *z).norm() <= 1e-9 * scale);
        }
    }
}

#[test]
fn brute_force_factors_multiply_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let a: Vec<i64> = vec![rng.gen_range(-5..=5), rng.gen_range(1..=3)];
        let b: Vec<i64> = (0..rng.gen_range(2..=4)).map(|_| rng.gen_range(-5..=5)).chain([1]).collect();
        let p = mul(&a, &b);
        if p.len() > 5 {
            continue;
        }
        let f = brute_force_factors(&p, 1 << 16).unwrap().expect("product of two factors");
        let product = f.factors.iter().fold(vec![f.content], |acc, g| mul(&acc, g));
        assert_eq!(product, p);
    }
}

#[test]
fn power_iteration_matches_two_by_two_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| f64::from(rng.gen_range(1..=50)));
        let tr = a + d;
        let det = a * d - b * c;
        let exact = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
        let est = power_iteration(&[vec![a, b], vec![c, d]], 10_000);
        assert!(est.converged);
        assert!((est.estimate - exact).abs() < 1e-9 * exact);
    }
}
