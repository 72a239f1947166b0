#![allow(dead_code)]

use polygen_core::numerics::RootSet;
use polygen_core::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform in the disc of radius `r`.
pub fn in_disc(rng: &mut impl Rng, r: f64) -> Complex64 {
    Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
}

pub fn min_separation(z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

/// `n` points in the disc of radius `r`, pairwise farther apart than `sep`.
pub fn generic_set(rng: &mut impl Rng, n: usize, r: f64, sep: f64) -> RootSet {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| in_disc(rng, r)).collect();
        if min_separation(&v) > sep {
            return RootSet::new(v);
        }
    }
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}
