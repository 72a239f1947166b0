mod common;

use common::{in_disc, max_abs_diff, max_norm, rng};
use polygen_core::numerics::CoeffVector;
use polygen_core::seeds::{
    q_affine_wrap, seed_closed_form, seed_closed_form_series, seed_step, AffineParams, RationalRotation, Schedule,
    SecondOrderParams, SeedSpec,
};
use polygen_core::Complex64;
use rand::Rng;

fn iterate(spec: &SeedSpec, initial: &[CoeffVector], steps: usize) -> Vec<CoeffVector> {
    let mut ys = initial.to_vec();
    let p = spec.order();
    for ell in 0..=steps - p {
        let next = seed_step(spec, &ys[ell..ell + p], ell).unwrap();
        ys.push(next);
    }
    ys
}

fn relative_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    max_abs_diff(a, b) / (1.0 + max_norm(a))
}

fn random_vec(r: &mut impl Rng, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n).map(|_| in_disc(r, radius)).collect()
}

#[test]
fn affine_step_agrees_with_closed_form() {
    let mut r = rng(21);
    for draw in 0..100 {
        let n = 1 + draw % 5;
        let a = random_vec(&mut r, n, 1.0);
        let spec = SeedSpec::affine(a, random_vec(&mut r, n, 2.0)).unwrap();
        let y0 = vec![random_vec(&mut r, n, 2.0)];
        let it = iterate(&spec, &y0, 100);
        let cf = seed_closed_form_series(&spec, &y0, 100).unwrap();
        for ell in 0..=100 {
            assert!(relative_gap(&it[ell], &cf[ell]) <= 1e-10, "draw {draw} ell {ell}");
        }
    }
}

#[test]
fn nonautonomous_step_agrees_with_closed_form() {
    let mut r = rng(22);
    for draw in 0..100 {
        let n = 1 + draw % 4;
        let (phase, amp) = (r.gen_range(0.0..6.0), r.gen_range(0.5..1.0));
        let shift: Vec<Complex64> = random_vec(&mut r, n, 1.0);
        let g = Schedule::varying(move |ell| {
            (0..n)
                .map(|m| Complex64::from_polar(amp + 0.1 * (ell as f64 * 0.3).sin(), phase * (m + 1) as f64 + ell as f64 * 0.1))
                .collect()
        });
        let h = Schedule::varying(move |ell| shift.iter().map(|s| s * (1.0 + 0.5 * (ell as f64).cos())).collect());
        let spec = SeedSpec::nonautonomous(n, g, h).unwrap();
        let y0 = vec![random_vec(&mut r, n, 2.0)];
        let it = iterate(&spec, &y0, 100);
        let cf = seed_closed_form_series(&spec, &y0, 100).unwrap();
        for ell in 0..=100 {
            assert!(relative_gap(&it[ell], &cf[ell]) <= 1e-10, "draw {draw} ell {ell}");
            if ell % 25 == 0 {
                assert_eq!(seed_closed_form(&spec, &y0, ell).unwrap(), cf[ell]);
            }
        }
    }
}

/// Second-order parameters whose ratios `u_m` stay of modulus near one, so
/// the products neither blow up nor vanish over 100 steps.
fn bounded_second_order(r: &mut impl Rng, n: usize) -> (SeedSpec, Vec<CoeffVector>) {
    let a: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, r.gen_range(0.0..6.3))).collect();
    let b: Vec<Complex64> = (0..n).map(|_| in_disc(r, 0.05)).collect();
    let y0 = random_vec(r, n, 2.0).into_iter().map(|z| z + 0.5).collect::<Vec<_>>();
    let y1 = y0.iter().map(|y| y * Complex64::from_polar(1.0, r.gen_range(0.0..6.3))).collect();
    let spec = SeedSpec::second_order(n, SecondOrderParams::autonomous(a, b)).unwrap();
    (spec, vec![y0, y1])
}

#[test]
fn second_order_step_agrees_with_closed_form() {
    let mut r = rng(23);
    let mut accepted = 0;
    while accepted < 100 {
        let n = 1 + accepted % 4;
        let (spec, init) = bounded_second_order(&mut r, n);
        let cf = seed_closed_form_series(&spec, &init, 100).unwrap();
        let big = cf.iter().map(|y| max_norm(y)).fold(0.0, f64::max);
        if big > 1e6 {
            continue;
        }
        accepted += 1;
        let it = iterate(&spec, &init, 100);
        for ell in 0..=100 {
            assert!(relative_gap(&it[ell], &cf[ell]) <= 1e-8, "ell {ell}");
        }
    }
}

#[test]
fn nonautonomous_second_order_closed_form() {
    let mut r = rng(24);
    for _ in 0..100 {
        let n = 2;
        let w = r.gen_range(0.0..6.0);
        let a = Schedule::varying(move |ell| vec![Complex64::from_polar(1.0, w + 0.01 * ell as f64); 2]);
        let b = Schedule::varying(|ell| vec![Complex64::new(0.01 * (ell as f64).sin(), 0.0); 2]);
        let spec = SeedSpec::second_order(n, SecondOrderParams { a, b }).unwrap();
        let y0 = vec![Complex64::new(1.0, 0.5), Complex64::new(-0.7, 1.0)];
        let y1 = vec![y0[0] * Complex64::from_polar(1.0, 0.3), y0[1] * Complex64::from_polar(1.0, -1.1)];
        let init = vec![y0, y1];
        let it = iterate(&spec, &init, 100);
        let cf = seed_closed_form_series(&spec, &init, 100).unwrap();
        for ell in 0..=100 {
            assert!(relative_gap(&it[ell], &cf[ell]) <= 1e-8);
        }
    }
}

#[test]
fn second_order_ratios_match_the_trajectory() {
    let mut r = rng(25);
    for _ in 0..50 {
        let (spec, init) = bounded_second_order(&mut r, 2);
        let polygen_core::seeds::SeedKind::SecondOrder(p) = spec.kind() else {
            unreachable!()
        };
        let (a, b) = (p.a.at(0), p.b.at(0));
        let ys = iterate(&spec, &init, 60);
        for m in 0..2 {
            let u0 = ys[1][m] / ys[0][m];
            for ell in 0..60 {
                let u = polygen_core::seeds::second_order_ratio(u0, a[m], b[m], ell);
                let ratio = ys[ell + 1][m] / ys[ell][m];
                assert!((u - ratio).norm() <= 1e-9 * (1.0 + ratio.norm()));
            }
        }
    }
}

#[test]
fn rotations_give_isochronous_coefficients() {
    let mut r = rng(26);
    for _ in 0..100 {
        let n = r.gen_range(1..=4);
        let rots: Vec<RationalRotation> = (0..n)
            .map(|_| loop {
                let p = r.gen_range(2..=8u64);
                let q = r.gen_range(-(p as i64)..=p as i64);
                if let Ok(rot) = RationalRotation::new(q, p) {
                    break rot;
                }
            })
            .collect();
        let period = rots.iter().fold(1u64, |acc, rot| lcm(acc, rot.period())) as usize;
        let a = rots.iter().map(|rot| rot.value()).collect();
        let spec = SeedSpec::affine(a, random_vec(&mut r, n, 2.0)).unwrap();
        let y0 = vec![random_vec(&mut r, n, 2.0)];
        let base = seed_closed_form(&spec, &y0, 0).unwrap();
        for k in 1..=10 {
            let y = seed_closed_form(&spec, &y0, k * period).unwrap();
            assert!(max_abs_diff(&y, &base) <= 1e-10 * (1.0 + max_norm(&base)));
        }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[test]
fn contracting_multipliers_reach_the_fixed_point() {
    let mut r = rng(27);
    for _ in 0..100 {
        let n = r.gen_range(1..=5);
        let a = random_vec(&mut r, n, 0.9);
        let b = random_vec(&mut r, n, 2.0);
        let limit: Vec<Complex64> = a.iter().zip(&b).map(|(a, b)| b / (1.0 - a)).collect();
        let spec = SeedSpec::affine(a, b).unwrap();
        let y = seed_closed_form(&spec, &[random_vec(&mut r, n, 5.0)], 500).unwrap();
        assert!(max_abs_diff(&y, &limit) <= 1e-6);
    }
}

#[test]
fn q_affine_matches_affine_coefficients() {
    let mut r = rng(28);
    for _ in 0..20 {
        let n = 3;
        let params = AffineParams {
            a: random_vec(&mut r, n, 1.0),
            b: random_vec(&mut r, n, 1.0),
        };
        let affine = SeedSpec::affine(params.a.clone(), params.b.clone()).unwrap();
        let q = q_affine_wrap(params, Complex64::new(2.0, 0.0)).unwrap();
        let y0 = vec![random_vec(&mut r, n, 1.0)];
        assert_eq!(iterate(&affine, &y0, 30), iterate(&q, &y0, 30));
        assert_eq!(
            seed_closed_form_series(&affine, &y0, 30).unwrap(),
            seed_closed_form_series(&q, &y0, 30).unwrap()
        );
        let stamps: Vec<Complex64> = (0..4).map(|ell| q.time_stamp(ell)).collect();
        assert_eq!(stamps, [1.0, 2.0, 4.0, 8.0].map(|t| Complex64::new(t, 0.0)));
    }
}
