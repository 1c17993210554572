use std::f64::consts::PI;

use merext_core::poles::candidate_polynomial;
use merext_core::cauchy::compute_moments;
use merext_core::{
    detect, BoundaryCurve, BoundarySamples, Complex64, DetectConfig, DomainBoundary, Polynomial,
    Verdict,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `R/S + E` with the roots of `S` as the oracle.
struct Fixture {
    poles: Vec<(Complex64, usize)>,
    r: Polynomial,
    e: Polynomial,
}

impl Fixture {
    fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unit = |rng: &mut ChaCha8Rng| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let degree = rng.gen_range(1..=3usize);
        let distinct = rng.gen_range(1..=degree);
        let mut mults = vec![1; distinct];
        for _ in distinct..degree {
            let k = rng.gen_range(0..distinct);
            mults[k] += 1;
        }
        let mut pts: Vec<Complex64> = Vec::new();
        while pts.len() < distinct {
            let z = Complex64::from_polar(0.6 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            if pts.iter().all(|w| (w - z).norm() >= 0.05) {
                pts.push(z);
            }
        }
        let r = loop {
            let r = Polynomial::new((0..degree).map(|_| unit(&mut rng)).collect());
            if pts.iter().all(|&w| r.eval(w).norm() > 0.1) {
                break r;
            }
        };
        let e = Polynomial::new((0..rng.gen_range(1..=4)).map(|_| unit(&mut rng)).collect());
        Fixture {
            poles: pts.into_iter().zip(mults).collect(),
            r,
            e,
        }
    }

    fn degree(&self) -> usize {
        self.poles.iter().map(|p| p.1).sum()
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        let s: Complex64 = self.poles.iter().map(|&(w, m)| (z - w).powu(m as u32)).product();
        self.r.eval(z) / s + self.e.eval(z)
    }
}

fn assert_recovers(found: &[merext_core::poles::Root], want: &[(Complex64, usize)], tol: f64) {
    assert_eq!(found.len(), want.len(), "found {found:?}, want {want:?}");
    for &(w, m) in want {
        let hit = found
            .iter()
            .find(|r| (r.z - w).norm() < tol)
            .unwrap_or_else(|| panic!("pole {w} missing from {found:?}"));
        assert_eq!(hit.multiplicity, m, "multiplicity at {w}");
    }
}

#[test]
fn random_rational_fixtures_recover_their_poles() {
    let d = DomainBoundary::unit_disc(256).unwrap();
    let cfg = DetectConfig::default();
    for seed in 0..120 {
        let fx = Fixture::random(seed);
        let f = BoundarySamples::from_fn(&d, |z| fx.eval(z)).unwrap();
        let r = detect(&d, &f, fx.degree(), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Meromorphic, "seed {seed}");
        assert!(!r.conflicting_evidence);
        assert_recovers(&r.poles, &fx.poles, 1e-6);
        if fx.degree() > 1 {
            let under = detect(&d, &f, fx.degree() - 1, &cfg).unwrap();
            assert!(!under.verdict.is_extendible(), "seed {seed}: too few poles accepted");
        }
    }
}

#[test]
fn larger_bounds_keep_the_same_poles() {
    let d = DomainBoundary::unit_disc(256).unwrap();
    let cfg = DetectConfig::default();
    for seed in 200..230 {
        let fx = Fixture::random(seed);
        let f = BoundarySamples::from_fn(&d, |z| fx.eval(z)).unwrap();
        for n in fx.degree()..=fx.degree() + 3 {
            let r = detect(&d, &f, n, &cfg).unwrap();
            assert!(r.verdict.is_extendible(), "seed {seed}, n {n}");
            assert_recovers(&r.poles, &fx.poles, 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn detection_is_scale_invariant(
        seed in 0u64..10_000,
        mag in 1e-3f64..1e3,
        arg in 0.0f64..(2.0 * PI),
    ) {
        let lambda = Complex64::from_polar(mag, arg);
        let d = DomainBoundary::unit_disc(256).unwrap();
        let fx = Fixture::random(seed);
        let f = BoundarySamples::from_fn(&d, |z| fx.eval(z)).unwrap();
        let cfg = DetectConfig::default();
        let a = detect(&d, &f, fx.degree(), &cfg).unwrap();
        let b = detect(&d, &f.scaled(lambda), fx.degree(), &cfg).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.poles.len(), b.poles.len());
        for (p, q) in a.poles.iter().zip(&b.poles) {
            prop_assert!((p.z - q.z).norm() < 1e-8);
            prop_assert_eq!(p.multiplicity, q.multiplicity);
        }
        // the normalized null vector does not see the scale either
        let ma = compute_moments(&d, &f, 2 * fx.degree()).unwrap();
        let mb = compute_moments(&d, &f.scaled(lambda), 2 * fx.degree()).unwrap();
        let pa = candidate_polynomial(&ma, fx.degree(), &d, &cfg.roots).unwrap();
        let pb = candidate_polynomial(&mb, fx.degree(), &d, &cfg.roots).unwrap();
        for (x, y) in pa.coeffs.iter().zip(&pb.coeffs) {
            prop_assert!((x - y).norm() < 1e-8);
        }
    }

    #[test]
    fn poles_follow_translated_domains(
        seed in 0u64..10_000,
        sx in -3.0f64..3.0,
        sy in -3.0f64..3.0,
    ) {
        let shift = c(sx, sy);
        let d = DomainBoundary::new(vec![BoundaryCurve::circle(shift, 1.0, 256).unwrap()]).unwrap();
        let fx = Fixture::random(seed);
        let f = BoundarySamples::from_fn(&d, |z| fx.eval(z - shift)).unwrap();
        let r = detect(&d, &f, fx.degree(), &DetectConfig::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Meromorphic);
        let moved: Vec<_> = fx.poles.iter().map(|&(w, m)| (w + shift, m)).collect();
        // moments grow with |shift|, so allow a little more than at the origin
        assert_recovers(&r.poles, &moved, 1e-6 * (1.0 + shift.norm()));
    }

    #[test]
    fn boundary_zero_is_discarded(
        theta in 0.0f64..(2.0 * PI),
        k in 0usize..3,
    ) {
        let b = Complex64::cis(theta);
        let d = DomainBoundary::unit_disc(256).unwrap();
        let f = BoundarySamples::from_fn(&d, |z| (z - b) * (z * (k as f64 + 1.0)).exp()).unwrap();
        let r = detect(&d, &f, 1, &DetectConfig::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Holomorphic);
        prop_assert!(r.poles.is_empty());
        prop_assert!(!r.conflicting_evidence);
    }
}
