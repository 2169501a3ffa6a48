mod support;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

use rigor::{Interval, IntervalError, Rational, Scalar};
use support::*;

fn apply<T: Scalar>(op: Op, x: &Interval<T>, y: &Interval<T>) -> Result<Interval<T>, IntervalError> {
    match op {
        Op::Add => x.add(y),
        Op::Sub => x.sub(y),
        Op::Mul => x.mul(y),
        Op::Div => x.div(y),
    }
}

fn encloses<T: Scalar>(z: &Interval<T>, lo: &BigRational, hi: &BigRational) -> bool {
    z.contains_rational(lo) && z.contains_rational(hi)
}

fn containment<T: Scalar>(
    seed: u64,
    cases: usize,
    gen: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Interval<T>,
    gen_nonzero: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Interval<T>,
) {
    let mut r = rng(seed);
    for op in OPS {
        for _ in 0..cases {
            let x = gen(&mut r);
            let y = if matches!(op, Op::Div) { gen_nonzero(&mut r) } else { gen(&mut r) };
            let z = match apply(op, &x, &y) {
                Ok(z) => z,
                Err(IntervalError::Overflow) => continue,
                Err(e) => panic!("{op:?} {x} {y}: {e}"),
            };
            let (a, b) = x.to_rationals();
            let (c, d) = y.to_rationals();
            for _ in 0..4 {
                let (u, v) = (point_in(&mut r, &a, &b), point_in(&mut r, &c, &d));
                assert!(z.contains_rational(&exact(op, &u, &v)), "{op:?}: {u} and {v} escape {z}");
            }
            let (lo, hi) = exact_range(op, (&a, &b), (&c, &d));
            assert!(encloses(&z, &lo, &hi), "{op:?} {x} {y} -> {z}");
        }
    }
}

#[test]
fn containment_f64() {
    containment(1, 5000, f64_interval, f64_nonzero_interval);
}

#[test]
fn containment_f32() {
    containment(2, 3000, f32_interval, |r| loop {
        let x = f32_interval(r);
        if !x.contains_zero() {
            return x;
        }
    });
}

#[test]
fn containment_rational() {
    containment(3, 3000, rat_interval, rat_nonzero_interval);
}

#[test]
fn rational_results_are_exact() {
    let mut r = rng(4);
    for op in OPS {
        for _ in 0..2000 {
            let x = rat_interval(&mut r);
            let y = if matches!(op, Op::Div) { rat_nonzero_interval(&mut r) } else { rat_interval(&mut r) };
            let z = apply(op, &x, &y).unwrap();
            let (a, b) = x.to_rationals();
            let (c, d) = y.to_rationals();
            assert_eq!(z.to_rationals(), exact_range(op, (&a, &b), (&c, &d)));
        }
    }
}

#[test]
fn f64_endpoints_are_tight() {
    let mut r = rng(5);
    for op in OPS {
        for _ in 0..5000 {
            let x = f64_interval(&mut r);
            let y = if matches!(op, Op::Div) { f64_nonzero_interval(&mut r) } else { f64_interval(&mut r) };
            let Ok(z) = apply(op, &x, &y) else { continue };
            let (a, b) = x.to_rationals();
            let (c, d) = y.to_rationals();
            let (lo, hi) = exact_range(op, (&a, &b), (&c, &d));
            let (want_lo, want_hi) = (f64_down(&lo), f64_up(&hi));
            assert!(*z.lo() <= want_lo && *z.lo() >= want_lo.next_down(), "{op:?} {x} {y}: lo {}", z.lo());
            assert!(*z.hi() >= want_hi && *z.hi() <= want_hi.next_up(), "{op:?} {x} {y}: hi {}", z.hi());
        }
    }
}

#[test]
fn powers_contain_and_are_tight_on_rationals() {
    let mut r = rng(6);
    for _ in 0..2000 {
        let x = rat_interval(&mut r);
        let n = r.gen_range(0..7u32);
        let z = x.pow(n).unwrap();
        let (a, b) = x.to_rationals();
        let mut lo = None::<BigRational>;
        let mut hi = None::<BigRational>;
        let mut pts = vec![a.clone(), b.clone()];
        if x.contains_zero() {
            pts.push(q(0, 1));
        }
        for _ in 0..6 {
            pts.push(point_in(&mut r, &a, &b));
        }
        for p in pts {
            let v = num_traits::pow::pow(p, n as usize);
            assert!(z.contains_rational(&v));
            lo = Some(lo.map_or(v.clone(), |l| l.min(v.clone())));
            hi = Some(hi.map_or(v.clone(), |h| h.max(v)));
        }
        // Endpoints and zero carry the extrema of a power.
        let (l, h) = z.to_rationals();
        assert!(l == lo.unwrap() && h == hi.unwrap(), "{x}^{n} = {z}");
        let naive = x.pow_naive(n).unwrap();
        assert!(z.subset(&naive));
    }
}

#[test]
fn f32_agrees_with_f64_outward() {
    let mut r = rng(7);
    for op in OPS {
        for _ in 0..2000 {
            let x = f32_interval(&mut r);
            let y = f32_interval(&mut r);
            if matches!(op, Op::Div) && y.contains_zero() {
                continue;
            }
            let Ok(z) = apply(op, &x, &y) else { continue };
            let wide = |v: &Interval<f32>| Interval::new(*v.lo() as f64, *v.hi() as f64).unwrap();
            let Ok(w) = apply(op, &wide(&x), &wide(&y)) else { continue };
            assert!(w.subset(&wide(&z)), "{op:?}: f64 {w} vs f32 {z}");
        }
    }
}

fn interval_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-1e6f64..1e6, -1e6f64..1e6).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

fn sub_of(x: &Interval<f64>, s: f64, t: f64) -> Interval<f64> {
    let (lo, hi) = (*x.lo(), *x.hi());
    let p = |u: f64| (lo + (hi - lo) * u).clamp(lo, hi);
    let (a, b) = (p(s), p(t));
    Interval::new(a.min(b), a.max(b)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn inclusion_monotone(
        (a, b) in interval_strategy(), (c, d) in interval_strategy(),
        s in 0f64..1.0, t in 0f64..1.0, u in 0f64..1.0, v in 0f64..1.0,
    ) {
        let x = Interval::new(a, b).unwrap();
        let y = Interval::new(c, d).unwrap();
        let (xs, ys) = (sub_of(&x, s, t), sub_of(&y, u, v));
        for op in OPS {
            if let (Ok(big), Ok(small)) = (apply(op, &x, &y), apply(op, &xs, &ys)) {
                prop_assert!(small.subset(&big), "{:?}: {} not in {}", op, small, big);
            }
        }
        for n in 0..5 {
            prop_assert!(xs.pow(n).unwrap().subset(&x.pow(n).unwrap()));
        }
    }

    #[test]
    fn lattice_operations((a, b) in interval_strategy(), (c, d) in interval_strategy()) {
        let x = Interval::new(a, b).unwrap();
        let y = Interval::new(c, d).unwrap();
        let h = x.hull(&y);
        prop_assert!(x.subset(&h) && y.subset(&h));
        match x.intersect(&y) {
            Some(i) => prop_assert!(i.subset(&x) && i.subset(&y)),
            None => prop_assert!(b < c || d < a),
        }
        prop_assert_eq!(x.lt(&y), b < c);
        prop_assert_eq!(x.le(&y), b <= c);
        let abs = x.abs();
        prop_assert!(*abs.lo() >= 0.0 && *abs.hi() == a.abs().max(b.abs()));
        prop_assert!(x.neg().neg() == x);
    }

    #[test]
    fn bisection_covers((a, b) in interval_strategy()) {
        let x = Interval::new(a, b).unwrap();
        if let Ok((l, r)) = x.bisect() {
            prop_assert_eq!(l.lo(), x.lo());
            prop_assert_eq!(r.hi(), x.hi());
            prop_assert_eq!(l.hi(), r.lo());
            prop_assert!(l.diam() < x.diam() && r.diam() < x.diam());
        } else {
            prop_assert!(Scalar::strictly_between(x.lo(), x.hi()).is_none());
        }
    }

    #[test]
    fn serialization_round_trips((a, b) in interval_strategy()) {
        let x = Interval::new(a, b).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        let back: Interval<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.lo().to_bits(), a.to_bits());
        prop_assert_eq!(back.hi().to_bits(), b.to_bits());
        let back = Interval::<f64>::from_repr(&x.to_repr(false)).unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn rational_serialization_round_trips() {
    let mut r = rng(8);
    for _ in 0..200 {
        let x = rat_interval(&mut r);
        let text = serde_json::to_string(&x).unwrap();
        let back: Interval<Rational> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
    }
}

#[test]
fn decimal_literals_are_enclosed() {
    let x = Interval::<f64>::from_literal("0.1").unwrap();
    let tenth = q(1, 10);
    assert!(x.contains_rational(&tenth));
    assert_eq!(x.lo().next_up(), *x.hi());
    assert!(Interval::<f64>::parse_exact("0.1").is_err());
    let y = Interval::<Rational>::from_literal("0.1").unwrap();
    assert_eq!(y.to_rationals(), (tenth.clone(), tenth));
}

#[test]
fn overflow_is_reported() {
    let big = Interval::new(f64::MAX / 2.0, f64::MAX).unwrap();
    assert!(matches!(big.add(&big), Err(IntervalError::Overflow)));
    assert!(matches!(big.mul(&big), Err(IntervalError::Overflow)));
    assert!(Interval::new(f64::NAN, 1.0).is_err());
    assert!(Interval::new(2.0, 1.0).is_err());
}
