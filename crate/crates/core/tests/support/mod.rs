//! Shared generators and exact oracles for the integration tests. The
//! oracles only use `num` big rationals, never the crate's own arithmetic.
#![allow(dead_code)]

pub mod exprs;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use rigor::{Interval, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn qf(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn rat(x: &BigRational) -> Rational {
    Rational::from_big(x.clone())
}

/// A float with a random sign, mantissa and a moderate exponent; sometimes
/// a small integer or zero.
pub fn float(r: &mut ChaCha8Rng) -> f64 {
    match r.gen_range(0..10) {
        0 => 0.0,
        1 | 2 => r.gen_range(-8i32..=8) as f64,
        3 | 4 => r.gen_range(-1.0..1.0),
        _ => {
            let m: f64 = r.gen_range(1.0..2.0);
            let e = r.gen_range(-40..40);
            let s = if r.gen_bool(0.5) { -1.0 } else { 1.0 };
            s * m * 2f64.powi(e)
        }
    }
}

pub fn f64_interval(r: &mut ChaCha8Rng) -> Interval<f64> {
    let (a, b) = (float(r), float(r));
    let (a, b) = if r.gen_bool(0.1) { (a, a) } else { (a.min(b), a.max(b)) };
    Interval::new(a, b).unwrap()
}

pub fn f64_nonzero_interval(r: &mut ChaCha8Rng) -> Interval<f64> {
    loop {
        let x = f64_interval(r);
        if !x.contains_zero() {
            return x;
        }
    }
}

pub fn f32_interval(r: &mut ChaCha8Rng) -> Interval<f32> {
    let (a, b) = (float(r) as f32, float(r) as f32);
    Interval::new(a.min(b), a.max(b)).unwrap()
}

pub fn small_rational(r: &mut ChaCha8Rng) -> BigRational {
    q(r.gen_range(-1000..=1000), r.gen_range(1..=1000))
}

pub fn rat_interval(r: &mut ChaCha8Rng) -> Interval<Rational> {
    let (a, b) = (small_rational(r), small_rational(r));
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    Interval::new(rat(&a), rat(&b)).unwrap()
}

pub fn rat_nonzero_interval(r: &mut ChaCha8Rng) -> Interval<Rational> {
    loop {
        let x = rat_interval(r);
        if !x.contains_zero() {
            return x;
        }
    }
}

/// A rational in `[lo, hi]`: an endpoint or a random lattice point between.
pub fn point_in(r: &mut ChaCha8Rng, lo: &BigRational, hi: &BigRational) -> BigRational {
    match r.gen_range(0..8) {
        0 => lo.clone(),
        1 => hi.clone(),
        _ => {
            let k = r.gen_range(0..=1024);
            lo + (hi - lo) * q(k, 1024)
        }
    }
}

/// A subinterval of `[lo, hi]` as rationals.
pub fn sub_interval(r: &mut ChaCha8Rng, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let a = point_in(r, lo, hi);
    let b = point_in(r, lo, hi);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

pub const OPS: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

pub fn exact(op: Op, x: &BigRational, y: &BigRational) -> BigRational {
    match op {
        Op::Add => x + y,
        Op::Sub => x - y,
        Op::Mul => x * y,
        Op::Div => x / y,
    }
}

/// Exact range of `X op Y` from the four endpoint combinations.
pub fn exact_range(
    op: Op,
    (a, b): (&BigRational, &BigRational),
    (c, d): (&BigRational, &BigRational),
) -> (BigRational, BigRational) {
    let vals = [exact(op, a, c), exact(op, a, d), exact(op, b, c), exact(op, b, d)];
    let lo = vals.iter().min().unwrap().clone();
    let hi = vals.iter().max().unwrap().clone();
    (lo, hi)
}

/// Largest float `<= q`.
pub fn f64_down(q: &BigRational) -> f64 {
    let f = q.to_f64().unwrap();
    if qf(f) > *q {
        f.next_down()
    } else {
        f
    }
}

/// Smallest float `>= q`.
pub fn f64_up(q: &BigRational) -> f64 {
    -f64_down(&-q)
}

pub fn pow2(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << e as usize)
}

const P: u32 = 256;

fn scale() -> BigInt {
    BigInt::one() << P as usize
}

fn fixed(x: &BigRational) -> BigInt {
    (x * BigRational::from_integer(scale())).floor().to_integer()
}

fn unfixed(m: BigInt) -> BigRational {
    BigRational::new(m, scale())
}

fn floor_p(x: &BigRational) -> BigRational {
    unfixed(fixed(x))
}

fn ceil_p(x: &BigRational) -> BigRational {
    unfixed(-fixed(&-x))
}

/// Fixed-point sum of `sum t_n` with `t_0 = first` and
/// `t_n = t_{n-1} * x2 / ((n0 + 2n - 1)(n0 + 2n))` style recurrences,
/// returned with a bound on the accumulated error in units of `2^-P`.
///
/// `ratio(n)` gives the integer divisor for step `n`, `mul` is the fixed
/// point multiplier and `growth` an integer upper bound on `|mul| / 2^P`.
fn series(first: BigInt, mul: &BigInt, growth: &BigInt, ratio: impl Fn(u32) -> BigInt, stop: u32) -> (BigInt, BigInt, BigInt) {
    let s = scale();
    let mut t = first;
    let mut sum = t.clone();
    let mut err = BigInt::zero();
    let mut term_err = BigInt::zero();
    for n in 1..stop {
        let d = ratio(n);
        t = (&t * mul).div_floor(&(&s * &d));
        term_err = (&term_err * growth).div_ceil(&d) + 1;
        sum += &t;
        err += &term_err;
    }
    (sum, err, t)
}

/// Bounds `lo <= e^x <= hi` accurate to about 2^-200 relative.
pub fn exp_bounds(x: &BigRational) -> (BigRational, BigRational) {
    let mut k = 0u32;
    while x.abs() > BigRational::new(BigInt::one(), BigInt::from(2)) * pow2(k) {
        k += 1;
    }
    let scaled = x / pow2(k);
    const N: u32 = 70;
    let one = BigInt::one();
    let r = fixed(&scaled);
    let slack = BigInt::from(2);
    let (sum, err, last) = series(scale(), &r, &one, |n| BigInt::from(n), N);
    // |r| <= 1/2: the tail is below twice the last term, plus the r rounding.
    let e = err + last.abs() * 2 + slack * BigInt::from(4);
    let mut lo = unfixed(&sum - &e);
    let mut hi = unfixed(&sum + &e);
    for _ in 0..k {
        lo = floor_p(&(&lo * &lo));
        hi = ceil_p(&(&hi * &hi));
    }
    (lo, hi)
}

/// Bounds on sin or cos at `x`, for `|x| <= 20`.
fn trig_bounds(x: &BigRational, odd: bool) -> (BigRational, BigRational) {
    assert!(x.abs() <= BigRational::from_integer(20.into()));
    let xf = fixed(x);
    let x2 = -((&xf * &xf) >> P as usize);
    let growth = BigInt::from(401);
    let (first, off) = if odd { (xf.clone(), 1) } else { (scale(), 0) };
    let (sum, err, last) = series(first, &x2, &growth, |n| {
        let m = 2 * n + off;
        BigInt::from((m - 1) * m)
    }, 90);
    // The alternating tail is below the last term once terms decrease; the
    // truncations of x and x^2 move the value by a few ulps times 2^40.
    let e = err + last.abs() + (BigInt::one() << 48usize);
    (unfixed(&sum - &e), unfixed(&sum + &e))
}

pub fn sin_bounds(x: &BigRational) -> (BigRational, BigRational) {
    trig_bounds(x, true)
}

pub fn cos_bounds(x: &BigRational) -> (BigRational, BigRational) {
    trig_bounds(x, false)
}

/// Whether `[lo, hi]` certainly contains `ln x`.
pub fn brackets_log(lo: &BigRational, hi: &BigRational, x: &BigRational) -> bool {
    exp_bounds(lo).1 <= *x && *x <= exp_bounds(hi).0
}

pub fn big_floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}
