//! Interval extensions of elementary functions.
//!
//! Each function is evaluated at the endpoints of its argument (or at the
//! single point of a degenerate argument) in fixed-point interval
//! arithmetic, with series remainders bounded explicitly. The working
//! precision grows until each endpoint is known to within a quarter of the
//! requested tolerance, or, on floating-point backends, to a few bits below
//! the significand width.

mod consts;
mod kernel;
mod step;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::IntervalError;
use crate::interval::Interval;
use crate::scalar::{Round, Scalar};
use kernel::{Arg, Fix, Fx};

pub use step::{step_extension, StepSpec};

/// Largest `|x|` accepted by [`exp_iv`].
pub const EXP_ARG_LIMIT: i64 = 1 << 16;

const MAX_PREC: u32 = 1 << 15;

#[derive(Clone, Copy, Debug)]
enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
}

/// Accuracy target for one endpoint.
#[derive(Clone, Copy, Debug)]
struct Target {
    /// Accept when the enclosure width is at most `2^-abs_bits`.
    abs_bits: u32,
    /// Accept when the relative width is at most `2^-rel_bits`.
    rel_bits: Option<u32>,
    /// Exact backends snap endpoints outward to multiples of
    /// `2^-(abs_bits + 1)`.
    snap: bool,
}

impl Target {
    fn new<T: Scalar>(tol: &T) -> Result<Self, IntervalError> {
        if *tol <= T::zero() {
            return Err(IntervalError::Domain("tolerance must be positive".into()));
        }
        let (num, den) = match tol.small_ratio() {
            Some((n, d)) => (BigInt::from(n), BigInt::from(d)),
            None => {
                let q = tol.to_rational();
                (q.numer().clone(), q.denom().clone())
            }
        };
        // Smallest b with 2^-b <= tol, i.e. num * 2^b >= den.
        let scaled_ge = |b: i64| {
            if b >= 0 {
                (&num << b as usize) >= den
            } else {
                num >= (&den << (-b) as usize)
            }
        };
        let mut b = den.bits() as i64 - num.bits() as i64;
        while !scaled_ge(b) {
            b += 1;
        }
        while b > 0 && scaled_ge(b - 1) {
            b -= 1;
        }
        let abs_bits = (b.max(0) + 2) as u32;
        Ok(Target {
            abs_bits: if T::MANTISSA_BITS.is_some() { abs_bits.min(1200) } else { abs_bits },
            rel_bits: T::MANTISSA_BITS.map(|m| m + 4),
            snap: T::MANTISSA_BITS.is_none(),
        })
    }

    fn accepts(&self, e: &Encl) -> bool {
        let width = &e.hi - &e.lo;
        if width.is_zero() {
            return true;
        }
        let wb = width.bits() as i64;
        if wb + e.exp <= -(self.abs_bits as i64) {
            return true;
        }
        match self.rel_bits {
            Some(r) => {
                let lo_bits = e.lo.magnitude().min(e.hi.magnitude()).bits() as i64;
                wb + r as i64 <= lo_bits - 1
            }
            None => false,
        }
    }
}

/// `[lo, hi] * 2^exp`.
#[derive(Clone, Debug)]
struct Encl {
    lo: BigInt,
    hi: BigInt,
    exp: i64,
}

fn arg_of<T: Scalar>(x: &T) -> Arg {
    match x.small_ratio() {
        Some((n, d)) => Arg {
            num: BigInt::from(n),
            den: BigInt::from(d),
        },
        None => {
            let q = x.to_rational();
            Arg {
                num: q.numer().clone(),
                den: q.denom().clone(),
            }
        }
    }
}

fn evaluate<N: Fix>(f: Func, x: &Arg, prec: u32, k: &BigInt) -> Option<Encl> {
    let (fx, exp): (Fx<N>, i64) = match f {
        Func::Exp => (kernel::exp_fix(x, prec, k)?, k.to_i64()? - prec as i64),
        Func::Log => (kernel::log_fix(x, prec, k.to_i64()?)?, -(prec as i64)),
        Func::Sin => (kernel::sincos_fix(x, prec, k, false)?, -(prec as i64)),
        Func::Cos => (kernel::sincos_fix(x, prec, k, true)?, -(prec as i64)),
        Func::Sqrt => {
            let (lo, hi, exp) = kernel::sqrt_fix(x, prec);
            return Some(Encl { lo, hi, exp });
        }
    };
    Some(Encl {
        lo: fx.lo.to_big(),
        hi: fx.hi.to_big(),
        exp,
    })
}

/// Integer `k` such that reducing `x` by `k` periods leaves a small residue.
fn reduction(f: Func, x: &Arg) -> BigInt {
    let approx = x.approx();
    match f {
        Func::Exp => BigInt::from((approx / std::f64::consts::LN_2).round() as i64),
        Func::Log => BigInt::from(x.num.bits() as i64 - x.den.bits() as i64),
        Func::Sqrt => BigInt::zero(),
        Func::Sin | Func::Cos => {
            if approx.abs() < 1e15 {
                return BigInt::from((approx / std::f64::consts::FRAC_PI_2).round() as i64);
            }
            // Quotient by an enclosure of pi/2 accurate well beyond the
            // magnitude of x.
            let prec = (x.num.bits() as u32).saturating_sub(x.den.bits() as u32) + 64;
            let c = consts::pi(prec);
            let scaled = &x.num << (prec + 1);
            Integer::div_floor(&(scaled + (&c.lo * &x.den) / 2), &(&c.lo * &x.den))
        }
    }
}

fn initial_prec(f: Func, x: &Arg, k: &BigInt, target: &Target) -> u32 {
    let kbits = k.bits() as u32;
    let magnitude: i64 = match f {
        Func::Exp => k.to_i64().unwrap_or(0),
        Func::Sqrt => (x.num.bits() as i64 - x.den.bits() as i64) / 2,
        _ => 0,
    };
    let abs = (target.abs_bits as i64 + magnitude).max(8);
    let need = match target.rel_bits {
        Some(r) => abs.min(r as i64 + 4),
        None => abs,
    };
    need as u32 + kbits + 10
}

fn point_enclosure(f: Func, x: &Arg, target: &Target) -> Result<Encl, IntervalError> {
    let k = reduction(f, x);
    let mut prec = initial_prec(f, x, &k, target);
    loop {
        let e = evaluate::<i128>(f, x, prec, &k)
            .or_else(|| evaluate::<BigInt>(f, x, prec, &k))
            .ok_or(IntervalError::Overflow)?;
        if target.accepts(&e) || prec >= MAX_PREC {
            return Ok(e);
        }
        prec = (prec + prec / 2).min(MAX_PREC);
    }
}

fn emit<T: Scalar>(e: &Encl, dir: Round, target: &Target) -> Result<T, IntervalError> {
    let m = match dir {
        Round::Down => &e.lo,
        Round::Up => &e.hi,
    };
    let grid = -(target.abs_bits as i64 + 1);
    if target.snap && e.exp < grid {
        let d = BigInt::one() << (grid - e.exp) as usize;
        let snapped = match dir {
            Round::Down => Integer::div_floor(m, &d),
            Round::Up => Integer::div_ceil(m, &d),
        };
        return T::from_scaled(&snapped, grid, dir);
    }
    T::from_scaled(m, e.exp, dir)
}

/// Lower bound of `f(lo)` and upper bound of `f(hi)` for increasing `f`.
fn monotone<T: Scalar>(f: Func, x: &Interval<T>, target: &Target) -> Result<Interval<T>, IntervalError> {
    let a = point_enclosure(f, &arg_of(x.lo()), target)?;
    let b = if x.is_degenerate() {
        a.clone()
    } else {
        point_enclosure(f, &arg_of(x.hi()), target)?
    };
    Interval::new(emit(&a, Round::Down, target)?, emit(&b, Round::Up, target)?)
}

pub fn exp_iv<T: Scalar>(x: &Interval<T>, tol: &T) -> Result<Interval<T>, IntervalError> {
    let target = Target::new(tol)?;
    let limit = T::from_i64(EXP_ARG_LIMIT)?;
    if *x.hi() > limit || *x.lo() < -limit {
        return Err(IntervalError::Overflow);
    }
    monotone(Func::Exp, x, &target)
}

pub fn log_iv<T: Scalar>(x: &Interval<T>, tol: &T) -> Result<Interval<T>, IntervalError> {
    if *x.lo() <= T::zero() {
        return Err(IntervalError::Domain(format!("log of {x}: argument must be positive")));
    }
    let target = Target::new(tol)?;
    monotone(Func::Log, x, &target)
}

pub fn sqrt_iv<T: Scalar>(x: &Interval<T>, tol: &T) -> Result<Interval<T>, IntervalError> {
    if *x.lo() < T::zero() {
        return Err(IntervalError::Domain(format!("sqrt of {x}: argument must be non-negative")));
    }
    let target = Target::new(tol)?;
    monotone(Func::Sqrt, x, &target)
}

pub fn sin_iv<T: Scalar>(x: &Interval<T>, tol: &T) -> Result<Interval<T>, IntervalError> {
    periodic(Func::Sin, x, tol)
}

pub fn cos_iv<T: Scalar>(x: &Interval<T>, tol: &T) -> Result<Interval<T>, IntervalError> {
    periodic(Func::Cos, x, tol)
}

fn unit<T: Scalar>() -> Interval<T> {
    Interval::new(-T::one(), T::one()).expect("ordered")
}

/// Whether some point `j * pi/2` with `j ≡ residue (mod 4)` may lie in `x`.
fn hits_critical<T: Scalar>(x: &Interval<T>, residue: i64, prec: u32) -> bool {
    let (lo, hi) = x.to_rationals();
    let c = consts::pi(prec);
    let half = |v: &BigInt| BigRational::new(v.clone(), BigInt::one() << (prec + 1) as usize);
    let (hp_lo, hp_hi) = (half(&c.lo), half(&c.hi));
    let first: BigInt = (&lo / &hp_hi).floor().to_integer() - 2;
    let last: BigInt = (&hi / &hp_lo).ceil().to_integer() + 2;
    let mut j = first.clone() + (BigInt::from(residue) - &first).mod_floor(&BigInt::from(4));
    while j <= last {
        let jq = BigRational::from_integer(j.clone());
        let (a, b) = if j < BigInt::zero() {
            (&jq * &hp_hi, &jq * &hp_lo)
        } else {
            (&jq * &hp_lo, &jq * &hp_hi)
        };
        if a <= hi && lo <= b {
            return true;
        }
        j += 4;
    }
    false
}

fn periodic<T: Scalar>(f: Func, x: &Interval<T>, tol: &T) -> Result<Interval<T>, IntervalError> {
    let target = Target::new(tol)?;
    if x.diam_exact() > BigRational::new(BigInt::from(63), BigInt::from(10)) {
        return Ok(unit());
    }
    let a = point_enclosure(f, &arg_of(x.lo()), &target)?;
    let mut lo = emit::<T>(&a, Round::Down, &target)?;
    let mut hi = emit::<T>(&a, Round::Up, &target)?;
    if !x.is_degenerate() {
        let b = point_enclosure(f, &arg_of(x.hi()), &target)?;
        lo = T::min_of(&lo, &emit(&b, Round::Down, &target)?);
        hi = T::max_of(&hi, &emit(&b, Round::Up, &target)?);
        let (max_res, min_res) = match f {
            Func::Sin => (1, 3),
            _ => (0, 2),
        };
        let mag = x.mag().to_rational();
        let prec = (mag.numer().bits() as u32).saturating_sub(mag.denom().bits() as u32) + 80;
        if hits_critical(x, max_res, prec) {
            hi = T::one();
        }
        if hits_critical(x, min_res, prec) {
            lo = -T::one();
        }
    }
    let one = T::one();
    Interval::new(T::max_of(&lo, &-one.clone()), T::min_of(&hi, &one))
}

/// Sum of the first `terms` terms of the exponential series evaluated in
/// interval arithmetic on `x` as a whole, plus a Lagrange remainder bound.
///
/// Every term is formed from the previous one as `T_k = T_{k-1} * X / k`, so
/// the occurrences of `x` in different terms vary independently. The result
/// encloses `exp(x)` for `x` in `X` but can be far wider than the true range.
pub fn naive_exp<T: Scalar>(x: &Interval<T>, terms: u32) -> Result<Interval<T>, IntervalError> {
    if terms == 0 {
        return Err(IntervalError::Domain("at least one term is required".into()));
    }
    let mut term = Interval::<T>::one();
    let mut sum = term.clone();
    for k in 1..terms {
        let kk = Interval::point(T::from_i64(k as i64)?);
        term = term.mul(x)?.div(&kk)?;
        sum = sum.add(&term)?;
    }
    // |R| <= |x|^n / n! * e^|x| <= |x|^n / n! * 3^ceil|x|.
    let m = x.mag();
    let mut rho = T::one();
    for k in 1..=terms {
        rho = rho.mul_dir(&m, Round::Up)?.div_dir(&T::from_i64(k as i64)?, Round::Up)?;
    }
    let c = m.to_rational().ceil().to_integer();
    let three = T::from_i64(3)?;
    let mut i = BigInt::zero();
    while i < c {
        rho = rho.mul_dir(&three, Round::Up)?;
        i += 1;
    }
    sum.add(&Interval::new(-rho.clone(), rho)?)
}
