//! Fixed-point interval evaluation of elementary functions at a point.
//!
//! A value is carried as a pair of integers `[lo, hi]` standing for
//! `[lo, hi] * 2^-prec`. All truncations round `lo` down and `hi` up, so the
//! pair always encloses the exact quantity. The arithmetic is generic over
//! the integer type: `i128` with overflow checks for the common low-precision
//! case, and `BigInt` as the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::consts;

pub(crate) trait Fix: Sized + Clone + Ord {
    fn from_i128(v: i128) -> Option<Self>;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn shl(&self, k: u32) -> Option<Self>;
    fn shr_floor(&self, k: u32) -> Self;
    /// Floor division by a positive divisor.
    fn div_floor(&self, d: &Self) -> Self;
    fn neg(&self) -> Option<Self>;
    fn is_negative(&self) -> bool;
    fn ln2(prec: u32) -> Option<(Self, Self)>;
    fn pi(prec: u32) -> Option<(Self, Self)>;

    fn shr_ceil(&self, k: u32) -> Option<Self> {
        Some(self.neg()?.shr_floor(k).neg()?)
    }

    fn div_ceil(&self, d: &Self) -> Option<Self> {
        Some(self.neg()?.div_floor(d).neg()?)
    }

    fn abs(&self) -> Option<Self> {
        if self.is_negative() {
            self.neg()
        } else {
            Some(self.clone())
        }
    }
}

const I128_LIMIT: u32 = 125;

impl Fix for i128 {
    fn from_i128(v: i128) -> Option<Self> {
        Some(v)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128().filter(|x| x.unsigned_abs() < 1u128 << I128_LIMIT)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn shl(&self, k: u32) -> Option<Self> {
        if k >= I128_LIMIT || self.unsigned_abs() >= 1u128 << (I128_LIMIT - k) {
            return None;
        }
        Some(self << k)
    }
    fn shr_floor(&self, k: u32) -> Self {
        if k >= 127 {
            return if *self < 0 { -1 } else { 0 };
        }
        self >> k
    }
    fn div_floor(&self, d: &Self) -> Self {
        if let (Ok(a), Ok(b)) = (i64::try_from(*self), i64::try_from(*d)) {
            if b > 0 {
                return a.div_euclid(b) as i128;
            }
        }
        self.div_euclid(*d)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn ln2(prec: u32) -> Option<(Self, Self)> {
        consts::ln2_small(prec)
    }
    fn pi(prec: u32) -> Option<(Self, Self)> {
        consts::pi_small(prec)
    }
}

impl Fix for BigInt {
    fn from_i128(v: i128) -> Option<Self> {
        Some(BigInt::from(v))
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn shl(&self, k: u32) -> Option<Self> {
        Some(self << k)
    }
    fn shr_floor(&self, k: u32) -> Self {
        Integer::div_floor(self, &(BigInt::from(1) << k))
    }
    fn div_floor(&self, d: &Self) -> Self {
        Integer::div_floor(self, d)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn ln2(prec: u32) -> Option<(Self, Self)> {
        let c = consts::ln2(prec);
        Some((c.lo, c.hi))
    }
    fn pi(prec: u32) -> Option<(Self, Self)> {
        let c = consts::pi(prec);
        Some((c.lo, c.hi))
    }
}

/// `[lo, hi] * 2^-prec` for an implicit `prec`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Fx<N> {
    pub lo: N,
    pub hi: N,
}

impl<N: Fix> Fx<N> {
    pub fn exact(v: N) -> Self {
        Fx { lo: v.clone(), hi: v }
    }

    pub fn add(&self, o: &Self) -> Option<Self> {
        Some(Fx {
            lo: self.lo.add(&o.lo)?,
            hi: self.hi.add(&o.hi)?,
        })
    }

    pub fn sub(&self, o: &Self) -> Option<Self> {
        Some(Fx {
            lo: self.lo.sub(&o.hi)?,
            hi: self.hi.sub(&o.lo)?,
        })
    }

    pub fn neg(&self) -> Option<Self> {
        Some(Fx {
            lo: self.hi.neg()?,
            hi: self.lo.neg()?,
        })
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Option<Self> {
        let p = [
            self.lo.mul(&o.lo)?,
            self.lo.mul(&o.hi)?,
            self.hi.mul(&o.lo)?,
            self.hi.mul(&o.hi)?,
        ];
        let min = p.iter().min().expect("nonempty");
        let max = p.iter().max().expect("nonempty");
        Some(Fx {
            lo: min.shr_floor(prec),
            hi: max.shr_ceil(prec)?,
        })
    }

    /// Multiplication by an exact integer.
    pub fn scale(&self, k: &N) -> Option<Self> {
        let (a, b) = (self.lo.mul(k)?, self.hi.mul(k)?);
        Some(if k.is_negative() { Fx { lo: b, hi: a } } else { Fx { lo: a, hi: b } })
    }

    /// Division by a positive integer.
    pub fn div_int(&self, k: i128) -> Option<Self> {
        let d = N::from_i128(k)?;
        Some(Fx {
            lo: self.lo.div_floor(&d),
            hi: self.hi.div_ceil(&d)?,
        })
    }

    pub fn mag(&self) -> Option<N> {
        let (a, b) = (self.lo.abs()?, self.hi.abs()?);
        Some(if a > b { a } else { b })
    }

    pub fn widen(&self, e: &N) -> Option<Self> {
        Some(Fx {
            lo: self.lo.sub(e)?,
            hi: self.hi.add(e)?,
        })
    }
}

/// A rational argument `num / den` with `den > 0`.
#[derive(Clone, Debug)]
pub(crate) struct Arg {
    pub num: BigInt,
    pub den: BigInt,
}

impl Arg {
    /// Enclosure of `self * 2^(prec - e)`.
    pub fn fix<N: Fix>(&self, prec: u32, e: i64) -> Option<Fx<N>> {
        let s = prec as i64 - e;
        let (mut num, mut den) = (N::from_big(&self.num)?, N::from_big(&self.den)?);
        if s >= 0 {
            num = num.shl(u32::try_from(s).ok()?)?;
        } else {
            den = den.shl(u32::try_from(-s).ok()?)?;
        }
        Some(Fx {
            lo: num.div_floor(&den),
            hi: num.div_ceil(&den)?,
        })
    }

    pub fn approx(&self) -> f64 {
        let q = num_rational::BigRational::new_raw(self.num.clone(), self.den.clone());
        q.to_f64().unwrap_or(f64::NAN)
    }
}

fn one<N: Fix>(prec: u32) -> Option<N> {
    N::from_i128(1)?.shl(prec)
}

/// Terms are accumulated until one is at most two units; the tail is then
/// bounded by the magnitude of that last term.
const SMALL_TERM: i128 = 2;

/// `exp(r)` for `|r| <= 1/2`.
fn exp_series<N: Fix>(r: &Fx<N>, prec: u32) -> Option<Fx<N>> {
    let unit = Fx::exact(one::<N>(prec)?);
    let mut sum = unit.clone();
    let mut t = unit;
    let small = N::from_i128(SMALL_TERM)?;
    for j in 1..=(4 * prec as i128 + 16) {
        t = t.mul(r, prec)?.div_int(j)?;
        sum = sum.add(&t)?;
        let m = t.mag()?;
        if m <= small {
            return sum.widen(&m);
        }
    }
    None
}

/// `sin(r)` for `|r| <= 1`.
fn sin_series<N: Fix>(r: &Fx<N>, prec: u32) -> Option<Fx<N>> {
    let r2 = r.mul(r, prec)?;
    let mut t = r.clone();
    let mut sum = r.clone();
    let small = N::from_i128(SMALL_TERM)?;
    for i in 1..=(4 * prec as i128 + 16) {
        t = t.mul(&r2, prec)?.div_int((2 * i) * (2 * i + 1))?.neg()?;
        sum = sum.add(&t)?;
        let m = t.mag()?;
        if m <= small {
            return sum.widen(&m);
        }
    }
    None
}

/// `cos(r)` for `|r| <= 1`.
fn cos_series<N: Fix>(r: &Fx<N>, prec: u32) -> Option<Fx<N>> {
    let r2 = r.mul(r, prec)?;
    let mut t = Fx::exact(one::<N>(prec)?);
    let mut sum = t.clone();
    let small = N::from_i128(SMALL_TERM)?;
    for i in 1..=(4 * prec as i128 + 16) {
        t = t.mul(&r2, prec)?.div_int((2 * i - 1) * (2 * i))?.neg()?;
        sum = sum.add(&t)?;
        let m = t.mag()?;
        if m <= small {
            return sum.widen(&m);
        }
    }
    None
}

/// `2 atanh(z)` for `|z| <= 1/4`.
fn log_series<N: Fix>(z: &Fx<N>, prec: u32) -> Option<Fx<N>> {
    let z2 = z.mul(z, prec)?;
    let mut power = z.clone();
    let mut sum = z.clone();
    let small = N::from_i128(SMALL_TERM)?;
    for i in 1..=(4 * prec as i128 + 16) {
        power = power.mul(&z2, prec)?;
        let term = power.div_int(2 * i + 1)?;
        sum = sum.add(&term)?;
        let m = term.mag()?;
        if m <= small {
            let s = sum.widen(&m)?;
            return Some(Fx {
                lo: s.lo.shl(1)?,
                hi: s.hi.shl(1)?,
            });
        }
    }
    None
}

/// Enclosure of `exp(x) * 2^(prec - k)`, where `k` is close to `x / ln 2`.
pub(crate) fn exp_fix<N: Fix>(x: &Arg, prec: u32, k: &BigInt) -> Option<Fx<N>> {
    let xf = x.fix::<N>(prec, 0)?;
    let (lo, hi) = N::ln2(prec)?;
    let kl = Fx { lo, hi }.scale(&N::from_big(k)?)?;
    let r = xf.sub(&kl)?;
    exp_series(&r, prec)
}

/// Enclosure of `ln(x) * 2^prec` for `x > 0`; `e` is an integer with
/// `x / 2^e` in `(1/2, 2)`.
pub(crate) fn log_fix<N: Fix>(x: &Arg, prec: u32, e: i64) -> Option<Fx<N>> {
    let u = one::<N>(prec)?;
    let mut e = e;
    let mut m = x.fix::<N>(prec, e)?;
    // Keep m within [0.7, 1.42] so that |z| < 0.18.
    let hundred = N::from_i128(100)?;
    let upper = u.mul(&N::from_i128(142)?)?.div_floor(&hundred);
    let lower = u.mul(&N::from_i128(70)?)?.div_ceil(&hundred)?;
    if m.hi > upper {
        e += 1;
        m = x.fix::<N>(prec, e)?;
    } else if m.lo < lower {
        e -= 1;
        m = x.fix::<N>(prec, e)?;
    }
    // z = (m - 1) / (m + 1) is increasing in m.
    let z_lo = m.lo.sub(&u)?.mul(&u)?.div_floor(&m.lo.add(&u)?);
    let z_hi = m.hi.sub(&u)?.mul(&u)?.div_ceil(&m.hi.add(&u)?)?;
    let s = log_series(&Fx { lo: z_lo, hi: z_hi }, prec)?;
    let (lo, hi) = N::ln2(prec)?;
    let el = Fx { lo, hi }.scale(&N::from_i128(e as i128)?)?;
    s.add(&el)
}

/// Enclosure of `sin(x) * 2^prec` (or `cos` when `cosine`), where `k` is
/// close to `x / (pi/2)`.
pub(crate) fn sincos_fix<N: Fix>(x: &Arg, prec: u32, k: &BigInt, cosine: bool) -> Option<Fx<N>> {
    let xf = x.fix::<N>(prec, 0)?;
    // pi/2 scaled by 2^prec has the same integer bounds as pi scaled by
    // 2^(prec-1).
    let (lo, hi) = N::pi(prec - 1)?;
    let kh = Fx { lo, hi }.scale(&N::from_big(k)?)?;
    let r = xf.sub(&kh)?;
    let quadrant = (k.mod_floor(&BigInt::from(4)).to_u32()? + u32::from(cosine)) % 4;
    match quadrant {
        0 => sin_series(&r, prec),
        1 => cos_series(&r, prec),
        2 => sin_series(&r, prec)?.neg(),
        _ => cos_series(&r, prec)?.neg(),
    }
}

/// `floor(sqrt(x) * 2^prec)` and one more, or the exact root when `x` is
/// the square of a rational.
pub(crate) fn sqrt_fix(x: &Arg, prec: u32) -> (BigInt, BigInt, i64) {
    if x.den == BigInt::from(1) {
        let r = x.num.sqrt();
        if &r * &r == x.num {
            return (r.clone(), r, 0);
        }
    }
    let n = Integer::div_floor(&(&x.num << (2 * prec)), &x.den);
    let s = n.sqrt();
    let next = &s + 1;
    if &s * &s == n && (&x.num << (2 * prec)) == &n * &x.den {
        return (s.clone(), s, -(prec as i64));
    }
    (s, next, -(prec as i64))
}
