//! Enclosures of ln 2 and π as scaled integers.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Bounds `(lo, hi)` with `lo <= c * 2^prec <= hi`.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Scaled {
    fn truncate(&self, from: u32, to: u32) -> Scaled {
        let d = BigInt::one() << (from - to);
        Scaled {
            lo: self.lo.div_floor(&d),
            hi: self.hi.div_ceil(&d),
        }
    }
}

struct Table {
    prec: u32,
    ln2: Scaled,
    pi: Scaled,
}

static TABLE: Mutex<Option<Table>> = Mutex::new(None);

/// Bounds of `sum_k sign^k * num / ((2k+1) n^(2k+1))` scaled by `2^prec`.
fn arctan_like(n: u64, num: u64, alternating: bool, prec: u32) -> Scaled {
    let one = BigInt::from(num) << prec;
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = n.clone();
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let mut k: u64 = 0;
    loop {
        let den = &power * BigInt::from(2 * k + 1);
        let (f, c) = (one.div_floor(&den), one.div_ceil(&den));
        if f.is_zero() {
            // Remaining terms are below one unit each and decrease
            // geometrically with ratio at most 1/4.
            let slack = BigInt::from(2);
            return Scaled {
                lo: lo - &slack,
                hi: hi + &slack,
            };
        }
        if alternating && k % 2 == 1 {
            lo -= c;
            hi -= f;
        } else {
            lo += f;
            hi += c;
        }
        power *= &n2;
        k += 1;
    }
}

fn compute(prec: u32) -> Table {
    let work = prec + 16;
    // ln 2 = 2 atanh(1/3)
    let ln2 = arctan_like(3, 2, false, work);
    // pi = 16 atan(1/5) - 4 atan(1/239)
    let a5 = arctan_like(5, 16, true, work);
    let a239 = arctan_like(239, 4, true, work);
    let pi = Scaled {
        lo: &a5.lo - &a239.hi,
        hi: &a5.hi - &a239.lo,
    };
    Table {
        prec,
        ln2: ln2.truncate(work, prec),
        pi: pi.truncate(work, prec),
    }
}

fn with_table<R>(prec: u32, f: impl FnOnce(&Table) -> R) -> R {
    let mut guard = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    if guard.as_ref().map_or(true, |t| t.prec < prec) {
        *guard = Some(compute(prec.max(512).next_power_of_two()));
    }
    f(guard.as_ref().expect("table initialized"))
}

pub(crate) fn ln2(prec: u32) -> Scaled {
    with_table(prec, |t| t.ln2.truncate(t.prec, prec))
}

pub(crate) fn pi(prec: u32) -> Scaled {
    with_table(prec, |t| t.pi.truncate(t.prec, prec))
}

const SMALL_PREC: u32 = 124;

fn small() -> &'static [(i128, i128); 2] {
    static SMALL: OnceLock<[(i128, i128); 2]> = OnceLock::new();
    SMALL.get_or_init(|| {
        let to = |s: Scaled| {
            (
                i128::try_from(s.lo).expect("fits"),
                i128::try_from(s.hi).expect("fits"),
            )
        };
        [to(ln2(SMALL_PREC)), to(pi(SMALL_PREC))]
    })
}

fn truncate_small(c: (i128, i128), prec: u32) -> Option<(i128, i128)> {
    if prec > SMALL_PREC {
        return None;
    }
    let d = SMALL_PREC - prec;
    let lo = c.0 >> d;
    let hi = -((-c.1) >> d);
    Some((lo, hi))
}

pub(crate) fn ln2_small(prec: u32) -> Option<(i128, i128)> {
    truncate_small(small()[0], prec)
}

pub(crate) fn pi_small(prec: u32) -> Option<(i128, i128)> {
    truncate_small(small()[1], prec)
}
