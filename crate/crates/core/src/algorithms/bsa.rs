use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::IntervalFn;
use crate::error::IntervalError;
use crate::expr::EvalError;
use crate::interval::{Interval, IntervalRepr};
use crate::scalar::{Round, Scalar};

/// One piece of an ε-covering together with the enclosure of `f` on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<T> {
    pub piece: Interval<T>,
    pub enclosure: Interval<T>,
}

/// Finitely many intervals covering `domain`, each mapped by the interval
/// extension to an enclosure of width at most `epsilon`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covering<T> {
    pub domain: Interval<T>,
    pub epsilon: T,
    /// Sorted by lower endpoint.
    pub pieces: Vec<Piece<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error("covering has no nondegenerate pieces")]
    EmptyCovering,
    #[error("pieces do not cover the domain near {0}")]
    Gap(String),
    #[error("enclosure of piece {0} is wider than epsilon")]
    TooWide(usize),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRepr {
    pub piece: IntervalRepr,
    pub enclosure: IntervalRepr,
}

/// The JSON shape of a [`Covering`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringRepr {
    pub domain: IntervalRepr,
    pub epsilon: String,
    pub pieces: Vec<PieceRepr>,
}

impl<T: Scalar> Covering<T> {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Checks that the pieces cover the domain without gaps and that every
    /// enclosure is at most `epsilon` wide.
    pub fn validate(&self) -> Result<(), CoveringError> {
        let first = self.pieces.first().ok_or(CoveringError::EmptyCovering)?;
        if first.piece.lo() > self.domain.lo() {
            return Err(CoveringError::Gap(self.domain.lo().to_decimal()));
        }
        let mut reach = first.piece.hi().clone();
        for p in &self.pieces[1..] {
            if *p.piece.lo() > reach {
                return Err(CoveringError::Gap(reach.to_decimal()));
            }
            reach = T::max_of(&reach, p.piece.hi());
        }
        if reach < *self.domain.hi() {
            return Err(CoveringError::Gap(reach.to_decimal()));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if p.enclosure.diam_exact() > self.epsilon.to_rational() {
                return Err(CoveringError::TooWide(i));
            }
        }
        Ok(())
    }

    /// The same covering with degenerate pieces removed.
    pub fn without_degenerate(&self) -> Covering<T> {
        Covering {
            domain: self.domain.clone(),
            epsilon: self.epsilon.clone(),
            pieces: self
                .pieces
                .iter()
                .filter(|p| !p.piece.is_degenerate())
                .cloned()
                .collect(),
        }
    }

    pub fn to_repr(&self, with_hex: bool) -> CoveringRepr {
        CoveringRepr {
            domain: self.domain.to_repr(with_hex),
            epsilon: self.epsilon.to_decimal(),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceRepr {
                    piece: p.piece.to_repr(with_hex),
                    enclosure: p.enclosure.to_repr(with_hex),
                })
                .collect(),
        }
    }

    pub fn from_repr(repr: &CoveringRepr) -> Result<Self, CoveringError> {
        let epsilon = T::parse_repr(&repr.epsilon).map_err(|e| IntervalError::Parse(e.0))?;
        let pieces = repr
            .pieces
            .iter()
            .map(|p| {
                Ok(Piece {
                    piece: Interval::from_repr(&p.piece)?,
                    enclosure: Interval::from_repr(&p.enclosure)?,
                })
            })
            .collect::<Result<_, IntervalError>>()?;
        Ok(Covering {
            domain: Interval::from_repr(&repr.domain)?,
            epsilon,
            pieces,
        })
    }
}

impl<T: Scalar> Serialize for Covering<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_repr(T::MANTISSA_BITS.is_some()).serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Covering<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CoveringRepr::deserialize(d)?;
        Covering::from_repr(&repr).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BsaOutcome<T> {
    Success {
        range: Interval<T>,
        covering: Covering<T>,
        bisections: u64,
    },
    /// The longest bad interval could not be split.
    Failure {
        piece: Interval<T>,
        reason: String,
        bisections: u64,
    },
    Budget {
        bisections: u64,
        /// Bad intervals still waiting to be split.
        pending: usize,
    },
}

struct Bad<T> {
    x: Interval<T>,
    diam: T,
    error: Option<EvalError>,
}

impl<T: Scalar> PartialEq for Bad<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for Bad<T> {}

impl<T: Scalar> PartialOrd for Bad<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for Bad<T> {
    // Longest first; among equals, leftmost first.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_diam = self.diam.partial_cmp(&other.diam).unwrap_or(Ordering::Equal);
        by_diam.then_with(|| {
            other
                .x
                .lo()
                .partial_cmp(self.x.lo())
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// Range enclosure by binary subdivision.
///
/// Evaluates `f` on `domain`; while some piece is bad (its enclosure is
/// wider than `eps`, or evaluation failed) the longest bad piece is bisected.
/// On success the hull of all enclosures contains `f(domain)` and lies within
/// `eps` of it. `max_steps` bounds the number of bisections.
pub fn bsa_range<T: Scalar>(
    f: &impl IntervalFn<T>,
    domain: &Interval<T>,
    eps: &T,
    max_steps: u64,
) -> BsaOutcome<T> {
    let mut good: Vec<Piece<T>> = Vec::new();
    let mut bad = BinaryHeap::new();
    let classify = |x: Interval<T>, good: &mut Vec<Piece<T>>, bad: &mut BinaryHeap<Bad<T>>| {
        let error = match f.eval(&x) {
            Ok(y) if y.diam() <= *eps => {
                good.push(Piece {
                    piece: x,
                    enclosure: y,
                });
                return;
            }
            Ok(_) => None,
            Err(e) => Some(e),
        };
        bad.push(Bad {
            diam: x.diam(),
            x,
            error,
        });
    };
    classify(domain.clone(), &mut good, &mut bad);
    let mut bisections = 0u64;
    while let Some(worst) = bad.pop() {
        let Ok((l, r)) = worst.x.bisect() else {
            let reason = match worst.error {
                Some(e) => e.to_string(),
                None => "enclosure wider than epsilon".to_string(),
            };
            return BsaOutcome::Failure {
                piece: worst.x,
                reason,
                bisections,
            };
        };
        if bisections == max_steps {
            return BsaOutcome::Budget {
                bisections,
                pending: bad.len() + 1,
            };
        }
        bisections += 1;
        classify(l, &mut good, &mut bad);
        classify(r, &mut good, &mut bad);
    }
    good.sort_by(|a, b| a.piece.lo().partial_cmp(b.piece.lo()).unwrap_or(Ordering::Equal));
    let range = good
        .iter()
        .skip(1)
        .fold(good[0].enclosure.clone(), |acc, p| acc.hull(&p.enclosure));
    BsaOutcome::Success {
        range,
        covering: Covering {
            domain: domain.clone(),
            epsilon: eps.clone(),
            pieces: good,
        },
        bisections,
    }
}

/// A modulus of continuity read off a covering: `|x - y| <= delta` implies
/// `|f(x) - f(y)| <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct Modulus<T> {
    pub delta: T,
    pub bound: T,
}

/// `delta` is the smallest piece diameter (rounded down), `bound` twice the
/// covering's epsilon (rounded up). Degenerate pieces are ignored.
pub fn modulus_estimate<T: Scalar>(cov: &Covering<T>) -> Result<Modulus<T>, CoveringError> {
    let mut delta: Option<T> = None;
    for p in cov.pieces.iter().filter(|p| !p.piece.is_degenerate()) {
        let d = p.piece.hi().sub_dir(p.piece.lo(), Round::Down)?;
        delta = Some(match delta {
            Some(m) => T::min_of(&m, &d),
            None => d,
        });
    }
    let delta = delta.ok_or(CoveringError::EmptyCovering)?;
    let bound = cov.epsilon.add_dir(&cov.epsilon, Round::Up)?;
    Ok(Modulus { delta, bound })
}
