//! Values of the resolution function: a totally ordered set built from
//! pairs (order, divisor count) refined recursively in lower dimension,
//! with monomial-stage values above all pairs and a top element.

use crate::exactalg::{scalar::fmt_rat, Rat};
use std::cmp::Ordering;

/// The monomial-stage value: `Γ1` is the least number of divisors whose
/// exponents reach the mark, `Γ2` the best ratio achieved with that many,
/// `Γ3` the lexicographically largest witnessing index sequence. Ordering
/// compares `(-Γ1, Γ2, Γ3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaValue {
    pub p: u64,
    pub ratio: Rat,
    pub indices: Vec<u64>,
}

impl PartialOrd for GammaValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GammaValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match other.p.cmp(&self.p) {
            Ordering::Equal => {}
            o => return o, // smaller Γ1 is larger
        }
        match self.ratio.cmp(&other.ratio) {
            Ordering::Equal => {}
            o => return o,
        }
        // zero-padded lexicographic comparison of the index sequences
        let n = self.indices.len().max(other.indices.len());
        for i in 0..n {
            let a = self.indices.get(i).copied().unwrap_or(0);
            let b = other.indices.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// A resolution-function value. `Bottom < Monomial < TPair < Top`: the
/// algorithm first drives the order invariant ω to zero everywhere, so
/// any value with positive ω dominates every monomial-stage value. Pairs
/// compare lexicographically by `(omega, n)` and then by the tail value
/// one dimension down. Dimension indices are deliberately not stored, so
/// values of a family and of its fibers compare structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RFValue {
    Bottom,
    TPair {
        omega: Rat,
        n: u64,
        tail: Box<RFValue>,
    },
    Monomial(GammaValue),
    Top,
}

impl RFValue {
    pub fn pair(omega: Rat, n: u64, tail: RFValue) -> RFValue {
        RFValue::TPair {
            omega,
            n,
            tail: Box::new(tail),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            RFValue::Bottom => 0,
            RFValue::Monomial(_) => 1,
            RFValue::TPair { .. } => 2,
            RFValue::Top => 3,
        }
    }

    /// Flattened rendering, e.g. `(3/2, 0, 1, 0, inf)`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                RFValue::Bottom => {
                    parts.push("resolved".to_string());
                    break;
                }
                RFValue::Top => {
                    parts.push("inf".to_string());
                    break;
                }
                RFValue::Monomial(g) => {
                    parts.push(format!(
                        "Gamma({}, {}, [{}])",
                        g.p,
                        fmt_rat(&g.ratio),
                        g.indices
                            .iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ));
                    break;
                }
                RFValue::TPair { omega, n, tail } => {
                    parts.push(fmt_rat(omega));
                    parts.push(n.to_string());
                    cur = tail;
                }
            }
        }
        format!("({})", parts.join(", "))
    }
}

impl PartialOrd for RFValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RFValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self, other) {
            (
                RFValue::TPair { omega, n, tail },
                RFValue::TPair {
                    omega: o2,
                    n: n2,
                    tail: t2,
                },
            ) => match omega.cmp(o2) {
                Ordering::Equal => match n.cmp(n2) {
                    Ordering::Equal => tail.cmp(t2),
                    o => o,
                },
                o => o,
            },
            (RFValue::Monomial(a), RFValue::Monomial(b)) => a.cmp(b),
            _ => Ordering::Equal,
        }
    }
}

impl std::fmt::Display for RFValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}
