//! Monomial orders on exponent vectors.

use std::cmp::Ordering;
use std::collections::BTreeSet;

/// A term order. `DegRevLex` is the default working order; `Lex` and the
/// block order `Elim` are used for elimination.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    /// Block order: the listed variables dominate (degrevlex within the
    /// block), ties broken by degrevlex on the remaining variables. A
    /// Gröbner basis for this order yields the elimination ideal for the
    /// block variables.
    Elim(BTreeSet<usize>),
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => continue,
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
        o => o,
    }
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for i in 0..a.len() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Elim(block) => {
                let pick = |e: &[u32], sel: bool| -> Vec<u32> {
                    e.iter()
                        .enumerate()
                        .filter(|(i, _)| block.contains(i) == sel)
                        .map(|(_, &x)| x)
                        .collect()
                };
                match degrevlex(&pick(a, true), &pick(b, true)) {
                    Ordering::Equal => degrevlex(&pick(a, false), &pick(b, false)),
                    o => o,
                }
            }
        }
    }
}
