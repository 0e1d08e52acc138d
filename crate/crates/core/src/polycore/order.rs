use std::cmp::Ordering;
use std::fmt;

use super::Monomial;

/// Order used inside each block of a block order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseOrder {
    Lex,
    Grevlex,
}

/// Admissible monomial order. Variable precedence follows ring position
/// (variable 0 is the largest).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
    /// Front variables dominate: monomials are compared on the front block first,
    /// then on the remaining variables. Eliminates the front block.
    Block {
        front: Vec<bool>,
        front_order: BaseOrder,
        back_order: BaseOrder,
    },
}

impl MonomialOrder {
    /// Block order over `nvars` variables eliminating `front`, grevlex within blocks.
    pub fn elimination(nvars: usize, front: &[usize]) -> Self {
        let mut mask = vec![false; nvars];
        for &i in front {
            mask[i] = true;
        }
        MonomialOrder::Block {
            front: mask,
            front_order: BaseOrder::Grevlex,
            back_order: BaseOrder::Grevlex,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "lex" => Some(MonomialOrder::Lex),
            "grevlex" | "degrevlex" => Some(MonomialOrder::Grevlex),
            _ => None,
        }
    }

    /// True if `i` belongs to the eliminated block.
    pub fn in_front(&self, i: usize) -> bool {
        match self {
            MonomialOrder::Block { front, .. } => front.get(i).copied().unwrap_or(false),
            _ => false,
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Lex => lex(a, b, |_| true),
            MonomialOrder::Grevlex => grevlex(a, b, |_| true),
            MonomialOrder::Block {
                front,
                front_order,
                back_order,
            } => {
                let in_front = |i: usize| front.get(i).copied().unwrap_or(false);
                base(*front_order, a, b, in_front)
                    .then_with(|| base(*back_order, a, b, |i| !in_front(i)))
            }
        }
    }
}

fn base(order: BaseOrder, a: &[u16], b: &[u16], keep: impl Fn(usize) -> bool) -> Ordering {
    match order {
        BaseOrder::Lex => lex(a, b, keep),
        BaseOrder::Grevlex => grevlex(a, b, keep),
    }
}

fn lex(a: &[u16], b: &[u16], keep: impl Fn(usize) -> bool) -> Ordering {
    for i in 0..a.len() {
        if keep(i) && a[i] != b[i] {
            return a[i].cmp(&b[i]);
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u16], b: &[u16], keep: impl Fn(usize) -> bool) -> Ordering {
    let mut da = 0u32;
    let mut db = 0u32;
    for i in 0..a.len() {
        if keep(i) {
            da += a[i] as u32;
            db += b[i] as u32;
        }
    }
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if keep(i) && a[i] != b[i] {
            // smaller exponent in the last variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Block {
                front,
                front_order,
                back_order,
            } => {
                let idx: Vec<String> = front
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| i.to_string())
                    .collect();
                write!(
                    f,
                    "block([{}]:{:?}, rest:{:?})",
                    idx.join(","),
                    front_order,
                    back_order
                )
            }
        }
    }
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
