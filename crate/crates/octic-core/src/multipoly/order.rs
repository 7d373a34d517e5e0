use super::monomial::Monomial;
use std::cmp::Ordering;

/// Total order on monomials compatible with multiplication.
///
/// `Block { prefix }` is the elimination order for the first `prefix`
/// variables: degrevlex on the prefix block, ties broken by degrevlex on the
/// rest. Any monomial involving a prefix variable is larger than any that
/// does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    DegRevLex,
    Lex,
    Block { prefix: usize },
}

fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            // last differing exponent: the *smaller* one wins
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn lex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match *self {
            MonomialOrder::DegRevLex => degrevlex(a.exps(), b.exps()),
            MonomialOrder::Lex => lex(a.exps(), b.exps()),
            MonomialOrder::Block { prefix } => {
                match degrevlex(&a.exps()[..prefix], &b.exps()[..prefix]) {
                    Ordering::Equal => degrevlex(&a.exps()[prefix..], &b.exps()[prefix..]),
                    o => o,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn degrevlex_quadratics_in_three_vars() {
        // x^2 > xy > y^2 > xz > yz > z^2 for x > y > z
        let seq = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        for w in seq.windows(2) {
            assert_eq!(MonomialOrder::DegRevLex.cmp(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn lex_order() {
        assert_eq!(
            MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5])),
            Ordering::Greater
        );
    }

    #[test]
    fn block_order_eliminates_prefix() {
        // With prefix 1, any monomial containing the first variable beats any
        // monomial that does not.
        let o = MonomialOrder::Block { prefix: 1 };
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 0, 1])), Ordering::Greater);
    }
}
