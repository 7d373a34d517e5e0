use std::fmt;

/// Exponent vector aligned with the ambient variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, i: usize, e: u16) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), rhs.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&rhs.exps)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        }
    }

    /// `self / rhs` when `rhs` divides `self`.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        debug_assert_eq!(self.exps.len(), rhs.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&rhs.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { exps })
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, rhs: &Self) -> Self {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&rhs.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn coprime(&self, rhs: &Self) -> bool {
        self.exps
            .iter()
            .zip(&rhs.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Insert a zero exponent at the front (variable-list extension).
    pub fn lift_front(&self) -> Self {
        let mut exps = Vec::with_capacity(self.exps.len() + 1);
        exps.push(0);
        exps.extend_from_slice(&self.exps);
        Monomial { exps }
    }

    /// Drop the first `k` exponents (projection after elimination).
    pub fn project(&self, k: usize) -> Self {
        Monomial {
            exps: self.exps[k..].to_vec(),
        }
    }

    pub fn format(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", names[i])?;
            } else {
                write!(f, "{}^{}", names[i], e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
