use std::cmp::Ordering;

/// Exponent vector of a normal-form basis monomial.
///
/// Ordered degree-lexicographically: first by the sum of absolute
/// exponents, then lexicographically with earlier generators dominant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<i32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn from_exponents(exps: Vec<i32>) -> Self {
        Monomial(exps)
    }

    pub fn generator(len: usize, gen: usize) -> Self {
        let mut e = vec![0; len];
        e[gen] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exponent(&self, gen: usize) -> i32 {
        self.0[gen]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e.unsigned_abs() as i64).sum()
    }

    /// Componentwise sum; the product when all generators commute.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with_exponent(&self, gen: usize, e: i32) -> Monomial {
        let mut v = self.0.clone();
        v[gen] = e;
        Monomial(v)
    }

    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors with nonnegative entries and total degree `<= cap`,
/// ascending in the monomial order.
pub fn monomials_up_to(len: usize, cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; len];
    fn rec(pos: usize, left: u32, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) {
        if pos == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[pos] = e as i32;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, cap, &mut cur, &mut out);
    out.sort();
    out
}
