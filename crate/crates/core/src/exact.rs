//! Exact coefficients of the form `(p/q)·√r` and finite sums of them.
//!
//! Every number printed in the bundled scenario is a rational multiple of
//! the square root of a square-free integer, or a sum of two such terms.
//! Building the scenario from these forms keeps algebraically equal
//! quantities bit-identical in `f64` and gives the dump format its
//! provenance strings (`"sqrt(35)/32"`, `"-1/32"`, ...).

use std::fmt;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// One term `(num/den)·√root` with `root` square-free and `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    num: i64,
    den: i64,
    root: u64,
}

impl Surd {
    pub const ZERO: Surd = Surd {
        num: 0,
        den: 1,
        root: 1,
    };

    /// `(num/den)·√root`; the square part of `root` is folded into the
    /// rational factor and the fraction is reduced.
    pub fn new(num: i64, den: i64, root: u64) -> Self {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Self::ZERO;
        }
        // extract the largest square divisor of root
        let mut r = root;
        let mut outside: i128 = 1;
        let mut f = 2u64;
        while f * f <= r {
            while r % (f * f) == 0 {
                r /= f * f;
                outside *= f as i128;
            }
            f += 1;
        }
        let mut n = num as i128 * outside;
        let mut d = den as i128;
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd(n, d);
        Self {
            num: (n / g) as i64,
            den: (d / g) as i64,
            root: r,
        }
    }

    /// Plain rational `num/den`.
    pub fn rational(num: i64, den: i64) -> Self {
        Self::new(num, den, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -self.num,
            den: self.den,
            root: self.root,
        }
    }

    pub fn mul(&self, other: &Surd) -> Self {
        Self::new(
            self.num
                .checked_mul(other.num)
                .expect("surd numerator overflow"),
            self.den
                .checked_mul(other.den)
                .expect("surd denominator overflow"),
            self.root
                .checked_mul(other.root)
                .expect("surd root overflow"),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64 * (self.root as f64).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            return write!(f, "0");
        }
        if self.root == 1 {
            if self.den == 1 {
                return write!(f, "{}", self.num);
            }
            return write!(f, "{}/{}", self.num, self.den);
        }
        let sign = if self.num < 0 { "-" } else { "" };
        let mag = self.num.unsigned_abs();
        if mag == 1 {
            if self.den == 1 {
                write!(f, "{sign}sqrt({})", self.root)
            } else {
                write!(f, "{sign}sqrt({})/{}", self.root, self.den)
            }
        } else if self.den == 1 {
            write!(f, "{sign}{mag}*sqrt({})", self.root)
        } else {
            write!(f, "{sign}{mag}*sqrt({})/{}", self.root, self.den)
        }
    }
}

/// A finite sum of [`Surd`] terms with distinct roots, kept sorted by root.
///
/// Closed under addition and multiplication; exact zero tests need no
/// tolerance because terms with different square-free roots are linearly
/// independent over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: Vec<Surd>,
}

impl SurdSum {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_surd(s: Surd) -> Self {
        let mut out = Self::zero();
        out.add_surd(s);
        out
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::from_surd(Surd::rational(num, den))
    }

    /// `(num/den)·√root`.
    pub fn surd(num: i64, den: i64, root: u64) -> Self {
        Self::from_surd(Surd::new(num, den, root))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Surd] {
        &self.terms
    }

    fn add_surd(&mut self, s: Surd) {
        if s.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&s.root, |t| t.root) {
            Ok(i) => {
                let t = self.terms[i];
                // a/b + c/d = (ad + cb)/(bd), same root
                let num = t.num as i128 * s.den as i128 + s.num as i128 * t.den as i128;
                let den = t.den as i128 * s.den as i128;
                if num == 0 {
                    self.terms.remove(i);
                } else {
                    let g = gcd(num, den);
                    self.terms[i] = Surd {
                        num: (num / g) as i64,
                        den: (den / g) as i64,
                        root: s.root,
                    };
                }
            }
            Err(i) => self.terms.insert(i, s),
        }
    }

    pub fn add(&self, other: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_surd(*t);
        }
        out
    }

    pub fn neg(&self) -> SurdSum {
        SurdSum {
            terms: self.terms.iter().map(Surd::neg).collect(),
        }
    }

    pub fn sub(&self, other: &SurdSum) -> SurdSum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.add_surd(a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, s: Surd) -> SurdSum {
        let mut out = SurdSum::zero();
        for t in &self.terms {
            out.add_surd(t.mul(&s));
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(Surd::to_f64).sum()
    }

    /// Exact inner product of two real coefficient vectors.
    pub fn dot(a: &[SurdSum], b: &[SurdSum]) -> SurdSum {
        assert_eq!(a.len(), b.len());
        let mut out = SurdSum::zero();
        for (x, y) in a.iter().zip(b) {
            out = out.add(&x.mul(y));
        }
        out
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i == 0 {
                write!(f, "{t}")?;
            } else if t.num < 0 {
                write!(f, " - {}", t.neg())?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_square_part() {
        // sqrt(12) = 2*sqrt(3)
        let s = Surd::new(1, 2, 12);
        assert_eq!(s, Surd::new(1, 1, 3));
        assert!((s.to_f64() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Surd::rational(-1, 32).to_string(), "-1/32");
        assert_eq!(Surd::new(1, 32, 35).to_string(), "sqrt(35)/32");
        assert_eq!(Surd::new(-2, 1, 7).to_string(), "-2*sqrt(7)");
        assert_eq!(Surd::rational(5, 1).to_string(), "5");
        let sum = SurdSum::surd(1, 22, 22).add(&SurdSum::surd(2, 35, 70));
        assert_eq!(sum.to_string(), "sqrt(22)/22 + 2*sqrt(70)/35");
        assert_eq!(
            SurdSum::rational(1, 4).sub(&SurdSum::surd(1, 2, 2)).to_string(),
            "1/4 - sqrt(2)/2"
        );
    }

    #[test]
    fn exact_cancellation() {
        // 1/sqrt(22) stored as sqrt(22)/22; the difference of equal terms is exactly zero
        let a = SurdSum::surd(1, 22, 22);
        let b = SurdSum::surd(2, 44, 22);
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn sums_and_products_match_f64() {
        let a = SurdSum::surd(3, 7, 5).add(&SurdSum::rational(-2, 9));
        let b = SurdSum::surd(-1, 3, 15).add(&SurdSum::surd(4, 5, 3));
        let prod = a.mul(&b);
        assert!((prod.to_f64() - a.to_f64() * b.to_f64()).abs() < 1e-12);
        let sum = a.add(&b);
        assert!((sum.to_f64() - (a.to_f64() + b.to_f64())).abs() < 1e-12);
    }

    #[test]
    fn eq2_minus_half_norm_squared() {
        // the two sub-vector weights of the m = -1/2 component are 35/256 each;
        // the cross term makes the total 35/128 + 5*sqrt(385)/1408
        let s35_11 = SurdSum::surd(1, 11, 385); // sqrt(35/11) = sqrt(385)/11
        let u: Vec<SurdSum> = [1i64, 1, 0, 3, 0]
            .iter()
            .map(|&c| s35_11.scale(Surd::rational(c, 16)))
            .collect();
        let v: Vec<SurdSum> = [4i64, 1, 3, 0, 3]
            .iter()
            .map(|&c| SurdSum::rational(c, 16))
            .collect();
        let total: Vec<SurdSum> = u.iter().zip(&v).map(|(x, y)| x.add(y)).collect();
        let n2 = SurdSum::dot(&total, &total);
        let expect = SurdSum::surd(5, 1408, 385).add(&SurdSum::rational(35, 128));
        assert_eq!(n2, expect);
    }
}
