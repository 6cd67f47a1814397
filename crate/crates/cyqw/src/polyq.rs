//! Dense univariate polynomials over the rationals, plus the exact
//! determinant and characteristic-polynomial routines built on them.
//!
//! Coefficients are stored in ascending order of exponent with no trailing
//! zeros; the zero polynomial is the empty coefficient list.

use crate::pathalg::Coef;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Coef>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Coef::one())
    }

    pub fn constant(c: Coef) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Coef, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Coef::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Coef>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Coef] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Coef {
        self.coeffs.get(k).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Coef {
        self.coeffs.last().cloned().unwrap_or_else(Coef::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Coef) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|k| k * c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Coef::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn eval(&self, x: &Coef) -> Coef {
        let mut acc = Coef::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead = d.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Coef::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            if !f.is_zero() {
                quo[k] = f.clone();
                for (i, c) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &f * c;
                }
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    /// Division known to be exact; panics on a nonzero remainder, which
    /// would indicate a broken caller invariant.
    pub fn divexact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (Euclid).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading_coeff();
        a.scale(&lead.recip())
    }

    /// Power-series coefficients of `self / d` up to `upto`, requiring the
    /// divisor to be invertible as a series (nonzero constant term).
    pub fn series_quotient(&self, d: &Poly, upto: usize) -> Vec<Coef> {
        let d0 = d.coeff(0);
        assert!(!d0.is_zero(), "series division needs invertible constant term");
        let mut out = Vec::with_capacity(upto + 1);
        for k in 0..=upto {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                acc -= d.coeff(j) * &out[k - j];
            }
            out.push(acc / &d0);
        }
        out
    }

    /// Renders with the given variable, highest power first, e.g.
    /// `t^4 - 5*t^3 + 13*t^2 - 5*t + 1`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign_neg = c.is_negative();
            if s.is_empty() {
                if sign_neg {
                    s.push('-');
                }
            } else if sign_neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                s.push_str(&mag.to_string());
            }
            if k > 0 {
                if show_coeff {
                    s.push('*');
                }
                s.push_str(var);
                if k > 1 {
                    s.push_str(&format!("^{}", k));
                }
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("t"))
    }
}

/// Exact determinant of a square polynomial matrix by fraction-free
/// (Bareiss) elimination; all intermediate divisions are exact.
pub fn det_poly(mat: &[Vec<Poly>]) -> Poly {
    let n = mat.len();
    if n == 0 {
        return Poly::one();
    }
    for row in mat {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut m: Vec<Vec<Poly>> = mat.to_vec();
    let mut prev = Poly::one();
    let mut sign = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.divexact(&prev);
            }
        }
        for i in k + 1..n {
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Characteristic polynomial det(tI - M) of a square rational matrix,
/// computed by the Faddeev-LeVerrier recurrence.
pub fn charpoly(m: &[Vec<Coef>]) -> Poly {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "characteristic polynomial of a non-square matrix");
    }
    // p(t) = t^n + c_1 t^{n-1} + ... + c_n
    let mut cs = vec![Coef::zero(); n + 1];
    cs[n] = Coef::one(); // coefficient of t^n
    let mut mk: Vec<Vec<Coef>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Coef::one() } else { Coef::zero() })
                .collect()
        })
        .collect();
    for k in 1..=n {
        // mk <- M * mk
        let mut next = vec![vec![Coef::zero(); n]; n];
        for i in 0..n {
            for t in 0..n {
                if m[i][t].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = &m[i][t] * &mk[t][j];
                    next[i][j] += prod;
                }
            }
        }
        mk = next;
        let trace: Coef = (0..n).map(|i| mk[i][i].clone()).sum();
        let ck = -trace / Coef::from_integer(k.into());
        for i in 0..n {
            mk[i][i] += &ck;
        }
        cs[n - k] = ck;
    }
    Poly::from_coeffs(cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Coef {
        Coef::from_integer(n.into())
    }

    #[test]
    fn arithmetic_and_division() {
        // (t + 1)(t - 1) = t^2 - 1
        let p = Poly::from_coeffs(vec![c(1), c(1)]);
        let q = Poly::from_coeffs(vec![c(-1), c(1)]);
        let prod = p.mul(&q);
        assert_eq!(prod, Poly::from_coeffs(vec![c(-1), c(0), c(1)]));
        assert_eq!(prod.divexact(&p), q);
        let (quo, rem) = Poly::from_coeffs(vec![c(1), c(0), c(1)]).divrem(&p);
        assert_eq!(quo, Poly::from_coeffs(vec![c(-1), c(1)]));
        assert_eq!(rem, Poly::constant(c(2)));
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let p = Poly::from_coeffs(vec![c(-1), c(0), c(1)]); // t^2 - 1
        let q = Poly::from_coeffs(vec![c(2), c(2)]); // 2t + 2
        assert_eq!(p.gcd(&q), Poly::from_coeffs(vec![c(1), c(1)]));
    }

    #[test]
    fn series_quotient_matches_geometric_series() {
        // 1 / (1 - t) = 1 + t + t^2 + ...
        let one = Poly::one();
        let d = Poly::from_coeffs(vec![c(1), c(-1)]);
        assert_eq!(one.series_quotient(&d, 4), vec![c(1); 5]);
    }

    #[test]
    fn determinant_of_companion_block() {
        // det [[t, -1], [2, t - 3]] = t^2 - 3t + 2
        let t = Poly::monomial(c(1), 1);
        let m = vec![
            vec![t.clone(), Poly::constant(c(-1))],
            vec![Poly::constant(c(2)), t.sub(&Poly::constant(c(3)))],
        ];
        assert_eq!(
            det_poly(&m),
            Poly::from_coeffs(vec![c(2), c(-3), c(1)])
        );
    }

    #[test]
    fn charpoly_of_diagonal_matrix() {
        let m = vec![vec![c(2), c(0)], vec![c(0), c(3)]];
        // (t-2)(t-3) = t^2 - 5t + 6
        assert_eq!(charpoly(&m), Poly::from_coeffs(vec![c(6), c(-5), c(1)]));
        assert_eq!(charpoly(&m).display("t"), "t^2 - 5*t + 6");
    }
}
