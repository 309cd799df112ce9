//! Univariate rational polynomials, Sturm sequences and real-root counting.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

/// Polynomial with coefficients in ascending degree order; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }

    /// Euclidean division `self = q·d + r`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d
            .leading()
            .expect("division by the zero polynomial")
            .clone();
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Self(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] / &dl;
            if !coef.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &coef * dc;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free part `p / gcd(p, p')`.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
}

/// Sturm chain `p, p', -rem(p, p'), …` of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            chain.push(next);
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            next = r.scale(&-Rational::one());
        }
        Self { chain }
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.eval(x).cmp(&Rational::zero())))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let lead = p
                .leading()
                .expect("chain members are nonzero")
                .cmp(&Rational::zero());
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if !positive && odd {
                lead.reverse()
            } else {
                lead
            }
        }))
    }

    /// Distinct real roots in `(a, b]`; requires `a < b`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// Count of distinct real roots of `p` in the open interval `(a, b)`.
pub fn count_roots_open(p: &Poly, a: &Rational, b: &Rational) -> usize {
    if a >= b || p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut q = p.square_free();
    for end in [a, b] {
        if q.eval(end).is_zero() {
            q = q.div_rem(&Poly::linear_root(end)).0;
        }
    }
    if q.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmSequence::new(&q).count_half_open(a, b)
}

/// Rational interval `[lo, hi]` containing exactly one real root, with
/// `lo == hi` when the root is rational and found exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
}

/// Isolates every distinct real root of `p` inside `[a, b]` by Sturm
/// bisection, refining each interval to width at most `width`. Rational
/// roots met during bisection are returned exactly and divided out.
pub fn isolate_roots(p: &Poly, a: &Rational, b: &Rational, width: &Rational) -> Vec<IsolatedRoot> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 || a > b {
        return out;
    }
    let mut q = p.square_free();
    let exact = |r: &Rational| IsolatedRoot {
        lo: r.clone(),
        hi: r.clone(),
    };
    for end in [a, b] {
        if q.eval(end).is_zero() {
            out.push(exact(end));
            q = q.div_rem(&Poly::linear_root(end)).0;
        }
    }
    if a == b {
        return out;
    }
    let two = int(2);
    let mut sturm = SturmSequence::new(&q);
    // Interval endpoints are never roots of the current `q`.
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count_half_open(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && &(&hi - &lo) <= width {
            out.push(IsolatedRoot { lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / &two;
        if q.eval(&mid).is_zero() {
            out.push(exact(&mid));
            q = q.div_rem(&Poly::linear_root(&mid)).0;
            sturm = SturmSequence::new(&q);
        }
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Characteristic polynomial `det(λI - A)` via Faddeev–LeVerrier.
pub fn characteristic_polynomial(a: &[Vec<Rational>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let identity = |i: usize, j: usize| {
        if i == j {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    // M_k = A·M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let c_prev = coeffs[n - k + 1].clone();
        let mut next = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        acc += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = acc + &c_prev * identity(i, j);
            }
        }
        m = next;
        let mut trace = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !m[l][i].is_zero() {
                    trace += &a[i][l] * &m[l][i];
                }
            }
        }
        coeffs[n - k] = -trace / int(k as i64);
    }
    Poly::new(coeffs)
}

/// Magnitude bound on every real root (Cauchy): `1 + max |cᵢ / c_lead|`.
pub fn root_bound(p: &Poly) -> Rational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let mut best = Rational::zero();
    for c in &p.0[..p.0.len() - 1] {
        let r = c.abs() / &lead;
        if r > best {
            best = r;
        }
    }
    best + Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) = x² - 3x + 2
        let p = Poly::from_ints(&[2, -3, 1]);
        let (q, r) = p.div_rem(&Poly::from_ints(&[-1, 1]));
        assert_eq!(q, Poly::from_ints(&[-2, 1]));
        assert!(r.is_zero());
        let g = p.gcd(&Poly::from_ints(&[-2, 1]).mul(&Poly::from_ints(&[3, 1])));
        assert_eq!(g, Poly::from_ints(&[-2, 1]));
    }

    #[test]
    fn square_free_removes_multiplicity() {
        // (x-1)²(x+2)
        let p = Poly::from_ints(&[-1, 1])
            .mul(&Poly::from_ints(&[-1, 1]))
            .mul(&Poly::from_ints(&[2, 1]));
        assert_eq!(
            p.square_free(),
            Poly::from_ints(&[-1, 1]).mul(&Poly::from_ints(&[2, 1]))
        );
    }

    #[test]
    fn sturm_counts() {
        // x³ - x = x(x-1)(x+1)
        let p = Poly::from_ints(&[0, -1, 0, 1]);
        let s = SturmSequence::new(&p);
        assert_eq!(s.count_real(), 3);
        assert_eq!(count_roots_open(&p, &int(-1), &int(1)), 1);
        assert_eq!(count_roots_open(&p, &ratio(-3, 2), &ratio(3, 2)), 3);
        assert_eq!(count_roots_open(&p, &int(0), &int(1)), 0);
        // x² + 1 has no real roots.
        assert_eq!(
            SturmSequence::new(&Poly::from_ints(&[1, 0, 1])).count_real(),
            0
        );
    }

    #[test]
    fn isolation_of_irrational_and_rational_roots() {
        // (x² - 2)(x - 1)
        let p = Poly::from_ints(&[-2, 0, 1]).mul(&Poly::from_ints(&[-1, 1]));
        let roots = isolate_roots(&p, &int(-4), &int(4), &ratio(1, 1000));
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|r| r.lo == int(1) && r.hi == int(1)));
        for r in &roots {
            assert!(&r.hi - &r.lo <= ratio(1, 1000));
        }
        let sqrt2 = roots.last().unwrap();
        assert!(&sqrt2.lo * &sqrt2.lo <= int(2) && int(2) <= &sqrt2.hi * &sqrt2.hi);
    }

    #[test]
    fn characteristic_polynomial_of_small_matrices() {
        let a = vec![vec![int(3), int(0)], vec![int(0), int(-4)]];
        // (λ-3)(λ+4) = λ² + λ - 12
        assert_eq!(characteristic_polynomial(&a), Poly::from_ints(&[-12, 1, 1]));
        let b = vec![vec![int(2), int(1)], vec![int(1), int(2)]];
        assert_eq!(characteristic_polynomial(&b), Poly::from_ints(&[3, -4, 1]));
    }
}
