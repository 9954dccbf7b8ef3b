use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Dense univariate polynomial over the rationals, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn one() -> Self {
        UniPoly(vec![Rat::one()])
    }

    /// `t - a`
    pub fn linear(a: &Rat) -> Self {
        UniPoly(vec![-a.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rat::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = Rat::zero();
        Self::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - other.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rat::from_integer(BigInt::from(i))).collect())
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = divisor.lead().unwrap().recip();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UniPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.0.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g = gcd` (monic).
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), UniPoly(Vec::new()));
        let (mut t0, mut t1) = (UniPoly(Vec::new()), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = r0.lead().map(|l| l.recip()).unwrap_or_else(Rat::one);
        let sc = |p: &Self| UniPoly(p.0.iter().map(|c| c * &inv).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    /// Squarefree part, monic.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// All distinct rational roots, found by p-adic lifting of roots of the
    /// monic integer transform, then verified exactly.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.squarefree();
        // strip the root 0
        if p.0[0].is_zero() {
            roots.push(Rat::zero());
            p = UniPoly::new(p.0[1..].to_vec());
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // primitive integer coefficients
        let lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.0.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let n = ints.len() - 1;
        let lead = ints[n].clone();
        // y = lead * x turns the polynomial monic with integer coefficients
        let mut monic = vec![BigInt::zero(); n + 1];
        let mut lp = BigInt::one();
        for k in (0..=n).rev() {
            // coefficient of y^k is a_k * lead^(n-1-k) for k < n
            if k == n {
                monic[k] = BigInt::one();
            } else {
                monic[k] = &ints[k] * &lp;
                lp *= &lead;
            }
        }
        for y in integer_roots(&monic) {
            let x = Rat::new(y, lead.clone());
            if p.eval(&x).is_zero() {
                roots.push(x);
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn small_primes() -> impl Iterator<Item = u64> {
    (1009u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

// Integer roots of a monic squarefree integer polynomial.
fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let n = coeffs.len() - 1;
    let bound: BigInt = coeffs[..n].iter().map(|c| c.abs()).max().unwrap_or_default() + 1;
    let deriv: Vec<BigInt> = (1..=n).map(|i| &coeffs[i] * BigInt::from(i)).collect();
    for p in small_primes().take(60) {
        let pb = BigInt::from(p);
        // roots mod p, all of which must be simple for Hensel lifting
        let mut residues = Vec::new();
        let mut ok = true;
        for r in 0..p {
            let rb = BigInt::from(r);
            if eval_mod(coeffs, &rb, &pb).is_zero() {
                if eval_mod(&deriv, &rb, &pb).is_zero() {
                    ok = false;
                    break;
                }
                residues.push(rb);
            }
        }
        if !ok {
            continue;
        }
        let mut modulus = pb.clone();
        let target = &bound * 2 + 1;
        let mut lifted = residues;
        while modulus < target {
            let next = &modulus * &modulus;
            lifted = lifted
                .into_iter()
                .map(|r| {
                    let f = eval_mod(coeffs, &r, &next);
                    let df = eval_mod(&deriv, &r, &next);
                    let inv = mod_inverse(&df, &next).expect("simple root has invertible derivative");
                    (r - f * inv).mod_floor(&next)
                })
                .collect();
            modulus = next;
        }
        let half = &modulus / 2;
        let mut out = Vec::new();
        for r in lifted {
            let y = if r > half { r - &modulus } else { r };
            let val = coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &y + c);
            if val.is_zero() {
                out.push(y);
            }
        }
        return out;
    }
    Vec::new()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ri};

    #[test]
    fn roots_of_products() {
        // (t-2)(3t+1)(t^2+1)
        let p = UniPoly::linear(&ri(2)).mul(&UniPoly::from_i64(&[1, 3])).mul(&UniPoly::from_i64(&[1, 0, 1]));
        assert_eq!(p.rational_roots(), vec![rat(-1, 3), ri(2)]);
    }

    #[test]
    fn roots_with_multiplicity_and_zero() {
        let p = UniPoly::linear(&ri(-5)).pow(3).mul(&UniPoly::from_i64(&[0, 1]));
        assert_eq!(p.rational_roots(), vec![ri(-5), ri(0)]);
        assert!(UniPoly::from_i64(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn large_roots() {
        let p = UniPoly::linear(&ri(1_000_003)).mul(&UniPoly::linear(&rat(-7, 9)));
        assert_eq!(p.rational_roots(), vec![rat(-7, 9), ri(1_000_003)]);
    }

    #[test]
    fn ext_gcd_identity() {
        let a = UniPoly::from_i64(&[-1, 0, 1]);
        let b = UniPoly::from_i64(&[1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, UniPoly::from_i64(&[1, 1]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
