//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::atom::{Atom, AtomDerivative};

pub type Rational = BigRational;

/// A power product of atoms, sorted by atom with strictly positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom_pow(atom: Atom, exp: u32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            Monomial(vec![(atom, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        match self.0.binary_search_by(|(a, _)| a.cmp(atom)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    /// Same monomial with the exponent of `atom` replaced.
    pub fn with_degree(&self, atom: &Atom, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        match v.binary_search_by(|(a, _)| a.cmp(atom)) {
            Ok(i) if exp == 0 => {
                v.remove(i);
            }
            Ok(i) => v[i].1 = exp,
            Err(_) if exp == 0 => {}
            Err(i) => v.insert(i, (atom.clone(), exp)),
        }
        Monomial(v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / divisor` when the division is exact.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (atom, exp) in &self.0 {
            if j < divisor.0.len() && divisor.0[j].0 < *atom {
                return None;
            }
            if j < divisor.0.len() && divisor.0[j].0 == *atom {
                let d = divisor.0[j].1;
                j += 1;
                match exp.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((atom.clone(), exp - d)),
                }
            } else {
                out.push((atom.clone(), *exp));
            }
        }
        if j < divisor.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (atom, exp) in &self.0 {
            let e = other.degree_in(atom);
            if e > 0 {
                out.push((atom.clone(), (*exp).min(e)));
            }
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Lexicographic order in which the smallest atom is the most
    /// significant variable. Compatible with multiplication.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Equal => match ex.cmp(ey) {
                        Ordering::Equal => i += 1,
                        ord => return ord,
                    },
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with nonzero rational coefficients keyed by monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn atom(atom: Atom) -> Self {
        Self::term(Rational::one(), Monomial::atom_pow(atom, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value when the polynomial has no atoms (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|(a, _)| a.clone())).collect()
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        self.terms.keys().any(|m| m.degree_in(atom) > 0)
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(atom)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, atom: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(atom)).min().unwrap_or(0)
    }

    /// Coefficients of the powers of `atom`; each coefficient is free of `atom`.
    pub fn coefficients_in(&self, atom: &Atom) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.degree_in(atom);
            out.entry(d).or_default().add_term(m.with_degree(atom, 0), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if let Some((dm, dc)) = divisor.as_monomial() {
            let inv = dc.recip();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(dm)?, c * &inv);
            }
            return Some(Poly { terms });
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&lm)?;
            let qc = rc / &lc;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Partial derivative with respect to the coordinate `coordinate`.
    /// The result is not trig-reduced.
    pub fn differentiate(&self, coordinate: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (atom, exp) in m.factors() {
                let rest = m.with_degree(atom, exp - 1);
                let k = c * Rational::from_integer(BigInt::from(*exp));
                match atom.derivative(coordinate) {
                    AtomDerivative::Zero => {}
                    AtomDerivative::One => out.add_term(rest, k),
                    AtomDerivative::Atom(d) => out.add_term(rest.mul(&Monomial::atom_pow(d, 1)), k),
                    AtomDerivative::NegAtom(d) => out.add_term(rest.mul(&Monomial::atom_pow(d, 1)), -k),
                }
            }
        }
        out
    }

    pub fn cos_atoms(&self) -> BTreeSet<Atom> {
        self.atoms().into_iter().filter(Atom::is_cos).collect()
    }

    /// Rewrites every `cos(x)^k`, `k >= 2`, using `cos(x)^2 = 1 - sin(x)^2`.
    pub fn reduce_trig(&self) -> Poly {
        let needs = self
            .terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, e)| *e >= 2 && a.is_cos()));
        if !needs {
            return self.clone();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = Monomial::one();
            let mut factor = Poly::one();
            for (atom, exp) in m.factors() {
                if atom.is_cos() && *exp >= 2 {
                    let sin = atom.sin_partner().expect("cos atom has a sin partner");
                    let one_minus_sin2 = &Poly::one() - &Poly::term(Rational::one(), Monomial::atom_pow(sin, 2));
                    factor = &factor * &one_minus_sin2.pow(exp / 2);
                    if exp % 2 == 1 {
                        rest = rest.mul(&Monomial::atom_pow(atom.clone(), 1));
                    }
                } else {
                    rest = rest.mul(&Monomial::atom_pow(atom.clone(), *exp));
                }
            }
            for (fm, fc) in factor.terms {
                out.add_term(fm.mul(&rest), fc * c);
            }
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn integer_content(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
            .abs()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}
