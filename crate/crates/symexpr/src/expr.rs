//! Canonical rational-function expressions.
//!
//! An [`Expression`] is `num/den` with
//! * `den` free of every `cos` atom (rationalized with the conjugate),
//! * `num` of degree at most one in every `cos` atom,
//! * `gcd(num, den) = 1` and `den` monic in the lexicographic order.
//!
//! Under the relation `sin^2 + cos^2 = 1` this form is unique, so equality of
//! values is structural equality.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::atom::{Atom, AtomKind, TrigFn};
use crate::error::ExprError;
use crate::gcd::gcd;
use crate::poly::{Monomial, Poly, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expression {
    num: Poly,
    den: Poly,
}

impl Default for Expression {
    fn default() -> Self {
        Self::zero()
    }
}

impl Expression {
    pub fn zero() -> Self {
        Expression {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn rational(p: i64, q: i64) -> Self {
        Self::constant(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn constant(c: Rational) -> Self {
        Expression {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn atom(a: Atom) -> Self {
        Expression {
            num: Poly::atom(a),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Expression {
            num: p.reduce_trig(),
            den: Poly::one(),
        }
    }

    /// Builds the canonical form of `num / den`.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let mut num = num.reduce_trig();
        let mut den = den.reduce_trig();
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        for cos in den.cos_atoms() {
            if !den.contains_atom(&cos) {
                continue;
            }
            let coeffs = den.coefficients_in(&cos);
            let d0 = coeffs.get(&0).cloned().unwrap_or_default();
            let d1 = coeffs.get(&1).cloned().unwrap_or_default();
            let conjugate = &d0 - &(&d1 * &Poly::atom(cos.clone()));
            num = (&num * &conjugate).reduce_trig();
            den = (&den * &conjugate).reduce_trig();
        }
        Ok(Self::cancel(num, den))
    }

    /// Cancels the gcd and normalizes the leading coefficient of `den`.
    /// Requires `den` nonzero and cos-free, `num` reduced.
    fn cancel(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if let Some(c) = den.as_constant() {
            let inv = c.recip();
            (num.scale(&inv), Poly::one())
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Expression { num, den }
        } else {
            let inv = lc.recip();
            Expression {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut set = self.num.atoms();
        set.extend(self.den.atoms());
        set
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        self.num.contains_atom(atom) || self.den.contains_atom(atom)
    }

    pub fn checked_div(&self, rhs: &Expression) -> Result<Expression, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        self.mul_parts(&rhs.den, &rhs.num)
    }

    pub fn recip(&self) -> Result<Expression, ExprError> {
        Expression::one().checked_div(self)
    }

    pub fn pow(&self, exp: i64) -> Result<Expression, ExprError> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Expression::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rational) -> Expression {
        if c.is_zero() {
            return Expression::zero();
        }
        Expression {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `self * (num / den)` where `den` may contain cos atoms.
    fn mul_parts(&self, num: &Poly, den: &Poly) -> Result<Expression, ExprError> {
        if den.cos_atoms().is_empty() {
            let g1 = gcd(&self.num, den);
            let g2 = gcd(num, &self.den);
            let n1 = self.num.exact_div(&g1).expect("gcd divides");
            let d2 = den.exact_div(&g1).expect("gcd divides");
            let n2 = num.exact_div(&g2).expect("gcd divides");
            let d1 = self.den.exact_div(&g2).expect("gcd divides");
            let raw = &n1 * &n2;
            let reduced = raw.reduce_trig();
            let den = &d1 * &d2;
            if reduced == raw {
                if reduced.is_zero() {
                    return Ok(Expression::zero());
                }
                let lc = den.leading_coefficient();
                let inv = lc.recip();
                return Ok(Expression {
                    num: reduced.scale(&inv),
                    den: den.scale(&inv),
                });
            }
            return Ok(Self::cancel(reduced, den));
        }
        Expression::from_parts(&self.num * num, &self.den * den)
    }

    /// Partial derivative with respect to the coordinate named `coordinate`.
    pub fn differentiate(&self, coordinate: &str) -> Expression {
        let dn = self.num.differentiate(coordinate);
        let dd = self.den.differentiate(coordinate);
        if dd.is_zero() {
            return Expression::from_parts(dn, self.den.clone()).expect("denominator is nonzero");
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        Expression::from_parts(num, den).expect("denominator is nonzero")
    }

    /// Replaces atoms by expressions.
    pub fn substitute(&self, map: &HashMap<Atom, Expression>) -> Result<Expression, ExprError> {
        if map.is_empty() || !self.atoms().iter().any(|a| map.contains_key(a)) {
            return Ok(self.clone());
        }
        let num = substitute_poly(&self.num, map)?;
        let den = substitute_poly(&self.den, map)?;
        num.checked_div(&den)
    }

    /// Exact rational value under `assignment`.
    ///
    /// Trig atoms are assigned directly; when both `sin(x)` and `cos(x)` are
    /// assigned they must lie on the unit circle.
    pub fn eval_numeric(&self, assignment: &HashMap<Atom, Rational>) -> Result<Rational, ExprError> {
        check_trig_assignment(assignment)?;
        let den = eval_poly(&self.den, assignment)?;
        if den.is_zero() {
            return Err(ExprError::Pole);
        }
        Ok(eval_poly(&self.num, assignment)? / den)
    }
}

fn check_trig_assignment(assignment: &HashMap<Atom, Rational>) -> Result<(), ExprError> {
    for (atom, s) in assignment {
        if let AtomKind::Trig {
            coordinate,
            func: TrigFn::Sin,
        } = atom.kind()
        {
            if let Some(c) = assignment.get(&Atom::cos(coordinate)) {
                if s * s + c * c != Rational::one() {
                    return Err(ExprError::TrigInconsistent(coordinate.to_string()));
                }
            }
        }
    }
    Ok(())
}

fn eval_poly(p: &Poly, assignment: &HashMap<Atom, Rational>) -> Result<Rational, ExprError> {
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        let mut term = c.clone();
        for (atom, exp) in m.factors() {
            let v = assignment
                .get(atom)
                .ok_or_else(|| ExprError::IncompleteAssignment(atom.to_string()))?;
            term *= num_traits::pow(v.clone(), *exp as usize);
        }
        total += term;
    }
    Ok(total)
}

fn substitute_poly(p: &Poly, map: &HashMap<Atom, Expression>) -> Result<Expression, ExprError> {
    let mut total = Expression::zero();
    for (m, c) in p.terms() {
        let mut kept = Monomial::one();
        let mut term = Expression::constant(c.clone());
        for (atom, exp) in m.factors() {
            match map.get(atom) {
                Some(value) => term = &term * &value.pow(*exp as i64)?,
                None => kept = kept.mul(&Monomial::atom_pow(atom.clone(), *exp)),
            }
        }
        let kept = Expression::from_poly(Poly::term(Rational::one(), kept));
        total = &total + &(&term * &kept);
    }
    Ok(total)
}

impl From<i64> for Expression {
    fn from(n: i64) -> Self {
        Expression::integer(n)
    }
}

impl From<Atom> for Expression {
    fn from(a: Atom) -> Self {
        Expression::atom(a)
    }
}

impl Add for &Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return Expression::cancel(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let (a, b) = if g.is_one() {
            (rhs.den.clone(), self.den.clone())
        } else {
            (
                rhs.den.exact_div(&g).expect("gcd divides"),
                self.den.exact_div(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        let den = &self.den * &a;
        Expression::cancel(num, den)
    }
}

impl Sub for &Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        self + &(-rhs)
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        if self.is_zero() || rhs.is_zero() {
            return Expression::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        self.mul_parts(&rhs.num, &rhs.den).expect("denominators are nonzero")
    }
}

/// Panics on division by zero; use [`Expression::checked_div`] otherwise.
impl Div for &Expression {
    type Output = Expression;
    fn div(self, rhs: &Expression) -> Expression {
        self.checked_div(rhs).expect("division by zero expression")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expression {
            type Output = Expression;
            fn $m(self, rhs: Expression) -> Expression {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expression> for Expression {
            type Output = Expression;
            fn $m(self, rhs: &Expression) -> Expression {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        -&self
    }
}

impl std::iter::Sum for Expression {
    fn sum<I: Iterator<Item = Expression>>(iter: I) -> Expression {
        iter.fold(Expression::zero(), |acc, x| &acc + &x)
    }
}

// ---- printing ----

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (atom, exp) in m.factors() {
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&atom.to_string());
        if *exp > 1 {
            out.push('^');
            out.push_str(&exp.to_string());
        }
    }
}

/// Prints a polynomial with integer coefficients, highest term first.
fn write_integer_poly(out: &mut String, p: &Poly) {
    if p.is_zero() {
        out.push('0');
        return;
    }
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let c = c.numer().clone();
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_one() {
            out.push_str(&a.to_string());
        } else {
            if !a.is_one() {
                out.push_str(&a.to_string());
                out.push('*');
            }
            write_monomial(out, m);
        }
    }
}

fn is_single_factor(p: &Poly) -> bool {
    match p.as_monomial() {
        Some((m, c)) => {
            let coef_is_one = c.abs().is_one();
            (m.is_one()) || (coef_is_one && m.factors().len() == 1)
        }
        None => false,
    }
}

impl fmt::Display for Expression {
    /// Prints in the parser grammar, e.g. `-2*m(u)/r^3` or
    /// `c^4*m'(u)/(4*G*pi*r^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Scale so both numerator and denominator have integer coefficients
        // and the denominator has positive leading coefficient and unit content.
        let den_lcm = self.den.denominator_lcm();
        let mut den = self.den.scale(&Rational::from_integer(den_lcm.clone()));
        let content = den.integer_content();
        let mut factor = Rational::new(den_lcm, content);
        den = self.den.scale(&factor);
        if den.leading_coefficient().is_negative() {
            den = -&den;
            factor = -factor;
        }
        let mut num = self.num.scale(&factor);
        let num_lcm = num.denominator_lcm();
        if !num_lcm.is_one() {
            let s = Rational::from_integer(num_lcm);
            num = num.scale(&s);
            den = den.scale(&s);
        }

        let mut out = String::new();
        if den.is_one() {
            write_integer_poly(&mut out, &num);
            return f.write_str(&out);
        }
        if num.len() > 1 {
            out.push('(');
            write_integer_poly(&mut out, &num);
            out.push(')');
        } else {
            write_integer_poly(&mut out, &num);
        }
        out.push('/');
        if is_single_factor(&den) {
            write_integer_poly(&mut out, &den);
        } else {
            out.push('(');
            write_integer_poly(&mut out, &den);
            out.push(')');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
