//! Multivariate polynomial GCD over the rationals.
//!
//! Recursive primitive pseudo-remainder sequences. The result is monic with
//! respect to the lexicographic monomial order, so it is unique.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::atom::Atom;
use crate::poly::{Monomial, Poly, Rational};

pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if let Some((m, _)) = a.as_monomial() {
        return monomial_gcd(m, b);
    }
    if let Some((m, _)) = b.as_monomial() {
        return monomial_gcd(m, a);
    }
    if a == b {
        return a.monic();
    }

    // Pull out the common monomial factor first; it keeps the PRS small.
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let mg = ma.gcd(&mb);
    let a = if ma.is_one() { a.clone() } else { div_monomial(a, &ma) };
    let b = if mb.is_one() { b.clone() } else { div_monomial(b, &mb) };
    let g = gcd_no_monomial_content(&a, &b);
    if mg.is_one() {
        g
    } else {
        g.mul_term(&mg, &Rational::one())
    }
}

fn gcd_no_monomial_content(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let va = a.atoms();
    let vb = b.atoms();
    if let Some(x) = va.difference(&vb).next() {
        return gcd(&content_in(a, x), b);
    }
    if let Some(x) = vb.difference(&va).next() {
        return gcd(a, &content_in(b, x));
    }
    // Variables that provably do not occur in the gcd let us work on
    // coefficients instead, and if none can occur the gcd is trivial.
    let mut possible = Vec::new();
    for x in &va {
        if !absent_from_gcd(a, b, x) {
            possible.push(x.clone());
        }
    }
    if possible.is_empty() {
        return Poly::one();
    }
    if possible.len() < va.len() {
        let x = va.iter().find(|v| !possible.contains(v)).expect("some variable excluded");
        let mut coeffs: Vec<Poly> = a.coefficients_in(x).into_values().chain(b.coefficients_in(x).into_values()).collect();
        coeffs.sort_by_key(|c| c.len());
        let mut iter = coeffs.into_iter();
        let mut g = iter.next().expect("nonzero polynomial");
        for c in iter {
            if g.is_constant() {
                return Poly::one();
            }
            g = gcd(&g, &c);
        }
        return if g.is_constant() { Poly::one() } else { g.monic() };
    }
    let x = pick_variable(&possible.into_iter().collect());
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let c = gcd(&ca, &cb);
    let pa = if ca.is_one() { a.clone() } else { a.exact_div(&ca).expect("content divides") };
    let pb = if cb.is_one() { b.clone() } else { b.exact_div(&cb).expect("content divides") };
    let g = primitive_prs(pa, pb, &x);
    (&c * &g).monic()
}

/// Evaluates every atom except `x` at a point; returns coefficients by degree in `x`.
fn univariate_image(p: &Poly, x: &Atom, point: &HashMap<Atom, Rational>) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.degree_in(x) as usize + 1];
    for (m, c) in p.terms() {
        let mut v = c.clone();
        let mut d = 0;
        for (atom, e) in m.factors() {
            if atom == x {
                d = *e as usize;
            } else {
                v *= num_traits::pow(point[atom].clone(), *e as usize);
            }
        }
        out[d] += v;
    }
    out
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of the univariate gcd over the rationals.
fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let lb = b.last().expect("nonempty").clone();
        while a.len() >= b.len() {
            let q = a.last().expect("nonempty").clone() / &lb;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                let t = &q * c;
                a[i + shift] -= t;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when a specialization of the other atoms certifies that the gcd of
/// `a` and `b` has degree zero in `x`. The leading coefficients must not
/// vanish at the point, so degrees in `x` are preserved by evaluation.
fn absent_from_gcd(a: &Poly, b: &Poly, x: &Atom) -> bool {
    let mut others: BTreeSet<Atom> = a.atoms();
    others.extend(b.atoms());
    others.remove(x);
    for trial in 0..3i64 {
        let point: HashMap<Atom, Rational> = others
            .iter()
            .enumerate()
            .map(|(i, atom)| {
                let v = 2 + 3 * i as i64 + 7 * trial + (i as i64 * i as i64) % 5;
                (atom.clone(), Rational::new(BigInt::from(if i % 2 == 0 { v } else { -v }), BigInt::from(1 + trial)))
            })
            .collect();
        let ia = univariate_image(a, x, &point);
        let ib = univariate_image(b, x, &point);
        if ia.last().is_some_and(|c| c.is_zero()) || ib.last().is_some_and(|c| c.is_zero()) {
            continue;
        }
        return univariate_gcd_degree(ia, ib) == 0;
    }
    false
}

fn pick_variable(vars: &BTreeSet<Atom>) -> Atom {
    vars.iter().next().cloned().expect("nonconstant polynomial has an atom")
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let mut g = m.clone();
    for (pm, _) in p.terms() {
        g = g.gcd(pm);
        if g.is_one() {
            break;
        }
    }
    Poly::term(num_traits::One::one(), g)
}

/// Largest monomial dividing every term.
fn monomial_content(p: &Poly) -> Monomial {
    let mut it = p.terms();
    let Some((first, _)) = it.next() else {
        return Monomial::one();
    };
    let mut g = first.clone();
    for (m, _) in it {
        if g.is_one() {
            break;
        }
        g = g.gcd(m);
    }
    g
}

fn div_monomial(p: &Poly, m: &Monomial) -> Poly {
    Poly::from_terms(p.terms().map(|(k, c)| (k.div(m).expect("monomial content divides"), c.clone())))
}

/// GCD of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Poly, x: &Atom) -> Poly {
    let coeffs = p.coefficients_in(x);
    let mut iter = coeffs.into_values();
    let mut g = iter.next().unwrap_or_default();
    for c in iter {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, &c);
    }
    if g.is_constant() {
        Poly::one()
    } else {
        g.monic()
    }
}

fn primitive_part(p: &Poly, x: &Atom) -> Poly {
    let c = content_in(p, x);
    if c.is_one() {
        p.monic()
    } else {
        p.exact_div(&c).expect("content divides").monic()
    }
}

fn leading_coefficient_in(p: &Poly, x: &Atom) -> (u32, Poly) {
    let coeffs = p.coefficients_in(x);
    let (d, c) = coeffs.into_iter().next_back().expect("nonzero polynomial");
    (d, c)
}

/// Sparse pseudo-remainder of `a` by `b` in the variable `x`.
fn pseudo_remainder(a: &Poly, b: &Poly, x: &Atom) -> Poly {
    let (db, lb) = leading_coefficient_in(b, x);
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let (dr, lr) = leading_coefficient_in(&r, x);
        if dr < db {
            return r;
        }
        let shift = Poly::term(num_traits::One::one(), Monomial::atom_pow(x.clone(), dr - db));
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
}

fn primitive_prs(a: Poly, b: Poly, x: &Atom) -> Poly {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    a = primitive_part(&a, x);
    b = primitive_part(&b, x);
    loop {
        let r = pseudo_remainder(&a, &b, x);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(x) == 0 {
            return Poly::one();
        }
        a = b;
        b = primitive_part(&r, x);
    }
}
