use std::collections::BTreeMap;

use crate::coeff::{join_terms, Field, Scalar};

/// Sparse polynomial in `N` variables over a [`Field`], keyed by exponent
/// vectors. Stored coefficients are never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<const N: usize> {
    field: Field,
    terms: BTreeMap<[u32; N], Scalar>,
}

impl<const N: usize> Poly<N> {
    pub fn zero(field: &Field) -> Self {
        Poly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, c: Scalar) -> Self {
        Self::monomial(field, [0; N], c)
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, field.one())
    }

    pub fn monomial(field: &Field, exp: [u32; N], c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(exp, c);
        }
        Poly {
            field: field.clone(),
            terms,
        }
    }

    pub fn var(field: &Field, i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; N], Scalar)>>(field: &Field, it: I) -> Self {
        let mut p = Self::zero(field);
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<[u32; N], Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<[u32; N], Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32; N]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, e: [u32; N], c: &Scalar) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = self.field.add(old, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// Highest total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|k| k == d),
        }
    }

    /// Sum of the terms of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Terms of total degree below `n`.
    pub fn truncate(&self, n: u32) -> Self {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() < n)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, &self.field.neg(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, self.field.neg(c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (*e, self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut acc: BTreeMap<[u32; N], Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = *ea;
                for i in 0..N {
                    e[i] += eb[i];
                }
                let t = f.mul(ca, cb);
                match acc.get_mut(&e) {
                    Some(old) => *old = f.add(old, &t),
                    None => {
                        acc.insert(e, t);
                    }
                }
            }
        }
        acc.retain(|_, c| !f.is_zero(c));
        Poly {
            field: f.clone(),
            terms: acc,
        }
    }

    pub fn mul_monomial(&self, m: &[u32; N]) -> Self {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    for i in 0..N {
                        e[i] += m[i];
                    }
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.add_term(e2, &f.mul(c, &f.from_i64(e[i] as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[Scalar; N]) -> Scalar {
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..N {
                if e[i] > 0 {
                    t = f.mul(&t, &f.pow(&point[i], e[i] as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Substitutes a polynomial in `M` variables for each of the `N` variables.
    pub fn compose<const M: usize>(&self, images: &[Poly<M>; N]) -> Poly<M> {
        let f = &self.field;
        let mut powers: Vec<Vec<Poly<M>>> = images.iter().map(|p| vec![Poly::one(f), p.clone()]).collect();
        let mut out = Poly::<M>::zero(f);
        for (e, c) in &self.terms {
            let mut t = Poly::<M>::constant(f, c.clone());
            for i in 0..N {
                let k = e[i] as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Whether every coefficient lies in the immediate base field.
    pub fn is_over_base(&self) -> bool {
        self.terms.values().all(|c| self.field.as_base(c).is_some())
    }

    /// Same polynomial viewed over another field via a coefficient map.
    pub fn map_coeffs<F>(&self, target: &Field, mut map: F) -> Self
    where
        F: FnMut(&Scalar) -> Scalar,
    {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            out.add_term(*e, &map(c));
        }
        out
    }

    /// Divides by a nonzero constant so that the leading (largest exponent) term is 1.
    pub fn monic(&self) -> Self {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field.inv(c).expect("nonzero coefficient")),
        }
    }

    /// Canonical text, terms in descending lexicographic exponent order.
    pub fn to_text(&self, vars: &[&str; N]) -> String {
        let terms: Vec<(Scalar, String)> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| (c.clone(), monomial_text(e, vars)))
            .collect();
        join_terms(&self.field, &terms)
    }
}

pub(crate) fn monomial_text<const N: usize>(e: &[u32; N], vars: &[&str; N]) -> String {
    let mut parts = Vec::new();
    for i in 0..N {
        match e[i] {
            0 => {}
            1 => parts.push(vars[i].to_string()),
            k => parts.push(format!("{}^{k}", vars[i])),
        }
    }
    parts.join("*")
}

/// All exponent vectors in `N` variables of total degree exactly `k`, in
/// descending lexicographic order.
pub fn monomials_of_degree<const N: usize>(k: u32) -> Vec<[u32; N]> {
    let mut out = Vec::new();
    let mut cur = [0u32; N];
    fn rec<const N: usize>(i: usize, left: u32, cur: &mut [u32; N], out: &mut Vec<[u32; N]>) {
        if i == N - 1 {
            cur[i] = left;
            out.push(*cur);
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    if N == 0 {
        return out;
    }
    rec(0, k, &mut cur, &mut out);
    out
}
