//! The category of factorizations of a monoid with zero, and its nerve sets.
//!
//! Objects are the nonzero elements; a morphism `a → b` is a triple
//! `(α, a, β)` with `α·a·β = b`. Distinct triples are distinct morphisms even
//! when they share endpoints.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::monoid::{Elem, MonoidWithZero};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FacError {
    #[error("zero element {0} is not an object")]
    ZeroObject(Elem),
    #[error("α·a·β is zero for ({alpha}, {a}, {beta})")]
    ZeroTarget { alpha: Elem, a: Elem, beta: Elem },
    #[error("morphisms are not composable: {first_target} ≠ {second_source}")]
    NotComposable { first_target: Elem, second_source: Elem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacMorphism {
    pub alpha: Elem,
    pub source: Elem,
    pub beta: Elem,
    pub target: Elem,
}

impl FacMorphism {
    pub fn new(m: &MonoidWithZero, alpha: Elem, a: Elem, beta: Elem) -> Result<Self, FacError> {
        if a == m.zero() {
            return Err(FacError::ZeroObject(a));
        }
        let target = m.sandwich(alpha, a, beta);
        if target == m.zero() {
            return Err(FacError::ZeroTarget { alpha, a, beta });
        }
        Ok(FacMorphism {
            alpha,
            source: a,
            beta,
            target,
        })
    }

    pub fn identity(m: &MonoidWithZero, a: Elem) -> Result<Self, FacError> {
        Self::new(m, m.identity(), a, m.identity())
    }
}

/// `Mor(a, b)`, ordered lexicographically by `(α, β)`.
pub fn morphisms(m: &MonoidWithZero, a: Elem, b: Elem) -> Result<Vec<FacMorphism>, FacError> {
    for x in [a, b] {
        if x == m.zero() {
            return Err(FacError::ZeroObject(x));
        }
    }
    Ok(morphisms_from(m, a)?
        .into_iter()
        .filter(|f| f.target == b)
        .collect())
}

/// Every morphism with source `a`, ordered by `(α, β)`.
pub fn morphisms_from(m: &MonoidWithZero, a: Elem) -> Result<Vec<FacMorphism>, FacError> {
    if a == m.zero() {
        return Err(FacError::ZeroObject(a));
    }
    let mut out = Vec::new();
    for alpha in 0..m.order() {
        for beta in 0..m.order() {
            let target = m.sandwich(alpha, a, beta);
            if target != m.zero() {
                out.push(FacMorphism {
                    alpha,
                    source: a,
                    beta,
                    target,
                });
            }
        }
    }
    Ok(out)
}

/// Every morphism of the category, ordered by source then `(α, β)`.
pub fn all_morphisms(m: &MonoidWithZero) -> Vec<FacMorphism> {
    m.nonzero()
        .flat_map(|a| morphisms_from(m, a).expect("a is nonzero"))
        .collect()
}

/// `second ∘ first`: `(α′, β′)(α, β) = (α′α, ββ′)`.
pub fn compose(
    m: &MonoidWithZero,
    second: &FacMorphism,
    first: &FacMorphism,
) -> Result<FacMorphism, FacError> {
    if first.target != second.source {
        return Err(FacError::NotComposable {
            first_target: first.target,
            second_source: second.source,
        });
    }
    FacMorphism::new(
        m,
        m.mul(second.alpha, first.alpha),
        first.source,
        m.mul(first.beta, second.beta),
    )
}

/// A point `(a_1, …, a_n)` of `Ner_n` (product nonzero).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NerveTuple(pub Vec<Elem>);

impl NerveTuple {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.0
    }

    pub fn product(&self, m: &MonoidWithZero) -> Elem {
        m.product(&self.0)
    }

    pub fn display<'a>(&'a self, m: &'a MonoidWithZero) -> impl fmt::Display + 'a {
        DisplayTuple(&self.0, m)
    }
}

struct DisplayTuple<'a>(&'a [Elem], &'a MonoidWithZero);

impl fmt::Display for DisplayTuple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&e| self.1.name(e)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All `len`-tuples with nonzero product, in lexicographic id order.
pub fn tuples_with_nonzero_product(m: &MonoidWithZero, len: usize) -> Vec<Vec<Elem>> {
    fn extend(
        m: &MonoidWithZero,
        len: usize,
        prefix: &mut Vec<Elem>,
        product: Elem,
        out: &mut Vec<Vec<Elem>>,
    ) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for x in 0..m.order() {
            let p = m.mul(product, x);
            if p != m.zero() {
                prefix.push(x);
                extend(m, len, prefix, p, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(m, len, &mut Vec::with_capacity(len), m.identity(), &mut out);
    out
}

/// `Ner_n S`; `Ner_0` is the single empty tuple.
pub fn nerve(m: &MonoidWithZero, n: usize) -> Vec<NerveTuple> {
    tuples_with_nonzero_product(m, n)
        .into_iter()
        .map(NerveTuple)
        .collect()
}

/// `Ner_n` with a position lookup.
#[derive(Clone, Debug)]
pub struct NerveIndex {
    tuples: Vec<NerveTuple>,
    position: HashMap<Vec<Elem>, usize>,
}

impl NerveIndex {
    pub fn new(m: &MonoidWithZero, n: usize) -> Self {
        let tuples = nerve(m, n);
        let position = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.0.clone(), i))
            .collect();
        NerveIndex { tuples, position }
    }

    pub fn tuples(&self) -> &[NerveTuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, tuple: &[Elem]) -> Option<usize> {
        self.position.get(tuple).copied()
    }
}
