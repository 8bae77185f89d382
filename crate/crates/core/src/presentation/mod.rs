//! Filtered quadratic presentations `k<V>/(r + a1(r) + a0(r))`, their PBW rewriting
//! systems and the intersection coalgebra of the quadratic part.

mod coalgebra;
mod parse;
mod rewriting;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::{rank, rref_of_vectors, Matrix, SparseVector};
use crate::scalar::{coefficient_prefix, Field, Scalar};

pub use coalgebra::{intersection_coalgebra, IntersectionCoalgebra};
pub use parse::{declared_field, parse_element, parse_presentation, ParseError};
pub use rewriting::{pbw_confluence_check, Algebra, Confluence, OverlapWitness, RewritingSystem};

/// A word in the generators, as generator indices.
pub type Word = Vec<usize>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error(
        "quadratic parts of the relations are linearly dependent (rank {rank} < {count} relations)"
    )]
    DependentRelations { rank: usize, count: usize },
    #[error("relations are not orientable: {0}")]
    NonOrientable(String),
    #[error("rewriting system is not confluent: {0}")]
    NotConfluent(String),
    #[error("bimodule '{name}': {message}")]
    InvalidBimodule { name: String, message: String },
    #[error("unknown bimodule '{0}'")]
    UnknownBimodule(String),
    #[error("element {0} is not central")]
    NotCentral(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

/// `quadratic + linear + constant = 0` in `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredRelation<S> {
    /// Element of `V (x) V`, word `ab` at index `a * n + b`.
    pub quadratic: SparseVector<S>,
    pub linear: SparseVector<S>,
    pub constant: S,
}

/// A finite-dimensional bimodule given by generator action matrices on column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule<S> {
    pub name: String,
    pub dim: usize,
    pub left: Vec<Matrix<S>>,
    pub right: Vec<Matrix<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Presentation<S> {
    pub field: Field,
    pub generators: Vec<Generator>,
    pub relations: Vec<FilteredRelation<S>>,
    pub attest_koszul: bool,
    pub bimodules: Vec<Bimodule<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub generators: usize,
    pub dim_r: usize,
    pub weighted: bool,
    pub curved: bool,
}

impl<S: Scalar> Presentation<S> {
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn weight_of(&self, word: &[usize]) -> i64 {
        word.iter()
            .map(|&g| i64::from(self.generators[g].weight))
            .sum()
    }

    pub fn bimodule(&self, name: &str) -> Result<&Bimodule<S>, PresentationError> {
        self.bimodules
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| PresentationError::UnknownBimodule(name.to_string()))
    }

    /// Every relation is homogeneous for the generator weights (which forces a0 = 0).
    pub fn is_weighted(&self) -> bool {
        let n = self.num_generators();
        self.relations.iter().all(|r| {
            let mut weights = r
                .quadratic
                .entries()
                .iter()
                .map(|(i, _)| self.weight_of(&[i / n, i % n]));
            let w = weights.next().expect("nonzero quadratic part");
            weights.all(|x| x == w)
                && r.linear
                    .entries()
                    .iter()
                    .all(|(g, _)| self.weight_of(&[*g]) == w)
                && r.constant.is_zero()
        })
    }

    pub fn is_curved(&self) -> bool {
        self.relation_basis().iter().any(|r| !r.constant.is_zero())
    }

    /// Reduced echelon basis of the relation space, pivoting on the first quadratic word.
    ///
    /// Each relation is stored augmented as `[quadratic | linear | constant]`, so the
    /// reduction carries the lower-order terms along with their quadratic parts.
    pub fn relation_basis(&self) -> Vec<FilteredRelation<S>> {
        let n = self.num_generators();
        let rows: Vec<SparseVector<S>> = self.relations.iter().map(|r| augment(r, n)).collect();
        rref_of_vectors(n * n + n + 1, &rows)
            .iter()
            .map(|v| split_augmented(v, n))
            .collect()
    }

    pub fn validate(&self) -> Result<ValidationReport, PresentationError> {
        let n = self.num_generators();
        let quad = Matrix::from_rows(
            n * n,
            self.relations.iter().map(|r| r.quadratic.clone()).collect(),
        );
        let r = rank(&quad);
        if r < self.relations.len() {
            return Err(PresentationError::DependentRelations {
                rank: r,
                count: self.relations.len(),
            });
        }
        for b in &self.bimodules {
            self.check_bimodule(b)?;
        }
        Ok(ValidationReport {
            generators: n,
            dim_r: r,
            weighted: self.is_weighted(),
            curved: self.is_curved(),
        })
    }

    fn check_bimodule(&self, b: &Bimodule<S>) -> Result<(), PresentationError> {
        let n = self.num_generators();
        let bad = |message: String| PresentationError::InvalidBimodule {
            name: b.name.clone(),
            message,
        };
        for (ri, r) in self.relations.iter().enumerate() {
            let mut left = Matrix::identity(b.dim).mul(&scalar_matrix(b.dim, &r.constant));
            let mut right = left.clone();
            for (g, c) in r.linear.entries() {
                left = add_matrices(&left, &b.left[*g].mul(&scalar_matrix(b.dim, c)));
                right = add_matrices(&right, &b.right[*g].mul(&scalar_matrix(b.dim, c)));
            }
            for (w, c) in r.quadratic.entries() {
                let (x, y) = (w / n, w % n);
                let s = scalar_matrix(b.dim, c);
                left = add_matrices(&left, &b.left[x].mul(&b.left[y]).mul(&s));
                right = add_matrices(&right, &b.right[y].mul(&b.right[x]).mul(&s));
            }
            if !left.is_zero() {
                return Err(bad(format!(
                    "left action does not satisfy relation {}",
                    ri + 1
                )));
            }
            if !right.is_zero() {
                return Err(bad(format!(
                    "right action does not satisfy relation {}",
                    ri + 1
                )));
            }
        }
        for (i, li) in b.left.iter().enumerate() {
            for (j, rj) in b.right.iter().enumerate() {
                if li.mul(rj) != rj.mul(li) {
                    let names = (&self.generators[i].name, &self.generators[j].name);
                    return Err(bad(format!(
                        "left {} and right {} do not commute",
                        names.0, names.1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Display a polynomial in generator notation.
    pub fn format_poly(&self, p: &NcPoly<S>) -> String {
        p.format(&self.generator_names())
    }
}

fn scalar_matrix<S: Scalar>(dim: usize, c: &S) -> Matrix<S> {
    Matrix::from_rows(
        dim,
        (0..dim)
            .map(|i| SparseVector::unit(dim, i).scale(c))
            .collect(),
    )
}

fn add_matrices<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    Matrix::from_rows(
        a.ncols(),
        a.rows()
            .iter()
            .zip(b.rows())
            .map(|(x, y)| x.add(y))
            .collect(),
    )
}

pub(crate) fn augment<S: Scalar>(r: &FilteredRelation<S>, n: usize) -> SparseVector<S> {
    let mut entries: Vec<(usize, S)> = r.quadratic.entries().to_vec();
    entries.extend(
        r.linear
            .entries()
            .iter()
            .map(|(i, c)| (n * n + i, c.clone())),
    );
    entries.push((n * n + n, r.constant.clone()));
    SparseVector::from_entries(n * n + n + 1, entries)
}

pub(crate) fn split_augmented<S: Scalar>(v: &SparseVector<S>, n: usize) -> FilteredRelation<S> {
    let mut quad = Vec::new();
    let mut lin = Vec::new();
    let mut constant = S::zero();
    for (i, c) in v.entries() {
        if *i < n * n {
            quad.push((*i, c.clone()));
        } else if *i < n * n + n {
            lin.push((i - n * n, c.clone()));
        } else {
            constant = c.clone();
        }
    }
    FilteredRelation {
        quadratic: SparseVector::from_entries(n * n, quad),
        linear: SparseVector::from_entries(n, lin),
        constant,
    }
}

/// Index of a word of length `k` in the standard basis of `V^{(x)k}`.
pub fn word_index(word: &[usize], n: usize) -> usize {
    word.iter().fold(0, |acc, &g| acc * n + g)
}

pub fn index_word(mut index: usize, len: usize, n: usize) -> Word {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    w
}

/// Degree-lexicographic comparison key.
pub fn deglex_key(w: &[usize]) -> (usize, &[usize]) {
    (w.len(), w)
}

/// Noncommutative polynomial: a finite linear combination of words.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPoly<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> Default for NcPoly<S> {
    fn default() -> Self {
        NcPoly::zero()
    }
}

impl<S: Scalar> NcPoly<S> {
    pub fn zero() -> Self {
        NcPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        NcPoly::monomial(Vec::new(), S::one())
    }

    pub fn monomial(word: Word, c: S) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn generator(g: usize) -> Self {
        NcPoly::monomial(vec![g], S::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[usize]) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, word: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(x) => {
                *x = x.add_ref(&c);
                if x.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &S, other: &NcPoly<S>) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x.mul_ref(c));
        }
    }

    pub fn add(&self, other: &NcPoly<S>) -> NcPoly<S> {
        let mut out = self.clone();
        out.add_scaled(&S::one(), other);
        out
    }

    pub fn sub(&self, other: &NcPoly<S>) -> NcPoly<S> {
        let mut out = self.clone();
        out.add_scaled(&-S::one(), other);
        out
    }

    pub fn scale(&self, c: &S) -> NcPoly<S> {
        let mut out = NcPoly::zero();
        out.add_scaled(c, self);
        out
    }

    /// Free (concatenation) product, without any rewriting.
    pub fn concat(&self, other: &NcPoly<S>) -> NcPoly<S> {
        let mut out = NcPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x.mul_ref(y));
            }
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Terms in descending degree-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Word, &S)> {
        let mut v: Vec<(&Word, &S)> = self.terms.iter().collect();
        v.sort_by(|a, b| deglex_key(b.0).cmp(&deglex_key(a.0)));
        v
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = format_word(w, names);
            let term = if w.is_empty() {
                c.to_string()
            } else {
                format!("{}{}", coefficient_prefix(c), mono)
            };
            if i == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

/// `x1^2*x3`; the empty word prints as `1`.
pub fn format_word(w: &[usize], names: &[String]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let name = &names[w[i]];
        parts.push(if j - i == 1 {
            name.clone()
        } else {
            format!("{name}^{}", j - i)
        });
        i = j;
    }
    parts.join("*")
}

impl<S: Scalar> fmt::Display for NcPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self
            .terms
            .keys()
            .flatten()
            .copied()
            .max()
            .map_or(0, |m| m + 1);
        let names: Vec<String> = (1..=max).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.format(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    type Q = BigRational;

    fn parse(text: &str) -> Presentation<Q> {
        parse_presentation(text).unwrap()
    }

    #[test]
    fn heisenberg_validation() {
        let p = parse("generators: x1:1 x2:1 x3:2\nrelations:\n x1*x2 - x2*x1 - x3\n x1*x3 - x3*x1\n x2*x3 - x3*x2\n");
        let r = p.validate().unwrap();
        assert_eq!(
            r,
            ValidationReport {
                generators: 3,
                dim_r: 3,
                weighted: true,
                curved: false
            }
        );
    }

    #[test]
    fn weyl_is_curved_and_unweighted() {
        let p = parse("generators: x d\nrelations:\n d*x - x*d - 1\n");
        let r = p.validate().unwrap();
        assert_eq!(r.dim_r, 1);
        assert!(r.curved);
        assert!(!r.weighted);
        // pivot on the first word x*d: x*d - d*x + 1
        let b = p.relation_basis();
        assert_eq!(b[0].quadratic.get(1), Q::one());
        assert_eq!(b[0].constant, Q::one());
    }

    #[test]
    fn duplicate_relation_rejected() {
        let p = parse("generators: x y\nrelations:\n x*y - y*x\n x*y - y*x\n");
        assert!(matches!(
            p.validate(),
            Err(PresentationError::DependentRelations { rank: 1, count: 2 })
        ));
    }

    #[test]
    fn bimodule_must_respect_relations() {
        let ok = parse(
            "generators: x y\nrelations:\n x*y - y*x\nbimodule k dim 1\n left x: 1\n right y: 2\n",
        );
        assert!(ok.validate().is_ok());
        let bad = parse("generators: x y\nrelations:\n x*y - y*x - x\nbimodule k dim 1\n left x: 1\n left y: 1\n");
        assert!(matches!(
            bad.validate(),
            Err(PresentationError::InvalidBimodule { .. })
        ));
        let noncommuting = parse(
            "generators: x\nrelations:\nbimodule m dim 2\n left x: 0 1; 0 0\n right x: 0 0; 1 0\n",
        );
        assert!(noncommuting.validate().is_err());
    }

    #[test]
    fn word_indexing_round_trips() {
        for i in 0..27 {
            assert_eq!(word_index(&index_word(i, 3, 3), 3), i);
        }
        let names = vec!["x1".to_string(), "x2".to_string(), "x3".to_string()];
        assert_eq!(format_word(&[0, 0, 2], &names), "x1^2*x3");
        let p = NcPoly::<Q>::monomial(vec![0, 1], Q::one()).sub(&NcPoly::generator(2));
        assert_eq!(p.format(&names), "x1*x2 - x3");
    }
}
