//! Finite slices of the small Hochschild complex `(Λ ⊗ M, d - [e, -])` and of the
//! Koszul bimodule resolution `A ⊗ Λ^* ⊗ A`.
//!
//! On `f ⊗ m` with `f ∈ Λ^k` the differential is
//! `d(f) ⊗ m - Σ_i (λ_i f ⊗ x_i m - (-1)^k f λ_i ⊗ m x_i)`.

mod homology;
mod resolution;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::dual::CurvedDualTable;
use crate::linalg::{Matrix, SparseVector};
use crate::presentation::{format_word, Algebra, Bimodule, NcPoly, Word};
use crate::scalar::{coefficient_prefix, Scalar};

pub use homology::{
    central_action, hh_report, homology, reduce_class, truncated_estimate, ClassReduction,
    CohomologyBasis, HhEntry, HhReport, TruncatedEstimate, TruncatedRow,
};
pub use resolution::{
    build_resolution_slice, verify_resolution, ResolutionReport, ResolutionSlice,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("the presentation is not weighted, so slices with infinite coefficients do not exist; use truncation (--truncate D)")]
    Unweighted,
    #[error("degree {degree} needs Λ^{needed}, but Λ was only computed up to degree {computed}; raise the maximal dual degree")]
    DegreeOutOfRange {
        degree: usize,
        needed: usize,
        computed: usize,
    },
    #[error("finite-bimodule coefficients have no weight grading")]
    BimoduleHasNoWeights,
    #[error("differential does not square to zero: {0}")]
    NotAComplex(String),
    #[error("differential leaves the slice: {0}")]
    WeightViolation(String),
    #[error("element is not a cocycle")]
    NotACocycle,
    #[error("cocycle is not expressible in the computed cohomology basis")]
    IncompleteBasis,
    #[error("{0} is not central")]
    NotCentral(String),
    #[error("{0} is not weight-homogeneous")]
    NotHomogeneous(String),
    #[error("cup product requires algebra coefficients")]
    AlgebraCoefficientsRequired,
}

/// The bimodule `M` of the complex `Λ ⊗ M`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients<S> {
    /// `M = A`.
    Regular,
    /// A finite-dimensional bimodule from the presentation file.
    Bimodule(Bimodule<S>),
    /// `M = A ⊗ A` with `x (a ⊗ b) y = x a ⊗ b y` in the differential; the other
    /// (inner) action `z·(a ⊗ b) = a ⊗ z b` commutes with it and is used for central actions.
    Enveloping,
}

impl<S> Coefficients<S> {
    pub fn is_algebra(&self) -> bool {
        matches!(self, Coefficients::Regular)
    }

    pub fn label(&self) -> String {
        match self {
            Coefficients::Regular => "regular".into(),
            Coefficients::Bimodule(b) => format!("bimodule:{}", b.name),
            Coefficients::Enveloping => "enveloping".into(),
        }
    }
}

/// Which finite piece of the complex to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    /// Total weight `w` (weighted presentations).
    Weight(i64),
    /// The whole complex, for finite-dimensional coefficients.
    Finite,
    /// The subcomplex spanned by `f ⊗ u` with `len(u) - |f| <= D`.
    Filtration(usize),
}

impl Grading {
    pub fn weight(&self) -> Option<i64> {
        match self {
            Grading::Weight(w) => Some(*w),
            _ => None,
        }
    }
}

/// A basis monomial of the coefficient module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleMonomial {
    Word(Word),
    Basis(usize),
    Pair(Word, Word),
}

impl ModuleMonomial {
    pub fn format(&self, names: &[String]) -> String {
        match self {
            ModuleMonomial::Word(w) => format_word(w, names),
            ModuleMonomial::Basis(i) => format!("b{}", i + 1),
            ModuleMonomial::Pair(u, v) => {
                format!("({} | {})", format_word(u, names), format_word(v, names))
            }
        }
    }
}

/// `(index of a basis element of Λ^k, module monomial)`.
pub type CochainKey = (usize, ModuleMonomial);

/// A homogeneous element of `Λ^k ⊗ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainElement<S> {
    pub degree: usize,
    pub terms: BTreeMap<CochainKey, S>,
}

impl<S: Scalar> CochainElement<S> {
    pub fn zero(degree: usize) -> Self {
        CochainElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: CochainKey, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = x.add_ref(&c);
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &S, other: &CochainElement<S>) {
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x.mul_ref(c));
        }
    }

    pub fn sub(&self, other: &CochainElement<S>) -> CochainElement<S> {
        let mut out = self.clone();
        out.add_scaled(&-S::one(), other);
        out
    }

    pub fn scale(&self, c: &S) -> CochainElement<S> {
        let mut out = CochainElement::zero(self.degree);
        out.add_scaled(c, self);
        out
    }

    /// `f ⊗ a` for `f ∈ Λ^k` and `a ∈ A` (regular coefficients).
    pub fn from_parts(degree: usize, lambda: &SparseVector<S>, a: &NcPoly<S>) -> Self {
        let mut out = CochainElement::zero(degree);
        for (i, x) in lambda.entries() {
            for (w, y) in a.terms() {
                out.add_term((*i, ModuleMonomial::Word(w.clone())), x.mul_ref(y));
            }
        }
        out
    }

    /// Weight, if all terms agree.
    pub fn weight(&self, table: &CurvedDualTable<S>, algebra: &Algebra<S>) -> Option<i64> {
        let mut ws = self.terms.keys().map(|(a, m)| {
            table.weight(self.degree, *a)
                + match m {
                    ModuleMonomial::Word(w) => algebra.weight_of(w),
                    ModuleMonomial::Pair(u, v) => algebra.weight_of(u) + algebra.weight_of(v),
                    ModuleMonomial::Basis(_) => 0,
                }
        });
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    pub fn format(&self, table: &CurvedDualTable<S>, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, ((a, m), c)) in self.terms.iter().enumerate() {
            let lam = if self.degree == 0 {
                "1".to_string()
            } else {
                table.format_basis(self.degree, *a)
            };
            let term = format!("{}{} (x) {}", coefficient_prefix(c), lam, m.format(names));
            match (i, term.strip_prefix('-')) {
                (0, _) => out.push_str(&term),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (_, None) => {
                    out.push_str(" + ");
                    out.push_str(&term);
                }
            }
        }
        out
    }
}

/// The complex `Λ ⊗ M` for a fixed algebra, dual table and coefficient module.
#[derive(Debug, Clone, Copy)]
pub struct HochschildComplex<'a, S> {
    pub algebra: &'a Algebra<S>,
    pub table: &'a CurvedDualTable<S>,
    pub coefficients: &'a Coefficients<S>,
}

impl<'a, S: Scalar> HochschildComplex<'a, S> {
    pub fn new(
        algebra: &'a Algebra<S>,
        table: &'a CurvedDualTable<S>,
        coefficients: &'a Coefficients<S>,
    ) -> Self {
        HochschildComplex {
            algebra,
            table,
            coefficients,
        }
    }

    /// Check that `grading` makes sense for these coefficients.
    pub fn check_grading(&self, grading: Grading) -> Result<(), ComplexError> {
        match (grading, self.coefficients) {
            (Grading::Weight(_), Coefficients::Bimodule(_)) => {
                Err(ComplexError::BimoduleHasNoWeights)
            }
            (Grading::Weight(_), _) if !self.algebra.presentation().is_weighted() => {
                Err(ComplexError::Unweighted)
            }
            (Grading::Finite, Coefficients::Regular | Coefficients::Enveloping) => {
                Err(ComplexError::Unweighted)
            }
            _ => Ok(()),
        }
    }

    /// Basis of the module part paired with `e_a ∈ Λ^k`.
    fn module_basis(&self, k: usize, a: usize, grading: Grading) -> Vec<ModuleMonomial> {
        let alg = self.algebra;
        match (grading, self.coefficients) {
            (_, Coefficients::Bimodule(b)) => (0..b.dim).map(ModuleMonomial::Basis).collect(),
            (Grading::Weight(w), Coefficients::Regular) => {
                let m = w - self.table.weight(k, a);
                alg.normal_words_of_weight(m)
                    .iter()
                    .cloned()
                    .map(ModuleMonomial::Word)
                    .collect()
            }
            (Grading::Weight(w), Coefficients::Enveloping) => {
                let m = w - self.table.weight(k, a);
                let mut out = Vec::new();
                for wu in 0..=m.max(-1) {
                    let us = alg.normal_words_of_weight(wu);
                    let vs = alg.normal_words_of_weight(m - wu);
                    for u in us.iter() {
                        for v in vs.iter() {
                            out.push(ModuleMonomial::Pair(u.clone(), v.clone()));
                        }
                    }
                }
                out
            }
            (Grading::Filtration(d), Coefficients::Regular) => alg
                .normal_words_up_to_length(d + k)
                .into_iter()
                .map(ModuleMonomial::Word)
                .collect(),
            (Grading::Filtration(d), Coefficients::Enveloping) => {
                let words = alg.normal_words_up_to_length(d + k);
                let mut out = Vec::new();
                for u in &words {
                    for v in &words {
                        if u.len() + v.len() <= d + k {
                            out.push(ModuleMonomial::Pair(u.clone(), v.clone()));
                        }
                    }
                }
                out
            }
            (Grading::Finite, _) => unreachable!("rejected by check_grading"),
        }
    }

    /// Ordered basis of `C^k` in the given grading.
    pub fn basis(&self, k: usize, grading: Grading) -> Vec<CochainKey> {
        if !self.table.in_range(k) {
            return Vec::new();
        }
        let mut out = Vec::new();
        for a in 0..self.table.dim(k) {
            for m in self.module_basis(k, a, grading) {
                out.push((a, m));
            }
        }
        out
    }

    fn left_act(&self, g: usize, m: &ModuleMonomial) -> Vec<(ModuleMonomial, S)> {
        match (m, self.coefficients) {
            (ModuleMonomial::Word(w), _) => self
                .algebra
                .left_mul_gen(g, w)
                .terms()
                .map(|(u, c)| (ModuleMonomial::Word(u.clone()), c.clone()))
                .collect(),
            (ModuleMonomial::Pair(u, v), _) => self
                .algebra
                .left_mul_gen(g, u)
                .terms()
                .map(|(x, c)| (ModuleMonomial::Pair(x.clone(), v.clone()), c.clone()))
                .collect(),
            (ModuleMonomial::Basis(j), Coefficients::Bimodule(b)) => column(&b.left[g], *j),
            (ModuleMonomial::Basis(_), _) => unreachable!("basis monomials belong to bimodules"),
        }
    }

    fn right_act(&self, m: &ModuleMonomial, g: usize) -> Vec<(ModuleMonomial, S)> {
        match (m, self.coefficients) {
            (ModuleMonomial::Word(w), _) => self
                .algebra
                .right_mul_gen(w, g)
                .terms()
                .map(|(u, c)| (ModuleMonomial::Word(u.clone()), c.clone()))
                .collect(),
            (ModuleMonomial::Pair(u, v), _) => self
                .algebra
                .right_mul_gen(v, g)
                .terms()
                .map(|(x, c)| (ModuleMonomial::Pair(u.clone(), x.clone()), c.clone()))
                .collect(),
            (ModuleMonomial::Basis(j), Coefficients::Bimodule(b)) => column(&b.right[g], *j),
            (ModuleMonomial::Basis(_), _) => unreachable!("basis monomials belong to bimodules"),
        }
    }

    /// Differential of a single basis element `e_a ⊗ m` of degree `k`.
    pub fn d_basis(&self, k: usize, a: usize, m: &ModuleMonomial) -> CochainElement<S> {
        let t = self.table;
        let mut out = CochainElement::zero(k + 1);
        if !t.in_range(k + 1) || t.dim(k + 1) == 0 {
            return out;
        }
        let e = t.basis_vector(k, a);
        for (b, c) in t.d(k, &e).entries() {
            out.add_term((*b, m.clone()), c.clone());
        }
        let sign = if k.is_multiple_of(2) {
            S::one()
        } else {
            -S::one()
        };
        for g in 0..t.num_generators() {
            let left = t.left_gen(g, k, a);
            if !left.is_zero() {
                for (m2, y) in self.left_act(g, m) {
                    for (b, x) in left.entries() {
                        out.add_term((*b, m2.clone()), -x.mul_ref(&y));
                    }
                }
            }
            let right = t.right_gen(k, a, g);
            if !right.is_zero() {
                for (m2, y) in self.right_act(m, g) {
                    for (b, x) in right.entries() {
                        out.add_term((*b, m2.clone()), sign.mul_ref(x).mul_ref(&y));
                    }
                }
            }
        }
        out
    }

    /// Differential of an arbitrary cochain.
    pub fn d(&self, u: &CochainElement<S>) -> CochainElement<S> {
        let mut out = CochainElement::zero(u.degree + 1);
        for ((a, m), c) in &u.terms {
            out.add_scaled(c, &self.d_basis(u.degree, *a, m));
        }
        out
    }

    /// Lowest degree whose differential needs `Λ` beyond the computed range.
    fn require_differential(&self, k: usize) -> Result<(), ComplexError> {
        if self.table.has_differential(k) || (self.table.top_degree().is_some_and(|t| k > t)) {
            Ok(())
        } else {
            Err(ComplexError::DegreeOutOfRange {
                degree: k,
                needed: k + 1,
                computed: self.table.computed_degree(),
            })
        }
    }

    /// Bases and differentials needed for cohomology in degrees `lo..=hi`.
    pub fn build_slice(
        &self,
        grading: Grading,
        lo: usize,
        hi: usize,
    ) -> Result<ComplexSlice<S>, ComplexError> {
        self.check_grading(grading)?;
        let first = lo.saturating_sub(1);
        for k in first..=hi {
            self.require_differential(k)?;
        }
        let mut bases = BTreeMap::new();
        for k in first..=hi + 1 {
            bases.insert(k, self.basis(k, grading));
        }
        let index: BTreeMap<usize, HashMap<CochainKey, usize>> = bases
            .iter()
            .map(|(k, b): (&usize, &Vec<CochainKey>)| {
                (
                    *k,
                    b.iter()
                        .cloned()
                        .enumerate()
                        .map(|(i, key)| (key, i))
                        .collect(),
                )
            })
            .collect();
        let mut diffs = BTreeMap::new();
        for k in first..=hi {
            let target = &index[&(k + 1)];
            let mut cols = Vec::with_capacity(bases[&k].len());
            for (a, m) in &bases[&k] {
                let img = self.d_basis(k, *a, m);
                cols.push(to_vector(&img, target).map_err(|key| {
                    ComplexError::WeightViolation(format!(
                        "d({}) has a term {} outside the slice",
                        self.format_key(k, &(*a, m.clone())),
                        self.format_key(k + 1, &key)
                    ))
                })?);
            }
            diffs.insert(k, Matrix::from_columns(target.len(), &cols));
        }
        Ok(ComplexSlice {
            grading,
            lo,
            hi,
            bases,
            index,
            diffs,
        })
    }

    pub fn format_key(&self, k: usize, key: &CochainKey) -> String {
        let lam = if k == 0 {
            "1".to_string()
        } else {
            self.table.format_basis(k, key.0)
        };
        format!(
            "{lam} (x) {}",
            key.1.format(&self.algebra.presentation().generator_names())
        )
    }

    pub fn format(&self, u: &CochainElement<S>) -> String {
        u.format(self.table, &self.algebra.presentation().generator_names())
    }
}

fn column<S: Scalar>(m: &Matrix<S>, j: usize) -> Vec<(ModuleMonomial, S)> {
    (0..m.nrows())
        .map(|i| (ModuleMonomial::Basis(i), m.get(i, j)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Coordinates of a cochain in an indexed basis; `Err` carries a key outside the basis.
pub fn to_vector<S: Scalar>(
    u: &CochainElement<S>,
    index: &HashMap<CochainKey, usize>,
) -> Result<SparseVector<S>, CochainKey> {
    let mut entries = Vec::with_capacity(u.terms.len());
    for (k, c) in &u.terms {
        match index.get(k) {
            Some(i) => entries.push((*i, c.clone())),
            None => return Err(k.clone()),
        }
    }
    Ok(SparseVector::from_entries(index.len(), entries))
}

pub fn from_vector<S: Scalar>(
    degree: usize,
    v: &SparseVector<S>,
    basis: &[CochainKey],
) -> CochainElement<S> {
    let mut out = CochainElement::zero(degree);
    for (i, c) in v.entries() {
        out.add_term(basis[*i].clone(), c.clone());
    }
    out
}

/// Finite piece of `Λ ⊗ M` with bases in degrees `lo-1 ..= hi+1`.
#[derive(Debug, Clone)]
pub struct ComplexSlice<S> {
    pub grading: Grading,
    pub lo: usize,
    pub hi: usize,
    bases: BTreeMap<usize, Vec<CochainKey>>,
    index: BTreeMap<usize, HashMap<CochainKey, usize>>,
    diffs: BTreeMap<usize, Matrix<S>>,
}

impl<S: Scalar> ComplexSlice<S> {
    pub fn basis(&self, k: usize) -> &[CochainKey] {
        &self.bases[&k]
    }

    pub fn index_of(&self, k: usize) -> &HashMap<CochainKey, usize> {
        &self.index[&k]
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases.get(&k).map_or(0, Vec::len)
    }

    /// Matrix of `d^k: C^k → C^{k+1}`.
    pub fn differential(&self, k: usize) -> Option<&Matrix<S>> {
        self.diffs.get(&k)
    }

    /// `d^{k+1} d^k = 0` for every consecutive pair in the slice.
    pub fn verify_d_squared(&self) -> Result<(), String> {
        for (k, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(k + 1)) {
                let dd = next.mul(d);
                if !dd.is_zero() {
                    let col = dd
                        .transpose()
                        .rows()
                        .iter()
                        .position(|r| !r.is_zero())
                        .expect("nonzero");
                    return Err(format!(
                        "d^{} d^{k} is nonzero on basis element {col} of degree {k}",
                        k + 1
                    ));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grading::Weight(w) => write!(f, "weight {w}"),
            Grading::Finite => write!(f, "all"),
            Grading::Filtration(d) => write!(f, "filtration {d}"),
        }
    }
}
