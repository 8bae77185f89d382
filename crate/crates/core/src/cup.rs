//! Cup product on `Λ ⊗ A`: `(f ⊗ a)(g ⊗ b) = fg ⊗ ab`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::complexes::{
    reduce_class, CochainElement, CohomologyBasis, ComplexError, Grading, HochschildComplex,
    ModuleMonomial,
};
use crate::linalg::{Echelon, SparseVector};
use crate::presentation::NcPoly;
use crate::scalar::Scalar;

/// Product of two cochains with coefficients in `A`.
pub fn multiply<S: Scalar>(
    complex: &HochschildComplex<'_, S>,
    u: &CochainElement<S>,
    v: &CochainElement<S>,
) -> Result<CochainElement<S>, ComplexError> {
    if !complex.coefficients.is_algebra() {
        return Err(ComplexError::AlgebraCoefficientsRequired);
    }
    let t = complex.table;
    let alg = complex.algebra;
    let k = u.degree + v.degree;
    let mut out = CochainElement::zero(k);
    if t.top_degree().is_some_and(|top| k > top) {
        return Ok(out);
    }
    if !t.in_range(k) {
        return Err(ComplexError::DegreeOutOfRange {
            degree: k,
            needed: k,
            computed: t.computed_degree(),
        });
    }
    for ((a, m), x) in &u.terms {
        for ((b, n), y) in &v.terms {
            let (ModuleMonomial::Word(m), ModuleMonomial::Word(n)) = (m, n) else {
                return Err(ComplexError::AlgebraCoefficientsRequired);
            };
            let lam = t.mul(
                u.degree,
                &t.basis_vector(u.degree, *a),
                v.degree,
                &t.basis_vector(v.degree, *b),
            );
            if lam.is_zero() {
                continue;
            }
            let mut w = m.clone();
            w.extend_from_slice(n);
            let prod = alg.normal_form_word(&w);
            let xy = x.mul_ref(y);
            for (c, l) in lam.entries() {
                for (word, z) in prod.terms() {
                    out.add_term(
                        (*c, ModuleMonomial::Word(word.clone())),
                        xy.mul_ref(l).mul_ref(z),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Lowest weight of a basis element of `Λ^k`; module weights are nonnegative.
fn min_weight<S: Scalar>(complex: &HochschildComplex<'_, S>, k: usize) -> Option<i64> {
    (0..complex.table.dim(k))
        .map(|a| complex.table.weight(k, a))
        .min()
}

type SliceCache<S> = HashMap<(usize, i64), Arc<CohomologyBasis<S>>>;

/// Cohomology bases shared between many product computations.
pub struct CupContext<'a, S> {
    complex: HochschildComplex<'a, S>,
    cache: Mutex<SliceCache<S>>,
}

/// One product of basis classes, written in the target basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductEntry<S> {
    pub left: (usize, i64, usize),
    pub right: (usize, i64, usize),
    pub target_weight: i64,
    pub coefficients: Vec<S>,
}

/// Span of products landing in one target slice.
#[derive(Debug, Clone)]
pub struct ProductImage<S> {
    pub degree: usize,
    pub weight: i64,
    pub target_dim: usize,
    pub vectors: Vec<SparseVector<S>>,
}

impl<S: Scalar> ProductImage<S> {
    pub fn rank(&self) -> usize {
        span_rank(self.target_dim, &self.vectors)
    }
}

fn span_rank<S: Scalar>(dim: usize, vectors: &[SparseVector<S>]) -> usize {
    let mut ech = Echelon::new(dim);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Ranks comparing the product image with `z·H` inside one slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageComparison {
    pub weight: i64,
    pub target_dim: usize,
    pub product_rank: usize,
    pub central_rank: usize,
    pub combined_rank: usize,
}

impl ImageComparison {
    pub fn equal(&self) -> bool {
        self.product_rank == self.combined_rank && self.central_rank == self.combined_rank
    }
}

/// Rank of the product map into one slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surjectivity {
    pub weight: i64,
    pub target_dim: usize,
    pub rank: usize,
}

impl Surjectivity {
    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

impl<'a, S: Scalar> CupContext<'a, S> {
    pub fn new(complex: HochschildComplex<'a, S>) -> Result<Self, ComplexError> {
        if !complex.coefficients.is_algebra() {
            return Err(ComplexError::AlgebraCoefficientsRequired);
        }
        Ok(CupContext {
            complex,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn complex(&self) -> &HochschildComplex<'a, S> {
        &self.complex
    }

    pub fn cohomology(
        &self,
        degree: usize,
        weight: i64,
    ) -> Result<Arc<CohomologyBasis<S>>, ComplexError> {
        if let Some(b) = self
            .cache
            .lock()
            .expect("cache lock")
            .get(&(degree, weight))
        {
            return Ok(b.clone());
        }
        let b = Arc::new(self.complex.cohomology(Grading::Weight(weight), degree)?);
        self.cache
            .lock()
            .expect("cache lock")
            .insert((degree, weight), b.clone());
        Ok(b)
    }

    /// Weight splittings `w = w1 + w2` that can carry classes of degrees `p` and `q`.
    fn splittings(&self, p: usize, q: usize, w: i64) -> Vec<(i64, i64)> {
        match (min_weight(&self.complex, p), min_weight(&self.complex, q)) {
            (Some(mp), Some(mq)) => (mp..=w - mq).map(|w1| (w1, w - w1)).collect(),
            _ => Vec::new(),
        }
    }

    /// All products of basis classes `H^p_{w1} × H^q_{w2}` with `w1 + w2 = w`.
    pub fn products_into(
        &self,
        p: usize,
        q: usize,
        w: i64,
    ) -> Result<Vec<ProductEntry<S>>, ComplexError> {
        let target = self.cohomology(p + q, w)?;
        let mut out = Vec::new();
        for (w1, w2) in self.splittings(p, q, w) {
            let left = self.cohomology(p, w1)?;
            let right = self.cohomology(q, w2)?;
            if left.dim() == 0 || right.dim() == 0 {
                continue;
            }
            let (lr, rr) = (left.representatives(), right.representatives());
            let cells: Vec<(usize, usize)> = (0..lr.len())
                .flat_map(|i| (0..rr.len()).map(move |j| (i, j)))
                .collect();
            let entries = cells
                .par_iter()
                .map(|&(i, j)| {
                    let prod = multiply(&self.complex, &lr[i], &rr[j])?;
                    let red = reduce_class(&prod, &target)?;
                    Ok(ProductEntry {
                        left: (p, w1, i),
                        right: (q, w2, j),
                        target_weight: w,
                        coefficients: red.coefficients,
                    })
                })
                .collect::<Result<Vec<_>, ComplexError>>()?;
            out.extend(entries);
        }
        Ok(out)
    }

    /// Span of `H^p · H^q` inside `H^{p+q}_w`.
    pub fn image(&self, p: usize, q: usize, w: i64) -> Result<ProductImage<S>, ComplexError> {
        let target = self.cohomology(p + q, w)?;
        let vectors = self
            .products_into(p, q, w)?
            .into_iter()
            .map(|e| SparseVector::from_dense(e.coefficients))
            .collect();
        Ok(ProductImage {
            degree: p + q,
            weight: w,
            target_dim: target.dim(),
            vectors,
        })
    }

    /// Compare `H^p · H^q` with `z · H^{p+q}_{w - wt(z)}` inside `H^{p+q}_w`.
    pub fn compare_with_central(
        &self,
        p: usize,
        q: usize,
        z: &NcPoly<S>,
        w: i64,
    ) -> Result<ImageComparison, ComplexError> {
        let alg = self.complex.algebra;
        let z = alg.normal_form(z);
        let wz = z.terms().next().map_or(0, |(u, _)| alg.weight_of(u));
        let image = self.image(p, q, w)?;
        let target = self.cohomology(p + q, w)?;
        let source = self.cohomology(p + q, w - wz)?;
        let m = crate::complexes::central_action(&self.complex, &z, &source, &target)?;
        let central: Vec<SparseVector<S>> = m.columns();
        let mut all = image.vectors.clone();
        all.extend(central.iter().cloned());
        Ok(ImageComparison {
            weight: w,
            target_dim: target.dim(),
            product_rank: image.rank(),
            central_rank: span_rank(target.dim(), &central),
            combined_rank: span_rank(target.dim(), &all),
        })
    }

    /// Rank of `H^p ⊗ H^q → H^{p+q}_w`.
    pub fn surjectivity(&self, p: usize, q: usize, w: i64) -> Result<Surjectivity, ComplexError> {
        let image = self.image(p, q, w)?;
        Ok(Surjectivity {
            weight: w,
            target_dim: image.target_dim,
            rank: image.rank(),
        })
    }
}

/// `H^1 · H^1` against `z · H^2` in target weight `w`.
pub fn cup_image<S: Scalar>(
    complex: HochschildComplex<'_, S>,
    z: &NcPoly<S>,
    w: i64,
) -> Result<ImageComparison, ComplexError> {
    CupContext::new(complex)?.compare_with_central(1, 1, z, w)
}

/// Rank of `H^1 · H^2` in target weight `w`.
pub fn cup_surjectivity<S: Scalar>(
    complex: HochschildComplex<'_, S>,
    w: i64,
) -> Result<Surjectivity, ComplexError> {
    CupContext::new(complex)?.surjectivity(1, 2, w)
}
