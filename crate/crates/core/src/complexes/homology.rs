//! Cohomology of slices, class reduction, central actions and truncation estimates.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::{
    from_vector, to_vector, CochainElement, CochainKey, ComplexError, ComplexSlice, Grading,
    HochschildComplex, ModuleMonomial,
};
use crate::linalg::{kernel_basis, Echelon, Insertion, Matrix, SparseVector};
use crate::presentation::NcPoly;
use crate::scalar::Scalar;

/// A basis of `H^n` of one slice, given by cocycle representatives.
#[derive(Debug, Clone)]
pub struct CohomologyBasis<S> {
    pub degree: usize,
    pub grading: Grading,
    pub cocycle_dim: usize,
    pub boundary_rank: usize,
    keys: Arc<Vec<CochainKey>>,
    index: Arc<HashMap<CochainKey, usize>>,
    representatives: Vec<SparseVector<S>>,
    /// `d^{n-1}` applied to each basis element of `C^{n-1}`.
    boundaries: Vec<SparseVector<S>>,
    differential: Option<Matrix<S>>,
    tracker: OnceLock<Echelon<S>>,
}

/// `u = Σ coefficients[i] rep_i + d(witness)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReduction<S> {
    pub coefficients: Vec<S>,
    pub witness: SparseVector<S>,
}

impl<S: Scalar> CohomologyBasis<S> {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn keys(&self) -> &[CochainKey] {
        &self.keys
    }

    pub fn index(&self) -> &HashMap<CochainKey, usize> {
        &self.index
    }

    pub fn representative_vectors(&self) -> &[SparseVector<S>] {
        &self.representatives
    }

    pub fn representatives(&self) -> Vec<CochainElement<S>> {
        self.representatives
            .iter()
            .map(|v| from_vector(self.degree, v, &self.keys))
            .collect()
    }

    pub fn to_vector(&self, u: &CochainElement<S>) -> Result<SparseVector<S>, ComplexError> {
        to_vector(u, &self.index)
            .map_err(|k| ComplexError::WeightViolation(format!("term {k:?} is outside the slice")))
    }

    fn tracker(&self) -> &Echelon<S> {
        self.tracker.get_or_init(|| {
            let dim = self.keys.len();
            let mut ech =
                Echelon::with_tracking(dim, self.representatives.len() + self.boundaries.len());
            for v in self.representatives.iter().chain(&self.boundaries) {
                ech.insert(v);
            }
            ech
        })
    }

    /// Write a cocycle (in coordinates) as a combination of representatives plus a boundary.
    pub fn reduce_vector(&self, u: &SparseVector<S>) -> Result<ClassReduction<S>, ComplexError> {
        if let Some(d) = &self.differential {
            if !d.mul_vec(u).is_zero() {
                return Err(ComplexError::NotACocycle);
            }
        }
        let (residual, combo) = self.tracker().reduce(u);
        if !residual.is_zero() {
            return Err(ComplexError::IncompleteBasis);
        }
        let combo = combo.expect("tracking enabled");
        let r = self.representatives.len();
        let mut coefficients = vec![S::zero(); r];
        let mut witness = Vec::new();
        for (i, c) in combo.entries() {
            if *i < r {
                coefficients[*i] = c.clone();
            } else {
                witness.push((i - r, c.clone()));
            }
        }
        Ok(ClassReduction {
            coefficients,
            witness: SparseVector::from_entries(self.boundaries.len(), witness),
        })
    }

    /// A preimage under `d^{n-1}`, if `u` (in coordinates) is a coboundary.
    pub fn boundary_witness(&self, u: &SparseVector<S>) -> Option<SparseVector<S>> {
        let red = self.reduce_vector(u).ok()?;
        red.coefficients
            .iter()
            .all(|c| c.is_zero())
            .then_some(red.witness)
    }

    pub fn is_coboundary(&self, u: &CochainElement<S>) -> bool {
        self.to_vector(u)
            .ok()
            .and_then(|v| self.boundary_witness(&v))
            .is_some()
    }
}

/// Write a cocycle as a combination of the representatives of `basis` plus a coboundary.
pub fn reduce_class<S: Scalar>(
    u: &CochainElement<S>,
    basis: &CohomologyBasis<S>,
) -> Result<ClassReduction<S>, ComplexError> {
    basis.reduce_vector(&basis.to_vector(u)?)
}

/// Cohomology of every degree `lo..=hi` of a slice, after checking `d^2 = 0`.
pub fn homology<S: Scalar>(
    slice: &ComplexSlice<S>,
) -> Result<Vec<CohomologyBasis<S>>, ComplexError> {
    slice
        .verify_d_squared()
        .map_err(ComplexError::NotAComplex)?;
    Ok((slice.lo..=slice.hi)
        .map(|n| cohomology_at(slice, n))
        .collect())
}

fn cohomology_at<S: Scalar>(slice: &ComplexSlice<S>, n: usize) -> CohomologyBasis<S> {
    let keys = Arc::new(slice.basis(n).to_vec());
    let index = Arc::new(slice.index_of(n).clone());
    let dim = keys.len();
    let dn = slice.differential(n).cloned();
    let cycles = match &dn {
        Some(d) => kernel_basis(d),
        None => (0..dim).map(|i| SparseVector::unit(dim, i)).collect(),
    };
    let boundaries = match n.checked_sub(1).and_then(|k| slice.differential(k)) {
        Some(d) => d.columns(),
        None => Vec::new(),
    };
    let mut ech = Echelon::new(dim);
    for b in &boundaries {
        ech.insert(b);
    }
    let boundary_rank = ech.rank();
    let mut representatives = Vec::new();
    for z in &cycles {
        let (residual, _) = ech.reduce(z);
        if residual.is_zero() {
            continue;
        }
        if let Insertion::Independent = ech.insert(&residual) {
            representatives.push(residual);
        }
    }
    CohomologyBasis {
        degree: n,
        grading: slice.grading,
        cocycle_dim: cycles.len(),
        boundary_rank,
        keys,
        index,
        representatives,
        boundaries,
        differential: dn,
        tracker: OnceLock::new(),
    }
}

impl<S: Scalar> HochschildComplex<'_, S> {
    /// `H^n` of one slice.
    pub fn cohomology(
        &self,
        grading: Grading,
        n: usize,
    ) -> Result<CohomologyBasis<S>, ComplexError> {
        let slice = self.build_slice(grading, n, n)?;
        Ok(homology(&slice)?.pop().expect("one degree"))
    }

    /// Multiply the coefficient part by `z` through the inner (or only) action.
    pub fn act_central(&self, z: &NcPoly<S>, u: &CochainElement<S>) -> CochainElement<S> {
        let alg = self.algebra;
        let mut out = CochainElement::zero(u.degree);
        for ((a, m), c) in &u.terms {
            match m {
                ModuleMonomial::Word(w) => {
                    for (v, x) in alg.mul(z, &NcPoly::monomial(w.clone(), S::one())).terms() {
                        out.add_term((*a, ModuleMonomial::Word(v.clone())), c.mul_ref(x));
                    }
                }
                ModuleMonomial::Pair(p, q) => {
                    for (v, x) in alg.mul(z, &NcPoly::monomial(q.clone(), S::one())).terms() {
                        out.add_term(
                            (*a, ModuleMonomial::Pair(p.clone(), v.clone())),
                            c.mul_ref(x),
                        );
                    }
                }
                ModuleMonomial::Basis(j) => {
                    for (word, x) in z.terms() {
                        let mut v = SparseVector::unit(self.basis_dim(), *j);
                        for &g in word.iter().rev() {
                            v = self.bimodule_left(g).mul_vec(&v);
                        }
                        for (i, y) in v.entries() {
                            out.add_term((*a, ModuleMonomial::Basis(*i)), c.mul_ref(x).mul_ref(y));
                        }
                    }
                }
            }
        }
        out
    }

    fn basis_dim(&self) -> usize {
        match self.coefficients {
            super::Coefficients::Bimodule(b) => b.dim,
            _ => 0,
        }
    }

    fn bimodule_left(&self, g: usize) -> &Matrix<S> {
        match self.coefficients {
            super::Coefficients::Bimodule(b) => &b.left[g],
            _ => unreachable!("only bimodule coefficients have basis monomials"),
        }
    }
}

/// Matrix (target classes by source classes) of multiplication by a central `z`.
pub fn central_action<S: Scalar>(
    complex: &HochschildComplex<'_, S>,
    z: &NcPoly<S>,
    source: &CohomologyBasis<S>,
    target: &CohomologyBasis<S>,
) -> Result<Matrix<S>, ComplexError> {
    let names = complex.algebra.presentation().generator_names();
    let z = complex.algebra.normal_form(z);
    if !complex.algebra.is_central(&z) {
        return Err(ComplexError::NotCentral(z.format(&names)));
    }
    if let Some(w) = source.grading.weight() {
        let wz = z
            .terms()
            .map(|(u, _)| complex.algebra.weight_of(u))
            .collect::<Vec<_>>();
        if wz.windows(2).any(|p| p[0] != p[1]) {
            return Err(ComplexError::NotHomogeneous(z.format(&names)));
        }
        let shift = wz.first().copied().unwrap_or(0);
        if target.grading != Grading::Weight(w + shift) {
            return Err(ComplexError::WeightViolation(format!(
                "multiplication by {} maps weight {w} to weight {}, not {}",
                z.format(&names),
                w + shift,
                target.grading
            )));
        }
    }
    let cols = source
        .representatives()
        .iter()
        .map(|u| {
            let image = complex.act_central(&z, u);
            reduce_class(&image, target).map(|r| SparseVector::from_dense(r.coefficients))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_columns(target.dim(), &cols))
}

/// One `(degree, grading)` cell of a cohomology table.
#[derive(Debug, Clone)]
pub struct HhEntry<S> {
    pub degree: usize,
    pub grading: Grading,
    pub basis: CohomologyBasis<S>,
}

impl<S: Scalar> HhEntry<S> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

#[derive(Debug, Clone)]
pub struct HhReport<S> {
    pub entries: Vec<HhEntry<S>>,
}

impl<S: Scalar> HhReport<S> {
    pub fn get(&self, degree: usize, grading: Grading) -> Option<&HhEntry<S>> {
        self.entries
            .iter()
            .find(|e| e.degree == degree && e.grading == grading)
    }

    pub fn dim(&self, degree: usize, grading: Grading) -> Option<usize> {
        self.get(degree, grading).map(HhEntry::dim)
    }
}

/// Cohomology in `degrees` for each grading, slices computed in parallel.
pub fn hh_report<S: Scalar>(
    complex: &HochschildComplex<'_, S>,
    gradings: &[Grading],
    degrees: std::ops::RangeInclusive<usize>,
) -> Result<HhReport<S>, ComplexError> {
    let (lo, hi) = (*degrees.start(), *degrees.end());
    let per_grading: Vec<Vec<HhEntry<S>>> = gradings
        .par_iter()
        .map(|&g| {
            let slice = complex.build_slice(g, lo, hi)?;
            Ok(homology(&slice)?
                .into_iter()
                .map(|b| HhEntry {
                    degree: b.degree,
                    grading: g,
                    basis: b,
                })
                .collect())
        })
        .collect::<Result<_, ComplexError>>()?;
    let mut entries: Vec<HhEntry<S>> = per_grading.into_iter().flatten().collect();
    entries.sort_by_key(|e| (e.degree, e.grading));
    Ok(HhReport { entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedRow {
    pub degree: usize,
    pub dim_at_bound: usize,
    pub dim_at_next: usize,
}

impl TruncatedRow {
    /// Whether the estimate did not move between the two bounds.
    pub fn stable(&self) -> bool {
        self.dim_at_bound == self.dim_at_next
    }
}

/// Cohomology of the length filtration pieces `F_D` and `F_{D+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedEstimate {
    pub bound: usize,
    pub rows: Vec<TruncatedRow>,
}

/// Estimate cohomology through the subcomplexes `F_D` and `F_{D+1}`.
///
/// Only degrees whose differential is available are reported.
pub fn truncated_estimate<S: Scalar>(
    complex: &HochschildComplex<'_, S>,
    bound: usize,
    degrees: std::ops::RangeInclusive<usize>,
) -> Result<TruncatedEstimate, ComplexError> {
    let limit = complex.table.max_source_degree();
    let hi = (*degrees.end()).min(limit.saturating_sub(1));
    let lo = *degrees.start();
    if lo > hi {
        return Err(ComplexError::DegreeOutOfRange {
            degree: lo,
            needed: lo + 1,
            computed: complex.table.computed_degree(),
        });
    }
    let dims = |d: usize| -> Result<Vec<usize>, ComplexError> {
        let slice = complex.build_slice(Grading::Filtration(d), lo, hi)?;
        Ok(homology(&slice)?.iter().map(CohomologyBasis::dim).collect())
    };
    let (a, b) = rayon::join(|| dims(bound), || dims(bound + 1));
    let (a, b) = (a?, b?);
    Ok(TruncatedEstimate {
        bound,
        rows: (lo..=hi)
            .zip(a.into_iter().zip(b))
            .map(|(degree, (x, y))| TruncatedRow {
                degree,
                dim_at_bound: x,
                dim_at_next: y,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Coefficients;
    use crate::dual::CurvedDualTable;
    use crate::presentation::{parse_presentation, Algebra, Presentation};
    use num_rational::BigRational;

    type Q = BigRational;

    const HEIS: &str = "generators: x1:1 x2:1 x3:2\nrelations:\n x1*x2 - x2*x1 - x3\n x1*x3 - x3*x1\n x2*x3 - x3*x2\n";

    fn setup(text: &str, max: usize) -> (Algebra<Q>, CurvedDualTable<Q>) {
        let p: Presentation<Q> = parse_presentation(text).unwrap();
        let t = CurvedDualTable::for_presentation(&p, max);
        (Algebra::new(p).unwrap(), t)
    }

    #[test]
    fn heisenberg_small_weights() {
        let (a, t) = setup(HEIS, 6);
        let coeff = Coefficients::Regular;
        let cx = HochschildComplex::new(&a, &t, &coeff);
        let r = hh_report(&cx, &[Grading::Weight(-4), Grading::Weight(0)], 0..=3).unwrap();
        assert_eq!(r.dim(3, Grading::Weight(-4)), Some(1));
        assert_eq!(r.dim(0, Grading::Weight(0)), Some(1));
        assert_eq!(r.dim(0, Grading::Weight(-4)), Some(0));
    }

    #[test]
    fn reduce_class_recovers_coefficients() {
        let (a, t) = setup(HEIS, 6);
        let coeff = Coefficients::Regular;
        let cx = HochschildComplex::new(&a, &t, &coeff);
        let h = cx.cohomology(Grading::Weight(0), 1).unwrap();
        assert!(h.dim() > 0);
        let reps = h.representatives();
        let two = Q::from_integer(2.into());
        let mut u = reps[0].scale(&two);
        // add a coboundary
        let prev = cx.basis(0, Grading::Weight(0));
        u.add_scaled(
            &Q::from_integer(1.into()),
            &cx.d(&from_vector(0, &SparseVector::unit(prev.len(), 0), &prev)),
        );
        let r = reduce_class(&u, &h).unwrap();
        assert_eq!(r.coefficients[0], two);
        assert!(r.coefficients[1..]
            .iter()
            .all(|c| c == &Q::from_integer(0.into())));
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let (a, t) = setup(HEIS, 6);
        let coeff = Coefficients::Regular;
        let cx = HochschildComplex::new(&a, &t, &coeff);
        let h = cx.cohomology(Grading::Weight(1), 0).unwrap();
        let u = CochainElement::from_parts(0, &t.eval_word(&[]), &NcPoly::generator(0));
        assert_eq!(reduce_class(&u, &h), Err(ComplexError::NotACocycle));
    }

    #[test]
    fn clifford_truncation() {
        let (a, t) = setup("generators: x\nrelations:\n x*x - 1\n", 6);
        let coeff = Coefficients::Regular;
        let cx = HochschildComplex::new(&a, &t, &coeff);
        let est = truncated_estimate(&cx, 2, 0..=3).unwrap();
        let dims: Vec<usize> = est.rows.iter().map(|r| r.dim_at_bound).collect();
        assert_eq!(dims, vec![2, 0, 0, 0]);
        assert!(est.rows.iter().all(TruncatedRow::stable));
    }

    #[test]
    fn weyl_zeroth_truncated_is_constants() {
        let (a, t) = setup("generators: x d\nrelations:\n d*x - x*d - 1\n", 4);
        let coeff = Coefficients::Regular;
        let cx = HochschildComplex::new(&a, &t, &coeff);
        let est = truncated_estimate(&cx, 3, 0..=2).unwrap();
        assert_eq!(est.rows[0].dim_at_bound, 1);
    }

    #[test]
    fn central_action_of_x3() {
        let (a, t) = setup(HEIS, 6);
        let coeff = Coefficients::Regular;
        let cx = HochschildComplex::new(&a, &t, &coeff);
        let src = cx.cohomology(Grading::Weight(0), 0).unwrap();
        let dst = cx.cohomology(Grading::Weight(2), 0).unwrap();
        let z = NcPoly::generator(2);
        let m = central_action(&cx, &z, &src, &dst).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (1, 1));
        assert!(!m.is_zero());
        let x1 = NcPoly::generator(0);
        assert!(matches!(
            central_action(&cx, &x1, &src, &dst),
            Err(ComplexError::NotCentral(_))
        ));
    }

    use crate::complexes::from_vector;
}
