//! Weight slices of the Koszul bimodule complex `K = A ⊗ Λ^* ⊗ A`.
//!
//! `ε_d` is the basis of `(Λ^n)^*` dual to `e_d`, placed in degree `-n` with weight
//! `+wt(word_d)`. On `x ⊗ ε ⊗ y` the differential is
//! `x ⊗ d*(ε) ⊗ y - Σ_i (x ⊗ λ_i ε ⊗ x_i y - (-1)^n x x_i ⊗ ε λ_i ⊗ y)`, with the
//! transposed actions `(λ_i ε)(f) = -ε(f λ_i)`, `(ε λ_i)(f) = ε(λ_i f)` and
//! `d*(ε)(f) = -(-1)^n ε(d f)`.

use std::collections::HashMap;

use rayon::prelude::*;

use super::ComplexError;
use crate::check::Check;
use crate::dual::CurvedDualTable;
use crate::linalg::{rank, Matrix, SparseVector};
use crate::presentation::{Algebra, Word};
use crate::scalar::Scalar;

/// `(x, d, y)` standing for `x ⊗ ε_d ⊗ y`.
pub type ResolutionKey = (Word, usize, Word);

#[derive(Debug, Clone)]
pub struct ResolutionSlice<S> {
    pub weight: i64,
    /// `bases[n]` spans `K^{-n}` in this weight.
    pub bases: Vec<Vec<ResolutionKey>>,
    /// `diffs[n-1]` is `d: K^{-n} → K^{-(n-1)}`.
    pub diffs: Vec<Matrix<S>>,
}

fn sign<S: Scalar>(n: usize) -> S {
    if n.is_multiple_of(2) {
        S::one()
    } else {
        -S::one()
    }
}

/// Build the weight-`w` slice of `K` in degrees `0, -1, ..., -top`.
pub fn build_resolution_slice<S: Scalar>(
    algebra: &Algebra<S>,
    table: &CurvedDualTable<S>,
    weight: i64,
) -> Result<ResolutionSlice<S>, ComplexError> {
    if !algebra.presentation().is_weighted() {
        return Err(ComplexError::Unweighted);
    }
    // every generator has weight >= 1, so ε of degree n has weight >= n
    let needed = usize::try_from(weight.max(0)).expect("nonnegative");
    let top = match table.top_degree() {
        Some(t) => t,
        None if table.computed_degree() > needed => needed,
        None => {
            return Err(ComplexError::DegreeOutOfRange {
                degree: needed,
                needed: needed + 1,
                computed: table.computed_degree(),
            })
        }
    };
    let bases: Vec<Vec<ResolutionKey>> = (0..=top)
        .map(|n| {
            let mut out = Vec::new();
            for d in 0..table.dim(n) {
                let rem = weight + table.weight(n, d);
                for wx in 0..=rem {
                    let xs = algebra.normal_words_of_weight(wx);
                    let ys = algebra.normal_words_of_weight(rem - wx);
                    for x in xs.iter() {
                        for y in ys.iter() {
                            out.push((x.clone(), d, y.clone()));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let n_gens = table.num_generators();
    let mut diffs = Vec::new();
    for n in 1..=top {
        let target: HashMap<&ResolutionKey, usize> = bases[n - 1]
            .iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let prev_dim = table.dim(n - 1);
        // transposed actions on (Λ^n)^*, indexed by the source ε_d
        let mut dual_d: Vec<Vec<(usize, S)>> = vec![Vec::new(); table.dim(n)];
        let mut left: Vec<Vec<Vec<(usize, S)>>> = vec![vec![Vec::new(); n_gens]; table.dim(n)];
        let mut right: Vec<Vec<Vec<(usize, S)>>> = vec![vec![Vec::new(); n_gens]; table.dim(n)];
        for b in 0..prev_dim {
            let e = table.basis_vector(n - 1, b);
            for (d, c) in table.d(n - 1, &e).entries() {
                dual_d[*d].push((b, -sign::<S>(n).mul_ref(c)));
            }
            for i in 0..n_gens {
                for (d, c) in table.right_gen(n - 1, b, i).entries() {
                    left[*d][i].push((b, -c.clone()));
                }
                for (d, c) in table.left_gen(i, n - 1, b).entries() {
                    right[*d][i].push((b, c.clone()));
                }
            }
        }
        let mut cols = Vec::with_capacity(bases[n].len());
        for key in &bases[n] {
            let (x, d, y) = key;
            let mut acc: HashMap<usize, S> = HashMap::new();
            let mut push = |k: ResolutionKey, c: S| -> Result<(), ComplexError> {
                let idx = *target.get(&k).ok_or_else(|| {
                    ComplexError::WeightViolation(format!(
                        "resolution term {k:?} outside weight {weight}"
                    ))
                })?;
                let e = acc.entry(idx).or_insert_with(S::zero);
                *e = e.add_ref(&c);
                Ok(())
            };
            for (b, c) in &dual_d[*d] {
                push((x.clone(), *b, y.clone()), c.clone())?;
            }
            for i in 0..n_gens {
                if !left[*d][i].is_empty() {
                    let xy = algebra.left_mul_gen(i, y);
                    for (b, c) in &left[*d][i] {
                        for (w, a) in xy.terms() {
                            push((x.clone(), *b, w.clone()), -c.mul_ref(a))?;
                        }
                    }
                }
                if !right[*d][i].is_empty() {
                    let xx = algebra.right_mul_gen(x, i);
                    for (b, c) in &right[*d][i] {
                        for (w, a) in xx.terms() {
                            push(
                                (w.clone(), *b, y.clone()),
                                sign::<S>(n).mul_ref(c).mul_ref(a),
                            )?;
                        }
                    }
                }
            }
            cols.push(SparseVector::from_entries(
                bases[n - 1].len(),
                acc.into_iter().filter(|(_, c)| !c.is_zero()),
            ));
        }
        diffs.push(Matrix::from_columns(bases[n - 1].len(), &cols));
    }
    Ok(ResolutionSlice {
        weight,
        bases,
        diffs,
    })
}

/// Per-weight summary of the resolution checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionReport {
    pub weight: i64,
    /// `dims[n] = dim K^{-n}`.
    pub dims: Vec<usize>,
    /// `cohomology[n] = dim H^{-n}`.
    pub cohomology: Vec<usize>,
    pub d_squared_zero: bool,
    pub algebra_dim: usize,
}

impl ResolutionReport {
    /// `d^2 = 0`, `H^0 = A_w` and `H^{<0} = 0`.
    pub fn is_resolution(&self) -> bool {
        self.d_squared_zero
            && self.cohomology.first() == Some(&self.algebra_dim)
            && self.cohomology.iter().skip(1).all(|&h| h == 0)
    }

    pub fn check(&self) -> Check {
        let name = format!("resolution exact at weight {}", self.weight);
        if self.is_resolution() {
            Check::pass(name)
        } else {
            Check::fail(
                name,
                format!(
                    "d^2 = 0: {}, cohomology {:?}, expected H^0 = {}",
                    self.d_squared_zero, self.cohomology, self.algebra_dim
                ),
            )
        }
    }
}

impl<S: Scalar> ResolutionSlice<S> {
    pub fn report(&self, algebra: &Algebra<S>) -> ResolutionReport {
        let ranks: Vec<usize> = self.diffs.iter().map(rank).collect();
        let d_squared_zero = self.diffs.windows(2).all(|p| p[0].mul(&p[1]).is_zero());
        let dims: Vec<usize> = self.bases.iter().map(Vec::len).collect();
        let cohomology = (0..dims.len())
            .map(|n| {
                let out = if n == 0 { 0 } else { ranks[n - 1] };
                let inc = ranks.get(n).copied().unwrap_or(0);
                dims[n] - out - inc
            })
            .collect();
        ResolutionReport {
            weight: self.weight,
            dims,
            cohomology,
            d_squared_zero,
            algebra_dim: algebra.normal_words_of_weight(self.weight).len(),
        }
    }
}

/// Check `K` in every weight of `weights`, in parallel.
pub fn verify_resolution<S: Scalar>(
    algebra: &Algebra<S>,
    table: &CurvedDualTable<S>,
    weights: std::ops::RangeInclusive<i64>,
) -> Result<Vec<ResolutionReport>, ComplexError> {
    weights
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|w| build_resolution_slice(algebra, table, w).map(|s| s.report(algebra)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, Presentation};
    use num_rational::BigRational;

    type Q = BigRational;

    fn reports(text: &str, max: i64) -> Vec<ResolutionReport> {
        let p: Presentation<Q> = parse_presentation(text).unwrap();
        let t = CurvedDualTable::for_presentation(&p, 8);
        let a = Algebra::new(p).unwrap();
        verify_resolution(&a, &t, 0..=max).unwrap()
    }

    #[test]
    fn polynomial_ring_resolution() {
        for r in reports("generators: x y\nrelations:\n x*y - y*x\n", 4) {
            assert!(r.is_resolution(), "{r:?}");
        }
    }

    #[test]
    fn heisenberg_resolution() {
        for r in reports("generators: x1:1 x2:1 x3:2\nrelations:\n x1*x2 - x2*x1 - x3\n x1*x3 - x3*x1\n x2*x3 - x3*x2\n", 5) {
            assert!(r.is_resolution(), "{r:?}");
        }
    }

    #[test]
    fn quantum_plane_and_free_algebra() {
        for r in reports("generators: x y\nrelations:\n x*y - 2*y*x\n", 4) {
            assert!(r.is_resolution(), "{r:?}");
        }
        for r in reports("generators: x\nrelations:\n", 4) {
            assert!(r.is_resolution(), "{r:?}");
        }
    }
}
