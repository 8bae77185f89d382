//! The intersection coalgebra `C^{-i} = ∩ V^a (x) R (x) V^b` of the quadratic part.

use std::collections::HashMap;

use super::{index_word, Presentation, Word};
use crate::linalg::{kernel_basis, rref_of_vectors, Matrix, SparseVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct IntersectionCoalgebra<S> {
    n: usize,
    /// Reduced echelon basis of each `C^{-i}` inside `V^{(x)i}`.
    components: Vec<Vec<SparseVector<S>>>,
    /// Linear and constant parts attached to each basis vector of `C^{-2}`.
    alpha1: Vec<SparseVector<S>>,
    alpha0: Vec<S>,
    /// Largest nonzero degree, once a zero component has been reached.
    top: Option<usize>,
    r_perp: Vec<SparseVector<S>>,
}

impl<S: Scalar> IntersectionCoalgebra<S> {
    pub fn num_generators(&self) -> usize {
        self.n
    }

    /// Highest degree for which a basis was computed.
    pub fn computed_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.top
    }

    pub fn dim(&self, i: usize) -> usize {
        match self.components.get(i) {
            Some(c) => c.len(),
            None if self.top.is_some_and(|t| i > t) => 0,
            None => panic!("degree {i} beyond the computed range"),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, i: usize) -> &[SparseVector<S>] {
        &self.components[i]
    }

    /// Pivot (first nonzero) word of each basis vector of `C^{-i}`.
    pub fn pivot_words(&self, i: usize) -> Vec<Word> {
        self.components[i]
            .iter()
            .map(|v| index_word(v.leading().expect("nonzero basis vector").0, i, self.n))
            .collect()
    }

    pub fn alpha1(&self) -> &[SparseVector<S>] {
        &self.alpha1
    }

    pub fn alpha0(&self) -> &[S] {
        &self.alpha0
    }

    /// Basis of `R^perp` inside `(V (x) V)^*`, as coordinate vectors.
    pub fn r_perp(&self) -> &[SparseVector<S>] {
        &self.r_perp
    }

    /// Whether the splittings of every basis vector of `C^{-i}` lie in `C^{-p} (x) C^{-(i-p)}`.
    pub fn coproduct_closed(&self, i: usize) -> bool {
        let n = self.n;
        (1..i).all(|p| {
            let q = i - p;
            let right_dim = n.pow(q as u32);
            self.components[i].iter().all(|c| {
                let mut left_slices: HashMap<usize, Vec<(usize, S)>> = HashMap::new();
                let mut right_slices: HashMap<usize, Vec<(usize, S)>> = HashMap::new();
                for (w, x) in c.entries() {
                    let (u, v) = (w / right_dim, w % right_dim);
                    left_slices.entry(v).or_default().push((u, x.clone()));
                    right_slices.entry(u).or_default().push((v, x.clone()));
                }
                let in_span = |basis: &[SparseVector<S>], dim: usize, e: Vec<(usize, S)>| {
                    let v = SparseVector::from_entries(dim, e);
                    let mut ech = crate::linalg::Echelon::new(dim);
                    for b in basis {
                        ech.insert(b);
                    }
                    ech.contains(&v)
                };
                left_slices
                    .into_values()
                    .all(|e| in_span(&self.components[p], n.pow(p as u32), e))
                    && right_slices
                        .into_values()
                        .all(|e| in_span(&self.components[q], right_dim, e))
            })
        })
    }
}

/// Compute `C^{-i}` for `i <= max_degree`, stopping at the first zero component.
///
/// Degree `i` is found inside `C^{-(i-1)} (x) V` as the kernel of `id (x) R^perp`
/// on the last two tensor factors.
pub fn intersection_coalgebra<S: Scalar>(
    p: &Presentation<S>,
    max_degree: usize,
) -> IntersectionCoalgebra<S> {
    let n = p.num_generators();
    let relations = p.relation_basis();
    let r_rows: Vec<SparseVector<S>> = relations.iter().map(|r| r.quadratic.clone()).collect();
    let r_perp = kernel_basis(&Matrix::from_rows(n * n, r_rows.clone()));

    let mut components: Vec<Vec<SparseVector<S>>> = vec![vec![SparseVector::unit(1, 0)]];
    let mut top = None;
    if max_degree >= 1 {
        components.push((0..n).map(|g| SparseVector::unit(n, g)).collect());
        if n == 0 {
            top = Some(0);
        }
    }
    if max_degree >= 2 && top.is_none() {
        components.push(r_rows);
    }
    for i in 3..=max_degree {
        if top.is_some() || components[i - 1].is_empty() {
            break;
        }
        let next = extend_component(&components[i - 1], i, n, &r_perp);
        components.push(next);
    }
    if let Some(k) = components.iter().position(Vec::is_empty) {
        components.truncate(k + 1);
        top = Some(k - 1);
    }
    // keep the trailing zero component out of `components`
    if top.is_some() && components.last().is_some_and(Vec::is_empty) {
        components.pop();
    }
    IntersectionCoalgebra {
        n,
        components,
        alpha1: relations.iter().map(|r| r.linear.clone()).collect(),
        alpha0: relations.iter().map(|r| r.constant.clone()).collect(),
        top,
        r_perp,
    }
}

fn extend_component<S: Scalar>(
    prev: &[SparseVector<S>],
    i: usize,
    n: usize,
    r_perp: &[SparseVector<S>],
) -> Vec<SparseVector<S>> {
    let dim = n.pow(i as u32);
    let nvars = prev.len() * n;
    // unknowns y_{d,b}; x = sum y_{d,b} c_d (x) x_b
    let candidates: Vec<SparseVector<S>> = (0..nvars)
        .map(|k| {
            let (d, b) = (k / n, k % n);
            SparseVector::from_entries(
                dim,
                prev[d]
                    .entries()
                    .iter()
                    .map(|(w, c)| (w * n + b, c.clone())),
            )
        })
        .collect();
    if r_perp.is_empty() {
        return rref_of_vectors(dim, &candidates);
    }
    // constraint (u, s): sum_{a,b} x[u a b] phi_s[a b] = 0
    let mut rows: HashMap<(usize, usize), Vec<(usize, S)>> = HashMap::new();
    for (d, c) in prev.iter().enumerate() {
        for (w, x) in c.entries() {
            let (u, a) = (w / n, w % n);
            for (s, phi) in r_perp.iter().enumerate() {
                for b in 0..n {
                    let f = phi.get(a * n + b);
                    if !f.is_zero() {
                        rows.entry((u, s))
                            .or_default()
                            .push((d * n + b, x.mul_ref(&f)));
                    }
                }
            }
        }
    }
    let mut keys: Vec<(usize, usize)> = rows.keys().copied().collect();
    keys.sort_unstable();
    let m = Matrix::from_rows(
        nvars,
        keys.into_iter()
            .map(|k| SparseVector::from_entries(nvars, rows.remove(&k).expect("key")))
            .collect(),
    );
    let solutions: Vec<SparseVector<S>> = kernel_basis(&m)
        .iter()
        .map(|y| {
            y.entries()
                .iter()
                .fold(SparseVector::zeros(dim), |acc, (k, c)| {
                    acc.add_scaled(c, &candidates[*k])
                })
        })
        .collect();
    rref_of_vectors(dim, &solutions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Echelon;
    use crate::presentation::parse_presentation;
    use num_rational::BigRational;

    type Q = BigRational;

    fn coalgebra(text: &str, max: usize) -> IntersectionCoalgebra<Q> {
        intersection_coalgebra(&parse_presentation(text).unwrap(), max)
    }

    /// Direct intersection of all `V^a (x) R (x) V^b` inside `V^{(x)i}`.
    fn direct_intersection(c: &IntersectionCoalgebra<Q>, i: usize) -> usize {
        let n = c.num_generators();
        let dim = n.pow(i as u32);
        let mut rows = Vec::new();
        for a in 0..=i - 2 {
            let b = i - 2 - a;
            let suffix = n.pow(b as u32);
            for phi in c.r_perp() {
                for u in 0..n.pow(a as u32) {
                    for v in 0..suffix {
                        let entries = phi
                            .entries()
                            .iter()
                            .map(|(ab, f)| ((u * n * n + ab) * suffix + v, f.clone()));
                        rows.push(SparseVector::from_entries(dim, entries));
                    }
                }
            }
        }
        let mut ech = Echelon::new(dim);
        for r in &rows {
            ech.insert(r);
        }
        dim - ech.rank()
    }

    #[test]
    fn commutative_three_variables() {
        let c = coalgebra(
            "generators: x y z\nrelations:\n x*y - y*x\n x*z - z*x\n y*z - z*y\n",
            6,
        );
        assert_eq!(c.dims(), vec![1, 3, 3, 1]);
        assert_eq!(c.top_degree(), Some(3));
        assert_eq!(c.dim(4), 0);
        for i in 2..=4 {
            assert_eq!(direct_intersection(&c, i), c.dim(i), "degree {i}");
        }
        for i in 2..=3 {
            assert!(c.coproduct_closed(i));
        }
    }

    #[test]
    fn free_algebra_has_no_higher_components() {
        let c = coalgebra("generators: x\nrelations:\n", 5);
        assert_eq!(c.dims(), vec![1, 1]);
        assert_eq!(c.top_degree(), Some(1));
    }

    #[test]
    fn clifford_is_one_dimensional_everywhere() {
        let c = coalgebra("generators: x\nrelations:\n x*x - 1\n", 6);
        assert_eq!(c.dims(), vec![1; 7]);
        assert_eq!(c.top_degree(), None);
        assert_eq!(c.alpha0(), &[-Q::from_integer(1.into())]);
    }

    #[test]
    fn weyl_a2_matches_direct_intersection() {
        let c = coalgebra(
            "generators: x1 x2 d1 d2\nrelations:\n d1*x1 - x1*d1 - 1\n d2*x2 - x2*d2 - 1\n x1*x2 - x2*x1\n d1*d2 - d2*d1\n d1*x2 - x2*d1\n d2*x1 - x1*d2\n",
            6,
        );
        assert_eq!(c.dims(), vec![1, 4, 6, 4, 1]);
        for i in 2..=5 {
            assert_eq!(direct_intersection(&c, i), c.dim(i));
        }
        assert!(c.coproduct_closed(4));
    }
}
