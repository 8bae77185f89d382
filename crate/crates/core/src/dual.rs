//! The Koszul dual curved dg algebra `(Λ, d, c)`.
//!
//! `Λ^k` is the dual of `C^{-k}`. A word `λ_w` in the dual generators acts on
//! `C^{-k}` by reading off the coefficient of `w`, so with the reduced echelon basis
//! `c_1, ..., c_m` of `C^{-k}` and pivot words `p_d` we use the monomial basis
//! `e_d = λ_{p_d}`, and any word evaluates as `λ_w = Σ_d c_d[w] e_d`. The product is
//! concatenation of words followed by this evaluation.
//!
//! The signed identification `Λ^2 ≅ R^*` sends `λ_a λ_b` to `r ↦ -r[ab]`. With it
//! the generator differential `f ↦ f∘α1` becomes `d(λ_i) = -Σ_d α1(c_d)_i e_d`,
//! and the curvature `-α0` becomes `c = Σ_d α0(c_d) e_d`.

use std::collections::{BTreeMap, HashMap};

use crate::check::Check;
use crate::linalg::{kernel_basis, Echelon, Matrix, SparseVector};
use crate::presentation::{
    format_word, intersection_coalgebra, word_index, Algebra, IntersectionCoalgebra, NcPoly,
    Presentation, Word,
};
use crate::scalar::{coefficient_prefix, Scalar};

#[derive(Debug, Clone)]
pub struct CurvedDualTable<S> {
    n: usize,
    gen_weights: Vec<i64>,
    coalgebra: IntersectionCoalgebra<S>,
    words: Vec<Vec<Word>>,
    eval: Vec<HashMap<usize, SparseVector<S>>>,
    differential: Vec<Matrix<S>>,
    curvature: Option<SparseVector<S>>,
}

/// Build `Λ` (bases and product only) from the intersection coalgebra.
pub fn compute_dual<S: Scalar>(c: IntersectionCoalgebra<S>) -> CurvedDualTable<S> {
    let n = c.num_generators();
    let mut words = Vec::new();
    let mut eval = Vec::new();
    for k in 0..=c.computed_degree() {
        words.push(c.pivot_words(k));
        let basis = c.basis(k);
        let mut acc: HashMap<usize, Vec<(usize, S)>> = HashMap::new();
        for (d, v) in basis.iter().enumerate() {
            for (w, x) in v.entries() {
                acc.entry(*w).or_default().push((d, x.clone()));
            }
        }
        let dim = basis.len();
        eval.push(
            acc.into_iter()
                .map(|(w, e)| (w, SparseVector::from_entries(dim, e)))
                .collect(),
        );
    }
    CurvedDualTable {
        n,
        gen_weights: vec![1; n],
        coalgebra: c,
        words,
        eval,
        differential: Vec::new(),
        curvature: None,
    }
}

/// Attach `d_Λ` and `c_Λ`, using the generator weights and lower-order terms of `p`.
pub fn build_curved_structure<S: Scalar>(
    p: &Presentation<S>,
    mut t: CurvedDualTable<S>,
) -> CurvedDualTable<S> {
    assert_eq!(
        p.num_generators(),
        t.n,
        "presentation does not match the dual table"
    );
    t.gen_weights = p.generators.iter().map(|g| i64::from(g.weight)).collect();
    let alpha1 = t.coalgebra.alpha1().to_vec();
    let alpha0 = t.coalgebra.alpha0().to_vec();
    let dim2 = t.dim(2);
    let dgen: Vec<SparseVector<S>> = (0..t.n)
        .map(|i| {
            SparseVector::from_entries(dim2, alpha1.iter().enumerate().map(|(d, a)| (d, -a.get(i))))
        })
        .collect();
    let mut differential = Vec::new();
    for k in 0..t.max_source_degree() {
        let target = t.dim(k + 1);
        let cols: Vec<SparseVector<S>> = t.words[k]
            .iter()
            .map(|w| {
                let mut acc = SparseVector::zeros(target);
                for p in 0..w.len() {
                    let sign = if p % 2 == 0 { S::one() } else { -S::one() };
                    for (d, x) in dgen[w[p]].entries() {
                        let mut word = w[..p].to_vec();
                        word.extend_from_slice(&t.words[2][*d]);
                        word.extend_from_slice(&w[p + 1..]);
                        acc = acc.add_scaled(&sign.mul_ref(x), &t.eval_word(&word));
                    }
                }
                acc
            })
            .collect();
        differential.push(Matrix::from_columns(target, &cols));
    }
    t.differential = differential;
    if t.in_range(2) {
        t.curvature = Some(SparseVector::from_entries(
            dim2,
            alpha0.iter().enumerate().map(|(d, a)| (d, a.clone())),
        ));
    }
    t
}

impl<S: Scalar> CurvedDualTable<S> {
    /// Intersection coalgebra, dual and curved structure up to `max_degree`.
    pub fn for_presentation(p: &Presentation<S>, max_degree: usize) -> Self {
        build_curved_structure(p, compute_dual(intersection_coalgebra(p, max_degree)))
    }

    pub fn num_generators(&self) -> usize {
        self.n
    }

    pub fn coalgebra(&self) -> &IntersectionCoalgebra<S> {
        &self.coalgebra
    }

    /// Highest degree with an explicit basis.
    pub fn computed_degree(&self) -> usize {
        self.words.len() - 1
    }

    /// Largest `k` with `Λ^k ≠ 0`, when the computation reached a zero component.
    pub fn top_degree(&self) -> Option<usize> {
        self.coalgebra.top_degree()
    }

    /// Whether `Λ^k` is known (possibly known to be zero).
    pub fn in_range(&self, k: usize) -> bool {
        k <= self.computed_degree() || self.top_degree().is_some()
    }

    /// Degrees `k` on which `d: Λ^k → Λ^{k+1}` is available.
    pub fn max_source_degree(&self) -> usize {
        match self.top_degree() {
            Some(t) => t + 1,
            None => self.computed_degree(),
        }
    }

    pub fn dim(&self, k: usize) -> usize {
        match self.words.get(k) {
            Some(w) => w.len(),
            None if self.top_degree().is_some() => 0,
            None => panic!("Λ^{k} is beyond the computed range"),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.words.iter().map(Vec::len).collect()
    }

    /// Pivot words of the basis of `Λ^k`.
    pub fn basis_words(&self, k: usize) -> &[Word] {
        self.words.get(k).map_or(&[], Vec::as_slice)
    }

    /// Weight of `e_a` in `Λ^k`: minus the weight of its word.
    pub fn weight(&self, k: usize, a: usize) -> i64 {
        -self.words[k][a]
            .iter()
            .map(|&g| self.gen_weights[g])
            .sum::<i64>()
    }

    pub fn gen_weights(&self) -> &[i64] {
        &self.gen_weights
    }

    /// Coordinates of the word `λ_w` in the basis of `Λ^{|w|}`.
    pub fn eval_word(&self, w: &[usize]) -> SparseVector<S> {
        let k = w.len();
        let dim = self.dim(k);
        if k > self.computed_degree() {
            return SparseVector::zeros(dim);
        }
        self.eval[k]
            .get(&word_index(w, self.n))
            .cloned()
            .unwrap_or_else(|| SparseVector::zeros(dim))
    }

    /// Product of `x ∈ Λ^i` and `y ∈ Λ^j`.
    pub fn mul(
        &self,
        i: usize,
        x: &SparseVector<S>,
        j: usize,
        y: &SparseVector<S>,
    ) -> SparseVector<S> {
        let mut acc = SparseVector::zeros(self.dim(i + j));
        for (a, p) in x.entries() {
            for (b, q) in y.entries() {
                let mut w = self.words[i][*a].clone();
                w.extend_from_slice(&self.words[j][*b]);
                acc = acc.add_scaled(&p.mul_ref(q), &self.eval_word(&w));
            }
        }
        acc
    }

    pub fn basis_vector(&self, k: usize, a: usize) -> SparseVector<S> {
        SparseVector::unit(self.dim(k), a)
    }

    /// `λ_i e_a` for `e_a ∈ Λ^k`.
    pub fn left_gen(&self, i: usize, k: usize, a: usize) -> SparseVector<S> {
        let mut w = vec![i];
        w.extend_from_slice(&self.words[k][a]);
        self.eval_word(&w)
    }

    /// `e_a λ_i` for `e_a ∈ Λ^k`.
    pub fn right_gen(&self, k: usize, a: usize, i: usize) -> SparseVector<S> {
        let mut w = self.words[k][a].clone();
        w.push(i);
        self.eval_word(&w)
    }

    /// Matrix of `d: Λ^k → Λ^{k+1}`.
    pub fn differential(&self, k: usize) -> &Matrix<S> {
        &self.differential[k]
    }

    pub fn has_differential(&self, k: usize) -> bool {
        k < self.differential.len()
    }

    pub fn d(&self, k: usize, x: &SparseVector<S>) -> SparseVector<S> {
        self.differential[k].mul_vec(x)
    }

    /// `c_Λ ∈ Λ^2`.
    pub fn curvature(&self) -> Option<&SparseVector<S>> {
        self.curvature.as_ref()
    }

    pub fn lambda_names(&self) -> Vec<String> {
        (1..=self.n).map(|i| format!("l{i}")).collect()
    }

    pub fn format_basis(&self, k: usize, a: usize) -> String {
        format_word(&self.words[k][a], &self.lambda_names())
    }

    pub fn format_element(&self, k: usize, x: &SparseVector<S>) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (a, c)) in x.entries().iter().enumerate() {
            let term = if k == 0 {
                c.to_string()
            } else {
                format!("{}{}", coefficient_prefix(c), self.format_basis(k, *a))
            };
            match (idx, term.strip_prefix('-')) {
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

    /// `d² = [c, -]` on every basis element whose target is in range, and `d(c) = 0`.
    pub fn verify_curved(&self) -> Check {
        Check::from_result(
            "curved dg identities d^2 = [c,-], d(c) = 0",
            self.curved_witness(),
        )
    }

    fn curved_witness(&self) -> Result<(), String> {
        let zero2 = SparseVector::zeros(self.dim(2));
        let c = self.curvature.clone().unwrap_or(zero2);
        for k in 0..=self.computed_degree() {
            if !(self.has_differential(k) && self.has_differential(k + 1) && self.in_range(k + 2)) {
                continue;
            }
            for a in 0..self.dim(k) {
                let b = self.basis_vector(k, a);
                let dd = self.d(k + 1, &self.d(k, &b));
                let comm = self.mul(2, &c, k, &b).sub(&self.mul(k, &b, 2, &c));
                if dd != comm {
                    return Err(format!(
                        "d^2({}) = {} but [c, {}] = {}",
                        self.format_basis(k, a),
                        self.format_element(k + 2, &dd),
                        self.format_basis(k, a),
                        self.format_element(k + 2, &comm)
                    ));
                }
            }
        }
        if self.has_differential(2) {
            let dc = self.d(2, &c);
            if !dc.is_zero() {
                return Err(format!("d(c) = {}", self.format_element(3, &dc)));
            }
        }
        Ok(())
    }

    /// `d(ab) = d(a)b + (-1)^{|a|} a d(b)` on basis pairs within range.
    pub fn verify_leibniz(&self) -> Check {
        let mut result = Ok(());
        'outer: for i in 0..=self.computed_degree() {
            for j in 0..=self.computed_degree() - i {
                if !self.has_differential(i + j)
                    || !self.has_differential(i)
                    || !self.has_differential(j)
                {
                    continue;
                }
                for a in 0..self.dim(i) {
                    for b in 0..self.dim(j) {
                        let (x, y) = (self.basis_vector(i, a), self.basis_vector(j, b));
                        let lhs = self.d(i + j, &self.mul(i, &x, j, &y));
                        let sign = if i % 2 == 0 { S::one() } else { -S::one() };
                        let rhs = self
                            .mul(i + 1, &self.d(i, &x), j, &y)
                            .add_scaled(&sign, &self.mul(i, &x, j + 1, &self.d(j, &y)));
                        if lhs != rhs {
                            result = Err(format!(
                                "d({} * {})",
                                self.format_basis(i, a),
                                self.format_basis(j, b)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        Check::from_result("Leibniz rule for d", result)
    }

    /// `(ab)c = a(bc)` on basis triples within range.
    pub fn verify_associativity(&self) -> Check {
        let top = self.computed_degree();
        let mut result = Ok(());
        'outer: for i in 1..=top {
            for j in 1..=top - i {
                for k in 1..=top - i - j {
                    for a in 0..self.dim(i) {
                        for b in 0..self.dim(j) {
                            for c in 0..self.dim(k) {
                                let (x, y, z) = (
                                    self.basis_vector(i, a),
                                    self.basis_vector(j, b),
                                    self.basis_vector(k, c),
                                );
                                let l = self.mul(i + j, &self.mul(i, &x, j, &y), k, &z);
                                let r = self.mul(i, &x, j + k, &self.mul(j, &y, k, &z));
                                if l != r {
                                    result = Err(format!(
                                        "({} * {}) * {}",
                                        self.format_basis(i, a),
                                        self.format_basis(j, b),
                                        self.format_basis(k, c)
                                    ));
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        Check::from_result("associativity of the product on Λ", result)
    }

    /// `dim Λ^k = dim C^{-k}` and `(R^⊥)^⊥ = R`.
    pub fn verify_duality(&self) -> Check {
        let n = self.n;
        for k in 0..=self.computed_degree() {
            if self.dim(k) != self.coalgebra.dim(k) {
                return Check::fail(
                    "quadratic duality",
                    format!("dim Λ^{k} differs from dim C^-{k}"),
                );
            }
        }
        if self.computed_degree() < 2 {
            return Check::pass("quadratic duality");
        }
        let r = self.coalgebra.basis(2);
        let perp = self.coalgebra.r_perp();
        let perp_perp = kernel_basis(&Matrix::from_rows(n * n, perp.to_vec()));
        let mut ech = Echelon::new(n * n);
        for v in r {
            ech.insert(v);
        }
        let same = perp_perp.len() == r.len() && perp_perp.iter().all(|v| ech.contains(v));
        if same {
            Check::pass("quadratic duality")
        } else {
            Check::fail("quadratic duality", "(R^perp)^perp differs from R")
        }
    }
}

/// An element of `Λ^k ⊗ A`, keyed by `(basis index of Λ^k, normal word)`.
pub type LambdaTensorA<S> = BTreeMap<(usize, Word), S>;

fn add_into<S: Scalar>(acc: &mut LambdaTensorA<S>, key: (usize, Word), c: S) {
    if c.is_zero() {
        return;
    }
    let entry = acc.entry(key.clone()).or_insert_with(S::zero);
    *entry = entry.add_ref(&c);
    if entry.is_zero() {
        acc.remove(&key);
    }
}

/// Value in `A` of `-α0(r) - α1(r) + μ(π⊗π)Δ(r)` for each basis relation `r`.
///
/// The coproduct sign makes `μ(π⊗π)Δ(r) = -r` evaluated in `A`, so each value is
/// minus the defining relation and must vanish.
pub fn twisting_cochain_values<S: Scalar>(a: &Algebra<S>) -> Vec<NcPoly<S>> {
    let p = a.presentation();
    let n = p.num_generators();
    p.relation_basis()
        .iter()
        .map(|r| {
            let mut v = NcPoly::monomial(Vec::new(), -r.constant.clone());
            for (g, c) in r.linear.entries() {
                v.add_term(vec![*g], -c.clone());
            }
            let mut quad = NcPoly::zero();
            for (w, c) in r.quadratic.entries() {
                quad.add_term(vec![w / n, w % n], c.clone());
            }
            v.add_scaled(&-S::one(), &a.normal_form(&quad));
            a.normal_form(&v)
        })
        .collect()
}

pub fn twisting_cochain_check<S: Scalar>(a: &Algebra<S>) -> Check {
    let names = a.presentation().generator_names();
    for (i, v) in twisting_cochain_values(a).iter().enumerate() {
        if !v.is_zero() {
            return Check::fail(
                "twisting cochain identity",
                format!("relation {} evaluates to {}", i + 1, v.format(&names)),
            );
        }
    }
    Check::pass("twisting cochain identity")
}

/// `d(e)`, `e²` and `c ⊗ 1` for `e = Σ λ_i ⊗ x_i`, all in `Λ^2 ⊗ A`.
pub fn e_identity_terms<S: Scalar>(
    a: &Algebra<S>,
    t: &CurvedDualTable<S>,
) -> [LambdaTensorA<S>; 3] {
    let n = t.num_generators();
    let mut de = LambdaTensorA::new();
    let mut e2 = LambdaTensorA::new();
    let mut c1 = LambdaTensorA::new();
    for i in 0..n {
        let li = t.eval_word(&[i]);
        for (b, x) in t.d(1, &li).entries() {
            add_into(&mut de, (*b, vec![i]), x.clone());
        }
        for j in 0..n {
            let lij = t.eval_word(&[i, j]);
            let xij = a.normal_form_word(&[i, j]);
            for (b, x) in lij.entries() {
                for (w, y) in xij.terms() {
                    add_into(&mut e2, (*b, w.clone()), x.mul_ref(y));
                }
            }
        }
    }
    if let Some(c) = t.curvature() {
        for (b, x) in c.entries() {
            add_into(&mut c1, (*b, Vec::new()), x.clone());
        }
    }
    [de, e2, c1]
}

/// `d(e) = e² + c ⊗ 1`.
pub fn e_identity_check<S: Scalar>(a: &Algebra<S>, t: &CurvedDualTable<S>) -> Check {
    if !t.in_range(2) {
        return Check::note("identity element equation", "skipped: Λ^2 not computed");
    }
    let [de, e2, c1] = e_identity_terms(a, t);
    let mut rhs = e2;
    for (k, v) in c1 {
        add_into(&mut rhs, k, v);
    }
    if de == rhs {
        Check::pass("identity element equation")
    } else {
        let show = |m: &LambdaTensorA<S>| format_lambda_tensor(a, t, 2, m);
        Check::fail(
            "identity element equation",
            format!("d(e) = {} but e^2 + c = {}", show(&de), show(&rhs)),
        )
    }
}

pub fn format_lambda_tensor<S: Scalar>(
    a: &Algebra<S>,
    t: &CurvedDualTable<S>,
    k: usize,
    m: &LambdaTensorA<S>,
) -> String {
    if m.is_empty() {
        return "0".into();
    }
    let names = a.presentation().generator_names();
    let terms: Vec<String> = m
        .iter()
        .map(|((b, w), c)| {
            let lam = if k == 0 {
                "1".to_string()
            } else {
                t.format_basis(k, *b)
            };
            format!(
                "{}{} (x) {}",
                coefficient_prefix(c),
                lam,
                format_word(w, &names)
            )
        })
        .collect();
    terms.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use num_rational::BigRational;

    type Q = BigRational;

    const HEIS: &str = "generators: x1:1 x2:1 x3:2\nrelations:\n x1*x2 - x2*x1 - x3\n x1*x3 - x3*x1\n x2*x3 - x3*x2\n";

    fn setup(text: &str, max: usize) -> (Algebra<Q>, CurvedDualTable<Q>) {
        let p: Presentation<Q> = parse_presentation(text).unwrap();
        let t = CurvedDualTable::for_presentation(&p, max);
        (Algebra::new(p).unwrap(), t)
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn heisenberg_dual() {
        let (a, t) = setup(HEIS, 6);
        assert_eq!(t.dims(), vec![1, 3, 3, 1]);
        assert_eq!(t.top_degree(), Some(3));
        let l = |i| t.eval_word(&[i]);
        assert!(t.d(1, &l(0)).is_zero());
        assert!(t.d(1, &l(1)).is_zero());
        assert_eq!(t.d(1, &l(2)), t.eval_word(&[0, 1]));
        assert_eq!(t.eval_word(&[1, 0]), t.eval_word(&[0, 1]).neg());
        assert!(t.eval_word(&[2, 2]).is_zero());
        assert!(t.curvature().unwrap().is_zero());
        assert!(t.verify_curved().pass);
        assert!(t.verify_leibniz().pass);
        assert!(t.verify_associativity().pass);
        assert!(t.verify_duality().pass);
        assert!(twisting_cochain_check(&a).pass);
        let check = e_identity_check(&a, &t);
        assert!(check.pass, "{check}");
    }

    #[test]
    fn weyl_curvature() {
        let (a, t) = setup("generators: x d\nrelations:\n d*x - x*d - 1\n", 6);
        assert_eq!(t.dims(), vec![1, 2, 1]);
        assert_eq!(t.curvature().unwrap(), &t.eval_word(&[0, 1]));
        assert_eq!(t.format_element(2, t.curvature().unwrap()), "l1*l2");
        assert!(t.d(1, &t.eval_word(&[0])).is_zero());
        assert!(t.verify_curved().pass);
        assert!(twisting_cochain_check(&a).pass);
        assert!(e_identity_check(&a, &t).pass);
        let [de, e2, c1] = e_identity_terms(&a, &t);
        assert!(de.is_empty());
        assert_eq!(e2.get(&(0, vec![])), Some(&q(-1)));
        assert_eq!(c1.get(&(0, vec![])), Some(&q(1)));
    }

    #[test]
    fn clifford_curvature() {
        let (a, t) = setup("generators: x\nrelations:\n x*x - 1\n", 5);
        assert_eq!(t.dims(), vec![1; 6]);
        assert_eq!(t.curvature().unwrap(), &t.eval_word(&[0, 0]).neg());
        assert!(t.verify_curved().pass);
        assert!(twisting_cochain_check(&a).pass);
        assert!(e_identity_check(&a, &t).pass);
        assert!(t.verify_associativity().pass);
    }

    #[test]
    fn skew_deformation_differential() {
        let (a, t) = setup("generators: x1 x2 x3\nrelations:\n x1*x2 - 2*x2*x1 - x1\n x1*x3 - x3*x1\n x2*x3 - x3*x2\n", 6);
        assert_eq!(t.dims(), vec![1, 3, 3, 1]);
        assert_eq!(t.d(1, &t.eval_word(&[0])), t.eval_word(&[0, 1]));
        assert!(t.verify_curved().pass);
        assert!(t.verify_leibniz().pass);
        assert!(e_identity_check(&a, &t).pass);
    }

    #[test]
    fn broken_sign_is_detected() {
        let (a, mut t) = setup(HEIS, 6);
        t.differential[1] = Matrix::zeros(3, 3);
        let check = e_identity_check(&a, &t);
        assert!(!check.pass);
        assert!(check.witness.unwrap().contains("l1*l2 (x) x3"));
    }
}
