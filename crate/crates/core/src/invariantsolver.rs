//! Exact invariant and commutant spaces of tensor powers, and the checks
//! comparing them with the span of Brauer diagram and permutation images.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::brauercat::{enumerate_diagrams, transfer_a, transfer_u, BrauerDiagram, BrauerElt};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::ospgeom::{osp_basis, FormSpec};
use crate::scalar::{q, Parity, Rational};
use crate::superlinalg::SuperMatrix;
use crate::tensorfunctor::{
    compose_ops, digits, f_single, gl_basis, ipow, lie_action, perm_action, tensor_ops, TensorOp,
};

pub const DEFAULT_SIZE_BOUND: u64 = 70_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    Osp,
    Gl,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub size_bound: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            size_bound: DEFAULT_SIZE_BOUND,
        }
    }
}

/// A homogeneous basis of a space of tensor operators V^{⊗k} → V^{⊗l}.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub k: usize,
    pub l: usize,
    pub basis: Vec<TensorOp>,
    /// Unknowns left after the weight and reflection support restrictions.
    pub unknowns: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn echelon(&self) -> Echelon {
        let size = self.basis.first().map(|b| b.nrows() * b.ncols()).unwrap_or(0);
        let mut e = Echelon::new(size);
        for b in &self.basis {
            e.insert_rational(&b.to_sparse_vec());
        }
        e
    }

    /// True when every operator lies in the span of the basis.
    pub fn contains_all<'a>(&self, ops: impl IntoIterator<Item = &'a TensorOp>) -> bool {
        let e = self.echelon();
        ops.into_iter().all(|op| op.is_zero() || (e.ncols() > 0 && e.contains(&op.to_sparse_vec())))
    }
}

fn check_size(spec: &FormSpec, k: usize, l: usize, cfg: &SolverConfig) -> Result<()> {
    let size = (spec.dim() as u64).checked_pow((k + l) as u32).unwrap_or(u64::MAX);
    if size > cfg.size_bound {
        return Err(Error::TooLarge {
            size,
            bound: cfg.size_bound,
        });
    }
    Ok(())
}

/// Weight of a basis index under the diagonal torus of the acting algebra.
fn weight_vector(spec: &FormSpec, algebra: Algebra, idx: &[usize]) -> Vec<i64> {
    let d = spec.dim();
    match algebra {
        Algebra::Gl => {
            let mut w = vec![0; d];
            for &a in idx {
                w[a] += 1;
            }
            w
        }
        Algebra::Osp => {
            // the diagonal of sp(2n): e_{m+2j} has weight +1, e_{m+2j+1} weight −1
            let mut w = vec![0; spec.n];
            for &a in idx {
                if a >= spec.m {
                    let j = (a - spec.m) / 2;
                    w[j] += if (a - spec.m).is_multiple_of(2) { 1 } else { -1 };
                }
            }
            w
        }
    }
}

fn generators(spec: &FormSpec, algebra: Algebra) -> Vec<SuperMatrix<Rational>> {
    match algebra {
        Algebra::Gl => gl_basis(spec)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i / spec.dim() != i % spec.dim())
            .map(|(_, x)| x)
            .collect(),
        Algebra::Osp => osp_basis(spec).all().cloned().collect(),
    }
}

/// Solves X∘φ = (−1)^{[X][φ]} φ∘X for every generator X, separately for
/// even and odd φ, on the support allowed by the torus weights and (for
/// the group) the reflection diag(−1, 1, …, 1).
fn solve_commutant(
    spec: &FormSpec,
    k: usize,
    l: usize,
    algebra: Algebra,
    reflection: bool,
    cfg: &SolverConfig,
) -> Result<HomSpace> {
    check_size(spec, k, l, cfg)?;
    let d = spec.dim();
    let (nr, nc) = (ipow(d, l), ipow(d, k));
    let gens = generators(spec, algebra);
    let actions: Vec<(Parity, TensorOp, Vec<Vec<(usize, Rational)>>)> = gens
        .par_iter()
        .map(|x| {
            let px = x.tag().parity().expect("basis elements are homogeneous");
            let out = lie_action(x, l, spec).unwrap();
            let inp = lie_action(x, k, spec).unwrap();
            // rows of the input action: rows[J] = [(J′, c)] with c = inp[J, J′]
            let mut rows = vec![Vec::new(); nc];
            for jp in 0..nc {
                for (j, c) in inp.column(jp) {
                    rows[*j].push((jp, c.clone()));
                }
            }
            (px, out, rows)
        })
        .collect();
    let row_info: Vec<(Vec<i64>, Parity, usize)> = (0..nr)
        .map(|i| {
            let ds = digits(i, l, d);
            let p = Parity::from_bit(ds.iter().filter(|&&a| a >= spec.m).count());
            let zeros = ds.iter().filter(|&&a| a == 0).count();
            (weight_vector(spec, algebra, &ds), p, zeros)
        })
        .collect();
    let col_info: Vec<(Vec<i64>, Parity, usize)> = (0..nc)
        .map(|j| {
            let ds = digits(j, k, d);
            let p = Parity::from_bit(ds.iter().filter(|&&a| a >= spec.m).count());
            let zeros = ds.iter().filter(|&&a| a == 0).count();
            (weight_vector(spec, algebra, &ds), p, zeros)
        })
        .collect();
    let use_reflection = reflection && spec.m >= 1;
    let mut basis = Vec::new();
    let mut unknown_total = 0;
    for phi_parity in [Parity::Even, Parity::Odd] {
        let mut unknowns: Vec<(usize, usize)> = Vec::new();
        for (i, (wi, pi, zi)) in row_info.iter().enumerate() {
            for (j, (wj, pj, zj)) in col_info.iter().enumerate() {
                if *pi + *pj == phi_parity && wi == wj && (!use_reflection || (zi + zj) % 2 == 0) {
                    unknowns.push((i, j));
                }
            }
        }
        unknown_total += unknowns.len();
        if unknowns.is_empty() {
            continue;
        }
        let blocks: Vec<Vec<SparseVec>> = actions
            .par_iter()
            .map(|(px, out, in_rows)| {
                let s = if px.sign_with(phi_parity) < 0 { q(1) } else { q(-1) };
                let mut eqs: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
                for (u, &(i, j)) in unknowns.iter().enumerate() {
                    for (ip, c) in out.column(i) {
                        eqs.entry((*ip, j)).or_default().push((u, c.clone()));
                    }
                    for (jp, c) in &in_rows[j] {
                        eqs.entry((i, *jp)).or_default().push((u, c * &s));
                    }
                }
                eqs.into_values().collect()
            })
            .collect();
        let mut ech = Echelon::new(unknowns.len());
        for block in blocks {
            for row in block {
                if ech.rank() == unknowns.len() {
                    break;
                }
                ech.insert_rational(&row);
            }
        }
        for v in ech.nullspace() {
            let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nc];
            for (u, x) in v {
                let (i, j) = unknowns[u];
                cols[j].push((i, x));
            }
            basis.push(TensorOp::from_columns(spec, k, l, phi_parity, |j| cols[j].clone()));
        }
    }
    Ok(HomSpace {
        k,
        l,
        basis,
        unknowns: unknown_total,
    })
}

/// Graded commutant of the Lie superalgebra (osp or gl) in Hom(V^{⊗k}, V^{⊗l}).
pub fn hom_space_lie(k: usize, l: usize, spec: &FormSpec, algebra: Algebra, cfg: &SolverConfig) -> Result<HomSpace> {
    solve_commutant(spec, k, l, algebra, false, cfg)
}

/// osp-invariants that are also invariant under the O(m) reflection.
pub fn hom_space_group(k: usize, l: usize, spec: &FormSpec, cfg: &SolverConfig) -> Result<HomSpace> {
    solve_commutant(spec, k, l, Algebra::Osp, true, cfg)
}

/// F(D) for every (k, l) diagram.
pub fn diagram_images(k: usize, l: usize, spec: &FormSpec) -> Result<Vec<TensorOp>> {
    enumerate_diagrams(k, l).par_iter().map(|d| f_single(d, spec)).collect()
}

pub fn rank_of_ops<'a>(ops: impl IntoIterator<Item = &'a TensorOp>) -> usize {
    let mut ech: Option<Echelon> = None;
    for op in ops {
        let e = ech.get_or_insert_with(|| Echelon::new(op.nrows() * op.ncols()));
        e.insert_rational(&op.to_sparse_vec());
    }
    ech.map(|e| e.rank()).unwrap_or(0)
}

pub fn diagram_image_rank(k: usize, l: usize, spec: &FormSpec, cfg: &SolverConfig) -> Result<usize> {
    check_size(spec, k, l, cfg)?;
    Ok(rank_of_ops(&diagram_images(k, l, spec)?))
}

/// All permutations of 0..r in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..r).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub check: String,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub dim_lie_invariants: Option<usize>,
    pub dim_group_invariants: Option<usize>,
    pub diagram_image_rank: Option<usize>,
    pub perm_image_rank: Option<usize>,
    /// Diagram or permutation images lie in the computed invariant space.
    pub images_contained: bool,
    pub verdict: bool,
    pub millis: u128,
}

fn report(check: &str, spec: &FormSpec, k: usize, l: usize) -> InvariantReport {
    InvariantReport {
        check: check.to_string(),
        m: spec.m,
        n: spec.n,
        k,
        l,
        dim_lie_invariants: None,
        dim_group_invariants: None,
        diagram_image_rank: None,
        perm_image_rank: None,
        images_contained: true,
        verdict: false,
        millis: 0,
    }
}

/// dim Hom_G(V^{⊗k}, V^{⊗l}) against the rank of the diagram images.
pub fn group_vs_diagrams(check: &str, k: usize, l: usize, spec: &FormSpec, cfg: &SolverConfig) -> Result<InvariantReport> {
    let start = Instant::now();
    let mut rep = report(check, spec, k, l);
    let group = hom_space_group(k, l, spec, cfg)?;
    let images = diagram_images(k, l, spec)?;
    let rank = rank_of_ops(&images);
    rep.dim_group_invariants = Some(group.dim());
    rep.diagram_image_rank = Some(rank);
    rep.images_contained = group.contains_all(&images);
    rep.verdict = rep.images_contained && group.dim() == rank;
    rep.millis = start.elapsed().as_millis();
    Ok(rep)
}

/// FFT: invariant functionals on V^{⊗2d} are spanned by pairings.
pub fn verify_fft(spec: &FormSpec, d_max: usize, cfg: &SolverConfig) -> Result<Vec<InvariantReport>> {
    (1..=d_max).map(|d| group_vs_diagrams("fft", 2 * d, 0, spec, cfg)).collect()
}

/// Schur–Weyl–Brauer: End_G(V^{⊗r}) = F(B_r(m − 2n)).
pub fn verify_swb(spec: &FormSpec, r_max: usize, cfg: &SolverConfig) -> Result<Vec<InvariantReport>> {
    (1..=r_max).map(|r| group_vs_diagrams("swb", r, r, spec, cfg)).collect()
}

/// Super Schur–Weyl: End_gl(V^{⊗r}) = span ϖ_r(Sym_r).
pub fn verify_gl_sw(spec: &FormSpec, r_max: usize, cfg: &SolverConfig) -> Result<Vec<InvariantReport>> {
    (1..=r_max)
        .map(|r| {
            let start = Instant::now();
            let mut rep = report("glsw", spec, r, r);
            let lie = hom_space_lie(r, r, spec, Algebra::Gl, cfg)?;
            let perms: Vec<TensorOp> = permutations(r).par_iter().map(|s| perm_action(s, spec)).collect();
            let rank = rank_of_ops(&perms);
            rep.dim_lie_invariants = Some(lie.dim());
            rep.perm_image_rank = Some(rank);
            rep.images_contained = lie.contains_all(&perms);
            rep.verdict = rep.images_contained && lie.dim() == rank;
            rep.millis = start.elapsed().as_millis();
            Ok(rep)
        })
        .collect()
}

/// Lie versus group invariants of End(V^{⊗r}). For even m and r at or above
/// the critical degree the Lie invariants exceed the diagram span; the
/// verdict records the expected pattern: group = diagrams always, and
/// lie > group exactly when `expect_gap`.
pub fn pfaffian_gap(spec: &FormSpec, r: usize, expect_gap: bool, cfg: &SolverConfig) -> Result<InvariantReport> {
    let start = Instant::now();
    let mut rep = report("gap", spec, r, r);
    let lie = hom_space_lie(r, r, spec, Algebra::Osp, cfg)?;
    let group = hom_space_group(r, r, spec, cfg)?;
    let images = diagram_images(r, r, spec)?;
    let rank = rank_of_ops(&images);
    rep.dim_lie_invariants = Some(lie.dim());
    rep.dim_group_invariants = Some(group.dim());
    rep.diagram_image_rank = Some(rank);
    rep.images_contained = group.contains_all(&images) && lie.contains_all(&group.basis);
    let gap = lie.dim() > rank;
    rep.verdict = rep.images_contained && group.dim() == rank && gap == expect_gap;
    rep.millis = start.elapsed().as_millis();
    Ok(rep)
}

/// The critical degree m(2n+1)/2 at which the super Pfaffian first appears
/// in End(V^{⊗r}) for even m ≥ 2.
pub fn critical_degree(spec: &FormSpec) -> Option<usize> {
    (spec.m >= 2 && spec.m.is_multiple_of(2)).then(|| spec.m * (2 * spec.n + 1) / 2)
}

/// F𝕌_p^q(φ) = (φ ⊗ id^q) ∘ (id^p ⊗ F(U_q)).
pub fn f_transfer_u(p: usize, q_: usize, phi: &TensorOp, spec: &FormSpec) -> Result<TensorOp> {
    let cups = f_single(&BrauerDiagram::nested_cups(q_), spec)?;
    let right = tensor_ops(&TensorOp::identity(spec, p), &cups)?;
    let left = tensor_ops(phi, &TensorOp::identity(spec, q_))?;
    compose_ops(&left, &right)
}

/// F𝔸^r_q(ψ) = (id^r ⊗ F(A_q)) ∘ (ψ ⊗ id^q).
pub fn f_transfer_a(q_: usize, psi: &TensorOp, spec: &FormSpec) -> Result<TensorOp> {
    let r = psi.l.checked_sub(q_).ok_or_else(|| Error::ShapeMismatch("target too small".into()))?;
    let caps = f_single(&BrauerDiagram::nested_caps(q_), spec)?;
    let left = tensor_ops(&TensorOp::identity(spec, r), &caps)?;
    let right = tensor_ops(psi, &TensorOp::identity(spec, q_))?;
    compose_ops(&left, &right)
}

/// Commuting squares F∘𝕌 = F𝕌∘F and F∘𝔸 = F𝔸∘F on all basis diagrams, and
/// F𝔸 ∘ F𝕌 = id, F𝕌 ∘ F𝔸 = id on the computed invariant spaces.
pub fn transfer_op_check(p: usize, q_: usize, r: usize, spec: &FormSpec, cfg: &SolverConfig) -> Result<bool> {
    let delta = spec.d.clone();
    for x in enumerate_diagrams(p + q_, r) {
        let ux = transfer_u(p, q_, &BrauerElt::from_diagram(x.clone(), delta.clone()))?;
        let lhs = crate::tensorfunctor::f_diagram(&ux, spec)?;
        if lhs != f_transfer_u(p, q_, &f_single(&x, spec)?, spec)? {
            return Ok(false);
        }
    }
    for y in enumerate_diagrams(p, r + q_) {
        let ay = transfer_a(q_, &BrauerElt::from_diagram(y.clone(), delta.clone()))?;
        let lhs = crate::tensorfunctor::f_diagram(&ay, spec)?;
        if lhs != f_transfer_a(q_, &f_single(&y, spec)?, spec)? {
            return Ok(false);
        }
    }
    for phi in hom_space_group(p + q_, r, spec, cfg)?.basis {
        if f_transfer_a(q_, &f_transfer_u(p, q_, &phi, spec)?, spec)? != phi {
            return Ok(false);
        }
    }
    for psi in hom_space_group(p, r + q_, spec, cfg)?.basis {
        if f_transfer_u(p, q_, &f_transfer_a(q_, &psi, spec)?, spec)? != psi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Entry count of an operator space, for reporting.
pub fn ambient_size(spec: &FormSpec, k: usize, l: usize) -> u64 {
    (spec.dim() as u64).pow((k + l) as u32)
}

pub fn is_zero_space(space: &HomSpace) -> bool {
    space.basis.iter().all(|b| b.to_sparse_vec().iter().all(|(_, v)| v.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorfunctor::cap_op;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn gl_commutant_r2_matches_permutations() {
        let spec = FormSpec::new(1, 1);
        let lie = hom_space_lie(2, 2, &spec, Algebra::Gl, &cfg()).unwrap();
        let perms: Vec<_> = permutations(2).iter().map(|s| perm_action(s, &spec)).collect();
        assert_eq!(lie.dim(), rank_of_ops(&perms));
        assert!(lie.contains_all(&perms));
    }

    #[test]
    fn cap_is_invariant() {
        for spec in [FormSpec::new(1, 1), FormSpec::new(2, 1), FormSpec::new(0, 1)] {
            let lie = hom_space_lie(2, 0, &spec, Algebra::Osp, &cfg()).unwrap();
            assert!(lie.contains_all([&cap_op(&spec)]));
            assert_eq!(diagram_image_rank(2, 0, &spec, &cfg()).unwrap(), 1);
        }
    }

    #[test]
    fn odd_total_is_zero_for_group() {
        for spec in [FormSpec::new(1, 1), FormSpec::new(2, 1)] {
            for (k, l) in [(1, 0), (3, 0), (2, 1), (1, 2)] {
                assert_eq!(hom_space_group(k, l, &spec, &cfg()).unwrap().dim(), 0);
                assert_eq!(diagram_image_rank(k, l, &spec, &cfg()).unwrap(), 0);
            }
        }
    }

    #[test]
    fn pairings_independent_for_large_space() {
        assert_eq!(diagram_image_rank(4, 0, &FormSpec::new(3, 1), &cfg()).unwrap(), 3);
    }

    #[test]
    fn size_bound() {
        let small = SolverConfig { size_bound: 10 };
        assert!(matches!(
            hom_space_group(2, 2, &FormSpec::new(1, 1), &small),
            Err(Error::TooLarge { size: 81, bound: 10 })
        ));
    }

    #[test]
    fn fft_and_swb_small() {
        let spec = FormSpec::new(1, 1);
        let fft = verify_fft(&spec, 2, &cfg()).unwrap();
        assert_eq!(fft[0].dim_group_invariants, Some(1));
        assert!(fft.iter().all(|r| r.verdict));
        assert!(verify_swb(&spec, 2, &cfg()).unwrap().iter().all(|r| r.verdict));
        assert!(verify_swb(&FormSpec::new(0, 1), 2, &cfg()).unwrap().iter().all(|r| r.verdict));
    }

    #[test]
    fn transfer_small() {
        let spec = FormSpec::new(1, 1);
        assert!(transfer_op_check(1, 1, 1, &spec, &cfg()).unwrap());
        assert!(transfer_op_check(2, 0, 0, &spec, &cfg()).unwrap());
        assert!(transfer_op_check(0, 2, 0, &spec, &cfg()).unwrap());
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
    }
}
