//! Supermatrices over a supercommutative coefficient ring.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::invert_dense;
use crate::scalar::{Coefficient, Parity, Rational};

/// Parities of an ordered homogeneous basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityVector(pub Vec<Parity>);

impl ParityVector {
    /// m even slots followed by `odd` odd slots.
    pub fn graded(m: usize, odd: usize) -> Self {
        let mut v = vec![Parity::Even; m];
        v.extend(std::iter::repeat_n(Parity::Odd, odd));
        ParityVector(v)
    }

    /// The space V = C^{m|2n}.
    pub fn standard(m: usize, n: usize) -> Self {
        Self::graded(m, 2 * n)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Parity {
        self.0[i]
    }

    pub fn even_count(&self) -> usize {
        self.0.iter().filter(|p| !p.is_odd()).count()
    }

    /// True when all even slots precede all odd slots.
    pub fn is_block_ordered(&self) -> bool {
        let e = self.even_count();
        self.0.iter().enumerate().all(|(i, p)| p.is_odd() == (i >= e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityTag {
    Even,
    Odd,
    Inhomogeneous,
}

impl ParityTag {
    pub fn parity(self) -> Option<Parity> {
        match self {
            ParityTag::Even => Some(Parity::Even),
            ParityTag::Odd => Some(Parity::Odd),
            ParityTag::Inhomogeneous => None,
        }
    }

    pub fn from_parity(p: Parity) -> Self {
        match p {
            Parity::Even => ParityTag::Even,
            Parity::Odd => ParityTag::Odd,
        }
    }

    fn sum(self, other: ParityTag) -> ParityTag {
        match (self.parity(), other.parity()) {
            (Some(a), Some(b)) => ParityTag::from_parity(a + b),
            _ => ParityTag::Inhomogeneous,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct SuperMatrix<R: Coefficient> {
    ctx: R::Ctx,
    row_parity: ParityVector,
    col_parity: ParityVector,
    tag: ParityTag,
    entries: Vec<R>,
}

impl<R: Coefficient> SuperMatrix<R> {
    /// Build from rows, validating the parity pattern of a homogeneous tag.
    pub fn new(
        ctx: R::Ctx,
        row_parity: ParityVector,
        col_parity: ParityVector,
        tag: ParityTag,
        rows: Vec<Vec<R>>,
    ) -> Result<Self> {
        if rows.len() != row_parity.len() || rows.iter().any(|r| r.len() != col_parity.len()) {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{} entries",
                row_parity.len(),
                col_parity.len()
            )));
        }
        if rows.iter().flatten().any(|x| x.ctx() != ctx) {
            return Err(Error::ShapeMismatch("coefficient rings differ".into()));
        }
        let m = SuperMatrix {
            ctx,
            row_parity,
            col_parity,
            tag,
            entries: rows.into_iter().flatten().collect(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_fn(
        ctx: R::Ctx,
        row_parity: ParityVector,
        col_parity: ParityVector,
        tag: ParityTag,
        mut f: impl FnMut(usize, usize) -> R,
    ) -> Result<Self> {
        let rows = (0..row_parity.len())
            .map(|i| (0..col_parity.len()).map(|j| f(i, j)).collect())
            .collect();
        Self::new(ctx, row_parity, col_parity, tag, rows)
    }

    pub fn from_rational(
        ctx: R::Ctx,
        row_parity: ParityVector,
        col_parity: ParityVector,
        tag: ParityTag,
        rows: &[Vec<Rational>],
    ) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| R::from_rational(&ctx, x)).collect())
            .collect();
        Self::new(ctx, row_parity, col_parity, tag, rows)
    }

    pub fn zeros(ctx: R::Ctx, row_parity: ParityVector, col_parity: ParityVector, tag: ParityTag) -> Self {
        let n = row_parity.len() * col_parity.len();
        SuperMatrix {
            entries: vec![R::zero_in(&ctx); n],
            ctx,
            row_parity,
            col_parity,
            tag,
        }
    }

    pub fn identity(ctx: R::Ctx, parity: ParityVector) -> Self {
        let d = parity.len();
        let mut m = Self::zeros(ctx.clone(), parity.clone(), parity, ParityTag::Even);
        for i in 0..d {
            m.entries[i * d + i] = R::one_in(&ctx);
        }
        m
    }

    fn validate(&self) -> Result<()> {
        let Some(t) = self.tag.parity() else {
            return Ok(());
        };
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let p = self.row_parity.get(i) + self.col_parity.get(j) + t;
                if !self.get(i, j).has_parity(p) {
                    return Err(Error::ParityViolation {
                        row: i,
                        col: j,
                        expected: if t.is_odd() { "odd" } else { "even" },
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn nrows(&self) -> usize {
        self.row_parity.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_parity.len()
    }

    pub fn row_parity(&self) -> &ParityVector {
        &self.row_parity
    }

    pub fn col_parity(&self) -> &ParityVector {
        &self.col_parity
    }

    pub fn tag(&self) -> ParityTag {
        self.tag
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.ncols() + j]
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        self.entries.chunks(self.ncols().max(1)).map(|c| c.to_vec()).take(self.nrows()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.row_parity == self.col_parity
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.vanishes())
    }

    /// Entrywise map into another coefficient ring; the tag is revalidated.
    pub fn map_coeffs<S: Coefficient>(&self, ctx: S::Ctx, f: impl Fn(&R) -> S) -> Result<SuperMatrix<S>> {
        SuperMatrix::new(
            ctx,
            self.row_parity.clone(),
            self.col_parity.clone(),
            self.tag,
            self.rows().iter().map(|r| r.iter().map(&f).collect()).collect(),
        )
    }

    /// Degree-zero part of every entry.
    pub fn augmentation(&self) -> SuperMatrix<Rational> {
        SuperMatrix {
            ctx: (),
            row_parity: self.row_parity.clone(),
            col_parity: self.col_parity.clone(),
            tag: self.tag,
            entries: self.entries.iter().map(|x| x.augmentation()).collect(),
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.row_parity != other.row_parity || self.col_parity != other.col_parity {
            return Err(Error::ShapeMismatch("operands have different shapes".into()));
        }
        if self.ctx != other.ctx {
            return Err(Error::ShapeMismatch("coefficient rings differ".into()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self> {
        self.same_shape(other)?;
        let tag = if self.tag == other.tag {
            self.tag
        } else if self.is_zero() {
            other.tag
        } else if other.is_zero() {
            self.tag
        } else {
            ParityTag::Inhomogeneous
        };
        Ok(SuperMatrix {
            ctx: self.ctx.clone(),
            row_parity: self.row_parity.clone(),
            col_parity: self.col_parity.clone(),
            tag,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.plus(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.minus(b))
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|x| x.negate())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_entries(|x| x.scale(c))
    }

    fn map_entries(&self, f: impl Fn(&R) -> R) -> Self {
        SuperMatrix {
            entries: self.entries.iter().map(f).collect(),
            ..self.clone()
        }
    }

    /// λ ▷ M: left scalar action, twisting odd rows by the grade involution.
    pub fn lambda_left(lambda: &R, m: &Self) -> Result<Self> {
        if lambda.ctx() != m.ctx {
            return Err(Error::ShapeMismatch("coefficient rings differ".into()));
        }
        let twisted = lambda.grade_involution();
        let mut out = m.clone();
        for i in 0..m.nrows() {
            let l = if m.row_parity.get(i).is_odd() { &twisted } else { lambda };
            for j in 0..m.ncols() {
                out.entries[i * m.ncols() + j] = l.times(m.get(i, j));
            }
        }
        out.tag = lambda_tag(lambda, m.tag);
        Ok(out)
    }

    /// M ◁ λ: right scalar action, twisting odd columns.
    pub fn lambda_right(m: &Self, lambda: &R) -> Result<Self> {
        if lambda.ctx() != m.ctx {
            return Err(Error::ShapeMismatch("coefficient rings differ".into()));
        }
        let twisted = lambda.grade_involution();
        let mut out = m.clone();
        for j in 0..m.ncols() {
            let l = if m.col_parity.get(j).is_odd() { &twisted } else { lambda };
            for i in 0..m.nrows() {
                out.entries[i * m.ncols() + j] = m.get(i, j).times(l);
            }
        }
        out.tag = lambda_tag(lambda, m.tag);
        Ok(out)
    }

    /// Block transpose without signs.
    pub fn transpose_plain(&self) -> Self {
        let (r, c) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.get(i, j).clone());
            }
        }
        SuperMatrix {
            ctx: self.ctx.clone(),
            row_parity: self.col_parity.clone(),
            col_parity: self.row_parity.clone(),
            tag: self.tag,
            entries,
        }
    }
}

fn lambda_tag<R: Coefficient>(lambda: &R, tag: ParityTag) -> ParityTag {
    if lambda.vanishes() || lambda.has_parity(Parity::Even) {
        tag
    } else if lambda.has_parity(Parity::Odd) {
        tag.sum(ParityTag::Odd)
    } else {
        ParityTag::Inhomogeneous
    }
}

impl<R: Coefficient> fmt::Debug for SuperMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SuperMatrix[{:?}; rows {:?}; cols {:?}]", self.tag, self.row_parity.0, self.col_parity.0)?;
        for r in self.rows() {
            let cells: Vec<String> = r.iter().map(|x| x.to_text()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Ordinary matrix product.
pub fn sm_mul<R: Coefficient>(a: &SuperMatrix<R>, b: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    if a.col_parity != b.row_parity {
        return Err(Error::ShapeMismatch(format!(
            "cannot multiply {}x{} by {}x{} (or parities differ)",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if a.ctx != b.ctx {
        return Err(Error::ShapeMismatch("coefficient rings differ".into()));
    }
    let (r, k, c) = (a.nrows(), a.ncols(), b.ncols());
    let mut entries = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            let mut acc = R::zero_in(&a.ctx);
            for t in 0..k {
                let x = a.get(i, t);
                if x.vanishes() {
                    continue;
                }
                acc = acc.plus(&x.times(b.get(t, j)));
            }
            entries.push(acc);
        }
    }
    Ok(SuperMatrix {
        ctx: a.ctx.clone(),
        row_parity: a.row_parity.clone(),
        col_parity: b.col_parity.clone(),
        tag: a.tag.sum(b.tag),
        entries,
    })
}

/// (A^st)_{ij} = (−1)^{[j][a_ji]} a_ji.
pub fn supertranspose<R: Coefficient>(a: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    let t = a.tag.parity().ok_or(Error::InhomogeneousInput)?;
    let mut out = a.transpose_plain();
    let c = out.ncols();
    for i in 0..out.nrows() {
        for j in 0..c {
            let rj = a.row_parity.get(j);
            let entry_parity = rj + a.col_parity.get(i) + t;
            if rj.sign_with(entry_parity) < 0 {
                out.entries[i * c + j] = out.entries[i * c + j].negate();
            }
        }
    }
    Ok(out)
}

/// A† = η⁻¹ A^st η.
pub fn dagger<R: Coefficient>(a: &SuperMatrix<R>, eta: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("adjoint needs a square matrix".into()));
    }
    let eta_inv = invert(eta)?;
    sm_mul(&sm_mul(&eta_inv, &supertranspose(a)?)?, eta)
}

/// (A⁺, A⁻) = ((A + A†)/2, (A − A†)/2).
pub fn split_pm<R: Coefficient>(
    a: &SuperMatrix<R>,
    eta: &SuperMatrix<R>,
) -> Result<(SuperMatrix<R>, SuperMatrix<R>)> {
    require_even(a)?;
    let d = dagger(a, eta)?;
    let half = Rational::new(1.into(), 2.into());
    let plus = a.add(&d)?.scale(&half);
    let minus = a.sub(&d)?.scale(&half);
    Ok((retag(plus, ParityTag::Even), retag(minus, ParityTag::Even)))
}

fn retag<R: Coefficient>(mut m: SuperMatrix<R>, tag: ParityTag) -> SuperMatrix<R> {
    m.tag = tag;
    m
}

fn require_even<R: Coefficient>(a: &SuperMatrix<R>) -> Result<()> {
    match a.tag {
        ParityTag::Even if a.is_square() => Ok(()),
        ParityTag::Even => Err(Error::ShapeMismatch("square matrix required".into())),
        _ => Err(Error::InhomogeneousInput),
    }
}

/// ω(A) = A†A.
pub fn omega<R: Coefficient>(a: &SuperMatrix<R>, eta: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    require_even(a)?;
    sm_mul(&dagger(a, eta)?, a)
}

/// ω_s(A) = η A†A = A^st η A.
pub fn omega_s<R: Coefficient>(a: &SuperMatrix<R>, eta: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    require_even(a)?;
    sm_mul(eta, &omega(a, eta)?)
}

/// Inverse of a matrix whose degree-zero part is invertible, by the
/// terminating series Σ (−A₀⁻¹N)^k A₀⁻¹ with A = A₀ + N.
pub fn invert<R: Coefficient>(a: &SuperMatrix<R>) -> Result<SuperMatrix<R>> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch("inverse needs a square matrix".into()));
    }
    let a0 = a.augmentation();
    let inv0 = invert_dense(&a0.rows())?;
    let ctx = a.ctx.clone();
    let b0 = SuperMatrix {
        ctx: ctx.clone(),
        row_parity: a.col_parity.clone(),
        col_parity: a.row_parity.clone(),
        tag: a.tag,
        entries: inv0.iter().flatten().map(|x| R::from_rational(&ctx, x)).collect(),
    };
    let a0_lifted = SuperMatrix {
        entries: a0.entries.iter().map(|x| R::from_rational(&ctx, x)).collect(),
        ctx: ctx.clone(),
        row_parity: a.row_parity.clone(),
        col_parity: a.col_parity.clone(),
        tag: a.tag,
    };
    let nil = a.sub(&a0_lifted)?;
    let step = sm_mul(&b0, &nil)?.neg();
    let mut term = b0.clone();
    let mut total = b0;
    for _ in 0..R::nilpotency_bound(&ctx) {
        term = sm_mul(&step, &term)?;
        if term.is_zero() {
            break;
        }
        total = total.add(&term)?;
    }
    total.tag = a.tag;
    Ok(total)
}

/// J = diag(σ, …, σ), σ = [[0, −1], [1, 0]], as a plain 2n×2n array.
pub fn j_entry(i: usize, j: usize) -> i64 {
    if i / 2 != j / 2 {
        0
    } else if i.is_multiple_of(2) && j % 2 == 1 {
        -1
    } else if i % 2 == 1 && j.is_multiple_of(2) {
        1
    } else {
        0
    }
}

/// η = diag(I_m, J), the Gram matrix of the standard form on C^{m|2n}.
pub fn form_matrix<R: Coefficient>(ctx: R::Ctx, m: usize, n: usize) -> SuperMatrix<R> {
    let p = ParityVector::standard(m, n);
    SuperMatrix::from_fn(ctx.clone(), p.clone(), p, ParityTag::Even, |i, j| {
        let v = if i < m || j < m {
            i64::from(i == j)
        } else {
            j_entry(i - m, j - m)
        };
        R::from_rational(&ctx, &Rational::from_integer(v.into()))
    })
    .expect("form matrix is even")
}

type Block<R> = Vec<Vec<R>>;

fn blocks<R: Coefficient>(a: &SuperMatrix<R>) -> Option<(Block<R>, Block<R>, Block<R>, Block<R>)> {
    if !a.is_square() || !a.row_parity.is_block_ordered() || a.tag != ParityTag::Even {
        return None;
    }
    let m = a.row_parity.even_count();
    let d = a.nrows();
    if !(d - m).is_multiple_of(2) {
        return None;
    }
    let cut = |r0: usize, r1: usize, c0: usize, c1: usize| -> Block<R> {
        (r0..r1).map(|i| (c0..c1).map(|j| a.get(i, j).clone()).collect()).collect()
    };
    Some((cut(0, m, 0, m), cut(0, m, m, d), cut(m, d, 0, m), cut(m, d, m, d)))
}

fn tr<R: Clone>(b: &Block<R>, rows: usize, cols: usize) -> Block<R> {
    (0..cols).map(|j| (0..rows).map(|i| b[i][j].clone()).collect()).collect()
}

/// J·B (`left`) or B·J on plain arrays.
fn apply_j<R: Coefficient>(b: &Block<R>, rows: usize, cols: usize, left: bool) -> Block<R> {
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    // σ has a single nonzero per row/column
                    let (k, s) = if left {
                        let k = i ^ 1;
                        (k, j_entry(i, k))
                    } else {
                        let k = j ^ 1;
                        (k, j_entry(k, j))
                    };
                    let x = if left { &b[k][j] } else { &b[i][k] };
                    if s < 0 {
                        x.negate()
                    } else {
                        x.clone()
                    }
                })
                .collect()
        })
        .collect()
}

fn neg_block<R: Coefficient>(b: &Block<R>) -> Block<R> {
    b.iter().map(|r| r.iter().map(|x| x.negate()).collect()).collect()
}

/// Self-adjointness in block form: A₁₁ᵗ = A₁₁, A₂₂ᵗ = −JA₂₂J, A₂₁ = −JA₁₂ᵗ.
pub fn in_s_plus<R: Coefficient>(a: &SuperMatrix<R>) -> bool {
    let Some((a11, a12, a21, a22)) = blocks(a) else {
        return false;
    };
    let m = a11.len();
    let o = a22.len();
    let c1 = tr(&a11, m, m) == a11;
    let c2 = tr(&a22, o, o) == neg_block(&apply_j(&apply_j(&a22, o, o, true), o, o, false));
    let c3 = a21 == neg_block(&apply_j(&tr(&a12, m, o), o, m, true));
    c1 && c2 && c3
}

/// B₁₁ᵗ = B₁₁, B₂₂ᵗ = −B₂₂, B₂₁ = B₁₂ᵗ.
pub fn in_s<R: Coefficient>(b: &SuperMatrix<R>) -> bool {
    let Some((b11, b12, b21, b22)) = blocks(b) else {
        return false;
    };
    let m = b11.len();
    let o = b22.len();
    tr(&b11, m, m) == b11 && tr(&b22, o, o) == neg_block(&b22) && b21 == tr(&b12, m, o)
}
