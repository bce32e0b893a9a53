//! Polynomial functions on V ⊗ ℂ^{p|q}: the graded-symmetric algebra on the
//! coordinates x_{a,j}, the osp action by superderivations, invariant
//! subspaces of fixed degree, and the super Pfaffian.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::GrassmannElt;
use crate::invariantsolver::{permutations, SolverConfig};
use crate::linalg::{Echelon, SparseVec};
use crate::ospgeom::{osp_basis, FormSpec, SuperVector};
use crate::scalar::{fmt_rational, q, Parity, Rational};
use crate::superlinalg::SuperMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Even(usize),
    Odd(usize),
}

/// Variable layout of S(V ⊗ ℂ^{p|q}). Columns j < p are even. Odd variables
/// are ordered by (j, a), which fixes every Koszul sign.
#[derive(Debug)]
pub struct PolyRing {
    pub spec: FormSpec,
    pub p: usize,
    pub q: usize,
    even_vars: Vec<(usize, usize)>,
    odd_vars: Vec<(usize, usize)>,
    slots: HashMap<(usize, usize), Var>,
}

impl PolyRing {
    pub fn new(spec: &FormSpec, p: usize, q_: usize) -> Arc<Self> {
        let mut even_vars = Vec::new();
        let mut odd_vars = Vec::new();
        let mut slots = HashMap::new();
        for j in 0..p + q_ {
            for a in 0..spec.dim() {
                let odd = (spec.slot_parity(a).bit() + usize::from(j >= p)) % 2 == 1;
                if odd {
                    slots.insert((a, j), Var::Odd(odd_vars.len()));
                    odd_vars.push((a, j));
                } else {
                    slots.insert((a, j), Var::Even(even_vars.len()));
                    even_vars.push((a, j));
                }
            }
        }
        Arc::new(PolyRing {
            spec: spec.clone(),
            p,
            q: q_,
            even_vars,
            odd_vars,
            slots,
        })
    }

    pub fn columns(&self) -> usize {
        self.p + self.q
    }

    pub fn column_parity(&self, j: usize) -> Parity {
        Parity::from_bit(usize::from(j >= self.p))
    }

    pub fn num_even(&self) -> usize {
        self.even_vars.len()
    }

    pub fn num_odd(&self) -> usize {
        self.odd_vars.len()
    }

    fn same_as(&self, other: &PolyRing) -> bool {
        (self.spec.m, self.spec.n, self.p, self.q) == (other.spec.m, other.spec.n, other.p, other.q)
    }

    /// Weight of a slot under the diagonal torus of sp(2n).
    fn slot_weight(&self, a: usize, w: &mut [i64]) {
        let m = self.spec.m;
        if a >= m {
            w[(a - m) / 2] += if (a - m).is_multiple_of(2) { 1 } else { -1 };
        }
    }

    /// Number of monomials of the given degree.
    pub fn degree_size(&self, degree: usize) -> u64 {
        let (ne, no) = (self.num_even() as u64, self.num_odd() as u64);
        (0..=degree.min(no as usize) as u64)
            .map(|k| binom(no, k).saturating_mul(multichoose(ne, degree as u64 - k)))
            .fold(0u64, |a, b| a.saturating_add(b))
    }

    /// All monomials of the given degree in a deterministic order.
    pub fn monomials(&self, degree: usize) -> Vec<Monomial> {
        let ne = self.num_even();
        let no = self.num_odd();
        let mut out = Vec::new();
        for k in 0..=degree.min(no) {
            let subsets = subsets_of(no, k);
            let exps = compositions(degree - k, ne);
            for odd in &subsets {
                for even in &exps {
                    out.push(Monomial {
                        even: even.clone(),
                        odd: odd.clone(),
                    });
                }
            }
        }
        out
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn multichoose(n: u64, k: u64) -> u64 {
    if n == 0 {
        return u64::from(k == 0);
    }
    binom(n + k - 1, k)
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<u16>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u16);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exponent vectors of length `parts` summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Even exponents and a sorted set of odd variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub even: Vec<u32>,
    pub odd: Vec<u16>,
}

impl Monomial {
    fn one(ring: &PolyRing) -> Self {
        Monomial {
            even: vec![0; ring.num_even()],
            odd: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.even.iter().sum::<u32>() as usize + self.odd.len()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.len())
    }

    /// Product with the sign from sorting the odd factors; None if an odd
    /// variable repeats.
    fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let even = self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect();
        let mut odd = Vec::with_capacity(self.odd.len() + other.odd.len());
        let (mut i, mut j) = (0, 0);
        let mut negative = false;
        while i < self.odd.len() || j < other.odd.len() {
            if j == other.odd.len() || (i < self.odd.len() && self.odd[i] < other.odd[j]) {
                odd.push(self.odd[i]);
                i += 1;
            } else if i == self.odd.len() || other.odd[j] < self.odd[i] {
                // other.odd[j] passes the remaining factors of self
                if (self.odd.len() - i) % 2 == 1 {
                    negative = !negative;
                }
                odd.push(other.odd[j]);
                j += 1;
            } else {
                return None;
            }
        }
        Some((Monomial { even, odd }, negative))
    }

    /// Number of factors x_{0,j}, counted with multiplicity.
    fn zero_slot_count(&self, ring: &PolyRing) -> usize {
        let e: u32 = self
            .even
            .iter()
            .enumerate()
            .filter(|(i, _)| ring.even_vars[*i].0 == 0)
            .map(|(_, e)| *e)
            .sum();
        e as usize + self.odd.iter().filter(|&&i| ring.odd_vars[i as usize].0 == 0).count()
    }

    fn weight(&self, ring: &PolyRing) -> Vec<i64> {
        let mut w = vec![0; ring.spec.n];
        for (i, &e) in self.even.iter().enumerate() {
            for _ in 0..e {
                ring.slot_weight(ring.even_vars[i].0, &mut w);
            }
        }
        for &i in &self.odd {
            ring.slot_weight(ring.odd_vars[i as usize].0, &mut w);
        }
        w
    }
}

#[derive(Clone)]
pub struct SuperPoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for SuperPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.terms == other.terms
    }
}

impl fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl SuperPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        SuperPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Rational) -> Self {
        let mut f = Self::zero(ring);
        f.add_term(Monomial::one(ring), c);
        f
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn from_monomial(ring: &Arc<PolyRing>, mono: Monomial, c: Rational) -> Self {
        let mut f = Self::zero(ring);
        f.add_term(mono, c);
        f
    }

    /// The coordinate function x_{a,j}.
    pub fn variable(ring: &Arc<PolyRing>, a: usize, j: usize) -> Self {
        let mut mono = Monomial::one(ring);
        match ring.slots[&(a, j)] {
            Var::Even(i) => mono.even[i] = 1,
            Var::Odd(i) => mono.odd.push(i as u16),
        }
        Self::from_monomial(ring, mono, Rational::one())
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&mono) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, sum);
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::ParameterMismatch("polynomials live in different rings".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.ring);
        for (mono, x) in &self.terms {
            out.add_term(mono.clone(), x * c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&q(-1))
    }

    /// Parity if every monomial has the same parity (zero counts as even).
    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(Monomial::parity);
        let first = ps.next().unwrap_or(Parity::Even);
        ps.all(|p| p == first).then_some(first)
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut ds = self.terms.keys().map(Monomial::degree);
        let first = ds.next().unwrap_or(0);
        ds.all(|d| d == first).then_some(first)
    }

    /// The part free of odd variables.
    pub fn even_part(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (mono, c) in &self.terms {
            if mono.odd.is_empty() {
                out.add_term(mono.clone(), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..k {
            out = sp_mul(&out, self).expect("same ring");
        }
        out
    }

    pub fn to_sparse_vec(&self, index: &HashMap<Monomial, usize>) -> Option<SparseVec> {
        self.terms
            .iter()
            .map(|(mono, c)| index.get(mono).map(|&i| (i, c.clone())))
            .collect()
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_rational(c))?;
            for (i, &e) in mono.even.iter().enumerate() {
                let (a, j) = self.ring.even_vars[i];
                match e {
                    0 => {}
                    1 => write!(f, "*x{a}_{j}")?,
                    _ => write!(f, "*x{a}_{j}^{e}")?,
                }
            }
            for &i in &mono.odd {
                let (a, j) = self.ring.odd_vars[i as usize];
                write!(f, "*x{a}_{j}")?;
            }
        }
        Ok(())
    }
}

/// Graded-commutative product.
pub fn sp_mul(f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
    f.check_ring(g)?;
    let mut out = SuperPoly::zero(&f.ring);
    for (a, x) in &f.terms {
        for (b, y) in &g.terms {
            if let Some((mono, negative)) = a.mul(b) {
                let c = x * y;
                out.add_term(mono, if negative { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Images X·x_{a,j} of every variable, indexed by even then odd variables.
/// The coordinates transform contragrediently:
/// X·x_{a,j} = −(−1)^{[X]([a]+1)} Σ_b X_{ab} x_{b,j}, the same in every column.
fn variable_images(ring: &Arc<PolyRing>, x: &SuperMatrix<Rational>, px: Parity) -> (Vec<SuperPoly>, Vec<SuperPoly>) {
    let image = |(a, j): (usize, usize)| {
        let pv = ring.spec.slot_parity(a) + Parity::Odd;
        let s = if px.sign_with(pv) < 0 { q(1) } else { q(-1) };
        let mut out = SuperPoly::zero(ring);
        for b in 0..ring.spec.dim() {
            let c = x.get(a, b);
            if !c.is_zero() {
                out = out.add(&SuperPoly::variable(ring, b, j).scale(&(c * &s))).unwrap();
            }
        }
        out
    };
    (
        ring.even_vars.iter().map(|&s| image(s)).collect(),
        ring.odd_vars.iter().map(|&s| image(s)).collect(),
    )
}

fn derive_monomial(
    ring: &Arc<PolyRing>,
    mono: &Monomial,
    px: Parity,
    even_img: &[SuperPoly],
    odd_img: &[SuperPoly],
) -> SuperPoly {
    let mut out = SuperPoly::zero(ring);
    // even variables sit in front, so no Koszul sign
    for (i, &e) in mono.even.iter().enumerate() {
        if e == 0 || even_img[i].is_zero() {
            continue;
        }
        let mut rest = mono.clone();
        rest.even[i] -= 1;
        let rest = SuperPoly::from_monomial(ring, rest, q(e as i64));
        out = out.add(&sp_mul(&even_img[i], &rest).unwrap()).unwrap();
    }
    for (t, &v) in mono.odd.iter().enumerate() {
        if odd_img[v as usize].is_zero() {
            continue;
        }
        let prefix = Monomial {
            even: mono.even.clone(),
            odd: mono.odd[..t].to_vec(),
        };
        let suffix = Monomial {
            even: vec![0; ring.num_even()],
            odd: mono.odd[t + 1..].to_vec(),
        };
        let sign = q(px.sign_with(Parity::from_bit(t)));
        let left = sp_mul(&SuperPoly::from_monomial(ring, prefix, sign), &odd_img[v as usize]).unwrap();
        out = out
            .add(&sp_mul(&left, &SuperPoly::from_monomial(ring, suffix, Rational::one())).unwrap())
            .unwrap();
    }
    out
}

/// The superderivation extending the action of X on the coordinates.
pub fn sp_derivation_action(x: &SuperMatrix<Rational>, f: &SuperPoly) -> Result<SuperPoly> {
    let px = x.tag().parity().ok_or(Error::InhomogeneousInput)?;
    let ring = &f.ring;
    if x.nrows() != ring.spec.dim() || x.ncols() != ring.spec.dim() {
        return Err(Error::ShapeMismatch("operator does not act on this space".into()));
    }
    let (even_img, odd_img) = variable_images(ring, x, px);
    let mut out = SuperPoly::zero(ring);
    for (mono, c) in &f.terms {
        out = out.add(&derive_monomial(ring, mono, px, &even_img, &odd_img).scale(c))?;
    }
    Ok(out)
}

/// The O(m) reflection diag(−1, 1, …, 1) acting by x_{0,j} ↦ −x_{0,j}.
pub fn sp_reflect(f: &SuperPoly) -> SuperPoly {
    let mut out = SuperPoly::zero(&f.ring);
    for (mono, c) in &f.terms {
        let c = if mono.zero_slot_count(&f.ring) % 2 == 1 { -c.clone() } else { c.clone() };
        out.add_term(mono.clone(), c);
    }
    out
}

/// How the reflection constrains an invariant slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectionMode {
    /// Lie algebra invariants only.
    Ignore,
    /// g·f = f.
    Invariant,
    /// g·f = det(g) f = −f.
    Det,
}

/// Basis of the osp-invariants of the given degree, optionally refined by
/// the reflection. Only torus-weight-zero monomials can occur.
pub fn invariant_subspace(
    degree: usize,
    ring: &Arc<PolyRing>,
    reflection: ReflectionMode,
    cfg: &SolverConfig,
) -> Result<Vec<SuperPoly>> {
    let size = ring.degree_size(degree);
    if size > cfg.size_bound {
        return Err(Error::TooLarge {
            size,
            bound: cfg.size_bound,
        });
    }
    let zero_weight = vec![0i64; ring.spec.n];
    let want = match reflection {
        ReflectionMode::Ignore => None,
        _ if ring.spec.m == 0 => None,
        ReflectionMode::Invariant => Some(0),
        ReflectionMode::Det => Some(1),
    };
    let unknowns: Vec<Monomial> = ring
        .monomials(degree)
        .into_iter()
        .filter(|mono| mono.weight(ring) == zero_weight)
        .filter(|mono| want.is_none_or(|w| mono.zero_slot_count(ring) % 2 == w))
        .collect();
    if unknowns.is_empty() {
        return Ok(Vec::new());
    }
    let basis = osp_basis(&ring.spec);
    let gens: Vec<&SuperMatrix<Rational>> = basis.all().collect();
    let blocks: Vec<Vec<SparseVec>> = gens
        .par_iter()
        .map(|x| {
            let px = x.tag().parity().expect("basis elements are homogeneous");
            let (even_img, odd_img) = variable_images(ring, x, px);
            let mut eqs: BTreeMap<Monomial, SparseVec> = BTreeMap::new();
            for (u, mono) in unknowns.iter().enumerate() {
                for (out, c) in derive_monomial(ring, mono, px, &even_img, &odd_img).terms {
                    eqs.entry(out).or_default().push((u, c));
                }
            }
            eqs.into_values().collect()
        })
        .collect();
    let mut ech = Echelon::new(unknowns.len());
    for row in blocks.into_iter().flatten() {
        if ech.rank() == unknowns.len() {
            break;
        }
        ech.insert_rational(&row);
    }
    let out: Vec<SuperPoly> = ech
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut f = SuperPoly::zero(ring);
            for (u, c) in v {
                f.add_term(unknowns[u].clone(), c);
            }
            f
        })
        .collect();
    for f in &out {
        for x in &gens {
            if !sp_derivation_action(x, f)?.is_zero() {
                return Err(Error::PostCheck("invariant not annihilated by a derivation".into()));
            }
        }
    }
    Ok(out)
}

/// f_{ij} = Σ (−1)^{[a]([a]+[i])} η_{ab} x_{a,i} x_{b,j}, so that
/// f_{ij}(u) = (u_i, u_j).
pub fn quadratic(ring: &Arc<PolyRing>, i: usize, j: usize) -> SuperPoly {
    let spec = &ring.spec;
    let pi = ring.column_parity(i);
    let mut out = SuperPoly::zero(ring);
    for a in 0..spec.dim() {
        for b in 0..spec.dim() {
            let e = spec.eta_entry(a, b);
            if e == 0 {
                continue;
            }
            let pa = spec.slot_parity(a);
            let c = q(e * pa.sign_with(pa + pi));
            let term = sp_mul(&SuperPoly::variable(ring, a, i), &SuperPoly::variable(ring, b, j)).unwrap();
            out = out.add(&term.scale(&c)).unwrap();
        }
    }
    out
}

/// The quadratics f_{ij} for i ≤ j.
pub fn quadratic_invariants(ring: &Arc<PolyRing>) -> Vec<SuperPoly> {
    let c = ring.columns();
    (0..c).flat_map(|i| (i..c).map(move |j| (i, j))).map(|(i, j)| quadratic(ring, i, j)).collect()
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rank_of_polys(polys: &[SuperPoly]) -> usize {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut rows = Vec::new();
    for f in polys {
        let mut row = Vec::new();
        for (mono, c) in f.terms() {
            let next = index.len();
            let i = *index.entry(mono.clone()).or_insert(next);
            row.push((i, c.clone()));
        }
        row.sort_by_key(|(i, _)| *i);
        rows.push(row);
    }
    crate::linalg::rank(index.len(), rows)
}

/// Rank of the degree-2d products of the quadratics.
pub fn quadratic_monomial_rank(ring: &Arc<PolyRing>, d: usize) -> usize {
    let quads = quadratic_invariants(ring);
    let products: Vec<SuperPoly> = multisets(quads.len(), d)
        .par_iter()
        .map(|ms| ms.iter().fold(SuperPoly::one(ring), |acc, &i| sp_mul(&acc, &quads[i]).unwrap()))
        .collect();
    rank_of_polys(&products)
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyFftReport {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub degree: usize,
    pub dim_invariants: usize,
    pub quadratic_rank: usize,
    pub verdict: bool,
    pub millis: u128,
}

/// Invariant polynomials of even degree are polynomials in the quadratics.
pub fn verify_poly_fft(spec: &FormSpec, p: usize, q_: usize, deg_max: usize, cfg: &SolverConfig) -> Result<Vec<PolyFftReport>> {
    let ring = PolyRing::new(spec, p, q_);
    (1..=deg_max / 2)
        .map(|d| {
            let start = std::time::Instant::now();
            let dim = invariant_subspace(2 * d, &ring, ReflectionMode::Invariant, cfg)?.len();
            let rank = quadratic_monomial_rank(&ring, d);
            Ok(PolyFftReport {
                m: spec.m,
                n: spec.n,
                p,
                q: q_,
                degree: 2 * d,
                dim_invariants: dim,
                quadratic_rank: rank,
                verdict: dim == rank,
                millis: start.elapsed().as_millis(),
            })
        })
        .collect()
}

/// Substitutes entry a of u_j for x_{a,j}. Every u_j must have the parity of
/// column j, so that the point is even.
pub fn sp_evaluate(f: &SuperPoly, point: &[SuperVector<GrassmannElt>]) -> Result<GrassmannElt> {
    let ring = &f.ring;
    if point.len() != ring.columns() {
        return Err(Error::ShapeMismatch(format!("expected {} vectors, got {}", ring.columns(), point.len())));
    }
    for (j, u) in point.iter().enumerate() {
        if u.parity != ring.column_parity(j) || u.coords.len() != ring.spec.dim() {
            return Err(Error::NotEvenPoint(j));
        }
        for (a, c) in u.coords.iter().enumerate() {
            if !c.is_zero() && c.parity() != Some(ring.spec.slot_parity(a) + ring.column_parity(j)) {
                return Err(Error::NotEvenPoint(j));
            }
        }
    }
    let bound = point.iter().flat_map(|u| u.coords.iter()).map(|c| c.degree_bound()).max().unwrap_or(0);
    let value = |(a, j): (usize, usize)| point[j].coords[a].promote(bound);
    let even_vals: Vec<GrassmannElt> = ring.even_vars.iter().map(|&s| value(s)).collect::<Result<_>>()?;
    let odd_vals: Vec<GrassmannElt> = ring.odd_vars.iter().map(|&s| value(s)).collect::<Result<_>>()?;
    let mut total = GrassmannElt::zero(bound);
    for (mono, c) in &f.terms {
        let mut t = GrassmannElt::scalar(bound, c.clone());
        for (i, &e) in mono.even.iter().enumerate() {
            if e > 0 {
                t = t.try_mul(&even_vals[i].pow(e))?;
            }
        }
        for &i in &mono.odd {
            t = t.try_mul(&odd_vals[i as usize])?;
        }
        total = total.try_add(&t)?;
    }
    Ok(total)
}

/// Δ = det(x_{a,j}) over 0 ≤ a, j < m, in the ring with p = m, q = 0.
pub fn delta_poly(ring: &Arc<PolyRing>) -> SuperPoly {
    let m = ring.spec.m;
    let mut out = SuperPoly::zero(ring);
    for sigma in permutations(m) {
        let inversions = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).filter(|&(i, j)| sigma[i] > sigma[j]).count();
        let mut term = SuperPoly::constant(ring, q(if inversions % 2 == 0 { 1 } else { -1 }));
        for (j, &a) in sigma.iter().enumerate() {
            term = sp_mul(&term, &SuperPoly::variable(ring, a, j)).unwrap();
        }
        out = out.add(&term).unwrap();
    }
    out
}

/// det(XᵗX) for the even block X, the leading term of Ω².
pub fn gram_det_poly(ring: &Arc<PolyRing>) -> SuperPoly {
    let m = ring.spec.m;
    let entry = |i: usize, j: usize| {
        (0..m).fold(SuperPoly::zero(ring), |acc, a| {
            acc.add(&sp_mul(&SuperPoly::variable(ring, a, i), &SuperPoly::variable(ring, a, j)).unwrap()).unwrap()
        })
    };
    let mut out = SuperPoly::zero(ring);
    for sigma in permutations(m) {
        let inversions = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).filter(|&(i, j)| sigma[i] > sigma[j]).count();
        let mut term = SuperPoly::constant(ring, q(if inversions % 2 == 0 { 1 } else { -1 }));
        for (i, &s) in sigma.iter().enumerate() {
            term = sp_mul(&term, &entry(i, s)).unwrap();
        }
        out = out.add(&term).unwrap();
    }
    out
}

#[derive(Debug, Clone)]
pub struct Pfaffian {
    pub omega: SuperPoly,
    pub degree: usize,
    /// Dimension of the osp-invariants of this degree on which the reflection acts by det.
    pub slice_dim: usize,
}

/// An osp-invariant of degree m(2n+1) on which the reflection acts by −1 and
/// whose odd-free part is Δ^{2n+1}.
pub fn super_pfaffian(spec: &FormSpec, cfg: &SolverConfig) -> Result<Pfaffian> {
    if spec.m == 0 {
        return Err(Error::ParameterMismatch("the super Pfaffian needs m ≥ 1".into()));
    }
    let ring = PolyRing::new(spec, spec.m, 0);
    let degree = spec.m * (2 * spec.n + 1);
    let slice = invariant_subspace(degree, &ring, ReflectionMode::Det, cfg)?;
    let target = delta_poly(&ring).pow((2 * spec.n + 1) as u32);
    // unknowns c_0..c_{s-1}, t: even part of Σ c_i b_i equals t·Δ^{2n+1}
    let s = slice.len();
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    let mut push = |mono: &Monomial, col: usize, c: Rational, index: &mut HashMap<Monomial, usize>| {
        let next = index.len();
        let r = *index.entry(mono.clone()).or_insert(next);
        rows.entry(r).or_default().push((col, c));
    };
    for (i, b) in slice.iter().enumerate() {
        for (mono, c) in b.even_part().terms() {
            push(mono, i, c.clone(), &mut index);
        }
    }
    for (mono, c) in target.terms() {
        push(mono, s, -c.clone(), &mut index);
    }
    let null = crate::linalg::nullspace(s + 1, rows.into_values());
    let sol = null
        .into_iter()
        .find_map(|v| {
            let t = v.iter().find(|(i, _)| *i == s).map(|(_, t)| t.clone())?;
            Some(v.into_iter().filter(|(i, _)| *i < s).map(|(i, c)| (i, c / &t)).collect::<Vec<_>>())
        })
        .ok_or(Error::NoPfaffianFound(s))?;
    let mut omega = SuperPoly::zero(&ring);
    for (i, c) in sol {
        omega = omega.add(&slice[i].scale(&c))?;
    }
    Ok(Pfaffian {
        omega,
        degree,
        slice_dim: s,
    })
}

/// True iff the odd-free part of Ω is ±Δ^{2n+1}.
pub fn pfaffian_leading_check(omega: &SuperPoly, spec: &FormSpec) -> bool {
    let ring = omega.ring();
    if ring.spec.m != spec.m || ring.spec.n != spec.n || ring.p != spec.m || ring.q != 0 {
        return false;
    }
    let lead = delta_poly(ring).pow((2 * spec.n + 1) as u32);
    let even = omega.even_part();
    even == lead || even == lead.neg()
}

#[derive(Debug, Clone, Serialize)]
pub struct PfaffianReport {
    pub m: usize,
    pub n: usize,
    pub degree: usize,
    pub slice_dim: usize,
    pub omega: String,
    pub num_terms: usize,
    pub leading_term_ok: bool,
    pub reflection_det: bool,
    pub square_invariant: bool,
    pub square_leading_ok: bool,
    pub verdict: bool,
    pub millis: u128,
}

/// Computes Ω and checks its defining properties.
pub fn pfaffian_report(spec: &FormSpec, cfg: &SolverConfig) -> Result<PfaffianReport> {
    let start = std::time::Instant::now();
    let pf = super_pfaffian(spec, cfg)?;
    let omega = &pf.omega;
    let ring = omega.ring();
    let leading_term_ok = pfaffian_leading_check(omega, spec);
    let reflection_det = sp_reflect(omega) == omega.neg();
    let square = sp_mul(omega, omega)?;
    let basis = osp_basis(spec);
    let mut square_invariant = sp_reflect(&square) == square;
    for x in basis.all() {
        square_invariant &= sp_derivation_action(x, &square)?.is_zero();
    }
    let lead2 = gram_det_poly(ring).pow((2 * spec.n + 1) as u32);
    let even2 = square.even_part();
    let square_leading_ok = even2 == lead2 || even2 == lead2.neg();
    Ok(PfaffianReport {
        m: spec.m,
        n: spec.n,
        degree: pf.degree,
        slice_dim: pf.slice_dim,
        omega: omega.to_string(),
        num_terms: omega.num_terms(),
        leading_term_ok,
        reflection_det,
        square_invariant,
        square_leading_ok,
        verdict: pf.slice_dim == 1 && leading_term_ok && reflection_det && square_invariant && square_leading_ok,
        millis: start.elapsed().as_millis(),
    })
}
