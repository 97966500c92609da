//! ∧²H, its quotient by ω, Sym²H, the symplectic contraction and the images of the
//! ⟨V,κ⟩ / ⟨κ,V⟩ generators, with exact kernel and span dimensions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{require_genus, Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg::{bareiss_rank, DenseEchelon};
use crate::scalar::{Fp, Scalar};
use crate::Rational;

/// Index of `e_i ∧ e_j` (`i < j`, 0-based over `n = 2g`) in the wedge basis.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Index of `e_i ∨ e_j` (`i ≤ j`) in the symmetric basis.
fn sym_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * (2 * n - i + 1) / 2 + (j - i)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// ω on basis vectors `e_i, e_j` (0-based, ordered a_1, b_1, ...).
fn omega_basis(i: usize, j: usize) -> i64 {
    if i / 2 != j / 2 {
        0
    } else if i % 2 == 0 && j % 2 == 1 {
        1
    } else if i % 2 == 1 && j % 2 == 0 {
        -1
    } else {
        0
    }
}

/// Element of ∧²ℚ^{2g} in the basis `e_i ∧ e_j`, `i < j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Wedge2 {
    genus: usize,
    coords: Vec<Rational>,
}

impl Wedge2 {
    pub fn dim(genus: usize) -> usize {
        genus * (2 * genus - 1)
    }

    pub fn zero(genus: usize) -> Self {
        Wedge2 {
            genus,
            coords: vec![Rational::zero(); Self::dim(genus)],
        }
    }

    pub fn from_coords(genus: usize, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != Self::dim(genus) {
            return Err(Error::Precondition(format!(
                "wedge vector needs {} coordinates, got {}",
                Self::dim(genus),
                coords.len()
            )));
        }
        Ok(Wedge2 { genus, coords })
    }

    /// ω = Σ a_i ∧ b_i.
    pub fn omega(genus: usize) -> Self {
        let mut w = Self::zero(genus);
        for d in 0..genus {
            w.add_basis(2 * d, 2 * d + 1, &Rational::one());
        }
        w
    }

    /// `u ∧ v` for lattice vectors.
    pub fn wedge(u: &LatticeVector, v: &LatticeVector) -> Self {
        let g = u.genus();
        let n = 2 * g;
        let mut w = Self::zero(g);
        let (u, v) = (u.coords(), v.coords());
        for (i, j) in pairs(n) {
            let c = u[i] * v[j] - u[j] * v[i];
            if c != 0 {
                w.coords[pair_index(n, i, j)] = Rational::from_integer(c.into());
            }
        }
        w
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// `self += c · e_i ∧ e_j` for any `i ≠ j`.
    pub fn add_basis(&mut self, i: usize, j: usize, c: &Rational) {
        let n = 2 * self.genus;
        if i < j {
            let k = pair_index(n, i, j);
            self.coords[k] = self.coords[k].clone() + c.clone();
        } else if j < i {
            let k = pair_index(n, j, i);
            self.coords[k] = self.coords[k].clone() - c.clone();
        }
    }

    /// Coefficient of `e_i ∧ e_j`, antisymmetric in `(i, j)`.
    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        let n = 2 * self.genus;
        if i < j {
            self.coords[pair_index(n, i, j)].clone()
        } else if j < i {
            -self.coords[pair_index(n, j, i)].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Wedge2 {
            genus: self.genus,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Wedge2 {
            genus: self.genus,
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Wedge2 {
            genus: self.genus,
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Σ_d coefficient of a_d ∧ b_d.
    pub fn symplectic_trace(&self) -> Rational {
        (0..self.genus)
            .map(|d| self.coeff(2 * d, 2 * d + 1))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Interior product `ι_u(x ∧ y) = ω(u,x) y − ω(u,y) x`.
    pub fn interior(&self, u: &LatticeVector) -> Vec<Rational> {
        let n = 2 * self.genus;
        let mut out = vec![Rational::zero(); n];
        let uc = u.coords();
        let om = |x: usize| -> i64 { (0..n).map(|i| uc[i] * omega_basis(i, x)).sum() };
        let om_u: Vec<i64> = (0..n).map(om).collect();
        for (i, j) in pairs(n) {
            let c = &self.coords[pair_index(n, i, j)];
            if c.is_zero() {
                continue;
            }
            if om_u[i] != 0 {
                out[j] = out[j].clone() + c * Rational::from_integer(om_u[i].into());
            }
            if om_u[j] != 0 {
                out[i] = out[i].clone() - c * Rational::from_integer(om_u[j].into());
            }
        }
        out
    }

    pub fn bar(&self) -> Wedge2Bar {
        Wedge2Bar::new(self)
    }
}

impl fmt::Display for Wedge2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 2 * self.genus;
        let name = |i: usize| format!("{}{}", if i % 2 == 0 { 'a' } else { 'b' }, i / 2 + 1);
        let mut first = true;
        for (i, j) in pairs(n) {
            let c = &self.coords[pair_index(n, i, j)];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{}^{}", name(i), name(j))?;
            } else {
                write!(f, "({c}){}^{}", name(i), name(j))?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Wedge2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A class in ∧²H / ℚω, stored through its representative of symplectic trace zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Wedge2Bar {
    rep: Wedge2,
}

impl Wedge2Bar {
    pub fn new(w: &Wedge2) -> Self {
        let g = w.genus;
        let t = w.symplectic_trace() / Rational::from_integer(BigInt::from(g));
        Wedge2Bar {
            rep: w.sub(&Wedge2::omega(g).scale(&t)),
        }
    }

    pub fn representative(&self) -> &Wedge2 {
        &self.rep
    }

    pub fn dim(genus: usize) -> usize {
        Wedge2::dim(genus) - 1
    }

    /// Coordinates in the quotient basis: all `e_i ∧ e_j` except `a_g ∧ b_g`, after
    /// removing the `a_g ∧ b_g` coefficient with a multiple of ω.
    pub fn quotient_coords(&self) -> Vec<Rational> {
        let g = self.rep.genus;
        let n = 2 * g;
        let last = pair_index(n, n - 2, n - 1);
        let c = self.rep.coords[last].clone();
        let w = self.rep.sub(&Wedge2::omega(g).scale(&c));
        w.coords
            .into_iter()
            .enumerate()
            .filter(|(k, _)| *k != last)
            .map(|(_, x)| x)
            .collect()
    }

    pub fn neg(&self) -> Self {
        Wedge2Bar {
            rep: self.rep.scale(&-Rational::one()),
        }
    }
}

/// The lift of quotient-basis vector `k` to a basis pair `(i, j)`.
fn quotient_basis_pair(genus: usize, k: usize) -> (usize, usize) {
    let n = 2 * genus;
    let last = pair_index(n, n - 2, n - 1);
    let full = if k >= last { k + 1 } else { k };
    pairs(n).nth(full).expect("index in range")
}

/// Element of Sym²ℚ^{2g} in the basis `e_i ∨ e_j`, `i ≤ j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sym2 {
    genus: usize,
    coords: Vec<Rational>,
}

impl Sym2 {
    pub fn dim(genus: usize) -> usize {
        genus * (2 * genus + 1)
    }

    pub fn zero(genus: usize) -> Self {
        Sym2 {
            genus,
            coords: vec![Rational::zero(); Self::dim(genus)],
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn add_basis(&mut self, i: usize, j: usize, c: &Rational) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let k = sym_index(2 * self.genus, i, j);
        self.coords[k] = self.coords[k].clone() + c.clone();
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coords[sym_index(2 * self.genus, i, j)].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Integer contraction of basis tensors `(e_i ∧ e_j) ⊗ (e_k ∧ e_l)` as up to four Sym² entries.
fn contract_basis(i: usize, j: usize, k: usize, l: usize) -> [(i64, usize, usize); 4] {
    [
        (omega_basis(i, k), j, l),
        (-omega_basis(i, l), j, k),
        (-omega_basis(j, k), i, l),
        (omega_basis(j, l), i, k),
    ]
}

/// The contraction `c((a∧b)⊗(u∧v)) = ω(a,u) b∨v − ω(a,v) b∨u − ω(b,u) a∨v + ω(b,v) a∨u`,
/// extended bilinearly to `s ⊗ t`.
pub fn contraction(s: &Wedge2, t: &Wedge2) -> Sym2 {
    let g = s.genus;
    let n = 2 * g;
    let mut out = Sym2::zero(g);
    for (i, j) in pairs(n) {
        let a = &s.coords[pair_index(n, i, j)];
        if a.is_zero() {
            continue;
        }
        for (k, l) in pairs(n) {
            let b = &t.coords[pair_index(n, k, l)];
            if b.is_zero() {
                continue;
            }
            let ab = a * b;
            for (w, x, y) in contract_basis(i, j, k, l) {
                if w != 0 {
                    out.add_basis(x, y, &(&ab * Rational::from_integer(w.into())));
                }
            }
        }
    }
    out
}

/// Element of (∧²H/ℚω)^{⊗2} in the product of quotient bases, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tensor2 {
    genus: usize,
    coords: Vec<Rational>,
}

impl Tensor2 {
    pub fn dim(genus: usize) -> usize {
        Wedge2Bar::dim(genus).pow(2)
    }

    pub fn outer(a: &Wedge2Bar, b: &Wedge2Bar) -> Self {
        let ca = a.quotient_coords();
        let cb = b.quotient_coords();
        let mut coords = Vec::with_capacity(ca.len() * cb.len());
        for x in &ca {
            for y in &cb {
                coords.push(x * y);
            }
        }
        Tensor2 {
            genus: a.rep.genus,
            coords,
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn add(&self, o: &Self) -> Self {
        Tensor2 {
            genus: self.genus,
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Tensor2 {
            genus: self.genus,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// The contraction of this tensor, using basis lifts of the quotient coordinates.
    pub fn contract(&self) -> Sym2 {
        let g = self.genus;
        let m = Wedge2Bar::dim(g);
        let lifts: Vec<(usize, usize)> = (0..m).map(|k| quotient_basis_pair(g, k)).collect();
        let mut out = Sym2::zero(g);
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = lifts[idx / m];
            let (k, l) = lifts[idx % m];
            for (w, x, y) in contract_basis(i, j, k, l) {
                if w != 0 {
                    out.add_basis(x, y, &(c * Rational::from_integer(w.into())));
                }
            }
        }
        out
    }
}

/// Integer matrix of the contraction on the Tensor2 basis: one row per Sym² coordinate.
pub fn contraction_matrix(genus: usize) -> Vec<Vec<BigInt>> {
    let m = Wedge2Bar::dim(genus);
    let n = 2 * genus;
    let lifts: Vec<(usize, usize)> = (0..m).map(|k| quotient_basis_pair(genus, k)).collect();
    let mut mat = vec![vec![BigInt::zero(); m * m]; Sym2::dim(genus)];
    for p in 0..m {
        for r in 0..m {
            let (i, j) = lifts[p];
            let (k, l) = lifts[r];
            for (w, x, y) in contract_basis(i, j, k, l) {
                if w != 0 {
                    let (x, y) = if x <= y { (x, y) } else { (y, x) };
                    mat[sym_index(n, x, y)][p * m + r] += w;
                }
            }
        }
    }
    mat
}

/// A genus-1 summand given by a basis `(u, v)` with `ω(u, v) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SymplecticSummand {
    u: LatticeVector,
    v: LatticeVector,
}

impl SymplecticSummand {
    pub fn new(u: LatticeVector, v: LatticeVector) -> Result<Self> {
        u.check_genus(v.genus())?;
        if u.omega(&v) != 1 {
            return Err(Error::Precondition(format!(
                "ω({u}, {v}) = {} ≠ 1",
                u.omega(&v)
            )));
        }
        Ok(SymplecticSummand { u, v })
    }

    pub fn standard(genus: usize, d: usize) -> Self {
        SymplecticSummand {
            u: LatticeVector::a(genus, d),
            v: LatticeVector::b(genus, d),
        }
    }

    pub fn u(&self) -> &LatticeVector {
        &self.u
    }

    pub fn v(&self) -> &LatticeVector {
        &self.v
    }

    pub fn genus(&self) -> usize {
        self.u.genus()
    }

    /// `x ↦ x − ω(x,v) u + ω(x,u) v`, the integral projection onto `V^⊥`.
    pub fn project_perp(&self, x: &LatticeVector) -> LatticeVector {
        let a = x.omega(&self.v);
        let b = x.omega(&self.u);
        &(x - &self.u.scale(a)) + &self.v.scale(b)
    }

    /// A ℚ-basis of `V^⊥` chosen greedily among projections of the standard basis.
    pub fn perp_basis(&self) -> Vec<LatticeVector> {
        let g = self.genus();
        let mut ech = DenseEchelon::<Fp>::new(2 * g);
        let mut out = Vec::new();
        for i in 0..2 * g {
            let p = self.project_perp(&LatticeVector::unit(g, i));
            if ech.insert(p.coords().iter().map(|&x| Fp::from_i64(x)).collect()) {
                out.push(p);
            }
        }
        out
    }
}

/// ω_V = u ∧ v.
pub fn omega_of_summand(v: &SymplecticSummand) -> Wedge2 {
    Wedge2::wedge(&v.u, &v.v)
}

/// The bivector of ω restricted to the span of `basis` (which must be nondegenerate):
/// `½ Σ c_ij w_i ∧ w_j` with `c = −G⁻¹` for the Gram matrix `G_ij = ω(w_i, w_j)`.
pub fn omega_of_subspace(basis: &[LatticeVector]) -> Result<Wedge2> {
    let k = basis.len();
    let g = basis
        .first()
        .map(|b| b.genus())
        .ok_or_else(|| Error::Precondition("empty basis".into()))?;
    let mut m: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rational> = (0..k)
                .map(|j| Rational::from_integer(basis[i].omega(&basis[j]).into()))
                .collect();
            row.extend((0..k).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..k {
        let p = (col..k)
            .find(|&i| !m[i][col].is_zero())
            .ok_or_else(|| Error::Precondition("restricted form is degenerate".into()))?;
        m.swap(col, p);
        let inv = Rational::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..k {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..2 * k {
                    let t = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
    }
    let half = Rational::new(1.into(), 2.into());
    let mut out = Wedge2::zero(g);
    for i in 0..k {
        for j in 0..k {
            let c = -m[i][k + j].clone();
            if !c.is_zero() {
                out = out.add(&Wedge2::wedge(&basis[i], &basis[j]).scale(&(c * &half)));
            }
        }
    }
    Ok(out)
}

/// Which tensor slot carries ω̄_V.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `ω̄_V ⊗ κ̄` (left) or `κ̄ ⊗ ω̄_V` (right), for κ ∈ ∧²(V^⊥).
pub fn gen_image(side: Side, v: &SymplecticSummand, form: &Wedge2) -> Result<Tensor2> {
    for w in [&v.u, &v.v] {
        if form.interior(w).iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition(format!(
                "κ = {form} is not in ∧² of the complement of ({}, {})",
                v.u, v.v
            )));
        }
    }
    let om = omega_of_summand(v).bar();
    let k = form.bar();
    Ok(match side {
        Side::Left => Tensor2::outer(&om, &k),
        Side::Right => Tensor2::outer(&k, &om),
    })
}

/// Checks that the contraction kills ω on both sides and kills `ω_V ⊗ κ` for κ ∈ ∧²(V^⊥),
/// on full basis sweeps for the standard summands.
pub fn contraction_gates(genus: usize) -> Result<()> {
    let n = 2 * genus;
    let om = Wedge2::omega(genus);
    for (i, j) in pairs(n) {
        let mut t = Wedge2::zero(genus);
        t.add_basis(i, j, &Rational::one());
        if !contraction(&om, &t).is_zero() || !contraction(&t, &om).is_zero() {
            return Err(Error::Precondition(format!(
                "contraction does not kill ω against e{i}∧e{j}"
            )));
        }
    }
    for d in 1..=genus {
        let v = SymplecticSummand::standard(genus, d);
        let ov = omega_of_summand(&v);
        let perp = v.perp_basis();
        for (p, r) in pairs(perp.len()) {
            let k = Wedge2::wedge(&perp[p], &perp[r]);
            if !contraction(&ov, &k).is_zero() || !contraction(&k, &ov).is_zero() {
                return Err(Error::Precondition(format!(
                    "contraction does not kill ω_V ⊗ κ for block {d}"
                )));
            }
        }
    }
    Ok(())
}

/// A symplectic transvection `x ↦ x + c ω(w, x) w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transvection {
    pub w: LatticeVector,
    pub factor: i64,
}

impl Transvection {
    pub fn apply(&self, x: &LatticeVector) -> LatticeVector {
        x + &self.w.scale(self.factor * self.w.omega(x))
    }

    /// Random transvection with `w` having one or two entries ±1 and `c ∈ {±1, ±2}`,
    /// so that every matrix entry off the identity is bounded by 2.
    pub fn random(genus: usize, rng: &mut ChaCha8Rng) -> Self {
        let n = 2 * genus;
        let mut c = vec![0i64; n];
        let i = rng.gen_range(0..n);
        c[i] = if rng.gen_bool(0.5) { 1 } else { -1 };
        if rng.gen_bool(0.7) {
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            c[j] = if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let factor = [1, -1, 2, -2][rng.gen_range(0..4)];
        Transvection {
            w: LatticeVector::new(c).expect("even length"),
            factor,
        }
    }
}

/// A summand family member: the summand, the transvection word that produced it, and the
/// images of the other standard summands under the same word (orthogonal to it).
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub summand: SymplecticSummand,
    pub partners: Vec<SymplecticSummand>,
}

/// The standard summands, each with the other standard summands as partners.
pub fn standard_family(genus: usize) -> Vec<FamilyMember> {
    let standard: Vec<SymplecticSummand> = (1..=genus)
        .map(|d| SymplecticSummand::standard(genus, d))
        .collect();
    (0..genus)
        .map(|d| FamilyMember {
            summand: standard[d].clone(),
            partners: standard
                .iter()
                .enumerate()
                .filter(|(e, _)| *e != d)
                .map(|(_, s)| s.clone())
                .collect(),
        })
        .collect()
}

/// The image of a random standard summand under a random transvection word of length 1..=8.
pub fn random_member(genus: usize, rng: &mut ChaCha8Rng) -> FamilyMember {
    let standard: Vec<SymplecticSummand> = (1..=genus)
        .map(|d| SymplecticSummand::standard(genus, d))
        .collect();
    let len = rng.gen_range(1..=8);
    let word: Vec<Transvection> = (0..len).map(|_| Transvection::random(genus, rng)).collect();
    let map = |x: &LatticeVector| word.iter().fold(x.clone(), |acc, t| t.apply(&acc));
    let d = rng.gen_range(0..genus);
    let images: Vec<SymplecticSummand> = standard
        .iter()
        .map(|s| SymplecticSummand::new(map(&s.u), map(&s.v)).expect("transvections preserve ω"))
        .collect();
    FamilyMember {
        summand: images[d].clone(),
        partners: images
            .iter()
            .enumerate()
            .filter(|(e, _)| *e != d)
            .map(|(_, s)| s.clone())
            .collect(),
    }
}

/// Standard summands followed by `n` random members.
pub fn summand_family(genus: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<FamilyMember> {
    let mut out = standard_family(genus);
    out.extend((0..n).map(|_| random_member(genus, rng)));
    out
}

/// Number of consecutive members without span growth that counts as stabilization.
pub const PATIENCE: usize = 25;
/// Hard cap on the number of random members drawn by [`kernel_and_span_check`].
pub const MAX_MEMBERS: usize = 2000;

/// Result of [`kernel_and_span_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymkernelReport {
    pub g: usize,
    pub tensor_dim: usize,
    pub rank_c: usize,
    pub ker_dim: usize,
    pub span_dim: usize,
    pub membership_failures: usize,
    pub relation_failures: usize,
    /// Span dimension after each family member.
    pub span_profile: Vec<usize>,
    pub summands: usize,
    pub generators: usize,
}

impl SymkernelReport {
    pub fn span_equals_kernel(&self) -> bool {
        self.span_dim == self.ker_dim
    }

    /// The span reached the kernel dimension, which bounds it, or stopped growing for
    /// [`PATIENCE`] members.
    pub fn stabilized(&self) -> bool {
        let p = &self.span_profile;
        let flat = p.len() > PATIENCE && p[p.len() - 1 - PATIENCE] == p[p.len() - 1];
        p.windows(2).all(|w| w[0] <= w[1]) && (self.span_dim == self.ker_dim || flat)
    }
}

fn tensor_to_fp(t: &Tensor2) -> Vec<Fp> {
    t.coords.iter().map(Fp::from_rational).collect()
}

/// Exact rank of the contraction, kernel dimension, membership of every generator image in the
/// kernel, relation identities, and the span dimension of all images.
///
/// The family holds the standard summands and `n` random members. While the span is below the
/// kernel dimension, further members are drawn until it grows no more for [`PATIENCE`] members
/// or [`MAX_MEMBERS`] random members have been used; those members are checked the same way.
///
/// The span rank is computed over F_p, which bounds the rational rank from below; membership
/// bounds it from above by the kernel dimension. Equality of the two bounds is therefore exact.
pub fn kernel_and_span_check(
    genus: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SymkernelReport> {
    require_genus(genus)?;
    contraction_gates(genus)?;
    let tensor_dim = Tensor2::dim(genus);
    let rank_c = bareiss_rank(contraction_matrix(genus));
    let ker_dim = tensor_dim - rank_c;

    let mut family = summand_family(genus, n, rng).into_iter();
    let mut drawn = n;
    let mut membership_failures = 0;
    let mut relation_failures = 0;
    let mut ech = DenseEchelon::<Fp>::new(tensor_dim);
    let mut profile: Vec<usize> = Vec::new();
    let mut generators = 0;
    loop {
        let next = family.next().or_else(|| {
            let p = &profile;
            let flat = p.len() > PATIENCE && p[p.len() - 1 - PATIENCE] == p[p.len() - 1];
            (ech.rank() < ker_dim && !flat && drawn < MAX_MEMBERS).then(|| {
                drawn += 1;
                random_member(genus, rng)
            })
        });
        let Some(member) = next else { break };
        let member = &member;
        let v = &member.summand;
        let perp = v.perp_basis();
        let mut kappas = Vec::new();
        for (p, r) in pairs(perp.len()) {
            kappas.push(Wedge2::wedge(&perp[p], &perp[r]));
        }
        for k in &kappas {
            for side in [Side::Left, Side::Right] {
                let img = gen_image(side, v, k)?;
                generators += 1;
                if !img.contract().is_zero() {
                    membership_failures += 1;
                }
                if ech.rank() < ker_dim {
                    ech.insert(tensor_to_fp(&img));
                }
            }
        }
        profile.push(ech.rank());

        relation_failures += relation_checks(member, &perp, &kappas)?;
    }
    Ok(SymkernelReport {
        g: genus,
        tensor_dim,
        rank_c,
        ker_dim,
        span_dim: ech.rank(),
        membership_failures,
        relation_failures,
        summands: profile.len(),
        span_profile: profile,
        generators,
    })
}

/// Counts failures among the image identities for one family member.
fn relation_checks(
    member: &FamilyMember,
    perp: &[LatticeVector],
    kappas: &[Wedge2],
) -> Result<usize> {
    let v = &member.summand;
    let g = v.genus();
    let mut failures = 0;
    let ov = omega_of_summand(v);

    // ⟨V, ω_{V⊥}⟩ = ⟨ω_{V⊥}, V⟩, and ω̄_{V⊥} = −ω̄_V.
    let operp = omega_of_subspace(perp)?;
    let l = gen_image(Side::Left, v, &operp)?;
    let r = gen_image(Side::Right, v, &operp)?;
    let want = Tensor2::outer(&ov.bar(), &ov.bar()).scale(&-Rational::one());
    if l != r || l != want || operp.bar() != ov.bar().neg() {
        failures += 1;
    }
    if operp.add(&ov) != Wedge2::omega(g) {
        failures += 1;
    }

    // ⟨V, ω_W⟩ = ⟨ω_V, W⟩ for orthogonal W.
    for w in &member.partners {
        let ow = omega_of_summand(w);
        let lhs = gen_image(Side::Left, v, &ow)?;
        let rhs = gen_image(Side::Right, w, &ov)?;
        if lhs != rhs || lhs != Tensor2::outer(&ov.bar(), &ow.bar()) {
            failures += 1;
        }
    }

    // Linearity in κ.
    if kappas.len() >= 2 {
        let two = Rational::from_integer(2.into());
        let k = kappas[0].add(&kappas[1].scale(&two));
        for side in [Side::Left, Side::Right] {
            let lhs = gen_image(side, v, &k)?;
            let rhs =
                gen_image(side, v, &kappas[0])?.add(&gen_image(side, v, &kappas[1])?.scale(&two));
            if lhs != rhs {
                failures += 1;
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use rand::SeedableRng;

    const G: usize = 4;

    fn e(i: usize, j: usize) -> Wedge2 {
        let mut w = Wedge2::zero(G);
        w.add_basis(i, j, &q(1, 1));
        w
    }

    #[test]
    fn dimensions() {
        assert_eq!(Wedge2::dim(G), 28);
        assert_eq!(Sym2::dim(G), 36);
        assert_eq!(Tensor2::dim(G), 729);
    }

    #[test]
    fn indices_are_bijective() {
        let n = 2 * G;
        let idx: Vec<usize> = pairs(n).map(|(i, j)| pair_index(n, i, j)).collect();
        assert_eq!(idx, (0..Wedge2::dim(G)).collect::<Vec<_>>());
        let mut s = Vec::new();
        for i in 0..n {
            for j in i..n {
                s.push(sym_index(n, i, j));
            }
        }
        assert_eq!(s, (0..Sym2::dim(G)).collect::<Vec<_>>());
    }

    #[test]
    fn contraction_examples() {
        // (a1∧b1)⊗(a2∧b2) → 0
        assert!(contraction(&e(0, 1), &e(2, 3)).is_zero());
        // (a1∧a2)⊗(b1∧b2) → a2∨b2 + a1∨b1
        let c = contraction(&e(0, 2), &e(1, 3));
        let mut want = Sym2::zero(G);
        want.add_basis(2, 3, &q(1, 1));
        want.add_basis(0, 1, &q(1, 1));
        assert_eq!(c, want);
    }

    #[test]
    fn gates_hold() {
        contraction_gates(G).unwrap();
        contraction_gates(5).unwrap();
    }

    #[test]
    fn summand_omegas() {
        let v1 = SymplecticSummand::standard(G, 1);
        assert_eq!(omega_of_summand(&v1), e(0, 1));
        let t = SymplecticSummand::new(
            LatticeVector::a(G, 1),
            &LatticeVector::b(G, 1) + &LatticeVector::a(G, 2),
        )
        .unwrap();
        assert_eq!(omega_of_summand(&t), e(0, 1).add(&e(0, 2)));
        let om = Wedge2::omega(G);
        assert_eq!(om, e(0, 1).add(&e(2, 3)).add(&e(4, 5)).add(&e(6, 7)));
    }

    #[test]
    fn omega_of_subspace_is_basis_free() {
        let a = LatticeVector::a(G, 2);
        let b = LatticeVector::b(G, 2);
        let w1 = omega_of_subspace(&[a.clone(), b.clone()]).unwrap();
        let w2 = omega_of_subspace(&[&a + &b, b.clone()]).unwrap();
        assert_eq!(w1, e(2, 3));
        assert_eq!(w2, e(2, 3));
        let perp = SymplecticSummand::standard(G, 1).perp_basis();
        assert_eq!(
            omega_of_subspace(&perp).unwrap(),
            Wedge2::omega(G).sub(&e(0, 1))
        );
    }

    #[test]
    fn gen_image_precondition() {
        let v1 = SymplecticSummand::standard(G, 1);
        assert!(gen_image(Side::Left, &v1, &e(2, 5)).is_ok());
        assert!(gen_image(Side::Left, &v1, &e(0, 2)).is_err());
        let img = gen_image(Side::Left, &v1, &e(2, 5)).unwrap();
        assert_eq!(img, Tensor2::outer(&e(0, 1).bar(), &e(2, 5).bar()));
        assert!(img.contract().is_zero());
    }

    #[test]
    fn bar_is_canonical() {
        let w = e(0, 1).add(&e(2, 4));
        let shifted = w.add(&Wedge2::omega(G).scale(&q(7, 3)));
        assert_eq!(w.bar(), shifted.bar());
        assert!(w.bar().representative().symplectic_trace().is_zero());
        assert_eq!(w.bar().quotient_coords().len(), 27);
    }

    #[test]
    fn contraction_matrix_matches_tensor_contraction() {
        let mat = contraction_matrix(G);
        let t = Tensor2::outer(&e(0, 2).bar(), &e(1, 3).bar());
        let c = t.contract();
        for (row, want) in mat.iter().zip(c.coords()) {
            let got: Rational = row
                .iter()
                .zip(t.coords())
                .fold(Rational::zero(), |acc, (m, x)| {
                    acc + Rational::from_integer(m.clone()) * x
                });
            assert_eq!(&got, want);
        }
    }

    #[test]
    fn transvections_preserve_omega() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = Transvection::random(G, &mut rng);
            let x = LatticeVector::new((0..8).map(|_| rng.gen_range(-3..=3)).collect()).unwrap();
            let y = LatticeVector::new((0..8).map(|_| rng.gen_range(-3..=3)).collect()).unwrap();
            assert_eq!(t.apply(&x).omega(&t.apply(&y)), x.omega(&y));
        }
    }
}
