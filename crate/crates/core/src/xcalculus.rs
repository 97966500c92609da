//! The X(h,x,y) relation calculus.
//!
//! Symbols carry an explicit symplectic splitting witnessing that `x` and `y` are
//! homologically separate. Expressions are evaluated through their image in the group ring,
//! which is the ground truth for every rewriting step here.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{require_genus, same_genus, Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg::{bareiss_det, bareiss_rank, solve_in_span};
use crate::{GroupRing, Rational};

/// A splitting `H_Z = X ⊕ Y` into ω-orthogonal sublattices, each with a unimodular
/// restricted form, given by integer bases.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SplittingWitness {
    x_block: Vec<LatticeVector>,
    y_block: Vec<LatticeVector>,
}

fn gram(basis: &[LatticeVector]) -> Vec<Vec<BigInt>> {
    basis
        .iter()
        .map(|u| basis.iter().map(|v| BigInt::from(u.omega(v))).collect())
        .collect()
}

fn in_integer_span(basis: &[LatticeVector], v: &LatticeVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let cols: Vec<Vec<i64>> = basis.iter().map(|b| b.coords().to_vec()).collect();
    solve_in_span(&cols, v.coords()).is_some_and(|t| t.iter().all(|c| c.is_integer()))
}

impl SplittingWitness {
    pub fn new(x_block: Vec<LatticeVector>, y_block: Vec<LatticeVector>) -> Result<Self> {
        let g = x_block
            .first()
            .or(y_block.first())
            .map(LatticeVector::genus)
            .unwrap_or(0);
        for v in x_block.iter().chain(&y_block) {
            v.check_genus(g)?;
        }
        if x_block.is_empty()
            || y_block.is_empty()
            || x_block.len() % 2 == 1
            || y_block.len() % 2 == 1
        {
            return Err(Error::Precondition(
                "witness blocks must have positive even rank".into(),
            ));
        }
        if x_block.len() + y_block.len() != 2 * g {
            return Err(Error::Precondition(
                "witness blocks must together have rank 2g".into(),
            ));
        }
        if x_block
            .iter()
            .any(|u| y_block.iter().any(|v| u.omega(v) != 0))
        {
            return Err(Error::Precondition(
                "witness blocks are not ω-orthogonal".into(),
            ));
        }
        for block in [&x_block, &y_block] {
            if bareiss_det(gram(block)) != BigInt::one() {
                return Err(Error::Precondition(
                    "witness block form is not unimodular".into(),
                ));
            }
        }
        let all: Vec<Vec<BigInt>> = x_block
            .iter()
            .chain(&y_block)
            .map(|v| v.coords().iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        let det = bareiss_det(all);
        if det != BigInt::one() && det != -BigInt::one() {
            return Err(Error::Precondition(
                "witness blocks do not form a basis of H_Z".into(),
            ));
        }
        Ok(SplittingWitness { x_block, y_block })
    }

    /// X spanned by the standard blocks `xs`, Y by the remaining standard blocks.
    pub fn standard(genus: usize, xs: &[usize]) -> Result<Self> {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for d in 1..=genus {
            let target = if xs.contains(&d) { &mut x } else { &mut y };
            target.push(LatticeVector::a(genus, d));
            target.push(LatticeVector::b(genus, d));
        }
        SplittingWitness::new(x, y)
    }

    pub fn genus(&self) -> usize {
        self.x_block[0].genus()
    }

    pub fn x_block(&self) -> &[LatticeVector] {
        &self.x_block
    }

    pub fn y_block(&self) -> &[LatticeVector] {
        &self.y_block
    }

    pub fn swapped(&self) -> Self {
        SplittingWitness {
            x_block: self.y_block.clone(),
            y_block: self.x_block.clone(),
        }
    }

    pub fn in_x(&self, v: &LatticeVector) -> bool {
        in_integer_span(&self.x_block, v)
    }

    pub fn in_y(&self, v: &LatticeVector) -> bool {
        in_integer_span(&self.y_block, v)
    }
}

/// The symbol X(h, x, y) with its splitting witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XSym {
    pub h: LatticeVector,
    pub x: LatticeVector,
    pub y: LatticeVector,
    pub witness: Arc<SplittingWitness>,
}

fn partner(genus: usize, v: &LatticeVector) -> Result<LatticeVector> {
    let nz: Vec<(usize, i64)> = v
        .coords()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect();
    match nz.as_slice() {
        [(i, s)] if s.abs() == 1 => {
            let d = i / 2 + 1;
            Ok(if i % 2 == 0 {
                LatticeVector::b(genus, d).scale(*s)
            } else {
                LatticeVector::a(genus, d).scale(-*s)
            })
        }
        _ => Err(Error::Precondition(format!(
            "{v} is not a signed standard basis vector"
        ))),
    }
}

impl XSym {
    pub fn new(
        h: LatticeVector,
        x: LatticeVector,
        y: LatticeVector,
        witness: Arc<SplittingWitness>,
    ) -> Result<Self> {
        let g = witness.genus();
        for v in [&h, &x, &y] {
            v.check_genus(g)?;
        }
        if !witness.in_x(&x) {
            return Err(Error::Precondition(format!(
                "{x} is outside the witness X-block"
            )));
        }
        if !witness.in_y(&y) {
            return Err(Error::Precondition(format!(
                "{y} is outside the witness Y-block"
            )));
        }
        Ok(XSym { h, x, y, witness })
    }

    pub fn genus(&self) -> usize {
        self.h.genus()
    }

    /// A first-family symbol: `x` in block `d`, `y` orthogonal to block `d`.
    pub fn v1(h: LatticeVector, x: LatticeVector, y: LatticeVector) -> Result<Self> {
        let g = h.genus();
        let blocks = x.nonzero_blocks();
        let d = match blocks.as_slice() {
            [d] => *d,
            _ => {
                return Err(Error::Precondition(format!(
                    "{x} is not supported in a single block"
                )))
            }
        };
        if y.block(d) != (0, 0) {
            return Err(Error::Precondition(format!("{y} meets block {d}")));
        }
        XSym::new(h, x, y, Arc::new(SplittingWitness::standard(g, &[d])?))
    }

    /// X(h, x, x+y) with `x ∈ {a_d, b_d}` and `y ∈ {±a_e, ±b_e}`, `e ≠ d`.
    pub fn v2(h: LatticeVector, x: LatticeVector, y: LatticeVector) -> Result<Self> {
        let g = h.genus();
        y_direction(&x)?;
        let xp = partner(g, &x)?;
        let yp = partner(g, &y)?;
        if x.nonzero_blocks() == y.nonzero_blocks() {
            return Err(Error::Precondition(
                "x and y must lie in distinct blocks".into(),
            ));
        }
        let xy = &x + &y;
        let (d, e) = (x.nonzero_blocks()[0], y.nonzero_blocks()[0]);
        let w = complete_witness(g, d, e, vec![x.clone(), &xp - &yp], vec![xy.clone(), yp])?;
        XSym::new(h, x, xy, Arc::new(w))
    }

    /// X(h, a_d+a_e, b_d−b_e).
    pub fn z(h: LatticeVector, d: usize, e: usize) -> Result<Self> {
        let g = h.genus();
        let (ad, bd, ae, be) = (
            LatticeVector::a(g, d),
            LatticeVector::b(g, d),
            LatticeVector::a(g, e),
            LatticeVector::b(g, e),
        );
        let x = &ad + &ae;
        let y = &bd - &be;
        let w = complete_witness(g, d, e, vec![x.clone(), bd], vec![y.clone(), ae])?;
        XSym::new(h, x, y, Arc::new(w))
    }

    /// X(h, a_d+b_e, b_d+a_e).
    pub fn w(h: LatticeVector, d: usize, e: usize) -> Result<Self> {
        let g = h.genus();
        let (ad, bd, ae, be) = (
            LatticeVector::a(g, d),
            LatticeVector::b(g, d),
            LatticeVector::a(g, e),
            LatticeVector::b(g, e),
        );
        let x = &ad + &be;
        let y = &bd + &ae;
        let w = complete_witness(g, d, e, vec![x.clone(), bd], vec![y.clone(), be])?;
        XSym::new(h, x, y, Arc::new(w))
    }

    pub fn x_q(&self) -> GroupRing {
        let hx = &self.h + &self.x;
        let hy = &self.h + &self.y;
        let hxy = &hx + &self.y;
        GroupRing::from_int_terms(
            self.genus(),
            [(&self.h, 1), (&hx, -1), (&hy, -1), (&hxy, 1)],
        )
    }

    fn key(&self) -> (LatticeVector, LatticeVector, LatticeVector) {
        (self.h.clone(), self.x.clone(), self.y.clone())
    }

    fn with(&self, h: LatticeVector, x: LatticeVector, y: LatticeVector) -> Result<XSym> {
        XSym::new(h, x, y, self.witness.clone())
    }
}

/// Completes a splitting of the blocks `d`, `e` with the remaining standard blocks on the Y side.
fn complete_witness(
    g: usize,
    d: usize,
    e: usize,
    x: Vec<LatticeVector>,
    mut y: Vec<LatticeVector>,
) -> Result<SplittingWitness> {
    if d == e || d == 0 || e == 0 || d > g || e > g {
        return Err(Error::Precondition(format!(
            "blocks ({d}, {e}) must be distinct and in 1..={g}"
        )));
    }
    for f in (1..=g).filter(|&f| f != d && f != e) {
        y.push(LatticeVector::a(g, f));
        y.push(LatticeVector::b(g, f));
    }
    SplittingWitness::new(x, y)
}

impl fmt::Display for XSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X({}, {}, {})", self.h, self.x, self.y)
    }
}

/// A rational combination of X-symbols, keyed by `(h, x, y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XExpr {
    genus: usize,
    terms:
        BTreeMap<(LatticeVector, LatticeVector, LatticeVector), (Rational, Arc<SplittingWitness>)>,
}

impl XExpr {
    pub fn zero(genus: usize) -> Self {
        XExpr {
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_sym(s: XSym) -> Self {
        let mut e = XExpr::zero(s.genus());
        e.add_unchecked(s, Rational::one());
        e
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (XSym, &Rational)> + '_ {
        self.terms.iter().map(|((h, x, y), (c, w))| {
            (
                XSym {
                    h: h.clone(),
                    x: x.clone(),
                    y: y.clone(),
                    witness: w.clone(),
                },
                c,
            )
        })
    }

    pub fn coeff(&self, h: &LatticeVector, x: &LatticeVector, y: &LatticeVector) -> Rational {
        self.terms
            .get(&(h.clone(), x.clone(), y.clone()))
            .map(|t| t.0.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&mut self, s: XSym, c: Rational) -> Result<()> {
        same_genus(self.genus, s.genus())?;
        self.add_unchecked(s, c);
        Ok(())
    }

    fn add_unchecked(&mut self, s: XSym, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = s.key();
        match self.terms.get_mut(&key) {
            Some(t) => {
                t.0 = &t.0 + c;
                if t.0.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, (c, s.witness));
            }
        }
    }

    pub fn add_expr(&mut self, other: &XExpr, c: &Rational) -> Result<()> {
        same_genus(self.genus, other.genus)?;
        for (s, v) in other.terms() {
            self.add_unchecked(s, v * c);
        }
        Ok(())
    }

    pub fn sub_expr(&self, other: &XExpr) -> Result<XExpr> {
        let mut out = self.clone();
        out.add_expr(other, &-Rational::one())?;
        Ok(out)
    }
}

impl fmt::Display for XExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){s}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct XTermJson {
    c: String,
    h: LatticeVector,
    x: LatticeVector,
    y: LatticeVector,
    #[serde(rename = "witnessX")]
    witness_x: Vec<LatticeVector>,
    #[serde(rename = "witnessY")]
    witness_y: Vec<LatticeVector>,
}

#[derive(Serialize, Deserialize)]
struct XExprJson {
    terms: Vec<XTermJson>,
}

impl Serialize for XExpr {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        XExprJson {
            terms: self
                .terms()
                .map(|(s, c)| XTermJson {
                    c: c.to_string(),
                    h: s.h,
                    x: s.x,
                    y: s.y,
                    witness_x: s.witness.x_block.clone(),
                    witness_y: s.witness.y_block.clone(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for XExpr {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = XExprJson::deserialize(de)?;
        let genus = raw
            .terms
            .first()
            .map(|t| t.h.genus())
            .ok_or_else(|| D::Error::custom("empty expression has no genus"))?;
        let mut out = XExpr::zero(genus);
        for t in raw.terms {
            let c: Rational =
                t.c.parse()
                    .map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.c)))?;
            let w = SplittingWitness::new(t.witness_x, t.witness_y).map_err(D::Error::custom)?;
            let s = XSym::new(t.h, t.x, t.y, Arc::new(w)).map_err(D::Error::custom)?;
            out.add(s, c).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

/// The image of an expression in ℚ[H_Z].
pub fn x_q(e: &XExpr) -> GroupRing {
    let mut out = GroupRing::zero(e.genus);
    for (s, c) in e.terms() {
        out.add_scaled(&s.x_q(), c)
            .expect("terms share the expression genus");
    }
    out
}

/// The five defining relations, with their parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Vanishing,
    Symmetry,
    /// Splits the first argument as `x1 + (x − x1)`.
    Additivity {
        x1: LatticeVector,
    },
    /// Rewrites X(h, −x, y) with `−x` the symbol's first argument.
    Inverse,
    /// Reads the symbol's base point as `h + k`.
    Cube {
        k: LatticeVector,
    },
}

/// The right-hand side of `rel` applied to `s`, with the witness of `s`.
pub fn apply_relation(rel: &Relation, s: &XSym) -> Result<XExpr> {
    let g = s.genus();
    let mut out = XExpr::zero(g);
    let one = Rational::one;
    match rel {
        Relation::Vanishing => {
            if !s.x.is_zero() && !s.y.is_zero() {
                return Err(Error::Precondition(format!(
                    "{s} has two nonzero arguments"
                )));
            }
        }
        Relation::Symmetry => {
            let t = XSym::new(
                s.h.clone(),
                s.y.clone(),
                s.x.clone(),
                Arc::new(s.witness.swapped()),
            )?;
            out.add_unchecked(t, one());
        }
        Relation::Additivity { x1 } => {
            x1.check_genus(g)?;
            if !s.witness.in_x(x1) {
                return Err(Error::Precondition(format!(
                    "split {x1} is outside the witness X-block"
                )));
            }
            let x2 = &s.x - x1;
            out.add_unchecked(s.with(s.h.clone(), x1.clone(), s.y.clone())?, one());
            out.add_unchecked(s.with(&s.h + x1, x2, s.y.clone())?, one());
        }
        Relation::Inverse => {
            out.add_unchecked(s.with(&s.h + &s.x, -&s.x, s.y.clone())?, -one());
        }
        Relation::Cube { k } => {
            k.check_genus(g)?;
            if !s.witness.in_x(k) {
                return Err(Error::Precondition(format!(
                    "shift {k} is outside the witness X-block"
                )));
            }
            let h = &s.h - k;
            out.add_unchecked(s.with(h.clone(), s.x.clone(), s.y.clone())?, one());
            out.add_unchecked(s.with(h.clone(), k.clone(), s.y.clone())?, -one());
            out.add_unchecked(s.with(&h + &s.x, k.clone(), s.y.clone())?, one());
        }
    }
    Ok(out)
}

/// Whether `s` lies in the reduced first family: `h = 0`, `x` a nonzero vector of one block
/// `d`, `y` nonzero and supported on blocks after `d`.
pub fn is_w1(h: &LatticeVector, x: &LatticeVector, y: &LatticeVector) -> bool {
    if !h.is_zero() || y.is_zero() {
        return false;
    }
    match x.nonzero_blocks().as_slice() {
        [d] => y.nonzero_blocks().iter().all(|&e| e > *d),
        _ => false,
    }
}

fn single_block(x: &LatticeVector) -> Result<usize> {
    match x.nonzero_blocks().as_slice() {
        [d] => Ok(*d),
        _ => Err(Error::Precondition(format!(
            "{x} is not supported in a single block"
        ))),
    }
}

/// Rewrites a first-family symbol as a combination of reduced first-family symbols.
pub fn reduce_to_w1(s: &XSym) -> Result<XExpr> {
    let g = s.genus();
    if !s.x.is_zero() {
        let d = single_block(&s.x)?;
        if s.y.block(d) != (0, 0) {
            return Err(Error::Precondition(format!(
                "{s} is not a first-family symbol"
            )));
        }
    }
    let mut out = XExpr::zero(g);
    reduce_w1_into(&s.h, &s.x, &s.y, &Rational::one(), &mut out)?;
    Ok(out)
}

fn reduce_w1_into(
    h: &LatticeVector,
    x: &LatticeVector,
    y: &LatticeVector,
    c: &Rational,
    out: &mut XExpr,
) -> Result<()> {
    if x.is_zero() || y.is_zero() || c.is_zero() {
        return Ok(());
    }
    let d = single_block(x)?;
    let y_blocks = y.nonzero_blocks();

    // Second-slot additivity peels off the lowest block of y while it lies before d; each
    // peeled piece becomes a symbol of that lower block by symmetry.
    if let Some(&i) = y_blocks.first().filter(|&&i| i < d) {
        let yi = y.block_part(i);
        let rest = y - &yi;
        reduce_w1_into(h, &yi, x, c, out)?;
        return reduce_w1_into(&(h + &yi), x, &rest, c, out);
    }

    let h_blocks = h.nonzero_blocks();
    let Some(&low) = h_blocks.first() else {
        out.add_unchecked(XSym::v1(h.clone(), x.clone(), y.clone())?, c.clone());
        return Ok(());
    };

    if low < d {
        // Cube relation with the lowest block of h as shift.
        let k = h.block_part(low);
        let h2 = h - &k;
        reduce_w1_into(&h2, x, y, c, out)?;
        reduce_w1_into(&h2, &k, y, &-c, out)?;
        return reduce_w1_into(&(&h2 + x), &k, y, c, out);
    }

    let hl = h.block_part(low);
    let rest = h - &hl;
    if low == d {
        // X(H+h_d, x, y) = X(H, h_d+x, y) − X(H, h_d, y).
        reduce_w1_into(&rest, &(&hl + x), y, c, out)?;
        reduce_w1_into(&rest, &hl, y, &-c, out)
    } else {
        // X(H+h_l, x, y) = X(H, x, h_l+y) − X(H, x, h_l).
        reduce_w1_into(&rest, x, &(&hl + y), c, out)?;
        reduce_w1_into(&rest, x, &hl, &-c, out)
    }
}

/// The telescoping preimage of `[z]` for a vector `z` with at least two nonzero blocks.
pub fn p_lift(z: &LatticeVector) -> Result<XExpr> {
    let g = z.genus();
    let blocks = z.nonzero_blocks();
    if blocks.len() < 2 {
        return Err(Error::Precondition(format!(
            "{z} has fewer than two nonzero blocks"
        )));
    }
    let mut out = XExpr::zero(g);
    for (i, &d) in blocks[..blocks.len() - 1].iter().enumerate() {
        let tail = z.blocks_part(blocks[i + 1..].iter().copied());
        out.add_unchecked(
            XSym::v1(LatticeVector::zero(g), z.block_part(d), tail)?,
            Rational::one(),
        );
    }
    Ok(out)
}

/// The part of the element supported on vectors with at least two nonzero blocks.
pub fn multi_block_part(elem: &GroupRing) -> GroupRing {
    GroupRing::from_terms(
        elem.genus(),
        elem.terms()
            .filter(|(h, _)| h.block_count() >= 2)
            .map(|(h, c)| (h.clone(), c.clone())),
    )
    .expect("terms share the genus")
}

/// The linear extension of [`p_lift`] to combinations of multi-block vectors.
pub fn p_lift_expr(elem: &GroupRing) -> Result<XExpr> {
    let mut out = XExpr::zero(elem.genus());
    for (z, c) in elem.terms() {
        out.add_expr(&p_lift(z)?, c)?;
    }
    Ok(out)
}

fn project_level1(elem: &GroupRing) -> Result<GroupRing> {
    let mut cur = elem.clone();
    loop {
        let next = cur
            .terms()
            .filter(|(z, _)| z.block_count() >= 2)
            .max_by_key(|(z, _)| (z.block_count(), (*z).clone()));
        let Some((z, c)) = next.map(|(z, c)| (z.clone(), c.clone())) else {
            return Ok(cur);
        };
        cur.add_scaled(&x_q(&p_lift(&z)?), &-c)?;
    }
}

/// Moves a term `[e_n]` on a lattice line to `{e_0, e_1}` using the second differences
/// `e_k − 2e_{k+1} + e_{k+2}`; returns the coefficient pairs on `(e_0, e_1)`.
fn line_reduce(n: i64) -> (BigInt, BigInt) {
    let mut terms: BTreeMap<i64, BigInt> = BTreeMap::from([(n, BigInt::one())]);
    loop {
        let far = terms
            .iter()
            .filter(|(k, c)| !(0..=1).contains(*k) && !c.is_zero())
            .map(|(k, _)| *k)
            .max_by_key(|k| (k.abs(), *k));
        let Some(k) = far else { break };
        let c = terms.remove(&k).expect("present");
        let (near, nearer) = if k >= 2 {
            (k - 1, k - 2)
        } else {
            (k + 1, k + 2)
        };
        *terms.entry(near).or_default() += &c * 2;
        *terms.entry(nearer).or_default() -= c;
    }
    (
        terms.get(&0).cloned().unwrap_or_default(),
        terms.get(&1).cloned().unwrap_or_default(),
    )
}

fn project_level2(elem: &GroupRing) -> Result<GroupRing> {
    let level1 = project_level1(elem)?;
    let g = elem.genus();
    let mut out = GroupRing::zero(g);
    for (z, c) in level1.terms() {
        let Some(&d) = z.nonzero_blocks().first() else {
            out.add_term(z.clone(), c.clone());
            continue;
        };
        let (n, m) = z.block(d);
        let (a, b) = (LatticeVector::a(g, d), LatticeVector::b(g, d));
        let (n0, n1) = line_reduce(n);
        let (m0, m1) = line_reduce(m);
        for (p, cp) in [(LatticeVector::zero(g), &n0), (a, &n1)] {
            for (q, cq) in [(LatticeVector::zero(g), &m0), (b.clone(), &m1)] {
                let coeff = c * Rational::from_integer(cp * cq);
                out.add_term(&p + &q, coeff);
            }
        }
    }
    Ok(out)
}

/// Projects the element to the complement of the images of the first family (level 1) or of the first
/// two families (level 2).
pub fn project_group_ring(level: u8, elem: &GroupRing) -> Result<GroupRing> {
    match level {
        1 => project_level1(elem),
        2 => project_level2(elem),
        _ => Err(Error::Precondition(format!(
            "projection level must be 1 or 2, got {level}"
        ))),
    }
}

/// Direction of a second-family symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Dir {
    A,
    B,
}

/// The symbol Y(h, x) with `x = a_d` or `b_d` and `h` supported on block `d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct YSym {
    pub d: usize,
    pub h: LatticeVector,
    pub dir: Dir,
}

fn y_direction(x: &LatticeVector) -> Result<(usize, Dir)> {
    let nz: Vec<(usize, i64)> = x
        .coords()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect();
    match nz.as_slice() {
        [(i, 1)] => Ok((i / 2 + 1, if i % 2 == 0 { Dir::A } else { Dir::B })),
        _ => Err(Error::Precondition(format!(
            "{x} is not a standard basis vector a_d or b_d"
        ))),
    }
}

impl YSym {
    pub fn new(d: usize, h: LatticeVector, dir: Dir) -> Result<Self> {
        let g = h.genus();
        if d == 0 || d > g {
            return Err(Error::Precondition(format!("block {d} out of range")));
        }
        if h.nonzero_blocks().iter().any(|&e| e != d) {
            return Err(Error::Precondition(format!(
                "{h} is not supported on block {d}"
            )));
        }
        Ok(YSym { d, h, dir })
    }

    pub fn genus(&self) -> usize {
        self.h.genus()
    }

    pub fn x(&self) -> LatticeVector {
        let g = self.genus();
        match self.dir {
            Dir::A => LatticeVector::a(g, self.d),
            Dir::B => LatticeVector::b(g, self.d),
        }
    }

    /// Coordinates of `h` in block `d`.
    pub fn coords(&self) -> (i64, i64) {
        self.h.block(self.d)
    }
}

impl fmt::Display for YSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y({}, {})", self.h, self.x())
    }
}

/// The Y-symbol of X(h, x, x+y): drops `y` and projects `h` to the block of `x`.
pub fn y_canonicalize(
    h: &LatticeVector,
    x: &LatticeVector,
    y: Option<&LatticeVector>,
) -> Result<YSym> {
    let (d, dir) = y_direction(x)?;
    h.check_genus(x.genus())?;
    if let Some(y) = y {
        y.check_genus(x.genus())?;
        partner(x.genus(), y)?;
        if y.block(d) != (0, 0) {
            return Err(Error::Precondition(format!("{y} lies in the block of {x}")));
        }
    }
    YSym::new(d, h.block_part(d), dir)
}

/// `[h] − 2[h+x] + [h+2x]`.
pub fn y_image(s: &YSym) -> GroupRing {
    let x = s.x();
    let h1 = &s.h + &x;
    let h2 = &h1 + &x;
    GroupRing::from_int_terms(s.genus(), [(&s.h, 1), (&h1, -2), (&h2, 1)])
}

/// Whether `s` belongs to the reduced second family.
pub fn is_w2(s: &YSym) -> bool {
    s.dir == Dir::A || (0..=1).contains(&s.coords().0)
}

/// A rational combination of Y-symbols.
pub type YExpr = BTreeMap<YSym, Rational>;

pub fn y_expr_image(e: &YExpr) -> Option<GroupRing> {
    let g = e.keys().next()?.genus();
    let mut out = GroupRing::zero(g);
    for (s, c) in e {
        out.add_scaled(&y_image(s), c).ok()?;
    }
    Some(out)
}

/// Rewrites `s` over the reduced second family, moving the `a_d`-coordinate of each
/// `b_d`-symbol toward `{0, 1}`, farthest symbol first.
pub fn reduce_to_w2(s: &YSym) -> YExpr {
    let g = s.genus();
    let d = s.d;
    let (a, b) = (LatticeVector::a(g, d), LatticeVector::b(g, d));
    let mut out = YExpr::new();
    let mut work: BTreeMap<(i64, YSym), Rational> = BTreeMap::new();
    push(&mut work, &mut out, s.clone(), Rational::one());
    while let Some(((_, t), c)) = work.pop_last() {
        let (n, _) = t.coords();
        let y = |h: LatticeVector, dir| YSym { d, h, dir };
        let ci = |k: i64| &c * Rational::from_integer(k.into());
        if n >= 2 {
            let h0 = &t.h - &a.scale(2);
            push(&mut work, &mut out, y(h0.clone(), Dir::A), ci(1));
            push(&mut work, &mut out, y(&h0 + &b, Dir::A), ci(-2));
            push(&mut work, &mut out, y(&h0 + &b.scale(2), Dir::A), ci(1));
            push(&mut work, &mut out, y(h0, Dir::B), ci(-1));
            push(&mut work, &mut out, y(&t.h - &a, Dir::B), ci(2));
        } else {
            let h0 = t.h.clone();
            push(&mut work, &mut out, y(h0.clone(), Dir::A), ci(1));
            push(&mut work, &mut out, y(&h0 + &b, Dir::A), ci(-2));
            push(&mut work, &mut out, y(&h0 + &b.scale(2), Dir::A), ci(1));
            push(&mut work, &mut out, y(&h0 + &a, Dir::B), ci(2));
            push(&mut work, &mut out, y(&h0 + &a.scale(2), Dir::B), ci(-1));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn w2_distance(s: &YSym) -> i64 {
    match s.coords().0 {
        n if n >= 2 => n - 1,
        n if n <= -1 => -n,
        _ => 0,
    }
}

fn push(work: &mut BTreeMap<(i64, YSym), Rational>, out: &mut YExpr, s: YSym, c: Rational) {
    if c.is_zero() {
        return;
    }
    if !is_w2(&s) {
        return push_work(work, s, c);
    }
    let e = out.entry(s).or_insert_with(Rational::zero);
    *e = &*e + c;
}

fn push_work(work: &mut BTreeMap<(i64, YSym), Rational>, s: YSym, c: Rational) {
    let e = work
        .entry((w2_distance(&s), s))
        .or_insert_with(Rational::zero);
    *e = &*e + c;
}

/// Residual of the Y-relation at `(d, h)`, computed from images.
pub fn y_relation_residual(d: usize, h: &LatticeVector) -> Result<GroupRing> {
    let g = h.genus();
    let (a, b) = (LatticeVector::a(g, d), LatticeVector::b(g, d));
    let img = |h: LatticeVector, dir| YSym::new(d, h, dir).map(|s| y_image(&s));
    let mut lhs = img(h.clone(), Dir::A)?;
    lhs.add_scaled(&img(h + &b, Dir::A)?, &Rational::from_integer((-2).into()))?;
    lhs = lhs.add(&img(h + &b.scale(2), Dir::A)?)?;
    let mut rhs = img(h.clone(), Dir::B)?;
    rhs.add_scaled(&img(h + &a, Dir::B)?, &Rational::from_integer((-2).into()))?;
    rhs = rhs.add(&img(h + &a.scale(2), Dir::B)?)?;
    lhs.sub(&rhs)
}

/// Kind of a third-family symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum ZwKind {
    Z,
    W,
}

/// Z(a_d+a_e, b_d−b_e) or W(a_d+b_e, b_d+a_e).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ZwSym {
    pub kind: ZwKind,
    pub d: usize,
    pub e: usize,
}

impl ZwSym {
    pub fn new(kind: ZwKind, d: usize, e: usize) -> Result<Self> {
        if d == e || d == 0 || e == 0 {
            return Err(Error::Precondition(format!(
                "blocks ({d}, {e}) must be distinct and positive"
            )));
        }
        Ok(ZwSym { kind, d, e })
    }

    /// The canonical symbol with `d < e` and the sign relating it to `self`.
    pub fn canonical(self) -> (ZwSym, i64) {
        if self.d < self.e {
            return (self, 1);
        }
        let flipped = ZwSym {
            d: self.e,
            e: self.d,
            ..self
        };
        match self.kind {
            ZwKind::Z => (flipped, -1),
            ZwKind::W => (flipped, 1),
        }
    }

    /// A defining X-symbol at base point 0.
    pub fn defining_symbol(self, genus: usize) -> Result<XSym> {
        let h = LatticeVector::zero(genus);
        match self.kind {
            ZwKind::Z => XSym::z(h, self.d, self.e),
            ZwKind::W => XSym::w(h, self.d, self.e),
        }
    }
}

impl fmt::Display for ZwSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, e) = (self.d, self.e);
        match self.kind {
            ZwKind::Z => write!(f, "Z(a{d}+a{e}, b{d}-b{e})"),
            ZwKind::W => write!(f, "W(a{d}+b{e}, b{d}+a{e})"),
        }
    }
}

/// `[0] − [a_d] − [b_d] + [a_d+b_d]`.
pub fn corner_cycle(genus: usize, d: usize) -> Result<GroupRing> {
    if d == 0 || d > genus {
        return Err(Error::Precondition(format!(
            "block {d} out of range for genus {genus}"
        )));
    }
    let (a, b) = (LatticeVector::a(genus, d), LatticeVector::b(genus, d));
    let ab = &a + &b;
    Ok(GroupRing::from_int_terms(
        genus,
        [
            (&LatticeVector::zero(genus), 1),
            (&a, -1),
            (&b, -1),
            (&ab, 1),
        ],
    ))
}

pub fn zw_image(genus: usize, s: ZwSym) -> Result<GroupRing> {
    let (td, te) = (corner_cycle(genus, s.d)?, corner_cycle(genus, s.e)?);
    match s.kind {
        ZwKind::Z => td.sub(&te),
        ZwKind::W => td.add(&te),
    }
}

/// `project_group_ring(2, x_q(X))` for the defining X-symbol of `s`.
pub fn zw_pipeline(genus: usize, s: ZwSym) -> Result<GroupRing> {
    project_group_ring(2, &s.defining_symbol(genus)?.x_q())
}

/// The reduced third family: Z(d, d+1) for `d < g` and W(1, 2).
pub fn w3(genus: usize) -> Vec<ZwSym> {
    let mut out: Vec<ZwSym> = (1..genus)
        .map(|d| ZwSym {
            kind: ZwKind::Z,
            d,
            e: d + 1,
        })
        .collect();
    out.push(ZwSym {
        kind: ZwKind::W,
        d: 1,
        e: 2,
    });
    out
}

/// Writes `s` over the reduced third family.
pub fn expand_w3(s: ZwSym) -> BTreeMap<ZwSym, i64> {
    let mut out = BTreeMap::new();
    expand_w3_into(s, 1, &mut out);
    out.retain(|_, c| *c != 0);
    out
}

fn expand_w3_into(s: ZwSym, c: i64, out: &mut BTreeMap<ZwSym, i64>) {
    let (s, sign) = s.canonical();
    let c = c * sign;
    match s.kind {
        ZwKind::Z => {
            for i in s.d..s.e {
                *out.entry(ZwSym {
                    kind: ZwKind::Z,
                    d: i,
                    e: i + 1,
                })
                .or_default() += c;
            }
        }
        ZwKind::W => {
            if (s.d, s.e) == (1, 2) {
                *out.entry(s).or_default() += c;
                return;
            }
            let (d, f) = if s.d <= 2 { (s.e, s.d) } else { (s.d, s.e) };
            let mid = if f == 1 { 2 } else { 1 };
            expand_w3_into(
                ZwSym {
                    kind: ZwKind::Z,
                    d,
                    e: mid,
                },
                c,
                out,
            );
            expand_w3_into(
                ZwSym {
                    kind: ZwKind::W,
                    d: mid,
                    e: f,
                },
                c,
                out,
            );
        }
    }
}

/// Outcome of [`zw_relations_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZwReport {
    pub genus: usize,
    pub triples_checked: usize,
    pub relation_failures: Vec<String>,
    pub pipeline_failures: Vec<String>,
    pub expansion_failures: Vec<String>,
    pub w3_rank: usize,
}

impl ZwReport {
    pub fn passed(&self) -> bool {
        self.relation_failures.is_empty()
            && self.pipeline_failures.is_empty()
            && self.expansion_failures.is_empty()
            && self.w3_rank == self.genus
    }
}

/// Checks the third-family relations on images for all index triples, the defining-symbol
/// pipeline and the reduction to the reduced family for all pairs, and the rank of the
/// reduced family's images.
pub fn zw_relations_check(genus: usize) -> Result<ZwReport> {
    require_genus(genus)?;
    let img = |kind, d, e| zw_image(genus, ZwSym { kind, d, e });
    let mut report = ZwReport {
        genus,
        triples_checked: 0,
        relation_failures: Vec::new(),
        pipeline_failures: Vec::new(),
        expansion_failures: Vec::new(),
        w3_rank: 0,
    };
    for d in 1..=genus {
        for e in (1..=genus).filter(|&e| e != d) {
            let dumb_z = img(ZwKind::Z, d, e)?.add(&img(ZwKind::Z, e, d)?)?;
            let dumb_w = img(ZwKind::W, d, e)?.sub(&img(ZwKind::W, e, d)?)?;
            for (name, r) in [("z-swap", dumb_z), ("w-swap", dumb_w)] {
                if !r.is_zero() {
                    report
                        .relation_failures
                        .push(format!("{name}({d},{e}): {r}"));
                }
            }
            for kind in [ZwKind::Z, ZwKind::W] {
                let s = ZwSym { kind, d, e };
                let want = zw_image(genus, s)?;
                let got = zw_pipeline(genus, s)?;
                if got != want {
                    report
                        .pipeline_failures
                        .push(format!("{s}: {}", got.sub(&want)?));
                }
                let mut sum = GroupRing::zero(genus);
                for (t, c) in expand_w3(s) {
                    if !w3(genus).contains(&t) {
                        report
                            .expansion_failures
                            .push(format!("{s}: {t} is not reduced"));
                    }
                    sum.add_scaled(&zw_image(genus, t)?, &Rational::from_integer(c.into()))?;
                }
                if sum != want {
                    report
                        .expansion_failures
                        .push(format!("{s}: {}", sum.sub(&want)?));
                }
            }
            for f in (1..=genus).filter(|&f| f != d && f != e) {
                report.triples_checked += 1;
                let z = img(ZwKind::Z, d, f)?.sub(&img(ZwKind::Z, d, e)?.add(&img(
                    ZwKind::Z,
                    e,
                    f,
                )?)?)?;
                let w = img(ZwKind::W, d, f)?.sub(&img(ZwKind::Z, d, e)?.add(&img(
                    ZwKind::W,
                    e,
                    f,
                )?)?)?;
                for (name, r) in [("z-relation", z), ("w-relation", w)] {
                    if !r.is_zero() {
                        report
                            .relation_failures
                            .push(format!("{name}({d},{e},{f}): {r}"));
                    }
                }
            }
        }
    }
    let images: Vec<GroupRing> = w3(genus)
        .into_iter()
        .map(|s| zw_image(genus, s))
        .collect::<Result<_>>()?;
    report.w3_rank = bareiss_rank(dense_integer_rows(&images));
    Ok(report)
}

/// Integer rows over the union of supports of `rows` (coefficients must be integral).
pub fn dense_integer_rows(rows: &[GroupRing]) -> Vec<Vec<BigInt>> {
    let mut support: BTreeMap<LatticeVector, usize> = BTreeMap::new();
    for r in rows {
        for (h, _) in r.terms() {
            let n = support.len();
            support.entry(h.clone()).or_insert(n);
        }
    }
    rows.iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); support.len()];
            for (h, c) in r.terms() {
                assert!(c.is_integer(), "integral coefficients expected");
                v[support[h]] = c.to_integer();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    const G: usize = 4;

    fn a(d: usize) -> LatticeVector {
        LatticeVector::a(G, d)
    }

    fn b(d: usize) -> LatticeVector {
        LatticeVector::b(G, d)
    }

    fn zero() -> LatticeVector {
        LatticeVector::zero(G)
    }

    #[test]
    fn x_q_examples() {
        let s = XSym::v1(zero(), a(1), a(2)).unwrap();
        assert_eq!(s.x_q().to_string(), "[0] - [a2] - [a1] + [a1+a2]");
        assert!(XSym::v1(b(3), a(1), zero()).unwrap().x_q().is_zero());
        let swapped = apply_relation(&Relation::Symmetry, &s).unwrap();
        assert_eq!(x_q(&swapped), s.x_q());
    }

    #[test]
    fn witness_validation() {
        assert!(SplittingWitness::standard(G, &[1]).is_ok());
        let bad = SplittingWitness::new(vec![a(1), a(2)], vec![b(1), b(2), a(3), b(3), a(4), b(4)]);
        assert!(bad.is_err());
        let skew = SplittingWitness::new(
            vec![a(1), b(1).scale(2)],
            vec![a(2), b(2), a(3), b(3), a(4), b(4)],
        );
        assert!(skew.is_err());
        assert!(XSym::v1(zero(), a(1), a(1) + a(2)).is_err());
        for d in 1..=G {
            for e in (1..=G).filter(|&e| e != d) {
                XSym::z(zero(), d, e).unwrap();
                XSym::w(zero(), d, e).unwrap();
                XSym::v2(zero(), a(d), -b(e)).unwrap();
                XSym::v2(zero(), b(d), a(e)).unwrap();
            }
        }
    }

    #[test]
    fn relation_examples() {
        let s = XSym::v1(zero(), a(1) + b(1), a(2)).unwrap();
        let out = apply_relation(&Relation::Additivity { x1: a(1) }, &s).unwrap();
        assert_eq!(out.coeff(&zero(), &a(1), &a(2)), q(1, 1));
        assert_eq!(out.coeff(&a(1), &b(1), &a(2)), q(1, 1));
        assert_eq!(x_q(&out), s.x_q());

        let h = b(3);
        let s = XSym::v1(h.clone(), -a(1), a(2)).unwrap();
        let out = apply_relation(&Relation::Inverse, &s).unwrap();
        assert_eq!(out.coeff(&(&h - &a(1)), &a(1), &a(2)), q(-1, 1));
        assert_eq!(x_q(&out), s.x_q());

        let s = XSym::v1(h.clone(), a(1), a(2)).unwrap();
        let out = apply_relation(&Relation::Cube { k: b(1) }, &s).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(x_q(&out), s.x_q());

        assert!(apply_relation(&Relation::Additivity { x1: a(2) }, &s).is_err());
        assert!(apply_relation(&Relation::Cube { k: a(3) }, &s).is_err());
        assert!(apply_relation(&Relation::Vanishing, &s).is_err());
        let v = XSym::v1(h, a(1), zero()).unwrap();
        assert!(apply_relation(&Relation::Vanishing, &v).unwrap().is_empty());
    }

    #[test]
    fn reduce_w1_examples() {
        let s = XSym::v1(a(2), a(1), a(2)).unwrap();
        let out = reduce_to_w1(&s).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.coeff(&zero(), &a(1), &a(2).scale(2)), q(1, 1));
        assert_eq!(out.coeff(&zero(), &a(1), &a(2)), q(-1, 1));

        let s = XSym::v1(zero(), a(1), b(3)).unwrap();
        assert_eq!(reduce_to_w1(&s).unwrap(), XExpr::from_sym(s));

        let s = XSym::v1(
            a(1) - b(2) + a(4).scale(2),
            a(3).scale(2) - b(3),
            a(1) + b(2) - a(4),
        )
        .unwrap();
        let out = reduce_to_w1(&s).unwrap();
        assert_eq!(x_q(&out), s.x_q());
        assert!(out.terms().all(|(t, _)| is_w1(&t.h, &t.x, &t.y)));
    }

    #[test]
    fn p_lift_examples() {
        let z = a(1) + b(2);
        let e = p_lift(&z).unwrap();
        assert_eq!(e, XExpr::from_sym(XSym::v1(zero(), a(1), b(2)).unwrap()));
        let z = a(1) + b(2) + a(3);
        let e = p_lift(&z).unwrap();
        assert_eq!(e.coeff(&zero(), &a(1), &(b(2) + a(3))), q(1, 1));
        assert_eq!(e.coeff(&zero(), &b(2), &a(3)), q(1, 1));
        assert_eq!(e.len(), 2);
        let img = x_q(&e);
        assert!(img.augment().is_zero());
        assert!(img.hmap().iter().all(Zero::is_zero));
        assert!(p_lift(&a(1)).is_err());
    }

    #[test]
    fn projection_examples() {
        let p = project_group_ring(1, &GroupRing::basis(a(1) + b(2))).unwrap();
        assert_eq!(
            p,
            GroupRing::from_int_terms(G, [(&zero(), -1), (&a(1), 1), (&b(2), 1)])
        );
        assert_eq!(
            project_group_ring(1, &GroupRing::basis(a(1))).unwrap(),
            GroupRing::basis(a(1))
        );
        let p = project_group_ring(2, &GroupRing::basis(a(1).scale(2))).unwrap();
        assert_eq!(p, GroupRing::from_int_terms(G, [(&zero(), -1), (&a(1), 2)]));
        assert!(project_group_ring(3, &GroupRing::zero(G)).is_err());
    }

    #[test]
    fn y_layer_examples() {
        let h = b(1);
        let x = XSym::v2(h.clone(), a(1), a(2)).unwrap();
        let s = y_canonicalize(&x.h, &a(1), Some(&a(2))).unwrap();
        assert_eq!(project_group_ring(1, &x.x_q()).unwrap(), y_image(&s));
        let s = y_canonicalize(&(b(1) + a(3)), &a(1), None).unwrap();
        assert_eq!(s.h, b(1));
        assert!(y_canonicalize(&zero(), &(a(1) + b(1)), None).is_err());
        for n in -3..=3 {
            for m in -3..=3 {
                let h = a(2).scale(n) + b(2).scale(m);
                assert!(y_relation_residual(2, &h).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn reduce_w2_examples() {
        let s = YSym::new(1, a(1).scale(2), Dir::B).unwrap();
        let out = reduce_to_w2(&s);
        let want: YExpr = [
            (YSym::new(1, zero(), Dir::A).unwrap(), q(1, 1)),
            (YSym::new(1, b(1), Dir::A).unwrap(), q(-2, 1)),
            (YSym::new(1, b(1).scale(2), Dir::A).unwrap(), q(1, 1)),
            (YSym::new(1, zero(), Dir::B).unwrap(), q(-1, 1)),
            (YSym::new(1, a(1), Dir::B).unwrap(), q(2, 1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(out, want);
        let s = YSym::new(1, zero(), Dir::B).unwrap();
        assert_eq!(
            reduce_to_w2(&s),
            [(s.clone(), q(1, 1))].into_iter().collect()
        );
        for n in -5..=5 {
            let s = YSym::new(3, a(3).scale(n) - b(3), Dir::B).unwrap();
            let out = reduce_to_w2(&s);
            assert!(out.keys().all(is_w2));
            assert_eq!(y_expr_image(&out).unwrap(), y_image(&s));
        }
    }

    #[test]
    fn zw_examples() {
        let z = ZwSym::new(ZwKind::Z, 1, 2).unwrap();
        let w = ZwSym::new(ZwKind::W, 1, 2).unwrap();
        let (t1, t2) = (corner_cycle(G, 1).unwrap(), corner_cycle(G, 2).unwrap());
        assert_eq!(zw_image(G, z).unwrap(), t1.sub(&t2).unwrap());
        assert_eq!(zw_image(G, w).unwrap(), t1.add(&t2).unwrap());
        assert_eq!(zw_pipeline(G, z).unwrap(), t1.sub(&t2).unwrap());
        assert_eq!(zw_pipeline(G, w).unwrap(), t1.add(&t2).unwrap());
        assert!(ZwSym::new(ZwKind::Z, 2, 2).is_err());
        assert_eq!(
            corner_cycle(G, 2).unwrap().to_string(),
            "[0] - [b2] - [a2] + [a2+b2]"
        );
    }

    #[test]
    fn zw_report() {
        for g in [4, 5] {
            let r = zw_relations_check(g).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.w3_rank, g);
        }
        assert!(zw_relations_check(3).is_err());
    }

    #[test]
    fn xexpr_json_round_trip() {
        let mut e = XExpr::from_sym(XSym::z(b(1), 1, 3).unwrap());
        e.add(XSym::v1(zero(), a(1), b(2)).unwrap(), q(-3, 2))
            .unwrap();
        let s = serde_json::to_string(&e).unwrap();
        let back: XExpr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(s.contains("witnessX"));
    }
}
