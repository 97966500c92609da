//! The equivariant intersection pairing on lifted loops.
//!
//! [`closed_form_pairing`] evaluates the pairing from homology data under a caller-asserted
//! separation hypothesis. [`oracle_pairing`] computes the same pairing geometrically: loops are
//! drawn on the ribbon neighbourhood of the one-vertex graph of the surface, every pair of vertex
//! passages is tested for a chord crossing, and each crossing is labelled by the deck
//! transformation aligning the two lifts. [`CoverClass`] and [`cover_rewrite`] implement the
//! commutator-symbol identities.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{same_genus, Error, Result};
use crate::lattice::LatticeVector;
use crate::surfacegroup::{Letter, Word};
use crate::{GroupRing, Rational};

/// Input of [`closed_form_pairing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// Two almost disjoint loops.
    Separated { genus: usize },
    /// A separating commutator paired with the commutator of two loops it separates, shifted by h.
    SeparatingVsCommutator {
        h: LatticeVector,
        first: LatticeVector,
        second: LatticeVector,
    },
}

pub fn closed_form_pairing(input: &ClosedForm) -> Result<GroupRing> {
    match input {
        ClosedForm::Separated { genus } => Ok(GroupRing::zero(*genus)),
        ClosedForm::SeparatingVsCommutator { h, first, second } => {
            let g = h.genus();
            first.check_genus(g)?;
            second.check_genus(g)?;
            let he = h + first;
            let hl = h + second;
            let hel = &he + second;
            Ok(GroupRing::from_int_terms(
                g,
                [(h, 1), (&he, -1), (&hl, -1), (&hel, 1)],
            ))
        }
    }
}

/// Orientation conventions of the fat-graph model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conventions {
    /// Global sign applied to every chord crossing.
    pub crossing_sign: i64,
    /// Sign applied to the lattice label of every crossing.
    pub label_sign: i64,
}

impl Conventions {
    pub const ALL: [Conventions; 4] = [
        Conventions {
            crossing_sign: 1,
            label_sign: 1,
        },
        Conventions {
            crossing_sign: 1,
            label_sign: -1,
        },
        Conventions {
            crossing_sign: -1,
            label_sign: 1,
        },
        Conventions {
            crossing_sign: -1,
            label_sign: -1,
        },
    ];
}

/// The conventions selected by [`calibrate`], frozen.
pub const FROZEN: Conventions = Conventions {
    crossing_sign: 1,
    label_sign: 1,
};

/// How strands sharing a band are ordered across its width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandOrder {
    FirstLoopFirst,
    SecondLoopFirst,
    Shuffled(u64),
}

/// Options for [`oracle_pairing_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub conventions: Conventions,
    pub band_order: BandOrder,
    /// Cyclically reduce each loop before drawing it.
    pub pull_tight: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            conventions: FROZEN,
            band_order: BandOrder::FirstLoopFirst,
            pull_tight: true,
        }
    }
}

/// Slot of the half-edge through which a traversal of `l` leaves the vertex. Around the vertex,
/// block `d` contributes the four consecutive slots α_d, β_d⁻¹, α_d⁻¹, β_d, so that the single
/// face of the ribbon graph reads the product of the commutators [α_d, β_d].
fn departure_slot(l: Letter) -> usize {
    let base = 4 * (l.block() - 1);
    match (l.is_alpha(), l.sign > 0) {
        (true, true) => base,
        (false, false) => base + 1,
        (true, false) => base + 2,
        (false, true) => base + 3,
    }
}

struct Strand {
    letters: Vec<Letter>,
    /// Lift label of the vertex reached after each letter.
    labels: Vec<LatticeVector>,
}

fn strand(w: &Word, h: &LatticeVector, pull_tight: bool) -> Strand {
    let (base, letters) = if pull_tight {
        let (u, core) = w.cyclic_reduction();
        (h + &u.homology_class(), core.letters().to_vec())
    } else {
        (h.clone(), w.letters().to_vec())
    };
    let g = w.genus();
    let mut cur = base;
    let labels = letters
        .iter()
        .map(|l| {
            cur = &cur + &l.class(g);
            cur.clone()
        })
        .collect();
    Strand { letters, labels }
}

/// Chords of a strand through the vertex disk: `(arrival point, departure point, label)`.
fn chords<'a>(
    s: &'a Strand,
    points: &'a [(usize, usize)],
) -> impl Iterator<Item = (usize, usize, &'a LatticeVector)> + 'a {
    let n = s.letters.len();
    (0..n).map(move |i| (points[i].1, points[(i + 1) % n].0, &s.labels[i]))
}

fn in_arc(from: usize, to: usize, p: usize, modulus: usize) -> bool {
    let d = |x: usize| (x + modulus - from) % modulus;
    p != from && d(p) < d(to)
}

/// Oracle pairing with the frozen conventions.
pub fn oracle_pairing(
    x: &Word,
    y: &Word,
    h1: &LatticeVector,
    h2: &LatticeVector,
) -> Result<GroupRing> {
    oracle_pairing_with(x, y, h1, h2, &OracleOptions::default())
}

/// Equivariant intersection number `Σ_k ι(k·x̃, ỹ) [k]` of the lifts of `x` from `h1` and of
/// `y` from `h2`, computed on the ribbon graph.
pub fn oracle_pairing_with(
    x: &Word,
    y: &Word,
    h1: &LatticeVector,
    h2: &LatticeVector,
    opts: &OracleOptions,
) -> Result<GroupRing> {
    let g = x.genus();
    same_genus(g, y.genus())?;
    h1.check_genus(g)?;
    h2.check_genus(g)?;
    for w in [x, y] {
        if !w.homology_class().is_zero() {
            return Err(Error::Precondition(format!(
                "loop {w} has nonzero homology class {}",
                w.homology_class()
            )));
        }
    }
    let sx = strand(x, h1, opts.pull_tight);
    let sy = strand(y, h2, opts.pull_tight);
    let mut out = GroupRing::zero(g);
    if sx.letters.is_empty() || sy.letters.is_empty() {
        return Ok(out);
    }

    // Band occupancy: traversal (loop, index) per generator, ordered across the band width.
    let mut bands: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 2 * g];
    let order: [usize; 2] = match opts.band_order {
        BandOrder::SecondLoopFirst => [1, 0],
        _ => [0, 1],
    };
    let strands = [&sx, &sy];
    for &s in &order {
        for (i, l) in strands[s].letters.iter().enumerate() {
            bands[l.coord()].push((s, i));
        }
    }
    if let BandOrder::Shuffled(seed) = opts.band_order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for b in &mut bands {
            b.shuffle(&mut rng);
        }
    }
    let width = bands.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let modulus = 8 * g * width;

    // Boundary points (departure, arrival) of every traversal. The two ends of a band meet the
    // vertex with opposite orientations, so the width order is reversed at the head.
    let mut points: [Vec<(usize, usize)>; 2] = [
        vec![(0, 0); sx.letters.len()],
        vec![(0, 0); sy.letters.len()],
    ];
    for band in &bands {
        let m = band.len();
        for (t, &(s, i)) in band.iter().enumerate() {
            let l = strands[s].letters[i];
            let tail = departure_slot(Letter { sign: 1, ..l });
            let head = departure_slot(Letter { sign: -1, ..l });
            let at_tail = tail * width + t;
            let at_head = head * width + (m - 1 - t);
            points[s][i] = if l.sign > 0 {
                (at_tail, at_head)
            } else {
                (at_head, at_tail)
            };
        }
    }

    let cx: Vec<_> = chords(&sx, &points[0]).collect();
    let cy: Vec<_> = chords(&sy, &points[1]).collect();
    for &(a, b, px) in &cx {
        for &(c, d, qy) in &cy {
            let eps = in_arc(a, b, c, modulus) as i64 - in_arc(a, b, d, modulus) as i64;
            if eps == 0 {
                continue;
            }
            let label = (qy - px).scale(opts.conventions.label_sign);
            out.add_term(
                label,
                Rational::from_integer((opts.conventions.crossing_sign * eps).into()),
            );
        }
    }
    Ok(out)
}

/// The calibration battery: [α_d, β_d] against [u, v] with u ∈ {α_d, β_d} and
/// v ∈ {α_e, β_e}, at h = 0, paired with the expected closed-form value.
pub fn calibration_battery(genus: usize, d: usize, e: usize) -> Vec<(Word, Word, GroupRing)> {
    let separating = Word::commutator(
        &Word::letter(genus, Letter::alpha(d)),
        &Word::letter(genus, Letter::beta(d)),
    )
    .expect("same genus");
    let mut out = Vec::new();
    for first in [Letter::alpha(d), Letter::beta(d)] {
        for second in [Letter::alpha(e), Letter::beta(e)] {
            let (we, wl) = (Word::letter(genus, first), Word::letter(genus, second));
            let c = Word::commutator(&we, &wl).expect("same genus");
            let want = closed_form_pairing(&ClosedForm::SeparatingVsCommutator {
                h: LatticeVector::zero(genus),
                first: we.homology_class(),
                second: wl.homology_class(),
            })
            .expect("consistent genus");
            out.push((separating.clone(), c, want));
        }
    }
    out
}

/// All conventions under which the oracle reproduces the calibration battery for the block
/// pairs (1, 2) and (2, 1).
pub fn calibrate(genus: usize) -> Vec<Conventions> {
    let battery: Vec<_> = calibration_battery(genus, 1, 2)
        .into_iter()
        .chain(calibration_battery(genus, 2, 1))
        .collect();
    let zero = LatticeVector::zero(genus);
    Conventions::ALL
        .into_iter()
        .filter(|c| {
            let opts = OracleOptions {
                conventions: *c,
                ..OracleOptions::default()
            };
            battery.iter().all(|(x, y, want)| {
                oracle_pairing_with(x, y, &zero, &zero, &opts)
                    .map(|v| &v == want)
                    .unwrap_or(false)
            })
        })
        .collect()
}

/// A commutator symbol ⟨x, y⟩^h or a lifted loop ⟨z⟩^h.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CoverSym {
    Comm(Word, Word, LatticeVector),
    Elt(Word, LatticeVector),
}

impl CoverSym {
    /// The loop and base label represented by the symbol.
    pub fn loop_word(&self) -> Result<(Word, LatticeVector)> {
        match self {
            CoverSym::Comm(x, y, h) => Ok((Word::commutator(x, y)?, h.clone())),
            CoverSym::Elt(z, h) => Ok((z.clone(), h.clone())),
        }
    }
}

impl fmt::Display for CoverSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverSym::Comm(x, y, h) => write!(f, "<{x}, {y}>^{h}"),
            CoverSym::Elt(z, h) => write!(f, "<{z}>^{h}"),
        }
    }
}

/// A rational combination of cover symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverClass {
    genus: usize,
    terms: BTreeMap<CoverSym, Rational>,
}

impl CoverClass {
    pub fn zero(genus: usize) -> Self {
        CoverClass {
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoverSym, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self += c · sym`, validating genus and the trivial-homology condition on loops.
    pub fn add(&mut self, sym: CoverSym, c: Rational) -> Result<()> {
        match &sym {
            CoverSym::Comm(x, y, h) => {
                same_genus(self.genus, x.genus())?;
                same_genus(self.genus, y.genus())?;
                h.check_genus(self.genus)?;
            }
            CoverSym::Elt(z, h) => {
                same_genus(self.genus, z.genus())?;
                h.check_genus(self.genus)?;
                if !z.homology_class().is_zero() {
                    return Err(Error::Precondition(format!(
                        "loop symbol {z} has nonzero homology"
                    )));
                }
            }
        }
        self.add_unchecked(sym, c);
        Ok(())
    }

    fn add_unchecked(&mut self, sym: CoverSym, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(sym).or_insert_with(Rational::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// `Σ c · r(⟨x⟩^{h1}, sym)` through the oracle.
    pub fn oracle_against(&self, x: &Word, h1: &LatticeVector) -> Result<GroupRing> {
        let mut out = GroupRing::zero(self.genus);
        for (sym, c) in &self.terms {
            let (w, h) = sym.loop_word()?;
            out.add_scaled(&oracle_pairing(x, &w, h1, &h)?, c)?;
        }
        Ok(out)
    }
}

impl fmt::Display for CoverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){s}")?;
        }
        Ok(())
    }
}

/// Generator order used to orient single-letter symbols: α's before β's, then by block.
fn letter_key(l: Letter) -> (bool, usize) {
    (!l.is_alpha(), l.block())
}

/// Rewrites a class into symbols ⟨s, t⟩^h with `s`, `t` distinct generators and `s` before `t`.
///
/// Loop symbols are first expanded by sorting their letters, each transposition contributing a
/// commutator symbol. Commutator symbols then shrink their first argument letter by letter.
pub fn cover_rewrite(c: &CoverClass) -> Result<CoverClass> {
    let g = c.genus;
    let mut out = CoverClass::zero(g);
    let mut stack: Vec<(CoverSym, Rational)> = c
        .terms
        .iter()
        .map(|(s, v)| (s.clone(), v.clone()))
        .collect();
    stack.reverse();
    while let Some((sym, coeff)) = stack.pop() {
        match sym {
            CoverSym::Elt(z, h) => {
                for (s, sign) in expand_loop(&z, &h)? {
                    stack.push((s, &coeff * Rational::from_integer(sign.into())));
                }
            }
            CoverSym::Comm(x, y, h) => {
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                if x.len() > 1 {
                    let first = Word::letter(g, x.letters()[0]);
                    let rest = Word::from_letters(g, x.letters()[1..].iter().copied())?;
                    let h2 = &h + &first.homology_class();
                    stack.push((CoverSym::Comm(rest, y.clone(), h2), coeff.clone()));
                    stack.push((CoverSym::Comm(first, y, h), coeff));
                    continue;
                }
                let l = x.letters()[0];
                if l.sign < 0 {
                    let h2 = &h - &l.inverse().class(g);
                    stack.push((CoverSym::Comm(Word::letter(g, l.inverse()), y, h2), -coeff));
                    continue;
                }
                if y.len() > 1 || y.letters()[0].sign < 0 {
                    stack.push((CoverSym::Comm(y, x, h), -coeff));
                    continue;
                }
                let m = y.letters()[0];
                if l.gen == m.gen {
                    continue;
                }
                if letter_key(l) > letter_key(m) {
                    stack.push((CoverSym::Comm(y, x, h), -coeff));
                    continue;
                }
                out.add_unchecked(CoverSym::Comm(x, y, h), coeff);
            }
        }
    }
    Ok(out)
}

/// Writes ⟨z⟩^h as a signed sum of single-letter commutator symbols by bubble-sorting the
/// letters of `z` by generator: `u·l·m·v = (u[l,m]u⁻¹)·(u·m·l·v)`.
fn expand_loop(z: &Word, h: &LatticeVector) -> Result<Vec<(CoverSym, i64)>> {
    let g = z.genus();
    let mut letters = z.letters().to_vec();
    let mut out = Vec::new();
    let n = letters.len();
    for pass in 0..n {
        let mut prefix = h.clone();
        let mut swapped = false;
        for i in 0..n.saturating_sub(1 + pass) {
            let (l, m) = (letters[i], letters[i + 1]);
            if l.gen > m.gen {
                out.push((
                    CoverSym::Comm(Word::letter(g, l), Word::letter(g, m), prefix.clone()),
                    1,
                ));
                letters.swap(i, i + 1);
                swapped = true;
            }
            prefix = &prefix + &letters[i].class(g);
        }
        if !swapped {
            break;
        }
    }
    debug_assert!(Word::from_letters(g, letters)?.is_empty());
    Ok(out)
}
