//! N-qubit Pauli observables in symplectic form.
//!
//! A word is a pair of bitmasks `(z, x)`; bit `i` refers to qubit `i`, which is
//! the leftmost character in text. The letter at a qubit is read off as
//! `(0,0)=I, (1,0)=Z, (0,1)=X, (1,1)=Y`. Phases are tracked separately as
//! powers of `i`, fixed by the standard matrices (so `ZX = iY`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    Dimension { left: usize, right: usize },
    #[error("illegal character {ch:?} at position {pos}")]
    IllegalChar { ch: char, pos: usize },
    #[error("empty observable")]
    Empty,
    #[error("{0} qubits exceeds the supported maximum of 64")]
    TooManyQubits(usize),
    #[error("empty product")]
    EmptyProduct,
}

/// Single-qubit letter. The declaration order is the display order Z, X, Y, I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Z,
    X,
    Y,
    I,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Z, Letter::X, Letter::Y, Letter::I];

    #[inline]
    pub fn from_bits(z: bool, x: bool) -> Letter {
        match (z, x) {
            (false, false) => Letter::I,
            (true, false) => Letter::Z,
            (false, true) => Letter::X,
            (true, true) => Letter::Y,
        }
    }

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::Z => (true, false),
            Letter::X => (false, true),
            Letter::Y => (true, true),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::Z => 'Z',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::I => 'I',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'Z' => Some(Letter::Z),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'I' => Some(Letter::I),
            _ => None,
        }
    }

    /// Index into `[Z, X, Y]`, `None` for the identity.
    #[inline]
    pub fn nontrivial_index(self) -> Option<usize> {
        match self {
            Letter::Z => Some(0),
            Letter::X => Some(1),
            Letter::Y => Some(2),
            Letter::I => None,
        }
    }
}

/// `i^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn new(exponent: i64) -> Phase {
        Phase(exponent.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) & 3)
    }

    pub fn is_real(self) -> bool {
        self.0 & 1 == 0
    }

    /// `Some(±1)` for a real phase.
    pub fn sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// An N-qubit Pauli word (Hermitian, no phase).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliObservable {
    n: u8,
    z: u64,
    x: u64,
}

#[inline]
fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliObservable {
    pub fn identity(n: usize) -> PauliObservable {
        assert!(n <= MAX_QUBITS && n > 0, "qubit count {n} out of range");
        PauliObservable { n: n as u8, z: 0, x: 0 }
    }

    pub fn from_masks(n: usize, z: u64, x: u64) -> Result<PauliObservable, PauliError> {
        if n == 0 {
            return Err(PauliError::Empty);
        }
        if n > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n));
        }
        Ok(PauliObservable { n: n as u8, z: z & mask(n), x: x & mask(n) })
    }

    /// Build from letters, qubit 0 first.
    pub fn from_letters(letters: &[Letter]) -> Result<PauliObservable, PauliError> {
        let mut p = PauliObservable::from_masks(letters.len(), 0, 0)?;
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        Ok(p)
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> PauliObservable {
        let mut p = PauliObservable::identity(n);
        p.set(qubit, letter);
        p
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }
    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }
    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn letter(&self, qubit: usize) -> Letter {
        debug_assert!(qubit < self.n_qubits());
        Letter::from_bits((self.z >> qubit) & 1 == 1, (self.x >> qubit) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, letter: Letter) {
        assert!(qubit < self.n_qubits(), "qubit {qubit} out of range");
        let (z, x) = letter.bits();
        let b = 1u64 << qubit;
        self.z = (self.z & !b) | if z { b } else { 0 };
        self.x = (self.x & !b) | if x { b } else { 0 };
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n_qubits()).map(|q| self.letter(q)).collect()
    }

    #[inline]
    pub fn support(&self) -> u64 {
        self.z | self.x
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// Restrict to the given qubits (in the given order).
    pub fn select_qubits(&self, qubits: &[usize]) -> PauliObservable {
        let mut p = PauliObservable::identity(qubits.len());
        for (k, &q) in qubits.iter().enumerate() {
            p.set(k, self.letter(q));
        }
        p
    }

    /// Count of qubits on which the letters differ and are both non-identity.
    #[inline]
    pub fn anticommuting_positions(&self, other: &PauliObservable) -> u32 {
        ((self.z & other.x) ^ (self.x & other.z)).count_ones()
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliObservable) -> bool {
        self.anticommuting_positions(other) & 1 == 0
    }

    /// Product `self * other` with its phase; no dimension check.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &PauliObservable) -> (PauliObservable, Phase) {
        // Write each Hermitian word as i^{z.x} X^x Z^z. Moving Z^{a_z} past X^{b_x}
        // costs (-1)^{a_z.b_x}; the result is renormalised by i^{-c_z.c_x}.
        let z = self.z ^ other.z;
        let x = self.x ^ other.x;
        let e = (self.z & self.x).count_ones() as i64 + (other.z & other.x).count_ones() as i64
            - (z & x).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64;
        (PauliObservable { n: self.n, z, x }, Phase::new(e))
    }

    pub fn to_text(&self) -> String {
        (0..self.n_qubits()).map(|q| self.letter(q).to_char()).collect()
    }

    /// Sort key following the display order Z < X < Y < I, qubit 0 first.
    pub fn display_key(&self) -> Vec<Letter> {
        self.letters()
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PauliObservable {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for PauliObservable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for PauliObservable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn parse(text: &str) -> Result<PauliObservable, PauliError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(PauliError::Empty);
    }
    let letters = text
        .chars()
        .enumerate()
        .map(|(pos, ch)| Letter::from_char(ch).ok_or(PauliError::IllegalChar { ch, pos }))
        .collect::<Result<Vec<_>, _>>()?;
    PauliObservable::from_letters(&letters)
}

pub fn format(obs: &PauliObservable) -> String {
    obs.to_text()
}

fn check_dims(a: &PauliObservable, b: &PauliObservable) -> Result<(), PauliError> {
    if a.n != b.n {
        return Err(PauliError::Dimension { left: a.n_qubits(), right: b.n_qubits() });
    }
    Ok(())
}

pub fn commutes(a: &PauliObservable, b: &PauliObservable) -> Result<bool, PauliError> {
    check_dims(a, b)?;
    Ok(a.commutes_unchecked(b))
}

/// Ordered matrix product of the list, returned as a Pauli word and a phase.
pub fn product(list: &[PauliObservable]) -> Result<(PauliObservable, Phase), PauliError> {
    let (first, rest) = list.split_first().ok_or(PauliError::EmptyProduct)?;
    let mut acc = *first;
    let mut phase = Phase::ONE;
    for p in rest {
        check_dims(&acc, p)?;
        let (q, ph) = acc.mul_unchecked(p);
        acc = q;
        phase = phase.mul(ph);
    }
    Ok((acc, phase))
}

/// Phase of the ordered product of single-qubit letters.
pub fn letter_product(letters: &[Letter]) -> (Letter, Phase) {
    let mut acc = PauliObservable::identity(1);
    let mut phase = Phase::ONE;
    for &l in letters {
        let (q, ph) = acc.mul_unchecked(&PauliObservable::single(1, 0, l));
        acc = q;
        phase = phase.mul(ph);
    }
    (acc.letter(0), phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliObservable {
        s.parse().unwrap()
    }

    // Dense-matrix oracle for products, independent of the bit formula.
    type Mat = Vec<Vec<Complex64>>;

    fn letter_matrix(l: Letter) -> Mat {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match l {
            Letter::I => vec![vec![o, z], vec![z, o]],
            Letter::Z => vec![vec![o, z], vec![z, -o]],
            Letter::X => vec![vec![z, o], vec![o, z]],
            Letter::Y => vec![vec![z, -i], vec![i, z]],
        }
    }

    fn kron(a: &Mat, b: &Mat) -> Mat {
        let (ra, rb) = (a.len(), b.len());
        let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
        for i in 0..ra {
            for j in 0..ra {
                for k in 0..rb {
                    for l in 0..rb {
                        out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn matmul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn dense(w: &PauliObservable) -> Mat {
        let mut m = letter_matrix(w.letter(0));
        for q in 1..w.n_qubits() {
            m = kron(&m, &letter_matrix(w.letter(q)));
        }
        m
    }

    fn close(a: &Mat, b: &Mat) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn phase_value(ph: Phase) -> Complex64 {
        Complex64::new(0.0, 1.0).powu(ph.exponent() as u32)
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&p("ZZ"), &p("XX")).unwrap());
        assert!(!commutes(&p("ZI"), &p("XI")).unwrap());
        assert!(commutes(&p("ZI"), &p("ZIX")).is_err());
    }

    #[test]
    fn mermin_square_lines_commute_and_multiply() {
        let rows = [["ZI", "IX", "ZX"], ["IZ", "XI", "XZ"], ["ZZ", "XX", "YY"]];
        let mut signs = vec![];
        for r in 0..3 {
            let row: Vec<_> = rows[r].iter().map(|s| p(s)).collect();
            let col: Vec<_> = (0..3).map(|k| p(rows[k][r])).collect();
            for line in [row, col] {
                for a in &line {
                    for b in &line {
                        assert!(commutes(a, b).unwrap());
                    }
                }
                let (w, ph) = product(&line).unwrap();
                assert!(w.is_identity());
                signs.push(ph.sign().unwrap());
            }
        }
        assert_eq!(signs.iter().filter(|&&s| s == -1).count(), 1);
        assert_eq!(product(&[p("ZZ"), p("XX"), p("YY")]).unwrap(), (p("II"), Phase::MINUS_ONE));
    }

    #[test]
    fn product_examples() {
        assert_eq!(product(&[p("ZI"), p("ZI")]).unwrap(), (p("II"), Phase::ONE));
        let ghz = [p("ZZZ"), p("ZXX"), p("XZX"), p("XXZ")];
        assert_eq!(product(&ghz).unwrap(), (p("III"), Phase::MINUS_ONE));
        assert_eq!(product(&[p("Z"), p("X")]).unwrap(), (p("Y"), Phase::I));
        assert_eq!(letter_product(&[Letter::Z, Letter::X, Letter::Y]).1, Phase::I);
        assert_eq!(letter_product(&[Letter::Z, Letter::Y, Letter::X]).1, Phase::MINUS_I);
        assert!(product(&[]).is_err());
        assert!(product(&[p("Z"), p("ZZ")]).is_err());
    }

    #[test]
    fn parse_format() {
        let w = p("ZIX");
        assert_eq!(w.letter(0), Letter::Z);
        assert_eq!(w.letter(1), Letter::I);
        assert_eq!(w.letter(2), Letter::X);
        assert_eq!(p("YYYY").to_text(), "YYYY");
        assert_eq!(parse(""), Err(PauliError::Empty));
        assert!(matches!(parse("ZQ"), Err(PauliError::IllegalChar { ch: 'Q', pos: 1 })));
    }

    #[test]
    fn round_trip_all_words_up_to_six_qubits() {
        for n in 1..=6usize {
            for code in 0..(1u64 << (2 * n)) {
                let w = PauliObservable::from_masks(n, code & mask(n), code >> n).unwrap();
                assert_eq!(parse(&format(&w)).unwrap(), w);
            }
        }
    }

    fn word(n: usize) -> impl Strategy<Value = PauliObservable> {
        (any::<u64>(), any::<u64>()).prop_map(move |(z, x)| PauliObservable::from_masks(n, z, x).unwrap())
    }

    proptest! {
        #[test]
        fn product_matches_dense_matrices(a in word(3), b in word(3)) {
            let (w, ph) = product(&[a, b]).unwrap();
            let lhs = matmul(&dense(&a), &dense(&b));
            let s = phase_value(ph);
            let rhs: Mat = dense(&w).into_iter().map(|r| r.into_iter().map(|v| v * s).collect()).collect();
            prop_assert!(close(&lhs, &rhs));
            // Commutation against the dense commutator.
            let ba = matmul(&dense(&b), &dense(&a));
            prop_assert_eq!(commutes(&a, &b).unwrap(), close(&lhs, &ba));
        }

        #[test]
        fn algebraic_laws(a in word(5), b in word(5), c in word(5)) {
            prop_assert_eq!(commutes(&a, &b).unwrap(), commutes(&b, &a).unwrap());
            prop_assert!(commutes(&a, &a).unwrap());
            prop_assert!(commutes(&a, &PauliObservable::identity(5)).unwrap());
            prop_assert_eq!(product(&[a, a]).unwrap(), (PauliObservable::identity(5), Phase::ONE));
            let (ab, p1) = product(&[a, b]).unwrap();
            let (abc1, p2) = product(&[ab, c]).unwrap();
            let (bc, p3) = product(&[b, c]).unwrap();
            let (abc2, p4) = product(&[a, bc]).unwrap();
            prop_assert_eq!(abc1, abc2);
            prop_assert_eq!(p1.mul(p2), p3.mul(p4));
            if commutes(&a, &b).unwrap() {
                prop_assert_eq!(product(&[a, b]).unwrap(), product(&[b, a]).unwrap());
                prop_assert!(p1.is_real());
            }
        }
    }
}
