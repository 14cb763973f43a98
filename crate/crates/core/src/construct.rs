//! Constructions of spherical and perfect bitrades.
//!
//! Spherical bitrades live in `H(qr, q)` and perfect bitrades in
//! `H(qr + 1, q)`: their signed indicator `chi_T0 - chi_T1` is an
//! eigenfunction for eigenvalue 0 (resp. -1), and the eigenvalues of
//! `H(n, q)` are `n(q-1) - qi`.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::field::build_field;
use crate::hamming::{Automorphism, Code, HammingParams, Word};
use crate::linear::{
    add_words, default_multipliers, rs_mds_code, sum_zero_code, swapped_multipliers,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitradeKind {
    Spherical,
    Perfect,
}

impl BitradeKind {
    /// The eigenvalue of `chi_T0 - chi_T1`.
    pub fn eigenvalue(self) -> i64 {
        match self {
            BitradeKind::Spherical => 0,
            BitradeKind::Perfect => -1,
        }
    }

    /// Word lengths admitting this kind, as a residue mod `q`.
    fn residue(self) -> usize {
        match self {
            BitradeKind::Spherical => 0,
            BitradeKind::Perfect => 1,
        }
    }

    /// Checks `n = qr` (spherical) or `n = qr + 1` (perfect) with `r >= 1`.
    pub fn check_length(self, params: HammingParams) -> Result<()> {
        let (n, q) = (params.n(), params.q());
        if n == 1 && self == BitradeKind::Perfect {
            // K_q: any two vertices balance every ball, but the parts are
            // single words and the distance-3 characterisation breaks down
            return param(format!(
                "perfect bitrades need n = qr + 1 with r >= 1; H(1,{q}) is the degenerate complete graph"
            ));
        }
        if n % q == self.residue() {
            return Ok(());
        }
        let lambda = self.eigenvalue();
        let rule = match self {
            BitradeKind::Spherical => "n must be ≡ 0 (mod q) for spherical bitrades",
            BitradeKind::Perfect => "n must be ≡ 1 (mod q) for perfect bitrades",
        };
        param(format!(
            "no {self} bitrade exists in H({n},{q}): {rule}, since chi_T0 - chi_T1 \
             would be a {lambda}-eigenfunction and the eigenvalues of H(n,q) are n(q-1) - qi"
        ))
    }
}

impl fmt::Display for BitradeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BitradeKind::Spherical => "spherical",
            BitradeKind::Perfect => "perfect",
        })
    }
}

impl std::str::FromStr for BitradeKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spherical" => Ok(BitradeKind::Spherical),
            "perfect" => Ok(BitradeKind::Perfect),
            other => param(format!("unknown bitrade kind '{other}'")),
        }
    }
}

/// An ordered pair of disjoint codes claimed to be a bitrade of the given kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitrade {
    params: HammingParams,
    t0: Code,
    t1: Code,
    kind: BitradeKind,
    unverified: bool,
}

impl Bitrade {
    /// Validates shared parameters, disjointness and the length condition for
    /// `kind`. The bitrade property itself is left to [`crate::verify`].
    pub fn new(t0: Code, t1: Code, kind: BitradeKind) -> Result<Self> {
        let b = Self::candidate(t0, t1, kind)?;
        if let Some(w) = b.t0.iter().find(|w| b.t1.contains(w)) {
            return param(format!("word {w} occurs in both parts"));
        }
        kind.check_length(b.params)?;
        Ok(b)
    }

    /// A pair of codes to be checked, with no validation beyond matching
    /// parameters. The result is marked unverified.
    pub fn candidate(t0: Code, t1: Code, kind: BitradeKind) -> Result<Self> {
        if t0.params() != t1.params() {
            return param(format!(
                "parts live in different graphs: {} vs {}",
                t0.params(),
                t1.params()
            ));
        }
        Ok(Self {
            params: t0.params(),
            t0,
            t1,
            kind,
            unverified: true,
        })
    }

    pub fn params(&self) -> HammingParams {
        self.params
    }

    pub fn t0(&self) -> &Code {
        &self.t0
    }

    pub fn t1(&self) -> &Code {
        &self.t1
    }

    pub fn part(&self, i: usize) -> &Code {
        if i == 0 {
            &self.t0
        } else {
            &self.t1
        }
    }

    pub fn kind(&self) -> BitradeKind {
        self.kind
    }

    /// `|T0|`.
    pub fn volume(&self) -> usize {
        self.t0.len()
    }

    /// True when this bitrade was loaded, searched, or derived from inputs
    /// that were never verified.
    pub fn unverified(&self) -> bool {
        self.unverified
    }

    pub fn set_unverified(&mut self, unverified: bool) {
        self.unverified = unverified;
    }

    pub fn into_parts(self) -> (Code, Code) {
        (self.t0, self.t1)
    }

    /// Words of both parts tagged with their part index, `T0` first.
    pub fn tagged_words(&self) -> impl Iterator<Item = (&Word, usize)> + Clone {
        self.t0
            .iter()
            .map(|w| (w, 0))
            .chain(self.t1.iter().map(|w| (w, 1)))
    }

    /// Image under a graph automorphism; automorphisms preserve the property.
    pub fn map(&self, aut: &Automorphism) -> Result<Bitrade> {
        let t0 = Code::from_words(self.params, self.t0.iter().map(|w| aut.apply(w)))?;
        let t1 = Code::from_words(self.params, self.t1.iter().map(|w| aut.apply(w)))?;
        Ok(Bitrade {
            t0,
            t1,
            ..self.clone()
        })
    }

    pub fn swapped(&self) -> Bitrade {
        Bitrade {
            t0: self.t1.clone(),
            t1: self.t0.clone(),
            ..self.clone()
        }
    }
}

/// Parity of a permutation in one-line notation, by inversion count.
pub fn is_even(perm: &[u16]) -> bool {
    let inversions = perm
        .iter()
        .tuple_combinations()
        .filter(|(a, b)| a > b)
        .count();
    inversions % 2 == 0
}

/// The words `(pi(0), ..., pi(q-1))`: `T0` from even and `T1` from odd
/// permutations `pi` of the alphabet. A spherical bitrade in `H(q, q)` of
/// volume `q!/2`.
pub fn alt_bitrade(q: usize) -> Result<Bitrade> {
    if q < 3 {
        return param(format!(
            "alternating-group bitrade needs q >= 3, got {q}: H({q},{q}) has no spherical bitrade"
        ));
    }
    let params = HammingParams::new(q, q)?;
    let mut t0 = Code::new(params);
    let mut t1 = Code::new(params);
    for perm in (0..q as u16).permutations(q) {
        let even = is_even(&perm);
        let w = params.word(perm)?;
        if even {
            t0.insert(w)?;
        } else {
            t1.insert(w)?;
        }
    }
    let mut b = Bitrade::new(t0, t1, BitradeKind::Spherical)?;
    b.unverified = false;
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MdsVariant {
    /// `C1` uses the `C0` multipliers with positions 1 and 2 swapped.
    Swap,
    /// `C1 = C0 + shift`; `None` picks `(1, -1, 0, ..., 0)`.
    Coset(Option<Word>),
}

/// `(C0 \ C1, C1 \ C0)` for distance-3 MDS codes `C0 != C1` inside the
/// sum-zero code of length `q`.
pub fn mds_bitrade(q: usize, variant: MdsVariant) -> Result<Bitrade> {
    if q < 3 {
        return param(format!("MDS bitrade needs q >= 3, got {q}"));
    }
    let field = Arc::new(build_field(q)?);
    let m0 = default_multipliers(&field);
    let c0_code = rs_mds_code(field.clone(), q, &m0)?;
    let c0 = c0_code.codewords()?;
    let params = c0.params();
    let (t0, t1) = match variant {
        MdsVariant::Swap => {
            let c1 = rs_mds_code(field.clone(), q, &swapped_multipliers(&m0))?.codewords()?;
            if c0 == c1 {
                return param(format!(
                    "over GF({q}) swapping two multipliers does not change the code \
                     (every permutation of GF(3) is affine), so C0 = C1 and the trade is empty"
                ));
            }
            (c0.difference(&c1), c1.difference(&c0))
        }
        MdsVariant::Coset(shift) => {
            let shift = match shift {
                Some(s) => s,
                None => {
                    let mut s = vec![0u16; q];
                    s[0] = 1;
                    s[1] = field.neg(1);
                    params.word(s)?
                }
            };
            if shift.params() != params {
                return param(format!("coset shift {shift} does not belong to {params}"));
            }
            let m = sum_zero_code(field.clone(), q)?;
            if !m.is_codeword(&shift) {
                return param(format!("coset shift {shift} must have coordinate sum zero"));
            }
            if c0_code.is_codeword(&shift) {
                return param(format!(
                    "coset shift {shift} lies in C0; the coset would equal C0"
                ));
            }
            let c1 = Code::from_words(
                params,
                c0.iter()
                    .map(|w| add_words(&field, w, &shift))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            (c0, c1)
        }
    };
    let mut b = Bitrade::new(t0, t1, BitradeKind::Spherical)?;
    b.unverified = false;
    Ok(b)
}

fn require_spherical(b: &Bitrade, what: &str) -> Result<()> {
    if b.kind != BitradeKind::Spherical {
        return param(format!(
            "{what} needs a spherical bitrade, got a {} one",
            b.kind
        ));
    }
    Ok(())
}

/// `(S0 x S0' ∪ S1 x S1', S0 x S1' ∪ S1 x S0')`, spherical in
/// `H(q(r + r'), q)` with volume `2 vol(b) vol(b')`.
pub fn tensor_combine(b: &Bitrade, other: &Bitrade) -> Result<Bitrade> {
    require_spherical(b, "tensor_combine")?;
    require_spherical(other, "tensor_combine")?;
    if b.params.q() != other.params.q() {
        return param(format!(
            "alphabet mismatch: q = {} vs q = {}",
            b.params.q(),
            other.params.q()
        ));
    }
    let params = HammingParams::new(b.params.n() + other.params.n(), b.params.q())?;
    let mut t0 = Code::new(params);
    let mut t1 = Code::new(params);
    for (part, target) in [(0usize, &mut t0), (1, &mut t1)] {
        for i in 0..2 {
            for w in b.part(i).product(other.part(i ^ part))?.iter() {
                target.insert(w.clone())?;
            }
        }
    }
    let mut out = Bitrade::new(t0, t1, BitradeKind::Spherical)?;
    out.unverified = b.unverified || other.unverified;
    Ok(out)
}

/// `b ⊗ b ⊗ ... ⊗ b` with `r` factors.
pub fn tensor_power(b: &Bitrade, r: usize) -> Result<Bitrade> {
    if r == 0 {
        return param("tensor power needs r >= 1");
    }
    require_spherical(b, "tensor_power")?;
    let mut acc = b.clone();
    for _ in 1..r {
        acc = tensor_combine(&acc, b)?;
    }
    Ok(acc)
}

/// `(S0 x {0} ∪ S1 x {1}, S0 x {1} ∪ S1 x {0})`, perfect in `H(qr + 1, q)`.
pub fn lift_to_perfect(b: &Bitrade) -> Result<Bitrade> {
    require_spherical(b, "lift_to_perfect")?;
    let mut t0 = b.t0.extend_with(0)?;
    let mut t1 = b.t0.extend_with(1)?;
    for w in b.t1.extend_with(1)?.iter() {
        t0.insert(w.clone())?;
    }
    for w in b.t1.extend_with(0)?.iter() {
        t1.insert(w.clone())?;
    }
    let mut out = Bitrade::new(t0, t1, BitradeKind::Perfect)?;
    out.unverified = b.unverified;
    Ok(out)
}

/// Base spherical bitrades in `H(q, q)` that the composite constructions start from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Alt,
    Mds(MdsVariant),
}

pub fn base_bitrade(q: usize, base: &Base) -> Result<Bitrade> {
    match base {
        Base::Alt => alt_bitrade(q),
        Base::Mds(v) => mds_bitrade(q, v.clone()),
    }
}

/// Spherical bitrade in `H(qr, q)`: the `r`-fold tensor power of the base.
pub fn spherical_family(q: usize, r: usize, base: &Base) -> Result<Bitrade> {
    tensor_power(&base_bitrade(q, base)?, r)
}

/// Perfect bitrade in `H(qr + 1, q)`: the lift of [`spherical_family`].
pub fn perfect_family(q: usize, r: usize, base: &Base) -> Result<Bitrade> {
    lift_to_perfect(&spherical_family(q, r, base)?)
}
