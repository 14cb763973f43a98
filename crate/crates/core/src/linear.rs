//! Linear codes over `GF(q)` defined by parity checks.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::field::FieldTable;
use crate::hamming::{Code, Distance, HammingParams, Word};

/// `{w : r . w = 0 for every check row r}`.
#[derive(Clone, Debug)]
pub struct ParityCheckCode {
    field: Arc<FieldTable>,
    params: HammingParams,
    checks: Vec<Vec<u16>>,
}

impl ParityCheckCode {
    pub fn new(field: Arc<FieldTable>, n: usize, checks: Vec<Vec<u16>>) -> Result<Self> {
        let params = HammingParams::new(n, field.order())?;
        for row in &checks {
            if row.len() != n {
                return param(format!("check row has length {}, expected {n}", row.len()));
            }
            if row.iter().any(|&c| c as usize >= field.order()) {
                return param("check row entry outside the field");
            }
        }
        Ok(Self {
            field,
            params,
            checks,
        })
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn params(&self) -> HammingParams {
        self.params
    }

    pub fn checks(&self) -> &[Vec<u16>] {
        &self.checks
    }

    pub fn is_codeword(&self, w: &Word) -> bool {
        w.params() == self.params
            && self
                .checks
                .iter()
                .all(|row| self.field.dot(row, w.symbols()) == 0)
    }

    /// Reduced row echelon form of the checks with their pivot columns.
    fn echelon(&self) -> (Vec<Vec<u16>>, Vec<usize>) {
        let f = &*self.field;
        let mut rows = self.checks.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.params.n() {
            let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, sel);
            let scale = f.inv(rows[r][col]).expect("pivot is nonzero");
            for x in rows[r].iter_mut() {
                *x = f.mul(*x, scale);
            }
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[col] != 0 {
                    let factor = row[col];
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x = f.sub(*x, f.mul(factor, p));
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn dimension(&self) -> usize {
        self.params.n() - self.rank()
    }

    /// `q^(n - rank)`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.dimension() as u32)
    }

    /// Materializes the codewords by sweeping the free coordinates and
    /// solving for the pivot coordinates.
    pub fn codewords(&self) -> Result<Code> {
        let size = self
            .size()
            .filter(|&s| s <= crate::hamming::ENUMERATION_CEILING);
        if size.is_none() {
            return Err(Error::Ceiling(format!(
                "code of dimension {} over GF({}) is too large to enumerate",
                self.dimension(),
                self.field.order()
            )));
        }
        let f = &*self.field;
        let (rows, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.params.n())
            .filter(|c| !pivots.contains(c))
            .collect();
        let free_params = HammingParams::new(free.len().max(1), f.order())?;
        let mut words = Vec::new();
        let assignments: Box<dyn Iterator<Item = Vec<u16>>> = if free.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(free_params.vertices()?.map(|w| w.symbols().to_vec()))
        };
        for values in assignments {
            let mut sym = vec![0u16; self.params.n()];
            for (&c, &v) in free.iter().zip(&values) {
                sym[c] = v;
            }
            for (row, &pc) in rows.iter().zip(&pivots) {
                let s = free
                    .iter()
                    .fold(0, |acc, &c| f.add(acc, f.mul(row[c], sym[c])));
                sym[pc] = f.neg(s);
            }
            words.push(self.params.word(sym)?);
        }
        Code::from_words(self.params, words)
    }
}

/// The single all-ones check: length-`n` words with coordinate sum zero.
pub fn sum_zero_code(field: Arc<FieldTable>, n: usize) -> Result<ParityCheckCode> {
    if n < 2 {
        return param("sum-zero code needs length at least 2");
    }
    ParityCheckCode::new(field, n, vec![vec![1; n]])
}

/// Checks `{all-ones, multipliers}`. Any two columns `(1, m_i)`, `(1, m_j)`
/// are independent exactly when `m_i != m_j`, so distinct multipliers give
/// minimum distance 3 and the code is MDS.
pub fn rs_mds_code(
    field: Arc<FieldTable>,
    n: usize,
    multipliers: &[u16],
) -> Result<ParityCheckCode> {
    if multipliers.len() != n {
        return param(format!(
            "expected {n} multipliers, got {}",
            multipliers.len()
        ));
    }
    if n < 3 {
        return param("MDS code with distance 3 needs length at least 3");
    }
    let distinct: HashSet<u16> = multipliers.iter().copied().collect();
    if distinct.len() != n {
        return param("multipliers must be pairwise distinct");
    }
    ParityCheckCode::new(field, n, vec![vec![1; n], multipliers.to_vec()])
}

/// `{(a, ..., a)}`, given by the checks `x_i - x_{i+1} = 0`.
pub fn repetition_code(field: Arc<FieldTable>, n: usize) -> Result<ParityCheckCode> {
    let one = 1u16;
    let minus_one = field.neg(1);
    let checks = (0..n.saturating_sub(1))
        .map(|i| {
            let mut row = vec![0u16; n];
            row[i] = one;
            row[i + 1] = minus_one;
            row
        })
        .collect();
    ParityCheckCode::new(field, n, checks)
}

/// Field elements in enumeration order; the multipliers of the default `C0`.
pub fn default_multipliers(field: &FieldTable) -> Vec<u16> {
    field.elements().collect()
}

/// The default `C0` multipliers with the values at positions 1 and 2 swapped.
pub fn swapped_multipliers(multipliers: &[u16]) -> Vec<u16> {
    let mut m = multipliers.to_vec();
    if m.len() >= 2 {
        m.swap(0, 1);
    }
    m
}

/// Whether `|C| = q^(n - d + 1)`. A one-word code counts as MDS (`d = n + 1`).
pub fn verify_mds(c: &ParityCheckCode) -> Result<bool> {
    let words = c.codewords()?;
    let q = c.field.order() as u128;
    let n = c.params.n();
    Ok(match words.min_distance() {
        Distance::Infinite => words.len() == 1,
        Distance::Finite(d) => words.len() as u128 == q.pow((n + 1 - d) as u32),
    })
}

pub fn add_words(field: &FieldTable, a: &Word, b: &Word) -> Result<Word> {
    if a.params() != b.params() {
        return param("word addition across different graphs");
    }
    let sym: Vec<u16> = a
        .symbols()
        .iter()
        .zip(b.symbols())
        .map(|(&x, &y)| field.add(x, y))
        .collect();
    a.params().word(sym)
}

/// `{w + shift : w in c}`.
pub fn coset(c: &ParityCheckCode, shift: &Word) -> Result<Code> {
    if shift.params() != c.params {
        return param(format!("shift {shift} does not belong to {}", c.params));
    }
    let words = c.codewords()?;
    let shifted = words
        .iter()
        .map(|w| add_words(&c.field, w, shift))
        .collect::<Result<Vec<_>>>()?;
    Code::from_words(c.params, shifted)
}
