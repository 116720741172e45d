//! F-factorials, F-nomial and multi F-nomial coefficients.
//!
//! Coefficients are computed as exact factorial quotients. A nonzero
//! remainder is reported as [`CoefficientError::NonIntegral`] instead of
//! being truncated, so non-admissible sequences are visible. The recurrence
//! checks recompute the same values through the splitting coefficients and
//! serve as independent validation.

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::fsequence::{is_permutation, Composition, FSequence, SequenceError};
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoefficientError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("{numerator} / {denominator} is not a natural number (F-nomial {what})")]
    NonIntegral {
        what: String,
        numerator: Nat,
        denominator: Nat,
    },
    #[error("falling factorial needs n >= m, got n = {n}, m = {m}")]
    FallingRange { n: usize, m: usize },
    #[error("recurrence needs 1 <= k <= n - 1, got n = {n}, k = {k}")]
    RecurrenceRange { n: usize, k: usize },
}

type Result<T> = std::result::Result<T, CoefficientError>;

/// `n_F! = n_F (n-1)_F ... 1_F`; `0_F! = 1`.
pub fn f_factorial(seq: &FSequence, n: usize) -> Result<Nat> {
    Ok(seq.factorial(n)?)
}

/// `n_F (n-1)_F ... (n-m+1)_F`, the volume of the F-box `V_{m,n}`.
pub fn falling_f_factorial(seq: &FSequence, n: usize, m: usize) -> Result<Nat> {
    if n < m {
        return Err(CoefficientError::FallingRange { n, m });
    }
    let mut acc = Nat::one();
    for i in n - m + 1..=n {
        acc *= seq.term(i)?;
    }
    Ok(acc)
}

fn exact_quotient(numerator: Nat, denominator: Nat, what: impl FnOnce() -> String) -> Result<Nat> {
    let (q, r) = numerator.div_rem(&denominator);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(CoefficientError::NonIntegral {
            what: what(),
            numerator,
            denominator,
        })
    }
}

/// `n_F^(m) / m_F!`, zero when `n < m`.
pub fn fnomial(seq: &FSequence, n: usize, m: usize) -> Result<Nat> {
    if n < m {
        return Ok(Nat::zero());
    }
    exact_quotient(falling_f_factorial(seq, n, m)?, seq.factorial(m)?, || {
        format!("({n} over {m})")
    })
}

/// `n_F! / ((b_1)_F! ... (b_k)_F!)` with `n = b_1 + ... + b_k`.
pub fn multi_fnomial(seq: &FSequence, c: &Composition) -> Result<Nat> {
    let mut denominator = Nat::one();
    for &b in c.parts() {
        denominator *= seq.factorial(b)?;
    }
    exact_quotient(seq.factorial(c.total())?, denominator, || {
        format!("({} over {})", c.total(), c)
    })
}

/// Both sides of a recurrence identity, kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceCheck {
    pub lhs: Nat,
    pub rhs: Nat,
    /// `(λ, coefficient)` summands of the right-hand side.
    pub terms: Vec<(Nat, Nat)>,
}

impl RecurrenceCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `(n over k) = λ_K (n-1 over k-1) + λ_M (n-1 over k)`, with the split of
/// `n_F` into `k + (n - k)`.
pub fn check_fnomial_recurrence(seq: &FSequence, n: usize, k: usize) -> Result<RecurrenceCheck> {
    if k == 0 || k >= n {
        return Err(CoefficientError::RecurrenceRange { n, k });
    }
    let pair = seq.lambda_split(k, n - k)?;
    let terms = vec![
        (pair.lambda_k, fnomial(seq, n - 1, k - 1)?),
        (pair.lambda_m, fnomial(seq, n - 1, k)?),
    ];
    let rhs = terms.iter().map(|(l, c)| l * c).sum();
    Ok(RecurrenceCheck {
        lhs: fnomial(seq, n, k)?,
        rhs,
        terms,
    })
}

/// `(n over b_1..b_k) = Σ_s λ_s (n-1 over b_1..b_s - 1..b_k)`, vanishing
/// parts dropped.
pub fn check_multi_recurrence(seq: &FSequence, c: &Composition) -> Result<RecurrenceCheck> {
    let lambdas = seq.lambda_composition(c)?;
    let mut terms = Vec::with_capacity(c.len());
    for (s, lambda) in lambdas.into_iter().enumerate() {
        let reduced: Vec<usize> = c
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &b)| if i == s { b - 1 } else { b })
            .filter(|&b| b > 0)
            .collect();
        // (0 over <>) is the empty product 0_F! = 1
        let coefficient = if reduced.is_empty() {
            Nat::one()
        } else {
            multi_fnomial(seq, &Composition::new(reduced)?)?
        };
        terms.push((lambda, coefficient));
    }
    let rhs = terms.iter().map(|(l, c)| l * c).sum();
    Ok(RecurrenceCheck {
        lhs: multi_fnomial(seq, c)?,
        rhs,
        terms,
    })
}

/// Outcome of [`check_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    /// `(n over k) = (n over n-k) = (n over k, n-k)`.
    pub symmetry: bool,
    /// The multi F-nomial of `<k, rest...>` is unchanged by `sigma`.
    pub permutation: bool,
    /// `(n over k) (n-k over rest) = (n over k, rest)`.
    pub product: bool,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.symmetry && self.permutation && self.product
    }
}

/// Checks the symmetry, part-permutation and product identities for
/// `n = k + rest.total()`. `sigma` permutes the parts of `<k, rest...>`.
pub fn check_identities(
    seq: &FSequence,
    k: usize,
    rest: &Composition,
    sigma: &[usize],
) -> Result<IdentityReport> {
    let n = k + rest.total();
    let mut full_parts = vec![k];
    full_parts.extend_from_slice(rest.parts());
    if k == 0 || !is_permutation(sigma, full_parts.len()) {
        return Err(SequenceError::Composition(format!(
            "need k >= 1 and a permutation of 0..{}",
            full_parts.len()
        ))
        .into());
    }
    let full = Composition::new(full_parts)?;

    let nk = fnomial(seq, n, k)?;
    let two_part = multi_fnomial(seq, &Composition::new(vec![k, n - k])?)?;
    let symmetry = nk == fnomial(seq, n, n - k)? && nk == two_part;

    let whole = multi_fnomial(seq, &full)?;
    let permutation = whole == multi_fnomial(seq, &full.permuted(sigma)?)?;

    let product = &nk * multi_fnomial(seq, rest)? == whole;
    Ok(IdentityReport {
        symmetry,
        permutation,
        product,
    })
}
