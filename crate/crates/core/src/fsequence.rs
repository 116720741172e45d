//! F-sequences: the positive integer sequences `n_F` that size the levels of
//! a cobweb layer.
//!
//! Most built-in families belong to the two-parameter family generated by
//! `1_F * x / ((1 - αx)(1 - βx))`, whose terms are
//!
//! - `1_F * n * α^(n-1)` when `α = β`,
//! - `1_F * (α^n - β^n) / (α - β)` otherwise.
//!
//! Natural numbers, powers, Gaussian integers and modified Gaussian integers
//! are the special cases `(1, 1)`, `(q, 0)`, `(1, q)` and `(q, q)`. The
//! Fibonacci-type family `F(p)` starts `1, p` and continues with
//! `n_F = p (n-1)_F + (n-2)_F`.
//!
//! Every family except raw tables carries a *splitting rule*: naturals
//! `λ_K(k, m)` and `λ_M(k, m)` with
//!
//! ```text
//! (k + m)_F = λ_K(k, m) k_F + λ_M(k, m) m_F
//! ```
//!
//! The rule drives the tiling construction in [`crate::tiling`].

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::coefficients::{self, CoefficientError};
use crate::Nat;

/// Terms and factorials below this index are memoized.
const CACHE_LIMIT: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("terms are indexed from 1; index 0 has no term")]
    ZeroIndex,
    #[error("index {index} is beyond the table of {len} terms")]
    IndexOutOfTable { index: usize, len: usize },
    #[error("family `{0}` carries no splitting rule")]
    NoSplitRule(String),
    #[error("invalid family parameters: {0}")]
    Parameter(String),
    #[error("term {index} is zero; F-sequences must be positive")]
    ZeroTerm { index: usize },
    #[error("splitting rule fails at k = {k}, m = {m}")]
    SplitMismatch { k: usize, m: usize },
    #[error("splitting coefficients for composition {0} do not reproduce the term")]
    CompositionMismatch(Composition),
    #[error("invalid composition: {0}")]
    Composition(String),
    #[error("cannot parse family `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

type Result<T, E = SequenceError> = std::result::Result<T, E>;

pub type TermRule = Arc<dyn Fn(usize) -> Nat + Send + Sync>;
pub type SplitRule = Arc<dyn Fn(usize, usize) -> Nat + Send + Sync>;

/// A user-supplied member of the splitting family: a term rule together with
/// both coefficient rules.
#[derive(Clone)]
pub struct CustomRule {
    name: String,
    term: TermRule,
    lambda_k: SplitRule,
    lambda_m: SplitRule,
}

#[derive(Clone)]
pub enum Family {
    Natural,
    /// `n_F = q^n`.
    Powers { q: u64 },
    /// `n_F = one * (q^n - 1) / (q - 1)`.
    Gaussian { q: u64, one: u64 },
    /// `n_F = one * n * q^(n-1)`.
    ModifiedGaussian { q: u64, one: u64 },
    TLambdaAB { alpha: u64, beta: u64, one: u64 },
    /// `1, p, p^2 + 1, ...`; `p = 1` gives the Fibonacci numbers.
    Fp { p: u64 },
    /// Finite prefix with no splitting rule.
    Table(Vec<Nat>),
    Custom(CustomRule),
}

/// Splitting coefficients of `(k + m)_F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaPair {
    pub lambda_k: Nat,
    pub lambda_m: Nat,
}

/// An ordered list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(SequenceError::Composition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(SequenceError::Composition(format!(
                "zero part in {parts:?}"
            )));
        }
        Ok(Composition(parts))
    }

    /// `<1, 1, ..., 1>` with `n` parts.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Reorders the parts: part `i` of the result is part `sigma[i]` of `self`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Self> {
        if !is_permutation(sigma, self.len()) {
            return Err(SequenceError::Composition(format!(
                "{sigma:?} is not a permutation of 0..{}",
                self.len()
            )));
        }
        Ok(Composition(sigma.iter().map(|&i| self.0[i]).collect()))
    }

    /// All compositions of `n` into at most `max_parts` parts, in
    /// lexicographic order.
    pub fn all(n: usize, max_parts: usize) -> Vec<Composition> {
        fn go(rest: usize, max_parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition(prefix.clone()));
                return;
            }
            if prefix.len() == max_parts {
                return;
            }
            for b in 1..=rest {
                prefix.push(b);
                go(rest - b, max_parts, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            go(n, max_parts, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = SequenceError;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Composition::new(parts)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.0
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim()
            .trim_start_matches('<')
            .trim_end_matches('>')
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| SequenceError::Composition(format!("`{p}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

pub(crate) fn is_permutation(sigma: &[usize], len: usize) -> bool {
    if sigma.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    for &i in sigma {
        if i >= len || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

#[derive(Default)]
struct TermCache {
    // index 0 holds 0_F = 0
    terms: Vec<Nat>,
    // index 0 holds 0_F! = 1
    factorials: Vec<Nat>,
}

/// An F-sequence with memoized terms and F-factorials.
///
/// Clones share the cache.
#[derive(Clone)]
pub struct FSequence {
    family: Family,
    cache: Arc<Mutex<TermCache>>,
}

impl fmt::Debug for FSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("FSequence").field(&self.to_string()).finish()
    }
}

impl FSequence {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Natural => {}
            Family::Powers { q } | Family::Fp { p: q } if *q == 0 => {
                return Err(SequenceError::Parameter("parameter must be >= 1".into()))
            }
            Family::Gaussian { q, one } | Family::ModifiedGaussian { q, one } => {
                if *q == 0 || *one == 0 {
                    return Err(SequenceError::Parameter("q and one must be >= 1".into()));
                }
            }
            Family::TLambdaAB { alpha, beta, one } => {
                if *one == 0 {
                    return Err(SequenceError::Parameter("one must be >= 1".into()));
                }
                if *alpha == 0 && *beta == 0 {
                    return Err(SequenceError::Parameter(
                        "alpha and beta cannot both be zero".into(),
                    ));
                }
            }
            Family::Table(terms) => {
                if terms.is_empty() {
                    return Err(SequenceError::Parameter("empty table".into()));
                }
                if let Some(i) = terms.iter().position(Zero::is_zero) {
                    return Err(SequenceError::ZeroTerm { index: i + 1 });
                }
            }
            Family::Powers { .. } | Family::Fp { .. } | Family::Custom(_) => {}
        }
        Ok(FSequence {
            family,
            cache: Arc::new(Mutex::new(TermCache::default())),
        })
    }

    pub fn natural() -> Self {
        Self::new(Family::Natural).expect("natural numbers are valid")
    }

    pub fn powers(q: u64) -> Result<Self> {
        Self::new(Family::Powers { q })
    }

    pub fn gaussian(q: u64) -> Result<Self> {
        Self::new(Family::Gaussian { q, one: 1 })
    }

    pub fn modified_gaussian(q: u64) -> Result<Self> {
        Self::new(Family::ModifiedGaussian { q, one: 1 })
    }

    pub fn tlambda_ab(alpha: u64, beta: u64, one: u64) -> Result<Self> {
        Self::new(Family::TLambdaAB { alpha, beta, one })
    }

    pub fn fp(p: u64) -> Result<Self> {
        Self::new(Family::Fp { p })
    }

    pub fn fibonacci() -> Self {
        Self::new(Family::Fp { p: 1 }).expect("fibonacci is valid")
    }

    pub fn table<T: Into<Nat>>(terms: impl IntoIterator<Item = T>) -> Result<Self> {
        Self::new(Family::Table(terms.into_iter().map(Into::into).collect()))
    }

    /// A custom member of the splitting family.
    ///
    /// The rules are checked eagerly: every term up to `2 * bound` must be
    /// positive and the splitting identity must hold for all
    /// `1 <= k, m <= bound`. The first failing pair is reported.
    pub fn custom(
        name: impl Into<String>,
        term: impl Fn(usize) -> Nat + Send + Sync + 'static,
        lambda_k: impl Fn(usize, usize) -> Nat + Send + Sync + 'static,
        lambda_m: impl Fn(usize, usize) -> Nat + Send + Sync + 'static,
        bound: usize,
    ) -> Result<Self> {
        let rule = CustomRule {
            name: name.into(),
            term: Arc::new(term),
            lambda_k: Arc::new(lambda_k),
            lambda_m: Arc::new(lambda_m),
        };
        for n in 1..=2 * bound {
            if (rule.term)(n).is_zero() {
                return Err(SequenceError::ZeroTerm { index: n });
            }
        }
        for k in 1..=bound {
            for m in 1..=bound {
                let lhs = (rule.term)(k + m);
                let rhs = (rule.lambda_k)(k, m) * (rule.term)(k) + (rule.lambda_m)(k, m) * (rule.term)(m);
                if lhs != rhs {
                    return Err(SequenceError::SplitMismatch { k, m });
                }
            }
        }
        Self::new(Family::Custom(rule))
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `(α, β, 1_F)` for members of the two-parameter family.
    pub fn ab_parameters(&self) -> Option<(u64, u64, u64)> {
        match self.family {
            Family::Natural => Some((1, 1, 1)),
            Family::Powers { q } => Some((q, 0, q)),
            Family::Gaussian { q, one } => Some((1, q, one)),
            Family::ModifiedGaussian { q, one } => Some((q, q, one)),
            Family::TLambdaAB { alpha, beta, one } => Some((alpha, beta, one)),
            Family::Fp { .. } | Family::Table(_) | Family::Custom(_) => None,
        }
    }

    pub fn has_split_rule(&self) -> bool {
        !matches!(self.family, Family::Table(_))
    }

    /// Number of terms available, `None` for infinite families.
    pub fn table_len(&self) -> Option<usize> {
        match &self.family {
            Family::Table(t) => Some(t.len()),
            _ => None,
        }
    }

    /// The term `n_F`, for `n >= 1`.
    pub fn term(&self, n: usize) -> Result<Nat> {
        if n == 0 {
            return Err(SequenceError::ZeroIndex);
        }
        if let Family::Table(t) = &self.family {
            return t.get(n - 1).cloned().ok_or(SequenceError::IndexOutOfTable {
                index: n,
                len: t.len(),
            });
        }
        if n >= CACHE_LIMIT {
            return Ok(self.compute_term(n));
        }
        let mut cache = self.cache.lock().expect("term cache poisoned");
        while cache.terms.len() <= n {
            let i = cache.terms.len();
            let next = match (&self.family, i) {
                (_, 0) => Nat::zero(),
                (Family::Fp { .. }, 1) => Nat::one(),
                (Family::Fp { p }, 2) => Nat::from(*p),
                (Family::Fp { p }, _) => &cache.terms[i - 1] * *p + &cache.terms[i - 2],
                _ => self.compute_term(i),
            };
            cache.terms.push(next);
        }
        Ok(cache.terms[n].clone())
    }

    /// `n_F` as a machine integer, for sizing levels.
    pub fn term_usize(&self, n: usize) -> Result<usize> {
        self.term(n)?
            .to_usize()
            .ok_or_else(|| SequenceError::Parameter(format!("term {n} does not fit in usize")))
    }

    /// `n_F`, extended with `0_F = 0` where the splitting rules need it.
    fn term_or_zero(&self, n: usize) -> Result<Nat> {
        if n == 0 {
            Ok(Nat::zero())
        } else {
            self.term(n)
        }
    }

    fn compute_term(&self, n: usize) -> Nat {
        match &self.family {
            Family::Fp { p } => {
                let (mut prev, mut cur) = (Nat::zero(), Nat::one());
                for _ in 1..n {
                    let next = &cur * *p + &prev;
                    prev = cur;
                    cur = next;
                }
                cur
            }
            Family::Custom(rule) => (rule.term)(n),
            Family::Table(t) => t[n - 1].clone(),
            _ => {
                let (alpha, beta, one) = self.ab_parameters().expect("two-parameter family");
                ab_term(alpha, beta, one, n)
            }
        }
    }

    /// `n_F! = n_F (n-1)_F ... 1_F`, with `0_F! = 1`.
    pub fn factorial(&self, n: usize) -> Result<Nat> {
        if n >= CACHE_LIMIT {
            let mut acc = self.factorial(CACHE_LIMIT - 1)?;
            for i in CACHE_LIMIT..=n {
                acc *= self.term(i)?;
            }
            return Ok(acc);
        }
        let start = {
            let cache = self.cache.lock().expect("term cache poisoned");
            if let Some(f) = cache.factorials.get(n) {
                return Ok(f.clone());
            }
            cache.factorials.len().max(1)
        };
        // terms are fetched without holding the lock
        let terms = (start..=n).map(|i| self.term(i)).collect::<Result<Vec<_>>>()?;
        let mut cache = self.cache.lock().expect("term cache poisoned");
        if cache.factorials.is_empty() {
            cache.factorials.push(Nat::one());
        }
        while cache.factorials.len() <= n {
            let i = cache.factorials.len();
            let next = &cache.factorials[i - 1] * &terms[i - start];
            cache.factorials.push(next);
        }
        Ok(cache.factorials[n].clone())
    }

    /// Splitting coefficients of `(k + m)_F`, for `k, m >= 1`.
    pub fn lambda_split(&self, k: usize, m: usize) -> Result<LambdaPair> {
        if k == 0 || m == 0 {
            return Err(SequenceError::Parameter(format!(
                "split parts must be positive, got ({k}, {m})"
            )));
        }
        match &self.family {
            Family::Table(_) => Err(SequenceError::NoSplitRule(self.to_string())),
            Family::Fp { .. } => Ok(LambdaPair {
                lambda_k: self.term_or_zero(m - 1)?,
                lambda_m: self.term(k + 1)?,
            }),
            Family::Custom(rule) => Ok(LambdaPair {
                lambda_k: (rule.lambda_k)(k, m),
                lambda_m: (rule.lambda_m)(k, m),
            }),
            _ => {
                let (alpha, beta, _) = self.ab_parameters().expect("two-parameter family");
                Ok(LambdaPair {
                    lambda_k: Nat::from(alpha).pow(to_u32(m)),
                    lambda_m: Nat::from(beta).pow(to_u32(k)),
                })
            }
        }
    }

    /// Coefficients `λ_1, ..., λ_k` with `Σ λ_s (b_s)_F = (b_1 + ... + b_k)_F`.
    ///
    /// Two-parameter families use `λ_s = α^(b_{s+1} + ... + b_k) β^(b_1 + ... + b_{s-1})`,
    /// `F(p)` uses `λ_s = Π_{i<s} (b_i + 1)_F * (b_{s+1} + ... + b_k - 1)_F`
    /// (the last factor is 1 for the final part), and custom rules fold
    /// [`lambda_split`](Self::lambda_split) from the left. The identity is
    /// checked before returning.
    pub fn lambda_composition(&self, c: &Composition) -> Result<Vec<Nat>> {
        let parts = c.parts();
        let lambdas = match &self.family {
            Family::Table(_) => return Err(SequenceError::NoSplitRule(self.to_string())),
            Family::Custom(_) => self.lambda_composition_folded(c)?,
            Family::Fp { .. } => {
                let mut prefix = Nat::one();
                let mut out = Vec::with_capacity(parts.len());
                for (s, &b) in parts.iter().enumerate() {
                    let rest: usize = parts[s + 1..].iter().sum();
                    let tail = if rest == 0 {
                        Nat::one()
                    } else {
                        self.term_or_zero(rest - 1)?
                    };
                    out.push(&prefix * tail);
                    prefix *= self.term(b + 1)?;
                }
                out
            }
            _ => {
                let (alpha, beta, _) = self.ab_parameters().expect("two-parameter family");
                let (alpha, beta) = (Nat::from(alpha), Nat::from(beta));
                let total = c.total();
                let mut before = 0usize;
                parts
                    .iter()
                    .map(|&b| {
                        let after = total - before - b;
                        let l = alpha.pow(to_u32(after)) * beta.pow(to_u32(before));
                        before += b;
                        l
                    })
                    .collect()
            }
        };
        self.check_composition(c, &lambdas)?;
        Ok(lambdas)
    }

    /// Coefficients from peeling parts off the front:
    /// `λ_s = λ_K(b_s, rest_s) Π_{i<s} λ_M(b_i, rest_i)` where
    /// `rest_s = b_{s+1} + ... + b_k`.
    pub fn lambda_composition_folded(&self, c: &Composition) -> Result<Vec<Nat>> {
        let parts = c.parts();
        let mut prefix = Nat::one();
        let mut out = Vec::with_capacity(parts.len());
        for (s, &b) in parts.iter().enumerate() {
            let rest: usize = parts[s + 1..].iter().sum();
            if rest == 0 {
                out.push(prefix.clone());
            } else {
                let pair = self.lambda_split(b, rest)?;
                out.push(&prefix * &pair.lambda_k);
                prefix *= pair.lambda_m;
            }
        }
        Ok(out)
    }

    /// Coefficients from splitting the total as `rest + b` at each step:
    /// `λ_s = λ_M(rest_s, b_s) Π_{i<s} λ_K(rest_i, b_i)`.
    pub fn lambda_composition_reversed(&self, c: &Composition) -> Result<Vec<Nat>> {
        let parts = c.parts();
        let mut prefix = Nat::one();
        let mut out = Vec::with_capacity(parts.len());
        for (s, &b) in parts.iter().enumerate() {
            let rest: usize = parts[s + 1..].iter().sum();
            if rest == 0 {
                out.push(prefix.clone());
            } else {
                let pair = self.lambda_split(rest, b)?;
                out.push(&prefix * &pair.lambda_m);
                prefix *= pair.lambda_k;
            }
        }
        Ok(out)
    }

    fn check_composition(&self, c: &Composition, lambdas: &[Nat]) -> Result<()> {
        let mut sum = Nat::zero();
        for (l, &b) in lambdas.iter().zip(c.parts()) {
            sum += l * self.term(b)?;
        }
        if sum == self.term(c.total())? {
            Ok(())
        } else {
            Err(SequenceError::CompositionMismatch(c.clone()))
        }
    }

    /// `n_F` recomputed from the all-ones composition:
    /// `1_F Σ_s λ_K(1, n-s) Π_{i<s} λ_M(1, n-i)`.
    pub fn term_via_ones(&self, n: usize) -> Result<Nat> {
        if n == 0 {
            return Err(SequenceError::ZeroIndex);
        }
        if !self.has_split_rule() {
            return Err(SequenceError::NoSplitRule(self.to_string()));
        }
        let mut prefix = Nat::one();
        let mut sum = Nat::zero();
        for s in 1..=n {
            let rest = n - s;
            if rest == 0 {
                sum += &prefix;
            } else {
                let pair = self.lambda_split(1, rest)?;
                sum += &prefix * &pair.lambda_k;
                prefix *= pair.lambda_m;
            }
        }
        Ok(sum * self.term(1)?)
    }

    /// Checks that every F-nomial with `n <= n_max` is a natural number.
    ///
    /// Admissibility quantifies over all `n`; this is a bounded verdict. For
    /// tables the bound is clipped to the table length.
    pub fn is_cobweb_admissible(&self, n_max: usize) -> AdmissibilityReport {
        let bound = self.table_len().map_or(n_max, |len| n_max.min(len));
        for n in 1..=bound {
            for m in 0..=n {
                match coefficients::fnomial(self, n, m) {
                    Ok(_) => {}
                    Err(CoefficientError::NonIntegral { .. }) => {
                        return AdmissibilityReport {
                            bound,
                            admissible_up_to_bound: false,
                            first_failure: Some((n, m)),
                        }
                    }
                    Err(e) => unreachable!("terms up to the bound exist: {e}"),
                }
            }
        }
        AdmissibilityReport {
            bound,
            admissible_up_to_bound: true,
            first_failure: None,
        }
    }
}

/// Result of a bounded admissibility check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// Largest `n` examined.
    pub bound: usize,
    pub admissible_up_to_bound: bool,
    /// First `(n, m)` whose F-nomial is not a natural number.
    pub first_failure: Option<(usize, usize)>,
}

fn to_u32(x: usize) -> u32 {
    u32::try_from(x).expect("exponent fits in u32")
}

fn ab_term(alpha: u64, beta: u64, one: u64, n: usize) -> Nat {
    let e = to_u32(n);
    if alpha == beta {
        Nat::from(one) * n * Nat::from(alpha).pow(e - 1)
    } else {
        let (hi, lo) = if alpha > beta { (alpha, beta) } else { (beta, alpha) };
        let diff = Nat::from(hi).pow(e) - Nat::from(lo).pow(e);
        Nat::from(one) * diff / (hi - lo)
    }
}

impl fmt::Display for FSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Natural => write!(f, "natural"),
            Family::Powers { q } => write!(f, "powers:q={q}"),
            Family::Gaussian { q, one: 1 } => write!(f, "gaussian:q={q}"),
            Family::Gaussian { q, one } => write!(f, "gaussian:q={q},one={one}"),
            Family::ModifiedGaussian { q, one: 1 } => write!(f, "modgauss:q={q}"),
            Family::ModifiedGaussian { q, one } => write!(f, "modgauss:q={q},one={one}"),
            Family::TLambdaAB { alpha, beta, one } => write!(f, "tlab:a={alpha},b={beta},one={one}"),
            Family::Fp { p } => write!(f, "fp:p={p}"),
            Family::Table(t) => {
                let terms: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                write!(f, "table:[{}]", terms.join(","))
            }
            Family::Custom(rule) => write!(f, "custom:{}", rule.name),
        }
    }
}

impl FromStr for FSequence {
    type Err = SequenceError;

    /// Parses `natural`, `powers:q=2`, `gaussian:q=2`, `modgauss:q=2`,
    /// `tlab:a=1,b=2,one=1`, `fp:p=1` (alias `fibonacci`) or `table:[1,2,5]`.
    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: String| SequenceError::Parse {
            input: input.to_string(),
            reason,
        };
        let s = input.trim();
        let (name, params) = match s.split_once(':') {
            Some((name, params)) => (name.trim(), params.trim()),
            None => (s, ""),
        };
        if name == "table" {
            let inner = params
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| fail("expected table:[t1,t2,...]".into()))?;
            let terms = inner
                .split(',')
                .map(|t| t.trim().parse::<Nat>().map_err(|e| fail(format!("term `{t}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return FSequence::new(Family::Table(terms));
        }

        let mut values: Vec<(&str, u64)> = Vec::new();
        if !params.is_empty() {
            for kv in params.split(',') {
                let (key, value) = kv
                    .split_once('=')
                    .ok_or_else(|| fail(format!("expected key=value, got `{kv}`")))?;
                let value = value
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| fail(format!("{}: {e}", key.trim())))?;
                values.push((key.trim(), value));
            }
        }
        let allowed: &[&str] = match name {
            "natural" | "fibonacci" => &[],
            "powers" => &["q"],
            "gaussian" | "modgauss" => &["q", "one"],
            "tlab" => &["a", "b", "one"],
            "fp" => &["p"],
            other => return Err(fail(format!("unknown family `{other}`"))),
        };
        if let Some((key, _)) = values.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(fail(format!("unexpected parameter `{key}`")));
        }
        let get = |key: &str| values.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let need = |key: &str| get(key).ok_or_else(|| fail(format!("missing parameter `{key}`")));
        let family = match name {
            "natural" => Family::Natural,
            "fibonacci" => Family::Fp { p: 1 },
            "powers" => Family::Powers { q: need("q")? },
            "gaussian" => Family::Gaussian {
                q: need("q")?,
                one: get("one").unwrap_or(1),
            },
            "modgauss" => Family::ModifiedGaussian {
                q: need("q")?,
                one: get("one").unwrap_or(1),
            },
            "tlab" => Family::TLambdaAB {
                alpha: need("a")?,
                beta: need("b")?,
                one: get("one").unwrap_or(1),
            },
            _ => Family::Fp { p: need("p")? },
        };
        FSequence::new(family).map_err(|e| fail(e.to_string()))
    }
}
