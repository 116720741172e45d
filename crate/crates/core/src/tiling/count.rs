use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Result, TilingError};
use crate::fsequence::FSequence;
use crate::geometry::Layer;
use crate::Nat;

/// Largest top level whose factorial the count will expand.
const MAX_TOP: u64 = 50_000;

/// Number of tilings of `<k -> n>` the construction produces, by the
/// recurrence
///
/// ```text
/// {n,k} = n_F! / (m_F!^λ_M (k-1)_F!^λ_K) * {n-1,k}^λ_M * {n-1,k-1}^λ_K
/// ```
///
/// with `m = n - k + 1`, `(λ_K, λ_M)` the splitting coefficients of
/// `(k-1, m)` and `{n,n} = {n,1} = 1`. The factorials are ordinary
/// factorials of the term values.
///
/// ```
/// use cobweb::{tiling, FSequence};
///
/// assert_eq!(tiling::count_construction_tilings(&FSequence::natural(), 2, 3).unwrap(), 3u32.into());
/// ```
pub fn count_construction_tilings(seq: &FSequence, k: usize, n: usize) -> Result<Nat> {
    Layer::new(seq, k, n)?;
    count(seq, k, n, &mut HashMap::new())
}

fn count(seq: &FSequence, k: usize, n: usize, memo: &mut HashMap<(usize, usize), Nat>) -> Result<Nat> {
    if k == n || k == 1 {
        return Ok(Nat::one());
    }
    if let Some(done) = memo.get(&(k, n)) {
        return Ok(done.clone());
    }
    let m = n - k + 1;
    let pair = seq.lambda_split(k - 1, m)?;
    let (k_term, m_term, n_term) = (seq.term(k - 1)?, seq.term(m)?, seq.term(n)?);
    if &pair.lambda_m * &m_term + &pair.lambda_k * &k_term != n_term {
        return Err(TilingError::InconsistentSplit {
            k: k - 1,
            m,
            lambda_k: pair.lambda_k,
            lambda_m: pair.lambda_m,
            k_term,
            m_term,
            n_term,
        });
    }
    let small = |v: &Nat, what: &str| match v.to_u64() {
        Some(x) if x <= MAX_TOP => Ok(x as u32),
        _ => Err(TilingError::TooLarge(format!("{what} = {v} in the count of <{k} -> {n}>"))),
    };
    let top = small(&n_term, "top level")?;
    let lm = small(&pair.lambda_m, "λ_M")?;
    let lk = small(&pair.lambda_k, "λ_K")?;

    let numerator = factorial(top);
    let denominator = factorial(small(&m_term, "m_F")?).pow(lm) * factorial(small(&k_term, "(k-1)_F")?).pow(lk);
    let (multinomial, remainder) = numerator.div_rem(&denominator);
    debug_assert!(remainder.is_zero());

    let upper = if lm > 0 { count(seq, k, n - 1, memo)?.pow(lm) } else { Nat::one() };
    let lower = if lk > 0 { count(seq, k - 1, n - 1, memo)?.pow(lk) } else { Nat::one() };
    let value = multinomial * upper * lower;
    memo.insert((k, n), value.clone());
    Ok(value)
}

fn factorial(n: u32) -> Nat {
    (2..=n).map(Nat::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(x: u64) -> Nat {
        Nat::from(x)
    }

    #[test]
    fn base_cases() {
        for seq in [FSequence::natural(), FSequence::fibonacci(), FSequence::gaussian(2).unwrap()] {
            assert_eq!(count_construction_tilings(&seq, 4, 4).unwrap(), nat(1));
            assert_eq!(count_construction_tilings(&seq, 1, 4).unwrap(), nat(1));
        }
    }

    #[test]
    fn small_values() {
        let n = FSequence::natural();
        assert_eq!(count_construction_tilings(&n, 2, 3).unwrap(), nat(3));
        assert_eq!(count_construction_tilings(&n, 3, 4).unwrap(), nat(18));
        assert_eq!(count_construction_tilings(&n, 2, 4).unwrap(), nat(12));
        assert_eq!(count_construction_tilings(&FSequence::fibonacci(), 3, 4).unwrap(), nat(12));
    }

    #[test]
    fn table_has_no_count() {
        let t = FSequence::table([1u32, 2, 3, 4]).unwrap();
        assert!(matches!(
            count_construction_tilings(&t, 2, 3),
            Err(TilingError::Sequence(_))
        ));
    }

    #[test]
    fn large_levels_are_refused() {
        let g = FSequence::gaussian(10).unwrap();
        assert!(matches!(
            count_construction_tilings(&g, 3, 6),
            Err(TilingError::TooLarge(_))
        ));
    }
}
