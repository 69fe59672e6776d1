use num_bigint::BigInt;
use num_traits::Zero;

/// Coefficients `a_0..=a_{n_max}` of the unique formal solution of
/// `x³f′ = (1 + 3x²)f − x⁶`, from `a_n = (n − 5)·a_{n−2} + [n = 6]`.
///
/// Odd coefficients vanish and `a_{6+2k} = (2k+1)!!`, so the series diverges.
pub fn formal_series_coefficients(n_max: usize) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut value = if n >= 2 {
            BigInt::from(n as i64 - 5) * &a[n - 2]
        } else {
            BigInt::zero()
        };
        if n == 6 {
            value += 1;
        }
        a.push(value);
    }
    a
}

/// Coefficients of `x³f′ − (1 + 3x²)f + x⁶` for the truncated polynomial
/// `f = Σ coeffs[n]·xⁿ`, up to and including `order`.
pub fn series_residual(coeffs: &[BigInt], order: usize) -> Vec<BigInt> {
    let get = |n: usize| coeffs.get(n).cloned().unwrap_or_default();
    (0..=order)
        .map(|m| {
            let mut r = -get(m);
            if m >= 2 {
                // x³f′ contributes (m−2)·a_{m−2}, 3x²f contributes 3·a_{m−2}
                r += BigInt::from(m as i64 - 2) * get(m - 2) - BigInt::from(3) * get(m - 2);
            }
            if m == 6 {
                r += 1;
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        let a = formal_series_coefficients(12);
        let expected = [0, 0, 0, 0, 0, 0, 1, 0, 3, 0, 15, 0, 105];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(a[n], BigInt::from(*e), "a_{n}");
        }
    }

    #[test]
    fn residual_vanishes() {
        let a = formal_series_coefficients(36);
        assert!(series_residual(&a, 36).iter().all(Zero::is_zero));
    }

    #[test]
    fn zero_order() {
        assert_eq!(formal_series_coefficients(0), vec![BigInt::zero()]);
    }
}
