//! Erasure-only decoding: interpolate `u(x)` through `k_hat` trusted symbols.

use crate::codec::{CodeParams, GroupVector};
use crate::error::{Error, Result};
use crate::gf::Elem;

/// Recover the information vector from `k_hat` (position, symbol) pairs.
///
/// Newton divided differences followed by expansion into the monomial basis,
/// O(k_hat^2) field operations.
pub fn erasure_decode(params: &CodeParams, trusted: &[(usize, Elem)]) -> Result<GroupVector> {
    let k = params.k_hat();
    if trusted.len() != k {
        return Err(Error::WrongCount { expected: k, actual: trusted.len() });
    }
    let f = params.field();
    let n = params.n();
    let mut seen = vec![false; n];
    for &(p, _) in trusted {
        if p >= n {
            return Err(Error::PositionNotErased(p));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::SingularSystem);
        }
    }

    let xs: Vec<Elem> = trusted.iter().map(|&(p, _)| f.alpha_pow(p)).collect();
    let mut dd: Vec<Elem> = trusted.iter().map(|&(_, c)| c).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = dd[i] ^ dd[i - 1];
            dd[i] = f.div(num, xs[i] ^ xs[i - level]);
        }
    }

    // u(x) = dd[k-1], then u(x) <- u(x) (x - x_i) + dd[i] for i = k-2 .. 0.
    let mut coeffs = vec![0 as Elem; k];
    coeffs[0] = dd[k - 1];
    for (deg, i) in (0..k - 1).rev().enumerate() {
        let root_log = trusted[i].0;
        for t in (1..=deg + 1).rev() {
            coeffs[t] = coeffs[t - 1] ^ f.mul_alpha_pow(coeffs[t], root_log);
        }
        coeffs[0] = f.mul_alpha_pow(coeffs[0], root_log) ^ dd[i];
    }
    Ok(GroupVector(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode_group;
    use rand::seq::index::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_point_example() {
        let p = CodeParams::with_width(4, 2).unwrap();
        assert_eq!(erasure_decode(&p, &[(0, 0), (1, 3)]).unwrap(), GroupVector(vec![1, 1]));
    }

    #[test]
    fn constant_polynomial() {
        let p = CodeParams::with_width(8, 1).unwrap();
        assert_eq!(erasure_decode(&p, &[(77, 42)]).unwrap(), GroupVector(vec![42]));
    }

    #[test]
    fn bad_inputs() {
        let p = CodeParams::with_width(4, 2).unwrap();
        assert!(matches!(erasure_decode(&p, &[(0, 1)]), Err(Error::WrongCount { .. })));
        assert_eq!(erasure_decode(&p, &[(3, 1), (3, 2)]), Err(Error::SingularSystem));
    }

    #[test]
    fn any_subset_recovers_message() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for m in [4u32, 8, 10] {
            let n = (1usize << m) - 1;
            for _ in 0..20 {
                let k = rng.gen_range(1..n);
                let p = CodeParams::with_width(m, k).unwrap();
                let u = GroupVector((0..k).map(|_| rng.gen_range(0..=n as Elem)).collect());
                let c = encode_group(&u, &p);
                let pos = sample(&mut rng, n, k);
                let trusted: Vec<_> = pos.iter().map(|j| (j, c.0[j])).collect();
                assert_eq!(erasure_decode(&p, &trusted).unwrap(), u, "m={m} k={k}");
            }
        }
    }
}
