//! Real-root counting with Sturm sequences in exact integer arithmetic.

use num_traits::Signed;

use crate::error::{invalid, Result};

use super::IntPoly;

/// `f, f′, −rem(f, f′), …`, each term scaled by a positive rational so that
/// signs are preserved.
pub fn sturm_sequence(f: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![f.primitive_part(), f.derivative().primitive_part()];
    if seq[1].is_zero() {
        seq.pop();
        return seq;
    }
    loop {
        let n = seq.len();
        let r = seq[n - 2].signed_pseudo_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let c = r.content();
        seq.push((-&r).div_scalar(&c));
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `f`.
pub fn real_root_count(f: &IntPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(invalid(
            "the zero polynomial has every real number as a root",
        ));
    }
    let seq = sturm_sequence(f);
    let lead_sign = |g: &IntPoly| -> i8 {
        if g.leading().unwrap().is_positive() {
            1
        } else {
            -1
        }
    };
    let at_pos_inf = sign_changes(seq.iter().map(lead_sign));
    let at_neg_inf = sign_changes(seq.iter().map(|g| {
        let s = lead_sign(g);
        if g.degree().unwrap() % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg_inf - at_pos_inf)
}
