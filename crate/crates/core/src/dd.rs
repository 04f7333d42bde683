//! Double-double helpers. `twofloat` division only keeps about 53 bits,
//! so quotients are refined here from the exact residual.

use twofloat::TwoFloat;

/// `a / b` to double-double accuracy.
pub(crate) fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// `1 / b` to double-double accuracy.
pub(crate) fn recip(b: TwoFloat) -> TwoFloat {
    div(TwoFloat::from(1.0), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_accurate() {
        let q = recip(TwoFloat::from(3.0));
        let r = q * 3.0 - 1.0;
        assert!(r.hi().abs() < 1e-31);
    }

    #[test]
    fn quotient_residual_is_tiny() {
        let a = TwoFloat::new_add(0.1, 3.1e-18);
        let b = TwoFloat::new_add(0.3, -1.7e-18);
        let q = div(a, b);
        let r = a - q * b;
        assert!(r.hi().abs() < 1e-32);
        assert_eq!(q.hi(), 0.33333333333333337);
        assert!((q.lo() - 6.05432e-18).abs() < 1e-22);
    }
}
