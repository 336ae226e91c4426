use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BigRat, IntPoly, PolyError};

fn both_odd(a: usize, b: usize) -> bool {
    a % 2 == 1 && b % 2 == 1
}

/// Resultant over the integers by the subresultant pseudo-remainder
/// sequence. Every division below is exact.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    if dg == 0 {
        return num_traits::pow(g.coeff(0), df);
    }
    if df == 0 {
        return num_traits::pow(f.coeff(0), dg);
    }

    let (ca, cb) = (f.content(), g.content());
    let mut a = IntPoly::new(f.coeffs().iter().map(|c| c / &ca).collect());
    let mut b = IntPoly::new(g.coeffs().iter().map(|c| c / &cb).collect());
    let t = num_traits::pow(ca, dg) * num_traits::pow(cb, df);
    let mut sign = BigInt::one();
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if both_odd(df, dg) {
            sign = -sign;
        }
    }

    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if both_odd(da, db) {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        let divisor = &gg * num_traits::pow(h.clone(), delta);
        a = b;
        b = IntPoly::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        gg = a.leading_coeff().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(gg.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        match b.degree() {
            None => return BigInt::zero(),
            Some(0) => {
                let da = a.degree().unwrap();
                let lb = b.coeff(0);
                let hh = num_traits::pow(lb, da) / num_traits::pow(h, da - 1);
                return sign * t * hh;
            }
            Some(_) => {}
        }
    }
}

/// `disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> Result<BigRat, PolyError> {
    let d = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d == 0 {
        return Err(PolyError::DegreeTooSmall {
            required: 1,
            actual: 0,
        });
    }
    let res = resultant(f, &f.derivative());
    let signed = if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    };
    let lc = f.leading_coeff().unwrap().clone();
    Ok(BigRat::new(signed, lc))
}
