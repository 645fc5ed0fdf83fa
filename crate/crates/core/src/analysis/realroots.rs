//! Real-root isolation for rational polynomials by Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactpoly::gaussian::ratio_to_f64;
use crate::exactpoly::UniPoly;

/// A real root enclosed in `(lo, hi]`, with its exact value when rational.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: Option<BigRational>,
    pub approx: f64,
}

struct Sturm {
    chain: Vec<UniPoly>,
}

impl Sturm {
    fn new(p: &UniPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        Self { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval_real(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + BigRational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Isolates the distinct real roots of a real-coefficient polynomial into
/// intervals narrower than `width`, in increasing order.
pub fn isolate_real_roots(p: &UniPoly, width: f64) -> Vec<RealRoot> {
    assert!(p.is_real(), "real-root isolation needs real coefficients");
    let sf = p.squarefree_part();
    if sf.is_constant() {
        return Vec::new();
    }
    let sturm = Sturm::new(&sf);
    // Cauchy bound for the monic square-free part
    let bound = sf
        .coeffs()
        .iter()
        .map(|c| c.re.abs())
        .fold(BigRational::zero(), |a, b| a.max(b))
        + BigRational::one();
    let width = BigRational::from_float(width).expect("finite width");
    let lo = -bound.clone();
    let hi = bound;
    let total = sturm.variations(&lo) - sturm.variations(&hi);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi, total)];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((lo, hi, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(refine_single(&sf, &sturm, lo, hi, &width));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        let left = sturm.variations(&lo) - sturm.variations(&mid);
        stack.push((mid.clone(), hi, count - left));
        stack.push((lo, mid, left));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

fn refine_single(
    sf: &UniPoly,
    sturm: &Sturm,
    mut lo: BigRational,
    mut hi: BigRational,
    width: &BigRational,
) -> RealRoot {
    let two = BigRational::from_integer(BigInt::from(2));
    let found = |x: BigRational| RealRoot {
        lo: x.clone(),
        hi: x.clone(),
        approx: ratio_to_f64(&x),
        exact: Some(x),
    };
    if sf.eval_real(&hi).is_zero() {
        return found(hi);
    }
    while &(&hi - &lo) >= width {
        let mid = (&lo + &hi) / &two;
        if sf.eval_real(&mid).is_zero() {
            return found(mid);
        }
        if sturm.variations(&lo) - sturm.variations(&mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let candidate = simplest_between(&lo, &hi);
    if candidate > lo && sf.eval_real(&candidate).is_zero() {
        return found(candidate);
    }
    let approx = ratio_to_f64(&((&lo + &hi) / &two));
    RealRoot {
        lo,
        hi,
        exact: None,
        approx,
    }
}
